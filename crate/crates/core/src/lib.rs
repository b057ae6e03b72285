//! Workbench for finite metric Σ-algebras.
//!
//! Metric algebras are Σ-algebras whose carrier is an extended metric space;
//! quantitative algebras additionally have non-expansive operations. This
//! crate builds and checks the standard constructions on finite instances:
//! sup-metric products, induced-metric subalgebras, quotients with the
//! greatest compatible metric, factorization of quotient maps, satisfaction of
//! metric equations `X ⊢ s =ε t`, free algebras over a finite class, bounded
//! equational theories and bounded variety membership.
//!
//! All code is generic over the distance scalar ([`Scalar`]); the aliases at
//! the crate root fix it to exact rationals, which is what the file formats
//! and the CLI use.

pub mod algebra;
pub mod free;
pub mod io;
pub mod metric;
pub mod partition;
pub mod scalar;
pub mod semantics;
pub mod term;

pub use algebra::{Homomorphism, MetricAlgebra, OpTable};
pub use free::{ClassK, FreeAlgebra, Membership, Theory, TheoryEntry};
pub use metric::{DistMatrix, ExtDistance};
pub use partition::Partition;
pub use scalar::Scalar;
pub use semantics::{MEquation, Satisfaction, Valuation};
pub use term::{Signature, Term};

/// Exact distances: arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

pub type ExactDistance = ExtDistance<Rational>;
pub type ExactMatrix = DistMatrix<Rational>;
pub type ExactAlgebra = MetricAlgebra<Rational>;
pub type ExactHomomorphism = Homomorphism<Rational>;
pub type ExactEquation = MEquation<Rational>;
pub type ExactFreeAlgebra = FreeAlgebra<Rational>;

/// Floating-point variants, for quick experiments where rounding is acceptable.
pub type FloatAlgebra = MetricAlgebra<f64>;
pub type FloatEquation = MEquation<f64>;

/// Enumeration and size bounds shared by the constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest product carrier.
    pub product_carrier: usize,
    /// Largest number of table plus distance cells materialized for one algebra.
    pub table_cells: usize,
    /// Largest carrier for congruence enumeration (Bell-number growth).
    pub congruence_carrier: usize,
    /// Largest number of valuations enumerated by one satisfaction check.
    pub valuations: usize,
    /// Largest number of `(member, valuation)` coordinates of a free algebra.
    pub free_coordinates: usize,
    /// Largest free-algebra carrier.
    pub free_carrier: usize,
    /// Largest number of terms enumerated for a theory.
    pub terms: usize,
    /// Largest number of free variables.
    pub variables: usize,
    /// Largest number of theory entries.
    pub theory_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            product_carrier: 1_000_000,
            table_cells: 50_000_000,
            congruence_carrier: 6,
            valuations: 10_000_000,
            free_coordinates: 100_000,
            free_carrier: 100_000,
            terms: 200_000,
            variables: 3,
            theory_entries: 2_000_000,
        }
    }
}
