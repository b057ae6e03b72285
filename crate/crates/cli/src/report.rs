//! Machine-readable twins of the text reports. Every distance is an exact
//! string (`"1/2"`, `"inf"`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
pub enum Report {
    Validate {
        valid: bool,
        size: usize,
        defects: Vec<String>,
    },
    Quantitative {
        quantitative: bool,
        witness: Option<ExpansionWitness>,
    },
    Sat {
        holds: bool,
        equations: Vec<EquationResult>,
    },
    Product {
        factors: Vec<usize>,
        size: usize,
        algebra: Value,
    },
    Subalg {
        generators: Vec<String>,
        elements: Vec<String>,
        algebra: Value,
    },
    Congruences {
        size: usize,
        congruences: Vec<CongruenceEntry>,
    },
    Quotient {
        blocks: String,
        congruence: bool,
        failure: Option<String>,
        q_quotient: Option<bool>,
        algebra: Option<Value>,
    },
    Factor {
        metric: bool,
        factors: bool,
        map: Option<Vec<String>>,
        failure: Option<String>,
    },
    Scale {
        factor: String,
        algebra: Value,
    },
    Free {
        vars: Vec<String>,
        size: usize,
        coordinates: usize,
        quantitative_class: bool,
        reps: Vec<String>,
        dist: Vec<Vec<String>>,
        algebra: Value,
    },
    Theory {
        vars: Vec<String>,
        depth: usize,
        entries: Vec<TheoryLine>,
    },
    Member {
        refuted: bool,
        depth: usize,
        entry: Option<String>,
        valuation: Option<BTreeMap<String, String>>,
        distance: Option<String>,
    },
    Hsp {
        models: Vec<usize>,
        non_models: Vec<usize>,
        products: usize,
        subalgebras: usize,
        quotients: usize,
        non_quantitative_quotients: usize,
        violations: Vec<String>,
    },
    DemoNonvariety {
        scale: String,
        min_distance: String,
        quotient_min_distance: String,
        holds_in_algebra: bool,
        holds_in_quotient: bool,
        quotient_quantitative: bool,
        surjective_m_homomorphism: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionWitness {
    pub symbol: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub input_distance: String,
    pub output_distance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationResult {
    pub equation: String,
    pub holds: bool,
    pub valuation: Option<BTreeMap<String, String>>,
    pub distance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceEntry {
    pub blocks: String,
    pub quotient_quantitative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryLine {
    pub lhs: String,
    pub rhs: String,
    pub eps: String,
    pub equation: bool,
}
