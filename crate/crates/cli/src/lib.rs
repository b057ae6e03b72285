//! `metalg` command line: file formats in, reports out.
//!
//! Exit codes: 0 success or property holds, 1 property fails (a witness is
//! printed), 2 input error or bound overrun.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use metalg::algebra::{
    enumerate_congruences, factor_homomorphism, factor_m_homomorphism, generated_subalgebra,
    m_product, m_quotient, scale_metric, Defect, FactorError,
};
use metalg::free::{
    equational_theory, free_algebra, hsp_closure_suite, membership_bounded, non_variety_demo,
};
use metalg::io::{algebra_to_value, parse_algebra_unchecked, parse_homomorphism, render_algebra};
use metalg::metric::Violation;
use metalg::semantics::{parse_equations, satisfies};
use metalg::{
    ClassK, ExactAlgebra, ExactDistance, ExactHomomorphism, Limits, Membership, Partition,
    Rational, Satisfaction, Scalar, Valuation,
};
use thiserror::Error;

pub use report::{CongruenceEntry, EquationResult, ExpansionWitness, Report, TheoryLine};

#[derive(Parser, Debug)]
#[command(name = "metalg", version, about = "Finite metric algebra workbench")]
struct Cli {
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Add a decimal rendering with this many digits next to each fraction.
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<usize>,
    /// Rejected: every algorithm is deterministic.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<String>,
    /// Override an enumeration bound, e.g. `--limit free_carrier=500`.
    #[arg(long = "limit", global = true, value_name = "NAME=VALUE")]
    limits: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the metric axioms and table shapes.
    Validate { alg: String },
    /// Check that every operation is non-expansive.
    Quantitative { alg: String },
    /// Check an equation file against an algebra.
    Sat { alg: String, eqs: String },
    /// Sup-metric product of the given algebras.
    Product {
        #[arg(required = true)]
        algs: Vec<String>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Subalgebra generated by named elements.
    Subalg {
        alg: String,
        #[arg(long, value_delimiter = ',', default_value = "")]
        gens: Vec<String>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// List all congruences.
    Congruences { alg: String },
    /// Canonical quotient by a congruence, given as `a b|c d`.
    Quotient {
        alg: String,
        #[arg(long)]
        blocks: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Factor q through p; both are homomorphism files.
    Factor {
        p: String,
        q: String,
        /// Require non-expansive maps and factor as M-homomorphisms.
        #[arg(long)]
        metric: bool,
    },
    /// Multiply every distance by a factor in (0, 1].
    Scale {
        alg: String,
        #[arg(long)]
        by: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Free algebra of the class over the variables.
    Free {
        #[arg(required = true)]
        algs: Vec<String>,
        #[arg(long)]
        vars: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Bounded equational theory of the class.
    Theory {
        #[arg(required = true)]
        algs: Vec<String>,
        #[arg(long)]
        vars: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Bounded check that the candidate satisfies the theory of the class.
    Member {
        #[arg(required = true)]
        algs: Vec<String>,
        #[arg(long)]
        candidate: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value = "x,y")]
        vars: String,
    },
    /// Closure of the models in a pool under products, subalgebras and quotients.
    Hsp {
        eqs: String,
        #[arg(required = true)]
        algs: Vec<String>,
    },
    /// A distance lower bound destroyed by an M-quotient.
    DemoNonvariety {
        #[arg(long, default_value = "1/2")]
        scale: String,
    },
}

/// Anything that maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Bound(String),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

/// A finished command: text for stdout, the JSON twin, and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub report: Report,
    pub code: i32,
}

fn input_err(path: &str, e: impl ToString) -> CliError {
    CliError::Input { path: path.to_string(), message: e.to_string() }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| input_err("<stdin>", e))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| input_err(path, e))
    }
}

fn load_algebra(path: &str) -> Result<Arc<ExactAlgebra>, CliError> {
    let text = read_input(path)?;
    let a: ExactAlgebra = parse_algebra_unchecked(&text).map_err(|e| input_err(path, e))?;
    let defects = a.validate();
    if let Some(d) = defects.first() {
        return Err(input_err(path, format!("invalid algebra: {}", describe_defect(&a, d))));
    }
    Ok(Arc::new(a))
}

fn load_class(paths: &[String]) -> Result<ClassK<Rational>, CliError> {
    let members = paths.iter().map(|p| load_algebra(p)).collect::<Result<Vec<_>, _>>()?;
    ClassK::new(members).map_err(|e| CliError::Usage(format!("class: {e}")))
}

fn parse_vars(text: &str) -> BTreeSet<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn parse_limits(items: &[String]) -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--limit expects NAME=VALUE, got `{item}`")))?;
        let value: usize = value.trim().parse().map_err(|_| {
            CliError::Usage(format!("--limit {name}: `{value}` is not a natural number"))
        })?;
        let slot = match name.trim() {
            "product_carrier" => &mut limits.product_carrier,
            "table_cells" => &mut limits.table_cells,
            "congruence_carrier" => &mut limits.congruence_carrier,
            "valuations" => &mut limits.valuations,
            "free_coordinates" => &mut limits.free_coordinates,
            "free_carrier" => &mut limits.free_carrier,
            "terms" => &mut limits.terms,
            "variables" => &mut limits.variables,
            "theory_entries" => &mut limits.theory_entries,
            other => return Err(CliError::Usage(format!("unknown limit `{other}`"))),
        };
        *slot = value;
    }
    Ok(limits)
}

fn write_out(path: &Option<PathBuf>, a: &ExactAlgebra) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, render_algebra(a)).map_err(|e| CliError::Output {
            path: p.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(())
}

fn describe_defect(a: &ExactAlgebra, d: &Defect) -> String {
    let n = |i: usize| a.names().get(i).map_or_else(|| i.to_string(), |s| format!("`{s}`"));
    let dist = |i: usize, j: usize| a.d(i, j).to_string();
    match d {
        Defect::Metric(Violation::Triangle(i, j, k)) => format!(
            "triangle inequality fails on ({0}, {1}, {2}): d({0}, {1}) = {3} > d({0}, {2}) + d({2}, {1}) = {4} + {5}",
            n(*i),
            n(*j),
            n(*k),
            dist(*i, *j),
            dist(*i, *k),
            dist(*k, *j)
        ),
        Defect::Metric(Violation::NonZeroDiagonal(i)) => {
            format!("self-distance of {} is {}, not 0", n(*i), dist(*i, *i))
        }
        Defect::Metric(Violation::Indiscernible(i, j)) => {
            format!("distinct elements {} and {} are at distance 0", n(*i), n(*j))
        }
        Defect::Metric(Violation::Asymmetric(i, j)) => format!(
            "asymmetric distance: d({}, {}) = {} but d({}, {}) = {}",
            n(*i),
            n(*j),
            dist(*i, *j),
            n(*j),
            n(*i),
            dist(*j, *i)
        ),
        other => other.to_string(),
    }
}

fn names_of(a: &ExactAlgebra, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| a.name(x).to_string()).collect()
}

fn valuation_names(a: &ExactAlgebra, v: &Valuation) -> BTreeMap<String, String> {
    v.iter().map(|(k, x)| (k.clone(), a.name(x).to_string())).collect()
}

fn render_partition(a: &ExactAlgebra, p: &Partition) -> String {
    p.blocks().iter().map(|b| names_of(a, b).join(" ")).collect::<Vec<_>>().join("|")
}

/// Blocks are `|`-separated, elements whitespace-separated; an element is a
/// carrier name or, failing that, an index.
fn parse_partition(a: &ExactAlgebra, text: &str) -> Result<Partition, String> {
    let mut blocks = Vec::new();
    for block in text.split('|') {
        let mut items = Vec::new();
        for token in block.split_whitespace() {
            let x = match a.index_of_name(token) {
                Some(x) => x,
                None => {
                    token.parse::<usize>().map_err(|_| format!("`{token}` is not an element"))?
                }
            };
            items.push(x);
        }
        blocks.push(items);
    }
    Partition::from_blocks(a.len(), blocks).map_err(|e| e.to_string())
}

fn parse_scalar(flag: &str, text: &str) -> Result<Rational, CliError> {
    Rational::from_literal(text.trim()).ok_or_else(|| {
        CliError::Usage(format!("{flag}: `{text}` is not a nonnegative rational literal"))
    })
}

fn bound_or_input(path: &str, e: impl ToString, is_bound: bool) -> CliError {
    if is_bound {
        CliError::Bound(e.to_string())
    } else {
        input_err(path, e)
    }
}

fn render_dist(d: &ExactDistance, decimal: Option<usize>) -> String {
    d.render(decimal)
}

/// Parses `argv` (including the program name) and runs the command.
pub fn execute<I, S>(argv: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    execute_cli(&cli)
}

fn execute_cli(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(seed) = &cli.seed {
        return Err(CliError::Usage(format!(
            "--seed {seed}: nothing here is random; every command is deterministic, so a seed would be silently ignored"
        )));
    }
    let limits = parse_limits(&cli.limits)?;
    let dec = cli.decimal;
    let outcome = match &cli.command {
        Command::Validate { alg } => {
            let text = read_input(alg)?;
            let a: ExactAlgebra = parse_algebra_unchecked(&text).map_err(|e| input_err(alg, e))?;
            let defects: Vec<String> =
                a.validate().iter().map(|d| describe_defect(&a, d)).collect();
            let valid = defects.is_empty();
            let mut out = if valid {
                format!("valid: {} elements, signature {}\n", a.len(), a.signature())
            } else {
                "invalid:\n".to_string()
            };
            for d in &defects {
                out += &format!("  {d}\n");
            }
            Outcome {
                text: out,
                report: Report::Validate { valid, size: a.len(), defects },
                code: if valid { 0 } else { 1 },
            }
        }
        Command::Quantitative { alg } => {
            let a = load_algebra(alg)?;
            match a.is_quantitative() {
                Ok(()) => Outcome {
                    text: "quantitative: every operation is non-expansive\n".into(),
                    report: Report::Quantitative { quantitative: true, witness: None },
                    code: 0,
                },
                Err(w) => {
                    let witness = ExpansionWitness {
                        symbol: w.symbol.clone(),
                        left: names_of(&a, &w.left),
                        right: names_of(&a, &w.right),
                        input_distance: w.input.to_string(),
                        output_distance: w.output.to_string(),
                    };
                    Outcome {
                        text: format!(
                            "not quantitative: {}({}) and {}({}) are at distance {} but their arguments only {}\n",
                            w.symbol,
                            witness.left.join(","),
                            w.symbol,
                            witness.right.join(","),
                            render_dist(&w.output, dec),
                            render_dist(&w.input, dec)
                        ),
                        report: Report::Quantitative { quantitative: false, witness: Some(witness) },
                        code: 1,
                    }
                }
            }
        }
        Command::Sat { alg, eqs } => {
            let a = load_algebra(alg)?;
            let eq_text = read_input(eqs)?;
            let equations = parse_equations::<Rational>(a.signature(), &eq_text)
                .map_err(|e| input_err(eqs, e))?;
            let mut results = Vec::new();
            let mut out = String::new();
            for e in &equations {
                let s = satisfies(&a, e, limits.valuations)
                    .map_err(|e| CliError::Bound(e.to_string()))?;
                match s {
                    Satisfaction::Holds => {
                        out += &format!("holds: {e}\n");
                        results.push(EquationResult {
                            equation: e.to_string(),
                            holds: true,
                            valuation: None,
                            distance: None,
                        });
                    }
                    Satisfaction::Fails { valuation, distance } => {
                        out += &format!(
                            "fails: {e}\n  at {} (distance {})\n",
                            valuation.display_with(&a),
                            render_dist(&distance, dec)
                        );
                        results.push(EquationResult {
                            equation: e.to_string(),
                            holds: false,
                            valuation: Some(valuation_names(&a, &valuation)),
                            distance: Some(distance.to_string()),
                        });
                    }
                }
            }
            let holds = results.iter().all(|r| r.holds);
            Outcome {
                text: out,
                report: Report::Sat { holds, equations: results },
                code: if holds { 0 } else { 1 },
            }
        }
        Command::Product { algs, out } => {
            let factors = algs.iter().map(|p| load_algebra(p)).collect::<Result<Vec<_>, _>>()?;
            let sig = factors[0].signature().clone();
            let p = m_product(&sig, &factors, limits.product_carrier, limits.table_cells).map_err(
                |e| {
                    bound_or_input(
                        &algs.join(" "),
                        &e,
                        matches!(e, metalg::algebra::AlgebraError::TooLarge { .. }),
                    )
                },
            )?;
            write_out(out, &p.algebra)?;
            let sizes: Vec<usize> = factors.iter().map(|f| f.len()).collect();
            Outcome {
                text: format!(
                    "product of sizes {}: {} elements\n",
                    sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(" x "),
                    p.algebra.len()
                ),
                report: Report::Product {
                    factors: sizes,
                    size: p.algebra.len(),
                    algebra: algebra_to_value(&p.algebra),
                },
                code: 0,
            }
        }
        Command::Subalg { alg, gens, out } => {
            let a = load_algebra(alg)?;
            let gens: Vec<String> = gens.iter().filter(|g| !g.is_empty()).cloned().collect();
            let indices = gens
                .iter()
                .map(|g| {
                    a.index_of_name(g).ok_or_else(|| {
                        CliError::Usage(format!("--gens: `{g}` is not an element of {alg}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let s =
                generated_subalgebra(&a, &indices).map_err(|e| CliError::Usage(e.to_string()))?;
            write_out(out, &s.algebra)?;
            let elements = s.algebra.names().to_vec();
            Outcome {
                text: format!(
                    "generated subalgebra: {} elements: {}\n",
                    elements.len(),
                    elements.join(" ")
                ),
                report: Report::Subalg {
                    generators: gens,
                    elements,
                    algebra: algebra_to_value(&s.algebra),
                },
                code: 0,
            }
        }
        Command::Congruences { alg } => {
            let a = load_algebra(alg)?;
            let parts = enumerate_congruences(&a, limits.congruence_carrier)
                .map_err(|e| CliError::Bound(e.to_string()))?;
            let mut out = format!("{} congruences\n", parts.len());
            let mut entries = Vec::new();
            for p in &parts {
                let q = m_quotient(&a, p).expect("enumerated partitions are congruences");
                let blocks = render_partition(&a, p);
                let quantitative = q.algebra.is_quantitative().is_ok();
                out += &format!(
                    "  {blocks}{}\n",
                    if quantitative { "" } else { "  (quotient not quantitative)" }
                );
                entries.push(CongruenceEntry { blocks, quotient_quantitative: quantitative });
            }
            Outcome {
                text: out,
                report: Report::Congruences { size: a.len(), congruences: entries },
                code: 0,
            }
        }
        Command::Quotient { alg, blocks, out } => {
            let a = load_algebra(alg)?;
            let p = parse_partition(&a, blocks)
                .map_err(|e| CliError::Usage(format!("--blocks: {e}")))?;
            match m_quotient(&a, &p) {
                Ok(q) => {
                    write_out(out, &q.algebra)?;
                    let mut text = format!(
                        "quotient by {}: {} elements\n",
                        render_partition(&a, &p),
                        q.algebra.len()
                    );
                    for i in 0..q.algebra.len() {
                        let row: Vec<String> = (0..q.algebra.len())
                            .map(|j| render_dist(q.algebra.d(i, j), dec))
                            .collect();
                        text += &format!("  {}: {}\n", q.algebra.name(i), row.join(" "));
                    }
                    if let Some(flag) = q.q_quotient {
                        text += &format!("quantitative quotient: {flag}\n");
                    }
                    Outcome {
                        text,
                        report: Report::Quotient {
                            blocks: render_partition(&a, &p),
                            congruence: true,
                            failure: None,
                            q_quotient: q.q_quotient,
                            algebra: Some(algebra_to_value(&q.algebra)),
                        },
                        code: 0,
                    }
                }
                Err(metalg::algebra::AlgebraError::NotCongruence(f)) => {
                    let message = format!(
                        "{}({}) and {}({}) land in different blocks",
                        f.symbol,
                        names_of(&a, &f.left).join(","),
                        f.symbol,
                        names_of(&a, &f.right).join(",")
                    );
                    Outcome {
                        text: format!("not a congruence: {message}\n"),
                        report: Report::Quotient {
                            blocks: render_partition(&a, &p),
                            congruence: false,
                            failure: Some(message),
                            q_quotient: None,
                            algebra: None,
                        },
                        code: 1,
                    }
                }
                Err(e) => return Err(CliError::Usage(e.to_string())),
            }
        }
        Command::Factor { p, q, metric } => {
            let load = |path: &str| -> Result<ExactHomomorphism, CliError> {
                parse_homomorphism(&read_input(path)?).map_err(|e| input_err(path, e))
            };
            let (hp, hq) = (load(p)?, load(q)?);
            let result = if *metric {
                factor_m_homomorphism(&hp, &hq)
            } else {
                factor_homomorphism(&hp, &hq)
            };
            let src = hp.source();
            match result {
                Ok(h) => {
                    let map: Vec<String> =
                        h.map().iter().map(|&y| h.target().name(y).to_string()).collect();
                    let mut text = "factorization exists: h with h . p = q\n".to_string();
                    for (u, y) in map.iter().enumerate() {
                        text += &format!("  h({}) = {}\n", h.source().name(u), y);
                    }
                    Outcome {
                        text,
                        report: Report::Factor {
                            metric: *metric,
                            factors: true,
                            map: Some(map),
                            failure: None,
                        },
                        code: 0,
                    }
                }
                Err(FactorError::Kernel { a, b }) => {
                    let message =
                        format!("p({0}) = p({1}) but q({0}) != q({1})", src.name(a), src.name(b));
                    Outcome {
                        text: format!("no factorization: {message}\n"),
                        report: Report::Factor {
                            metric: *metric,
                            factors: false,
                            map: None,
                            failure: Some(message),
                        },
                        code: 1,
                    }
                }
                Err(FactorError::Metric { a, b, p_dist, q_dist }) => {
                    let message = format!(
                        "d(q {0}, q {1}) = {2} > d(p {0}, p {1}) = {3}",
                        src.name(a),
                        src.name(b),
                        q_dist,
                        p_dist
                    );
                    Outcome {
                        text: format!("no non-expansive factorization: {message}\n"),
                        report: Report::Factor {
                            metric: *metric,
                            factors: false,
                            map: None,
                            failure: Some(message),
                        },
                        code: 1,
                    }
                }
                Err(e) => return Err(CliError::Usage(format!("factor: {e}"))),
            }
        }
        Command::Scale { alg, by, out } => {
            let a = load_algebra(alg)?;
            let c = parse_scalar("--by", by)?;
            let (scaled, _) = scale_metric(&a, &c).map_err(|e| CliError::Usage(e.to_string()))?;
            write_out(out, &scaled)?;
            Outcome {
                text: format!("scaled every distance by {c}; identity is a surjective M-homomorphism onto the result\n"),
                report: Report::Scale { factor: c.to_string(), algebra: algebra_to_value(&scaled) },
                code: 0,
            }
        }
        Command::Free { algs, vars, out } => {
            let class = load_class(algs)?;
            let f = free_algebra(&class, &parse_vars(vars), &limits)
                .map_err(|e| CliError::Bound(e.to_string()))?;
            write_out(out, f.algebra())?;
            let n = f.len();
            let reps: Vec<String> = f.reps().iter().map(|t| t.to_string()).collect();
            let dist: Vec<Vec<String>> =
                (0..n).map(|i| (0..n).map(|j| f.algebra().d(i, j).to_string()).collect()).collect();
            let mut text = format!(
                "free algebra over {{{}}}: {} elements from {} coordinates\n",
                f.vars().join(", "),
                n,
                f.coordinates().len()
            );
            text += "(computed in the class generated by products and subalgebras of the inputs)\n";
            for (i, r) in reps.iter().enumerate() {
                text += &format!("  [{i}] {r}\n");
            }
            if n <= 16 {
                text += "distances:\n";
                for i in 0..n {
                    let row: Vec<String> =
                        (0..n).map(|j| render_dist(f.algebra().d(i, j), dec)).collect();
                    text += &format!("  {}\n", row.join(" "));
                }
            }
            Outcome {
                text,
                report: Report::Free {
                    vars: f.vars().to_vec(),
                    size: n,
                    coordinates: f.coordinates().len(),
                    quantitative_class: class.is_quantitative(),
                    reps,
                    dist,
                    algebra: algebra_to_value(f.algebra()),
                },
                code: 0,
            }
        }
        Command::Theory { algs, vars, depth } => {
            let class = load_class(algs)?;
            let th = equational_theory(&class, &parse_vars(vars), *depth, &limits)
                .map_err(|e| CliError::Bound(e.to_string()))?;
            let entries = th
                .entries
                .iter()
                .map(|e| TheoryLine {
                    lhs: e.lhs.to_string(),
                    rhs: e.rhs.to_string(),
                    eps: e.eps.to_string(),
                    equation: e.is_equation(),
                })
                .collect();
            Outcome {
                text: th.render(dec),
                report: Report::Theory {
                    vars: th.vars.iter().cloned().collect(),
                    depth: *depth,
                    entries,
                },
                code: 0,
            }
        }
        Command::Member { algs, candidate, depth, vars } => {
            let class = load_class(algs)?;
            let b = load_algebra(candidate)?;
            if b.signature() != class.signature() {
                return Err(input_err(candidate, "signature differs from the class"));
            }
            let verdict = membership_bounded(&class, &b, &parse_vars(vars), *depth, &limits)
                .map_err(|e| CliError::Bound(e.to_string()))?;
            match verdict {
                Membership::Refuted { entry, valuation, distance } => Outcome {
                    text: format!(
                        "refuted: {}\n  holds in every class member, fails in the candidate at {} (distance {})\n",
                        entry.render(dec),
                        valuation.display_with(&b),
                        render_dist(&distance, dec)
                    ),
                    report: Report::Member {
                        refuted: true,
                        depth: *depth,
                        entry: Some(entry.render(None)),
                        valuation: Some(valuation_names(&b, &valuation)),
                        distance: Some(distance.to_string()),
                    },
                    code: 1,
                },
                Membership::ConsistentUpTo { depth } => Outcome {
                    text: format!(
                        "consistent up to depth {depth}: no equation of the class up to that depth fails (a bounded check, not a proof of membership)\n"
                    ),
                    report: Report::Member { refuted: false, depth, entry: None, valuation: None, distance: None },
                    code: 0,
                },
            }
        }
        Command::Hsp { eqs, algs } => {
            let pool = algs.iter().map(|p| load_algebra(p)).collect::<Result<Vec<_>, _>>()?;
            let theory = parse_equations::<Rational>(pool[0].signature(), &read_input(eqs)?)
                .map_err(|e| input_err(eqs, e))?;
            let r = hsp_closure_suite(&theory, &pool, &limits)
                .map_err(|e| CliError::Bound(e.to_string()))?;
            let violations: Vec<String> = r
                .violations
                .iter()
                .map(|v| {
                    format!(
                        "{} {}: equation {} fails at {}",
                        v.kind, v.description, v.equation, v.valuation
                    )
                })
                .collect();
            Outcome {
                text: r.render(dec),
                code: if r.is_closed() { 0 } else { 1 },
                report: Report::Hsp {
                    models: r.models,
                    non_models: r.non_models,
                    products: r.products,
                    subalgebras: r.subalgebras,
                    quotients: r.quotients,
                    non_quantitative_quotients: r.non_quantitative_quotients,
                    violations,
                },
            }
        }
        Command::DemoNonvariety { scale } => {
            let c = parse_scalar("--scale", scale)?;
            let d = non_variety_demo(&c).map_err(|e| CliError::Usage(e.to_string()))?;
            Outcome {
                text: d.render(dec),
                report: Report::DemoNonvariety {
                    scale: c.to_string(),
                    min_distance: d.min_distance.to_string(),
                    quotient_min_distance: d.quotient_min_distance.to_string(),
                    holds_in_algebra: d.holds_in_algebra,
                    holds_in_quotient: d.holds_in_quotient,
                    quotient_quantitative: d.quotient_quantitative,
                    surjective_m_homomorphism: d.map.is_surjective() && d.map.is_m_homomorphism(),
                },
                code: 0,
            }
        }
    };
    if let Some(path) = &cli.json {
        write_json(path, &outcome.report)?;
    }
    Ok(outcome)
}

fn write_json(path: &Path, report: &Report) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    std::fs::write(path, text)
        .map_err(|e| CliError::Output { path: path.display().to_string(), message: e.to_string() })
}

/// Runs a command line, writing the report to `out` and errors to `err`.
/// Returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                0
            } else {
                let _ = write!(err, "{e}");
                2
            };
        }
    };
    match execute_cli(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
