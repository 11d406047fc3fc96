//! Suite drivers behind the `doctrina` binary.

use doctrina::doctrine::{check_doctrine, powerset_doctrine, tropical_doctrine, Doctrine, DoctrineBounds, Mutant, Mutation};
use doctrina::doubling::{verify_pdot, PDot, PDotBounds};
use doctrina::extraction::roundtrip;
use doctrina::finset::{check_adequate_triple, AdequateTriple};
use doctrina::spancat::{check_spans, SpanBounds};
use doctrina::uwd::{brute_force, doctrine_for, encode_data, evaluate, tensor_systems, Semantics, System, UwdFile};
use doctrina::Report;
use std::fmt;

/// Largest size the suites run at without `--force`.
pub const SIZE_GUARD: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FiberChoice {
    Powerset,
    Tropical,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MutationChoice {
    BrokenTensor,
    SwappedAdjoint,
    NonFunctorialSubst,
}

impl From<MutationChoice> for Mutation {
    fn from(m: MutationChoice) -> Self {
        match m {
            MutationChoice::BrokenTensor => Mutation::BrokenTensor,
            MutationChoice::SwappedAdjoint => Mutation::SwappedAdjoint,
            MutationChoice::NonFunctorialSubst => Mutation::NonFunctorialSubst,
        }
    }
}

/// A configuration problem; reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Everything a suite run depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub triple: AdequateTriple,
    pub fiber: FiberChoice,
    pub k: u8,
    pub max_size: usize,
    pub mutation: Option<Mutation>,
}

impl SuiteConfig {
    pub fn new(
        triple: &str,
        fiber: FiberChoice,
        k: u8,
        max_size: usize,
        force: bool,
        mutation: Option<MutationChoice>,
    ) -> Result<Self, ConfigError> {
        if max_size == 0 {
            return Err(ConfigError("--max-size must be at least 1".into()));
        }
        if max_size > SIZE_GUARD && !force {
            return Err(ConfigError(format!(
                "--max-size {max_size} enumerates on the order of {max_size}^({max_size}·{max_size}) maps; pass --force to run it anyway"
            )));
        }
        if !(1..=253).contains(&k) {
            return Err(ConfigError("--k must lie in 1..=253".into()));
        }
        Ok(SuiteConfig { triple: resolve_triple(triple, max_size)?, fiber, k, max_size, mutation: mutation.map(Into::into) })
    }

    fn doctrines(&self) -> Vec<(&'static str, Box<dyn Doctrine>)> {
        let mut out: Vec<(&'static str, Box<dyn Doctrine>)> = Vec::new();
        if matches!(self.fiber, FiberChoice::Powerset | FiberChoice::Both) {
            out.push(("powerset", Box::new(powerset_doctrine(self.triple.clone()))));
        }
        if matches!(self.fiber, FiberChoice::Tropical | FiberChoice::Both) {
            out.push(("tropical", Box::new(tropical_doctrine(self.triple.clone(), self.k))));
        }
        match self.mutation {
            Some(m) => out.into_iter().map(|(n, d)| (n, Box::new(Mutant::new(d, m)) as Box<dyn Doctrine>)).collect(),
            None => out,
        }
    }
}

/// `all`, `surj`, `inj-right`, `inj-left`, or a path to a JSON triple.
pub fn resolve_triple(name: &str, max_size: usize) -> Result<AdequateTriple, ConfigError> {
    Ok(match name {
        "all" => AdequateTriple::all(max_size),
        "surj" => AdequateTriple::surjective(max_size),
        "inj-right" => AdequateTriple::injective_right(max_size),
        "inj-left" => AdequateTriple::injective_left(max_size),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("--triple {path:?} is neither a known triple nor a readable file: {e}")))?;
            let t: AdequateTriple =
                serde_json::from_str(&text).map_err(|e| ConfigError(format!("cannot parse triple {path:?}: {e}")))?;
            t.with_universe(t.universe.min(max_size))
        }
    })
}

fn prefixed(prefix: &str, r: Report) -> Report {
    let mut out = Report::new();
    for mut c in r.clauses {
        c.clause = format!("{prefix}.{}", c.clause);
        out.push(c);
    }
    out
}

/// Adequacy, span laws, and per fiber the doctrine and doubling suites.
pub fn run_verify(cfg: &SuiteConfig) -> Report {
    let mut r = check_adequate_triple(&cfg.triple);
    r.extend(check_spans(&cfg.triple, SpanBounds::uniform(cfg.max_size)));
    for (name, d) in cfg.doctrines() {
        r.extend(prefixed(name, check_doctrine(&d, DoctrineBounds::uniform(cfg.max_size))));
        r.extend(prefixed(name, verify_pdot(&PDot::new(&d), PDotBounds::uniform(cfg.max_size))));
    }
    r
}

/// The extraction round trip per fiber.
pub fn run_roundtrip(cfg: &SuiteConfig) -> Report {
    let mut r = Report::new();
    for (name, d) in cfg.doctrines() {
        r.extend(prefixed(name, roundtrip(d, cfg.max_size)));
    }
    r
}

/// Result of evaluating a diagram from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOutcome {
    /// One JSON record describing the result.
    pub record: serde_json::Value,
    /// `Some(agrees)` when the brute-force comparison was requested.
    pub check: Option<bool>,
    pub warnings: Vec<String>,
}

/// Parses `text`, tensors the named systems in order and evaluates the
/// named diagram on them.
pub fn run_eval(text: &str, diagram: &str, systems: &[String], k: u8, check: bool) -> Result<EvalOutcome, ConfigError> {
    let err = |e: doctrina::Error| ConfigError(e.to_string());
    let file = UwdFile::parse(text).map_err(err)?;
    let k = file.k.unwrap_or(k);
    if !(1..=253).contains(&k) {
        return Err(ConfigError("k must lie in 1..=253".into()));
    }
    let tau = file.types();
    let w = file.diagram(diagram).map_err(err)?;
    if systems.is_empty() {
        return Err(ConfigError("name at least one --system".into()));
    }
    let mut semantics = None;
    let mut combined: Option<System> = None;
    for name in systems {
        let (sem, sys) = file.system(name, k).map_err(err)?;
        if semantics.is_some_and(|s| s != sem) {
            return Err(ConfigError("systems mix relational and tropical semantics".into()));
        }
        semantics = Some(sem);
        let d = doctrine_for(sem, k);
        combined = Some(match combined {
            None => sys,
            Some(acc) => tensor_systems(&*d, &acc, &sys),
        });
    }
    let (sem, sys) = (semantics.expect("at least one system"), combined.expect("at least one system"));
    let d = doctrine_for(sem, k);
    let out = evaluate(&w, &sys, &*d, &tau).map_err(err)?;
    let check = if check { Some(brute_force(&w, &sys, sem, k, &tau).map_err(err)? == out.predicate) } else { None };
    let mut record = serde_json::json!({
        "diagram": diagram,
        "semantics": sem,
        "context": out.context.labels(),
        "data": encode_data(sem, k, &out.predicate),
    });
    if sem == Semantics::Trop {
        record["k"] = k.into();
    }
    if let Some(ok) = check {
        record["check"] = if ok { "agree" } else { "mismatch" }.into();
    }
    Ok(EvalOutcome { record, check, warnings: w.warnings(&tau) })
}
