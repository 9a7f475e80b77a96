//! Audit engine for the spectral bound catalog.
//!
//! Each catalog entry checks its hypotheses first; an unmet hypothesis gives a
//! not-applicable report, never a verdict. Entries that quantify over subsets or
//! subset pairs are evaluated per instance and report the worst one.

mod adjacency;
mod context;
mod curvature;
mod laplacian;
mod normalized;
mod structural;
mod subsets;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use context::AuditContext;
pub use subsets::{DEFAULT_SEED, EXHAUSTIVE_PAIR_MAX_N, EXHAUSTIVE_SUBSET_MAX_N, SAMPLED_PAIRS, SAMPLED_SUBSETS};

use crate::hypergraph::{Hypergraph, VertexSubset};

/// Non-strict inequalities hold when the margin is at least `-MARGIN_TOL`.
pub const MARGIN_TOL: f64 = 1e-7;
/// Strict inequalities hold when the margin exceeds `STRICT_TOL`.
pub const STRICT_TOL: f64 = 1e-9;
/// Slack applied before `floor`/`ceil` of computed bounds.
pub const ROUNDING_SLACK: f64 = 1e-9;

pub(crate) fn floor_slack(x: f64) -> f64 {
    (x + ROUNDING_SLACK).floor()
}

pub(crate) fn ceil_slack(x: f64) -> f64 {
    (x - ROUNDING_SLACK).ceil()
}

macro_rules! bound_ids {
    ($($variant:ident => $code:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum BoundId { $($variant),* }

        impl BoundId {
            pub const ALL: &'static [BoundId] = &[$(BoundId::$variant),*];

            pub fn code(self) -> &'static str {
                match self { $(BoundId::$variant => $code),* }
            }
        }

        impl FromStr for BoundId {
            type Err = BoundError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let up = s.trim().to_ascii_uppercase();
                match up.as_str() {
                    $($code => Ok(BoundId::$variant),)*
                    _ => Err(BoundError::UnknownBound(s.to_string())),
                }
            }
        }
    };
}

bound_ids! {
    Adj1 => "ADJ-1", Adj2 => "ADJ-2", Adj3 => "ADJ-3", Adj4 => "ADJ-4", Adj5 => "ADJ-5",
    Col1 => "COL-1", Col2 => "COL-2", Col3 => "COL-3",
    Lap1 => "LAP-1", Lap2 => "LAP-2", Lap3 => "LAP-3", Lap4 => "LAP-4", Lap5 => "LAP-5",
    Lap6 => "LAP-6", Lap7 => "LAP-7", Lap8 => "LAP-8", Lap9 => "LAP-9", Lap10 => "LAP-10",
    Lap11 => "LAP-11", Lap12 => "LAP-12", Lap13 => "LAP-13", Lap14 => "LAP-14",
    Nrm1 => "NRM-1", Nrm2 => "NRM-2", Nrm3 => "NRM-3", Nrm4 => "NRM-4",
    Nrm5 => "NRM-5", Nrm6 => "NRM-6", Nrm7 => "NRM-7", Nrm8 => "NRM-8",
    Str1 => "STR-1", Str2 => "STR-2", Str3 => "STR-3", Str4 => "STR-4",
    Crv1 => "CRV-1", Crv2 => "CRV-2", Crv3 => "CRV-3",
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for BoundId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for BoundId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("unknown bound id '{0}'")]
    UnknownBound(String),
    #[error("{bound} needs option '{option}'")]
    MissingOption { bound: BoundId, option: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// subject ≤ bound
    Le,
    /// subject < bound
    Lt,
    /// subject ≥ bound
    Ge,
    /// subject > bound
    Gt,
    /// subject = bound
    Eq,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        }
    }
}

/// Must-hold entries count toward failure; audit entries are reported only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    MustHold,
    Audit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not-applicable",
        })
    }
}

/// One inequality `subject <rel> bound`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Side {
    pub label: &'static str,
    pub relation: Relation,
    pub subject: f64,
    pub bound: f64,
}

impl Side {
    pub fn new(label: &'static str, subject: f64, relation: Relation, bound: f64) -> Self {
        Side { label, relation, subject, bound }
    }

    /// Signed slack; nonnegative when the inequality is satisfied.
    pub fn margin(&self) -> f64 {
        match self.relation {
            Relation::Le | Relation::Lt => self.bound - self.subject,
            Relation::Ge | Relation::Gt => self.subject - self.bound,
            Relation::Eq => -(self.subject - self.bound).abs(),
        }
    }

    pub fn holds(&self) -> bool {
        let m = self.margin();
        if self.relation.is_strict() {
            m > STRICT_TOL
        } else {
            m >= -MARGIN_TOL
        }
    }
}

/// Which instance of a quantified bound a report line refers to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Instance {
    Whole,
    Subset { s: Vec<usize> },
    Pair { v1: Vec<usize>, v2: Vec<usize> },
    Dimension {
        #[serde(with = "crate::report::real")]
        m: f64,
        k: f64,
    },
}

impl Instance {
    pub fn subset(s: &VertexSubset) -> Self {
        Instance::Subset { s: s.as_slice().to_vec() }
    }

    pub fn pair(a: &VertexSubset, b: &VertexSubset) -> Self {
        Instance::Pair { v1: a.as_slice().to_vec(), v2: b.as_slice().to_vec() }
    }

    /// Same instance with every vertex label shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        let shift = |v: &Vec<usize>| v.iter().map(|x| x + offset).collect();
        match self {
            Instance::Subset { s } => Instance::Subset { s: shift(s) },
            Instance::Pair { v1, v2 } => Instance::Pair { v1: shift(v1), v2: shift(v2) },
            other => other.clone(),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: &Vec<usize>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Instance::Whole => f.write_str("whole"),
            Instance::Subset { s } => write!(f, "S={{{}}}", set(s)),
            Instance::Pair { v1, v2 } => write!(f, "V1={{{}}} V2={{{}}}", set(v1), set(v2)),
            Instance::Dimension { m, k } => write!(f, "m={m} K={k}"),
        }
    }
}

/// Result of one catalog evaluation before it is packaged as a report.
#[derive(Debug, Clone, Default)]
pub(crate) struct Outcome {
    pub reasons: Vec<String>,
    pub instances: Vec<(Instance, Vec<Side>)>,
    pub details: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub note: Option<String>,
}

impl Outcome {
    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Outcome { reasons: vec![reason.into()], ..Default::default() }
    }

    pub fn single(sides: Vec<Side>) -> Self {
        Outcome { instances: vec![(Instance::Whole, sides)], ..Default::default() }
    }

    pub fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }
}

/// Collects unmet hypotheses; evaluation proceeds only when none are recorded.
#[derive(Default)]
pub(crate) struct Pre(Vec<String>);

impl Pre {
    pub fn require(&mut self, ok: bool, reason: &str) -> &mut Self {
        if !ok {
            self.0.push(reason.to_string());
        }
        self
    }

    pub fn failed(&mut self) -> Option<Outcome> {
        (!self.0.is_empty()).then(|| Outcome { reasons: std::mem::take(&mut self.0), ..Default::default() })
    }
}

/// Per-call knobs. Absent subset/pair options mean the default instance
/// family (exhaustive or seeded sampling) is used unless
/// `explicit_instances` is set, in which case they are required.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub subset: Option<VertexSubset>,
    pub pair: Option<(VertexSubset, VertexSubset)>,
    /// Extra `(m, K)` pairs for CRV-2.
    pub cd_pairs: Vec<(f64, f64)>,
    /// Second factor for STR-1 and second summand for STR-3.
    pub partner: Option<Hypergraph>,
    /// Explicit first part for STR-4.
    pub bipartition: Option<VertexSubset>,
    pub seed: u64,
    pub explicit_instances: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            subset: None,
            pair: None,
            cd_pairs: Vec::new(),
            partner: None,
            bipartition: None,
            seed: DEFAULT_SEED,
            explicit_instances: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    pub statement: String,
    pub mode: Mode,
    pub relation: Relation,
    pub preconditions_met: bool,
    pub reasons: Vec<String>,
    #[serde(with = "crate::report::real_opt")]
    pub subject: Option<f64>,
    #[serde(with = "crate::report::real_opt")]
    pub bound: Option<f64>,
    #[serde(with = "crate::report::real_opt")]
    pub margin: Option<f64>,
    pub verdict: Verdict,
    pub side: Option<String>,
    pub worst_instance: Option<Instance>,
    pub instances: usize,
    pub seed: Option<u64>,
    #[serde(with = "crate::report::real_map")]
    pub details: BTreeMap<String, f64>,
    pub note: Option<String>,
}

impl BoundReport {
    pub fn is_must_hold_violation(&self) -> bool {
        self.mode == Mode::MustHold && self.verdict == Verdict::Violated
    }
}

pub struct CatalogEntry {
    pub id: BoundId,
    pub statement: &'static str,
    pub relation: Relation,
    pub mode: Mode,
    pub note: Option<&'static str>,
}

pub fn catalog_entry(id: BoundId) -> CatalogEntry {
    use BoundId::*;
    use Relation::*;
    let (statement, relation) = match id {
        Adj1 => ("rho(A) <= max_{i~j} sqrt(d_i d_j)", Le),
        Adj2 => ("diam <= floor(1 + log((1-a^2)/a^2) / log(lambda_max/theta))", Le),
        Adj3 => ("k-regular: diam <= floor(1 + log(n-1) / log(k/theta))", Le),
        Adj4 => ("diam < number of distinct eigenvalues of A", Lt),
        Adj5 => ("m-uniform k-regular: lambda_min(A) >= k - theta - C(n-1,m-1)", Ge),
        Col1 => ("gamma <= 1 + (r-1) lambda_max(A)", Le),
        Col2 => ("gamma >= 1 - lambda_max(A)/lambda_min(A)", Ge),
        Col3 => ("|lambda_min(A)| >= 1/(r-1)", Ge),
        Lap1 => ("max |lambda(L)| <= 2 d_max", Le),
        Lap2 => ("lambda_2(L) <= kappa_W", Le),
        Lap3 => ("(r-1) lambda_n |S||V-S|/n >= |dS| >= (cr-1)/floor(r^2/4) lambda_2 |S||V-S|/n", Ge),
        Lap4 => ("h >= 2 lambda_2(L) (cr-1)/(r(r-1))", Ge),
        Lap5 => ("h < (r-1) sqrt((2 d_max - lambda_2) lambda_2)", Lt),
        Lap6 => ("diam >= 4/(n (r-1) lambda_2(L))", Ge),
        Lap7 => ("d(V1,V2) <= ceil(log sqrt((n-|V1|)(n-|V2|)/(|V1||V2|)) / log((l_n+l_2)/(l_n-l_2)))", Le),
        Lap8 => ("diam <= ceil(log(n-1) / log((l_n+l_2)/(l_n-l_2)))", Le),
        Lap9 => ("|dS|/|S| >= (n-|S|)(1-(1-l)^2)/((1-l)^2(n-|S|)+|S|), l = 2 l_2/(l_n+l_2)", Ge),
        Lap10 => ("lambda_2(L) <= min_e (sum_{i in e} d_i - |e|)/|e|", Le),
        Lap11 => ("lambda_n(L) >= min_e (sum_{i in e} d_i - |e|)/|e|", Ge),
        Lap12 => ("lambda_n(L) <= max_i (2d_i(m-1)-1+sqrt(4(m-1)^2 d_i m_i D^2-2d_i(m-1)+1))/(2(m-1))", Le),
        Lap13 => ("lambda_n(L) <= (2d_max(m-1)-1+sqrt(4(m-1)^2 d_max^2 |E|^2-2d_min(m-1)+1))/(2(m-1))", Le),
        Lap14 => ("lambda_n(L) <= 1/2 max_{i~j} {d_i+d_j+(sum_{N(i)-N(j)} d_ik+sum_{N(j)-N(i)} d_jk+sum_{N(i)&N(j)} |d_ik-d_jk|)/(m-1)}", Le),
        Nrm1 => ("lambda_2(Delta) <= 1 <= lambda_n(Delta)", Le),
        Nrm2 => ("spec(Delta) in [0,2) and mult(0) = number of components", Lt),
        Nrm3 => ("2 lambda_2(Delta)(cr-1)/(r(r-1)) <= h_vol < (r-1) sqrt((2-lambda_2)lambda_2)", Ge),
        Nrm4 => ("diam >= 4/(n (r-1) d_max lambda_2(Delta))", Ge),
        Nrm5 => ("d(V1,V2) <= ceil(log sqrt(vol(~V1)vol(~V2)/(vol V1 vol V2)) / log((l_n+l_2)/(l_n-l_2)))", Le),
        Nrm6 => ("diam <= ceil(log((n-1)d_max/d_min) / log((l_n+l_2)/(l_n-l_2))) on Delta", Le),
        Nrm7 => ("lambda_n(Delta) <= max_i (2(m-1)d_i-1+sqrt(1-4(m-1)d_i+4(m-1)^2 d_i D^2 m_i))/(2(m-1)d_i)", Le),
        Nrm8 => ("lambda_n(Delta) <= (2(m-1)d_max-1+sqrt(1-4(m-1)d_min+4(m-1)^2 d_max^2 |E|^2))/(2(m-1)d_min)", Le),
        Str1 => ("spec(A(G1 x G2)) = spec(A(G1)) + spec(A(G2)), same for L", Eq),
        Str2 => ("spec(L(complement)) = {0} u {phi_m(n) - lambda_k : k >= 2}", Eq),
        Str3 => ("spec(L(G1 + G2)) closed form", Eq),
        Str4 => ("spec(L(K^m_{n1,n2})) closed form", Eq),
        Crv1 => ("CD(2, 1/d* - 1) holds", Ge),
        Crv2 => ("CD(m,K), m>1, K>0 implies lambda_2(Delta) >= mK/(m-1)", Ge),
        Crv3 => ("kappa <= lambda_2(Delta) <= lambda_n(Delta) <= 2 - kappa", Ge),
    };
    let (mode, note) = match id {
        Lap4 => (
            Mode::Audit,
            Some("violated on K3_4: h = 2 < 8/3 = 2 lambda_2 (cr-1)/(r(r-1))"),
        ),
        Lap10 => (
            Mode::Audit,
            Some("violated on K3_4: lambda_2 = 4 > 2 = min_e (sum d_i - |e|)/|e|"),
        ),
        Lap7 | Nrm5 => (
            Mode::Audit,
            Some("violated on the bowtie: the two outer pairs of the two triples are at distance 2 but the log ratio is exactly 1"),
        ),
        Nrm3 => (
            Mode::Audit,
            Some("lower side violated on K3_4: h_vol = 2/3 < 8/9 = 2 lambda_2(Delta)(cr-1)/(r(r-1)); \
                  it also fails with lambda_2(L)"),
        ),
        _ => (Mode::MustHold, None),
    };
    CatalogEntry { id, statement, relation, mode, note }
}

/// Evaluates one catalog entry on `g`.
pub fn evaluate(g: &Hypergraph, id: BoundId, opts: &EvalOptions) -> Result<BoundReport, BoundError> {
    evaluate_in(&AuditContext::new(g), id, opts)
}

/// Evaluates one entry reusing cached quantities from `ctx`.
pub fn evaluate_in(ctx: &AuditContext<'_>, id: BoundId, opts: &EvalOptions) -> Result<BoundReport, BoundError> {
    check_options(id, opts)?;
    use BoundId::*;
    let outcome = match id {
        Adj1 | Adj2 | Adj3 | Adj4 | Adj5 | Col1 | Col2 | Col3 => adjacency::evaluate(ctx, id),
        Lap1 | Lap2 | Lap3 | Lap4 | Lap5 | Lap6 | Lap7 | Lap8 | Lap9 | Lap10 | Lap11 | Lap12 | Lap13
        | Lap14 => laplacian::evaluate(ctx, id, opts),
        Nrm1 | Nrm2 | Nrm3 | Nrm4 | Nrm5 | Nrm6 | Nrm7 | Nrm8 => normalized::evaluate(ctx, id, opts),
        Str1 | Str2 | Str3 | Str4 => structural::evaluate(ctx, id, opts),
        Crv1 | Crv2 | Crv3 => curvature::evaluate(ctx, id, opts),
    };
    Ok(package(id, outcome))
}

fn check_options(id: BoundId, opts: &EvalOptions) -> Result<(), BoundError> {
    if !opts.explicit_instances {
        return Ok(());
    }
    use BoundId::*;
    let missing = match id {
        Lap3 | Lap9 if opts.subset.is_none() => Some("subset"),
        Lap7 | Nrm5 if opts.pair.is_none() => Some("pair"),
        Crv2 if opts.cd_pairs.is_empty() => Some("cd-pairs"),
        Str1 | Str3 if opts.partner.is_none() => Some("partner"),
        Str4 if opts.bipartition.is_none() => Some("bipartition"),
        _ => None,
    };
    match missing {
        Some(option) => Err(BoundError::MissingOption { bound: id, option }),
        None => Ok(()),
    }
}

fn package(id: BoundId, outcome: Outcome) -> BoundReport {
    let entry = catalog_entry(id);
    let mut report = BoundReport {
        bound_id: id,
        statement: entry.statement.to_string(),
        mode: entry.mode,
        relation: entry.relation,
        preconditions_met: outcome.reasons.is_empty(),
        reasons: outcome.reasons,
        subject: None,
        bound: None,
        margin: None,
        verdict: Verdict::NotApplicable,
        side: None,
        worst_instance: None,
        instances: outcome.instances.len(),
        seed: outcome.seed,
        details: outcome.details,
        note: outcome.note.or(entry.note.map(str::to_string)),
    };
    if !report.preconditions_met || outcome.instances.is_empty() {
        if report.preconditions_met {
            report.preconditions_met = false;
            report.reasons.push("no instances to evaluate".into());
        }
        return report;
    }

    // Worst side: a failing side if any, else the smallest margin.
    let mut worst: Option<(&Instance, &Side, bool)> = None;
    let mut all_hold = true;
    for (label, sides) in &outcome.instances {
        for side in sides {
            let ok = side.holds();
            all_hold &= ok;
            let better = match worst {
                None => true,
                Some((_, w, wok)) => match (ok, wok) {
                    (false, true) => true,
                    (true, false) => false,
                    _ => side.margin().total_cmp(&w.margin()).is_lt(),
                },
            };
            if better {
                worst = Some((label, side, ok));
            }
        }
    }
    let (label, side, _) = worst.expect("at least one side");
    report.relation = side.relation;
    report.subject = Some(side.subject);
    report.bound = Some(side.bound);
    report.margin = Some(side.margin());
    report.side = Some(side.label.to_string());
    report.worst_instance = Some(label.clone());
    report.verdict = if all_hold { Verdict::Holds } else { Verdict::Violated };
    report
}

/// Every catalog entry in catalog order, evaluated in parallel.
pub fn audit_all(g: &Hypergraph) -> Vec<BoundReport> {
    audit_ids(g, BoundId::ALL, &EvalOptions::default()).expect("default options never miss")
}

pub fn audit_ids(g: &Hypergraph, ids: &[BoundId], opts: &EvalOptions) -> Result<Vec<BoundReport>, BoundError> {
    let ctx = AuditContext::new(g);
    ids.par_iter().map(|&id| evaluate_in(&ctx, id, opts)).collect()
}
