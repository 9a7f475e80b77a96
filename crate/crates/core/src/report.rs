//! Report envelope and its JSON, CSV and text renderings.
//!
//! JSON floats are written with 17 significant digits so every value parses
//! back to the same `f64`. Non-finite values that can occur in bound reports
//! are written as the strings `"inf"`, `"-inf"` and `"NaN"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::bounds::BoundReport;
use crate::curvature::{CdCertificate, OllivierResult};
use crate::hgfile::write_hg;
use crate::hypergraph::Hypergraph;
use crate::oracles::CheegerResult;
use crate::walks::{ConvergenceCertificate, WalkAnalysis};

pub const TOOL: &str = "hgspectra";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format '{s}' (expected json, csv or text)")),
        }
    }
}

/// `sha256:` followed by the hex digest of the canonical `.hg` text.
pub fn input_digest(g: &Hypergraph) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(write_hg(g).as_bytes())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub input_digest: Option<String>,
    /// Seeds, tolerances and other knobs that determine the payload.
    pub settings: BTreeMap<String, String>,
    pub payload: Payload,
}

impl Report {
    pub fn new(command: Vec<String>, input_digest: Option<String>, payload: Payload) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command,
            input_digest,
            settings: BTreeMap::new(),
            payload,
        }
    }

    pub fn setting(mut self, key: &str, value: impl ToString) -> Self {
        self.settings.insert(key.to_string(), value.to_string());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => to_csv(self),
            Format::Text => to_text(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "kebab-case")]
pub enum Payload {
    Generated(GeneratedRecord),
    Spectrum(SpectrumRecord),
    Bounds(Vec<BoundReport>),
    Cheeger(CheegerResult),
    Walk(WalkRecord),
    Curvature(CurvatureRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedRecord {
    pub family: String,
    pub n: usize,
    pub edges: usize,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub matrix: String,
    pub eigenvalues: Vec<f64>,
    /// `(value, multiplicity)` after clustering.
    pub clusters: Vec<(f64, usize)>,
    pub max_residual: f64,
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkRecord {
    pub analysis: Option<WalkAnalysis>,
    pub start: Option<usize>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub frequencies: Option<Vec<f64>>,
    pub trajectory: Option<Vec<usize>>,
    pub certificate: Option<ConvergenceCertificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRecord {
    pub pairs: Vec<OllivierResult>,
    pub scalar: Option<Vec<f64>>,
    pub cd: Option<CdCertificate>,
    pub best_k: Option<f64>,
    pub d_star: Option<f64>,
    pub audit: Vec<BoundReport>,
}

/// A float that may be non-finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            s.serialize_f64(x)
        } else if x.is_nan() {
            s.serialize_str("NaN")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(Real(x)),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(Real(f64::INFINITY)),
                "-inf" => Ok(Real(f64::NEG_INFINITY)),
                "NaN" => Ok(Real(f64::NAN)),
                _ => Err(serde::de::Error::custom(format!("expected a number, got '{s}'"))),
            },
        }
    }
}

pub mod real {
    use super::Real;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        Real(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Real::deserialize(d)?.0)
    }
}

pub mod real_opt {
    use super::Real;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        x.map(Real).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Ok(Option::<Real>::deserialize(d)?.map(|r| r.0))
    }
}

pub mod real_map {
    use std::collections::BTreeMap;

    use super::Real;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k, Real(*v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        Ok(BTreeMap::<String, Real>::deserialize(d)?.into_iter().map(|(k, v)| (k, v.0)).collect())
    }
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Float17(PrettyFormatter<'static>);

impl Formatter for Float17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", fmt17(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Float17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

fn to_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let result: Result<(), csv::Error> = (|| {
        match &report.payload {
            Payload::Spectrum(s) => {
                w.write_record(["index", "eigenvalue"])?;
                for (k, x) in s.eigenvalues.iter().enumerate() {
                    w.write_record([(k + 1).to_string(), fmt17(*x)])?;
                }
            }
            Payload::Bounds(list) => write_bound_rows(&mut w, list)?,
            Payload::Curvature(c) => {
                if c.pairs.is_empty() {
                    write_bound_rows(&mut w, &c.audit)?;
                } else {
                    w.write_record(["x", "y", "kappa", "w1", "certified"])?;
                    for p in &c.pairs {
                        w.write_record([
                            p.pair.0.to_string(),
                            p.pair.1.to_string(),
                            fmt17(p.kappa),
                            fmt17(p.w1),
                            p.certified.to_string(),
                        ])?;
                    }
                }
            }
            Payload::Cheeger(c) => {
                w.write_record(["measure", "value", "boundary", "denominator", "witness"])?;
                w.write_record([
                    format!("{:?}", c.measure).to_lowercase(),
                    fmt17(c.value),
                    c.boundary.to_string(),
                    c.denominator.to_string(),
                    join_usize(c.witness.as_slice()),
                ])?;
            }
            Payload::Walk(r) => {
                w.write_record(["key", "value"])?;
                if let Some(a) = &r.analysis {
                    w.write_record(["rho".to_string(), fmt17(a.rho)])?;
                    w.write_record(["lambda2".to_string(), fmt17(a.lambda2)])?;
                    w.write_record(["lambda_n".to_string(), fmt17(a.lambda_n)])?;
                }
                if let Some(f) = &r.frequencies {
                    for (v, x) in f.iter().enumerate() {
                        w.write_record([format!("frequency_{}", v + 1), fmt17(*x)])?;
                    }
                }
                if let Some(c) = &r.certificate {
                    for p in &c.points {
                        w.write_record([format!("lhs_t{}", p.t), fmt17(p.lhs)])?;
                        w.write_record([format!("rhs_t{}", p.t), fmt17(p.rhs)])?;
                    }
                }
            }
            Payload::Generated(g) => {
                w.write_record(["family", "n", "edges"])?;
                w.write_record([g.family.clone(), g.n.to_string(), g.edges.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    })();
    result.expect("writing CSV to memory");
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
}

fn write_bound_rows<W: io::Write>(w: &mut csv::Writer<W>, list: &[BoundReport]) -> Result<(), csv::Error> {
    w.write_record([
        "bound_id", "mode", "verdict", "preconditions_met", "relation", "subject", "bound", "margin", "side",
        "worst_instance", "instances", "seed", "reasons",
    ])?;
    for b in list {
        w.write_record([
            b.bound_id.to_string(),
            serde_plain(&b.mode),
            b.verdict.to_string(),
            b.preconditions_met.to_string(),
            b.relation.symbol().to_string(),
            opt(b.subject),
            opt(b.bound),
            opt(b.margin),
            b.side.clone().unwrap_or_default(),
            b.worst_instance.as_ref().map(|i| i.to_string()).unwrap_or_default(),
            b.instances.to_string(),
            b.seed.map(|s| s.to_string()).unwrap_or_default(),
            b.reasons.join("; "),
        ])?;
    }
    Ok(())
}

fn serde_plain<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(_) => String::new(),
    }
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", report.tool, report.version);
    let _ = writeln!(out, "command: {}", report.command.join(" "));
    if let Some(d) = &report.input_digest {
        let _ = writeln!(out, "input: {d}");
    }
    for (k, v) in &report.settings {
        let _ = writeln!(out, "{k}: {v}");
    }
    match &report.payload {
        Payload::Generated(g) => {
            let _ = writeln!(out, "generated {} with n = {}, {} edges", g.family, g.n, g.edges);
        }
        Payload::Spectrum(s) => {
            let _ = writeln!(out, "{} spectrum", s.matrix);
            for (v, m) in &s.clusters {
                let _ = writeln!(out, "  {} x{}", fmt17(*v), m);
            }
            let _ = writeln!(out, "max residual {}", fmt17(s.max_residual));
        }
        Payload::Bounds(list) => text_bounds(&mut out, list),
        Payload::Cheeger(c) => {
            let _ = writeln!(
                out,
                "h = {} ({}/{}) witness {{{}}}",
                fmt17(c.value),
                c.boundary,
                c.denominator,
                join_usize(c.witness.as_slice())
            );
        }
        Payload::Walk(r) => {
            if let Some(a) = &r.analysis {
                let _ = writeln!(out, "rho {}  lambda_2 {}  lambda_n {}", fmt17(a.rho), fmt17(a.lambda2), fmt17(a.lambda_n));
                let _ = writeln!(out, "connected {}  aperiodic {}  cr<=2 {}", a.connected, a.aperiodic, a.periodicity_flag);
            }
            if let Some(f) = &r.frequencies {
                for (v, x) in f.iter().enumerate() {
                    let _ = writeln!(out, "  vertex {}: {}", v + 1, fmt17(*x));
                }
            }
            if let Some(c) = &r.certificate {
                for p in &c.points {
                    let _ = writeln!(out, "  t={} lhs {} rhs {} {}", p.t, fmt17(p.lhs), fmt17(p.rhs), p.holds);
                }
                let _ = writeln!(out, "certificate holds: {}", c.holds);
            }
        }
        Payload::Curvature(c) => {
            for p in &c.pairs {
                let _ = writeln!(out, "  kappa({}, {}) = {}", p.pair.0, p.pair.1, fmt17(p.kappa));
            }
            if let Some(cd) = &c.cd {
                let _ = writeln!(out, "CD({}, {}) {} (min eigenvalue {})", cd.dimension, fmt17(cd.k), cd.holds, fmt17(cd.min_eigenvalue));
            }
            if let Some(k) = c.best_k {
                let _ = writeln!(out, "best K {}", fmt17(k));
            }
            text_bounds(&mut out, &c.audit);
        }
    }
    out
}

fn text_bounds(out: &mut String, list: &[BoundReport]) {
    for b in list {
        let _ = write!(out, "{:<7} {:<15} ", b.bound_id.to_string(), b.verdict.to_string());
        match (b.subject, b.bound, b.margin) {
            (Some(s), Some(x), Some(m)) => {
                let _ = writeln!(out, "{} {} {} margin {}", fmt17(s), b.relation.symbol(), fmt17(x), fmt17(m));
            }
            _ => {
                let _ = writeln!(out, "{}", b.reasons.join("; "));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::audit_all;
    use crate::families::{bowtie, complete_uniform};

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(4.0), "4.0000000000000000e0");
        assert_eq!(fmt17(f64::INFINITY), "inf");
    }

    #[test]
    fn bound_reports_round_trip() {
        let g = bowtie();
        let report = Report::new(vec!["audit".into()], Some(input_digest(&g)), Payload::Bounds(audit_all(&g)));
        let text = report.render(Format::Json);
        let back = from_json(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.render(Format::Json), text);
    }

    #[test]
    fn non_finite_round_trip() {
        let v = vec![Real(f64::INFINITY), Real(f64::NEG_INFINITY), Real(1.5)];
        let s = to_json(&v);
        let back: Vec<Real> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let nan: Real = serde_json::from_str("\"NaN\"").unwrap();
        assert!(nan.0.is_nan());
    }

    #[test]
    fn digest_depends_on_content_only() {
        let a = complete_uniform(4, 3).unwrap();
        let b = Hypergraph::new(4, vec![vec![3, 2, 1], vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]).unwrap();
        assert_eq!(input_digest(&a), input_digest(&b));
        assert!(input_digest(&a).starts_with("sha256:"));
        assert_ne!(input_digest(&a), input_digest(&bowtie()));
    }

    #[test]
    fn csv_has_one_row_per_bound() {
        let g = bowtie();
        let report = Report::new(vec![], None, Payload::Bounds(audit_all(&g)));
        let csv = report.render(Format::Csv);
        assert_eq!(csv.lines().count(), 1 + crate::bounds::BoundId::ALL.len());
    }
}
