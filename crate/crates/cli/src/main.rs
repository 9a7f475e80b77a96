mod args;

use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use hgspectra_core::bounds::{audit_ids, BoundId, BoundReport, EvalOptions, MARGIN_TOL, STRICT_TOL};
use hgspectra_core::curvature::{self, Dimension};
use hgspectra_core::families;
use hgspectra_core::hgfile::{parse_hg, write_hg};
use hgspectra_core::operators::{adjacency, laplacian, sym_normalized_laplacian};
use hgspectra_core::oracles::cheeger;
use hgspectra_core::random::{random_connected_3uniform, random_uniform};
use hgspectra_core::report::{
    input_digest, CurvatureRecord, GeneratedRecord, Payload, Report, SpectrumRecord, WalkRecord,
};
use hgspectra_core::spectra::{delta_eigenvectors, spectrum_of, CLUSTER_TOL};
use hgspectra_core::walks;
use hgspectra_core::{Hypergraph, MatrixKind, VertexSubset};

use args::{AuditArgs, CheegerArgs, Cli, Command, CurvatureArgs, Family, GenArgs, InputArg, SpectrumArgs, WalkArgs};

const THREADS_VAR: &str = "HGSPECTRA_THREADS";

/// An input or usage problem; reported on stderr with exit status 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(msg.into()))
}

struct Output {
    text: String,
    violated: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match configure_threads().and_then(|()| run(&cli, argv)) {
        Ok(out) => {
            print!("{}", out.text);
            if out.violated {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), Fail> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => return fail(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: &Cli, argv: Vec<String>) -> Result<Output, Fail> {
    let mut violated = false;
    let report = match &cli.command {
        Command::Gen(a) => {
            let g = generate(a)?;
            match &a.output {
                Some(path) => gen_report(a, &g, path, argv)?,
                None => return Ok(Output { text: write_hg(&g), violated: false }),
            }
        }
        Command::Spectrum(a) => spectrum(a, argv)?,
        Command::Audit(a) => {
            let (r, bad) = audit(a, argv)?;
            violated = bad && a.fail_on_violation;
            r
        }
        Command::Cheeger(a) => cheeger_cmd(a, argv)?,
        Command::Walk(a) => walk(a, argv)?,
        Command::Curvature(a) => curvature_cmd(a, argv)?,
    };
    Ok(Output { text: report.render(cli.format), violated })
}

fn read_input(arg: &InputArg) -> Result<Hypergraph, Fail> {
    match arg.input.as_deref() {
        Some(p) if p != Path::new("-") => {
            let text = std::fs::read_to_string(p).map_err(|e| Fail(format!("{}: {e}", p.display())))?;
            parse_hg(&text).map_err(|e| Fail(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            parse_hg(&text).map_err(|e| Fail(format!("<stdin>: {e}")))
        }
    }
}

fn need(v: Option<usize>, flag: &str, family: &str) -> Result<usize, Fail> {
    v.ok_or_else(|| Fail(format!("--family {family} needs --{flag}")))
}

fn generate(a: &GenArgs) -> Result<Hypergraph, Fail> {
    let g = match a.family {
        Family::Complete => families::complete_uniform(need(a.n, "n", "complete")?, need(a.m, "m", "complete")?)?,
        Family::Bipartite => families::complete_bipartite_uniform(
            need(a.n1, "n1", "bipartite")?,
            need(a.n2, "n2", "bipartite")?,
            need(a.m, "m", "bipartite")?,
        )?,
        Family::Cube => families::cube_hypergraph(need(a.n, "n", "cube")?, need(a.m, "m", "cube")?)?,
        Family::Fano => families::fano_plane(),
        Family::Bowtie => families::bowtie(),
        Family::Chain => families::chain(need(a.k, "k", "chain")?)?,
        Family::Random => random_uniform(
            need(a.n, "n", "random")?,
            need(a.m, "m", "random")?,
            need(a.edges, "edges", "random")?,
            a.seed,
        )?,
        Family::RandomConnected => random_connected_3uniform(a.seed),
    };
    Ok(g)
}

fn gen_report(a: &GenArgs, g: &Hypergraph, path: &Path, argv: Vec<String>) -> Result<Report, Fail> {
    std::fs::write(path, write_hg(g)).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    let record = GeneratedRecord {
        family: format!("{:?}", a.family).to_lowercase(),
        n: g.n(),
        edges: g.edge_count(),
        output: Some(path.display().to_string()),
    };
    Ok(Report::new(argv, Some(input_digest(g)), Payload::Generated(record)).setting("seed", a.seed))
}

fn spectrum(a: &SpectrumArgs, argv: Vec<String>) -> Result<Report, Fail> {
    let g = read_input(&a.input)?;
    let s = spectrum_of(&g, a.matrix)?;
    let m = match a.matrix {
        MatrixKind::Adjacency => adjacency(&g),
        MatrixKind::Laplacian => laplacian(&g),
        _ => sym_normalized_laplacian(&g)?,
    };
    let eigenvectors = a.vectors.then(|| match a.matrix {
        MatrixKind::Normalized => delta_eigenvectors(&g, &s),
        _ => s.eigenvectors.clone(),
    });
    let record = SpectrumRecord {
        matrix: a.matrix.name().to_string(),
        clusters: s.clusters(CLUSTER_TOL),
        max_residual: s.max_residual(&m),
        eigenvalues: s.eigenvalues.clone(),
        eigenvectors,
    };
    Ok(Report::new(argv, Some(input_digest(&g)), Payload::Spectrum(record)).setting("cluster_tol", CLUSTER_TOL))
}

/// 1-based labels, as written on the command line.
fn parse_subset(text: &str, n: usize) -> Result<VertexSubset, Fail> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v: usize = part.parse().map_err(|_| Fail(format!("'{part}' is not a vertex label")))?;
        if v == 0 || v > n {
            return fail(format!("vertex {v} is outside 1..={n}"));
        }
        out.push(v - 1);
    }
    if out.is_empty() {
        return fail(format!("empty vertex set '{text}'"));
    }
    Ok(VertexSubset::new(n, out)?)
}

fn parse_dimension(text: &str) -> Result<Dimension, Fail> {
    match text.trim() {
        "inf" | "infinity" => Ok(Dimension::Infinite),
        t => t.parse().map(Dimension::Finite).map_err(|_| Fail(format!("'{t}' is not a dimension"))),
    }
}

fn parse_cd_pair(text: &str) -> Result<(f64, f64), Fail> {
    let (m, k) = text.split_once(':').ok_or_else(|| Fail(format!("--cd expects m:K, got '{text}'")))?;
    let m = match parse_dimension(m)? {
        Dimension::Finite(m) => m,
        Dimension::Infinite => f64::INFINITY,
    };
    let k: f64 = k.trim().parse().map_err(|_| Fail(format!("'{k}' is not a curvature value")))?;
    Ok((m, k))
}

fn parse_ids(text: &str) -> Result<Vec<BoundId>, Fail> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(BoundId::ALL.to_vec());
    }
    let mut ids: Vec<BoundId> = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let id: BoundId = part.parse()?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    if ids.is_empty() {
        return fail("--bounds needs at least one bound id or 'all'");
    }
    Ok(ids)
}

fn shift_report(mut r: BoundReport) -> BoundReport {
    r.worst_instance = r.worst_instance.map(|i| i.shifted(1));
    r
}

fn audit(a: &AuditArgs, argv: Vec<String>) -> Result<(Report, bool), Fail> {
    let g = read_input(&a.input)?;
    let n = g.n();
    let ids = parse_ids(&a.bounds)?;
    let mut opts = EvalOptions { seed: a.seed, explicit_instances: a.explicit, ..Default::default() };
    if let Some(s) = &a.subset {
        opts.subset = Some(parse_subset(s, n)?);
    }
    if let Some(p) = &a.pair {
        opts.pair = Some((parse_subset(&p[0], n)?, parse_subset(&p[1], n)?));
    }
    opts.cd_pairs = a.cd.iter().map(|c| parse_cd_pair(c)).collect::<Result<_, _>>()?;
    if let Some(p) = &a.partner {
        opts.partner = Some(read_input(&InputArg { input: Some(p.clone()) })?);
    }
    if let Some(b) = &a.bipartition {
        opts.bipartition = Some(parse_subset(b, n)?);
    }
    let reports = audit_ids(&g, &ids, &opts)?;
    let violated = reports.iter().any(BoundReport::is_must_hold_violation);
    let reports = reports.into_iter().map(shift_report).collect();
    let report = Report::new(argv, Some(input_digest(&g)), Payload::Bounds(reports))
        .setting("seed", a.seed)
        .setting("margin_tol", MARGIN_TOL)
        .setting("strict_tol", STRICT_TOL);
    Ok((report, violated))
}

fn cheeger_cmd(a: &CheegerArgs, argv: Vec<String>) -> Result<Report, Fail> {
    let g = read_input(&a.input)?;
    let mut c = cheeger(&g, a.measure)?;
    c.witness = VertexSubset::new(g.n() + 1, c.witness.iter().map(|v| v + 1))?;
    Ok(Report::new(argv, Some(input_digest(&g)), Payload::Cheeger(c)))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Fail> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Fail(format!("'{p}' is not a valid {what}"))))
        .collect()
}

fn walk(a: &WalkArgs, argv: Vec<String>) -> Result<Report, Fail> {
    let g = read_input(&a.input)?;
    let n = g.n();
    if a.start == 0 || a.start > n {
        return fail(format!("--start {} is outside 1..={n}", a.start));
    }
    let start = a.start - 1;
    let mut record = WalkRecord {
        analysis: walks::analyze(&g).ok(),
        start: Some(a.start),
        steps: a.steps,
        seed: None,
        frequencies: None,
        trajectory: None,
        certificate: None,
    };
    if let Some(steps) = a.steps {
        let path = walks::simulate(&g, start, steps, a.seed)?;
        record.seed = Some(a.seed);
        record.frequencies = Some(walks::visit_frequencies(&path, n));
        if a.trajectory {
            record.trajectory = Some(path.iter().map(|v| v + 1).collect());
        }
    }
    if let Some(ts) = &a.certificate {
        let ts: Vec<u64> = parse_list(ts, "time")?;
        let f = match &a.f {
            Some(text) => {
                let f: Vec<f64> = parse_list(text, "function value")?;
                if f.len() != n {
                    return fail(format!("--f has {} values but the hypergraph has {n} vertices", f.len()));
                }
                f
            }
            None => (0..n).map(|v| if v == start { 1.0 } else { 0.0 }).collect(),
        };
        record.certificate = Some(walks::convergence_trace(&g, &f, &ts)?);
    }
    let mut report = Report::new(argv, Some(input_digest(&g)), Payload::Walk(record));
    if a.steps.is_some() {
        report = report.setting("seed", a.seed);
    }
    Ok(report)
}

fn curvature_cmd(a: &CurvatureArgs, argv: Vec<String>) -> Result<Report, Fail> {
    if !a.ollivier && a.cd.is_none() && !a.audit {
        return fail("choose at least one of --ollivier, --cd or --audit");
    }
    if a.pair.is_some() && !a.ollivier {
        return fail("--pair needs --ollivier");
    }
    let g = read_input(&a.input)?;
    let n = g.n();
    let mut record = CurvatureRecord { pairs: Vec::new(), scalar: None, cd: None, best_k: None, d_star: None, audit: Vec::new() };
    if a.ollivier {
        record.pairs = match &a.pair {
            Some(p) => {
                let (x, y) = (p[0], p[1]);
                if x == 0 || y == 0 || x > n || y > n {
                    return fail(format!("--pair {x} {y} is outside 1..={n}"));
                }
                vec![curvature::ollivier_kappa(&g, x - 1, y - 1)?]
            }
            None => {
                record.scalar = Some((0..n).map(|x| curvature::scalar_curvature(&g, x)).collect::<Result<_, _>>()?);
                curvature::all_pair_curvatures(&g)?
            }
        };
        for r in &mut record.pairs {
            r.pair = (r.pair.0 + 1, r.pair.1 + 1);
        }
    }
    if let Some(m) = &a.cd {
        let m = parse_dimension(m)?;
        let ds = curvature::d_star(&g);
        let mut cert = curvature::cd_check(&g, m, a.k.unwrap_or(1.0 / ds - 1.0))?;
        cert.worst_vertex += 1;
        record.cd = Some(cert);
        record.best_k = Some(curvature::best_k(&g, m)?);
        record.d_star = Some(ds);
    }
    if a.audit {
        let ids = [BoundId::Crv1, BoundId::Crv2, BoundId::Crv3];
        record.audit = audit_ids(&g, &ids, &EvalOptions::default())?.into_iter().map(shift_report).collect();
    }
    Ok(Report::new(argv, Some(input_digest(&g)), Payload::Curvature(record)))
}
