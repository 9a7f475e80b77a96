use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hgspectra_core::oracles::Measure;
use hgspectra_core::report::Format;
use hgspectra_core::MatrixKind;

/// Spectra, bound audits, walks and curvature for hypergraphs.
///
/// Vertex labels on the command line and in reports are 1-based, as in `.hg`
/// files. Set HGSPECTRA_THREADS to fix the worker thread count.
#[derive(Debug, Parser)]
#[command(name = "hgspectra", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a hypergraph family as `.hg` text.
    Gen(GenArgs),
    /// Eigenvalues of A, L or the normalized Laplacian.
    Spectrum(SpectrumArgs),
    /// Audit spectral bounds against exact oracles.
    Audit(AuditArgs),
    /// Exact Cheeger constant with a witness set.
    Cheeger(CheegerArgs),
    /// Random walk analysis, simulation and convergence certificates.
    Walk(WalkArgs),
    /// Ollivier-Ricci and curvature-dimension checks.
    Curvature(CurvatureArgs),
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// `.hg` file; `-` or omitted reads standard input.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    /// K^m_n: all m-subsets of n vertices (--n, --m).
    Complete,
    /// K^m_{n1,n2}: m-subsets meeting both parts (--n1, --n2, --m).
    Bipartite,
    /// Q(n, m): n-fold product of K^m_m (--n, --m).
    Cube,
    /// The Fano plane.
    Fano,
    /// Two triples sharing a vertex.
    Bowtie,
    /// k triples glued in a path (--k).
    Chain,
    /// Uniform random m-uniform hypergraph (--n, --m, --edges, --seed).
    Random,
    /// Random connected 3-uniform hypergraph (--seed).
    RandomConnected,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the `.hg` file here and print a report; without it the `.hg` text goes to stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value = "laplacian", value_parser = parse_matrix)]
    pub matrix: MatrixKind,
    /// Include eigenvectors (for `normalized`, eigenvectors of I - D^-1 A).
    #[arg(long)]
    pub vectors: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Comma-separated bound ids, or `all`.
    #[arg(long, default_value = "all")]
    pub bounds: String,
    /// Exit with status 1 when a must-hold bound is violated.
    #[arg(long)]
    pub fail_on_violation: bool,
    /// Subset S for LAP-3 and LAP-9, e.g. `1,2,5`.
    #[arg(long)]
    pub subset: Option<String>,
    /// Pair V1 V2 for LAP-7 and NRM-5, e.g. `--pair 1,2 4,5`.
    #[arg(long, num_args = 2, value_names = ["V1", "V2"])]
    pub pair: Option<Vec<String>>,
    /// Extra (m, K) pairs for CRV-2, e.g. `--cd 2:0.25`; m may be `inf`.
    #[arg(long)]
    pub cd: Vec<String>,
    /// Partner hypergraph for STR-1 (product) and STR-3 (join).
    #[arg(long)]
    pub partner: Option<PathBuf>,
    /// First part of the bipartition for STR-4.
    #[arg(long)]
    pub bipartition: Option<String>,
    /// Only use instances given on the command line; missing ones are an error.
    #[arg(long)]
    pub explicit: bool,
    /// Seed for sampled subset and pair families.
    #[arg(long, default_value_t = hgspectra_core::bounds::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CheegerArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value = "counting", value_parser = parse_measure)]
    pub measure: Measure,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value_t = 1)]
    pub start: usize,
    /// Simulate this many steps from --start.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include the simulated trajectory.
    #[arg(long)]
    pub trajectory: bool,
    /// Certify the convergence bound at these times, e.g. `--certificate 1,5,10`.
    #[arg(long)]
    pub certificate: Option<String>,
    /// Function f for the certificate, one value per vertex; defaults to the indicator of --start.
    #[arg(long)]
    pub f: Option<String>,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Ollivier-Ricci curvature of every adjacent pair, or of --pair.
    #[arg(long)]
    pub ollivier: bool,
    #[arg(long, num_args = 2, value_names = ["X", "Y"])]
    pub pair: Option<Vec<usize>>,
    /// Curvature-dimension check with dimension m (a number or `inf`).
    #[arg(long)]
    pub cd: Option<String>,
    /// Curvature K for --cd; defaults to 1/d* - 1.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Audit CRV-1, CRV-2 and CRV-3.
    #[arg(long)]
    pub audit: bool,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_matrix(s: &str) -> Result<MatrixKind, String> {
    match s.parse()? {
        MatrixKind::Transition => Err("expected adjacency, laplacian or normalized".into()),
        k => Ok(k),
    }
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse()
}
