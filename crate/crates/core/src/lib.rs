//! Spectral analysis of non-uniform hypergraphs.
//!
//! Vertices are `0..n`; edges are vertex sets of size at least two. The
//! connectivity matrix weighs each edge `e` by `1/(|e| - 1)` on every pair it
//! contains, and the Laplacians, transition kernel, curvature and bound audits
//! are all built on it.

pub mod bounds;
pub mod curvature;
pub mod families;
pub mod hgfile;
pub mod hypergraph;
pub mod matrix;
pub mod operators;
pub mod oracles;
pub mod random;
pub mod report;
pub mod spectra;
pub mod suite;
pub mod transport;
pub mod walks;

pub use bounds::{audit_all, evaluate, BoundId, BoundReport, EvalOptions, Verdict};
pub use hgfile::{parse_hg, read_hg, write_hg};
pub use hypergraph::{Hypergraph, HypergraphError, VertexSubset};
pub use operators::MatrixKind;
pub use spectra::Spectrum;
