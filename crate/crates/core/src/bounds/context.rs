use std::sync::OnceLock;

use crate::curvature::{self, Dimension};
use crate::hypergraph::{DistanceMatrix, Hypergraph};
use crate::oracles::{self, CheegerResult, ColoringResult, Measure, WeakCut};
use crate::spectra::{self, PerronVector, Spectrum};
use crate::operators;

/// Lazily computed quantities shared by catalog entries on one hypergraph.
/// Failures are cached as the message used for a not-applicable reason.
pub struct AuditContext<'g> {
    pub g: &'g Hypergraph,
    adjacency: OnceLock<Result<Spectrum, String>>,
    laplacian: OnceLock<Result<Spectrum, String>>,
    normalized: OnceLock<Result<Spectrum, String>>,
    distances: OnceLock<DistanceMatrix>,
    codegrees: OnceLock<Vec<Vec<usize>>>,
    cheeger_counting: OnceLock<Result<CheegerResult, String>>,
    cheeger_volume: OnceLock<Result<CheegerResult, String>>,
    weak_cut: OnceLock<Result<WeakCut, String>>,
    coloring: OnceLock<Result<ColoringResult, String>>,
    perron: OnceLock<Result<PerronVector, String>>,
    best_k2: OnceLock<Result<f64, String>>,
    min_kappa: OnceLock<Result<f64, String>>,
}

impl<'g> AuditContext<'g> {
    pub fn new(g: &'g Hypergraph) -> Self {
        AuditContext {
            g,
            adjacency: OnceLock::new(),
            laplacian: OnceLock::new(),
            normalized: OnceLock::new(),
            distances: OnceLock::new(),
            codegrees: OnceLock::new(),
            cheeger_counting: OnceLock::new(),
            cheeger_volume: OnceLock::new(),
            weak_cut: OnceLock::new(),
            coloring: OnceLock::new(),
            perron: OnceLock::new(),
            best_k2: OnceLock::new(),
            min_kappa: OnceLock::new(),
        }
    }

    pub fn adjacency(&self) -> Result<&Spectrum, String> {
        as_ref(self.adjacency.get_or_init(|| spectra::adjacency_spectrum(self.g).map_err(|e| e.to_string())))
    }

    pub fn laplacian(&self) -> Result<&Spectrum, String> {
        as_ref(self.laplacian.get_or_init(|| spectra::laplacian_spectrum(self.g).map_err(|e| e.to_string())))
    }

    /// Spectrum of `Δ`.
    pub fn normalized(&self) -> Result<&Spectrum, String> {
        as_ref(self.normalized.get_or_init(|| spectra::normalized_spectrum(self.g).map_err(|e| e.to_string())))
    }

    pub fn distances(&self) -> &DistanceMatrix {
        self.distances.get_or_init(|| self.g.distances())
    }

    pub fn diameter(&self) -> Option<usize> {
        self.distances().diameter()
    }

    pub fn codegrees(&self) -> &[Vec<usize>] {
        self.codegrees.get_or_init(|| self.g.codegrees())
    }

    pub fn cheeger(&self, measure: Measure) -> Result<&CheegerResult, String> {
        let cell = match measure {
            Measure::Counting => &self.cheeger_counting,
            Measure::Volume => &self.cheeger_volume,
        };
        as_ref(cell.get_or_init(|| oracles::cheeger(self.g, measure).map_err(|e| e.to_string())))
    }

    pub fn weak_cut(&self) -> Result<&WeakCut, String> {
        as_ref(self.weak_cut.get_or_init(|| oracles::weak_vertex_connectivity(self.g).map_err(|e| e.to_string())))
    }

    pub fn coloring(&self) -> Result<&ColoringResult, String> {
        as_ref(self.coloring.get_or_init(|| oracles::strong_chromatic_number(self.g).map_err(|e| e.to_string())))
    }

    pub fn perron(&self) -> Result<&PerronVector, String> {
        as_ref(self.perron.get_or_init(|| {
            spectra::perron_vector(self.g, &operators::adjacency(self.g)).map_err(|e| e.to_string())
        }))
    }

    pub fn best_k2(&self) -> Result<f64, String> {
        self.best_k2
            .get_or_init(|| curvature::best_k(self.g, Dimension::Finite(2.0)).map_err(|e| e.to_string()))
            .clone()
    }

    /// Minimum Ollivier curvature over adjacent pairs.
    pub fn min_kappa(&self) -> Result<f64, String> {
        self.min_kappa
            .get_or_init(|| {
                let pairs = curvature::all_pair_curvatures(self.g).map_err(|e| e.to_string())?;
                Ok(pairs.iter().map(|r| r.kappa).fold(f64::INFINITY, f64::min))
            })
            .clone()
    }
}

fn as_ref<T>(r: &Result<T, String>) -> Result<&T, String> {
    r.as_ref().map_err(Clone::clone)
}
