use super::{AuditContext, BoundId, EvalOptions, Outcome, Pre, Relation, Side};
use crate::families::{self, binomial};
use crate::hypergraph::{Hypergraph, VertexSubset};
use crate::operators::phi;
use crate::spectra::{self, multiset_distance, sumset};

/// Largest hypergraph built for a structural check, in vertices.
pub const STRUCTURAL_MAX_N: usize = 400;

fn discrepancy(actual: &[f64], expected: &[f64]) -> f64 {
    multiset_distance(actual, expected).unwrap_or(f64::INFINITY)
}

fn lap(g: &Hypergraph) -> Result<Vec<f64>, String> {
    spectra::laplacian_spectrum(g).map(|s| s.eigenvalues).map_err(|e| e.to_string())
}

fn adj(g: &Hypergraph) -> Result<Vec<f64>, String> {
    spectra::adjacency_spectrum(g).map(|s| s.eigenvalues).map_err(|e| e.to_string())
}

fn try_outcome(f: impl FnOnce() -> Result<Outcome, String>) -> Outcome {
    f().unwrap_or_else(Outcome::not_applicable)
}

pub(super) fn evaluate(ctx: &AuditContext<'_>, id: BoundId, opts: &EvalOptions) -> Outcome {
    let g = ctx.g;
    let n = g.n();
    let mut pre = Pre::default();
    match id {
        BoundId::Str1 => {
            let m = g.rank().max(2);
            let default_partner;
            let partner = match &opts.partner {
                Some(p) => p,
                None => {
                    default_partner = families::complete_uniform(m, m).expect("m >= 2");
                    &default_partner
                }
            };
            pre.require(n * partner.n() <= STRUCTURAL_MAX_N, "product exceeds the structural size limit");
            if let Some(o) = pre.failed() {
                return o;
            }
            try_outcome(|| {
                let prod = families::cartesian_product(g, partner).map_err(|e| e.to_string())?;
                let a = discrepancy(&adj(&prod)?, &sumset(ctx.adjacency()?.eigenvalues.as_slice(), &adj(partner)?));
                let l = discrepancy(&lap(&prod)?, &sumset(ctx.laplacian()?.eigenvalues.as_slice(), &lap(partner)?));
                Ok(Outcome::single(vec![
                    Side::new("adjacency", a, Relation::Eq, 0.0),
                    Side::new("laplacian", l, Relation::Eq, 0.0),
                ])
                .detail("partner_n", partner.n() as f64))
            })
        }
        BoundId::Str2 => {
            let m = g.uniformity();
            pre.require(m.is_some(), "hypergraph is not uniform")
                .require(n >= 2, "needs at least two vertices")
                .require(n <= STRUCTURAL_MAX_N, "hypergraph exceeds the structural size limit");
            if let Some(o) = pre.failed() {
                return o;
            }
            let m = m.expect("checked");
            try_outcome(|| {
                let comp = families::uniform_complement(g).map_err(|e| e.to_string())?;
                let ls = ctx.laplacian()?;
                let p = phi(m, n);
                let mut expected = vec![0.0];
                expected.extend(ls.eigenvalues[1..].iter().map(|l| p - l));
                let d = discrepancy(&lap(&comp)?, &expected);
                Ok(Outcome::single(vec![Side::new("laplacian", d, Relation::Eq, 0.0)]).detail("phi", p))
            })
        }
        BoundId::Str3 => {
            let m = g.uniformity();
            pre.require(m.is_some(), "hypergraph is not uniform");
            let partner = opts.partner.as_ref().unwrap_or(g);
            pre.require(
                partner.uniformity() == m || (partner.edge_count() == 0 && m.is_some()),
                "summands must share the edge cardinality",
            )
            .require(n + partner.n() <= STRUCTURAL_MAX_N, "join exceeds the structural size limit");
            if let Some(o) = pre.failed() {
                return o;
            }
            let m = m.expect("checked");
            try_outcome(|| {
                let joined = families::join_with(g, partner, m).map_err(|e| e.to_string())?;
                let (n1, n2) = (n, partner.n());
                let total = phi(m, n1 + n2);
                let l1 = ctx.laplacian()?;
                let l2 = lap(partner)?;
                let mut expected = vec![0.0, total];
                expected.extend(l1.eigenvalues[1..].iter().map(|l| total - phi(m, n1) + l));
                expected.extend(l2[1..].iter().map(|l| total - phi(m, n2) + l));
                let d = discrepancy(&lap(&joined)?, &expected);
                Ok(Outcome::single(vec![Side::new("laplacian", d, Relation::Eq, 0.0)])
                    .detail("partner_n", n2 as f64))
            })
        }
        BoundId::Str4 => {
            let m = g.uniformity();
            pre.require(m.is_some(), "hypergraph is not uniform");
            if let Some(o) = pre.failed() {
                return o;
            }
            let m = m.expect("checked");
            let part = match &opts.bipartition {
                Some(p) => Some(p.clone()),
                None => detect_bipartition(ctx, m),
            };
            let Some(v1) = part.filter(|p| is_complete_bipartite(g, m, p)) else {
                return Outcome::not_applicable("hypergraph is not a complete bipartite m-uniform hypergraph");
            };
            try_outcome(|| {
                let (n1, n2) = (v1.len(), n - v1.len());
                let total = phi(m, n);
                let mut expected = vec![0.0, total];
                expected.extend(std::iter::repeat_n(total - phi(m, n1), n1 - 1));
                expected.extend(std::iter::repeat_n(total - phi(m, n2), n2 - 1));
                let d = discrepancy(&ctx.laplacian()?.eigenvalues, &expected);
                Ok(Outcome::single(vec![Side::new("laplacian", d, Relation::Eq, 0.0)])
                    .detail("n1", n1 as f64)
                    .detail("n2", n2 as f64))
            })
        }
        _ => unreachable!("not a structural bound"),
    }
}

/// Candidate first part of `K^m_{n1,n2}`. Two vertices of one part share
/// fewer than `C(n-2, m-2)` edges exactly when that part has at least `m`
/// vertices; parts smaller than `m` show up as vertices with full codegree
/// to everything.
fn detect_bipartition(ctx: &AuditContext<'_>, m: usize) -> Option<VertexSubset> {
    let g = ctx.g;
    let n = g.n();
    if n < 2 || n < m {
        return None;
    }
    let full = binomial(n as u64 - 2, m as u64 - 2) as usize;
    let cod = ctx.codegrees();
    // Components of the "deficient codegree" graph.
    let mut comp = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = groups.len();
        comp[s] = id;
        let mut stack = vec![s];
        let mut members = vec![s];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if v != u && comp[v] == usize::MAX && cod[u][v] < full {
                    comp[v] = id;
                    stack.push(v);
                    members.push(v);
                }
            }
        }
        groups.push(members);
    }
    let (big, small): (Vec<_>, Vec<_>) = groups.into_iter().partition(|c| c.len() >= 2);
    let isolated: Vec<usize> = small.into_iter().flatten().collect();
    let first = match (big.len(), isolated.len()) {
        (2, 0) => big[0].clone(),
        (1, k) if k > 0 => big[0].clone(),
        (0, _) => {
            let n1 = n.saturating_sub(m - 1).max(1);
            if n1 >= n {
                return None;
            }
            (0..n1).collect()
        }
        _ => return None,
    };
    VertexSubset::new(n, first).ok()
}

fn is_complete_bipartite(g: &Hypergraph, m: usize, v1: &VertexSubset) -> bool {
    let n = g.n();
    let n1 = v1.len();
    if n1 == 0 || n1 >= n || v1.iter().any(|v| v >= n) {
        return false;
    }
    let want = binomial(n as u64, m as u64) - binomial(n1 as u64, m as u64) - binomial((n - n1) as u64, m as u64);
    g.edge_count() as u128 == want
        && g.edges().iter().all(|e| {
            let inside = e.iter().filter(|&&v| v1.contains(v)).count();
            inside > 0 && inside < e.len()
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::complete_bipartite_uniform;

    #[test]
    fn detects_bipartite_parts() {
        for (a, b, m) in [(1, 2, 3), (2, 2, 3), (2, 3, 3), (3, 3, 3), (3, 4, 3), (2, 3, 2), (4, 4, 3), (1, 5, 3)] {
            let g = complete_bipartite_uniform(a, b, m).unwrap();
            let ctx = AuditContext::new(&g);
            let p = detect_bipartition(&ctx, m).unwrap_or_else(|| panic!("K{m}_{a},{b}"));
            assert!(is_complete_bipartite(&g, m, &p), "K{m}_{a},{b}");
        }
        let g = families::bowtie();
        let ctx = AuditContext::new(&g);
        assert!(detect_bipartition(&ctx, 3).filter(|p| is_complete_bipartite(&g, 3, p)).is_none());
    }
}
