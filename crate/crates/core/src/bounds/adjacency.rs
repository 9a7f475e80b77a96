use super::{floor_slack, AuditContext, BoundId, Outcome, Pre, Relation, Side};
use crate::families::binomial;
use crate::operators::theta_complete;
use crate::spectra::CLUSTER_TOL;

pub(super) fn evaluate(ctx: &AuditContext<'_>, id: BoundId) -> Outcome {
    let g = ctx.g;
    let spec = match ctx.adjacency() {
        Ok(s) => s,
        Err(e) => return Outcome::not_applicable(e),
    };
    let n = g.n();
    let lmax = spec.max();
    let lmin = spec.min();
    let theta = spec.second_largest_abs();
    let mut pre = Pre::default();
    pre.require(g.edge_count() > 0, "hypergraph has no edges");

    match id {
        BoundId::Adj1 => {
            pre.require(g.is_connected(), "hypergraph is disconnected");
            if let Some(o) = pre.failed() {
                return o;
            }
            let d = g.degrees();
            let mut best = 0.0f64;
            for i in 0..n {
                for &j in g.neighbors(i) {
                    best = best.max(((d[i] * d[j]) as f64).sqrt());
                }
            }
            Outcome::single(vec![Side::new("rho", spec.spectral_radius(), Relation::Le, best)])
        }
        BoundId::Adj2 => {
            pre.require(g.is_connected(), "hypergraph is disconnected")
                .require(n >= 2, "needs at least two vertices")
                .require(g.corank() >= 3, "needs minimum edge cardinality at least 3")
                .require(lmax - theta > 1e-9, "needs theta < lambda_max");
            if let Some(o) = pre.failed() {
                return o;
            }
            let perron = match ctx.perron() {
                Ok(p) => p,
                Err(e) => return Outcome::not_applicable(e),
            };
            let a2 = perron.alpha * perron.alpha;
            let bound = floor_slack(1.0 + ((1.0 - a2) / a2).ln() / (lmax / theta).ln());
            let diam = ctx.diameter().expect("connected") as f64;
            Outcome::single(vec![Side::new("diam", diam, Relation::Le, bound)])
                .detail("alpha", perron.alpha)
                .detail("theta", theta)
                .detail("lambda_max", lmax)
        }
        BoundId::Adj3 => {
            pre.require(g.is_connected(), "hypergraph is disconnected")
                .require(n >= 2, "needs at least two vertices")
                .require(g.is_regular(), "hypergraph is not regular")
                .require(lmax - theta > 1e-9, "needs theta < k");
            if let Some(o) = pre.failed() {
                return o;
            }
            let k = g.max_degree() as f64;
            let bound = floor_slack(1.0 + ((n - 1) as f64).ln() / (k / theta).ln());
            let diam = ctx.diameter().expect("connected") as f64;
            Outcome::single(vec![Side::new("diam", diam, Relation::Le, bound)]).detail("theta", theta)
        }
        BoundId::Adj4 => {
            pre.require(g.is_connected(), "hypergraph is disconnected");
            if let Some(o) = pre.failed() {
                return o;
            }
            let distinct = spec.distinct_count(CLUSTER_TOL) as f64;
            let diam = ctx.diameter().expect("connected") as f64;
            Outcome::single(vec![Side::new("diam", diam, Relation::Lt, distinct)])
        }
        BoundId::Adj5 => {
            let m = g.uniformity();
            pre.require(m.is_some(), "hypergraph is not uniform")
                .require(g.is_regular(), "hypergraph is not regular");
            if let Some(o) = pre.failed() {
                return o;
            }
            let m = m.expect("checked");
            let k = g.max_degree() as f64;
            let th = theta_complete(m, n);
            let bound = k - th - binomial(n as u64 - 1, m as u64 - 1) as f64;
            Outcome::single(vec![Side::new("lambda_min", lmin, Relation::Ge, bound)]).detail("theta", th)
        }
        BoundId::Col1 | BoundId::Col2 => {
            if let Some(o) = pre.failed() {
                return o;
            }
            let col = match ctx.coloring() {
                Ok(c) => c,
                Err(e) => return Outcome::not_applicable(e),
            };
            let gamma = col.chi as f64;
            if id == BoundId::Col1 {
                let bound = 1.0 + (g.rank() as f64 - 1.0) * lmax;
                Outcome::single(vec![Side::new("gamma", gamma, Relation::Le, bound)])
            } else {
                let bound = 1.0 - lmax / lmin;
                Outcome::single(vec![Side::new("gamma", gamma, Relation::Ge, bound)])
            }
        }
        BoundId::Col3 => {
            if let Some(o) = pre.failed() {
                return o;
            }
            let bound = 1.0 / (g.rank() as f64 - 1.0);
            Outcome::single(vec![Side::new("|lambda_min|", lmin.abs(), Relation::Ge, bound)])
        }
        _ => unreachable!("not an adjacency bound"),
    }
}
