use super::laplacian::{distance_bound, log_ratio, two_degree_data};
use super::subsets;
use super::{Instance, AuditContext, BoundId, EvalOptions, Outcome, Pre, Relation, Side};
use crate::oracles::Measure;
use crate::spectra::CLUSTER_TOL;

pub(super) fn evaluate(ctx: &AuditContext<'_>, id: BoundId, opts: &EvalOptions) -> Outcome {
    let g = ctx.g;
    if g.has_isolated_vertex() {
        return Outcome::not_applicable("normalized Laplacian needs every degree positive");
    }
    let spec = match ctx.normalized() {
        Ok(s) => s,
        Err(e) => return Outcome::not_applicable(e),
    };
    let n = g.n();
    let nf = n as f64;
    let l2 = if n >= 2 { spec.lambda(2) } else { 0.0 };
    let ln = spec.max();
    let r = g.rank() as f64;
    let cr = g.corank() as f64;
    let dmax = g.max_degree() as f64;
    let dmin = g.min_degree() as f64;
    let mut pre = Pre::default();

    match id {
        BoundId::Nrm1 => {
            pre.require(g.has_nonadjacent_pair(), "every pair of vertices is adjacent");
            if let Some(o) = pre.failed() {
                return o;
            }
            Outcome::single(vec![
                Side::new("lambda_2", l2, Relation::Le, 1.0),
                Side::new("lambda_n", ln, Relation::Ge, 1.0),
            ])
        }
        BoundId::Nrm2 => {
            pre.require(g.uniformity().is_some_and(|m| m > 2), "needs an m-uniform hypergraph with m > 2");
            if let Some(o) = pre.failed() {
                return o;
            }
            let zeros = spec.zero_multiplicity(CLUSTER_TOL) as f64;
            Outcome::single(vec![
                Side::new("lambda_1", spec.min(), Relation::Ge, 0.0),
                Side::new("lambda_n", ln, Relation::Lt, 2.0),
                Side::new("zero-multiplicity", zeros, Relation::Eq, g.component_count() as f64),
            ])
        }
        BoundId::Nrm3 => {
            pre.require(g.is_connected(), "hypergraph is disconnected").require(n >= 2, "needs at least two vertices");
            if let Some(o) = pre.failed() {
                return o;
            }
            let h = match ctx.cheeger(Measure::Volume) {
                Ok(c) => c.value,
                Err(e) => return Outcome::not_applicable(e),
            };
            let coef = 2.0 * (cr - 1.0) / (r * (r - 1.0));
            let lower = coef * l2;
            let upper = (r - 1.0) * ((2.0 - l2) * l2).sqrt();
            let mut out = Outcome::single(vec![
                Side::new("lower", h, Relation::Ge, lower),
                Side::new("upper", h, Relation::Lt, upper),
            ])
            .detail("h_vol", h)
            .detail("lower_margin", h - lower)
            .detail("upper_margin", upper - h);
            if let Ok(lap) = ctx.laplacian() {
                out = out.detail("lower_margin_laplacian", h - coef * lap.lambda(2));
            }
            out
        }
        BoundId::Nrm4 => {
            pre.require(g.is_connected(), "hypergraph is disconnected").require(n >= 2, "needs at least two vertices");
            if let Some(o) = pre.failed() {
                return o;
            }
            let diam = ctx.diameter().expect("connected") as f64;
            let bound = 4.0 / (nf * (r - 1.0) * dmax * l2);
            Outcome::single(vec![Side::new("diam", diam, Relation::Ge, bound)])
        }
        BoundId::Nrm5 | BoundId::Nrm6 => {
            pre.require(g.is_connected(), "hypergraph is disconnected")
                .require(g.has_nonadjacent_pair(), "every pair of vertices is adjacent");
            if let Some(o) = pre.failed() {
                return o;
            }
            let lr = log_ratio(l2, ln);
            if id == BoundId::Nrm6 {
                let diam = ctx.diameter().expect("connected") as f64;
                let general = distance_bound(((nf - 1.0) * dmax / dmin).ln(), lr);
                let mut sides = vec![Side::new("diam", diam, Relation::Le, general)];
                if g.is_regular() {
                    sides.push(Side::new("diam-regular", diam, Relation::Le, distance_bound((nf - 1.0).ln(), lr)));
                }
                return Outcome::single(sides).detail("log_ratio", lr);
            }
            let total = g.total_volume() as f64;
            let inst = subsets::pairs(g, opts);
            let items = inst
                .items
                .iter()
                .filter(|(a, b)| !a.is_empty() && !b.is_empty() && a.len() < n && b.len() < n)
                .map(|(a, b)| {
                    let d = g.set_distance(a, b).ok().flatten().expect("connected") as f64;
                    let (x, y) = (g.volume(a) as f64, g.volume(b) as f64);
                    let num = ((total - x) * (total - y) / (x * y)).sqrt().ln();
                    let side = Side::new("distance", d, Relation::Le, distance_bound(num, lr));
                    (Instance::pair(a, b), vec![side])
                })
                .collect();
            Outcome { instances: items, seed: inst.seed, ..Default::default() }.detail("log_ratio", lr)
        }
        BoundId::Nrm7 | BoundId::Nrm8 => {
            let m = g.uniformity();
            pre.require(m.is_some(), "hypergraph is not uniform")
                .require(g.is_connected(), "hypergraph is disconnected");
            if let Some(o) = pre.failed() {
                return o;
            }
            let m = m.expect("checked");
            let m1 = (m - 1) as f64;
            let bound = if id == BoundId::Nrm7 {
                let (dco, mi) = two_degree_data(ctx, m);
                (0..n)
                    .map(|i| {
                        let d = g.degree(i) as f64;
                        let disc = 1.0 - 4.0 * m1 * d + 4.0 * m1 * m1 * d * dco * dco * mi[i];
                        (2.0 * m1 * d - 1.0 + disc.sqrt()) / (2.0 * m1 * d)
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            } else {
                let e = g.edge_count() as f64;
                let disc = 1.0 - 4.0 * m1 * dmin + 4.0 * m1 * m1 * dmax * dmax * e * e;
                (2.0 * m1 * dmax - 1.0 + disc.sqrt()) / (2.0 * m1 * dmin)
            };
            Outcome::single(vec![Side::new("lambda_n", ln, Relation::Le, bound)])
        }
        _ => unreachable!("not a normalized Laplacian bound"),
    }
}
