use super::subsets;
use super::{Instance, ceil_slack, AuditContext, BoundId, EvalOptions, Outcome, Pre, Relation, Side};
use crate::hypergraph::Hypergraph;
use crate::oracles::Measure;

/// `min_e (Σ_{i∈e} d_i − |e|)/|e|`.
pub(super) fn edge_degree_minimum(g: &Hypergraph) -> f64 {
    g.edges()
        .iter()
        .map(|e| (e.iter().map(|&v| g.degree(v)).sum::<usize>() as f64 - e.len() as f64) / e.len() as f64)
        .fold(f64::INFINITY, f64::min)
}

/// `ln((λₙ+λ₂)/(λₙ−λ₂))`, the common denominator of the distance bounds.
pub(super) fn log_ratio(l2: f64, ln: f64) -> f64 {
    ((ln + l2) / (ln - l2)).ln()
}

/// Bound on a distance `t`; negative values are clamped since `t >= 0`.
pub(super) fn distance_bound(numerator: f64, denominator: f64) -> f64 {
    ceil_slack(numerator / denominator).max(0.0)
}

/// `D_max` and `m_i` from the extremal-eigenvalue bounds.
pub(super) fn two_degree_data(ctx: &AuditContext<'_>, m: usize) -> (f64, Vec<f64>) {
    let g = ctx.g;
    let cod = ctx.codegrees();
    let dmax_co = cod.iter().flatten().copied().max().unwrap_or(0) as f64;
    let mi = (0..g.n())
        .map(|i| {
            let s: usize = g.neighbors(i).iter().map(|&j| g.degree(j)).sum();
            s as f64 / (g.degree(i) as f64 * (m - 1) as f64)
        })
        .collect();
    (dmax_co, mi)
}

pub(super) fn evaluate(ctx: &AuditContext<'_>, id: BoundId, opts: &EvalOptions) -> Outcome {
    let g = ctx.g;
    let spec = match ctx.laplacian() {
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
    let mut pre = Pre::default();

    match id {
        BoundId::Lap1 => {
            let top = spec.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            Outcome::single(vec![Side::new("max|lambda|", top, Relation::Le, 2.0 * dmax)])
        }
        BoundId::Lap2 => {
            pre.require(g.is_connected(), "hypergraph is disconnected")
                .require(n >= 3, "needs at least three vertices")
                .require(g.has_nonadjacent_pair(), "every pair of vertices is adjacent")
                .require(g.max_degree() <= g.corank(), "needs d_max <= cr");
            if let Some(o) = pre.failed() {
                return o;
            }
            match ctx.weak_cut() {
                Ok(w) => Outcome::single(vec![Side::new("lambda_2", l2, Relation::Le, w.kappa as f64)]),
                Err(e) => Outcome::not_applicable(e),
            }
        }
        BoundId::Lap3 => {
            pre.require(g.edge_count() > 0, "hypergraph has no edges").require(n >= 2, "needs at least two vertices");
            if let Some(o) = pre.failed() {
                return o;
            }
            let inst = subsets::subsets(g, opts);
            let lower_coef = (cr - 1.0) / (r * r / 4.0).floor();
            let items = inst
                .items
                .iter()
                .filter(|s| !s.is_empty() && s.len() < n)
                .map(|s| {
                    let sz = s.len() as f64;
                    let vol = sz * (nf - sz) / nf;
                    let b = g.edge_boundary(s).len() as f64;
                    let sides = vec![
                        Side::new("upper", b, Relation::Le, (r - 1.0) * ln * vol),
                        Side::new("lower", b, Relation::Ge, lower_coef * l2 * vol),
                    ];
                    (Instance::subset(s), sides)
                })
                .collect();
            Outcome { instances: items, seed: inst.seed, ..Default::default() }
        }
        BoundId::Lap4 | BoundId::Lap5 => {
            pre.require(g.is_connected(), "hypergraph is disconnected").require(n >= 2, "needs at least two vertices");
            if let Some(o) = pre.failed() {
                return o;
            }
            let h = match ctx.cheeger(Measure::Counting) {
                Ok(c) => c.value,
                Err(e) => return Outcome::not_applicable(e),
            };
            if id == BoundId::Lap4 {
                let bound = 2.0 * l2 * (cr - 1.0) / (r * (r - 1.0));
                Outcome::single(vec![Side::new("h", h, Relation::Ge, bound)])
            } else {
                let bound = (r - 1.0) * ((2.0 * dmax - l2) * l2).sqrt();
                Outcome::single(vec![Side::new("h", h, Relation::Lt, bound)])
            }
        }
        BoundId::Lap6 => {
            pre.require(g.is_connected(), "hypergraph is disconnected").require(n >= 2, "needs at least two vertices");
            if let Some(o) = pre.failed() {
                return o;
            }
            let diam = ctx.diameter().expect("connected") as f64;
            Outcome::single(vec![Side::new("diam", diam, Relation::Ge, 4.0 / (nf * (r - 1.0) * l2))])
        }
        BoundId::Lap7 | BoundId::Lap8 => {
            pre.require(g.is_connected(), "hypergraph is disconnected")
                .require(g.has_nonadjacent_pair(), "every pair of vertices is adjacent");
            if let Some(o) = pre.failed() {
                return o;
            }
            let lr = log_ratio(l2, ln);
            if id == BoundId::Lap8 {
                let diam = ctx.diameter().expect("connected") as f64;
                let bound = distance_bound((nf - 1.0).ln(), lr);
                return Outcome::single(vec![Side::new("diam", diam, Relation::Le, bound)]).detail("log_ratio", lr);
            }
            let inst = subsets::pairs(g, opts);
            let items = inst
                .items
                .iter()
                .filter(|(a, b)| !a.is_empty() && !b.is_empty() && a.len() < n && b.len() < n)
                .map(|(a, b)| {
                    let d = g.set_distance(a, b).ok().flatten().expect("connected") as f64;
                    let (x, y) = (a.len() as f64, b.len() as f64);
                    let num = ((nf - x) * (nf - y) / (x * y)).sqrt().ln();
                    let side = Side::new("distance", d, Relation::Le, distance_bound(num, lr));
                    (Instance::pair(a, b), vec![side])
                })
                .collect();
            Outcome { instances: items, seed: inst.seed, ..Default::default() }.detail("log_ratio", lr)
        }
        BoundId::Lap9 => {
            pre.require(g.is_connected(), "hypergraph is disconnected")
                .require(g.has_nonadjacent_pair(), "every pair of vertices is adjacent");
            if let Some(o) = pre.failed() {
                return o;
            }
            let lam = 2.0 * l2 / (ln + l2);
            let q = (1.0 - lam).powi(2);
            let second = 2.0 * ln * l2 / (ln * ln + l2 * l2);
            let inst = subsets::subsets(g, opts);
            let items = inst
                .items
                .iter()
                .filter(|s| !s.is_empty() && s.len() < n)
                .map(|s| {
                    let sz = s.len() as f64;
                    let ratio = g.vertex_boundary(s).len() as f64 / sz;
                    let first = (nf - sz) * (1.0 - q) / (q * (nf - sz) + sz);
                    let mut sides = vec![Side::new("expansion", ratio, Relation::Ge, first)];
                    if 2 * s.len() <= n {
                        sides.push(Side::new("half", ratio, Relation::Ge, second));
                    }
                    (Instance::subset(s), sides)
                })
                .collect();
            Outcome { instances: items, seed: inst.seed, ..Default::default() }
        }
        BoundId::Lap10 | BoundId::Lap11 => {
            pre.require(g.is_connected(), "hypergraph is disconnected")
                .require(n > 2, "needs more than two vertices");
            if let Some(o) = pre.failed() {
                return o;
            }
            let value = edge_degree_minimum(g);
            if id == BoundId::Lap10 {
                Outcome::single(vec![Side::new("lambda_2", l2, Relation::Le, value)])
            } else {
                Outcome::single(vec![Side::new("lambda_n", ln, Relation::Ge, value)])
            }
        }
        BoundId::Lap12 | BoundId::Lap13 => {
            let m = g.uniformity();
            pre.require(m.is_some_and(|m| m > 2), "needs an m-uniform hypergraph with m > 2")
                .require(g.is_connected(), "hypergraph is disconnected");
            if let Some(o) = pre.failed() {
                return o;
            }
            let m1 = (m.expect("checked") - 1) as f64;
            let bound = if id == BoundId::Lap12 {
                let (dco, mi) = two_degree_data(ctx, m1 as usize + 1);
                (0..n)
                    .map(|i| {
                        let d = g.degree(i) as f64;
                        let disc = 4.0 * m1 * m1 * d * mi[i] * dco * dco - 2.0 * d * m1 + 1.0;
                        (2.0 * d * m1 - 1.0 + disc.sqrt()) / (2.0 * m1)
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            } else {
                let dmin = g.min_degree() as f64;
                let e = g.edge_count() as f64;
                let disc = 4.0 * m1 * m1 * dmax * dmax * e * e - 2.0 * dmin * m1 + 1.0;
                (2.0 * dmax * m1 - 1.0 + disc.sqrt()) / (2.0 * m1)
            };
            Outcome::single(vec![Side::new("lambda_n", ln, Relation::Le, bound)])
        }
        BoundId::Lap14 => {
            let m = g.uniformity();
            pre.require(m.is_some(), "hypergraph is not uniform")
                .require(g.edge_count() > 0, "hypergraph has no edges");
            if let Some(o) = pre.failed() {
                return o;
            }
            let m1 = (m.expect("checked") - 1) as f64;
            let cod = ctx.codegrees();
            let mut best = f64::NEG_INFINITY;
            for i in 0..n {
                for &j in g.neighbors(i) {
                    // N(i) − N(j) contains j itself, and N(j) − N(i) contains i.
                    let mut s = 0.0;
                    for &k in g.neighbors(i) {
                        if !g.adjacent(k, j) {
                            s += cod[i][k] as f64;
                        } else if k != j {
                            s += (cod[i][k] as f64 - cod[j][k] as f64).abs();
                        }
                    }
                    for &k in g.neighbors(j) {
                        if !g.adjacent(k, i) {
                            s += cod[j][k] as f64;
                        }
                    }
                    let v = 0.5 * (g.degree(i) as f64 + g.degree(j) as f64 + s / m1);
                    best = best.max(v);
                }
            }
            Outcome::single(vec![Side::new("lambda_n", ln, Relation::Le, best)])
        }
        _ => unreachable!("not a Laplacian bound"),
    }
}
