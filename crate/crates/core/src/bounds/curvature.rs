use super::{Instance, AuditContext, BoundId, EvalOptions, Outcome, Pre, Relation, Side};
use crate::curvature::{cd_check, d_star, Dimension};

pub(super) fn evaluate(ctx: &AuditContext<'_>, id: BoundId, opts: &EvalOptions) -> Outcome {
    let g = ctx.g;
    let mut pre = Pre::default();
    pre.require(g.n() >= 2, "needs at least two vertices")
        .require(!g.has_isolated_vertex(), "random walk needs every degree positive");
    if id != BoundId::Crv1 {
        pre.require(g.is_connected(), "hypergraph is disconnected");
    }
    if let Some(o) = pre.failed() {
        return o;
    }
    match id {
        BoundId::Crv1 => {
            let ds = d_star(g);
            let k = 1.0 / ds - 1.0;
            match cd_check(g, Dimension::Finite(2.0), k) {
                Ok(cert) => Outcome::single(vec![Side::new("min_eigenvalue", cert.min_eigenvalue, Relation::Ge, 0.0)])
                    .detail("d_star", ds)
                    .detail("K", k),
                Err(e) => Outcome::not_applicable(e.to_string()),
            }
        }
        BoundId::Crv2 => {
            let l2 = match ctx.normalized() {
                Ok(s) => s.lambda(2),
                Err(e) => return Outcome::not_applicable(e),
            };
            let best = match ctx.best_k2() {
                Ok(k) => k,
                Err(e) => return Outcome::not_applicable(e),
            };
            let mut instances = Vec::new();
            let mut rejected = Vec::new();
            let mut out = Outcome::default().detail("best_K", best);
            if best > 0.0 {
                instances.push((2.0, best));
            }
            for &(m, k) in &opts.cd_pairs {
                if m > 1.0 && k > 0.0 {
                    let dim = if m.is_infinite() { Dimension::Infinite } else { Dimension::Finite(m) };
                    if let Ok(c) = cd_check(g, dim, k) {
                        if c.holds {
                            instances.push((m, k));
                            continue;
                        }
                    }
                }
                rejected.push(format!("CD({m}, {k}) does not hold with m > 1, K > 0"));
            }
            if instances.is_empty() {
                rejected.push(format!("best K for m = 2 is {best}, not positive"));
                out.reasons = rejected;
                return out;
            }
            if !rejected.is_empty() {
                out.note = Some(rejected.join("; "));
            }
            out.instances = instances
                .into_iter()
                .map(|(m, k)| {
                    // mK/(m-1) tends to K as m grows.
                    let bound = if m.is_infinite() { k } else { m * k / (m - 1.0) };
                    (Instance::Dimension { m, k }, vec![Side::new("lambda_2", l2, Relation::Ge, bound)])
                })
                .collect();
            out
        }
        BoundId::Crv3 => {
            let spec = match ctx.normalized() {
                Ok(s) => s,
                Err(e) => return Outcome::not_applicable(e),
            };
            let kappa = match ctx.min_kappa() {
                Ok(k) => k,
                Err(e) => return Outcome::not_applicable(e),
            };
            Outcome::single(vec![
                Side::new("lambda_2", spec.lambda(2), Relation::Ge, kappa),
                Side::new("lambda_n", spec.max(), Relation::Le, 2.0 - kappa),
            ])
            .detail("kappa", kappa)
        }
        _ => unreachable!("not a curvature bound"),
    }
}

#[cfg(test)]
mod tests {
    use crate::bounds::{evaluate, BoundId, EvalOptions, Verdict};
    use crate::families::complete_uniform;

    #[test]
    fn infinite_dimension_uses_the_limit() {
        let g = complete_uniform(3, 3).unwrap();
        let opts = EvalOptions { cd_pairs: vec![(f64::INFINITY, 0.5)], ..Default::default() };
        let r = evaluate(&g, BoundId::Crv2, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.margin.unwrap().is_finite());
        assert_eq!(r.instances, 2);
    }
}
