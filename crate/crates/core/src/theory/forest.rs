//! Exact variance of the forest wedge estimator from overlap counts.

use crate::error::{Error, Result};
use crate::estimators::ForestWedgeCovariances;
use crate::graph::Graph;
use crate::sampling::check_p;

/// Ordered pairs of distinct wedges of a forest, by overlap type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct WedgePairCounts {
    pub wedges: u128,
    pub center_and_leaf: u128,
    pub swapped: u128,
    pub leaf_only: u128,
}

pub fn wedge_pair_counts(g: &Graph) -> Result<WedgePairCounts> {
    if !g.is_forest() {
        return Err(Error::InvalidParameter("graph is not a forest".into()));
    }
    let deg = |v: u32| g.degree(v) as u128;
    let mut c = WedgePairCounts::default();
    for v in 0..g.n() as u32 {
        let d = deg(v);
        let w = d * d.saturating_sub(1) / 2;
        c.wedges += w;
        c.center_and_leaf += w * 2 * d.saturating_sub(2);
        let arms: Vec<u128> = g.neighbors(v).iter().map(|&u| deg(u) - 1).collect();
        let s: u128 = arms.iter().sum();
        let s2: u128 = arms.iter().map(|a| a * a).sum();
        c.leaf_only += s * s - s2;
    }
    for (u, v) in g.edges() {
        c.swapped += 2 * (deg(u) - 1) * (deg(v) - 1);
    }
    Ok(c)
}

/// Exact variance of the forest wedge estimator on forest `g`.
pub fn forest_wedge_variance(g: &Graph, p: f64) -> Result<f64> {
    check_p(p)?;
    if p >= 1.0 {
        return Err(Error::InvalidParameter("forest wedge estimator needs p < 1".into()));
    }
    let c = wedge_pair_counts(g)?;
    let k = ForestWedgeCovariances::at(p);
    Ok(c.wedges as f64 * k.single
        + c.center_and_leaf as f64 * k.shared_center_and_leaf
        + c.swapped as f64 * k.shared_edge_swapped
        + c.leaf_only as f64 * k.shared_leaf)
}

/// `max(w / p², w d / p)`.
pub fn two_term_rate(w: f64, d: f64, p: f64) -> f64 {
    (w / (p * p)).max(w * d / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{forest_wedge_bound, Estimator, EstimatorConfig, Family};
    use crate::graph::*;
    use crate::motif::Motif;
    use crate::theory::exact_moments;

    fn est(p: f64) -> Estimator {
        Estimator::build(&EstimatorConfig::new(Family::ForestWedge, Motif::wedge(), p)).unwrap()
    }

    #[test]
    fn matches_enumeration() {
        let forests = [
            path(6),
            star(5),
            complete_tree(2, 3),
            complete_tree(3, 2),
            Graph::disjoint_union(&[&star(3), &path(4), &complete_tree(2, 2)]),
        ];
        for g in &forests {
            for &p in &[0.2, 0.5, 0.8] {
                let m = exact_moments(g, p, &[est(p)]).unwrap()[0];
                let v = forest_wedge_variance(g, p).unwrap();
                assert!((m.variance - v).abs() <= 1e-8 * (1.0 + v), "{v} vs {}", m.variance);
                let w = wedge_pair_counts(g).unwrap().wedges as f64;
                assert!((m.mean - w).abs() < 1e-8);
                assert!(v <= forest_wedge_bound(w, g.max_degree() as f64, p) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn pair_counts_on_star() {
        let c = wedge_pair_counts(&star(4)).unwrap();
        assert_eq!(c, WedgePairCounts { wedges: 6, center_and_leaf: 24, swapped: 0, leaf_only: 0 });
        assert!(wedge_pair_counts(&cycle(4)).is_err());
    }

    #[test]
    fn pair_counts_within_caps() {
        let trees = [
            complete_tree(6, 3),
            complete_tree(2, 6),
            Graph::disjoint_union(&[&star(7), &path(9)]),
        ];
        for g in &trees {
            let c = wedge_pair_counts(g).unwrap();
            let d = g.max_degree() as u128;
            assert!(c.center_and_leaf <= 2 * d.saturating_sub(2) * c.wedges);
            assert!(c.swapped <= 2 * (d - 1) * c.wedges);
            assert!(c.leaf_only <= (4 * d - 2) * c.wedges);
        }
    }

    #[test]
    fn variance_tracks_two_term_rate() {
        for &p in &[0.1, 0.3, 0.5] {
            for d in [3, 10, 40] {
                let g = complete_tree(d, 2);
                let w = wedge_pair_counts(&g).unwrap().wedges as f64;
                let dm = g.max_degree() as f64;
                let rate = two_term_rate(w, dm, p);
                let v = forest_wedge_variance(&g, p).unwrap();
                assert!(v <= 10.0 * rate && v >= rate / 10.0, "p={p} d={d}: {v} vs {rate}");
                assert!(forest_wedge_bound(w, dm, p) <= 10.0 * rate);
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn caps_hold_on_random_trees(parents in proptest::collection::vec(0usize..1000, 1..60)) {
            let edges: Vec<(u32, u32)> =
                parents.iter().enumerate().map(|(i, &r)| ((r % (i + 1)) as u32, i as u32 + 1)).collect();
            let g = Graph::from_edges(parents.len() + 1, edges).unwrap();
            let c = wedge_pair_counts(&g).unwrap();
            let d = g.max_degree() as u128;
            proptest::prop_assert!(c.leaf_only <= (4 * d).saturating_sub(2) * c.wedges);
            proptest::prop_assert!(c.swapped <= 2 * d.saturating_sub(1) * c.wedges);
        }
    }
}
