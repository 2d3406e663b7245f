//! Unbiased estimators of motif counts from a single sample.
//!
//! Each estimator is configured once (family, motif, `p`, optional degree
//! bound `d`) and then evaluated on samples. Weights are resolved at build time.

use crate::count::{count_induced, count_subgraph, star_incidences};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::Motif;
use crate::sampling::{
    check_p, count_observed_motif, wedge_color_counts, BicoloredSample, Sample, SamplerKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Induced count in a subgraph sample, scaled by `p^-k`.
    HtSubgraph,
    /// Equal weights on observed copies with at most one white vertex.
    HtNeighborhood,
    LinearEdge,
    LinearMotif,
    AdaptiveEdge,
    ForestWedge,
    ForestWedgeDegree,
    WedgeLinearAlt,
    PlanarTriangle,
    NonInducedC4,
}

impl Family {
    pub fn sampler(self) -> SamplerKind {
        match self {
            Family::HtSubgraph => SamplerKind::Subgraph,
            _ => SamplerKind::Neighborhood,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::HtSubgraph => "ht_subgraph",
            Family::HtNeighborhood => "ht_neighborhood",
            Family::LinearEdge => "linear_edge",
            Family::LinearMotif => "linear_motif",
            Family::AdaptiveEdge => "adaptive_edge",
            Family::ForestWedge => "forest_wedge",
            Family::ForestWedgeDegree => "forest_wedge_degree",
            Family::WedgeLinearAlt => "wedge_linear_alt",
            Family::PlanarTriangle => "planar_triangle",
            Family::NonInducedC4 => "noninduced_c4",
        }
    }

    /// Maps a command-line estimator name plus sampler and motif onto a family.
    pub fn resolve(name: &str, sampler: SamplerKind, motif: &Motif) -> Result<Family> {
        let is_edge = *motif == Motif::edge();
        let fam = match (name, sampler) {
            ("ht", SamplerKind::Subgraph) => Family::HtSubgraph,
            ("ht", SamplerKind::Neighborhood) => Family::HtNeighborhood,
            ("linear", SamplerKind::Neighborhood) if is_edge => Family::LinearEdge,
            ("linear", SamplerKind::Neighborhood) => Family::LinearMotif,
            ("adaptive", SamplerKind::Neighborhood) => Family::AdaptiveEdge,
            ("forest-wedge", SamplerKind::Neighborhood) => Family::ForestWedge,
            ("forest-wedge-degree", SamplerKind::Neighborhood) => Family::ForestWedgeDegree,
            ("wedge-linear-alt", SamplerKind::Neighborhood) => Family::WedgeLinearAlt,
            ("planar-triangle", SamplerKind::Neighborhood) => Family::PlanarTriangle,
            ("noninduced-c4", SamplerKind::Neighborhood) => Family::NonInducedC4,
            (
                "linear" | "adaptive" | "forest-wedge" | "forest-wedge-degree" | "wedge-linear-alt"
                | "planar-triangle" | "noninduced-c4",
                _,
            ) => {
                return Err(Error::ModelMismatch(format!(
                    "estimator {name} does not run on {} samples",
                    sampler.name()
                )))
            }
            _ => return Err(Error::InvalidParameter(format!("unknown estimator {name:?}"))),
        };
        Ok(fam)
    }

    /// The motif a fixed-target family always estimates, if any.
    pub fn fixed_motif(self) -> Option<Motif> {
        match self {
            Family::LinearEdge | Family::AdaptiveEdge => Some(Motif::edge()),
            Family::ForestWedge | Family::ForestWedgeDegree | Family::WedgeLinearAlt => Some(Motif::wedge()),
            Family::PlanarTriangle => Some(Motif::triangle()),
            Family::NonInducedC4 => Some(Motif::cycle(4).unwrap()),
            _ => None,
        }
    }
}

/// Weights used by the clique/motif linear estimator when `p <= 1/d`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LowRegime {
    /// `α = 1/(k p^(k-1))`, `β` solved from the unbiasedness constraint.
    #[default]
    Unbiased,
    /// `α = 1/(k p^(k-1))`, `β = 1/p^k`, as printed; biased.
    Literal,
}

#[derive(Clone, Debug)]
pub struct EstimatorConfig {
    pub family: Family,
    pub motif: Motif,
    pub p: f64,
    pub d: Option<usize>,
    pub weights: Option<(f64, f64)>,
    pub low_regime: LowRegime,
}

impl EstimatorConfig {
    pub fn new(family: Family, motif: Motif, p: f64) -> EstimatorConfig {
        let motif = family.fixed_motif().unwrap_or(motif);
        EstimatorConfig { family, motif, p, d: None, weights: None, low_regime: LowRegime::default() }
    }

    pub fn with_d(mut self, d: usize) -> EstimatorConfig {
        self.d = Some(d);
        self
    }

    pub fn with_weights(mut self, alpha: f64, beta: f64) -> EstimatorConfig {
        self.weights = Some((alpha, beta));
        self
    }

    pub fn with_low_regime(mut self, r: LowRegime) -> EstimatorConfig {
        self.low_regime = r;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Ht { scale: f64 },
    Linear { alpha: f64, beta: f64 },
    Adaptive,
    Wedge { lambda: f64, alpha: f64, beta: f64 },
    WedgeDegree,
    C4,
}

#[derive(Clone, Debug)]
pub struct Estimator {
    family: Family,
    motif: Motif,
    p: f64,
    kind: Kind,
}

// ---------------------------------------------------------------------------
// Weight formulas

/// Minimum-variance edge weights for a degree bound `d`.
pub fn linear_edge_weights(p: f64, d: usize) -> (f64, f64) {
    let d = d as f64;
    let den = p * (2.0 + (d - 1.0) * p);
    ((1.0 + d * p) / den, (1.0 - d * (1.0 - 2.0 * p)) / den)
}

/// Simpler edge weights with the same order of risk: equal weights
/// `1/(p² + 2pq)` when `p <= 1/d`, otherwise `(1/p, (1 - 2q)/p²)`.
pub fn transparent_edge_weights(p: f64, d: usize) -> (f64, f64) {
    let q = 1.0 - p;
    if p * d as f64 > 1.0 {
        (1.0 / p, (1.0 - 2.0 * q) / (p * p))
    } else {
        let w = 1.0 / (p * p + 2.0 * p * q);
        (w, w)
    }
}

/// Weights `(α, β)` on copies with one white vertex and with none.
pub fn motif_weights(k: usize, p: f64, d: usize, low: LowRegime) -> (f64, f64) {
    let q = 1.0 - p;
    let kf = k as f64;
    let pk1 = p.powi(k as i32 - 1);
    if p * d as f64 > 1.0 {
        (1.0 / pk1, (1.0 - kf * q) / (pk1 * p))
    } else {
        let alpha = 1.0 / (kf * pk1);
        let beta = match low {
            LowRegime::Unbiased => (1.0 - kf * pk1 * q * alpha) / (pk1 * p),
            LowRegime::Literal => 1.0 / (pk1 * p),
        };
        (alpha, beta)
    }
}

/// Equal weights `1 / P(copy has at most one white vertex)`.
pub fn ht_neighborhood_weight(k: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    1.0 / (k as f64 * p.powi(k as i32 - 1) * q + p.powi(k as i32))
}

pub fn adaptive_f(p: f64, x: f64) -> f64 {
    let q = 1.0 - p;
    (p * x + q) / (p * (p * x + 2.0 * q))
}

pub fn adaptive_g(p: f64, x: f64, y: f64) -> f64 {
    let q = 1.0 - p;
    (1.0 - p * q * (adaptive_f(p, x) + adaptive_f(p, y))) / (p * p)
}

/// `(λ, α, β)` for white-center, white-end and all-black wedges.
pub fn forest_wedge_weights(p: f64) -> (f64, f64, f64) {
    let q = 1.0 - p;
    (1.0 / (p * p), 1.0 / (2.0 * p * q), 0.0)
}

pub fn wedge_alt_weights(p: f64) -> Result<(f64, f64, f64)> {
    let den = 4.0 * p - 3.0;
    if den.abs() < 1e-6 {
        return Err(Error::InvalidParameter(format!("wedge weights singular at p = {p}")));
    }
    Ok(((5.0 - 8.0 * p) / (p * p * den), 1.0 / (p * p), (3.0 * p - 2.0) / (p * p * p * den)))
}

pub fn planar_triangle_weights(p: f64) -> (f64, f64) {
    let q = 1.0 - p;
    let alpha = 1.0 / (2.0 * q * p * p);
    (alpha, (1.0 - 3.0 * p * p * q * alpha) / (p * p * p))
}

fn require_d(cfg: &EstimatorConfig) -> Result<usize> {
    match cfg.d {
        Some(0) => Err(Error::InvalidParameter("degree bound d must be at least 1".into())),
        Some(d) => Ok(d),
        None => Err(Error::InvalidParameter(format!("{} needs a degree bound d", cfg.family.name()))),
    }
}

fn require_p_below_one(cfg: &EstimatorConfig) -> Result<()> {
    if cfg.p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{} needs p < 1", cfg.family.name())))
    }
}

impl Estimator {
    pub fn build(cfg: &EstimatorConfig) -> Result<Estimator> {
        check_p(cfg.p)?;
        let p = cfg.p;
        let k = cfg.motif.order();
        let kind = match cfg.family {
            Family::HtSubgraph => Kind::Ht { scale: p.powi(-(k as i32)) },
            Family::HtNeighborhood => {
                let w = ht_neighborhood_weight(k, p);
                Kind::Linear { alpha: w, beta: w }
            }
            Family::LinearEdge => {
                let (alpha, beta) = match cfg.weights {
                    Some(w) => w,
                    None => linear_edge_weights(p, require_d(cfg)?),
                };
                Kind::Linear { alpha, beta }
            }
            Family::LinearMotif => {
                let (alpha, beta) = match cfg.weights {
                    Some(w) => w,
                    None => motif_weights(k, p, require_d(cfg)?, cfg.low_regime),
                };
                Kind::Linear { alpha, beta }
            }
            Family::AdaptiveEdge => Kind::Adaptive,
            Family::ForestWedge => {
                require_p_below_one(cfg)?;
                let (lambda, alpha, beta) = forest_wedge_weights(p);
                Kind::Wedge { lambda, alpha, beta }
            }
            Family::WedgeLinearAlt => {
                let (lambda, alpha, beta) = wedge_alt_weights(p)?;
                Kind::Wedge { lambda, alpha, beta }
            }
            Family::ForestWedgeDegree => Kind::WedgeDegree,
            Family::PlanarTriangle => {
                require_p_below_one(cfg)?;
                let (alpha, beta) = planar_triangle_weights(p);
                Kind::Linear { alpha, beta }
            }
            Family::NonInducedC4 => Kind::C4,
        };
        Ok(Estimator { family: cfg.family, motif: cfg.motif.clone(), p, kind })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn motif(&self) -> &Motif {
        &self.motif
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sampler(&self) -> SamplerKind {
        self.family.sampler()
    }

    /// `(α, β)` for the linear families.
    pub fn linear_weights(&self) -> Option<(f64, f64)> {
        match self.kind {
            Kind::Linear { alpha, beta } => Some((alpha, beta)),
            _ => None,
        }
    }

    pub fn estimate(&self, sample: &Sample) -> Result<f64> {
        match (&self.kind, sample) {
            (Kind::Ht { scale }, Sample::Subgraph(s)) => {
                Ok(count_induced(&self.motif, &s.graph)?.count as f64 * scale)
            }
            (Kind::Ht { .. }, _) => Err(Error::ModelMismatch("subgraph estimator given a neighborhood sample".into())),
            (_, Sample::Neighborhood(s)) => Ok(self.estimate_neighborhood(s)),
            (_, Sample::Subgraph(_)) => Err(Error::ModelMismatch(format!(
                "{} needs a neighborhood sample",
                self.family.name()
            ))),
        }
    }

    fn estimate_neighborhood(&self, s: &BicoloredSample) -> f64 {
        let p = self.p;
        match self.kind {
            Kind::Linear { alpha, beta } => {
                let c = count_observed_motif(&self.motif, s);
                alpha * c.one_white as f64 + beta * c.all_black as f64
            }
            Kind::Adaptive => {
                let g = &s.graph;
                g.edges()
                    .map(|(u, v)| {
                        let du = g.degree(u) as f64;
                        let dv = g.degree(v) as f64;
                        match (s.black[u as usize], s.black[v as usize]) {
                            (true, true) => adaptive_g(p, du, dv),
                            (true, false) => adaptive_f(p, du),
                            _ => adaptive_f(p, dv),
                        }
                    })
                    .sum()
            }
            Kind::Wedge { lambda, alpha, beta } => {
                let w = wedge_color_counts(s);
                lambda * w.white_center as f64 + alpha * w.white_end as f64 + beta * w.all_black as f64
            }
            Kind::WedgeDegree => {
                let g = &s.graph;
                (0..g.n() as u32)
                    .filter(|&v| s.black[v as usize])
                    .map(|v| {
                        let d = g.degree(v) as f64;
                        d * (d - 1.0) / 2.0
                    })
                    .sum::<f64>()
                    / p
            }
            Kind::C4 => {
                let g = &s.graph;
                let mut common = vec![0u32; g.n()];
                let mut raw = 0u128;
                for a in 0..g.n() as u32 {
                    if !s.black[a as usize] {
                        continue;
                    }
                    let mut touched = Vec::new();
                    for &b in g.neighbors(a) {
                        for &c in g.neighbors(b) {
                            if c > a && s.black[c as usize] {
                                if common[c as usize] == 0 {
                                    touched.push(c);
                                }
                                common[c as usize] += 1;
                            }
                        }
                    }
                    for c in touched {
                        let m = common[c as usize] as u128;
                        raw += m * (m.saturating_sub(1)) / 2;
                        common[c as usize] = 0;
                    }
                }
                raw as f64 / (2.0 * p * p)
            }
            Kind::Ht { .. } => unreachable!("handled by estimate"),
        }
    }

    /// The parent-graph quantity this estimator is unbiased for.
    pub fn target(&self, g: &Graph) -> Result<u128> {
        match self.family {
            Family::ForestWedgeDegree => Ok(star_incidences(g, 2)),
            Family::NonInducedC4 => count_subgraph(&self.motif, g),
            _ => Ok(count_induced(&self.motif, g)?.count),
        }
    }
}

// ---------------------------------------------------------------------------
// Variance bounds

/// Closed-form variance bound for `family` on a parent with `count` copies of
/// the target (of order `k`) and maximum degree `d`.
pub fn variance_bound(family: Family, k: usize, count: u128, d: usize, p: f64) -> Result<f64> {
    check_p(p)?;
    let s = count as f64;
    let df = d as f64;
    let q = 1.0 - p;
    let kf = k as f64;
    let b = match family {
        Family::HtSubgraph => {
            s * kf * 2f64.powi(k as i32) * p.powi(-(k as i32)).max(df.powi(k as i32 - 1) / p)
        }
        Family::HtNeighborhood if k == 2 => {
            let tau = p * p + 2.0 * p * q;
            2.0 * s * p * (1.0 + 3.0 * df) / (tau * tau)
        }
        Family::LinearEdge => s * (df + 1.0) * q * q / (p * (2.0 + (df - 1.0) * p)),
        Family::LinearMotif => {
            let a = df / p.powi(k as i32 - 1);
            let c = df.powi(k as i32 - 2) / (p * p);
            s * kf.powi(3) * 2f64.powi(k as i32 + 1) * a.min(c)
        }
        Family::ForestWedge => forest_wedge_bound(s, df, p),
        _ => {
            return Err(Error::Unsupported(format!("no closed-form variance bound for {}", family.name())));
        }
    };
    Ok(b)
}

/// Variance bound for the forest wedge estimator on a forest with `w` wedges
/// and maximum degree `d`: each overlap type's covariance times a cap on its
/// number of ordered pairs (`2(d-2)w`, `2(d-1)w` and `(4d-2)w`).
pub fn forest_wedge_bound(w: f64, d: f64, p: f64) -> f64 {
    let c = ForestWedgeCovariances::at(p);
    w * (c.single
        + 2.0 * (d - 2.0).max(0.0) * c.shared_center_and_leaf.max(0.0)
        + 2.0 * (d - 1.0).max(0.0) * c.shared_edge_swapped
        + (4.0 * d - 2.0).max(0.0) * c.shared_leaf)
}

/// Covariances between kernel terms of two wedges of a forest, by overlap type.
/// Wedges sharing only their center, or whose only common vertex is the center
/// of one of them, are uncorrelated.
#[derive(Clone, Copy, Debug)]
pub struct ForestWedgeCovariances {
    pub single: f64,
    /// Same center and one common leaf.
    pub shared_center_and_leaf: f64,
    /// Common edge, each wedge centered at a different endpoint.
    pub shared_edge_swapped: f64,
    /// Only a common leaf.
    pub shared_leaf: f64,
}

impl ForestWedgeCovariances {
    pub fn at(p: f64) -> ForestWedgeCovariances {
        let q = 1.0 - p;
        let delta = q / p + 0.5 - p / (2.0 * q);
        ForestWedgeCovariances {
            single: q / (p * p) + 1.0 / (2.0 * q) - 1.0,
            shared_center_and_leaf: 1.0 / (4.0 * q) + q / p - 1.0,
            shared_edge_swapped: 0.25,
            shared_leaf: p * q * delta * delta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;
    use crate::sampling::neighborhood_from_mask;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn edge_weights_satisfy_constraint() {
        for &p in &[0.1, 0.3, 0.5, 0.9] {
            for d in 1..20 {
                let (a, b) = linear_edge_weights(p, d);
                assert!(close(2.0 * p * (1.0 - p) * a + p * p * b, 1.0));
            }
        }
        let (a, b) = linear_edge_weights(0.5, 2);
        assert!(close(a, 1.6) && close(b, 0.8));
    }

    #[test]
    fn equal_edge_weights_are_neighborhood_ht() {
        let g = petersen();
        let p = 0.3;
        let (a, b) = transparent_edge_weights(p, 3);
        assert!(close(a, b));
        let lin = Estimator::build(&EstimatorConfig::new(Family::LinearEdge, Motif::edge(), p).with_weights(a, b)).unwrap();
        let ht = Estimator::build(&EstimatorConfig::new(Family::HtNeighborhood, Motif::edge(), p)).unwrap();
        for m in [0u32, 0b1011, 0b11_0110_0101, 0x3ff] {
            let mask: Vec<bool> = (0..10).map(|i| m >> i & 1 == 1).collect();
            let s = Sample::Neighborhood(neighborhood_from_mask(&g, &mask));
            assert!(close(lin.estimate(&s).unwrap(), ht.estimate(&s).unwrap()));
        }
        let (a, b) = transparent_edge_weights(0.5, 4);
        assert!(close(2.0 * 0.25 * a + 0.25 * b, 1.0));
    }

    #[test]
    fn motif_weight_examples() {
        let (a, b) = motif_weights(3, 0.5, 4, LowRegime::Unbiased);
        assert!(close(a, 4.0) && close(b, -4.0));
        let (a, b) = motif_weights(2, 0.5, 2, LowRegime::Literal);
        assert!(close(a, 1.0) && close(b, 4.0));
        let (a, b) = motif_weights(2, 0.5, 2, LowRegime::Unbiased);
        assert!(close(a, 1.0) && close(b, 2.0));
    }

    #[test]
    fn adaptive_values() {
        assert!(close(adaptive_f(0.5, 2.0), 1.5));
        assert!(close(adaptive_f(0.5, 1.0), 4.0 / 3.0));
        assert!(close(adaptive_g(0.5, 1.0, 1.0), 4.0 / 3.0));
    }

    #[test]
    fn wedge_weights() {
        let (l, a, b) = wedge_alt_weights(0.5).unwrap();
        let (p, q) = (0.5, 0.5);
        assert!(close(p * p * q * l + 2.0 * p * p * q * a + p * p * p * b, 1.0));
        assert!(wedge_alt_weights(0.75).is_err());
        let (a, b) = planar_triangle_weights(0.5);
        assert!(close(a, 4.0) && close(b, -4.0));
    }

    #[test]
    fn degree_wedge_on_star() {
        let g = star(3);
        let s = Sample::Neighborhood(neighborhood_from_mask(&g, &[true, false, false, false]));
        let e = Estimator::build(&EstimatorConfig::new(Family::ForestWedgeDegree, Motif::wedge(), 0.5)).unwrap();
        assert!(close(e.estimate(&s).unwrap(), 6.0));
    }

    #[test]
    fn c4_on_black_square() {
        let g = cycle(4);
        let s = Sample::Neighborhood(neighborhood_from_mask(&g, &[true; 4]));
        let e = Estimator::build(&EstimatorConfig::new(Family::NonInducedC4, Motif::edge(), 0.5)).unwrap();
        assert!(close(e.estimate(&s).unwrap(), 1.0 / 0.25));
    }

    #[test]
    fn bounds() {
        assert!(close(variance_bound(Family::LinearEdge, 2, 1, 1, 0.5).unwrap(), 0.5));
        assert!(variance_bound(Family::AdaptiveEdge, 2, 1, 1, 0.5).is_err());
        let ht = variance_bound(Family::HtSubgraph, 3, 1, 2, 0.5).unwrap();
        assert!(close(ht, 3.0 * 8.0 * 8.0));
    }

    #[test]
    fn mismatched_sample_rejected() {
        let g = path(3);
        let sub = crate::sampling::sample_from_mask(&g, &[true; 3], SamplerKind::Subgraph);
        let e = Estimator::build(&EstimatorConfig::new(Family::AdaptiveEdge, Motif::edge(), 0.5)).unwrap();
        assert!(matches!(e.estimate(&sub), Err(Error::ModelMismatch(_))));
        let cfg = EstimatorConfig::new(Family::LinearEdge, Motif::edge(), 0.5);
        assert!(Estimator::build(&cfg).is_err());
        assert!(Estimator::build(&cfg.clone().with_d(0)).is_err());
        assert!(Family::resolve("adaptive", SamplerKind::Subgraph, &Motif::edge()).is_err());
        assert_eq!(Family::resolve("linear", SamplerKind::Neighborhood, &Motif::triangle()).unwrap(), Family::LinearMotif);
    }
}
