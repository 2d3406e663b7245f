//! Exact computations over the full sample space of small graphs, and the
//! indistinguishable graph pairs behind the lower bounds.

pub mod distribution;
pub mod forest;
pub mod gadgets;
pub mod moments;
pub mod rational;

use crate::error::{Error, Result};
use crate::estimators::Estimator;
use crate::graph::Graph;
use crate::sampling::{check_p, neighborhood_from_mask, subgraph_from_mask, Sample, SamplerKind};
use rayon::prelude::*;

/// Largest vertex count for enumerating all `2^n` samples.
pub const MAX_ENUM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// Running weighted mean and centered second moment.
#[derive(Clone, Copy, Debug, Default)]
struct Acc {
    w: f64,
    mean: f64,
    m2: f64,
}

impl Acc {
    fn from_values(ws: &[f64], vs: &[f64]) -> Acc {
        let w: f64 = ws.iter().sum();
        if w == 0.0 {
            return Acc::default();
        }
        let mean = ws.iter().zip(vs).map(|(a, b)| a * b).sum::<f64>() / w;
        let m2 = ws.iter().zip(vs).map(|(a, b)| a * (b - mean) * (b - mean)).sum();
        Acc { w, mean, m2 }
    }

    fn merge(self, o: Acc) -> Acc {
        if self.w == 0.0 {
            return o;
        }
        if o.w == 0.0 {
            return self;
        }
        let w = self.w + o.w;
        let d = o.mean - self.mean;
        Acc { w, mean: self.mean + d * o.w / w, m2: self.m2 + o.m2 + d * d * self.w * o.w / w }
    }
}

/// Probability of each black set, indexed by its size.
pub fn mask_weights(n: usize, p: f64) -> Vec<f64> {
    let q = 1.0 - p;
    (0..=n).map(|l| p.powi(l as i32) * q.powi((n - l) as i32)).collect()
}

fn check_enumerable(g: &Graph) -> Result<()> {
    if g.n() > MAX_ENUM {
        Err(Error::SizeOverflow(format!("{} vertices exceeds the enumeration limit {MAX_ENUM}", g.n())))
    } else {
        Ok(())
    }
}

fn mask_vec(n: usize, m: u32) -> Vec<bool> {
    (0..n).map(|i| m >> i & 1 == 1).collect()
}

/// Exact mean and variance of each estimator over all `2^n` samples of `g`.
/// Every estimator must have been built for the same `p`.
pub fn exact_moments(g: &Graph, p: f64, ests: &[Estimator]) -> Result<Vec<Moments>> {
    check_p(p)?;
    check_enumerable(g)?;
    if ests.iter().any(|e| e.p() != p) {
        return Err(Error::InvalidParameter("estimators built for a different p".into()));
    }
    let n = g.n();
    let weights = mask_weights(n, p);
    let need_sub = ests.iter().any(|e| e.sampler() == SamplerKind::Subgraph);
    let need_nb = ests.iter().any(|e| e.sampler() == SamplerKind::Neighborhood);
    let total = 1u64 << n;
    let chunk = 1u64 << n.min(10);
    let chunks: Vec<Result<Vec<Acc>>> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut ws = Vec::with_capacity(chunk as usize);
            let mut vals = vec![Vec::with_capacity(chunk as usize); ests.len()];
            for m in c * chunk..(c + 1) * chunk {
                let m = m as u32;
                let mask = mask_vec(n, m);
                ws.push(weights[m.count_ones() as usize]);
                let sub = need_sub.then(|| Sample::Subgraph(subgraph_from_mask(g, &mask)));
                let nb = need_nb.then(|| Sample::Neighborhood(neighborhood_from_mask(g, &mask)));
                for (e, out) in ests.iter().zip(vals.iter_mut()) {
                    let s = match e.sampler() {
                        SamplerKind::Subgraph => sub.as_ref(),
                        SamplerKind::Neighborhood => nb.as_ref(),
                    };
                    out.push(e.estimate(s.expect("built above"))?);
                }
            }
            Ok(vals.iter().map(|v| Acc::from_values(&ws, v)).collect())
        })
        .collect();
    let mut acc = vec![Acc::default(); ests.len()];
    for c in chunks {
        for (a, b) in acc.iter_mut().zip(c?) {
            *a = a.merge(b);
        }
    }
    Ok(acc.into_iter().map(|a| Moments { mean: a.mean, variance: a.m2 / a.w }).collect())
}

/// Kernel value of a copy `t` under neighborhood sampling: `α` with exactly
/// one white vertex, `β` with none, zero otherwise.
fn kernel(t: &[u32], mask: u32, alpha: f64, beta: f64) -> f64 {
    let whites = t.iter().filter(|&&v| mask >> v & 1 == 0).count();
    match whites {
        0 => beta,
        1 => alpha,
        _ => 0.0,
    }
}

/// Exact covariance of the kernel values of two vertex sets of `g`.
pub fn kernel_covariance(g: &Graph, t1: &[u32], t2: &[u32], alpha: f64, beta: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    check_enumerable(g)?;
    let n = g.n();
    let weights = mask_weights(n, p);
    let (mut e1, mut e2, mut e12) = (0.0, 0.0, 0.0);
    for m in 0u32..1 << n {
        let w = weights[m.count_ones() as usize];
        let a = kernel(t1, m, alpha, beta);
        let b = kernel(t2, m, alpha, beta);
        e1 += w * a;
        e2 += w * b;
        e12 += w * a * b;
    }
    Ok(e12 - e1 * e2)
}

/// `E[f(T) f(T')]` for two copies of an `ω`-clique sharing `t` vertices.
pub fn clique_cross_moment(omega: usize, t: usize, alpha: f64, beta: f64, p: f64) -> f64 {
    let q = 1.0 - p;
    let (w, t) = (omega as i32, t as i32);
    let inner = alpha * (w - t) as f64 * q * p.powi(w - 1) + beta * p.powi(w);
    p.powi(-t) * (alpha * alpha * t as f64 * q * p.powi(2 * w - 1) + inner * inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{motif_weights, EstimatorConfig, Family, LowRegime};
    use crate::graph::*;
    use crate::motif::Motif;

    #[test]
    fn ht_edge_moments_on_k2() {
        let g = complete(2);
        let e = Estimator::build(&EstimatorConfig::new(Family::HtSubgraph, Motif::edge(), 0.5)).unwrap();
        let m = exact_moments(&g, 0.5, &[e]).unwrap()[0];
        assert!((m.mean - 1.0).abs() < 1e-12);
        assert!((m.variance - 3.0).abs() < 1e-12);
    }

    #[test]
    fn shared_vertex_covariance_vanishes() {
        let g = bowtie();
        let (a, b) = motif_weights(3, 0.5, 4, LowRegime::Unbiased);
        let c = kernel_covariance(&g, &[0, 1, 2], &[0, 3, 4], a, b, 0.5).unwrap();
        assert!(c.abs() < 1e-12);
        assert!((clique_cross_moment(3, 1, a, b, 0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_large_rejected() {
        let g = Graph::empty(21);
        let e = Estimator::build(&EstimatorConfig::new(Family::HtSubgraph, Motif::edge(), 0.5)).unwrap();
        assert!(matches!(exact_moments(&g, 0.5, &[e]), Err(Error::SizeOverflow(_))));
    }
}
