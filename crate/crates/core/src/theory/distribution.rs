//! Exact and Monte Carlo laws of the sampled graph up to isomorphism.
//!
//! A class is stored with its count of black sets of each size, so the law at
//! any `p` is a polynomial evaluation. Disjoint unions are handled by
//! convolving the laws of their components.

use super::{check_enumerable, MAX_ENUM};
use crate::canon::{class_key, ClassKey};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampling::{check_p, draw, neighborhood_from_mask, rng_for, subgraph_from_mask, Sample, SamplerKind};
use std::collections::{BTreeMap, HashMap};

/// Support size at which convolution gives up.
pub const MAX_SUPPORT: usize = 2_000_000;

/// For each class, the number of black sets of each size producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCounts {
    pub n: usize,
    pub model: SamplerKind,
    pub counts: HashMap<ClassKey, Vec<u128>>,
}

#[derive(Clone, Debug)]
pub struct ClassDistribution {
    pub p: f64,
    pub probs: HashMap<ClassKey, f64>,
}

pub fn sample_class(s: &Sample) -> Result<ClassKey> {
    match s {
        Sample::Subgraph(x) => class_key(&x.graph, None),
        Sample::Neighborhood(x) => {
            let colors: Vec<u8> = x.black.iter().map(|&b| b as u8).collect();
            class_key(&x.graph, Some(&colors))
        }
    }
}

fn eval(poly: &[u128], n: usize, p: f64) -> f64 {
    let q = 1.0 - p;
    poly.iter().enumerate().map(|(l, &c)| c as f64 * p.powi(l as i32) * q.powi((n - l) as i32)).sum()
}

impl ClassCounts {
    pub fn probability(&self, key: &ClassKey, p: f64) -> f64 {
        self.counts.get(key).map_or(0.0, |poly| eval(poly, self.n, p))
    }

    pub fn distribution(&self, p: f64) -> Result<ClassDistribution> {
        check_p(p)?;
        Ok(ClassDistribution { p, probs: self.counts.iter().map(|(k, c)| (k.clone(), eval(c, self.n, p))).collect() })
    }

    fn convolve(&self, other: &ClassCounts) -> Result<ClassCounts> {
        let n = self.n + other.n;
        let mut out: HashMap<ClassKey, Vec<u128>> = HashMap::new();
        for (ka, pa) in &self.counts {
            for (kb, pb) in &other.counts {
                let poly = out.entry(ka.merge(kb)).or_insert_with(|| vec![0; n + 1]);
                for (i, &a) in pa.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (j, &b) in pb.iter().enumerate() {
                        poly[i + j] += a * b;
                    }
                }
            }
            if out.len() > MAX_SUPPORT {
                return Err(Error::SizeOverflow(format!("class support exceeds {MAX_SUPPORT}")));
            }
        }
        Ok(ClassCounts { n, model: self.model, counts: out })
    }
}

/// Class counts of a graph small enough to enumerate directly.
pub fn class_counts_monolithic(g: &Graph, model: SamplerKind) -> Result<ClassCounts> {
    check_enumerable(g)?;
    let n = g.n();
    let mut counts: HashMap<ClassKey, Vec<u128>> = HashMap::new();
    for m in 0u32..1 << n {
        let mask: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
        let s = match model {
            SamplerKind::Subgraph => Sample::Subgraph(subgraph_from_mask(g, &mask)),
            SamplerKind::Neighborhood => Sample::Neighborhood(neighborhood_from_mask(g, &mask)),
        };
        counts.entry(sample_class(&s)?).or_insert_with(|| vec![0; n + 1])[m.count_ones() as usize] += 1;
    }
    Ok(ClassCounts { n, model, counts })
}

/// Class counts, enumerating each connected component and convolving.
pub fn class_counts(g: &Graph, model: SamplerKind) -> Result<ClassCounts> {
    let mut by_shape: BTreeMap<ClassKey, (Graph, usize)> = BTreeMap::new();
    for comp in g.components() {
        if comp.len() > MAX_ENUM {
            return Err(Error::SizeOverflow(format!("component of {} vertices", comp.len())));
        }
        let sub = g.induced_subgraph(&comp);
        let key = class_key(&sub, None)?;
        by_shape.entry(key).or_insert((sub, 0)).1 += 1;
    }
    let mut total = ClassCounts { n: 0, model, counts: HashMap::from([(ClassKey::default(), vec![1])]) };
    for (_, (sub, reps)) in by_shape {
        let one = class_counts_monolithic(&sub, model)?;
        for _ in 0..reps {
            total = total.convolve(&one)?;
        }
    }
    Ok(total)
}

pub fn exact_distribution(g: &Graph, p: f64, model: SamplerKind) -> Result<ClassDistribution> {
    class_counts(g, model)?.distribution(p)
}

pub fn tv_distance(a: &ClassDistribution, b: &ClassDistribution) -> f64 {
    let mut s = 0.0;
    for (k, &pa) in &a.probs {
        s += (pa - b.probs.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &pb) in &b.probs {
        if !a.probs.contains_key(k) {
            s += pb;
        }
    }
    s / 2.0
}

/// Total variation between the sample laws of two graphs on the same number
/// of vertices, cancelling matching classes exactly before evaluating.
pub fn tv_exact(a: &ClassCounts, b: &ClassCounts, p: f64) -> Result<f64> {
    check_p(p)?;
    if a.n != b.n || a.model != b.model {
        return Err(Error::InvalidParameter("laws over different vertex counts or models".into()));
    }
    let q = 1.0 - p;
    let n = a.n;
    let zero = vec![0u128; n + 1];
    let mut s = 0.0;
    let keys = a.counts.keys().chain(b.counts.keys().filter(|k| !a.counts.contains_key(*k)));
    for k in keys {
        let pa = a.counts.get(k).unwrap_or(&zero);
        let pb = b.counts.get(k).unwrap_or(&zero);
        let diff: f64 = (0..=n)
            .map(|l| {
                let d = pa.get(l).copied().unwrap_or(0) as i128 - pb.get(l).copied().unwrap_or(0) as i128;
                d as f64 * p.powi(l as i32) * q.powi((n - l) as i32)
            })
            .sum();
        s += diff.abs();
    }
    Ok(s / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McTv {
    pub tv: f64,
    pub classes: usize,
    /// `2 sqrt(classes / trials)`: the plug-in estimate's typical upward bias.
    pub noise_bound: f64,
}

/// Plug-in estimate of the total variation from `trials` samples of each graph.
pub fn mc_tv_estimate(a: &Graph, b: &Graph, p: f64, model: SamplerKind, trials: usize, seed: u64) -> Result<McTv> {
    check_p(p)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let mut hist: HashMap<ClassKey, (i64, i64)> = HashMap::new();
    let mut ra = rng_for(seed, 0);
    let mut rb = rng_for(seed, 1);
    for _ in 0..trials {
        hist.entry(sample_class(&draw(a, p, model, &mut ra)?)?).or_default().0 += 1;
        hist.entry(sample_class(&draw(b, p, model, &mut rb)?)?).or_default().1 += 1;
    }
    let diff: i64 = hist.values().map(|(x, y)| (x - y).abs()).sum();
    let classes = hist.len();
    Ok(McTv {
        tv: diff as f64 / (2.0 * trials as f64),
        classes,
        noise_bound: 2.0 * (classes as f64 / trials as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    #[test]
    fn probabilities_sum_to_one() {
        for g in [petersen(), bowtie(), Graph::weighted_union(&[(&complete(3), 3), (&path(2), 2)])] {
            for model in [SamplerKind::Subgraph, SamplerKind::Neighborhood] {
                let d = exact_distribution(&g, 0.3, model).unwrap();
                let s: f64 = d.probs.values().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn convolution_matches_monolithic() {
        let g = Graph::weighted_union(&[(&paw(), 2), (&path(3), 1)]);
        for model in [SamplerKind::Subgraph, SamplerKind::Neighborhood] {
            assert_eq!(class_counts(&g, model).unwrap(), class_counts_monolithic(&g, model).unwrap());
        }
    }

    #[test]
    fn identical_graphs_have_zero_tv() {
        let a = class_counts(&cycle(5), SamplerKind::Subgraph).unwrap();
        assert_eq!(tv_exact(&a, &a, 0.4).unwrap(), 0.0);
        let m = mc_tv_estimate(&cycle(5), &cycle(5), 0.4, SamplerKind::Subgraph, 2000, 1).unwrap();
        assert!(m.tv <= m.noise_bound);
    }

    #[test]
    fn isomorphic_relabeling_gives_same_law() {
        let g = petersen();
        let h = g.relabel(&[3, 1, 4, 0, 5, 9, 2, 6, 8, 7]).unwrap();
        let a = class_counts(&g, SamplerKind::Neighborhood).unwrap();
        let b = class_counts(&h, SamplerKind::Neighborhood).unwrap();
        assert_eq!(a, b);
    }
}
