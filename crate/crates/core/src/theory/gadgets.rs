//! Pairs of graphs whose samples are hard to tell apart but whose target
//! counts differ.

use super::moments::moment_sequences;
use super::rational::{rat, solve, to_integers};
use crate::canon::{canonical_form, CanonCode, CanonForm};
use crate::count::{census, count_induced};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::motif::Motif;
use crate::sampling::{neighborhood_from_mask, SamplerKind};
use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct GadgetPair {
    pub name: String,
    pub h: Graph,
    pub h_prime: Graph,
    pub model: SamplerKind,
    /// Largest order `v` of connected patterns (black vertices, in the
    /// neighborhood model) whose counts agree between the two graphs.
    pub matched_order: usize,
    pub target: Motif,
    /// Target count in `h` minus target count in `h_prime`.
    pub gap: i128,
}

impl GadgetPair {
    fn new(name: &str, h: Graph, h_prime: Graph, model: SamplerKind, matched_order: usize, target: Motif) -> Result<GadgetPair> {
        let gap = count_induced(&target, &h)?.count as i128 - count_induced(&target, &h_prime)?.count as i128;
        Ok(GadgetPair { name: name.into(), h, h_prime, model, matched_order, target, gap })
    }

    /// Ceiling `C(m, v + 1) p^(v + 1)` on the total variation between the two
    /// sample laws, with `m` the common vertex count.
    pub fn tv_ceiling(&self, p: f64) -> f64 {
        let m = self.h.n() as u128;
        let v = self.matched_order as u128 + 1;
        crate::count::binom(m, v) as f64 * p.powi(v as i32)
    }
}

/// Triangle with a pendant edge versus the 4-cycle.
pub fn paw_cycle_pair() -> GadgetPair {
    GadgetPair::new("paw-vs-C4", graph::paw(), graph::cycle(4), SamplerKind::Subgraph, 2, Motif::triangle()).unwrap()
}

/// Triangle with a two-edge tail versus the 4-cycle with a pendant edge; both
/// have degree sequence (3, 2, 2, 2, 1).
pub fn tailed_triangle_pair() -> GadgetPair {
    let h = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (1, 3), (3, 4)]).unwrap();
    let hp = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4)]).unwrap();
    GadgetPair::new("tailed-triangle-vs-banner", h, hp, SamplerKind::Neighborhood, 1, Motif::triangle()).unwrap()
}

/// `K4 + 3 C4 + 12 paw + 12 P3` versus `6 diamond + 12 P4 + 4 K3 + 4 claw`.
pub fn k4_neighborhood_pair() -> GadgetPair {
    let h = Graph::weighted_union(&[
        (&graph::complete(4), 1),
        (&graph::cycle(4), 3),
        (&graph::paw(), 12),
        (&graph::path(3), 12),
    ]);
    let hp = Graph::weighted_union(&[
        (&graph::diamond(), 6),
        (&graph::path(4), 12),
        (&graph::complete(3), 4),
        (&graph::star(3), 4),
    ]);
    GadgetPair::new("K4-neighborhood", h, hp, SamplerKind::Neighborhood, 2, Motif::clique(4).unwrap()).unwrap()
}

pub fn builtin_pairs() -> Vec<GadgetPair> {
    let mut v = vec![paw_cycle_pair(), tailed_triangle_pair(), k4_neighborhood_pair()];
    v.push(matching_pair(&Motif::clique(4).unwrap()).expect("K4 pair"));
    v
}

/// Connected induced subgraph classes of `h`, ordered by edge count, then
/// vertex count, then code.
pub fn connected_pieces(h: &Motif) -> Result<Vec<CanonCode>> {
    let mut all = Vec::new();
    for size in 1..=h.order() {
        all.extend(census(h.graph(), size)?.into_keys());
    }
    all.sort_by_key(|c| (c.edge_count(), c.order(), *c));
    Ok(all)
}

/// Weighted unions `H`, `H'` of connected pieces of `h` with equal induced
/// counts of every connected graph on fewer vertices than `h`, and
/// `s(h, H) - s(h, H') = 1`.
pub fn matching_pair(h: &Motif) -> Result<GadgetPair> {
    if h.order() > 5 {
        return Err(Error::SizeOverflow("matching pairs are built for motifs on at most 5 vertices".into()));
    }
    let pieces = connected_pieces(h)?;
    let m = pieces.len();
    let mut b = vec![vec![rat(0); m]; m];
    for (j, host) in pieces.iter().enumerate() {
        let hg = host.to_graph();
        for (i, pat) in pieces.iter().enumerate() {
            if pat.order() <= host.order() {
                let c = census(&hg, pat.order())?.get(pat).copied().unwrap_or(0);
                b[i][j] = rat(c as i64);
            }
        }
    }
    let mut e = vec![rat(0); m];
    e[m - 1] = rat(1);
    let (x, _) = to_integers(&solve(b, e)?);
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let graphs: Vec<Graph> = pieces.iter().map(|c| c.to_graph()).collect();
    for (i, xi) in x.iter().enumerate() {
        let c = xi.abs().to_usize().ok_or_else(|| Error::SizeOverflow("weight too large".into()))?;
        match xi.sign() {
            Sign::Plus => pos.push((&graphs[i], c)),
            Sign::Minus => neg.push((&graphs[i], c)),
            Sign::NoSign => {}
        }
    }
    let name = format!("matching:{}", h.name());
    GadgetPair::new(&name, Graph::weighted_union(&pos), Graph::weighted_union(&neg), SamplerKind::Subgraph, h.order() - 1, h.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarMode {
    /// Degree power sums agree except the first; edge counts differ.
    FirstMoment,
    /// Degree power sums agree except the second; wedge counts differ.
    SecondMoment,
}

/// Unions of stars `S_{ℓx}` weighted by the moment sequences of order `k`.
pub fn star_family(k: usize, ell: usize, mode: StarMode) -> Result<GadgetPair> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ℓ must be positive".into()));
    }
    let ms = moment_sequences(k)?;
    let seq = match mode {
        StarMode::FirstMoment => ms.alpha.clone(),
        StarMode::SecondMoment => ms
            .beta
            .clone()
            .ok_or_else(|| Error::InvalidParameter("second-moment family needs k >= 2".into()))?,
    };
    let stars: Vec<Graph> = (1..=seq.len()).map(|x| graph::star(ell * x)).collect();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (i, a) in seq.iter().enumerate() {
        let c = a.abs().to_usize().ok_or_else(|| Error::SizeOverflow("weight too large".into()))?;
        if a.is_positive() {
            pos.push((&stars[i], c));
        } else if a.is_negative() {
            neg.push((&stars[i], c));
        }
    }
    let edge = graph::complete(2);
    let (target, name) = match mode {
        StarMode::FirstMoment => {
            // single edges on the lighter side keep the one-black edge counts equal
            let pad = ms.lcm.to_usize().ok_or_else(|| Error::SizeOverflow("lcm".into()))? / 2 * ell;
            neg.push((&edge, pad));
            (Motif::edge(), format!("stars1:k{k}:l{ell}"))
        }
        StarMode::SecondMoment => (Motif::wedge(), format!("stars2:k{k}:l{ell}")),
    };
    let h = Graph::weighted_union(&pos);
    let hp = Graph::weighted_union(&neg);
    let gap = match mode {
        StarMode::FirstMoment => h.edge_count() as i128 - hp.edge_count() as i128,
        StarMode::SecondMoment => {
            crate::count::star_incidences(&h, 2) as i128 - crate::count::star_incidences(&hp, 2) as i128
        }
    };
    Ok(GadgetPair { name, h, h_prime: hp, model: SamplerKind::Neighborhood, matched_order: 0, target, gap })
}

/// `Σ_v deg(v)^i`.
pub fn degree_power_sum(g: &Graph, i: u32) -> BigInt {
    (0..g.n() as u32).map(|v| BigInt::from(g.degree(v)).pow(i)).sum()
}

// ---------------------------------------------------------------------------
// Verification

/// Histogram of connected induced subgraphs with at most `v` vertices.
pub fn subgraph_census(g: &Graph, v: usize) -> Result<BTreeMap<CanonCode, u128>> {
    let mut out = BTreeMap::new();
    for size in 1..=v {
        out.extend(census(g, size)?);
    }
    Ok(out)
}

/// Histogram of neighborhood samples with exactly `1..=v` black vertices, up to
/// colored isomorphism. With `connected_only`, disconnected samples are skipped.
pub fn neighborhood_census(g: &Graph, v: usize, connected_only: bool) -> Result<BTreeMap<Vec<CanonForm>, u128>> {
    fn rec(
        g: &Graph,
        start: u32,
        left: usize,
        chosen: &mut Vec<u32>,
        connected_only: bool,
        out: &mut BTreeMap<Vec<CanonForm>, u128>,
    ) -> Result<()> {
        if !chosen.is_empty() {
            let mut mask = vec![false; g.n()];
            for &c in chosen.iter() {
                mask[c as usize] = true;
            }
            let s = neighborhood_from_mask(g, &mask);
            let colors: Vec<u8> = s.black.iter().map(|&b| b as u8).collect();
            if !connected_only || s.graph.is_connected() {
                let key = crate::canon::class_key(&s.graph, Some(&colors))?.0;
                *out.entry(key).or_insert(0) += 1;
            }
        }
        if left == 0 {
            return Ok(());
        }
        for x in start..g.n() as u32 {
            chosen.push(x);
            rec(g, x + 1, left - 1, chosen, connected_only, out)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut out = BTreeMap::new();
    rec(g, 0, v, &mut Vec::new(), connected_only, &mut out)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCheck {
    pub same_order: bool,
    pub same_size: bool,
    pub matched: bool,
    pub gap: i128,
}

impl PairCheck {
    pub fn ok(&self) -> bool {
        self.same_order && self.same_size && self.matched && self.gap != 0
    }
}

/// Checks the pair's matching claim from scratch.
pub fn verify_pair(pair: &GadgetPair) -> Result<PairCheck> {
    let matched = match pair.model {
        SamplerKind::Subgraph => subgraph_census(&pair.h, pair.matched_order)? == subgraph_census(&pair.h_prime, pair.matched_order)?,
        SamplerKind::Neighborhood => {
            neighborhood_census(&pair.h, pair.matched_order, true)?
                == neighborhood_census(&pair.h_prime, pair.matched_order, true)?
        }
    };
    Ok(PairCheck {
        same_order: pair.h.n() == pair.h_prime.n(),
        same_size: pair.h.edge_count() == pair.h_prime.edge_count(),
        matched,
        gap: pair.gap,
    })
}

/// True when `g` is the disjoint union described by `parts`.
pub fn is_union_of(g: &Graph, parts: &[(&Graph, usize)]) -> bool {
    let mut want: Vec<CanonForm> = Vec::new();
    for &(p, c) in parts {
        if !p.is_connected() {
            return false;
        }
        let f = canonical_form(p, None).expect("small part");
        want.extend(std::iter::repeat(f).take(c));
    }
    want.sort();
    crate::canon::class_key(g, None).map(|k| k.0 == want).unwrap_or(false)
}

/// Indices `i` in `0..=imax` where the degree power sums of the two graphs differ.
pub fn differing_degree_moments(a: &Graph, b: &Graph, imax: u32) -> Vec<u32> {
    (0..=imax).filter(|&i| !(degree_power_sum(a, i) - degree_power_sum(b, i)).is_zero()).collect()
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

/// Writes `<stem>.H.txt` and `<stem>.Hprime.txt` edge lists per pair, plus
/// `manifest.csv` with one row per pair.
pub fn write_catalog(pairs: &[GadgetPair], dir: &std::path::Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("manifest.csv"))?;
    w.write_record(["name", "model", "matched_order", "target", "gap", "vertices", "edges", "h_file", "h_prime_file"])?;
    for pair in pairs {
        let stem = file_stem(&pair.name);
        let (hf, hpf) = (format!("{stem}.H.txt"), format!("{stem}.Hprime.txt"));
        std::fs::write(dir.join(&hf), crate::io::format_edge_list(&pair.h))?;
        std::fs::write(dir.join(&hpf), crate::io::format_edge_list(&pair.h_prime))?;
        w.write_record([
            pair.name.clone(),
            pair.model.name().to_string(),
            pair.matched_order.to_string(),
            pair.target.name().to_string(),
            pair.gap.to_string(),
            pair.h.n().to_string(),
            pair.h.edge_count().to_string(),
            hf,
            hpf,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_pairs_verify() {
        for p in [paw_cycle_pair(), tailed_triangle_pair()] {
            let c = verify_pair(&p).unwrap();
            assert!(c.ok(), "{}: {c:?}", p.name);
            assert_eq!(c.gap, 1);
        }
        let p = tailed_triangle_pair();
        assert_eq!(p.h.degree_sequence(), vec![3, 2, 2, 2, 1]);
        assert_eq!(p.h_prime.degree_sequence(), vec![3, 2, 2, 2, 1]);
    }

    #[test]
    fn paw_cycle_pair_wedges_differ() {
        // the match stops at order 2
        let p = paw_cycle_pair();
        assert_ne!(subgraph_census(&p.h, 3).unwrap(), subgraph_census(&p.h_prime, 3).unwrap());
    }

    #[test]
    fn matching_pair_of_k4() {
        let p = matching_pair(&Motif::clique(4).unwrap()).unwrap();
        let (k1, k2, k3, k4) = (Graph::empty(1), graph::complete(2), graph::complete(3), graph::complete(4));
        assert!(is_union_of(&p.h, &[(&k4, 1), (&k2, 6)]));
        assert!(is_union_of(&p.h_prime, &[(&k3, 4), (&k1, 4)]));
        assert_eq!(p.gap, 1);
        assert!(verify_pair(&p).unwrap().ok());
    }

    #[test]
    fn matching_pair_of_c4() {
        let p = matching_pair(&Motif::cycle(4).unwrap()).unwrap();
        let (k2, p3, c4) = (graph::complete(2), graph::path(3), graph::cycle(4));
        assert!(is_union_of(&p.h, &[(&c4, 1), (&k2, 4)]));
        assert!(is_union_of(&p.h_prime, &[(&p3, 4)]));
        assert!(verify_pair(&p).unwrap().ok());
    }

    #[test]
    fn star_family_moments() {
        for k in 1..=3u32 {
            let p = star_family(k as usize, 2, StarMode::FirstMoment).unwrap();
            assert_eq!(differing_degree_moments(&p.h, &p.h_prime, k + 2), vec![1, k + 1, k + 2]);
            assert!(p.h.is_forest() && p.h_prime.is_forest());
            assert!(p.gap >= 1);
            if k >= 2 {
                let p = star_family(k as usize, 2, StarMode::SecondMoment).unwrap();
                assert_eq!(differing_degree_moments(&p.h, &p.h_prime, k + 2), vec![2, k + 1, k + 2]);
                assert!(p.gap >= 1);
            }
        }
        assert!(star_family(1, 1, StarMode::SecondMoment).is_err());
    }

    #[test]
    fn catalog_files() {
        let dir = std::env::temp_dir().join(format!("motifscope-catalog-{}", std::process::id()));
        write_catalog(&builtin_pairs(), &dir).unwrap();
        let manifest = std::fs::read_to_string(dir.join("manifest.csv")).unwrap();
        assert_eq!(manifest.lines().count(), 5);
        assert!(dir.join("matching_clique_4.Hprime.txt").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn star_family_k1() {
        let p = star_family(1, 1, StarMode::FirstMoment).unwrap();
        assert_eq!(p.h.n(), p.h_prime.n());
        assert_eq!(p.gap, 1);
        assert_eq!(degree_power_sum(&p.h, 0), degree_power_sum(&p.h_prime, 0));
    }
}
