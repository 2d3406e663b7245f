//! Exact motif counts.
//!
//! The generic path enumerates connected vertex subsets with ESU and classifies
//! each one against the target. Edges, wedges, triangles and cliques have
//! dedicated counters that the dispatcher picks automatically.

use crate::canon::{code_of_rows, CanonCode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::Motif;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

/// ESU enumeration state for one graph and subset size.
pub struct Esu<'a> {
    g: &'a Graph,
    k: usize,
    closed: Vec<u32>,
    sub: Vec<u32>,
}

impl<'a> Esu<'a> {
    pub fn new(g: &'a Graph, k: usize) -> Esu<'a> {
        assert!(k >= 1);
        Esu { g, k, closed: vec![0; g.n()], sub: Vec::with_capacity(k) }
    }

    /// Visits every connected `k`-subset whose smallest vertex is `root`.
    pub fn run_root<F: FnMut(&[u32])>(&mut self, root: u32, f: &mut F) {
        self.push(root);
        let ext: Vec<u32> = self.g.neighbors(root).iter().copied().filter(|&u| u > root).collect();
        self.extend(ext, root, f);
        self.pop();
    }

    pub fn run_all<F: FnMut(&[u32])>(&mut self, f: &mut F) {
        for v in 0..self.g.n() as u32 {
            self.run_root(v, f);
        }
    }

    fn extend<F: FnMut(&[u32])>(&mut self, mut ext: Vec<u32>, root: u32, f: &mut F) {
        if self.sub.len() == self.k {
            f(&self.sub);
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            next.extend(self.g.neighbors(w).iter().copied().filter(|&u| u > root && self.closed[u as usize] == 0));
            self.push(w);
            self.extend(next, root, f);
            self.pop();
        }
    }

    fn push(&mut self, w: u32) {
        self.sub.push(w);
        self.closed[w as usize] += 1;
        for &u in self.g.neighbors(w) {
            self.closed[u as usize] += 1;
        }
    }

    fn pop(&mut self) {
        let w = self.sub.pop().expect("non-empty");
        self.closed[w as usize] -= 1;
        for &u in self.g.neighbors(w) {
            self.closed[u as usize] -= 1;
        }
    }
}

/// Adjacency rows of `G[sub]` in the order of `sub`.
pub fn subset_rows(g: &Graph, sub: &[u32]) -> [u8; 8] {
    let mut rows = [0u8; 8];
    for j in 1..sub.len() {
        for i in 0..j {
            if g.has_edge(sub[i], sub[j]) {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
    }
    rows
}

/// Cheap isomorphism test of a subset against a motif: edge count and degree
/// multiset first, canonical code only when those agree.
pub struct Matcher {
    k: usize,
    edges: u32,
    degrees: [u8; 8],
    code: CanonCode,
}

impl Matcher {
    pub fn new(h: &Motif) -> Matcher {
        let mut degrees = [0u8; 8];
        for (i, &d) in h.degrees().iter().enumerate() {
            degrees[i] = d as u8;
        }
        Matcher { k: h.order(), edges: h.size() as u32, degrees, code: h.code() }
    }

    pub fn matches(&self, rows: &[u8]) -> bool {
        let rows = &rows[..self.k];
        let twice: u32 = rows.iter().map(|r| r.count_ones()).sum();
        if twice != 2 * self.edges {
            return false;
        }
        let mut d = [0u8; 8];
        for (i, r) in rows.iter().enumerate() {
            d[i] = r.count_ones() as u8;
        }
        d[..self.k].sort_unstable_by(|a, b| b.cmp(a));
        d == self.degrees && code_of_rows(rows, 0) == self.code
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Wedge,
    Triangle,
    Clique,
    Enumeration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub count: u128,
    pub method: Method,
}

fn checked(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or_else(|| Error::CountOverflow("sum exceeds u128".into()))
}

/// Induced count `s(h, g)`, using a dedicated counter when one applies.
pub fn count_induced(h: &Motif, g: &Graph) -> Result<CountReport> {
    let k = h.order();
    let (count, method) = if k == 1 {
        (g.n() as u128, Method::Closed)
    } else if k == 2 {
        (g.edge_count() as u128, Method::Closed)
    } else if h.is_clique() {
        (if k == 3 { count_triangles(g) } else { count_cliques(g, k)? }, if k == 3 { Method::Triangle } else { Method::Clique })
    } else if k == 3 {
        (count_wedges(g), Method::Wedge)
    } else {
        (count_induced_generic(h, g)?, Method::Enumeration)
    };
    Ok(CountReport { count, method })
}

/// Induced count by subset enumeration only.
pub fn count_induced_generic(h: &Motif, g: &Graph) -> Result<u128> {
    let m = Matcher::new(h);
    let k = h.order();
    (0..g.n() as u32)
        .into_par_iter()
        .fold(
            || (Esu::new(g, k), 0u128),
            |(mut esu, mut acc), v| {
                esu.run_root(v, &mut |sub| {
                    if m.matches(&subset_rows(g, sub)) {
                        acc += 1;
                    }
                });
                (esu, acc)
            },
        )
        .map(|(_, a)| Ok(a))
        .try_reduce(|| 0, checked)
}

/// Counts of every connected induced `k`-vertex class.
pub fn census(g: &Graph, k: usize) -> Result<BTreeMap<CanonCode, u128>> {
    if k == 0 || k > 8 {
        return Err(Error::SizeOverflow(format!("census size {k} outside 1..=8")));
    }
    let maps: Vec<HashMap<CanonCode, u128>> = (0..g.n() as u32)
        .into_par_iter()
        .fold(
            || (Esu::new(g, k), HashMap::<u64, CanonCode>::new(), HashMap::new()),
            |(mut esu, mut memo, mut acc), v| {
                esu.run_root(v, &mut |sub| {
                    let rows = subset_rows(g, sub);
                    let raw = u64::from_le_bytes(rows);
                    let code = *memo.entry(raw).or_insert_with(|| code_of_rows(&rows[..k], 0));
                    *acc.entry(code).or_insert(0u128) += 1;
                });
                (esu, memo, acc)
            },
        )
        .map(|(_, _, acc)| acc)
        .collect();
    let mut out = BTreeMap::new();
    for m in maps {
        for (c, n) in m {
            let e = out.entry(c).or_insert(0u128);
            *e = checked(*e, n)?;
        }
    }
    Ok(out)
}

pub fn count_triangles(g: &Graph) -> u128 {
    let rank = |v: u32| (g.degree(v), v);
    (0..g.n() as u32)
        .into_par_iter()
        .map(|u| {
            let out: Vec<u32> = g.neighbors(u).iter().copied().filter(|&v| rank(v) > rank(u)).collect();
            let mut t = 0u128;
            for (i, &v) in out.iter().enumerate() {
                for &w in &out[i + 1..] {
                    if g.has_edge(v, w) {
                        t += 1;
                    }
                }
            }
            t
        })
        .sum()
}

/// Induced wedges: `Σ C(d, 2) - 3 t`.
pub fn count_wedges(g: &Graph) -> u128 {
    star_incidences(g, 2) - 3 * count_triangles(g)
}

/// `Σ_v C(d_v, k)`: the number of `k`-leaf stars for `k >= 2`.
pub fn star_incidences(g: &Graph, k: usize) -> u128 {
    (0..g.n() as u32).map(|v| binom(g.degree(v) as u128, k as u128)).sum()
}

pub fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1u128;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `k`-clique count by pivoting over degree-ordered out-neighborhoods.
pub fn count_cliques(g: &Graph, k: usize) -> Result<u128> {
    match k {
        0 => return Ok(1),
        1 => return Ok(g.n() as u128),
        2 => return Ok(g.edge_count() as u128),
        _ => {}
    }
    let rank = |v: u32| (g.degree(v), v);
    (0..g.n() as u32)
        .into_par_iter()
        .map(|v| {
            let out: Vec<u32> = g.neighbors(v).iter().copied().filter(|&u| rank(u) > rank(v)).collect();
            let mut acc = 0u128;
            pivot(g, out, 1, 0, k, &mut acc);
            Ok(acc)
        })
        .try_reduce(|| 0, checked)
}

fn pivot(g: &Graph, cand: Vec<u32>, required: usize, held: usize, k: usize, acc: &mut u128) {
    if required > k || required + held + cand.len() < k {
        return;
    }
    if cand.is_empty() {
        *acc += binom(held as u128, (k - required) as u128);
        return;
    }
    let nbrs_in = |p: u32| cand.iter().filter(|&&u| u != p && g.has_edge(p, u)).count();
    let p = *cand.iter().max_by_key(|&&p| (nbrs_in(p), std::cmp::Reverse(p))).expect("non-empty");
    let inside: Vec<u32> = cand.iter().copied().filter(|&u| u != p && g.has_edge(p, u)).collect();
    pivot(g, inside, required, held + 1, k, acc);
    let outside: Vec<u32> = cand.iter().copied().filter(|&u| u != p && !g.has_edge(p, u)).collect();
    for (i, &v) in outside.iter().enumerate() {
        let next: Vec<u32> = cand
            .iter()
            .copied()
            .filter(|&u| u != v && !outside[..i].contains(&u) && g.has_edge(v, u))
            .collect();
        pivot(g, next, required + 1, held, k, acc);
    }
}

/// Injective maps from the vertices of `h` onto the vertices of `host` (same
/// order) sending edges to edges.
pub fn embeddings(h: &[u8], host: &[u8]) -> u64 {
    fn go(h: &[u8], host: &[u8], pos: usize, map: &mut [usize], used: u8) -> u64 {
        if pos == h.len() {
            return 1;
        }
        let mut total = 0;
        for t in 0..host.len() {
            if used >> t & 1 == 1 {
                continue;
            }
            let ok = (0..pos).all(|i| h[pos] >> i & 1 == 0 || host[t] >> map[i] & 1 == 1);
            if ok {
                map[pos] = t;
                total += go(h, host, pos + 1, map, used | 1 << t);
            }
        }
        total
    }
    if h.len() != host.len() {
        return 0;
    }
    go(h, host, 0, &mut vec![0; h.len()], 0)
}

/// Copies of `h` among the spanning subgraphs of `host` (same vertex count).
pub fn spanning_copies(h: &Motif, host: CanonCode) -> u64 {
    let hr = h.rows();
    embeddings(&hr, &host.rows()) / embeddings(&hr, &hr)
}

/// Non-induced count `n(h, g)`.
pub fn count_subgraph(h: &Motif, g: &Graph) -> Result<u128> {
    let k = h.order();
    if k == 1 {
        return Ok(g.n() as u128);
    }
    let mut total = 0u128;
    for (code, c) in census(g, k)? {
        if code.edge_count() >= h.size() {
            let m = spanning_copies(h, code) as u128;
            total = checked(total, m.checked_mul(c).ok_or_else(|| Error::CountOverflow("product".into()))?)?;
        }
    }
    Ok(total)
}

/// Classes `H'` on the vertex set of `h` containing it, with the number of
/// copies of `h` inside each, so that `n(h, G) = Σ coeff · s(H', G)`.
/// Ordered by edge count, then code.
pub fn noninduced_expansion(h: &Motif) -> Result<Vec<(Motif, u64)>> {
    let k = h.order();
    if k > 7 {
        return Err(Error::SizeOverflow(format!("expansion limited to 7 vertices, got {k}")));
    }
    let rows = h.rows();
    let mut missing = Vec::new();
    for j in 1..k {
        for i in 0..j {
            if rows[i] >> j & 1 == 0 {
                missing.push((i, j));
            }
        }
    }
    let mut classes: BTreeMap<(usize, CanonCode), ()> = BTreeMap::new();
    for mask in 0u32..1 << missing.len() {
        let mut r = rows.clone();
        for (b, &(i, j)) in missing.iter().enumerate() {
            if mask >> b & 1 == 1 {
                r[i] |= 1 << j;
                r[j] |= 1 << i;
            }
        }
        let c = code_of_rows(&r, 0);
        classes.insert((c.edge_count(), c), ());
    }
    classes
        .into_keys()
        .map(|(_, c)| Ok((Motif::from_code(format!("{:#x}", c.0), c)?, spanning_copies(h, c))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;
    use proptest::prelude::*;

    fn random_graph(n: usize, mask: &[bool]) -> Graph {
        let mut edges = Vec::new();
        let mut b = 0;
        for j in 1..n as u32 {
            for i in 0..j {
                if mask[b % mask.len()] {
                    edges.push((i, j));
                }
                b += 1;
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    /// Brute force over all `k`-subsets, connected or not.
    fn oracle_induced(h: &Motif, g: &Graph) -> u128 {
        let k = h.order();
        let n = g.n();
        let mut c = 0;
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != k {
                continue;
            }
            let sub: Vec<u32> = (0..n as u32).filter(|&v| mask >> v & 1 == 1).collect();
            let s = g.induced_subgraph(&sub);
            if crate::canon::is_isomorphic(&s, h.graph()) {
                c += 1;
            }
        }
        c
    }

    /// Injective homomorphisms divided by automorphisms, over the whole graph.
    fn oracle_subgraph(h: &Motif, g: &Graph) -> u128 {
        let hg = h.graph();
        let k = hg.n();
        fn go(hg: &Graph, g: &Graph, pos: usize, map: &mut Vec<u32>) -> u128 {
            if pos == hg.n() {
                return 1;
            }
            let mut t = 0;
            for x in 0..g.n() as u32 {
                if map.contains(&x) {
                    continue;
                }
                if (0..pos).all(|i| !hg.has_edge(i as u32, pos as u32) || g.has_edge(map[i], x)) {
                    map.push(x);
                    t += go(hg, g, pos + 1, map);
                    map.pop();
                }
            }
            t
        }
        let _ = k;
        go(hg, g, 0, &mut Vec::new()) / go(hg, hg, 0, &mut Vec::new())
    }

    #[test]
    fn named_counts() {
        assert_eq!(count_induced(&Motif::wedge(), &complete(4)).unwrap().count, 0);
        assert_eq!(count_subgraph(&Motif::wedge(), &complete(4)).unwrap(), 12);
        assert_eq!(count_induced(&Motif::wedge(), &diamond()).unwrap().count, 2);
        assert_eq!(count_subgraph(&Motif::wedge(), &diamond()).unwrap(), 8);
        assert_eq!(count_induced(&Motif::triangle(), &petersen()).unwrap().count, 0);
        assert_eq!(count_induced(&Motif::cycle(5).unwrap(), &petersen()).unwrap().count, 12);
        assert_eq!(count_subgraph(&Motif::cycle(4).unwrap(), &complete(4)).unwrap(), 3);
    }

    #[test]
    fn cliques_in_blow_ups() {
        let b = Graph::blow_up(&complete(4), &[2, 2, 2, 2]).unwrap();
        assert_eq!(count_cliques(&b, 4).unwrap(), 16);
        assert_eq!(count_triangles(&Graph::blow_up(&complete(3), &[2, 2, 2]).unwrap()), 8);
        assert_eq!(count_cliques(&complete(8), 5).unwrap(), 56);
    }

    #[test]
    fn dispatch_reports_method() {
        let g = petersen();
        assert_eq!(count_induced(&Motif::triangle(), &g).unwrap().method, Method::Triangle);
        assert_eq!(count_induced(&Motif::clique(4).unwrap(), &g).unwrap().method, Method::Clique);
        assert_eq!(count_induced(&Motif::wedge(), &g).unwrap().method, Method::Wedge);
        assert_eq!(count_induced(&Motif::paw(), &g).unwrap().method, Method::Enumeration);
    }

    #[test]
    fn wedge_and_c4_expansions() {
        let w = noninduced_expansion(&Motif::wedge()).unwrap();
        assert_eq!(w.iter().map(|(m, c)| (m.clone(), *c)).collect::<Vec<_>>(), vec![(Motif::wedge(), 1), (Motif::triangle(), 3)]);
        let c4 = noninduced_expansion(&Motif::cycle(4).unwrap()).unwrap();
        let got: Vec<(Motif, u64)> = c4;
        assert_eq!(
            got,
            vec![(Motif::cycle(4).unwrap(), 1), (Motif::diamond(), 1), (Motif::clique(4).unwrap(), 3)]
        );
    }

    #[test]
    fn census_totals() {
        let g = petersen();
        let c = census(&g, 4).unwrap();
        // connected 4-sets in the Petersen graph are paths or claws
        let total: u128 = c.values().sum();
        assert_eq!(c.len(), 2);
        assert_eq!(total, 60 + 10 * 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn generic_matches_brute_force(n in 3usize..=8, mask in prop::collection::vec(any::<bool>(), 28)) {
            let g = random_graph(n, &mask);
            for h in [Motif::wedge(), Motif::triangle(), Motif::paw(), Motif::claw(), Motif::cycle(4).unwrap(), Motif::diamond()] {
                if h.order() <= n {
                    let want = oracle_induced(&h, &g);
                    prop_assert_eq!(count_induced_generic(&h, &g).unwrap(), want);
                    prop_assert_eq!(count_induced(&h, &g).unwrap().count, want);
                }
            }
        }

        #[test]
        fn cliques_match_enumeration(n in 4usize..=11, mask in prop::collection::vec(prop::bool::weighted(0.6), 55)) {
            let g = random_graph(n, &mask);
            for k in 3..=5 {
                let h = Motif::clique(k).unwrap();
                prop_assert_eq!(count_cliques(&g, k).unwrap(), count_induced_generic(&h, &g).unwrap());
            }
        }

        #[test]
        fn expansion_identity(n in 4usize..=8, mask in prop::collection::vec(any::<bool>(), 28)) {
            let g = random_graph(n, &mask);
            for h in [Motif::wedge(), Motif::cycle(4).unwrap(), Motif::claw(), Motif::path(4).unwrap()] {
                let direct = oracle_subgraph(&h, &g);
                prop_assert_eq!(count_subgraph(&h, &g).unwrap(), direct);
                let mut via = 0u128;
                for (hp, c) in noninduced_expansion(&h).unwrap() {
                    via += c as u128 * count_induced(&hp, &g).unwrap().count;
                }
                prop_assert_eq!(via, direct);
            }
        }
    }
}
