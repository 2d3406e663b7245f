//! Canonical labeling.
//!
//! Two independent routines live here. [`canonical_code`] handles graphs on at
//! most 8 vertices by minimizing a packed adjacency code over all vertex orders
//! that keep (color, degree) classes in a fixed order. [`canonical_form`] handles
//! larger connected graphs with partition refinement and a branching search,
//! skipping branches that only swap twin vertices.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_SMALL: usize = 8;

/// Packed code of a graph on at most 8 vertices. Equal codes mean isomorphic
/// (colored) graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonCode(pub u64);

impl CanonCode {
    pub fn order(self) -> usize {
        (self.0 >> 56) as usize
    }

    pub fn colors(self) -> u8 {
        ((self.0 >> 32) & 0xff) as u8
    }

    /// Adjacency rows of the canonical representative.
    pub fn rows(self) -> Vec<u8> {
        let k = self.order();
        let mut rows = vec![0u8; k];
        for j in 1..k {
            for i in 0..j {
                if self.0 >> pair_index(i, j) & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
        }
        rows
    }

    pub fn to_graph(self) -> Graph {
        rows_to_graph(&self.rows())
    }

    pub fn edge_count(self) -> usize {
        (self.0 & 0xfff_ffff).count_ones() as usize
    }
}

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

pub fn rows_to_graph(rows: &[u8]) -> Graph {
    let mut edges = Vec::new();
    for (j, &r) in rows.iter().enumerate() {
        for i in 0..j {
            if r >> i & 1 == 1 {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Graph::from_edges(rows.len(), edges).expect("ids in range")
}

pub fn graph_rows(g: &Graph) -> Result<Vec<u8>> {
    if g.n() > MAX_SMALL {
        return Err(Error::SizeOverflow(format!("{} vertices exceeds {}", g.n(), MAX_SMALL)));
    }
    Ok(g.adjacency_bits()?.into_iter().map(|r| r as u8).collect())
}

pub fn canonical_code(g: &Graph) -> Result<CanonCode> {
    Ok(code_of_rows(&graph_rows(g)?, 0))
}

/// `colors` bit `i` set means vertex `i` is black.
pub fn canonical_code_colored(g: &Graph, colors: u8) -> Result<CanonCode> {
    Ok(code_of_rows(&graph_rows(g)?, colors))
}

/// Code from adjacency rows (bit `j` of `rows[i]` set iff `i ~ j`).
pub fn code_of_rows(rows: &[u8], colors: u8) -> CanonCode {
    let k = rows.len();
    debug_assert!(k <= MAX_SMALL);
    // vertices ordered by (color, degree); permutations stay within these cells
    let key = |v: usize| ((colors >> v & 1) as u32) << 8 | rows[v].count_ones();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| key(v));
    let cell: Vec<u32> = order.iter().map(|&v| key(v)).collect();
    let color_bits = order.iter().enumerate().fold(0u64, |m, (i, &v)| m | ((colors >> v & 1) as u64) << i);
    let mut best = u64::MAX;
    let mut perm = vec![0usize; k];
    let mut used = 0u8;
    search_small(rows, &order, &cell, 0, 0, &mut perm, &mut used, &mut best);
    CanonCode((k as u64) << 56 | color_bits << 32 | best)
}

#[allow(clippy::too_many_arguments)]
fn search_small(
    rows: &[u8],
    order: &[usize],
    cell: &[u32],
    pos: usize,
    code: u64,
    perm: &mut [usize],
    used: &mut u8,
    best: &mut u64,
) {
    let k = rows.len();
    if pos == k {
        *best = (*best).min(code);
        return;
    }
    for (idx, &v) in order.iter().enumerate() {
        if cell[idx] != cell[pos] || *used >> v & 1 == 1 {
            continue;
        }
        let mut c = code;
        for (i, &u) in perm[..pos].iter().enumerate() {
            if rows[v] >> u & 1 == 1 {
                c |= 1 << pair_index(i, pos);
            }
        }
        perm[pos] = v;
        *used |= 1 << v;
        search_small(rows, order, cell, pos + 1, c, perm, used, best);
        *used &= !(1 << v);
    }
}

// ---------------------------------------------------------------------------
// General connected graphs

/// Canonical form of a (colored) graph on at most 64 vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonForm {
    pub n: u8,
    pub colors: Vec<u8>,
    pub bits: Vec<u64>,
}

impl CanonForm {
    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_graph(&self) -> Graph {
        let n = self.n as usize;
        let mut edges = Vec::new();
        for j in 1..n {
            for i in 0..j {
                let b = pair_index(i, j);
                if self.bits[b / 64] >> (b % 64) & 1 == 1 {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Graph::from_edges(n, edges).expect("ids in range")
    }

    /// Number of vertices carrying color `c`.
    pub fn count_color(&self, c: u8) -> usize {
        self.colors.iter().filter(|&&x| x == c).count()
    }
}

pub fn canonical_form(g: &Graph, colors: Option<&[u8]>) -> Result<CanonForm> {
    let rows = g.adjacency_bits()?;
    let zeros;
    let colors = match colors {
        Some(c) => c,
        None => {
            zeros = vec![0u8; g.n()];
            &zeros
        }
    };
    Ok(canonical_form_rows(&rows, colors))
}

pub fn canonical_form_rows(rows: &[u64], colors: &[u8]) -> CanonForm {
    let n = rows.len();
    let mut verts: Vec<u32> = (0..n as u32).collect();
    verts.sort_by_key(|&v| colors[v as usize]);
    let mut cells: Vec<Vec<u32>> = Vec::new();
    for v in verts {
        match cells.last_mut() {
            Some(c) if colors[c[0] as usize] == colors[v as usize] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    refine(rows, &mut cells);
    let mut best: Option<Vec<u64>> = None;
    search(rows, cells.clone(), &mut best);
    let order: Vec<u32> = cells.iter().flatten().copied().collect();
    // colors along any discrete refinement follow the initial cell order
    let mut canon_colors: Vec<u8> = order.iter().map(|&v| colors[v as usize]).collect();
    canon_colors.sort_unstable();
    CanonForm { n: n as u8, colors: canon_colors, bits: best.unwrap_or_default() }
}

fn refine(rows: &[u64], cells: &mut Vec<Vec<u32>>) {
    loop {
        let masks: Vec<u64> = cells.iter().map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
        let mut next = Vec::with_capacity(cells.len());
        for c in cells.iter() {
            if c.len() == 1 {
                next.push(c.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, u32)> = c
                .iter()
                .map(|&v| (masks.iter().map(|m| (rows[v as usize] & m).count_ones()).collect(), v))
                .collect();
            keyed.sort();
            let mut cur: Vec<u32> = Vec::new();
            for i in 0..keyed.len() {
                if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                    next.push(std::mem::take(&mut cur));
                }
                cur.push(keyed[i].1);
            }
            next.push(cur);
        }
        let done = next.len() == cells.len();
        *cells = next;
        if done {
            return;
        }
    }
}

fn search(rows: &[u64], cells: Vec<Vec<u32>>, best: &mut Option<Vec<u64>>) {
    let Some(t) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<u32> = cells.iter().map(|c| c[0]).collect();
        let code = pack(rows, &order);
        if best.as_ref().map_or(true, |b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    let mut tried: Vec<u32> = Vec::new();
    for &v in &cells[t] {
        if tried.iter().any(|&u| twins(rows, u, v)) {
            continue;
        }
        tried.push(v);
        let mut next = Vec::with_capacity(cells.len() + 1);
        next.extend_from_slice(&cells[..t]);
        next.push(vec![v]);
        next.push(cells[t].iter().copied().filter(|&u| u != v).collect());
        next.extend_from_slice(&cells[t + 1..]);
        refine(rows, &mut next);
        search(rows, next, best);
    }
}

fn twins(rows: &[u64], u: u32, v: u32) -> bool {
    rows[u as usize] & !(1 << v) == rows[v as usize] & !(1 << u)
}

fn pack(rows: &[u64], order: &[u32]) -> Vec<u64> {
    let n = order.len();
    let mut bits = vec![0u64; (n * n.saturating_sub(1) / 2).div_ceil(64)];
    for j in 1..n {
        for i in 0..j {
            if rows[order[i] as usize] >> order[j] & 1 == 1 {
                let b = pair_index(i, j);
                bits[b / 64] |= 1 << (b % 64);
            }
        }
    }
    bits
}

/// Isomorphism class of a possibly disconnected (colored) graph: the sorted
/// multiset of its components' canonical forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey(pub Vec<CanonForm>);

impl ClassKey {
    pub fn vertex_count(&self) -> usize {
        self.0.iter().map(|c| c.n as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.0.iter().map(CanonForm::edge_count).sum()
    }

    pub fn count_color(&self, c: u8) -> usize {
        self.0.iter().map(|f| f.count_color(c)).sum()
    }

    pub fn merge(&self, other: &ClassKey) -> ClassKey {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort();
        ClassKey(v)
    }
}

pub fn class_key(g: &Graph, colors: Option<&[u8]>) -> Result<ClassKey> {
    let mut parts = Vec::new();
    for comp in g.components() {
        let sub = g.induced_subgraph(&comp);
        let c: Option<Vec<u8>> = colors.map(|cs| comp.iter().map(|&v| cs[v as usize]).collect());
        parts.push(canonical_form(&sub, c.as_deref())?);
    }
    parts.sort();
    Ok(ClassKey(parts))
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.edge_count() == b.edge_count()
        && a.degree_sequence() == b.degree_sequence()
        && class_key(a, None).ok() == class_key(b, None).ok()
}
