//! Simple undirected graphs in compressed adjacency form.
//!
//! Vertices are dense `u32` ids `0..n`. Neighbor lists are sorted, which makes
//! `has_edge` a binary search and keeps every derived structure deterministic.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

/// What `Graph::build` threw away while normalizing an edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Dropped {
    pub duplicates: usize,
    pub self_loops: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph { offsets: vec![0; n + 1], adj: Vec::new() }
    }

    /// Builds a graph, silently dropping self-loops and repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        Graph::build(n, edges).map(|(g, _)| g)
    }

    pub fn build<I>(n: usize, edges: I) -> Result<(Graph, Dropped)>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut dropped = Dropped::default();
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: x as u64, n });
                }
            }
            if u == v {
                dropped.self_loops += 1;
                continue;
            }
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        offsets.push(0);
        for list in lists.iter_mut() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            dropped.duplicates += before - list.len();
            adj.extend_from_slice(list);
            offsets.push(adj.len());
        }
        // each repeated edge was seen from both endpoints
        dropped.duplicates /= 2;
        Ok((Graph { offsets, adj }, dropped))
    }

    fn from_sorted_lists(lists: Vec<Vec<u32>>) -> Graph {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut adj = Vec::new();
        offsets.push(0);
        for l in lists {
            adj.extend(l);
            offsets.push(adj.len());
        }
        Graph { offsets, adj }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.adj[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as u32).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32)
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Degrees sorted in decreasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n() as u32).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[u32]) -> Graph {
        let mut local = vec![u32::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let lists = vertices
            .iter()
            .map(|&v| {
                let mut l: Vec<u32> = self
                    .neighbors(v)
                    .iter()
                    .filter_map(|&u| {
                        let x = local[u as usize];
                        (x != u32::MAX).then_some(x)
                    })
                    .collect();
                l.sort_unstable();
                l
            })
            .collect();
        Graph::from_sorted_lists(lists)
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Graph> {
        if perm.len() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n()
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p as usize >= perm.len() || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])))
    }

    /// Disjoint union; vertices of later parts are shifted past earlier ones.
    pub fn disjoint_union(parts: &[&Graph]) -> Graph {
        let mut lists = Vec::new();
        let mut shift = 0u32;
        for g in parts {
            for v in 0..g.n() as u32 {
                lists.push(g.neighbors(v).iter().map(|&u| u + shift).collect());
            }
            shift += g.n() as u32;
        }
        Graph::from_sorted_lists(lists)
    }

    /// `Σ count · graph` as a single disjoint union.
    pub fn weighted_union(parts: &[(&Graph, usize)]) -> Graph {
        let mut flat = Vec::new();
        for &(g, c) in parts {
            flat.extend(std::iter::repeat(g).take(c));
        }
        Graph::disjoint_union(&flat)
    }

    /// Disjoint union plus every edge between the two sides.
    pub fn join(a: &Graph, b: &Graph) -> Graph {
        let na = a.n() as u32;
        let edges = a
            .edges()
            .chain(b.edges().map(|(u, v)| (u + na, v + na)))
            .chain((0..na).flat_map(|u| (0..b.n() as u32).map(move |v| (u, v + na))))
            .collect::<Vec<_>>();
        Graph::from_edges(a.n() + b.n(), edges).expect("ids in range")
    }

    /// Replaces vertex `i` of `h` by an independent set of `sizes[i]` vertices,
    /// joining two blobs completely when the original vertices were adjacent.
    pub fn blow_up(h: &Graph, sizes: &[usize]) -> Result<Graph> {
        if sizes.len() != h.n() {
            return Err(Error::InvalidParameter(format!(
                "{} blob sizes for {} vertices",
                sizes.len(),
                h.n()
            )));
        }
        let mut start = vec![0u32; h.n() + 1];
        for i in 0..h.n() {
            start[i + 1] = start[i] + sizes[i] as u32;
        }
        let mut edges = Vec::new();
        for (a, b) in h.edges() {
            for u in start[a as usize]..start[a as usize + 1] {
                for v in start[b as usize]..start[b as usize + 1] {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(start[h.n()] as usize, edges)
    }

    pub fn complement(&self) -> Graph {
        let n = self.n() as u32;
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect();
        Graph::from_edges(self.n(), edges).expect("ids in range")
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n as u32 {
            if seen[s as usize] {
                continue;
            }
            seen[s as usize] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in self.neighbors(v) {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.n()
    }

    /// Adjacency rows as bitmasks; only valid for `n <= 64`.
    pub fn adjacency_bits(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::SizeOverflow(format!("{} vertices exceeds 64", self.n())));
        }
        Ok((0..self.n() as u32)
            .map(|v| self.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Standard families

pub fn complete(n: usize) -> Graph {
    let n32 = n as u32;
    Graph::from_edges(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v)))).unwrap()
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n as u32).map(|v| (v - 1, v))).unwrap()
}

/// Cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n as u32).map(|v| (v, (v + 1) % n as u32))).unwrap()
}

/// Star with `leaves` leaves; the center is vertex 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves as u32).map(|v| (0, v))).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::join(&Graph::empty(a), &Graph::empty(b))
}

/// Cycle on `rim` vertices plus a hub adjacent to all of them.
pub fn wheel(rim: usize) -> Graph {
    Graph::join(&Graph::empty(1), &cycle(rim))
}

pub fn petersen() -> Graph {
    let outer = (0..5u32).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5u32).map(|i| (i, i + 5));
    let inner = (0..5u32).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
}

/// K4 minus one edge.
pub fn diamond() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Triangle with a pendant vertex attached to vertex 0.
pub fn paw() -> Graph {
    Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap()
}

/// Two triangles sharing vertex 0.
pub fn bowtie() -> Graph {
    Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]).unwrap()
}

/// Two copies of `K_k` glued at a single vertex.
pub fn cliques_sharing_vertex(k: usize) -> Graph {
    let a = complete(k);
    let shift = (k - 1) as u32;
    let edges = a
        .edges()
        .chain(a.edges().map(|(u, v)| {
            let m = |x: u32| if x == 0 { 0 } else { x + shift };
            (m(u), m(v))
        }))
        .collect::<Vec<_>>();
    Graph::from_edges(2 * k - 1, edges).unwrap()
}

/// Complete `arity`-ary tree of the given depth (depth 0 is a single vertex).
pub fn complete_tree(arity: usize, depth: usize) -> Graph {
    let mut edges = Vec::new();
    let mut level = vec![0u32];
    let mut next_id = 1u32;
    for _ in 0..depth {
        let mut next = Vec::new();
        for &p in &level {
            for _ in 0..arity {
                edges.push((p, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        level = next;
    }
    Graph::from_edges(next_id as usize, edges).unwrap()
}

/// Erdős–Rényi graph: each pair independently present with probability `delta`.
pub fn erdos_renyi(n: usize, delta: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("edge probability {delta} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen::<f64>() < delta {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_drops_loops_and_duplicates() {
        let (g, d) = Graph::build(3, [(0, 1), (1, 0), (1, 1), (1, 2), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(d, Dropped { duplicates: 2, self_loops: 1 });
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(Graph::from_edges(2, [(0, 2)]), Err(Error::VertexOutOfRange { vertex: 2, n: 2 })));
    }

    #[test]
    fn family_sizes() {
        assert_eq!(complete(5).edge_count(), 10);
        assert_eq!(cycle(6).degree_sequence(), vec![2; 6]);
        assert_eq!(star(3).degree_sequence(), vec![3, 1, 1, 1]);
        assert_eq!(petersen().degree_sequence(), vec![3; 10]);
        assert_eq!(wheel(5).edge_count(), 10);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        assert_eq!(bowtie().degree_sequence(), vec![4, 2, 2, 2, 2]);
        let t = cliques_sharing_vertex(4);
        assert_eq!((t.n(), t.edge_count(), t.max_degree()), (7, 12, 6));
        let tree = complete_tree(3, 2);
        assert_eq!((tree.n(), tree.edge_count()), (13, 12));
        assert!(tree.is_forest());
    }

    #[test]
    fn union_of_k4_and_six_edges() {
        let k2 = complete(2);
        let h = Graph::weighted_union(&[(&complete(4), 1), (&k2, 6)]);
        assert_eq!((h.n(), h.edge_count()), (16, 12));
        assert_eq!(h.components().len(), 7);
    }

    #[test]
    fn blow_up_triangle() {
        let b = Graph::blow_up(&complete(3), &[2, 2, 2]).unwrap();
        assert_eq!((b.n(), b.edge_count()), (6, 12));
    }

    #[test]
    fn join_and_complement() {
        let j = Graph::join(&Graph::empty(1), &path(3));
        assert_eq!(j.edge_count(), 5);
        assert_eq!(cycle(5).complement().degree_sequence(), vec![2; 5]);
    }

    #[test]
    fn induced_and_relabel() {
        let g = cycle(5);
        let s = g.induced_subgraph(&[4, 0, 1]);
        assert!(s.has_edge(0, 1) && s.has_edge(1, 2) && !s.has_edge(0, 2));
        let r = g.relabel(&[1, 2, 3, 4, 0]).unwrap();
        assert_eq!(r.edge_count(), 5);
        assert!(g.relabel(&[0, 0, 1, 2, 3]).is_err());
    }

    #[test]
    fn er_is_reproducible() {
        let a = erdos_renyi(200, 0.05, 7).unwrap();
        let b = erdos_renyi(200, 0.05, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, erdos_renyi(200, 0.05, 8).unwrap());
    }

    #[test]
    fn er_sparse_edge_count_in_range() {
        let g = erdos_renyi(1000, 0.005, 1).unwrap();
        assert!((2200..=2800).contains(&g.edge_count()), "{}", g.edge_count());
    }
}
