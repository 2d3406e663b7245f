//! Bernoulli vertex sampling and counting inside samples.
//!
//! Subgraph sampling keeps the induced subgraph on the sampled vertices.
//! Neighborhood sampling additionally reveals every edge incident to a sampled
//! (black) vertex, so black vertices have exact degrees and their unsampled
//! (white) neighbors appear with only the revealed edges.

use crate::canon::code_of_rows;
use crate::count::{subset_rows, Esu, Matcher};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::{ColoredMotif, Motif};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgraphSample {
    pub parent_n: usize,
    /// Parent ids of the sampled vertices, increasing.
    pub vertices: Vec<u32>,
    /// Induced subgraph on `vertices`, in local ids.
    pub graph: Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicoloredSample {
    pub parent_n: usize,
    /// Parent ids of observed vertices (black ones and their neighbors), increasing.
    pub vertices: Vec<u32>,
    pub black: Vec<bool>,
    /// Observed edges in local ids: exactly the parent edges with a black endpoint.
    pub graph: Graph,
}

impl BicoloredSample {
    pub fn black_count(&self) -> usize {
        self.black.iter().filter(|&&b| b).count()
    }

    /// Exact parent degree of a black vertex; `None` for white ones.
    pub fn black_degree(&self, local: u32) -> Option<usize> {
        self.black[local as usize].then(|| self.graph.degree(local))
    }

    pub fn black_mask(&self) -> u64 {
        self.black.iter().enumerate().fold(0, |m, (i, &b)| if b { m | 1 << i } else { m })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sample {
    Subgraph(SubgraphSample),
    Neighborhood(BicoloredSample),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    Subgraph,
    Neighborhood,
}

impl SamplerKind {
    pub fn parse(s: &str) -> Result<SamplerKind> {
        match s {
            "subgraph" => Ok(SamplerKind::Subgraph),
            "neighborhood" => Ok(SamplerKind::Neighborhood),
            _ => Err(Error::InvalidParameter(format!("unknown sampler {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Subgraph => "subgraph",
            SamplerKind::Neighborhood => "neighborhood",
        }
    }
}

pub fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("sampling probability {p} outside (0, 1]")))
    }
}

/// Mixes a master seed and a replicate index into an independent stream seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(master) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

pub fn rng_for(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

pub fn bernoulli_mask<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Vec<bool>> {
    check_p(p)?;
    Ok((0..n).map(|_| rng.gen::<f64>() < p).collect())
}

pub fn subgraph_from_mask(g: &Graph, mask: &[bool]) -> SubgraphSample {
    let vertices: Vec<u32> = (0..g.n() as u32).filter(|&v| mask[v as usize]).collect();
    let graph = g.induced_subgraph(&vertices);
    SubgraphSample { parent_n: g.n(), vertices, graph }
}

pub fn neighborhood_from_mask(g: &Graph, mask: &[bool]) -> BicoloredSample {
    let n = g.n();
    let mut observed = vec![false; n];
    for v in 0..n as u32 {
        if mask[v as usize] {
            observed[v as usize] = true;
            for &u in g.neighbors(v) {
                observed[u as usize] = true;
            }
        }
    }
    let vertices: Vec<u32> = (0..n as u32).filter(|&v| observed[v as usize]).collect();
    let mut local = vec![u32::MAX; n];
    for (i, &v) in vertices.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let mut edges = Vec::new();
    for &u in &vertices {
        if !mask[u as usize] {
            continue;
        }
        for &v in g.neighbors(u) {
            if !mask[v as usize] || u < v {
                edges.push((local[u as usize], local[v as usize]));
            }
        }
    }
    let black = vertices.iter().map(|&v| mask[v as usize]).collect();
    let graph = Graph::from_edges(vertices.len(), edges).expect("ids in range");
    BicoloredSample { parent_n: n, vertices, black, graph }
}

pub fn subgraph_sample<R: Rng + ?Sized>(g: &Graph, p: f64, rng: &mut R) -> Result<SubgraphSample> {
    Ok(subgraph_from_mask(g, &bernoulli_mask(g.n(), p, rng)?))
}

pub fn neighborhood_sample<R: Rng + ?Sized>(g: &Graph, p: f64, rng: &mut R) -> Result<BicoloredSample> {
    Ok(neighborhood_from_mask(g, &bernoulli_mask(g.n(), p, rng)?))
}

pub fn sample_from_mask(g: &Graph, mask: &[bool], kind: SamplerKind) -> Sample {
    match kind {
        SamplerKind::Subgraph => Sample::Subgraph(subgraph_from_mask(g, mask)),
        SamplerKind::Neighborhood => Sample::Neighborhood(neighborhood_from_mask(g, mask)),
    }
}

pub fn draw<R: Rng + ?Sized>(g: &Graph, p: f64, kind: SamplerKind, rng: &mut R) -> Result<Sample> {
    Ok(sample_from_mask(g, &bernoulli_mask(g.n(), p, rng)?, kind))
}

// ---------------------------------------------------------------------------
// Counting in neighborhood samples

/// Copies of a colored pattern among vertex subsets with at most one white
/// vertex; the only subsets whose induced edges are fully observed.
pub fn count_colored(pattern: &ColoredMotif, s: &BicoloredSample) -> u128 {
    let k = pattern.motif().order();
    let need = pattern.black_count();
    let target = pattern.code();
    let uncolored = Matcher::new(pattern.motif());
    let mut count = 0u128;
    Esu::new(&s.graph, k).run_all(&mut |sub| {
        let mut colors = 0u8;
        for (i, &v) in sub.iter().enumerate() {
            if s.black[v as usize] {
                colors |= 1 << i;
            }
        }
        if colors.count_ones() as usize != need {
            return;
        }
        let rows = subset_rows(&s.graph, sub);
        if uncolored.matches(&rows) && code_of_rows(&rows[..k], colors) == target {
            count += 1;
        }
    });
    count
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ObservedCounts {
    /// Copies with every vertex black.
    pub all_black: u128,
    /// Copies with exactly one white vertex.
    pub one_white: u128,
}

/// Observed copies of `h`, split by the number of white vertices.
pub fn count_observed_motif(h: &Motif, s: &BicoloredSample) -> ObservedCounts {
    let k = h.order();
    let m = Matcher::new(h);
    let mut out = ObservedCounts::default();
    if k == 2 {
        for (u, v) in s.graph.edges() {
            match (s.black[u as usize], s.black[v as usize]) {
                (true, true) => out.all_black += 1,
                _ => out.one_white += 1,
            }
        }
        return out;
    }
    Esu::new(&s.graph, k).run_all(&mut |sub| {
        let blacks = sub.iter().filter(|&&v| s.black[v as usize]).count();
        if blacks + 1 < k || !m.matches(&subset_rows(&s.graph, sub)) {
            return;
        }
        if blacks == k {
            out.all_black += 1;
        } else {
            out.one_white += 1;
        }
    });
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WedgeCounts {
    /// Induced wedges with white center and both ends black.
    pub white_center: u128,
    /// Black center, one black end, one white end.
    pub white_end: u128,
    pub all_black: u128,
}

pub fn wedge_color_counts(s: &BicoloredSample) -> WedgeCounts {
    let g = &s.graph;
    let mut out = WedgeCounts::default();
    for c in 0..g.n() as u32 {
        let nb = g.neighbors(c);
        let cb = s.black[c as usize];
        for (i, &u) in nb.iter().enumerate() {
            for &v in &nb[i + 1..] {
                let (ub, vb) = (s.black[u as usize], s.black[v as usize]);
                if (cb as u8 + ub as u8 + vb as u8) < 2 || g.has_edge(u, v) {
                    continue;
                }
                match (cb, ub && vb) {
                    (true, true) => out.all_black += 1,
                    (true, false) => out.white_end += 1,
                    (false, _) => out.white_center += 1,
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Text dumps: `p seed` header, then `B u` / `W u` vertex lines and `E u v` edge
// lines in parent ids.

pub fn write_dump(s: &Sample, p: f64, seed: u64) -> String {
    let (parent_n, vertices, black, graph): (usize, &[u32], Vec<bool>, &Graph) = match s {
        Sample::Subgraph(x) => (x.parent_n, &x.vertices, vec![true; x.vertices.len()], &x.graph),
        Sample::Neighborhood(x) => (x.parent_n, &x.vertices, x.black.clone(), &x.graph),
    };
    let mut out = format!("{p} {seed}\n# parent_n {parent_n}\n");
    for (i, &v) in vertices.iter().enumerate() {
        out.push_str(&format!("{} {v}\n", if black[i] { 'B' } else { 'W' }));
    }
    for (a, b) in graph.edges() {
        out.push_str(&format!("E {} {}\n", vertices[a as usize], vertices[b as usize]));
    }
    out
}

/// Parses a dump back into `(p, seed, sample)`. A dump with no white vertex
/// is read as a subgraph sample.
pub fn parse_dump(text: &str) -> Result<(f64, u64, Sample)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty dump".into() })?;
    let hdr: Vec<&str> = header.split_whitespace().collect();
    let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.into() };
    if hdr.len() != 2 {
        return Err(bad(1, "header must be `p seed`"));
    }
    let p: f64 = hdr[0].parse().map_err(|_| bad(1, "bad p"))?;
    let seed: u64 = hdr[1].parse().map_err(|_| bad(1, "bad seed"))?;
    let mut parent_n = None;
    let mut verts: Vec<(u32, bool)> = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in lines {
        let t: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad(i + 1, "bad vertex id"));
        match t.as_slice() {
            [] => {}
            ["#", "parent_n", n] => parent_n = Some(num(n)? as usize),
            [c, ..] if c.starts_with('#') => {}
            ["B", v] => verts.push((num(v)?, true)),
            ["W", v] => verts.push((num(v)?, false)),
            ["E", a, b] => edges.push((num(a)?, num(b)?, i + 1)),
            _ => return Err(bad(i + 1, "unrecognized line")),
        }
    }
    verts.sort_unstable();
    let vertices: Vec<u32> = verts.iter().map(|v| v.0).collect();
    let black: Vec<bool> = verts.iter().map(|v| v.1).collect();
    let parent_n = parent_n.unwrap_or_else(|| vertices.last().map_or(0, |&v| v as usize + 1));
    let mut local_edges = Vec::new();
    for (a, b, line) in edges {
        let la = vertices.binary_search(&a).map_err(|_| bad(line, "edge endpoint not listed"))?;
        let lb = vertices.binary_search(&b).map_err(|_| bad(line, "edge endpoint not listed"))?;
        local_edges.push((la as u32, lb as u32));
    }
    let graph = Graph::from_edges(vertices.len(), local_edges)?;
    let sample = if black.iter().all(|&b| b) {
        Sample::Subgraph(SubgraphSample { parent_n, vertices, graph })
    } else {
        Sample::Neighborhood(BicoloredSample { parent_n, vertices, black, graph })
    };
    Ok((p, seed, sample))
}
