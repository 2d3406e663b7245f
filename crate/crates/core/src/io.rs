//! Edge-list files: one `u v` pair per line, `#` starts a comment line.

use crate::error::{Error, Result};
use crate::graph::{Dropped, Graph};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Original label of each dense vertex id. The ego vertex, if added, has no label.
    pub labels: Vec<u64>,
    pub dropped: Dropped,
    pub ego: Option<u32>,
}

/// Parses an edge list. Labels are non-negative integers, reindexed densely in
/// increasing label order. With `add_ego`, one extra vertex adjacent to every
/// listed vertex is appended (ego-network files omit the ego itself).
pub fn parse_edge_list(text: &str, add_ego: bool) -> Result<LoadedGraph> {
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse { line: i + 1, msg: format!("expected 2 fields, found {}", toks.len()) });
        }
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex label {s:?}") })
        };
        raw.push((parse(toks[0])?, parse(toks[1])?));
    }
    let mut ids: BTreeMap<u64, u32> = BTreeMap::new();
    for &(a, b) in &raw {
        ids.insert(a, 0);
        ids.insert(b, 0);
    }
    let mut labels = Vec::with_capacity(ids.len());
    for (i, (label, id)) in ids.iter_mut().enumerate() {
        *id = i as u32;
        labels.push(*label);
    }
    let mut edges: Vec<(u32, u32)> = raw.iter().map(|(a, b)| (ids[a], ids[b])).collect();
    let mut n = labels.len();
    let mut ego = None;
    if add_ego {
        let e = n as u32;
        edges.extend((0..e).map(|v| (v, e)));
        ego = Some(e);
        n += 1;
    }
    let (graph, dropped) = Graph::build(n, edges)?;
    Ok(LoadedGraph { graph, labels, dropped, ego })
}

pub fn read_edge_list(path: &Path, add_ego: bool) -> Result<LoadedGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?, add_ego)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut s = format!("# {} vertices, {} edges\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reindexes_and_counts_drops() {
        let l = parse_edge_list("# c\n10 20\n20 10\n7 7\n\n20 30\n", false).unwrap();
        assert_eq!(l.labels, vec![7, 10, 20, 30]);
        assert_eq!(l.graph.n(), 4);
        assert_eq!(l.graph.edge_count(), 2);
        assert_eq!(l.dropped, Dropped { duplicates: 1, self_loops: 1 });
    }

    #[test]
    fn reports_line_number() {
        match parse_edge_list("1 2\n# x\n3 x\n", false) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_edge_list("1 2 3\n", false), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn ego_vertex_joins_everything() {
        let l = parse_edge_list("1 2\n3 4\n", true).unwrap();
        assert_eq!(l.graph.n(), 5);
        assert_eq!(l.graph.edge_count(), 6);
        assert_eq!(l.graph.degree(l.ego.unwrap()), 4);
    }

    #[test]
    fn round_trip() {
        let g = crate::graph::petersen();
        let l = parse_edge_list(&format_edge_list(&g), false).unwrap();
        assert_eq!(l.graph, g);
    }
}
