//! Connected pattern graphs on at most 8 vertices.

use crate::canon::{canonical_code, canonical_code_colored, graph_rows, CanonCode, MAX_SMALL};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use std::path::Path;

#[derive(Clone, Debug)]
pub struct Motif {
    name: String,
    graph: Graph,
    code: CanonCode,
    degrees: Vec<usize>,
}

impl PartialEq for Motif {
    fn eq(&self, other: &Motif) -> bool {
        self.code == other.code
    }
}

impl Eq for Motif {}

impl Motif {
    pub fn new(name: impl Into<String>, graph: Graph) -> Result<Motif> {
        if graph.n() == 0 || graph.n() > MAX_SMALL {
            return Err(Error::SizeOverflow(format!("motif needs 1..=8 vertices, got {}", graph.n())));
        }
        if !graph.is_connected() {
            return Err(Error::InvalidParameter("motif must be connected".into()));
        }
        let code = canonical_code(&graph)?;
        let degrees = graph.degree_sequence();
        Ok(Motif { name: name.into(), graph, code, degrees })
    }

    pub fn from_code(name: impl Into<String>, code: CanonCode) -> Result<Motif> {
        Motif::new(name, code.to_graph())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn code(&self) -> CanonCode {
        self.code
    }

    pub fn order(&self) -> usize {
        self.graph.n()
    }

    pub fn size(&self) -> usize {
        self.graph.edge_count()
    }

    /// Degrees in decreasing order.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn is_clique(&self) -> bool {
        let k = self.order();
        self.size() == k * (k - 1) / 2
    }

    pub fn rows(&self) -> Vec<u8> {
        graph_rows(&self.graph).expect("motif fits")
    }

    pub fn edge() -> Motif {
        Motif::new("edge", graph::complete(2)).unwrap()
    }

    pub fn wedge() -> Motif {
        Motif::new("wedge", graph::path(3)).unwrap()
    }

    pub fn triangle() -> Motif {
        Motif::new("triangle", graph::complete(3)).unwrap()
    }

    pub fn clique(k: usize) -> Result<Motif> {
        Motif::new(format!("clique:{k}"), graph::complete(k))
    }

    pub fn path(k: usize) -> Result<Motif> {
        Motif::new(format!("path:{k}"), graph::path(k))
    }

    pub fn cycle(k: usize) -> Result<Motif> {
        if k < 3 {
            return Err(Error::InvalidParameter("cycle needs at least 3 vertices".into()));
        }
        Motif::new(format!("cycle:{k}"), graph::cycle(k))
    }

    pub fn star(leaves: usize) -> Result<Motif> {
        Motif::new(format!("star:{leaves}"), graph::star(leaves))
    }

    pub fn claw() -> Motif {
        Motif::new("claw", graph::star(3)).unwrap()
    }

    pub fn diamond() -> Motif {
        Motif::new("diamond", graph::diamond()).unwrap()
    }

    pub fn paw() -> Motif {
        Motif::new("paw", graph::paw()).unwrap()
    }

    /// Parses `edge`, `wedge`, `triangle`, `diamond`, `paw`, `claw`,
    /// `clique:K`, `path:K`, `cycle:K`, `star:L` or `custom:PATH`.
    pub fn parse(spec: &str) -> Result<Motif> {
        let bad = || Error::InvalidParameter(format!("unknown motif {spec:?}"));
        let arg = |s: &str| s.parse::<usize>().map_err(|_| bad());
        match spec.split_once(':') {
            None => match spec {
                "edge" => Ok(Motif::edge()),
                "wedge" => Ok(Motif::wedge()),
                "triangle" => Ok(Motif::triangle()),
                "diamond" => Ok(Motif::diamond()),
                "paw" => Ok(Motif::paw()),
                "claw" => Ok(Motif::claw()),
                _ => Err(bad()),
            },
            Some(("clique", k)) => Motif::clique(arg(k)?),
            Some(("path", k)) => Motif::path(arg(k)?),
            Some(("cycle", k)) => Motif::cycle(arg(k)?),
            Some(("star", l)) => Motif::star(arg(l)?),
            Some(("custom", p)) => {
                let loaded = crate::io::read_edge_list(Path::new(p), false)?;
                Motif::new(format!("custom:{p}"), loaded.graph)
            }
            _ => Err(bad()),
        }
    }
}

/// A motif whose vertices are colored black (sampled) or white, with at most
/// one white vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredMotif {
    motif: Motif,
    black: u8,
    code: CanonCode,
}

impl ColoredMotif {
    /// `black` bit `i` set means vertex `i` of the motif graph is black.
    pub fn new(motif: Motif, black: u8) -> Result<ColoredMotif> {
        let k = motif.order();
        let mask = if k == 8 { 0xff } else { (1u8 << k) - 1 };
        let black = black & mask;
        let whites = k - black.count_ones() as usize;
        if whites > 1 {
            return Err(Error::InvalidParameter(format!(
                "pattern has {whites} white vertices; at most one is observable"
            )));
        }
        let code = canonical_code_colored(motif.graph(), black)?;
        Ok(ColoredMotif { motif, black, code })
    }

    pub fn all_black(motif: Motif) -> ColoredMotif {
        let k = motif.order();
        let mask = if k == 8 { 0xff } else { (1u8 << k) - 1 };
        ColoredMotif::new(motif, mask).unwrap()
    }

    pub fn motif(&self) -> &Motif {
        &self.motif
    }

    pub fn code(&self) -> CanonCode {
        self.code
    }

    pub fn black_count(&self) -> usize {
        self.black.count_ones() as usize
    }
}
