//! Path quasi-metrics of directed graphs.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::order::Partition;
use crate::qmetric::GQSpace;
use crate::value::DistVal;
use crate::weights::{synth_cweak_weight, CWeakWeight, NotCww};

/// A finite digraph without self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    nv: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("self-loop at {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) leaves the vertex range")]
    OutOfRange(usize, usize),
}

impl Digraph {
    pub fn new(nv: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if nv == 0 {
            return Err(GraphError::Empty);
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= nv || v >= nv {
                return Err(GraphError::OutOfRange(u, v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u, v));
        }
        Ok(Digraph { nv, edges: set })
    }

    /// Every edge in both directions.
    pub fn undirected(nv: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let e: Vec<_> = edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
        Self::new(nv, e)
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nv];
        for &(u, v) in &self.edges {
            adj[u].push(v);
        }
        adj
    }

    fn bfs(adj: &[Vec<usize>], src: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; adj.len()];
        dist[src] = Some(0);
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            let du = dist[u].expect("queued vertices are labelled");
            for &v in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    q.push_back(v);
                }
            }
        }
        dist
    }

    /// Strongly connected components from mutual reachability.
    pub fn strong_components(&self) -> Partition {
        let adj = self.adjacency();
        let reach: Vec<Vec<bool>> = (0..self.nv)
            .map(|s| Self::bfs(&adj, s).iter().map(Option::is_some).collect())
            .collect();
        Partition::from_equivalence(self.nv, |x, y| reach[x][y] && reach[y][x])
    }
}

/// Shortest directed path lengths, one breadth-first search per source.
pub fn path_qmetric(g: &Digraph) -> GQSpace {
    let adj = g.adjacency();
    let rows: Vec<Vec<Option<u64>>> = (0..g.nv).map(|s| Digraph::bfs(&adj, s)).collect();
    GQSpace::from_fn(g.nv, |x, y| match rows[x][y] {
        Some(k) => DistVal::from_int(k as i64),
        None => DistVal::Infinity,
    })
    .expect("path distances form a quasi-metric")
}

/// The two sides of the graph criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphVerdict {
    pub strong_components: Partition,
    /// Componentwise weight synthesis on the path quasi-metric.
    pub cww: Result<CWeakWeight, NotCww>,
    /// An edge inside a strong component whose reverse is missing.
    pub one_way_edge: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("weight synthesis says {cww_ok} but the edge criterion says {undirected}")]
pub struct GraphDisagreement {
    pub cww_ok: bool,
    pub undirected: bool,
}

/// Weight synthesis succeeds iff every strong component is undirected.
pub fn ww_iff_undirected(g: &Digraph) -> Result<GraphVerdict, GraphDisagreement> {
    let d = path_qmetric(g);
    let scc = g.strong_components();
    let one_way_edge = g
        .edges
        .iter()
        .copied()
        .find(|&(u, v)| scc.same(u, v) && !g.edges.contains(&(v, u)));
    let cww = synth_cweak_weight(&d);
    if cww.is_ok() != one_way_edge.is_none() {
        return Err(GraphDisagreement { cww_ok: cww.is_ok(), undirected: one_way_edge.is_none() });
    }
    Ok(GraphVerdict { strong_components: scc, cww, one_way_edge })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_triangle() {
        let g = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let d = path_qmetric(&g);
        assert_eq!(d.d(0, 1), &DistVal::from_int(1));
        assert_eq!(d.d(0, 2), &DistVal::from_int(2));
        assert_eq!(d.d(2, 0), &DistVal::from_int(1));
        let v = ww_iff_undirected(&g).unwrap();
        assert!(v.cww.is_err() && v.one_way_edge.is_some());
    }

    #[test]
    fn single_edge() {
        let d = path_qmetric(&Digraph::new(2, [(0, 1)]).unwrap());
        assert_eq!(d.d(0, 1), &DistVal::from_int(1));
        assert!(d.d(1, 0).is_infinite());
    }

    #[test]
    fn undirected_path_is_graph_metric() {
        let d = path_qmetric(&Digraph::undirected(3, [(0, 1), (1, 2)]).unwrap());
        assert!(d.is_metric());
        assert_eq!(d.d(0, 2), &DistVal::from_int(2));
    }

    #[test]
    fn undirected_cycle_and_bridge() {
        let c4 = Digraph::undirected(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(ww_iff_undirected(&c4).unwrap().cww.is_ok());
        let mut e: Vec<(usize, usize)> = vec![(0, 1), (1, 0), (2, 3), (3, 2)];
        e.push((1, 2));
        let bridged = Digraph::new(4, e).unwrap();
        let v = ww_iff_undirected(&bridged).unwrap();
        assert!(v.cww.is_ok());
        assert_eq!(v.strong_components.num_blocks(), 2);
    }

    #[test]
    fn rejects_loops() {
        assert_eq!(Digraph::new(2, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Digraph::new(2, [(0, 2)]), Err(GraphError::OutOfRange(0, 2)));
    }
}
