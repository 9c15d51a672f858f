//! Simple undirected graphs over bitset adjacency rows, and frustration graphs.

use fixedbitset::FixedBitSet;
use std::fmt::Write as _;
use thiserror::Error;

use crate::algebra::Hamiltonian;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    fn check(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n() {
            Err(GraphError::OutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.insert(u, v);
        Ok(())
    }

    pub(crate) fn insert(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Open neighbourhood of `v`.
    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            out.extend(self.adj[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n());
        s.insert_range(..);
        s
    }

    pub fn isolated(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.adj[v].is_clear()).collect()
    }

    /// Subgraph induced by `subset`; vertex `i` of the result is `subset[i]`.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<Graph, GraphError> {
        for &v in subset {
            self.check(v)?;
        }
        let mut g = Graph::new(subset.len());
        for (i, &u) in subset.iter().enumerate() {
            for (j, &v) in subset.iter().enumerate().skip(i + 1) {
                if u != v && self.has_edge(u, v) {
                    g.insert(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::new(n);
        for u in 0..n {
            let mut row = self.adj[u].clone();
            row.toggle_range(..);
            row.set(u, false);
            g.adj[u] = row;
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_within(&self.full_set(), false)
            .into_iter()
            .map(|c| c.ones().collect())
            .collect()
    }

    /// Components of `G[set]` (or of its complement when `co` is set).
    pub(crate) fn components_within(&self, set: &FixedBitSet, co: bool) -> Vec<FixedBitSet> {
        let mut left = set.clone();
        let mut out = Vec::new();
        while let Some(start) = left.minimum() {
            let mut comp = FixedBitSet::with_capacity(self.n());
            comp.insert(start);
            left.set(start, false);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                let mut next = left.clone();
                if co {
                    next.difference_with(&self.adj[v]);
                } else {
                    next.intersect_with(&self.adj[v]);
                }
                for w in next.ones() {
                    stack.push(w);
                }
                left.difference_with(&next);
                comp.union_with(&next);
            }
            out.push(comp);
        }
        out
    }

    /// `true` iff every pair of vertices in `set` is adjacent.
    pub fn is_clique(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|v| {
            let mut rest = set.clone();
            rest.set(v, false);
            rest.is_subset(&self.adj[v])
        })
    }

    /// Text form: `g <n> <m>` followed by one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("g {} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let err = |line: usize, msg: &str| GraphError::Parse { line, msg: msg.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty graph file"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "g" {
            return Err(err(hl, "expected header `g <n> <edge_count>`"));
        }
        let n: usize = h[1].parse().map_err(|_| err(hl, "bad vertex count"))?;
        let m: usize = h[2].parse().map_err(|_| err(hl, "bad edge count"))?;
        let mut g = Graph::new(n);
        let mut seen = 0;
        for (ln, l) in lines {
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 2 {
                return Err(err(ln, "expected `u v`"));
            }
            let u: usize = t[0].parse().map_err(|_| err(ln, "bad vertex"))?;
            let v: usize = t[1].parse().map_err(|_| err(ln, "bad vertex"))?;
            if u >= v {
                return Err(err(ln, "edges must satisfy u < v"));
            }
            if v >= n {
                return Err(err(ln, "vertex out of range"));
            }
            if g.has_edge(u, v) {
                return Err(err(ln, "duplicate edge"));
            }
            g.insert(u, v);
            seen += 1;
        }
        if seen != m {
            return Err(err(hl, &format!("header declares {m} edges, found {seen}")));
        }
        Ok(g)
    }
}

/// Graph whose vertices are the non-identity terms of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct FrustrationGraph {
    pub graph: Graph,
    /// Vertex -> index into `Hamiltonian::terms`.
    pub term_of_vertex: Vec<usize>,
}

pub fn build_frustration_graph(h: &Hamiltonian) -> FrustrationGraph {
    let term_of_vertex: Vec<usize> =
        (0..h.terms().len()).filter(|&i| !h.terms()[i].is_identity()).collect();
    let mut graph = Graph::new(term_of_vertex.len());
    for (a, &i) in term_of_vertex.iter().enumerate() {
        for (b, &j) in term_of_vertex.iter().enumerate().skip(a + 1) {
            if h.ctx().omega_form(&h.terms()[i].exps, &h.terms()[j].exps) {
                graph.insert(a, b);
            }
        }
    }
    FrustrationGraph { graph, term_of_vertex }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn complement_of_k4_is_empty() {
        assert_eq!(Graph::complete(4).complement().edge_count(), 0);
    }

    #[test]
    fn two_disjoint_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn c5_minus_vertex_is_p4() {
        let c5 = cycle(5);
        for drop in 0..5 {
            let keep: Vec<_> = (0..5).filter(|&v| v != drop).collect();
            let h = c5.induced_subgraph(&keep).unwrap();
            assert_eq!(h.edge_count(), 3);
            let mut degs: Vec<_> = (0..4).map(|v| h.degree(v)).collect();
            degs.sort();
            assert_eq!(degs, vec![1, 1, 2, 2]);
            assert_eq!(h.components().len(), 1);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(Graph::from_edges(2, &[(0, 2)]), Err(GraphError::OutOfRange { vertex: 2, n: 2 }));
        assert_eq!(Graph::from_edges(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(Graph::new(3).induced_subgraph(&[0, 5]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = cycle(6);
        assert_eq!(Graph::parse_text(&g.to_text()).unwrap(), g);
        assert!(Graph::parse_text("").is_err());
        assert!(Graph::parse_text("g 3 1\n2 1\n").is_err());
        assert!(Graph::parse_text("g 3 2\n0 1\n").is_err());
    }
}
