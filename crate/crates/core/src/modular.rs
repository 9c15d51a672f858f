//! Modular decomposition trees.
//!
//! Parallel and serial nodes come from the components of `G` and of its
//! complement. In the remaining (prime) case the maximal strong modules are
//! found from a partition refinement around a pivot vertex `v`: the parts are
//! the maximal modules avoiding `v`, and the module containing `v` is the
//! union of `v` with every part whose module closure together with `v` stays
//! proper.

use fixedbitset::FixedBitSet;
use std::collections::VecDeque;
use std::fmt::Write as _;
use std::rc::Rc;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Single(usize),
    Parallel,
    Serial,
    /// Quotient graph over the node's children (child indices).
    Prime(Graph),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdNode {
    pub kind: NodeKind,
    pub children: Vec<usize>,
    /// Sorted vertex set of the module.
    pub vertices: Vec<usize>,
}

impl MdNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Single(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdTree {
    pub nodes: Vec<MdNode>,
    pub root: usize,
    n: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error("brute-force module enumeration is capped at 12 vertices, got {0}")]
    TooLarge(usize),
}

/// Decomposes the whole graph.
///
/// # Panics
/// If the graph has no vertices.
pub fn decompose(g: &Graph) -> MdTree {
    decompose_subset(g, &g.full_set())
}

/// Decomposes `G[set]`, keeping original vertex ids.
///
/// # Panics
/// If `set` is empty.
pub fn decompose_subset(g: &Graph, set: &FixedBitSet) -> MdTree {
    assert!(set.minimum().is_some(), "cannot decompose an empty vertex set");
    let mut nodes = Vec::new();
    let root = build(g, set, &mut nodes);
    MdTree { nodes, root, n: g.n() }
}

fn build(g: &Graph, set: &FixedBitSet, nodes: &mut Vec<MdNode>) -> usize {
    let vertices: Vec<usize> = set.ones().collect();
    if vertices.len() == 1 {
        nodes.push(MdNode { kind: NodeKind::Single(vertices[0]), children: vec![], vertices });
        return nodes.len() - 1;
    }
    let comps = g.components_within(set, false);
    let (kind, parts) = if comps.len() > 1 {
        (NodeKind::Parallel, comps)
    } else {
        let co = g.components_within(set, true);
        if co.len() > 1 {
            (NodeKind::Serial, co)
        } else {
            let parts = prime_partition(g, set);
            let reps: Vec<usize> = parts.iter().map(|p| p.minimum().unwrap()).collect();
            let mut q = Graph::new(parts.len());
            for i in 0..reps.len() {
                for j in i + 1..reps.len() {
                    if g.has_edge(reps[i], reps[j]) {
                        q.insert(i, j);
                    }
                }
            }
            (NodeKind::Prime(q), parts)
        }
    };
    // Parts are produced in ascending order of their minimum vertex.
    let children = parts.iter().map(|p| build(g, p, nodes)).collect();
    nodes.push(MdNode { kind, children, vertices });
    nodes.len() - 1
}

/// Smallest module of `G[set]` containing `seed`.
pub fn module_closure(g: &Graph, set: &FixedBitSet, seed: &FixedBitSet) -> FixedBitSet {
    let mut m = seed.clone();
    let Some(r) = seed.minimum() else { return m };
    let total = set.count_ones(..);
    let mut size = m.count_ones(..);
    let mut queue: Vec<usize> = seed.ones().filter(|&x| x != r).collect();
    let mut split = FixedBitSet::with_capacity(g.n());
    while size < total {
        let Some(x) = queue.pop() else { break };
        split.clone_from(g.neighbors(x));
        split.symmetric_difference_with(g.neighbors(r));
        split.intersect_with(set);
        split.difference_with(&m);
        for y in split.ones() {
            queue.push(y);
            size += 1;
        }
        m.union_with(&split);
    }
    m
}

/// Maximal modules of `G[set]` not containing `v`, by vertex partitioning.
fn partition_avoiding(g: &Graph, set: &FixedBitSet, v: usize) -> Vec<FixedBitSet> {
    let n = g.n();
    let mut rest = set.clone();
    rest.set(v, false);
    let mut parts: Vec<FixedBitSet> = Vec::new();
    let mut part_of = vec![usize::MAX; n];
    let mut tasks: VecDeque<(Rc<Vec<usize>>, Rc<FixedBitSet>)> = VecDeque::new();

    let split = |parts: &mut Vec<FixedBitSet>,
                 part_of: &mut Vec<usize>,
                 tasks: &mut VecDeque<(Rc<Vec<usize>>, Rc<FixedBitSet>)>,
                 idx: usize,
                 by: &FixedBitSet| {
        let common = parts[idx].intersection_count(by);
        if common == 0 || common == parts[idx].count_ones(..) {
            return;
        }
        let mut inside = parts[idx].clone();
        inside.intersect_with(by);
        let mut outside = parts[idx].clone();
        outside.difference_with(by);
        let new = parts.len();
        for w in outside.ones() {
            part_of[w] = new;
        }
        parts[idx] = inside.clone();
        parts.push(outside.clone());
        let (a, b) = (Rc::new(inside), Rc::new(outside));
        tasks.push_back((Rc::new(a.ones().collect()), b.clone()));
        tasks.push_back((Rc::new(b.ones().collect()), a));
    };

    for w in rest.ones() {
        part_of[w] = 0;
    }
    parts.push(rest);
    split(&mut parts, &mut part_of, &mut tasks, 0, g.neighbors(v));
    if parts[0].is_clear() {
        return vec![];
    }

    let mut stamp = vec![0usize; n + 1];
    let mut clock = 0;
    let mut hit = Vec::new();
    while let Some((pivots, target)) = tasks.pop_front() {
        for &y in pivots.iter() {
            clock += 1;
            hit.clear();
            for w in target.ones() {
                let p = part_of[w];
                if stamp[p] != clock {
                    stamp[p] = clock;
                    hit.push(p);
                }
            }
            for &p in &hit {
                split(&mut parts, &mut part_of, &mut tasks, p, g.neighbors(y));
            }
        }
    }
    parts
}

/// Maximal strong modules of a prime-case `G[set]`, sorted by minimum vertex.
fn prime_partition(g: &Graph, set: &FixedBitSet) -> Vec<FixedBitSet> {
    let v = set.minimum().unwrap();
    let parts = partition_avoiding(g, set, v);
    let mut mv = FixedBitSet::with_capacity(g.n());
    mv.insert(v);
    let mut out = Vec::new();
    for p in parts {
        let mut seed = p.clone();
        seed.insert(v);
        if module_closure(g, set, &seed) == *set {
            out.push(p);
        } else {
            mv.union_with(&p);
        }
    }
    out.push(mv);
    out.sort_by_key(|p| p.minimum().unwrap());
    out
}

impl MdTree {
    pub fn root_node(&self) -> &MdNode {
        &self.nodes[self.root]
    }

    pub fn node(&self, id: usize) -> &MdNode {
        &self.nodes[id]
    }

    /// Node ids in pre-order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id].children.iter().rev());
        }
        out
    }

    pub fn parent_of(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(id);
            }
        }
        parent
    }

    /// Vertex sets of all nodes, sorted.
    pub fn module_sets(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.nodes.iter().map(|n| n.vertices.clone()).collect();
        v.sort();
        v
    }

    /// Graph described by the tree, on the vertex count of the source graph.
    pub fn rebuild(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for node in &self.nodes {
            let pair_edges: Vec<(usize, usize)> = match &node.kind {
                NodeKind::Single(_) | NodeKind::Parallel => continue,
                NodeKind::Serial => {
                    let k = node.children.len();
                    (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
                }
                NodeKind::Prime(q) => q.edges(),
            };
            for (i, j) in pair_edges {
                for &u in &self.nodes[node.children[i]].vertices {
                    for &w in &self.nodes[node.children[j]].vertices {
                        g.insert(u, w);
                    }
                }
            }
        }
        g
    }

    /// Indented text dump: one line per node, `kind {vertices}`.
    pub fn dump(&self) -> String {
        fn rec(t: &MdTree, id: usize, depth: usize, out: &mut String) {
            let node = &t.nodes[id];
            let label = match node.kind {
                NodeKind::Single(_) => "Single",
                NodeKind::Parallel => "Parallel",
                NodeKind::Serial => "Serial",
                NodeKind::Prime(_) => "Prime",
            };
            let vs: Vec<String> = node.vertices.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}{} {{{}}}", "  ".repeat(depth), label, vs.join(","));
            for &c in &node.children {
                rec(t, c, depth + 1, out);
            }
        }
        let mut s = String::new();
        rec(self, self.root, 0, &mut s);
        s
    }

    /// Checks the structural invariants against `g`.
    pub fn check(&self, g: &Graph) -> Result<(), String> {
        if self.rebuild() != *g {
            return Err("rebuilt graph differs from input".into());
        }
        for (id, node) in self.nodes.iter().enumerate() {
            let mins: Vec<usize> = node.children.iter().map(|&c| self.nodes[c].vertices[0]).collect();
            if mins.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("node {id}: children not sorted"));
            }
            match &node.kind {
                NodeKind::Single(_) => {}
                NodeKind::Parallel | NodeKind::Serial => {
                    if node.children.len() < 2 {
                        return Err(format!("node {id}: fewer than two children"));
                    }
                    if node.children.iter().any(|&c| self.nodes[c].kind == node.kind) {
                        return Err(format!("node {id}: child repeats parent kind"));
                    }
                }
                NodeKind::Prime(q) => {
                    if q.n() < 4 {
                        return Err(format!("node {id}: prime quotient on {} vertices", q.n()));
                    }
                    if q.n() <= 12 {
                        let all = (1u32 << q.n()) - 1;
                        for mask in 1..all {
                            if mask.count_ones() >= 2 && is_module_mask(q, mask) {
                                return Err(format!("node {id}: quotient has module {mask:b}"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn is_module_mask(g: &Graph, mask: u32) -> bool {
    let members: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
    (0..g.n()).filter(|&y| mask >> y & 1 == 0).all(|y| {
        let first = g.has_edge(y, members[0]);
        members.iter().all(|&m| g.has_edge(y, m) == first)
    })
}

/// `true` iff every outside vertex sees all or none of `subset`.
pub fn is_module_oracle(g: &Graph, subset: &[usize]) -> bool {
    let inside: std::collections::BTreeSet<usize> = subset.iter().copied().collect();
    (0..g.n()).filter(|y| !inside.contains(y)).all(|y| {
        let first = g.has_edge(y, subset[0]);
        subset.iter().all(|&m| g.has_edge(y, m) == first)
    })
}

/// All strong modules by exhaustive enumeration, each sorted, in sorted order.
pub fn strong_modules_oracle(g: &Graph) -> Result<Vec<Vec<usize>>, ModError> {
    let n = g.n();
    if n > 12 {
        return Err(ModError::TooLarge(n));
    }
    let modules: Vec<u32> = (1u32..1 << n).filter(|&m| is_module_mask(g, m)).collect();
    let overlap = |a: u32, b: u32| a & b != 0 && a & b != a && a & b != b;
    let mut strong: Vec<Vec<usize>> = modules
        .iter()
        .filter(|&&a| modules.iter().all(|&b| !overlap(a, b)))
        .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    strong.sort();
    Ok(strong)
}
