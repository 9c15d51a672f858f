//! Recursive twin collapse and line-graph module collapse.

use fixedbitset::FixedBitSet;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::graph::Graph;
use crate::modular::{decompose_subset, MdTree, NodeKind};
use crate::scf::is_claw_free_naive;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollapseEvent {
    FalseSiblings { round: usize, kept: usize, removed: Vec<usize> },
    TrueSiblings { round: usize, kept: usize, removed: Vec<usize> },
    LineModule { round: usize, kept: usize, members: Vec<usize> },
}

impl CollapseEvent {
    pub fn round(&self) -> usize {
        match self {
            CollapseEvent::FalseSiblings { round, .. }
            | CollapseEvent::TrueSiblings { round, .. }
            | CollapseEvent::LineModule { round, .. } => *round,
        }
    }

    pub fn kept(&self) -> usize {
        match self {
            CollapseEvent::FalseSiblings { kept, .. }
            | CollapseEvent::TrueSiblings { kept, .. }
            | CollapseEvent::LineModule { kept, .. } => *kept,
        }
    }

    /// Vertices deleted by this event.
    pub fn removed(&self) -> Vec<usize> {
        match self {
            CollapseEvent::FalseSiblings { removed, .. } | CollapseEvent::TrueSiblings { removed, .. } => {
                removed.clone()
            }
            CollapseEvent::LineModule { kept, members, .. } => {
                members.iter().copied().filter(|v| v != kept).collect()
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CollapseTrace {
    pub events: Vec<CollapseEvent>,
}

impl CollapseTrace {
    /// Number of distinct twin rounds that merged something.
    pub fn twin_rounds(&self) -> usize {
        let mut rounds: Vec<usize> = self
            .events
            .iter()
            .filter(|e| !matches!(e, CollapseEvent::LineModule { .. }))
            .map(|e| e.round())
            .collect();
        rounds.dedup();
        rounds.len()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.events {
            let (tag, round, kept, rest) = match e {
                CollapseEvent::FalseSiblings { round, kept, removed } => ("F", round, kept, removed),
                CollapseEvent::TrueSiblings { round, kept, removed } => ("T", round, kept, removed),
                CollapseEvent::LineModule { round, kept, members } => ("L", round, kept, members),
            };
            let _ = write!(s, "{tag} {round} {kept}");
            for v in rest {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<CollapseTrace, String> {
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let t: Vec<&str> = line.split_whitespace().collect();
            let nums: Result<Vec<usize>, _> = t[1..].iter().map(|x| x.parse::<usize>()).collect();
            let nums = nums.map_err(|_| format!("line {}: bad number", i + 1))?;
            if nums.len() < 2 {
                return Err(format!("line {}: too few fields", i + 1));
            }
            let (round, kept, rest) = (nums[0], nums[1], nums[2..].to_vec());
            events.push(match t[0] {
                "F" => CollapseEvent::FalseSiblings { round, kept, removed: rest },
                "T" => CollapseEvent::TrueSiblings { round, kept, removed: rest },
                "L" => CollapseEvent::LineModule { round, kept, members: rest },
                other => return Err(format!("line {}: unknown event `{other}`", i + 1)),
            });
        }
        Ok(CollapseTrace { events })
    }

    /// Surviving vertices after replaying the trace on a graph with `n` vertices.
    pub fn replay(&self, n: usize) -> Vec<usize> {
        let mut alive = vec![true; n];
        for e in &self.events {
            for v in e.removed() {
                alive[v] = false;
            }
        }
        (0..n).filter(|&v| alive[v]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollapseMode {
    Twins,
    Full,
}

#[derive(Clone, Debug)]
pub struct CollapseResult {
    pub reduced: Graph,
    pub trace: CollapseTrace,
    /// Reduced vertex -> original vertex.
    pub vertex_map: Vec<usize>,
    pub delta_xi: f64,
    pub removed: usize,
    pub non_isolated: usize,
}

pub fn collapse_twins(g: &Graph) -> CollapseResult {
    collapse(g, CollapseMode::Twins)
}

pub fn collapse_full(g: &Graph) -> CollapseResult {
    collapse(g, CollapseMode::Full)
}

/// Collapses the non-isolated part of `g`. Isolated input vertices are kept
/// untouched and excluded from `delta_xi`. A vertex left isolated by earlier
/// rounds is its component's final representative and is never merged.
pub fn collapse(g: &Graph, mode: CollapseMode) -> CollapseResult {
    collapse_with(g, mode, false)
}

/// Twin collapse that treats isolated vertices as ordinary false siblings,
/// so commuting isolated terms merge too. `delta_xi` then counts all vertices.
pub fn collapse_twins_literal(g: &Graph) -> CollapseResult {
    collapse_with(g, CollapseMode::Twins, true)
}

fn collapse_with(g: &Graph, mode: CollapseMode, merge_isolated: bool) -> CollapseResult {
    let n = g.n();
    let mut alive = FixedBitSet::with_capacity(n);
    for v in 0..n {
        alive.set(v, merge_isolated || !g.neighbors(v).is_clear());
    }
    let non_isolated = alive.count_ones(..);
    let mut trace = CollapseTrace::default();
    let mut round = 0;
    loop {
        let mut k = 0;
        loop {
            round += 1;
            k += 1;
            let changed = twin_round(g, &mut alive, round, merge_isolated, &mut trace);
            if !changed && k >= 2 {
                break;
            }
        }
        if mode == CollapseMode::Twins || !line_sweep(g, &mut alive, round, &mut trace) {
            break;
        }
        if round % 2 == 1 {
            round += 1;
        }
    }
    let removed = non_isolated - alive.count_ones(..);
    let vertex_map: Vec<usize> =
        (0..n).filter(|&v| alive.contains(v) || (!merge_isolated && g.neighbors(v).is_clear())).collect();
    let reduced = g.induced_subgraph(&vertex_map).expect("vertices in range");
    let delta_xi = if non_isolated == 0 { 0.0 } else { removed as f64 / non_isolated as f64 };
    CollapseResult { reduced, trace, vertex_map, delta_xi, removed, non_isolated }
}

fn apply(alive: &mut FixedBitSet, mut events: Vec<CollapseEvent>, trace: &mut CollapseTrace) -> bool {
    events.sort_by_key(|e| e.kept());
    for e in &events {
        for v in e.removed() {
            alive.set(v, false);
        }
    }
    let changed = !events.is_empty();
    trace.events.extend(events);
    changed
}

/// One sibling round. Sibling classes of the alive subgraph are the groups of
/// vertices sharing an open (false) or closed (true) neighbourhood; these are
/// exactly the leaf children of parallel and serial nodes of its tree.
fn twin_round(g: &Graph, alive: &mut FixedBitSet, round: usize, merge_isolated: bool, trace: &mut CollapseTrace) -> bool {
    if alive.count_ones(..) < 2 {
        return false;
    }
    let falsy = round % 2 == 1;
    let mut classes: HashMap<FixedBitSet, Vec<usize>> = HashMap::new();
    for v in alive.ones() {
        let mut nb = g.neighbors(v).clone();
        nb.intersect_with(alive);
        if nb.is_clear() && !merge_isolated {
            continue;
        }
        if !falsy {
            nb.insert(v);
        }
        classes.entry(nb).or_default().push(v);
    }
    let events = classes
        .into_values()
        .filter(|c| c.len() >= 2)
        .map(|c| {
            let (kept, removed) = (c[0], c[1..].to_vec());
            if falsy {
                CollapseEvent::FalseSiblings { round, kept, removed }
            } else {
                CollapseEvent::TrueSiblings { round, kept, removed }
            }
        })
        .collect();
    apply(alive, events, trace)
}

fn line_sweep(g: &Graph, alive: &mut FixedBitSet, round: usize, trace: &mut CollapseTrace) -> bool {
    if alive.count_ones(..) < 2 {
        return false;
    }
    let tree = decompose_subset(g, alive);
    let mut events = Vec::new();
    for node in &tree.nodes {
        if !matches!(node.kind, NodeKind::Prime(_)) || !node.children.iter().all(|&c| tree.nodes[c].is_leaf()) {
            continue;
        }
        let sub = g.induced_subgraph(&node.vertices).expect("in range");
        if is_line_graph(&sub) {
            events.push(CollapseEvent::LineModule { round, kept: node.vertices[0], members: node.vertices.clone() });
        }
    }
    apply(alive, events, trace)
}

/// Line-graph recognition: claw-free, and any two odd triangles sharing an
/// edge span a K₄. A triangle is odd when some vertex sees an odd number of
/// its corners.
pub fn is_line_graph(g: &Graph) -> bool {
    if !is_claw_free_naive(g) {
        return false;
    }
    for (a, b) in g.edges() {
        let mut common = g.neighbors(a).clone();
        common.intersect_with(g.neighbors(b));
        let mut odd_thirds: Vec<usize> = Vec::new();
        for c in common.ones() {
            let mut parity = g.neighbors(a).clone();
            parity.symmetric_difference_with(g.neighbors(b));
            parity.symmetric_difference_with(g.neighbors(c));
            if !parity.is_clear() {
                odd_thirds.push(c);
            }
        }
        for (i, &c) in odd_thirds.iter().enumerate() {
            if odd_thirds[i + 1..].iter().any(|&d| !g.has_edge(c, d)) {
                return false;
            }
        }
    }
    true
}

/// Edge lists of the nine minimal non-line graphs.
pub const BEINEKE_GRAPHS: [(usize, &[(usize, usize)]); 9] = [
    (4, &[(0, 3), (1, 3), (2, 3)]),
    (5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 4)]),
    (5, &[(0, 1), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
    (6, &[(0, 1), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (4, 5)]),
    (6, &[(0, 1), (0, 4), (0, 5), (1, 2), (1, 5), (2, 3), (2, 5), (3, 4)]),
    (6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (1, 5), (2, 3), (2, 5), (4, 5)]),
    (6, &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5)]),
    (6, &[(0, 1), (0, 4), (0, 5), (1, 2), (1, 5), (2, 3), (2, 5), (3, 4), (3, 5), (4, 5)]),
    (6, &[(0, 1), (0, 2), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5), (2, 5), (3, 4), (3, 5), (4, 5)]),
];

fn canonical_code(g: &Graph, verts: &[usize]) -> u32 {
    let k = verts.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = u32::MAX;
    loop {
        let mut code = 0u32;
        let mut bit = 0;
        for i in 0..k {
            for j in i + 1..k {
                if g.has_edge(verts[perm[i]], verts[perm[j]]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(code);
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..k).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best
}

/// Line-graph test by scanning all induced subgraphs on 4 to 6 vertices for
/// a minimal non-line graph. Exponential; intended for small graphs.
pub fn is_line_graph_beineke(g: &Graph) -> bool {
    let forbidden: Vec<(usize, u32)> = BEINEKE_GRAPHS
        .iter()
        .map(|&(k, e)| {
            let h = Graph::from_edges(k, e).unwrap();
            (k, canonical_code(&h, &(0..k).collect::<Vec<_>>()))
        })
        .collect();
    let n = g.n();
    let mut subset = Vec::new();
    fn rec(
        g: &Graph,
        start: usize,
        subset: &mut Vec<usize>,
        forbidden: &[(usize, u32)],
    ) -> bool {
        let k = subset.len();
        if (4..=6).contains(&k) {
            let code = canonical_code(g, subset);
            if forbidden.iter().any(|&(fk, c)| fk == k && c == code) {
                return true;
            }
        }
        if k == 6 {
            return false;
        }
        for v in start..g.n() {
            subset.push(v);
            if rec(g, v + 1, subset, forbidden) {
                return true;
            }
            subset.pop();
        }
        false
    }
    let _ = n;
    !rec(g, 0, &mut subset, &forbidden)
}

/// `true` iff the tree has no prime node.
pub fn is_cograph(t: &MdTree) -> bool {
    t.nodes.iter().all(|n| !matches!(n.kind, NodeKind::Prime(_)))
}
