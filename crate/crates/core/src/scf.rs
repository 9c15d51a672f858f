//! Claw-free and simplicial-clique detection.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::Graph;
use crate::modular::{MdTree, NodeKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScfError {
    #[error("simplicial clique search exceeded its budget of {0} nodes")]
    BudgetExceeded(u64),
}

/// Default node budget for [`find_simplicial_clique`].
pub const DEFAULT_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScfVerdict {
    pub claw_free: bool,
    /// Connected components, each sorted.
    pub components: Vec<Vec<usize>>,
    /// One simplicial clique per component when found. Left empty when the
    /// graph has a claw.
    pub witnesses: Vec<Option<Vec<usize>>>,
    pub is_scf: bool,
}

/// Exhaustive claw scan over centres and non-adjacent neighbour pairs.
pub fn is_claw_free_naive(g: &Graph) -> bool {
    find_claw(g).is_none()
}

/// Some induced claw as `(centre, [leaves])`, if one exists.
pub fn find_claw(g: &Graph) -> Option<(usize, [usize; 3])> {
    for c in 0..g.n() {
        let nc = g.neighbors(c);
        for a in nc.ones() {
            let mut cand = nc.clone();
            cand.difference_with(g.neighbors(a));
            cand.set(a, false);
            for b in cand.ones().filter(|&b| b > a) {
                let mut third = cand.clone();
                third.difference_with(g.neighbors(b));
                third.set(b, false);
                if let Some(d) = third.ones().find(|&d| d > b) {
                    return Some((c, [a, b, d]));
                }
            }
        }
    }
    None
}

/// Claw test driven by the modular decomposition.
///
/// A claw spanning several children of a node has its centre in one child and
/// its leaves in children adjacent to it in the quotient. Per node this needs
/// the independence number of each child, capped at 3.
pub fn is_claw_free_via_tree(g: &Graph, t: &MdTree) -> bool {
    let _ = g;
    let mut alpha = vec![0u8; t.nodes.len()];
    // Children always precede their parent in `t.nodes`.
    for (id, node) in t.nodes.iter().enumerate() {
        let ca: Vec<u8> = node.children.iter().map(|&c| alpha[c]).collect();
        alpha[id] = match &node.kind {
            NodeKind::Single(_) => 1,
            NodeKind::Parallel => ca.iter().map(|&a| a as u32).sum::<u32>().min(3) as u8,
            NodeKind::Serial => {
                if ca.iter().any(|&a| a >= 3) {
                    return false;
                }
                *ca.iter().max().unwrap()
            }
            NodeKind::Prime(q) => {
                if quotient_has_claw(q, &ca) {
                    return false;
                }
                weighted_alpha_capped(q, &ca)
            }
        };
    }
    true
}

fn quotient_has_claw(q: &Graph, weight: &[u8]) -> bool {
    for i in 0..q.n() {
        let ni = q.neighbors(i);
        for j in ni.ones() {
            if weight[j] >= 3 {
                return true;
            }
            let mut rest = ni.clone();
            rest.difference_with(q.neighbors(j));
            rest.set(j, false);
            if weight[j] >= 2 && !rest.is_clear() {
                return true;
            }
        }
    }
    find_claw(q).is_some()
}

fn weighted_alpha_capped(q: &Graph, weight: &[u8]) -> u8 {
    let mut best = *weight.iter().max().unwrap_or(&0);
    for (u, v) in q.complement().edges() {
        best = best.max(weight[u] + weight[v]);
        if best >= 3 {
            return 3;
        }
    }
    if has_independent_triple(q) {
        3
    } else {
        best.min(3)
    }
}

fn has_independent_triple(g: &Graph) -> bool {
    (0..g.n()).any(|u| {
        let mut non = g.neighbors(u).clone();
        non.toggle_range(..);
        non.set_range(..u + 1, false);
        non.ones().any(|v| {
            let mut w = non.clone();
            w.difference_with(g.neighbors(v));
            w.set_range(..v + 1, false);
            !w.is_clear()
        })
    })
}

/// `true` iff `k` is a non-empty clique whose members' outside neighbourhoods
/// are cliques.
pub fn is_simplicial_clique(g: &Graph, k: &FixedBitSet) -> bool {
    if k.is_clear() || !g.is_clique(k) {
        return false;
    }
    k.ones().all(|x| {
        let mut out = g.neighbors(x).clone();
        out.difference_with(k);
        g.is_clique(&out)
    })
}

/// Searches for a simplicial clique of `g`, spending at most `budget`
/// search nodes.
///
/// Growing a partial clique `K`: if some `x` in `K` has two non-adjacent
/// neighbours `a`, `b` outside `K`, every simplicial clique containing `K`
/// contains `a` or `b`. Branching on that pair makes the search exact.
pub fn find_simplicial_clique(g: &Graph, budget: u64) -> Result<Option<Vec<usize>>, ScfError> {
    find_in(g, &g.full_set(), budget)
}

fn find_in(g: &Graph, within: &FixedBitSet, budget: u64) -> Result<Option<Vec<usize>>, ScfError> {
    let mut spent = 0u64;
    let mut excluded = FixedBitSet::with_capacity(g.n());
    for v in within.ones() {
        let mut k = FixedBitSet::with_capacity(g.n());
        k.insert(v);
        let mut common = g.neighbors(v).clone();
        common.intersect_with(within);
        if let Some(found) = grow(g, &mut k, &common, &excluded, &mut spent, budget)? {
            return Ok(Some(found.ones().collect()));
        }
        excluded.insert(v);
    }
    Ok(None)
}

/// `common` holds the vertices adjacent to every member of `k`.
fn grow(
    g: &Graph,
    k: &mut FixedBitSet,
    common: &FixedBitSet,
    excluded: &FixedBitSet,
    spent: &mut u64,
    budget: u64,
) -> Result<Option<FixedBitSet>, ScfError> {
    *spent += 1;
    if *spent > budget {
        return Err(ScfError::BudgetExceeded(budget));
    }
    let Some((a, b)) = violating_pair(g, k) else { return Ok(Some(k.clone())) };
    for c in [a, b] {
        if !common.contains(c) || excluded.contains(c) {
            continue;
        }
        k.insert(c);
        let mut next = common.clone();
        next.intersect_with(g.neighbors(c));
        let res = grow(g, k, &next, excluded, spent, budget)?;
        k.set(c, false);
        if res.is_some() {
            return Ok(res);
        }
    }
    Ok(None)
}

fn violating_pair(g: &Graph, k: &FixedBitSet) -> Option<(usize, usize)> {
    for x in k.ones() {
        let mut out = g.neighbors(x).clone();
        out.difference_with(k);
        for a in out.ones() {
            let mut non = out.clone();
            non.difference_with(g.neighbors(a));
            non.set(a, false);
            if let Some(b) = non.minimum() {
                return Some((a.min(b), a.max(b)));
            }
        }
    }
    None
}

/// Exhaustive check over all vertex subsets. Only for `n <= 16`.
pub fn has_simplicial_clique_oracle(g: &Graph) -> bool {
    let n = g.n();
    assert!(n <= 16, "oracle limited to 16 vertices");
    (1u32..(1 << n)).any(|mask| {
        let mut k = FixedBitSet::with_capacity(n);
        for v in 0..n {
            k.set(v, mask >> v & 1 == 1);
        }
        is_simplicial_clique(g, &k)
    })
}

/// SCF verdict per connected component.
pub fn scf_verdict(g: &Graph, budget: u64) -> Result<ScfVerdict, ScfError> {
    let claw_free = is_claw_free_naive(g);
    let components = g.components();
    let mut witnesses = Vec::new();
    if claw_free {
        for comp in &components {
            let mut set = FixedBitSet::with_capacity(g.n());
            comp.iter().for_each(|&v| set.insert(v));
            witnesses.push(find_in(g, &set, budget)?);
        }
    }
    let is_scf = claw_free && witnesses.iter().all(Option::is_some);
    Ok(ScfVerdict { claw_free, components, witnesses, is_scf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::decompose;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        g(n, &e)
    }

    fn random(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let mut h = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    h.add_edge(u, v).unwrap();
                }
            }
        }
        h
    }

    pub(crate) fn twin_hubs() -> Graph {
        let mut e = vec![(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)];
        for hub in [0, 6] {
            for r in 1..=5 {
                e.push((hub, r));
            }
        }
        g(7, &e)
    }

    #[test]
    fn naive_claw_examples() {
        assert!(is_claw_free_naive(&Graph::complete(4)));
        assert!(!is_claw_free_naive(&g(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])));
        assert!(is_claw_free_naive(&cycle(5)));
    }

    #[test]
    fn tree_claw_examples() {
        let claw = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(!is_claw_free_via_tree(&claw, &decompose(&claw)));
        let c5 = cycle(5);
        assert!(is_claw_free_via_tree(&c5, &decompose(&c5)));
    }

    #[test]
    fn simplicial_examples() {
        assert!(find_simplicial_clique(&Graph::complete(5), 100).unwrap().is_some());
        let w = find_simplicial_clique(&cycle(5), 100).unwrap().unwrap();
        assert_eq!(w.len(), 2);
        assert!(has_simplicial_clique_oracle(&cycle(5)));
    }

    #[test]
    fn hubs_have_no_simplicial_clique_until_twin_removed() {
        let h = twin_hubs();
        assert!(is_claw_free_naive(&h));
        assert_eq!(find_simplicial_clique(&h, 10_000).unwrap(), None);
        assert!(!has_simplicial_clique_oracle(&h));
        let w5 = h.induced_subgraph(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(find_simplicial_clique(&w5, 10_000).unwrap(), Some(vec![1, 2]));
    }

    #[test]
    fn budget_is_reported() {
        assert_eq!(find_simplicial_clique(&twin_hubs(), 3), Err(ScfError::BudgetExceeded(3)));
    }

    #[test]
    fn verdicts() {
        let claw = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(!scf_verdict(&claw, 1000).unwrap().is_scf);
        let empty = scf_verdict(&Graph::new(5), 1000).unwrap();
        assert!(empty.is_scf);
        assert_eq!(empty.witnesses.len(), 5);
    }

    #[test]
    fn tree_and_naive_agree_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..400 {
            let n = 1 + i % 30;
            let p = 0.1 * (1 + i % 9) as f64;
            let h = random(n, p, &mut rng);
            assert_eq!(is_claw_free_via_tree(&h, &decompose(&h)), is_claw_free_naive(&h), "{h:?}");
        }
    }

    proptest! {
        #[test]
        fn search_matches_oracle(n in 1usize..=10, p in 0.2f64..0.9, seed in any::<u64>()) {
            let h = random(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
            let found = find_simplicial_clique(&h, u64::MAX).unwrap();
            prop_assert_eq!(found.is_some(), has_simplicial_clique_oracle(&h));
            if let Some(k) = found {
                let mut set = FixedBitSet::with_capacity(n);
                k.iter().for_each(|&v| set.insert(v));
                prop_assert!(is_simplicial_clique(&h, &set));
            }
        }

        #[test]
        fn scf_is_hereditary(n in 2usize..=10, p in 0.3f64..0.9, seed in any::<u64>(), pick in any::<u16>()) {
            let h = random(n, p, &mut ChaCha8Rng::seed_from_u64(seed));
            if scf_verdict(&h, u64::MAX).unwrap().is_scf {
                let keep: Vec<usize> = (0..n).filter(|v| pick >> v & 1 == 1).collect();
                if !keep.is_empty() {
                    let sub = h.induced_subgraph(&keep).unwrap();
                    prop_assert!(scf_verdict(&sub, u64::MAX).unwrap().is_scf);
                }
            }
        }
    }
}
