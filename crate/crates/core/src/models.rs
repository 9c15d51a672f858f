//! Random Hamiltonian models, exact lattice enumeration, analytic bounds and
//! the Monte-Carlo experiment runner.

use std::collections::HashMap;
use std::sync::Mutex;

use fixedbitset::FixedBitSet;
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraContext, Hamiltonian, PhasedString};
use crate::collapse::{collapse, CollapseMode};
use crate::graph::{build_frustration_graph, Graph};
use crate::scf::scf_verdict;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("probability {0} outside the allowed range")]
    Probability(f64),
    #[error("lattice models need p > 0 so every mandatory edge can be populated")]
    ZeroLatticeProbability,
    #[error("requested {requested} distinct strings but only {available} exist")]
    TooManyStrings { requested: u128, available: u128 },
    #[error("locality {k} exceeds qubit count {n}")]
    Locality { k: usize, n: usize },
    #[error("tiling {0}x{1} lets a neighbourhood of radius {2} wrap onto itself")]
    Unfaithful(usize, usize, usize),
    #[error("alphabet entry `{0}` is not a two-letter label over X, Y, Z")]
    Alphabet(String),
    #[error("enumeration over {0} bits exceeds the cap of {EXACT_BITS_CAP}")]
    Infeasible(usize),
    #[error("{0} candidate strings are too many for probability mode")]
    Enumeration(u128),
    #[error("samples must be positive")]
    NoSamples,
}

/// Cap on the per-cell bit count accepted by the exact enumerators.
pub const EXACT_BITS_CAP: usize = 45;
/// Cap on the candidate count in per-string probability sampling.
pub const PROBABILITY_MODE_CAP: u128 = 1 << 24;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of substream `index` under `master`.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

pub fn substream_rng(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream_seed(master, index))
}

fn check_p(p: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ModelError::Probability(p))
    }
}

/// Weight uniform on `[−2, −0.1] ∪ [0.1, 2]`.
pub fn random_weight<R: Rng>(rng: &mut R) -> f64 {
    let w = rng.gen_range(0.1..=2.0);
    if rng.gen_bool(0.5) {
        -w
    } else {
        w
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn binomial_f(n: f64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i + 1) as f64)
}

pub fn sample_gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph, ModelError> {
    check_p(p)?;
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}

/// Single-qubit Pauli letter: 1 = X, 2 = Y, 3 = Z.
fn letter_code(c: char) -> Option<u8> {
    match c {
        'X' => Some(1),
        'Y' => Some(2),
        'Z' => Some(3),
        _ => None,
    }
}

/// Qubit string with Hermitian phase from `(qubit, letter)` pairs.
pub fn pauli_string(ctx: &AlgebraContext, m: usize, letters: &[(usize, u8)], scalar: f64) -> PhasedString {
    let mut exps = FixedBitSet::with_capacity(2 * m);
    for &(q, l) in letters {
        if l != 1 {
            exps.insert(q);
        }
        if l != 3 {
            exps.insert(m + q);
        }
    }
    PhasedString::new(ctx.canonical_phase(&exps), scalar, exps)
}

/// All nine two-qubit products of non-identity Paulis.
pub const PAULI_PAIRS: [&str; 9] = ["XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"];

fn parse_alphabet(alphabet: &[String]) -> Result<Vec<(u8, u8)>, ModelError> {
    alphabet
        .iter()
        .map(|s| {
            let c: Vec<char> = s.chars().collect();
            match (c.len(), c.first().copied().and_then(letter_code), c.get(1).copied().and_then(letter_code)) {
                (2, Some(a), Some(b)) => Ok((a, b)),
                _ => Err(ModelError::Alphabet(s.clone())),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    Brick,
    SquareNuclei,
}

/// Unit-cell edge from site `a` of cell `(i, j)` to site `b` of `(i + di, j + dj)`.
#[derive(Clone, Copy, Debug)]
struct CellEdge {
    a: usize,
    b: usize,
    di: i64,
    dj: i64,
    mandatory: bool,
}

impl LatticeKind {
    pub fn sites(self) -> usize {
        match self {
            LatticeKind::Brick => 4,
            LatticeKind::SquareNuclei => 2,
        }
    }

    /// The brick cell is the path `2' – 0 – 1 – 2 – 3 – 0''` where `2'` sits in
    /// the cell up-left and `0''` in the cell to the right. The square cell has
    /// a horizontal, a vertical and a nucleus edge (site 1 is the nucleus).
    fn edges(self) -> Vec<CellEdge> {
        let e = |a, b, di, dj, mandatory| CellEdge { a, b, di, dj, mandatory };
        match self {
            LatticeKind::Brick => vec![
                e(0, 1, 0, 0, true),
                e(1, 2, 0, 0, true),
                e(2, 3, 0, 0, true),
                e(3, 0, 1, 0, true),
                e(0, 2, -1, 1, true),
            ],
            LatticeKind::SquareNuclei => vec![e(0, 0, 1, 0, true), e(0, 0, 0, 1, true), e(0, 1, 0, 0, false)],
        }
    }

    pub fn cell_edges(self) -> usize {
        self.edges().len()
    }

    pub fn mandatory_edges(self) -> usize {
        self.edges().iter().filter(|e| e.mandatory).count()
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Brick => "brick",
            LatticeKind::SquareNuclei => "square",
        }
    }
}

/// Periodic lattice on an `a × b` torus of unit cells with a per-edge term
/// alphabet. Term bit `e·|alphabet| + k` of a cell mask selects letter `k` on
/// cell edge `e`.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub kind: LatticeKind,
    pub tiling: (usize, usize),
    alphabet: Vec<(u8, u8)>,
    labels: Vec<String>,
    /// Torus edges as `(site_a, site_b, cell_edge)`.
    edges: Vec<(usize, usize, usize)>,
}

pub const DEFAULT_TILING: (usize, usize) = (4, 4);
/// Site radius around each edge that must embed injectively.
pub const FAITHFUL_RADIUS: usize = 1;

impl Lattice {
    pub fn new(kind: LatticeKind, tiling: (usize, usize), alphabet: &[String]) -> Result<Self, ModelError> {
        let parsed = parse_alphabet(alphabet)?;
        let (ta, tb) = tiling;
        let s = kind.sites();
        let site = |i: i64, j: i64, k: usize| -> usize {
            let i = i.rem_euclid(ta as i64) as usize;
            let j = j.rem_euclid(tb as i64) as usize;
            (i * tb + j) * s + k
        };
        let mut edges = Vec::new();
        for i in 0..ta as i64 {
            for j in 0..tb as i64 {
                for (e, ce) in kind.edges().iter().enumerate() {
                    edges.push((site(i, j, ce.a), site(i + ce.di, j + ce.dj, ce.b), e));
                }
            }
        }
        let lat = Lattice { kind, tiling, alphabet: parsed, labels: alphabet.to_vec(), edges };
        if !lat.is_faithful(FAITHFUL_RADIUS) {
            return Err(ModelError::Unfaithful(ta, tb, FAITHFUL_RADIUS));
        }
        Ok(lat)
    }

    pub fn full_alphabet() -> Vec<String> {
        PAULI_PAIRS.iter().map(|s| s.to_string()).collect()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.labels
    }

    pub fn qubits(&self) -> usize {
        self.tiling.0 * self.tiling.1 * self.kind.sites()
    }

    /// Bits per cell mask.
    pub fn cell_bits(&self) -> usize {
        self.kind.cell_edges() * self.alphabet.len()
    }

    fn edge_mask(&self, e: usize) -> u64 {
        let a = self.alphabet.len();
        ((1u64 << a) - 1) << (e * a)
    }

    /// `true` iff every mandatory cell edge carries at least one term.
    pub fn admissible(&self, mask: u64) -> bool {
        self.kind.edges().iter().enumerate().all(|(e, ce)| !ce.mandatory || mask & self.edge_mask(e) != 0)
    }

    /// Checks that all sites within `radius` steps of any edge's endpoints
    /// have distinct images on the torus, so local neighbourhoods of the
    /// frustration graph match the infinite lattice.
    pub fn is_faithful(&self, radius: usize) -> bool {
        let (ta, tb) = (self.tiling.0 as i64, self.tiling.1 as i64);
        let cell_edges = self.kind.edges();
        let neighbours = |(i, j, s): (i64, i64, usize)| {
            let mut out = Vec::new();
            for ce in &cell_edges {
                if ce.a == s {
                    out.push((i + ce.di, j + ce.dj, ce.b));
                }
                if ce.b == s {
                    out.push((i - ce.di, j - ce.dj, ce.a));
                }
            }
            out
        };
        for ce in &cell_edges {
            let mut seen = vec![(0i64, 0i64, ce.a), (ce.di, ce.dj, ce.b)];
            let mut frontier = seen.clone();
            for _ in 0..radius {
                let mut next = Vec::new();
                for &f in &frontier {
                    for g in neighbours(f) {
                        if !seen.contains(&g) && !next.contains(&g) {
                            next.push(g);
                        }
                    }
                }
                seen.extend(next.iter().copied());
                frontier = next;
            }
            let mut images: Vec<(i64, i64, usize)> =
                seen.iter().map(|&(i, j, s)| (i.rem_euclid(ta), j.rem_euclid(tb), s)).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != seen.len() {
                return false;
            }
        }
        true
    }

    /// Terms of the tiled Hamiltonian as `(site_a, letter_a, site_b, letter_b)`,
    /// ordered by torus edge then letter.
    fn terms(&self, mask: u64) -> Vec<(usize, u8, usize, u8)> {
        let a = self.alphabet.len();
        let mut out = Vec::new();
        for &(sa, sb, e) in &self.edges {
            for (k, &(la, lb)) in self.alphabet.iter().enumerate() {
                if mask >> (e * a + k) & 1 == 1 {
                    out.push((sa, la, sb, lb));
                }
            }
        }
        out
    }

    /// Frustration graph of the tiled Hamiltonian, computed from site overlaps.
    pub fn frustration_graph(&self, mask: u64) -> Graph {
        let terms = self.terms(mask);
        let mut g = Graph::new(terms.len());
        for (u, &(a1, l1, b1, m1)) in terms.iter().enumerate() {
            for (v, &(a2, l2, b2, m2)) in terms.iter().enumerate().skip(u + 1) {
                let mut odd = false;
                for (s, l) in [(a1, l1), (b1, m1)] {
                    for (t, k) in [(a2, l2), (b2, m2)] {
                        if s == t && l != k {
                            odd = !odd;
                        }
                    }
                }
                if odd {
                    g.insert(u, v);
                }
            }
        }
        g
    }

    /// Tiled Hamiltonian; the cell's weights are repeated on every cell.
    pub fn hamiltonian(&self, mask: u64, cell_weights: &[f64]) -> Hamiltonian {
        let m = self.qubits();
        let ctx = AlgebraContext::pauli(m);
        let a = self.alphabet.len();
        let mut terms = Vec::new();
        for &(sa, sb, e) in &self.edges {
            for (k, &(la, lb)) in self.alphabet.iter().enumerate() {
                let bit = e * a + k;
                if mask >> bit & 1 == 1 {
                    terms.push(pauli_string(&ctx, m, &[(sa, la), (sb, lb)], cell_weights[bit]));
                }
            }
        }
        Hamiltonian::new(ctx, terms).expect("distinct Hermitian lattice terms")
    }

    /// Per-letter Bernoulli draw, redrawn edge by edge until every mandatory
    /// edge is populated.
    pub fn sample_mask<R: Rng>(&self, p: f64, rng: &mut R) -> Result<u64, ModelError> {
        check_p(p)?;
        if p == 0.0 {
            return Err(ModelError::ZeroLatticeProbability);
        }
        let a = self.alphabet.len();
        let mut mask = 0u64;
        for (e, ce) in self.kind.edges().iter().enumerate() {
            loop {
                let mut bits = 0u64;
                for k in 0..a {
                    if rng.gen_bool(p) {
                        bits |= 1 << (e * a + k);
                    }
                }
                if bits != 0 || !ce.mandatory {
                    mask |= bits;
                    break;
                }
            }
        }
        Ok(mask)
    }

    pub fn sample<R: Rng>(&self, p: f64, rng: &mut R) -> Result<Hamiltonian, ModelError> {
        let mask = self.sample_mask(p, rng)?;
        let weights: Vec<f64> = (0..self.cell_bits()).map(|_| random_weight(rng)).collect();
        Ok(self.hamiltonian(mask, &weights))
    }
}

pub fn sample_brick<R: Rng>(p: f64, tiling: (usize, usize), rng: &mut R) -> Result<Hamiltonian, ModelError> {
    Lattice::new(LatticeKind::Brick, tiling, &Lattice::full_alphabet())?.sample(p, rng)
}

pub fn sample_square_nuclei<R: Rng>(p: f64, tiling: (usize, usize), rng: &mut R) -> Result<Hamiltonian, ModelError> {
    Lattice::new(LatticeKind::SquareNuclei, tiling, &Lattice::full_alphabet())?.sample(p, rng)
}

/// Quadratic and quartic Majorana monomials over `2n` modes, each kept with
/// probability `p`.
pub fn sample_majorana<R: Rng>(orbitals: usize, p: f64, rng: &mut R) -> Result<Hamiltonian, ModelError> {
    check_p(p)?;
    let modes = 2 * orbitals;
    let ctx = AlgebraContext::majorana(modes);
    let mut terms = Vec::new();
    let mut push = |set: &[usize], rng: &mut R| {
        if rng.gen_bool(p) {
            let mut exps = FixedBitSet::with_capacity(modes);
            set.iter().for_each(|&k| exps.insert(k));
            let w = random_weight(rng);
            terms.push(PhasedString::new(ctx.canonical_phase(&exps), w, exps));
        }
    };
    for a in 0..modes {
        for b in a + 1..modes {
            push(&[a, b], rng);
        }
    }
    for a in 0..modes {
        for b in a + 1..modes {
            for c in b + 1..modes {
                for d in c + 1..modes {
                    push(&[a, b, c, d], rng);
                }
            }
        }
    }
    Ok(Hamiltonian::new(ctx, terms).expect("distinct Hermitian monomials"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PauliDraw {
    /// Each candidate string kept independently.
    Probability(f64),
    /// Fixed number of distinct uniform strings.
    Count(usize),
}

fn candidate_count(n: usize, locality: Option<usize>) -> u128 {
    match locality {
        Some(k) => binomial(n as u64, k as u64).saturating_mul(3u128.saturating_pow(k as u32)),
        None => 4u128.saturating_pow(n as u32).saturating_sub(1),
    }
}

/// Letters of candidate `idx` in the enumeration order of `candidate_count`.
fn candidate(n: usize, locality: Option<usize>, mut idx: u128) -> Vec<(usize, u8)> {
    match locality {
        None => {
            idx += 1;
            (0..n)
                .filter_map(|q| {
                    let l = (idx >> (2 * q) & 3) as u8;
                    (l != 0).then_some((q, l))
                })
                .collect()
        }
        Some(k) => {
            let letters = 3u128.pow(k as u32);
            let (mut support, mut lt) = (idx / letters, idx % letters);
            // unrank the k-subset in colex order
            let mut sites = Vec::with_capacity(k);
            for slot in (1..=k as u64).rev() {
                let mut c = slot - 1;
                while binomial(c + 1, slot) <= support {
                    c += 1;
                }
                support -= binomial(c, slot);
                sites.push(c as usize);
            }
            sites.reverse();
            sites
                .into_iter()
                .map(|q| {
                    let l = (lt % 3) as u8 + 1;
                    lt /= 3;
                    (q, l)
                })
                .collect()
        }
    }
}

fn random_candidate<R: Rng>(n: usize, locality: Option<usize>, rng: &mut R) -> Vec<(usize, u8)> {
    match locality {
        Some(k) => {
            let mut sites: Vec<usize> = sample_indices(rng, n, k).into_iter().collect();
            sites.sort_unstable();
            sites.into_iter().map(|q| (q, rng.gen_range(1..=3))).collect()
        }
        None => loop {
            let s: Vec<(usize, u8)> = (0..n).filter_map(|q| {
                let l: u8 = rng.gen_range(0..4);
                (l != 0).then_some((q, l))
            }).collect();
            if !s.is_empty() {
                return s;
            }
        },
    }
}

/// Uniform random Pauli strings on `n` qubits, optionally of fixed weight `k`.
pub fn sample_uniform_pauli<R: Rng>(
    n: usize,
    locality: Option<usize>,
    draw: PauliDraw,
    rng: &mut R,
) -> Result<Hamiltonian, ModelError> {
    if let Some(k) = locality {
        if k > n || k == 0 {
            return Err(ModelError::Locality { k, n });
        }
    }
    let ctx = AlgebraContext::pauli(n);
    let available = candidate_count(n, locality);
    let mut terms = Vec::new();
    match draw {
        PauliDraw::Probability(p) => {
            check_p(p)?;
            if available > PROBABILITY_MODE_CAP {
                return Err(ModelError::Enumeration(available));
            }
            for idx in 0..available {
                if rng.gen_bool(p) {
                    terms.push(pauli_string(&ctx, n, &candidate(n, locality, idx), random_weight(rng)));
                }
            }
        }
        PauliDraw::Count(c) => {
            if c as u128 > available {
                return Err(ModelError::TooManyStrings { requested: c as u128, available });
            }
            let mut seen = std::collections::HashSet::new();
            while terms.len() < c {
                let s = random_candidate(n, locality, rng);
                if seen.insert(s.clone()) {
                    terms.push(pauli_string(&ctx, n, &s, random_weight(rng)));
                }
            }
        }
    }
    Ok(Hamiltonian::new(ctx, terms).expect("distinct Hermitian strings"))
}

/// Probability that two random weight-`k` strings on `n` qubits anticommute.
pub fn klocal_anticommute_probability(n: usize, k: usize) -> f64 {
    let total = binomial_f(n as f64, k as u64);
    (0..=k)
        .map(|s| {
            let hyper = binomial_f(k as f64, s as u64) * binomial_f((n - k) as f64, (k - s) as u64) / total;
            let odd: f64 = (1..=s)
                .step_by(2)
                .map(|a| binomial_f(s as f64, a as u64) * (2.0f64 / 3.0).powi(a as i32) * (1.0f64 / 3.0).powi((s - a) as i32))
                .sum();
            hyper * odd
        })
        .sum()
}

/// Largest string count for which `k`-local random Hamiltonians on `n`
/// qubits are SCF with probability about `1 − ε`.
pub fn klocal_threshold(n: usize, k: usize, eps: f64) -> f64 {
    3f64.powf(0.75) / 2f64.sqrt() * eps.powf(0.25) * (n as f64 / (k * k) as f64).powf(0.75)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GnpBounds {
    /// Expected number of induced claws.
    pub expected_claws: f64,
    pub lower: f64,
    pub upper: f64,
}

/// First-moment lower bound and second-moment upper bound on the SCF
/// probability of `G(n, p)`.
pub fn gnp_bounds(n: usize, p: f64) -> Result<GnpBounds, ModelError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(ModelError::Probability(p));
    }
    let q = 1.0 - p;
    let nf = n as f64;
    let claw = 4.0 * p.powi(3) * q.powi(3);
    let expected_claws = binomial_f(nf, 4) * claw;
    let lower = ((1.0 - expected_claws) * q.powf(2.0 * nf)).clamp(0.0, 1.0);
    let r = nf - 4.0;
    let denom = binomial_f(r, 4)
        + 4.0 * binomial_f(r, 3)
        + 1.5 * binomial_f(r, 2) / (p * q)
        + 0.25 * binomial_f(r, 1) * (3.0 / (p * p * q) + 1.0 / q.powi(3))
        + 1.0 / claw;
    let upper = if n < 4 { 1.0 } else { (1.0 - binomial_f(nf, 4) / denom).clamp(0.0, 1.0) };
    Ok(GnpBounds { expected_claws, lower, upper })
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec {
    Gnp { n: usize, p: f64 },
    Lattice { kind: LatticeKind, p: f64, tiling: (usize, usize), alphabet: Vec<String> },
    Majorana { orbitals: usize, p: f64 },
    UniformPauli { qubits: usize, locality: Option<usize>, draw: PauliDraw },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Gnp { .. } => "gnp",
            ModelSpec::Lattice { kind, .. } => kind.name(),
            ModelSpec::Majorana { .. } => "majorana",
            ModelSpec::UniformPauli { locality: Some(_), .. } => "klocal",
            ModelSpec::UniformPauli { locality: None, .. } => "pauli",
        }
    }

    /// Size parameter: vertices, spins, orbitals or qubits.
    pub fn size(&self) -> usize {
        match self {
            ModelSpec::Gnp { n, .. } => *n,
            ModelSpec::Lattice { kind, tiling, .. } => tiling.0 * tiling.1 * kind.sites(),
            ModelSpec::Majorana { orbitals, .. } => *orbitals,
            ModelSpec::UniformPauli { qubits, .. } => *qubits,
        }
    }

    /// Grid coordinate: the acceptance probability, or the string count.
    pub fn p(&self) -> f64 {
        match self {
            ModelSpec::Gnp { p, .. } | ModelSpec::Lattice { p, .. } | ModelSpec::Majorana { p, .. } => *p,
            ModelSpec::UniformPauli { draw: PauliDraw::Probability(p), .. } => *p,
            ModelSpec::UniformPauli { draw: PauliDraw::Count(c), .. } => *c as f64,
        }
    }

    /// Same model at grid coordinate `p`.
    pub fn with_p(&self, p: f64) -> ModelSpec {
        let mut s = self.clone();
        match &mut s {
            ModelSpec::Gnp { p: q, .. } | ModelSpec::Lattice { p: q, .. } | ModelSpec::Majorana { p: q, .. } => *q = p,
            ModelSpec::UniformPauli { draw, .. } => {
                *draw = match draw {
                    PauliDraw::Probability(_) => PauliDraw::Probability(p),
                    PauliDraw::Count(_) => PauliDraw::Count(p.round() as usize),
                }
            }
        }
        s
    }

    /// Frustration graph of one sample.
    pub fn sample_graph<R: Rng>(&self, rng: &mut R) -> Result<Graph, ModelError> {
        Ok(match self {
            ModelSpec::Gnp { n, p } => sample_gnp(*n, *p, rng)?,
            ModelSpec::Lattice { kind, p, tiling, alphabet } => {
                let lat = Lattice::new(*kind, *tiling, alphabet)?;
                lat.frustration_graph(lat.sample_mask(*p, rng)?)
            }
            ModelSpec::Majorana { orbitals, p } => build_frustration_graph(&sample_majorana(*orbitals, *p, rng)?).graph,
            ModelSpec::UniformPauli { qubits, locality, draw } => {
                build_frustration_graph(&sample_uniform_pauli(*qubits, *locality, *draw, rng)?).graph
            }
        })
    }
}

/// SCF verdicts of one graph before and after collapse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub scf_before: bool,
    pub scf_after: bool,
    pub delta_xi: f64,
    pub budget_exceeded: bool,
}

#[derive(Clone, Copy, Debug)]
struct ComponentOutcome {
    scf_before: bool,
    scf_after: bool,
    removed: usize,
    exceeded: bool,
}

fn evaluate_component(sub: &Graph, mode: CollapseMode, budget: u64) -> ComponentOutcome {
    let before = scf_verdict(sub, budget);
    let c = collapse(sub, mode);
    let after = scf_verdict(&c.reduced, budget);
    ComponentOutcome {
        scf_before: before.as_ref().map(|v| v.is_scf).unwrap_or(false),
        scf_after: after.as_ref().map(|v| v.is_scf).unwrap_or(false),
        removed: c.removed,
        exceeded: before.is_err() || after.is_err(),
    }
}

/// SCF before and after collapse plus `ΔΞ`. Twins and line-graph modules
/// never span two components, so each non-trivial component is collapsed on
/// its own; isomorphic copies with identical labelled edge lists share one
/// evaluation.
pub fn evaluate_graph(g: &Graph, mode: CollapseMode, budget: u64) -> Outcome {
    let mut memo: HashMap<Vec<(usize, usize)>, ComponentOutcome> = HashMap::new();
    let mut out = Outcome { scf_before: true, scf_after: true, delta_xi: 0.0, budget_exceeded: false };
    let (mut removed, mut non_isolated) = (0usize, 0usize);
    for comp in g.components() {
        if comp.len() == 1 {
            continue;
        }
        let sub = g.induced_subgraph(&comp).expect("component vertices in range");
        let key = sub.edges();
        let c = *memo.entry(key).or_insert_with(|| evaluate_component(&sub, mode, budget));
        out.scf_before &= c.scf_before;
        out.scf_after &= c.scf_after;
        out.budget_exceeded |= c.exceeded;
        removed += c.removed;
        non_isolated += comp.len();
    }
    if non_isolated > 0 {
        out.delta_xi = removed as f64 / non_isolated as f64;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub model: String,
    pub n: usize,
    pub p: f64,
    pub samples: usize,
    pub p_scf_before: f64,
    pub p_scf_after: f64,
    pub delta_p_scf: f64,
    pub delta_xi_mean: f64,
    pub seed: u64,
    pub budget_exceeded: usize,
}

impl ExperimentRecord {
    /// Binomial standard error of `p_scf_after`.
    pub fn sigma_after(&self) -> f64 {
        (self.p_scf_after * (1.0 - self.p_scf_after) / self.samples as f64).sqrt()
    }

    pub fn sigma_before(&self) -> f64 {
        (self.p_scf_before * (1.0 - self.p_scf_before) / self.samples as f64).sqrt()
    }
}

/// Runs `samples` independent draws of `spec`. Sample `i` uses substream
/// `i` of `seed`, so results do not depend on the worker count.
pub fn run_point(
    spec: &ModelSpec,
    samples: usize,
    seed: u64,
    mode: CollapseMode,
    budget: u64,
) -> Result<ExperimentRecord, ModelError> {
    if samples == 0 {
        return Err(ModelError::NoSamples);
    }
    let outcomes: Vec<Outcome> = match spec {
        ModelSpec::Lattice { kind, p, tiling, alphabet } => {
            let lat = Lattice::new(*kind, *tiling, alphabet)?;
            let memo: Mutex<HashMap<u64, Outcome>> = Mutex::new(HashMap::new());
            (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mask = lat.sample_mask(*p, &mut substream_rng(seed, i as u64))?;
                    if let Some(o) = memo.lock().expect("memo lock").get(&mask) {
                        return Ok(*o);
                    }
                    let o = evaluate_graph(&lat.frustration_graph(mask), mode, budget);
                    memo.lock().expect("memo lock").insert(mask, o);
                    Ok(o)
                })
                .collect::<Result<_, ModelError>>()?
        }
        _ => (0..samples)
            .into_par_iter()
            .map(|i| Ok(evaluate_graph(&spec.sample_graph(&mut substream_rng(seed, i as u64))?, mode, budget)))
            .collect::<Result<_, ModelError>>()?,
    };
    let nf = samples as f64;
    let before = outcomes.iter().filter(|o| o.scf_before).count() as f64 / nf;
    let after = outcomes.iter().filter(|o| o.scf_after).count() as f64 / nf;
    let xi = outcomes.iter().map(|o| o.delta_xi).sum::<f64>() / nf;
    Ok(ExperimentRecord {
        model: spec.name().to_string(),
        n: spec.size(),
        p: spec.p(),
        samples,
        p_scf_before: before,
        p_scf_after: after,
        delta_p_scf: after - before,
        delta_xi_mean: xi,
        seed,
        budget_exceeded: outcomes.iter().filter(|o| o.budget_exceeded).count(),
    })
}

/// Per-support-size counts of admissible unit cells.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactTable {
    pub kind: LatticeKind,
    /// Bits per cell.
    pub m: usize,
    pub admissible: Vec<u64>,
    pub scf_before: Vec<u64>,
    pub scf_after: Vec<u64>,
    pub delta_xi_sum: Vec<f64>,
    pub budget_exceeded: u64,
}

/// `|H₂(k)|` by inclusion–exclusion over empty mandatory edges.
pub fn admissible_count(kind: LatticeKind, alphabet_len: usize, k: usize) -> u128 {
    let m = kind.cell_edges() * alphabet_len;
    let mand = kind.mandatory_edges();
    let mut total: i128 = 0;
    for j in 0..=mand {
        let term = binomial(mand as u64, j as u64) as i128 * binomial((m - j * alphabet_len) as u64, k as u64) as i128;
        total += if j % 2 == 0 { term } else { -term };
    }
    total as u128
}

/// Enumerates every admissible cell of `lat` and tabulates SCF verdicts by
/// number of terms.
pub fn exact_enumerate(lat: &Lattice, mode: CollapseMode, budget: u64) -> Result<ExactTable, ModelError> {
    let m = lat.cell_bits();
    if m > EXACT_BITS_CAP {
        return Err(ModelError::Infeasible(m));
    }
    let a = lat.alphabet.len();
    let full = (1u64 << a) - 1;
    // per-edge choices; mandatory edges exclude the empty set
    let choices: Vec<Vec<u64>> = lat
        .kind
        .edges()
        .iter()
        .map(|ce| (u64::from(ce.mandatory)..=full).collect())
        .collect();
    let total: usize = choices.iter().map(Vec::len).product();
    let masks: Vec<u64> = (0..total)
        .map(|mut idx| {
            let mut mask = 0u64;
            for (e, c) in choices.iter().enumerate() {
                mask |= c[idx % c.len()] << (e * a);
                idx /= c.len();
            }
            mask
        })
        .collect();
    let outcomes: Vec<Outcome> = masks.par_iter().map(|&mask| evaluate_graph(&lat.frustration_graph(mask), mode, budget)).collect();
    let mut t = ExactTable {
        kind: lat.kind,
        m,
        admissible: vec![0; m + 1],
        scf_before: vec![0; m + 1],
        scf_after: vec![0; m + 1],
        delta_xi_sum: vec![0.0; m + 1],
        budget_exceeded: 0,
    };
    for (mask, o) in masks.iter().zip(&outcomes) {
        let k = mask.count_ones() as usize;
        t.admissible[k] += 1;
        t.scf_before[k] += o.scf_before as u64;
        t.scf_after[k] += o.scf_after as u64;
        t.delta_xi_sum[k] += o.delta_xi;
        t.budget_exceeded += o.budget_exceeded as u64;
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactPoint {
    pub p: f64,
    pub p_scf_before: f64,
    pub p_scf_after: f64,
    pub delta_p_scf: f64,
    pub delta_xi_mean: f64,
}

impl ExactTable {
    /// Probability that a draw at `p` is admissible, from the closed-form counts.
    pub fn normalizer(&self, p: f64, alphabet_len: usize) -> f64 {
        (0..=self.m).map(|k| admissible_count(self.kind, alphabet_len, k) as f64 * p.powi(k as i32) * (1.0 - p).powi((self.m - k) as i32)).sum()
    }

    pub fn evaluate(&self, p: f64) -> ExactPoint {
        let weight = |k: usize| p.powi(k as i32) * (1.0 - p).powi((self.m - k) as i32);
        let sum = |v: &[u64]| (0..=self.m).map(|k| v[k] as f64 * weight(k)).sum::<f64>();
        let norm = sum(&self.admissible);
        let before = sum(&self.scf_before) / norm;
        let after = sum(&self.scf_after) / norm;
        let xi = (0..=self.m).map(|k| self.delta_xi_sum[k] * weight(k)).sum::<f64>() / norm;
        ExactPoint { p, p_scf_before: before, p_scf_after: after, delta_p_scf: after - before, delta_xi_mean: xi }
    }
}

/// Exact curves for the brick lattice over `alphabet`.
pub fn exact_brick(p_grid: &[f64], alphabet: &[String], tiling: (usize, usize), mode: CollapseMode, budget: u64) -> Result<(ExactTable, Vec<ExactPoint>), ModelError> {
    exact_curves(LatticeKind::Brick, p_grid, alphabet, tiling, mode, budget)
}

/// Exact curves for the square lattice with nuclei over `alphabet`.
pub fn exact_square(p_grid: &[f64], alphabet: &[String], tiling: (usize, usize), mode: CollapseMode, budget: u64) -> Result<(ExactTable, Vec<ExactPoint>), ModelError> {
    exact_curves(LatticeKind::SquareNuclei, p_grid, alphabet, tiling, mode, budget)
}

fn exact_curves(
    kind: LatticeKind,
    p_grid: &[f64],
    alphabet: &[String],
    tiling: (usize, usize),
    mode: CollapseMode,
    budget: u64,
) -> Result<(ExactTable, Vec<ExactPoint>), ModelError> {
    for &p in p_grid {
        if !(p > 0.0 && p <= 1.0) {
            return Err(ModelError::Probability(p));
        }
    }
    let lat = Lattice::new(kind, tiling, alphabet)?;
    let table = exact_enumerate(&lat, mode, budget)?;
    let points = p_grid.iter().map(|&p| table.evaluate(p)).collect();
    Ok((table, points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::collapse_full;
    use crate::scf::DEFAULT_BUDGET;

    fn alpha(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn gnp_extremes() {
        let mut rng = substream_rng(1, 0);
        assert_eq!(sample_gnp(6, 0.0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(6, 1.0, &mut rng).unwrap(), Graph::complete(6));
        assert!(sample_gnp(6, 1.5, &mut rng).is_err());
    }

    #[test]
    fn gnp_edge_density() {
        let (n, p, samples) = (10usize, 0.3, 10_000u64);
        let pairs = (n * (n - 1) / 2) as f64;
        let mut edges = 0usize;
        for i in 0..samples {
            edges += sample_gnp(n, p, &mut substream_rng(7, i)).unwrap().edge_count();
        }
        let trials = pairs * samples as f64;
        let sigma = (p * (1.0 - p) / trials).sqrt();
        assert!((edges as f64 / trials - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn lattice_graph_matches_dense_oracle() {
        let mut rng = substream_rng(3, 0);
        for kind in [LatticeKind::Brick, LatticeKind::SquareNuclei] {
            let lat = Lattice::new(kind, DEFAULT_TILING, &Lattice::full_alphabet()).unwrap();
            for _ in 0..5 {
                let h = lat.sample(0.3, &mut rng).unwrap();
                let mask = lat.sample_mask(0.3, &mut rng).unwrap();
                let weights = vec![1.0; lat.cell_bits()];
                let h2 = lat.hamiltonian(mask, &weights);
                assert_eq!(build_frustration_graph(&h2).graph, lat.frustration_graph(mask));
                assert!(!h.terms().is_empty());
            }
        }
    }

    #[test]
    fn brick_full_cell_has_45_terms() {
        let lat = Lattice::new(LatticeKind::Brick, DEFAULT_TILING, &Lattice::full_alphabet()).unwrap();
        assert_eq!(lat.cell_bits(), 45);
        let mut rng = substream_rng(0, 0);
        assert_eq!(lat.sample_mask(1.0, &mut rng).unwrap(), (1u64 << 45) - 1);
        assert_eq!(lat.frustration_graph((1u64 << 45) - 1).n(), 45 * 16);
        assert!(lat.sample_mask(0.0, &mut rng).is_err());
        let sq = Lattice::new(LatticeKind::SquareNuclei, DEFAULT_TILING, &Lattice::full_alphabet()).unwrap();
        assert_eq!(sq.frustration_graph((1 << 27) - 1).n(), 27 * 16);
    }

    #[test]
    fn nucleus_term_repeats_on_every_vertex() {
        let sq = Lattice::new(LatticeKind::SquareNuclei, DEFAULT_TILING, &alpha(&["XZ"])).unwrap();
        let h = sq.hamiltonian(0b111, &[1.0, 1.0, 0.7]);
        let nucleus: Vec<_> = h.terms().iter().filter(|t| t.scalar == 0.7).collect();
        assert_eq!(nucleus.len(), 16);
    }

    #[test]
    fn tiling_faithfulness() {
        for (kind, small) in [(LatticeKind::Brick, (1, 1)), (LatticeKind::SquareNuclei, (3, 3))] {
            assert!(Lattice::new(kind, DEFAULT_TILING, &Lattice::full_alphabet()).is_ok());
            assert!(matches!(
                Lattice::new(kind, small, &Lattice::full_alphabet()),
                Err(ModelError::Unfaithful(a, b, 1)) if (a, b) == small
            ));
        }
    }

    #[test]
    fn admissible_counts() {
        assert_eq!(admissible_count(LatticeKind::Brick, 9, 4), 0);
        assert_eq!(admissible_count(LatticeKind::Brick, 9, 5), 59049);
        assert_eq!(admissible_count(LatticeKind::SquareNuclei, 9, 1), 0);
        assert_eq!(admissible_count(LatticeKind::SquareNuclei, 9, 2), 81);
        // total admissible cells: (2^9 − 1)^5 and (2^9 − 1)^2 · 2^9
        let brick: u128 = (0..=45).map(|k| admissible_count(LatticeKind::Brick, 9, k)).sum();
        assert_eq!(brick, 511u128.pow(5));
        let sq: u128 = (0..=27).map(|k| admissible_count(LatticeKind::SquareNuclei, 9, k)).sum();
        assert_eq!(sq, 511u128.pow(2) * 512);
    }

    #[test]
    fn exact_table_counts_match_formula() {
        let lat = Lattice::new(LatticeKind::Brick, DEFAULT_TILING, &alpha(&["XX", "ZZ"])).unwrap();
        let t = exact_enumerate(&lat, CollapseMode::Full, DEFAULT_BUDGET).unwrap();
        for k in 0..=t.m {
            assert_eq!(t.admissible[k] as u128, admissible_count(LatticeKind::Brick, 2, k));
            assert!(t.scf_after[k] >= t.scf_before[k]);
        }
        for p in [0.1f64, 0.5, 0.9] {
            let direct: f64 = (0..=t.m).map(|k| t.admissible[k] as f64 * p.powi(k as i32) * (1.0 - p).powi((t.m - k) as i32)).sum();
            assert!((direct - t.normalizer(p, 2)).abs() < 1e-12);
            let e = t.evaluate(p);
            assert!(e.delta_p_scf >= 0.0);
        }
    }

    #[test]
    fn majorana_counts() {
        let mut rng = substream_rng(0, 0);
        assert_eq!(sample_majorana(2, 1.0, &mut rng).unwrap().terms().len(), 7);
        assert_eq!(sample_majorana(3, 1.0, &mut rng).unwrap().terms().len(), 30);
        assert!(sample_majorana(3, 0.0, &mut rng).unwrap().terms().is_empty());
    }

    #[test]
    fn majorana_limits() {
        let mut rng = substream_rng(0, 0);
        let g2 = build_frustration_graph(&sample_majorana(2, 1.0, &mut rng).unwrap()).graph;
        let c2 = collapse_full(&g2);
        assert_eq!((c2.removed, c2.non_isolated), (5, 6));
        let g3 = build_frustration_graph(&sample_majorana(3, 1.0, &mut rng).unwrap()).graph;
        let c3 = collapse_full(&g3);
        assert_eq!((c3.removed, c3.non_isolated), (29, 30));
        assert!(scf_verdict(&c3.reduced, DEFAULT_BUDGET).unwrap().is_scf);
    }

    #[test]
    fn uniform_pauli_basics() {
        let mut rng = substream_rng(0, 0);
        let h = sample_uniform_pauli(1, Some(1), PauliDraw::Probability(1.0), &mut rng).unwrap();
        let labels: Vec<String> = h.terms().iter().map(|t| h.ctx().format_label(t).1).collect();
        assert_eq!(labels, vec!["X", "Y", "Z"]);
        assert!(sample_uniform_pauli(1, None, PauliDraw::Count(4), &mut rng).is_err());
        assert!(sample_uniform_pauli(2, Some(3), PauliDraw::Count(1), &mut rng).is_err());
        let all = sample_uniform_pauli(4, Some(2), PauliDraw::Probability(1.0), &mut rng).unwrap();
        assert_eq!(all.terms().len(), 6 * 9);
        let all = sample_uniform_pauli(2, None, PauliDraw::Probability(1.0), &mut rng).unwrap();
        assert_eq!(all.terms().len(), 15);
    }

    #[test]
    fn uniform_pauli_anticommute_half() {
        let mut anti = 0usize;
        let trials = 4000;
        for i in 0..trials {
            let h = sample_uniform_pauli(6, None, PauliDraw::Count(2), &mut substream_rng(9, i)).unwrap();
            anti += !h.ctx().commutes(&h.terms()[0], &h.terms()[1]).unwrap() as usize;
        }
        let f = anti as f64 / trials as f64;
        // distinct strings anticommute with probability 4^n / (2(4^n − 1))
        let p = 4096.0 / (2.0 * 4095.0);
        assert!((f - p).abs() < 3.0 * (p * (1.0 - p) / trials as f64).sqrt());
    }

    #[test]
    fn klocal_probability_matches_sampling() {
        for (n, k) in [(6usize, 2usize), (8, 3)] {
            let want = klocal_anticommute_probability(n, k);
            let trials = 6000;
            let mut anti = 0;
            for i in 0..trials {
                let mut rng = substream_rng(n as u64 * 100 + k as u64, i);
                let ctx = AlgebraContext::pauli(n);
                let a = pauli_string(&ctx, n, &random_candidate(n, Some(k), &mut rng), 1.0);
                let b = pauli_string(&ctx, n, &random_candidate(n, Some(k), &mut rng), 1.0);
                anti += !ctx.commutes(&a, &b).unwrap() as usize;
            }
            let f = anti as f64 / trials as f64;
            assert!((f - want).abs() < 3.0 * (want * (1.0 - want) / trials as f64).sqrt(), "{n} {k}: {f} vs {want}");
        }
    }

    #[test]
    fn klocal_candidates_are_distinct() {
        let (n, k) = (5, 2);
        let mut seen: Vec<Vec<(usize, u8)>> = (0..candidate_count(n, Some(k))).map(|i| candidate(n, Some(k), i)).collect();
        assert!(seen.iter().all(|c| c.len() == k && c.windows(2).all(|w| w[0].0 < w[1].0)));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 90);
    }

    #[test]
    fn threshold_scaling() {
        let a = klocal_threshold(1000, 2, 0.1);
        let b = klocal_threshold(2000, 2, 0.1);
        assert!((b / a - 2f64.powf(0.75)).abs() < 1e-12);
        assert!(klocal_threshold(1000, 2, 1e-40) < 1e-6);
    }

    #[test]
    fn bounds_values() {
        let b = gnp_bounds(4, 0.5).unwrap();
        assert!((b.expected_claws - 1.0 / 16.0).abs() < 1e-15);
        assert!(gnp_bounds(20, 1e-4).unwrap().lower > 0.99);
        assert!(gnp_bounds(20, 0.0).is_err());
        for p in [0.05, 0.2, 0.5, 0.8] {
            let b = gnp_bounds(20, p).unwrap();
            assert!(b.lower <= b.upper);
        }
    }

    /// Exact second moment of the induced-claw count, by enumerating the
    /// edge states of two 4-sets with a given overlap.
    fn second_moment_oracle(n: usize, p: f64) -> f64 {
        let claw4 = |verts: [usize; 4], edges: &dyn Fn(usize, usize) -> bool| {
            (0..4).any(|c| {
                let others: Vec<usize> = (0..4).filter(|&x| x != c).map(|x| verts[x]).collect();
                others.iter().all(|&o| edges(verts[c], o))
                    && !edges(others[0], others[1])
                    && !edges(others[0], others[2])
                    && !edges(others[1], others[2])
            })
        };
        let mut total = 0.0;
        for o in 0..=4usize {
            let s = [0, 1, 2, 3];
            let mut t = [0usize; 4];
            for (i, x) in t.iter_mut().enumerate() {
                *x = if i < o { i } else { 4 + i - o };
            }
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for set in [s, t] {
                for a in 0..4 {
                    for b in a + 1..4 {
                        let e = (set[a].min(set[b]), set[a].max(set[b]));
                        if !pairs.contains(&e) {
                            pairs.push(e);
                        }
                    }
                }
            }
            let mut prob = 0.0;
            for state in 0u32..1 << pairs.len() {
                let edges = |u: usize, v: usize| {
                    let e = (u.min(v), u.max(v));
                    state >> pairs.iter().position(|&x| x == e).unwrap() & 1 == 1
                };
                if claw4(s, &edges) && claw4(t, &edges) {
                    let k = state.count_ones() as i32;
                    prob += p.powi(k) * (1.0 - p).powi(pairs.len() as i32 - k);
                }
            }
            let count = binomial_f(n as f64, 4) * binomial_f(4.0, o as u64) * binomial_f(n as f64 - 4.0, 4 - o as u64);
            total += count * prob;
        }
        total
    }

    #[test]
    fn upper_bound_is_second_moment_bound() {
        for n in [6usize, 10, 20] {
            for p in [0.1f64, 0.3, 0.5, 0.77] {
                let e1 = binomial_f(n as f64, 4) * 4.0 * p.powi(3) * (1.0 - p).powi(3);
                let want = 1.0 - e1 * e1 / second_moment_oracle(n, p);
                let got = gnp_bounds(n, p).unwrap().upper;
                assert!((want - got).abs() < 1e-12, "n={n} p={p}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn substreams_are_order_independent() {
        let spec = ModelSpec::Gnp { n: 12, p: 0.2 };
        let a = run_point(&spec, 64, 42, CollapseMode::Full, DEFAULT_BUDGET).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_point(&spec, 64, 42, CollapseMode::Full, DEFAULT_BUDGET).unwrap());
        assert_eq!(a, b);
        assert!(a.delta_p_scf >= 0.0);
        assert_eq!(run_point(&spec, 0, 42, CollapseMode::Full, DEFAULT_BUDGET), Err(ModelError::NoSamples));
    }

    fn evaluate_whole(g: &Graph, mode: CollapseMode) -> Outcome {
        let before = scf_verdict(g, DEFAULT_BUDGET).unwrap();
        let c = collapse(g, mode);
        let after = scf_verdict(&c.reduced, DEFAULT_BUDGET).unwrap();
        Outcome { scf_before: before.is_scf, scf_after: after.is_scf, delta_xi: c.delta_xi, budget_exceeded: false }
    }

    #[test]
    fn componentwise_evaluation_matches_whole_graph() {
        let lat = Lattice::new(LatticeKind::Brick, DEFAULT_TILING, &Lattice::full_alphabet()).unwrap();
        for i in 0..150u64 {
            let mut rng = substream_rng(21, i);
            let p = [0.02, 0.05, 0.1, 0.2, 0.3][i as usize % 5];
            let g = if i % 2 == 0 {
                lat.frustration_graph(lat.sample_mask(p, &mut rng).unwrap())
            } else {
                sample_gnp(rng.gen_range(2..24), p * 0.5, &mut rng).unwrap()
            };
            for mode in [CollapseMode::Twins, CollapseMode::Full] {
                let a = evaluate_graph(&g, mode, DEFAULT_BUDGET);
                let b = evaluate_whole(&g, mode);
                assert_eq!((a.scf_before, a.scf_after), (b.scf_before, b.scf_after), "sample {i}");
                assert!((a.delta_xi - b.delta_xi).abs() < 1e-12, "sample {i}");
            }
        }
    }
}
