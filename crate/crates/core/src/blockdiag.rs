//! Block diagonalisation from a twin-collapse trace.
//!
//! False-sibling merges contribute commuting symmetry generators `g·h`; each
//! sign pattern `x` of an independent generator set labels a block. True-sibling
//! merges are rotations `U = cos(θ/2) + sin(θ/2)·g·h` that fold `a·g + b·h`
//! into `√(a²+b²)·g`. Dense checks run on qubit Hamiltonians; Majorana input
//! is mapped to qubits first.

use fixedbitset::FixedBitSet;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgebraContext, AlgebraError, AlgebraKind, Hamiltonian, PhasedString};
use crate::collapse::{collapse_twins_literal, CollapseEvent, CollapseTrace};
use crate::graph::{build_frustration_graph, FrustrationGraph};
use crate::models::random_weight;
use crate::svn::pauli_majorana_m;

pub type C64 = Complex64;

pub const MAX_QUBITS: usize = 12;
pub const MAX_GENERATORS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlockError {
    #[error("{0} qubits exceed the dense cap of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("{0} symmetry generators exceed the block cap of {MAX_GENERATORS}")]
    TooManyGenerators(usize),
    #[error("pair product is not in the span of the symmetry generators")]
    NotDecomposable,
    #[error("custom algebra contexts have no dense representation")]
    Unsupported,
    #[error("rotation needs anticommuting Hermitian strings")]
    NotAnticommuting,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn qubits(ctx: &AlgebraContext) -> Result<usize, BlockError> {
    match ctx.kind() {
        AlgebraKind::PauliQubits(m) if m <= MAX_QUBITS => Ok(m),
        AlgebraKind::PauliQubits(m) => Err(BlockError::TooManyQubits(m)),
        _ => Err(BlockError::Unsupported),
    }
}

/// `(x mask, z mask, coefficient)`; basis index bit `k` is qubit `k`.
fn masks(m: usize, s: &PhasedString) -> (usize, usize, C64) {
    let (mut xm, mut zm) = (0usize, 0usize);
    for k in 0..m {
        if s.exps.contains(k) {
            zm |= 1 << k;
        }
        if s.exps.contains(m + k) {
            xm |= 1 << k;
        }
    }
    let ph = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][s.phase as usize % 4];
    (xm, zm, ph * s.scalar)
}

fn sign(bits: usize) -> f64 {
    if bits.count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `s · A`.
pub fn apply_left(m: usize, s: &PhasedString, a: &DMatrix<C64>) -> DMatrix<C64> {
    let (xm, zm, c) = masks(m, s);
    DMatrix::from_fn(a.nrows(), a.ncols(), |r, col| a[(r ^ xm, col)] * c * sign(zm & r))
}

/// `A · s`.
pub fn apply_right(m: usize, s: &PhasedString, a: &DMatrix<C64>) -> DMatrix<C64> {
    let (xm, zm, c) = masks(m, s);
    DMatrix::from_fn(a.nrows(), a.ncols(), |r, col| a[(r, col ^ xm)] * c * sign(zm & (col ^ xm)))
}

/// Dense matrix of a qubit string.
pub fn dense_string(m: usize, s: &PhasedString) -> DMatrix<C64> {
    let n = 1 << m;
    apply_left(m, s, &DMatrix::identity(n, n))
}

pub fn dense_hamiltonian(h: &Hamiltonian) -> Result<DMatrix<C64>, BlockError> {
    let h = majorana_to_pauli(h)?;
    let m = qubits(h.ctx())?;
    let n = 1 << m;
    let mut out = DMatrix::zeros(n, n);
    for t in h.terms() {
        let (xm, zm, c) = masks(m, t);
        for col in 0..n {
            let r = col ^ xm;
            out[(r, col)] += c * sign(zm & r);
        }
    }
    Ok(out)
}

/// `Π_j (1 + x_j g_j) / 2`.
pub fn dense_projector(m: usize, gens: &[PhasedString], x: &[i8]) -> DMatrix<C64> {
    let n = 1 << m;
    let mut q = DMatrix::<C64>::identity(n, n);
    for (g, &xi) in gens.iter().zip(x) {
        let gq = apply_left(m, g, &q);
        q = (q + gq * C64::from(xi as f64)) * C64::from(0.5);
    }
    q
}

/// `cos(θ/2) + sin(θ/2)·g·h`, which satisfies `U g U† = cos θ·g − sin θ·h`
/// for anticommuting Hermitian `g`, `h`.
pub fn dense_rotation(ctx: &AlgebraContext, g: &PhasedString, h: &PhasedString, theta: f64) -> Result<DMatrix<C64>, BlockError> {
    let m = qubits(ctx)?;
    let n = 1 << m;
    Ok(rotate_left(ctx, m, g, h, theta, &DMatrix::identity(n, n)))
}

fn rotate_left(ctx: &AlgebraContext, m: usize, g: &PhasedString, h: &PhasedString, theta: f64, a: &DMatrix<C64>) -> DMatrix<C64> {
    let gh = ctx.multiply(&g.unit(), &h.unit()).expect("same context");
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    a * C64::from(c) + apply_left(m, &gh, a) * C64::from(s)
}

/// Max-entry residual of `U (a g + b h) U† = (a cos θ + b sin θ) g + (b cos θ − a sin θ) h`
/// with `U` from [`dense_rotation`].
pub fn rotation_residual(ctx: &AlgebraContext, g: &PhasedString, h: &PhasedString, a: f64, b: f64, theta: f64) -> Result<f64, BlockError> {
    if ctx.commutes(g, h)? || !ctx.is_hermitian(g) || !ctx.is_hermitian(h) {
        return Err(BlockError::NotAnticommuting);
    }
    let m = qubits(ctx)?;
    let (dg, dh) = (dense_string(m, &g.unit()), dense_string(m, &h.unit()));
    let u = dense_rotation(ctx, g, h, theta)?;
    let lhs = &u * (&dg * C64::from(a) + &dh * C64::from(b)) * u.adjoint();
    let (c, s) = (theta.cos(), theta.sin());
    let rhs = dg * C64::from(a * c + b * s) + dh * C64::from(b * c - a * s);
    Ok(max_abs(&(lhs - rhs)))
}

/// Rewrites a Majorana Hamiltonian on qubits through the Majorana-to-qubit
/// map: `γ_k` becomes the Hermitian qubit string with exponents `M e_k`.
/// Qubit Hamiltonians are returned unchanged.
pub fn majorana_to_pauli(h: &Hamiltonian) -> Result<Hamiltonian, BlockError> {
    let n = match h.ctx().kind() {
        AlgebraKind::PauliQubits(_) => return Ok(h.clone()),
        AlgebraKind::MajoranaModes(n) => n,
        AlgebraKind::Custom => return Err(BlockError::Unsupported),
    };
    let m = n.div_ceil(2);
    let ctx = AlgebraContext::pauli(m);
    let map = pauli_majorana_m(m);
    let images: Vec<PhasedString> = (0..n)
        .map(|k| {
            let mut e = FixedBitSet::with_capacity(2 * m);
            for i in 0..2 * m {
                e.set(i, map.get(i, k) == 1);
            }
            PhasedString::new(ctx.canonical_phase(&e), 1.0, e)
        })
        .collect();
    let terms = h
        .terms()
        .iter()
        .map(|t| {
            let mut acc = PhasedString::new(t.phase, t.scalar, FixedBitSet::with_capacity(2 * m));
            for k in t.exps.ones() {
                acc = ctx.multiply(&acc, &images[k]).expect("same context");
            }
            acc
        })
        .collect();
    Ok(Hamiltonian::new(ctx, terms)?)
}

/// Independent commuting generators with a Z₂ elimination table.
#[derive(Clone, Debug)]
pub struct SymmetryBasis {
    ctx: AlgebraContext,
    pub generators: Vec<PhasedString>,
    /// Collapse round that introduced each generator.
    pub rounds: Vec<usize>,
    /// Echelon rows: reduced exponents, generator combination, pivot.
    rows: Vec<(FixedBitSet, FixedBitSet, usize)>,
}

impl SymmetryBasis {
    pub fn new(ctx: &AlgebraContext) -> Self {
        SymmetryBasis { ctx: ctx.clone(), generators: Vec::new(), rounds: Vec::new(), rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    fn reduce(&self, exps: &FixedBitSet) -> (FixedBitSet, FixedBitSet) {
        let mut v = exps.clone();
        let mut combo = FixedBitSet::with_capacity(MAX_GENERATORS.max(self.len() + 1));
        for (row, c, p) in &self.rows {
            if v.contains(*p) {
                v.symmetric_difference_with(row);
                combo.symmetric_difference_with(c);
            }
        }
        (v, combo)
    }

    /// Adds `s` (unit scalar) when independent of the current generators.
    pub fn insert(&mut self, s: &PhasedString, round: usize) -> bool {
        let (v, mut combo) = self.reduce(&s.exps);
        let Some(p) = v.minimum() else { return false };
        combo.grow(self.len() + 1);
        combo.insert(self.len());
        self.rows.push((v, combo, p));
        self.generators.push(s.unit());
        self.rounds.push(round);
        true
    }

    /// `s = sign · Π_{j∈idx} g_j` with `sign = ±1`, if `s` lies in the span.
    pub fn decompose(&self, s: &PhasedString) -> Option<(i8, Vec<usize>)> {
        let (v, combo) = self.reduce(&s.exps);
        if !v.is_clear() {
            return None;
        }
        let idx: Vec<usize> = combo.ones().collect();
        let mut prod = self.ctx.identity();
        for &j in &idx {
            prod = self.ctx.multiply(&prod, &self.generators[j]).ok()?;
        }
        match (4 + s.phase - prod.phase) % 4 {
            0 => Some((1, idx)),
            2 => Some((-1, idx)),
            _ => None,
        }
    }
}

/// Generators from the false-sibling merges of one round, each `g·h` for a kept
/// `g` and removed `h`, reduced to an independent set.
pub fn false_twin_generators(ctx: &AlgebraContext, ops: &[PhasedString], trace: &CollapseTrace, round: usize) -> SymmetryBasis {
    let mut basis = SymmetryBasis::new(ctx);
    for e in &trace.events {
        if let CollapseEvent::FalseSiblings { round: r, kept, removed } = e {
            if *r == round {
                for &h in removed {
                    let gh = ctx.multiply(&ops[*kept].unit(), &ops[h].unit()).expect("same context");
                    basis.insert(&gh, round);
                }
            }
        }
    }
    basis
}

/// `β_x(g h)` for the block with generator signs `x`.
pub fn beta_sign(pair_product: &PhasedString, basis: &SymmetryBasis, x: &[i8]) -> Result<i8, BlockError> {
    let (s, idx) = basis.decompose(pair_product).ok_or(BlockError::NotDecomposable)?;
    Ok(idx.iter().fold(s, |acc, &j| acc * x[j]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    pub round: usize,
    pub kept: usize,
    pub removed: usize,
    pub theta: f64,
}

/// Collapsed weights of one block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockWeights {
    pub x: Vec<i8>,
    /// `(surviving vertex, weight)`, ascending vertex.
    pub weights: Vec<(usize, f64)>,
    pub rotations: Vec<Rotation>,
    /// Some surviving weight vanished.
    pub non_generic: bool,
}

/// Everything needed to evaluate blocks of a qubit Hamiltonian.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    pub h: Hamiltonian,
    pub graph: FrustrationGraph,
    pub trace: CollapseTrace,
    pub basis: SymmetryBasis,
    /// Unit operator per frustration-graph vertex.
    pub ops: Vec<PhasedString>,
    pub weights: Vec<f64>,
    pub identity_weight: f64,
    /// For each false-merge `(g, h)`: its pair product.
    pub pairs: Vec<(usize, usize, PhasedString)>,
}

impl BlockStructure {
    pub fn new(h: &Hamiltonian) -> Result<Self, BlockError> {
        let h = majorana_to_pauli(h)?;
        qubits(h.ctx())?;
        let ctx = h.ctx().clone();
        let graph = build_frustration_graph(&h);
        let ops: Vec<PhasedString> = graph.term_of_vertex.iter().map(|&t| h.terms()[t].unit()).collect();
        let weights = graph.term_of_vertex.iter().map(|&t| h.terms()[t].scalar).collect();
        let identity_weight = h
            .identity_terms()
            .iter()
            .map(|&t| {
                let s = &h.terms()[t];
                // identity terms are Hermitian: phase 0 or 2
                if s.phase == 2 {
                    -s.scalar
                } else {
                    s.scalar
                }
            })
            .sum();
        let trace = collapse_twins_literal(&graph.graph).trace;
        let mut basis = SymmetryBasis::new(&ctx);
        let mut pairs = Vec::new();
        for e in &trace.events {
            if let CollapseEvent::FalseSiblings { round, kept, removed } = e {
                for &r in removed {
                    let gh = ctx.multiply(&ops[*kept], &ops[r])?;
                    basis.insert(&gh, *round);
                    pairs.push((*kept, r, gh));
                }
            }
        }
        if basis.len() > MAX_GENERATORS {
            return Err(BlockError::TooManyGenerators(basis.len()));
        }
        Ok(BlockStructure { h, graph, trace, basis, ops, weights, identity_weight, pairs })
    }

    pub fn qubits(&self) -> usize {
        qubits(self.h.ctx()).expect("checked in new")
    }

    pub fn n_blocks(&self) -> usize {
        1 << self.basis.len()
    }

    /// Sign vector of block `k`: bit `j` set means `x_j = −1`.
    pub fn block_signs(&self, k: usize) -> Vec<i8> {
        (0..self.basis.len()).map(|j| if k >> j & 1 == 1 { -1 } else { 1 }).collect()
    }

    pub fn block_weights(&self, x: &[i8]) -> Result<BlockWeights, BlockError> {
        let mut w = self.weights.clone();
        let scale = w.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let mut rotations = Vec::new();
        let mut pair = self.pairs.iter();
        for e in &self.trace.events {
            match e {
                CollapseEvent::FalseSiblings { kept, removed, .. } => {
                    for &r in removed {
                        let (_, _, gh) = pair.next().expect("one pair per removed vertex");
                        w[*kept] += beta_sign(gh, &self.basis, x)? as f64 * w[r];
                        w[r] = 0.0;
                    }
                }
                CollapseEvent::TrueSiblings { round, kept, removed } => {
                    for &r in removed {
                        let (a, b) = (w[*kept], w[r]);
                        rotations.push(Rotation { round: *round, kept: *kept, removed: r, theta: b.atan2(a) });
                        w[*kept] = a.hypot(b);
                        w[r] = 0.0;
                    }
                }
                CollapseEvent::LineModule { .. } => unreachable!("twin traces only"),
            }
        }
        let survivors = self.trace.replay(self.ops.len());
        let weights: Vec<(usize, f64)> = survivors.iter().map(|&v| (v, w[v])).collect();
        let non_generic = weights.iter().any(|&(_, v)| v.abs() <= 1e-12 * scale.max(1.0));
        Ok(BlockWeights { x: x.to_vec(), weights, rotations, non_generic })
    }

    /// Collapsed block Hamiltonian as a dense matrix.
    pub fn dense_block_hamiltonian(&self, bw: &BlockWeights) -> DMatrix<C64> {
        let m = self.qubits();
        let n = 1 << m;
        let mut out = DMatrix::<C64>::identity(n, n) * C64::from(self.identity_weight);
        for &(v, w) in &bw.weights {
            out += dense_string(m, &self.ops[v]) * C64::from(w);
        }
        out
    }

    /// Product of all rotations, in application order.
    fn rotation_product(&self, rots: &[Rotation]) -> DMatrix<C64> {
        let m = self.qubits();
        let n = 1 << m;
        let mut u = DMatrix::<C64>::identity(n, n);
        for r in rots {
            u = rotate_left(self.h.ctx(), m, &self.ops[r.kept], &self.ops[r.removed], r.theta, &u);
        }
        u
    }
}

#[derive(Clone, Debug)]
pub struct BlockReport {
    pub x: Vec<i8>,
    pub rank: usize,
    pub weights: Vec<(usize, f64)>,
    pub spectrum: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub qubits: usize,
    pub terms: usize,
    pub generators: usize,
    pub twin_rounds: usize,
    pub blocks: Vec<BlockReport>,
    pub completeness: f64,
    pub orthogonality: f64,
    pub idempotence: f64,
    pub commutation: f64,
    pub rotated_commutation: f64,
    pub beta: f64,
    pub spectrum: f64,
    pub non_generic: bool,
    pub passed: bool,
    pub failure: Option<String>,
}

pub const PROJECTOR_TOL: f64 = 1e-12;
pub const SPECTRUM_TOL: f64 = 1e-8;

fn max_abs(a: &DMatrix<C64>) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn hermitian_eigenvalues(a: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Orthonormal basis of the range of a projector.
fn range_basis(q: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = q.clone().symmetric_eigen();
    let cols: Vec<usize> = (0..q.nrows()).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    DMatrix::from_fn(q.nrows(), cols.len(), |r, c| eig.eigenvectors[(r, cols[c])])
}

/// Dense check of the block decomposition obtained from the twin collapse.
///
/// Each block is represented by an orthonormal basis `W_x = U_x† B_x` of the
/// range of `P(x) = U_x† Q(x) U_x`, where `B_x` spans the range of `Q(x)`.
/// Orthogonality is measured on the overlaps `W_x† W_y`, commutation with `H`
/// as the invariance residual `H W_x − W_x (W_x† H W_x)`.
pub fn verify_block_diagonalization(h: &Hamiltonian) -> Result<VerifyReport, BlockError> {
    let bs = BlockStructure::new(h)?;
    let m = bs.qubits();
    let n = 1 << m;
    let hd = dense_hamiltonian(&bs.h)?;
    let h_scale = max_abs(&hd).max(1.0);

    let mut blocks = Vec::new();
    let mut bases: Vec<DMatrix<C64>> = Vec::new();
    let mut sum = DMatrix::<C64>::zeros(n, n);
    let (mut idempotence, mut commutation, mut rotated, mut beta) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut non_generic = false;
    let mut block_spectra = Vec::new();
    let false_rounds: Vec<usize> = {
        let mut r = bs.basis.rounds.clone();
        r.dedup();
        r
    };

    for k in 0..bs.n_blocks() {
        let x = bs.block_signs(k);
        let bw = bs.block_weights(&x)?;
        non_generic |= bw.non_generic;
        let q = dense_projector(m, &bs.basis.generators, &x);
        let u = bs.rotation_product(&bw.rotations);
        let b = range_basis(&q);
        let w = u.adjoint() * &b;
        let k_dim = w.ncols();
        idempotence = idempotence.max(max_abs(&(w.adjoint() * &w - DMatrix::identity(k_dim, k_dim))));
        let hw = &hd * &w;
        let compressed = w.adjoint() * &hw;
        commutation = commutation.max(max_abs(&(hw - &w * &compressed)) / h_scale);
        sum += &w * w.adjoint();

        for (_, _, gh) in &bs.pairs {
            let sgn = beta_sign(gh, &bs.basis, &x)? as f64;
            beta = beta.max(max_abs(&(apply_right(m, gh, &q) - &q * C64::from(sgn))));
        }

        // Round projectors, each rotated by the rotations preceding its round.
        let round_proj: Vec<DMatrix<C64>> = false_rounds
            .iter()
            .map(|&r| {
                let idx: Vec<usize> = (0..bs.basis.len()).filter(|&j| bs.basis.rounds[j] == r).collect();
                let gens: Vec<PhasedString> = idx.iter().map(|&j| bs.basis.generators[j].clone()).collect();
                let xs: Vec<i8> = idx.iter().map(|&j| x[j]).collect();
                let before: Vec<Rotation> = bw.rotations.iter().filter(|t| t.round < r).cloned().collect();
                let ub = bs.rotation_product(&before);
                ub.adjoint() * dense_projector(m, &gens, &xs) * ub
            })
            .collect();
        for i in 0..round_proj.len() {
            for j in 0..i {
                let c = &round_proj[i] * &round_proj[j] - &round_proj[j] * &round_proj[i];
                rotated = rotated.max(max_abs(&c));
            }
        }

        let hc = bs.dense_block_hamiltonian(&bw);
        let spectrum = hermitian_eigenvalues(&(b.adjoint() * hc * &b));
        block_spectra.extend(spectrum.iter().copied());
        blocks.push(BlockReport { x, rank: k_dim, weights: bw.weights, spectrum });
        bases.push(w);
    }

    let completeness = max_abs(&(sum - DMatrix::<C64>::identity(n, n)));
    let mut orthogonality = 0.0f64;
    for i in 0..bases.len() {
        for j in 0..i {
            orthogonality = orthogonality.max(max_abs(&(bases[i].adjoint() * &bases[j])));
        }
    }

    let full = hermitian_eigenvalues(&hd);
    block_spectra.sort_by(f64::total_cmp);
    let spectrum = if full.len() == block_spectra.len() {
        full.iter().zip(&block_spectra).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    } else {
        f64::INFINITY
    };

    let checks = [
        ("completeness", completeness, PROJECTOR_TOL),
        ("orthogonality", orthogonality, PROJECTOR_TOL),
        ("idempotence", idempotence, PROJECTOR_TOL),
        ("commutation", commutation, PROJECTOR_TOL),
        ("rotated projector commutation", rotated, PROJECTOR_TOL),
        ("beta sign", beta, PROJECTOR_TOL),
        ("spectrum", spectrum, SPECTRUM_TOL),
    ];
    let failure = checks
        .iter()
        .find(|(_, v, tol)| v.is_nan() || v > tol)
        .map(|(name, v, tol)| format!("{name} residual {v:e} exceeds {tol:e}"));
    Ok(VerifyReport {
        qubits: m,
        terms: bs.h.terms().len(),
        generators: bs.basis.len(),
        twin_rounds: bs.trace.twin_rounds(),
        blocks,
        completeness,
        orthogonality,
        idempotence,
        commutation,
        rotated_commutation: rotated,
        beta,
        spectrum,
        non_generic,
        passed: failure.is_none(),
        failure,
    })
}

/// Uniform non-identity Pauli string on `ctx.n_generators() / 2` qubits.
pub fn random_pauli<R: Rng>(rng: &mut R, ctx: &AlgebraContext) -> PhasedString {
    let m = ctx.n_generators() / 2;
    loop {
        let l: String = (0..m).map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)]).collect();
        let s = ctx.parse_label(&l).expect("pauli label");
        if !s.is_identity() {
            return s;
        }
    }
}

/// Random qubit Hamiltonian with `1..=max_qubits` qubits and up to
/// `max_terms` distinct terms carrying weights from [`random_weight`].
pub fn random_hamiltonian<R: Rng>(rng: &mut R, max_qubits: usize, max_terms: usize) -> Hamiltonian {
    let m = rng.gen_range(1..=max_qubits.max(1));
    let ctx = AlgebraContext::pauli(m);
    let mut terms: Vec<PhasedString> = Vec::new();
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let mut s = random_pauli(rng, &ctx);
        if terms.iter().all(|t| !t.proportional(&s)) {
            s.scalar = random_weight(rng);
            terms.push(s);
        }
    }
    Hamiltonian::new(ctx, terms).expect("distinct terms")
}
