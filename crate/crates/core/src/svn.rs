//! Polar commutator groups over Z_d, their isomorphisms, Weyl–Heisenberg
//! representations and unitary intertwiners.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvnError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("commutation form is degenerate")]
    Degenerate,
    #[error("matrix is not symplectic-congruent")]
    NotSymplectic,
    #[error("representation dimension {0} exceeds cap {1}")]
    DimensionCap(usize, usize),
    #[error("characters differ at representative {0}")]
    CharacterMismatch(usize),
    #[error("group averaging stayed singular after {0} attempts")]
    Singular(usize),
    #[error("intertwiner check failed: residual {0:e}")]
    Verification(f64),
}

pub fn is_prime(d: u32) -> bool {
    d >= 2 && (2..d).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

fn inv_mod(a: u32, d: u32) -> u32 {
    // d prime: a^(d-2)
    let (mut r, mut b, mut e) = (1u64, a as u64 % d as u64, d as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % d as u64;
        }
        b = b * b % d as u64;
        e >>= 1;
    }
    r as u32
}

/// Dense matrix over Z_d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    d: u32,
    rows: usize,
    cols: usize,
    a: Vec<u32>,
}

impl ModMatrix {
    pub fn zeros(d: u32, rows: usize, cols: usize) -> Self {
        ModMatrix { d, rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(d: u32, n: usize) -> Self {
        let mut m = Self::zeros(d, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(d: u32, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(d, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v.rem_euclid(d as i64) as u32);
            }
        }
        m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.a[i * self.cols + j] = v % self.d;
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.a[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.d, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &ModMatrix) -> Self {
        assert_eq!(self.cols, o.rows);
        let d = self.d as u64;
        let mut out = Self::zeros(self.d, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let s: u64 = (0..self.cols).map(|k| self.get(i, k) as u64 * o.get(k, j) as u64).sum();
                out.set(i, j, (s % d) as u32);
            }
        }
        out
    }

    pub fn sub(&self, o: &ModMatrix) -> Self {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&o.a) {
            *x = (*x + self.d - y) % self.d;
        }
        out
    }

    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                let s: u64 = (0..self.cols).map(|k| self.get(i, k) as u64 * x[k] as u64).sum();
                (s % self.d as u64) as u32
            })
            .collect()
    }

    /// `xᵀ A y mod d`.
    pub fn form(&self, x: &[u32], y: &[u32]) -> u32 {
        let ay = self.mul_vec(y);
        (x.iter().zip(&ay).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % self.d as u64) as u32
    }

    fn row_reduce(&self) -> (ModMatrix, usize) {
        let mut m = self.clone();
        let d = self.d;
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else { continue };
            for j in 0..m.cols {
                m.a.swap(p * m.cols + j, rank * m.cols + j);
            }
            let inv = inv_mod(m.get(rank, c), d);
            for j in 0..m.cols {
                let v = m.get(rank, j) as u64 * inv as u64 % d as u64;
                m.set(rank, j, v as u32);
            }
            for r in 0..m.rows {
                let f = m.get(r, c);
                if r != rank && f != 0 {
                    for j in 0..m.cols {
                        let v = (m.get(r, j) + d - (f as u64 * m.get(rank, j) as u64 % d as u64) as u32) % d;
                        m.set(r, j, v);
                    }
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1
    }

    pub fn inverse(&self) -> Option<ModMatrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut aug = Self::zeros(self.d, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, _) = aug.row_reduce();
        let mut inv = Self::zeros(self.d, n, n);
        for i in 0..n {
            if r.get(i, i) != 1 {
                return None;
            }
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// `(d, n, W)` with `Ω = W − Wᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub d: u32,
    pub n: usize,
    pub w: ModMatrix,
    pub omega: ModMatrix,
}

impl GroupSpec {
    pub fn new(d: u32, w: ModMatrix) -> Result<Self, SvnError> {
        if !is_prime(d) {
            return Err(SvnError::NotPrime(d));
        }
        if w.rows() != w.cols() || w.d() != d {
            return Err(SvnError::Dimension(w.rows(), w.cols()));
        }
        let omega = w.sub(&w.transpose());
        Ok(GroupSpec { d, n: w.rows(), w, omega })
    }

    /// Qudit Weyl–Heisenberg group on `m` sites: coordinates `(z | x)`,
    /// `W` has `−1` on the lower-left block.
    pub fn pauli(d: u32, m: usize) -> Result<Self, SvnError> {
        let mut w = ModMatrix::zeros(d, 2 * m, 2 * m);
        for k in 0..m {
            w.set(m + k, k, d - 1);
        }
        Self::new(d, w)
    }

    /// Majorana group on `n` modes: `W` strictly lower triangular ones.
    pub fn majorana(n: usize) -> Self {
        let mut w = ModMatrix::zeros(2, n, n);
        for i in 0..n {
            for j in 0..i {
                w.set(i, j, 1);
            }
        }
        Self::new(2, w).expect("2 is prime")
    }

    pub fn is_symplectic(&self) -> bool {
        self.omega.rank() == self.n
    }

    pub fn identity(&self) -> PolarElement {
        PolarElement { t: Ratio::from_integer(0), p: 0, x: vec![0; self.n] }
    }

    /// Brings `(t, p)` into canonical form with `t ∈ [0, 1/d)`.
    fn normalize(&self, t: Ratio<i64>, p: i64, x: Vec<u32>) -> PolarElement {
        let d = self.d as i64;
        let u = (t * d).floor().to_integer();
        let t = t - Ratio::new(u, d);
        PolarElement { t, p: (p + u).rem_euclid(d) as u32, x }
    }

    /// Element `e^{2πi t} ω^p τ(x)`, normalised.
    pub fn element(&self, t: Ratio<i64>, p: i64, x: Vec<u32>) -> PolarElement {
        let x = x.into_iter().map(|v| v % self.d).collect();
        self.normalize(t, p, x)
    }

    pub fn multiply(&self, g: &PolarElement, h: &PolarElement) -> Result<PolarElement, SvnError> {
        if g.x.len() != self.n || h.x.len() != self.n {
            return Err(SvnError::Dimension(g.x.len().max(h.x.len()), self.n));
        }
        let x = g.x.iter().zip(&h.x).map(|(a, b)| (a + b) % self.d).collect();
        let p = g.p as i64 + h.p as i64 + self.w.form(&g.x, &h.x) as i64;
        Ok(self.normalize(g.t + h.t, p, x))
    }

    pub fn inverse(&self, g: &PolarElement) -> PolarElement {
        let x: Vec<u32> = g.x.iter().map(|&v| (self.d - v) % self.d).collect();
        let p = -(g.p as i64) + self.w.form(&g.x, &g.x) as i64;
        self.normalize(-g.t, p, x)
    }

    /// Exponent `c` with `g h g⁻¹ h⁻¹ = ω^c`.
    pub fn commutator_exponent(&self, x: &[u32], y: &[u32]) -> u32 {
        self.omega.form(x, y)
    }

    /// Coset representatives `(1, 0, x)` for all `x ∈ Z_dⁿ`, in counting order.
    pub fn coset_representatives(&self) -> Vec<PolarElement> {
        let total = (self.d as usize).pow(self.n as u32);
        (0..total)
            .map(|mut k| {
                let x = (0..self.n)
                    .map(|_| {
                        let v = (k % self.d as usize) as u32;
                        k /= self.d as usize;
                        v
                    })
                    .collect();
                PolarElement { t: Ratio::from_integer(0), p: 0, x }
            })
            .collect()
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> PolarElement {
        let den = 64 * self.d as i64;
        let t = Ratio::new(rng.gen_range(0..64), den);
        let x = (0..self.n).map(|_| rng.gen_range(0..self.d)).collect();
        PolarElement { t, p: rng.gen_range(0..self.d), x }
    }
}

/// `(a, p, x)` with `a = e^{2πi t}`, `t ∈ [0, 1/d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolarElement {
    pub t: Ratio<i64>,
    pub p: u32,
    pub x: Vec<u32>,
}

impl PolarElement {
    pub fn scalar(&self) -> C64 {
        C64::from_polar(1.0, TAU * (*self.t.numer() as f64) / (*self.t.denom() as f64))
    }
}

/// `M` with `Mᵀ Ω_std M = Ω`, where `Ω_std = [[0, I], [−I, 0]]`.
pub fn symplectic_transform(omega: &ModMatrix) -> Result<ModMatrix, SvnError> {
    let (d, n) = (omega.d(), omega.rows());
    if n % 2 == 1 || omega.rows() != omega.cols() {
        return Err(SvnError::Degenerate);
    }
    let w = |u: &[u32], v: &[u32]| omega.form(u, v);
    let mut rest: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u32).collect()).collect();
    let (mut es, mut fs) = (Vec::new(), Vec::new());
    while !rest.is_empty() {
        let e = rest.remove(0);
        let Some(k) = rest.iter().position(|f| w(&e, f) != 0) else { return Err(SvnError::Degenerate) };
        let f0 = rest.remove(k);
        let s = inv_mod(w(&e, &f0), d);
        let f: Vec<u32> = f0.iter().map(|&v| (v as u64 * s as u64 % d as u64) as u32).collect();
        for v in rest.iter_mut() {
            let (a, b) = (w(v, &f), w(v, &e));
            for i in 0..n {
                let val = v[i] as u64 + (d - a) as u64 * e[i] as u64 + b as u64 * f[i] as u64;
                v[i] = (val % d as u64) as u32;
            }
        }
        es.push(e);
        fs.push(f);
    }
    let mut b = ModMatrix::zeros(d, n, n);
    for (c, col) in es.iter().chain(fs.iter()).enumerate() {
        for i in 0..n {
            b.set(i, c, col[i]);
        }
    }
    let m = b.inverse().ok_or(SvnError::Degenerate)?;
    let std = GroupSpec::pauli(d, n / 2)?.omega;
    if m.transpose().mul(&std).mul(&m) != *omega {
        return Err(SvnError::NotSymplectic);
    }
    Ok(m)
}

/// Isomorphism `𝒢(W₁) → 𝒢(W₂)`: `x ↦ Mx` with a quadratic phase correction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoMap {
    pub from: GroupSpec,
    pub to: GroupSpec,
    pub m: ModMatrix,
    /// `MᵀW₂M − W₁`, over Z_d for odd d (the correction uses half of it) and
    /// over Z₄ for d = 2.
    pub c: ModMatrix,
}

impl IsoMap {
    pub fn from_matrix(from: &GroupSpec, to: &GroupSpec, m: ModMatrix) -> Result<Self, SvnError> {
        if from.d != to.d || from.n != to.n {
            return Err(SvnError::Dimension(from.n, to.n));
        }
        if m.transpose().mul(&to.omega).mul(&m) != from.omega || m.inverse().is_none() {
            return Err(SvnError::NotSymplectic);
        }
        let d = from.d;
        let cd = if d == 2 { 4 } else { d };
        let lift = |a: &ModMatrix| {
            let rows: Vec<Vec<i64>> = a.to_rows().iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect();
            ModMatrix::from_rows(cd, &rows)
        };
        let (ml, w2, w1) = (lift(&m), lift(&to.w), lift(&from.w));
        let c = ml.transpose().mul(&w2).mul(&ml).sub(&w1);
        Ok(IsoMap { from: from.clone(), to: to.clone(), m, c })
    }

    /// Phase correction in units of `ω` (odd d) or of `i` (d = 2).
    fn correction(&self, x: &[u32]) -> i64 {
        let d = self.from.d;
        if d == 2 {
            let n = x.len();
            let mut q = 0i64;
            for i in 0..n {
                if x[i] == 1 {
                    q += self.c.get(i, i) as i64;
                    for j in i + 1..n {
                        if x[j] == 1 {
                            q += 2 * self.c.get(i, j) as i64;
                        }
                    }
                }
            }
            q.rem_euclid(4)
        } else {
            (self.c.form(x, x) as i64 * inv_mod(2, d) as i64).rem_euclid(d as i64)
        }
    }

    pub fn apply(&self, g: &PolarElement) -> PolarElement {
        let x = self.m.mul_vec(&g.x);
        let q = self.correction(&g.x);
        if self.from.d == 2 {
            self.to.normalize(g.t + Ratio::new(q, 4), g.p as i64, x)
        } else {
            self.to.normalize(g.t, g.p as i64 + q, x)
        }
    }
}

pub fn build_isomorphism(from: &GroupSpec, to: &GroupSpec) -> Result<IsoMap, SvnError> {
    if !from.is_symplectic() || !to.is_symplectic() {
        return Err(SvnError::NotSymplectic);
    }
    let m1 = symplectic_transform(&from.omega)?;
    let m2 = symplectic_transform(&to.omega)?;
    IsoMap::from_matrix(from, to, m2.inverse().ok_or(SvnError::Degenerate)?.mul(&m1))
}

/// Matrix sending Majorana coordinates on `2m` modes to qubit coordinates
/// `(z | x)`. Mode `i ≤ m` goes to `z_i + x_i + Σ_{j<i} z_j`, mode `m + i`
/// to `x_i + Σ_{j<i} z_j`.
pub fn pauli_majorana_m(m: usize) -> ModMatrix {
    let mut a = ModMatrix::zeros(2, 2 * m, 2 * m);
    for i in 0..m {
        for j in 0..i {
            a.set(j, i, 1);
            a.set(j, m + i, 1);
        }
        a.set(i, i, 1);
        a.set(m + i, i, 1);
        a.set(m + i, m + i, 1);
    }
    a
}

/// Isomorphism from the Majorana group on `2m` modes to the qubit group on `m` sites.
pub fn pauli_majorana_map(m: usize) -> IsoMap {
    IsoMap::from_matrix(&GroupSpec::majorana(2 * m), &GroupSpec::pauli(2, m).unwrap(), pauli_majorana_m(m))
        .expect("explicit map is symplectic")
}

/// Monomial matrix: column `s` is `coeff[s]·e_{target[s]}`.
#[derive(Clone, Debug)]
pub struct Monomial {
    pub target: Vec<usize>,
    pub coeff: Vec<C64>,
}

impl Monomial {
    pub fn trace(&self) -> C64 {
        self.target.iter().enumerate().filter(|(s, &t)| *s == t).map(|(s, _)| self.coeff[s]).sum()
    }

    /// `tr(A† B)`.
    pub fn hs(&self, b: &Monomial) -> C64 {
        (0..self.target.len())
            .filter(|&s| self.target[s] == b.target[s])
            .map(|s| self.coeff[s].conj() * b.coeff[s])
            .sum()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let n = self.target.len();
        let mut m = DMatrix::zeros(n, n);
        for s in 0..n {
            m[(self.target[s], s)] = self.coeff[s];
        }
        m
    }
}

/// Weyl–Heisenberg representation of `GroupSpec::pauli(d, m)` on `C^{d^m}`.
#[derive(Clone, Debug)]
pub struct Weyl {
    pub spec: GroupSpec,
    pub m: usize,
    dim: usize,
}

pub const WEYL_DIM_CAP: usize = 4096;

impl Weyl {
    pub fn new(d: u32, m: usize) -> Result<Self, SvnError> {
        let dim = (d as usize).checked_pow(m as u32).unwrap_or(usize::MAX);
        if dim > WEYL_DIM_CAP {
            return Err(SvnError::DimensionCap(dim, WEYL_DIM_CAP));
        }
        Ok(Weyl { spec: GroupSpec::pauli(d, m)?, m, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn digits(&self, mut s: usize) -> Vec<u32> {
        let d = self.spec.d as usize;
        (0..self.m)
            .map(|_| {
                let v = (s % d) as u32;
                s /= d;
                v
            })
            .collect()
    }

    fn index(&self, digits: &[u32]) -> usize {
        digits.iter().rev().fold(0, |acc, &v| acc * self.spec.d as usize + v as usize)
    }

    /// `μ(a, p, (z|x)) e_s = a ω^{p + ⟨z, s + x⟩} e_{s+x}`.
    pub fn monomial(&self, g: &PolarElement) -> Monomial {
        let d = self.spec.d;
        let (z, x) = g.x.split_at(self.m);
        let omega = |k: u32| C64::from_polar(1.0, TAU * (k % d) as f64 / d as f64);
        let a = g.scalar();
        let mut target = Vec::with_capacity(self.dim);
        let mut coeff = Vec::with_capacity(self.dim);
        for s in 0..self.dim {
            let sd = self.digits(s);
            let t: Vec<u32> = sd.iter().zip(x).map(|(a, b)| (a + b) % d).collect();
            let phase = g.p + z.iter().zip(&t).map(|(a, b)| a * b).sum::<u32>();
            target.push(self.index(&t));
            coeff.push(a * omega(phase));
        }
        Monomial { target, coeff }
    }

    pub fn dense(&self, g: &PolarElement) -> DMatrix<C64> {
        self.monomial(g).to_dense()
    }
}

#[derive(Clone, Debug)]
pub struct WeylReport {
    pub d: u32,
    pub m: usize,
    pub unitarity: f64,
    pub traceless: f64,
    pub identity_trace: f64,
    pub hs_orthogonality: f64,
    pub character_sum: f64,
    pub homomorphism: f64,
    pub passed: bool,
}

pub fn verify_weyl_properties(d: u32, m: usize, seed: u64) -> Result<WeylReport, SvnError> {
    let weyl = Weyl::new(d, m)?;
    let spec = &weyl.spec;
    let dim = weyl.dim() as f64;
    let reps = spec.coset_representatives();
    let mons: Vec<Monomial> = reps.iter().map(|g| weyl.monomial(g)).collect();
    let mut unitarity: f64 = 0.0;
    let mut traceless: f64 = 0.0;
    let mut hs: f64 = 0.0;
    let mut chars = 0.0;
    for (i, a) in mons.iter().enumerate() {
        let mut seen = vec![false; a.target.len()];
        for (&t, c) in a.target.iter().zip(&a.coeff) {
            unitarity = unitarity.max((c.norm() - 1.0).abs());
            if std::mem::replace(&mut seen[t], true) {
                unitarity = f64::INFINITY;
            }
        }
        let tr = a.trace();
        chars += tr.norm_sqr();
        if i != 0 {
            traceless = traceless.max(tr.norm());
        }
        for (j, b) in mons.iter().enumerate() {
            let want = if i == j { dim } else { 0.0 };
            hs = hs.max((a.hs(b) - want).norm());
        }
    }
    let character_sum = chars / reps.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity_trace: f64 = 0.0;
    let mut homomorphism: f64 = 0.0;
    for _ in 0..50 {
        let mut g = spec.random_element(&mut rng);
        let h = spec.random_element(&mut rng);
        let gh = spec.multiply(&g, &h)?;
        let lhs = weyl.dense(&gh);
        let rhs = weyl.dense(&g) * weyl.dense(&h);
        homomorphism = homomorphism.max((lhs - rhs).camax());
        g.x.iter_mut().for_each(|v| *v = 0);
        let want = g.scalar() * C64::from_polar(dim, TAU * g.p as f64 / d as f64);
        identity_trace = identity_trace.max((weyl.monomial(&g).trace() - want).norm());
    }
    let tol = 1e-12 * dim;
    let passed = unitarity <= 1e-12
        && traceless <= tol
        && identity_trace <= tol
        && hs <= tol
        && (character_sum - 1.0).abs() <= 1e-12
        && homomorphism <= 1e-12;
    Ok(WeylReport { d, m, unitarity, traceless, identity_trace, hs_orthogonality: hs, character_sum, homomorphism, passed })
}

/// Dense Majorana representation on `2m` modes via the Jordan–Wigner chain:
/// `γ_{2k} = Z⋯Z X_k`, `γ_{2k+1} = Z⋯Z Y_k`.
pub fn majorana_jw(m: usize) -> Vec<DMatrix<C64>> {
    let weyl = Weyl::new(2, m).expect("small");
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        for y in [false, true] {
            let mut x = vec![0u32; 2 * m];
            for j in 0..k {
                x[j] = 1;
            }
            x[m + k] = 1;
            if y {
                x[k] = 1;
            }
            // Y = i·X·Z = −i·Z·X in the τ = Z^z X^x convention.
            let mut g = weyl.dense(&PolarElement { t: Ratio::from_integer(0), p: 0, x });
            if y {
                g *= C64::new(0.0, -1.0);
            }
            out.push(g);
        }
    }
    out
}

/// Dense image of a Majorana-group element: `a (−1)^p γ^{x_1}⋯γ^{x_n}`.
pub fn majorana_dense(gammas: &[DMatrix<C64>], g: &PolarElement) -> DMatrix<C64> {
    let dim = gammas[0].nrows();
    let mut acc = DMatrix::<C64>::identity(dim, dim);
    for (i, &xi) in g.x.iter().enumerate() {
        if xi == 1 {
            acc *= &gammas[i];
        }
    }
    let sign = if g.p % 2 == 1 { -1.0 } else { 1.0 };
    acc * (g.scalar() * sign)
}

#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub s: DMatrix<C64>,
    pub unitarity: f64,
    pub conjugation: f64,
}

pub const INTERTWINER_DIM_CAP: usize = 256;

/// Unitary `S` with `b_g = S a_g S⁻¹` for every `g`, by group averaging.
/// `a` and `b` are the two representations evaluated on the same list of
/// coset representatives; `a` must be unitary.
pub fn find_intertwiner(a: &[DMatrix<C64>], b: &[DMatrix<C64>], seed: u64) -> Result<Intertwiner, SvnError> {
    if a.len() != b.len() {
        return Err(SvnError::Dimension(a.len(), b.len()));
    }
    let dim = a[0].nrows();
    if dim > INTERTWINER_DIM_CAP {
        return Err(SvnError::DimensionCap(dim, INTERTWINER_DIM_CAP));
    }
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        if (x.trace() - y.trace()).norm() > 1e-8 {
            return Err(SvnError::CharacterMismatch(k));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 8;
    for _ in 0..ATTEMPTS {
        let x = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let mut s0 = DMatrix::<C64>::zeros(dim, dim);
        for (ag, bg) in a.iter().zip(b) {
            s0 += bg * &x * ag.adjoint();
        }
        let lambda = (s0.adjoint() * &s0).trace().re / dim as f64;
        if lambda < 1e-12 * a.len() as f64 {
            continue;
        }
        let s = s0.unscale(lambda.sqrt());
        let unitarity = (s.adjoint() * &s - DMatrix::identity(dim, dim)).camax();
        let conjugation = a
            .iter()
            .zip(b)
            .map(|(ag, bg)| (&s * ag * s.adjoint() - bg).camax())
            .fold(0.0, f64::max);
        if unitarity > 1e-8 || conjugation > 1e-8 {
            return Err(SvnError::Verification(unitarity.max(conjugation)));
        }
        return Ok(Intertwiner { s, unitarity, conjugation });
    }
    Err(SvnError::Singular(ATTEMPTS))
}

#[derive(Clone, Debug)]
pub struct SvnReport {
    pub m: usize,
    pub matrix: ModMatrix,
    pub correction: ModMatrix,
    pub congruence: bool,
    pub intertwiner: Option<Intertwiner>,
}

/// Majorana (`2m` modes) to qubit (`m` sites) map; with `verify`, also the
/// dense intertwiner between the Jordan–Wigner Majorana representation and
/// the Weyl representation pulled back along the map.
pub fn svn_report(m: usize, verify: bool, seed: u64) -> Result<SvnReport, SvnError> {
    let iso = pauli_majorana_map(m);
    let congruence = iso.m.transpose().mul(&iso.to.omega).mul(&iso.m) == iso.from.omega;
    let intertwiner = if verify {
        let weyl = Weyl::new(2, m)?;
        let gammas = majorana_jw(m);
        let reps = iso.from.coset_representatives();
        let a: Vec<_> = reps.iter().map(|g| majorana_dense(&gammas, g)).collect();
        let b: Vec<_> = reps.iter().map(|g| weyl.dense(&iso.apply(g))).collect();
        Some(find_intertwiner(&a, &b, seed)?)
    } else {
        None
    };
    Ok(SvnReport { m, matrix: iso.m.clone(), correction: iso.c.clone(), congruence, intertwiner })
}
