//! Phased operator strings over Z₂ exponent vectors.
//!
//! A string is `scalar · i^phase · τ(x)` where `τ(x)τ(y) = (−1)^{xᵀWy} τ(x+y)`.
//! For qubits `τ(z|x) = ⊗ Z^{z_j} X^{x_j}`; for Majorana modes
//! `τ(x) = γ_1^{x_1} ⋯ γ_n^{x_n}` in ascending mode order.

use fixedbitset::FixedBitSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("term {0} is not Hermitian")]
    NotHermitian(usize),
    #[error("term {0} has zero or non-finite weight")]
    ZeroWeight(usize),
    #[error("terms {0} and {1} are proportional")]
    Proportional(usize, usize),
    #[error("custom W must be square")]
    BadMatrix,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("no terms")]
    Empty,
}

fn line_err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    PauliQubits(usize),
    MajoranaModes(usize),
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraContext {
    n: usize,
    kind: AlgebraKind,
    /// Rows of W, stored only for custom contexts.
    w: Vec<FixedBitSet>,
}

impl AlgebraContext {
    pub fn pauli(qubits: usize) -> Self {
        AlgebraContext { n: 2 * qubits, kind: AlgebraKind::PauliQubits(qubits), w: Vec::new() }
    }

    pub fn majorana(modes: usize) -> Self {
        AlgebraContext { n: modes, kind: AlgebraKind::MajoranaModes(modes), w: Vec::new() }
    }

    pub fn custom(w: &[Vec<bool>]) -> Result<Self, AlgebraError> {
        let n = w.len();
        if w.iter().any(|r| r.len() != n) {
            return Err(AlgebraError::BadMatrix);
        }
        let rows = w
            .iter()
            .map(|r| {
                let mut b = FixedBitSet::with_capacity(n);
                for (j, &x) in r.iter().enumerate() {
                    b.set(j, x);
                }
                b
            })
            .collect();
        Ok(AlgebraContext { n, kind: AlgebraKind::Custom, w: rows })
    }

    pub fn n_generators(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// `xᵀ W y mod 2`.
    pub fn w_form(&self, x: &FixedBitSet, y: &FixedBitSet) -> bool {
        match self.kind {
            AlgebraKind::PauliQubits(m) => {
                // W has the identity in its lower-left block: Σ_k x_{m+k} y_k.
                let mut acc = false;
                for k in y.ones().take_while(|&k| k < m) {
                    acc ^= x.contains(m + k);
                }
                acc
            }
            AlgebraKind::MajoranaModes(_) => {
                let mut acc = 0usize;
                for i in x.ones() {
                    acc += y.count_ones(..i);
                }
                acc % 2 == 1
            }
            AlgebraKind::Custom => {
                let mut acc = false;
                for i in x.ones() {
                    acc ^= self.w[i].intersection_count(y) % 2 == 1;
                }
                acc
            }
        }
    }

    /// `xᵀ Ω y mod 2` with `Ω = W + Wᵀ`.
    pub fn omega_form(&self, x: &FixedBitSet, y: &FixedBitSet) -> bool {
        self.w_form(x, y) ^ self.w_form(y, x)
    }

    /// Dense W over Z₂.
    pub fn w_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.n;
        let mut out = vec![vec![false; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = match self.kind {
                    AlgebraKind::PauliQubits(m) => i >= m && i - m == j,
                    AlgebraKind::MajoranaModes(_) => i > j,
                    AlgebraKind::Custom => self.w[i].contains(j),
                };
            }
        }
        out
    }

    fn same_dim(&self, a: &PhasedString, b: &PhasedString) -> Result<(), AlgebraError> {
        for s in [a, b] {
            if s.exps.len() != self.n {
                return Err(AlgebraError::Dimension(s.exps.len(), self.n));
            }
        }
        Ok(())
    }

    pub fn multiply(&self, a: &PhasedString, b: &PhasedString) -> Result<PhasedString, AlgebraError> {
        self.same_dim(a, b)?;
        let mut exps = a.exps.clone();
        exps.symmetric_difference_with(&b.exps);
        let sign = if self.w_form(&a.exps, &b.exps) { 2 } else { 0 };
        Ok(PhasedString { phase: (a.phase + b.phase + sign) % 4, scalar: a.scalar * b.scalar, exps })
    }

    pub fn commutes(&self, a: &PhasedString, b: &PhasedString) -> Result<bool, AlgebraError> {
        self.same_dim(a, b)?;
        Ok(!self.omega_form(&a.exps, &b.exps))
    }

    /// `true` iff the unit-scalar part squares to `+1`.
    pub fn is_hermitian(&self, s: &PhasedString) -> bool {
        (s.phase % 2 == 1) == self.w_form(&s.exps, &s.exps)
    }

    /// Phase exponent for which `i^phase τ(x)` is Hermitian with the label's sign.
    pub fn canonical_phase(&self, exps: &FixedBitSet) -> u8 {
        match self.kind {
            // Y = −i·ZX, so each Y contributes i³.
            AlgebraKind::PauliQubits(m) => {
                let ys = (0..m).filter(|&k| exps.contains(k) && exps.contains(m + k)).count();
                ((3 * ys) % 4) as u8
            }
            _ => self.w_form(exps, exps) as u8,
        }
    }

    pub fn identity(&self) -> PhasedString {
        PhasedString::new(0, 1.0, FixedBitSet::with_capacity(self.n))
    }

    /// Parses a label (no weight) into a unit-weight string.
    pub fn parse_label(&self, label: &str) -> Result<PhasedString, String> {
        let (extra, body) = match label.strip_prefix('i') {
            Some(rest) => (1u8, rest),
            None => (0u8, label),
        };
        let mut s = match (self.kind, body.strip_prefix("m:")) {
            (AlgebraKind::MajoranaModes(n), Some(list)) => {
                let mut modes = Vec::new();
                for t in list.split(',') {
                    let k: usize = t.trim().parse().map_err(|_| format!("bad mode index `{t}`"))?;
                    if k == 0 || k > n {
                        return Err(format!("mode {k} outside 1..={n}"));
                    }
                    modes.push(k - 1);
                }
                self.majorana_product(&modes)
            }
            (AlgebraKind::PauliQubits(m), None) => {
                if body.chars().count() != m {
                    return Err(format!("label `{body}` has length {}, expected {m}", body.chars().count()));
                }
                let mut exps = FixedBitSet::with_capacity(2 * m);
                for (k, c) in body.chars().enumerate() {
                    match c {
                        'I' => {}
                        'X' => exps.insert(m + k),
                        'Z' => exps.insert(k),
                        'Y' => {
                            exps.insert(k);
                            exps.insert(m + k)
                        }
                        _ => return Err(format!("unknown Pauli letter `{c}`")),
                    }
                }
                let phase = self.canonical_phase(&exps);
                PhasedString::new(phase, 1.0, exps)
            }
            (AlgebraKind::MajoranaModes(_), None) => return Err("Majorana labels start with `m:`".into()),
            (AlgebraKind::PauliQubits(_), Some(_)) => return Err("Majorana label in a qubit file".into()),
            (AlgebraKind::Custom, _) => return Err("custom contexts have no text labels".into()),
        };
        s.phase = (s.phase + extra) % 4;
        Ok(s)
    }

    /// Hermitian string `i^c γ_{a1} ⋯ γ_{ak}` for the given mode order, normal-ordered.
    fn majorana_product(&self, modes: &[usize]) -> PhasedString {
        let mut acc = self.identity();
        for &k in modes {
            let mut e = FixedBitSet::with_capacity(self.n);
            e.insert(k);
            acc = self.multiply(&acc, &PhasedString::new(0, 1.0, e)).expect("same context");
        }
        let k = modes.len();
        acc.phase = (acc.phase + ((k * (k.saturating_sub(1)) / 2) % 2) as u8) % 4;
        acc
    }

    pub fn format_label(&self, s: &PhasedString) -> (f64, String) {
        let diff = (4 + s.phase - self.canonical_phase(&s.exps)) % 4;
        let (sign, prefix) = match diff {
            0 => (1.0, ""),
            1 => (1.0, "i"),
            2 => (-1.0, ""),
            _ => (-1.0, "i"),
        };
        let mut label = prefix.to_string();
        match self.kind {
            AlgebraKind::PauliQubits(m) => {
                for k in 0..m {
                    label.push(match (s.exps.contains(k), s.exps.contains(m + k)) {
                        (false, false) => 'I',
                        (false, true) => 'X',
                        (true, false) => 'Z',
                        (true, true) => 'Y',
                    });
                }
            }
            _ => {
                label.push_str("m:");
                let idx: Vec<String> = s.exps.ones().map(|k| (k + 1).to_string()).collect();
                label.push_str(&idx.join(","));
            }
        }
        (sign * s.scalar, label)
    }

    pub fn format_term(&self, s: &PhasedString) -> String {
        let (w, label) = self.format_label(s);
        format!("{w} {label}")
    }

    /// Parses `"<weight> <label>"`.
    pub fn parse_term(&self, text: &str) -> Result<PhasedString, String> {
        let mut it = text.split_whitespace();
        let (Some(w), Some(label), None) = (it.next(), it.next(), it.next()) else {
            return Err("expected `<weight> <label>`".into());
        };
        let w: f64 = w.parse().map_err(|_| format!("bad weight `{w}`"))?;
        if w == 0.0 || !w.is_finite() {
            return Err("zero or non-finite weight".into());
        }
        let mut s = self.parse_label(label)?;
        if !self.is_hermitian(&s) {
            return Err(format!("label `{label}` is not Hermitian"));
        }
        s.scalar = w;
        Ok(s)
    }
}

/// `scalar · i^phase · τ(exps)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasedString {
    pub phase: u8,
    pub scalar: f64,
    pub exps: FixedBitSet,
}

impl PhasedString {
    pub fn new(phase: u8, scalar: f64, exps: FixedBitSet) -> Self {
        PhasedString { phase: phase % 4, scalar, exps }
    }

    pub fn is_identity(&self) -> bool {
        self.exps.is_clear()
    }

    pub fn proportional(&self, other: &PhasedString) -> bool {
        self.exps == other.exps
    }

    /// Same operator with unit scalar.
    pub fn unit(&self) -> PhasedString {
        PhasedString { scalar: 1.0, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    ctx: AlgebraContext,
    terms: Vec<PhasedString>,
}

impl Hamiltonian {
    pub fn new(ctx: AlgebraContext, terms: Vec<PhasedString>) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::HashMap::new();
        for (i, t) in terms.iter().enumerate() {
            if t.exps.len() != ctx.n {
                return Err(AlgebraError::Dimension(t.exps.len(), ctx.n));
            }
            if t.scalar == 0.0 || !t.scalar.is_finite() {
                return Err(AlgebraError::ZeroWeight(i));
            }
            if !ctx.is_hermitian(t) {
                return Err(AlgebraError::NotHermitian(i));
            }
            if let Some(j) = seen.insert(t.exps.clone(), i) {
                return Err(AlgebraError::Proportional(j, i));
            }
        }
        Ok(Hamiltonian { ctx, terms })
    }

    pub fn ctx(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn terms(&self) -> &[PhasedString] {
        &self.terms
    }

    pub fn identity_terms(&self) -> Vec<usize> {
        (0..self.terms.len()).filter(|&i| self.terms[i].is_identity()).collect()
    }

    /// Parses the line-oriented Hamiltonian format. Qubit files use
    /// `{I,X,Y,Z}` labels of common length; Majorana files use `m:` labels
    /// and get the smallest even mode count covering every index.
    pub fn parse(text: &str) -> Result<Hamiltonian, ParseError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let Some(&(first_line, first)) = lines.first() else {
            return Err(ParseError::Empty);
        };
        let label_of = |l: &str| l.split_whitespace().nth(1).map(|s| s.trim_start_matches('i').to_string());
        let first_label = label_of(first).ok_or_else(|| line_err(first_line, "expected `<weight> <label>`"))?;
        let ctx = if first_label.starts_with("m:") {
            let mut max = 0;
            for &(ln, l) in &lines {
                let lab = label_of(l).ok_or_else(|| line_err(ln, "expected `<weight> <label>`"))?;
                let list = lab.strip_prefix("m:").ok_or_else(|| line_err(ln, "mixed label kinds"))?;
                for t in list.split(',') {
                    let k: usize = t.trim().parse().map_err(|_| line_err(ln, format!("bad mode index `{t}`")))?;
                    max = max.max(k);
                }
            }
            AlgebraContext::majorana(max.max(1).div_ceil(2) * 2)
        } else {
            AlgebraContext::pauli(first_label.chars().count())
        };
        let mut terms = Vec::new();
        let mut where_: Vec<usize> = Vec::new();
        for &(ln, l) in &lines {
            terms.push(ctx.parse_term(l).map_err(|m| line_err(ln, m))?);
            where_.push(ln);
        }
        Hamiltonian::new(ctx, terms).map_err(|e| match e {
            AlgebraError::Proportional(a, b) => {
                line_err(where_[b], format!("term proportional to line {}", where_[a]))
            }
            other => line_err(first_line, other.to_string()),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for t in &self.terms {
            let _ = writeln!(s, "{}", self.ctx.format_term(t));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(ctx: &AlgebraContext, label: &str) -> PhasedString {
        ctx.parse_label(label).unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let c = AlgebraContext::pauli(1);
        let r = c.multiply(&p(&c, "X"), &p(&c, "Z")).unwrap();
        let y = p(&c, "Y");
        assert!(r.proportional(&y));
        // r = i^{r.phase − y.phase}·Y must equal −i·Y.
        assert_eq!((4 + r.phase - y.phase) % 4, 3);
    }

    #[test]
    fn majorana_overlap_product() {
        let c = AlgebraContext::majorana(4);
        let mk = |modes: &[usize]| {
            let mut e = FixedBitSet::with_capacity(4);
            for &k in modes {
                e.insert(k);
            }
            PhasedString::new(0, 1.0, e)
        };
        // (γ1γ2)(γ2γ3) = γ1γ3
        let r = c.multiply(&mk(&[0, 1]), &mk(&[1, 2])).unwrap();
        assert_eq!(r.exps, mk(&[0, 2]).exps);
        assert_eq!(r.phase, 0);
    }

    #[test]
    fn commutation_rules() {
        let c = AlgebraContext::pauli(2);
        assert!(!c.commutes(&p(&c, "XI"), &p(&c, "ZI")).unwrap());
        assert!(c.commutes(&p(&c, "XI"), &p(&c, "IZ")).unwrap());
        let m = AlgebraContext::majorana(6);
        let a = p(&m, "m:1,2,3,4");
        assert!(m.commutes(&a, &p(&m, "m:5,6")).unwrap());
        assert!(m.commutes(&a, &p(&m, "m:1,2")).unwrap());
        assert!(!m.commutes(&a, &p(&m, "m:1,5")).unwrap());
        assert!(c.commutes(&p(&c, "XI"), &p(&m, "m:1,2")).is_err());
    }

    #[test]
    fn parse_examples() {
        let c = AlgebraContext::pauli(4);
        let t = c.parse_term("1.0 XXIZ").unwrap();
        assert_eq!(t.scalar, 1.0);
        assert_eq!(c.format_term(&t), "1 XXIZ");
        let id = c.parse_term("-2.0 IIII").unwrap();
        assert!(id.is_identity());
        let m = AlgebraContext::majorana(6);
        let g = m.parse_term("0.5 m:1,2,5").unwrap();
        assert_eq!(g.exps.ones().collect::<Vec<_>>(), vec![0, 1, 4]);
        for bad in ["0 XXIZ", "1.0 XXI", "1.0 XQIZ", "1.0 iXXIZ", "abc XXIZ", "1.0"] {
            assert!(c.parse_term(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn majorana_reordering_flips_sign() {
        let m = AlgebraContext::majorana(4);
        let a = m.parse_term("1 m:1,2").unwrap();
        let b = m.parse_term("1 m:2,1").unwrap();
        assert_eq!(a.exps, b.exps);
        assert_eq!((4 + a.phase - b.phase) % 4, 2);
        assert_eq!(m.format_term(&b), "-1 m:1,2");
    }

    #[test]
    fn hamiltonian_file() {
        let h = Hamiltonian::parse("# demo\n1.5 XZ\n\n-0.5 ZY  # tail\n").unwrap();
        assert_eq!(h.terms().len(), 2);
        assert_eq!(Hamiltonian::parse(&h.to_text()).unwrap(), h);
        assert_eq!(Hamiltonian::parse("\n# only comments\n"), Err(ParseError::Empty));
        let dup = Hamiltonian::parse("1 XZ\n2 XZ\n").unwrap_err();
        assert!(dup.to_string().contains("line 2"));
        let mh = Hamiltonian::parse("1 m:1,2\n0.3 m:1,2,3,5\n").unwrap();
        assert_eq!(mh.ctx().n_generators(), 6);
        assert_eq!(Hamiltonian::parse(&mh.to_text()).unwrap(), mh);
    }
}
