//! `verify` subcommands. Each returns a report and whether every check passed.

use std::fmt::Write as _;

use frustration::blockdiag::{random_hamiltonian, verify_block_diagonalization, VerifyReport};
use frustration::svn::{svn_report, verify_weyl_properties, ModMatrix};
use frustration::Hamiltonian;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub const SVN_TOL: f64 = 1e-8;

pub struct Verdict {
    pub report: String,
    pub passed: bool,
}

fn block_lines(out: &mut String, r: &VerifyReport) {
    let _ = writeln!(
        out,
        "  qubits {} terms {} generators {} twin rounds {} blocks {}",
        r.qubits,
        r.terms,
        r.generators,
        r.twin_rounds,
        r.blocks.len()
    );
}

const FIELDS: [&str; 7] =
    ["completeness", "orthogonality", "idempotence", "commutation", "rotated_commutation", "beta", "spectrum"];

fn residuals(r: &VerifyReport) -> [f64; 7] {
    [r.completeness, r.orthogonality, r.idempotence, r.commutation, r.rotated_commutation, r.beta, r.spectrum]
}

pub fn blockdiag_file(text: &str) -> Result<Verdict, CliError> {
    let h = Hamiltonian::parse(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let r = verify_block_diagonalization(&h).map_err(|e| CliError::Verify(e.to_string()))?;
    let mut out = String::new();
    block_lines(&mut out, &r);
    for (name, v) in FIELDS.iter().zip(residuals(&r)) {
        let _ = writeln!(out, "{name}: {v:e}");
    }
    if r.non_generic {
        let _ = writeln!(out, "note: a block weight is near zero (non-generic)");
    }
    for b in &r.blocks {
        let signs: String = b.x.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect();
        let spec: Vec<String> = b.spectrum.iter().map(|e| format!("{e:.6}")).collect();
        let _ = writeln!(out, "block [{signs}] rank {}: {}", b.rank, spec.join(" "));
    }
    if let Some(f) = &r.failure {
        let _ = writeln!(out, "FAIL: {f}");
    }
    Ok(Verdict { report: out, passed: r.passed })
}

pub fn blockdiag_random(count: usize, qubits: usize, terms: usize, seed: u64) -> Result<Verdict, CliError> {
    if qubits == 0 || terms == 0 {
        return Err(CliError::Usage("--qubits and --terms must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 7];
    let mut out = String::new();
    let mut failure = None;
    let mut non_generic = 0;
    for i in 0..count {
        let h = random_hamiltonian(&mut rng, qubits, terms);
        let r = verify_block_diagonalization(&h).map_err(|e| CliError::Verify(format!("case {i}: {e}")))?;
        for (w, v) in worst.iter_mut().zip(residuals(&r)) {
            *w = w.max(v);
        }
        non_generic += r.non_generic as usize;
        if failure.is_none() {
            if let Some(f) = &r.failure {
                failure = Some(format!("case {i}: {f}\n{}", h.to_text()));
            }
        }
    }
    let _ = writeln!(out, "cases: {count} (qubits <= {qubits}, terms <= {terms}, seed {seed})");
    for (name, v) in FIELDS.iter().zip(worst) {
        let _ = writeln!(out, "max {name}: {v:e}");
    }
    let _ = writeln!(out, "non-generic cases: {non_generic}");
    let passed = failure.is_none();
    if let Some(f) = failure {
        let _ = writeln!(out, "FAIL: {f}");
    }
    Ok(Verdict { report: out, passed })
}

pub fn matrix_text(m: &ModMatrix) -> String {
    let mut s = String::new();
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "  {}", cells.join(" "));
    }
    s
}

pub fn svn(qubits: usize, verify: bool, seed: u64) -> Result<Verdict, CliError> {
    let r = svn_report(qubits, verify, seed).map_err(|e| CliError::Verify(e.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(out, "majorana modes {} -> qubits {}", 2 * qubits, qubits);
    let _ = write!(out, "M:\n{}", matrix_text(&r.matrix));
    let _ = write!(out, "phase correction:\n{}", matrix_text(&r.correction));
    let _ = writeln!(out, "M^T Omega_pauli M = Omega_majorana: {}", r.congruence);
    let mut passed = r.congruence;
    if let Some(s) = &r.intertwiner {
        let _ = writeln!(out, "unitarity residual: {:e}", s.unitarity);
        let _ = writeln!(out, "max |S mu(g) S^-1 - mu(phi(g))|: {:e}", s.conjugation);
        passed &= s.unitarity <= SVN_TOL && s.conjugation <= SVN_TOL;
    }
    Ok(Verdict { report: out, passed })
}

pub fn weyl(d: u32, m: usize, seed: u64) -> Result<Verdict, CliError> {
    let r = verify_weyl_properties(d, m, seed).map_err(|e| CliError::Verify(e.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(out, "d {} m {} dimension {}", r.d, r.m, (r.d as usize).pow(r.m as u32));
    let _ = writeln!(out, "unitarity: {:e}", r.unitarity);
    let _ = writeln!(out, "traceless: {:e}", r.traceless);
    let _ = writeln!(out, "identity trace: {:e}", r.identity_trace);
    let _ = writeln!(out, "hs orthogonality: {:e}", r.hs_orthogonality);
    let _ = writeln!(out, "character sum: {}", r.character_sum);
    let _ = writeln!(out, "homomorphism: {:e}", r.homomorphism);
    Ok(Verdict { report: out, passed: r.passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(blockdiag_random(10, 3, 6, 1).unwrap().passed);
        assert!(svn(1, true, 0).unwrap().passed);
        assert!(weyl(3, 1, 0).unwrap().passed);
    }

    #[test]
    fn file_report_lists_blocks() {
        let v = blockdiag_file("1.0 XI\n1.0 IX\n0.5 ZZ\n").unwrap();
        assert!(v.passed, "{}", v.report);
        assert!(v.report.contains("block ["), "{}", v.report);
    }
}
