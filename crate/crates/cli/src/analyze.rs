//! `analyze`: collapse and SCF report for a Hamiltonian or graph file.

use std::fmt::Write as _;

use frustration::collapse::{collapse, is_cograph, CollapseMode};
use frustration::graph::{build_frustration_graph, Graph};
use frustration::modular::decompose;
use frustration::scf::{scf_verdict, ScfVerdict};
use frustration::{AlgebraKind, Hamiltonian};

use crate::config::mode_name;
use crate::CliError;

pub enum Input {
    Graph(Graph),
    Hamiltonian(Hamiltonian),
}

/// Graph files start with a `g <n> <m>` header; anything else is read as a
/// Hamiltonian.
pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let first = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty());
    match first {
        None => Err(CliError::Parse("empty input file".into())),
        Some(l) if l.split_whitespace().next() == Some("g") => {
            Graph::parse_text(text).map(Input::Graph).map_err(|e| CliError::Parse(e.to_string()))
        }
        Some(_) => Hamiltonian::parse(text).map(Input::Hamiltonian).map_err(|e| CliError::Parse(e.to_string())),
    }
}

fn set_text(vs: &[usize]) -> String {
    let inner: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn witnesses(v: &ScfVerdict, map: &[usize]) -> String {
    let ws: Vec<String> = v
        .witnesses
        .iter()
        .zip(&v.components)
        .filter(|(_, c)| c.len() > 1)
        .filter_map(|(w, _)| w.as_ref())
        .map(|w| {
            let mut o: Vec<usize> = w.iter().map(|&x| map[x]).collect();
            o.sort_unstable();
            set_text(&o)
        })
        .collect();
    ws.join(" ")
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

pub fn analyze(text: &str, mode: CollapseMode, budget: u64) -> Result<String, CliError> {
    let mut out = String::new();
    let g = match parse_input(text)? {
        Input::Graph(g) => {
            let _ = writeln!(out, "input: graph");
            g
        }
        Input::Hamiltonian(h) => {
            let kind = match h.ctx().kind() {
                AlgebraKind::PauliQubits(q) => format!("pauli, {}", plural(q, "qubit")),
                AlgebraKind::MajoranaModes(k) => format!("majorana, {}", plural(k, "mode")),
                AlgebraKind::Custom => format!("custom, {}", plural(h.ctx().n_generators(), "generator")),
            };
            let _ = writeln!(out, "input: hamiltonian ({kind}, {})", plural(h.terms().len(), "term"));
            let ids = h.identity_terms().len();
            if ids > 0 {
                let _ = writeln!(out, "identity terms: {ids} (not vertices)");
            }
            build_frustration_graph(&h).graph
        }
    };
    let _ = writeln!(out, "vertices: {}; edges: {}", g.n(), g.edge_count());

    let before = scf_verdict(&g, budget).map_err(|e| CliError::Budget(e.to_string()))?;
    let c = collapse(&g, mode);
    let after = scf_verdict(&c.reduced, budget).map_err(|e| CliError::Budget(e.to_string()))?;
    let cograph = is_cograph(&decompose(&g));

    let _ = writeln!(out, "collapse: {}; twin rounds: {}", mode_name(mode), c.trace.twin_rounds());
    let _ = writeln!(out, "collapses to {}; cograph: {cograph}", if c.reduced.n() == 1 { "1 vertex".to_string() } else { format!("{} vertices", c.reduced.n()) });
    let _ = writeln!(out, "removed: {}; delta_xi: {}", c.removed, c.delta_xi);
    if !c.trace.events.is_empty() {
        let _ = writeln!(out, "trace:");
        for l in c.trace.to_text().lines() {
            let _ = writeln!(out, "  {l}");
        }
    }
    let ident: Vec<usize> = (0..g.n()).collect();
    let _ = writeln!(out, "claw-free before: {}; claw-free after: {}", before.claw_free, after.claw_free);
    let _ = write!(out, "SCF before: {}", before.is_scf);
    if before.is_scf {
        let w = witnesses(&before, &ident);
        if !w.is_empty() {
            let _ = write!(out, "; witness {w}");
        }
    }
    let _ = write!(out, "; SCF after: {}", after.is_scf);
    if after.is_scf {
        let w = witnesses(&after, &c.vertex_map);
        if !w.is_empty() {
            let _ = write!(out, "; witness {w}");
        }
    }
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_input_kind() {
        assert!(matches!(parse_input("g 2 1\n0 1\n").unwrap(), Input::Graph(_)));
        assert!(matches!(parse_input("1.0 XZ\n0.5 ZX\n").unwrap(), Input::Hamiltonian(_)));
        assert!(matches!(parse_input("# nothing\n\n"), Err(CliError::Parse(_))));
    }

    #[test]
    fn claw_report() {
        let r = analyze("g 4 3\n0 1\n0 2\n0 3\n", CollapseMode::Full, 1000).unwrap();
        assert!(r.contains("collapses to 1 vertex; cograph: true"), "{r}");
        assert!(r.contains("SCF before: false"), "{r}");
        assert!(r.contains("SCF after: true"), "{r}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let Err(CliError::Parse(m)) = analyze("g 3 1\n0 1\n0 9\n", CollapseMode::Full, 10) else { panic!() };
        assert!(m.contains('3'), "{m}");
    }
}
