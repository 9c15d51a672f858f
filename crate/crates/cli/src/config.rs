//! `key=value` experiment configuration.
//!
//! Lines starting with `#!` are manifest lines written into every output
//! file; when present, only those lines are read, so an output file can be fed
//! back as its own configuration.

use std::fmt::Write as _;

use frustration::collapse::CollapseMode;
use frustration::models::{Lattice, LatticeKind, ModelSpec, PauliDraw, DEFAULT_TILING};
use frustration::scf::DEFAULT_BUDGET;

#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    Range { start: f64, stop: f64, steps: usize },
    List(Vec<f64>),
}

impl Grid {
    pub fn parse(s: &str) -> Result<Grid, String> {
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("grid `{s}` is not start:stop:steps"));
            }
            let start: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid start `{}`", parts[0]))?;
            let stop: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid stop `{}`", parts[1]))?;
            let steps: usize = parts[2].trim().parse().map_err(|_| format!("bad grid steps `{}`", parts[2]))?;
            if steps == 0 {
                return Err("grid needs at least one step".into());
            }
            if steps == 1 && start != stop {
                return Err("a one-step grid needs start == stop".into());
            }
            return Ok(Grid::Range { start, stop, steps });
        }
        let vals: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
        match vals {
            Ok(v) if !v.is_empty() => Ok(Grid::List(v)),
            _ => Err(format!("bad grid `{s}`")),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { start, steps: 1, .. } => vec![*start],
            Grid::Range { start, stop, steps } => (0..*steps)
                .map(|i| {
                    let x = start + (stop - start) * i as f64 / (*steps - 1) as f64;
                    (x * 1e12).round() / 1e12
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Grid::Range { start, stop, steps } => format!("{start}:{stop}:{steps}"),
            Grid::List(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

pub fn parse_mode(s: &str) -> Result<CollapseMode, String> {
    match s.trim() {
        "full" => Ok(CollapseMode::Full),
        "twins" => Ok(CollapseMode::Twins),
        other => Err(format!("collapse must be `full` or `twins`, got `{other}`")),
    }
}

pub fn mode_name(m: CollapseMode) -> &'static str {
    match m {
        CollapseMode::Full => "full",
        CollapseMode::Twins => "twins",
    }
}

pub fn parse_tiling(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.trim().split_once('x').ok_or_else(|| format!("tiling `{s}` is not AxB"))?;
    let a: usize = a.parse().map_err(|_| format!("bad tiling `{s}`"))?;
    let b: usize = b.parse().map_err(|_| format!("bad tiling `{s}`"))?;
    Ok((a, b))
}

pub fn parse_alphabet(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_uppercase()).filter(|x| !x.is_empty()).collect()
}

fn parse_bool(key: &str, s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("{key} must be true or false, got `{other}`")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Gnp,
    Brick,
    Square,
    Majorana,
    Pauli,
    Klocal,
}

impl ModelKind {
    fn parse(s: &str) -> Result<ModelKind, String> {
        Ok(match s.trim() {
            "gnp" => ModelKind::Gnp,
            "brick" => ModelKind::Brick,
            "square" => ModelKind::Square,
            "majorana" => ModelKind::Majorana,
            "pauli" => ModelKind::Pauli,
            "klocal" => ModelKind::Klocal,
            other => return Err(format!("unknown model `{other}`")),
        })
    }

    fn name(self) -> &'static str {
        match self {
            ModelKind::Gnp => "gnp",
            ModelKind::Brick => "brick",
            ModelKind::Square => "square",
            ModelKind::Majorana => "majorana",
            ModelKind::Pauli => "pauli",
            ModelKind::Klocal => "klocal",
        }
    }

    pub fn lattice(self) -> Option<LatticeKind> {
        match self {
            ModelKind::Brick => Some(LatticeKind::Brick),
            ModelKind::Square => Some(LatticeKind::SquareNuclei),
            _ => None,
        }
    }
}

/// Fully resolved experiment: every default filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub n: usize,
    pub grid: Grid,
    pub samples: usize,
    pub seed: u64,
    pub tiling: (usize, usize),
    pub alphabet: Vec<String>,
    pub locality: usize,
    pub draw_count: bool,
    pub collapse: CollapseMode,
    pub budget: u64,
    pub exact: bool,
    pub bounds: bool,
}

/// Raw pairs in file order, later keys overriding earlier ones.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>, String> {
    let manifest = text.lines().any(|l| l.trim_start().starts_with("#!"));
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let body = if manifest {
            match line.strip_prefix("#!") {
                Some(b) => b.trim(),
                None => continue,
            }
        } else {
            line.split('#').next().unwrap_or("").trim()
        };
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn from_pairs(pairs: &[(usize, String, String)]) -> Result<ExperimentConfig, String> {
        let get = |key: &str| pairs.iter().rev().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.as_str()));
        let known = [
            "model", "n", "p", "samples", "seed", "tiling", "alphabet", "locality", "draw", "collapse", "budget",
            "exact", "bounds",
        ];
        if let Some((l, k, _)) = pairs.iter().find(|(_, k, _)| !known.contains(&k.as_str())) {
            return Err(format!("line {l}: unknown key `{k}`"));
        }
        let at = |l: usize, e: String| if l == 0 { e } else { format!("line {l}: {e}") };
        let num = |key: &str| -> Result<Option<u64>, String> {
            match get(key) {
                None => Ok(None),
                Some((l, v)) => v.parse::<u64>().map(Some).map_err(|_| at(l, format!("{key} must be a non-negative integer"))),
            }
        };

        let (ml, mv) = get("model").ok_or("missing key `model`")?;
        let model = ModelKind::parse(mv).map_err(|e| at(ml, e))?;
        let (pl, pv) = get("p").ok_or("missing key `p`")?;
        let grid = Grid::parse(pv).map_err(|e| at(pl, e))?;
        let samples = num("samples")?.ok_or("missing key `samples`")? as usize;
        if samples == 0 {
            return Err(at(get("samples").map_or(0, |x| x.0), "samples must be positive".into()));
        }
        let seed = num("seed")?.ok_or("missing key `seed`; randomized runs need an explicit seed")?;
        let tiling = match get("tiling") {
            Some((l, v)) => parse_tiling(v).map_err(|e| at(l, e))?,
            None => DEFAULT_TILING,
        };
        let alphabet = get("alphabet").map(|(_, v)| parse_alphabet(v)).unwrap_or_else(Lattice::full_alphabet);
        let collapse = match get("collapse") {
            Some((l, v)) => parse_mode(v).map_err(|e| at(l, e))?,
            None => CollapseMode::Full,
        };
        let budget = num("budget")?.unwrap_or(DEFAULT_BUDGET);
        let flag = |key: &str| -> Result<bool, String> {
            match get(key) {
                Some((l, v)) => parse_bool(key, v).map_err(|e| at(l, e)),
                None => Ok(false),
            }
        };
        let (exact, bounds) = (flag("exact")?, flag("bounds")?);
        if exact && model.lattice().is_none() {
            return Err("exact=true needs model=brick or model=square".into());
        }
        if bounds && model != ModelKind::Gnp {
            return Err("bounds=true needs model=gnp".into());
        }
        let n = match (model.lattice(), num("n")?) {
            (Some(k), _) => tiling.0 * tiling.1 * k.sites(),
            (None, Some(n)) => n as usize,
            (None, None) => return Err(format!("model {} needs key `n`", model.name())),
        };
        let locality = match (model, num("locality")?) {
            (ModelKind::Klocal, Some(k)) => k as usize,
            (ModelKind::Klocal, None) => return Err("model klocal needs key `locality`".into()),
            _ => 0,
        };
        let draw_count = match get("draw") {
            Some((_, "count")) => true,
            Some((_, "probability")) => false,
            Some((l, v)) => return Err(at(l, format!("draw must be count or probability, got `{v}`"))),
            None => model == ModelKind::Klocal,
        };
        let cfg = ExperimentConfig {
            model,
            n,
            grid,
            samples,
            seed,
            tiling,
            alphabet,
            locality,
            draw_count,
            collapse,
            budget,
            exact,
            bounds,
        };
        for p in cfg.grid.points() {
            cfg.spec(p).map_err(|e| at(pl, e))?;
        }
        Ok(cfg)
    }

    /// Model at grid coordinate `p`, validated.
    pub fn spec(&self, p: f64) -> Result<ModelSpec, String> {
        let prob = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(p)
            } else {
                Err(format!("probability {p} outside [0, 1]"))
            }
        };
        Ok(match self.model {
            ModelKind::Gnp => ModelSpec::Gnp { n: self.n, p: prob(p)? },
            ModelKind::Brick | ModelKind::Square => {
                let kind = self.model.lattice().expect("lattice model");
                if p <= 0.0 {
                    return Err("lattice models need p > 0".into());
                }
                Lattice::new(kind, self.tiling, &self.alphabet).map_err(|e| e.to_string())?;
                ModelSpec::Lattice { kind, p: prob(p)?, tiling: self.tiling, alphabet: self.alphabet.clone() }
            }
            ModelKind::Majorana => ModelSpec::Majorana { orbitals: self.n, p: prob(p)? },
            ModelKind::Pauli | ModelKind::Klocal => {
                let draw = if self.draw_count {
                    if p < 0.0 || p.fract() != 0.0 {
                        return Err(format!("string count {p} is not a non-negative integer"));
                    }
                    PauliDraw::Count(p as usize)
                } else {
                    PauliDraw::Probability(prob(p)?)
                };
                let locality = (self.model == ModelKind::Klocal).then_some(self.locality);
                ModelSpec::UniformPauli { qubits: self.n, locality, draw }
            }
        })
    }

    /// Manifest lines; feeding them back reproduces the run.
    pub fn manifest(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "#! {k}={v}");
        };
        kv("model", self.model.name().into());
        if self.model.lattice().is_some() {
            kv("tiling", format!("{}x{}", self.tiling.0, self.tiling.1));
            kv("alphabet", self.alphabet.join(","));
        } else {
            kv("n", self.n.to_string());
        }
        if self.model == ModelKind::Klocal {
            kv("locality", self.locality.to_string());
        }
        if matches!(self.model, ModelKind::Pauli | ModelKind::Klocal) {
            kv("draw", if self.draw_count { "count" } else { "probability" }.into());
        }
        kv("p", self.grid.to_text());
        kv("samples", self.samples.to_string());
        kv("seed", self.seed.to_string());
        kv("collapse", mode_name(self.collapse).into());
        kv("budget", self.budget.to_string());
        if self.exact {
            kv("exact", "true".into());
        }
        if self.bounds {
            kv("bounds", "true".into());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<ExperimentConfig, String> {
        ExperimentConfig::from_pairs(&parse_pairs(text)?)
    }

    #[test]
    fn grid_points() {
        let g = Grid::parse("0.05:0.5:10").unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 10);
        assert_eq!(pts[0], 0.05);
        assert_eq!(pts[9], 0.5);
        assert_eq!(pts[1], 0.1);
        assert_eq!(Grid::parse("0.1,0.2").unwrap().points(), vec![0.1, 0.2]);
        assert!(Grid::parse("0.1:0.2").is_err());
        assert!(Grid::parse("0.1:0.2:0").is_err());
    }

    #[test]
    fn brick_defaults() {
        let c = cfg("model=brick\np=0.05:0.5:20\nsamples=100\nseed=3\n").unwrap();
        assert_eq!(c.tiling, (4, 4));
        assert_eq!(c.alphabet.len(), 9);
        assert_eq!(c.n, 64);
        assert_eq!(c.collapse, CollapseMode::Full);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(cfg("model=gnp\nn=5\np=0.1\nsamples=0\nseed=1").unwrap_err().contains("samples"));
        assert!(cfg("model=gnp\nn=5\np=0.1\nsamples=4").unwrap_err().contains("seed"));
        assert!(cfg("model=gnp\np=0.1\nsamples=4\nseed=1").unwrap_err().contains("`n`"));
        assert!(cfg("model=gnp\nn=5\np=1.5\nsamples=4\nseed=1").is_err());
        assert!(cfg("model=brick\np=0.1\nsamples=4\nseed=1\ntiling=1x1").unwrap_err().contains("wrap"));
        assert!(cfg("model=gnp\nn=5\np=0.1\nsamples=4\nseed=1\ncolour=red").unwrap_err().contains("line 6"));
        assert!(cfg("model=gnp\nn=5\np=0.1\nsamples=4\nseed=1\nexact=true").is_err());
    }

    #[test]
    fn manifest_round_trips() {
        let c = cfg("model=klocal\nn=30\nlocality=2\np=1:9:3\nsamples=10\nseed=9\ncollapse=twins").unwrap();
        let text = format!("{}model,n\nklocal,30\n", c.manifest());
        assert_eq!(cfg(&text).unwrap(), c);
    }
}
