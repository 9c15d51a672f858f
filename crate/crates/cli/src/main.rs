mod analyze;
mod config;
mod output;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frustration::collapse::CollapseMode;
use frustration::models::{exact_brick, exact_square, gnp_bounds, run_point, ExactPoint, Lattice};
use frustration::scf::DEFAULT_BUDGET;

use config::{mode_name, parse_alphabet, parse_mode, parse_pairs, parse_tiling, ExperimentConfig, Grid};
use output::Row;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Verify(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Verify(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Verify(m) | CliError::Budget(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "frustration", version, about = "Frustration-graph experiments, collapse analysis and verification")]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Emit {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Also write a line chart.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo sweep described by a key=value config file.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        collapse: Option<String>,
        #[arg(long)]
        budget: Option<u64>,
        /// Extra `key=value` overrides.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[command(flatten)]
        emit: Emit,
    },
    /// Collapse and SCF report for a Hamiltonian or graph file.
    Analyze {
        path: PathBuf,
        #[arg(long, default_value = "full")]
        collapse: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Numerical checks with a nonzero exit on failure.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Print the Majorana-to-qubit symplectic map.
    SvnMap {
        #[arg(long)]
        qubits: usize,
    },
    /// Exact p_SCF curves for the brick lattice.
    ExactBrick(ExactArgs),
    /// Exact p_SCF curves for the square lattice with nuclei.
    ExactSquare(ExactArgs),
}

#[derive(Subcommand)]
enum VerifyTarget {
    Blockdiag {
        /// Hamiltonian file; omit to use --random.
        path: Option<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 6)]
        qubits: usize,
        #[arg(long, default_value_t = 12)]
        terms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Svn {
        #[arg(long)]
        qubits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Weyl {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct ExactArgs {
    /// Comma-separated per-edge Paulis, or `full`.
    #[arg(long, default_value = "XX,YY,ZZ")]
    alphabet: String,
    /// Grid as start:stop:steps or a comma list.
    #[arg(long, default_value = "0.05:0.5:10")]
    p: String,
    #[arg(long, default_value = "4x4")]
    tiling: String,
    #[arg(long, default_value = "full")]
    collapse: String,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(flatten)]
    emit: Emit,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn mode(s: &str) -> Result<CollapseMode, CliError> {
    parse_mode(s).map_err(CliError::Usage)
}

fn alphabet(s: &str) -> Vec<String> {
    if s.trim() == "full" {
        Lattice::full_alphabet()
    } else {
        parse_alphabet(s)
    }
}

struct ExperimentOverrides {
    seed: Option<u64>,
    samples: Option<usize>,
    collapse: Option<String>,
    budget: Option<u64>,
    set: Vec<String>,
}

fn resolve_config(text: &str, o: &ExperimentOverrides) -> Result<ExperimentConfig, CliError> {
    let mut pairs = parse_pairs(text).map_err(CliError::Parse)?;
    let mut push = |k: &str, v: String| pairs.push((0, k.to_string(), v));
    if let Some(s) = o.seed {
        push("seed", s.to_string());
    }
    if let Some(s) = o.samples {
        push("samples", s.to_string());
    }
    if let Some(c) = &o.collapse {
        push("collapse", c.clone());
    }
    if let Some(b) = o.budget {
        push("budget", b.to_string());
    }
    for kv in &o.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        push(k.trim(), v.trim().to_string());
    }
    ExperimentConfig::from_pairs(&pairs).map_err(CliError::Parse)
}

fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Row>, CliError> {
    let points = cfg.grid.points();
    let exact: Option<Vec<ExactPoint>> = if cfg.exact {
        let kind = cfg.model.lattice().expect("exact needs a lattice");
        let f = match kind {
            frustration::models::LatticeKind::Brick => exact_brick,
            frustration::models::LatticeKind::SquareNuclei => exact_square,
        };
        let (table, pts) =
            f(&points, &cfg.alphabet, cfg.tiling, cfg.collapse, cfg.budget).map_err(|e| CliError::Parse(e.to_string()))?;
        if table.budget_exceeded > 0 {
            eprintln!("warning: {} exact cells exceeded the budget", table.budget_exceeded);
        }
        Some(pts)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let spec = cfg.spec(p).map_err(CliError::Parse)?;
        let record =
            run_point(&spec, cfg.samples, cfg.seed, cfg.collapse, cfg.budget).map_err(|e| CliError::Parse(e.to_string()))?;
        let bounds = if cfg.bounds { gnp_bounds(cfg.n, p).ok() } else { None };
        rows.push(Row { record, exact: exact.as_ref().map(|e| e[i]), bounds });
    }
    Ok(rows)
}

fn emit_outputs(emit: &Emit, title: &str, csv: String, json: String, series: Vec<output::Series>) -> Result<(), CliError> {
    let body = match emit.format {
        Format::Csv => csv,
        Format::Json => json,
    };
    if let Some(svg) = &emit.svg {
        write(Some(svg), &output::svg_chart(title, "p", &series))?;
    }
    write(emit.out.as_deref(), &body)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Experiment { config, seed, samples, collapse, budget, set, emit } => {
            let text = read(&config)?;
            let cfg = resolve_config(&text, &ExperimentOverrides { seed, samples, collapse, budget, set })?;
            let rows = run_experiment(&cfg)?;
            let manifest = cfg.manifest();
            let title = format!("{} (n = {}, {} samples)", rows[0].record.model, cfg.n, cfg.samples);
            emit_outputs(
                &emit,
                &title,
                output::experiment_csv(&manifest, &rows),
                output::experiment_json(&manifest, &rows),
                output::series_of(&rows),
            )?;
            let flagged: usize = rows.iter().map(|r| r.record.budget_exceeded).sum();
            if flagged > 0 {
                return Err(CliError::Budget(format!("{flagged} samples exceeded the simplicial search budget")));
            }
            Ok(())
        }
        Command::Analyze { path, collapse, budget } => {
            let report = analyze::analyze(&read(&path)?, mode(&collapse)?, budget)?;
            print!("{report}");
            Ok(())
        }
        Command::Verify { target } => {
            let v = match target {
                VerifyTarget::Blockdiag { path: Some(p), .. } => verify::blockdiag_file(&read(&p)?)?,
                VerifyTarget::Blockdiag { path: None, random: Some(n), qubits, terms, seed } => {
                    verify::blockdiag_random(n, qubits, terms, seed)?
                }
                VerifyTarget::Blockdiag { path: None, random: None, .. } => {
                    return Err(CliError::Usage("verify blockdiag needs a file or --random <count>".into()))
                }
                VerifyTarget::Svn { qubits, seed } => verify::svn(qubits, true, seed)?,
                VerifyTarget::Weyl { d, m, seed } => verify::weyl(d, m, seed)?,
            };
            print!("{}", v.report);
            if v.passed {
                println!("PASS");
                Ok(())
            } else {
                Err(CliError::Verify("verification failed".into()))
            }
        }
        Command::SvnMap { qubits } => {
            let v = verify::svn(qubits, false, 0)?;
            print!("{}", v.report);
            Ok(())
        }
        Command::ExactBrick(a) => exact(frustration::models::LatticeKind::Brick, a),
        Command::ExactSquare(a) => exact(frustration::models::LatticeKind::SquareNuclei, a),
    }
}

fn exact(kind: frustration::models::LatticeKind, a: ExactArgs) -> Result<(), CliError> {
    let grid = Grid::parse(&a.p).map_err(CliError::Usage)?;
    let tiling = parse_tiling(&a.tiling).map_err(CliError::Usage)?;
    let collapse = mode(&a.collapse)?;
    let alpha = alphabet(&a.alphabet);
    let points = grid.points();
    let f = match kind {
        frustration::models::LatticeKind::Brick => exact_brick,
        frustration::models::LatticeKind::SquareNuclei => exact_square,
    };
    let (table, pts) = f(&points, &alpha, tiling, collapse, a.budget).map_err(|e| CliError::Parse(e.to_string()))?;
    let manifest = format!(
        "#! model={}\n#! tiling={}x{}\n#! alphabet={}\n#! p={}\n#! collapse={}\n#! budget={}\n# cell bits={}\n",
        kind.name(),
        tiling.0,
        tiling.1,
        alpha.join(","),
        grid.to_text(),
        mode_name(collapse),
        a.budget,
        table.m
    );
    let series = vec![
        output::Series { name: "p_scf_before".into(), points: pts.iter().map(|x| (x.p, x.p_scf_before)).collect(), dashed: false },
        output::Series { name: "p_scf_after".into(), points: pts.iter().map(|x| (x.p, x.p_scf_after)).collect(), dashed: false },
        output::Series { name: "delta_p_scf".into(), points: pts.iter().map(|x| (x.p, x.delta_p_scf)).collect(), dashed: false },
        output::Series { name: "delta_xi".into(), points: pts.iter().map(|x| (x.p, x.delta_xi_mean)).collect(), dashed: false },
    ];
    emit_outputs(
        &a.emit,
        &format!("exact {} ({} bits per cell)", kind.name(), table.m),
        output::exact_csv(&manifest, &pts),
        output::exact_json_doc(&manifest, &pts),
        series,
    )?;
    if table.budget_exceeded > 0 {
        return Err(CliError::Budget(format!("{} cells exceeded the simplicial search budget", table.budget_exceeded)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(CliError::Usage(format!("thread pool: {e}"))),
        },
        None => run(cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
