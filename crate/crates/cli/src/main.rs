use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qwasser::cost::{cost_from_generator_json, named_cost};
use qwasser::isometry::{check_isometry_with, Verdict};
use qwasser::{
    run_sweep_with, self_distance, self_distance_sym_closed, self_distance_xz_closed, solve_qw, to_csv, CostOperator,
    Figure, QubitState, QwError, SolverMethod, SolverOptions, StateMap, StateRng, SweepConfig,
};

/// Agreement required between the three self-distance evaluations.
const SELF_DISTANCE_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "qwasser", version, about = "Quadratic quantum Wasserstein distances on a qubit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ipm,
    Admm,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(clap::Args)]
struct CostArg {
    /// `sym`, `xz`, or `@path` to a JSON generator list.
    #[arg(long, default_value = "sym")]
    cost: String,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal transport cost between two states.
    Distance {
        /// Bloch vector `x,y,z` of ρ.
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        #[command(flatten)]
        cost: CostArg,
        #[arg(long, value_enum, default_value = "ipm")]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Compares the solver, the purification formula and the closed form for `D(ρ, ρ)²`.
    SelfDistance {
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[command(flatten)]
        cost: CostArg,
        #[arg(long)]
        json: bool,
    },
    /// Tests a map for the isometry property on seeded stratified pairs.
    IsometryCheck {
        /// JSON map description, inline or as a file path.
        #[arg(long)]
        map: String,
        #[command(flatten)]
        cost: CostArg,
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compares `D_xz(ρ, η)` and `D_xz(ρ̄, η)` over a grid and writes CSV.
    Sweep {
        #[arg(long, value_enum)]
        figure: Option<FigureArg>,
        /// JSON sweep configuration; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Prints a cost matrix and its spectrum.
    CostInfo {
        #[command(flatten)]
        cost: CostArg,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Numeric(String),
    Violated,
}

impl From<QwError> for Failure {
    fn from(e: QwError) -> Self {
        match e {
            QwError::InvalidArgument(_) => Failure::Usage(e.to_string()),
            QwError::NumericFailure { .. } => Failure::Numeric(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Distance { rho, omega, cost, method, json } => distance(&rho, &omega, &cost.cost, method, json),
        Command::SelfDistance { rho, cost, json } => self_distance_cmd(&rho, &cost.cost, json),
        Command::IsometryCheck { map, cost, pairs, tol, seed, json } => isometry_check(&map, &cost.cost, pairs, tol, seed, json),
        Command::Sweep { figure, config, out, seed, json } => sweep(figure, config, out, seed, json),
        Command::CostInfo { cost, json } => cost_info(&cost.cost, json),
    }
}

fn parse_state(s: &str) -> Result<QubitState, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!("expected a Bloch vector x,y,z, got '{s}'")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| Failure::Usage(format!("'{p}' is not a number")))?;
    }
    Ok(QubitState::from_xyz(v[0], v[1], v[2])?)
}

fn parse_cost(spec: &str) -> Result<CostOperator, Failure> {
    match spec.strip_prefix('@') {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
            Ok(cost_from_generator_json(&text)?)
        }
        None => Ok(named_cost(spec)?),
    }
}

fn print_json(value: &impl Serialize) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn distance(rho: &str, omega: &str, cost: &str, method: Method, json: bool) -> CliResult {
    let (rho, omega, cost) = (parse_state(rho)?, parse_state(omega)?, parse_cost(cost)?);
    let method = match method {
        Method::Ipm => SolverMethod::InteriorPoint,
        Method::Admm => SolverMethod::Admm,
    };
    let opts = SolverOptions { method, ..SolverOptions::default() };
    let r = solve_qw(&rho, &omega, &cost, &opts)?;
    if json {
        return print_json(&json!({
            "rho": rho.bloch().to_array(),
            "omega": omega.bloch().to_array(),
            "cost": cost.name(),
            "result": r,
        }));
    }
    println!("value        {:.12}", r.value);
    println!("distance     {:.12}", r.distance);
    println!("certificate  {}", r.certificate.kind());
    if let Some(gap) = r.certificate.gap() {
        println!("gap          {gap:e}");
    }
    println!("iterations   {}", r.iterations);
    Ok(())
}

fn self_distance_cmd(rho: &str, cost: &str, json: bool) -> CliResult {
    let (rho, cost) = (parse_state(rho)?, parse_cost(cost)?);
    let sdp = solve_qw(&rho, &rho, &cost, &SolverOptions::default())?.value;
    let purification = self_distance(&rho, &cost)?;
    let closed = match cost.name() {
        "xz" => Some(self_distance_xz_closed(rho.bloch())?),
        "sym" => Some(self_distance_sym_closed(rho.bloch())?),
        _ => None,
    };
    let mut values = vec![sdp, purification];
    values.extend(closed);
    let spread = values.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let agree = spread <= SELF_DISTANCE_TOL;
    if json {
        print_json(&json!({
            "rho": rho.bloch().to_array(),
            "cost": cost.name(),
            "sdp": sdp,
            "purification": purification,
            "closed_form": closed,
            "spread": spread,
            "agree": agree,
        }))?;
    } else {
        println!("sdp           {sdp}");
        println!("purification  {purification}");
        match closed {
            Some(c) => println!("closed form   {c}"),
            None => println!("closed form   n/a for custom costs"),
        }
        println!("spread        {spread:e}");
    }
    if agree {
        Ok(())
    } else {
        Err(Failure::Numeric(format!("self-distance evaluations disagree by {spread:e}")))
    }
}

fn load_map(arg: &str) -> Result<StateMap, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?
    };
    let map: StateMap = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed map config: {e}")))?;
    map.validate()?;
    Ok(map)
}

fn isometry_check(map: &str, cost: &str, pairs: usize, tol: f64, seed: u64, json: bool) -> CliResult {
    let (map, cost) = (load_map(map)?, parse_cost(cost)?);
    let mut rng = StateRng::seed_from_u64(seed);
    let report = check_isometry_with(&map, &cost, pairs, tol, &mut rng, &SolverOptions::default())?;
    if json {
        print_json(&report)?;
    } else {
        println!("cost           {}", report.cost_name);
        println!("pairs          {}", report.pairs_tested);
        println!("max deviation  {:e}", report.max_deviation);
        println!("verdict        {:?}", report.verdict);
    }
    match report.verdict {
        Verdict::IsometryWithinTol => Ok(()),
        Verdict::Violated => {
            let (a, b) = report.worst_pair;
            eprintln!("worst pair: ρ = {a:?}, ω = {b:?}");
            Err(Failure::Violated)
        }
    }
}

fn sweep(figure: Option<FigureArg>, config: Option<PathBuf>, out: Option<PathBuf>, seed: Option<u64>, json: bool) -> CliResult {
    let preset = |f: FigureArg| {
        SweepConfig::preset(match f {
            FigureArg::Fig1 => Figure::Fig1,
            FigureArg::Fig2 => Figure::Fig2,
            FigureArg::Fig3 => Figure::Fig3,
        })
    };
    let mut cfg = match (&config, figure) {
        (Some(path), fig) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let file: SweepConfig =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed sweep config: {e}")))?;
            match fig {
                // The figure flag replaces the grid but keeps the file's output and seed.
                Some(f) => SweepConfig { output_path: file.output_path, seed: file.seed, ..preset(f)? },
                None => file,
            }
        }
        (None, Some(f)) => preset(f)?,
        (None, None) => return Err(Failure::Usage("sweep needs --figure or --config".into())),
    };
    if let Some(p) = out {
        cfg.output_path = Some(p.to_string_lossy().into_owned());
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let output = run_sweep_with(&cfg, &SolverOptions::default())?;
    let csv = to_csv(&output.rows);
    match &cfg.output_path {
        Some(p) => fs::write(p, csv).map_err(|e| Failure::Usage(format!("cannot write {p}: {e}")))?,
        None => print!("{csv}"),
    }
    let s = &output.summary;
    if json {
        let text = serde_json::to_string_pretty(s).map_err(|e| Failure::Usage(e.to_string()))?;
        if cfg.output_path.is_some() {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    } else {
        eprintln!(
            "{} nodes ({} interior, {} boundary, {} failed)",
            s.nodes, s.interior_nodes, s.boundary_nodes, s.failed_nodes
        );
        eprintln!("min interior margin      {:e}", s.min_interior_margin);
        eprintln!("max boundary |margin|    {:e}", s.max_boundary_abs_margin);
        eprintln!("strict on interior       {}", s.strict_on_interior);
        eprintln!("conjugation check        {:e}", s.conjugation_check_deviation);
    }
    if s.failed_nodes > 0 {
        Err(Failure::Numeric(format!("solver failed at {} grid nodes", s.failed_nodes)))
    } else if s.passed() {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn cost_info(cost: &str, json: bool) -> CliResult {
    let cost = parse_cost(cost)?;
    let spec = cost.spectrum();
    if json {
        return print_json(&json!({
            "name": cost.name(),
            "matrix": cost.matrix(),
            "eigenvalues": spec.eigenvalues(),
        }));
    }
    println!("cost {}", cost.name());
    println!("{}", cost.matrix());
    let ev: Vec<String> = spec.eigenvalues().iter().map(|v| format!("{:.12}", if v.abs() < 1e-12 { 0.0 } else { *v })).collect();
    println!("eigenvalues {}", ev.join(" "));
    Ok(())
}
