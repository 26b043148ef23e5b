//! Command-line front end. Exit codes: 0 success, 1 I/O or parse error,
//! 2 empty result, 3 numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{exp_compare, exp_outside_ball, exp_stability, exp_success_rate, parse_size, stream, Algorithm, ExperimentConfig, ExperimentError, ExperimentKind, ExperimentReport};
use crate::adjustments::ts_solve_with;
use crate::baselines::{fictitious_play, regret_matching, zero_sum_baseline};
use crate::descent::{DescentOptions, DualSolution, DEFAULT_DELTA};
use crate::dfm::dfm_solve_with;
use crate::game::{Game, MixedStrategy, Profile};
use crate::generator::{constants, generate_tight, sample_inputs_with, verify_tight, Generated, GeneratorInput, GeneratorOptions, Restriction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stationary-nash", version, about = "Approximate Nash equilibria by descent to stationary points, with tight-instance generation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate tight games and their certificates.
    Generate(GenerateArgs),
    /// Run one algorithm on a game file.
    Solve(SolveArgs),
    /// Check a certificate against a game.
    Verify(VerifyArgs),
    /// Perturbation stability of tight stationary points.
    ExpStability(ExpArgs),
    /// Restarts outside the perturbation ball on stable games.
    ExpOtb(ExpArgs),
    /// Generator success rate per size and support restriction.
    ExpSuccess(ExpArgs),
    /// Compare all algorithms on tight games.
    ExpCompare(CompareArgs),
    /// Print b, λ0, μ0.
    Constants,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, default_value = "3x3")]
    pub size: String,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value = "disjoint")]
    pub restriction: Restriction,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also require a shared best response to `y*` and `z*`.
    #[arg(long)]
    pub lambda_intersect: bool,
    /// Sample pure `w*`, `z*`.
    #[arg(long)]
    pub pure_dual: bool,
    /// Random objectives per feasible pair (defaults to m).
    #[arg(long)]
    pub objectives: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Game JSON file.
    pub game: PathBuf,
    #[arg(long, default_value = "ts")]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, default_value_t = 10_000)]
    pub rounds: usize,
    /// `uniform`, `pure:i,j` (1-based) or `file:PATH` (a certificate).
    #[arg(long, default_value = "uniform")]
    pub init: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rescale raw payoffs into [0,1].
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub game: PathBuf,
    pub cert: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct ExpArgs {
    /// Game sizes `MxN`; repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    pub size: Vec<String>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Initial points per game.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Lattice cells per simplex edge.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',')]
    pub restriction: Vec<Restriction>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub exp: ExpArgs,
    #[arg(long, value_delimiter = ',', default_value = "ts,dfm,fp,rm,zs")]
    pub algorithms: Vec<Algorithm>,
}

struct Failure(i32, String);

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(EXIT_IO, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(EXIT_IO, e.to_string())
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        let code = match e {
            ExperimentError::Config(_) | ExperimentError::Io(_) | ExperimentError::Json(_) | ExperimentError::Csv(_) => EXIT_IO,
            _ => EXIT_NUMERICAL,
        };
        Failure(code, e.to_string())
    }
}

fn numerical(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_NUMERICAL, e.to_string())
}

fn parse(e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_IO, e.to_string())
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Generate(a) => generate(&a),
        Command::Solve(a) => solve(&a),
        Command::Verify(a) => verify(&a),
        Command::ExpStability(a) => experiment(ExperimentKind::Stability, &a, &[]),
        Command::ExpOtb(a) => experiment(ExperimentKind::OutsideBall, &a, &[]),
        Command::ExpSuccess(a) => experiment(ExperimentKind::SuccessRate, &a, &[]),
        Command::ExpCompare(a) => experiment(ExperimentKind::Compare, &a.exp, &a.algorithms),
        Command::Constants => {
            println!("{}", serde_json::to_string_pretty(&constants()).expect("plain struct"));
            Ok(())
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn generate(a: &GenerateArgs) -> Result<(), Failure> {
    let (m, n) = parse_size(&a.size).map_err(parse)?;
    fs::create_dir_all(&a.out)?;
    let mut rng = stream(a.seed, &[]);
    let opts = GeneratorOptions { objectives: a.objectives, per_pair: 1, lambda_intersect: a.lambda_intersect, first_only: true };
    let max_attempts = (20 * a.count).max(100);
    let (mut attempts, mut feasible, mut written) = (0, 0, 0);
    while written < a.count && attempts < max_attempts {
        attempts += 1;
        let input = sample_inputs_with(m, n, a.restriction, a.pure_dual, &mut rng).map_err(parse)?;
        let Generated::Instances(list) = generate_tight(&input, &opts, &mut rng).map_err(numerical)? else { continue };
        feasible += 1;
        for inst in list.into_iter().take(a.count - written) {
            let stem = format!("game_{m}x{n}_{written:04}");
            fs::write(a.out.join(format!("{stem}.json")), inst.game.to_json())?;
            fs::write(a.out.join(format!("{stem}.cert.json")), serde_json::to_string_pretty(&inst.certificate())?)?;
            written += 1;
        }
    }
    println!("{}", json!({ "written": written, "attempts": attempts, "feasible": feasible, "successRate": feasible as f64 / attempts as f64 }));
    if written == 0 {
        return Err(Failure(EXIT_EMPTY, format!("no tight {m}x{n} game for restriction {}", a.restriction)));
    }
    Ok(())
}

/// Starting profile and optional dual hint from a certificate-like file.
#[derive(Debug, Deserialize, Serialize)]
struct InitFile {
    #[serde(rename = "xStar")]
    x_star: MixedStrategy,
    #[serde(rename = "yStar")]
    y_star: MixedStrategy,
    #[serde(rename = "wStar")]
    w_star: Option<MixedStrategy>,
    #[serde(rename = "zStar")]
    z_star: Option<MixedStrategy>,
    #[serde(rename = "rhoStar")]
    rho_star: Option<f64>,
}

fn initial(g: &Game, init: &str) -> Result<(Profile, Option<DualSolution>), Failure> {
    if init == "uniform" {
        return Ok((Profile::uniform(g), None));
    }
    if let Some(rest) = init.strip_prefix("pure:") {
        let (i, j) = rest.split_once(',').ok_or_else(|| parse(format!("bad --init '{init}'")))?;
        let i: usize = i.trim().parse().map_err(parse)?;
        let j: usize = j.trim().parse().map_err(parse)?;
        if i == 0 || j == 0 || i > g.m() || j > g.n() {
            return Err(parse(format!("pure strategy ({i},{j}) outside a {}x{} game", g.m(), g.n())));
        }
        return Ok((Profile::pure(g, i - 1, j - 1), None));
    }
    if let Some(path) = init.strip_prefix("file:") {
        let f: InitFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        if f.x_star.len() != g.m() || f.y_star.len() != g.n() {
            return Err(parse("initial profile does not match the game size"));
        }
        let hint = match (f.w_star, f.z_star) {
            (Some(w), Some(z)) => Some(DualSolution { rho: f.rho_star.unwrap_or_else(|| constants().rho_star()), w, z }),
            _ => None,
        };
        return Ok((Profile::new(f.x_star, f.y_star), hint));
    }
    Err(parse(format!("unknown --init '{init}'")))
}

fn read_game(path: &Path, normalize: bool) -> Result<Game, Failure> {
    Game::from_json(&fs::read_to_string(path)?, normalize).map_err(parse)
}

fn solve(a: &SolveArgs) -> Result<(), Failure> {
    let g = read_game(&a.game, a.normalize)?;
    let (p0, hint) = initial(&g, &a.init)?;
    let opts = DescentOptions { delta: a.delta, max_iter: None, dual_hint: hint };
    let start = Instant::now();
    let (f, profile, iterations, detail) = match a.algorithm {
        Algorithm::Ts => {
            let r = ts_solve_with(&g, &p0, &opts).map_err(numerical)?;
            let detail = json!({
                "source": r.source,
                "stationaryF": r.stationary.f,
                "method1F": r.method1.f,
                "method2F": r.method2.f,
                "method3F": r.method3.f,
                "lambdaStar": r.stationary.lambda_star,
                "muStar": r.stationary.mu_star,
                "dual": r.stationary.dual,
            });
            (r.f, r.profile, r.stationary.iterations, detail)
        }
        Algorithm::Dfm => {
            let r = dfm_solve_with(&g, &p0, &opts).map_err(numerical)?;
            let it = r.stationary.iterations;
            (r.f, r.profile.clone(), it, json!({ "stationaryF": r.stationary.f, "trace": r.trace }))
        }
        Algorithm::Fp => {
            let r = fictitious_play(&g, a.rounds);
            (r.f, r.profile.clone(), r.rounds, json!({ "history": r.history }))
        }
        Algorithm::Rm => {
            let r = regret_matching(&g, a.rounds, a.seed);
            (r.f, r.profile.clone(), r.rounds, json!({ "history": r.history, "seed": a.seed }))
        }
        Algorithm::Zs => {
            let r = zero_sum_baseline(&g).map_err(numerical)?;
            (r.f, r.profile.clone(), 0, json!({ "candidate": r.candidate, "adjusted": r.adjusted, "candidates": r.candidates }))
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    println!("{}", json!({ "f": f, "profile": profile, "iterations": iterations, "wall_ms": wall_ms, "detail": detail }));
    Ok(())
}

fn verify(a: &VerifyArgs) -> Result<(), Failure> {
    let g = read_game(&a.game, false)?;
    let input: GeneratorInput = serde_json::from_str(&fs::read_to_string(&a.cert)?)?;
    let checks = verify_tight(&g, &input, a.grid);
    println!("{}", serde_json::to_string_pretty(&checks)?);
    if checks.passed {
        Ok(())
    } else {
        Err(Failure(EXIT_EMPTY, format!("certificate rejected: {}", checks.failures.join("; "))))
    }
}

fn config_from(kind: ExperimentKind, a: &ExpArgs) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::new(kind);
    if !a.size.is_empty() {
        cfg.sizes = a.size.iter().map(|s| parse_size(s)).collect::<Result<_, _>>().map_err(parse)?;
    }
    if !a.restriction.is_empty() {
        cfg.restrictions = a.restriction.clone();
    }
    cfg.count = a.count.unwrap_or(cfg.count);
    cfg.trials = a.trials.or(cfg.trials);
    cfg.delta = a.delta.unwrap_or(cfg.delta);
    cfg.radius = a.radius.unwrap_or(cfg.radius);
    cfg.rounds = a.rounds.unwrap_or(cfg.rounds);
    cfg.resolution = a.resolution.unwrap_or(cfg.resolution);
    cfg.seed = a.seed;
    Ok(cfg)
}

fn experiment(kind: ExperimentKind, a: &ExpArgs, algorithms: &[Algorithm]) -> Result<(), Failure> {
    let cfg = config_from(kind, a)?;
    let report: ExperimentReport = match kind {
        ExperimentKind::Stability => exp_stability(&cfg)?,
        ExperimentKind::OutsideBall => exp_outside_ball(&cfg)?,
        ExperimentKind::SuccessRate => exp_success_rate(&cfg)?,
        ExperimentKind::Compare => exp_compare(&cfg, algorithms)?,
    };
    let summary = serde_json::to_string_pretty(&report.aggregates)?;
    if let Some(path) = &a.out {
        report.save(path, matches!(a.format, Format::Csv))?;
        println!("{summary}");
    } else if matches!(a.format, Format::Csv) {
        report.write_csv(std::io::stdout())?;
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    if report.records.is_empty() {
        return Err(Failure(EXIT_EMPTY, "experiment produced no records".into()));
    }
    Ok(())
}
