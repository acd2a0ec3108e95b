//! `toral`: build the example pipelines, estimate rotation vectors, classify occupancy
//! grids, run the wedge check and the verification suites.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use config::{parse_matrix, parse_resolutions, Config};
use toral_core::circle::{build_denjoy, rotation, GapSchedule};
use toral_core::classify::classify_grid;
use toral_core::io::atomic_write;
use toral_core::pipeline::{render::render_domains, wedge_reports};
use toral_core::torus::{product_map, rotation_vector_estimate, translation_map, TorusLift};
use toral_core::{run_pipeline, run_suite, ExampleId, OccupancyGrid, PipelineSpec, Suite, Vec2, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] toral_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(toral_core::Error::InvalidParameter(_) | toral_core::Error::Resonant { .. }) => 2,
            CliError::Core(toral_core::Error::Pipeline { source, .. })
                if matches!(**source, toral_core::Error::InvalidParameter(_) | toral_core::Error::Resonant { .. }) =>
            {
                2
            }
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "toral", version, about = "Non-resonant torus homeomorphisms and their minimal sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build one example (or `all`) and write its artifact bundle.
    Example(ExampleArgs),
    /// Estimate the rotation vector of a map from orbit averages.
    EstimateRho(RhoArgs),
    /// Classify the complementary domains of a PGM occupancy grid.
    Classify(ClassifyArgs),
    /// Check the wedge density condition for the quadratic-gap product and the control.
    WedgeCheck(WedgeArgs),
    /// Run one verification suite (or `all`); exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Render the classified domains of a PGM occupancy grid as a PPM.
    Render(RenderArgs),
}

#[derive(Debug, clap::Args)]
struct ExampleArgs {
    /// type1_da, type2_annuli, type2_annuli_conjugated[(p,q)], type2_with_disks,
    /// type3_cantor, type3_extension or all.
    id: String,
    /// `key = value` parameter file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Integer matrix `a,b,c,d` (DA base or conjugator).
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    #[arg(long)]
    stages: Option<usize>,
    /// Grid resolutions, comma separated.
    #[arg(long)]
    resolution: Option<String>,
    /// Orbit length at the first resolution; later ones scale with grid area.
    #[arg(long)]
    orbit_steps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (`all` writes one subdirectory per example).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MapKind {
    /// Rigid translation by (alpha, beta).
    Translation,
    /// Denjoy(alpha) × rotation(beta).
    Denjoy,
    /// Denjoy(alpha) × Denjoy(beta).
    Cantor,
}

#[derive(Debug, clap::Args)]
struct RhoArgs {
    #[arg(long, value_enum, default_value = "translation")]
    map: MapKind,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2 - 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 3f64.sqrt() - 1.0)]
    beta: f64,
    /// Iterates per seed.
    #[arg(short = 'n', long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Per-seed CSV output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ClassifyArgs {
    /// Square binary PGM; nonzero pixels are marked.
    input: PathBuf,
    #[arg(long, default_value_t = 8)]
    p_max: i64,
    /// Component CSV output; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write a PPM render.
    #[arg(long)]
    render: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct WedgeArgs {
    #[arg(long, default_value_t = std::f64::consts::SQRT_2 - 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 3f64.sqrt() - 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 10)]
    radii: usize,
    #[arg(long, default_value_t = 10)]
    angles: usize,
    #[arg(long, default_value_t = 5)]
    widths: usize,
    /// Per-wedge CSV output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Suite name or criterion number, or `all`.
    suite: String,
    /// Blow-up stages of the blow-up suite.
    #[arg(long, default_value_t = 4)]
    stages: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, clap::Args)]
struct RenderArgs {
    /// Square binary PGM; nonzero pixels are marked.
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 8)]
    p_max: i64,
}

fn usage() -> String {
    Cli::command().render_usage().to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", usage());
            }
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("toral: {e}");
            if e.exit_code() == 2 {
                eprintln!("\n{}", usage());
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, CliError> {
    match cmd {
        Command::Example(a) => example(a),
        Command::EstimateRho(a) => estimate_rho(a),
        Command::Classify(a) => classify(a),
        Command::WedgeCheck(a) => wedge_check(a),
        Command::Verify(a) => verify(a),
        Command::Render(a) => render(a),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn example(a: ExampleArgs) -> Result<ExitCode, CliError> {
    let cfg = match &a.config {
        Some(p) => Config::parse(&String::from_utf8_lossy(&read(p)?))?,
        None => Config::default(),
    };
    let ids = if a.id == "all" { ExampleId::all() } else { vec![ExampleId::parse(&a.id)?] };
    let out = a.out.clone().or(cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let matrix = match &a.matrix {
        Some(m) => Some(parse_matrix(m)?),
        None => cfg.matrix,
    };
    let resolutions = match &a.resolution {
        Some(r) => Some(parse_resolutions(r)?),
        None => cfg.resolution.clone(),
    };
    for id in &ids {
        let mut spec = PipelineSpec::new(*id);
        if let Some(v) = a.alpha.or(cfg.alpha) {
            spec.alpha = v;
        }
        if let Some(v) = a.beta.or(cfg.beta) {
            spec.beta = Some(v);
        }
        spec.matrix = matrix;
        if let Some(v) = a.stages.or(cfg.stages) {
            spec.stages = v;
        }
        if let Some(v) = &resolutions {
            spec.resolutions = v.clone();
        }
        if let Some(v) = a.orbit_steps.or(cfg.orbit_steps) {
            spec.orbit_steps = v;
        }
        if let Some(v) = a.seed.or(cfg.seed) {
            spec.seed = v;
        }
        let dir = if a.id == "all" { out.join(id.slug()) } else { out.clone() };
        let bundle = run_pipeline(&spec)?;
        bundle.write_to(&dir)?;
        let o = &bundle.outcome;
        println!(
            "{}: rotation ({:.9}, {:.9}), error {:.3e}, spread {:.3e}",
            bundle.name,
            o.rotation.vector.x,
            o.rotation.vector.y,
            o.rotation_error(),
            o.rotation.seed_spread
        );
        for g in &o.grids {
            let types: Vec<String> = g.type_set.iter().map(|t| t.name()).collect();
            println!(
                "  R = {}: marked {:.4}, {} domains ({} trivial), types [{}]",
                g.resolution,
                g.marked_fraction,
                g.components,
                g.trivial,
                types.join(" ")
            );
        }
        println!("  wrote {} files to {}", bundle.files.len(), dir.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn estimate_rho(a: RhoArgs) -> Result<ExitCode, CliError> {
    let f: TorusLift = match a.map {
        MapKind::Translation => translation_map(a.alpha, a.beta),
        MapKind::Denjoy => {
            let (d, _) = build_denjoy(a.alpha, GapSchedule::default(), 4096)?;
            product_map(Arc::new(d), rotation(a.beta))
        }
        MapKind::Cantor => {
            let (d1, _) = build_denjoy(a.alpha, GapSchedule::default(), 4096)?;
            let (d2, _) = build_denjoy(a.beta, GapSchedule::default(), 4096)?;
            product_map(Arc::new(d1), Arc::new(d2))
        }
    };
    if a.seeds == 0 {
        return Err(CliError::Usage("--seeds must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let seeds: Vec<Vec2> = (0..a.seeds).map(|_| Vec2::new(rng.gen(), rng.gen())).collect();
    let est = rotation_vector_estimate(&*f, &seeds, a.steps)?;
    println!("{:.12} {:.12}", est.vector.x, est.vector.y);
    println!("spread {}", est.seed_spread);
    println!("cauchy_gap {}", est.cauchy_gap);
    if let Some(p) = a.csv {
        atomic_write(&p, est.to_csv().as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn load_grid(path: &Path) -> Result<OccupancyGrid, CliError> {
    Ok(OccupancyGrid::from_pgm(&read(path)?)?)
}

fn classify(a: ClassifyArgs) -> Result<ExitCode, CliError> {
    let grid = load_grid(&a.input)?;
    let (comps, report) = classify_grid(&grid, a.p_max);
    let csv = report.to_csv();
    match a.csv {
        Some(p) => atomic_write(&p, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    if let Some(p) = a.render {
        atomic_write(&p, &render_domains(&grid, &comps, &report))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn render(a: RenderArgs) -> Result<ExitCode, CliError> {
    let grid = load_grid(&a.input)?;
    let (comps, report) = classify_grid(&grid, a.p_max);
    atomic_write(&a.out, &render_domains(&grid, &comps, &report))?;
    Ok(ExitCode::SUCCESS)
}

fn wedge_check(a: WedgeArgs) -> Result<ExitCode, CliError> {
    if a.radii == 0 || a.angles == 0 || a.widths == 0 {
        return Err(CliError::Usage("wedge grid dimensions must be positive".into()));
    }
    let (rep, control) = wedge_reports(a.alpha, a.beta, (a.radii, a.angles, a.widths))?;
    println!("quadratic: {}/{} hits", rep.hits(), rep.results.len());
    println!("linear_control: {}/{} misses", control.misses(), control.results.len());
    if let Some(p) = a.csv {
        let mut s = String::from("set,r,theta1,theta2,hit\n");
        for (name, r) in [("quadratic", &rep), ("linear_control", &control)] {
            for (w, o) in &r.results {
                let hit = matches!(o, toral_core::blowup::WedgeOutcome::Hit(_)) as u8;
                s.push_str(&format!("{name},{:.3},{:.6},{:.6},{hit}\n", w.r, w.theta1, w.theta2));
            }
        }
        atomic_write(&p, s.as_bytes())?;
    }
    let ok = rep.all_hit() && control.misses() >= 1;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn verify(a: VerifyArgs) -> Result<ExitCode, CliError> {
    let suites = if a.suite == "all" { Suite::all().to_vec() } else { vec![Suite::parse(&a.suite)?] };
    let opts = VerifyOptions { stages: a.stages, seed: a.seed };
    let mut all = true;
    for s in suites {
        let r = run_suite(s, opts)?;
        print!("{}", r.render());
        all &= r.passed();
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
