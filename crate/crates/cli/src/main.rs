use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use arrowplace::bench::{run_bench, write_csv};
use arrowplace::format::{CandidatesFile, LayoutFile, PlacementFile};
use arrowplace::gadgets::{
    make_clause_gadget_with, make_leg_chain, make_trapezoid_block, make_triangle_block, make_variable_chain,
    ClauseOptions, EStarSampling, GadgetAssembly, LegState, TrapezoidOrientation,
};
use arrowplace::generate::{random_layout, RandomConfig};
use arrowplace::geom::{set_rel_eps, Point};
use arrowplace::model::SolverTag;
use arrowplace::pipeline::{build_layout, run_place, PlaceOptions};
use arrowplace::posgen::RadiusConfig;
use arrowplace::render::{render_svg, RenderOptions};
use arrowplace::solve::SolveConfig;

/// Environment variable holding the default relative tolerance of the
/// overlap predicates.
const EPS_ENV: &str = "ARROWPLACE_EPS";

#[derive(Parser)]
#[command(name = "arrowplace", version, about = "Place arrowheads in straight-line digraph drawings")]
struct Cli {
    /// Seed for every randomized step (generation, greedy tie shuffling).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Relative tolerance of the overlap predicates (overrides ARROWPLACE_EPS).
    #[arg(long, global = true)]
    eps: Option<f64>,

    /// More log output; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Choose one arrow position per edge and write a placement file.
    Place(PlaceArgs),
    /// Draw a layout and a placement as SVG.
    Render(RenderArgs),
    /// Generate layouts.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run solvers over every *.layout file of a directory and write CSV.
    Bench(BenchArgs),
    /// Build a hardness gadget as a layout plus explicit candidates.
    Gadget(GadgetArgs),
}

#[derive(Args)]
struct RadiusArgs {
    /// Fixed arrow radius.
    #[arg(long)]
    r_e: Option<f64>,
    /// Fixed vertex radius.
    #[arg(long)]
    r_v: Option<f64>,
    /// Use point vertices (r_V = 0) unless --r-v is given.
    #[arg(long)]
    point_vertices: bool,
}

impl RadiusArgs {
    fn config(&self) -> RadiusConfig {
        RadiusConfig {
            r_e: self.r_e,
            r_v: self.r_v,
            rv_equals_re: !self.point_vertices,
            ..RadiusConfig::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Weight divisor of the rank term (default |E| * max |A_e|).
    #[arg(long)]
    m: Option<f64>,
    /// Stop the exact search after this many seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Stop the exact search after this many search nodes.
    #[arg(long)]
    node_limit: Option<u64>,
}

impl SolveArgs {
    fn config(&self, seed: Option<u64>) -> Result<SolveConfig> {
        if let Some(m) = self.m {
            if !(m.is_finite() && m > 0.0) {
                bail!("--m must be positive, got {m}");
            }
        }
        let time_limit = match self.time_limit {
            Some(t) if !(t.is_finite() && t >= 0.0) => bail!("--time-limit must be >= 0, got {t}"),
            t => t.map(Duration::from_secs_f64),
        };
        Ok(SolveConfig {
            m: self.m,
            time_limit,
            node_limit: self.node_limit,
            seed,
        })
    }
}

#[derive(Args)]
struct PlaceArgs {
    layout: PathBuf,
    #[arg(long, default_value = "exact", value_parser = parse_solver)]
    solver: SolverTag,
    /// Explicit candidate positions instead of generated ones.
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// Output placement file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    radius: RadiusArgs,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct RenderArgs {
    layout: PathBuf,
    placement: PathBuf,
    /// Output SVG file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Candidate file to draw with --show-candidates.
    #[arg(long)]
    candidates: Option<PathBuf>,
    /// Draw all candidate positions (generated ones unless --candidates).
    #[arg(long)]
    show_candidates: bool,
    /// Mark overlapping arrow pairs.
    #[arg(long)]
    show_conflicts: bool,
    #[command(flatten)]
    radius: RadiusArgs,
}

#[derive(Subcommand)]
enum GenKind {
    /// Uniform random points and edges.
    Random(RandomArgs),
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.5)]
    density: f64,
    #[arg(long, default_value_t = 10.0)]
    min_sep: f64,
    /// Output layout file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    dir: PathBuf,
    /// Comma-separated solvers.
    #[arg(long, value_delimiter = ',', value_parser = parse_solver,
          default_value = "exact,heur-global,heur-local,editor")]
    solvers: Vec<SolverTag>,
    /// Output CSV (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    radius: RadiusArgs,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetKind {
    Triangle,
    Trapezoid,
    Variable,
    Leg,
    Clause,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Args)]
struct GadgetArgs {
    kind: GadgetKind,
    /// Blocks in a variable chain or trapezoids in a leg.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 10.0)]
    r_e: f64,
    /// Upside-down triangle.
    #[arg(long)]
    flip: bool,
    /// Side of the trapezoid's diagonal.
    #[arg(long, value_enum, default_value = "left")]
    orientation: Side,
    /// Literal polarities of a clause, e.g. `p,n,p` (n = negated).
    #[arg(long, value_delimiter = ',', default_value = "p,p,p")]
    literals: Vec<String>,
    /// Pin clause legs, e.g. `d,d,d` (s = solid, d = dashed, f = free).
    #[arg(long, value_delimiter = ',', value_parser = parse_leg)]
    legs: Option<Vec<LegState>>,
    /// Leave out the variable chains under the clause legs.
    #[arg(long)]
    no_variables: bool,
    /// Sample e* at this many evenly spaced points instead of every r_E/4.
    #[arg(long)]
    dense: Option<usize>,
    /// Output layout file.
    #[arg(short, long)]
    output: PathBuf,
    /// Output candidates file (default: the layout path with extension
    /// `.candidates`).
    #[arg(long)]
    candidates: Option<PathBuf>,
}

fn parse_solver(s: &str) -> std::result::Result<SolverTag, String> {
    s.parse()
}

fn parse_leg(s: &str) -> std::result::Result<LegState, String> {
    s.parse()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_layout(path: &Path) -> Result<LayoutFile> {
    LayoutFile::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Outcome of a command that ran to completion.
enum Done {
    Ok,
    LimitHit,
}

/// Reads a candidates file. Its stamped tolerance applies unless one was
/// given on the command line or in the environment.
fn read_candidates(path: &Path, file: &LayoutFile, eps_given: bool) -> Result<arrowplace::model::CandidateSet> {
    let cf = CandidatesFile::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    if let (Some(e), false) = (cf.eps, eps_given) {
        log::info!("using tolerance {e} from {}", path.display());
        set_rel_eps(e);
    }
    Ok(cf.to_set(file)?)
}

fn place(args: &PlaceArgs, seed: Option<u64>, eps_given: bool) -> Result<Done> {
    let file = read_layout(&args.layout)?;
    let candidates = match &args.candidates {
        Some(p) => Some(read_candidates(p, &file, eps_given)?),
        None => None,
    };
    let opts = PlaceOptions {
        solver: args.solver,
        radius: args.radius.config(),
        solve: args.solve.config(seed)?,
        candidates,
    };
    let outcome = run_place(&file, &opts)?;
    write_out(args.output.as_deref(), &outcome.to_file(&file).to_text())?;
    if outcome.hit_limit() {
        log::warn!("search limit reached; placement is not proven optimal");
        return Ok(Done::LimitHit);
    }
    Ok(Done::Ok)
}

fn render(args: &RenderArgs, eps_given: bool) -> Result<Done> {
    let file = read_layout(&args.layout)?;
    let pf = PlacementFile::parse(&read(&args.placement)?)
        .with_context(|| format!("in {}", args.placement.display()))?;
    let explicit = match &args.candidates {
        Some(p) => Some(read_candidates(p, &file, eps_given)?),
        None => None,
    };
    let mut radius = args.radius.config();
    radius.r_e = radius.r_e.or(Some(pf.r_e));
    let opts = PlaceOptions {
        radius,
        candidates: explicit.clone(),
        ..PlaceOptions::new(pf.solver)
    };
    let layout = build_layout(&file, &opts)?;
    let placement = pf.to_placement(&file)?;
    let shown = match (args.show_candidates, explicit) {
        (false, _) => None,
        (true, Some(cs)) => Some(cs),
        (true, None) => Some(arrowplace::posgen::generate_candidates(&layout)),
    };
    let svg = render_svg(
        &layout,
        &placement,
        &RenderOptions {
            candidates: shown.as_ref(),
            highlight_overlaps: args.show_conflicts,
        },
    )?;
    write_out(args.output.as_deref(), &svg)?;
    Ok(Done::Ok)
}

fn gen_random(args: &RandomArgs, seed: Option<u64>) -> Result<Done> {
    let cfg = RandomConfig {
        min_sep: args.min_sep,
        ..RandomConfig::new(args.n, args.density, seed.unwrap_or(0))
    };
    let out = random_layout(&cfg)?;
    if let Some(w) = &out.warning {
        log::warn!("{w}");
        eprintln!("warning: {w}");
    }
    let text = LayoutFile::from_parts(&out.graph, &out.pos, None).to_text();
    write_out(args.output.as_deref(), &text)?;
    Ok(Done::Ok)
}

fn bench(args: &BenchArgs, seed: Option<u64>) -> Result<Done> {
    let rows = run_bench(&args.dir, &args.solvers, &args.radius.config(), &args.solve.config(seed)?)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    write_out(args.output.as_deref(), std::str::from_utf8(&buf)?)?;
    Ok(Done::Ok)
}

fn build_gadget(args: &GadgetArgs) -> Result<GadgetAssembly> {
    let origin = Point::new(0.0, 0.0);
    let g = match args.kind {
        GadgetKind::Triangle => make_triangle_block(origin, args.flip, args.r_e)?,
        GadgetKind::Trapezoid => {
            let o = match args.orientation {
                Side::Left => TrapezoidOrientation::QLeft,
                Side::Right => TrapezoidOrientation::QRight,
            };
            make_trapezoid_block(o, origin, args.r_e)?
        }
        GadgetKind::Variable => make_variable_chain(args.k.unwrap_or(5), origin, args.r_e)?,
        GadgetKind::Leg => make_leg_chain(args.k.unwrap_or(3), origin, args.r_e)?,
        GadgetKind::Clause => {
            if args.literals.len() != 3 {
                bail!("--literals needs three entries, got {}", args.literals.len());
            }
            let mut negated = [false; 3];
            for (n, lit) in negated.iter_mut().zip(&args.literals) {
                *n = match lit.as_str() {
                    "p" | "plain" => false,
                    "n" | "neg" | "negated" => true,
                    other => bail!("unknown literal polarity '{other}' (expected p or n)"),
                };
            }
            let opts = ClauseOptions {
                negated,
                legs_k: args.k.unwrap_or(3),
                e_star: args.dense.map_or(EStarSampling::Step(0.25), EStarSampling::Dense),
                with_variables: !args.no_variables,
                ..ClauseOptions::default()
            };
            make_clause_gadget_with(&opts, args.r_e)?
        }
    };
    match (&args.legs, args.kind) {
        (None, _) => Ok(g),
        (Some(states), GadgetKind::Clause) => {
            let fixed = g.leg_fixings(states)?;
            Ok(g.restricted(&fixed)?)
        }
        (Some(_), _) => bail!("--legs only applies to clause gadgets"),
    }
}

fn gadget(args: &GadgetArgs) -> Result<Done> {
    let g = build_gadget(args)?;
    let (layout, cands) = CandidatesFile::from_gadget(&g);
    let cand_path = args
        .candidates
        .clone()
        .unwrap_or_else(|| args.output.with_extension("candidates"));
    write_out(Some(&args.output), &layout.to_text())?;
    write_out(Some(&cand_path), &cands.to_text())?;
    Ok(Done::Ok)
}

fn run(cli: &Cli) -> Result<Done> {
    let eps = match (cli.eps, std::env::var(EPS_ENV)) {
        (Some(e), _) => Some(e),
        (None, Ok(v)) => Some(v.trim().parse().with_context(|| format!("{EPS_ENV}='{v}' is not a number"))?),
        (None, Err(_)) => None,
    };
    if let Some(e) = eps {
        if !(e.is_finite() && e >= 0.0) {
            bail!("tolerance must be a finite number >= 0, got {e}");
        }
        set_rel_eps(e);
    }
    match &cli.command {
        Command::Place(a) => place(a, cli.seed, eps.is_some()),
        Command::Render(a) => render(a, eps.is_some()),
        Command::Gen { kind: GenKind::Random(a) } => gen_random(a, cli.seed),
        Command::Bench(a) => bench(a, cli.seed),
        Command::Gadget(a) => gadget(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::LimitHit) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
