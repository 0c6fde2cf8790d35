use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hypermatch::constructions::{bound_report, gen_a_family, gen_clique_family, gen_cover_family, gen_hm_family};
use hypermatch::optimize::{
    alpha_exact, check_duality, nu_exact, nu_frac, tau_exact, tau_frac, Budget, ExactOptions, LpMode,
};
use hypermatch::report::{emit, to_json, Format};
use hypermatch::rounding::{default_t, pipeline, NpmStrategy, PipelineOptions};
use hypermatch::shifting::{is_stable, shift_graph, stabilize};
use hypermatch::stability::{
    bound_table, closeness_to_clique, closeness_to_cover, crossover_f, crossover_root, crossover_root_closed_form,
    full_s_range, Search,
};
use hypermatch::verify::{verify_extremal, Constraint, Method, VerifyOptions};
use hypermatch::{io, Error, Hypergraph, VertexSet};

const EXIT_BUDGET: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Extremal matching toolkit for k-uniform hypergraphs")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Wall-clock budget for exponential searches, in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an extremal construction or a random graph as .hg text.
    Gen(GenArgs),
    /// Closed-form edge counts of the extremal constructions.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
    },
    /// Matching, cover and independence numbers.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        what: Quantity,
        /// Arithmetic for the fractional programs.
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
    },
    /// Apply one (i,j)-shift, or stabilize when no pair is given.
    Shift {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, requires = "j")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
        /// Write the shifted graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance to the nearest cover or clique construction.
    Closeness {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long)]
        exhaustive: bool,
    },
    /// The crossover function and, with --n, the finite-n bound table.
    Crossover {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run the rounding pipeline on a 3-graph.
    Round {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        s: usize,
        /// Defaults to max(2, round(n^0.2)).
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        /// Write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search every k-graph on [n] for the largest one under a constraint.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = ConstraintArg::NuLeSAndTauGtS)]
        constraint: ConstraintArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 8)]
        witness_cap: usize,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// Intersection parameter of the A family.
    #[arg(long, default_value_t = 2)]
    i: usize,
    /// Comma-separated vertex set: W for cover, U for clique.
    #[arg(long, value_delimiter = ',')]
    part: Option<Vec<usize>>,
    /// Edge probability of the random family.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cover,
    Clique,
    Hm,
    A,
    Complete,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Nu,
    Tau,
    Alpha,
    NuFrac,
    TauFrac,
    Duality,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Float,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Cover,
    Clique,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Nibble,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstraintArg {
    NuLeS,
    NuLeSAndTauGtS,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Exhaustive,
    Pruned,
}

struct Ctx {
    seed: u64,
    format: Format,
    budget: Budget,
}

/// TSV for result objects without their own table layout: top-level fields
/// as columns, nested values as compact JSON.
fn flat(value: &Value, format: Format) -> String {
    match (format, value) {
        (Format::Tsv, Value::Object(map)) => {
            let cell = |v: &Value| match v {
                Value::String(s) if !s.contains(['\t', '\n']) => s.clone(),
                other => other.to_string(),
            };
            let header: Vec<&str> = map.keys().map(String::as_str).collect();
            let row: Vec<String> = map.values().map(cell).collect();
            format!("{}\n{}\n", header.join("\t"), row.join("\t"))
        }
        _ => serde_json::to_string_pretty(value).expect("json values serialize") + "\n",
    }
}

fn read(path: &PathBuf) -> anyhow::Result<Hypergraph> {
    io::read_file(path).with_context(|| format!("reading {}", path.display()))
}

fn gen(a: &GenArgs, ctx: &Ctx) -> anyhow::Result<String> {
    let part = a.part.clone().map(VertexSet::new);
    let h = match a.family {
        FamilyArg::Cover => gen_cover_family(a.n, a.k, a.s, &part.unwrap_or_else(|| VertexSet::range(1, a.s)))?,
        FamilyArg::Clique => {
            let u = part.unwrap_or_else(|| VertexSet::range(1, a.k * (a.s + 1) - 1));
            gen_clique_family(a.n, a.k, a.s, &u)?
        }
        FamilyArg::Hm => gen_hm_family(a.n, a.k, a.s)?,
        FamilyArg::A => gen_a_family(a.n, a.k, a.s, a.i)?,
        FamilyArg::Complete => Hypergraph::complete(a.n, a.k)?,
        FamilyArg::Random => Hypergraph::random(a.n, a.k, a.p, ctx.seed)?,
    };
    match &a.out {
        Some(path) => {
            io::write_file(&h, path)?;
            Ok(flat(&json!({"n": h.n(), "k": h.k(), "edges": h.edge_count(), "out": path}), ctx.format))
        }
        None => Ok(io::to_hg_string(&h)),
    }
}

fn solve(h: &Hypergraph, what: Quantity, mode: Mode, ctx: &Ctx) -> anyhow::Result<String> {
    let opts = ExactOptions { budget: ctx.budget, ..Default::default() };
    let lp_mode = match mode {
        Mode::Float => LpMode::Float,
        Mode::Rational => LpMode::Rational,
    };
    let value = match what {
        Quantity::Nu => {
            let m = nu_exact(h, &opts)?;
            json!({"quantity": "nu", "value": m.len(), "certificate": m})
        }
        Quantity::Tau => {
            let c = tau_exact(h, &opts)?;
            json!({"quantity": "tau", "value": c.len(), "certificate": c})
        }
        Quantity::Alpha => {
            let a = alpha_exact(h, &opts)?;
            json!({"quantity": "alpha", "value": a.len(), "certificate": a})
        }
        Quantity::NuFrac | Quantity::TauFrac => {
            use num_rational::BigRational;
            let nu = matches!(what, Quantity::NuFrac);
            let report = match (nu, lp_mode) {
                (true, LpMode::Float) => nu_frac::<f64>(h)?.report(h),
                (true, LpMode::Rational) => nu_frac::<BigRational>(h)?.report(h),
                (false, LpMode::Float) => tau_frac::<f64>(h)?.report(h),
                (false, LpMode::Rational) => tau_frac::<BigRational>(h)?.report(h),
            };
            serde_json::to_value(report)?
        }
        Quantity::Duality => serde_json::to_value(check_duality(h, lp_mode)?)?,
    };
    Ok(flat(&value, ctx.format))
}

fn shift(h: &Hypergraph, pair: Option<(usize, usize)>, out: Option<&PathBuf>, ctx: &Ctx) -> anyhow::Result<String> {
    let (g, mut value) = match pair {
        Some((i, j)) => {
            let (g, moved) = shift_graph(h, i, j)?;
            (g, json!({"i": i, "j": j, "moved": moved}))
        }
        None => {
            let (g, trace) = stabilize(h);
            let moved: usize = trace.steps.iter().map(|s| s.moved).sum();
            let v = json!({
                "rounds": trace.rounds,
                "moved": moved,
                "potential_start": trace.potential_start,
                "potential_end": trace.potential_end,
            });
            (g, v)
        }
    };
    value["stable"] = json!(is_stable(&g));
    match out {
        Some(path) => {
            io::write_file(&g, path)?;
            value["out"] = json!(path);
        }
        None => value["graph"] = json!(io::to_hg_string(&g)),
    }
    Ok(flat(&value, ctx.format))
}

fn run(cli: &Cli) -> anyhow::Result<(String, u8)> {
    let ctx = Ctx {
        seed: cli.seed,
        format: match cli.format {
            OutFormat::Json => Format::Json,
            OutFormat::Tsv => Format::Tsv,
        },
        budget: cli.budget_ms.map_or(Budget::unlimited(), Budget::millis),
    };
    let out = match &cli.command {
        Command::Gen(a) => gen(a, &ctx)?,
        Command::Bounds { n, k, s } => emit(&bound_report(*n, *k, *s)?, ctx.format),
        Command::Solve { input, what, mode } => solve(&read(input)?, *what, *mode, &ctx)?,
        Command::Shift { input, i, j, out } => shift(&read(input)?, i.zip(*j), out.as_ref(), &ctx)?,
        Command::Closeness { input, s, target, exhaustive } => {
            let h = read(input)?;
            let search = if *exhaustive { Search::Exhaustive } else { Search::Heuristic };
            let r = match target {
                TargetArg::Cover => closeness_to_cover(&h, *s, search)?,
                TargetArg::Clique => closeness_to_clique(&h, *s, search)?,
            };
            emit(&r, ctx.format)
        }
        Command::Crossover { n: Some(n) } => emit(&bound_table(*n, full_s_range(*n))?, ctx.format),
        Command::Crossover { n: None } => {
            let v = json!({
                "root": crossover_root(),
                "root_closed_form": crossover_root_closed_form(),
                "f_at_5_18": crossover_f(5.0 / 18.0)?,
            });
            flat(&v, ctx.format)
        }
        Command::Round { input, s, t, strategy, eta, report } => {
            let h = read(input)?;
            let mut opts = PipelineOptions { eta: *eta, ..Default::default() };
            opts.npm.strategy = match strategy {
                StrategyArg::Greedy => NpmStrategy::Greedy,
                StrategyArg::Nibble => NpmStrategy::Nibble,
            };
            let t = t.unwrap_or_else(|| default_t(h.n()));
            let r = pipeline(&h, *s, t, ctx.seed, &opts)?;
            if let Some(path) = report {
                std::fs::write(path, to_json(&r)).with_context(|| format!("writing {}", path.display()))?;
            }
            let v = json!({
                "n": r.n,
                "s": r.s,
                "r": r.r,
                "t": r.t,
                "seed": r.seed,
                "matching_size": r.matching.len(),
                "success": r.success,
                "stalled_at": r.stalled_at,
                "matching": r.matching,
            });
            flat(&v, ctx.format)
        }
        Command::Verify { n, k, s, constraint, method, witness_cap } => {
            let opts = VerifyOptions {
                method: match method {
                    MethodArg::Auto => Method::Auto,
                    MethodArg::Exhaustive => Method::Exhaustive,
                    MethodArg::Pruned => Method::Pruned,
                },
                budget: ctx.budget,
                witness_cap: *witness_cap,
            };
            let c = match constraint {
                ConstraintArg::NuLeS => Constraint::NuLeS,
                ConstraintArg::NuLeSAndTauGtS => Constraint::NuLeSAndTauGtS,
            };
            let r = verify_extremal(*n, *k, *s, c, &opts)?;
            let code = if r.bound.is_some() && !r.matches_bound { EXIT_MISMATCH } else { 0 };
            return Ok((emit(&r, ctx.format), code));
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            let budget = matches!(
                err.downcast_ref::<Error>(),
                Some(Error::BudgetExceeded { .. } | Error::TooLarge(_))
            );
            ExitCode::from(if budget { EXIT_BUDGET } else { 1 })
        }
    }
}
