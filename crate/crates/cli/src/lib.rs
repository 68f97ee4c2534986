pub mod args;
pub mod server;
pub mod vectors;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use args::{BenchCommand, Cli, Command, FixtureName};
use swap_planarity::bench::{
    default_thresholds, hull_statistics, summarize_thresholds, threshold_sweep, write_csv, HullConfig,
    SeedSchedule,
};
use swap_planarity::equiv::{swap_equivalent, Verdict};
use swap_planarity::generate::{generate_level, EdgeBudget, GenerationParams, DEFAULT_DELTA};
use swap_planarity::geom::RenderMetrics;
use swap_planarity::puzzle::{fixtures, PuzzleError, PuzzleInstance};
use swap_planarity::solve::{min_swaps_with, SolveOptions};

/// Exit code for input that is not a readable instance file.
pub const EXIT_MALFORMED: u8 = 3;
/// `verify` reports at most this many violations through its exit code.
pub const MAX_VERIFY_EXIT: u8 = 125;

/// A command that could not complete: the message goes to standard error
/// and the code becomes the process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn general(message: impl Into<String>) -> Self {
        Self::new(1, message)
    }
}

type Outcome = Result<u8, Failure>;

/// Runs one command and returns the exit status it asks for.
pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Equiv(a) => equiv(a),
        Command::Bench(BenchCommand::Thresholds(a)) => bench_thresholds(a),
        Command::Bench(BenchCommand::Hull(a)) => bench_hull(a),
        Command::Fixtures(a) => emit_fixture(a),
        Command::Serve(a) => serve(a),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::general(format!("{}: {e}", path.display())))
}

/// Parses an instance without checking invariants. Syntax and schema
/// problems map to [`EXIT_MALFORMED`].
fn read_unchecked(path: &Path) -> Result<PuzzleInstance, Failure> {
    let text = read_text(path)?;
    PuzzleInstance::from_json_unchecked(&text)
        .map_err(|e| Failure::new(EXIT_MALFORMED, format!("{}: {e}", path.display())))
}

fn read_valid(path: &Path) -> Result<PuzzleInstance, Failure> {
    let inst = read_unchecked(path)?;
    let violations = inst.validate();
    if violations.is_empty() {
        Ok(inst)
    } else {
        Err(Failure::general(format!("{}: {}", path.display(), PuzzleError::Invalid(violations))))
    }
}

/// Writes `text` plus a newline to `out`, or to standard output.
fn write_text(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let result = match out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => writeln!(io::stdout().lock(), "{text}"),
    };
    result.map_err(|e| Failure::general(format!("write failed: {e}")))
}

fn csv_sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::general(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Grid units for a separation given as a fraction of the grid side.
pub fn delta_from_fraction(fraction: f64, grid_size: u32) -> i64 {
    (fraction * grid_size as f64).round() as i64
}

pub fn generation_params(a: &args::GenArgs) -> Result<GenerationParams, Failure> {
    let delta = match (a.delta, a.delta_frac) {
        (Some(d), _) => d,
        (None, Some(f)) => delta_from_fraction(f, a.grid_size),
        (None, None) => DEFAULT_DELTA,
    };
    let edges = match (a.m, a.removed) {
        (Some(m), _) => EdgeBudget::Total(m),
        (None, Some(k)) => EdgeBudget::Remove(k),
        (None, None) => EdgeBudget::Total((2 * a.n).saturating_sub(3)),
    };
    let seed = a.seed.unwrap_or_else(rand::random);
    let mut p = GenerationParams::new(a.n, edges, a.swaps, seed);
    let derived = RenderMetrics { rho: delta / 3, lambda: delta / 4, delta };
    p.metrics = RenderMetrics {
        rho: a.rho.unwrap_or(derived.rho),
        lambda: a.lambda.unwrap_or(derived.lambda),
        delta,
    };
    p.flips = a.flips;
    p.grid_size = a.grid_size;
    if let Some(t) = a.threshold {
        p.threshold = t;
    }
    if let Some(r) = a.max_restarts {
        p.max_restarts = r;
    }
    if let Some(r) = a.max_shuffle_rounds {
        p.max_shuffle_rounds = r;
    }
    p.validate().map_err(|e| Failure::general(e.to_string()))?;
    Ok(p)
}

fn gen(a: args::GenArgs) -> Outcome {
    let params = generation_params(&a)?;
    let level = generate_level(&params)
        .map_err(|e| Failure::general(format!("generation failed (seed {}): {e}", params.seed)))?;
    write_text(a.out.as_deref(), &level.instance.to_json())?;
    let inst = &level.instance;
    eprintln!(
        "seed {} n {} m {} s {} crossings {} flips {}/{} restarts {} shuffle rounds {}",
        params.seed,
        inst.vertex_count(),
        inst.edge_count(),
        inst.meta.s,
        inst.crossing_count(),
        level.flips_performed,
        level.flips_requested,
        level.point_stats.restarts,
        level.shuffle_rounds,
    );
    Ok(0)
}

fn solve(a: args::SolveArgs) -> Outcome {
    let inst = read_valid(&a.input)?;
    let mut opts = SolveOptions::new(a.max_depth);
    if let Some(s) = a.max_states {
        opts.max_states = s;
    }
    if let Some(c) = a.solution_cap {
        opts.solution_cap = c;
    }
    let report = min_swaps_with(&inst, &opts).map_err(|e| Failure::general(e.to_string()))?;
    let mut value = serde_json::to_value(&report).expect("report serializes");
    if !a.all {
        value.as_object_mut().expect("report is an object").remove("solutions");
    }
    write_text(None, &value.to_string())?;
    Ok(0)
}

fn verify(a: args::VerifyArgs) -> Outcome {
    let inst = read_unchecked(&a.input)?;
    let violations = inst.validate();
    let report = serde_json::json!({
        "violations": violations,
        "messages": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "crossings": if violations.is_empty() { Some(inst.crossing_count()) } else { None },
    });
    write_text(None, &report.to_string())?;
    Ok(violations.len().min(MAX_VERIFY_EXIT as usize) as u8)
}

fn equiv(a: args::EquivArgs) -> Outcome {
    let first = read_valid(&a.a)?;
    let second = read_valid(&a.b)?;
    let cert = swap_equivalent(&first, &second);
    write_text(None, &serde_json::to_string(&cert).expect("certificate serializes"))?;
    Ok(match cert.verdict {
        Verdict::Equivalent => 0,
        Verdict::NotEquivalent => 1,
        Verdict::Inapplicable => 2,
    })
}

fn bench_thresholds(a: args::ThresholdArgs) -> Outcome {
    let thresholds = if a.thresholds.is_empty() { default_thresholds(a.max_threshold) } else { a.thresholds };
    let schedule = SeedSchedule { base_seed: a.base_seed, ..SeedSchedule::default() };
    let rows = threshold_sweep(&a.n, a.delta, &thresholds, a.seeds, a.max_restarts, schedule);
    let fail = |e: csv::Error| Failure::general(e.to_string());
    write_csv(&rows, csv_sink(a.csv.as_deref())?).map_err(fail)?;
    if let Some(path) = &a.summary {
        write_csv(&summarize_thresholds(&rows), csv_sink(Some(path))?).map_err(fail)?;
    }
    Ok(0)
}

fn bench_hull(a: args::HullArgs) -> Outcome {
    let mut cfg = HullConfig {
        threshold: a.threshold,
        schedule: SeedSchedule { base_seed: a.base_seed, ..SeedSchedule::default() },
        ..HullConfig::default()
    };
    if let Some(r) = a.max_restarts {
        cfg.max_restarts = r;
    }
    let rows = hull_statistics(&a.n, &a.delta, a.instances, &cfg);
    write_csv(&rows, csv_sink(a.csv.as_deref())?).map_err(|e| Failure::general(e.to_string()))?;
    Ok(0)
}

fn emit_fixture(a: args::FixturesArgs) -> Outcome {
    let text = match a.name {
        FixtureName::EightCycle => fixtures::eight_cycle().to_json(),
        FixtureName::BasicConstruction => fixtures::basic_construction().to_json(),
        FixtureName::PredicateVectors => {
            serde_json::to_string(&vectors::predicate_vectors(a.count, a.seed)).expect("vectors serialize")
        }
    };
    write_text(a.out.as_deref(), &text)?;
    Ok(0)
}

fn serve(a: args::ServeArgs) -> Outcome {
    let addr = format!("{}:{}", a.bind, a.port)
        .parse()
        .map_err(|e| Failure::general(format!("bad address {}:{}: {e}", a.bind, a.port)))?;
    if let Some(dir) = &a.levels {
        std::fs::create_dir_all(dir).map_err(|e| Failure::general(format!("{}: {e}", dir.display())))?;
    }
    let config = server::ServerConfig { levels: a.levels, static_dir: a.static_dir };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::general(e.to_string()))?;
    runtime.block_on(server::serve(addr, config)).map_err(|e| Failure::general(e.to_string()))?;
    Ok(0)
}
