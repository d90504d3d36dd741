use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use qubopress::bounds::BoundMethod;
use qubopress::compress::{compress, CompressionConfig, HeuristicChoice, Selection};
use qubopress::enumerate::{brute_force_minima_with_limit, optimum_included, spectral_gap_with_limit};
use qubopress::experiments::{
    run_compress_experiment, run_noise_experiment, run_rounding_experiment, CompressExperimentConfig, NoiseConfig,
    ProblemFamily, RoundingConfig,
};
use qubopress::generators::{gen_binclustering, gen_subsetsum, gen_uniform, subsetsum_to_qubo};
use qubopress::io::{read_qubo, to_json, to_text, Format};
use qubopress::metrics::{
    dr_ratio, induced_ranking, kendall_tau, unique_weight_ratio, weight_ordering_distance, MAX_RANKING_N,
};
use qubopress::qubo::{bitstring, mask_to_bits, QuboInstance};
use qubopress::range::diff_stats;
use qubopress::{QuboError, Result};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qubopress", version, about = "Dynamic-range compression for QUBO instances")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for reports and traces.
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// TOML file with defaults; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size and dynamic-range statistics of an instance.
    Info { file: PathBuf },
    /// Exact minimum and all minimizers by enumeration.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = qubopress::enumerate::DEFAULT_ENUMERATION_LIMIT)]
        limit: usize,
    },
    /// Reduce the dynamic range while preserving an optimum.
    Compress(CompressArgs),
    /// Spectral gap and the safe scaling factor.
    SpectralGap {
        file: PathBuf,
        #[arg(long, default_value_t = qubopress::enumerate::DEFAULT_ENUMERATION_LIMIT)]
        limit: usize,
    },
    /// Generate an instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run an experiment pipeline.
    #[command(subcommand)]
    Exp(ExpCommand),
    /// Compare a modified instance with its original.
    Metrics { modified: PathBuf, original: PathBuf },
}

#[derive(Args, Debug)]
struct CompressArgs {
    file: PathBuf,
    #[arg(short = 'H', long)]
    heuristic: Option<HeuristicChoice>,
    #[arg(short = 'S', long)]
    selection: Option<Selection>,
    #[arg(short = 'i', long)]
    iterations: Option<usize>,
    #[arg(short = 'b', long)]
    bound_method: Option<BoundMethod>,
    /// Trace file, JSON lines or CSV depending on --format.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    Subsetsum {
        #[arg(short, long, default_value_t = 14)]
        n: usize,
        /// Also write the values, target and planted subset as JSON.
        #[arg(long)]
        problem: Option<PathBuf>,
    },
    Binclust {
        /// Also write the point set as CSV.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    Uniform {
        #[arg(short, long, default_value_t = 10)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExpCommand {
    Rounding {
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        min_bits: Option<u32>,
        #[arg(long)]
        max_bits: Option<u32>,
    },
    Compress {
        /// Comma-separated sizes.
        #[arg(short, long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long)]
        instances: Option<usize>,
        #[arg(short, long)]
        iterations: Option<usize>,
        #[arg(short = 'H', long, value_delimiter = ',')]
        heuristics: Option<Vec<HeuristicChoice>>,
        #[arg(short = 'S', long, value_delimiter = ',')]
        selections: Option<Vec<Selection>>,
        #[arg(short = 'b', long)]
        bound_method: Option<BoundMethod>,
    },
    Noise {
        #[arg(long)]
        family: Option<ProblemFamily>,
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(short, long)]
        iterations: Option<usize>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        reads: Option<usize>,
        #[arg(long)]
        sweeps: Option<usize>,
        #[arg(long)]
        noise_seed: Option<u64>,
    },
}

/// Contents of the `--config` file. Every table is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    format: Option<String>,
    compress: Option<CompressionConfig>,
    rounding: Option<RoundingConfig>,
    exp_compress: Option<CompressExperimentConfig>,
    noise: Option<NoiseConfig>,
}

struct Context {
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<OutFormat>,
    file: ConfigFile,
}

impl Context {
    fn seed(&self) -> u64 {
        self.seed.or(self.file.seed).unwrap_or(0)
    }

    fn format(&self, default: OutFormat) -> OutFormat {
        self.format.unwrap_or(match self.file.format.as_deref() {
            Some("json") => OutFormat::Json,
            Some("csv") => OutFormat::Csv,
            _ => default,
        })
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        open_writer(self.out.as_deref())
    }
}

fn open_writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| QuboError::io(p, e))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json(ctx: &Context, value: &serde_json::Value) -> Result<()> {
    let mut w = ctx.writer()?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| QuboError::io("<output>", e))
}

fn write_instance(q: &QuboInstance, path: Option<&Path>) -> Result<()> {
    let text = match path {
        Some(p) if Format::from_path(p) == Format::Json => to_json(q),
        _ => to_text(q),
    };
    let mut w = open_writer(path)?;
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| QuboError::io("<output>", e))
}

fn cmd_info(ctx: &Context, file: &Path) -> Result<()> {
    let q = read_qubo(file)?;
    let s = diff_stats(&q);
    emit_json(
        ctx,
        &json!({
            "n": q.n(),
            "min_diff": s.min_diff,
            "max_diff": s.max_diff,
            "dr_bits": s.dr_bits,
            "distinct_values": s.distinct_count(),
            "degenerate": s.degenerate,
        }),
    )
}

fn cmd_solve(ctx: &Context, file: &Path, limit: usize) -> Result<()> {
    let q = read_qubo(file)?;
    let r = brute_force_minima_with_limit(&q, limit)?;
    let minimizers: Vec<String> = r.minimizers.iter().map(|&m| bitstring(&mask_to_bits(m, q.n()))).collect();
    emit_json(ctx, &json!({ "n": q.n(), "min_value": r.min_value, "minimizers": minimizers }))
}

fn cmd_spectral_gap(ctx: &Context, file: &Path, limit: usize) -> Result<()> {
    let q = read_qubo(file)?;
    let g = spectral_gap_with_limit(&q, limit)?;
    emit_json(ctx, &serde_json::to_value(g)?)
}

fn cmd_compress(ctx: &Context, a: &CompressArgs) -> Result<()> {
    let mut cfg = ctx.file.compress.clone().unwrap_or_default();
    if ctx.seed.is_some() || ctx.file.seed.is_some() {
        cfg.rng_seed = ctx.seed();
    }
    cfg.heuristic = a.heuristic.unwrap_or(cfg.heuristic);
    cfg.selection = a.selection.unwrap_or(cfg.selection);
    cfg.max_iterations = a.iterations.unwrap_or(cfg.max_iterations);
    cfg.bound_method = a.bound_method.unwrap_or(cfg.bound_method);
    cfg.validate()?;
    let q = read_qubo(&a.file)?;
    let (qc, trace) = compress(&q, &cfg)?;
    write_instance(&qc, ctx.out.as_deref())?;
    if let Some(path) = &a.trace {
        let w = open_writer(Some(path))?;
        match ctx.format(OutFormat::Json) {
            OutFormat::Json => trace.write_jsonl(w)?,
            OutFormat::Csv => trace.write_csv(w)?,
        }
    }
    let summary = json!({
        "initial_dr": trace.initial_dr,
        "final_dr": trace.final_dr,
        "iterations": trace.iterations(),
        "applied": trace.applied(),
        "skipped": trace.skipped(),
    });
    // Keep standard output clean when the instance is written there.
    if ctx.out.is_some() {
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_gen(ctx: &Context, g: &GenCommand) -> Result<()> {
    let seed = ctx.seed();
    match g {
        GenCommand::Subsetsum { n, problem } => {
            let p = gen_subsetsum(*n, seed)?;
            write_instance(&subsetsum_to_qubo(&p)?, ctx.out.as_deref())?;
            if let Some(path) = problem {
                let mut w = open_writer(Some(path))?;
                serde_json::to_writer_pretty(&mut w, &p)?;
                w.flush().map_err(|e| QuboError::io(path, e))?;
            }
        }
        GenCommand::Binclust { points } => {
            let (data, q) = gen_binclustering(seed)?;
            write_instance(&q, ctx.out.as_deref())?;
            if let Some(path) = points {
                data.write_csv(open_writer(Some(path))?)?;
            }
        }
        GenCommand::Uniform { n } => write_instance(&gen_uniform(*n, seed)?, ctx.out.as_deref())?,
    }
    Ok(())
}

fn cmd_exp(ctx: &Context, e: &ExpCommand) -> Result<()> {
    let json_out = ctx.format(OutFormat::Csv) == OutFormat::Json;
    match e {
        ExpCommand::Rounding { n, instances, bins, min_bits, max_bits } => {
            let mut cfg = ctx.file.rounding.clone().unwrap_or_default();
            cfg.seed = ctx.seed.or(ctx.file.seed).unwrap_or(cfg.seed);
            cfg.n = n.unwrap_or(cfg.n);
            cfg.instances = instances.unwrap_or(cfg.instances);
            cfg.bins = bins.unwrap_or(cfg.bins);
            cfg.min_bits = min_bits.unwrap_or(cfg.min_bits);
            cfg.max_bits = max_bits.unwrap_or(cfg.max_bits);
            let rep = run_rounding_experiment(&cfg)?;
            if json_out {
                emit_json(ctx, &serde_json::to_value(&rep)?)
            } else {
                rep.write_csv(ctx.writer()?)
            }
        }
        ExpCommand::Compress { n, instances, iterations, heuristics, selections, bound_method } => {
            let mut cfg = ctx.file.exp_compress.clone().unwrap_or_default();
            cfg.seed = ctx.seed.or(ctx.file.seed).unwrap_or(cfg.seed);
            cfg.ns = n.clone().unwrap_or(cfg.ns);
            cfg.instances = instances.unwrap_or(cfg.instances);
            cfg.iterations = iterations.unwrap_or(cfg.iterations);
            cfg.heuristics = heuristics.clone().unwrap_or(cfg.heuristics);
            cfg.selections = selections.clone().unwrap_or(cfg.selections);
            cfg.bound_method = bound_method.unwrap_or(cfg.bound_method);
            let exp = run_compress_experiment(&cfg)?;
            if json_out {
                emit_json(ctx, &serde_json::to_value(&exp)?)
            } else {
                exp.write_csv(ctx.writer()?)
            }
        }
        ExpCommand::Noise { family, n, iterations, sigma, reads, sweeps, noise_seed } => {
            let mut cfg = ctx.file.noise.clone().unwrap_or_default();
            cfg.seed = ctx.seed.or(ctx.file.seed).unwrap_or(cfg.seed);
            cfg.noise_seed = noise_seed.unwrap_or(if ctx.file.noise.is_some() { cfg.noise_seed } else { cfg.seed });
            cfg.family = family.unwrap_or(cfg.family);
            cfg.n = n.unwrap_or(cfg.n);
            cfg.iterations = iterations.unwrap_or(cfg.iterations);
            cfg.sigma = sigma.unwrap_or(cfg.sigma);
            cfg.reads = reads.unwrap_or(cfg.reads);
            cfg.sweeps = sweeps.unwrap_or(cfg.sweeps);
            let rep = run_noise_experiment(&cfg)?;
            eprintln!(
                "{}",
                json!({
                    "initial_dr": rep.initial_dr,
                    "compressed_dr": rep.compressed_dr,
                    "original_hits": rep.original_hits,
                    "compressed_hits": rep.compressed_hits,
                    "prevalence_ratio": rep.prevalence_ratio(),
                })
            );
            if json_out {
                emit_json(ctx, &serde_json::to_value(&rep)?)
            } else {
                rep.write_csv(ctx.writer()?)
            }
        }
    }
}

fn cmd_metrics(ctx: &Context, modified: &Path, original: &Path) -> Result<()> {
    let q = read_qubo(modified)?;
    let q0 = read_qubo(original)?;
    if q.n() != q0.n() {
        return Err(QuboError::DimensionMismatch { expected: q0.n(), got: q.n() });
    }
    let kendall =
        if q.n() <= MAX_RANKING_N { Some(kendall_tau(&induced_ranking(&q0)?, &induced_ranking(&q)?)?) } else { None };
    let included = match optimum_included(&q, &q0) {
        Ok(b) => Some(b),
        Err(QuboError::EnumerationLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    emit_json(
        ctx,
        &json!({
            "dr_bits": diff_stats(&q).dr_bits,
            "original_dr_bits": diff_stats(&q0).dr_bits,
            "dr_ratio": dr_ratio(&q, &q0).ok(),
            "kendall_tau": kendall,
            "weight_ordering_distance": weight_ordering_distance(&q0, &q)?,
            "unique_weight_ratio": unique_weight_ratio(&q, &q0).ok(),
            "optimum_included": included,
        }),
    )
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| QuboError::io(path, e))?;
            toml::from_str(&text).map_err(|e| QuboError::InvalidArgument(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let ctx = Context { seed: cli.seed, out: cli.out, format: cli.format, file };
    match &cli.command {
        Command::Info { file } => cmd_info(&ctx, file),
        Command::Solve { file, limit } => cmd_solve(&ctx, file, *limit),
        Command::Compress(a) => cmd_compress(&ctx, a),
        Command::SpectralGap { file, limit } => cmd_spectral_gap(&ctx, file, *limit),
        Command::Gen(g) => cmd_gen(&ctx, g),
        Command::Exp(e) => cmd_exp(&ctx, e),
        Command::Metrics { modified, original } => cmd_metrics(&ctx, modified, original),
    }
}

fn exit_code(e: &QuboError) -> u8 {
    match e {
        QuboError::EnumerationLimit { .. } => EXIT_LIMIT,
        QuboError::InvalidArgument(_) | QuboError::InvalidScale(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
