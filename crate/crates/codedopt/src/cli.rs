//! Command-line interface: experiment runs with CSV trace output, code
//! construction inspection, encode/decode scratchpads, and stop-time
//! simulation.
//!
//! Errors are reported as a single `error: ...` line on stderr with a
//! nonzero exit code, so scripts can parse failures reliably.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::CodeConfig;
use crate::codec::{decode, encode_scalar_block, ErasedOutputs};
use crate::config::{ExperimentConfig, RawConfig, RuntimeSpec, StoppingSpec};
use crate::optimizer::{run_experiment, IterationTrace};
use crate::sim::{run_iteration, ArrivalSchedule};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "codedopt",
    version,
    about = "Straggler-resilient distributed black-box optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment and write its CSV trace.
    Run(Box<RunArgs>),
    /// Print the channel construction for a code (reliabilities, frozen set).
    Construct(ConstructArgs),
    /// Encode information values into per-worker outputs.
    EncodeDebug(EncodeDebugArgs),
    /// Decode worker outputs (with erasures) back to information values.
    DecodeDebug(DecodeDebugArgs),
    /// Sample arrival schedules and report stop-time statistics.
    SimulateTiming(SimulateTimingArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Flat `key = value` config file; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Objective: l1, l2sq, attack_targeted, attack_untargeted.
    #[arg(long)]
    objective: Option<String>,
    /// Gradient method: fd, es, coded, hybrid.
    #[arg(long)]
    method: Option<String>,
    /// Parameter dimension (defaults to the objective's dimension).
    #[arg(long)]
    d: Option<usize>,
    /// Worker count; a power of two (defaults to the first one above d).
    #[arg(long = "N")]
    n: Option<usize>,
    /// Design erasure probability for channel selection.
    #[arg(long, visible_alias = "epsilon")]
    design_erasure: Option<f64>,
    /// Perturbation step used by the workers' symmetric probes.
    #[arg(long)]
    delta: Option<f64>,
    /// Update rule: gd or adam.
    #[arg(long)]
    optimizer: Option<String>,
    /// Learning rate (defaults: 0.5 for gd, 0.01 for adam).
    #[arg(long)]
    step_size: Option<f64>,
    /// First-moment decay for adam.
    #[arg(long)]
    adam_beta1: Option<f64>,
    /// Second-moment decay for adam.
    #[arg(long)]
    adam_beta2: Option<f64>,
    /// Denominator guard for adam.
    #[arg(long)]
    adam_epsilon: Option<f64>,
    /// all, first_k:K, or first_decodable.
    #[arg(long)]
    stopping_rule: Option<String>,
    /// shifted_exp:SHIFT:RATE or empirical:PATH.
    #[arg(long)]
    runtime_dist: Option<String>,
    /// Simulated seconds charged per decode.
    #[arg(long)]
    decode_cost: Option<f64>,
    /// Redraw direction signs each iteration (true/false).
    #[arg(long)]
    resample_directions: Option<bool>,
    /// Number of optimization iterations.
    #[arg(long)]
    iterations: Option<usize>,
    /// Base seed for direction signs and worker runtimes.
    #[arg(long)]
    seed: Option<u64>,
    /// Trace CSV destination.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Design matrix CSV (l1/l2sq; defaults to the bundled benchmark).
    #[arg(long)]
    a_csv: Option<PathBuf>,
    /// Target vector CSV (l1/l2sq; defaults to the bundled benchmark).
    #[arg(long)]
    b_csv: Option<PathBuf>,
    /// Start point CSV (defaults to zeros, or the bundled attack start).
    #[arg(long)]
    theta0_csv: Option<PathBuf>,
    #[arg(long)]
    classifier_w1_csv: Option<PathBuf>,
    #[arg(long)]
    classifier_c1_csv: Option<PathBuf>,
    #[arg(long)]
    classifier_w2_csv: Option<PathBuf>,
    #[arg(long)]
    classifier_c2_csv: Option<PathBuf>,
    /// Weight of the classification hinge in attack objectives.
    #[arg(long)]
    attack_c: Option<f64>,
    /// Hinge saturation margin in attack objectives.
    #[arg(long)]
    attack_kappa: Option<f64>,
    /// Target class (attack_targeted; defaults to the runner-up class).
    #[arg(long)]
    attack_target: Option<usize>,
    /// Class to escape (attack_untargeted; defaults to the current class).
    #[arg(long)]
    attack_original: Option<usize>,
    /// Use raw probabilities for competitor classes in the targeted hinge.
    #[arg(long)]
    attack_mixed_hinge: Option<bool>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Number of information channels (parameter dimension).
    #[arg(long)]
    d: usize,
    /// Worker count; a power of two.
    #[arg(long = "N")]
    n: usize,
    /// Design erasure probability.
    #[arg(long, visible_alias = "epsilon", default_value_t = 0.5)]
    design_erasure: f64,
}

#[derive(Args, Debug)]
struct EncodeDebugArgs {
    #[arg(long)]
    d: usize,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, visible_alias = "epsilon", default_value_t = 0.5)]
    design_erasure: f64,
    /// Comma-separated information values, one per information channel.
    #[arg(long)]
    values: String,
    /// Optional comma-separated ±1 signs applied to the values.
    #[arg(long)]
    signs: Option<String>,
}

#[derive(Args, Debug)]
struct DecodeDebugArgs {
    #[arg(long)]
    d: usize,
    #[arg(long = "N")]
    n: usize,
    #[arg(long, visible_alias = "epsilon", default_value_t = 0.5)]
    design_erasure: f64,
    /// Comma-separated worker outputs; leave an entry empty (or write x)
    /// for an erased output, e.g. "4,,2,x".
    #[arg(long)]
    outputs: String,
}

#[derive(Args, Debug)]
struct SimulateTimingArgs {
    /// Worker count; a power of two.
    #[arg(long = "N")]
    n: usize,
    /// Information channels for the first_decodable rule (default n/2).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, visible_alias = "epsilon", default_value_t = 0.5)]
    design_erasure: f64,
    /// shifted_exp:SHIFT:RATE or empirical:PATH.
    #[arg(long, default_value = "shifted_exp:1:0.5")]
    dist: String,
    /// all, first_k:K, or first_decodable.
    #[arg(long, default_value = "first_decodable")]
    rule: String,
    /// Number of independent schedules to sample.
    #[arg(long, default_value_t = 1000)]
    schedules: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: {first}");
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Run(args) => cmd_run(*args),
        Command::Construct(args) => cmd_construct(args),
        Command::EncodeDebug(args) => cmd_encode_debug(args),
        Command::DecodeDebug(args) => cmd_decode_debug(args),
        Command::SimulateTiming(args) => cmd_simulate_timing(args),
    }
}

fn raw_from_flags(args: &RunArgs) -> Result<RawConfig> {
    let mut raw = RawConfig::default();
    // String-valued flags reuse the config parser for identical messages.
    if let Some(v) = &args.objective {
        raw.set("objective", v)?;
    }
    if let Some(v) = &args.method {
        raw.set("method", v)?;
    }
    if let Some(v) = &args.optimizer {
        raw.set("optimizer", v)?;
    }
    if let Some(v) = &args.stopping_rule {
        raw.set("stopping_rule", v)?;
    }
    if let Some(v) = &args.runtime_dist {
        raw.set("runtime_dist", v)?;
    }
    raw.d = args.d;
    raw.n = args.n;
    raw.design_erasure = args.design_erasure;
    raw.delta = args.delta;
    raw.step_size = args.step_size;
    raw.adam_beta1 = args.adam_beta1;
    raw.adam_beta2 = args.adam_beta2;
    raw.adam_epsilon = args.adam_epsilon;
    raw.decode_cost = args.decode_cost;
    raw.resample_directions = args.resample_directions;
    raw.iterations = args.iterations;
    raw.seed = args.seed;
    raw.output = args.output.clone();
    raw.a_csv = args.a_csv.clone();
    raw.b_csv = args.b_csv.clone();
    raw.theta0_csv = args.theta0_csv.clone();
    raw.classifier_w1_csv = args.classifier_w1_csv.clone();
    raw.classifier_c1_csv = args.classifier_c1_csv.clone();
    raw.classifier_w2_csv = args.classifier_w2_csv.clone();
    raw.classifier_c2_csv = args.classifier_c2_csv.clone();
    raw.attack_c = args.attack_c;
    raw.attack_kappa = args.attack_kappa;
    raw.attack_target = args.attack_target;
    raw.attack_original = args.attack_original;
    raw.attack_mixed_hinge = args.attack_mixed_hinge;
    Ok(raw)
}

/// Renders the trace CSV: the resolved config echoed as `# key = value`
/// comment lines, the column header, then one row per iteration. Floats
/// carry 12 significant digits; line endings are LF.
pub fn render_trace(config: &ExperimentConfig, traces: &[IterationTrace]) -> String {
    let mut out = String::new();
    for line in config.echo().lines() {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("iteration,cost,elapsed_time,n_outputs_used,decoded,method,delta,seed\n");
    for t in traces {
        let _ = writeln!(
            out,
            "{},{:.11e},{:.11e},{},{},{},{:.11e},{}",
            t.iteration,
            t.cost,
            t.elapsed_time,
            t.n_outputs_used,
            t.decoded,
            t.method.name(),
            t.delta,
            t.seed
        );
    }
    out
}

fn cmd_run(args: RunArgs) -> Result<String> {
    let file_raw = match &args.config {
        Some(path) => RawConfig::parse_file(path)?,
        None => RawConfig::default(),
    };
    let config = file_raw.merged_with(&raw_from_flags(&args)?).resolve()?;
    let objective = config.build_objective()?;
    let opts = config.build_run_options()?;
    let outcome = run_experiment(objective.as_ref(), &opts)?;
    if let Some(parent) = config.output.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(&config.output, render_trace(&config, &outcome.traces))?;
    let last = outcome.traces.last().expect("iterations >= 1");
    Ok(format!(
        "wrote {} ({} iterations, final cost {}, simulated time {})\n",
        config.output.display(),
        outcome.traces.len(),
        last.cost,
        last.elapsed_time
    ))
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for (i, v) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out
}

fn cmd_construct(args: ConstructArgs) -> Result<String> {
    let code = CodeConfig::new(args.d, args.n, args.design_erasure)?;
    let mut out = String::new();
    let _ = writeln!(out, "n_params = {}", code.n_params);
    let _ = writeln!(out, "n_total = {}", code.n_total);
    let _ = writeln!(out, "design_erasure = {}", code.design_erasure);
    let _ = writeln!(out, "rate = {}", code.rate());
    let _ = writeln!(out, "levels = {}", code.levels());
    let _ = writeln!(out, "frozen_channels = {}", join(&code.frozen_set));
    let _ = writeln!(out, "info_channels = {}", join(&code.info_channels));
    let _ = writeln!(out, "z = {}", join(&code.z_values));
    Ok(out)
}

fn parse_float_list(flag: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            let v = v.trim();
            v.parse()
                .map_err(|_| Error::Config(format!("{flag}: invalid float `{v}`")))
        })
        .collect()
}

fn cmd_encode_debug(args: EncodeDebugArgs) -> Result<String> {
    let code = CodeConfig::new(args.d, args.n, args.design_erasure)?;
    let values = parse_float_list("--values", &args.values)?;
    if values.len() != code.n_params {
        return Err(Error::Config(format!(
            "--values expects {} entries (one per information channel), got {}",
            code.n_params,
            values.len()
        )));
    }
    let signs = match &args.signs {
        Some(text) => {
            let signs = parse_float_list("--signs", text)?;
            if signs.len() != code.n_params {
                return Err(Error::Config(format!(
                    "--signs expects {} entries, got {}",
                    code.n_params,
                    signs.len()
                )));
            }
            signs
        }
        None => vec![1.0; code.n_params],
    };
    let mut block = vec![0.0; code.n_total];
    for (j, (&ch, (&v, &s))) in code
        .info_channels
        .iter()
        .zip(values.iter().zip(&signs))
        .enumerate()
    {
        if !(s == 1.0 || s == -1.0) {
            return Err(Error::BadDiagonalSign(j, s));
        }
        block[ch] = v * s;
    }
    encode_scalar_block(&mut block);
    Ok(format!("{}\n", join(&block)))
}

fn cmd_decode_debug(args: DecodeDebugArgs) -> Result<String> {
    let code = CodeConfig::new(args.d, args.n, args.design_erasure)?;
    let mut values = Vec::new();
    let mut available = Vec::new();
    for entry in args.outputs.split(',') {
        let entry = entry.trim();
        if entry.is_empty() || entry == "x" {
            values.push(0.0);
            available.push(false);
        } else {
            values.push(
                entry
                    .parse()
                    .map_err(|_| Error::Config(format!("--outputs: invalid float `{entry}`")))?,
            );
            available.push(true);
        }
    }
    if values.len() != code.n_total {
        return Err(Error::Config(format!(
            "--outputs expects {} entries (one per worker), got {}",
            code.n_total,
            values.len()
        )));
    }
    let decoded = decode(&code, &ErasedOutputs::new(values, available)?)?;
    Ok(format!("{}\n", join(&decoded)))
}

fn cmd_simulate_timing(args: SimulateTimingArgs) -> Result<String> {
    if args.schedules == 0 {
        return Err(Error::Config("--schedules must be at least 1".into()));
    }
    let d = args.d.unwrap_or(args.n / 2);
    let code = CodeConfig::new(d, args.n, args.design_erasure)?;
    let rule = StoppingSpec::parse(&args.rule)?.build(&code);
    let dist_spec = RuntimeSpec::parse(&args.dist)?;
    let dist = dist_spec.build()?;
    let outputs = vec![0.0; args.n];
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut stop_times = Vec::with_capacity(args.schedules);
    let mut admitted = 0usize;
    for _ in 0..args.schedules {
        let schedule = ArrivalSchedule::sample(&dist, args.n, &mut rng);
        let (erased, stop) = run_iteration(&schedule, &rule, &outputs)?;
        stop_times.push(stop);
        admitted += erased.n_available();
    }
    stop_times.sort_by(f64::total_cmp);
    let mean = stop_times.iter().sum::<f64>() / stop_times.len() as f64;
    let pct = |q: f64| stop_times[((stop_times.len() - 1) as f64 * q).round() as usize];
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", args.n);
    let _ = writeln!(out, "d = {d}");
    let _ = writeln!(out, "rule = {}", args.rule);
    let _ = writeln!(out, "dist = {}", dist_spec.render());
    let _ = writeln!(out, "schedules = {}", args.schedules);
    let _ = writeln!(out, "mean_stop_time = {mean:.6}");
    let _ = writeln!(out, "p50_stop_time = {:.6}", pct(0.5));
    let _ = writeln!(out, "p90_stop_time = {:.6}", pct(0.9));
    let _ = writeln!(
        out,
        "max_stop_time = {:.6}",
        stop_times[stop_times.len() - 1]
    );
    let _ = writeln!(
        out,
        "mean_outputs_admitted = {:.6}",
        admitted as f64 / args.schedules as f64
    );
    Ok(out)
}
