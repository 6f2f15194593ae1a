//! `hsm-pgnn`: runs the feedforward experiments from a config file and writes
//! reports, traces and models together with a manifest per command.
//!
//! Exit status: 0 on success, 1 for configuration or usage errors, 2 when the
//! numerics fail (divergence, singular fit).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hsm_pgnn::config::{Controller, ExperimentConfig};
use hsm_pgnn::error::Error;
use hsm_pgnn::experiments::{
    collect_to, compare_to, cosine_to, fit_to, prepare_models, simulate_to, sweep_to, train_to, Manifest, MaeReport,
    ModelSet,
};
use hsm_pgnn::motor_sim::SimTrace;

#[derive(Parser, Debug)]
#[command(name = "hsm-pgnn", version, about = "Hybrid stepper motor feedforward experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Experiment config (TOML). Built-in defaults when omitted.
    #[arg(long, short = 'c', global = true)]
    config: Option<PathBuf>,
    /// Output directory; falls back to the config's `output_dir`, then `out`.
    #[arg(long, short = 'o', env = "HSM_PGNN_OUT", global = true)]
    out: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// More progress output on stderr.
    #[arg(long, short = 'v', action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Args, Debug, Clone)]
struct ModelSource {
    /// Directory with `<kind>.json` models from `fit`/`train`; missing models
    /// are identified first.
    #[arg(long)]
    models: Option<PathBuf>,
    /// Training trace used for models that must be identified; collected
    /// from the config when omitted.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Record the closed-loop training trace.
    Collect {
        #[command(flatten)]
        common: Common,
        /// Overrides `collection.duration` (s).
        #[arg(long)]
        duration: Option<f64>,
    },
    /// Least-squares fit of inertia and viscous friction.
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Train a network model on a recorded trace.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trace: PathBuf,
        /// `pgnn` or `blackbox`.
        #[arg(long, default_value = "pgnn", value_parser = parse_controller)]
        kind: Controller,
        /// Overrides `training.epochs`.
        #[arg(long)]
        epochs: Option<usize>,
        /// Overrides `training.learning_rate`.
        #[arg(long)]
        learning_rate: Option<f64>,
    },
    /// One controller at one velocity: measured window and its errors.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: ModelSource,
        #[arg(long, default_value = "pgnn", value_parser = parse_controller)]
        controller: Controller,
        /// Peak velocity of the reference (rad/s); the config's comparison
        /// velocity when omitted.
        #[arg(long)]
        velocity: Option<f64>,
    },
    /// Every roster controller at the comparison velocity.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: ModelSource,
    },
    /// Every roster controller at every configured velocity.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        source: ModelSource,
        /// Worker threads for independent velocities.
        #[arg(long, short = 'j', default_value_t = 1)]
        jobs: usize,
    },
    /// Cosine extrapolation demo: raw against wrapped network input.
    DemoCosine {
        #[command(flatten)]
        common: Common,
    },
    /// Print the effective config (after overrides) as TOML.
    Config {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_controller(s: &str) -> Result<Controller, String> {
    match s {
        "none" => Ok(Controller::None),
        "physical" => Ok(Controller::Physical),
        "blackbox" => Ok(Controller::Blackbox),
        "pgnn" => Ok(Controller::Pgnn),
        _ => Err(format!("unknown controller `{s}` (none, physical, blackbox, pgnn)")),
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Collect { common, .. }
            | Command::Fit { common, .. }
            | Command::Train { common, .. }
            | Command::Simulate { common, .. }
            | Command::Compare { common, .. }
            | Command::Sweep { common, .. }
            | Command::DemoCosine { common }
            | Command::Config { common } => common,
        }
    }
}

struct Context {
    cfg: ExperimentConfig,
    out: PathBuf,
    verbose: u8,
}

impl Context {
    fn new(common: &Common) -> Result<Self, Error> {
        let mut cfg = match &common.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        let out = common
            .out
            .clone()
            .or_else(|| cfg.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        Ok(Context { cfg, out, verbose: common.verbose })
    }

    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose > 0 {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn done(&self, manifest: &Manifest) {
        self.log(format!(
            "wrote {} file(s) to {} (config {})",
            manifest.artifacts.len(),
            self.out.display(),
            &manifest.config_sha256[..12]
        ));
        if self.verbose > 1 {
            for a in &manifest.artifacts {
                eprintln!("  {} {}", a.sha256, a.file);
            }
        }
    }

    fn models(&self, source: &ModelSource) -> Result<ModelSet, Error> {
        let trace = source.trace.as_deref().map(SimTrace::load).transpose()?;
        if source.models.is_none() && trace.is_none() {
            self.log("no models given: collecting a training trace and identifying the roster");
        }
        prepare_models(&self.cfg, source.models.as_deref(), trace.as_ref())
    }
}

fn print_report(report: &MaeReport) {
    println!("model,velocity,mae,max_error,standstill_error,extrapolation");
    for e in &report.entries {
        println!(
            "{},{},{:.6e},{:.6e},{:.6e},{}",
            e.model.as_str(),
            e.velocity,
            e.mae,
            e.max_error,
            e.standstill_error,
            e.extrapolation
        );
    }
}

fn run(command: Command) -> Result<(), Error> {
    let mut ctx = Context::new(command.common())?;
    let out = ctx.out.clone();
    match command {
        Command::Collect { duration, .. } => {
            if let Some(d) = duration {
                ctx.cfg.collection.duration = d;
            }
            ctx.cfg.validate()?;
            ctx.log(format!("collecting {} s", ctx.cfg.collection.duration));
            let (trace, m) = collect_to(&ctx.cfg, &out)?;
            println!("collected {} samples into {}", trace.len(), out.join(hsm_pgnn::experiments::TRACE_FILE).display());
            ctx.done(&m);
        }
        Command::Fit { trace, .. } => {
            let (fit, m) = fit_to(&ctx.cfg, &trace, &out)?;
            println!(
                "inertia {:.6e} kg m^2, viscous friction {:.6e} N m s/rad, residual rms {:.3e}",
                fit.params.inertia, fit.params.viscous, fit.residual_rms
            );
            if !fit.is_plausible() {
                eprintln!("warning: fitted parameters are not both positive; the record may be dominated by unmodelled effects");
            }
            ctx.done(&m);
        }
        Command::Train { trace, kind, epochs, learning_rate, .. } => {
            if let Some(e) = epochs {
                ctx.cfg.training.epochs = e;
            }
            if let Some(lr) = learning_rate {
                ctx.cfg.training.learning_rate = lr;
            }
            ctx.log(format!("training {} for {} epochs", kind.as_str(), ctx.cfg.training.epochs));
            let (set, m) = train_to(&ctx.cfg, &trace, kind, &out)?;
            if let Some(h) = set.histories.get(&kind) {
                let best = h.iter().copied().fold(f64::INFINITY, f64::min);
                println!("{}: loss {:.4e} -> {:.4e}", kind.as_str(), h[0], best);
            }
            ctx.done(&m);
        }
        Command::Simulate { source, controller, velocity, .. } => {
            let v = velocity.unwrap_or(ctx.cfg.evaluation.comparison_velocity);
            let models = if controller == Controller::None { ModelSet::default() } else { ctx.models(&source)? };
            let (e, m) = simulate_to(&ctx.cfg, controller, &models, v, &out)?;
            println!(
                "{} at {} rad/s: mae {:.4e}, max {:.4e}, standstill {:.4e}",
                e.model.as_str(),
                v,
                e.mae,
                e.max_error,
                e.standstill_error
            );
            ctx.done(&m);
        }
        Command::Compare { source, .. } => {
            let models = ctx.models(&source)?;
            let (report, m) = compare_to(&ctx.cfg, &models, &out)?;
            print_report(&report);
            ctx.done(&m);
        }
        Command::Sweep { source, jobs, .. } => {
            let models = ctx.models(&source)?;
            ctx.log(format!("sweeping {} velocities on {jobs} worker(s)", ctx.cfg.evaluation.velocities.len()));
            let (report, m) = sweep_to(&ctx.cfg, &models, jobs, &out)?;
            print_report(&report);
            ctx.done(&m);
        }
        Command::DemoCosine { .. } => {
            let (r, m) = cosine_to(&ctx.cfg, &out)?;
            println!("input,n1,in_range_max_error,extrapolation_max_error");
            for e in &r.extrapolation {
                println!("{},{},{:.4e},{:.4e}", e.input.as_str(), e.n1, e.in_range_max_error, e.extrapolation_max_error);
            }
            let show = |n: Option<usize>| n.map_or_else(|| "not reached".to_string(), |n| n.to_string());
            println!(
                "neurons for rms {:.0e}: raw {}, mod {}",
                r.accuracy,
                show(r.raw_neurons_needed),
                show(r.mod_neurons_needed)
            );
            ctx.done(&m);
        }
        Command::Config { .. } => {
            ctx.cfg.validate()?;
            print!("{}", ctx.cfg.to_toml()?);
        }
    }
    Ok(())
}

fn hint(err: &Error) -> Option<&'static str> {
    match err {
        Error::DivergedLoss { .. } => Some("lower training.learning_rate (or --learning-rate)"),
        Error::RankDeficient { .. } => {
            Some("record a trace that accelerates and cruises at several velocities (collection.rotations, collection.limits)")
        }
        Error::NonFiniteState { .. } => Some("check the gains and raise simulation.substeps"),
        _ => None,
    }
}

fn exit_code(err: &Error) -> u8 {
    if err.is_numerical() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let Some(h) = hint(&err) {
                eprintln!("hint: {h}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
