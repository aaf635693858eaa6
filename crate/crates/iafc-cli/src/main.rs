//! Thin command-line front end over the `iafc` library.
//!
//! Exit codes: 0 ok, 1 internal error, 2 validation / I-O / parse error,
//! 3 fit gate failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iafc::config::RunConfig;
use iafc::run::{
    cmd_analytic_table, cmd_fit_backward, cmd_simulate, cmd_sweep, cmd_thermal, CommandOutput,
    SweepKind,
};

#[derive(Parser)]
#[command(
    name = "iafc",
    version,
    about = "Intra-atomic frequency-comb quantum memory simulator",
    after_help = "Frequencies are angular (rad/us); time is in microseconds.\n\
                  Every output CSV embeds the parameters and master seed needed for exact replay."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Config file (flat `key = value` lines); flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed for reproducible runs
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte-Carlo trial count
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Output directory
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Also write SVG plots next to the CSVs
    #[arg(long, global = true)]
    plot: bool,
}

#[derive(Args, Default)]
struct CombOpts {
    /// Teeth count of the uniform comb (odd)
    #[arg(long)]
    n_teeth: Option<usize>,

    /// Comb spacing delta (rad/us)
    #[arg(long)]
    delta: Option<f64>,

    /// Tooth width gamma (rad/us)
    #[arg(long)]
    gamma: Option<f64>,

    /// Total optical depth alpha*L at unit length
    #[arg(long)]
    total_depth: Option<f64>,

    /// Read the comb from a text file (center width depth per line)
    #[arg(long)]
    comb_file: Option<PathBuf>,

    /// Pulse spectral width sigma (rad/us); defaults to 2*delta
    #[arg(long)]
    sigma: Option<f64>,

    /// Propagation length in unit lengths
    #[arg(long)]
    l_scale: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one pulse and write input/output traces plus the efficiency
    Simulate(CombOpts),

    /// Sweep random comb-spacing fluctuation strength over several finesses
    SweepSpacing {
        #[command(flatten)]
        comb: CombOpts,
        /// Fluctuation strengths in units of gamma, comma-separated
        #[arg(long, value_delimiter = ',')]
        strengths: Option<Vec<f64>>,
        /// Finesse values, comma-separated
        #[arg(long, value_delimiter = ',')]
        finesses: Option<Vec<f64>>,
    },

    /// Sweep random optical-depth fluctuation strength over several finesses
    SweepDepth {
        #[command(flatten)]
        comb: CombOpts,
        /// Fluctuation strengths as absolute depth, comma-separated
        #[arg(long, value_delimiter = ',')]
        strengths: Option<Vec<f64>>,
        /// Finesse values, comma-separated
        #[arg(long, value_delimiter = ',')]
        finesses: Option<Vec<f64>>,
    },

    /// Sweep propagation length at fixed disorder (input to fit-backward)
    SweepLength {
        #[command(flatten)]
        comb: CombOpts,
        /// Length grid, comma-separated (>= 8 increasing values)
        #[arg(long, value_delimiter = ',')]
        lengths: Option<Vec<f64>>,
        /// Disorder kind: spacing | depth | none
        #[arg(long)]
        kind: Option<String>,
        /// Disorder strength (gamma units for spacing, absolute for depth)
        #[arg(long)]
        strength: Option<f64>,
    },

    /// Fit the analytic model to a length-sweep CSV and estimate backward
    /// efficiencies
    FitBackward {
        /// Length-sweep CSV with columns `L,eta[,std_error]`
        #[arg(long)]
        input: Option<PathBuf>,
        /// Residual gate threshold in efficiency units
        #[arg(long)]
        gate_threshold: Option<f64>,
    },

    /// Efficiency under thermal ground-state populations at several
    /// temperatures
    Thermal {
        #[command(flatten)]
        comb: CombOpts,
        /// Temperatures in kelvin, comma-separated
        #[arg(long, value_delimiter = ',')]
        temperatures: Option<Vec<f64>>,
        /// Ground-manifold span E_max/hbar (rad/us)
        #[arg(long)]
        ground_span: Option<f64>,
    },

    /// Closed-form AFC efficiency table (with and without the finite-finesse
    /// prefactor)
    AnalyticTable {
        /// Finesse values, comma-separated
        #[arg(long, value_delimiter = ',')]
        finesses: Option<Vec<f64>>,
    },
}

fn apply_comb_opts(cfg: &mut RunConfig, opts: &CombOpts) {
    if let Some(v) = opts.n_teeth {
        cfg.n_teeth = v;
    }
    if let Some(v) = opts.delta {
        cfg.delta = v;
    }
    if let Some(v) = opts.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = opts.total_depth {
        cfg.total_depth = v;
    }
    if let Some(v) = &opts.comb_file {
        cfg.comb_file = Some(v.clone());
    }
    if let Some(v) = opts.sigma {
        cfg.sigma = Some(v);
    }
    if let Some(v) = opts.l_scale {
        cfg.l_scale = v;
    }
}

fn build_config(cli: &Cli) -> iafc::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.global.config {
        cfg.apply_file(path)?;
    }
    if let Some(seed) = cli.global.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.global.trials {
        cfg.trials = trials;
    }
    if let Some(dir) = &cli.global.out_dir {
        cfg.out_dir = dir.clone();
    }
    if cli.global.plot {
        cfg.plot = true;
    }

    match &cli.command {
        Command::Simulate(comb) => apply_comb_opts(&mut cfg, comb),
        Command::SweepSpacing {
            comb,
            strengths,
            finesses,
        }
        | Command::SweepDepth {
            comb,
            strengths,
            finesses,
        } => {
            apply_comb_opts(&mut cfg, comb);
            if let Some(s) = strengths {
                cfg.strengths = s.clone();
            }
            if let Some(f) = finesses {
                cfg.finesses = f.clone();
            }
        }
        Command::SweepLength {
            comb,
            lengths,
            kind,
            strength,
        } => {
            apply_comb_opts(&mut cfg, comb);
            if let Some(l) = lengths {
                cfg.lengths = l.clone();
            }
            if let Some(k) = kind {
                cfg.set("kind", k)?;
            }
            if let Some(s) = strength {
                cfg.strength = *s;
            }
        }
        Command::FitBackward {
            input,
            gate_threshold,
        } => {
            if let Some(p) = input {
                cfg.fit_input = Some(p.clone());
            }
            if let Some(g) = gate_threshold {
                cfg.gate_threshold = *g;
            }
        }
        Command::Thermal {
            comb,
            temperatures,
            ground_span,
        } => {
            apply_comb_opts(&mut cfg, comb);
            if let Some(t) = temperatures {
                cfg.temperatures = t.clone();
            }
            if let Some(g) = ground_span {
                cfg.ground_span = *g;
            }
        }
        Command::AnalyticTable { finesses } => {
            if let Some(f) = finesses {
                cfg.finesses = f.clone();
            }
        }
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> iafc::Result<CommandOutput> {
    match &cli.command {
        Command::Simulate(_) => cmd_simulate(cfg),
        Command::SweepSpacing { .. } => cmd_sweep(cfg, SweepKind::Spacing),
        Command::SweepDepth { .. } => cmd_sweep(cfg, SweepKind::Depth),
        Command::SweepLength { .. } => cmd_sweep(cfg, SweepKind::Length),
        Command::FitBackward { .. } => cmd_fit_backward(cfg),
        Command::Thermal { .. } => cmd_thermal(cfg),
        Command::AnalyticTable { .. } => cmd_analytic_table(cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match dispatch(&cli, &cfg) {
        Ok(out) => {
            for line in &out.summary {
                println!("{line}");
            }
            for file in &out.files {
                println!("wrote {}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
