use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvqkd_cli::run::{run_experiment, write_records, PerSlotSink};
use cvqkd_cli::validate::validate_formulas;
use cvqkd_cli::{parse_config, CliError, ExperimentConfig, ResultRecord, SourceSpec};
use cvqkd_core::gaussian::entanglement_checks;
use cvqkd_core::SourceParams;

#[derive(Parser)]
#[command(name = "cvqkd", version, about = "Bright-beam continuous-variable QKD simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the entanglement criteria of a source; exit 0 iff it is usable.
    Criteria {
        /// Pure source with this squeezed variance.
        #[arg(long, conflicts_with_all = ["params", "config"])]
        squeezing: Option<f64>,
        /// All four variances: v_plus_x,v_minus_x,v_minus_y,v_plus_y.
        #[arg(long, value_delimiter = ',', conflicts_with = "config")]
        params: Option<Vec<f64>>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Run the configured session(s) and emit one JSON-lines summary.
    Simulate(RunArgs),
    /// Run every point of the config's sweep, one JSON line per point.
    Sweep(RunArgs),
    /// Re-check the closed forms against Monte Carlo; exit 1 on any failure.
    Validate {
        /// Config supplying the source; defaults to (0.5, 2, 0.5, 2).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Also write the table here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's root seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; defaults to the config's output_path, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-slot transcripts and keys next to the output file.
    #[arg(long)]
    per_slot: bool,
    #[arg(long)]
    quiet: bool,
}

fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(parse_config(&text)?)
}

fn criteria(
    squeezing: Option<f64>,
    params: Option<Vec<f64>>,
    config: Option<PathBuf>,
    quiet: bool,
) -> Result<(), CliError> {
    let source = match (squeezing, params, config) {
        (Some(v), _, _) => SourceSpec::Squeezing { squeezing: v }.params()?,
        (_, Some(p), _) => match p[..] {
            [a, b, c, d] => SourceParams::new(a, b, c, d)?,
            _ => return Err(CliError::Usage(format!("--params takes 4 values, got {}", p.len()))),
        },
        (_, _, Some(path)) => load_config(&path)?.source.params()?,
        _ => SourceSpec::default().params()?,
    };
    let r = entanglement_checks(&source);
    if !quiet {
        println!(
            "source                   v_plus_x={} v_minus_x={} v_minus_y={} v_plus_y={}",
            source.v_plus_x(),
            source.v_minus_x(),
            source.v_minus_y(),
            source.v_plus_y()
        );
        println!("nonseparable             {}", r.nonseparable);
        println!("squeezed_state_entangled {}", r.squeezed_state_entangled);
        println!("epr_paradox              {}", r.epr_paradox);
        println!("epr_product              {:.6}", r.epr_product);
        println!("sum_criterion_value      {:.6}", r.sum_criterion_value);
    }
    if r.squeezed_state_entangled {
        Ok(())
    } else {
        Err(CliError::Validation("source is not squeezed-state entangled".into()))
    }
}

fn run(args: RunArgs, sweep: bool) -> Result<(), CliError> {
    let mut config = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    match (sweep, config.sweep.is_some()) {
        (true, false) => return Err(CliError::Usage("sweep needs a config with a sweep section".into())),
        (false, true) => return Err(CliError::Usage("config has a sweep section; use the sweep subcommand".into())),
        _ => {}
    }
    let out = args.out.or_else(|| config.output_path.clone());
    let sink = match (args.per_slot, &out) {
        (false, _) => None,
        (true, Some(path)) => Some(PerSlotSink::beside(path)),
        (true, None) => return Err(CliError::Usage("--per-slot needs --out or output_path".into())),
    };

    let records = run_experiment(&config, sink.as_ref())?;
    match &out {
        Some(path) => {
            let f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
            write_records(io::BufWriter::new(f), &records).map_err(|e| CliError::io(path, e))?;
        }
        None => write_records(io::stdout().lock(), &records).map_err(|e| CliError::io("<stdout>", e))?,
    }
    if !args.quiet {
        summarize(&records);
    }
    Ok(())
}

fn summarize(records: &[ResultRecord]) {
    for r in records {
        eprintln!(
            "{}: kept {:.3}, {} key bits, keys agree {}, alarm rate {:.2}, eta {}, eve accuracy {}",
            r.experiment_id,
            r.kept_fraction,
            r.key_length,
            r.keys_agree,
            r.alarm_rate,
            r.inferred_eta.map_or("-".into(), |e| format!("{e:.3}")),
            r.eve_accuracy.map_or("-".into(), |e| format!("{e:.3}")),
        );
    }
}

fn validate(config: Option<PathBuf>, seed: u64, samples: usize, out: Option<PathBuf>, quiet: bool) -> Result<(), CliError> {
    let source = match config {
        Some(path) => load_config(&path)?.source.params()?,
        None => SourceSpec::default().params()?,
    };
    if samples < 3 {
        return Err(CliError::Usage("--samples must be at least 3".into()));
    }
    let report = validate_formulas(&source, samples, seed)?;
    if !quiet {
        print!("{report}");
        io::stdout().flush().map_err(|e| CliError::io("<stdout>", e))?;
    }
    if let Some(path) = out {
        fs::write(&path, report.to_string()).map_err(|e| CliError::io(&path, e))?;
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(CliError::Validation(report.failures().join(", ")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Criteria {
            squeezing,
            params,
            config,
            quiet,
        } => criteria(squeezing, params, config, quiet),
        Command::Simulate(args) => run(args, false),
        Command::Sweep(args) => run(args, true),
        Command::Validate {
            config,
            seed,
            samples,
            out,
            quiet,
        } => validate(config, seed, samples, out, quiet),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cvqkd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
