//! Thin command-line wrapper around the library: argument parsing and
//! dispatch only. See `ncf::cli` for the actual front-end logic.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use ncf::{
    emit_csv, format_stats, gnuplot_script, parse_config, parse_config_file, run_preset,
    run_sweep, selftest, CliError, ConfigError, Overrides, Preset, SweepSpec, SweepVar,
};

#[derive(Parser)]
#[command(
    name = "ncf",
    version,
    about = "Simulate network-coded uplink forwarding for LoRaWAN-style gateway meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and print summary statistics.
    Simulate(RunArgs),
    /// Vary n, pt, or w over a value list and emit CSV.
    Sweep(RunArgs),
    /// Run a canned experiment and write its CSV.
    Preset(PresetArgs),
    /// Evaluate the built-in known-answer checks.
    Selftest,
}

/// Flags shared by `simulate` and `sweep`; each overrides the same key
/// in the `--config` file.
#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of end devices.
    #[arg(long)]
    n: Option<usize>,
    /// Number of gateways (conflicts with --gateways-ratio).
    #[arg(long)]
    m: Option<usize>,
    /// Gateways as a fraction of n, rounded (conflicts with --m).
    #[arg(long)]
    gateways_ratio: Option<f64>,
    /// Per-generation transmission probability.
    #[arg(long)]
    pt: Option<f64>,
    /// Connectivity mode: rand or equal.
    #[arg(long)]
    mode: Option<String>,
    /// Gateways per device (equal mode).
    #[arg(long)]
    w: Option<usize>,
    /// Payload length in field symbols (config key L).
    #[arg(long)]
    payload_len: Option<usize>,
    /// Field exponent k for GF(2^k), 2..=8.
    #[arg(long)]
    gf_exp: Option<u32>,
    /// Monte-Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,
    /// Base RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Variable to sweep: n, pt, or w.
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated ascending sweep values.
    #[arg(long, value_delimiter = ',')]
    sweep_values: Option<Vec<f64>>,
    /// CSV destination (sweep only; stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV.
    #[arg(long)]
    gnuplot_script: Option<PathBuf>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            m: self.m,
            gateways_ratio: self.gateways_ratio,
            pt: self.pt,
            mode: self.mode.clone(),
            w: self.w,
            payload_len: self.payload_len,
            gf_exp: self.gf_exp,
            trials: self.trials,
            seed: self.seed,
            sweep: self.sweep.clone(),
            sweep_values: self.sweep_values.clone(),
            output: self.output.clone(),
        }
    }

    fn resolve(&self) -> Result<SweepSpec, CliError> {
        let file = match &self.config {
            Some(path) => Some(parse_config_file(&std::fs::read_to_string(path)?)?),
            None => None,
        };
        Ok(parse_config(file.as_ref(), &self.overrides())?)
    }
}

#[derive(Args)]
struct PresetArgs {
    /// One of: fig3, fig4, fig5, fig6.
    name: String,
    /// Monte-Carlo trials per point.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Base RNG seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV destination (default: <name>.csv).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV.
    #[arg(long)]
    gnuplot_script: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version go to stdout with status 0; real argument
            // errors map onto the validation exit code.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let spec = args.resolve()?;
            if spec.sweep.is_some() {
                return Err(ConfigError::Invalid {
                    key: "sweep",
                    msg: "simulate runs a single point; use the sweep command".into(),
                }
                .into());
            }
            if spec.output.is_some() {
                return Err(ConfigError::Invalid {
                    key: "output",
                    msg: "simulate prints to stdout; use the sweep command for CSV".into(),
                }
                .into());
            }
            let stats = ncf::run_experiment(&spec.base, spec.trials)?;
            print!("{}", format_stats(&spec.base, spec.trials, &stats));
            Ok(0)
        }
        Command::Sweep(args) => {
            let spec = args.resolve()?;
            let Some(sweep) = &spec.sweep else {
                return Err(ConfigError::Missing("sweep").into());
            };
            let variable = sweep.variable;
            let rows = run_sweep(&spec)?;
            match &spec.output {
                Some(path) => {
                    emit_csv(&rows, BufWriter::new(File::create(path)?))?;
                    println!("wrote {} ({} sweep points)", path.display(), rows.len());
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut out = BufWriter::new(stdout.lock());
                    emit_csv(&rows, &mut out)?;
                    out.flush()?;
                }
            }
            if let Some(script) = &args.gnuplot_script {
                write_plot_script(script, spec.output.as_deref(), variable)?;
            }
            Ok(0)
        }
        Command::Preset(args) => {
            let preset = Preset::from_name(&args.name).ok_or_else(|| ConfigError::Invalid {
                key: "preset",
                msg: format!(
                    "unknown preset {:?} (expected fig3, fig4, fig5, or fig6)",
                    args.name
                ),
            })?;
            let path = args
                .output
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", preset.name())));
            let mut out = BufWriter::new(File::create(&path)?);
            let rows = run_preset(preset, args.trials, args.seed, &mut out)?;
            out.flush()?;
            println!("wrote {} ({} sweep points)", path.display(), rows.len());
            if let Some(script) = &args.gnuplot_script {
                write_plot_script(script, Some(&path), rows[0].variable)?;
            }
            Ok(0)
        }
        Command::Selftest => {
            let checks = selftest();
            let mut all = true;
            for c in &checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                println!("{verdict} {:<24} {}", c.name, c.detail);
                all &= c.pass;
            }
            if all {
                println!("all {} checks passed", checks.len());
                Ok(0)
            } else {
                Ok(1)
            }
        }
    }
}

fn write_plot_script(
    script: &PathBuf,
    csv: Option<&std::path::Path>,
    variable: SweepVar,
) -> Result<(), CliError> {
    let csv = csv.ok_or(ConfigError::Invalid {
        key: "gnuplot_script",
        msg: "needs --output so the script has a CSV file to plot".into(),
    })?;
    std::fs::write(script, gnuplot_script(&csv.display().to_string(), variable))?;
    println!("wrote {}", script.display());
    Ok(())
}
