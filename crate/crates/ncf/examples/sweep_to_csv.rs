//! Programmatic sweeps: build a run plan in code, execute it, and emit
//! the same CSV (plus gnuplot script) the command-line tool produces.
//!
//! Run with `cargo run --release --example sweep_to_csv`.

use ncf::{
    emit_csv, gnuplot_script, run_sweep, CliError, ConnectivityMode, GatewaySpec, ScenarioConfig,
    Sweep, SweepSpec, SweepVar,
};

fn main() -> Result<(), CliError> {
    // Duty-cycle sweep over a small mesh; the gateway count stays fixed
    // because the node count does.
    let spec = SweepSpec {
        sweep: Some(Sweep {
            variable: SweepVar::Pt,
            values: vec![0.2, 0.4, 0.6, 0.8],
        }),
        base: ScenarioConfig {
            n: 60,
            m: 3,
            p_t: 0.5, // overwritten per sweep point
            mode: ConnectivityMode::Rand,
            payload_len: 8,
            field_exp: 7,
            seed: 11,
        },
        gateways: GatewaySpec::Count(3),
        trials: 400,
        output: None,
    };

    let rows = run_sweep(&spec)?;
    emit_csv(&rows, std::io::stdout().lock())?;

    // The matching plot script; point it at wherever the CSV lands.
    eprintln!();
    eprintln!("# gnuplot script for this table:");
    eprint!("{}", gnuplot_script("sweep.csv", SweepVar::Pt));
    Ok(())
}
