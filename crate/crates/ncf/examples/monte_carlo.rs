//! Monte-Carlo comparison of plain forwarding against coded forwarding,
//! next to the analytic bound for the idealized full-coverage case.
//!
//! Run with `cargo run --release --example monte_carlo`.

use ncf::{analytic_bound, run_experiment, ConnectivityMode, ScenarioConfig, SimError};

fn main() -> Result<(), SimError> {
    // A mid-size deployment: 100 devices, 5 gateways, every device
    // transmitting in half of the generations, random connectivity.
    let config = ScenarioConfig {
        n: 100,
        m: 5,
        p_t: 0.5,
        mode: ConnectivityMode::Rand,
        payload_len: 8,
        field_exp: 7,
        seed: 1,
    };
    let trials = 2_000;
    let stats = run_experiment(&config, trials)?;

    println!("{trials} trials, n = {}, m = {}, p_t = {}", config.n, config.m, config.p_t);
    println!(
        "plain forwarding: {:8.3} ± {:.3} packets/generation",
        stats.mean_lorawan, stats.ci95_lorawan
    );
    println!(
        "coded forwarding: {:8.3} ± {:.3} packets/generation",
        stats.mean_ncf, stats.ci95_ncf
    );
    println!("bandwidth savings: {:.1}%", 100.0 * stats.savings);
    println!("decode success rate: {:.3}", stats.decode_success_rate);

    // Under random connectivity a device reaches (m+1)/2 gateways on
    // average, so plain forwarding costs that factor over coding.
    let expected = 1.0 - 2.0 / (config.m as f64 + 1.0);
    println!("analytic expectation for this topology: {:.1}%", 100.0 * expected);

    // The closed-form bound covers the full-coverage extreme: all 5
    // gateways hearing all 100 devices means a 500-packet baseline, and
    // coding cuts that by exactly 1/m.
    let bound = analytic_bound(500, 5).unwrap();
    println!(
        "full-coverage bound at (n, m) = (100, 5): {} coded packets, {} saved",
        bound.coded, bound.saved
    );
    Ok(())
}
