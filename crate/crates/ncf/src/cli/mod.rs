//! Command-line front end: config resolution, experiment sweeps, canned
//! presets, CSV emission, and a self-test table.
//!
//! The binary exposes four commands:
//!
//! * `simulate` — one configuration, human-readable stats on stdout.
//! * `sweep` — vary one of `n`, `pt`, `w` over a value list, CSV out.
//! * `preset <fig3|fig4|fig5|fig6>` — four canned sweeps (network-size
//!   growth at half and at 1% duty, a duty-cycle sweep, and a
//!   connectivity-factor sweep), CSV out.
//! * `selftest` — evaluates a table of known-answer checks.
//!
//! Configuration comes from an optional flat `key = value` file plus
//! command-line flags; flags override the file per key. See
//! [`config::parse_config`].

mod config;
mod csv;

pub use config::{parse_config, parse_config_file, ConfigError, Overrides};
pub use csv::{emit_csv, format_significant, gnuplot_script};

use std::io::Write;
use std::path::PathBuf;

use thiserror::Error;

use crate::coding;
use crate::gf::Field;
use crate::scenario::{ConnectivityMode, ScenarioConfig};
use crate::sim::{run_experiment, AggregateStats, SimError};

/// Front-end errors; [`CliError::exit_code`] maps them to the process
/// exit contract (1 for configuration/validation problems, 2 only for
/// decode corruption, which signals a pipeline bug rather than bad input).
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Sim(SimError::DecodeCorruption { .. }) => 2,
            _ => 1,
        }
    }
}

/// Which scenario knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// Node count.
    N,
    /// Transmission probability.
    Pt,
    /// Connectivity factor (Equal mode).
    W,
}

impl SweepVar {
    /// The config-file / CSV spelling.
    pub fn key(self) -> &'static str {
        match self {
            SweepVar::N => "n",
            SweepVar::Pt => "pt",
            SweepVar::W => "w",
        }
    }
}

/// A swept variable plus its strictly ascending value list.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: SweepVar,
    pub values: Vec<f64>,
}

/// How the gateway count follows the node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GatewaySpec {
    /// Fixed count.
    Count(usize),
    /// Fraction of n, rounded to nearest with a floor of one. Keeps m in
    /// step with n when n is the swept variable.
    Ratio(f64),
}

impl GatewaySpec {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            GatewaySpec::Count(m) => m,
            GatewaySpec::Ratio(r) => ((r * n as f64).round() as usize).max(1),
        }
    }
}

/// A fully resolved run plan: fixed parameters, optional sweep, trial
/// count, and output destination.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// `None` is a single-point run (the `simulate` command).
    pub sweep: Option<Sweep>,
    /// Fixed parameters; the swept field is overwritten per point.
    pub base: ScenarioConfig,
    pub gateways: GatewaySpec,
    pub trials: u64,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    /// The concrete scenario for each sweep point (or the single base
    /// config), paired with the swept value.
    pub fn configs(&self) -> Vec<(Option<f64>, ScenarioConfig)> {
        let Some(sweep) = &self.sweep else {
            return vec![(None, self.base.clone())];
        };
        sweep
            .values
            .iter()
            .map(|&v| {
                let mut cfg = self.base.clone();
                match sweep.variable {
                    SweepVar::N => {
                        cfg.n = v as usize;
                        cfg.m = self.gateways.resolve(cfg.n);
                    }
                    SweepVar::Pt => cfg.p_t = v,
                    SweepVar::W => cfg.mode = ConnectivityMode::Equal { w: v as usize },
                }
                (Some(v), cfg)
            })
            .collect()
    }
}

/// One sweep point's resolved parameters and measured statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: SweepVar,
    pub value: f64,
    pub config: ScenarioConfig,
    pub trials: u64,
    pub stats: AggregateStats,
}

/// Runs every point of a sweep and returns the rows in value order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    let variable = spec.sweep.as_ref().map(|s| s.variable);
    let mut rows = Vec::new();
    for (value, config) in spec.configs() {
        let stats = run_experiment(&config, spec.trials)?;
        rows.push(SweepRow {
            // Single runs never reach CSV, but keep the row shape total.
            variable: variable.unwrap_or(SweepVar::N),
            value: value.unwrap_or(config.n as f64),
            config,
            trials: spec.trials,
            stats,
        });
    }
    Ok(rows)
}

/// The four canned experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Packets vs network size, half duty (n 100..1000, p=0.5, Rand).
    Fig3,
    /// Packets vs network size, 1% duty (n 100..1000, p=0.01, Rand).
    Fig4,
    /// Packets vs transmission probability (n=100, m=5, Rand).
    Fig5,
    /// Packets vs connectivity factor (n=1000, m=50, Equal, w 1..5).
    Fig6,
}

impl Preset {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fig3" => Some(Preset::Fig3),
            "fig4" => Some(Preset::Fig4),
            "fig5" => Some(Preset::Fig5),
            "fig6" => Some(Preset::Fig6),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }
}

/// Builds the sweep plan for a preset. The network-size presets keep the
/// gateway count at 5% of n; the others fix it explicitly.
pub fn preset_spec(preset: Preset, trials: u64, seed: u64) -> SweepSpec {
    let size_sweep = Sweep {
        variable: SweepVar::N,
        values: (1..=10).map(|i| (i * 100) as f64).collect(),
    };
    let base = |n: usize, m: usize, p_t: f64, mode: ConnectivityMode| ScenarioConfig {
        n,
        m,
        p_t,
        mode,
        payload_len: 8,
        field_exp: Field::DEFAULT_EXP,
        seed,
    };
    match preset {
        Preset::Fig3 => SweepSpec {
            sweep: Some(size_sweep),
            base: base(100, 5, 0.5, ConnectivityMode::Rand),
            gateways: GatewaySpec::Ratio(0.05),
            trials,
            output: None,
        },
        Preset::Fig4 => SweepSpec {
            sweep: Some(size_sweep),
            base: base(100, 5, 0.01, ConnectivityMode::Rand),
            gateways: GatewaySpec::Ratio(0.05),
            trials,
            output: None,
        },
        Preset::Fig5 => SweepSpec {
            sweep: Some(Sweep {
                variable: SweepVar::Pt,
                values: (1..=10).map(|i| i as f64 / 10.0).collect(),
            }),
            base: base(100, 5, 0.5, ConnectivityMode::Rand),
            gateways: GatewaySpec::Count(5),
            trials,
            output: None,
        },
        Preset::Fig6 => SweepSpec {
            sweep: Some(Sweep {
                variable: SweepVar::W,
                values: (1..=5).map(|w| w as f64).collect(),
            }),
            base: base(1000, 50, 0.5, ConnectivityMode::Equal { w: 1 }),
            gateways: GatewaySpec::Count(50),
            trials,
            output: None,
        },
    }
}

/// Runs a preset and writes its CSV to `out`; returns the rows for
/// further inspection.
pub fn run_preset(
    preset: Preset,
    trials: u64,
    seed: u64,
    out: impl Write,
) -> Result<Vec<SweepRow>, CliError> {
    let spec = preset_spec(preset, trials, seed);
    let rows = run_sweep(&spec)?;
    emit_csv(&rows, out)?;
    Ok(rows)
}

/// Human-readable summary for the `simulate` command.
pub fn format_stats(config: &ScenarioConfig, trials: u64, stats: &AggregateStats) -> String {
    let mode = match config.mode {
        ConnectivityMode::Rand => "rand".to_string(),
        ConnectivityMode::Equal { w } => format!("equal (w = {w})"),
    };
    format!(
        "nodes {n}, gateways {m}, p_t {pt}, mode {mode}, payload {l} symbols, \
         GF(2^{k}), trials {trials}, seed {seed}\n\
         lorawan: {ml} ± {cl} packets/generation\n\
         ncf:     {mn} ± {cn} packets/generation\n\
         savings: {sv}\n\
         decode success rate: {ds}\n",
        n = config.n,
        m = config.m,
        pt = format_significant(config.p_t),
        l = config.payload_len,
        k = config.field_exp,
        seed = config.seed,
        ml = format_significant(stats.mean_lorawan),
        cl = format_significant(stats.ci95_lorawan),
        mn = format_significant(stats.mean_ncf),
        cn = format_significant(stats.ci95_ncf),
        sv = format_significant(stats.savings),
        ds = format_significant(stats.decode_success_rate),
    )
}

/// One known-answer check evaluated by [`selftest`].
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        pass,
        detail: detail.into(),
    }
}

/// Evaluates the built-in known-answer table: field arithmetic examples,
/// the worked 3×3 mesh, the analytic bound, full-coverage counts, and
/// the wire format. Returns every check with its outcome.
pub fn selftest() -> Vec<Check> {
    let mut checks = Vec::new();
    let field = Field::gf128();

    checks.push(check(
        "gf-add",
        field.add(0x53, 0x31) == 0x62,
        format!("0x53 + 0x31 = {:#04x}, want 0x62", field.add(0x53, 0x31)),
    ));
    checks.push(check(
        "gf-mul",
        field.mul(0x02, 0x40) == 0x03,
        format!("0x02 · 0x40 = {:#04x}, want 0x03", field.mul(0x02, 0x40)),
    ));
    checks.push(check(
        "gf-inv",
        field.inv(0x02) == Ok(0x41),
        format!("inv(0x02) = {:?}, want 0x41", field.inv(0x02)),
    ));
    let inverses_ok = (1..128u8).all(|a| field.inv(a).map(|i| field.mul(a, i)) == Ok(1));
    checks.push(check(
        "gf-inverse-table",
        inverses_ok,
        "a · inv(a) = 1 for all 127 nonzero elements",
    ));

    match coding::analytic_bound(21, 3) {
        Ok(b) => {
            let pass = b.coded == num::rational::Ratio::from_integer(7)
                && b.saved == num::rational::Ratio::from_integer(14);
            checks.push(check(
                "analytic-bound",
                pass,
                format!("(21, 3) → coded {}, saved {}, want 7 and 14", b.coded, b.saved),
            ));
        }
        Err(e) => checks.push(check("analytic-bound", false, e.to_string())),
    }

    checks.push(selftest_toy_mesh(&field));

    let infer = coding::infer_connectivity(&[(0, 0), (0, 0), (1, 2)], 3, 2);
    let infer_pass = infer.as_ref().is_ok_and(|c| {
        c.get(0, 0) && c.get(2, 1) && c.total_links() == 2
    });
    checks.push(check(
        "connectivity-inference",
        infer_pass,
        "log [(0,0),(0,0),(1,2)] sets exactly two links",
    ));

    let packet = coding::EncodedPacket {
        gateway: 2,
        generation: 0x01020304,
        coeffs: vec![0x00, 0x15, 0x7f],
        payload: vec![0x0a, 0x0b],
    };
    let wire_pass = packet
        .to_bytes()
        .and_then(|b| coding::EncodedPacket::from_bytes(&b))
        .map(|p| p == packet)
        .unwrap_or(false);
    checks.push(check("wire-roundtrip", wire_pass, "serialize → parse → equal"));

    // Full coverage, everyone transmits: baseline n·m, coded n.
    let full = ScenarioConfig {
        n: 20,
        m: 4,
        p_t: 1.0,
        mode: ConnectivityMode::Equal { w: 4 },
        payload_len: 8,
        field_exp: Field::DEFAULT_EXP,
        seed: 1,
    };
    match crate::sim::run_trial(&full, 0) {
        Ok(r) => checks.push(check(
            "full-coverage-counts",
            r.packets_lorawan == 80 && r.packets_ncf == 20,
            format!(
                "baseline {} (want 80), coded {} (want 20)",
                r.packets_lorawan, r.packets_ncf
            ),
        )),
        Err(e) => checks.push(check("full-coverage-counts", false, e.to_string())),
    }

    checks
}

fn selftest_toy_mesh(field: &Field) -> Check {
    use rand::SeedableRng;

    let mesh = coding::ConnectivityMatrix::toy();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let (_, vectors) = coding::generate_encoding_vectors(&mesh, field, &mut rng);

    let originals: Vec<coding::NativePacket> = (0..3)
        .map(|i| coding::NativePacket::new(i, 0, vec![i as u8 + 1; 4]))
        .collect();
    let received: Vec<Vec<coding::NativePacket>> = (0..3)
        .map(|j| {
            originals
                .iter()
                .filter(|p| mesh.get(p.node, j))
                .cloned()
                .collect()
        })
        .collect();

    let baseline = coding::pure_forward(&received);
    let mut encoded = Vec::new();
    for (j, heard) in received.iter().enumerate() {
        match coding::encode_at_gateway(j, vectors.for_gateway(j), heard, field) {
            Ok(mut e) => encoded.append(&mut e),
            Err(e) => return check("toy-mesh", false, e.to_string()),
        }
    }
    let decoded = match coding::decode_at_server(&encoded, field) {
        Ok(d) => d,
        Err(e) => return check("toy-mesh", false, e.to_string()),
    };
    let roundtrip = decoded.status == coding::DecodeStatus::Full
        && originals
            .iter()
            .all(|p| decoded.recovered.get(&p.node) == Some(&p.payload));

    check(
        "toy-mesh",
        baseline == 7 && encoded.len() == 3 && roundtrip,
        format!(
            "baseline {baseline} (want 7), coded {} (want 3), full decode {roundtrip}",
            encoded.len()
        ),
    )
}
