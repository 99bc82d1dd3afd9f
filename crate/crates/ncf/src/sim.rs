//! Monte-Carlo comparison of coded forwarding against the
//! forward-every-copy baseline.
//!
//! Each trial draws a fresh topology, plays one generation of traffic
//! over it, and scores both schemes on identical receptions. Trials are
//! embarrassingly parallel; aggregation folds the per-trial results in
//! trial order, so a run is bit-for-bit reproducible for a fixed seed no
//! matter how many worker threads execute it.
//!
//! # Random streams
//!
//! All randomness derives from the config seed through per-(trial, phase)
//! ChaCha streams — see [`phase_rng`]. Splitting by phase means the
//! traffic drawn for trial t is the same regardless of topology mode,
//! connectivity factor, payload length, or field size, which makes
//! packet-count comparisons across those knobs exact rather than
//! statistical.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::coding::{
    decode_at_server, encode_at_gateway, generate_encoding_vectors, pure_forward, CodingError,
    ConnectivityMatrix, DecodeStatus, GatewayEncoder,
};
use crate::gf::{Field, GfError};
use crate::scenario::{gen_topology, gen_traffic, ScenarioConfig, ScenarioError};

/// Simulation errors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Gf(#[from] GfError),
    /// A recovered payload differs from what the node transmitted. This
    /// is a correctness failure of the pipeline itself (never a property
    /// of the scenario) and so is an error, unlike rank-deficient decodes
    /// which are ordinary partial results.
    #[error("trial {trial}: decoded payload for node {node} differs from the original")]
    DecodeCorruption { trial: u64, node: usize },
    /// Confidence intervals need at least two samples.
    #[error("need at least 2 trials, got {got}")]
    TooFewTrials { got: u64 },
}

/// Independent randomness phases within one trial.
pub mod phase {
    /// Coverage matrix draws.
    pub const TOPOLOGY: u64 = 0;
    /// Encoding-vector coefficient draws.
    pub const VECTORS: u64 = 1;
    /// Transmission decisions and payload symbols.
    pub const TRAFFIC: u64 = 2;
    /// Streams reserved per trial (one spare).
    pub const STRIDE: u64 = 4;
}

/// The RNG for one (trial, phase) pair: a ChaCha stream keyed by
/// `trial * STRIDE + phase` over the root seed. Streams are mutually
/// independent, so phases can be consumed in any interleaving without
/// affecting each other.
pub fn phase_rng(seed: u64, trial: u64, phase: u64) -> ChaCha8Rng {
    debug_assert!(phase < phase::STRIDE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial * phase::STRIDE + phase);
    rng
}

/// Both schemes' packet counts for one generation, plus decode health.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    /// Encoded packets the gateways sent upstream.
    pub packets_ncf: usize,
    /// Raw copies the baseline would have sent for the same receptions.
    pub packets_lorawan: usize,
    pub decode_status: DecodeStatus,
    /// Nodes the decode could not pin down (0 unless status is partial).
    pub unrecovered_count: usize,
}

/// Mean/CI summary over a batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub trials: u64,
    pub mean_ncf: f64,
    pub mean_lorawan: f64,
    /// 95% half-widths under the normal approximation: 1.96·s/√trials.
    pub ci95_ncf: f64,
    pub ci95_lorawan: f64,
    /// 1 − mean_ncf/mean_lorawan; 0 when nothing was forwarded at all.
    pub savings: f64,
    /// Fraction of trials whose decode hit no rank deficiency (status
    /// full or empty — an empty generation is not a failure).
    pub decode_success_rate: f64,
}

/// Runs one trial: fresh topology, fresh vectors, one generation.
///
/// The decode result is verified against the transmitted ground truth
/// symbol by symbol; any mismatch aborts with
/// [`SimError::DecodeCorruption`].
pub fn run_trial(config: &ScenarioConfig, trial: u64) -> Result<TrialResult, SimError> {
    config.validate()?;
    let field = Field::with_exponent(config.field_exp)?;
    run_trial_with_field(config, &field, trial)
}

fn run_trial_with_field(
    config: &ScenarioConfig,
    field: &Field,
    trial: u64,
) -> Result<TrialResult, SimError> {
    let mut topo_rng = phase_rng(config.seed, trial, phase::TOPOLOGY);
    let topology = gen_topology(config, &mut topo_rng)?;
    evaluate_topology(config, &topology, field, trial)
}

/// Scores both schemes for one generation over a fixed topology,
/// using the trial's vector and traffic streams.
///
/// This is [`run_trial`] minus the topology draw; it exists so known
/// meshes (e.g. [`ConnectivityMatrix::toy`]) can be pushed through the
/// full pipeline deterministically.
pub fn evaluate_topology(
    config: &ScenarioConfig,
    topology: &ConnectivityMatrix,
    field: &Field,
    trial: u64,
) -> Result<TrialResult, SimError> {
    let mut vec_rng = phase_rng(config.seed, trial, phase::VECTORS);
    let (_, vectors) = generate_encoding_vectors(topology, field, &mut vec_rng);

    let mut traffic_rng = phase_rng(config.seed, trial, phase::TRAFFIC);
    let generation = gen_traffic(config, topology, field, 0, &mut traffic_rng)?;

    let received = generation.all_received();
    let packets_lorawan = pure_forward(&received);

    let mut encoded = Vec::new();
    for (j, heard) in received.iter().enumerate() {
        encoded.extend(encode_at_gateway(j, vectors.for_gateway(j), heard, field)?);
    }
    let packets_ncf = encoded.len();

    let decoded = decode_at_server(&encoded, field)?;
    for (node, payload) in &decoded.recovered {
        if generation.payloads.get(node) != Some(payload) {
            return Err(SimError::DecodeCorruption {
                trial,
                node: *node,
            });
        }
    }

    Ok(TrialResult {
        packets_ncf,
        packets_lorawan,
        decode_status: decoded.status,
        unrecovered_count: decoded.unrecovered.len(),
    })
}

/// Runs a fixed topology for several consecutive generations with
/// persistent per-gateway encoders, so vector consumption carries over
/// (and wraps) across generations. Returns one result per generation.
pub fn run_generations(
    config: &ScenarioConfig,
    trial: u64,
    generations: u32,
) -> Result<Vec<TrialResult>, SimError> {
    config.validate()?;
    let field = Field::with_exponent(config.field_exp)?;

    let mut topo_rng = phase_rng(config.seed, trial, phase::TOPOLOGY);
    let topology = gen_topology(config, &mut topo_rng)?;

    let mut vec_rng = phase_rng(config.seed, trial, phase::VECTORS);
    let (_, vectors) = generate_encoding_vectors(&topology, &field, &mut vec_rng);
    let mut encoders: Vec<GatewayEncoder> = (0..config.m)
        .map(|j| GatewayEncoder::new(j, vectors.for_gateway(j).to_vec()))
        .collect();

    let mut traffic_rng = phase_rng(config.seed, trial, phase::TRAFFIC);
    let mut out = Vec::with_capacity(generations as usize);
    for index in 0..generations {
        let generation = gen_traffic(config, &topology, &field, index, &mut traffic_rng)?;
        let received = generation.all_received();
        let packets_lorawan = pure_forward(&received);

        let mut encoded = Vec::new();
        for (j, enc) in encoders.iter_mut().enumerate() {
            encoded.extend(enc.encode(&received[j], &field)?);
        }
        let packets_ncf = encoded.len();

        let decoded = decode_at_server(&encoded, &field)?;
        for (node, payload) in &decoded.recovered {
            if generation.payloads.get(node) != Some(payload) {
                return Err(SimError::DecodeCorruption {
                    trial,
                    node: *node,
                });
            }
        }
        out.push(TrialResult {
            packets_ncf,
            packets_lorawan,
            decode_status: decoded.status,
            unrecovered_count: decoded.unrecovered.len(),
        });
    }
    Ok(out)
}

/// Runs `trials` independent trials and aggregates the packet counts.
///
/// Trials fan out over the rayon pool; results are collected in trial
/// order and folded sequentially, so the statistics are bit-identical
/// across thread counts.
pub fn run_experiment(config: &ScenarioConfig, trials: u64) -> Result<AggregateStats, SimError> {
    if trials < 2 {
        return Err(SimError::TooFewTrials { got: trials });
    }
    config.validate()?;
    let field = Field::with_exponent(config.field_exp)?;

    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial_with_field(config, &field, t))
        .collect::<Result<_, _>>()?;

    Ok(aggregate(&results))
}

/// Folds per-trial counts into means, CI half-widths, and rates.
pub fn aggregate(results: &[TrialResult]) -> AggregateStats {
    let trials = results.len() as u64;
    let n = results.len() as f64;

    let mut sum_ncf = 0.0;
    let mut sum_lw = 0.0;
    let mut ok = 0u64;
    for r in results {
        sum_ncf += r.packets_ncf as f64;
        sum_lw += r.packets_lorawan as f64;
        if r.decode_status != DecodeStatus::Partial {
            ok += 1;
        }
    }
    let mean_ncf = sum_ncf / n;
    let mean_lorawan = sum_lw / n;

    let mut ss_ncf = 0.0;
    let mut ss_lw = 0.0;
    for r in results {
        let d = r.packets_ncf as f64 - mean_ncf;
        ss_ncf += d * d;
        let d = r.packets_lorawan as f64 - mean_lorawan;
        ss_lw += d * d;
    }
    let ci = |ss: f64| {
        if trials < 2 {
            return 0.0;
        }
        let s = (ss / (n - 1.0)).sqrt();
        1.96 * s / n.sqrt()
    };

    let savings = if mean_lorawan == 0.0 {
        0.0
    } else {
        1.0 - mean_ncf / mean_lorawan
    };

    AggregateStats {
        trials,
        mean_ncf,
        mean_lorawan,
        ci95_ncf: ci(ss_ncf),
        ci95_lorawan: ci(ss_lw),
        savings,
        decode_success_rate: ok as f64 / n,
    }
}
