//! Random topology and traffic generation for the simulator.
//!
//! A scenario fixes the mesh size (n nodes, m gateways), how coverage is
//! drawn, and how nodes transmit. Coverage modes:
//!
//! * **Rand** — each node reaches d gateways with d drawn uniformly from
//!   {1..m}, the subset chosen uniformly without replacement.
//! * **Equal { w }** — every node reaches exactly w gateways, subset
//!   again uniform.
//!
//! Traffic is Bernoulli: each node independently transmits one packet
//! per generation with probability `p_t`, payloads drawn uniformly over
//! the field. Reception inside coverage is deterministic — every gateway
//! that covers a transmitting node receives the packet (no channel loss
//! or collision model).

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::coding::{ConnectivityMatrix, NativePacket};
use crate::gf::Field;

/// Scenario validation errors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
}

/// How many gateways each node can reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectivityMode {
    /// Per-node reach drawn uniformly from {1..m}.
    Rand,
    /// Every node reaches exactly `w` gateways (1 <= w <= m).
    Equal { w: usize },
}

/// Full description of one simulated deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Sensor node count.
    pub n: usize,
    /// Gateway count; see [`ScenarioConfig::derived_gateways`] for the
    /// default sizing rule.
    pub m: usize,
    /// Per-node transmission probability per generation.
    pub p_t: f64,
    pub mode: ConnectivityMode,
    /// Payload symbol count per packet.
    pub payload_len: usize,
    /// Field exponent k for GF(2^k) coefficients and symbols.
    pub field_exp: u32,
    /// Root RNG seed; all randomness derives from it.
    pub seed: u64,
}

impl ScenarioConfig {
    /// Conventional gateway sizing: 5% of the node count, rounded to the
    /// nearest integer with a floor of one.
    pub fn derived_gateways(n: usize) -> usize {
        ((0.05 * n as f64).round() as usize).max(1)
    }

    /// Convenience constructor using the 5% gateway rule and defaults
    /// for payload length (8 symbols) and field (GF(2^7)).
    pub fn with_derived_gateways(n: usize, p_t: f64, mode: ConnectivityMode, seed: u64) -> Self {
        Self {
            n,
            m: Self::derived_gateways(n),
            p_t,
            mode,
            payload_len: 8,
            field_exp: Field::DEFAULT_EXP,
            seed,
        }
    }

    /// Checks every invariant; all generation entry points call this.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.n == 0 {
            return Err(ScenarioError::InvalidConfig("n must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(ScenarioError::InvalidConfig("m must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p_t) {
            return Err(ScenarioError::InvalidConfig(format!(
                "p_t = {} outside [0, 1]",
                self.p_t
            )));
        }
        if let ConnectivityMode::Equal { w } = self.mode {
            if w == 0 || w > self.m {
                return Err(ScenarioError::InvalidConfig(format!(
                    "connectivity factor w = {w} outside 1..={}",
                    self.m
                )));
            }
        }
        if self.payload_len == 0 {
            return Err(ScenarioError::InvalidConfig(
                "payload length must be at least 1 symbol".into(),
            ));
        }
        if !(2..=8).contains(&self.field_exp) {
            return Err(ScenarioError::InvalidConfig(format!(
                "field exponent {} outside 2..=8",
                self.field_exp
            )));
        }
        Ok(())
    }
}

/// One generation of traffic: who transmitted what, and which gateway
/// heard which node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub index: u32,
    /// Transmitting nodes, ascending.
    pub transmitted: Vec<usize>,
    /// Per gateway: transmitting nodes it covers, ascending. Reception is
    /// deterministic, so this is exactly transmitted ∩ coverage.
    pub receptions: Vec<Vec<usize>>,
    /// Payload symbols per transmitting node.
    pub payloads: BTreeMap<usize, Vec<u8>>,
}

impl Generation {
    /// Packets received by gateway `j`, ready for encoding.
    pub fn received_packets(&self, j: usize) -> Vec<NativePacket> {
        self.receptions[j]
            .iter()
            .map(|&node| NativePacket::new(node, self.index, self.payloads[&node].clone()))
            .collect()
    }

    /// Per-gateway reception lists for the whole mesh.
    pub fn all_received(&self) -> Vec<Vec<NativePacket>> {
        (0..self.receptions.len())
            .map(|j| self.received_packets(j))
            .collect()
    }
}

/// Draws a coverage matrix for the configured mode.
///
/// Per node (in index order): a reach count d — uniform over {1..m} for
/// Rand, exactly w for Equal — then a uniform d-subset of gateways.
pub fn gen_topology<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    rng: &mut R,
) -> Result<ConnectivityMatrix, ScenarioError> {
    config.validate()?;
    let mut c = ConnectivityMatrix::new(config.n, config.m);
    for node in 0..config.n {
        let d = match config.mode {
            ConnectivityMode::Rand => rng.gen_range(1..=config.m),
            ConnectivityMode::Equal { w } => w,
        };
        for j in rand::seq::index::sample(rng, config.m, d) {
            c.set(node, j, true);
        }
    }
    Ok(c)
}

/// Draws one generation of Bernoulli traffic over an existing topology.
///
/// Transmission decisions for all n nodes are drawn first, then payload
/// symbols for the transmitting nodes — so the transmitted set for a
/// given stream position is independent of payload length and field
/// size, and packet-count statistics can be compared across both.
pub fn gen_traffic<R: Rng + ?Sized>(
    config: &ScenarioConfig,
    topology: &ConnectivityMatrix,
    field: &Field,
    index: u32,
    rng: &mut R,
) -> Result<Generation, ScenarioError> {
    config.validate()?;
    if topology.nodes() != config.n || topology.gateways() != config.m {
        return Err(ScenarioError::InvalidConfig(format!(
            "topology is {}x{} but config says {}x{}",
            topology.nodes(),
            topology.gateways(),
            config.n,
            config.m
        )));
    }

    let transmitted: Vec<usize> = (0..config.n).filter(|_| rng.gen_bool(config.p_t)).collect();
    let mut payloads = BTreeMap::new();
    for &node in &transmitted {
        let payload: Vec<u8> = (0..config.payload_len)
            .map(|_| field.rand_symbol(rng))
            .collect();
        payloads.insert(node, payload);
    }

    let receptions: Vec<Vec<usize>> = (0..config.m)
        .map(|j| {
            transmitted
                .iter()
                .copied()
                .filter(|&i| topology.get(i, j))
                .collect()
        })
        .collect();

    Ok(Generation {
        index,
        transmitted,
        receptions,
        payloads,
    })
}
