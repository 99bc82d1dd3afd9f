//! Network-coded uplink forwarding for LoRaWAN-style gateway meshes.

pub mod cli;
pub mod coding;
pub mod gf;
pub mod scenario;
pub mod sim;

pub use cli::{
    emit_csv, format_significant, format_stats, gnuplot_script, parse_config, parse_config_file,
    preset_spec, run_preset, run_sweep, selftest, Check, CliError, ConfigError, GatewaySpec,
    Overrides, Preset, Sweep, SweepRow, SweepSpec, SweepVar,
};

pub use coding::{
    analytic_bound, decode_at_server, encode_at_gateway, generate_encoding_vectors,
    infer_connectivity, pure_forward, BandwidthBound, CodingError, ConnectivityMatrix,
    DecodeResult, DecodeStatus, EncodedPacket, EncodingVectorSet, GatewayEncoder, NativePacket,
    OwnershipAssignment,
};
pub use gf::{mat_solve, Field, GfError, Matrix, RankReport, Solve};
pub use scenario::{
    gen_topology, gen_traffic, ConnectivityMode, Generation, ScenarioConfig, ScenarioError,
};
pub use sim::{
    aggregate, evaluate_topology, phase_rng, run_experiment, run_generations, run_trial,
    AggregateStats, SimError, TrialResult,
};
