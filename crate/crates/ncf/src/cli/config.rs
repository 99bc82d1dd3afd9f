//! Configuration assembly: a flat `key = value` file, command-line
//! overrides, defaults, and validation down to a [`SweepSpec`].
//!
//! Recognized keys: `n`, `m`, `gateways_ratio`, `pt`, `mode`, `w`, `L`,
//! `gf_exp`, `trials`, `seed`, `sweep`, `sweep_values`, `output`. Blank
//! lines and `#` comments are ignored. A flag overrides the same key in
//! the file; `m` and `gateways_ratio` are mutually exclusive within one
//! source, and supplying either as a flag replaces both from the file.

use std::path::PathBuf;

use thiserror::Error;

use crate::gf::Field;
use crate::scenario::{ConnectivityMode, ScenarioConfig};

use super::{GatewaySpec, Sweep, SweepSpec, SweepVar};

/// Configuration errors, shown to the user verbatim.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    /// Unparseable file content, with its 1-based line number.
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// `m` and `gateways_ratio` given at the same precedence.
    #[error("both m and gateways_ratio specified; give one")]
    Conflict,
    /// A key required by the selected mode/command is absent.
    #[error("missing required key: {0}")]
    Missing(&'static str),
    /// A value parsed but fails a bound or cross-field rule.
    #[error("invalid {key}: {msg}")]
    Invalid { key: &'static str, msg: String },
}

/// One source's worth of settings; `None` means "not given here".
///
/// Both the config file and the flag set parse into this shape, so
/// merging is a per-key field-wise choice.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub gateways_ratio: Option<f64>,
    pub pt: Option<f64>,
    pub mode: Option<String>,
    pub w: Option<usize>,
    pub payload_len: Option<usize>,
    pub gf_exp: Option<u32>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub sweep: Option<String>,
    pub sweep_values: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
}

impl Overrides {
    /// Per-key merge: a key set in `flags` wins over the file. Supplying
    /// either gateway key as a flag drops both of the file's, so a flag
    /// `--m` cleanly replaces a file's `gateways_ratio` (and vice versa).
    pub fn merged_under(mut self, flags: &Overrides) -> Overrides {
        if flags.m.is_some() || flags.gateways_ratio.is_some() {
            self.m = None;
            self.gateways_ratio = None;
        }
        Overrides {
            n: flags.n.or(self.n),
            m: flags.m.or(self.m),
            gateways_ratio: flags.gateways_ratio.or(self.gateways_ratio),
            pt: flags.pt.or(self.pt),
            mode: flags.mode.clone().or(self.mode),
            w: flags.w.or(self.w),
            payload_len: flags.payload_len.or(self.payload_len),
            gf_exp: flags.gf_exp.or(self.gf_exp),
            trials: flags.trials.or(self.trials),
            seed: flags.seed.or(self.seed),
            sweep: flags.sweep.clone().or(self.sweep),
            sweep_values: flags.sweep_values.clone().or(self.sweep_values),
            output: flags.output.clone().or(self.output),
        }
    }
}

fn parse_value<T: std::str::FromStr>(
    line: usize,
    key: &str,
    value: &str,
) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Parse {
        line,
        msg: format!("cannot parse {key} value: {value:?}"),
    })
}

/// Parses comma-separated numbers, e.g. `100,200,300` or `0.1,0.5`.
pub(super) fn parse_value_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .map_err(|_| format!("cannot parse sweep value: {part:?}"))
        })
        .collect()
}

/// Parses the flat `key = value` config format.
///
/// Unknown and duplicate keys are rejected with their line number.
pub fn parse_config_file(text: &str) -> Result<Overrides, ConfigError> {
    let mut out = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                msg: format!("expected `key = value`, got {content:?}"),
            });
        };
        let key = key.trim();
        let value = value.trim();

        let duplicate = |line: usize, key: &str| ConfigError::Parse {
            line,
            msg: format!("duplicate key {key}"),
        };
        macro_rules! set {
            ($field:ident, $parsed:expr) => {{
                if out.$field.is_some() {
                    return Err(duplicate(line, key));
                }
                out.$field = Some($parsed);
            }};
        }

        match key {
            "n" => set!(n, parse_value(line, key, value)?),
            "m" => set!(m, parse_value(line, key, value)?),
            "gateways_ratio" => set!(gateways_ratio, parse_value(line, key, value)?),
            "pt" => set!(pt, parse_value(line, key, value)?),
            "mode" => set!(mode, value.to_ascii_lowercase()),
            "w" => set!(w, parse_value(line, key, value)?),
            "L" => set!(payload_len, parse_value(line, key, value)?),
            "gf_exp" => set!(gf_exp, parse_value(line, key, value)?),
            "trials" => set!(trials, parse_value(line, key, value)?),
            "seed" => set!(seed, parse_value(line, key, value)?),
            "sweep" => set!(sweep, value.to_ascii_lowercase()),
            "sweep_values" => set!(
                sweep_values,
                parse_value_list(value).map_err(|msg| ConfigError::Parse { line, msg })?
            ),
            "output" => set!(output, PathBuf::from(value)),
            other => {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("unknown key {other:?}"),
                });
            }
        }
    }
    if out.m.is_some() && out.gateways_ratio.is_some() {
        return Err(ConfigError::Conflict);
    }
    Ok(out)
}

/// Resolves file + flag overrides into a run plan.
///
/// `file` is the parsed config file (or `None` when only flags are
/// given); `flags` wins per key. Defaults: `pt` 0.5, `mode` rand, `L` 8,
/// `gf_exp` 7, `trials` 10000, `seed` 1, and the 5% gateway rule when
/// neither `m` nor `gateways_ratio` is given. `n` is required unless it
/// is the swept variable; `w` is required for equal mode unless swept.
pub fn parse_config(file: Option<&Overrides>, flags: &Overrides) -> Result<SweepSpec, ConfigError> {
    if flags.m.is_some() && flags.gateways_ratio.is_some() {
        return Err(ConfigError::Conflict);
    }
    let merged = match file {
        Some(f) => f.clone().merged_under(flags),
        None => flags.clone(),
    };

    let sweep = match (&merged.sweep, &merged.sweep_values) {
        (None, None) => None,
        (None, Some(_)) => return Err(ConfigError::Missing("sweep")),
        (Some(_), None) => return Err(ConfigError::Missing("sweep_values")),
        (Some(var), Some(values)) => {
            let variable = match var.as_str() {
                "n" => SweepVar::N,
                "pt" => SweepVar::Pt,
                "w" => SweepVar::W,
                other => {
                    return Err(ConfigError::Invalid {
                        key: "sweep",
                        msg: format!("unknown variable {other:?} (expected n, pt, or w)"),
                    });
                }
            };
            if values.is_empty() {
                return Err(ConfigError::Invalid {
                    key: "sweep_values",
                    msg: "at least one value required".into(),
                });
            }
            if values.windows(2).any(|p| p[0] >= p[1]) {
                return Err(ConfigError::Invalid {
                    key: "sweep_values",
                    msg: "values must be strictly ascending".into(),
                });
            }
            Some(Sweep {
                variable,
                values: values.clone(),
            })
        }
    };
    let swept = sweep.as_ref().map(|s| s.variable);

    let mode = match merged.mode.as_deref().unwrap_or("rand") {
        "rand" => ConnectivityMode::Rand,
        "equal" => {
            // The per-point value fills w in when it is the swept axis.
            let w = match (merged.w, swept) {
                (Some(w), _) => w,
                (None, Some(SweepVar::W)) => 1,
                (None, _) => return Err(ConfigError::Missing("w")),
            };
            ConnectivityMode::Equal { w }
        }
        other => {
            return Err(ConfigError::Invalid {
                key: "mode",
                msg: format!("unknown mode {other:?} (expected rand or equal)"),
            });
        }
    };
    if swept == Some(SweepVar::W) && !matches!(mode, ConnectivityMode::Equal { .. }) {
        return Err(ConfigError::Invalid {
            key: "sweep",
            msg: "sweeping w requires mode = equal".into(),
        });
    }

    let n = match (merged.n, swept, sweep.as_ref()) {
        (Some(n), _, _) => n,
        (None, Some(SweepVar::N), Some(s)) => s.values[0] as usize,
        (None, _, _) => return Err(ConfigError::Missing("n")),
    };

    let gateways = match (merged.m, merged.gateways_ratio) {
        (Some(m), None) => GatewaySpec::Count(m),
        (None, Some(r)) => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(ConfigError::Invalid {
                    key: "gateways_ratio",
                    msg: format!("{r} is not a positive finite ratio"),
                });
            }
            GatewaySpec::Ratio(r)
        }
        (None, None) => GatewaySpec::Ratio(0.05),
        (Some(_), Some(_)) => return Err(ConfigError::Conflict),
    };

    if let Some(s) = &sweep {
        let check_integral = |key: &'static str| {
            s.values
                .iter()
                .all(|v| v.fract() == 0.0 && *v >= 1.0)
                .then_some(())
                .ok_or(ConfigError::Invalid {
                    key,
                    msg: "values must be integers ≥ 1".into(),
                })
        };
        match s.variable {
            SweepVar::N => check_integral("sweep_values")?,
            SweepVar::W => check_integral("sweep_values")?,
            SweepVar::Pt => {
                if s.values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return Err(ConfigError::Invalid {
                        key: "sweep_values",
                        msg: "probabilities must lie in [0, 1]".into(),
                    });
                }
            }
        }
    }

    let base = ScenarioConfig {
        n,
        m: gateways.resolve(n),
        p_t: merged.pt.unwrap_or(0.5),
        mode,
        payload_len: merged.payload_len.unwrap_or(8),
        field_exp: merged.gf_exp.unwrap_or(Field::DEFAULT_EXP),
        seed: merged.seed.unwrap_or(1),
    };
    base.validate()
        .map_err(|crate::scenario::ScenarioError::InvalidConfig(msg)| ConfigError::Invalid {
            key: "scenario",
            msg,
        })?;

    // Swept w values must respect the resolved gateway count.
    if let Some(s) = &sweep {
        if s.variable == SweepVar::W {
            let m = base.m;
            if s.values.iter().any(|&v| v as usize > m) {
                return Err(ConfigError::Invalid {
                    key: "sweep_values",
                    msg: format!("connectivity factor exceeds gateway count {m}"),
                });
            }
        }
    }

    Ok(SweepSpec {
        sweep,
        base,
        gateways,
        trials: merged.trials.unwrap_or(10_000),
        output: merged.output,
    })
}
