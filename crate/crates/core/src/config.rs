//! Plain-text run configuration: `[section]` headers over `key = value`
//! lines, with every key checked against the schema and diagnostics that
//! name the offending line and field.

use crate::comb::{AomSign, CombParams};
use crate::noise::NoiseConfig;
use crate::protocols::HeraldSpec;
use crate::pulse::PulseSpec;

/// What a simulation run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Heralded preparation plus a molecular-state readback, no qubit pulses.
    Prepare,
    /// Single-shot creation of the low qubit's entangled state, dumped to disk.
    PsiL,
    /// Single-shot creation of the high qubit's entangled state, dumped to disk.
    PsiH,
    ParityScanL,
    ParityScanH,
    PopulationL,
    PopulationH,
    /// User-supplied pulse list, measured through the low-qubit route.
    Custom,
}

impl Protocol {
    pub fn token(self) -> &'static str {
        match self {
            Protocol::Prepare => "prepare",
            Protocol::PsiL => "psi_L",
            Protocol::PsiH => "psi_H",
            Protocol::ParityScanL => "parity_scan_L",
            Protocol::ParityScanH => "parity_scan_H",
            Protocol::PopulationL => "population_L",
            Protocol::PopulationH => "population_H",
            Protocol::Custom => "custom",
        }
    }

    pub fn from_token(s: &str) -> Option<Protocol> {
        Some(match s {
            "prepare" => Protocol::Prepare,
            "psi_L" => Protocol::PsiL,
            "psi_H" => Protocol::PsiH,
            "parity_scan_L" => Protocol::ParityScanL,
            "parity_scan_H" => Protocol::ParityScanH,
            "population_L" => Protocol::PopulationL,
            "population_H" => Protocol::PopulationH,
            "custom" => Protocol::Custom,
            _ => return None,
        })
    }

    pub fn is_parity_scan(self) -> bool {
        matches!(self, Protocol::ParityScanL | Protocol::ParityScanH)
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `[section]` or `key = value`, got `{got}`")]
    Syntax { line: usize, got: String },
    #[error("line {line}: unknown section `[{name}]`")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: key `{key}` appears before any section header")]
    KeyOutsideSection { line: usize, key: String },
    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey { line: usize, section: String, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    Value { line: usize, key: String, reason: String },
    #[error("missing required key `{key}` in section [{section}]")]
    MissingKey { section: String, key: String },
    #[error("{0}")]
    Invalid(String),
}

/// Fully parsed and validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub protocol: Protocol,
    /// Analysis phases for parity scans, one fringe point each.
    pub phi_a: Vec<f64>,
    /// Valid-trial targets, aligned with `phi_a` for parity scans.
    pub targets: Vec<u64>,
    pub n_max: usize,
    pub herald: HeraldSpec,
    /// Hard cap on executed trials; 0 selects ten times the summed targets.
    pub budget: u64,
    /// Pulse list for the custom protocol.
    pub pulses: Vec<PulseSpec>,
    pub noise: NoiseConfig,
    pub comb: Option<CombParams>,
}

impl RunConfig {
    pub fn effective_budget(&self) -> u64 {
        if self.budget > 0 {
            self.budget
        } else {
            10 * self.targets.iter().sum::<u64>()
        }
    }
}

const EXPERIMENT_KEYS: &[&str] = &[
    "protocol",
    "phi_a",
    "targets",
    "n_max",
    "herald_max_attempt_pairs",
    "herald_confidence",
    "prior_minus32",
    "prior_minus52",
    "prior_leaked",
    "budget",
    "pulses",
];
const NOISE_KEYS: &[&str] = &[
    "nbar_m",
    "atom_coherence_time_us",
    "comb_coherence_time_us",
    "prep_error",
    "leak_per_pulse",
    "leak_per_trial",
    "detect_bright_mean",
    "detect_dark_mean",
    "detect_threshold",
    "rng_seed",
];
const COMB_KEYS: &[&str] = &["frep_hz", "faom_hz", "n", "sign", "brot_hz"];

fn parse_scalar<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    raw.parse::<T>().map_err(|e| ConfigError::Value {
        line,
        key: key.to_string(),
        reason: format!("`{raw}`: {e}"),
    })
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, raw: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_scalar(line, key, s))
        .collect()
}

/// Parse the configuration text. Unknown sections and keys are errors, as
/// are malformed values; semantic cross-checks run after the last line.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut protocol: Option<Protocol> = None;
    let mut phi_a: Vec<f64> = Vec::new();
    let mut targets: Vec<u64> = Vec::new();
    let mut n_max: usize = 8;
    let mut herald = HeraldSpec::default();
    let mut budget: u64 = 0;
    let mut pulses: Vec<PulseSpec> = Vec::new();
    let mut noise = NoiseConfig::default();

    let mut comb_frep: Option<u64> = None;
    let mut comb_faom: Option<u64> = None;
    let mut comb_n: Option<u64> = None;
    let mut comb_sign: Option<AomSign> = None;
    let mut comb_brot: Option<u64> = None;
    let mut saw_comb_section = false;

    let mut section: Option<String> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw_line.trim_end_matches('\r').trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim();
            match name {
                "experiment" | "noise" | "comb" => {
                    if name == "comb" {
                        saw_comb_section = true;
                    }
                    section = Some(name.to_string());
                }
                _ => return Err(ConfigError::UnknownSection { line, name: name.to_string() }),
            }
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError::Syntax { line, got: trimmed.to_string() });
        };
        let key = key.trim();
        let value = value.trim();
        let Some(section) = section.as_deref() else {
            return Err(ConfigError::KeyOutsideSection { line, key: key.to_string() });
        };

        match section {
            "experiment" => {
                if !EXPERIMENT_KEYS.contains(&key) {
                    return Err(ConfigError::UnknownKey {
                        line,
                        section: section.to_string(),
                        key: key.to_string(),
                    });
                }
                match key {
                    "protocol" => {
                        protocol = Some(Protocol::from_token(value).ok_or_else(|| {
                            ConfigError::Value {
                                line,
                                key: key.to_string(),
                                reason: format!("`{value}` is not a protocol name"),
                            }
                        })?);
                    }
                    "phi_a" => phi_a = parse_list(line, key, value)?,
                    "targets" => targets = parse_list(line, key, value)?,
                    "n_max" => n_max = parse_scalar(line, key, value)?,
                    "herald_max_attempt_pairs" => {
                        herald.max_attempt_pairs = parse_scalar(line, key, value)?
                    }
                    "herald_confidence" => herald.confidence = parse_scalar(line, key, value)?,
                    "prior_minus32" => herald.prior.p_minus32 = parse_scalar(line, key, value)?,
                    "prior_minus52" => herald.prior.p_minus52 = parse_scalar(line, key, value)?,
                    "prior_leaked" => herald.prior.p_leaked = parse_scalar(line, key, value)?,
                    "budget" => budget = parse_scalar(line, key, value)?,
                    "pulses" => {
                        pulses = value
                            .split(';')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .map(|s| {
                                PulseSpec::parse(s).map_err(|e| ConfigError::Value {
                                    line,
                                    key: key.to_string(),
                                    reason: e.to_string(),
                                })
                            })
                            .collect::<Result<_, _>>()?;
                    }
                    _ => unreachable!("key list covers the match"),
                }
            }
            "noise" => {
                if !NOISE_KEYS.contains(&key) {
                    return Err(ConfigError::UnknownKey {
                        line,
                        section: section.to_string(),
                        key: key.to_string(),
                    });
                }
                match key {
                    "nbar_m" => noise.nbar_m = parse_scalar(line, key, value)?,
                    "atom_coherence_time_us" => {
                        noise.atom_coherence_time_us = parse_scalar(line, key, value)?
                    }
                    "comb_coherence_time_us" => {
                        noise.comb_coherence_time_us = parse_scalar(line, key, value)?
                    }
                    "prep_error" => noise.prep_error = parse_scalar(line, key, value)?,
                    "leak_per_pulse" => noise.leak_per_pulse = parse_scalar(line, key, value)?,
                    "leak_per_trial" => noise.leak_per_trial = parse_scalar(line, key, value)?,
                    "detect_bright_mean" => {
                        noise.detect_bright_mean = parse_scalar(line, key, value)?
                    }
                    "detect_dark_mean" => noise.detect_dark_mean = parse_scalar(line, key, value)?,
                    "detect_threshold" => noise.detect_threshold = parse_scalar(line, key, value)?,
                    "rng_seed" => noise.rng_seed = parse_scalar(line, key, value)?,
                    _ => unreachable!("key list covers the match"),
                }
            }
            "comb" => {
                if !COMB_KEYS.contains(&key) {
                    return Err(ConfigError::UnknownKey {
                        line,
                        section: section.to_string(),
                        key: key.to_string(),
                    });
                }
                match key {
                    "frep_hz" => comb_frep = Some(parse_scalar(line, key, value)?),
                    "faom_hz" => comb_faom = Some(parse_scalar(line, key, value)?),
                    "n" => comb_n = Some(parse_scalar(line, key, value)?),
                    "sign" => {
                        comb_sign = Some(AomSign::from_token(value).ok_or_else(|| {
                            ConfigError::Value {
                                line,
                                key: key.to_string(),
                                reason: format!("`{value}` is not `+` or `-`"),
                            }
                        })?);
                    }
                    "brot_hz" => comb_brot = Some(parse_scalar(line, key, value)?),
                    _ => unreachable!("key list covers the match"),
                }
            }
            _ => unreachable!("section names are filtered at the header"),
        }
    }

    let protocol = protocol.ok_or_else(|| ConfigError::MissingKey {
        section: "experiment".into(),
        key: "protocol".into(),
    })?;

    let comb = if saw_comb_section {
        let require = |v: Option<u64>, key: &str| {
            v.ok_or_else(|| ConfigError::MissingKey { section: "comb".into(), key: key.into() })
        };
        Some(CombParams {
            frep_hz: require(comb_frep, "frep_hz")?,
            faom_hz: require(comb_faom, "faom_hz")?,
            n: require(comb_n, "n")?,
            sign: comb_sign.unwrap_or(AomSign::Minus),
            brot_hz: require(comb_brot, "brot_hz")?,
        })
    } else {
        None
    };

    let mut cfg =
        RunConfig { protocol, phi_a, targets, n_max, herald, budget, pulses, noise, comb };
    validate(&mut cfg)?;
    Ok(cfg)
}

/// Semantic checks and target broadcasting, applied after parsing.
fn validate(cfg: &mut RunConfig) -> Result<(), ConfigError> {
    if cfg.n_max < 2 {
        return Err(ConfigError::Invalid(format!(
            "n_max must be at least 2 to hold one sideband rung, got {}",
            cfg.n_max
        )));
    }
    if cfg.herald.max_attempt_pairs == 0 {
        return Err(ConfigError::Invalid("herald_max_attempt_pairs must be positive".into()));
    }
    if cfg.herald.confidence == 0 {
        return Err(ConfigError::Invalid("herald_confidence must be positive".into()));
    }
    cfg.herald.prior.validate().map_err(ConfigError::Invalid)?;
    cfg.noise.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;

    if cfg.protocol.is_parity_scan() {
        if cfg.phi_a.is_empty() {
            return Err(ConfigError::Invalid(
                "parity scans need at least one phi_a value".into(),
            ));
        }
        if cfg.targets.is_empty() {
            return Err(ConfigError::Invalid("parity scans need trial targets".into()));
        }
        if cfg.targets.len() == 1 && cfg.phi_a.len() > 1 {
            cfg.targets = vec![cfg.targets[0]; cfg.phi_a.len()];
        }
        if cfg.targets.len() != cfg.phi_a.len() {
            return Err(ConfigError::Invalid(format!(
                "{} targets cannot cover {} phi_a values",
                cfg.targets.len(),
                cfg.phi_a.len()
            )));
        }
    } else {
        if !cfg.phi_a.is_empty() {
            return Err(ConfigError::Invalid(format!(
                "protocol {} takes no phi_a values",
                cfg.protocol.token()
            )));
        }
        if cfg.targets.len() > 1 {
            return Err(ConfigError::Invalid(format!(
                "protocol {} takes a single target",
                cfg.protocol.token()
            )));
        }
        if cfg.targets.is_empty() {
            cfg.targets = vec![1];
        }
    }

    if cfg.protocol == Protocol::Custom {
        if cfg.pulses.is_empty() {
            return Err(ConfigError::Invalid("custom protocol needs a pulse list".into()));
        }
    } else if !cfg.pulses.is_empty() {
        return Err(ConfigError::Invalid(format!(
            "protocol {} does not accept a pulse list",
            cfg.protocol.token()
        )));
    }

    if cfg.targets.iter().all(|&t| t == 0) {
        return Err(ConfigError::Invalid("all targets are zero; nothing to simulate".into()));
    }
    Ok(())
}
