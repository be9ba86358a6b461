use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// How long sampled CSI stays valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiValidity {
    /// Valid for the longest admissible TTI.
    ConstantL,
    /// Uniform integer in `[min, max]` time units, drawn per pair.
    UniformRange(u32, u32),
}

impl fmt::Display for CsiValidity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CsiValidity::ConstantL => f.write_str("constant"),
            CsiValidity::UniformRange(a, b) => write!(f, "uniform:{a}:{b}"),
        }
    }
}

impl FromStr for CsiValidity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("constant") {
            return Ok(CsiValidity::ConstantL);
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [kind, lo, hi] if kind.eq_ignore_ascii_case("uniform") => {
                let lo: u32 = lo.parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
                let hi: u32 = hi.parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
                Ok(CsiValidity::UniformRange(lo, hi))
            }
            _ => Err(format!(
                "unknown CSI validity `{s}` (expected `constant` or `uniform:<min>:<max>`)"
            )),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Simulation parameters. Durations are integer time units except
/// `time_unit_ms`, which only converts results to physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub time_unit_ms: f64,
    pub tti_menu: Vec<u32>,
    /// Signaling time per TTI, in time units.
    pub overhead: f64,
    pub num_channels: usize,
    pub channel_bandwidth_hz: f64,
    pub mean_snr_db: f64,
    pub num_mcc_sources: usize,
    pub num_mbb_sources: usize,
    /// Arrival probability per MCC source and time unit.
    pub r_mcc: f64,
    /// Arrival probability per MBB source and time unit.
    pub r_mbb: f64,
    pub mcc_demand_bits: f64,
    pub mcc_deadline_units: u32,
    pub mbb_demand_bits: f64,
    pub mbb_deadline_units: u32,
    pub horizon_units: u64,
    pub seed: u64,
    pub csi_validity: CsiValidity,
    /// Draw one CSI value per TTI shared by every pair.
    pub flat_channels: bool,
    /// Node budget per call when the exact policy is used.
    pub exact_node_budget: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            time_unit_ms: 0.1,
            tti_menu: (2..=10).collect(),
            overhead: 0.5,
            num_channels: 16,
            channel_bandwidth_hz: 5e5,
            mean_snr_db: 5.0,
            num_mcc_sources: 3,
            num_mbb_sources: 1,
            r_mcc: 0.1,
            r_mbb: 0.2,
            mcc_demand_bits: 1000.0,
            mcc_deadline_units: 10,
            mbb_demand_bits: 9000.0,
            mbb_deadline_units: 100,
            horizon_units: 100_000,
            seed: 1,
            csi_validity: CsiValidity::ConstantL,
            flat_channels: false,
            exact_node_budget: crate::solvers::Policy::DEFAULT_EXACT_BUDGET,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        for (name, p) in [("r_mcc", self.r_mcc), ("r_mbb", self.r_mbb)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        let Some(&min_tti) = self.tti_menu.iter().min() else {
            return bad("tti_menu is empty".into());
        };
        if min_tti == 0 {
            return bad("TTI lengths must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.overhead) || self.overhead >= f64::from(min_tti) {
            return bad(format!(
                "overhead {} must lie in [0, 1] and below the shortest TTI {min_tti}",
                self.overhead
            ));
        }
        let max_deadline = self.mcc_deadline_units.max(self.mbb_deadline_units);
        if self.horizon_units < u64::from(max_deadline) {
            return bad(format!(
                "horizon {} is shorter than the longest deadline {max_deadline}",
                self.horizon_units
            ));
        }
        if self.mcc_deadline_units == 0 || self.mbb_deadline_units == 0 {
            return bad("deadlines must be >= 1".into());
        }
        if !(self.mcc_demand_bits > 0.0 && self.mbb_demand_bits > 0.0) {
            return bad("demands must be positive".into());
        }
        if !(self.time_unit_ms > 0.0 && self.channel_bandwidth_hz >= 0.0) {
            return bad("time unit must be positive and bandwidth non-negative".into());
        }
        if let CsiValidity::UniformRange(lo, hi) = self.csi_validity {
            if lo == 0 || lo > hi {
                return bad(format!(
                    "CSI validity range {lo}..{hi} is empty or includes 0"
                ));
            }
        }
        Ok(())
    }

    pub fn max_tti(&self) -> u32 {
        self.tti_menu.iter().copied().max().unwrap_or(1)
    }

    /// Parse `key = value` lines on top of the defaults. `#` starts a
    /// comment.
    pub fn from_kv_str(text: &str) -> Result<SimConfig, ConfigError> {
        let mut cfg = SimConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: idx + 1,
                    message: format!("expected `key = value`, found `{line}`"),
                });
            };
            cfg.set(key.trim(), value.trim()).map_err(|e| match e {
                ConfigError::BadValue { .. } | ConfigError::UnknownKey(_) => ConfigError::Syntax {
                    line: idx + 1,
                    message: e.to_string(),
                },
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: fmt::Display,
        {
            value.parse::<T>().map_err(|e| ConfigError::BadValue {
                key: key.into(),
                value: value.into(),
                reason: e.to_string(),
            })
        }
        match key {
            "time_unit_ms" => self.time_unit_ms = parse(key, value)?,
            "tti_menu" => {
                self.tti_menu = parse_menu(value).map_err(|reason| ConfigError::BadValue {
                    key: key.into(),
                    value: value.into(),
                    reason,
                })?
            }
            "overhead" | "overhead_units" => self.overhead = parse(key, value)?,
            "num_channels" => self.num_channels = parse(key, value)?,
            "channel_bandwidth_hz" => self.channel_bandwidth_hz = parse(key, value)?,
            "mean_snr_db" => self.mean_snr_db = parse(key, value)?,
            "num_mcc_sources" => self.num_mcc_sources = parse(key, value)?,
            "num_mbb_sources" => self.num_mbb_sources = parse(key, value)?,
            "r_mcc" => self.r_mcc = parse(key, value)?,
            "r_mbb" => self.r_mbb = parse(key, value)?,
            "mcc_demand_bits" => self.mcc_demand_bits = parse(key, value)?,
            "mcc_deadline_units" => self.mcc_deadline_units = parse(key, value)?,
            "mbb_demand_bits" => self.mbb_demand_bits = parse(key, value)?,
            "mbb_deadline_units" => self.mbb_deadline_units = parse(key, value)?,
            "horizon_units" => self.horizon_units = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "csi_validity" => self.csi_validity = parse(key, value)?,
            "flat_channels" => self.flat_channels = parse(key, value)?,
            "exact_node_budget" => self.exact_node_budget = parse(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.into())),
        }
        Ok(())
    }
}

/// `2..10`, `2..=10` or `2,3,5`.
pub(crate) fn parse_menu(value: &str) -> Result<Vec<u32>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad TTI length `{s}`"))
    };
    let mut menu = if let Some((a, b)) = value.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        (a..=b).collect()
    } else {
        value.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    menu.sort_unstable();
    menu.dedup();
    Ok(menu)
}
