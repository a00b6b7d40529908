//! Merges command-line flags with an optional `key=value` config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use polar_swin::analysis::{ChannelKind, DecoderKind, Scenario, StopRule, Strategy, Transmission};
use polar_swin::sliding_window::ListScope;
use polar_swin::BoxplusMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Sw,
    Ind,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Sc,
    Scl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Awgn,
    Bec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Carried,
    #[value(name = "per_window", alias = "per-window")]
    PerWindow,
}

/// Flags shared by every subcommand. All are optional here so that a config
/// file can supply them.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// `key=value` file with defaults for any of these flags
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// code length N
    #[arg(long)]
    pub n: Option<usize>,
    /// window (component code) length M
    #[arg(long)]
    pub m: Option<usize>,
    /// number of information bits K
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    #[arg(long, value_enum)]
    pub decoder: Option<DecoderArg>,
    #[arg(long)]
    pub list_size: Option<usize>,
    #[arg(long, value_enum)]
    pub channel: Option<ChannelArg>,
    /// design Eb/N0 in dB (erasure probability for BEC)
    #[arg(long, allow_hyphen_values = true)]
    pub design_snr: Option<f64>,
    /// Eb/N0 points in dB (erasure probabilities for BEC): `a,b,c` or `start:stop:step`
    #[arg(long, allow_hyphen_values = true)]
    pub ebn0: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_frames: Option<u64>,
    #[arg(long)]
    pub max_errors: Option<u64>,
    /// output file (or directory for `construct`)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// analytic SC curves only, no simulation
    #[arg(long)]
    pub bound_only: bool,
    /// min-sum boxplus instead of the exact one
    #[arg(long)]
    pub minsum: bool,
    #[arg(long, value_enum)]
    pub list_scope: Option<ScopeArg>,
}

const KEYS: &[&str] = &[
    "n", "m", "k", "strategy", "decoder", "list-size", "channel", "design-snr", "ebn0", "seed",
    "max-frames", "max-errors", "out", "bound-only", "minsum", "list-scope",
];

/// Parses a config file: `key = value` lines, `#` comments, keys as the
/// long flag names (`_` and `-` are interchangeable).
pub fn parse_config(text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {line_no}: expected `key=value`"))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            bail!("config line {line_no}: unknown key `{key}`");
        }
        map.insert(key, (line_no, value.trim().to_string()));
    }
    Ok(map)
}

fn config_value<T: std::str::FromStr>(
    map: &BTreeMap<String, (usize, String)>,
    key: &str,
) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some((line, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| anyhow!("config line {line}: invalid value `{v}` for `{key}`")),
    }
}

fn config_enum<T: ValueEnum>(map: &BTreeMap<String, (usize, String)>, key: &str) -> Result<Option<T>> {
    match map.get(key) {
        None => Ok(None),
        Some((line, v)) => T::from_str(v, true)
            .map(Some)
            .map_err(|_| anyhow!("config line {line}: invalid value `{v}` for `{key}`")),
    }
}

impl CommonArgs {
    /// Fills unset flags from the config file, if any.
    pub fn merged(mut self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("config: cannot read `{}`", path.display()))?;
        let map = parse_config(&text).with_context(|| format!("config `{}`", path.display()))?;
        let c = &map;
        self.n = self.n.or(config_value(c, "n")?);
        self.m = self.m.or(config_value(c, "m")?);
        self.k = self.k.or(config_value(c, "k")?);
        self.strategy = self.strategy.or(config_enum(c, "strategy")?);
        self.decoder = self.decoder.or(config_enum(c, "decoder")?);
        self.list_size = self.list_size.or(config_value(c, "list-size")?);
        self.channel = self.channel.or(config_enum(c, "channel")?);
        self.design_snr = self.design_snr.or(config_value(c, "design-snr")?);
        self.ebn0 = self.ebn0.or(config_value(c, "ebn0")?);
        self.seed = self.seed.or(config_value(c, "seed")?);
        self.max_frames = self.max_frames.or(config_value(c, "max-frames")?);
        self.max_errors = self.max_errors.or(config_value(c, "max-errors")?);
        self.out = self.out.or(config_value(c, "out")?);
        self.bound_only |= config_value(c, "bound-only")?.unwrap_or(false);
        self.minsum |= config_value(c, "minsum")?.unwrap_or(false);
        self.list_scope = self.list_scope.or(config_enum(c, "list-scope")?);
        Ok(self)
    }

    fn required<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| anyhow!("missing `{name}`"))
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let n = Self::required(self.n, "n")?;
        let m = Self::required(self.m, "m")?;
        let k = Self::required(self.k, "k")?;
        let transmission = match self.strategy.unwrap_or(StrategyArg::Sw) {
            StrategyArg::Sw => Transmission::Sw,
            StrategyArg::Ind => Transmission::Ind,
            StrategyArg::Full => Transmission::Full,
        };
        let decoder = match self.decoder.unwrap_or(DecoderArg::Sc) {
            DecoderArg::Sc => {
                if self.list_size.is_some_and(|l| l != 1) {
                    bail!("invalid argument `list-size`: SC decoding has list size 1");
                }
                DecoderKind::Sc
            }
            DecoderArg::Scl => DecoderKind::Scl {
                list_size: self.list_size.unwrap_or(8),
            },
        };
        let channel = match self.channel.unwrap_or(ChannelArg::Awgn) {
            ChannelArg::Awgn => ChannelKind::Awgn,
            ChannelArg::Bec => ChannelKind::Bec,
        };
        let mut scenario =
            Scenario::for_channel(channel, n, m, k, Strategy::new(transmission, decoder))?;
        scenario.mode = if self.minsum {
            BoxplusMode::MinSum
        } else {
            BoxplusMode::Exact
        };
        scenario.list_scope = match self.list_scope.unwrap_or(ScopeArg::Carried) {
            ScopeArg::Carried => ListScope::Carried,
            ScopeArg::PerWindow => ListScope::PerWindow,
        };
        scenario.design_point = self.design_snr;
        Ok(scenario)
    }

    /// The design point for commands that build one code.
    pub fn design_point(&self) -> Result<f64> {
        if let Some(p) = self.design_snr {
            return Ok(p);
        }
        match self.points()?.first() {
            Some(&p) => Ok(p),
            None => bail!("missing `design-snr`"),
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        match &self.ebn0 {
            None => Ok(Vec::new()),
            Some(s) => parse_points(s),
        }
    }

    pub fn stop_rule(&self) -> StopRule {
        let d = StopRule::default();
        StopRule {
            max_frames: self.max_frames.unwrap_or(d.max_frames),
            max_errors: self.max_errors.unwrap_or(d.max_errors),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

/// `a,b,c` or `start:stop:step` (inclusive of `stop` up to rounding).
pub fn parse_points(s: &str) -> Result<Vec<f64>> {
    let bad = |v: &str| anyhow!("invalid argument `ebn0`: `{v}` is not a number");
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, step] = parts[..] else {
            bail!("invalid argument `ebn0`: expected `start:stop:step`");
        };
        let (a, b, step): (f64, f64, f64) = (
            a.parse().map_err(|_| bad(a))?,
            b.parse().map_err(|_| bad(b))?,
            step.parse().map_err(|_| bad(step))?,
        );
        if !(step > 0.0) || b < a {
            bail!("invalid argument `ebn0`: need start <= stop and step > 0");
        }
        let count = ((b - a) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| a + i as f64 * step).collect());
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| bad(v.trim())))
        .collect()
}
