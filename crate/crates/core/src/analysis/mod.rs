//! BLER bounds, target-SNR search and Monte Carlo simulation of the SW, IND
//! and FULL transmission strategies.

mod simulation;

pub use simulation::{
    bound_sweep, csv_header, monte_carlo_bler, snr_sweep, write_csv, FrameSimulator, StopRule,
    StrategyCodec,
};

use std::fmt;
use std::str::FromStr;

use statrs::function::erf::erfc;

use crate::code::{CodeConfig, IndexSet};
use crate::construction::{
    design_full, design_ind, design_sw, CodeDesign, DesignChannel, ReliabilityKind,
    ReliabilityProfile,
};
use crate::decoder::BoxplusMode;
use crate::error::{Error, Result};
use crate::sliding_window::ListScope;

/// How the `K` message bits are sent over `N` channel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transmission {
    /// One sliding-window code `W_S ⊗ T_M`, decoded window by window.
    Sw,
    /// `S` independent length-`M` polar codes; the frame fails if any block fails.
    Ind,
    /// One length-`N` polar code decoded at full length.
    Full,
}

impl Transmission {
    pub fn as_str(&self) -> &'static str {
        match self {
            Transmission::Sw => "sw",
            Transmission::Ind => "ind",
            Transmission::Full => "full",
        }
    }
}

impl fmt::Display for Transmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Transmission {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sw" => Ok(Transmission::Sw),
            "ind" => Ok(Transmission::Ind),
            "full" => Ok(Transmission::Full),
            _ => Err(Error::invalid("strategy", format!("unknown strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Sc,
    Scl { list_size: usize },
}

impl DecoderKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecoderKind::Sc => "sc",
            DecoderKind::Scl { .. } => "scl",
        }
    }

    /// List size, 1 for SC.
    pub fn list_size(&self) -> usize {
        match *self {
            DecoderKind::Sc => 1,
            DecoderKind::Scl { list_size } => list_size,
        }
    }
}

/// Transmission strategy plus decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub transmission: Transmission,
    pub decoder: DecoderKind,
}

impl Strategy {
    pub fn new(transmission: Transmission, decoder: DecoderKind) -> Self {
        Self {
            transmission,
            decoder,
        }
    }
}

/// Everything needed to simulate or bound one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub strategy: Strategy,
    pub mode: BoxplusMode,
    pub list_scope: ListScope,
    /// Fixed design point; `None` designs the code at every simulated point.
    pub design_point: Option<f64>,
    pub channel: ChannelKind,
}

/// Channel family of a scenario. The point parameter is Eb/N0 in dB for
/// AWGN and the erasure probability for BEC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelKind {
    #[default]
    Awgn,
    Bec,
}

impl Scenario {
    /// AWGN scenario with exact boxplus, carried list and design tracking the channel.
    pub fn new(n: usize, m: usize, k: usize, strategy: Strategy) -> Result<Self> {
        Self::for_channel(ChannelKind::Awgn, n, m, k, strategy)
    }

    /// As [`Scenario::new`] over the given channel family.
    pub fn for_channel(
        channel: ChannelKind,
        n: usize,
        m: usize,
        k: usize,
        strategy: Strategy,
    ) -> Result<Self> {
        let s = Self {
            n,
            m,
            k,
            strategy,
            mode: BoxplusMode::Exact,
            list_scope: ListScope::Carried,
            design_point: None,
            channel,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        CodeConfig::new(self.n, self.m, self.k, DesignChannel::Bec { erasure: 0.5 })?;
        if self.k == 0 && self.channel == ChannelKind::Awgn {
            // rate K/N enters the noise variance
            return Err(Error::invalid("k", "AWGN simulation needs K >= 1"));
        }
        if self.strategy.decoder.list_size() == 0 {
            return Err(Error::invalid("list_size", "must be at least 1"));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Design channel for a point parameter (Eb/N0 or erasure probability).
    pub fn design_channel(&self, point: f64) -> DesignChannel {
        let p = self.design_point.unwrap_or(point);
        match self.channel {
            ChannelKind::Awgn => DesignChannel::Awgn {
                ebn0_db: p,
                rate: self.rate(),
            },
            ChannelKind::Bec => DesignChannel::Bec { erasure: p },
        }
    }

    /// Code designs used at `point`: one for SW/FULL, `S` for IND.
    pub fn designs(&self, point: f64) -> Result<Vec<CodeDesign>> {
        let design = self.design_channel(point);
        match self.strategy.transmission {
            Transmission::Sw => {
                Ok(vec![design_sw(&CodeConfig::new(self.n, self.m, self.k, design)?)?])
            }
            Transmission::Full => Ok(vec![design_full(self.n, self.k, design)?]),
            Transmission::Ind => design_ind(self.n, self.m, self.k, design),
        }
    }
}

/// Source of a BLER value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSource {
    Bound,
    Simulation,
}

impl PointSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointSource::Bound => "bound",
            PointSource::Simulation => "simulation",
        }
    }
}

/// One point of a BLER curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlerPoint {
    /// Eb/N0 in dB (AWGN) or erasure probability (BEC).
    pub ebn0_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub bler: f64,
    pub source: PointSource,
}

impl BlerPoint {
    /// Relative standard error of the simulated estimate, `√((1−p)/errors)`.
    pub fn relative_std_error(&self) -> f64 {
        if self.errors == 0 {
            f64::INFINITY
        } else {
            ((1.0 - self.bler) / self.errors as f64).sqrt()
        }
    }
}

/// Gaussian tail probability `Q(x) = ½ erfc(x/√2)`.
pub fn q_func(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `Σ_{i∈I} Q(√(μ_i/2))`, clamped to `[0, 1]`.
pub fn sc_bler_bound(profile: &ReliabilityProfile, info: &IndexSet) -> Result<f64> {
    if profile.kind != ReliabilityKind::GaMean {
        return Err(Error::invalid("profile", "SC BLER bound needs GA means"));
    }
    Error::check_len("profile", info.universe(), profile.len())?;
    let sum: f64 = info
        .iter()
        .map(|i| q_func((profile.values[i] / 2.0).sqrt()))
        .sum();
    Ok(sum.clamp(0.0, 1.0))
}

/// `1 − (1 − p)^S` for `S` independent blocks of BLER `p`.
pub fn ind_bler_bound(p: f64, s: usize) -> f64 {
    1.0 - (1.0 - p).powi(s as i32)
}

/// Analytic SC BLER of a scenario at `ebn0_db` (AWGN only).
///
/// Information sets come from the scenario's design point; bit-channel
/// means are evaluated at `ebn0_db`.
pub fn bound_bler(scenario: &Scenario, ebn0_db: f64) -> Result<f64> {
    if scenario.channel != ChannelKind::Awgn {
        return Err(Error::Unsupported("bounds are available for AWGN only".into()));
    }
    if scenario.strategy.decoder != DecoderKind::Sc {
        return Err(Error::Unsupported("bounds exist for SC decoding only".into()));
    }
    let designs = scenario.designs(ebn0_db)?;
    let profiles = if scenario.design_point.is_some() {
        let at_channel = Scenario {
            design_point: None,
            ..*scenario
        };
        at_channel.designs(ebn0_db)?
    } else {
        designs.clone()
    };
    let per_block = designs
        .iter()
        .zip(&profiles)
        .map(|(d, p)| sc_bler_bound(&p.profile, &d.info))
        .collect::<Result<Vec<f64>>>()?;
    Ok(match scenario.strategy.transmission {
        Transmission::Ind => 1.0 - per_block.iter().map(|p| 1.0 - p).product::<f64>(),
        _ => per_block[0],
    })
}

/// Search bracket of [`target_snr`], in dB.
pub const TARGET_SNR_BRACKET: (f64, f64) = (-2.0, 12.0);

/// Smallest Eb/N0 (dB) at which the SC bound reaches `target_bler`, found
/// by bisection to a bracket narrower than `1e-4` dB.
pub fn target_snr(scenario: &Scenario, target_bler: f64) -> Result<f64> {
    let (mut lo, mut hi) = TARGET_SNR_BRACKET;
    if !(target_bler > 0.0 && target_bler < 1.0) {
        return Err(Error::invalid("target_bler", "must lie in (0, 1)"));
    }
    let (mut f_lo, mut f_hi) = (bound_bler(scenario, lo)?, bound_bler(scenario, hi)?);
    if !(f_lo >= target_bler && f_hi <= target_bler) {
        return Err(Error::NotBracketed {
            target: target_bler,
            lo,
            hi,
        });
    }
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        let f_mid = bound_bler(scenario, mid)?;
        if f_mid > f_lo * (1.0 + 1e-9) || f_mid < f_hi * (1.0 - 1e-9) {
            return Err(Error::NonMonotone(format!(
                "bound({mid:.4} dB) = {f_mid:e} outside [{f_hi:e}, {f_lo:e}]"
            )));
        }
        if f_mid > target_bler {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
