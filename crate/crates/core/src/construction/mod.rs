//! Bit-channel reliabilities and frozen-set design for the sliding-window
//! (SW), full-length (FULL) and independent-block (IND) code families.
//!
//! The sliding-window profile is computed in two steps: the kernel `W_S`
//! turns the transmission channel into `S` block channels (one per window),
//! then each block channel is polarized by `log2 M` classical stages.
//! Block `s` (0-based) occupies input indices `[s·M, (s+1)·M)`.

pub mod ga;

pub use ga::{check_node_mean, phi, phi_inv};

use crate::code::{CodeConfig, IndexSet};
use crate::error::{Error, Result};

/// Channel used to design the frozen set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DesignChannel {
    /// Binary erasure channel with erasure probability `erasure`.
    Bec { erasure: f64 },
    /// BPSK over AWGN at `ebn0_db` (Eb/N0, dB) for information rate `rate`.
    Awgn { ebn0_db: f64, rate: f64 },
}

impl DesignChannel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DesignChannel::Bec { erasure } if !(0.0..=1.0).contains(&erasure) => Err(
                Error::invalid("erasure", format!("{erasure} is not a probability")),
            ),
            DesignChannel::Awgn { rate, .. } if !(rate > 0.0 && rate <= 1.0) => {
                Err(Error::invalid("rate", format!("{rate} is outside (0, 1]")))
            }
            DesignChannel::Awgn { ebn0_db, .. } if !ebn0_db.is_finite() => {
                Err(Error::invalid("ebn0_db", "must be finite"))
            }
            _ => Ok(()),
        }
    }

    fn kind(&self) -> ReliabilityKind {
        match self {
            DesignChannel::Bec { .. } => ReliabilityKind::Erasure,
            DesignChannel::Awgn { .. } => ReliabilityKind::GaMean,
        }
    }

    /// Channel-level design parameter: erasure probability or LLR mean.
    fn base_value(&self) -> f64 {
        match *self {
            DesignChannel::Bec { erasure } => erasure,
            DesignChannel::Awgn { ebn0_db, rate } => channel_llr_mean(rate, ebn0_db),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReliabilityKind {
    /// Erasure probability / Bhattacharyya parameter; lower is better.
    Erasure,
    /// Gaussian-approximation LLR mean; higher is better.
    GaMean,
}

/// Per-input-bit reliability values.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityProfile {
    pub kind: ReliabilityKind,
    pub values: Vec<f64>,
}

impl ReliabilityProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Indices sorted from most to least reliable. Ties go to the lower index.
    pub fn reliability_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        let v = &self.values;
        match self.kind {
            ReliabilityKind::Erasure => order.sort_by(|&a, &b| v[a].total_cmp(&v[b])),
            ReliabilityKind::GaMean => order.sort_by(|&a, &b| v[b].total_cmp(&v[a])),
        }
        order
    }

    /// Frozen/information split keeping the `k` most reliable indices.
    pub fn select(&self, k: usize) -> Result<(IndexSet, IndexSet)> {
        let n = self.values.len();
        if k > n {
            return Err(Error::invalid("k", format!("{k} exceeds code length {n}")));
        }
        let order = self.reliability_order();
        let info = IndexSet::from_unsorted(order[..k].to_vec(), n)?;
        let frozen = IndexSet::from_unsorted(order[k..].to_vec(), n)?;
        Ok((frozen, info))
    }
}

/// Result of a code construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeDesign {
    pub profile: ReliabilityProfile,
    pub frozen: IndexSet,
    pub info: IndexSet,
}

fn check_probability(field: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{p} is outside [0, 1]")))
    }
}

fn check_window_count(s: usize) -> Result<()> {
    if s == 0 {
        Err(Error::invalid("s", "window count must be at least 1"))
    } else {
        Ok(())
    }
}

/// Erasure probabilities of the `S` block channels created by `W_S` over a
/// BEC(δ): `1 − (1−δ)(1−δ^i)` for block `i−1`, `i < S`, and `δ^S` for the last.
pub fn ws_block_erasures(s: usize, erasure: f64) -> Result<Vec<f64>> {
    check_window_count(s)?;
    check_probability("erasure", erasure)?;
    Ok(ws_block_recursion(s, erasure))
}

/// Same recursion on the Bhattacharyya parameter, used with equality as the
/// design value.
pub fn ws_block_bhattacharyya(s: usize, z: f64) -> Result<Vec<f64>> {
    check_window_count(s)?;
    check_probability("z", z)?;
    Ok(ws_block_recursion(s, z))
}

fn ws_block_recursion(s: usize, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(s);
    let mut power = z; // z^i
    for _ in 1..s {
        out.push(1.0 - (1.0 - z) * (1.0 - power));
        power *= z;
    }
    out.push(power);
    out
}

/// GA means of the `S` block channels for channel LLR mean `μ`:
/// block `i−1` gets `φ^{-1}(1 − (1−φ(μ))(1−φ(iμ)))` for `i < S`, the last
/// block gets `Sμ`.
pub fn ws_block_means(s: usize, mean: f64) -> Result<Vec<f64>> {
    check_window_count(s)?;
    if !(mean >= 0.0) {
        return Err(Error::invalid("mean", format!("{mean} is negative")));
    }
    let mut out: Vec<f64> = (1..s)
        .map(|i| check_node_mean(mean, i as f64 * mean))
        .collect();
    out.push(s as f64 * mean);
    Ok(out)
}

/// One polarization stage on erasure/Bhattacharyya values: each `z` becomes
/// `(2z − z², z²)`, degraded first.
pub fn polar_stage_erasure(profile: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * profile.len());
    for &z in profile {
        debug_assert!((0.0..=1.0).contains(&z));
        out.push((2.0 * z - z * z).clamp(0.0, 1.0));
        out.push(z * z);
    }
    out
}

/// One polarization stage on GA means: each `μ` becomes
/// `(φ^{-1}(1 − (1−φ(μ))²), 2μ)`, degraded first.
pub fn polar_stage_means(profile: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * profile.len());
    for &mu in profile {
        debug_assert!(mu >= 0.0);
        out.push(check_node_mean(mu, mu));
        out.push(2.0 * mu);
    }
    out
}

fn expand(kind: ReliabilityKind, blocks: Vec<f64>, stages: u32) -> Vec<f64> {
    // Expanding each block separately keeps block s in [s·M, (s+1)·M).
    let stage = match kind {
        ReliabilityKind::Erasure => polar_stage_erasure,
        ReliabilityKind::GaMean => polar_stage_means,
    };
    blocks
        .into_iter()
        .flat_map(|b| (0..stages).fold(vec![b], |acc, _| stage(&acc)))
        .collect()
}

fn finish(kind: ReliabilityKind, values: Vec<f64>, k: usize) -> Result<CodeDesign> {
    let profile = ReliabilityProfile { kind, values };
    let (frozen, info) = profile.select(k)?;
    Ok(CodeDesign {
        profile,
        frozen,
        info,
    })
}

/// Sliding-window construction for `T = W_S ⊗ T_M`.
pub fn design_sw(config: &CodeConfig) -> Result<CodeDesign> {
    let design = config.design();
    design.validate()?;
    let kind = design.kind();
    let base = design.base_value();
    let blocks = match kind {
        ReliabilityKind::Erasure => ws_block_erasures(config.s(), base)?,
        ReliabilityKind::GaMean => ws_block_means(config.s(), base)?,
    };
    finish(kind, expand(kind, blocks, config.log2_m()), config.k())
}

/// Classical construction for a length-`n` polar code `T_N`.
pub fn design_full(n: usize, k: usize, design: DesignChannel) -> Result<CodeDesign> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::invalid("n", format!("{n} is not a power of two")));
    }
    if k > n {
        return Err(Error::invalid("k", format!("{k} exceeds code length {n}")));
    }
    design.validate()?;
    let kind = design.kind();
    finish(kind, expand(kind, vec![design.base_value()], n.trailing_zeros()), k)
}

/// Information lengths of the `S` independent blocks: `⌊K/S⌋`, plus one for
/// the first `K mod S` blocks.
pub fn ind_block_dimensions(k: usize, s: usize) -> Vec<usize> {
    (0..s).map(|b| k / s + usize::from(b < k % s)).collect()
}

/// `S = N/M` independent length-`M` designs (IND strategy).
pub fn design_ind(n: usize, m: usize, k: usize, design: DesignChannel) -> Result<Vec<CodeDesign>> {
    let config = CodeConfig::new(n, m, k, design)?;
    // All blocks see the same channel, so one profile serves every dimension.
    ind_block_dimensions(k, config.s())
        .into_iter()
        .map(|ks| design_full(m, ks, design))
        .collect()
}

/// Mean of the channel LLRs for BPSK over AWGN: `4·R·10^{γ/10}`.
pub fn channel_llr_mean(rate: f64, ebn0_db: f64) -> f64 {
    4.0 * rate * 10f64.powf(ebn0_db / 10.0)
}
