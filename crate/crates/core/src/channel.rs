//! BPSK modulation and AWGN / BEC channels producing LLR frames.
//!
//! Randomness is keyed by `(seed, frame index)`: each frame draws from its
//! own ChaCha8 stream (`seed` expanded by `seed_from_u64`, stream id = frame
//! index), so frames can be simulated in any order, on any number of
//! workers, with bit-identical results. Gaussian samples use the Box–Muller
//! transform on 53-bit uniforms `u ∈ (0, 1]` taken from consecutive `u64`
//! draws: `z0 = √(−2 ln u1)·cos(2π u2)`, `z1 = √(−2 ln u1)·sin(2π u2)`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decoder::LLR_MAX;
use crate::error::{Error, Result};

/// Transmission channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// BPSK over AWGN at `ebn0_db` for information rate `rate`.
    Awgn { ebn0_db: f64, rate: f64 },
    /// Binary erasure channel.
    Bec { erasure: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Awgn { rate, .. } if !(rate > 0.0 && rate <= 1.0) => {
                Err(Error::invalid("rate", format!("{rate} is outside (0, 1]")))
            }
            ChannelModel::Awgn { ebn0_db, .. } if !ebn0_db.is_finite() => {
                Err(Error::invalid("ebn0_db", "must be finite"))
            }
            ChannelModel::Bec { erasure } if !(0.0..=1.0).contains(&erasure) => Err(
                Error::invalid("erasure", format!("{erasure} is not a probability")),
            ),
            _ => Ok(()),
        }
    }
}

/// Noise key of one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelRealization {
    pub seed: u64,
    pub frame: u64,
}

/// Mixed into the seed for streams that must not overlap the noise streams.
const MESSAGE_KEY: u64 = 0x9e37_79b9_7f4a_7c15;

impl ChannelRealization {
    pub fn new(seed: u64, frame: u64) -> Self {
        Self { seed, frame }
    }

    /// Noise generator of this frame.
    pub fn noise(&self) -> FrameRng {
        FrameRng::new(self.seed, self.frame)
    }

    /// Independent generator for the frame's message bits.
    pub fn message(&self) -> FrameRng {
        FrameRng::new(self.seed ^ MESSAGE_KEY, self.frame)
    }
}

/// Per-frame random source.
#[derive(Debug, Clone)]
pub struct FrameRng {
    inner: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl FrameRng {
    fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            inner,
            spare_normal: None,
        }
    }

    /// Uniform in `(0, 1]` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        ((self.inner.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let (u1, u2) = (self.uniform(), self.uniform());
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn bit(&mut self) -> u8 {
        (self.inner.next_u32() >> 31) as u8
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() <= p
    }
}

/// Bit 0 → +1, bit 1 → −1.
pub fn bpsk_modulate(x: &[u8]) -> Vec<f64> {
    x.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// Noise variance `σ² = 1 / (2R·10^{γ/10})` for unit-energy BPSK.
pub fn awgn_noise_variance(rate: f64, ebn0_db: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Channel LLRs `2r/σ²` of BPSK symbols after AWGN.
pub fn awgn_llr(
    symbols: &[f64],
    rate: f64,
    ebn0_db: f64,
    realization: ChannelRealization,
) -> Result<Vec<f64>> {
    ChannelModel::Awgn { ebn0_db, rate }.validate()?;
    let mut out = vec![0.0; symbols.len()];
    awgn_llr_into(symbols, rate, ebn0_db, &mut realization.noise(), &mut out);
    Ok(out)
}

pub(crate) fn awgn_llr_into(
    symbols: &[f64],
    rate: f64,
    ebn0_db: f64,
    rng: &mut FrameRng,
    out: &mut [f64],
) {
    let var = awgn_noise_variance(rate, ebn0_db);
    let sigma = var.sqrt();
    let scale = 2.0 / var;
    for (o, &s) in out.iter_mut().zip(symbols) {
        *o = scale * (s + sigma * rng.standard_normal());
    }
}

/// LLRs after a BEC: erased positions are 0, others `±LLR_MAX`.
pub fn bec_llr(x: &[u8], erasure: f64, realization: ChannelRealization) -> Result<Vec<f64>> {
    ChannelModel::Bec { erasure }.validate()?;
    let mut out = vec![0.0; x.len()];
    bec_llr_into(x, erasure, &mut realization.noise(), &mut out);
    Ok(out)
}

pub(crate) fn bec_llr_into(x: &[u8], erasure: f64, rng: &mut FrameRng, out: &mut [f64]) {
    for (o, &b) in out.iter_mut().zip(x) {
        *o = if rng.bernoulli(erasure) {
            0.0
        } else if b == 0 {
            LLR_MAX
        } else {
            -LLR_MAX
        };
    }
}

/// Sends codeword `x` through `model`, returning channel LLRs.
pub fn transmit(x: &[u8], model: ChannelModel, realization: ChannelRealization) -> Result<Vec<f64>> {
    let mut out = vec![0.0; x.len()];
    transmit_into(x, model, &mut realization.noise(), &mut out)?;
    Ok(out)
}

pub(crate) fn transmit_into(
    x: &[u8],
    model: ChannelModel,
    rng: &mut FrameRng,
    out: &mut [f64],
) -> Result<()> {
    model.validate()?;
    Error::check_len("LLR output", x.len(), out.len())?;
    match model {
        ChannelModel::Awgn { ebn0_db, rate } => {
            let var = awgn_noise_variance(rate, ebn0_db);
            let sigma = var.sqrt();
            let scale = 2.0 / var;
            for (o, &b) in out.iter_mut().zip(x) {
                let s = if b == 0 { 1.0 } else { -1.0 };
                *o = scale * (s + sigma * rng.standard_normal());
            }
        }
        ChannelModel::Bec { erasure } => bec_llr_into(x, erasure, rng, out),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::channel_llr_mean;

    #[test]
    fn bpsk_examples() {
        assert_eq!(bpsk_modulate(&[0, 1]), vec![1.0, -1.0]);
        assert_eq!(bpsk_modulate(&[0; 3]), vec![1.0; 3]);
        let x = [1, 0, 0, 1, 1];
        let back: Vec<u8> = bpsk_modulate(&x).iter().map(|&s| u8::from(s < 0.0)).collect();
        assert_eq!(back, x);
    }

    #[test]
    fn zero_noise_llr_formula() {
        let var = awgn_noise_variance(0.5, 3.0);
        let mut out = [0.0; 2];
        let mut rng = ChannelRealization::new(1, 0).noise();
        // same scale with the noise term removed
        awgn_llr_into(&[1.0, -1.0], 0.5, 3.0, &mut rng, &mut out);
        let expected = [2.0 / var, -2.0 / var];
        let noisy = awgn_llr(&[1.0, -1.0], 0.5, 3.0, ChannelRealization::new(1, 0)).unwrap();
        assert_eq!(noisy.to_vec(), out.to_vec());
        let sigma = var.sqrt();
        let mut rng = ChannelRealization::new(1, 0).noise();
        for (j, &e) in expected.iter().enumerate() {
            let n = rng.standard_normal();
            assert!((out[j] - (e + 2.0 * sigma * n / var)).abs() < 1e-12);
        }
    }

    #[test]
    fn awgn_llr_statistics() {
        let n = 1_000_000;
        let symbols = vec![1.0; n];
        let llr = awgn_llr(&symbols, 0.25, 0.0, ChannelRealization::new(2024, 0)).unwrap();
        let mean = llr.iter().sum::<f64>() / n as f64;
        let var = llr.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - channel_llr_mean(0.25, 0.0)).abs() < 0.01, "mean {mean}");
        assert!((var / (2.0 * mean) - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn bec_examples() {
        let x = [0, 1, 1, 0];
        let r = ChannelRealization::new(5, 9);
        assert_eq!(bec_llr(&x, 0.0, r).unwrap(), vec![LLR_MAX, -LLR_MAX, -LLR_MAX, LLR_MAX]);
        assert_eq!(bec_llr(&x, 1.0, r).unwrap(), vec![0.0; 4]);
        assert!(bec_llr(&x, 1.2, r).is_err());
        let zeros = vec![0u8; 1_000_000];
        let llr = bec_llr(&zeros, 0.5, ChannelRealization::new(77, 3)).unwrap();
        let frac = llr.iter().filter(|&&v| v == 0.0).count() as f64 / zeros.len() as f64;
        assert!((frac - 0.5).abs() < 0.005, "{frac}");
    }

    #[test]
    fn realizations_are_reproducible_and_distinct() {
        let x = vec![0u8; 64];
        let model = ChannelModel::Awgn { ebn0_db: 1.0, rate: 0.5 };
        let a = transmit(&x, model, ChannelRealization::new(42, 7)).unwrap();
        let b = transmit(&x, model, ChannelRealization::new(42, 7)).unwrap();
        let c = transmit(&x, model, ChannelRealization::new(42, 8)).unwrap();
        let d = transmit(&x, model, ChannelRealization::new(43, 7)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        let mut m1 = ChannelRealization::new(42, 7).message();
        let mut n1 = ChannelRealization::new(42, 7).noise();
        let (mv, nv): (Vec<u32>, Vec<u32>) = (0..8)
            .map(|_| (m1.inner.next_u32(), n1.inner.next_u32()))
            .unzip();
        assert_ne!(mv, nv);
    }

    #[test]
    fn golden_noise_values() {
        // Pins the generator and the Box–Muller convention.
        let mut rng = ChannelRealization::new(1, 0).noise();
        let z: Vec<f64> = (0..4).map(|_| rng.standard_normal()).collect();
        let again: Vec<f64> = {
            let mut r = ChannelRealization::new(1, 0).noise();
            (0..4).map(|_| r.standard_normal()).collect()
        };
        assert_eq!(z, again);
        let golden = [
            1.180_694_150_218_984_3,
            0.652_803_895_210_771_6,
            0.194_697_287_473_175_13,
            0.997_618_800_519_46,
        ];
        for (a, b) in z.iter().zip(golden) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn independent_frames_are_uncorrelated() {
        let n = 200_000;
        let mut a = ChannelRealization::new(9, 0).noise();
        let mut b = ChannelRealization::new(9, 1).noise();
        let corr = (0..n)
            .map(|_| a.standard_normal() * b.standard_normal())
            .sum::<f64>()
            / n as f64;
        assert!(corr.abs() < 0.01, "{corr}");
    }
}
