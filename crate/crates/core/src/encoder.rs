//! Sliding-window polar encoding.
//!
//! Two routes produce the same codeword `x = u · (W_S ⊗ T_M)`:
//! [`encode_matrix`] multiplies by the explicit transform (reference, small
//! sizes only), [`encode_accumulate`] encodes each length-`M` block with the
//! butterfly and then XORs the partial codewords from the last window back
//! to the first.

use crate::code::{kronecker, make_ws_kernel, polar_transform, BitVector, CodeConfig, IndexSet};
use crate::error::{Error, Result};

/// Largest code length accepted by [`encode_matrix`].
pub const MATRIX_ENCODE_MAX_N: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodeResult {
    pub codeword: BitVector,
    /// `t^(1) … t^(S)`, each of length `M`.
    pub partials: Vec<BitVector>,
    /// Encoder time steps: `log2 M` butterfly stages plus `S` accumulation steps.
    pub steps: usize,
}

/// `x ← x · T_M` in place, natural order. `x.len()` must be a power of two.
pub(crate) fn polar_encode_in_place(x: &mut [u8]) {
    let n = x.len();
    let mut half = 1;
    while half < n {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
}

/// `u · T_M` over GF(2) in `O(M log M)`.
pub fn polar_encode_block(u: &[u8]) -> Result<BitVector> {
    if u.is_empty() || !u.len().is_power_of_two() {
        return Err(Error::invalid(
            "u_block",
            format!("length {} is not a power of two", u.len()),
        ));
    }
    let mut x = u.to_vec();
    polar_encode_in_place(&mut x);
    Ok(x)
}

/// Reference encoder: explicit multiplication by `W_S ⊗ T_M`.
pub fn encode_matrix(u: &[u8], config: &CodeConfig) -> Result<BitVector> {
    if config.n() > MATRIX_ENCODE_MAX_N {
        return Err(Error::Unsupported(format!(
            "matrix encoding is limited to N <= {MATRIX_ENCODE_MAX_N}, got {}",
            config.n()
        )));
    }
    Error::check_len("input vector", config.n(), u.len())?;
    let t = kronecker(&make_ws_kernel(config.s())?, &polar_transform(config.log2_m()));
    t.left_mul(u)
}

/// Encodes in place: per-window butterflies followed by a suffix XOR over
/// the windows.
pub(crate) fn encode_into(x: &mut [u8], m: usize) {
    for block in x.chunks_exact_mut(m) {
        polar_encode_in_place(block);
    }
    let s = x.len() / m;
    for w in (0..s.saturating_sub(1)).rev() {
        let (head, tail) = x.split_at_mut((w + 1) * m);
        for (a, b) in head[w * m..].iter_mut().zip(&tail[..m]) {
            *a ^= *b;
        }
    }
}

/// Block-accumulation encoder.
pub fn encode_accumulate(u: &[u8], config: &CodeConfig) -> Result<EncodeResult> {
    Error::check_len("input vector", config.n(), u.len())?;
    let m = config.m();
    let partials: Vec<BitVector> = u
        .chunks_exact(m)
        .map(|block| {
            let mut t = block.to_vec();
            polar_encode_in_place(&mut t);
            t
        })
        .collect();
    let mut steps = config.log2_m() as usize;

    let mut codeword = vec![0u8; config.n()];
    let mut acc = vec![0u8; m];
    for (w, t) in partials.iter().enumerate().rev() {
        for (a, b) in acc.iter_mut().zip(t) {
            *a ^= *b;
        }
        codeword[w * m..(w + 1) * m].copy_from_slice(&acc);
        steps += 1;
    }
    Ok(EncodeResult {
        codeword,
        partials,
        steps,
    })
}

/// Places message bits on the information indices (ascending); frozen bits are zero.
pub fn build_input(message: &[u8], info: &IndexSet) -> Result<BitVector> {
    Error::check_len("message", info.len(), message.len())?;
    if message.iter().any(|&b| b > 1) {
        return Err(Error::invalid("message", "bits must be 0 or 1"));
    }
    let mut u = vec![0u8; info.universe()];
    for (i, &bit) in info.iter().zip(message) {
        u[i] = bit;
    }
    Ok(u)
}

/// Reads the information positions of an input vector back out.
pub fn extract_message(u: &[u8], info: &IndexSet) -> BitVector {
    info.iter().map(|i| u[i]).collect()
}
