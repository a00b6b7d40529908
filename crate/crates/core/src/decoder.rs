//! LLR-domain successive-cancellation (SC) and SC-list (SCL) decoding of a
//! length-`M` polar code `T_M` in natural order.
//!
//! Both decoders share one iterative engine. Per path it keeps the LLRs of
//! every tree level in a flat array of length `2M` (level `λ` lives at
//! `[2^λ, 2^{λ+1})`, the channel at level `m`) and the partial sums of the
//! most recent left child of every level in an array of length `M`. Moving
//! from leaf `i − 1` to leaf `i` recomputes only levels `tz(i)` and below.

use crate::code::{BitVector, IndexSet};
use crate::error::{Error, Result};

/// Saturation magnitude used for certain bits (noiseless or unerased).
pub const LLR_MAX: f64 = 1e9;

/// Check-node (`⊞`) evaluation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxplusMode {
    /// `2 atanh(tanh(a/2) tanh(b/2))`, evaluated in a numerically stable form.
    #[default]
    Exact,
    /// `sgn(a) sgn(b) min(|a|, |b|)`.
    MinSum,
}

#[inline]
fn ln1p_exp_neg(x: f64) -> f64 {
    // ln(1 + e^{-x}) for x >= 0; negligible beyond ~40.
    if x > 40.0 {
        0.0
    } else {
        (-x).exp().ln_1p()
    }
}

/// `a ⊞ b`.
#[inline]
pub fn f_op(a: f64, b: f64, mode: BoxplusMode) -> f64 {
    let (aa, ab) = (a.abs(), b.abs());
    let min = aa.min(ab);
    let mag = match mode {
        BoxplusMode::MinSum => min,
        BoxplusMode::Exact => {
            // min + ln(1 + e^{-(|a|+|b|)}) - ln(1 + e^{-||a|-|b||}), with one log
            let d = (aa - ab).abs();
            if d > 40.0 {
                min
            } else {
                let s = aa + ab;
                let es = if s > 40.0 { 0.0 } else { (-s).exp() };
                (min + ((1.0 + es) / (1.0 + (-d).exp())).ln()).max(0.0)
            }
        }
    };
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// `(−1)^bit · a + b`, saturated to `±LLR_MAX`.
#[inline]
pub fn g_op(a: f64, b: f64, bit: u8) -> f64 {
    let v = if bit & 1 == 0 { b + a } else { b - a };
    v.clamp(-LLR_MAX, LLR_MAX)
}

/// Path-metric increment for deciding `bit` at a leaf with LLR `llr`.
///
/// Exact mode uses `ln(1 + e^{−(1−2·bit)·llr})`; min-sum mode uses its
/// hardware approximation `|llr|` when the decision opposes the LLR sign.
#[inline]
pub fn path_penalty(llr: f64, bit: u8, mode: BoxplusMode) -> f64 {
    let x = if bit == 0 { llr } else { -llr };
    match mode {
        BoxplusMode::Exact => (-x).max(0.0) + ln1p_exp_neg(x.abs()),
        BoxplusMode::MinSum => (-x).max(0.0),
    }
}

#[inline]
fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// One decoding hypothesis inside a window.
#[derive(Debug, Clone, Default)]
pub(crate) struct PathState {
    alpha: Vec<f64>,
    beta: Vec<u8>,
    pub(crate) decisions: Vec<u8>,
    pub(crate) metric: f64,
    /// Index of the starting hypothesis this path descends from.
    pub(crate) origin: usize,
}

impl PathState {
    fn new(m: usize) -> Self {
        Self {
            alpha: vec![0.0; 2 * m],
            beta: vec![0; m],
            decisions: vec![0; m],
            metric: 0.0,
            origin: 0,
        }
    }

    fn load(&mut self, llr: &[f64], metric: f64, origin: usize) {
        let m = llr.len();
        self.alpha[m..].copy_from_slice(llr);
        self.metric = metric;
        self.origin = origin;
    }

    /// LLR of leaf `i`; returns the number of level computations performed.
    fn leaf_llr(&mut self, i: usize, m_log: u32, mode: BoxplusMode) -> (f64, u64) {
        let mut steps = 0;
        let top = if i == 0 {
            m_log
        } else {
            // leaf i starts the right child at level tz(i)
            let t = i.trailing_zeros();
            let h = 1usize << t;
            let (lower, upper) = self.alpha.split_at_mut(2 * h);
            let child = &mut lower[h..];
            let parent = &upper[..2 * h];
            let left = &self.beta[h..2 * h];
            for j in 0..h {
                child[j] = g_op(parent[j], parent[j + h], left[j]);
            }
            steps += 1;
            t
        };
        for lam in (1..=top).rev() {
            let h = 1usize << (lam - 1);
            let (lower, upper) = self.alpha.split_at_mut(2 * h);
            let child = &mut lower[h..];
            let parent = &upper[..2 * h];
            match mode {
                BoxplusMode::Exact => {
                    for j in 0..h {
                        child[j] = f_op(parent[j], parent[j + h], BoxplusMode::Exact);
                    }
                }
                BoxplusMode::MinSum => {
                    for j in 0..h {
                        child[j] = f_op(parent[j], parent[j + h], BoxplusMode::MinSum);
                    }
                }
            }
            steps += 1;
        }
        (self.alpha[1], steps)
    }

    /// Records the decision for leaf `i` and propagates partial sums upward.
    fn commit(&mut self, i: usize, bit: u8, m_log: u32, scratch: &mut [u8]) {
        self.decisions[i] = bit;
        scratch[0] = bit;
        let mut lam = 0;
        while lam < m_log && (i >> lam) & 1 == 1 {
            let h = 1usize << lam;
            let left = &self.beta[h..2 * h];
            for j in 0..h {
                scratch[j + h] = scratch[j];
                scratch[j] ^= left[j];
            }
            lam += 1;
        }
        if lam < m_log {
            let h = 1usize << lam;
            self.beta[h..2 * h].copy_from_slice(&scratch[..h]);
        }
    }
}

fn check_block_len(len: usize) -> Result<u32> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::invalid(
            "llr",
            format!("length {len} is not a power of two"),
        ));
    }
    Ok(len.trailing_zeros())
}

/// Successive-cancellation decoder for length-`M` blocks.
///
/// Reusable across frames; counts one time step per tree-level computation
/// (`2M − 2` per block).
#[derive(Debug, Clone)]
pub struct ScDecoder {
    m: usize,
    m_log: u32,
    mode: BoxplusMode,
    path: PathState,
    scratch: Vec<u8>,
    steps: u64,
}

impl ScDecoder {
    pub fn new(m: usize, mode: BoxplusMode) -> Result<Self> {
        let m_log = check_block_len(m)?;
        Ok(Self {
            m,
            m_log,
            mode,
            path: PathState::new(m),
            scratch: vec![0; m],
            steps: 0,
        })
    }

    pub fn block_len(&self) -> usize {
        self.m
    }

    /// Time steps spent since construction or the last [`reset_steps`](Self::reset_steps).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn reset_steps(&mut self) {
        self.steps = 0;
    }

    /// Bytes held by the decoder's working arrays.
    pub fn working_memory_bytes(&self) -> usize {
        self.path.alpha.capacity() * std::mem::size_of::<f64>()
            + self.path.beta.capacity()
            + self.path.decisions.capacity()
            + self.scratch.capacity()
    }

    /// Decodes one block; `frozen[i]` marks frozen positions, which are set to 0.
    pub fn decode_into(&mut self, llr: &[f64], frozen: &[bool], out: &mut [u8]) -> Result<()> {
        Error::check_len("llr", self.m, llr.len())?;
        Error::check_len("frozen mask", self.m, frozen.len())?;
        Error::check_len("output", self.m, out.len())?;
        self.path.load(llr, 0.0, 0);
        for i in 0..self.m {
            let (a, steps) = self.path.leaf_llr(i, self.m_log, self.mode);
            self.steps += steps;
            let bit = if frozen[i] { 0 } else { hard_decision(a) };
            self.path.commit(i, bit, self.m_log, &mut self.scratch);
        }
        out.copy_from_slice(&self.path.decisions);
        Ok(())
    }

    /// Genie-aided pass: commits the true bits `u` and writes every leaf LLR
    /// (the LLR of `u_i` given `y` and `u_0 … u_{i−1}`) to `leaf_llr`.
    pub fn genie_into(&mut self, llr: &[f64], u: &[u8], leaf_llr: &mut [f64]) -> Result<()> {
        Error::check_len("llr", self.m, llr.len())?;
        Error::check_len("input bits", self.m, u.len())?;
        Error::check_len("leaf LLRs", self.m, leaf_llr.len())?;
        self.path.load(llr, 0.0, 0);
        for i in 0..self.m {
            let (a, steps) = self.path.leaf_llr(i, self.m_log, self.mode);
            self.steps += steps;
            leaf_llr[i] = a;
            self.path.commit(i, u[i] & 1, self.m_log, &mut self.scratch);
        }
        Ok(())
    }
}

/// SC decoding of one length-`M` block.
pub fn sc_decode(llr: &[f64], frozen: &IndexSet, mode: BoxplusMode) -> Result<BitVector> {
    Error::check_len("frozen set universe", llr.len(), frozen.universe())?;
    let mut dec = ScDecoder::new(llr.len(), mode)?;
    let mut out = vec![0; llr.len()];
    dec.decode_into(llr, &frozen.mask(), &mut out)?;
    Ok(out)
}

/// A surviving SCL hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderPath {
    pub decisions: BitVector,
    /// Accumulated penalty; lower is better.
    pub metric: f64,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    metric: f64,
    against_llr: bool,
    bit: u8,
    parent: usize,
}

/// SC-list decoder for length-`M` blocks.
///
/// A window decode may start from several hypotheses at once (each with its
/// own channel LLRs and metric); this is how the sliding-window decoder
/// carries its list across window boundaries.
#[derive(Debug, Clone)]
pub struct ListDecoder {
    m: usize,
    m_log: u32,
    list_size: usize,
    mode: BoxplusMode,
    paths: Vec<PathState>,
    pool: Vec<PathState>,
    scratch: Vec<u8>,
    llrs: Vec<f64>,
    candidates: Vec<Candidate>,
    keep: Vec<[bool; 2]>,
    steps: u64,
}

impl ListDecoder {
    pub fn new(m: usize, list_size: usize, mode: BoxplusMode) -> Result<Self> {
        let m_log = check_block_len(m)?;
        if list_size == 0 {
            return Err(Error::invalid("list_size", "must be at least 1"));
        }
        Ok(Self {
            m,
            m_log,
            list_size,
            mode,
            paths: Vec::with_capacity(list_size),
            pool: Vec::new(),
            scratch: vec![0; m],
            llrs: Vec::with_capacity(list_size),
            candidates: Vec::with_capacity(2 * list_size),
            keep: Vec::with_capacity(list_size),
            steps: 0,
        })
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn block_len(&self) -> usize {
        self.m
    }

    /// Level computations of one hypothesis (the list runs them in parallel).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn take_path(&mut self) -> PathState {
        self.pool.pop().unwrap_or_else(|| PathState::new(self.m))
    }

    /// Runs one block decode starting from `starts` (LLRs and initial metric
    /// per hypothesis). Afterwards [`paths`](Self::paths) yields the survivors.
    pub fn decode_window<'a, I>(&mut self, starts: I, frozen: &[bool]) -> Result<()>
    where
        I: IntoIterator<Item = (&'a [f64], f64)>,
    {
        Error::check_len("frozen mask", self.m, frozen.len())?;
        let mut old = std::mem::take(&mut self.paths);
        self.pool.append(&mut old);
        self.paths = old;
        for (origin, (llr, metric)) in starts.into_iter().enumerate() {
            Error::check_len("llr", self.m, llr.len())?;
            if self.paths.len() == self.list_size {
                return Err(Error::invalid("starts", "more hypotheses than the list size"));
            }
            let mut p = self.take_path();
            p.load(llr, metric, origin);
            self.paths.push(p);
        }
        if self.paths.is_empty() {
            return Err(Error::invalid("starts", "at least one hypothesis is required"));
        }

        for i in 0..self.m {
            self.llrs.clear();
            let mut steps = 0;
            for p in &mut self.paths {
                let (a, s) = p.leaf_llr(i, self.m_log, self.mode);
                self.llrs.push(a);
                steps = s;
            }
            self.steps += steps;

            if frozen[i] {
                for (p, &a) in self.paths.iter_mut().zip(&self.llrs) {
                    p.metric += path_penalty(a, 0, self.mode);
                    p.commit(i, 0, self.m_log, &mut self.scratch);
                }
                continue;
            }
            self.branch(i);
        }
        Ok(())
    }

    fn branch(&mut self, i: usize) {
        self.candidates.clear();
        for (parent, (p, &a)) in self.paths.iter().zip(&self.llrs).enumerate() {
            let hard = hard_decision(a);
            for bit in 0..2u8 {
                self.candidates.push(Candidate {
                    metric: p.metric + path_penalty(a, bit, self.mode),
                    against_llr: bit != hard,
                    bit,
                    parent,
                });
            }
        }
        if self.candidates.len() > self.list_size {
            self.candidates.sort_by(|x, y| {
                x.metric
                    .total_cmp(&y.metric)
                    .then(x.against_llr.cmp(&y.against_llr))
                    .then(x.bit.cmp(&y.bit))
                    .then(x.parent.cmp(&y.parent))
            });
            self.candidates.truncate(self.list_size);
        }
        self.keep.clear();
        self.keep.resize(self.paths.len(), [false; 2]);
        for c in &self.candidates {
            self.keep[c.parent][c.bit as usize] = true;
        }
        let mut metrics = [0.0f64; 2];
        let parents = std::mem::take(&mut self.paths);
        for (parent, mut path) in parents.into_iter().enumerate() {
            let a = self.llrs[parent];
            for (bit, slot) in metrics.iter_mut().enumerate() {
                *slot = path.metric + path_penalty(a, bit as u8, self.mode);
            }
            match self.keep[parent] {
                [false, false] => self.pool.push(path),
                [true, true] => {
                    let mut twin = self.pool.pop().unwrap_or_else(|| PathState::new(self.m));
                    twin.clone_from(&path);
                    path.metric = metrics[0];
                    path.commit(i, 0, self.m_log, &mut self.scratch);
                    twin.metric = metrics[1];
                    twin.commit(i, 1, self.m_log, &mut self.scratch);
                    self.paths.push(path);
                    self.paths.push(twin);
                }
                [keep0, _] => {
                    let bit = u8::from(!keep0);
                    path.metric = metrics[bit as usize];
                    path.commit(i, bit, self.m_log, &mut self.scratch);
                    self.paths.push(path);
                }
            }
        }
    }

    /// Number of live hypotheses.
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// `(decisions, metric, origin)` of every survivor.
    pub fn paths(&self) -> impl Iterator<Item = (&[u8], f64, usize)> + '_ {
        self.paths
            .iter()
            .map(|p| (p.decisions.as_slice(), p.metric, p.origin))
    }

    /// Index of the minimum-metric survivor (first one on ties).
    pub fn best(&self) -> usize {
        let mut best = 0;
        for (j, p) in self.paths.iter().enumerate() {
            if p.metric < self.paths[best].metric {
                best = j;
            }
        }
        best
    }

    pub fn path(&self, j: usize) -> (&[u8], f64, usize) {
        let p = &self.paths[j];
        (&p.decisions, p.metric, p.origin)
    }
}

/// SCL decoding of one length-`M` block. Returns the minimum-metric
/// decisions and all survivors.
pub fn scl_decode(
    llr: &[f64],
    frozen: &IndexSet,
    list_size: usize,
    mode: BoxplusMode,
) -> Result<(BitVector, Vec<DecoderPath>)> {
    Error::check_len("frozen set universe", llr.len(), frozen.universe())?;
    let mut dec = ListDecoder::new(llr.len(), list_size, mode)?;
    dec.decode_window(std::iter::once((llr, 0.0)), &frozen.mask())?;
    let paths: Vec<DecoderPath> = dec
        .paths()
        .map(|(d, metric, _)| DecoderPath {
            decisions: d.to_vec(),
            metric,
        })
        .collect();
    let best = paths[dec.best()].decisions.clone();
    Ok((best, paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::polar_encode_block;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn saturated(x: &[u8]) -> Vec<f64> {
        x.iter().map(|&b| if b == 0 { LLR_MAX } else { -LLR_MAX }).collect()
    }

    #[test]
    fn f_op_examples() {
        for mode in [BoxplusMode::Exact, BoxplusMode::MinSum] {
            assert_eq!(f_op(3.7, 0.0, mode), 0.0);
            assert_eq!(f_op(-2.0, 0.0, mode), 0.0);
        }
        assert_eq!(f_op(2.0, -3.0, BoxplusMode::MinSum), -2.0);
        for b in [-7.5, -0.3, 0.0, 1e-4, 2.0, 50.0] {
            assert!((f_op(LLR_MAX, b, BoxplusMode::Exact) - b).abs() < 1e-9);
        }
    }

    #[test]
    fn f_op_matches_tanh_form() {
        for &(a, b) in &[(0.5, 1.5), (-2.0, 3.0), (4.0, -0.1), (-8.0, -9.0), (12.0, 1.0)] {
            let tanh_form = 2.0 * ((a / 2.0f64).tanh() * (b / 2.0f64).tanh()).atanh();
            assert!((f_op(a, b, BoxplusMode::Exact) - tanh_form).abs() < 1e-12);
        }
    }

    #[test]
    fn g_op_examples() {
        assert_eq!(g_op(1.5, 2.0, 0), 3.5);
        assert_eq!(g_op(1.5, 2.0, 1), 0.5);
        assert_eq!(g_op(0.0, 2.0, 1), 2.0);
        assert_eq!(g_op(LLR_MAX, LLR_MAX, 0), LLR_MAX);
    }

    #[test]
    fn penalty_is_stable_for_saturated_llrs() {
        assert_eq!(path_penalty(LLR_MAX, 0, BoxplusMode::Exact), 0.0);
        assert_eq!(path_penalty(LLR_MAX, 1, BoxplusMode::Exact), LLR_MAX);
        assert!((path_penalty(0.0, 1, BoxplusMode::Exact) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(path_penalty(-2.0, 0, BoxplusMode::MinSum), 2.0);
        assert_eq!(path_penalty(-2.0, 1, BoxplusMode::MinSum), 0.0);
    }

    /// Bit-wise SC by brute force: each leaf LLR is computed from the
    /// probability of every completion of the remaining bits.
    fn sc_oracle(y: &[f64], frozen: &[bool]) -> Vec<u8> {
        let m = y.len();
        let mut u = vec![0u8; m];
        for i in 0..m {
            let mut p = [0.0f64; 2];
            let rest = m - i - 1;
            for bit in 0..2u8 {
                for tail in 0u32..(1 << rest) {
                    let mut w = u.clone();
                    w[i] = bit;
                    for j in 0..rest {
                        w[i + 1 + j] = ((tail >> j) & 1) as u8;
                    }
                    let x = polar_encode_block(&w).unwrap();
                    p[bit as usize] += x
                        .iter()
                        .zip(y)
                        .map(|(&b, &l)| 1.0 / (1.0 + (if b == 0 { -l } else { l }).exp()))
                        .product::<f64>();
                }
            }
            u[i] = if frozen[i] { 0 } else { u8::from(p[1] > p[0]) };
        }
        u
    }

    #[test]
    fn sc_matches_bruteforce_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [2usize, 4, 8] {
            for _ in 0..300 {
                let y: Vec<f64> = (0..m).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let frozen: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.4)).collect();
                let set = IndexSet::new((0..m).filter(|&i| frozen[i]).collect(), m).unwrap();
                assert_eq!(
                    sc_decode(&y, &set, BoxplusMode::Exact).unwrap(),
                    sc_oracle(&y, &frozen),
                    "y={y:?}"
                );
            }
        }
    }

    #[test]
    fn sc_worked_example_at_length_two() {
        // u_0 frozen: u_1 sees g(y_0, y_1, 0) = 4 > 0, so u_1 = 0.
        let frozen = IndexSet::new(vec![0], 2).unwrap();
        assert_eq!(sc_decode(&[-1.0, 5.0], &frozen, BoxplusMode::Exact).unwrap(), vec![0, 0]);
        assert_eq!(sc_oracle(&[-1.0, 5.0], &[true, false]), vec![0, 0]);
        // with y_0 = -6 the combined LLR -1 flips u_1
        assert_eq!(sc_decode(&[-6.0, 5.0], &frozen, BoxplusMode::Exact).unwrap(), vec![0, 1]);
    }

    #[test]
    fn sc_noiseless_roundtrip() {
        for m in [1usize, 2, 4, 8, 16] {
            let frozen = IndexSet::new((0..m).filter(|i| i % 3 == 0).collect(), m).unwrap();
            let mask = frozen.mask();
            for word in 0u32..(1 << m).min(4096) {
                let u: Vec<u8> = (0..m)
                    .map(|i| if mask[i] { 0 } else { ((word >> i) & 1) as u8 })
                    .collect();
                let y = saturated(&polar_encode_block(&u).unwrap());
                for mode in [BoxplusMode::Exact, BoxplusMode::MinSum] {
                    assert_eq!(sc_decode(&y, &frozen, mode).unwrap(), u);
                    assert_eq!(scl_decode(&y, &frozen, 4, mode).unwrap().0, u);
                }
            }
        }
    }

    #[test]
    fn all_frozen_decodes_to_zero() {
        let frozen = IndexSet::full(8);
        let y = [-3.0, 1.0, -0.5, 2.0, -9.0, 0.1, 4.0, -1.0];
        assert_eq!(sc_decode(&y, &frozen, BoxplusMode::Exact).unwrap(), vec![0; 8]);
        assert_eq!(scl_decode(&y, &frozen, 8, BoxplusMode::Exact).unwrap().0, vec![0; 8]);
    }

    #[test]
    fn sc_step_count_is_two_m_minus_two() {
        for m in [1usize, 2, 8, 128, 1024] {
            let mut dec = ScDecoder::new(m, BoxplusMode::Exact).unwrap();
            let mut out = vec![0; m];
            dec.decode_into(&vec![1.0; m], &vec![false; m], &mut out).unwrap();
            assert_eq!(dec.steps(), 2 * m as u64 - 2);
        }
    }

    /// Exhaustive ML over the code: maximizes the correlation `Σ (1−2x_j) y_j`.
    fn ml_oracle(y: &[f64], info: &[usize]) -> (Vec<u8>, f64) {
        let m = y.len();
        let mut scored: Vec<(f64, Vec<u8>)> = (0u32..(1 << info.len()))
            .map(|w| {
                let mut u = vec![0u8; m];
                for (j, &i) in info.iter().enumerate() {
                    u[i] = ((w >> j) & 1) as u8;
                }
                let x = polar_encode_block(&u).unwrap();
                let corr: f64 = x.iter().zip(y).map(|(&b, &l)| if b == 0 { l } else { -l }).sum();
                (corr, u)
            })
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let gap = scored.get(1).map_or(f64::INFINITY, |s| scored[0].0 - s.0);
        (scored[0].1.clone(), gap)
    }

    #[test]
    fn full_list_is_maximum_likelihood() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let frozen = IndexSet::new(vec![0, 1], 4).unwrap();
        let info = [2usize, 3];
        let mut checked = 0;
        for _ in 0..2000 {
            let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..5.0)).collect();
            let (ml, gap) = ml_oracle(&y, &info);
            if gap < 1e-9 {
                continue;
            }
            checked += 1;
            let (best, paths) = scl_decode(&y, &frozen, 4, BoxplusMode::Exact).unwrap();
            assert_eq!(paths.len(), 4);
            assert_eq!(best, ml, "y={y:?}");
        }
        assert!(checked > 1900);
    }

    #[test]
    fn list_metrics_are_nonnegative_and_sorted_survivors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let frozen = IndexSet::new(vec![0, 1, 2, 4, 8], 16).unwrap();
        let y: Vec<f64> = (0..16).map(|_| rng.gen_range(-2.0..3.0)).collect();
        let (best, paths) = scl_decode(&y, &frozen, 8, BoxplusMode::Exact).unwrap();
        assert_eq!(paths.len(), 8);
        assert!(paths.iter().all(|p| p.metric >= 0.0));
        let min = paths.iter().map(|p| p.metric).fold(f64::INFINITY, f64::min);
        assert_eq!(paths.iter().find(|p| p.metric == min).unwrap().decisions, best);
        for p in &paths {
            assert!(frozen.iter().all(|i| p.decisions[i] == 0));
        }
    }

    #[test]
    fn list_decoder_rejects_bad_arguments() {
        assert!(ListDecoder::new(8, 0, BoxplusMode::Exact).is_err());
        assert!(ListDecoder::new(6, 2, BoxplusMode::Exact).is_err());
        let mut d = ListDecoder::new(4, 1, BoxplusMode::Exact).unwrap();
        let y = [1.0; 4];
        let two = [(&y[..], 0.0), (&y[..], 0.0)];
        assert!(d.decode_window(two, &[false; 4]).is_err());
    }

    proptest! {
        #[test]
        fn list_of_one_is_sc(
            y in prop::collection::vec(-6.0f64..6.0, 32),
            frozen_bits in prop::collection::vec(any::<bool>(), 32),
            minsum in any::<bool>(),
        ) {
            let mode = if minsum { BoxplusMode::MinSum } else { BoxplusMode::Exact };
            let set = IndexSet::new((0..32).filter(|&i| frozen_bits[i]).collect(), 32).unwrap();
            let sc = sc_decode(&y, &set, mode).unwrap();
            let (scl, paths) = scl_decode(&y, &set, 1, mode).unwrap();
            prop_assert_eq!(paths.len(), 1);
            prop_assert_eq!(sc, scl);
        }

        #[test]
        fn exact_and_minsum_agree_in_sign(a in -30.0f64..30.0, b in -30.0f64..30.0) {
            let e = f_op(a, b, BoxplusMode::Exact);
            let s = f_op(a, b, BoxplusMode::MinSum);
            prop_assert!((e - s).abs() <= a.abs().min(b.abs()) + 1e-12);
            prop_assert!(e * s >= 0.0);
            prop_assert!(e.abs() <= s.abs() + 1e-12);
        }

        #[test]
        fn certain_positions_are_never_contradicted(
            word in prop::collection::vec(0u8..2, 16),
            certain in prop::collection::vec(any::<bool>(), 16),
            noise in prop::collection::vec(-0.5f64..0.5, 16),
        ) {
            // certain positions saturated, the rest carry weak but correct-signed evidence
            let x = polar_encode_block(&word).unwrap();
            let y: Vec<f64> = (0..16).map(|j| {
                let s = if x[j] == 0 { 1.0 } else { -1.0 };
                if certain[j] { s * LLR_MAX } else { s * (1.0 + noise[j]) }
            }).collect();
            let u_hat = sc_decode(&y, &IndexSet::empty(16), BoxplusMode::Exact).unwrap();
            let x_hat = polar_encode_block(&u_hat).unwrap();
            for j in 0..16 {
                if certain[j] {
                    prop_assert_eq!(x_hat[j], x[j]);
                }
            }
        }
    }
}
