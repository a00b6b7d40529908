//! Windowed decoding of sliding-window polar codes.
//!
//! The frame `y = [y^(1) | … | y^(S)]` is consumed one length-`M` window at
//! a time. A buffer `l` starts as `y^(1)`. For `s < S` the inner decoder
//! runs on `l ⊞ y^(s+1)` with the information set restricted to window `s`,
//! the decisions are re-encoded to `x^(s)` and the buffer becomes
//! `(−1)^{x^(s)} · l + y^(s+1)`. The last window is decoded from `l` alone.
//!
//! Working memory is one inner decoder plus a handful of length-`M` vectors
//! per path, independent of `N`.

use crate::code::{BitVector, CodeConfig, IndexSet};
use crate::decoder::{f_op, g_op, BoxplusMode, ListDecoder, ScDecoder};
use crate::encoder::polar_encode_in_place;
use crate::error::{Error, Result};

/// How the SW-SCL decoder treats its list at window boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ListScope {
    /// Every survivor carries its own buffer into the next window.
    #[default]
    Carried,
    /// Only the best survivor of each window is kept.
    PerWindow,
}

/// `l ⊞ y_next`, elementwise.
pub fn window_combine(l: &[f64], y_next: &[f64], mode: BoxplusMode) -> Result<Vec<f64>> {
    Error::check_len("next window", l.len(), y_next.len())?;
    Ok(l.iter().zip(y_next).map(|(&a, &b)| f_op(a, b, mode)).collect())
}

/// `(−1)^{x_s} · l + y_next`, elementwise.
pub fn buffer_update(l: &[f64], x_s: &[u8], y_next: &[f64]) -> Result<Vec<f64>> {
    Error::check_len("next window", l.len(), y_next.len())?;
    Error::check_len("partial codeword", l.len(), x_s.len())?;
    Ok(l.iter()
        .zip(x_s)
        .zip(y_next)
        .map(|((&a, &x), &b)| g_op(a, b, x))
        .collect())
}

/// Information set of window `s` (1-based), re-based to `[0, M)`.
pub fn restrict_info_set(info: &IndexSet, s: usize, m: usize) -> IndexSet {
    let lo = (s - 1) * m;
    let hi = s * m;
    let local = info
        .iter()
        .filter(|&i| lo <= i && i < hi)
        .map(|i| i - lo)
        .collect();
    IndexSet::new(local, m).expect("restriction of a valid set is valid")
}

/// Decoding latency in time steps: `2M` per non-final window, `2M − 2` for the last.
pub fn latency_steps(n: usize, m: usize) -> u64 {
    let s = (n / m) as u64;
    2 * m as u64 * (s - 1) + 2 * m as u64 - 2
}

fn window_frozen_masks(config: &CodeConfig, info: &IndexSet) -> Result<Vec<Vec<bool>>> {
    Error::check_len("information set universe", config.n(), info.universe())?;
    let mask = info.mask();
    Ok(mask
        .chunks_exact(config.m())
        .map(|w| w.iter().map(|&is_info| !is_info).collect())
        .collect())
}

fn combine_into(out: &mut [f64], l: &[f64], y: &[f64], mode: BoxplusMode) {
    for ((o, &a), &b) in out.iter_mut().zip(l).zip(y) {
        *o = f_op(a, b, mode);
    }
}

fn update_into(out: &mut [f64], l: &[f64], x: &[u8], y: &[f64]) {
    for (((o, &a), &bit), &b) in out.iter_mut().zip(l).zip(x).zip(y) {
        *o = g_op(a, b, bit);
    }
}

/// Sliding-window SC decoder.
///
/// Usable either on a whole frame ([`decode`](Self::decode)) or window by
/// window as the frame arrives ([`push_window`](Self::push_window) then
/// [`finish`](Self::finish)).
#[derive(Debug, Clone)]
pub struct SwScDecoder {
    m: usize,
    s: usize,
    mode: BoxplusMode,
    frozen: Vec<Vec<bool>>,
    inner: ScDecoder,
    buffer: Vec<f64>,
    combined: Vec<f64>,
    x: Vec<u8>,
    received: usize,
    steps: u64,
}

impl SwScDecoder {
    pub fn new(config: &CodeConfig, info: &IndexSet, mode: BoxplusMode) -> Result<Self> {
        let m = config.m();
        Ok(Self {
            m,
            s: config.s(),
            mode,
            frozen: window_frozen_masks(config, info)?,
            inner: ScDecoder::new(m, mode)?,
            buffer: vec![0.0; m],
            combined: vec![0.0; m],
            x: vec![0; m],
            received: 0,
            steps: 0,
        })
    }

    /// Time steps of the last decoded frame (`2N − 2` for a complete frame).
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Bytes of decoder state, excluding the frame and the output.
    pub fn working_memory_bytes(&self) -> usize {
        self.inner.working_memory_bytes()
            + (self.buffer.capacity() + self.combined.capacity()) * std::mem::size_of::<f64>()
            + self.x.capacity()
    }

    /// Feeds window `received + 1`. Once window `s + 1` has arrived the
    /// decisions `û^(s)` are written to `out` and `Some(s)` (1-based) is returned.
    pub fn push_window(&mut self, y: &[f64], out: &mut [u8]) -> Result<Option<usize>> {
        Error::check_len("window LLRs", self.m, y.len())?;
        if self.received == self.s {
            return Err(Error::invalid("window", format!("frame has only {} windows", self.s)));
        }
        self.received += 1;
        if self.received == 1 {
            self.steps = 0;
            self.inner.reset_steps();
            self.buffer.copy_from_slice(y);
            return Ok(None);
        }
        Error::check_len("window output", self.m, out.len())?;
        let w = self.received - 2;
        combine_into(&mut self.combined, &self.buffer, y, self.mode);
        self.inner.decode_into(&self.combined, &self.frozen[w], out)?;
        self.x.copy_from_slice(out);
        polar_encode_in_place(&mut self.x);
        for (l, (&bit, &b)) in self.buffer.iter_mut().zip(self.x.iter().zip(y)) {
            *l = g_op(*l, b, bit);
        }
        self.steps += 2;
        Ok(Some(w + 1))
    }

    /// Decodes the last window from the buffer; requires all `S` windows.
    pub fn finish(&mut self, out: &mut [u8]) -> Result<()> {
        if self.received != self.s {
            return Err(Error::invalid(
                "window",
                format!("expected {} windows, received {}", self.s, self.received),
            ));
        }
        self.inner.decode_into(&self.buffer, &self.frozen[self.s - 1], out)?;
        self.steps += self.inner.steps();
        self.received = 0;
        Ok(())
    }

    /// Decodes a whole frame into `out` (length `N`).
    pub fn decode(&mut self, y: &[f64], out: &mut [u8]) -> Result<()> {
        let n = self.m * self.s;
        Error::check_len("frame LLRs", n, y.len())?;
        Error::check_len("output", n, out.len())?;
        self.received = 0;
        let m = self.m;
        for (w, chunk) in y.chunks_exact(m).enumerate() {
            let dst = if w == 0 { &mut out[..m] } else { &mut out[(w - 1) * m..w * m] };
            self.push_window(chunk, dst)?;
        }
        self.finish(&mut out[n - m..])
    }
}

impl SwScDecoder {
    /// Genie-aided windowed pass over a frame with true input `u`: returns the
    /// leaf LLR of every `u_i` given `y` and the true `u_0 … u_{i−1}`.
    pub fn genie_leaf_llrs(&mut self, y: &[f64], u: &[u8]) -> Result<Vec<f64>> {
        let (m, s) = (self.m, self.s);
        Error::check_len("frame LLRs", m * s, y.len())?;
        Error::check_len("input bits", m * s, u.len())?;
        let mut trace = vec![0.0; m * s];
        self.buffer.copy_from_slice(&y[..m]);
        for w in 0..s {
            let range = w * m..(w + 1) * m;
            if w + 1 < s {
                let y_next = &y[(w + 1) * m..(w + 2) * m];
                combine_into(&mut self.combined, &self.buffer, y_next, self.mode);
                self.inner
                    .genie_into(&self.combined, &u[range.clone()], &mut trace[range.clone()])?;
                self.x.copy_from_slice(&u[range]);
                polar_encode_in_place(&mut self.x);
                for (l, (&bit, &b)) in self.buffer.iter_mut().zip(self.x.iter().zip(y_next)) {
                    *l = g_op(*l, b, bit);
                }
            } else {
                self.inner
                    .genie_into(&self.buffer, &u[range.clone()], &mut trace[range])?;
            }
        }
        self.received = 0;
        Ok(trace)
    }
}

/// Sliding-window SC decoding of a full frame.
pub fn sw_sc_decode(
    y: &[f64],
    config: &CodeConfig,
    info: &IndexSet,
    mode: BoxplusMode,
) -> Result<BitVector> {
    let mut dec = SwScDecoder::new(config, info, mode)?;
    let mut out = vec![0; config.n()];
    dec.decode(y, &mut out)?;
    Ok(out)
}

/// Sliding-window SC-list decoder.
///
/// With [`ListScope::Carried`] each survivor owns a private buffer and its
/// committed windows, and pruning to `L` paths happens at every information
/// bit of the whole frame.
#[derive(Debug, Clone)]
pub struct SwSclDecoder {
    m: usize,
    s: usize,
    mode: BoxplusMode,
    scope: ListScope,
    frozen: Vec<Vec<bool>>,
    list: ListDecoder,
    buffers: Vec<Vec<f64>>,
    committed: Vec<BitVector>,
    staged_buffers: Vec<Vec<f64>>,
    staged_committed: Vec<BitVector>,
    spare_buffers: Vec<Vec<f64>>,
    spare_committed: Vec<BitVector>,
    combined: Vec<Vec<f64>>,
    metrics: Vec<f64>,
    survivors: Vec<usize>,
    x: Vec<u8>,
    steps: u64,
}

impl SwSclDecoder {
    pub fn new(
        config: &CodeConfig,
        info: &IndexSet,
        list_size: usize,
        mode: BoxplusMode,
        scope: ListScope,
    ) -> Result<Self> {
        let m = config.m();
        Ok(Self {
            m,
            s: config.s(),
            mode,
            scope,
            frozen: window_frozen_masks(config, info)?,
            list: ListDecoder::new(m, list_size, mode)?,
            buffers: Vec::new(),
            committed: Vec::new(),
            staged_buffers: Vec::new(),
            staged_committed: Vec::new(),
            spare_buffers: Vec::new(),
            spare_committed: Vec::new(),
            combined: Vec::new(),
            metrics: Vec::new(),
            survivors: Vec::new(),
            x: vec![0; m],
            steps: 0,
        })
    }

    /// Time steps of the last frame, counting the list as parallel decoders.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Metric of the path returned by the last [`decode`](Self::decode).
    pub fn best_metric(&self) -> f64 {
        self.list.path(self.list.best()).1
    }

    fn spare_buffer(&mut self) -> Vec<f64> {
        let mut v = self.spare_buffers.pop().unwrap_or_default();
        v.clear();
        v
    }

    fn spare_committed(&mut self) -> BitVector {
        let mut v = self.spare_committed.pop().unwrap_or_default();
        v.clear();
        v
    }

    fn promote_staged(&mut self) {
        self.spare_buffers.append(&mut self.buffers);
        self.spare_committed.append(&mut self.committed);
        std::mem::swap(&mut self.buffers, &mut self.staged_buffers);
        std::mem::swap(&mut self.committed, &mut self.staged_committed);
    }

    /// Decodes a whole frame into `out` (length `N`).
    pub fn decode(&mut self, y: &[f64], out: &mut [u8]) -> Result<()> {
        let (m, s) = (self.m, self.s);
        Error::check_len("frame LLRs", m * s, y.len())?;
        Error::check_len("output", m * s, out.len())?;

        let mut first = self.spare_buffer();
        first.extend_from_slice(&y[..m]);
        let empty = self.spare_committed();
        self.staged_buffers.push(first);
        self.staged_committed.push(empty);
        self.promote_staged();
        self.metrics.clear();
        self.metrics.push(0.0);
        self.steps = 0;

        for w in 0..s - 1 {
            let y_next = &y[(w + 1) * m..(w + 2) * m];
            while self.combined.len() < self.buffers.len() {
                self.combined.push(vec![0.0; m]);
            }
            for (c, l) in self.combined.iter_mut().zip(&self.buffers) {
                combine_into(c, l, y_next, self.mode);
            }
            let before = self.list.steps();
            let starts = self
                .combined
                .iter()
                .zip(&self.metrics)
                .map(|(c, &metric)| (c.as_slice(), metric));
            self.list.decode_window(starts, &self.frozen[w])?;
            self.steps += self.list.steps() - before + 2;

            self.survivors.clear();
            match self.scope {
                ListScope::Carried => self.survivors.extend(0..self.list.len()),
                ListScope::PerWindow => self.survivors.push(self.list.best()),
            }
            self.metrics.clear();
            for idx in 0..self.survivors.len() {
                let j = self.survivors[idx];
                let mut l = self.spare_buffer();
                let mut c = self.spare_committed();
                let (decisions, metric, origin) = self.list.path(j);
                self.x.copy_from_slice(decisions);
                polar_encode_in_place(&mut self.x);
                l.resize(m, 0.0);
                update_into(&mut l, &self.buffers[origin], &self.x, y_next);
                c.extend_from_slice(&self.committed[origin]);
                c.extend_from_slice(decisions);
                self.metrics.push(metric);
                self.staged_buffers.push(l);
                self.staged_committed.push(c);
            }
            self.promote_staged();
        }

        let before = self.list.steps();
        let starts = self
            .buffers
            .iter()
            .zip(&self.metrics)
            .map(|(l, &metric)| (l.as_slice(), metric));
        self.list.decode_window(starts, &self.frozen[s - 1])?;
        self.steps += self.list.steps() - before;
        let (decisions, _, origin) = self.list.path(self.list.best());
        out[..(s - 1) * m].copy_from_slice(&self.committed[origin]);
        out[(s - 1) * m..].copy_from_slice(decisions);
        Ok(())
    }
}

/// Sliding-window SCL decoding of a full frame; returns the minimum-metric path.
pub fn sw_scl_decode(
    y: &[f64],
    config: &CodeConfig,
    info: &IndexSet,
    list_size: usize,
    mode: BoxplusMode,
    scope: ListScope,
) -> Result<BitVector> {
    let mut dec = SwSclDecoder::new(config, info, list_size, mode, scope)?;
    let mut out = vec![0; config.n()];
    dec.decode(y, &mut out)?;
    Ok(out)
}
