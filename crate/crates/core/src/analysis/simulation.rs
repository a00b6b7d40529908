use std::io::Write;

use log::warn;
use rayon::prelude::*;

use super::{
    bound_bler, BlerPoint, ChannelKind, DecoderKind, PointSource, Scenario, Transmission,
};
use crate::channel::{transmit_into, ChannelModel, ChannelRealization};
use crate::code::{CodeConfig, IndexSet};
use crate::construction::DesignChannel;
use crate::code::BitVector;
use crate::encoder::{build_input, encode_accumulate, encode_into, extract_message};
use crate::error::{Error, Result};
use crate::sliding_window::{SwScDecoder, SwSclDecoder};

/// Monte Carlo stopping rule: stop after `max_errors` frame errors or
/// `max_frames` frames, whichever comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub max_frames: u64,
    pub max_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            max_frames: 10_000_000,
            max_errors: 100,
        }
    }
}

#[derive(Debug, Clone)]
enum BlockDecoder {
    Sc(SwScDecoder),
    Scl(SwSclDecoder),
}

impl BlockDecoder {
    fn decode(&mut self, y: &[f64], out: &mut [u8]) -> Result<()> {
        match self {
            BlockDecoder::Sc(d) => d.decode(y, out),
            BlockDecoder::Scl(d) => d.decode(y, out),
        }
    }
}

/// One independently encoded and decoded segment of the frame.
#[derive(Debug, Clone)]
struct Segment {
    offset: usize,
    len: usize,
    window: usize,
    info: IndexSet,
    decoder: BlockDecoder,
}

/// Encoder and decoder of one strategy, with the code designed at one point.
///
/// SW is one segment of length `N` with window `M`; FULL is one segment of
/// length `N` decoded as a single window; IND is `S` segments of length `M`.
/// Message bits fill the information positions of the frame in ascending
/// order.
#[derive(Debug, Clone)]
pub struct StrategyCodec {
    n: usize,
    k: usize,
    segments: Vec<Segment>,
}

impl StrategyCodec {
    pub fn new(scenario: &Scenario, point: f64) -> Result<Self> {
        scenario.validate()?;
        let designs = scenario.designs(point)?;
        let (n, m) = (scenario.n, scenario.m);
        let layout: Vec<(usize, usize, usize)> = match scenario.strategy.transmission {
            Transmission::Sw => vec![(0, n, m)],
            Transmission::Full => vec![(0, n, n)],
            Transmission::Ind => (0..n / m).map(|b| (b * m, m, m)).collect(),
        };
        // decoders only need the segment geometry; the design channel is irrelevant here
        let dummy = DesignChannel::Bec { erasure: 0.5 };
        let segments = layout
            .into_iter()
            .zip(designs)
            .map(|((offset, len, window), design)| {
                let config = CodeConfig::new(len, window, design.info.len(), dummy)?;
                let decoder = match scenario.strategy.decoder {
                    DecoderKind::Sc => {
                        BlockDecoder::Sc(SwScDecoder::new(&config, &design.info, scenario.mode)?)
                    }
                    DecoderKind::Scl { list_size } => BlockDecoder::Scl(SwSclDecoder::new(
                        &config,
                        &design.info,
                        list_size,
                        scenario.mode,
                        scenario.list_scope,
                    )?),
                };
                Ok(Segment {
                    offset,
                    len,
                    window,
                    info: design.info,
                    decoder,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            k: scenario.k,
            segments,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Information positions of the whole frame.
    pub fn info(&self) -> IndexSet {
        let idx = self
            .segments
            .iter()
            .flat_map(|seg| seg.info.iter().map(move |i| seg.offset + i))
            .collect();
        IndexSet::new(idx, self.n).expect("segments are disjoint and ordered")
    }

    /// Codeword of `message`, plus the per-window partial codewords (the
    /// `t^(s)` of SW, the block codewords of IND, the codeword itself for
    /// FULL).
    pub fn encode(&self, message: &[u8]) -> Result<(BitVector, Vec<BitVector>)> {
        let u = build_input(message, &self.info())?;
        let mut codeword = Vec::with_capacity(self.n);
        let mut partials = Vec::new();
        for seg in &self.segments {
            let config = CodeConfig::new(seg.len, seg.window, 0, DesignChannel::Bec { erasure: 0.5 })?;
            let r = encode_accumulate(&u[seg.offset..seg.offset + seg.len], &config)?;
            codeword.extend_from_slice(&r.codeword);
            partials.extend(r.partials);
        }
        Ok((codeword, partials))
    }

    /// `x ← u · T` per segment, in place.
    fn encode_input_in_place(&self, x: &mut [u8]) {
        for seg in &self.segments {
            encode_into(&mut x[seg.offset..seg.offset + seg.len], seg.window);
        }
    }

    fn decode_input(&mut self, llr: &[f64], u_hat: &mut [u8]) -> Result<()> {
        Error::check_len("frame LLRs", self.n, llr.len())?;
        for seg in &mut self.segments {
            let range = seg.offset..seg.offset + seg.len;
            seg.decoder.decode(&llr[range.clone()], &mut u_hat[range])?;
        }
        Ok(())
    }

    /// Decoded message bits of a frame of `N` channel LLRs.
    pub fn decode(&mut self, llr: &[f64]) -> Result<BitVector> {
        let mut u_hat = vec![0; self.n];
        self.decode_input(llr, &mut u_hat)?;
        Ok(extract_message(&u_hat, &self.info()))
    }
}

/// Encodes, transmits and decodes frames of one scenario at one point.
#[derive(Debug, Clone)]
pub struct FrameSimulator {
    codec: StrategyCodec,
    info: IndexSet,
    channel: ChannelModel,
    seed: u64,
    u: Vec<u8>,
    x: Vec<u8>,
    y: Vec<f64>,
    u_hat: Vec<u8>,
}

impl FrameSimulator {
    pub fn new(scenario: &Scenario, point: f64, seed: u64) -> Result<Self> {
        let channel = match scenario.channel {
            ChannelKind::Awgn => ChannelModel::Awgn {
                ebn0_db: point,
                rate: scenario.rate(),
            },
            ChannelKind::Bec => ChannelModel::Bec { erasure: point },
        };
        channel.validate()?;
        let codec = StrategyCodec::new(scenario, point)?;
        let n = codec.n();
        Ok(Self {
            info: codec.info(),
            codec,
            channel,
            seed,
            u: vec![0; n],
            x: vec![0; n],
            y: vec![0.0; n],
            u_hat: vec![0; n],
        })
    }

    /// Simulates frame `frame`; returns `true` on a frame error (any
    /// information bit decoded wrongly).
    pub fn run_frame(&mut self, frame: u64) -> Result<bool> {
        let realization = ChannelRealization::new(self.seed, frame);
        let mut bits = realization.message();
        self.u.fill(0);
        for i in self.info.iter() {
            self.u[i] = bits.bit();
        }
        self.x.copy_from_slice(&self.u);
        self.codec.encode_input_in_place(&mut self.x);
        transmit_into(&self.x, self.channel, &mut realization.noise(), &mut self.y)?;
        self.codec.decode_input(&self.y, &mut self.u_hat)?;
        Ok(self.info.iter().any(|i| self.u_hat[i] != self.u[i]))
    }
}

const BATCH: u64 = 512;

/// Simulated BLER of `scenario` at `point` (Eb/N0 in dB, or erasure
/// probability for BEC).
///
/// Frame `f` always uses the noise and message streams keyed by
/// `(seed, f)`, and the stopping rule is applied in frame order, so the
/// result does not depend on the number of worker threads.
pub fn monte_carlo_bler(
    scenario: &Scenario,
    point: f64,
    stop: StopRule,
    seed: u64,
) -> Result<BlerPoint> {
    let proto = FrameSimulator::new(scenario, point, seed)?;
    let mut frames = 0u64;
    let mut errors = 0u64;
    'outer: while frames < stop.max_frames && errors < stop.max_errors {
        let end = (frames + BATCH).min(stop.max_frames);
        let flags = (frames..end)
            .into_par_iter()
            .map_init(|| proto.clone(), |sim, f| sim.run_frame(f))
            .collect::<Result<Vec<bool>>>()?;
        for e in flags {
            frames += 1;
            errors += u64::from(e);
            if errors >= stop.max_errors {
                break 'outer;
            }
        }
    }
    Ok(BlerPoint {
        ebn0_db: point,
        frames,
        errors,
        bler: if frames == 0 {
            0.0
        } else {
            errors as f64 / frames as f64
        },
        source: PointSource::Simulation,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-seed of point `index` of a sweep.
pub(crate) fn point_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

/// [`monte_carlo_bler`] over a list of points with per-point sub-seeds.
pub fn snr_sweep(
    scenario: &Scenario,
    points: &[f64],
    stop: StopRule,
    seed: u64,
) -> Result<Vec<BlerPoint>> {
    let mut out: Vec<BlerPoint> = Vec::with_capacity(points.len());
    for (idx, &p) in points.iter().enumerate() {
        let point = monte_carlo_bler(scenario, p, stop, point_seed(seed, idx))?;
        if let Some(prev) = out.last() {
            let sigma = |q: &BlerPoint| q.bler * q.relative_std_error().min(1.0);
            if p > prev.ebn0_db
                && scenario.channel == ChannelKind::Awgn
                && point.bler > prev.bler + 3.0 * (sigma(prev) + sigma(&point))
            {
                warn!(
                    "BLER rose from {:e} at {} to {:e} at {}",
                    prev.bler, prev.ebn0_db, point.bler, p
                );
            }
        }
        out.push(point);
    }
    Ok(out)
}

/// Analytic SC curve of `scenario`.
pub fn bound_sweep(scenario: &Scenario, points: &[f64]) -> Result<Vec<BlerPoint>> {
    points
        .iter()
        .map(|&p| {
            Ok(BlerPoint {
                ebn0_db: p,
                frames: 0,
                errors: 0,
                bler: bound_bler(scenario, p)?,
                source: PointSource::Bound,
            })
        })
        .collect()
}

/// Header line of the BLER CSV.
pub fn csv_header() -> &'static str {
    "strategy,decoder,list_size,N,M,K,ebn0_db,source,frames,errors,bler"
}

/// Writes one CSV row per point (no header).
pub fn write_csv<W: Write>(w: &mut W, scenario: &Scenario, points: &[BlerPoint]) -> std::io::Result<()> {
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{:e}",
            scenario.strategy.transmission,
            scenario.strategy.decoder.as_str(),
            scenario.strategy.decoder.list_size(),
            scenario.n,
            scenario.m,
            scenario.k,
            p.ebn0_db,
            p.source.as_str(),
            p.frames,
            p.errors,
            p.bler
        )?;
    }
    Ok(())
}
