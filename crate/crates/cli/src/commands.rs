use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use polar_swin::analysis::{
    bound_sweep, csv_header, snr_sweep, target_snr, write_csv, DecoderKind, Scenario,
    StrategyCodec, Transmission,
};
use polar_swin::code::IndexSet;
use polar_swin::construction::ReliabilityProfile;
use polar_swin::sliding_window::SwScDecoder;
use polar_swin::textio;
use polar_swin::{CodeConfig, DesignChannel};

use crate::settings::CommonArgs;

/// Writes every `(path, contents)` pair or none of them: contents go to
/// temporary files next to their targets and are renamed at the end.
pub fn write_all_atomic(files: &[(&Path, &str)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, contents) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)
            .with_context(|| format!("out: cannot create a file in `{}`", dir.display()))?;
        tmp.write_all(contents.as_bytes())
            .with_context(|| format!("out: cannot write `{}`", path.display()))?;
        staged.push((tmp, *path));
    }
    for (tmp, path) in staged {
        tmp.persist(path)
            .with_context(|| format!("out: cannot write `{}`", path.display()))?;
    }
    Ok(())
}

/// Writes to `--out` when given, otherwise to stdout.
fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_all_atomic(&[(path, contents)]),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn read_input(path: &Path, what: &str) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .with_context(|| format!("{what}: cannot read `{}`", path.display()))
}

/// Global profile, frozen set and information set of a scenario.
fn frame_design(scenario: &Scenario, point: f64) -> Result<(ReliabilityProfile, IndexSet)> {
    let designs = scenario.designs(point)?;
    let kind = designs[0].profile.kind;
    let mut values = Vec::with_capacity(scenario.n);
    let mut info = Vec::with_capacity(scenario.k);
    for d in &designs {
        let offset = values.len();
        info.extend(d.info.iter().map(|i| offset + i));
        values.extend_from_slice(&d.profile.values);
    }
    Ok((ReliabilityProfile { kind, values }, IndexSet::new(info, scenario.n)?))
}

pub fn construct(common: &CommonArgs) -> Result<()> {
    let scenario = common.scenario()?;
    let point = common.design_point()?;
    let dir = common.out().ok_or_else(|| anyhow!("missing `out` (output directory)"))?;
    let (profile, info) = frame_design(&scenario, point)?;
    let frozen = info.complement();
    std::fs::create_dir_all(dir)
        .with_context(|| format!("out: cannot create `{}`", dir.display()))?;
    let (p, f, i) = (dir.join("profile.txt"), dir.join("frozen.txt"), dir.join("info.txt"));
    write_all_atomic(&[
        (&p, &textio::format_profile(&profile)),
        (&f, &textio::format_index_set(&frozen)),
        (&i, &textio::format_index_set(&info)),
    ])?;
    println!("frozen {} information {}", frozen.len(), info.len());
    Ok(())
}

pub fn encode(common: &CommonArgs, message: &Path, partials_out: Option<&Path>) -> Result<()> {
    let scenario = common.scenario()?;
    let codec = StrategyCodec::new(&scenario, common.design_point()?)?;
    let msg = textio::parse_bits(&read_input(message, "message")?, scenario.k)
        .context("message")?;
    let (codeword, partials) = codec.encode(&msg)?;
    let line = format!("{}\n", textio::format_bits(&codeword));
    match (common.out(), partials_out) {
        (Some(out), Some(pp)) => {
            let text: String = partials
                .iter()
                .map(|t| format!("{}\n", textio::format_bits(t)))
                .collect();
            write_all_atomic(&[(out, &line), (pp, &text)])
        }
        (None, Some(_)) => bail!("invalid argument `emit-partials`: needs `out` for the codeword"),
        (out, None) => emit(out, &line),
    }
}

pub fn decode(common: &CommonArgs, llr: &Path, streaming: bool) -> Result<()> {
    let scenario = common.scenario()?;
    let point = common.design_point()?;
    if streaming {
        return decode_streaming(common, &scenario, point, llr);
    }
    let mut codec = StrategyCodec::new(&scenario, point)?;
    let values = textio::parse_llrs(&read_input(llr, "llr")?)?;
    let message = codec.decode(&values)?;
    emit(common.out(), &format!("{}\n", textio::format_bits(&message)))
}

/// Reads LLRs line by line and decodes each window as soon as the decoder
/// can, printing `window <index> <information bits>` per decided window.
fn decode_streaming(common: &CommonArgs, scenario: &Scenario, point: f64, llr: &Path) -> Result<()> {
    if scenario.strategy.decoder != DecoderKind::Sc {
        bail!("invalid argument `streaming`: only SC decoding can stream");
    }
    let (n, m) = (scenario.n, scenario.m);
    let block = match scenario.strategy.transmission {
        Transmission::Sw => n,
        Transmission::Ind => m,
        Transmission::Full => bail!("invalid argument `streaming`: FULL decodes the whole frame at once"),
    };
    let (_, info) = frame_design(scenario, point)?;
    let dummy = DesignChannel::Bec { erasure: 0.5 };
    let mut decoders = Vec::new();
    for b in 0..n / block {
        let local: Vec<usize> = info
            .iter()
            .filter(|&i| i / block == b)
            .map(|i| i % block)
            .collect();
        let config = CodeConfig::new(block, m, local.len(), dummy)?;
        decoders.push(SwScDecoder::new(&config, &IndexSet::new(local, block)?, scenario.mode)?);
    }

    let reader: Box<dyn BufRead> = if llr == Path::new("-") {
        Box::new(BufReader::new(std::io::stdin()))
    } else {
        let f = std::fs::File::open(llr)
            .with_context(|| format!("llr: cannot read `{}`", llr.display()))?;
        Box::new(BufReader::new(f))
    };
    let mut stdout = std::io::stdout().lock();
    let mut u_hat = vec![0u8; n];
    let mut chunk = Vec::with_capacity(m);
    let mut received = 0usize;
    let report = |w: usize, u_hat: &[u8], out: &mut dyn Write| -> Result<()> {
        let bits: Vec<u8> = info
            .iter()
            .filter(|&i| i / m == w)
            .map(|i| u_hat[i])
            .collect();
        writeln!(out, "window {w} {}", textio::format_bits(&bits))?;
        out.flush()?;
        Ok(())
    };
    for (idx, line) in reader.lines().enumerate() {
        let line = line.context("llr")?;
        let mut values = textio::parse_llrs(&line).map_err(|e| match e {
            polar_swin::Error::Parse { what, reason, .. } => polar_swin::Error::Parse {
                what,
                line: idx + 1,
                reason,
            },
            other => other,
        })?;
        let Some(v) = values.pop() else { continue };
        if received == n {
            bail!("llr: expected {n} values, got more");
        }
        chunk.push(v);
        received += 1;
        if chunk.len() < m {
            continue;
        }
        let w = received / m - 1;
        let (b, local_w) = (w * m / block, (w * m % block) / m);
        let base = b * block;
        let dec = &mut decoders[b];
        // window s is decided once chunk s+1 is in; the block's last window on finish
        if local_w > 0 {
            let start = base + (local_w - 1) * m;
            dec.push_window(&chunk, &mut u_hat[start..start + m])?;
            report(w - 1, &u_hat, &mut stdout)?;
        } else {
            dec.push_window(&chunk, &mut [])?;
        }
        if local_w == block / m - 1 {
            let start = base + local_w * m;
            dec.finish(&mut u_hat[start..start + m])?;
            report(w, &u_hat, &mut stdout)?;
        }
        chunk.clear();
    }
    if received != n {
        bail!("llr: expected {n} values, got {received}");
    }
    let message: Vec<u8> = info.iter().map(|i| u_hat[i]).collect();
    let line = format!("{}\n", textio::format_bits(&message));
    match common.out() {
        Some(path) => write_all_atomic(&[(path, &line)]),
        None => {
            write!(stdout, "message {line}")?;
            Ok(())
        }
    }
}

pub fn sweep(common: &CommonArgs) -> Result<()> {
    let scenario = common.scenario()?;
    let points = common.points()?;
    if points.is_empty() {
        bail!("missing `ebn0`");
    }
    let rows = if common.bound_only {
        bound_sweep(&scenario, &points)?
    } else {
        snr_sweep(&scenario, &points, common.stop_rule(), common.seed())?
    };
    let mut buf = format!("{}\n", csv_header()).into_bytes();
    write_csv(&mut buf, &scenario, &rows)?;
    emit(common.out(), &String::from_utf8(buf)?)
}

pub fn target(common: &CommonArgs, target_bler: f64) -> Result<()> {
    let scenario = common.scenario()?;
    let gamma = target_snr(&scenario, target_bler)?;
    emit(common.out(), &format!("{gamma:.4}\n"))
}
