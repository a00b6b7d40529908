use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_polar-swin"));
    c.env_remove("POLAR_SWIN_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Asserts exit code 2 with a one-line diagnostic and returns it.
fn fails(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(2), "{args:?} should fail");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "diagnostic: {err}");
    err
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn bits_line(bits: &[u8]) -> String {
    bits.iter().map(|b| b.to_string()).collect::<String>() + "\n"
}

fn saturated_llrs(codeword: &str) -> String {
    codeword
        .trim()
        .chars()
        .map(|c| if c == '0' { "1e9\n" } else { "-1e9\n" })
        .collect()
}

#[test]
fn construct_small_bec_design() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("code");
    let stdout = ok(&[
        "construct", "--n", "8", "--m", "4", "--k", "4", "--channel", "bec", "--design-snr", "0.5",
        "--out", p(&out),
    ]);
    assert_eq!(stdout.trim(), "frozen 4 information 4");
    let frozen = fs::read_to_string(out.join("frozen.txt")).unwrap();
    let info = fs::read_to_string(out.join("info.txt")).unwrap();
    assert_eq!(frozen.lines().count(), 4);

    let cfg = polar_swin::CodeConfig::new(8, 4, 4, polar_swin::DesignChannel::Bec { erasure: 0.5 })
        .unwrap();
    let design = polar_swin::construction::design_sw(&cfg).unwrap();
    assert_eq!(frozen, polar_swin::textio::format_index_set(&design.frozen));
    assert_eq!(info, polar_swin::textio::format_index_set(&design.info));
    let profile = fs::read_to_string(out.join("profile.txt")).unwrap();
    assert_eq!(profile, polar_swin::textio::format_profile(&design.profile));
}

#[test]
fn construct_edge_cases() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("all");
    ok(&["construct", "--n", "8", "--m", "4", "--k", "8", "--design-snr", "1", "--out", p(&out)]);
    assert_eq!(fs::read_to_string(out.join("frozen.txt")).unwrap(), "");

    let bad = dir.path().join("bad");
    let err = fails(&["construct", "--n", "8", "--m", "4", "--k", "9", "--design-snr", "1", "--out", p(&bad)]);
    assert!(err.contains("`k`"), "{err}");
    assert!(!bad.exists());

    let err = fails(&["construct", "--n", "12", "--m", "4", "--k", "2", "--design-snr", "1", "--out", p(&bad)]);
    assert!(err.contains("`n`"), "{err}");
    let err = fails(&["construct", "--n", "8", "--m", "4", "--k", "2", "--out", p(&bad)]);
    assert!(err.contains("design-snr"), "{err}");
    let err = fails(&["construct", "--n", "8", "--k", "2", "--design-snr", "1", "--out", p(&bad)]);
    assert!(err.contains("`m`"), "{err}");
    let err = fails(&["construct", "--n", "8", "--m", "4", "--k", "2", "--strategy", "zig"]);
    assert!(err.contains("zig"), "{err}");
}

#[test]
fn encode_zero_message_and_partials() {
    let dir = TempDir::new().unwrap();
    let msg = dir.path().join("msg.txt");
    fs::write(&msg, "000000\n").unwrap();
    let cw = dir.path().join("cw.txt");
    let parts = dir.path().join("parts.txt");
    let common = ["--n", "16", "--m", "4", "--k", "6", "--design-snr", "2"];
    let mut args = vec!["encode"];
    args.extend(common);
    args.extend(["--message", p(&msg), "--out", p(&cw), "--emit-partials", p(&parts)]);
    ok(&args);
    assert_eq!(fs::read_to_string(&cw).unwrap(), "0000000000000000\n");
    let partials = fs::read_to_string(&parts).unwrap();
    assert_eq!(partials.lines().count(), 4);
    assert!(partials.lines().all(|l| l.len() == 4));

    fs::write(&msg, "101101\n").unwrap();
    ok(&args);
    let codeword = fs::read_to_string(&cw).unwrap();
    // codeword is the suffix XOR of the partials
    let t: Vec<Vec<u8>> = fs::read_to_string(&parts)
        .unwrap()
        .lines()
        .map(|l| l.bytes().map(|b| b - b'0').collect())
        .collect();
    let mut acc = vec![0u8; 4];
    let mut expect = vec![Vec::new(); 4];
    for s in (0..4).rev() {
        for j in 0..4 {
            acc[j] ^= t[s][j];
        }
        expect[s] = acc.clone();
    }
    assert_eq!(codeword, bits_line(&expect.concat()));
}

#[test]
fn no_partial_output_on_failure() {
    let dir = TempDir::new().unwrap();
    let msg = dir.path().join("msg.txt");
    fs::write(&msg, "0101\n").unwrap();
    let cw = dir.path().join("cw.txt");
    let parts = dir.path().join("parts.txt");
    let err = fails(&[
        "encode", "--n", "16", "--m", "4", "--k", "6", "--design-snr", "2", "--message", p(&msg),
        "--out", p(&cw), "--emit-partials", p(&parts),
    ]);
    assert!(err.contains("message"), "{err}");
    assert!(!cw.exists() && !parts.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn random_roundtrips_through_files() {
    let mut rng = StdRng::seed_from_u64(2024);
    let dir = TempDir::new().unwrap();
    for case in 0..100 {
        let n_log = rng.gen_range(1..=7u32);
        let n = 1usize << n_log;
        let m = 1usize << rng.gen_range(0..=n_log);
        let k = rng.gen_range(1..=n);
        let strategy = ["sw", "ind", "full"][rng.gen_range(0..3)];
        let bec = rng.gen_bool(0.5);
        let design = if bec {
            format!("{}", rng.gen_range(0.05..0.95))
        } else {
            format!("{}", rng.gen_range(-2.0..6.0))
        };
        let (n_s, m_s, k_s) = (n.to_string(), m.to_string(), k.to_string());
        let mut common = vec![
            "--n", &n_s, "--m", &m_s, "--k", &k_s, "--strategy", strategy, "--design-snr", &design,
            "--channel", if bec { "bec" } else { "awgn" },
        ];
        let list = ["1", "2", "4"][rng.gen_range(0..3)];
        if rng.gen_bool(0.5) {
            common.extend(["--decoder", "scl", "--list-size", list]);
        }
        if rng.gen_bool(0.3) {
            common.push("--minsum");
        }

        let code_dir = dir.path().join(format!("code{case}"));
        let mut args = vec!["construct"];
        args.extend(&common);
        args.extend(["--out", p(&code_dir)]);
        ok(&args);
        let info = fs::read_to_string(code_dir.join("info.txt")).unwrap();
        assert_eq!(info.lines().count(), k);

        let msg: Vec<u8> = (0..k).map(|_| rng.gen_range(0..2)).collect();
        let msg_file = dir.path().join(format!("msg{case}"));
        fs::write(&msg_file, bits_line(&msg)).unwrap();
        let cw_file = dir.path().join(format!("cw{case}"));
        let mut args = vec!["encode"];
        args.extend(&common);
        args.extend(["--message", p(&msg_file), "--out", p(&cw_file)]);
        ok(&args);
        let codeword = fs::read_to_string(&cw_file).unwrap();
        assert_eq!(codeword.trim().len(), n);

        let llr_file = dir.path().join(format!("llr{case}"));
        fs::write(&llr_file, saturated_llrs(&codeword)).unwrap();
        let mut args = vec!["decode"];
        args.extend(&common);
        args.extend(["--llr", p(&llr_file)]);
        assert_eq!(ok(&args), bits_line(&msg), "case {case}: {common:?}");
    }
}

fn noisy_llrs(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let mut rng = StdRng::seed_from_u64(seed);
    let text: String = (0..n)
        .map(|_| format!("{:?}\n", rng.gen_range(-1.0..3.0f64)))
        .collect();
    let path = dir.join(format!("noisy{seed}"));
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn streaming_matches_batch() {
    let dir = TempDir::new().unwrap();
    for (strategy, seed) in [("sw", 1), ("ind", 2), ("sw", 3)] {
        let llr = noisy_llrs(dir.path(), 64, seed);
        let common = ["--n", "64", "--m", "16", "--k", "32", "--design-snr", "1", "--strategy", strategy];
        let batch = dir.path().join("batch");
        let stream = dir.path().join("stream");
        let mut args = vec!["decode"];
        args.extend(common);
        args.extend(["--llr", p(&llr)]);
        let mut b = args.clone();
        b.extend(["--out", p(&batch)]);
        ok(&b);
        let mut s = args.clone();
        s.extend(["--streaming", "--out", p(&stream)]);
        let windows = ok(&s);
        assert_eq!(fs::read_to_string(&batch).unwrap(), fs::read_to_string(&stream).unwrap());
        let lines: Vec<&str> = windows.lines().collect();
        assert_eq!(lines.len(), 4);
        for (w, line) in lines.iter().enumerate() {
            assert!(line.starts_with(&format!("window {w} ")), "{line}");
        }
        // the windows' bits concatenate to the message
        let joined: String = lines.iter().map(|l| l.split(' ').nth(2).unwrap_or("")).collect();
        assert_eq!(joined + "\n", fs::read_to_string(&batch).unwrap());
    }
    let llr = noisy_llrs(dir.path(), 64, 9);
    let err = fails(&[
        "decode", "--n", "64", "--m", "16", "--k", "32", "--design-snr", "1", "--strategy", "full",
        "--streaming", "--llr", p(&llr),
    ]);
    assert!(err.contains("streaming"), "{err}");
}

#[test]
fn decode_input_errors() {
    let dir = TempDir::new().unwrap();
    let llr = dir.path().join("short");
    fs::write(&llr, "1.0\n".repeat(15)).unwrap();
    let common = ["decode", "--n", "16", "--m", "4", "--k", "8", "--design-snr", "1", "--llr", p(&llr)];
    let err = fails(&common);
    assert!(err.contains("expected 16"), "{err}");
    let mut s = common.to_vec();
    s.push("--streaming");
    let err = fails(&s);
    assert!(err.contains("expected 16 values, got 15"), "{err}");

    fs::write(&llr, "1.0\n2.0\nbogus\n").unwrap();
    let err = fails(&common);
    assert!(err.contains("line 3"), "{err}");
    let err = fails(&s);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn bound_only_sweep_and_target_snr() {
    let csv = ok(&[
        "sweep", "--n", "256", "--m", "32", "--k", "128", "--ebn0", "0:4:1", "--bound-only",
    ]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "strategy,decoder,list_size,N,M,K,ebn0_db,source,frames,errors,bler");
    assert_eq!(lines.len(), 6);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(&f[..6], &["sw", "sc", "1", "256", "32", "128"]);
        assert_eq!((f[7], f[8], f[9]), ("bound", "0", "0"));
    }
    let g: f64 = ok(&["target-snr", "--n", "256", "--m", "32", "--k", "128"]).trim().parse().unwrap();
    assert!(g > 0.0 && g < 8.0);
    let err = fails(&[
        "sweep", "--n", "256", "--m", "32", "--k", "128", "--ebn0", "1", "--bound-only", "--decoder", "scl",
    ]);
    assert!(err.contains("SC"), "{err}");
    let err = fails(&["sweep", "--n", "256", "--m", "32", "--k", "128"]);
    assert!(err.contains("ebn0"), "{err}");
}

#[test]
fn sweep_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = |out: &Path| {
        vec![
            "sweep".to_string(), "--n".into(), "128".into(), "--m".into(), "16".into(), "--k".into(),
            "64".into(), "--ebn0".into(), "0,1,2".into(), "--max-errors".into(), "20".into(),
            "--max-frames".into(), "2000".into(), "--seed".into(), "77".into(), "--out".into(),
            p(out).to_string(),
        ]
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(bin().args(args(&a)).status().unwrap().success());
    assert!(bin().args(args(&b)).env("POLAR_SWIN_THREADS", "1").status().unwrap().success());
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_eq!(String::from_utf8(ta).unwrap().lines().count(), 4);

    let out = bin()
        .args(args(&dir.path().join("c.csv")))
        .env("POLAR_SWIN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("POLAR_SWIN_THREADS"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# experiment\nn = 64\nm = 16\nk = 40\nbound_only = true\nebn0 = 1,2\n").unwrap();
    let csv = ok(&["sweep", "--config", p(&cfg), "--k", "32"]);
    assert!(csv.lines().nth(1).unwrap().starts_with("sw,sc,1,64,16,32,1,bound,"));

    fs::write(&cfg, "n = 64\nlist-size = four\n").unwrap();
    let err = fails(&["sweep", "--config", p(&cfg)]);
    assert!(err.contains("line 2") && err.contains("list-size"), "{err}");
}

#[test]
fn fig6_shaped_run_orders_strategies() {
    let mut bler = Vec::new();
    for decoder in ["sc", "scl"] {
        for strategy in ["full", "sw", "ind"] {
            let csv = ok(&[
                "sweep", "--n", "1024", "--m", "128", "--k", "256", "--strategy", strategy,
                "--decoder", decoder, "--list-size", if decoder == "sc" { "1" } else { "8" },
                "--ebn0", "2.5", "--max-errors", "40", "--max-frames", "2000", "--seed", "5",
            ]);
            let row = csv.lines().nth(1).unwrap();
            bler.push(row.rsplit(',').next().unwrap().parse::<f64>().unwrap());
        }
    }
    for c in bler.chunks(3) {
        assert!(c[0] <= c[1] && c[1] <= c[2], "FULL, SW, IND: {c:?}");
    }
}
