use std::path::PathBuf;
use std::process::{Command, Output};

fn pac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn profile(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "profiles", name]
        .iter()
        .collect();
    p.display().to_string()
}

#[test]
fn invpoly_table() {
    let out = stdout(&pac(&["invpoly", "--g", "1011011", "--n", "16"]));
    assert_eq!(out.lines().last().unwrap(), "16 | (1,0,1,1,1,1,1,1,0,0,1,0,1,0,1,0)");
    assert_eq!(out.lines().next().unwrap(), "2 | (1,0)");
}

#[test]
fn encode_then_decode_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let p = profile("pac_128_72.txt");
    let data: String = (0..72).map(|i| if (i * 5 + 1) % 3 == 0 { '1' } else { '0' }).collect();
    let code = stdout(&pac(&["encode", "--n", "128", "--profile", &p, "--data", &data]));
    let llrs: String = code
        .trim()
        .chars()
        .enumerate()
        .map(|(i, b)| {
            let mag = 3.0 + (i % 7) as f64 * 0.25;
            format!("{}\n", if b == '1' { -mag } else { mag })
        })
        .collect();
    let llr_path = dir.path().join("block.llr");
    std::fs::write(&llr_path, llrs).unwrap();
    for decoder in ["sc", "scl", "sscl"] {
        let out = stdout(&pac(&[
            "decode",
            "--n",
            "128",
            "--profile",
            &p,
            "--decoder",
            decoder,
            "--llr",
            llr_path.to_str().unwrap(),
        ]));
        assert_eq!(out.trim(), data, "decoder {decoder}");
    }
}

#[test]
fn hex_encoding_matches_reference_engine() {
    let args = ["encode", "--n", "16", "--info-set", "7,9,10,11,12,13,14,15"];
    let fast = stdout(&pac(&[&args[..], &["--data", "0xa7"]].concat()));
    let slow = stdout(&pac(&[&args[..], &["--data", "0xa7", "--engine", "reference"]].concat()));
    assert_eq!(fast, slow);
    assert!(fast.starts_with("0x"));
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = profile("pac_128_72.txt");
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        stdout(&pac(&[
            "simulate", "--n", "128", "--profile", &p, "--decoder", "sscl", "--list-size", "4",
            "--snr", "1:2:0.5", "--seed", "99", "--max-trials", "600", "--min-errors", "50",
            "--threads", threads, "--out", out.to_str().unwrap(),
        ]));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "4");
    let c = run("c.csv", "4");
    assert_eq!(a, b);
    assert_eq!(b, c);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# pac "));
    assert!(text.contains("\nsnr_db,trials,block_errors,bler,ci_low,ci_high,decoder,L,Z,seed\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!("n = 128\nprofile = {:?}\nkappa = 1\nformat = \"json\"\n", profile("pac_128_72.txt")),
    )
    .unwrap();
    let out = stdout(&pac(&["latency", "--config", cfg.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["scl_cycles"], 326);
    let out = stdout(&pac(&["latency", "--config", cfg.to_str().unwrap(), "--nodes", "none"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["sscl_cycles"], 326);

    std::fs::write(&cfg, "n = 128\nlist = 4\n").unwrap();
    let bad = pac(&["latency", "--config", cfg.to_str().unwrap()]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown field"));
}

#[test]
fn validation_failures_exit_nonzero() {
    let cases: [(&[&str], &str); 4] = [
        (&["invpoly", "--g", "0101", "--n", "8"], "--g"),
        (&["latency", "--n", "100", "--info-set", "1,2"], "--n"),
        (&["latency", "--n", "8", "--profile", "/nonexistent/profile.txt"], "/nonexistent"),
        (&["latency", "--n", "8", "--info-set", "3,2"], "--info-set"),
    ];
    for (args, needle) in cases {
        let o = pac(args);
        assert!(!o.status.success(), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}
