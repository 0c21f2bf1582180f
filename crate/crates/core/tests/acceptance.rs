//! End-to-end acceptance checks. Each test prints one PASS/FAIL line to
//! stderr (bypassing output capture) and then asserts.

use std::io::Write as _;
use std::process::Command;
use std::time::{Duration, Instant};

use pac_core::channel::{draw_trial, paired_compare, ChannelConfig, DecoderChoice};
use pac_core::codec::conv_inverse_counted;
use pac_core::latency::{enumerate_special_nodes, scl_cycles, sscl_cycles, SpecialNode};
use pac_core::reference::{encode_reference, gcc_matrix, gf2_inverse, leaf_pm_replay};
use pac_core::special::{classify_node, node_pm};
use pac_core::{
    conv_inverse, inverse_gen_poly, pac_encode, parse_profile, polar_transform, scl_decode,
    sscl_decode, BitWord, CandidateCount, CodeSpec, DecoderConfig, GenPoly, NodeClass, NodePolicy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn report(id: &str, ok: bool, detail: &str, elapsed: Duration) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let line = format!("[{verdict}] criterion {id}: {detail} ({:.2} s)\n", elapsed.as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn g6() -> GenPoly {
    GenPoly::parse("1011011").unwrap()
}

fn load_profile(name: &str, n: usize) -> CodeSpec {
    let path = format!("{}/../../profiles/{name}", env!("CARGO_MANIFEST_DIR"));
    let info = parse_profile(&std::fs::read_to_string(path).unwrap()).unwrap();
    CodeSpec::new(n, &info, g6()).unwrap()
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitWord {
    let bits: Vec<u8> = (0..len).map(|_| rng.random_range(0..2u8)).collect();
    BitWord::from_bits(&bits)
}

/// Random polynomial with g0 = gm = 1 and memory in `1..=max_m`.
fn random_poly(rng: &mut ChaCha8Rng, max_m: usize) -> GenPoly {
    let m = rng.random_range(1..=max_m);
    let mut taps = vec![1u8];
    taps.extend((1..m).map(|_| rng.random_range(0..2u8)));
    taps.push(1);
    GenPoly::new(&taps).unwrap()
}

fn random_info_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}

#[test]
fn c01_inverse_polynomial_table() {
    let t = Instant::now();
    let g = g6();
    let expected = [
        (2, "(1,0)"),
        (4, "(1,0,1,1)"),
        (8, "(1,0,1,1,1,1,1,1)"),
        (16, "(1,0,1,1,1,1,1,1,0,0,1,0,1,0,1,0)"),
    ];
    let table_ok = expected
        .iter()
        .all(|&(len, s)| inverse_gen_poly(&g, len).to_string() == s);
    let mut nest_ok = true;
    let mut len = 2;
    while len <= 128 {
        let alpha = inverse_gen_poly(&g, len);
        let oracle = gf2_inverse(&gcc_matrix(&g, len)).unwrap();
        nest_ok &= oracle.row(0).to_bits() == alpha.alpha();
        if len < 128 {
            let longer = inverse_gen_poly(&g, 2 * len);
            nest_ok &= longer.alpha()[..len] == *alpha.alpha();
        }
        len *= 2;
    }
    let el = t.elapsed();
    let ok = table_ok && nest_ok && el < Duration::from_secs(1);
    report(
        "1",
        ok,
        &format!("inverse polynomial table exact={table_ok}, nesting to 128 vs matrix={nest_ok}"),
        el,
    );
    assert!(ok);
}

#[test]
fn c02_inverse_toeplitz_block_structure() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = true;
    for _ in 0..10 {
        let g = random_poly(&mut rng, 8);
        let mut n = 2;
        while n <= 64 {
            let inv = gf2_inverse(&gcc_matrix(&g, n)).unwrap();
            ok &= inv.is_upper_triangular_toeplitz();
            ok &= inv.row(0).to_bits() == inverse_gen_poly(&g, n).alpha();
            if n >= 4 {
                let h = n / 2;
                let half = gf2_inverse(&gcc_matrix(&g, h)).unwrap();
                ok &= inv.block(0, 0, h, h) == half;
                ok &= inv.block(h, h, h, h) == half;
                ok &= inv.block(h, 0, h, h).is_zero();
            }
            n *= 2;
        }
    }
    let el = t.elapsed();
    let ok = ok && el < Duration::from_secs(10);
    report("2", ok, "10 random polynomials, N <= 64: Toeplitz inverse and block form", el);
    assert!(ok);
}

#[test]
fn c03_encoder_matches_dense_oracle() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    for n in [16usize, 64, 256] {
        for _ in 0..1000 {
            let info = random_info_set(&mut rng, n);
            let g = random_poly(&mut rng, 8);
            let spec = CodeSpec::new(n, &info, g).unwrap();
            let d = random_bits(&mut rng, spec.info_len());
            if pac_encode(&d, &spec).unwrap() != encode_reference(&d, &spec).unwrap() {
                mismatches += 1;
            }
        }
    }
    let el = t.elapsed();
    let ok = mismatches == 0 && el < Duration::from_secs(10);
    report("3", ok, &format!("3000 encodes vs dense matrices, {mismatches} mismatches"), el);
    assert!(ok);
}

fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

#[test]
fn c04_conv_inverse_recurrence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = 1usize << rng.random_range(1..=6);
        let g = random_poly(&mut rng, 8);
        let y = random_bits(&mut rng, n);
        let inv = gf2_inverse(&gcc_matrix(&g, n)).unwrap();
        if conv_inverse(&y, &g) != inv.left_mul(&y) {
            mismatches += 1;
        }
    }
    let g = g6();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut n = 64;
    while n <= 4096 {
        let y = random_bits(&mut rng, n);
        let (_, ops) = conv_inverse_counted(&y, &g);
        xs.push(n as f64);
        ys.push(ops as f64);
        n *= 2;
    }
    let r2 = r_squared(&xs, &ys);
    let el = t.elapsed();
    let ok = mismatches == 0 && r2 > 0.99;
    report(
        "4",
        ok,
        &format!("1000 inverses vs matrix, {mismatches} mismatches; op count R^2 = {r2:.6}"),
        el,
    );
    assert!(ok);
}

#[test]
fn c05_node_metric_equals_leaf_replay() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let n = [2usize, 4, 8, 16][i % 4];
        let l: Vec<f64> = (0..n).map(|_| rng.random_range(-8.0..8.0)).collect();
        let u = random_bits(&mut rng, n);
        let beta = polar_transform(&u).unwrap();
        let diff = (node_pm(0.0, &l, &beta).unwrap() - leaf_pm_replay(&l, &u).unwrap()).abs();
        worst = worst.max(diff);
    }
    let el = t.elapsed();
    let ok = worst <= 1e-9 && el < Duration::from_secs(30);
    report("5", ok, &format!("10000 (llr, u) pairs, max |difference| = {worst:.3e}"), el);
    assert!(ok);
}

#[test]
fn c06a_disabled_nodes_match_scl() {
    let t = Instant::now();
    let spec = load_profile("pac_128_72.txt", 128);
    let cfg = DecoderConfig::list(8);
    let ch = ChannelConfig::new(2.0, 61).unwrap();
    let disabled = NodePolicy::disabled();
    let differing: usize = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let tr = draw_trial(&spec, &ch, i, false).unwrap();
            let a = scl_decode(&tr.llr, &spec, &cfg).unwrap();
            let b = sscl_decode(&tr.llr, &spec, &cfg, &disabled).unwrap();
            usize::from(a != b)
        })
        .sum();
    let el = t.elapsed();
    let ok = differing == 0 && el < Duration::from_secs(300);
    report(
        "6a",
        ok,
        &format!("N=128 L=8, 10000 trials with special nodes disabled, {differing} differ from SCL"),
        el,
    );
    assert!(ok);
}

#[test]
fn c06b_exhaustive_candidates_match_scl_metric() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let codes: Vec<CodeSpec> = [8usize, 16, 32, 32]
        .iter()
        .map(|&n| {
            let k = rng.random_range(3..=8.min(n - 1));
            let mut idx: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                idx.swap(i, rng.random_range(0..=i));
            }
            CodeSpec::new(n, &idx[..k], g6()).unwrap()
        })
        .collect();
    let policy = NodePolicy {
        max_node_len: Some(8),
        candidates: CandidateCount::Exhaustive,
        ..NodePolicy::default()
    };
    let worst = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let spec = &codes[(i % 4) as usize];
            let ch = ChannelConfig::new(0.0, 62).unwrap();
            let tr = draw_trial(spec, &ch, i, false).unwrap();
            let cfg = DecoderConfig::list(1 << spec.info_len());
            let a = scl_decode(&tr.llr, spec, &cfg).unwrap();
            let b = sscl_decode(&tr.llr, spec, &cfg, &policy).unwrap();
            (a.pm - b.pm).abs()
        })
        .reduce(|| 0.0, f64::max);
    let el = t.elapsed();
    let ok = worst <= 1e-9 && el < Duration::from_secs(300);
    report(
        "6b",
        ok,
        &format!(
            "N<=32 exhaustive candidates, L=2^K, 10000 trials, max |PM difference| = {worst:.3e}"
        ),
        el,
    );
    assert!(ok);
}

#[test]
fn c07_bler_parity() {
    let t = Instant::now();
    let spec = load_profile("pac_128_72.txt", 128);
    let ch = ChannelConfig::new(2.5, 7).unwrap();
    let scl = DecoderChoice::Scl(DecoderConfig::list(8));
    let sscl = DecoderChoice::Sscl(DecoderConfig::list(8), NodePolicy::default().with_z(4));
    let trials = 5000;
    let pair = paired_compare(&spec, &sscl, &scl, &ch, trials).unwrap();
    let vs_sc = paired_compare(&spec, &scl, &DecoderChoice::Sc, &ch, trials).unwrap();
    let enough = pair.errors_a >= 100 && pair.errors_b >= 100;
    let parity = pair.ci_contains_zero();
    let gain = vs_sc.bler_b / vs_sc.bler_a;
    let ok = enough && parity && gain >= 2.0;
    report(
        "7",
        ok,
        &format!(
            "PAC(128,72) at 2.5 dB, {trials} paired trials: SSCL {} errors, SCL {} errors, \
             {} differing outputs, diff {:+.5} in [{:+.5}, {:+.5}]; \
             SC BLER {:.4} vs SCL {:.4} ({gain:.2}x)",
            pair.errors_a,
            pair.errors_b,
            pair.disagreements,
            pair.diff,
            pair.diff_ci.0,
            pair.diff_ci.1,
            vs_sc.bler_b,
            vs_sc.bler_a
        ),
        t.elapsed(),
    );
    assert!(ok);
}

#[test]
fn c08_latency_model() {
    let t = Instant::now();
    let p128 = load_profile("pac_128_72.txt", 128);
    let p256 = load_profile("pac_256_128.txt", 256);
    let formula = scl_cycles(&p128) == 326 && scl_cycles(&p256) == 638;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut disabled_ok = [&p128, &p256]
        .iter()
        .all(|s| sscl_cycles(s, &NodePolicy::disabled(), 1) == scl_cycles(s));
    for _ in 0..50 {
        let n = 1usize << rng.random_range(1..=8);
        let s = CodeSpec::new(n, &random_info_set(&mut rng, n), g6()).unwrap();
        disabled_ok &= sscl_cycles(&s, &NodePolicy::disabled(), 1) == scl_cycles(&s);
    }
    // SPC node over leaves 96..128, everything else frozen. Pruned tree:
    // root, Rate-0 [0,64), generic [64,128), Rate-0 [64,96), SPC [96,128).
    // LLR cycles 4; Rate-0 q=6 twice; SPC max(1+1, 6) = 6.
    let hand = 4 + 6 + 6 + 6;
    let synth = CodeSpec::new(128, &(97..128).collect::<Vec<_>>(), g6()).unwrap();
    let synth_cycles = sscl_cycles(&synth, &NodePolicy::default(), 1);
    let ok = formula && disabled_ok && synth_cycles == hand;
    report(
        "8",
        ok,
        &format!(
            "SCL cycles {}/{}, disabled policy equals SCL={disabled_ok}, SPC-32 synthetic {synth_cycles} (hand {hand})",
            scl_cycles(&p128),
            scl_cycles(&p256)
        ),
        t.elapsed(),
    );
    assert!(ok);
}

/// Brute-force node walk: every node at every level is classified
/// directly, and a special node is kept when no ancestor is special.
fn brute_force_nodes(spec: &CodeSpec) -> (Vec<SpecialNode>, usize, usize) {
    let mask = spec.info_mask();
    let n = mask.len();
    let mut covered = vec![false; n];
    let mut nodes = Vec::new();
    let mut len = n;
    while len >= 2 {
        for off in (0..n).step_by(len) {
            if covered[off] {
                continue;
            }
            let class = classify_node(&mask[off..off + len]);
            if class != NodeClass::Generic {
                nodes.push(SpecialNode { class, offset: off, len });
                covered[off..off + len].iter_mut().for_each(|c| *c = true);
            }
        }
        len /= 2;
    }
    let info = (0..n).filter(|&i| !covered[i] && mask[i]).count();
    let frozen = (0..n).filter(|&i| !covered[i] && !mask[i]).count();
    nodes.sort_by_key(|s| s.offset);
    (nodes, info, frozen)
}

#[test]
fn c09_special_node_enumeration() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    for _ in 0..100 {
        let n = 1usize << rng.random_range(1..=6);
        let s = CodeSpec::new(n, &random_info_set(&mut rng, n), g6()).unwrap();
        let stats = enumerate_special_nodes(&s, &NodePolicy::default());
        let (nodes, info, frozen) = brute_force_nodes(&s);
        let mut got = stats.nodes.clone();
        got.sort_by_key(|s| s.offset);
        ok &= stats.leaf_coverage() == n;
        ok &= got == nodes;
        ok &= stats.generic_info_leaves == info && stats.generic_frozen_leaves == frozen;
    }
    let el = t.elapsed();
    let ok = ok && el < Duration::from_secs(5);
    report("9", ok, "100 random profiles, N <= 64: coverage and brute-force walk agree", el);
    assert!(ok);
}

#[test]
fn c10_simulate_is_deterministic() {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let profile = format!("{}/../../profiles/pac_128_72.txt", env!("CARGO_MANIFEST_DIR"));
    let run = |name: &str, threads: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_pac"))
            .args([
                "simulate", "--n", "128", "--profile", &profile, "--decoder", "sscl",
                "--list-size", "4", "--z", "4", "--snr", "1:3:1", "--seed", "2024",
                "--max-trials", "1500", "--min-errors", "80", "--threads", threads, "--out",
            ])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "1");
    let c = run("c.csv", "3");
    let ok = a == b && b == c && !a.is_empty();
    report(
        "10",
        ok,
        "simulate repeated with one seed, 1 and 3 threads: byte-identical CSV",
        t.elapsed(),
    );
    assert!(ok);
}
