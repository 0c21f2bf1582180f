//! BPSK over AWGN, seeded Monte Carlo BLER estimation and paired decoder
//! comparison.
//!
//! Trial `t` draws its data and noise from a ChaCha8 stream keyed by
//! `(seed, t)`, so results do not depend on how trials are scheduled.
//! Gaussian samples use the Box-Muller transform.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitWord;
use crate::codec::{pac_encode, CodeSpec};
use crate::decoder::{sc_decode, scl_decode, DecoderConfig};
use crate::error::{PacError, Result};
use crate::reference::{encode_reference, ml_decode, sc_decode_reference};
use crate::special::{sscl_decode, CandidateCount, NodePolicy};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Trials evaluated per parallel batch before the stopping rule is checked.
pub const BATCH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelConfig {
    pub snr_db: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(snr_db: f64, seed: u64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(PacError::InvalidInput(format!("SNR must be finite, got {snr_db}")));
        }
        Ok(Self { snr_db, seed })
    }

    /// `σ² = 10^(-SNR/10)`.
    pub fn sigma2(&self) -> f64 {
        10f64.powf(-self.snr_db / 10.0)
    }
}

/// The RNG stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Standard normal pair from two uniforms.
fn box_muller<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// `LLR_j = 2 y_j / σ²` with `y_j = (1 - 2 c_j) + n_j`.
pub fn channel_llrs<R: Rng>(c: &BitWord, cfg: &ChannelConfig, rng: &mut R) -> Vec<f64> {
    let sigma2 = cfg.sigma2();
    let sigma = sigma2.sqrt();
    let n = c.len();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b) = box_muller(rng);
        for z in [a, b] {
            let j = out.len();
            if j == n {
                break;
            }
            let x = if c.get(j) == 1 { -1.0 } else { 1.0 };
            out.push(2.0 * (x + sigma * z) / sigma2);
        }
    }
    out
}

pub fn random_bits<R: Rng>(len: usize, rng: &mut R) -> BitWord {
    let mut w = BitWord::zeros(len);
    for i in 0..len {
        w.set(i, rng.random::<bool>() as u8);
    }
    w
}

/// What decodes each block.
#[derive(Clone, Debug, PartialEq)]
pub enum DecoderChoice {
    Sc,
    Scl(DecoderConfig),
    Sscl(DecoderConfig, NodePolicy),
    /// Bit-by-bit SC from the reference module.
    ScReference,
    /// Exhaustive ML, limited to small payloads.
    Ml,
}

impl DecoderChoice {
    pub fn decode(&self, llr: &[f64], spec: &CodeSpec) -> Result<BitWord> {
        match self {
            DecoderChoice::Sc => Ok(sc_decode(llr, spec)?.data),
            DecoderChoice::Scl(cfg) => Ok(scl_decode(llr, spec, cfg)?.data),
            DecoderChoice::Sscl(cfg, policy) => Ok(sscl_decode(llr, spec, cfg, policy)?.data),
            DecoderChoice::ScReference => {
                let v = sc_decode_reference(llr, spec)?;
                Ok(spec.info_bits(&v).slice(0, spec.payload_len()))
            }
            DecoderChoice::Ml => Ok(ml_decode(llr, spec)?.0),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DecoderChoice::Sc => "sc",
            DecoderChoice::Scl(_) => "scl",
            DecoderChoice::Sscl(..) => "sscl",
            DecoderChoice::ScReference => "sc-reference",
            DecoderChoice::Ml => "ml",
        }
    }

    pub fn list_size(&self) -> usize {
        match self {
            DecoderChoice::Scl(cfg) | DecoderChoice::Sscl(cfg, _) => cfg.list_size,
            _ => 1,
        }
    }

    /// Z as printed in result tables; empty when not applicable.
    pub fn z_label(&self) -> String {
        match self {
            DecoderChoice::Sscl(_, p) => match p.candidates {
                CandidateCount::Fixed(z) => z.to_string(),
                CandidateCount::Exhaustive => "exhaustive".into(),
            },
            _ => String::new(),
        }
    }
}

/// Transmitted and received data for one trial.
pub struct Trial {
    pub data: BitWord,
    pub codeword: BitWord,
    pub llr: Vec<f64>,
}

/// Draws trial `t`: payload bits first, then the noise, from one stream.
/// `reference_encoder` swaps in the dense-matrix encoder.
pub fn draw_trial(
    spec: &CodeSpec,
    cfg: &ChannelConfig,
    trial: u64,
    reference_encoder: bool,
) -> Result<Trial> {
    let mut rng = trial_rng(cfg.seed, trial);
    let data = random_bits(spec.payload_len(), &mut rng);
    let codeword = if reference_encoder {
        encode_reference(&data, spec)?
    } else {
        pac_encode(&data, spec)?
    };
    let llr = channel_llrs(&codeword, cfg, &mut rng);
    Ok(Trial {
        data,
        codeword,
        llr,
    })
}

/// Wilson score interval at 95%.
pub fn wilson_ci(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub snr_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SimResult {
    fn new(snr_db: f64, trials: u64, block_errors: u64) -> Self {
        let (ci_low, ci_high) = wilson_ci(block_errors, trials);
        Self {
            snr_db,
            trials,
            block_errors,
            bler: if trials == 0 { 0.0 } else { block_errors as f64 / trials as f64 },
            ci_low,
            ci_high,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub seed: u64,
    pub max_trials: u64,
    /// Stop once this many block errors are seen; `0` runs all trials.
    pub min_errors: u64,
    pub reference_encoder: bool,
}

/// Runs trials in fixed-size parallel batches and scans each batch in
/// trial order, stopping at the exact trial that reaches `min_errors`.
pub fn run_bler_point(
    spec: &CodeSpec,
    decoder: &DecoderChoice,
    sim: &SimConfig,
    snr_db: f64,
) -> Result<SimResult> {
    if sim.max_trials == 0 {
        return Err(PacError::InvalidInput("max_trials must be at least 1".into()));
    }
    let ch = ChannelConfig::new(snr_db, sim.seed)?;
    let mut trials = 0u64;
    let mut errors = 0u64;
    let mut start = 0u64;
    while start < sim.max_trials {
        let end = (start + BATCH as u64).min(sim.max_trials);
        let outcomes: Vec<bool> = (start..end)
            .into_par_iter()
            .map(|t| {
                let tr = draw_trial(spec, &ch, t, sim.reference_encoder)?;
                Ok(decoder.decode(&tr.llr, spec)? != tr.data)
            })
            .collect::<Result<_>>()?;
        for err in outcomes {
            trials += 1;
            errors += u64::from(err);
            if sim.min_errors > 0 && errors >= sim.min_errors {
                return Ok(SimResult::new(snr_db, trials, errors));
            }
        }
        start = end;
    }
    Ok(SimResult::new(snr_db, trials, errors))
}

/// One [`SimResult`] per SNR point, in the order given.
pub fn run_bler(
    spec: &CodeSpec,
    decoder: &DecoderChoice,
    sim: &SimConfig,
    snr_list: &[f64],
) -> Result<Vec<SimResult>> {
    snr_list
        .iter()
        .map(|&snr| run_bler_point(spec, decoder, sim, snr))
        .collect()
}

/// Both decoders' results on one shared noise realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairedTrial {
    pub err_a: bool,
    pub err_b: bool,
    pub outputs_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairedResult {
    pub snr_db: f64,
    pub trials: u64,
    pub errors_a: u64,
    pub errors_b: u64,
    pub disagreements: u64,
    pub bler_a: f64,
    pub bler_b: f64,
    /// `BLER_a - BLER_b`.
    pub diff: f64,
    /// 95% normal interval of the mean per-trial difference.
    pub diff_ci: (f64, f64),
    #[serde(skip)]
    pub per_trial: Vec<PairedTrial>,
}

impl PairedResult {
    pub fn ci_contains_zero(&self) -> bool {
        self.diff_ci.0 <= 0.0 && 0.0 <= self.diff_ci.1
    }
}

/// Feeds identical LLRs to both decoders for `trials` trials.
pub fn paired_compare(
    spec: &CodeSpec,
    a: &DecoderChoice,
    b: &DecoderChoice,
    cfg: &ChannelConfig,
    trials: u64,
) -> Result<PairedResult> {
    let per_trial: Vec<PairedTrial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let tr = draw_trial(spec, cfg, t, false)?;
            let da = a.decode(&tr.llr, spec)?;
            let db = b.decode(&tr.llr, spec)?;
            Ok(PairedTrial {
                err_a: da != tr.data,
                err_b: db != tr.data,
                outputs_equal: da == db,
            })
        })
        .collect::<Result<_>>()?;
    let n = trials as f64;
    let errors_a = per_trial.iter().filter(|p| p.err_a).count() as u64;
    let errors_b = per_trial.iter().filter(|p| p.err_b).count() as u64;
    let disagreements = per_trial.iter().filter(|p| !p.outputs_equal).count() as u64;
    let diffs = per_trial
        .iter()
        .map(|p| f64::from(u8::from(p.err_a)) - f64::from(u8::from(p.err_b)));
    let (bler_a, bler_b) = if trials == 0 {
        (0.0, 0.0)
    } else {
        (errors_a as f64 / n, errors_b as f64 / n)
    };
    let diff = bler_a - bler_b;
    let diff_ci = if trials < 2 {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        let var = diffs.map(|d| (d - diff).powi(2)).sum::<f64>() / (n - 1.0);
        let half = Z95 * (var / n).sqrt();
        (diff - half, diff + half)
    };
    Ok(PairedResult {
        snr_db: cfg.snr_db,
        trials,
        errors_a,
        errors_b,
        disagreements,
        bler_a,
        bler_b,
        diff,
        diff_ci,
        per_trial,
    })
}

pub const CSV_HEADER: &str = "snr_db,trials,block_errors,bler,ci_low,ci_high,decoder,L,Z,seed";

/// CSV rows for a sweep. `comments` become leading `#` lines.
pub fn results_csv(
    results: &[SimResult],
    decoder: &DecoderChoice,
    seed: u64,
    comments: &[String],
) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{:.6e},{:.6e},{:.6e},{},{},{},{}",
            r.snr_db,
            r.trials,
            r.block_errors,
            r.bler,
            r.ci_low,
            r.ci_high,
            decoder.label(),
            decoder.list_size(),
            decoder.z_label(),
            seed
        );
    }
    out
}
