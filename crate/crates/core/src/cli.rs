//! The `pac` command-line tool.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitWord;
use crate::channel::{results_csv, run_bler, DecoderChoice, SimConfig};
use crate::codec::{inverse_gen_poly, pac_encode, parse_profile, CodeSpec, Crc, GenPoly};
use crate::decoder::{scl_decode, DecoderConfig};
use crate::error::PacError;
use crate::latency::{enumerate_special_nodes, LatencyReport, DEFAULT_KAPPA};
use crate::reference::{encode_reference, ml_decode, sc_decode_reference};
use crate::special::{sscl_decode, CandidateCount, NodePolicy, DEFAULT_Z};

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (", env!("PAC_GIT_DESCRIBE"), ")");

const DEFAULT_G: &str = "1011011";

#[derive(Error, Debug)]
pub enum CliError {
    #[error("--{field}: {msg}")]
    Field { field: &'static str, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("config {path}: {msg}")]
    Config { path: String, msg: String },

    #[error(transparent)]
    Pac(#[from] PacError),
}

type CliResult<T> = std::result::Result<T, CliError>;

fn field(field: &'static str, msg: impl ToString) -> CliError {
    CliError::Field {
        field,
        msg: msg.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Sc,
    Scl,
    Sscl,
    /// Exhaustive ML search (small payloads only).
    Reference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Fast,
    /// Dense-matrix encoder and bit-by-bit SC decoder.
    Reference,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

/// Settings shared by all subcommands. Any of them may also come from a
/// TOML file given with `--config`; flags win over the file.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// TOML file with default values for these options.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Block length N.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,

    /// Number of information bits; checked against the profile.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,

    /// Information set file: ascending indices, one per line, or a JSON array.
    #[arg(long, value_name = "FILE")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<PathBuf>,

    /// Inline information set, comma separated.
    #[arg(long, value_name = "LIST", conflicts_with = "profile")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub info_set: Option<String>,

    /// Generator polynomial, g0 first [default: 1011011].
    #[arg(long, value_name = "BITS")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,

    /// CRC polynomial, highest degree first.
    #[arg(long, value_name = "BITS")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crc: Option<String>,

    /// Pick the best CRC-passing path [default: true when --crc is set].
    #[arg(long, value_name = "BOOL")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crc_aided: Option<bool>,

    /// [default: sscl]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoder: Option<DecoderKind>,

    /// List size L [default: 8].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub list_size: Option<usize>,

    /// Candidates per path at Rate-1/SPC nodes, or `exhaustive` [default: 4].
    #[arg(long, value_name = "Z")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,

    /// Largest node decoded directly.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_node_len: Option<usize>,

    /// Enabled special node classes: any of rate0,rep,rate1,spc, or `none`
    /// [default: all].
    #[arg(long, value_name = "LIST")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<String>,

    /// Candidate generation cycles in the latency model [default: 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,

    /// SNR points in dB: `a:b:step`, a comma list, or one value.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr: Option<String>,

    /// [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Trials per SNR point [default: 10000].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_trials: Option<u64>,

    /// Stop a point after this many block errors; 0 disables [default: 100].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_errors: Option<u64>,

    /// Output file [default: stdout].
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// [default: fast]
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,

    /// Worker threads for `simulate` [default: all cores].
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

macro_rules! merge_fields {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    /// Fills unset options from the `--config` file, if any.
    pub fn resolve(mut self) -> CliResult<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = read_text(&path)?;
        let file: RunConfig = toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        merge_fields!(self, file; n, k, profile, info_set, g, crc, crc_aided, decoder,
            list_size, z, max_node_len, nodes, kappa, snr, seed, max_trials, min_errors,
            format, engine);
        Ok(self)
    }

    pub fn gen_poly(&self) -> CliResult<GenPoly> {
        GenPoly::parse(self.g.as_deref().unwrap_or(DEFAULT_G)).map_err(|e| field("g", e))
    }

    pub fn code_spec(&self) -> CliResult<CodeSpec> {
        let n = self.n.ok_or_else(|| field("n", "block length is required"))?;
        let info = match (&self.profile, &self.info_set) {
            (Some(path), None) => parse_profile(&read_text(path)?).map_err(|e| field("profile", e))?,
            (None, Some(list)) => parse_profile(list).map_err(|e| field("info-set", e))?,
            (None, None) => return Err(field("profile", "an information set is required")),
            (Some(_), Some(_)) => {
                return Err(field("info-set", "give either --profile or --info-set"))
            }
        };
        if let Some(k) = self.k {
            if k != info.len() {
                return Err(field(
                    "k",
                    format!("K = {k} but the information set has {} entries", info.len()),
                ));
            }
        }
        let from = if self.profile.is_some() { "profile" } else { "info-set" };
        let mut spec = CodeSpec::new(n, &info, self.gen_poly()?).map_err(|e| match e {
            PacError::NotPowerOfTwo { .. } => field("n", e),
            other => field(from, other),
        })?;
        if let Some(c) = &self.crc {
            spec = spec
                .with_crc(Crc::parse(c).map_err(|e| field("crc", e))?)
                .map_err(|e| field("crc", e))?;
        }
        Ok(spec)
    }

    pub fn policy(&self) -> CliResult<NodePolicy> {
        let mut p = NodePolicy::default();
        p.max_node_len = self.max_node_len;
        if let Some(z) = &self.z {
            p.candidates = if z == "exhaustive" {
                CandidateCount::Exhaustive
            } else {
                match z.parse::<usize>() {
                    Ok(v) if v >= 1 => CandidateCount::Fixed(v),
                    _ => return Err(field("z", format!("expected a count >= 1 or `exhaustive`, got {z:?}"))),
                }
            };
        } else {
            p.candidates = CandidateCount::Fixed(DEFAULT_Z);
        }
        if let Some(list) = &self.nodes {
            p.rate0 = false;
            p.rep = false;
            p.rate1 = false;
            p.spc = false;
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match item {
                    "rate0" => p.rate0 = true,
                    "rep" => p.rep = true,
                    "rate1" => p.rate1 = true,
                    "spc" => p.spc = true,
                    "none" => {}
                    other => return Err(field("nodes", format!("unknown node class {other:?}"))),
                }
            }
        }
        Ok(p)
    }

    pub fn decoder_config(&self, spec: &CodeSpec) -> CliResult<DecoderConfig> {
        let list_size = self.list_size.unwrap_or(8);
        if list_size == 0 {
            return Err(field("list-size", "must be at least 1"));
        }
        Ok(DecoderConfig {
            list_size,
            crc_aided: self.crc_aided.unwrap_or(spec.crc().is_some()),
        })
    }

    pub fn decoder_choice(&self, spec: &CodeSpec) -> CliResult<DecoderChoice> {
        let kind = self.decoder.unwrap_or(DecoderKind::Sscl);
        let engine = self.engine.unwrap_or(Engine::Fast);
        let cfg = self.decoder_config(spec)?;
        Ok(match (kind, engine) {
            (DecoderKind::Sc, Engine::Fast) => DecoderChoice::Sc,
            (DecoderKind::Sc, Engine::Reference) => DecoderChoice::ScReference,
            (DecoderKind::Scl, Engine::Fast) => DecoderChoice::Scl(cfg),
            (DecoderKind::Sscl, Engine::Fast) => DecoderChoice::Sscl(cfg, self.policy()?),
            (DecoderKind::Reference, _) => DecoderChoice::Ml,
            (k, Engine::Reference) => {
                return Err(field(
                    "engine",
                    format!("no reference engine for the {k:?} decoder; use sc or reference"),
                ))
            }
        })
    }

    pub fn snr_list(&self) -> CliResult<Vec<f64>> {
        let s = self.snr.as_deref().ok_or_else(|| field("snr", "SNR points are required"))?;
        parse_snr(s).map_err(|msg| field("snr", msg))
    }

    /// Resolved settings as one JSON line, for output headers.
    pub fn header_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// `a:b:step` (inclusive of `b` up to rounding), `x,y,z`, or `x`.
pub fn parse_snr(s: &str) -> std::result::Result<Vec<f64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("bad number {t:?}"))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected a:b:step, got {s:?}"));
        }
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step <= 0.0 || b < a {
            return Err(format!("need step > 0 and b >= a in {s:?}"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        if count > 10_000 {
            return Err(format!("{count} SNR points is too many"));
        }
        // round to 12 decimals so 0.1 steps print cleanly
        Ok((0..count)
            .map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12)
            .collect())
    } else {
        s.split(',').map(num).collect()
    }
}

#[derive(Parser, Debug)]
#[command(name = "pac", version = VERSION, about = "PAC code encoder, decoders, BLER simulator and latency model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode one data word (binary string, or hex with 0x prefix).
    Encode {
        #[arg(long, value_name = "BITS")]
        data: String,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Decode one block from a file with one LLR per line (`-` for stdin).
    Decode {
        #[arg(long, value_name = "FILE")]
        llr: PathBuf,
        #[command(flatten)]
        run: RunConfig,
    },
    /// Monte Carlo BLER sweep over AWGN.
    Simulate {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Cycle counts and special node statistics.
    Latency {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Inverse generator polynomial for every node length up to N.
    Invpoly {
        #[command(flatten)]
        run: RunConfig,
    },
}

fn read_text(path: &Path) -> CliResult<String> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}

fn parse_data(s: &str, k: usize) -> CliResult<(BitWord, bool)> {
    let s = s.trim();
    if let Some(hex) = s.strip_prefix("0x") {
        Ok((BitWord::from_hex(hex, k).map_err(|e| field("data", e))?, true))
    } else {
        let w: BitWord = s.parse().map_err(|e| field("data", e))?;
        if w.len() != k {
            return Err(field("data", format!("expected {k} bits, got {}", w.len())));
        }
        Ok((w, false))
    }
}

fn show_bits(w: &BitWord, hex: bool) -> String {
    if hex {
        format!("0x{}", w.to_hex())
    } else {
        w.to_string()
    }
}

fn parse_llrs(text: &str) -> CliResult<Vec<f64>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|_| field("llr", format!("line {}: bad number {l:?}", i + 1)))
        })
        .collect()
}

fn cmd_encode(data: &str, run: &RunConfig) -> CliResult<()> {
    let spec = run.code_spec()?;
    let (d, hex) = parse_data(data, spec.payload_len())?;
    let c = match run.engine.unwrap_or(Engine::Fast) {
        Engine::Fast => pac_encode(&d, &spec)?,
        Engine::Reference => encode_reference(&d, &spec)?,
    };
    emit(&run.out, &format!("{}\n", show_bits(&c, hex)))
}

#[derive(Serialize)]
struct DecodeReport {
    data: String,
    v: String,
    pm: f64,
    crc_ok: Option<bool>,
}

fn cmd_decode(llr_path: &Path, run: &RunConfig) -> CliResult<()> {
    let spec = run.code_spec()?;
    let llr = parse_llrs(&read_text(llr_path)?)?;
    if llr.len() != spec.block_len() {
        return Err(field(
            "llr",
            format!("expected {} LLRs, got {}", spec.block_len(), llr.len()),
        ));
    }
    let report = match run.decoder_choice(&spec)? {
        DecoderChoice::ScReference => {
            let v = sc_decode_reference(&llr, &spec)?;
            let data = spec.info_bits(&v).slice(0, spec.payload_len());
            DecodeReport {
                data: data.to_string(),
                v: v.to_string(),
                pm: f64::NAN,
                crc_ok: None,
            }
        }
        DecoderChoice::Ml => {
            let (d, score) = ml_decode(&llr, &spec)?;
            DecodeReport {
                data: d.to_string(),
                v: String::new(),
                pm: score,
                crc_ok: None,
            }
        }
        choice => {
            let out = match &choice {
                DecoderChoice::Sc => scl_decode(&llr, &spec, &DecoderConfig::sc())?,
                DecoderChoice::Scl(cfg) => scl_decode(&llr, &spec, cfg)?,
                DecoderChoice::Sscl(cfg, p) => sscl_decode(&llr, &spec, cfg, p)?,
                _ => unreachable!(),
            };
            DecodeReport {
                data: out.data.to_string(),
                v: out.v.to_string(),
                pm: out.pm,
                crc_ok: out.list[out.selected].crc_ok,
            }
        }
    };
    let text = match run.format.unwrap_or(Format::Csv) {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        _ => report.data + "\n",
    };
    emit(&run.out, &text)
}

fn cmd_simulate(run: &RunConfig) -> CliResult<()> {
    let spec = run.code_spec()?;
    let decoder = run.decoder_choice(&spec)?;
    let snrs = run.snr_list()?;
    let seed = run.seed.unwrap_or(1);
    let sim = SimConfig {
        seed,
        max_trials: run.max_trials.unwrap_or(10_000),
        min_errors: run.min_errors.unwrap_or(100),
        reference_encoder: run.engine == Some(Engine::Reference),
    };
    if sim.max_trials == 0 {
        return Err(field("max-trials", "must be at least 1"));
    }
    let results = match run.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| field("threads", e))?
            .install(|| run_bler(&spec, &decoder, &sim, &snrs))?,
        None => run_bler(&spec, &decoder, &sim, &snrs)?,
    };
    let text = match run.format.unwrap_or(Format::Csv) {
        Format::Csv => results_csv(
            &results,
            &decoder,
            seed,
            &[format!("pac {VERSION}"), format!("config {}", run.header_json())],
        ),
        Format::Json => {
            let doc = serde_json::json!({
                "version": VERSION,
                "config": run,
                "decoder": decoder.label(),
                "L": decoder.list_size(),
                "Z": decoder.z_label(),
                "results": results,
            });
            serde_json::to_string_pretty(&doc).expect("results serialize") + "\n"
        }
        Format::Table => return Err(field("format", "simulate writes csv or json")),
    };
    emit(&run.out, &text)
}

fn cmd_latency(run: &RunConfig) -> CliResult<()> {
    let spec = run.code_spec()?;
    let policy = run.policy()?;
    let kappa = run.kappa.unwrap_or(DEFAULT_KAPPA);
    let report = LatencyReport::new(&spec, &policy, kappa);
    let text = match run.format.unwrap_or(Format::Json) {
        Format::Json => {
            let doc = serde_json::json!({
                "version": VERSION,
                "config": run,
                "report": report,
            });
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
        Format::Csv => {
            let mut s = format!("# pac {VERSION}\n# config {}\n", run.header_json());
            let _ = writeln!(
                s,
                "# scl_cycles {} sscl_cycles {} reduction_pct {:.1}",
                report.scl_cycles, report.sscl_cycles, report.reduction_pct
            );
            s + &report.to_csv()
        }
        Format::Table => {
            let mut s = enumerate_special_nodes(&spec, &policy).table();
            let _ = writeln!(s, "\nSCL cycles\t{}", report.scl_cycles);
            let _ = writeln!(s, "SSCL cycles\t{}", report.sscl_cycles);
            let _ = writeln!(s, "reduction\t{:.1}%", report.reduction_pct);
            s
        }
    };
    emit(&run.out, &text)
}

fn cmd_invpoly(run: &RunConfig) -> CliResult<()> {
    let g = run.gen_poly()?;
    let n = run.n.ok_or_else(|| field("n", "largest node length is required"))?;
    if n < 2 || !n.is_power_of_two() {
        return Err(field("n", format!("{n} is not a power of two >= 2")));
    }
    let lens: Vec<usize> = (1..=n.trailing_zeros()).map(|e| 1usize << e).collect();
    let text = match run.format.unwrap_or(Format::Table) {
        Format::Json => {
            let rows: Vec<_> = lens
                .iter()
                .map(|&l| serde_json::json!({ "len": l, "alpha": inverse_gen_poly(&g, l).alpha() }))
                .collect();
            serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("len,alpha\n");
            for &l in &lens {
                let _ = writeln!(s, "{l},{}", inverse_gen_poly(&g, l).as_bitword());
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            for &l in &lens {
                let _ = writeln!(s, "{l} | {}", inverse_gen_poly(&g, l));
            }
            s
        }
    };
    emit(&run.out, &text)
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn execute(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Encode { data, run } => cmd_encode(&data, &run.resolve()?),
        Command::Decode { llr, run } => cmd_decode(&llr, &run.resolve()?),
        Command::Simulate { run } => cmd_simulate(&run.resolve()?),
        Command::Latency { run } => cmd_latency(&run.resolve()?),
        Command::Invpoly { run } => cmd_invpoly(&run.resolve()?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_specs() {
        assert_eq!(parse_snr("1:2:0.5").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(parse_snr("0:0.3:0.1").unwrap(), vec![0.0, 0.1, 0.2, 0.3]);
        assert_eq!(parse_snr("2.5").unwrap(), vec![2.5]);
        assert_eq!(parse_snr("1,3").unwrap(), vec![1.0, 3.0]);
        assert!(parse_snr("1:0:1").is_err());
        assert!(parse_snr("1:2").is_err());
        assert!(parse_snr("x").is_err());
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(toml::from_str::<RunConfig>("n = 8\nbogus = 1\n").is_err());
        let c: RunConfig = toml::from_str("n = 8\ninfo_set = \"3,5,6,7\"\ndecoder = \"scl\"\n").unwrap();
        assert_eq!(c.decoder, Some(DecoderKind::Scl));
        assert_eq!(c.code_spec().unwrap().info_len(), 4);
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = RunConfig {
            n: Some(12),
            info_set: Some("1,2".into()),
            ..RunConfig::default()
        };
        assert!(c.code_spec().unwrap_err().to_string().starts_with("--n:"));
        c.n = Some(8);
        c.g = Some("0111".into());
        assert!(c.code_spec().unwrap_err().to_string().starts_with("--g:"));
        c.g = None;
        c.k = Some(3);
        assert!(c.code_spec().unwrap_err().to_string().starts_with("--k:"));
        c.k = None;
        c.z = Some("0".into());
        assert!(c.policy().unwrap_err().to_string().starts_with("--z:"));
    }

    #[test]
    fn policy_from_flags() {
        let c = RunConfig {
            nodes: Some("rate0,spc".into()),
            z: Some("exhaustive".into()),
            max_node_len: Some(8),
            ..RunConfig::default()
        };
        let p = c.policy().unwrap();
        assert!(p.rate0 && p.spc && !p.rep && !p.rate1);
        assert_eq!(p.candidates, CandidateCount::Exhaustive);
        assert_eq!(p.max_node_len, Some(8));
    }
}
