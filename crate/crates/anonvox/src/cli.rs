//! Command-line front end: argument definitions and the subcommand bodies.
//!
//! Exit codes: 0 ok, 2 format or I/O, 3 dimension or content, 4 numeric or
//! synthesis. Commands return a [`Report`] per processed file instead of
//! printing directly, so batch runs can print in input order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anonvox_core::fusion::{FusionConfig, FusionNet};
use anonvox_core::losses::{
    f0_loss, jitter_loss_from_periods, shimmer_loss_from_periods, spectral_loss, total_loss, LossComponents,
    LossWeights, SpectralConfig,
};
use anonvox_core::mapper::{build_pool, map_sequence, MapperConfig};
use anonvox_core::metrics::{extract_f0, extract_periods, pcc, AnalysisConfig, F0Contour, PeriodSequence};
use anonvox_core::synth::{synthesize, SynthConfig};
use anonvox_core::{AudioBuffer, Error as CoreError, FeatureSequence};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::formats::{self, FormatError};
use crate::wav::{self, WavError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FORMAT: i32 = 2;
pub const EXIT_CONTENT: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

pub const ANALYZE_HEADER: &str = "ppq5_a,ppq5_b,shim_a,shim_b,pcc,jitter_loss,shimmer_loss";
pub const EVAL_HEADER: &str = "ls,lf0,ljit,lshim,total,lambda_s,lambda_f0,lambda_jit,lambda_shim,lambda_pro";

#[derive(Debug, Parser)]
#[command(name = "anonvox", version, about = "Query-by-example voice anonymisation pipeline")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Noise and initialisation seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Frame hop in samples; checked against feature files, sets the analysis hop.
    #[arg(long, global = true)]
    pub hop: Option<u32>,
    /// Number of pool candidates averaged per query.
    #[arg(long, global = true, default_value_t = 4)]
    pub m: usize,
    #[arg(long = "lambda-s", global = true, default_value_t = 1.0)]
    pub lambda_s: f64,
    #[arg(long = "lambda-jit", global = true, default_value_t = 10.0)]
    pub lambda_jit: f64,
    #[arg(long = "lambda-shim", global = true, default_value_t = 0.1)]
    pub lambda_shim: f64,
    #[arg(long = "lambda-pro", global = true, default_value_t = 0.1)]
    pub lambda_pro: f64,
    #[arg(long = "lambda-f0", global = true, default_value_t = 1.0)]
    pub lambda_f0: f64,
    /// FFT size used by the time-varying filters (power of two).
    #[arg(long = "fft-filter", global = true, default_value_t = 1024)]
    pub fft_filter: usize,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        Self {
            seed: 0,
            hop: None,
            m: 4,
            lambda_s: 1.0,
            lambda_jit: 10.0,
            lambda_shim: 0.1,
            lambda_pro: 0.1,
            lambda_f0: 1.0,
            fft_filter: 1024,
        }
    }
}

impl GlobalOpts {
    pub fn loss_weights(&self) -> LossWeights {
        LossWeights {
            spectral: self.lambda_s,
            jitter: self.lambda_jit,
            shimmer: self.lambda_shim,
            prosody: self.lambda_pro,
            f0: self.lambda_f0,
        }
    }

    fn analysis(&self) -> AnalysisConfig {
        match self.hop {
            Some(h) => AnalysisConfig { hop: h as usize, ..AnalysisConfig::default() },
            None => AnalysisConfig::default(),
        }
    }

    fn synth_config(&self, hop: u32) -> SynthConfig {
        SynthConfig {
            frame_hop: hop as usize,
            fft_size_filter: self.fft_filter,
            noise_seed: self.seed,
            ..SynthConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a target-speaker phone pool from feature files (files or directories of .dqf).
    PoolBuild {
        #[arg(required = true)]
        features: Vec<PathBuf>,
        #[arg(long, default_value = "target")]
        id: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map, fuse and synthesise one utterance (or a directory of them).
    Convert(ConvertJob),
    /// Voice-quality metrics for a pair of WAVs (or two directories of WAVs).
    Analyze {
        wav_a: PathBuf,
        wav_b: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Objective terms between a source and a converted WAV.
    Eval {
        wav_src: PathBuf,
        wav_conv: PathBuf,
        /// Predicted F0 as DQS1 parameters or a one-dimensional DQF1 sequence.
        #[arg(long = "f0-pred")]
        f0_pred: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Render a DQS1 parameter file to audio.
    Synth {
        params: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write randomly initialised fusion weights matching the feature dimensions.
    InitWeights {
        #[arg(long = "phon-dim")]
        phon_dim: usize,
        #[arg(long = "pro-dim")]
        pro_dim: usize,
        #[arg(long = "d-model", default_value_t = 256)]
        d_model: usize,
        #[arg(long, default_value_t = 3)]
        kernel: usize,
        #[arg(long, default_value_t = 3)]
        layers: usize,
        #[arg(long, default_value_t = 4)]
        heads: usize,
        #[arg(long, default_value_t = 8)]
        groups: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ConvertJob {
    #[arg(long)]
    pub phon: PathBuf,
    #[arg(long)]
    pub pro: PathBuf,
    #[arg(long)]
    pub pool: PathBuf,
    #[arg(long)]
    pub weights: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub heads: usize,
    #[arg(long, default_value_t = 8)]
    pub groups: usize,
}

/// A failed command: exit code plus message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn format(path: &Path, e: impl std::fmt::Display) -> Self {
        Self::new(EXIT_FORMAT, format!("{}: {e}", path.display()))
    }

    fn core(context: &str, e: CoreError) -> Self {
        Self::new(core_exit_code(&e), format!("{context}: {e}"))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

/// Numeric failures map to 4, everything else the core reports is content.
pub fn core_exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::NonFinite(_) | CoreError::BadF0(_) | CoreError::BadConfig(_) | CoreError::ZeroAmplitude => {
            EXIT_NUMERIC
        }
        _ => EXIT_CONTENT,
    }
}

/// Output of one command invocation on one input.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
}

impl Report {
    fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }
}

pub type CmdResult = Result<Report, CliError>;

/// Runs a parsed command, prints its report and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let g = &cli.global;
    let result = match cli.command {
        Command::PoolBuild { features, id, out } => cmd_pool_build(&features, &id, &out),
        Command::Convert(job) => cmd_convert_any(&job, g),
        Command::Analyze { wav_a, wav_b, csv } => cmd_analyze_any(&wav_a, &wav_b, csv.as_deref(), g),
        Command::Eval { wav_src, wav_conv, f0_pred, csv } => {
            cmd_eval_any(&wav_src, &wav_conv, f0_pred.as_deref(), csv.as_deref(), g)
        }
        Command::Synth { params, out } => cmd_synth(&params, &out, g),
        Command::InitWeights { phon_dim, pro_dim, d_model, kernel, layers, heads, groups, out } => {
            let cfg = FusionConfig {
                d_model,
                kernel_size: kernel,
                n_attn_layers: layers,
                n_heads: heads,
                groups,
                d_phon_in: phon_dim,
                d_pro_in: pro_dim,
            };
            cmd_init_weights(&cfg, &out, g)
        }
    };
    match result {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for l in &report.lines {
                println!("{l}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x}"))
}

fn emit_csv(header: &str, rows: &[String], out: Option<&Path>, report: &mut Report) -> Result<(), CliError> {
    let mut text = String::new();
    writeln!(text, "{header}").unwrap();
    for r in rows {
        writeln!(text, "{r}").unwrap();
    }
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::format(p, e)),
        None => {
            report.lines.extend(text.lines().map(str::to_string));
            Ok(())
        }
    }
}

/// Sorted regular files in `dir` with the given extension.
fn list_dir(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::format(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case(ext)))
        .collect();
    files.sort();
    Ok(files)
}

/// Pairs files of `dir_a` with same-named files of `dir_b`.
fn paired(dir_a: &Path, dir_b: &Path, ext: &str) -> Result<Vec<(String, PathBuf, PathBuf)>, CliError> {
    list_dir(dir_a, ext)?
        .into_iter()
        .map(|a| {
            let name = a.file_name().unwrap().to_string_lossy().into_owned();
            let b = dir_b.join(&name);
            if b.is_file() {
                Ok((name, a, b))
            } else {
                Err(CliError::format(&b, "no counterpart for batch input"))
            }
        })
        .collect()
}

/// Merges per-file batch results; the first failure (in input order) decides the exit code.
fn merge_batch(results: Vec<(String, CmdResult)>, report: &mut Report) -> Result<Vec<Report>, CliError> {
    let mut ok = Vec::with_capacity(results.len());
    let mut first_err = None;
    for (name, r) in results {
        match r {
            Ok(rep) => {
                report.warnings.extend(rep.warnings.iter().map(|w| format!("{name}: {w}")));
                ok.push(rep);
            }
            Err(e) => {
                eprintln!("error: {name}: {e}");
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(ok),
    }
}

// ---------------------------------------------------------------- pool-build

pub fn cmd_pool_build(inputs: &[PathBuf], id: &str, out: &Path) -> CmdResult {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            files.extend(list_dir(p, "dqf")?);
        } else {
            files.push(p.clone());
        }
    }
    let mut seqs = Vec::with_capacity(files.len());
    for f in &files {
        let seq = formats::read_features(f).map_err(|e| CliError::format(f, e))?;
        if let Some(first) = seqs.first().map(FeatureSequence::dim) {
            if seq.dim() != first {
                return Err(CliError::format(
                    f,
                    format!("feature dimension {} differs from {} in {}", seq.dim(), first, files[0].display()),
                ));
            }
        }
        seqs.push(seq);
    }
    let (pool, dropped) = match build_pool(&seqs, id) {
        Ok(x) => x,
        Err(CoreError::EmptyPool) => {
            return Err(CliError::new(EXIT_CONTENT, "pool is empty after dropping zero frames"))
        }
        Err(e) => return Err(CliError::core("pool", e)),
    };
    formats::write_pool(out, &pool).map_err(|e| CliError::format(out, e))?;
    Ok(Report { lines: vec![format!("P={} D={} dropped={}", pool.len(), pool.dim(), dropped)], warnings: vec![] })
}

// ------------------------------------------------------------------- convert

fn cmd_convert_any(job: &ConvertJob, g: &GlobalOpts) -> CmdResult {
    if !job.phon.is_dir() {
        return cmd_convert(job, g);
    }
    std::fs::create_dir_all(&job.out).map_err(|e| CliError::format(&job.out, e))?;
    let pairs = paired(&job.phon, &job.pro, "dqf")?;
    let results = pairs
        .par_iter()
        .map(|(name, phon, pro)| {
            let single = ConvertJob {
                phon: phon.clone(),
                pro: pro.clone(),
                out: job.out.join(Path::new(name).with_extension("wav")),
                ..job.clone()
            };
            (name.clone(), cmd_convert(&single, g))
        })
        .collect();
    let mut report = Report::default();
    for r in merge_batch(results, &mut report)? {
        report.lines.extend(r.lines);
    }
    Ok(report)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn cmd_convert(job: &ConvertJob, g: &GlobalOpts) -> CmdResult {
    let t0 = Instant::now();
    let phon = formats::read_features(&job.phon).map_err(|e| CliError::format(&job.phon, e))?;
    let pro = formats::read_features(&job.pro).map_err(|e| CliError::format(&job.pro, e))?;
    let pool = formats::read_pool(&job.pool).map_err(|e| CliError::format(&job.pool, e))?;
    let bundle = formats::read_weights(&job.weights).map_err(|e| CliError::format(&job.weights, e))?;
    let t_read = ms(t0);

    if phon.len() != pro.len() {
        return Err(CliError::new(
            EXIT_CONTENT,
            format!("phonetic features have {} frames, prosodic features {}", phon.len(), pro.len()),
        ));
    }
    if phon.hop_samples() != pro.hop_samples() {
        return Err(CliError::new(
            EXIT_CONTENT,
            format!("phonetic hop {} differs from prosodic hop {}", phon.hop_samples(), pro.hop_samples()),
        ));
    }
    if let Some(h) = g.hop.filter(|&h| h != phon.hop_samples()) {
        return Err(CliError::new(
            EXIT_CONTENT,
            format!("features use hop {}, --hop asks for {h}", phon.hop_samples()),
        ));
    }

    let t1 = Instant::now();
    let mapper = MapperConfig { m: g.m, ..MapperConfig::default() };
    let mapped = map_sequence(&phon, &pool, &mapper).map_err(|e| CliError::core("mapping", e))?;
    let t_map = ms(t1);

    let t2 = Instant::now();
    // weights that disagree with the flags or features are a content problem
    let weights_err = |e: CoreError| CliError::new(EXIT_CONTENT, format!("weights: {e}"));
    let cfg = FusionConfig::infer(&bundle, job.heads, job.groups).map_err(weights_err)?;
    let net = FusionNet::load_weights(bundle, &cfg).map_err(weights_err)?;
    let params = net.forward(&mapped, &pro).map_err(|e| CliError::core("fusion", e))?;
    let t_fuse = ms(t2);

    let t3 = Instant::now();
    let audio = synthesize(&params, &g.synth_config(params.hop_samples()))
        .map_err(|e| CliError::new(EXIT_NUMERIC, format!("synthesis: {e}")))?;
    let t_synth = ms(t3);

    let t4 = Instant::now();
    wav::write_wav(&job.out, &audio).map_err(|e| CliError::format(&job.out, e))?;
    let t_write = ms(t4);

    Ok(Report {
        lines: vec![format!(
            "{}: {} samples ({:.3} s); read {t_read:.1} ms, map {t_map:.1} ms, fusion {t_fuse:.1} ms, synth {t_synth:.1} ms, write {t_write:.1} ms",
            job.out.display(),
            audio.len(),
            audio.duration_secs()
        )],
        warnings: vec![],
    })
}

// ------------------------------------------------------------------- analyze

/// Metric values for one pair; `None` means not measurable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalyzeRow {
    pub ppq5_a: Option<f64>,
    pub ppq5_b: Option<f64>,
    pub shim_a: Option<f64>,
    pub shim_b: Option<f64>,
    pub pcc: Option<f64>,
    pub jitter_loss: Option<f64>,
    pub shimmer_loss: Option<f64>,
}

impl AnalyzeRow {
    pub fn to_csv(&self) -> String {
        [self.ppq5_a, self.ppq5_b, self.shim_a, self.shim_b, self.pcc, self.jitter_loss, self.shimmer_loss]
            .map(fmt_opt)
            .join(",")
    }
}

fn read_16k(path: &Path) -> Result<AudioBuffer, CliError> {
    wav::read_wav_16k(path).map_err(|e: WavError| CliError::format(path, e))
}

fn contour(buf: &AudioBuffer, cfg: &AnalysisConfig, label: &str, report: &mut Report) -> Option<F0Contour> {
    extract_f0(buf, cfg.frame_len, cfg.hop)
        .inspect_err(|e| report.warn(format!("{label}: pitch tracking failed: {e}")))
        .ok()
}

fn periods(buf: &AudioBuffer, f0: Option<&F0Contour>, label: &str, report: &mut Report) -> Option<PeriodSequence> {
    extract_periods(buf, f0?).inspect_err(|e| report.warn(format!("{label}: no period sequence: {e}"))).ok()
}

fn measure(r: anonvox_core::Result<f64>, what: &str, report: &mut Report) -> Option<f64> {
    r.inspect_err(|e| report.warn(format!("{what}: {e}"))).ok()
}

/// Metrics for one pair of decoded buffers.
pub fn analyze_pair(a: &AudioBuffer, b: &AudioBuffer, cfg: &AnalysisConfig) -> (AnalyzeRow, Report) {
    let mut rep = Report::default();
    let fa = contour(a, cfg, "a", &mut rep);
    let fb = contour(b, cfg, "b", &mut rep);
    let pa = periods(a, fa.as_ref(), "a", &mut rep);
    let pb = periods(b, fb.as_ref(), "b", &mut rep);
    let ppq5_a = pa.as_ref().and_then(|p| measure(p.jitter_ppq5(), "ppq5_a", &mut rep));
    let ppq5_b = pb.as_ref().and_then(|p| measure(p.jitter_ppq5(), "ppq5_b", &mut rep));
    let shim_a = pa.as_ref().and_then(|p| measure(p.shimmer_local(), "shim_a", &mut rep));
    let shim_b = pb.as_ref().and_then(|p| measure(p.shimmer_local(), "shim_b", &mut rep));
    let pcc = match (&fa, &fb) {
        (Some(x), Some(y)) => {
            let n = x.len().min(y.len());
            measure(pcc(&x.truncated(n), &y.truncated(n)), "pcc", &mut rep)
        }
        _ => None,
    };
    let diff = |x: Option<f64>, y: Option<f64>| Some((x? - y?).abs());
    let row = AnalyzeRow {
        ppq5_a,
        ppq5_b,
        shim_a,
        shim_b,
        pcc,
        jitter_loss: diff(ppq5_a, ppq5_b),
        shimmer_loss: diff(shim_a, shim_b),
    };
    (row, rep)
}

fn analyze_files(a: &Path, b: &Path, g: &GlobalOpts) -> Result<(AnalyzeRow, Report), CliError> {
    let (xa, xb) = (read_16k(a)?, read_16k(b)?);
    Ok(analyze_pair(&xa, &xb, &g.analysis()))
}

fn cmd_analyze_any(a: &Path, b: &Path, csv: Option<&Path>, g: &GlobalOpts) -> CmdResult {
    let mut report = Report::default();
    if a.is_dir() {
        let pairs = paired(a, b, "wav")?;
        let results: Vec<_> = pairs
            .par_iter()
            .map(|(name, pa, pb)| {
                let r = analyze_files(pa, pb, g).map(|(row, mut rep)| {
                    rep.lines.push(format!("{name},{}", row.to_csv()));
                    rep
                });
                (name.clone(), r)
            })
            .collect();
        let rows: Vec<String> = merge_batch(results, &mut report)?.into_iter().flat_map(|r| r.lines).collect();
        emit_csv(&format!("file,{ANALYZE_HEADER}"), &rows, csv, &mut report)?;
    } else {
        let (row, rep) = analyze_files(a, b, g)?;
        report.warnings = rep.warnings;
        emit_csv(ANALYZE_HEADER, &[row.to_csv()], csv, &mut report)?;
    }
    Ok(report)
}

// ---------------------------------------------------------------------- eval

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalRow {
    pub ls: f64,
    pub lf0: f64,
    pub ljit: Option<f64>,
    pub lshim: Option<f64>,
    pub total: Option<f64>,
}

impl EvalRow {
    pub fn to_csv(&self, w: &LossWeights) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.ls,
            self.lf0,
            fmt_opt(self.ljit),
            fmt_opt(self.lshim),
            fmt_opt(self.total),
            w.spectral,
            w.f0,
            w.jitter,
            w.shimmer,
            w.prosody
        )
    }
}

/// Reads a predicted F0 track from DQS1 parameters or a D=1 DQF1 sequence.
pub fn read_f0_track(path: &Path) -> Result<(Vec<f64>, u32), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::format(path, e))?;
    let fmt = |e: FormatError| CliError::format(path, e);
    match formats::sniff(&bytes) {
        Some(m) if m == formats::PARAMS_MAGIC => {
            let p = formats::decode_params(&bytes).map_err(fmt)?;
            Ok((p.f0_hz().to_vec(), p.hop_samples()))
        }
        Some(m) if m == formats::FEATURE_MAGIC => {
            let f = formats::decode_features(&bytes).map_err(fmt)?;
            if f.dim() != 1 {
                return Err(CliError::new(
                    EXIT_CONTENT,
                    format!("{}: F0 track must be one-dimensional, found D={}", path.display(), f.dim()),
                ));
            }
            let hop = f.hop_samples();
            Ok((f.into_vec(), hop))
        }
        _ => Err(CliError::format(path, "expected a DQS1 or DQF1 file")),
    }
}

/// Loss terms between a source and a converted buffer of equal length.
pub fn eval_pair(
    src: &AudioBuffer,
    conv: &AudioBuffer,
    f0_pred: Option<&F0Contour>,
    cfg: &AnalysisConfig,
    w: &LossWeights,
) -> Result<(EvalRow, Report), CliError> {
    let mut rep = Report::default();
    let ls = spectral_loss(src.samples(), conv.samples(), &SpectralConfig::default())
        .map_err(|e| CliError::core("spectral loss", e))?;

    let f_src = contour(src, cfg, "source", &mut rep);
    let f_conv = contour(conv, cfg, "converted", &mut rep);
    let lf0 = match (f0_pred.or(f_conv.as_ref()), &f_src) {
        (Some(p), Some(s)) => {
            if p.len() != s.len() {
                rep.warn(format!("F0 tracks have {} and {} frames; comparing the common prefix", p.len(), s.len()));
            }
            let n = p.len().min(s.len());
            let l = f0_loss(&p.truncated(n), &s.truncated(n)).map_err(|e| CliError::core("F0 loss", e))?;
            if l.no_overlap() {
                rep.warn("no jointly voiced frames; F0 loss set to 0");
            }
            l.value
        }
        _ => {
            rep.warn("F0 loss set to 0 (no contour)");
            0.0
        }
    };

    let ps = periods(src, f_src.as_ref(), "source", &mut rep);
    let pc = periods(conv, f_conv.as_ref(), "converted", &mut rep);
    let (ljit, lshim) = match (&ps, &pc) {
        (Some(a), Some(b)) => (
            measure(jitter_loss_from_periods(a, b), "ljit", &mut rep),
            measure(shimmer_loss_from_periods(a, b), "lshim", &mut rep),
        ),
        _ => (None, None),
    };
    let total = match (ljit, lshim) {
        (Some(jit), Some(shim)) => {
            let c = LossComponents { spectral: ls, jitter: jit, shimmer: shim, prosody: 0.0, f0: lf0 };
            Some(total_loss(&c, w).map_err(|e| CliError::core("total loss", e))?)
        }
        _ => None,
    };
    Ok((EvalRow { ls, lf0, ljit, lshim, total }, rep))
}

fn eval_files(src: &Path, conv: &Path, f0_pred: Option<&Path>, g: &GlobalOpts) -> CmdResult {
    let w = g.loss_weights();
    w.validate().map_err(|e| CliError::core("loss weights", e))?;
    let (mut a, mut b) = (read_16k(src)?, read_16k(conv)?);
    let mut warnings = Vec::new();
    if a.len() != b.len() {
        warnings.push(format!("lengths differ ({} vs {} samples); truncating to the shorter", a.len(), b.len()));
        let n = a.len().min(b.len());
        a = a.truncated(n);
        b = b.truncated(n);
    }
    let mut cfg = g.analysis();
    let pred = match f0_pred {
        Some(p) => {
            let (values, hop) = read_f0_track(p)?;
            if g.hop.is_some_and(|h| h != hop) {
                return Err(CliError::new(EXIT_CONTENT, format!("{}: hop {hop} differs from --hop", p.display())));
            }
            cfg.hop = hop as usize;
            Some(F0Contour::new(values, hop, a.sample_rate()).map_err(|e| CliError::core("F0 track", e))?)
        }
        None => None,
    };
    let (row, mut rep) = eval_pair(&a, &b, pred.as_ref(), &cfg, &w)?;
    warnings.append(&mut rep.warnings);
    Ok(Report { lines: vec![row.to_csv(&w)], warnings })
}

fn cmd_eval_any(src: &Path, conv: &Path, f0_pred: Option<&Path>, csv: Option<&Path>, g: &GlobalOpts) -> CmdResult {
    let mut report = Report::default();
    if src.is_dir() {
        let pairs = paired(src, conv, "wav")?;
        let results: Vec<_> = pairs
            .par_iter()
            .map(|(name, a, b)| {
                let pred = f0_pred.map(|d| d.join(Path::new(name).with_extension("dqs")));
                let r = eval_files(a, b, pred.as_deref(), g).map(|mut rep| {
                    rep.lines = rep.lines.into_iter().map(|l| format!("{name},{l}")).collect();
                    rep
                });
                (name.clone(), r)
            })
            .collect();
        let rows: Vec<String> = merge_batch(results, &mut report)?.into_iter().flat_map(|r| r.lines).collect();
        emit_csv(&format!("file,{EVAL_HEADER}"), &rows, csv, &mut report)?;
    } else {
        let rep = eval_files(src, conv, f0_pred, g)?;
        report.warnings = rep.warnings;
        emit_csv(EVAL_HEADER, &rep.lines, csv, &mut report)?;
    }
    Ok(report)
}

// --------------------------------------------------------------------- synth

pub fn cmd_synth(params_path: &Path, out: &Path, g: &GlobalOpts) -> CmdResult {
    let params = formats::read_params(params_path).map_err(|e| CliError::format(params_path, e))?;
    if let Some(h) = g.hop.filter(|&h| h != params.hop_samples()) {
        return Err(CliError::new(
            EXIT_CONTENT,
            format!("parameters use hop {}, --hop asks for {h}", params.hop_samples()),
        ));
    }
    let audio = synthesize(&params, &g.synth_config(params.hop_samples()))
        .map_err(|e| CliError::new(EXIT_NUMERIC, format!("synthesis: {e}")))?;
    wav::write_wav(out, &audio).map_err(|e| CliError::format(out, e))?;
    Ok(Report { lines: vec![format!("{}: {} samples", out.display(), audio.len())], warnings: vec![] })
}

pub fn cmd_init_weights(cfg: &FusionConfig, out: &Path, g: &GlobalOpts) -> CmdResult {
    let net = FusionNet::init_random(cfg, g.seed).map_err(|e| CliError::core("fusion config", e))?;
    let bundle = net.to_bundle();
    formats::write_weights(out, &bundle).map_err(|e| CliError::format(out, e))?;
    Ok(Report { lines: vec![format!("{}: {} tensors", out.display(), bundle.tensors.len())], warnings: vec![] })
}
