//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Run with `cargo test -p anonvox --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anonvox::cli::{cmd_convert, ConvertJob, GlobalOpts};
use anonvox::core::fusion::{FusionConfig, FusionNet, OUT_DIM};
use anonvox::core::losses::{
    jitter_loss, prosody_leak_loss, shimmer_loss, spectral_loss, total_loss, LossComponents, LossWeights,
    SpectralConfig,
};
use anonvox::core::mapper::{map_query, select_candidates, MapperConfig};
use anonvox::core::metrics::{extract_f0, jitter_ppq5, pcc, shimmer_local, AnalysisConfig, F0Contour};
use anonvox::core::synth::{
    filters_from_params, ltv_fir_filter, synth_harmonic_unfiltered, synth_noise, synthesize, SynthConfig,
};
use anonvox::core::{AudioBuffer, FeatureSequence, PhonePool, SynthParamsSeq, Tensor, WeightBundle};
use anonvox::{formats, wav};
use rand::Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        // negated so that a NaN fails the check
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    ensure!(elapsed.as_secs_f64() < limit, "{what} took {:.2} s (limit {limit} s)", elapsed.as_secs_f64());
    Ok(())
}

// 1 -----------------------------------------------------------------------

fn c1_jitter_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = common::rng(1);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = r.random_range(5..=200);
        let base = r.random_range(1.0 / 2000.0..1.0 / 40.0);
        let t: Vec<f64> = (0..n).map(|_| base * r.random_range(0.9..1.1)).collect();
        let got = jitter_ppq5(&t).map_err(|e| e.to_string())?;
        worst = worst.max(rel_err(got, common::ppq5_oracle(&t)));
    }
    ensure!(worst <= 1e-10, "worst relative error {worst:e}");
    for n in [5, 6, 50, 200] {
        let got = jitter_ppq5(&vec![0.007; n]).map_err(|e| e.to_string())?;
        ensure!(got == 0.0, "constant sequence of {n} gave {got}");
    }
    let fixed = jitter_ppq5(&[0.010, 0.0104, 0.0096, 0.010, 0.0104, 0.0096, 0.010]).unwrap();
    ensure!(rel_err(fixed, 1.6) <= 1e-10, "hand case gave {fixed}, expected 1.6");
    let alt: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 0.009 } else { 0.011 }).collect();
    let got = jitter_ppq5(&alt).unwrap();
    ensure!(rel_err(got, 128.0 / 19.0) <= 1e-10, "alternating case gave {got}, expected 128/19");
    within(start.elapsed(), 1.0, "criterion 1")?;
    Ok(format!("50 sequences, worst rel err {worst:.1e}"))
}

// 2 -----------------------------------------------------------------------

fn c2_shimmer_oracle() -> Outcome {
    let mut r = common::rng(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = r.random_range(5..=200);
        let a: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
        let got = shimmer_local(&a).map_err(|e| e.to_string())?;
        worst = worst.max(rel_err(got, common::shimmer_oracle(&a)));
    }
    ensure!(worst <= 1e-10, "worst relative error {worst:e}");
    let got = shimmer_local(&[1.0, 0.8, 1.0, 0.8]).unwrap();
    ensure!((got - 2.0 / 9.0).abs() <= 1e-12, "hand case gave {got}");
    ensure!(shimmer_local(&[0.3; 17]).unwrap() == 0.0, "constant amplitudes not 0");
    Ok(format!("50 sequences, worst rel err {worst:.1e}; [1,.8,1,.8] -> {got:.15}"))
}

// 3 -----------------------------------------------------------------------

fn c3_harmonic_purity() -> Outcome {
    let start = Instant::now();
    let (sr, n) = (16_000usize, 16_000usize);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut notes = Vec::new();
    for f0 in [100usize, 150, 440] {
        let x = synth_harmonic_unfiltered(&vec![f0 as f64; 100], 160, sr as u32, 150).map_err(|e| e.to_string())?;
        ensure!(x.len() == n, "length {}", x.len());
        let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
        fft.process(&mut buf);
        let mag: Vec<f64> = buf[..=n / 2].iter().map(|c| c.norm()).collect();
        // one-sided energy, counting the mirrored half once more
        let energy = |k: usize| if k == 0 || k == n / 2 { mag[k] * mag[k] } else { 2.0 * mag[k] * mag[k] };
        let total: f64 = (0..=n / 2).map(energy).sum();

        let fundamental = mag[f0];
        let off_peak = (0..=n / 2).filter(|k| k % f0 != 0).map(|k| mag[k]).fold(0.0, f64::max);
        ensure!(
            off_peak < 1e-6 * fundamental,
            "F0 {f0}: off-harmonic bin at {:.1e} of the fundamental",
            off_peak / fundamental
        );
        for k in 1..n / 2 {
            if mag[k] > mag[k - 1] && mag[k] > mag[k + 1] && mag[k] > 1e-3 * fundamental {
                ensure!(k % f0 == 0, "F0 {f0}: spectral peak at {k} Hz");
            }
        }
        let ratio = mag[2 * f0] / fundamental;
        ensure!((ratio - 0.5).abs() <= 0.05 * 0.5, "F0 {f0}: H2/H1 = {ratio}");
        let above = energy(n / 2) / total;
        ensure!(above < 1e-3, "F0 {f0}: {above:e} of energy at Nyquist");
        notes.push(format!("{f0} Hz: H2/H1 {ratio:.6}"));
    }
    within(start.elapsed(), 5.0, "criterion 3")?;
    Ok(notes.join(", "))
}

// 4 -----------------------------------------------------------------------

fn c4_ltv_vs_direct() -> Outcome {
    let mut r = common::rng(4);
    let (hop, frames, fft) = (160usize, 24usize, 1024usize);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let f = if i % 2 == 0 { 176 } else { r.random_range(2..=176) };
        let row: Vec<f64> = (0..f).map(|_| r.random_range(-3.0..3.0)).collect();
        let rows: Vec<f64> = row.iter().copied().cycle().take(f * frames).collect();
        let bank = filters_from_params(&rows, f, fft).map_err(|e| e.to_string())?;
        let x = synth_noise(hop * frames, 100 + i);
        let y = ltv_fir_filter(&x, &bank, hop).map_err(|e| e.to_string())?;
        let (taps, c) = (bank.taps(0), bank.center() as isize);
        let margin = bank.tap_len();
        let mut se = 0.0;
        for n in margin..x.len() - margin {
            let direct: f64 =
                taps.iter().enumerate().map(|(k, h)| h * x[(n as isize - (k as isize - c)) as usize]).sum();
            se += (y[n] - direct).powi(2);
        }
        let rms = (se / (x.len() - 2 * margin) as f64).sqrt();
        worst = worst.max(rms);
    }
    ensure!(worst <= 1e-5, "worst interior RMS {worst:e}");
    Ok(format!("20 filters, worst interior RMS {worst:.1e}"))
}

// 5 -----------------------------------------------------------------------

fn cosine_oracle(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (1.0 - dot / (na * nb)).clamp(0.0, 2.0)
}

/// Full sort of the pool, softmax of inverse distances over the first `m`.
fn knn_oracle(q: &[f64], pool: &PhonePool, m: usize) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let mut order: Vec<(f64, usize)> = (0..pool.len()).map(|i| (cosine_oracle(q, pool.vector(i)), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let best = &order[..m];
    let scores: Vec<f64> = best.iter().map(|(d, _)| 1.0 / d.max(1e-8)).collect();
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - top).exp()).collect();
    let z: f64 = exps.iter().sum();
    let weights: Vec<f64> = exps.iter().map(|e| e / z).collect();
    let mut out = vec![0.0; q.len()];
    for ((_, i), w) in best.iter().zip(&weights) {
        for (o, v) in out.iter_mut().zip(pool.vector(*i)) {
            *o += w * v;
        }
    }
    (best.iter().map(|b| b.1).collect(), weights, out)
}

fn c5_knn_oracle() -> Outcome {
    let mut r = common::rng(5);
    let (d, m) = (64usize, 4usize);
    let cfg = MapperConfig { m, ..MapperConfig::default() };
    let mut worst = 0.0f64;
    for p in [10usize, 1000] {
        let data: Vec<f64> = (0..p * d).map(|_| r.random_range(-1.0..1.0)).collect();
        let pool = PhonePool::new(data, d, "acc").unwrap();
        for qi in 0..1000 {
            let q: Vec<f64> = (0..d).map(|_| r.random_range(-1.0..1.0)).collect();
            let (idx, w_oracle, y_oracle) = knn_oracle(&q, &pool, m);
            let sel = select_candidates(&q, &pool, &cfg).map_err(|e| e.to_string())?;
            ensure!(sel.indices == idx, "P={p} query {qi}: selected {:?}, oracle {:?}", sel.indices, idx);
            let y = map_query(&q, &pool, &cfg).map_err(|e| e.to_string())?;
            for (a, b) in y.iter().zip(&y_oracle) {
                worst = worst.max((a - b).abs());
            }
            for (a, b) in sel.weights.iter().zip(&w_oracle) {
                worst = worst.max((a - b).abs());
            }
            let wsum: f64 = sel.weights.iter().sum();
            ensure!((wsum - 1.0).abs() <= 1e-12, "P={p} query {qi}: weight sum {wsum}");
            for (j, v) in y.iter().enumerate() {
                let comps = idx.iter().map(|&i| pool.vector(i)[j]);
                let (lo, hi) = comps.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c), hi.max(c)));
                ensure!(*v >= lo - 1e-12 && *v <= hi + 1e-12, "P={p} query {qi}: component {j} outside hull");
            }
        }
    }
    ensure!(worst <= 1e-12, "worst component difference {worst:e}");
    Ok(format!("2000 queries, worst component diff {worst:.1e}"))
}

// 6 -----------------------------------------------------------------------

fn voiced_signal(seed: u64) -> AudioBuffer {
    let mut r = common::rng(seed);
    let period = r.random_range(90..220usize);
    let mut centres = vec![25usize];
    while *centres.last().unwrap() + 2 * period < 16_000 {
        let jitter = r.random_range(0..=4usize);
        centres.push(centres.last().unwrap() + period - 2 + jitter);
    }
    let amps: Vec<f64> = centres.iter().map(|_| r.random_range(0.5..0.9)).collect();
    let len = centres.last().unwrap() + 21;
    AudioBuffer::new(common::pulse_train(&centres, &amps, len, 20), 16_000).unwrap()
}

fn c6_loss_identities() -> Outcome {
    let mut r = common::rng(6);
    let spec = SpectralConfig::default();
    let analysis = AnalysisConfig::default();
    for i in 0..10 {
        let n = r.random_range(1024..8000);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let ls = spectral_loss(&x, &x, &spec).map_err(|e| e.to_string())?;
        ensure!(ls == 0.0, "spectral_loss(x, x) = {ls} for input {i}");

        let v = voiced_signal(600 + i);
        let lj = jitter_loss(&v, &v, &analysis).map_err(|e| format!("jitter input {i}: {e}"))?;
        let lsh = shimmer_loss(&v, &v, &analysis).map_err(|e| format!("shimmer input {i}: {e}"))?;
        ensure!(lj == 0.0 && lsh == 0.0, "jitter/shimmer self-loss {lj}/{lsh} for input {i}");

        let d = r.random_range(1..64);
        let t = r.random_range(1..50);
        let seq = common::features(t, d, 160, 700 + i);
        let lp = prosody_leak_loss(&seq, &seq).map_err(|e| e.to_string())?;
        ensure!(lp == 0.0, "prosody_leak_loss(r, r) = {lp}");

        let f0: Vec<f64> = (0..r.random_range(10..200))
            .map(|_| if r.random_bool(0.2) { 0.0 } else { r.random_range(80.0..400.0) })
            .collect();
        let c = F0Contour::new(f0, 160, 16_000).map_err(|e| e.to_string())?;
        let p = pcc(&c, &c).map_err(|e| e.to_string())?;
        ensure!((p - 1.0).abs() <= 1e-12, "pcc(x, x) = {p}");
    }

    let w = LossWeights::default();
    let worked = LossComponents { spectral: 0.2, jitter: 0.01, shimmer: 0.05, prosody: 0.1, f0: 0.3 };
    let total = total_loss(&worked, &w).unwrap();
    ensure!((total - 0.615).abs() <= 1e-12, "worked example total {total}");
    for _ in 0..10 {
        let c = LossComponents {
            spectral: r.random_range(0.0..5.0),
            jitter: r.random_range(0.0..5.0),
            shimmer: r.random_range(0.0..5.0),
            prosody: r.random_range(0.0..5.0),
            f0: r.random_range(0.0..5.0),
        };
        let by_hand = 1.0 * c.spectral + 10.0 * c.jitter + 0.1 * c.shimmer + 0.1 * c.prosody + 1.0 * c.f0;
        let got = total_loss(&c, &w).unwrap();
        ensure!((got - by_hand).abs() <= 1e-12, "total {got} vs {by_hand}");
    }
    Ok(format!("10 inputs per identity; worked total {total}"))
}

// 7 -----------------------------------------------------------------------

fn c7_f0_round_trip() -> Outcome {
    let analysis = AnalysisConfig::default();
    let mut notes = Vec::new();
    for target in [100.0, 200.0, 300.0] {
        let t = 100;
        let params = SynthParamsSeq::new(vec![target; t], vec![0.0; t * 176], 176, vec![0.0; t * 80], 80, 160).unwrap();
        let y = synthesize(&params, &SynthConfig::default()).map_err(|e| e.to_string())?;
        let f0 = extract_f0(&y, analysis.frame_len, analysis.hop).map_err(|e| e.to_string())?;
        let mut voiced: Vec<f64> = f0.values().iter().copied().filter(|&f| f > 0.0).collect();
        ensure!(voiced.len() > t / 2, "{target} Hz: only {} voiced frames", voiced.len());
        voiced.sort_by(f64::total_cmp);
        let median = voiced[voiced.len() / 2];
        ensure!((median - target).abs() <= 2.0, "{target} Hz: median estimate {median}");
        notes.push(format!("{target} -> {median:.3}"));
    }
    Ok(notes.join(", "))
}

// 8 -----------------------------------------------------------------------

fn c8_convert_end_to_end() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = dir.path();
    let (d_phon, d_pro) = (64, 4);
    let mut r = common::rng(8);
    let pool_data: Vec<f64> = (0..500 * d_phon).map(|_| r.random_range(-1.0..1.0)).collect();
    formats::write_pool(p.join("pool.dqp"), &PhonePool::new(pool_data, d_phon, "target").unwrap())
        .map_err(|e| e.to_string())?;
    formats::write_features(p.join("phon.dqf"), &common::features(100, d_phon, 160, 81)).map_err(|e| e.to_string())?;
    formats::write_features(p.join("pro.dqf"), &common::features(100, d_pro, 160, 82)).map_err(|e| e.to_string())?;
    let net = FusionNet::init_random(&FusionConfig::new(d_phon, d_pro), 83).map_err(|e| e.to_string())?;
    formats::write_weights(p.join("w.dqw"), &net.to_bundle()).map_err(|e| e.to_string())?;

    let g = GlobalOpts::default();
    let mut bytes = Vec::new();
    let mut slowest = 0.0f64;
    for name in ["a.wav", "b.wav"] {
        let job = ConvertJob {
            phon: p.join("phon.dqf"),
            pro: p.join("pro.dqf"),
            pool: p.join("pool.dqp"),
            weights: p.join("w.dqw"),
            out: p.join(name),
            heads: 4,
            groups: 8,
        };
        let start = Instant::now();
        cmd_convert(&job, &g).map_err(|e| format!("exit {}: {}", e.code, e.message))?;
        slowest = slowest.max(start.elapsed().as_secs_f64());
        bytes.push(std::fs::read(p.join(name)).map_err(|e| e.to_string())?);
    }
    let audio = wav::read_wav(p.join("a.wav")).map_err(|e| e.to_string())?;
    ensure!(audio.len() == 16_000, "output has {} samples", audio.len());
    ensure!(bytes[0] == bytes[1], "two runs differ");
    ensure!(slowest < 5.0, "convert took {slowest:.2} s");
    Ok(format!("16000 samples, byte-identical, slowest run {slowest:.2} s"))
}

// 9 -----------------------------------------------------------------------

fn f32v(r: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| r.random_range(lo..hi) as f32 as f64).collect()
}

fn c9_format_round_trips() -> Outcome {
    let mut r = common::rng(9);
    for i in 0..100 {
        let t = if i == 0 { 0 } else { r.random_range(0..40) };
        let d = r.random_range(1..20);
        let seq = FeatureSequence::new(f32v(&mut r, t * d, -5.0, 5.0), d, r.random_range(1..1000)).unwrap();
        let b = formats::encode_features(&seq).unwrap();
        let back = formats::decode_features(&b).map_err(|e| e.to_string())?;
        ensure!(back == seq && formats::encode_features(&back).unwrap() == b, "DQF1 instance {i}");

        let p = if i == 0 { 1 } else { r.random_range(1..40) };
        let id: String = (0..r.random_range(0..10)).map(|_| r.random_range('a'..='z')).collect();
        let pool = PhonePool::new(f32v(&mut r, p * d, 0.1, 5.0), d, id).unwrap();
        let b = formats::encode_pool(&pool).unwrap();
        let back = formats::decode_pool(&b).map_err(|e| e.to_string())?;
        ensure!(back == pool && formats::encode_pool(&back).unwrap() == b, "DQP1 instance {i}");

        let (fh, fs) = if i % 2 == 0 { (176, 80) } else { (r.random_range(1..20), r.random_range(1..20)) };
        let f0: Vec<f64> =
            (0..t).map(|_| if r.random_bool(0.3) { 0.0 } else { r.random_range(40.0..2000.0) as f32 as f64 }).collect();
        let params =
            SynthParamsSeq::new(f0, f32v(&mut r, t * fh, -10.0, 10.0), fh, f32v(&mut r, t * fs, -10.0, 10.0), fs, 160)
                .unwrap();
        let b = formats::encode_params(&params).unwrap();
        let back = formats::decode_params(&b).map_err(|e| e.to_string())?;
        ensure!(back == params && formats::encode_params(&back).unwrap() == b, "DQS1 instance {i}");

        let tensors = (0..r.random_range(0..6))
            .map(|k| {
                let shape: Vec<usize> = (0..r.random_range(1..4)).map(|_| r.random_range(1..6)).collect();
                let n = shape.iter().product();
                Tensor::new(format!("layer{k}.weight"), shape, (0..n).map(|_| r.random_range(-1.0f32..1.0)).collect())
            })
            .collect();
        let bundle = WeightBundle::new(tensors);
        let b = formats::encode_weights(&bundle).unwrap();
        let back = formats::decode_weights(&b).map_err(|e| e.to_string())?;
        ensure!(back == bundle && formats::encode_weights(&back).unwrap() == b, "DQW1 instance {i}");
    }
    Ok("100 instances per format".into())
}

// 10 ----------------------------------------------------------------------

fn c10_fusion_suite() -> Outcome {
    let (d_phon, d_pro) = (64, 4);
    let cfg = FusionConfig::new(d_phon, d_pro);
    let group = cfg.d_model / cfg.groups;
    let mut r = common::rng(10);
    let (mut worst_mean, mut worst_var) = (0.0f64, 0.0f64);
    for seed in 0..3 {
        let net = FusionNet::init_random(&cfg, seed).map_err(|e| e.to_string())?;
        for t in [1usize, 7, 40] {
            let scale = r.random_range(0.1..10.0);
            let xp = FeatureSequence::new(f32v(&mut r, t * d_phon, -scale, scale), d_phon, 160).unwrap();
            let xq = FeatureSequence::new(f32v(&mut r, t * d_pro, -scale, scale), d_pro, 160).unwrap();
            let raw = net.forward_raw(&xp, &xq).map_err(|e| e.to_string())?;
            ensure!(
                raw.rows == t && raw.cols == OUT_DIM && OUT_DIM == 1 + 176 + 80,
                "raw output {}x{}",
                raw.rows,
                raw.cols
            );
            let out = net.forward(&xp, &xq).map_err(|e| e.to_string())?;
            ensure!(out.len() == t && out.harmonic_len() == 176 && out.noise_len() == 80, "parameter shape");
            ensure!(out.f0_hz().iter().all(|&f| f > 40.0 && f < 2000.0), "F0 outside (40, 2000)");
            for enc in [net.enc_phon_forward(&xp), net.enc_pro_forward(&xq)] {
                let enc = enc.map_err(|e| e.to_string())?;
                for frame in enc.frames() {
                    for g in frame.chunks(group) {
                        let m = g.iter().sum::<f64>() / group as f64;
                        let v = g.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / group as f64;
                        worst_mean = worst_mean.max(m.abs());
                        worst_var = worst_var.max((v - 1.0).abs());
                    }
                }
            }
        }
    }
    ensure!(worst_mean < 1e-5, "group mean {worst_mean:e}");
    ensure!(worst_var <= 1e-3, "group variance off by {worst_var:e}");
    Ok(format!("T x {OUT_DIM}; worst group |mean| {worst_mean:.1e}, |var-1| {worst_var:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("jitter ppq5 oracle equivalence", c1_jitter_oracle),
        ("local shimmer oracle equivalence", c2_shimmer_oracle),
        ("harmonic oscillator spectral purity", c3_harmonic_purity),
        ("LTV-FIR matches direct convolution", c4_ltv_vs_direct),
        ("kNN mapper brute-force equivalence", c5_knn_oracle),
        ("loss identities and weighted total", c6_loss_identities),
        ("F0 round trip through the synthesiser", c7_f0_round_trip),
        ("convert end-to-end determinism and shape", c8_convert_end_to_end),
        ("binary format round trips", c9_format_round_trips),
        ("fusion shape and normalisation", c10_fusion_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}  {name} ({secs:.2} s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}  {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
