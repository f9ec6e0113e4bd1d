//! Forward inference for the parameter network.
//!
//! Architecture (all convolutions use zero "same" padding over frames):
//!
//! ```text
//! x_phon -> conv -> ReLU -> conv -> ReLU -> GroupNorm --\
//!                                                        + -> +PE -> 3 x [x + MHA(LN(x))]
//! x_pro  -> conv -> ReLU -> conv -> ReLU -> GroupNorm --/
//!   -> conv -> ReLU -> conv -> ReLU -> LayerNorm -> Linear(257)
//! ```
//!
//! Output channel 0 becomes `F0 = 40 + 1960 * sigmoid(z)` Hz, with `z`
//! clamped to `±30` so F0 stays strictly inside `(40, 2000)`; channels
//! `1..=176` are the harmonic filter row and `177..=256` the noise filter
//! row, both passed through unchanged as log-magnitudes.
//!
//! # Weight manifest
//!
//! `d` = `d_model`, `k` = `kernel_size`. Convolution weights are
//! `[out, in, k]`, linear weights `[out, in]`, row-major.
//!
//! | tensor | shape |
//! |---|---|
//! | `enc_phon.conv1.weight` / `.bias` | `[d, d_phon_in, k]` / `[d]` |
//! | `enc_phon.conv2.weight` / `.bias` | `[d, d, k]` / `[d]` |
//! | `enc_phon.norm.weight` / `.bias` | `[d]` / `[d]` |
//! | `enc_pro.*` | as `enc_phon.*` with `d_pro_in` |
//! | `attn.{l}.norm.weight` / `.bias` | `[d]` / `[d]` |
//! | `attn.{l}.{query,key,value,out}.weight` / `.bias` | `[d, d]` / `[d]` |
//! | `post.conv1.*`, `post.conv2.*` | `[d, d, k]` / `[d]` |
//! | `post.norm.weight` / `.bias` | `[d]` / `[d]` |
//! | `head.weight` / `.bias` | `[257, d]` / `[257]` |

mod layers;

pub use layers::Mat;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sequence::{FeatureSequence, SynthParamsSeq, F0_MAX, F0_MIN, HARMONIC_FILTER_LEN, NOISE_FILTER_LEN};
use crate::weights::{Tensor, WeightBundle};
use layers::{positional_encoding, AttentionBlock, Conv1d, GroupNorm, Linear};

/// Width of the output head: F0 plus both filter rows.
/// Logit clamp that keeps the F0 activation strictly inside `(F0_MIN, F0_MAX)`.
pub const F0_LOGIT_LIMIT: f64 = 30.0;

pub const OUT_DIM: usize = 1 + HARMONIC_FILTER_LEN + NOISE_FILTER_LEN;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionConfig {
    pub d_model: usize,
    pub kernel_size: usize,
    pub n_attn_layers: usize,
    pub n_heads: usize,
    pub groups: usize,
    pub d_phon_in: usize,
    pub d_pro_in: usize,
}

impl FusionConfig {
    /// Default widths (256 hidden, kernel 3, 3 layers, 4 heads, 8 groups).
    pub fn new(d_phon_in: usize, d_pro_in: usize) -> Self {
        Self { d_model: 256, kernel_size: 3, n_attn_layers: 3, n_heads: 4, groups: 8, d_phon_in, d_pro_in }
    }

    pub fn out_dim(&self) -> usize {
        OUT_DIM
    }

    pub fn validate(&self) -> Result<()> {
        let c = self;
        if c.d_model == 0 || c.n_heads == 0 || c.groups == 0 || c.d_phon_in == 0 || c.d_pro_in == 0 {
            return Err(Error::BadConfig("all widths and counts must be positive".into()));
        }
        if c.kernel_size.is_multiple_of(2) {
            return Err(Error::BadConfig(format!("kernel size {} must be odd", c.kernel_size)));
        }
        if !c.d_model.is_multiple_of(c.n_heads) {
            return Err(Error::BadConfig(format!("d_model {} not divisible by {} heads", c.d_model, c.n_heads)));
        }
        if !c.d_model.is_multiple_of(c.groups) {
            return Err(Error::BadConfig(format!("d_model {} not divisible by {} groups", c.d_model, c.groups)));
        }
        Ok(())
    }

    /// Recovers the shape-determined fields from a bundle; heads and groups
    /// are not visible in tensor shapes and must be supplied.
    pub fn infer(bundle: &WeightBundle, n_heads: usize, groups: usize) -> Result<Self> {
        let shape =
            |name: &str| bundle.get(name).map(|t| t.shape.clone()).ok_or_else(|| Error::MissingTensor(name.into()));
        let phon = shape("enc_phon.conv1.weight")?;
        let pro = shape("enc_pro.conv1.weight")?;
        if phon.len() != 3 || pro.len() != 3 {
            return Err(Error::ShapeMismatch {
                name: "enc_phon.conv1.weight".into(),
                expected: vec![0, 0, 0],
                got: phon,
            });
        }
        let n_attn_layers = (0..).take_while(|l| bundle.get(&format!("attn.{l}.query.weight")).is_some()).count();
        let cfg = Self {
            d_model: phon[0],
            kernel_size: phon[2],
            n_attn_layers,
            n_heads,
            groups,
            d_phon_in: phon[1],
            d_pro_in: pro[1],
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Tensor names and shapes the network expects, in canonical order.
pub fn manifest(cfg: &FusionConfig) -> Vec<(String, Vec<usize>)> {
    let (d, k) = (cfg.d_model, cfg.kernel_size);
    let mut m = Vec::new();
    for (branch, d_in) in [("enc_phon", cfg.d_phon_in), ("enc_pro", cfg.d_pro_in)] {
        m.push((format!("{branch}.conv1.weight"), vec![d, d_in, k]));
        m.push((format!("{branch}.conv1.bias"), vec![d]));
        m.push((format!("{branch}.conv2.weight"), vec![d, d, k]));
        m.push((format!("{branch}.conv2.bias"), vec![d]));
        m.push((format!("{branch}.norm.weight"), vec![d]));
        m.push((format!("{branch}.norm.bias"), vec![d]));
    }
    for l in 0..cfg.n_attn_layers {
        m.push((format!("attn.{l}.norm.weight"), vec![d]));
        m.push((format!("attn.{l}.norm.bias"), vec![d]));
        for p in ["query", "key", "value", "out"] {
            m.push((format!("attn.{l}.{p}.weight"), vec![d, d]));
            m.push((format!("attn.{l}.{p}.bias"), vec![d]));
        }
    }
    for conv in ["conv1", "conv2"] {
        m.push((format!("post.{conv}.weight"), vec![d, d, k]));
        m.push((format!("post.{conv}.bias"), vec![d]));
    }
    m.push(("post.norm.weight".into(), vec![d]));
    m.push(("post.norm.bias".into(), vec![d]));
    m.push(("head.weight".into(), vec![OUT_DIM, d]));
    m.push(("head.bias".into(), vec![OUT_DIM]));
    m
}

#[derive(Debug, Clone)]
struct Branch {
    conv1: Conv1d,
    conv2: Conv1d,
    norm: GroupNorm,
}

impl Branch {
    fn forward(&self, x: &Mat) -> Mat {
        let h = self.conv1.forward(x).relu();
        let h = self.conv2.forward(&h).relu();
        self.norm.forward(&h)
    }
}

/// Loaded network. Immutable; `forward` is a pure function of the inputs.
#[derive(Debug, Clone)]
pub struct FusionNet {
    cfg: FusionConfig,
    bundle: WeightBundle,
    enc_phon: Branch,
    enc_pro: Branch,
    attn: Vec<AttentionBlock>,
    post: Branch,
    head: Linear,
}

impl FusionNet {
    /// Uniform `[-k, k]` weights and biases with `k = 1/sqrt(fan_in)`
    /// (`fan_in = in * kernel` for convolutions); normalisation scales start
    /// at 1 and offsets at 0. Tensors are drawn in manifest order from
    /// `ChaCha8Rng::seed_from_u64(seed)`.
    pub fn init_random(cfg: &FusionConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let man = manifest(cfg);
        let mut tensors = Vec::with_capacity(man.len());
        let mut fan_in = 1usize;
        for (name, shape) in man {
            let n: usize = shape.iter().product();
            let data = if name.contains(".norm.") {
                vec![if name.ends_with(".weight") { 1.0 } else { 0.0 }; n]
            } else {
                if name.ends_with(".weight") {
                    fan_in = shape[1..].iter().product();
                }
                let k = 1.0 / libm::sqrtf(fan_in as f32);
                (0..n).map(|_| rng.random_range(-k..=k)).collect()
            };
            tensors.push(Tensor::new(name, shape, data));
        }
        Self::load_weights(WeightBundle::new(tensors), cfg)
    }

    /// Builds a network from a bundle that matches [`manifest`] exactly.
    pub fn load_weights(bundle: WeightBundle, cfg: &FusionConfig) -> Result<Self> {
        cfg.validate()?;
        bundle.validate()?;
        let man = manifest(cfg);
        for t in &bundle.tensors {
            if !man.iter().any(|(n, _)| *n == t.name) {
                return Err(Error::Invalid(format!("unexpected tensor `{}`", t.name)));
            }
        }
        let mut ordered = Vec::with_capacity(man.len());
        for (name, shape) in &man {
            let t = bundle.get(name).ok_or_else(|| Error::MissingTensor(name.clone()))?;
            if &t.shape != shape {
                return Err(Error::ShapeMismatch { name: name.clone(), expected: shape.clone(), got: t.shape.clone() });
            }
            ordered.push(t.clone());
        }
        let bundle = WeightBundle::new(ordered);
        let get = |name: &str| -> &[f32] { &bundle.get(name).expect("checked against manifest").data };

        let d = cfg.d_model;
        let k = cfg.kernel_size;
        let branch = |prefix: &str, d_in: usize, groups: usize| Branch {
            conv1: Conv1d::new(
                d,
                d_in,
                k,
                get(&format!("{prefix}.conv1.weight")),
                get(&format!("{prefix}.conv1.bias")),
            ),
            conv2: Conv1d::new(d, d, k, get(&format!("{prefix}.conv2.weight")), get(&format!("{prefix}.conv2.bias"))),
            norm: GroupNorm::new(groups, get(&format!("{prefix}.norm.weight")), get(&format!("{prefix}.norm.bias"))),
        };
        let linear = |prefix: &str, out: usize| {
            Linear::new(out, d, get(&format!("{prefix}.weight")), get(&format!("{prefix}.bias")))
        };
        let attn = (0..cfg.n_attn_layers)
            .map(|l| AttentionBlock {
                norm: GroupNorm::new(1, get(&format!("attn.{l}.norm.weight")), get(&format!("attn.{l}.norm.bias"))),
                query: linear(&format!("attn.{l}.query"), d),
                key: linear(&format!("attn.{l}.key"), d),
                value: linear(&format!("attn.{l}.value"), d),
                out: linear(&format!("attn.{l}.out"), d),
                heads: cfg.n_heads,
            })
            .collect();
        Ok(Self {
            cfg: *cfg,
            enc_phon: branch("enc_phon", cfg.d_phon_in, cfg.groups),
            enc_pro: branch("enc_pro", cfg.d_pro_in, cfg.groups),
            attn,
            post: branch("post", d, 1),
            head: linear("head", OUT_DIM),
            bundle,
        })
    }

    pub fn config(&self) -> &FusionConfig {
        &self.cfg
    }

    /// The parameters in manifest order, bit-identical to what was loaded.
    pub fn to_bundle(&self) -> WeightBundle {
        self.bundle.clone()
    }

    fn as_mat(x: &FeatureSequence, expected_dim: usize) -> Result<Mat> {
        if x.dim() != expected_dim {
            return Err(Error::DimMismatch { expected: expected_dim, got: x.dim() });
        }
        Ok(Mat { rows: x.len(), cols: x.dim(), data: x.as_slice().to_vec() })
    }

    fn to_sequence(m: Mat, hop: u32) -> Result<FeatureSequence> {
        FeatureSequence::new(m.data, m.cols, hop)
    }

    /// Phonetic encoder output, `T x d_model`.
    pub fn enc_phon_forward(&self, x_phon: &FeatureSequence) -> Result<FeatureSequence> {
        let x = Self::as_mat(x_phon, self.cfg.d_phon_in)?;
        Self::to_sequence(self.enc_phon.forward(&x), x_phon.hop_samples())
    }

    /// Prosody encoder output, `T x d_model`.
    pub fn enc_pro_forward(&self, x_pro: &FeatureSequence) -> Result<FeatureSequence> {
        let x = Self::as_mat(x_pro, self.cfg.d_pro_in)?;
        Self::to_sequence(self.enc_pro.forward(&x), x_pro.hop_samples())
    }

    /// Raw `T x 257` head output before the F0 activation.
    pub fn forward_raw(&self, x_phon: &FeatureSequence, x_pro: &FeatureSequence) -> Result<Mat> {
        if x_phon.len() != x_pro.len() {
            return Err(Error::LengthMismatch(x_phon.len(), x_pro.len()));
        }
        let mut h = self.enc_phon.forward(&Self::as_mat(x_phon, self.cfg.d_phon_in)?);
        h.add_assign(&self.enc_pro.forward(&Self::as_mat(x_pro, self.cfg.d_pro_in)?));
        h.add_assign(&positional_encoding(h.rows, h.cols));
        for block in &self.attn {
            h = block.forward(&h);
        }
        let h = self.post.forward(&h);
        Ok(self.head.forward(&h))
    }

    /// Per-frame synthesiser parameters; hop is taken from `x_phon`.
    pub fn forward(&self, x_phon: &FeatureSequence, x_pro: &FeatureSequence) -> Result<SynthParamsSeq> {
        let raw = self.forward_raw(x_phon, x_pro)?;
        let t = raw.rows;
        let mut f0 = Vec::with_capacity(t);
        let mut psi_h = Vec::with_capacity(t * HARMONIC_FILTER_LEN);
        let mut psi_s = Vec::with_capacity(t * NOISE_FILTER_LEN);
        for r in 0..t {
            let row = raw.row(r);
            let z = row[0];
            if !z.is_finite() {
                return Err(Error::NonFinite("network output"));
            }
            // beyond |z| = 30 the sigmoid rounds to 0 or 1 and F0 would hit a bound
            let z = z.clamp(-F0_LOGIT_LIMIT, F0_LOGIT_LIMIT);
            f0.push(F0_MIN + (F0_MAX - F0_MIN) / (1.0 + libm::exp(-z)));
            psi_h.extend_from_slice(&row[1..1 + HARMONIC_FILTER_LEN]);
            psi_s.extend_from_slice(&row[1 + HARMONIC_FILTER_LEN..]);
        }
        SynthParamsSeq::new(f0, psi_h, HARMONIC_FILTER_LEN, psi_s, NOISE_FILTER_LEN, x_phon.hop_samples())
    }
}
