use alloc::vec;
use alloc::vec::Vec;

/// Row-major `rows x cols` activations, one row per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn add_assign(&mut self, other: &Mat) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn relu(mut self) -> Self {
        for v in &mut self.data {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        self
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn widen(x: &[f32]) -> Vec<f64> {
    x.iter().map(|&v| v as f64).collect()
}

/// Dense layer with `[out, in]` weights.
#[derive(Debug, Clone)]
pub struct Linear {
    out_dim: usize,
    in_dim: usize,
    weight: Vec<f64>,
    bias: Vec<f64>,
}

impl Linear {
    pub fn new(out_dim: usize, in_dim: usize, weight: &[f32], bias: &[f32]) -> Self {
        Self { out_dim, in_dim, weight: widen(weight), bias: widen(bias) }
    }

    pub fn forward(&self, x: &Mat) -> Mat {
        debug_assert_eq!(x.cols, self.in_dim);
        let mut y = Mat::zeros(x.rows, self.out_dim);
        for t in 0..x.rows {
            let xr = x.row(t);
            for (o, out) in y.row_mut(t).iter_mut().enumerate() {
                *out = self.bias[o] + dot(&self.weight[o * self.in_dim..(o + 1) * self.in_dim], xr);
            }
        }
        y
    }
}

/// 1-D convolution over frames with `[out, in, kernel]` weights and zero
/// "same" padding.
#[derive(Debug, Clone)]
pub struct Conv1d {
    out_dim: usize,
    in_dim: usize,
    kernel: usize,
    /// Re-laid out as `[tap][out][in]` for contiguous dot products.
    taps: Vec<f64>,
    bias: Vec<f64>,
}

impl Conv1d {
    pub fn new(out_dim: usize, in_dim: usize, kernel: usize, weight: &[f32], bias: &[f32]) -> Self {
        let mut taps = vec![0.0; kernel * out_dim * in_dim];
        for o in 0..out_dim {
            for i in 0..in_dim {
                for k in 0..kernel {
                    taps[(k * out_dim + o) * in_dim + i] = weight[(o * in_dim + i) * kernel + k] as f64;
                }
            }
        }
        Self { out_dim, in_dim, kernel, taps, bias: widen(bias) }
    }

    pub fn forward(&self, x: &Mat) -> Mat {
        debug_assert_eq!(x.cols, self.in_dim);
        let pad = (self.kernel / 2) as isize;
        let mut y = Mat::zeros(x.rows, self.out_dim);
        for t in 0..x.rows {
            let out = y.row_mut(t);
            out.copy_from_slice(&self.bias);
            for k in 0..self.kernel {
                let src = t as isize + k as isize - pad;
                if src < 0 || src >= x.rows as isize {
                    continue;
                }
                let xr = x.row(src as usize);
                let block = &self.taps[k * self.out_dim * self.in_dim..(k + 1) * self.out_dim * self.in_dim];
                for (o, v) in out.iter_mut().enumerate() {
                    *v += dot(&block[o * self.in_dim..(o + 1) * self.in_dim], xr);
                }
            }
        }
        y
    }
}

pub const NORM_EPS: f64 = 1e-6;

/// Per-frame group normalisation with a learned affine; one group is
/// layer normalisation.
#[derive(Debug, Clone)]
pub struct GroupNorm {
    groups: usize,
    weight: Vec<f64>,
    bias: Vec<f64>,
}

impl GroupNorm {
    pub fn new(groups: usize, weight: &[f32], bias: &[f32]) -> Self {
        Self { groups, weight: widen(weight), bias: widen(bias) }
    }

    pub fn forward(&self, x: &Mat) -> Mat {
        let mut y = x.clone();
        let size = x.cols / self.groups;
        for t in 0..x.rows {
            let row = y.row_mut(t);
            for (g, chunk) in row.chunks_exact_mut(size).enumerate() {
                let mean = chunk.iter().sum::<f64>() / size as f64;
                let var = chunk.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / size as f64;
                let inv = 1.0 / libm::sqrt(var + NORM_EPS);
                for (j, v) in chunk.iter_mut().enumerate() {
                    let c = g * size + j;
                    *v = (*v - mean) * inv * self.weight[c] + self.bias[c];
                }
            }
        }
        y
    }
}

/// Pre-norm multi-head self-attention block with a residual connection:
/// `x + W_o * attn(LN(x))`.
#[derive(Debug, Clone)]
pub struct AttentionBlock {
    pub norm: GroupNorm,
    pub query: Linear,
    pub key: Linear,
    pub value: Linear,
    pub out: Linear,
    pub heads: usize,
}

impl AttentionBlock {
    pub fn forward(&self, x: &Mat) -> Mat {
        let h = self.norm.forward(x);
        let (q, k, v) = (self.query.forward(&h), self.key.forward(&h), self.value.forward(&h));
        let t = x.rows;
        let d = x.cols;
        let dh = d / self.heads;
        let scale = 1.0 / libm::sqrt(dh as f64);
        let mut ctx = Mat::zeros(t, d);
        let mut scores = vec![0.0; t];
        for head in 0..self.heads {
            let cols = head * dh..(head + 1) * dh;
            for i in 0..t {
                let qi = &q.row(i)[cols.clone()];
                for (j, s) in scores.iter_mut().enumerate() {
                    *s = dot(qi, &k.row(j)[cols.clone()]) * scale;
                }
                let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mut total = 0.0;
                for s in scores.iter_mut() {
                    *s = libm::exp(*s - max);
                    total += *s;
                }
                let out = &mut ctx.row_mut(i)[cols.clone()];
                for (j, &s) in scores.iter().enumerate() {
                    let w = s / total;
                    for (o, &vv) in out.iter_mut().zip(&v.row(j)[cols.clone()]) {
                        *o += w * vv;
                    }
                }
            }
        }
        let mut y = self.out.forward(&ctx);
        y.add_assign(x);
        y
    }
}

/// Sinusoidal position table: `sin(t / 10000^(2i/d))` on even channels,
/// `cos` on odd ones.
pub fn positional_encoding(rows: usize, cols: usize) -> Mat {
    let mut pe = Mat::zeros(rows, cols);
    for t in 0..rows {
        let row = pe.row_mut(t);
        for (c, v) in row.iter_mut().enumerate() {
            let i = (c / 2) as f64;
            let angle = t as f64 / libm::pow(10000.0, 2.0 * i / cols as f64);
            *v = if c % 2 == 0 { libm::sin(angle) } else { libm::cos(angle) };
        }
    }
    pe
}
