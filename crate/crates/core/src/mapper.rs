//! Query-by-example phone mapping.
//!
//! Each source frame is replaced by a softmax-weighted average of its `M`
//! nearest target-speaker vectors under cosine distance, with weights
//! `softmax(1 / d_i)`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sequence::{FeatureSequence, PhonePool};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapperConfig {
    pub m: usize,
    /// Lower clamp on cosine distance before inversion, so exact matches
    /// stay finite.
    pub distance_epsilon: f64,
}

impl Default for MapperConfig {
    fn default() -> Self {
        Self { m: 4, distance_epsilon: 1e-8 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// `1 - a.b / (|a| |b|)`, in `[0, 2]`.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimMismatch { expected: a.len(), got: b.len() });
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((1.0 - dot(a, b) / (na * nb)).clamp(0.0, 2.0))
}

/// Candidates picked for one query, nearest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub distances: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Selects the `M` nearest pool vectors (ties to the lower index) and their
/// softmax weights.
pub fn select_candidates(q: &[f64], pool: &PhonePool, cfg: &MapperConfig) -> Result<Selection> {
    if q.len() != pool.dim() {
        return Err(Error::DimMismatch { expected: pool.dim(), got: q.len() });
    }
    if cfg.m == 0 || cfg.m > pool.len() {
        return Err(Error::PoolTooSmall { pool: pool.len(), m: cfg.m });
    }
    let qn = norm(q);
    if qn == 0.0 {
        return Err(Error::ZeroVector);
    }

    // Bounded insertion into a sorted top-M list; pool order gives the tie-break.
    let mut best: Vec<(f64, usize)> = Vec::with_capacity(cfg.m + 1);
    for (i, m) in pool.vectors().enumerate() {
        let d = (1.0 - dot(q, m) / (qn * norm(m))).clamp(0.0, 2.0);
        if best.len() == cfg.m && d >= best[cfg.m - 1].0 {
            continue;
        }
        let pos = best.partition_point(|&(bd, _)| bd <= d);
        best.insert(pos, (d, i));
        best.truncate(cfg.m);
    }

    let inv: Vec<f64> = best.iter().map(|&(d, _)| 1.0 / d.max(cfg.distance_epsilon)).collect();
    let max = inv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = inv.iter().map(|&v| libm::exp(v - max)).collect();
    let total: f64 = exps.iter().sum();
    Ok(Selection {
        indices: best.iter().map(|&(_, i)| i).collect(),
        distances: best.iter().map(|&(d, _)| d).collect(),
        weights: exps.iter().map(|e| e / total).collect(),
    })
}

/// `q_hat = sum(w_i m_i) / sum(w_i)` over the selected candidates.
pub fn map_query(q: &[f64], pool: &PhonePool, cfg: &MapperConfig) -> Result<Vec<f64>> {
    let sel = select_candidates(q, pool, cfg)?;
    let wsum: f64 = sel.weights.iter().sum();
    let mut out = alloc::vec![0.0; q.len()];
    for (&i, &w) in sel.indices.iter().zip(&sel.weights) {
        for (o, &v) in out.iter_mut().zip(pool.vector(i)) {
            *o += w * v;
        }
    }
    for o in out.iter_mut() {
        *o /= wsum;
    }
    Ok(out)
}

/// Maps every frame of `x_phon`; frame count and hop are preserved.
pub fn map_sequence(x_phon: &FeatureSequence, pool: &PhonePool, cfg: &MapperConfig) -> Result<FeatureSequence> {
    if x_phon.dim() != pool.dim() {
        return Err(Error::DimMismatch { expected: pool.dim(), got: x_phon.dim() });
    }
    let mut data = Vec::with_capacity(x_phon.as_slice().len());
    for frame in x_phon.frames() {
        data.extend(map_query(frame, pool, cfg)?);
    }
    FeatureSequence::new(data, x_phon.dim(), x_phon.hop_samples())
}

/// Concatenates the frames of several utterances into a pool, dropping
/// all-zero frames. Returns the pool and the number of dropped frames.
pub fn build_pool(utterances: &[FeatureSequence], id: impl Into<String>) -> Result<(PhonePool, usize)> {
    let first = utterances.first().ok_or(Error::EmptyPool)?;
    let dim = first.dim();
    let mut data = Vec::new();
    let mut dropped = 0;
    for u in utterances {
        if u.dim() != dim {
            return Err(Error::DimMismatch { expected: dim, got: u.dim() });
        }
        for f in u.frames() {
            if f.iter().all(|&v| v == 0.0) {
                dropped += 1;
            } else {
                data.extend_from_slice(f);
            }
        }
    }
    if data.is_empty() {
        return Err(Error::EmptyPool);
    }
    Ok((PhonePool::new(data, dim, id)?, dropped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn distance_cases() {
        assert_eq!(cosine_distance(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(cosine_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(cosine_distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(cosine_distance(&[0.0, 0.0], &[1.0, 0.0]).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn m1_returns_nearest_exactly() {
        let pool = PhonePool::new(vec![1.0, 0.1, 0.3, 0.9, -1.0, 0.2], 2, "t").unwrap();
        let cfg = MapperConfig { m: 1, ..Default::default() };
        assert_eq!(map_query(&[0.2, 1.0], &pool, &cfg).unwrap(), vec![0.3, 0.9]);
    }

    #[test]
    fn equidistant_pair_averages() {
        let pool = PhonePool::new(vec![1.0, 1.0, 1.0, -1.0, -5.0, 0.0], 2, "t").unwrap();
        let cfg = MapperConfig { m: 2, ..Default::default() };
        let q = map_query(&[1.0, 0.0], &pool, &cfg).unwrap();
        assert!((q[0] - 1.0).abs() < 1e-15 && q[1].abs() < 1e-15);
    }

    #[test]
    fn ties_break_to_lower_index() {
        let pool = PhonePool::new(vec![2.0, 0.0, 1.0, 0.0, 3.0, 0.0], 2, "t").unwrap();
        let cfg = MapperConfig { m: 2, ..Default::default() };
        let sel = select_candidates(&[1.0, 0.0], &pool, &cfg).unwrap();
        assert_eq!(sel.indices, vec![0, 1]);
    }

    #[test]
    fn errors() {
        let pool = PhonePool::new(vec![1.0, 0.0], 2, "t").unwrap();
        let cfg = MapperConfig::default();
        assert_eq!(map_query(&[1.0, 0.0], &pool, &cfg).unwrap_err(), Error::PoolTooSmall { pool: 1, m: 4 });
        let cfg = MapperConfig { m: 1, ..cfg };
        assert!(matches!(map_query(&[1.0], &pool, &cfg), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn exact_match_dominates() {
        let pool = PhonePool::new(vec![1.0, 0.0, 0.9, 0.1, 0.8, 0.3], 2, "t").unwrap();
        let cfg = MapperConfig { m: 3, ..Default::default() };
        assert_eq!(map_query(&[1.0, 0.0], &pool, &cfg).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn build_pool_contracts() {
        let a = FeatureSequence::new(vec![1.0; 20], 2, 160).unwrap();
        let b = FeatureSequence::new(vec![2.0; 30], 2, 160).unwrap();
        let (pool, dropped) = build_pool(&[a.clone(), b], "spk").unwrap();
        assert_eq!((pool.len(), dropped), (25, 0));
        assert_eq!(pool.source_id(), "spk");

        let z = FeatureSequence::new(vec![1.0, 1.0, 0.0, 0.0, 3.0, 1.0], 2, 160).unwrap();
        let (pool, dropped) = build_pool(&[z], "spk").unwrap();
        assert_eq!((pool.len(), dropped), (2, 1));

        let one = FeatureSequence::new(vec![0.5, 0.5], 2, 160).unwrap();
        let (pool, _) = build_pool(&[one], "s").unwrap();
        let cfg = MapperConfig { m: 1, ..Default::default() };
        assert_eq!(map_query(&[1.0, 2.0], &pool, &cfg).unwrap(), vec![0.5, 0.5]);

        let c = FeatureSequence::new(vec![1.0; 3], 3, 160).unwrap();
        assert!(matches!(build_pool(&[a, c], "x"), Err(Error::DimMismatch { .. })));
        assert_eq!(build_pool(&[], "x").unwrap_err(), Error::EmptyPool);
        let zeros = FeatureSequence::new(vec![0.0; 4], 2, 160).unwrap();
        assert_eq!(build_pool(&[zeros], "x").unwrap_err(), Error::EmptyPool);
    }

    #[test]
    fn empty_sequence_maps_to_empty() {
        let pool = PhonePool::new(vec![1.0, 0.0], 2, "t").unwrap();
        let cfg = MapperConfig { m: 1, ..Default::default() };
        let out = map_sequence(&FeatureSequence::empty(2, 320).unwrap(), &pool, &cfg).unwrap();
        assert!(out.is_empty());
        assert_eq!((out.dim(), out.hop_samples()), (2, 320));
    }
}
