//! Significance of motif counts against a null model, characteristic
//! profiles and their pairwise correlations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motif::NUM_MOTIFS;

pub const DEFAULT_EPSILON: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceVector {
    pub delta: [f64; NUM_MOTIFS],
    pub real: [f64; NUM_MOTIFS],
    pub null: [f64; NUM_MOTIFS],
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicProfile {
    pub cp: [f64; NUM_MOTIFS],
}

fn check_counts(name: &str, v: &[f64; NUM_MOTIFS]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite() || *x < 0.0) {
        Some(t) => Err(Error::InvalidArgument(format!("{name} count of motif {} is {}", t + 1, v[t]))),
        None => Ok(()),
    }
}

/// `Δ_t = (M[t] − M_rand[t]) / (M[t] + M_rand[t] + ε)`
pub fn significance(real: &[f64; NUM_MOTIFS], null: &[f64; NUM_MOTIFS], epsilon: f64) -> Result<SignificanceVector> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    check_counts("real", real)?;
    check_counts("null", null)?;
    let delta = std::array::from_fn(|t| (real[t] - null[t]) / (real[t] + null[t] + epsilon));
    Ok(SignificanceVector { delta, real: *real, null: *null, epsilon })
}

/// `Δ / ‖Δ‖₂`, or the zero vector when every `Δ_t` is 0.
pub fn characteristic_profile(delta: &[f64; NUM_MOTIFS]) -> CharacteristicProfile {
    let norm = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
    if norm == 0.0 {
        return CharacteristicProfile { cp: [0.0; NUM_MOTIFS] };
    }
    CharacteristicProfile { cp: delta.map(|d| d / norm) }
}

/// `(M[t] − M_rand[t]) / (M[t] + M_rand[t])`, 0 where both are 0.
pub fn relative_count(real: &[f64; NUM_MOTIFS], null: &[f64; NUM_MOTIFS]) -> [f64; NUM_MOTIFS] {
    std::array::from_fn(|t| {
        let sum = real[t] + null[t];
        if sum > 0.0 {
            (real[t] - null[t]) / sum
        } else {
            0.0
        }
    })
}

/// 1-based rank of each entry by descending value, ties by position.
pub fn ranks(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut rank = vec![0; values.len()];
    for (r, t) in order.into_iter().enumerate() {
        rank[t] = r + 1;
    }
    rank
}

/// `RD_t = rank_null(t) − rank_real(t)`: positive when a motif ranks higher
/// in the real hypergraph than in the null model.
pub fn rank_difference(real: &[f64], null: &[f64]) -> Vec<i64> {
    assert_eq!(real.len(), null.len(), "count vectors differ in length");
    ranks(null).into_iter().zip(ranks(real)).map(|(n, r)| n as i64 - r as i64).collect()
}

/// Pearson correlation; 0 when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)
}

/// Correlation matrix of characteristic profiles, with 1 on the diagonal.
pub fn cp_similarity_matrix(profiles: &[CharacteristicProfile]) -> Result<Vec<Vec<f64>>> {
    if profiles.len() < 2 {
        return Err(Error::InvalidArgument("at least two profiles are needed".into()));
    }
    let n = profiles.len();
    let mut m = vec![vec![1.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let c = pearson(&profiles[a].cp, &profiles[b].cp);
            m[a][b] = c;
            m[b][a] = c;
        }
    }
    Ok(m)
}
