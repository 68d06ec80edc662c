//! Core types for finite two-player zero-sum matrix games.
//!
//! The game is an `n × m` matrix `A` with entries in `[0, 1]`. At each round
//! the row player picks `x ∈ Δ_n`, the column player picks `y ∈ Δ_m`; the row
//! player pays `xᵀAy` to the column player, so the row player minimises and
//! the column player maximises.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw sums may deviate from 1 by at most this much before construction fails.
pub const SIMPLEX_SUM_TOL: f64 = 1e-6;

/// Components this far below zero are treated as rounding dust and clamped.
const SIMPLEX_NEG_TOL: f64 = 1e-12;

/// Payoff matrix of a zero-sum game: `n` row strategies, `m` column
/// strategies, every entry in `[0, 1]` and at least one entry positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrix {
    entries: Vec<f64>, // row-major
    n: usize,
    m: usize,
}

impl PayoffMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("no rows".into()));
        }
        let m = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
        }
        Self::from_flat(n, m, rows.iter().flatten().copied().collect())
    }

    pub fn from_flat(n: usize, m: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidMatrix("empty dimension".into()));
        }
        if entries.len() != n * m {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, got {}",
                n * m,
                entries.len()
            )));
        }
        for &e in &entries {
            if !e.is_finite() || !(0.0..=1.0).contains(&e) {
                return Err(Error::InvalidMatrix(format!("entry {e} outside [0, 1]")));
            }
        }
        if entries.iter().all(|&e| e == 0.0) {
            return Err(Error::InvalidMatrix("all entries zero".into()));
        }
        Ok(Self { entries, n, m })
    }

    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn n_cols(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.m + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.m..(i + 1) * self.m]
    }

    /// `xᵀA`: expected payoff of each column against row mix `x`.
    pub fn left_mul(&self, x: &SimplexVector) -> Result<Vec<f64>> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.dim(),
            });
        }
        let mut out = vec![0.0; self.m];
        for (i, &xi) in x.as_slice().iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &a) in self.row(i).iter().enumerate() {
                out[j] += xi * a;
            }
        }
        Ok(out)
    }

    /// `Ay`: expected loss of each row against column mix `y`.
    pub fn right_mul(&self, y: &SimplexVector) -> Result<Vec<f64>> {
        if y.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: y.dim(),
            });
        }
        let mut out = vec![0.0; self.n];
        for i in 0..self.n {
            let mut acc = 0.0;
            for (j, &yj) in y.as_slice().iter().enumerate() {
                acc += self.get(i, j) * yj;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Expected payoff `xᵀAy` flowing from the row player to the column player.
    pub fn payoff(&self, x: &SimplexVector, y: &SimplexVector) -> Result<f64> {
        let xa = self.left_mul(x)?;
        if y.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: y.dim(),
            });
        }
        Ok(dot(&xa, y.as_slice()))
    }
}

/// A mixed strategy: non-negative weights summing to one.
///
/// Construction renormalises, so stored weights sum to 1 up to one rounding
/// step; inputs whose raw sum is off by more than [`SIMPLEX_SUM_TOL`] are
/// rejected rather than silently rescaled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexVector {
    weights: Vec<f64>,
}

impl SimplexVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSimplex("empty vector".into()));
        }
        let mut w = weights;
        let mut sum = 0.0;
        for c in w.iter_mut() {
            if !c.is_finite() {
                return Err(Error::InvalidSimplex(format!("non-finite component {c}")));
            }
            if *c < 0.0 {
                if *c < -SIMPLEX_NEG_TOL {
                    return Err(Error::InvalidSimplex(format!("negative component {c}")));
                }
                *c = 0.0;
            }
            sum += *c;
        }
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::InvalidSimplex(format!("weights sum to {sum}")));
        }
        for c in w.iter_mut() {
            *c /= sum;
        }
        Ok(Self { weights: w })
    }

    /// Renormalises an arbitrary non-negative vector (used by update rules
    /// whose intermediate weights do not sum to one).
    pub fn from_unnormalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite()) || sum <= 0.0 {
            return Err(Error::InvalidSimplex(format!("weights sum to {sum}")));
        }
        Self::new(weights.iter().map(|w| w / sum).collect())
    }

    pub fn uniform(d: usize) -> Self {
        Self {
            weights: vec![1.0 / d as f64; d],
        }
    }

    /// Unit vector `e_i`, the degenerate pure strategy.
    pub fn vertex(d: usize, i: usize) -> Self {
        let mut w = vec![0.0; d];
        w[i] = 1.0;
        Self { weights: w }
    }

    /// `(1 − alpha)·a + alpha·b`, staying on the simplex exactly.
    pub fn convex(a: &Self, b: &Self, alpha: f64) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        let w = a
            .as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(&ai, &bi)| (1.0 - alpha) * ai + alpha * bi)
            .collect();
        Self::new(w)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn min_component(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// A minimax equilibrium `(x*, y*, v)` of the game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub row_strategy: SimplexVector,
    pub col_strategy: SimplexVector,
    /// Game value `v ∈ [0, 1]`.
    pub value: f64,
    /// Every component of `x*` exceeds the solver's fully-mixed tolerance.
    pub row_fully_mixed: bool,
    pub col_fully_mixed: bool,
}

/// `f(x) = max_{y ∈ Δ_m} xᵀAy`, attained at a pure column.
pub fn f_value(x: &SimplexVector, a: &PayoffMatrix) -> Result<f64> {
    let xa = a.left_mul(x)?;
    Ok(xa.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Smallest column index maximising `(xᵀA)_j`.
pub fn best_response_column(x: &SimplexVector, a: &PayoffMatrix) -> Result<usize> {
    let xa = a.left_mul(x)?;
    Ok(argmax(&xa))
}

/// Index of the first maximal component (deterministic lowest-index tie-break).
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = j;
        }
    }
    best
}

/// Relative entropy `RE(p‖q) = Σ p_i ln(p_i / q_i)` in nats.
///
/// Convention `0·ln(0/q) = 0`; returns `f64::INFINITY` when some `p_i > 0`
/// has `q_i = 0`.
pub fn relative_entropy(p: &SimplexVector, q: &SimplexVector) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.as_slice().iter().zip(q.as_slice()) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += pi * (pi / qi).ln();
    }
    // Gibbs: exact zero at p == q, tiny negatives are rounding.
    Ok(acc.max(0.0))
}

/// Squared Euclidean distance `Σ (p_i − q_i)²`; at most 2 on the simplex.
pub fn euclid_dist_sq(p: &SimplexVector, q: &SimplexVector) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    Ok(p.as_slice()
        .iter()
        .zip(q.as_slice())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(w: &[f64]) -> SimplexVector {
        SimplexVector::new(w.to_vec()).unwrap()
    }

    fn identity2() -> PayoffMatrix {
        PayoffMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn derived2x2() -> PayoffMatrix {
        PayoffMatrix::from_rows(&[vec![0.8, 0.2], vec![0.3, 0.6]]).unwrap()
    }

    #[test]
    fn f_value_examples() {
        assert_eq!(f_value(&sv(&[1.0, 0.0]), &identity2()).unwrap(), 1.0);
        assert_eq!(f_value(&sv(&[0.5, 0.5]), &identity2()).unwrap(), 0.5);
        // Both columns pay 7/15 at the equilibrium mix (1/3, 2/3).
        let f = f_value(&sv(&[1.0 / 3.0, 2.0 / 3.0]), &derived2x2()).unwrap();
        assert!((f - 7.0 / 15.0).abs() < 1e-12, "f = {f}");
    }

    #[test]
    fn f_value_dimension_mismatch() {
        assert!(f_value(&sv(&[0.5, 0.25, 0.25]), &identity2()).is_err());
    }

    #[test]
    fn best_response_examples() {
        assert_eq!(best_response_column(&sv(&[1.0, 0.0]), &identity2()).unwrap(), 0);
        // Payoffs (0.55, 0.40) at the even mix.
        assert_eq!(best_response_column(&sv(&[0.5, 0.5]), &derived2x2()).unwrap(), 0);
        let flat = PayoffMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(best_response_column(&sv(&[0.5, 0.5]), &flat).unwrap(), 0);
    }

    #[test]
    fn relative_entropy_examples() {
        let p = sv(&[0.3, 0.7]);
        assert_eq!(relative_entropy(&p, &p).unwrap(), 0.0);
        let re = relative_entropy(&sv(&[1.0, 0.0]), &sv(&[0.5, 0.5])).unwrap();
        assert!((re - std::f64::consts::LN_2).abs() < 1e-15);
        let re = relative_entropy(&sv(&[0.5, 0.5]), &sv(&[0.25, 0.75])).unwrap();
        let expect = 0.5 * 2.0_f64.ln() + 0.5 * (2.0 / 3.0_f64).ln();
        assert!((re - expect).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_infinite_when_support_escapes() {
        let re = relative_entropy(&sv(&[0.5, 0.5]), &sv(&[1.0, 0.0])).unwrap();
        assert!(re.is_infinite());
    }

    #[test]
    fn euclid_examples() {
        let p = sv(&[0.5, 0.5]);
        assert_eq!(euclid_dist_sq(&p, &p).unwrap(), 0.0);
        assert_eq!(
            euclid_dist_sq(&sv(&[1.0, 0.0]), &sv(&[0.0, 1.0])).unwrap(),
            2.0
        );
        let d = euclid_dist_sq(&sv(&[0.5, 0.5]), &sv(&[0.25, 0.75])).unwrap();
        assert!((d - 0.125).abs() < 1e-15);
    }

    #[test]
    fn simplex_construction_rules() {
        assert!(SimplexVector::new(vec![0.5, 0.6]).is_err()); // sum 1.1
        assert!(SimplexVector::new(vec![-0.1, 1.1]).is_err()); // negative
        assert!(SimplexVector::new(vec![]).is_err());
        // within tolerance: renormalised to exact 1
        let v = SimplexVector::new(vec![0.5, 0.5000001]).unwrap();
        let sum: f64 = v.as_slice().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
        // rounding dust clamps to zero
        let v = SimplexVector::new(vec![1.0, -1e-15]).unwrap();
        assert_eq!(v.get(1), 0.0);
    }

    #[test]
    fn matrix_construction_rules() {
        assert!(PayoffMatrix::from_rows(&[vec![0.0, 0.0]]).is_err()); // all zero
        assert!(PayoffMatrix::from_rows(&[vec![1.2]]).is_err()); // out of range
        assert!(PayoffMatrix::from_rows(&[vec![0.5], vec![0.5, 0.5]]).is_err()); // ragged
        assert!(PayoffMatrix::from_rows(&[]).is_err());
    }

    #[test]
    fn vertex_and_uniform() {
        let e1 = SimplexVector::vertex(3, 1);
        assert_eq!(e1.as_slice(), &[0.0, 1.0, 0.0]);
        let u = SimplexVector::uniform(4);
        assert_eq!(u.get(0), 0.25);
    }
}
