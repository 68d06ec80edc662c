//! The row player's no-regret update rules behind one interface: construct,
//! feed the observed loss vector `Ay_t`, read the next strategy.
//!
//! Multiplicative rules keep log-domain weights (renormalised every step) so
//! long horizons cannot underflow. The FTRL state keeps the cumulative loss
//! centred around its mean, which both update rules are invariant to and
//! which avoids cancellation once the raw sums grow with `t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::SimplexVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowAlgorithm {
    Mwu,
    FtrlEuclid,
    Lmwu,
    Omwu,
    AdaHedge,
}

/// Step-size sequence `μ_t`, 1-indexed in the round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StepSizeSchedule {
    Constant { mu: f64 },
    /// `μ_t = sqrt(8 ln(n) / t)` for an `n`-action learner.
    InverseSqrt,
    Custom { values: Vec<f64> },
}

impl StepSizeSchedule {
    pub fn mu(&self, t: u64, dim: usize) -> Result<f64> {
        match self {
            Self::Constant { mu } => Ok(*mu),
            Self::InverseSqrt => Ok((8.0 * (dim as f64).ln() / t as f64).sqrt()),
            Self::Custom { values } => values
                .get((t - 1) as usize)
                .copied()
                .ok_or(Error::ScheduleExhausted(t)),
        }
    }

    pub fn is_non_increasing(&self) -> bool {
        match self {
            Self::Constant { .. } | Self::InverseSqrt => true,
            Self::Custom { values } => values.windows(2).all(|w| w[1] <= w[0]),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant { .. })
    }
}

/// Euclidean projection onto the probability simplex by sort-and-threshold.
///
/// Idempotent on simplex points; the output satisfies the KKT conditions of
/// `min ‖x − z‖²` over the simplex.
pub fn project_simplex(z: &[f64]) -> SimplexVector {
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    let mut tau = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        acc += u;
        let candidate = (acc - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            tau = candidate;
        } else {
            break;
        }
    }
    let w: Vec<f64> = z.iter().map(|&zi| (zi - tau).max(0.0)).collect();
    SimplexVector::from_unnormalized(w).expect("projection output is a valid simplex point")
}

/// Immutable learner state; `update` consumes a loss vector and returns the
/// advanced state, so states can be copied, compared, and shared freely.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowLearner {
    algo: RowAlgorithm,
    schedule: StepSizeSchedule,
    dim: usize,
    round: u64,
    /// Normalised log-probabilities for the multiplicative rules.
    log_weights: Vec<f64>,
    /// FTRL: centred `θ_t = −Σ Ay_i + c·1`. AdaHedge: raw cumulative loss.
    cumulative: Vec<f64>,
    prev_loss: Option<Vec<f64>>,
    /// AdaHedge mixability-gap accumulator Δ.
    mix_gap: f64,
    strategy: SimplexVector,
    /// FTRL only: current strategy came from the interior closed form.
    interior: bool,
    /// LMWU steps taken with `μ_t > 1/3` (outside the analysed range).
    schedule_warnings: u64,
}

impl RowLearner {
    /// Every learner starts uniform.
    pub fn new(algo: RowAlgorithm, dim: usize, schedule: StepSizeSchedule) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("learner dimension must be positive".into()));
        }
        Ok(Self {
            algo,
            schedule,
            dim,
            round: 0,
            log_weights: vec![-(dim as f64).ln(); dim],
            cumulative: vec![0.0; dim],
            prev_loss: None,
            mix_gap: 0.0,
            strategy: SimplexVector::uniform(dim),
            interior: true,
            schedule_warnings: 0,
        })
    }

    pub fn algorithm(&self) -> RowAlgorithm {
        self.algo
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Completed updates; the strategy on offer is `x_{round+1}`.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn strategy(&self) -> &SimplexVector {
        &self.strategy
    }

    /// FTRL: whether the current strategy equals the interior closed form
    /// (always true for the multiplicative rules, which stay interior).
    pub fn interior(&self) -> bool {
        self.interior
    }

    pub fn schedule_warnings(&self) -> u64 {
        self.schedule_warnings
    }

    pub fn mu_at(&self, t: u64) -> Result<f64> {
        self.schedule.mu(t, self.dim)
    }

    /// Advances one round on the observed loss vector.
    pub fn update(&self, loss: &[f64]) -> Result<Self> {
        if loss.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: loss.len(),
            });
        }
        let t = self.round + 1;
        let mut next = self.clone();
        next.round = t;
        match self.algo {
            RowAlgorithm::Mwu => {
                let mu = self.schedule.mu(t, self.dim)?;
                next.log_weights = normalize_log(
                    self.log_weights
                        .iter()
                        .zip(loss)
                        .map(|(&lw, &l)| lw - mu * l)
                        .collect(),
                );
                next.strategy = strategy_from_log(&next.log_weights);
            }
            RowAlgorithm::Omwu => {
                let mu = self.schedule.mu(t, self.dim)?;
                let prev = self.prev_loss.as_deref().unwrap_or(loss);
                next.log_weights = normalize_log(
                    self.log_weights
                        .iter()
                        .zip(loss.iter().zip(prev))
                        .map(|(&lw, (&l, &pl))| lw - 2.0 * mu * l + mu * pl)
                        .collect(),
                );
                next.strategy = strategy_from_log(&next.log_weights);
                next.prev_loss = Some(loss.to_vec());
            }
            RowAlgorithm::Lmwu => {
                let mu = self.schedule.mu(t, self.dim)?;
                let max_loss = loss.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if mu * max_loss >= 1.0 {
                    return Err(Error::StepSizeTooLarge {
                        mu,
                        product: mu * max_loss,
                    });
                }
                if mu > 1.0 / 3.0 {
                    next.schedule_warnings += 1;
                }
                next.log_weights = normalize_log(
                    self.log_weights
                        .iter()
                        .zip(loss)
                        .map(|(&lw, &l)| lw + (1.0 - mu * l).ln())
                        .collect(),
                );
                next.strategy = strategy_from_log(&next.log_weights);
            }
            RowAlgorithm::FtrlEuclid => {
                let mu = self.schedule.mu(t, self.dim)?;
                for (c, &l) in next.cumulative.iter_mut().zip(loss) {
                    *c -= l;
                }
                let mean = next.cumulative.iter().sum::<f64>() / self.dim as f64;
                for c in next.cumulative.iter_mut() {
                    *c -= mean;
                }
                let inv_d = 1.0 / self.dim as f64;
                let closed: Vec<f64> =
                    next.cumulative.iter().map(|&th| mu * th + inv_d).collect();
                if closed.iter().all(|&c| c > 0.0) {
                    next.strategy = SimplexVector::from_unnormalized(closed)?;
                    next.interior = true;
                } else {
                    let target: Vec<f64> = next.cumulative.iter().map(|&th| mu * th).collect();
                    next.strategy = project_simplex(&target);
                    next.interior = false;
                }
            }
            RowAlgorithm::AdaHedge => {
                let weights = self.strategy.as_slice();
                let hedge_loss: f64 = weights.iter().zip(loss).map(|(&w, &l)| w * l).sum();
                let mix_loss = if self.mix_gap <= 0.0 {
                    // infinite learning rate: mix loss degenerates to the
                    // best loss among currently-played leaders
                    weights
                        .iter()
                        .zip(loss)
                        .filter(|(&w, _)| w > 0.0)
                        .map(|(_, &l)| l)
                        .fold(f64::INFINITY, f64::min)
                } else {
                    let eta = (self.dim as f64).ln() / self.mix_gap;
                    let lmin = loss.iter().copied().fold(f64::INFINITY, f64::min);
                    let acc: f64 = weights
                        .iter()
                        .zip(loss)
                        .map(|(&w, &l)| w * (-eta * (l - lmin)).exp())
                        .sum();
                    lmin - acc.ln() / eta
                };
                // Jensen gives hedge >= mix; clamp rounding dust
                next.mix_gap = self.mix_gap + (hedge_loss - mix_loss).max(0.0);
                for (c, &l) in next.cumulative.iter_mut().zip(loss) {
                    *c += l;
                }
                next.strategy = adahedge_weights(&next.cumulative, next.mix_gap, self.dim);
            }
        }
        Ok(next)
    }
}

/// AdaHedge play for cumulative losses `L` and gap `Δ`: follow-the-leader
/// while `Δ = 0`, otherwise Hedge at `η = ln(d)/Δ`.
fn adahedge_weights(cumulative: &[f64], mix_gap: f64, dim: usize) -> SimplexVector {
    let lmin = cumulative.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = if mix_gap <= 0.0 {
        cumulative
            .iter()
            .map(|&l| if l == lmin { 1.0 } else { 0.0 })
            .collect()
    } else {
        let eta = (dim as f64).ln() / mix_gap;
        cumulative.iter().map(|&l| (-eta * (l - lmin)).exp()).collect()
    };
    SimplexVector::from_unnormalized(w).expect("hedge weights are positive")
}

/// Shifts log weights so they are exact log-probabilities.
fn normalize_log(mut lw: Vec<f64>) -> Vec<f64> {
    let max = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + lw.iter().map(|&v| (v - max).exp()).sum::<f64>().ln();
    for v in lw.iter_mut() {
        *v -= lse;
    }
    lw
}

fn strategy_from_log(lw: &[f64]) -> SimplexVector {
    SimplexVector::from_unnormalized(lw.iter().map(|&v| v.exp()).collect())
        .expect("normalised log weights exponentiate to a distribution")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(mu: f64) -> StepSizeSchedule {
        StepSizeSchedule::Constant { mu }
    }

    fn learner(algo: RowAlgorithm, dim: usize, mu: f64) -> RowLearner {
        RowLearner::new(algo, dim, constant(mu)).unwrap()
    }

    #[test]
    fn mwu_examples() {
        // zero step leaves the strategy alone
        let l = learner(RowAlgorithm::Mwu, 2, 0.0);
        let l = l.update(&[1.0, 0.3]).unwrap();
        assert_eq!(l.strategy().as_slice(), &[0.5, 0.5]);

        // mu = ln 2, loss (1,0): weights (1/2·1/2, 1/2) -> (1/3, 2/3)
        let l = learner(RowAlgorithm::Mwu, 2, std::f64::consts::LN_2);
        let l = l.update(&[1.0, 0.0]).unwrap();
        assert!((l.strategy().get(0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((l.strategy().get(1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mwu_vertex_absorbing() {
        let mut l = learner(RowAlgorithm::Mwu, 2, 0.7);
        // drive close to a vertex, then verify the direction is stable
        for _ in 0..200 {
            l = l.update(&[1.0, 0.0]).unwrap();
        }
        assert!(l.strategy().get(1) > 1.0 - 1e-12);
        let l2 = l.update(&[0.0, 0.0]).unwrap();
        assert!(l2.strategy().get(1) > 1.0 - 1e-12);
    }

    #[test]
    fn lmwu_examples() {
        let l = learner(RowAlgorithm::Lmwu, 2, 0.0);
        let l = l.update(&[0.4, 0.9]).unwrap();
        assert_eq!(l.strategy().as_slice(), &[0.5, 0.5]);

        // mu=0.2, loss (1,0): weights (0.4, 0.5) -> (4/9, 5/9)
        let l = learner(RowAlgorithm::Lmwu, 2, 0.2);
        let l = l.update(&[1.0, 0.0]).unwrap();
        assert!((l.strategy().get(0) - 4.0 / 9.0).abs() < 1e-15);

        // mu·max loss >= 1 is a rejected update
        let l = learner(RowAlgorithm::Lmwu, 2, 1.0);
        assert!(matches!(
            l.update(&[1.0, 0.0]),
            Err(Error::StepSizeTooLarge { .. })
        ));
    }

    #[test]
    fn lmwu_warns_above_third() {
        let l = learner(RowAlgorithm::Lmwu, 2, 0.4);
        let l = l.update(&[0.5, 0.5]).unwrap();
        assert_eq!(l.schedule_warnings(), 1);
    }

    #[test]
    fn omwu_examples() {
        // loss (1,0) with prev (0,0), mu=ln2: weights (1/2·2^{-2}, 1/2) -> (1/5, 4/5)
        let mut l = learner(RowAlgorithm::Omwu, 2, std::f64::consts::LN_2);
        l.prev_loss = Some(vec![0.0, 0.0]);
        let l = l.update(&[1.0, 0.0]).unwrap();
        assert!((l.strategy().get(0) - 0.2).abs() < 1e-15);

        // mu = 0 leaves the strategy unchanged
        let l = learner(RowAlgorithm::Omwu, 3, 0.0);
        let l = l.update(&[0.1, 0.9, 0.4]).unwrap();
        assert_eq!(l.strategy().as_slice(), SimplexVector::uniform(3).as_slice());
    }

    #[test]
    fn omwu_equals_mwu_when_losses_repeat() {
        let loss = [0.3, 0.9, 0.1];
        let mut o = learner(RowAlgorithm::Omwu, 3, 0.6);
        let mut m = learner(RowAlgorithm::Mwu, 3, 0.6);
        for _ in 0..50 {
            o = o.update(&loss).unwrap();
            m = m.update(&loss).unwrap();
            for i in 0..3 {
                assert!((o.strategy().get(i) - m.strategy().get(i)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn ftrl_examples() {
        // untouched learner plays uniform
        let l = learner(RowAlgorithm::FtrlEuclid, 4, 1.0);
        assert_eq!(l.strategy().as_slice(), SimplexVector::uniform(4).as_slice());
        assert!(l.interior());

        // n=2, mu=1, cumulative loss (0.6, 0.8): interior closed form (0.6, 0.4)
        let l = learner(RowAlgorithm::FtrlEuclid, 2, 1.0);
        let l = l.update(&[0.6, 0.8]).unwrap();
        assert!((l.strategy().get(0) - 0.6).abs() < 1e-12);
        assert!(l.interior());

        // n=2, mu=1, cumulative loss (0, 2): projection clips to the vertex
        let l = learner(RowAlgorithm::FtrlEuclid, 2, 1.0);
        let l = l.update(&[0.0, 2.0 / 3.0]).unwrap().update(&[0.0, 2.0 / 3.0]).unwrap().update(&[0.0, 2.0 / 3.0]).unwrap();
        assert!((l.strategy().get(0) - 1.0).abs() < 1e-12);
        assert!(!l.interior());
    }

    #[test]
    fn projection_examples() {
        let p = project_simplex(&[0.6, 0.8]);
        assert!((p.get(0) - 0.4).abs() < 1e-15 && (p.get(1) - 0.6).abs() < 1e-15);

        let p = project_simplex(&[2.0, 0.5]);
        assert_eq!(p.as_slice(), &[1.0, 0.0]);

        let p = project_simplex(&[0.25, 0.75]);
        assert!((p.get(0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn projection_kkt_property() {
        // for x_i > 0 the shift z_i - x_i is a constant tau; for x_i = 0 it is <= tau
        let z = [1.4, -0.3, 0.9, 0.05, -2.0];
        let x = project_simplex(&z);
        let tau: Vec<f64> = z
            .iter()
            .zip(x.as_slice())
            .filter(|(_, &xi)| xi > 0.0)
            .map(|(&zi, &xi)| zi - xi)
            .collect();
        for w in tau.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-12);
        }
        let t0 = tau[0];
        for (&zi, &xi) in z.iter().zip(x.as_slice()) {
            if xi == 0.0 {
                assert!(zi <= t0 + 1e-10);
            }
        }
    }

    #[test]
    fn adahedge_examples() {
        // first play is uniform
        let l = learner(RowAlgorithm::AdaHedge, 3, 0.0);
        let l2 = RowLearner::new(RowAlgorithm::AdaHedge, 3, StepSizeSchedule::InverseSqrt).unwrap();
        assert_eq!(l.strategy().as_slice(), l2.strategy().as_slice());

        // constant losses keep it uniform
        let mut l = learner(RowAlgorithm::AdaHedge, 2, 0.0);
        for _ in 0..50 {
            l = l.update(&[0.7, 0.7]).unwrap();
        }
        assert_eq!(l.strategy().as_slice(), &[0.5, 0.5]);

        // losses (1,0) pile all mass on the second action
        let mut l = learner(RowAlgorithm::AdaHedge, 2, 0.0);
        for _ in 0..100 {
            l = l.update(&[1.0, 0.0]).unwrap();
        }
        assert!(l.strategy().get(1) > 0.99, "mass {}", l.strategy().get(1));
    }

    #[test]
    fn inverse_sqrt_schedule_values() {
        let s = StepSizeSchedule::InverseSqrt;
        let mu1 = s.mu(1, 4).unwrap();
        assert!((mu1 - (8.0 * 4.0_f64.ln()).sqrt()).abs() < 1e-15);
        assert!(s.is_non_increasing());
        let c = StepSizeSchedule::Custom {
            values: vec![0.5, 0.6],
        };
        assert!(!c.is_non_increasing());
        assert!(matches!(c.mu(3, 2), Err(Error::ScheduleExhausted(3))));
    }

    #[test]
    fn every_update_emits_valid_simplex() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for algo in [
            RowAlgorithm::Mwu,
            RowAlgorithm::FtrlEuclid,
            RowAlgorithm::Lmwu,
            RowAlgorithm::Omwu,
            RowAlgorithm::AdaHedge,
        ] {
            let mut l = learner(algo, 5, 0.3);
            for _ in 0..200 {
                let loss: Vec<f64> = (0..5).map(|_| rng.gen::<f64>()).collect();
                l = l.update(&loss).unwrap();
                let sum: f64 = l.strategy().as_slice().iter().sum();
                assert!((sum - 1.0).abs() <= 1e-12);
                assert!(l.strategy().min_component() >= 0.0);
            }
        }
    }
}
