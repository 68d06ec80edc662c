//! Trajectory metrics: instant and cumulative regret, per-block Lyapunov
//! residuals, and log-log rate fits.
//!
//! A residual is the left side minus the right side of a per-block decrease
//! inequality; non-negativity (up to rounding) certifies the mechanism that
//! drives last-round convergence. Each residual has preconditions; blocks
//! where they do not hold are reported as `None`, never silently computed.

use serde::{Deserialize, Serialize};

use crate::engine::Trajectory;
use crate::error::{Error, Result};
use crate::game::argmax;
use crate::learners::RowAlgorithm;
use crate::policies::{ColumnPolicyKind, StepMode};

/// `IR_{T'} = Σ_{t<=T'} (max_j (x_tᵀA)_j − x_tᵀAy_t)`, undivided.
pub fn instant_regret(traj: &Trajectory, t_prime: u64) -> f64 {
    traj.records
        .iter()
        .take(t_prime as usize)
        .map(|r| r.instant_regret_term)
        .sum()
}

/// `R_{T'} = max_j Σ_{t<=T'} (x_tᵀA)_j − Σ_{t<=T'} x_tᵀAy_t`, undivided.
/// Never exceeds `instant_regret` at the same horizon.
pub fn cumulative_regret(traj: &Trajectory, t_prime: u64) -> f64 {
    let m = traj.game.n_cols();
    let mut col_cum = vec![0.0; m];
    let mut realized = 0.0;
    for rec in traj.records.iter().take(t_prime as usize) {
        let xa = traj
            .game
            .left_mul(&rec.x)
            .expect("stored strategies match the stored game");
        for (acc, &p) in col_cum.iter_mut().zip(&xa) {
            *acc += p;
        }
        realized += rec.payoff;
    }
    col_cum[argmax(&col_cum)] - realized
}

/// Largest block index `k` such that round `2k+1` exists.
pub fn max_block_index(traj: &Trajectory) -> u64 {
    (traj.records.len() as u64).saturating_sub(1) / 2
}

fn is_lrca_robust(traj: &Trajectory) -> bool {
    traj.config.column.policy == ColumnPolicyKind::Lrca
        && traj.config.column.step_mode == StepMode::Robust
}

fn block_inputs(traj: &Trajectory, k: u64) -> Option<(f64, f64)> {
    // alpha of round 2k and f-gap of round 2k−1
    if k < 1 || 2 * k + 1 > traj.records.len() as u64 {
        return None;
    }
    let alpha = traj.records[(2 * k - 1) as usize].alpha?;
    let gap = traj.records[(2 * k - 2) as usize].f_gap;
    Some((alpha, gap))
}

/// Per-block residual of the MWU relative-entropy decrease
/// `RE(x*‖x_{2k−1}) − RE(x*‖x_{2k+1}) − ½·μ_{2k}·α_{2k}·(f(x_{2k−1}) − v)`.
///
/// Applicable to an MWU row with a non-increasing schedule satisfying
/// `μ_{2k} <= 1`, against robust LRCA.
pub fn lyapunov_residual_mwu(traj: &Trajectory, k: u64) -> Option<f64> {
    if traj.config.row.algorithm != RowAlgorithm::Mwu || !is_lrca_robust(traj) {
        return None;
    }
    if !traj.config.row.schedule.is_non_increasing() {
        return None;
    }
    let n = traj.game.n_rows();
    let mu = traj.config.row.schedule.mu(2 * k, n).ok()?;
    if mu > 1.0 {
        return None;
    }
    let (alpha, gap) = block_inputs(traj, k)?;
    let re_a = traj.records[(2 * k - 2) as usize].re_to_eq;
    let re_b = traj.records[2 * k as usize].re_to_eq;
    if !re_a.is_finite() || !re_b.is_finite() {
        return None;
    }
    Some(re_a - re_b - 0.5 * mu * alpha * gap)
}

/// Per-block residual of the LMWU decrease
/// `RE(x*‖x_{2k−1}) − RE(x*‖x_{2k+1}) − μ_{2k}·α_{2k}·(f(x_{2k−1}) − v)/2`,
/// applicable while `μ_{2k} <= 1/3`.
pub fn lyapunov_residual_lmwu(traj: &Trajectory, k: u64) -> Option<f64> {
    if traj.config.row.algorithm != RowAlgorithm::Lmwu || !is_lrca_robust(traj) {
        return None;
    }
    if !traj.config.row.schedule.is_non_increasing() {
        return None;
    }
    let n = traj.game.n_rows();
    let mu = traj.config.row.schedule.mu(2 * k, n).ok()?;
    if mu > 1.0 / 3.0 {
        return None;
    }
    let (alpha, gap) = block_inputs(traj, k)?;
    let re_a = traj.records[(2 * k - 2) as usize].re_to_eq;
    let re_b = traj.records[2 * k as usize].re_to_eq;
    if !re_a.is_finite() || !re_b.is_finite() {
        return None;
    }
    Some(re_a - re_b - 0.5 * mu * alpha * gap)
}

/// How far `Ay*` is from the constant vector `v·1`; zero (to tolerance)
/// exactly when a fully-mixed row equilibrium exists.
pub fn stabilizing_feedback_spread(traj: &Trajectory) -> f64 {
    let ay = traj
        .game
        .right_mul(&traj.equilibrium.col_strategy)
        .expect("equilibrium matches game");
    ay.iter()
        .map(|&l| (l - traj.equilibrium.value).abs())
        .fold(0.0, f64::max)
}

/// Per-block residual of the Euclidean decrease for an FTRL row,
/// `‖x_{2k−1}−x*‖² − ‖x_{2k+1}−x*‖² − μ·α_{2k}·(f(x_{2k−1}) − v)`.
///
/// Applicable when the game admits a fully-mixed row equilibrium
/// (`Ay* = v·1` to 1e-9), the step size is constant with `μ <= 1`, and the
/// iterates at rounds `2k−1` and `2k+1` came from the interior closed form.
pub fn lyapunov_residual_omd(traj: &Trajectory, k: u64) -> Option<f64> {
    if traj.config.row.algorithm != RowAlgorithm::FtrlEuclid || !is_lrca_robust(traj) {
        return None;
    }
    if !traj.config.row.schedule.is_constant() {
        return None;
    }
    let n = traj.game.n_rows();
    let mu = traj.config.row.schedule.mu(2 * k, n).ok()?;
    if mu > 1.0 {
        return None;
    }
    if stabilizing_feedback_spread(traj) > 1e-9 {
        return None;
    }
    let (alpha, gap) = block_inputs(traj, k)?;
    let rec_a = &traj.records[(2 * k - 2) as usize];
    let rec_b = &traj.records[2 * k as usize];
    if rec_a.interior != Some(true) || rec_b.interior != Some(true) {
        return None;
    }
    Some(rec_a.dist_sq_to_eq - rec_b.dist_sq_to_eq - mu * alpha * gap)
}

/// Attaches the matching residual series to the trajectory's odd rounds.
pub fn annotate_residuals(traj: &mut Trajectory) {
    let resid: fn(&Trajectory, u64) -> Option<f64> = match traj.config.row.algorithm {
        RowAlgorithm::Mwu => lyapunov_residual_mwu,
        RowAlgorithm::Lmwu => lyapunov_residual_lmwu,
        RowAlgorithm::FtrlEuclid => lyapunov_residual_omd,
        _ => return,
    };
    for k in 1..=max_block_index(traj) {
        if let Some(r) = resid(traj, k) {
            traj.records[2 * k as usize].lyapunov_residual = Some(r);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateMetric {
    InstantRegret,
    FGap,
    ReToEq,
}

/// Least-squares fit of `ln(metric)` against `ln(T)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateFit {
    pub metric: RateMetric,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub checkpoints: Vec<u64>,
    /// Checkpoints dropped because the metric was not positive there.
    pub excluded: Vec<u64>,
}

/// `2^lo, 2^(lo+1), …, 2^hi`.
pub fn dyadic_checkpoints(lo_exp: u32, hi_exp: u32) -> Vec<u64> {
    (lo_exp..=hi_exp).map(|e| 1u64 << e).collect()
}

/// Reads one metric off a trajectory at the given horizons.
pub fn metric_at_checkpoints(
    traj: &Trajectory,
    metric: RateMetric,
    checkpoints: &[u64],
) -> Vec<(u64, f64)> {
    checkpoints
        .iter()
        .filter(|&&t| t >= 1 && t <= traj.records.len() as u64)
        .map(|&t| {
            let value = match metric {
                RateMetric::InstantRegret => instant_regret(traj, t),
                RateMetric::FGap => traj.records[(t - 1) as usize].f_gap,
                RateMetric::ReToEq => traj.records[(t - 1) as usize].re_to_eq,
            };
            (t, value)
        })
        .collect()
}

/// Fits `ln(value) = slope·ln(T) + intercept` over the supplied checkpoints.
/// Non-positive values are excluded (and reported); at least five usable
/// checkpoints are required.
pub fn fit_rate(points: &[(u64, f64)], metric: RateMetric) -> Result<RateFit> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    let mut checkpoints = Vec::with_capacity(points.len());
    let mut excluded = Vec::new();
    for &(t, value) in points {
        if value > 0.0 && value.is_finite() {
            xs.push((t as f64).ln());
            ys.push(value.ln());
            checkpoints.push(t);
        } else {
            excluded.push(t);
        }
    }
    if xs.len() < 5 {
        return Err(Error::Config(format!(
            "rate fit needs at least 5 positive checkpoints, have {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let p = slope * x + intercept;
            (y - p) * (y - p)
        })
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(RateFit {
        metric,
        slope,
        intercept,
        r_squared,
        checkpoints,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, ColumnConfig, GameSpec, RowConfig, RunConfig};
    use crate::learners::StepSizeSchedule;

    fn lrca_run(algo: RowAlgorithm, mu: f64, rounds: u64, seed: u64) -> Trajectory {
        run(&RunConfig {
            game: GameSpec::RandomUniform { n: 5, m: 5 },
            seed,
            row: RowConfig {
                algorithm: algo,
                schedule: StepSizeSchedule::Constant { mu },
            },
            column: ColumnConfig {
                policy: ColumnPolicyKind::Lrca,
                step_mode: StepMode::Robust,
                mwu_mu: 0.1,
            },
            rounds,
        })
        .unwrap()
    }

    #[test]
    fn instant_regret_monotone_and_dominates_cumulative() {
        let traj = lrca_run(RowAlgorithm::Mwu, 0.5, 400, 3);
        let mut prev = 0.0;
        for t in [50u64, 100, 200, 400] {
            let ir = instant_regret(&traj, t);
            assert!(ir >= prev - 1e-12);
            let r = cumulative_regret(&traj, t);
            assert!(r <= ir + 1e-9, "R={r} IR={ir}");
            prev = ir;
        }
    }

    #[test]
    fn single_round_instant_regret_example() {
        // x = e_1, y = e_2 on the identity game: term = 1 − 0 = 1
        use crate::game::{PayoffMatrix, SimplexVector};
        let a = PayoffMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let x = SimplexVector::vertex(2, 0);
        let y = SimplexVector::vertex(2, 1);
        let xa = a.left_mul(&x).unwrap();
        let term = xa[argmax(&xa)] - a.payoff(&x, &y).unwrap();
        assert_eq!(term, 1.0);
    }

    #[test]
    fn cumulative_regret_alternating_example() {
        // alternating vertices against y* on the identity game: R_2 = 0
        use crate::game::{PayoffMatrix, SimplexVector};
        let a = PayoffMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let ys = SimplexVector::new(vec![0.5, 0.5]).unwrap();
        let xs = [SimplexVector::vertex(2, 0), SimplexVector::vertex(2, 1)];
        let mut col = vec![0.0; 2];
        let mut realized = 0.0;
        for x in &xs {
            let xa = a.left_mul(x).unwrap();
            for (c, &p) in col.iter_mut().zip(&xa) {
                *c += p;
            }
            realized += a.payoff(x, &ys).unwrap();
        }
        assert!((col[argmax(&col)] - realized).abs() < 1e-15);
    }

    #[test]
    fn mwu_residuals_nonnegative_on_random_game() {
        let traj = lrca_run(RowAlgorithm::Mwu, 0.5, 2000, 11);
        let mut seen = 0;
        for k in 1..=max_block_index(&traj) {
            if let Some(r) = lyapunov_residual_mwu(&traj, k) {
                assert!(r >= -1e-9, "block {k}: residual {r}");
                seen += 1;
            }
        }
        assert!(seen > 900);
    }

    #[test]
    fn mwu_residual_not_applicable_for_large_mu() {
        let traj = lrca_run(RowAlgorithm::Mwu, 1.5, 100, 2);
        assert!(lyapunov_residual_mwu(&traj, 3).is_none());
        // wrong learner kind is also not applicable
        let traj = lrca_run(RowAlgorithm::Lmwu, 0.3, 100, 2);
        assert!(lyapunov_residual_mwu(&traj, 3).is_none());
        assert!(lyapunov_residual_lmwu(&traj, 3).is_some());
    }

    #[test]
    fn frozen_dynamics_residual_zero() {
        let traj = lrca_run(RowAlgorithm::Mwu, 0.0, 50, 4);
        for k in 1..=max_block_index(&traj) {
            let r = lyapunov_residual_mwu(&traj, k).unwrap();
            // mu = 0 freezes x, so the RE difference and the bound both vanish
            assert!(r.abs() <= 1e-12);
        }
    }

    #[test]
    fn annotation_sits_on_odd_rounds() {
        let traj = lrca_run(RowAlgorithm::Mwu, 0.5, 101, 5);
        for rec in &traj.records {
            if rec.lyapunov_residual.is_some() {
                assert!(rec.t % 2 == 1 && rec.t >= 3);
            }
        }
        assert!(traj.records[4].lyapunov_residual.is_some()); // t = 5
    }

    #[test]
    fn fit_rate_synthetic_slopes() {
        let pts: Vec<(u64, f64)> = dyadic_checkpoints(8, 16)
            .into_iter()
            .map(|t| (t, 3.0 * t as f64))
            .collect();
        let fit = fit_rate(&pts, RateMetric::InstantRegret).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let pts: Vec<(u64, f64)> = dyadic_checkpoints(8, 16)
            .into_iter()
            .map(|t| (t, 0.7 * (t as f64).powf(0.75)))
            .collect();
        let fit = fit_rate(&pts, RateMetric::InstantRegret).unwrap();
        assert!((fit.slope - 0.75).abs() < 1e-9);
    }

    #[test]
    fn fit_rate_excludes_zeros() {
        let mut pts: Vec<(u64, f64)> = dyadic_checkpoints(8, 16)
            .into_iter()
            .map(|t| (t, t as f64))
            .collect();
        pts[0].1 = 0.0;
        let fit = fit_rate(&pts, RateMetric::FGap).unwrap();
        assert_eq!(fit.excluded, vec![256]);
        assert!(fit.checkpoints.len() == 8);
        // too few positive points is an error
        let few: Vec<(u64, f64)> = vec![(2, 1.0), (4, 2.0), (8, 0.0), (16, 3.0), (32, -1.0)];
        assert!(fit_rate(&few, RateMetric::FGap).is_err());
    }
}
