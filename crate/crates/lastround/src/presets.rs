//! Canned experiments behind `--preset`: each runs a seeded batch of games,
//! measures the quantities its guarantee is about, and reports named
//! assertions with measured value, threshold, and pass/fail.
//!
//! Presets are data plus a driver, not bespoke code paths: adding one means
//! adding a function and a table row. All randomness flows from the single
//! master seed through [`derive_seed`].

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{
    derive_seed, generate_game, run, run_with_observer, ColumnConfig, GameSpec, RowConfig,
    RunConfig,
};
use crate::error::{Error, Result};
use crate::game::{argmax, dot, PayoffMatrix, SimplexVector};
use crate::learners::{RowAlgorithm, RowLearner, StepSizeSchedule};
use crate::metrics::{
    self, dyadic_checkpoints, fit_rate, instant_regret, max_block_index, RateMetric,
};
use crate::policies::{ColumnPolicy, ColumnPolicyKind, PolicyInput, StepMode};
use crate::solver::{detect_fully_mixed, solve_minimax};

/// Master seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 1729;

/// Interior-game rejection sampling demands this margin on `min_i x*(i)`;
/// thinner equilibria keep FTRL iterates clipped for long stretches.
pub const INTERIOR_MARGIN: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparator {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub comparator: Comparator,
    pub pass: bool,
}

impl Assertion {
    fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            comparator: Comparator::AtMost,
            pass: measured <= threshold,
        }
    }

    fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            comparator: Comparator::AtLeast,
            pass: measured >= threshold,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Diagnostic {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresetReport {
    pub preset: String,
    pub seed: u64,
    pub assertions: Vec<Assertion>,
    pub diagnostics: Vec<Diagnostic>,
    pub runtime_seconds: f64,
}

impl PresetReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    /// One human-readable line per assertion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for a in &self.assertions {
            let op = match a.comparator {
                Comparator::AtMost => "<=",
                Comparator::AtLeast => ">=",
            };
            out.push_str(&format!(
                "[{}] {}: {:.6e} {} {:.6e}\n",
                if a.pass { "PASS" } else { "FAIL" },
                a.name,
                a.measured,
                op,
                a.threshold
            ));
        }
        for d in &self.diagnostics {
            out.push_str(&format!("[info] {}: {:.6e}\n", d.name, d.value));
        }
        out
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &[
        "solver-duality",
        "lemma1-check",
        "mwu-complexity",
        "ftrl-convergence",
        "lmwu-check",
        "omwu-lrca2",
        "regret-rates",
        "adahedge-switch",
        "mwu-divergence",
        "stability-check",
    ]
}

pub fn run_preset(name: &str, seed: u64) -> Result<PresetReport> {
    let started = Instant::now();
    let mut report = match name {
        "solver-duality" => solver_duality(seed),
        "lemma1-check" => lemma1_check(seed),
        "mwu-complexity" => mwu_complexity(seed),
        "ftrl-convergence" => ftrl_convergence(seed),
        "lmwu-check" => lmwu_check(seed),
        "omwu-lrca2" => omwu_lrca2(seed),
        "regret-rates" => regret_rates(seed),
        "adahedge-switch" => adahedge_switch(seed),
        "mwu-divergence" => mwu_divergence(seed),
        "stability-check" => stability_check(seed),
        _ => Err(Error::UnknownPreset(name.into())),
    }?;
    report.runtime_seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

fn blank_report(name: &str, seed: u64) -> PresetReport {
    PresetReport {
        preset: name.into(),
        seed,
        assertions: Vec::new(),
        diagnostics: Vec::new(),
        runtime_seconds: 0.0,
    }
}

fn lrca_vs(algo: RowAlgorithm, schedule: StepSizeSchedule, seed: u64, rounds: u64) -> RunConfig {
    RunConfig {
        game: GameSpec::RandomUniform { n: 5, m: 5 },
        seed,
        row: RowConfig { algorithm: algo, schedule },
        column: ColumnConfig {
            policy: ColumnPolicyKind::Lrca,
            step_mode: StepMode::Robust,
            mwu_mu: 0.1,
        },
        rounds,
    }
}

/// Candidate seeds accepted when the game admits a fully-mixed row
/// equilibrium with margin; rejection sampling is deterministic in the
/// master seed.
fn interior_game_seeds(master: u64, count: usize, margin: f64) -> Result<Vec<u64>> {
    let mut seeds = Vec::with_capacity(count);
    let mut index = 0u64;
    while seeds.len() < count {
        if index > 200_000 {
            return Err(Error::Config(
                "interior-game rejection sampling exhausted its budget".into(),
            ));
        }
        let seed = derive_seed(master, index);
        index += 1;
        let game = generate_game(&GameSpec::RandomUniform { n: 5, m: 5 }, seed)?;
        let rep = solve_minimax(&game)?;
        let fm = detect_fully_mixed(&game, &rep.equilibrium, margin)?;
        if fm.interior_row_equilibrium_exists {
            seeds.push(seed);
        }
    }
    Ok(seeds)
}

// ---------------------------------------------------------------------------
// solver-duality: LP equilibria on random games, checked against the
// equilibrium inequalities and the closed-form 2×2 oracle.
// ---------------------------------------------------------------------------
fn solver_duality(seed: u64) -> Result<PresetReport> {
    let started = Instant::now();
    let mut report = blank_report("solver-duality", seed);

    let gaps = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
            let n = rng.gen_range(2..=10);
            let m = rng.gen_range(2..=10);
            let game = generate_game(
                &GameSpec::RandomUniform { n, m },
                derive_seed(seed, 1_000 + i),
            )?;
            let rep = solve_minimax(&game)?;
            let ok = crate::solver::verify_equilibrium(&game, &rep.equilibrium, 1e-7)?;
            Ok((rep.duality_gap, ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_gap = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    let verified = gaps.iter().filter(|g| g.1).count();
    report
        .assertions
        .push(Assertion::at_most("max duality gap over 200 games", max_gap, 1e-7));
    report.assertions.push(Assertion::at_least(
        "equilibria passing the inequality check",
        verified as f64,
        200.0,
    ));

    let worst_2x2 = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let game = generate_game(
                &GameSpec::RandomUniform { n: 2, m: 2 },
                derive_seed(seed, 2_000 + i),
            )?;
            let lp = solve_minimax(&game)?;
            let oracle = crate::solver::brute_force_minimax_2x2(&game)?;
            Ok((lp.equilibrium.value - oracle.value).abs())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    report.assertions.push(Assertion::at_most(
        "max |LP value − closed-form value| over 200 2x2 games",
        worst_2x2,
        1e-9,
    ));
    report.assertions.push(Assertion::at_most(
        "runtime seconds",
        started.elapsed().as_secs_f64(),
        5.0,
    ));
    Ok(report)
}

// ---------------------------------------------------------------------------
// lemma1-check: per-block relative-entropy decrease for LRCA vs MWU.
// ---------------------------------------------------------------------------
fn lemma1_check(seed: u64) -> Result<PresetReport> {
    let started = Instant::now();
    let mut report = blank_report("lemma1-check", seed);
    let schedules: Vec<(String, StepSizeSchedule)> = vec![
        ("mu=0.1".into(), StepSizeSchedule::Constant { mu: 0.1 }),
        ("mu=0.5".into(), StepSizeSchedule::Constant { mu: 0.5 }),
        ("mu=1.0".into(), StepSizeSchedule::Constant { mu: 1.0 }),
        ("mu=sqrt(8 ln n/t)".into(), StepSizeSchedule::InverseSqrt),
    ];

    for (label, schedule) in schedules {
        let results = (0..20u64)
            .into_par_iter()
            .map(|i| {
                let traj = run(&lrca_vs(
                    RowAlgorithm::Mwu,
                    schedule.clone(),
                    derive_seed(seed, i),
                    10_000,
                ))?;
                let mut min_residual = f64::INFINITY;
                let mut max_re_increase = f64::NEG_INFINITY;
                let mut applicable = 0u64;
                for k in 1..=max_block_index(&traj) {
                    if let Some(r) = metrics::lyapunov_residual_mwu(&traj, k) {
                        min_residual = min_residual.min(r);
                        applicable += 1;
                        let re_a = traj.records[(2 * k - 2) as usize].re_to_eq;
                        let re_b = traj.records[2 * k as usize].re_to_eq;
                        max_re_increase = max_re_increase.max(re_b - re_a);
                    }
                }
                Ok((min_residual, max_re_increase, applicable))
            })
            .collect::<Result<Vec<_>>>()?;
        let min_residual = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let max_increase = results
            .iter()
            .map(|r| r.1)
            .fold(f64::NEG_INFINITY, f64::max);
        let blocks: u64 = results.iter().map(|r| r.2).sum();
        report.assertions.push(Assertion::at_least(
            format!("{label}: min per-block residual ({blocks} blocks)"),
            min_residual,
            -1e-9,
        ));
        report.assertions.push(Assertion::at_most(
            format!("{label}: max per-block RE increase"),
            max_increase,
            1e-9,
        ));
    }
    report.assertions.push(Assertion::at_most(
        "runtime seconds",
        started.elapsed().as_secs_f64(),
        30.0,
    ));
    Ok(report)
}

// ---------------------------------------------------------------------------
// mwu-complexity: rounds until f(x_t) − v <= 0.01 stay within twice the
// 4·ln(n)/(μ ε²) budget for constant step sizes.
// ---------------------------------------------------------------------------
fn mwu_complexity(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("mwu-complexity", seed);
    let eps = 0.01;
    for mu in [0.1, 0.5, 1.0] {
        let n = 5.0_f64;
        let cap = (2.0 * 4.0 * n.ln() / (mu * eps * eps)).ceil() as u64;
        let hits = (0..20u64)
            .into_par_iter()
            .map(|i| {
                let cfg = lrca_vs(
                    RowAlgorithm::Mwu,
                    StepSizeSchedule::Constant { mu },
                    derive_seed(seed, i),
                    cap,
                );
                let mut hit: Option<u64> = None;
                run_with_observer(&cfg, |rec| {
                    if rec.f_gap <= eps {
                        hit = Some(rec.t);
                        false
                    } else {
                        true
                    }
                })?;
                Ok(hit)
            })
            .collect::<Result<Vec<_>>>()?;
        let worst = hits
            .iter()
            .map(|h| h.map(|t| t as f64).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        report.assertions.push(Assertion::at_most(
            format!("mu={mu}: worst first round with gap <= {eps}"),
            worst,
            cap as f64,
        ));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// ftrl-convergence: Euclidean per-block decrease on interior-equilibrium
// games, with the interior closed form active nearly everywhere.
// ---------------------------------------------------------------------------
fn ftrl_convergence(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("ftrl-convergence", seed);
    let seeds = interior_game_seeds(seed, 20, INTERIOR_MARGIN)?;
    let rounds = 50_000u64;
    let results = seeds
        .par_iter()
        .map(|&game_seed| {
            let traj = run(&lrca_vs(
                RowAlgorithm::FtrlEuclid,
                StepSizeSchedule::Constant { mu: 0.5 },
                game_seed,
                rounds,
            ))?;
            let interior_rounds = traj
                .records
                .iter()
                .filter(|r| r.interior == Some(true))
                .count();
            let flag_fraction = interior_rounds as f64 / traj.records.len() as f64;
            let mut min_residual = f64::INFINITY;
            let mut applicable = 0u64;
            for k in 1..=max_block_index(&traj) {
                if let Some(r) = metrics::lyapunov_residual_omd(&traj, k) {
                    min_residual = min_residual.min(r);
                    applicable += 1;
                }
            }
            Ok((flag_fraction, min_residual, applicable, traj.records[rounds as usize - 1].f_gap))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_flag = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let min_residual = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let blocks: u64 = results.iter().map(|r| r.2).sum();
    let max_gap = results.iter().map(|r| r.3).fold(0.0, f64::max);
    report.assertions.push(Assertion::at_least(
        format!("min per-block residual over 20 interior games ({blocks} blocks)"),
        min_residual,
        -1e-9,
    ));
    report.assertions.push(Assertion::at_least(
        "min fraction of rounds with the interior closed form active",
        min_flag,
        0.95,
    ));
    report.diagnostics.push(Diagnostic {
        name: "max final f-gap".into(),
        value: max_gap,
    });
    Ok(report)
}

// ---------------------------------------------------------------------------
// lmwu-check: per-block relative-entropy decrease for LRCA vs LMWU.
// ---------------------------------------------------------------------------
fn lmwu_check(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("lmwu-check", seed);
    let results = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let traj = run(&lrca_vs(
                RowAlgorithm::Lmwu,
                StepSizeSchedule::Constant { mu: 0.3 },
                derive_seed(seed, i),
                10_000,
            ))?;
            let mut min_residual = f64::INFINITY;
            for k in 1..=max_block_index(&traj) {
                if let Some(r) = metrics::lyapunov_residual_lmwu(&traj, k) {
                    min_residual = min_residual.min(r);
                }
            }
            Ok(min_residual)
        })
        .collect::<Result<Vec<_>>>()?;
    let min_residual = results.into_iter().fold(f64::INFINITY, f64::min);
    report.assertions.push(Assertion::at_least(
        "min per-block residual over 20 games",
        min_residual,
        -1e-9,
    ));
    Ok(report)
}

// ---------------------------------------------------------------------------
// omwu-lrca2: LRCA-2 against an optimistic learner; block-to-block
// relative entropy decreases after burn-in and the final gap is small.
// ---------------------------------------------------------------------------
fn omwu_lrca2(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("omwu-lrca2", seed);
    let rounds = 100_000u64;
    let burn_in_blocks = 10u64;
    let mut configs: Vec<RunConfig> = vec![RunConfig {
        game: GameSpec::MatchingPennies { n: 2 },
        seed,
        row: RowConfig {
            algorithm: RowAlgorithm::Omwu,
            schedule: StepSizeSchedule::Constant { mu: 0.1 },
        },
        column: ColumnConfig {
            policy: ColumnPolicyKind::Lrca2,
            step_mode: StepMode::Robust,
            mwu_mu: 0.1,
        },
        rounds,
    }];
    for i in 0..20u64 {
        let mut cfg = configs[0].clone();
        cfg.game = GameSpec::RandomUniform { n: 5, m: 5 };
        cfg.seed = derive_seed(seed, i);
        configs.push(cfg);
    }
    let results = configs
        .par_iter()
        .map(|cfg| {
            let traj = run(cfg)?;
            let mut max_increase = f64::NEG_INFINITY;
            let mut k = burn_in_blocks;
            while 3 * (k + 1) <= rounds {
                let re_a = traj.records[(3 * k - 1) as usize].re_to_eq;
                let re_b = traj.records[(3 * (k + 1) - 1) as usize].re_to_eq;
                max_increase = max_increase.max(re_b - re_a);
                k += 1;
            }
            Ok((max_increase, traj.records[rounds as usize - 1].f_gap))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_increase = results
        .iter()
        .map(|r| r.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_gap = results.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    report.assertions.push(Assertion::at_most(
        "max block-to-block RE increase after 10-block burn-in",
        max_increase,
        1e-9,
    ));
    report.assertions.push(Assertion::at_most(
        "max final f-gap over matching pennies and 20 random games",
        max_gap,
        0.01,
    ));
    Ok(report)
}

// ---------------------------------------------------------------------------
// regret-rates: ensemble-averaged IR_T growth on log-log axes, plus the
// pointwise R_T <= IR_T ordering.
// ---------------------------------------------------------------------------
fn regret_rates(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("regret-rates", seed);
    let checkpoints = dyadic_checkpoints(8, 16);
    let rounds = 1u64 << 16;
    for (label, schedule, slope_cap) in [
        (
            "constant mu=0.5",
            StepSizeSchedule::Constant { mu: 0.5 },
            0.6,
        ),
        ("mu_t = sqrt(8 ln n/t)", StepSizeSchedule::InverseSqrt, 0.8),
    ] {
        let per_game = (0..20u64)
            .into_par_iter()
            .map(|i| {
                let traj = run(&lrca_vs(
                    RowAlgorithm::Mwu,
                    schedule.clone(),
                    derive_seed(seed, i),
                    rounds,
                ))?;
                let ir: Vec<f64> = checkpoints
                    .iter()
                    .map(|&t| instant_regret(&traj, t))
                    .collect();
                let mut max_violation = f64::NEG_INFINITY;
                for &t in &checkpoints {
                    let r = metrics::cumulative_regret(&traj, t);
                    let irt = instant_regret(&traj, t);
                    max_violation = max_violation.max(r - irt);
                }
                Ok((ir, max_violation))
            })
            .collect::<Result<Vec<_>>>()?;
        // ensemble mean at each checkpoint: per-game fits are dominated by
        // transients at these horizons, the averaged curve is the rate
        let mean_ir: Vec<(u64, f64)> = checkpoints
            .iter()
            .enumerate()
            .map(|(ci, &t)| {
                let mean =
                    per_game.iter().map(|(ir, _)| ir[ci]).sum::<f64>() / per_game.len() as f64;
                (t, mean)
            })
            .collect();
        let fit = fit_rate(&mean_ir, RateMetric::InstantRegret)?;
        let max_violation = per_game
            .iter()
            .map(|(_, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max);
        report.assertions.push(Assertion::at_most(
            format!("{label}: ensemble-mean IR_T log-log slope"),
            fit.slope,
            slope_cap,
        ));
        report.assertions.push(Assertion::at_most(
            format!("{label}: max R_T − IR_T over games and checkpoints"),
            max_violation,
            1e-9,
        ));
        report.diagnostics.push(Diagnostic {
            name: format!("{label}: fit r-squared"),
            value: fit.r_squared,
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// adahedge-switch: the combined policy never abandons LRCA against a
// no-regret row, and keeps worst-case regret under the scaled threshold
// against an arbitrary (random mixed) row.
// ---------------------------------------------------------------------------
fn adahedge_switch(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("adahedge-switch", seed);

    // (a) vs MWU with the decreasing schedule: the latch must never flip
    let outcomes = (0..10u64)
        .into_par_iter()
        .map(|i| {
            let mut cfg = lrca_vs(
                RowAlgorithm::Mwu,
                StepSizeSchedule::InverseSqrt,
                derive_seed(seed, i),
                100_000,
            );
            cfg.column.policy = ColumnPolicyKind::LrcaAdaHedge;
            let parts = run_with_observer(&cfg, |_| true)?;
            Ok(parts.outcome.switched)
        })
        .collect::<Result<Vec<_>>>()?;
    let switched_runs = outcomes.iter().filter(|&&s| s).count();
    report.assertions.push(Assertion::at_most(
        "runs that switched away from LRCA vs schedule-MWU over 10 games, T=1e5",
        switched_runs as f64,
        0.0,
    ));

    // (b) vs a row emitting uniformly random mixed strategies
    let checkpoints = dyadic_checkpoints(8, 16);
    let rounds = 1u64 << 16;
    let ratios = (0..5u64)
        .into_par_iter()
        .map(|g| {
            let game = generate_game(
                &GameSpec::RandomUniform { n: 5, m: 5 },
                derive_seed(seed, 100 + g),
            )?;
            let n = game.n_rows();
            let m = game.n_cols();
            let eq = solve_minimax(&game)?.equilibrium;
            let mut policy = ColumnPolicy::new(
                ColumnPolicyKind::LrcaAdaHedge,
                StepMode::Robust,
                eq,
                n,
                0.1,
            );
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 200 + g));
            let bound = (n as f64 * (n as f64).ln()).sqrt();
            let mut best_col = vec![0.0; m];
            let mut realized = 0.0;
            let mut prev_xa: Option<Vec<f64>> = None;
            let mut max_ratio = f64::NEG_INFINITY;
            let mut switched_at = 0.0f64;
            for t in 1..=rounds {
                let x = random_simplex(n, &mut rng);
                let xa = game.left_mul(&x)?;
                let feedback = prev_xa.clone().unwrap_or_else(|| xa.clone());
                let regret = best_col[argmax(&best_col)] - realized;
                let (next, decision) = policy.step(&PolicyInput {
                    t,
                    feedback: &feedback,
                    cumulative_regret: regret,
                    row_mu: 0.0,
                })?;
                policy = next;
                let payoff = dot(&xa, decision.strategy.as_slice());
                for (acc, &p) in best_col.iter_mut().zip(&xa) {
                    *acc += p;
                }
                realized += payoff;
                prev_xa = Some(xa);
                if checkpoints.contains(&t) {
                    let r_t = best_col[argmax(&best_col)] - realized;
                    let cap = 4.0 * bound * (t as f64).powf(0.75);
                    max_ratio = max_ratio.max(r_t / cap);
                }
            }
            if policy.switched() {
                switched_at = policy.switch_round().unwrap_or(0) as f64;
            }
            Ok((max_ratio, switched_at))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_ratio = ratios.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    report.assertions.push(Assertion::at_most(
        "max R_T / (4·sqrt(n ln n)·T^0.75) vs random rows, dyadic checkpoints",
        worst_ratio,
        1.0,
    ));
    for (g, (_, sw)) in ratios.iter().enumerate() {
        if *sw > 0.0 {
            report.diagnostics.push(Diagnostic {
                name: format!("random-row game {g}: switched at round"),
                value: *sw,
            });
        }
    }
    Ok(report)
}

fn random_simplex(d: usize, rng: &mut ChaCha8Rng) -> SimplexVector {
    let raw: Vec<f64> = (0..d).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    SimplexVector::from_unnormalized(raw).expect("exponential draws are positive")
}

// ---------------------------------------------------------------------------
// mwu-divergence: the negative control. MWU self-play on matching pennies
// diverges from the equilibrium while LRCA converges on the same game.
//
// The first assertion is kept in its stated per-round form even though the
// self-play orbit provably sweeps the row marginal through x* on every
// revolution (the accompanying diagnostics certify the divergence itself);
// see the repository notes on this check.
// ---------------------------------------------------------------------------
fn mwu_divergence(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("mwu-divergence", seed);
    let rounds = 10_000u64;
    let tail_from = 5_001u64;

    let mut cfg = RunConfig {
        game: GameSpec::MatchingPennies { n: 2 },
        seed,
        row: RowConfig {
            algorithm: RowAlgorithm::Mwu,
            schedule: StepSizeSchedule::Constant { mu: 0.1 },
        },
        column: ColumnConfig {
            policy: ColumnPolicyKind::MwuColumn,
            step_mode: StepMode::Robust,
            mwu_mu: 0.1,
        },
        rounds,
    };
    let traj = run(&cfg)?;
    let y_star = &traj.equilibrium.col_strategy;
    let mut tail_min = f64::INFINITY;
    let mut tail_joint_min = f64::INFINITY;
    let mut beyond = 0u64;
    let mut tail_rounds = 0u64;
    for rec in &traj.records {
        if rec.t < tail_from {
            continue;
        }
        tail_rounds += 1;
        let dist = rec.dist_sq_to_eq.sqrt();
        tail_min = tail_min.min(dist);
        if dist >= 0.1 {
            beyond += 1;
        }
        let dy: f64 = rec
            .y
            .as_slice()
            .iter()
            .zip(y_star.as_slice())
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum();
        tail_joint_min = tail_joint_min.min((rec.dist_sq_to_eq + dy).sqrt());
    }
    report.assertions.push(Assertion::at_least(
        "MWU self-play: min tail ‖x_t − x*‖",
        tail_min,
        0.1,
    ));
    report.diagnostics.push(Diagnostic {
        name: "MWU self-play: fraction of tail rounds with ‖x_t − x*‖ >= 0.1".into(),
        value: beyond as f64 / tail_rounds as f64,
    });
    report.diagnostics.push(Diagnostic {
        name: "MWU self-play: min tail profile distance ‖(x_t,y_t) − (x*,y*)‖".into(),
        value: tail_joint_min,
    });

    cfg.column.policy = ColumnPolicyKind::Lrca;
    let traj = run(&cfg)?;
    let tail_max = traj
        .records
        .iter()
        .filter(|r| r.t >= tail_from)
        .map(|r| r.dist_sq_to_eq.sqrt())
        .fold(0.0, f64::max);
    report.assertions.push(Assertion::at_most(
        "LRCA on the same game: max tail ‖x_t − x*‖",
        tail_max,
        0.01,
    ));
    Ok(report)
}

// ---------------------------------------------------------------------------
// stability-check: on games with Ay* = v·1, one feed of the stabilising
// loss leaves MWU, LMWU, and FTRL states unchanged.
// ---------------------------------------------------------------------------
fn stability_check(seed: u64) -> Result<PresetReport> {
    let mut report = blank_report("stability-check", seed);
    let mut games: Vec<PayoffMatrix> = vec![
        generate_game(&GameSpec::MatchingPennies { n: 2 }, 0)?,
        generate_game(&GameSpec::Derived2x2, 0)?,
    ];
    for game_seed in interior_game_seeds(seed, 5, INTERIOR_MARGIN)? {
        games.push(generate_game(
            &GameSpec::RandomUniform { n: 5, m: 5 },
            game_seed,
        )?);
    }

    let mut max_spread = 0.0f64;
    let mut max_drift = 0.0f64;
    for game in &games {
        let eq = solve_minimax(game)?.equilibrium;
        let ay = game.right_mul(&eq.col_strategy)?;
        let spread = ay
            .iter()
            .map(|&l| (l - eq.value).abs())
            .fold(0.0, f64::max);
        max_spread = max_spread.max(spread);
        let n = game.n_rows();
        for (algo, mu) in [
            (RowAlgorithm::Mwu, 0.5),
            (RowAlgorithm::Lmwu, 0.3),
            (RowAlgorithm::FtrlEuclid, 0.5),
        ] {
            let mut learner =
                RowLearner::new(algo, n, StepSizeSchedule::Constant { mu })?;
            // wander off the uniform start with a few arbitrary losses
            for j in 0..3 {
                let y = SimplexVector::vertex(game.n_cols(), j % game.n_cols());
                learner = learner.update(&game.right_mul(&y)?)?;
            }
            let before = learner.strategy().clone();
            let after = learner.update(&ay)?;
            let drift = before
                .as_slice()
                .iter()
                .zip(after.strategy().as_slice())
                .map(|(&a, &b)| (a - b).abs())
                .fold(0.0, f64::max);
            max_drift = max_drift.max(drift);
        }
    }
    report.assertions.push(Assertion::at_most(
        "max ‖Ay* − v·1‖∞ over stability games",
        max_spread,
        1e-9,
    ));
    report.assertions.push(Assertion::at_most(
        "max strategy drift after one stabilising loss (3 learners × games)",
        max_drift,
        1e-10,
    ));
    Ok(report)
}
