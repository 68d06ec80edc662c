//! Repeated-game driver: wires a row learner against a column policy, records
//! one `RoundRecord` per round, and keeps the regret bookkeeping the combined
//! policy's threshold test needs.
//!
//! Dynamics are the exact expected-play recursion: mixed strategies propagate
//! as vectors, nothing is sampled, so a `(config, seed)` pair reproduces a
//! trajectory bit for bit. The only randomness is in game generation.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    argmax, dot, euclid_dist_sq, relative_entropy, Equilibrium, PayoffMatrix, SimplexVector,
};
use crate::learners::{RowAlgorithm, RowLearner, StepSizeSchedule};
use crate::metrics;
use crate::policies::{ColumnPolicy, ColumnPolicyKind, PolicyInput, StepMode};
use crate::solver::solve_minimax;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GameSpec {
    RandomUniform { n: usize, m: usize },
    /// Identity pattern scaled into `[0, 1]`; requires a square shape.
    MatchingPennies { n: usize },
    /// The 2×2 fixture `[[0.8, 0.2], [0.3, 0.6]]` with closed-form
    /// equilibrium `x* = (1/3, 2/3)`, `y* = (4/9, 5/9)`, `v = 7/15`.
    Derived2x2,
    FromFile { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowConfig {
    pub algorithm: RowAlgorithm,
    pub schedule: StepSizeSchedule,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnConfig {
    pub policy: ColumnPolicyKind,
    pub step_mode: StepMode,
    /// Step size of the MWU baseline column (unused by the other policies).
    pub mwu_mu: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub game: GameSpec,
    pub seed: u64,
    pub row: RowConfig,
    pub column: ColumnConfig,
    pub rounds: u64,
}

/// Everything measured about one round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: u64,
    pub x: SimplexVector,
    pub y: SimplexVector,
    /// `x_tᵀ A y_t`.
    pub payoff: f64,
    /// `f(x_t) − v`.
    pub f_gap: f64,
    /// `RE(x* ‖ x_t)`; infinite when `x_t` has left the support of `x*`.
    pub re_to_eq: f64,
    /// `‖x_t − x*‖²`.
    pub dist_sq_to_eq: f64,
    /// `max_j (x_tᵀA)_j − x_tᵀAy_t`, one summand of `IR_T`.
    pub instant_regret_term: f64,
    /// Exploit weight, on rounds where the column policy used one.
    pub alpha: Option<f64>,
    /// Per-block Lyapunov residual, attached to rounds `2k+1` when the
    /// learner/policy pair matches one of the analysed combinations.
    pub lyapunov_residual: Option<f64>,
    /// FTRL rows: whether `x_t` came from the interior closed form.
    pub interior: Option<bool>,
}

/// Latches and counters left behind by a finished run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyOutcome {
    pub switched: bool,
    pub switch_round: Option<u64>,
    pub alpha_clamp_events: u64,
    pub lmwu_schedule_warnings: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub config: RunConfig,
    pub seed: u64,
    pub game: PayoffMatrix,
    pub equilibrium: Equilibrium,
    pub records: Vec<RoundRecord>,
    pub outcome: PolicyOutcome,
}

/// Pieces of a run that exist whether or not records were kept.
#[derive(Clone, Debug)]
pub struct RunParts {
    pub game: PayoffMatrix,
    pub equilibrium: Equilibrium,
    pub outcome: PolicyOutcome,
}

pub fn generate_game(spec: &GameSpec, seed: u64) -> Result<PayoffMatrix> {
    match spec {
        GameSpec::RandomUniform { n, m } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let entries: Vec<f64> = (0..n * m).map(|_| rng.gen::<f64>()).collect();
            PayoffMatrix::from_flat(*n, *m, entries)
        }
        GameSpec::MatchingPennies { n } => {
            let mut entries = vec![0.0; n * n];
            for i in 0..*n {
                entries[i * n + i] = 1.0;
            }
            PayoffMatrix::from_flat(*n, *n, entries)
        }
        GameSpec::Derived2x2 => {
            PayoffMatrix::from_rows(&[vec![0.8, 0.2], vec![0.3, 0.6]])
        }
        GameSpec::FromFile { path } => crate::io::load_matrix_csv(path),
    }
}

/// Runs the repeated game, handing each record to `observer` as it is
/// produced; return `false` to stop early. Useful when only a summary
/// statistic is wanted over a horizon too long to store.
pub fn run_with_observer<F>(config: &RunConfig, mut observer: F) -> Result<RunParts>
where
    F: FnMut(&RoundRecord) -> bool,
{
    if config.rounds < 1 {
        return Err(Error::Config("rounds must be at least 1".into()));
    }
    let game = generate_game(&config.game, config.seed)?;
    let (n, m) = (game.n_rows(), game.n_cols());
    let equilibrium = solve_minimax(&game)?.equilibrium;
    let x_star = &equilibrium.row_strategy;
    let v = equilibrium.value;

    let mut learner = RowLearner::new(config.row.algorithm, n, config.row.schedule.clone())?;
    let mut policy = ColumnPolicy::new(
        config.column.policy,
        config.column.step_mode,
        equilibrium.clone(),
        n,
        config.column.mwu_mu,
    );

    let mut x = learner.strategy().clone();
    // round-1 feedback convention: the initial strategy's own payoff vector
    let mut prev_xa = game.left_mul(&x)?;
    let mut best_col_cum = vec![0.0; m];
    let mut realized_cum = 0.0;

    for t in 1..=config.rounds {
        let xa = if t == 1 {
            prev_xa.clone()
        } else {
            game.left_mul(&x)?
        };
        let regret = best_col_cum[argmax(&best_col_cum)] - realized_cum;
        let row_mu = learner.mu_at(t)?;
        let (next_policy, decision) = policy.step(&PolicyInput {
            t,
            feedback: &prev_xa,
            cumulative_regret: regret,
            row_mu,
        })?;
        policy = next_policy;
        let y = decision.strategy;

        let payoff = dot(&xa, y.as_slice());
        let f = xa[argmax(&xa)];
        let record = RoundRecord {
            t,
            payoff,
            f_gap: f - v,
            re_to_eq: relative_entropy(x_star, &x)?,
            dist_sq_to_eq: euclid_dist_sq(&x, x_star)?,
            instant_regret_term: f - payoff,
            alpha: decision.alpha,
            lyapunov_residual: None,
            interior: (config.row.algorithm == RowAlgorithm::FtrlEuclid)
                .then(|| learner.interior()),
            x,
            y: y.clone(),
        };
        let keep_going = observer(&record);

        for (acc, &p) in best_col_cum.iter_mut().zip(&xa) {
            *acc += p;
        }
        realized_cum += payoff;

        if !keep_going {
            break;
        }
        let loss = game.right_mul(&y)?;
        learner = learner.update(&loss)?;
        prev_xa = xa;
        x = learner.strategy().clone();
    }

    Ok(RunParts {
        game,
        equilibrium,
        outcome: PolicyOutcome {
            switched: policy.switched(),
            switch_round: policy.switch_round(),
            alpha_clamp_events: policy.clamp_events(),
            lmwu_schedule_warnings: learner.schedule_warnings(),
        },
    })
}

/// Runs the repeated game and keeps the whole trajectory, with Lyapunov
/// residuals attached wherever the configuration matches an analysed case.
pub fn run(config: &RunConfig) -> Result<Trajectory> {
    let mut records = Vec::with_capacity(config.rounds.min(1 << 22) as usize);
    let parts = run_with_observer(config, |rec| {
        records.push(rec.clone());
        true
    })?;
    let mut trajectory = Trajectory {
        config: config.clone(),
        seed: config.seed,
        game: parts.game,
        equilibrium: parts.equilibrium,
        records,
        outcome: parts.outcome,
    };
    metrics::annotate_residuals(&mut trajectory);
    Ok(trajectory)
}

/// Mixes a run index into a master seed (splitmix64 finalizer), so sweeps
/// derive independent per-game seeds from one `--seed`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E3779B97F4A7C15_u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}
