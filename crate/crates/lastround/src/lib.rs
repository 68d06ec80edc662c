//! Repeated two-player zero-sum matrix games with one-sided information:
//! the column player knows the payoff matrix, the row player runs a no-regret
//! learner, and the informed side steers the dynamic to last-round
//! convergence while keeping its own regret under control.
//!
//! What's here:
//!
//! - [`game`] — payoff matrices, simplex vectors, equilibria, and the
//!   stateless primitives (`f_value`, best responses, relative entropy).
//! - [`solver`] — dense-simplex minimax solving with a max-min secondary
//!   program that finds fully-mixed equilibria whenever they exist, plus the
//!   closed-form 2×2 oracle.
//! - [`learners`] — the row player's update rules: MWU, OMD/FTRL with
//!   Euclidean regularizer, linear MWU, optimistic MWU, and AdaHedge.
//! - [`policies`] — the column player's side: LRCA (stabilise on odd rounds,
//!   exploit on even), LRCA-2 (two stabilising rounds for optimistic
//!   learners), the LRCA+AdaHedge combination with its regret-threshold
//!   switch, and the baseline columns.
//! - [`engine`] — the round loop, per-round records, deterministic seeding.
//! - [`metrics`] — instant/cumulative regret, per-block Lyapunov residuals,
//!   log-log rate fits.
//! - [`presets`] — the canned experiments behind `--preset`, each reporting
//!   named assertions with measured values and thresholds.
//!
//! Start with the examples:
//!
//! ```bash
//! cargo run --release --example solve_equilibrium
//! cargo run --release --example lrca_vs_mwu
//! cargo run --release --example lyapunov_residuals
//! cargo run --release --example regret_rates
//! cargo run --release --example adahedge_switch
//! cargo run --release --example divergence_control
//! cargo run --release --example export_trajectory
//! ```
//!
//! or drive everything from the thin CLI:
//!
//! ```bash
//! cargo run --release -- --game matching-pennies --row-algo mwu --mu 0.1 \
//!     --col-algo lrca --rounds 10000 --out runs/
//! cargo run --release -- --preset lemma1-check
//! ```

pub mod engine;
pub mod error;
pub mod game;
pub mod io;
pub mod learners;
pub mod metrics;
pub mod policies;
pub mod presets;
pub mod solver;

pub use engine::{
    derive_seed, generate_game, run, run_with_observer, ColumnConfig, GameSpec, PolicyOutcome,
    RoundRecord, RowConfig, RunConfig, RunParts, Trajectory,
};
pub use error::{Error, Result};
pub use game::{
    argmax, best_response_column, euclid_dist_sq, f_value, relative_entropy, Equilibrium,
    PayoffMatrix, SimplexVector,
};
pub use learners::{project_simplex, RowAlgorithm, RowLearner, StepSizeSchedule};
pub use metrics::{
    cumulative_regret, dyadic_checkpoints, fit_rate, instant_regret, lyapunov_residual_lmwu,
    lyapunov_residual_mwu, lyapunov_residual_omd, metric_at_checkpoints, RateFit, RateMetric,
};
pub use policies::{ColumnPolicy, ColumnPolicyKind, PolicyDecision, PolicyInput, StepMode};
pub use solver::{
    brute_force_minimax_2x2, detect_fully_mixed, max_min_row_strategy, solve_minimax,
    verify_equilibrium, FullyMixedReport, SolveMethod, SolverReport, FULLY_MIXED_TOL,
};
