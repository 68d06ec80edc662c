//! The informed column player's policies.
//!
//! All of them see exactly one thing per round: the previous round's payoff
//! vector `x_{t-1}ᵀA` (plus `y*`, `v` computed up front from the matrix).
//! LRCA stabilises on odd rounds by playing `y*` and exploits on even rounds
//! by mixing toward the row player's best-response column with a gap-scaled
//! weight; LRCA-2 inserts a second stabilising round for optimistic learners.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{argmax, Equilibrium, SimplexVector};
use crate::learners::{RowAlgorithm, RowLearner, StepSizeSchedule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnPolicyKind {
    Lrca,
    Lrca2,
    LrcaAdaHedge,
    FixedMinimax,
    BestResponseLast,
    MwuColumn,
}

/// Exploit-step scaling for LRCA's even rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepMode {
    /// `α = (f − v) / max(n/4, 2)`: works against every learner considered.
    Robust,
    /// `α = (f − v) / (μ_t f)`: tuned to an MWU row with known step size.
    OptimalMwu,
    /// `α = (f − v) / (ln(t) f)`: damped against erratic step sizes.
    LogDamped,
}

/// Per-round input assembled by the engine.
#[derive(Clone, Debug)]
pub struct PolicyInput<'a> {
    /// Round number, 1-based.
    pub t: u64,
    /// Previous round's payoff vector `x_{t-1}ᵀA` (round 1: the initial
    /// strategy's payoff vector).
    pub feedback: &'a [f64],
    /// Column player's undivided cumulative regret over completed rounds.
    pub cumulative_regret: f64,
    /// Row learner's `μ_t`, consumed only by [`StepMode::OptimalMwu`].
    pub row_mu: f64,
}

#[derive(Clone, Debug)]
pub struct PolicyDecision {
    pub strategy: SimplexVector,
    /// Exploit weight used this round, when one was.
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColumnPolicy {
    kind: ColumnPolicyKind,
    step_mode: StepMode,
    equilibrium: Equilibrium,
    n_rows: usize,
    round: u64,
    /// Latch for the LRCA+AdaHedge combination; never resets.
    switched: bool,
    switch_round: Option<u64>,
    adahedge: Option<RowLearner>,
    /// MWU baseline state over columns (log-domain handled by RowLearner
    /// would fight the gain sign, so plain weights are kept here).
    mwu_log_weights: Option<Vec<f64>>,
    mwu_mu: f64,
    cumulative_regret: f64,
    clamp_events: u64,
}

impl ColumnPolicy {
    pub fn new(
        kind: ColumnPolicyKind,
        step_mode: StepMode,
        equilibrium: Equilibrium,
        n_rows: usize,
        mwu_mu: f64,
    ) -> Self {
        let m = equilibrium.col_strategy.dim();
        // deliberately off-centre start for the MWU baseline; a uniform start
        // on a symmetric game is a fixed point of the self-play dynamic and
        // would show nothing
        let mwu_log_weights = (kind == ColumnPolicyKind::MwuColumn)
            .then(|| (0..m).map(|j| ((j + 1) as f64).ln()).collect());
        Self {
            kind,
            step_mode,
            equilibrium,
            n_rows,
            round: 0,
            switched: false,
            switch_round: None,
            adahedge: None,
            mwu_log_weights,
            mwu_mu,
            cumulative_regret: 0.0,
            clamp_events: 0,
        }
    }

    pub fn kind(&self) -> ColumnPolicyKind {
        self.kind
    }

    pub fn switched(&self) -> bool {
        self.switched
    }

    pub fn switch_round(&self) -> Option<u64> {
        self.switch_round
    }

    pub fn clamp_events(&self) -> u64 {
        self.clamp_events
    }

    pub fn equilibrium(&self) -> &Equilibrium {
        &self.equilibrium
    }

    /// Decides `y_t`, returning the advanced policy state.
    pub fn step(&self, input: &PolicyInput<'_>) -> Result<(Self, PolicyDecision)> {
        let m = self.equilibrium.col_strategy.dim();
        if input.feedback.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: input.feedback.len(),
            });
        }
        let mut next = self.clone();
        next.round = input.t;
        next.cumulative_regret = input.cumulative_regret;
        let decision = match self.kind {
            ColumnPolicyKind::Lrca => next.lrca(input)?,
            ColumnPolicyKind::Lrca2 => next.lrca2(input)?,
            ColumnPolicyKind::LrcaAdaHedge => next.combined(input)?,
            ColumnPolicyKind::FixedMinimax => PolicyDecision {
                strategy: self.equilibrium.col_strategy.clone(),
                alpha: None,
            },
            ColumnPolicyKind::BestResponseLast => PolicyDecision {
                strategy: SimplexVector::vertex(m, argmax(input.feedback)),
                alpha: None,
            },
            ColumnPolicyKind::MwuColumn => next.mwu_column(input)?,
        };
        Ok((next, decision))
    }

    fn exploit_alpha(&mut self, f: f64, v: f64, t: u64, row_mu: f64) -> f64 {
        let raw = match self.step_mode {
            StepMode::Robust => (f - v) / (self.n_rows as f64 / 4.0).max(2.0),
            StepMode::OptimalMwu => {
                if row_mu * f > 0.0 {
                    (f - v) / (row_mu * f)
                } else {
                    0.0
                }
            }
            StepMode::LogDamped => {
                let damp = (t.max(2) as f64).ln();
                if f > 0.0 {
                    (f - v) / (damp * f)
                } else {
                    0.0
                }
            }
        };
        let alpha = raw.clamp(0.0, 1.0);
        if alpha != raw {
            self.clamp_events += 1;
        }
        alpha
    }

    fn exploit(&mut self, input: &PolicyInput<'_>, alpha_override: Option<f64>) -> Result<PolicyDecision> {
        let f = input.feedback[argmax(input.feedback)];
        let e = argmax(input.feedback);
        let v = self.equilibrium.value;
        let alpha = match alpha_override {
            Some(a) => {
                let clamped = a.clamp(0.0, 1.0);
                if clamped != a {
                    self.clamp_events += 1;
                }
                clamped
            }
            None => self.exploit_alpha(f, v, input.t, input.row_mu),
        };
        let m = self.equilibrium.col_strategy.dim();
        let strategy = SimplexVector::convex(
            &self.equilibrium.col_strategy,
            &SimplexVector::vertex(m, e),
            alpha,
        )?;
        Ok(PolicyDecision {
            strategy,
            alpha: Some(alpha),
        })
    }

    fn lrca(&mut self, input: &PolicyInput<'_>) -> Result<PolicyDecision> {
        if input.t % 2 == 1 {
            Ok(PolicyDecision {
                strategy: self.equilibrium.col_strategy.clone(),
                alpha: None,
            })
        } else {
            self.exploit(input, None)
        }
    }

    /// Two stabilising rounds per block: exploit only on `t ≡ 1 (mod 3)`,
    /// `t >= 4`, with the gap-ratio weight `(f − v)/f`.
    fn lrca2(&mut self, input: &PolicyInput<'_>) -> Result<PolicyDecision> {
        if input.t % 3 == 1 && input.t >= 4 {
            let f = input.feedback[argmax(input.feedback)];
            let v = self.equilibrium.value;
            let alpha = if f > 0.0 { (f - v) / f } else { 0.0 };
            self.exploit(input, Some(alpha))
        } else {
            Ok(PolicyDecision {
                strategy: self.equilibrium.col_strategy.clone(),
                alpha: None,
            })
        }
    }

    fn combined(&mut self, input: &PolicyInput<'_>) -> Result<PolicyDecision> {
        let n = self.n_rows as f64;
        let threshold = (n * n.ln()).sqrt() * (input.t as f64).powf(0.75);
        if !self.switched && input.cumulative_regret > threshold {
            self.switched = true;
            self.switch_round = Some(input.t);
        }
        if !self.switched {
            return self.lrca(input);
        }
        // AdaHedge over columns from the switch round onward; the column
        // player maximises payoff, AdaHedge minimises loss
        let m = self.equilibrium.col_strategy.dim();
        let mut hedge = match self.adahedge.take() {
            Some(h) => h,
            None => RowLearner::new(
                RowAlgorithm::AdaHedge,
                m,
                StepSizeSchedule::Constant { mu: 0.0 },
            )?,
        };
        if input.t >= 2 {
            let loss: Vec<f64> = input.feedback.iter().map(|&p| 1.0 - p).collect();
            hedge = hedge.update(&loss)?;
        }
        let strategy = hedge.strategy().clone();
        self.adahedge = Some(hedge);
        Ok(PolicyDecision {
            strategy,
            alpha: None,
        })
    }

    fn mwu_column(&mut self, input: &PolicyInput<'_>) -> Result<PolicyDecision> {
        let lw = self
            .mwu_log_weights
            .as_mut()
            .expect("MwuColumn state initialised in new()");
        if input.t >= 2 {
            // gain sign: payoff-maximising multiplicative update
            for (w, &p) in lw.iter_mut().zip(input.feedback) {
                *w += self.mwu_mu * p;
            }
            let max = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for w in lw.iter_mut() {
                *w -= max;
            }
        }
        let strategy = SimplexVector::from_unnormalized(lw.iter().map(|&w| w.exp()).collect())?;
        Ok(PolicyDecision {
            strategy,
            alpha: None,
        })
    }
}
