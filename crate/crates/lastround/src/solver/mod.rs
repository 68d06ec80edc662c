//! Minimax equilibrium computation for dense matrix games.
//!
//! The informed column player needs `(y*, v)` exactly once per game, so a
//! dense primal simplex on the scaled zero-sum pair is plenty: shift the
//! matrix to `A + 1` (making the value positive), solve
//! `max 1ᵀp s.t. (A+1)ᵀ p <= 1`, and read the column strategy off the duals.
//! A secondary program then picks, among optimal row strategies, the one
//! maximising its smallest component so fully-mixed equilibria are found
//! whenever they exist.

mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Equilibrium, PayoffMatrix, SimplexVector};

/// Components above this count as strictly positive when classifying an
/// equilibrium as fully mixed.
pub const FULLY_MIXED_TOL: f64 = 1e-9;

/// Slack added to the optimal-face constraint of the secondary program so
/// rounding in `v` cannot make it infeasible.
const FACE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    SimplexLp,
    VertexEnumerationOracle,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverReport {
    pub equilibrium: Equilibrium,
    /// `|max_j (x*ᵀA)_j − min_i (Ay*)_i|`.
    pub duality_gap: f64,
    /// Total simplex pivots across the primary and secondary programs.
    pub iterations: usize,
    pub method: SolveMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullyMixedReport {
    pub row_fully_mixed: bool,
    pub col_fully_mixed: bool,
    /// Whether the optimal face contains a row strategy with every component
    /// above tolerance (decided by the secondary max-min program).
    pub interior_row_equilibrium_exists: bool,
}

fn pivot_cap(n: usize, m: usize) -> usize {
    10 * (n + m) * (n + m)
}

/// Solves the game by linear programming and returns a verified equilibrium.
///
/// Among optimal row strategies the reported `x*` maximises `min_i x(i)`,
/// so `row_fully_mixed` is set whenever any fully-mixed optimum exists.
pub fn solve_minimax(a: &PayoffMatrix) -> Result<SolverReport> {
    let (n, m) = (a.n_rows(), a.n_cols());
    let cap = pivot_cap(n, m);

    // max 1ᵀp s.t. (A+1)ᵀ p <= 1: optimal value is 1/(v+1).
    let w: Vec<Vec<f64>> = (0..m)
        .map(|j| (0..n).map(|i| a.get(i, j) + 1.0).collect())
        .collect();
    let sol = simplex::solve_standard_max(&vec![1.0; n], &w, &vec![1.0; m], cap)?;
    if sol.objective <= 0.0 {
        return Err(Error::Infeasible("degenerate scaled program".into()));
    }
    let v = (1.0 / sol.objective - 1.0).clamp(0.0, 1.0);
    let x_primary = SimplexVector::from_unnormalized(sol.z.clone())?;
    let y = SimplexVector::from_unnormalized(sol.duals.clone())?;

    let (x, extra_pivots) = match max_min_row_strategy(a, v) {
        Ok((xmm, _, p)) => (xmm, p),
        Err(_) => (x_primary, 0),
    };

    let row_fully_mixed = x.min_component() > FULLY_MIXED_TOL;
    let col_fully_mixed = y.min_component() > FULLY_MIXED_TOL;
    let xa = a.left_mul(&x)?;
    let ay = a.right_mul(&y)?;
    let hi = xa.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ay.iter().copied().fold(f64::INFINITY, f64::min);

    Ok(SolverReport {
        equilibrium: Equilibrium {
            row_strategy: x,
            col_strategy: y,
            value: v,
            row_fully_mixed,
            col_fully_mixed,
        },
        duality_gap: (hi - lo).abs(),
        iterations: sol.pivots + extra_pivots,
        method: SolveMethod::SimplexLp,
    })
}

/// Maximises `min_i x(i)` over the optimal face `{x ∈ Δ_n : Aᵀx <= v}`.
/// Returns the maximizer, the attained min component, and pivot count.
pub fn max_min_row_strategy(
    a: &PayoffMatrix,
    v: f64,
) -> Result<(SimplexVector, f64, usize)> {
    let (n, m) = (a.n_rows(), a.n_cols());
    // variables: x_0..x_{n-1}, s
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut a_ub = Vec::with_capacity(m + n);
    let mut b_ub = Vec::with_capacity(m + n);
    for j in 0..m {
        let mut row = vec![0.0; n + 1];
        for (i, r) in row.iter_mut().enumerate().take(n) {
            *r = a.get(i, j);
        }
        a_ub.push(row);
        b_ub.push(v + FACE_SLACK);
    }
    for i in 0..n {
        let mut row = vec![0.0; n + 1];
        row[i] = -1.0;
        row[n] = 1.0;
        a_ub.push(row);
        b_ub.push(0.0);
    }
    let mut a_eq_row = vec![1.0; n + 1];
    a_eq_row[n] = 0.0;
    let sol = simplex::solve_general_max(
        &c,
        &a_ub,
        &b_ub,
        &[a_eq_row],
        &[1.0],
        pivot_cap(n + 1, m + n),
    )?;
    let x = SimplexVector::from_unnormalized(sol.z[..n].to_vec())?;
    Ok((x, sol.objective, sol.pivots))
}

/// Checks the equilibrium inequalities
/// `max_j (x*ᵀA)_j <= v + tol` and `min_i (Ay*)_i >= v − tol`.
pub fn verify_equilibrium(a: &PayoffMatrix, eq: &Equilibrium, tol: f64) -> Result<bool> {
    let xa = a.left_mul(&eq.row_strategy)?;
    let ay = a.right_mul(&eq.col_strategy)?;
    let hi = xa.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ay.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(hi <= eq.value + tol && lo >= eq.value - tol)
}

/// Classifies an equilibrium and decides, via the secondary program, whether
/// the game admits any fully-mixed row equilibrium at all.
pub fn detect_fully_mixed(
    a: &PayoffMatrix,
    eq: &Equilibrium,
    tol: f64,
) -> Result<FullyMixedReport> {
    let row_fully_mixed = eq.row_strategy.min_component() > tol;
    let col_fully_mixed = eq.col_strategy.min_component() > tol;
    let interior = match max_min_row_strategy(a, eq.value) {
        Ok((_, s, _)) => s > tol,
        Err(_) => false,
    };
    Ok(FullyMixedReport {
        row_fully_mixed,
        col_fully_mixed,
        interior_row_equilibrium_exists: interior,
    })
}

/// Closed-form 2×2 equilibrium: pure saddle scan first, indifference mix
/// otherwise. Independent of the simplex path, so it doubles as the test
/// oracle for `solve_minimax`.
pub fn brute_force_minimax_2x2(a: &PayoffMatrix) -> Result<Equilibrium> {
    if a.n_rows() != 2 || a.n_cols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: a.n_rows().max(a.n_cols()),
        });
    }
    // pure saddle: entry maximal in its row (column best response) and
    // minimal in its column (row best response); lexicographic tie-break
    for i in 0..2 {
        for j in 0..2 {
            let e = a.get(i, j);
            if e >= a.get(i, 1 - j) && e <= a.get(1 - i, j) {
                return Ok(make_eq(
                    SimplexVector::vertex(2, i),
                    SimplexVector::vertex(2, j),
                    e,
                ));
            }
        }
    }
    let (a00, a01, a10, a11) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let denom = a00 - a01 - a10 + a11;
    // with no pure saddle the indifference solution is interior and denom != 0
    let p = ((a11 - a10) / denom).clamp(0.0, 1.0);
    let q = ((a11 - a01) / denom).clamp(0.0, 1.0);
    let v = (a00 * a11 - a01 * a10) / denom;
    Ok(make_eq(
        SimplexVector::new(vec![p, 1.0 - p])?,
        SimplexVector::new(vec![q, 1.0 - q])?,
        v.clamp(0.0, 1.0),
    ))
}

fn make_eq(x: SimplexVector, y: SimplexVector, v: f64) -> Equilibrium {
    let row_fully_mixed = x.min_component() > FULLY_MIXED_TOL;
    let col_fully_mixed = y.min_component() > FULLY_MIXED_TOL;
    Equilibrium {
        row_strategy: x,
        col_strategy: y,
        value: v,
        row_fully_mixed,
        col_fully_mixed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: &[Vec<f64>]) -> PayoffMatrix {
        PayoffMatrix::from_rows(rows).unwrap()
    }

    fn derived() -> PayoffMatrix {
        mat(&[vec![0.8, 0.2], vec![0.3, 0.6]])
    }

    #[test]
    fn brute_force_derived_game() {
        let eq = brute_force_minimax_2x2(&derived()).unwrap();
        assert!((eq.value - 7.0 / 15.0).abs() < 1e-15);
        assert!((eq.row_strategy.get(0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((eq.col_strategy.get(0) - 4.0 / 9.0).abs() < 1e-15);
        assert!(eq.row_fully_mixed && eq.col_fully_mixed);
    }

    #[test]
    fn brute_force_dominated_row() {
        // row 2 pays zero everywhere, so the row player sits on it
        let eq = brute_force_minimax_2x2(&mat(&[vec![1.0, 1.0], vec![0.0, 0.0]])).unwrap();
        assert_eq!(eq.value, 0.0);
        assert_eq!(eq.row_strategy.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn brute_force_matching_pennies() {
        let eq = brute_force_minimax_2x2(&mat(&[vec![1.0, 0.0], vec![0.0, 1.0]])).unwrap();
        assert!((eq.value - 0.5).abs() < 1e-15);
        assert_eq!(eq.row_strategy.as_slice(), &[0.5, 0.5]);
        assert_eq!(eq.col_strategy.as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn brute_force_rejects_other_shapes() {
        let a = mat(&[vec![0.5, 0.5, 0.5], vec![0.5, 0.5, 0.5]]);
        assert!(brute_force_minimax_2x2(&a).is_err());
    }

    #[test]
    fn solve_matching_pennies() {
        let rep = solve_minimax(&mat(&[vec![1.0, 0.0], vec![0.0, 1.0]])).unwrap();
        assert!((rep.equilibrium.value - 0.5).abs() < 1e-12);
        assert!((rep.equilibrium.row_strategy.get(0) - 0.5).abs() < 1e-12);
        assert!((rep.equilibrium.col_strategy.get(0) - 0.5).abs() < 1e-12);
        assert!(rep.duality_gap <= 1e-9);
    }

    #[test]
    fn solve_constant_game() {
        let rep = solve_minimax(&mat(&[vec![0.5, 0.5], vec![0.5, 0.5]])).unwrap();
        assert!((rep.equilibrium.value - 0.5).abs() < 1e-12);
        assert!(rep.duality_gap <= 1e-9);
        assert!(verify_equilibrium(&mat(&[vec![0.5, 0.5], vec![0.5, 0.5]]), &rep.equilibrium, 1e-9).unwrap());
        // the max-min selection lands on the uniform row strategy
        assert!((rep.equilibrium.row_strategy.get(0) - 0.5).abs() < 1e-9);
        assert!(rep.equilibrium.row_fully_mixed);
    }

    #[test]
    fn solve_derived_matches_oracle() {
        let rep = solve_minimax(&derived()).unwrap();
        let oracle = brute_force_minimax_2x2(&derived()).unwrap();
        assert!((rep.equilibrium.value - oracle.value).abs() < 1e-12);
        assert!((rep.equilibrium.row_strategy.get(0) - 1.0 / 3.0).abs() < 1e-9);
        assert!((rep.equilibrium.col_strategy.get(0) - 4.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn verify_rejects_exploitable_strategy() {
        let a = mat(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let bad = Equilibrium {
            row_strategy: SimplexVector::vertex(2, 0),
            col_strategy: SimplexVector::new(vec![0.5, 0.5]).unwrap(),
            value: 0.5,
            row_fully_mixed: false,
            col_fully_mixed: true,
        };
        assert!(!verify_equilibrium(&a, &bad, 1e-9).unwrap());
        // vacuous tolerance accepts anything with entries in [0,1]
        assert!(verify_equilibrium(&a, &bad, 1.0).unwrap());
    }

    #[test]
    fn detect_on_derived_game() {
        let rep = solve_minimax(&derived()).unwrap();
        let fm = detect_fully_mixed(&derived(), &rep.equilibrium, FULLY_MIXED_TOL).unwrap();
        assert!(fm.row_fully_mixed && fm.col_fully_mixed && fm.interior_row_equilibrium_exists);
    }

    #[test]
    fn detect_duplicate_rows_dominant_column() {
        // both rows identical: every row mix is optimal, the column player
        // takes the dominant first column, v = 1
        let a = mat(&[vec![1.0, 0.5], vec![1.0, 0.5]]);
        let rep = solve_minimax(&a).unwrap();
        assert!((rep.equilibrium.value - 1.0).abs() < 1e-9);
        assert!(!rep.equilibrium.col_fully_mixed);
        assert_eq!(rep.equilibrium.col_strategy.get(0), 1.0);
        let fm = detect_fully_mixed(&a, &rep.equilibrium, FULLY_MIXED_TOL).unwrap();
        assert!(fm.row_fully_mixed && fm.interior_row_equilibrium_exists);
        assert!(!fm.col_fully_mixed);
        assert!(verify_equilibrium(&a, &rep.equilibrium, 1e-9).unwrap());
    }

    #[test]
    fn detect_constant_game_uniform() {
        let a = mat(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let eq = Equilibrium {
            row_strategy: SimplexVector::uniform(2),
            col_strategy: SimplexVector::uniform(2),
            value: 0.5,
            row_fully_mixed: true,
            col_fully_mixed: true,
        };
        let fm = detect_fully_mixed(&a, &eq, FULLY_MIXED_TOL).unwrap();
        assert!(fm.row_fully_mixed && fm.col_fully_mixed && fm.interior_row_equilibrium_exists);
    }

    #[test]
    fn random_2x2_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = mat(&[
                vec![rng.gen::<f64>(), rng.gen::<f64>()],
                vec![rng.gen::<f64>(), rng.gen::<f64>()],
            ]);
            let lp = solve_minimax(&a).unwrap();
            let oracle = brute_force_minimax_2x2(&a).unwrap();
            assert!(
                (lp.equilibrium.value - oracle.value).abs() < 1e-9,
                "lp {} oracle {}",
                lp.equilibrium.value,
                oracle.value
            );
        }
    }

    #[test]
    fn scale_shift_preserves_equilibrium() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = mat(&[
                vec![rng.gen(), rng.gen(), rng.gen()],
                vec![rng.gen(), rng.gen(), rng.gen()],
                vec![rng.gen(), rng.gen(), rng.gen()],
            ]);
            let rep = solve_minimax(&a).unwrap();
            let c = 0.7;
            let rows: Vec<Vec<f64>> = (0..3)
                .map(|i| (0..3).map(|j| (a.get(i, j) + c) / (1.0 + c)).collect())
                .collect();
            let shifted = mat(&rows);
            let eq = Equilibrium {
                value: (rep.equilibrium.value + c) / (1.0 + c),
                ..rep.equilibrium.clone()
            };
            assert!(verify_equilibrium(&shifted, &eq, 1e-9).unwrap());
        }
    }
}
