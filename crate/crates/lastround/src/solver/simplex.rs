//! Dense tableau simplex with Bland's rule.
//!
//! Sized for the small dense programs a matrix game produces (tens of rows);
//! no factorization, no sparsity, anti-cycling by Bland throughout.

use crate::error::{Error, Result};

const TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;

pub(crate) struct LpSolution {
    /// Values of the structural variables.
    pub z: Vec<f64>,
    pub objective: f64,
    /// One multiplier per constraint row, non-negative for binding `<=` rows.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>, // each row: ncols coefficients + rhs
    cost: Vec<f64>,      // reduced costs + objective value at the end
    basis: Vec<usize>,
    ncols: usize,
    enterable: Vec<bool>,
    pivots: usize,
    cap: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= piv;
        }
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c];
            if factor != 0.0 {
                for j in 0..=self.ncols {
                    self.rows[i][j] -= factor * self.rows[r][j];
                }
                self.rows[i][c] = 0.0;
            }
        }
        let factor = self.cost[c];
        if factor != 0.0 {
            for j in 0..=self.ncols {
                self.cost[j] -= factor * self.rows[r][j];
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Runs Bland-rule pivots until no reduced cost is positive.
    fn optimize(&mut self) -> Result<()> {
        loop {
            // entering: lowest-index column with positive reduced cost
            let mut enter = None;
            for j in 0..self.ncols {
                if self.enterable[j] && self.cost[j] > TOL {
                    enter = Some(j);
                    break;
                }
            }
            let Some(c) = enter else { return Ok(()) };
            // leaving: min ratio, ties broken by lowest basis index
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12
                                || ((ratio - br).abs() <= 1e-12
                                    && self.basis[i] < self.basis[bi])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::Infeasible("objective unbounded".into()));
            };
            if self.pivots >= self.cap {
                return Err(Error::SolverStalled(self.cap));
            }
            self.pivot(r, c);
        }
    }
}

/// `max c·z  s.t.  w·z <= b, z >= 0` with `b >= 0`, so the slack basis starts
/// feasible. Returns structural values and the duals of the `<=` rows.
pub(crate) fn solve_standard_max(
    c: &[f64],
    w: &[Vec<f64>],
    b: &[f64],
    cap: usize,
) -> Result<LpSolution> {
    let nv = c.len();
    let nr = w.len();
    let ncols = nv + nr;
    let mut rows = Vec::with_capacity(nr);
    for (i, wrow) in w.iter().enumerate() {
        debug_assert!(b[i] >= 0.0);
        let mut row = vec![0.0; ncols + 1];
        row[..nv].copy_from_slice(wrow);
        row[nv + i] = 1.0;
        row[ncols] = b[i];
        rows.push(row);
    }
    let mut cost = vec![0.0; ncols + 1];
    cost[..nv].copy_from_slice(c);
    let mut tab = Tableau {
        rows,
        cost,
        basis: (nv..nv + nr).collect(),
        ncols,
        enterable: vec![true; ncols],
        pivots: 0,
        cap,
    };
    tab.optimize()?;
    let mut z = vec![0.0; nv];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < nv {
            z[bv] = tab.rhs(i).max(0.0);
        }
    }
    let duals = (0..nr).map(|i| -tab.cost[nv + i]).collect();
    Ok(LpSolution {
        z,
        objective: -tab.cost[ncols],
        duals,
        pivots: tab.pivots,
    })
}

/// `max c·z  s.t.  a_ub·z <= b_ub, a_eq·z = b_eq, z >= 0` via two-phase
/// simplex with artificials on the equality rows (and on `<=` rows whose
/// right-hand side is negative).
pub(crate) fn solve_general_max(
    c: &[f64],
    a_ub: &[Vec<f64>],
    b_ub: &[f64],
    a_eq: &[Vec<f64>],
    b_eq: &[f64],
    cap: usize,
) -> Result<LpSolution> {
    let nv = c.len();
    let nr = a_ub.len() + a_eq.len();
    let n_slack = a_ub.len();
    // artificials: every eq row plus ub rows with negative rhs
    let needs_art: Vec<bool> = b_ub
        .iter()
        .map(|&bi| bi < 0.0)
        .chain(std::iter::repeat(true).take(a_eq.len()))
        .collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let ncols = nv + n_slack + n_art;

    let mut rows = Vec::with_capacity(nr);
    let mut art_cursor = 0;
    let mut art_rows = Vec::new();
    for i in 0..nr {
        let (coeffs, rhs, slack_sign) = if i < n_slack {
            let neg = b_ub[i] < 0.0;
            let sign = if neg { -1.0 } else { 1.0 };
            (
                a_ub[i].iter().map(|&x| sign * x).collect::<Vec<_>>(),
                sign * b_ub[i],
                sign,
            )
        } else {
            let k = i - n_slack;
            let sign = if b_eq[k] < 0.0 { -1.0 } else { 1.0 };
            (
                a_eq[k].iter().map(|&x| sign * x).collect::<Vec<_>>(),
                sign * b_eq[k],
                0.0,
            )
        };
        let mut row = vec![0.0; ncols + 1];
        row[..nv].copy_from_slice(&coeffs);
        if i < n_slack {
            row[nv + i] = slack_sign;
        }
        if needs_art[i] {
            row[nv + n_slack + art_cursor] = 1.0;
            art_cursor += 1;
            art_rows.push(i);
        }
        row[ncols] = rhs;
        rows.push(row);
    }

    // basis: slack where it carries the row, artificial otherwise
    let mut basis = vec![0usize; nr];
    let mut art_cursor = 0;
    for i in 0..nr {
        if needs_art[i] {
            basis[i] = nv + n_slack + art_cursor;
            art_cursor += 1;
        } else {
            basis[i] = nv + i;
        }
    }

    // phase 1: maximize -sum(artificials); price out basic artificials
    let mut cost = vec![0.0; ncols + 1];
    for &i in &art_rows {
        for j in 0..=ncols {
            cost[j] += rows[i][j];
        }
    }
    for k in 0..n_art {
        cost[nv + n_slack + k] = 0.0;
    }
    let mut enterable = vec![true; ncols];
    for k in 0..n_art {
        enterable[nv + n_slack + k] = false;
    }
    let mut tab = Tableau {
        rows,
        cost,
        basis,
        ncols,
        enterable,
        pivots: 0,
        cap,
    };
    if n_art > 0 {
        tab.optimize()?;
        let infeas = -tab.cost[ncols];
        if infeas.abs() > FEAS_TOL {
            return Err(Error::Infeasible(format!(
                "phase-1 residual {infeas:.3e}"
            )));
        }
        // drive surviving artificials out of the basis where possible
        for r in 0..nr {
            if tab.basis[r] >= nv + n_slack {
                if let Some(c) = (0..nv + n_slack)
                    .find(|&j| tab.enterable[j] && tab.rows[r][j].abs() > TOL)
                {
                    tab.pivot(r, c);
                }
            }
        }
    }

    // phase 2: real objective priced against the current basis
    let mut cost = vec![0.0; ncols + 1];
    cost[..nv].copy_from_slice(c);
    for i in 0..nr {
        let cb = if tab.basis[i] < nv { c[tab.basis[i]] } else { 0.0 };
        if cb != 0.0 {
            for j in 0..=ncols {
                cost[j] -= cb * tab.rows[i][j];
            }
        }
    }
    for i in 0..nr {
        cost[tab.basis[i]] = 0.0;
    }
    tab.cost = cost;
    tab.optimize()?;

    let mut z = vec![0.0; nv];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < nv {
            z[bv] = tab.rhs(i).max(0.0);
        }
    }
    let duals = (0..n_slack).map(|i| -tab.cost[nv + i]).collect();
    Ok(LpSolution {
        z,
        objective: -tab.cost[ncols],
        duals,
        pivots: tab.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_max_small() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6
        let sol = solve_standard_max(
            &[1.0, 1.0],
            &[vec![1.0, 2.0], vec![3.0, 1.0]],
            &[4.0, 6.0],
            100,
        )
        .unwrap();
        assert!((sol.z[0] - 1.6).abs() < 1e-9);
        assert!((sol.z[1] - 1.2).abs() < 1e-9);
        assert!((sol.objective - 2.8).abs() < 1e-9);
        // duals satisfy strong duality: 4*d0 + 6*d1 = 2.8
        let dual_obj = 4.0 * sol.duals[0] + 6.0 * sol.duals[1];
        assert!((dual_obj - 2.8).abs() < 1e-9);
    }

    #[test]
    fn general_max_with_equality() {
        // max s s.t. x0 + x1 = 1, s <= x0, s <= x1  -> s = 1/2
        let sol = solve_general_max(
            &[0.0, 0.0, 1.0],
            &[vec![-1.0, 0.0, 1.0], vec![0.0, -1.0, 1.0]],
            &[0.0, 0.0],
            &[vec![1.0, 1.0, 0.0]],
            &[1.0],
            100,
        )
        .unwrap();
        assert!((sol.objective - 0.5).abs() < 1e-9);
        assert!((sol.z[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn general_max_infeasible() {
        // x <= 1, x = 2
        let r = solve_general_max(
            &[1.0],
            &[vec![1.0]],
            &[1.0],
            &[vec![1.0]],
            &[2.0],
            100,
        );
        assert!(matches!(r, Err(Error::Infeasible(_))));
    }
}
