//! Self-contained dense simplex solver with Bland's anti-cycling rule.
//!
//! The programs solved in this crate have a handful of variables and rows,
//! so a two-phase tableau method is entirely adequate and keeps the solver
//! dependency-free and deterministic (a requirement: identical inputs must
//! yield bit-identical vertices).

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `maximize c^T x` subject to the listed rows and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub maximize: Vec<f64>,
    pub rows: Vec<(Vec<f64>, Relation, f64)>,
}

#[derive(Debug, Clone)]
pub struct VertexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

const PIVOT_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 100_000;

struct Tableau {
    /// Row-major coefficients, one extra trailing column for the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let d = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= d;
        }
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r != row && other[col].abs() > 0.0 {
                let f = other[col];
                for (v, p) in other.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximize, with Bland's rule: entering column is the lowest-indexed
    /// improving one, leaving row breaks ratio ties by lowest basis index.
    /// `allowed` masks columns that may enter. Returns the objective row.
    fn run(&mut self, cost: &[f64], allowed: &[bool]) -> Result<(Vec<f64>, f64)> {
        let mut z = vec![0.0; self.n_cols];
        z[..cost.len()].copy_from_slice(cost);
        let mut z_val = 0.0;
        for (r, &b) in self.basis.iter().enumerate() {
            if z[b].abs() > 0.0 {
                let f = z[b];
                for (zv, tv) in z.iter_mut().zip(&self.rows[r][..self.n_cols]) {
                    *zv -= f * tv;
                }
                z_val -= f * self.rows[r][self.n_cols];
            }
        }
        for _ in 0..MAX_PIVOTS {
            let entering = (0..self.n_cols).find(|&j| allowed[j] && z[j] > PIVOT_TOL);
            let Some(col) = entering else {
                return Ok((z, -z_val));
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][col];
                if a > PIVOT_TOL {
                    let ratio = self.rows[r][self.n_cols] / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - PIVOT_TOL
                                || (ratio < lratio + PIVOT_TOL
                                    && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Err(Error::LpUnbounded);
            };
            self.pivot(row, col);
            let f = z[col];
            if f.abs() > 0.0 {
                for (zv, tv) in z.iter_mut().zip(&self.rows[row][..self.n_cols]) {
                    *zv -= f * tv;
                }
                z_val -= f * self.rows[row][self.n_cols];
            }
        }
        Err(Error::LpInfeasible)
    }
}

/// Solve the program to an optimal vertex. Deterministic for identical
/// inputs. Errors with [`Error::LpInfeasible`] or [`Error::LpUnbounded`].
pub fn solve(lp: &LinearProgram) -> Result<VertexSolution> {
    let n = lp.maximize.len();
    let m = lp.rows.len();

    let mut n_slack = 0;
    for (_, rel, _) in &lp.rows {
        if *rel != Relation::Eq {
            n_slack += 1;
        }
    }
    let n_structural = n + n_slack;
    let n_cols = n_structural + m; // one artificial per row, most unused
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificial = vec![false; n_cols];

    let mut slack_at = n;
    for (r, (coefs, rel, rhs)) in lp.rows.iter().enumerate() {
        assert_eq!(coefs.len(), n, "row {r} has wrong arity");
        let flip = *rhs < 0.0;
        let sign = if flip { -1.0 } else { 1.0 };
        let mut row = vec![0.0; n_cols + 1];
        for (j, &a) in coefs.iter().enumerate() {
            row[j] = sign * a;
        }
        row[n_cols] = sign * rhs;
        let rel = match (rel, flip) {
            (Relation::Eq, _) => Relation::Eq,
            (Relation::Le, false) | (Relation::Ge, true) => Relation::Le,
            (Relation::Le, true) | (Relation::Ge, false) => Relation::Ge,
        };
        let basic = match rel {
            Relation::Le => {
                row[slack_at] = 1.0;
                slack_at += 1;
                slack_at - 1
            }
            Relation::Ge => {
                row[slack_at] = -1.0;
                slack_at += 1;
                let art = n_structural + r;
                row[art] = 1.0;
                artificial[art] = true;
                art
            }
            Relation::Eq => {
                let art = n_structural + r;
                row[art] = 1.0;
                artificial[art] = true;
                art
            }
        };
        rows.push(row);
        basis.push(basic);
    }

    let mut t = Tableau {
        rows,
        basis,
        n_cols,
    };

    if artificial.iter().any(|&a| a) {
        let mut phase1 = vec![0.0; n_cols];
        for (j, &a) in artificial.iter().enumerate() {
            if a {
                phase1[j] = -1.0;
            }
        }
        let allowed = vec![true; n_cols];
        let (_, value) = t.run(&phase1, &allowed)?;
        if value < -1e-7 {
            return Err(Error::LpInfeasible);
        }
        // drive surviving artificial basics out, or drop redundant rows
        let mut r = 0;
        while r < t.rows.len() {
            if artificial[t.basis[r]] {
                let col = (0..n_structural).find(|&j| t.rows[r][j].abs() > PIVOT_TOL);
                match col {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let mut allowed = vec![true; n_cols];
    for (j, &a) in artificial.iter().enumerate() {
        if a {
            allowed[j] = false;
        }
    }
    let (_, objective) = t.run(&lp.maximize, &allowed)?;

    let mut x = vec![0.0; n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rows[r][t.n_cols];
        }
    }
    Ok(VertexSolution { x, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_mixed_program() {
        // max x + 2y  s.t.  x + y <= 4,  2x + y >= 2,  y <= 3
        let lp = LinearProgram {
            maximize: vec![1.0, 2.0],
            rows: vec![
                (vec![1.0, 1.0], Relation::Le, 4.0),
                (vec![2.0, 1.0], Relation::Ge, 2.0),
                (vec![0.0, 1.0], Relation::Le, 3.0),
            ],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.objective - 7.0).abs() < 1e-9);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.x[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn equality_rows() {
        // max x  s.t.  x + y = 1
        let lp = LinearProgram {
            maximize: vec![1.0, 0.0],
            rows: vec![(vec![1.0, 1.0], Relation::Eq, 1.0)],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn negative_rhs_normalization() {
        // max -x - y  s.t.  -x - y <= -2  (i.e. x + y >= 2)
        let lp = LinearProgram {
            maximize: vec![-1.0, -1.0],
            rows: vec![(vec![-1.0, -1.0], Relation::Le, -2.0)],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.objective + 2.0).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasible() {
        let lp = LinearProgram {
            maximize: vec![1.0],
            rows: vec![
                (vec![1.0], Relation::Le, 1.0),
                (vec![1.0], Relation::Ge, 2.0),
            ],
        };
        assert_eq!(solve(&lp).unwrap_err(), Error::LpInfeasible);
    }

    #[test]
    fn detects_unbounded() {
        let lp = LinearProgram {
            maximize: vec![1.0],
            rows: vec![(vec![-1.0], Relation::Le, 1.0)],
        };
        assert_eq!(solve(&lp).unwrap_err(), Error::LpUnbounded);
    }

    #[test]
    fn beale_degeneracy_terminates() {
        // Classic cycling example for naive pivoting; Bland's rule must
        // terminate at objective 1/20.
        let lp = LinearProgram {
            maximize: vec![0.75, -150.0, 0.02, -6.0],
            rows: vec![
                (vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0),
                (vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0),
                (vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0),
            ],
        };
        let sol = solve(&lp).unwrap();
        assert!((sol.objective - 0.05).abs() < 1e-9);
    }

    #[test]
    fn degenerate_ties_deterministic() {
        let lp = LinearProgram {
            maximize: vec![1.0, 1.0],
            rows: vec![
                (vec![1.0, 0.0], Relation::Le, 1.0),
                (vec![1.0, 0.0], Relation::Le, 1.0),
                (vec![0.0, 1.0], Relation::Le, 1.0),
            ],
        };
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        assert_eq!(a.x, b.x);
        assert!((a.objective - 2.0).abs() < 1e-9);
    }
}
