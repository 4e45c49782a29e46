//! Dense two-phase tableau simplex for small standard-form linear programs:
//!
//! ```text
//! maximize cᵀx  subject to  A x = b,  x ≥ 0.
//! ```
//!
//! Sized for problems with a few dozen rows and up to tens of thousands of columns.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-10;
const MAX_PIVOTS: usize = 200_000;
// consecutive degenerate pivots before switching from Dantzig's rule to Bland's rule
const DEGENERATE_SWITCH: usize = 50;

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Optimal dual multipliers `π` with `Aᵀπ ≥ c` and `bᵀπ = objective`. Rows found to be
    /// redundant get multiplier `0`.
    pub duals: Vec<f64>,
}

/// Solves `max cᵀx, A x = b, x ≥ 0` where `a` is given row-major.
pub fn maximize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            context: "simplex right-hand side",
            expected: m,
            found: b.len(),
        });
    }
    if let Some(row) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "simplex constraint row",
            expected: n,
            found: row.len(),
        });
    }

    let mut tableau = Tableau::new(a, b, n);
    // phase 1: maximize -(sum of artificials)
    let mut phase1_cost = vec![0.0; n + m];
    for cost in &mut phase1_cost[n..] {
        *cost = -1.0;
    }
    tableau.set_objective(&phase1_cost);
    tableau.optimize(n + m)?;
    let infeasibility = -tableau.objective_value();
    let b_scale = b.iter().fold(1.0_f64, |s, v| s.max(v.abs()));
    if infeasibility > 1e-9 * b_scale {
        return Err(Error::Solver(format!(
            "linear program is infeasible (residual {infeasibility:e})"
        )));
    }
    let redundant = tableau.drive_out_artificials(n);

    let mut phase2_cost = c.to_vec();
    phase2_cost.extend(std::iter::repeat_n(0.0, m));
    tableau.set_objective(&phase2_cost);
    tableau.optimize(n)?;

    let mut x = vec![0.0; n];
    for (row, &var) in tableau.basis.iter().enumerate() {
        if var < n {
            x[var] = tableau.rhs(row);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();

    // duals from Bᵀπ = c_B on the sign-normalized rows
    let basis_matrix = DMatrix::from_fn(m, m, |r, k| {
        let var = tableau.basis[k];
        if var < n {
            tableau.row_sign[r] * a[r][var]
        } else if var - n == r {
            1.0
        } else {
            0.0
        }
    });
    let basic_cost = DVector::from_fn(m, |k, _| phase2_cost[tableau.basis[k]]);
    let pi = basis_matrix
        .transpose()
        .lu()
        .solve(&basic_cost)
        .ok_or_else(|| Error::Solver("singular simplex basis".into()))?;
    let duals = (0..m)
        .map(|r| {
            if redundant[r] {
                0.0
            } else {
                tableau.row_sign[r] * pi[r]
            }
        })
        .collect();

    Ok(LpSolution {
        x,
        objective,
        duals,
    })
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `(rows + 1) × (cols + 1)`, last row is the reduced-cost row, last column the rhs.
    data: Vec<f64>,
    basis: Vec<usize>,
    row_sign: Vec<f64>,
}

impl Tableau {
    fn new(a: &[Vec<f64>], b: &[f64], n: usize) -> Self {
        let m = a.len();
        let cols = n + m;
        let width = cols + 1;
        let mut data = vec![0.0; (m + 1) * width];
        let mut row_sign = vec![1.0; m];
        for r in 0..m {
            let sign = if b[r] < 0.0 { -1.0 } else { 1.0 };
            row_sign[r] = sign;
            let row = &mut data[r * width..(r + 1) * width];
            for (j, v) in a[r].iter().enumerate() {
                row[j] = sign * v;
            }
            row[n + r] = 1.0;
            row[cols] = sign * b[r];
        }
        Tableau {
            rows: m,
            cols,
            data,
            basis: (n..n + m).collect(),
            row_sign,
        }
    }

    #[inline]
    fn width(&self) -> usize {
        self.cols + 1
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn objective_value(&self) -> f64 {
        // the objective row stores -z in the rhs slot
        -self.at(self.rows, self.cols)
    }

    /// Installs reduced costs `d_j = c_j - c_Bᵀ B⁻¹ A_j` for the current basis.
    fn set_objective(&mut self, cost: &[f64]) {
        let w = self.width();
        let obj = self.rows * w;
        self.data[obj..obj + self.cols].copy_from_slice(&cost[..self.cols]);
        self.data[obj + self.cols] = 0.0;
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for j in 0..w {
                    let v = self.data[r * w + j];
                    self.data[obj + j] -= cb * v;
                }
            }
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width();
        let inv = 1.0 / self.at(pr, pc);
        for j in 0..w {
            self.data[pr * w + j] *= inv;
        }
        self.data[pr * w + pc] = 1.0;
        let (before, rest) = self.data.split_at_mut(pr * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let factor = row[pc];
            if factor != 0.0 {
                for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= factor * p;
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs primal simplex pivots; only columns `< allowed` may enter the basis.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        let mut degenerate_run = 0;
        for _ in 0..MAX_PIVOTS {
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let obj = self.rows * self.width();
            let mut entering = None;
            let mut best = PIVOT_TOL;
            for j in 0..allowed {
                let d = self.data[obj + j];
                if d > best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(pc) = entering else {
                return Ok(());
            };

            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let coef = self.at(r, pc);
                if coef > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / coef;
                    let better = match leaving {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - 1e-14
                                || (ratio <= lratio + 1e-14 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((pr, ratio)) = leaving else {
                return Err(Error::Solver("linear program is unbounded".into()));
            };
            if ratio <= 1e-14 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(pr, pc);
        }
        Err(Error::Solver(format!(
            "simplex exceeded {MAX_PIVOTS} pivots"
        )))
    }

    /// Pivots basic artificials (at level zero) out of the basis where possible and returns
    /// the rows that are linearly dependent on the others.
    fn drive_out_artificials(&mut self, n: usize) -> Vec<bool> {
        let mut redundant = vec![false; self.rows];
        for r in 0..self.rows {
            if self.basis[r] < n {
                continue;
            }
            let scale = (0..n).fold(0.0_f64, |m, j| m.max(self.at(r, j).abs()));
            let candidate = (0..n)
                .filter(|&j| self.at(r, j).abs() > PIVOT_TOL.max(1e-9 * scale) && scale > 1e-9)
                .max_by(|&i, &j| self.at(r, i).abs().total_cmp(&self.at(r, j).abs()));
            match candidate {
                Some(j) => self.pivot(r, j),
                None => redundant[r] = true,
            }
        }
        redundant
    }
}
