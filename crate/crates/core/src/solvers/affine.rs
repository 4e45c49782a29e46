use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::premetric::euclidean;
use crate::quantale::QValue;

use super::{common_dimension, simplex};

/// `x ↦ matrix · x + offset`, with `matrix` stored row-major as `M` rows of length `K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl AffineMap {
    pub fn zeros(outputs: usize, inputs: usize) -> Self {
        AffineMap {
            matrix: vec![vec![0.0; inputs]; outputs],
            offset: vec![0.0; outputs],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn output_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| row.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() + b)
            .collect()
    }

    fn from_coefficients(coef: &DMatrix<f64>, inputs: usize, with_offset: bool) -> Self {
        // coef is M × P with P = inputs (+ 1 for the offset column)
        let outputs = coef.nrows();
        AffineMap {
            matrix: (0..outputs)
                .map(|r| (0..inputs).map(|c| coef[(r, c)]).collect())
                .collect(),
            offset: (0..outputs)
                .map(|r| if with_offset { coef[(r, inputs)] } else { 0.0 })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitObjective {
    /// Minimize the largest Euclidean residual norm.
    Minimax,
    /// Minimize the mean squared residual (averaged over samples and output coordinates).
    LeastSquares,
    /// Minimize the mean absolute residual (averaged over samples and output coordinates).
    LeastAbs,
}

impl FitObjective {
    pub const ALL: [FitObjective; 3] = [
        FitObjective::Minimax,
        FitObjective::LeastAbs,
        FitObjective::LeastSquares,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FitObjective::Minimax => "minimax",
            FitObjective::LeastSquares => "least_squares",
            FitObjective::LeastAbs => "least_abs",
        }
    }

    /// The objective value achieved by `map` on the samples.
    pub fn evaluate(self, map: &AffineMap, xs: &[Vec<f64>], ys: &[Vec<f64>]) -> f64 {
        let residuals = xs.iter().zip(ys).map(|(x, y)| {
            let pred = map.apply(x);
            pred.iter().zip(y).map(|(p, t)| p - t).collect::<Vec<f64>>()
        });
        let n = xs.len() as f64;
        let m = ys.first().map_or(1, Vec::len).max(1) as f64;
        match self {
            FitObjective::Minimax => residuals
                .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
                .fold(0.0, f64::max),
            FitObjective::LeastSquares => {
                residuals.map(|r| r.iter().map(|v| v * v).sum::<f64>()).sum::<f64>() / (n * m)
            }
            FitObjective::LeastAbs => {
                residuals.map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).sum::<f64>() / (n * m)
            }
        }
    }
}

impl fmt::Display for FitObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for FitObjective {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FitObjective::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown fit objective `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// Fit `b` as well as `A`; when false the map is linear (`b = 0`).
    pub with_offset: bool,
    /// IRLS stopping tolerance on the relative change of the objective.
    pub irls_tolerance: f64,
    pub irls_max_iterations: usize,
    /// Cutting-plane stopping gap between the upper and lower bound, relative to the data
    /// scale.
    pub minimax_tolerance: f64,
    pub minimax_max_rounds: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            with_offset: true,
            irls_tolerance: 1e-7,
            irls_max_iterations: 500,
            minimax_tolerance: 1e-9,
            minimax_max_rounds: 500,
        }
    }
}

pub fn affine_fit(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    objective: FitObjective,
) -> Result<(AffineMap, QValue)> {
    affine_fit_with(xs, ys, objective, FitOptions::default())
}

pub fn affine_fit_with(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    objective: FitObjective,
    options: FitOptions,
) -> Result<(AffineMap, QValue)> {
    let inputs = common_dimension(xs, "affine fit inputs")?;
    let outputs = common_dimension(ys, "affine fit targets")?;
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            context: "affine fit sample count",
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.iter().chain(ys).flatten().any(|v| !v.is_finite()) {
        return Err(Error::Solver("affine fit: non-finite sample".into()));
    }
    let problem = Problem::new(xs, ys, inputs, outputs, options.with_offset);
    let coef = match objective {
        FitObjective::LeastSquares => problem.least_squares(),
        FitObjective::LeastAbs => problem.least_abs(&options)?,
        FitObjective::Minimax => problem.minimax(&options)?,
    };
    let map = AffineMap::from_coefficients(&coef, inputs, options.with_offset);
    let value = objective.evaluate(&map, xs, ys);
    Ok((map, QValue::new(value)?))
}

struct Problem {
    /// n × P design matrix: inputs, then a column of ones when fitting an offset.
    design: DMatrix<f64>,
    /// n × M targets.
    targets: DMatrix<f64>,
    inputs: usize,
    with_offset: bool,
}

impl Problem {
    fn new(
        xs: &[Vec<f64>],
        ys: &[Vec<f64>],
        inputs: usize,
        outputs: usize,
        with_offset: bool,
    ) -> Self {
        let p = inputs + usize::from(with_offset);
        let design = DMatrix::from_fn(xs.len(), p, |r, c| if c < inputs { xs[r][c] } else { 1.0 });
        let targets = DMatrix::from_fn(ys.len(), outputs, |r, c| ys[r][c]);
        Problem {
            design,
            targets,
            inputs,
            with_offset,
        }
    }

    fn samples(&self) -> usize {
        self.design.nrows()
    }

    fn features(&self) -> usize {
        self.design.ncols()
    }

    fn outputs(&self) -> usize {
        self.targets.ncols()
    }

    fn target_scale(&self) -> f64 {
        self.targets
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
            .max(1.0)
    }

    /// Minimum-norm least-squares coefficients (M × P) for design `x` and targets `y`.
    fn solve_least_squares(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
        let svd = x.clone().svd(true, true);
        let largest = svd.singular_values.iter().fold(0.0_f64, |m, v| m.max(*v));
        let eps = largest * 1e-12 * (x.nrows().max(x.ncols()) as f64);
        let solution = svd
            .solve(y, eps)
            .unwrap_or_else(|_| DMatrix::zeros(x.ncols(), y.ncols()));
        solution.transpose()
    }

    fn least_squares(&self) -> DMatrix<f64> {
        Self::solve_least_squares(&self.design, &self.targets)
    }

    /// Least absolute deviations. The objective separates over output coordinates, so each
    /// coordinate is fitted on its own: iteratively reweighted least squares gets close,
    /// then vertex descent lands on an interpolating optimum and certifies it.
    fn least_abs(&self, options: &FitOptions) -> Result<DMatrix<f64>> {
        let n = self.samples();
        let p = self.features();
        let delta = 1e-12 * self.target_scale();
        let start = self.least_squares();
        let mut coef = start.clone();
        for out in 0..self.outputs() {
            let y = self.targets.column(out).into_owned();
            let mut w_row = start.row(out).transpose();
            let l1 = |w: &DVector<f64>| (&self.design * w - &y).abs().sum() / n as f64;
            let mut best = (l1(&w_row), w_row.clone());
            let mut previous = best.0;
            let mut converged = false;
            for _ in 0..options.irls_max_iterations {
                let residual = &self.design * &w_row - &y;
                let sqrt_w = residual.map(|r| 1.0 / r.abs().max(delta).sqrt());
                let weighted_x = DMatrix::from_fn(n, p, |r, c| self.design[(r, c)] * sqrt_w[r]);
                let weighted_y = DMatrix::from_fn(n, 1, |r, _| y[r] * sqrt_w[r]);
                w_row = Self::solve_least_squares(&weighted_x, &weighted_y)
                    .row(0)
                    .transpose();
                let value = l1(&w_row);
                if value < best.0 {
                    best = (value, w_row.clone());
                }
                if (previous - value).abs() <= options.irls_tolerance * previous.max(delta) {
                    converged = true;
                    break;
                }
                previous = value;
            }
            if let Some((vertex, certified)) = l1_vertex_descent(&self.design, &y, &best.1, options.irls_max_iterations) {
                let value = l1(&vertex);
                if value <= best.0 {
                    best = (value, vertex);
                }
                converged |= certified;
            }
            coef.set_row(out, &best.1.transpose());
            if !converged {
                let map = AffineMap::from_coefficients(&coef, self.inputs, self.with_offset);
                return Err(Error::NonConvergence {
                    method: "least-absolute-deviation IRLS",
                    iterations: options.irls_max_iterations,
                    best_objective: best.0,
                    best: Box::new(map),
                });
            }
        }
        Ok(coef)
    }

    /// Euclidean minimax regression `min_W max_k ‖W φ_k − y_k‖` by Kelley cutting planes.
    ///
    /// Each norm is under-approximated by `max_u uᵀ r` over accumulated unit directions `u`
    /// (initially `±e_j` on the samples least squares fits worst), giving an LP whose value is
    /// a lower bound. The LP is solved in its
    /// dual form, `max Σ λ_c (−u_cᵀ y_c)` subject to `Σ λ_c = 1`, `Σ λ_c u_c φ_cᵀ = 0`,
    /// `λ ≥ 0`, which has only `1 + M·P` rows; the primal `(t, W)` are its multipliers.
    /// Residual directions of the worst violators are added until the bound gap closes.
    fn minimax(&self, options: &FitOptions) -> Result<DMatrix<f64>> {
        let n = self.samples();
        let p = self.features();
        let m = self.outputs();
        let rows = 1 + m * p;
        let tol = options.minimax_tolerance * self.target_scale();

        struct Cut {
            sample: usize,
            direction: Vec<f64>,
        }
        let axis_cuts = |sample: usize| {
            (0..m).flat_map(move |j| {
                [1.0, -1.0].map(|sign| {
                    let mut direction = vec![0.0; m];
                    direction[j] = sign;
                    Cut { sample, direction }
                })
            })
        };
        // Seed with the samples the least-squares fit serves worst; the rest enter lazily.
        let ls = self.least_squares();
        let mut order: Vec<(f64, usize)> = (0..n)
            .map(|k| {
                let r: f64 = (0..m)
                    .map(|j| {
                        let fit: f64 = (0..p).map(|f| ls[(j, f)] * self.design[(k, f)]).sum();
                        (fit - self.targets[(k, j)]).powi(2)
                    })
                    .sum();
                (r, k)
            })
            .collect();
        order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut cuts: Vec<Cut> = order
            .iter()
            .take(2 * rows)
            .flat_map(|&(_, k)| axis_cuts(k))
            .collect();

        let mut best: Option<(f64, DMatrix<f64>)> = None;
        for _ in 0..options.minimax_max_rounds {
            let mut a = vec![Vec::with_capacity(cuts.len()); rows];
            let mut cost = Vec::with_capacity(cuts.len());
            for cut in &cuts {
                let u = &cut.direction;
                a[0].push(1.0);
                for j in 0..m {
                    for f in 0..p {
                        a[1 + j * p + f].push(-u[j] * self.design[(cut.sample, f)]);
                    }
                }
                let uy: f64 = (0..m).map(|j| u[j] * self.targets[(cut.sample, j)]).sum();
                cost.push(-uy);
            }
            let mut rhs = vec![0.0; rows];
            rhs[0] = 1.0;
            let lp = simplex::maximize(&a, &rhs, &cost)?;

            let lower = lp.duals[0];
            let coef = DMatrix::from_fn(m, p, |j, f| lp.duals[1 + j * p + f]);
            let residuals: Vec<Vec<f64>> = (0..n)
                .map(|k| {
                    (0..m)
                        .map(|j| {
                            (0..p).map(|f| coef[(j, f)] * self.design[(k, f)]).sum::<f64>()
                                - self.targets[(k, j)]
                        })
                        .collect()
                })
                .collect();
            let norms: Vec<f64> = residuals
                .iter()
                .map(|r| euclidean(r, &vec![0.0; m]))
                .collect();
            let upper = norms.iter().copied().fold(0.0, f64::max);
            if best.as_ref().is_none_or(|(b, _)| upper < *b) {
                best = Some((upper, coef));
            }
            let best_upper = best.as_ref().map_or(f64::INFINITY, |(b, _)| *b);
            if best_upper - lower <= tol {
                return Ok(best.expect("set above").1);
            }

            let mut violators: Vec<(f64, usize)> = norms
                .iter()
                .enumerate()
                .filter(|&(_, &norm)| norm > lower + tol && norm > 0.0)
                .map(|(k, &norm)| (norm, k))
                .collect();
            violators.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut added = 0;
            for &(norm, k) in violators.iter().take(rows) {
                cuts.push(Cut {
                    sample: k,
                    direction: residuals[k].iter().map(|v| v / norm).collect(),
                });
                added += 1;
            }
            if added == 0 {
                return Ok(best.expect("set above").1);
            }
        }
        let (objective, coef) = best.expect("at least one round");
        Err(Error::NonConvergence {
            method: "minimax cutting planes",
            iterations: options.minimax_max_rounds,
            best_objective: objective,
            best: Box::new(AffineMap::from_coefficients(
                &coef,
                self.inputs,
                self.with_offset,
            )),
        })
    }
}

/// Rows of `design`, taken in the order given, that form a basis of its row space.
fn independent_rows(design: &DMatrix<f64>, order: &[usize]) -> Option<Vec<usize>> {
    let p = design.ncols();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(p);
    let mut chosen = Vec::with_capacity(p);
    for &k in order {
        let row = design.row(k).transpose();
        let mut v = row.clone();
        for q in &basis {
            let proj = q.dot(&v);
            v -= q * proj;
        }
        let norm = v.norm();
        if norm > 1e-10 * row.norm().max(f64::MIN_POSITIVE) {
            basis.push(v / norm);
            chosen.push(k);
            if chosen.len() == p {
                return Some(chosen);
            }
        }
    }
    None
}

/// Exact finish for `min_w Σ |design·w − y|` by vertex descent.
///
/// Starts from the vertex interpolating the samples `start` fits best and moves between
/// adjacent vertices. Ties between samples are broken by walking on slightly perturbed
/// targets; the final basis is then checked against the original targets. Returns the
/// vertex and whether its optimality certificate holds, or `None` when the design is rank
/// deficient.
fn l1_vertex_descent(
    design: &DMatrix<f64>,
    y: &DVector<f64>,
    start: &DVector<f64>,
    max_steps: usize,
) -> Option<(DVector<f64>, bool)> {
    let n = design.nrows();
    let r0 = design * start - y;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| r0[a].abs().total_cmp(&r0[b].abs()));
    let mut basis = independent_rows(design, &order)?;

    let scale = y.amax().max(1.0);
    // distinct offsets in (−1, 1) from the golden-ratio sequence
    let jitter = DVector::from_fn(n, |k, _| 2.0 * ((k as f64 + 1.0) * 0.618_033_988_749_895).fract() - 1.0);
    let perturbed = y + jitter * (1e-9 * scale);

    let mut steps = 0;
    while steps < max_steps {
        steps += 1;
        let vertex = Vertex::new(design, &perturbed, &basis, |k, r| r[k].signum())?;
        let (leave, di) = vertex.worst_multiplier();
        if di.abs() <= 1.0 {
            break;
        }
        let Some(entering) = vertex.ratio_test(design, leave, di) else {
            break;
        };
        basis[leave] = entering;
    }

    // the perturbed signs are valid multipliers for rows the original fit passes through
    let pert_residual = Vertex::new(design, &perturbed, &basis, |_, _| 0.0)?.residual;
    let zero = 1e-12 * scale;
    let vertex = Vertex::new(design, y, &basis, |k, r| {
        if r[k].abs() <= zero {
            pert_residual[k].signum()
        } else {
            r[k].signum()
        }
    })?;
    let consistent = (0..n)
        .filter(|k| !basis.contains(k) && vertex.residual[*k].abs() > zero)
        .all(|k| vertex.residual[k].signum() == pert_residual[k].signum());
    let certified = consistent && vertex.worst_multiplier().1.abs() <= 1.0 + 1e-9;
    Some((vertex.w, certified))
}

/// The interpolating fit through the basic rows, with their dual multipliers.
struct Vertex {
    w: DVector<f64>,
    residual: DVector<f64>,
    basic_rows: DMatrix<f64>,
    /// `X_Bᵀ d = −Σ_N s_k x_k`, with the signs `s_k` of the non-basic residuals.
    multipliers: DVector<f64>,
    basis: Vec<usize>,
}

impl Vertex {
    fn new(
        design: &DMatrix<f64>,
        y: &DVector<f64>,
        basis: &[usize],
        sign: impl Fn(usize, &DVector<f64>) -> f64,
    ) -> Option<Self> {
        let p = design.ncols();
        let basic_rows = DMatrix::from_fn(p, p, |r, c| design[(basis[r], c)]);
        let w = basic_rows.clone().lu().solve(&DVector::from_fn(p, |r, _| y[basis[r]]))?;
        let residual = design * &w - y;
        let mut rhs = DVector::zeros(p);
        for k in (0..design.nrows()).filter(|k| !basis.contains(k)) {
            let s = sign(k, &residual);
            if s != 0.0 {
                rhs -= design.row(k).transpose() * s;
            }
        }
        let multipliers = basic_rows.transpose().lu().solve(&rhs)?;
        Some(Vertex {
            w,
            residual,
            basic_rows,
            multipliers,
            basis: basis.to_vec(),
        })
    }

    fn worst_multiplier(&self) -> (usize, f64) {
        self.multipliers
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap_or((0, 0.0))
    }

    /// Frees basic row `leave` in the descent direction and walks the objective's
    /// breakpoints to the minimum along that edge; returns the row that becomes basic.
    fn ratio_test(&self, design: &DMatrix<f64>, leave: usize, di: f64) -> Option<usize> {
        let mut e = DVector::zeros(self.basis.len());
        e[leave] = di.signum();
        let v = self.basic_rows.clone().lu().solve(&e)?;
        let a = design * &v;
        let mut slope = 1.0 - di.abs();
        let mut breaks: Vec<(f64, usize)> = (0..design.nrows())
            .filter(|k| !self.basis.contains(k) && a[*k] != 0.0)
            .map(|k| (-self.residual[k] / a[k], k))
            .filter(|&(t, _)| t > 0.0)
            .collect();
        breaks.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (_, k) in breaks {
            slope += 2.0 * a[k].abs();
            if slope >= 0.0 {
                return Some(k);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| vec![x]).collect()
    }

    #[test]
    fn l1_descent_matches_vertex_enumeration() {
        // y = 1 + 2x with two outliers; the optimum interpolates two samples
        let xs = [-2.0, -1.0, 0.0, 0.5, 1.5, 3.0, 4.0];
        let ys = [-3.0, -1.0, 1.0, 4.5, 4.0, 7.0, 0.0];
        let design = DMatrix::from_fn(xs.len(), 2, |r, c| if c == 0 { xs[r] } else { 1.0 });
        let y = DVector::from_column_slice(&ys);
        let l1 = |w: &DVector<f64>| (&design * w - &y).abs().sum();
        let mut best = f64::INFINITY;
        for i in 0..xs.len() {
            for j in (i + 1)..xs.len() {
                let slope = (ys[j] - ys[i]) / (xs[j] - xs[i]);
                best = best.min(l1(&DVector::from_vec(vec![slope, ys[i] - slope * xs[i]])));
            }
        }
        let start = DVector::from_vec(vec![0.0, 0.0]);
        let (w, certified) = l1_vertex_descent(&design, &y, &start, 50).unwrap();
        assert!(certified);
        assert!((l1(&w) - best).abs() < 1e-12, "{} vs {best}", l1(&w));
    }

    #[test]
    fn exact_affine_data() {
        let xs = line(&[0.0, 1.0, 2.0]);
        let ys = line(&[1.0, 3.0, 5.0]);
        for objective in FitObjective::ALL {
            let (map, value) = affine_fit(&xs, &ys, objective).unwrap();
            assert!(value.value() < 1e-9, "{objective}: {value}");
            assert!((map.matrix[0][0] - 2.0).abs() < 1e-9);
            assert!((map.offset[0] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn chebyshev_tent() {
        let xs = line(&[0.0, 1.0, 2.0]);
        let ys = line(&[0.0, 1.0, 0.0]);
        let (map, value) = affine_fit(&xs, &ys, FitObjective::Minimax).unwrap();
        assert!(map.matrix[0][0].abs() < 1e-12);
        assert!((map.offset[0] - 0.5).abs() < 1e-12);
        assert!((value.value() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_target() {
        let xs = vec![vec![0.0, 1.0], vec![2.0, -1.0], vec![0.5, 0.5], vec![3.0, 3.0]];
        let ys = vec![vec![4.0]; 4];
        for objective in FitObjective::ALL {
            let (map, value) = affine_fit(&xs, &ys, objective).unwrap();
            assert!(value.value() < 1e-9);
            assert!(map.matrix[0].iter().all(|a| a.abs() < 1e-9));
            assert!((map.offset[0] - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn euclidean_minimax_of_square_corners() {
        // constant inputs: best offset is the center of the square, error √2/2
        let xs = vec![vec![0.0]; 4];
        let ys = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let (map, value) = affine_fit(&xs, &ys, FitObjective::Minimax).unwrap();
        assert!((value.value() - 0.5_f64.sqrt()).abs() < 1e-9);
        assert!((map.offset[0] - 0.5).abs() < 1e-6 && (map.offset[1] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn least_abs_matches_median_for_constant_fit() {
        let xs = vec![vec![0.0]; 5];
        let ys = line(&[0.0, 1.0, 2.0, 7.0, 100.0]);
        let options = FitOptions {
            with_offset: true,
            ..FitOptions::default()
        };
        let (map, value) = affine_fit_with(&xs, &ys, FitObjective::LeastAbs, options).unwrap();
        assert!((map.offset[0] - 2.0).abs() < 1e-3);
        let exact = (2.0 + 1.0 + 0.0 + 5.0 + 98.0) / 5.0;
        assert!((value.value() - exact).abs() < 1e-6);
    }

    #[test]
    fn linear_only_fit() {
        let xs = line(&[1.0, 2.0, 3.0]);
        let ys = line(&[3.0, 5.0, 7.0]);
        let options = FitOptions {
            with_offset: false,
            ..FitOptions::default()
        };
        let (map, _) = affine_fit_with(&xs, &ys, FitObjective::LeastSquares, options).unwrap();
        assert_eq!(map.offset, vec![0.0]);
        assert!(map.matrix[0][0] > 2.0);
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            affine_fit(&[], &[], FitObjective::Minimax),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            affine_fit(&line(&[1.0, 2.0]), &line(&[1.0]), FitObjective::LeastSquares),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
