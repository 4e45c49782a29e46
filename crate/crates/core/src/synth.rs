//! Synthetic observations and the seven reference encoders.
//!
//! Observations come from `g(y) = a ∘ exp(R · exp(R · y)) + b`, where `exp` acts
//! componentwise, `R` is a seeded random rotation and `a, b` rescale every output
//! coordinate onto `[0, 1]`. The encoders map factor tuples to codes:
//!
//! | encoder      | code                                   | blocks    |
//! |--------------|----------------------------------------|-----------|
//! | `identity`   | `g(y)`                                 | 1, 1, 1   |
//! | `constant`   | `(0, 0, 0)`                            | 1, 1, 1   |
//! | `rotation`   | `R · y`                                | 1, 1, 1   |
//! | `duplicate`  | `((y1, y2, y3), (y1, y2, y3), y3)`     | 3, 3, 1   |
//! | `redundancy` | `((y1, −y1), y2, y3)`                  | 2, 1, 1   |
//! | `product`    | per slice, the enclosing-ball center of `g_i` | 1, 1, 1 |
//! | `inverse`    | `A · g(y)`, `A` the minimax linear decoder | 1, 1, 1 |

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::grid::{CodePartition, CodeTable, Dataset, FactorGrid, Provenance};
use crate::solvers::{affine_fit_with, smallest_enclosing_ball, FitObjective, FitOptions};

pub const DEFAULT_SEED: u64 = 0;
pub const GENERATOR_NAME: &str = "exp-rotation";

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub grid: FactorGrid,
    /// Multiplies factor values and codes after encoding.
    pub scale: f64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            seed: DEFAULT_SEED,
            grid: FactorGrid::unit_cube(),
            scale: 1.0,
        }
    }
}

impl GeneratorSpec {
    pub fn with_seed(seed: u64) -> Self {
        GeneratorSpec {
            seed,
            ..GeneratorSpec::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncoderKind {
    Identity,
    Constant,
    Rotation,
    Duplicate,
    Redundancy,
    Product,
    Inverse,
}

impl EncoderKind {
    pub const ALL: [EncoderKind; 7] = [
        EncoderKind::Identity,
        EncoderKind::Constant,
        EncoderKind::Rotation,
        EncoderKind::Duplicate,
        EncoderKind::Redundancy,
        EncoderKind::Product,
        EncoderKind::Inverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncoderKind::Identity => "identity",
            EncoderKind::Constant => "constant",
            EncoderKind::Rotation => "rotation",
            EncoderKind::Duplicate => "duplicate",
            EncoderKind::Redundancy => "redundancy",
            EncoderKind::Product => "product",
            EncoderKind::Inverse => "inverse",
        }
    }

    /// Code block dimensions for a grid with `n` scalar factors.
    pub fn block_dims(self, n: usize) -> Vec<usize> {
        match self {
            EncoderKind::Duplicate => {
                let mut dims = vec![n; n - 1];
                dims.push(1);
                dims
            }
            EncoderKind::Redundancy => {
                let mut dims = vec![1; n];
                dims[0] = 2;
                dims
            }
            _ => vec![1; n],
        }
    }
}

impl fmt::Display for EncoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for EncoderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        EncoderKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown encoder `{s}`"))
    }
}

/// Orthogonal `dim × dim` matrix with determinant `+1`, row-major.
///
/// Orthonormalizes a seeded standard-normal matrix with QR, choosing column signs so that
/// the triangular factor has a positive diagonal, then flips the last column if needed.
pub fn rotation_matrix(seed: u64, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = DMatrix::<f64>::from_fn(dim, dim, |_, _| StandardNormal.sample(&mut rng));
    let qr = gaussian.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if dim > 0 && q.determinant() < 0.0 {
        q.column_mut(dim - 1).neg_mut();
    }
    (0..dim).map(|i| q.row(i).iter().copied().collect()).collect()
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// The observation map sampled over a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub rotation: Vec<Vec<f64>>,
    /// Per-coordinate normalization `x ↦ a·x + b`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `g(y)` for every grid point, in grid order.
    pub observations: Vec<Vec<f64>>,
}

impl Generator {
    pub fn observation(&self, index: usize) -> &[f64] {
        &self.observations[index]
    }
}

/// Samples `g` over the spec's grid. Deterministic given the seed.
pub fn generate(spec: &GeneratorSpec) -> Result<Generator> {
    let grid = &spec.grid;
    if grid.factors().iter().any(|f| f.width() != 1) {
        return Err(Error::InvalidGrid("the generator needs scalar factors".into()));
    }
    let dim = grid.point_dim();
    let rotation = rotation_matrix(spec.seed, dim);
    let exp = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(f64::exp).collect() };
    let raw: Vec<Vec<f64>> = grid
        .points()
        .iter()
        .map(|y| exp(mat_vec(&rotation, &exp(mat_vec(&rotation, y)))))
        .collect();
    let mut a = vec![1.0; dim];
    let mut b = vec![0.0; dim];
    for j in 0..dim {
        let (lo, hi) = raw
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x[j]), hi.max(x[j])));
        if hi > lo {
            a[j] = 1.0 / (hi - lo);
        }
        b[j] = -lo * a[j];
    }
    let observations = raw
        .into_iter()
        .map(|x| x.iter().enumerate().map(|(j, v)| a[j] * v + b[j]).collect())
        .collect();
    Ok(Generator {
        rotation,
        a,
        b,
        observations,
    })
}

/// Codes of one encoder over the spec's grid, before scaling.
pub fn encode_table(kind: EncoderKind, spec: &GeneratorSpec, generator: &Generator) -> Result<CodeTable> {
    let grid = spec.grid.clone();
    let n = grid.num_factors();
    let partition = CodePartition::new(kind.block_dims(n))?;
    let points = grid.points();
    let codes: Vec<Vec<f64>> = match kind {
        EncoderKind::Identity => generator.observations.clone(),
        EncoderKind::Constant => vec![vec![0.0; n]; grid.len()],
        EncoderKind::Rotation => points.iter().map(|y| mat_vec(&generator.rotation, y)).collect(),
        EncoderKind::Duplicate => points
            .iter()
            .map(|y| {
                let mut code = Vec::with_capacity(n * (n - 1) + 1);
                for _ in 0..n - 1 {
                    code.extend_from_slice(y);
                }
                code.push(y[n - 1]);
                code
            })
            .collect(),
        EncoderKind::Redundancy => points
            .iter()
            .map(|y| {
                let mut code = vec![y[0], -y[0]];
                code.extend_from_slice(&y[1..]);
                code
            })
            .collect(),
        EncoderKind::Product => {
            let mut centers = Vec::with_capacity(n);
            for i in 0..n {
                let per_value = (0..grid.factors()[i].len())
                    .map(|v| {
                        let slice = grid.slice_fixing(i, v)?;
                        let values: Vec<Vec<f64>> = slice
                            .indices
                            .iter()
                            .map(|&k| vec![generator.observation(k)[i]])
                            .collect();
                        Ok(smallest_enclosing_ball(&values)?.center[0])
                    })
                    .collect::<Result<Vec<f64>>>()?;
                centers.push(per_value);
            }
            (0..grid.len())
                .map(|k| (0..n).map(|i| centers[i][grid.coordinate(k, i)]).collect())
                .collect()
        }
        EncoderKind::Inverse => {
            let options = FitOptions {
                with_offset: false,
                ..FitOptions::default()
            };
            let (map, _) = affine_fit_with(&generator.observations, &points, FitObjective::Minimax, options)?;
            generator.observations.iter().map(|x| map.apply(x)).collect()
        }
    };
    CodeTable::new(grid, partition, codes)
}

/// Encodes the spec's grid and applies the global scale.
pub fn encode(kind: EncoderKind, spec: &GeneratorSpec) -> Result<Dataset> {
    let generator = generate(spec)?;
    encode_with(kind, spec, &generator)
}

pub fn encode_with(kind: EncoderKind, spec: &GeneratorSpec, generator: &Generator) -> Result<Dataset> {
    if !(spec.scale.is_finite() && spec.scale > 0.0) {
        return Err(Error::InvalidValue(spec.scale));
    }
    let mut table = encode_table(kind, spec, generator)?;
    if spec.scale != 1.0 {
        table = table.scaled(spec.scale)?;
    }
    let provenance = Provenance {
        generator: Some(GENERATOR_NAME.to_owned()),
        encoder: Some(kind.name().to_owned()),
        seed: Some(spec.seed),
        scale: Some(spec.scale),
    };
    Ok(Dataset::new(kind.name(), provenance, table))
}

/// All seven encoders, sharing one sampled generator.
pub fn encode_all(spec: &GeneratorSpec) -> Result<Vec<Dataset>> {
    let generator = generate(spec)?;
    EncoderKind::ALL
        .into_iter()
        .map(|kind| encode_with(kind, spec, &generator))
        .collect()
}
