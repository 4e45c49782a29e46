//! Factor grids, code tables and slices.
//!
//! A [`FactorGrid`] is the full Cartesian product `Y₁ × ⋯ × Y_N` of finite factor value
//! lists, enumerated row-major: the last factor varies fastest, so the grid index of the
//! tuple `(i₁, …, i_N)` is `Σ_k i_k · ∏_{l>k} |Y_l|`. Each factor value is a fixed-width real
//! vector (width 1 for scalar factors).
//!
//! A [`CodeTable`] stores one code vector per grid point, in grid order, together with the
//! [`CodePartition`] splitting code dimensions into one block per factor.

mod dataset;

pub use dataset::{
    format_f64, load_dataset, save_dataset, Dataset, Provenance, DATA_FILE, SCHEMA_FILE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub values: Vec<Vec<f64>>,
}

impl Factor {
    pub fn scalar(name: impl Into<String>, values: impl IntoIterator<Item = f64>) -> Self {
        Factor {
            name: name.into(),
            values: values.into_iter().map(|v| vec![v]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn width(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorGrid {
    factors: Vec<Factor>,
    /// `strides[i]` is the grid-index step of factor `i`.
    strides: Vec<usize>,
    len: usize,
}

/// Builds a grid from factor value lists; every list must be nonempty with distinct values.
pub fn build_grid(factors: Vec<Factor>) -> Result<FactorGrid> {
    FactorGrid::new(factors)
}

impl FactorGrid {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGrid("no factors".into()));
        }
        for f in &factors {
            if f.is_empty() {
                return Err(Error::InvalidGrid(format!("factor `{}` has no values", f.name)));
            }
            let width = f.width();
            if width == 0 || f.values.iter().any(|v| v.len() != width) {
                return Err(Error::InvalidGrid(format!(
                    "factor `{}` values must share a positive width",
                    f.name
                )));
            }
            if f.values.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidGrid(format!(
                    "factor `{}` has a non-finite value",
                    f.name
                )));
            }
            for (i, v) in f.values.iter().enumerate() {
                if f.values[..i].contains(v) {
                    return Err(Error::InvalidGrid(format!(
                        "factor `{}` repeats value {v:?}",
                        f.name
                    )));
                }
            }
        }
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len() - 1).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].len();
        }
        let len = strides[0] * factors[0].len();
        Ok(FactorGrid {
            factors,
            strides,
            len,
        })
    }

    /// `count` scalar factors named `y1..`, each taking the same values.
    pub fn uniform(count: usize, values: &[f64]) -> Result<Self> {
        FactorGrid::new(
            (1..=count)
                .map(|i| Factor::scalar(format!("y{i}"), values.iter().copied()))
                .collect(),
        )
    }

    /// `{0, 0.1, …, 1}³`.
    pub fn unit_cube() -> Self {
        let values: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        FactorGrid::uniform(3, &values).expect("static grid is valid")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Result<&Factor> {
        self.factors.get(i).ok_or(Error::IndexOutOfRange {
            what: "factor",
            index: i,
            len: self.factors.len(),
        })
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::len).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Total width of a concatenated factor tuple.
    pub fn point_dim(&self) -> usize {
        self.factors.iter().map(Factor::width).sum()
    }

    pub fn index_of(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                context: "grid tuple",
                expected: self.factors.len(),
                found: tuple.len(),
            });
        }
        let mut index = 0;
        for (i, (&t, f)) in tuple.iter().zip(&self.factors).enumerate() {
            if t >= f.len() {
                return Err(Error::IndexOutOfRange {
                    what: "factor value",
                    index: t,
                    len: f.len(),
                });
            }
            index += t * self.strides[i];
        }
        Ok(index)
    }

    pub fn tuple_of(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.len);
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(f, s)| (index / s) % f.len())
            .collect()
    }

    /// Value index of factor `i` at grid point `index`.
    #[inline]
    pub fn coordinate(&self, index: usize, i: usize) -> usize {
        (index / self.strides[i]) % self.factors[i].len()
    }

    pub fn factor_value(&self, index: usize, i: usize) -> &[f64] {
        &self.factors[i].values[self.coordinate(index, i)]
    }

    /// The concatenated factor values `(y₁, …, y_N)` at a grid point.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.point_dim());
        for i in 0..self.factors.len() {
            out.extend_from_slice(self.factor_value(index, i));
        }
        out
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len).map(|k| self.point(k)).collect()
    }

    /// Grid indices with factor `i` fixed to its `value`-th entry.
    pub fn slice_fixing(&self, i: usize, value: usize) -> Result<Slice> {
        let f = self.factor(i)?;
        if value >= f.len() {
            return Err(Error::IndexOutOfRange {
                what: "factor value",
                index: value,
                len: f.len(),
            });
        }
        // row-major order restricted to the complement is increasing grid order
        let indices = (0..self.len)
            .filter(|&k| self.coordinate(k, i) == value)
            .collect();
        Ok(Slice {
            factor: i,
            value,
            indices,
        })
    }

    /// Position of grid point `index` within the enumeration of the complement of factor `i`.
    pub fn complement_rank(&self, index: usize, i: usize) -> usize {
        let stride = self.strides[i];
        let size = self.factors[i].len();
        let high = index / (stride * size);
        let low = index % stride;
        high * stride + low
    }
}

/// Grid points sharing one value of one factor, listed in complement row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub factor: usize,
    pub value: usize,
    pub indices: Vec<usize>,
}

pub fn slice_fixing(grid: &FactorGrid, i: usize, value: usize) -> Result<Slice> {
    grid.slice_fixing(i, value)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodePartition {
    block_dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl CodePartition {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        if block_dims.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "block dimensions must be positive: {block_dims:?}"
            )));
        }
        let offsets = block_dims
            .iter()
            .scan(0, |acc, d| {
                let start = *acc;
                *acc += d;
                Some(start)
            })
            .collect();
        Ok(CodePartition {
            block_dims,
            offsets,
        })
    }

    /// One scalar block per factor.
    pub fn scalar(blocks: usize) -> Self {
        CodePartition::new(vec![1; blocks]).expect("positive blocks")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn range(&self, block: usize) -> std::ops::Range<usize> {
        self.offsets[block]..self.offsets[block] + self.block_dims[block]
    }
}

/// A sampled map `m: Y → Z`, one code row per grid point in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeTable {
    grid: FactorGrid,
    partition: CodePartition,
    codes: Vec<Vec<f64>>,
}

impl CodeTable {
    pub fn new(grid: FactorGrid, partition: CodePartition, codes: Vec<Vec<f64>>) -> Result<Self> {
        if partition.num_blocks() != grid.num_factors() {
            return Err(Error::InvalidPartition(format!(
                "{} blocks for {} factors",
                partition.num_blocks(),
                grid.num_factors()
            )));
        }
        if codes.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                context: "code table rows",
                expected: grid.len(),
                found: codes.len(),
            });
        }
        let m = partition.total_dim();
        for row in &codes {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    context: "code row width",
                    expected: m,
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidGrid("code table has a non-finite entry".into()));
            }
        }
        Ok(CodeTable {
            grid,
            partition,
            codes,
        })
    }

    /// Evaluates `m` on every grid point.
    pub fn from_fn(
        grid: FactorGrid,
        partition: CodePartition,
        m: impl Fn(&[f64]) -> Vec<f64>,
    ) -> Result<Self> {
        let codes = (0..grid.len()).map(|k| m(&grid.point(k))).collect();
        CodeTable::new(grid, partition, codes)
    }

    pub fn grid(&self) -> &FactorGrid {
        &self.grid
    }

    pub fn partition(&self) -> &CodePartition {
        &self.partition
    }

    pub fn codes(&self) -> &[Vec<f64>] {
        &self.codes
    }

    pub fn code(&self, index: usize) -> &[f64] {
        &self.codes[index]
    }

    /// Block `i` of code row `index`.
    pub fn block(&self, index: usize, i: usize) -> &[f64] {
        &self.codes[index][self.partition.range(i)]
    }

    pub fn map_codes(&self, f: impl Fn(&[f64]) -> Vec<f64>, partition: CodePartition) -> Result<Self> {
        let codes = self.codes.iter().map(|c| f(c)).collect();
        CodeTable::new(self.grid.clone(), partition, codes)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let factors = self
            .grid
            .factors()
            .iter()
            .map(|f| Factor {
                name: f.name.clone(),
                values: f
                    .values
                    .iter()
                    .map(|v| v.iter().map(|x| x * factor).collect())
                    .collect(),
            })
            .collect();
        let codes = self
            .codes
            .iter()
            .map(|c| c.iter().map(|x| x * factor).collect())
            .collect();
        CodeTable::new(FactorGrid::new(factors)?, self.partition.clone(), codes)
    }
}

/// The `i`-th code blocks of the selected rows, in the given order.
pub fn component_codes(table: &CodeTable, i: usize, indices: &[usize]) -> Result<Vec<Vec<f64>>> {
    if i >= table.partition.num_blocks() {
        return Err(Error::IndexOutOfRange {
            what: "code block",
            index: i,
            len: table.partition.num_blocks(),
        });
    }
    indices
        .iter()
        .map(|&k| {
            if k >= table.codes.len() {
                Err(Error::IndexOutOfRange {
                    what: "grid point",
                    index: k,
                    len: table.codes.len(),
                })
            } else {
                Ok(table.block(k, i).to_vec())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes_grid(sizes: &[usize]) -> FactorGrid {
        FactorGrid::new(
            sizes
                .iter()
                .enumerate()
                .map(|(i, &s)| Factor::scalar(format!("f{i}"), (0..s).map(|v| v as f64)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn grid_sizes_and_indexing() {
        assert_eq!(FactorGrid::unit_cube().len(), 1331);
        assert_eq!(FactorGrid::uniform(1, &[0.0]).unwrap().len(), 1);
        let g = sizes_grid(&[2, 3]);
        assert_eq!(g.len(), 6);
        assert_eq!(g.index_of(&[1, 2]).unwrap(), 5);
        assert_eq!(g.tuple_of(5), vec![1, 2]);
        assert!(matches!(g.index_of(&[2, 0]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn invalid_grids() {
        assert!(matches!(FactorGrid::new(vec![]), Err(Error::InvalidGrid(_))));
        assert!(FactorGrid::new(vec![Factor::scalar("a", [])]).is_err());
        assert!(FactorGrid::new(vec![Factor::scalar("a", [1.0, 1.0])]).is_err());
    }

    #[test]
    fn slices() {
        let g = sizes_grid(&[2, 3]);
        assert_eq!(g.slice_fixing(0, 1).unwrap().indices, vec![3, 4, 5]);
        assert_eq!(g.slice_fixing(1, 0).unwrap().indices, vec![0, 3]);
        assert_eq!(FactorGrid::unit_cube().slice_fixing(1, 4).unwrap().indices.len(), 121);
        assert_eq!(sizes_grid(&[1]).slice_fixing(0, 0).unwrap().indices, vec![0]);
        assert!(g.slice_fixing(2, 0).is_err());
        assert!(g.slice_fixing(1, 3).is_err());
    }

    #[test]
    fn complement_rank_enumerates_slice() {
        let g = sizes_grid(&[3, 2, 4]);
        for i in 0..3 {
            for v in 0..g.factors()[i].len() {
                let s = g.slice_fixing(i, v).unwrap();
                let ranks: Vec<usize> = s.indices.iter().map(|&k| g.complement_rank(k, i)).collect();
                assert_eq!(ranks, (0..s.indices.len()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn component_blocks() {
        let grid = sizes_grid(&[2, 2, 2]);
        let table = CodeTable::from_fn(grid.clone(), CodePartition::scalar(3), |y| y.to_vec()).unwrap();
        let last = grid.len() - 1;
        assert_eq!(component_codes(&table, 2, &[last]).unwrap(), vec![vec![1.0]]);

        let dup = CodeTable::from_fn(grid.clone(), CodePartition::new(vec![3, 3, 1]).unwrap(), |y| {
            vec![y[0], y[1], y[2], y[0], y[1], y[2], y[2]]
        })
        .unwrap();
        assert_eq!(component_codes(&dup, 0, &[last]).unwrap(), vec![vec![1.0, 1.0, 1.0]]);

        let red = CodeTable::from_fn(grid, CodePartition::new(vec![2, 1, 1]).unwrap(), |y| {
            vec![y[0], -y[0], y[1], y[2]]
        })
        .unwrap();
        assert_eq!(component_codes(&red, 0, &[last]).unwrap(), vec![vec![1.0, -1.0]]);
        assert!(component_codes(&red, 3, &[0]).is_err());
    }

    #[test]
    fn table_validation() {
        let grid = sizes_grid(&[2]);
        let p = CodePartition::scalar(1);
        assert!(CodeTable::new(grid.clone(), p.clone(), vec![vec![0.0]]).is_err());
        assert!(CodeTable::new(grid.clone(), p.clone(), vec![vec![0.0], vec![f64::NAN]]).is_err());
        assert!(CodeTable::new(grid, CodePartition::scalar(2), vec![vec![0.0, 0.0]; 2]).is_err());
        assert!(CodePartition::new(vec![1, 0]).is_err());
    }
}
