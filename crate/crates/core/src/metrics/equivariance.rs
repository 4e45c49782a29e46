use super::q;
use crate::error::{Error, Result};
use crate::grid::CodeTable;
use crate::premetric::{euclidean, Aggregator};
use crate::quantale::QValue;
use crate::solvers::AffineMap;

/// How one element of the acting algebra moves codes.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeAction {
    /// Sends the code of row `k` to the code of row `rows[k]`.
    Rows(Vec<usize>),
    /// Applies an affine map to every code vector.
    Affine(AffineMap),
}

/// A finite algebra acting on both the factor grid and the code space.
///
/// `y_maps[a][k]` is the grid index that element `a` sends index `k` to.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAction {
    pub y_maps: Vec<Vec<usize>>,
    pub z_maps: Vec<CodeAction>,
}

impl FiniteAction {
    pub fn new(y_maps: Vec<Vec<usize>>, z_maps: Vec<CodeAction>) -> Result<Self> {
        if y_maps.len() != z_maps.len() {
            return Err(Error::InvalidAction(format!(
                "{} maps on the grid but {} on the codes",
                y_maps.len(),
                z_maps.len()
            )));
        }
        Ok(FiniteAction { y_maps, z_maps })
    }

    /// The one-element action that fixes everything.
    pub fn identity(rows: usize, code_dim: usize) -> Self {
        let mut map = AffineMap::zeros(code_dim, code_dim);
        for (j, row) in map.matrix.iter_mut().enumerate() {
            row[j] = 1.0;
        }
        FiniteAction {
            y_maps: vec![(0..rows).collect()],
            z_maps: vec![CodeAction::Affine(map)],
        }
    }

    pub fn len(&self) -> usize {
        self.y_maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_maps.is_empty()
    }

    fn validate(&self, table: &CodeTable) -> Result<()> {
        let n = table.grid().len();
        let dim = table.partition().total_dim();
        if self.y_maps.len() != self.z_maps.len() {
            return Err(Error::InvalidAction("grid and code maps differ in number".into()));
        }
        let check_indices = |map: &[usize], side: &str| -> Result<()> {
            if map.len() != n {
                return Err(Error::InvalidAction(format!(
                    "{side} map has {} entries for {n} grid rows",
                    map.len()
                )));
            }
            if let Some(&bad) = map.iter().find(|&&k| k >= n) {
                return Err(Error::InvalidAction(format!("{side} map index {bad} out of range ({n} rows)")));
            }
            Ok(())
        };
        for (y_map, z_map) in self.y_maps.iter().zip(&self.z_maps) {
            check_indices(y_map, "grid")?;
            match z_map {
                CodeAction::Rows(rows) => check_indices(rows, "code")?,
                CodeAction::Affine(map) => {
                    if map.input_dim() != dim || map.output_dim() != dim {
                        return Err(Error::InvalidAction(format!(
                            "code map is {}→{}, codes have dimension {dim}",
                            map.input_dim(),
                            map.output_dim()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Failure of `m` to commute with the action: aggregates
/// `d_Z(m(F_Y(a)(y)), F_Z(a)(m(y)))` over `y` with `agg_y`, then over `a` with `agg_a`.
pub fn equivariance_metric(
    table: &CodeTable,
    action: &FiniteAction,
    agg_a: Aggregator,
    agg_y: Aggregator,
) -> Result<QValue> {
    action.validate(table)?;
    let n = table.grid().len();
    let per_element: Vec<f64> = action
        .y_maps
        .iter()
        .zip(&action.z_maps)
        .map(|(y_map, z_map)| {
            let distances: Vec<f64> = (0..n)
                .map(|k| {
                    let moved_input = table.code(y_map[k]);
                    match z_map {
                        CodeAction::Rows(rows) => euclidean(moved_input, table.code(rows[k])),
                        CodeAction::Affine(map) => euclidean(moved_input, &map.apply(table.code(k))),
                    }
                })
                .collect();
            agg_y.apply(&distances)
        })
        .collect();
    Ok(q(agg_a.apply(&per_element)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{CodePartition, FactorGrid};

    fn squares() -> CodeTable {
        let grid = FactorGrid::uniform(1, &[-1.0, 0.0, 1.0]).unwrap();
        CodeTable::from_fn(grid, CodePartition::scalar(1), |y| vec![y[0] * y[0]]).unwrap()
    }

    fn sign_flip() -> FiniteAction {
        let mut neg = AffineMap::zeros(1, 1);
        neg.matrix[0][0] = -1.0;
        FiniteAction::new(vec![vec![2, 1, 0]], vec![CodeAction::Affine(neg)]).unwrap()
    }

    #[test]
    fn squaring_is_not_sign_equivariant() {
        let score = equivariance_metric(&squares(), &sign_flip(), Aggregator::Max, Aggregator::Max).unwrap();
        assert_eq!(score.value(), 2.0);
        let mean = equivariance_metric(&squares(), &sign_flip(), Aggregator::Max, Aggregator::Mean).unwrap();
        assert!((mean.value() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_action_scores_zero() {
        let table = squares();
        let id = FiniteAction::identity(3, 1);
        assert_eq!(
            equivariance_metric(&table, &id, Aggregator::Max, Aggregator::Max).unwrap(),
            QValue::TOP
        );
        let rows = FiniteAction::new(vec![vec![0, 1, 2]], vec![CodeAction::Rows(vec![0, 1, 2])]).unwrap();
        assert_eq!(
            equivariance_metric(&table, &rows, Aggregator::Mean, Aggregator::Mean).unwrap(),
            QValue::TOP
        );
    }

    #[test]
    fn row_action_matching_the_grid_action_is_equivariant() {
        // squaring is invariant under the flip, so the trivial code action commutes with it
        let action = FiniteAction::new(vec![vec![2, 1, 0]], vec![CodeAction::Rows(vec![0, 1, 2])]).unwrap();
        let score = equivariance_metric(&squares(), &action, Aggregator::Max, Aggregator::Max).unwrap();
        assert_eq!(score, QValue::TOP);
    }

    #[test]
    fn invalid_indices_are_rejected() {
        let bad = FiniteAction::new(vec![vec![0, 1, 3]], vec![CodeAction::Rows(vec![0, 1, 2])]).unwrap();
        assert!(matches!(
            equivariance_metric(&squares(), &bad, Aggregator::Max, Aggregator::Max),
            Err(Error::InvalidAction(_))
        ));
        let short = FiniteAction::new(vec![vec![0, 1, 2]], vec![CodeAction::Rows(vec![0, 1])]).unwrap();
        assert!(equivariance_metric(&squares(), &short, Aggregator::Max, Aggregator::Max).is_err());
        assert!(FiniteAction::new(vec![vec![0, 1, 2]], vec![]).is_err());
        let wide = FiniteAction::identity(3, 2);
        assert!(equivariance_metric(&squares(), &wide, Aggregator::Max, Aggregator::Max).is_err());
    }
}
