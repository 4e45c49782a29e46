//! Equivariance under the reflection `y ↦ 1 − y` of each factor, acting on codes by the
//! matching affine reflection. The identity encoder commutes with it; a squashing encoder
//! does not.

use dismetrics::grid::{CodePartition, CodeTable, FactorGrid};
use dismetrics::metrics::{equivariance_metric, CodeAction, FiniteAction};
use dismetrics::premetric::Aggregator;
use dismetrics::solvers::AffineMap;

type Encoder = fn(&[f64]) -> Vec<f64>;

fn main() -> dismetrics::Result<()> {
    let grid = FactorGrid::uniform(2, &[0.0, 0.25, 0.5, 0.75, 1.0])?;
    let n = grid.len();

    // one group element per factor: reflect that factor, leave the other alone
    let mut y_maps = Vec::new();
    let mut z_maps = Vec::new();
    for i in 0..2 {
        y_maps.push(
            (0..n)
                .map(|k| {
                    let mut t = grid.tuple_of(k);
                    t[i] = 4 - t[i];
                    grid.index_of(&t)
                })
                .collect::<Result<Vec<_>, _>>()?,
        );
        let mut map = AffineMap::zeros(2, 2);
        map.matrix[0][0] = 1.0;
        map.matrix[1][1] = 1.0;
        map.matrix[i][i] = -1.0;
        map.offset[i] = 1.0;
        z_maps.push(CodeAction::Affine(map));
    }
    let action = FiniteAction::new(y_maps, z_maps)?;

    let encoders: [(&str, Encoder); 3] = [
        ("identity", |y| y.to_vec()),
        ("swap", |y| vec![y[1], y[0]]),
        ("squared", |y| vec![y[0] * y[0], y[1]]),
    ];
    for (name, f) in encoders {
        let table = CodeTable::from_fn(grid.clone(), CodePartition::scalar(2), f)?;
        let worst = equivariance_metric(&table, &action, Aggregator::Max, Aggregator::Max)?;
        let typical = equivariance_metric(&table, &action, Aggregator::Max, Aggregator::Mean)?;
        println!("{name:<9} max {:.4}   mean {:.4}", worst.value(), typical.value());
    }
    Ok(())
}
