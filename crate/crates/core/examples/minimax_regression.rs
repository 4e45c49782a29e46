//! Fits the same noisy affine data under the three objectives and reports each fit's
//! score under every objective. Each fit wins its own column.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dismetrics::solvers::{affine_fit, FitObjective};

fn main() -> dismetrics::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xs: Vec<Vec<f64>> = (0..300).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
    let ys: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| {
            let spike = if rng.random_bool(0.05) { 3.0 } else { 0.0 };
            vec![
                1.0 + 2.0 * x[0] - x[1] + rng.random_range(-0.1..0.1) + spike,
                0.5 * x[1] + rng.random_range(-0.1..0.1),
            ]
        })
        .collect();

    print!("{:<16}", "fitted for");
    for o in FitObjective::ALL {
        print!("{:>16}", o.name());
    }
    println!();
    for objective in FitObjective::ALL {
        let (map, _) = affine_fit(&xs, &ys, objective)?;
        print!("{:<16}", objective.name());
        for judge in FitObjective::ALL {
            print!("{:>16.5}", judge.evaluate(&map, &xs, &ys));
        }
        println!("   A₀ = [{:.3}, {:.3}], b₀ = {:.3}", map.matrix[0][0], map.matrix[0][1], map.offset[0]);
    }
    Ok(())
}
