//! The geometric median shrugs off an outlier that drags the mean away.

use dismetrics::premetric::euclidean;
use dismetrics::solvers::{geometric_median, mean_and_variance};

fn main() -> dismetrics::Result<()> {
    let mut points = vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 1.0],
        vec![0.5, 0.5],
    ];
    for outlier in [0.0, 10.0, 100.0, 1000.0] {
        points.push(vec![outlier, outlier]);
        let (median, mad) = geometric_median(&points)?;
        let (mean, var) = mean_and_variance(&points)?;
        println!(
            "outlier at {outlier:>6}: median ({:.4}, {:.4}) mean dist {:.4} | mean ({:.2}, {:.2}) variance {:.1}",
            median[0], median[1], mad.value(), mean[0], mean[1], var.value()
        );
        points.pop();
    }

    // a sample point can itself be the median
    let star = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
    let (center, _) = geometric_median(&star)?;
    println!("\nstar median sits on its hub: distance {:.2e}", euclidean(&center, &star[0]));
    Ok(())
}
