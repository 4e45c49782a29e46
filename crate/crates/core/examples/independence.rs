//! Information-theoretic scores for stochastic encoders with discrete codes: how far each
//! output distribution is from a product, and whether block `i` listens only to factor `i`.

use dismetrics::grid::FactorGrid;
use dismetrics::metrics::{
    input_independence_by_component, kl_divergence, output_independence, DiscreteKernel,
};
use dismetrics::premetric::Aggregator;

/// A noisy bit reporting `bit` correctly with probability `1 - noise`.
fn bit(value: bool, noise: f64) -> Vec<f64> {
    if value { vec![noise, 1.0 - noise] } else { vec![1.0 - noise, noise] }
}

fn main() -> dismetrics::Result<()> {
    let grid = FactorGrid::uniform(2, &[0.0, 1.0])?;
    let tuples: Vec<Vec<usize>> = (0..grid.len()).map(|k| grid.tuple_of(k)).collect();

    let faithful = DiscreteKernel::from_marginals(
        &tuples.iter().map(|t| vec![bit(t[0] == 1, 0.1), bit(t[1] == 1, 0.1)]).collect::<Vec<_>>(),
    )?;
    let crossed = DiscreteKernel::from_marginals(
        &tuples.iter().map(|t| vec![bit(t[1] == 1, 0.1), bit(t[0] == 1, 0.1)]).collect::<Vec<_>>(),
    )?;
    let xor = DiscreteKernel::from_marginals(
        &tuples.iter().map(|t| vec![bit(t[0] != t[1], 0.0), bit(t[1] == 1, 0.0)]).collect::<Vec<_>>(),
    )?;
    // both bits always agree, whatever the input
    let coupled = DiscreteKernel::new(vec![2, 2], vec![vec![0.5, 0.0, 0.0, 0.5]; grid.len()])?;

    println!("{:<9} {:>10} {:>24}", "kernel", "output", "input, per block");
    for (name, kernel) in [("faithful", &faithful), ("crossed", &crossed), ("xor", &xor), ("coupled", &coupled)] {
        let out = output_independence(kernel, Aggregator::Mean)?;
        let per_block = input_independence_by_component(kernel, &grid)?;
        println!("{name:<9} {:>10.4} {:>12.4}{:>12.4}", out.value(), per_block[0].value(), per_block[1].value());
    }

    let d = kl_divergence(&[0.5, 0.5], &[0.9, 0.1])?;
    println!("\nD(fair coin ‖ 90/10 coin) = {:.4} nats", d.value());
    println!("D(fair coin ‖ certain coin) = {}", kl_divergence(&[0.5, 0.5], &[1.0, 0.0])?);
    Ok(())
}
