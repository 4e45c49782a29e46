//! Which ground distances are metrics, and how distances between sampled functions
//! behave under composition and products.

use dismetrics::premetric::{
    check_composition_inequality, check_laws_with, check_premetric_laws, check_product_inequality,
    induced_function_distance, squared_euclidean, Aggregator, PointDistance, SampledFunction,
};

fn main() -> dismetrics::Result<()> {
    let points: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64 * 0.5, (i * i) as f64 * 0.1]).collect();

    let euclid = check_premetric_laws(&PointDistance::euclidean(2), &points)?;
    let discrete = check_premetric_laws(&PointDistance::discrete(2), &points)?;
    let squared = check_laws_with(&points, squared_euclidean);
    println!("euclidean metric:        {}", euclid.all_pass());
    println!("discrete metric:         {}", discrete.all_pass());
    println!("squared euclidean:       triangle {} (witness {:?})", squared.triangle, squared.triangle_witness);

    let line: Vec<Vec<f64>> = (0..=4).map(|i| vec![i as f64 / 4.0]).collect();
    let f = SampledFunction::from_fn(line.clone(), |x| vec![x[0]])?;
    let g = SampledFunction::from_fn(line.clone(), |x| vec![x[0] * x[0]])?;
    println!("\ndistance between x and x² on [0, 1]:");
    for agg in Aggregator::ALL {
        let d = induced_function_distance(&PointDistance::euclidean(1), agg, &f, &g)?;
        println!("  {agg:<14} {:.4}", d.value());
    }

    // outer maps defined on every value the inner maps can produce
    let mut outer_inputs: Vec<Vec<f64>> = line.iter().chain(g.outputs()).cloned().collect();
    outer_inputs.sort_by(|a, b| a[0].total_cmp(&b[0]));
    outer_inputs.dedup();
    let half = SampledFunction::from_fn(outer_inputs.clone(), |x| vec![0.5 * x[0]])?;
    let shifted = SampledFunction::from_fn(outer_inputs.clone(), |x| vec![0.5 * x[0] + 0.1])?;
    let steep = SampledFunction::from_fn(outer_inputs, |x| vec![3.0 * x[0]])?;
    println!("\ncomposition, 1-Lipschitz outer maps: {:?}", check_composition_inequality(&f, &g, &half, &shifted)?);
    println!("composition, steep outer map:        {:?}", check_composition_inequality(&f, &g, &steep, &steep)?);
    println!("parallel product:                    {:?}", check_product_inequality(&f, &g, &g, &f)?);
    Ok(())
}
