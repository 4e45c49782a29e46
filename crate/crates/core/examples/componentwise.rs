//! Per-factor modularity scores for every reference encoder. A zero means the factor's
//! code block does not move when the other factors change.

use dismetrics::metrics::{product_via_approximation, product_via_constancy};
use dismetrics::premetric::Aggregator;
use dismetrics::synth::{encode_all, GeneratorSpec};

fn main() -> dismetrics::Result<()> {
    let datasets = encode_all(&GeneratorSpec::default())?;
    println!("{:<11} {:>26}   {:>26}", "", "radius per factor", "pairwise max per factor");
    for ds in &datasets {
        let ball = product_via_approximation(&ds.table, Aggregator::Max, Aggregator::Max)?;
        let pairs = product_via_constancy(&ds.table, Aggregator::Max, Aggregator::Max)?;
        let fmt = |v: &[dismetrics::QValue]| v.iter().map(|q| format!("{:>8.4}", q.value())).collect::<String>();
        println!("{:<11} {}   {}", ds.id, fmt(&ball.report.per_component), fmt(&pairs.per_component));
    }

    // where does the duplicate encoder's first block move most?
    let dup = datasets.iter().find(|d| d.id == "duplicate").expect("reference encoder");
    let report = product_via_constancy(&dup.table, Aggregator::Max, Aggregator::Max)?;
    println!("\nduplicate, factor 1, diameter at each fixed value:");
    for (v, d) in report.per_fixed_value[0].iter().enumerate() {
        println!("  y1 = {:.1}: {:.4}", dup.grid().factors()[0].values[v][0], d.value());
    }
    Ok(())
}
