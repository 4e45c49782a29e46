use proptest::prelude::*;

use dismetrics::grid::{CodePartition, CodeTable, FactorGrid};
use dismetrics::metrics::{contraction_metric, ContractionScope};
use dismetrics::premetric::{euclidean, Aggregator};
use dismetrics::quantale::QValue;
use dismetrics::solvers::{affine_fit, geometric_median, smallest_enclosing_ball, FitObjective};

fn qvalue() -> impl Strategy<Value = QValue> {
    prop_oneof![
        9 => (0.0..1e6_f64).prop_map(|v| QValue::new(v).unwrap()),
        1 => Just(QValue::BOTTOM),
    ]
}

fn cloud(dim: usize, max_len: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0..10.0_f64, dim), 1..max_len)
}

proptest! {
    #[test]
    fn aggregators_stay_between_zero_and_max(values in prop::collection::vec(0.0..100.0_f64, 0..40)) {
        let max = Aggregator::Max.apply(&values);
        for agg in [Aggregator::Mean, Aggregator::Median] {
            let v = agg.apply(&values);
            prop_assert!(v >= 0.0 && v <= max, "{agg}: {v} > {max}");
        }
        prop_assert!(Aggregator::SecondMoment.apply(&values) <= max * max * (1.0 + 1e-12));
        prop_assert!(Aggregator::Sum.apply(&values) >= max);
    }

    #[test]
    fn aggregators_ignore_order(mut values in prop::collection::vec(0.0..100.0_f64, 1..30), seed in any::<u64>()) {
        let before: Vec<f64> = Aggregator::ALL.iter().map(|a| a.apply(&values)).collect();
        let shift = seed as usize % values.len();
        values.rotate_left(shift);
        values.reverse();
        for (agg, b) in Aggregator::ALL.iter().zip(before) {
            let a = agg.apply(&values);
            prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0), "{agg}: {a} vs {b}");
        }
    }

    #[test]
    fn tensor_and_hom_are_monotone(a in qvalue(), b in qvalue(), c in qvalue()) {
        // a ⪯ b means a is numerically at least b
        let (lo, hi) = if a.precedes(b) { (a, b) } else { (b, a) };
        prop_assert!(lo.tensor(c).precedes(hi.tensor(c)));
        prop_assert!(c.hom(lo).precedes(c.hom(hi)));
        prop_assert!(hi.hom(c).precedes(lo.hom(c)));
    }

    #[test]
    fn hom_is_never_worse_than_its_target(s in qvalue(), t in qvalue()) {
        prop_assert!(t.precedes(s.hom(t)));
        prop_assert_eq!(QValue::TOP.hom(t), t);
    }

    #[test]
    fn enclosing_ball_contains_every_point(points in cloud(3, 40)) {
        let ball = smallest_enclosing_ball(&points).unwrap();
        let scale = points.iter().flatten().fold(1.0_f64, |m, v| m.max(v.abs()));
        for p in &points {
            prop_assert!(ball.contains(p, 1e-9 * scale));
        }
        // a minimal ball is never wider than the bounding box diagonal allows
        let far = points.iter().map(|p| euclidean(p, &points[0])).fold(0.0, f64::max);
        prop_assert!(ball.radius.value() <= far + 1e-9 * scale);
    }

    #[test]
    fn median_beats_every_sample_point(points in cloud(2, 25)) {
        let (_, value) = geometric_median(&points).unwrap();
        for c in &points {
            let at_c = points.iter().map(|p| euclidean(p, c)).sum::<f64>() / points.len() as f64;
            prop_assert!(value.value() <= at_c + 1e-6 * at_c.max(1.0));
        }
    }

    #[test]
    fn fit_value_ignores_sample_order(
        xs in prop::collection::vec(prop::collection::vec(-5.0..5.0_f64, 2), 6..20),
        noise in prop::collection::vec(-0.5..0.5_f64, 20),
    ) {
        let ys: Vec<Vec<f64>> = xs
            .iter()
            .zip(&noise)
            .map(|(x, e)| vec![2.0 * x[0] - x[1] + e, x[1] + 0.5 * e])
            .collect();
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.reverse();
        let xs_r: Vec<Vec<f64>> = order.iter().map(|&i| xs[i].clone()).collect();
        let ys_r: Vec<Vec<f64>> = order.iter().map(|&i| ys[i].clone()).collect();
        for objective in FitObjective::ALL {
            let (_, a) = affine_fit(&xs, &ys, objective).unwrap();
            let (_, b) = affine_fit(&xs_r, &ys_r, objective).unwrap();
            let tol = 1e-6 * a.value().max(1.0);
            prop_assert!((a.value() - b.value()).abs() <= tol, "{objective}: {a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn contraction_ignores_per_block_sign_flips(
        coeffs in prop::collection::vec(-2.0..2.0_f64, 3),
        flips in prop::collection::vec(any::<bool>(), 3),
    ) {
        let grid = FactorGrid::uniform(3, &[0.0, 0.5, 1.0]).unwrap();
        let code = |y: &[f64]| -> Vec<f64> { (0..3).map(|i| coeffs[i] * y[i] + y[(i + 1) % 3].powi(2)).collect() };
        let table = CodeTable::from_fn(grid.clone(), CodePartition::scalar(3), code).unwrap();
        let flipped = CodeTable::from_fn(grid, CodePartition::scalar(3), |y| {
            code(y).into_iter().zip(&flips).map(|(z, &f)| if f { -z } else { z }).collect()
        })
        .unwrap();
        for agg in [Aggregator::Max, Aggregator::Mean, Aggregator::SecondMoment] {
            for scope in [ContractionScope::Whole, ContractionScope::PerComponent] {
                let a = contraction_metric(&table, agg, scope).unwrap().overall.value();
                let b = contraction_metric(&flipped, agg, scope).unwrap().overall.value();
                prop_assert!((a - b).abs() <= 1e-12, "{agg} {scope:?}: {a} vs {b}");
            }
        }
    }
}
