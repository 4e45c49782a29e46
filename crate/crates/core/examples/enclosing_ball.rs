//! Smallest enclosing balls of random clouds, compared with the diameter bounds
//! `D / 2 ≤ r ≤ D · √(n / (2(n + 1)))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dismetrics::solvers::{diameter, smallest_enclosing_ball, smallest_enclosing_ball_seeded};

fn main() -> dismetrics::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    println!("{:>4} {:>6} {:>10} {:>10} {:>10}", "dim", "points", "radius", "D/2", "Jung");
    for dim in 1..=4 {
        let points: Vec<Vec<f64>> = (0..200)
            .map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let ball = smallest_enclosing_ball(&points)?;
        let d = diameter(&points)?.value();
        let n = dim as f64;
        let jung = d * (n / (2.0 * (n + 1.0))).sqrt();
        println!("{dim:>4} {:>6} {:>10.6} {:>10.6} {:>10.6}", points.len(), ball.radius.value(), d / 2.0, jung);
        assert!(points.iter().all(|p| ball.contains(p, 1e-12)));

        // the ball is unique, so the shuffle order does not matter
        let other = smallest_enclosing_ball_seeded(&points, 99)?;
        assert!((other.radius.value() - ball.radius.value()).abs() < 1e-12);
    }
    Ok(())
}
