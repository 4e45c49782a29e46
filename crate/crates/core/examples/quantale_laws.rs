//! The Lawvere quantale `[0, ∞]` up close: order, tensor, hom, and the adjunction
//! `a ⊗ b ⪯ c ⟺ a ⪯ b ⊸ c` checked on a grid of dyadic values.

use dismetrics::quantale::{check_adjunction, from_unit, to_unit, BoolQ, QValue};

fn main() -> dismetrics::Result<()> {
    let values: Vec<QValue> = [0.0, 0.25, 1.0, 2.5, 8.0, f64::INFINITY]
        .into_iter()
        .map(QValue::new)
        .collect::<Result<_, _>>()?;

    println!("hom  s ⊸ t  (rows s, columns t)");
    print!("{:>8}", "");
    for t in &values {
        print!("{:>8}", t.value());
    }
    println!();
    for s in &values {
        print!("{:>8}", s.value());
        for t in &values {
            print!("{:>8}", s.hom(*t).value());
        }
        println!();
    }

    // dyadic steps keep every sum and difference exact
    let mut triples = Vec::new();
    for a in &values {
        for b in &values {
            for c in &values {
                triples.push((*a, *b, *c));
            }
        }
    }
    println!("\nadjunction on {} triples: {}", triples.len(), check_adjunction(&triples));

    let two = QValue::new(2.0)?;
    let three = QValue::new(3.0)?;
    println!("2 ⊗ 3 = {}, 2 ∧ 3 = {} (meet is the larger number), 2 ∨ 3 = {}", two.tensor(three), two.meet(three), two.join(three));
    println!("TOP = {}, BOTTOM = {}", QValue::TOP, QValue::BOTTOM);

    let u = to_unit(two);
    println!("exp(-2) = {:.6}, back again: {}", u.value(), from_unit(u));
    println!("as a truth value: 0 ↦ {:?}, 2 ↦ {:?}", BoolQ::from_score(QValue::TOP), BoolQ::from_score(two));
    Ok(())
}
