//! Builds the shift sequence and checks the level-k shears on the curve windows.
//!
//! Run with `cargo run --example counterexample`.

use std::time::Instant;

use formal_germs::counterexample::{
    build_shift_sequence, membership_horizon, verify_at_order, verify_finite_order_equivalence,
    verify_tangent_obstruction,
};

fn main() -> formal_germs::Result<()> {
    let seq = build_shift_sequence(13)?;
    println!("c_1..c_13 = {:?}", seq.values());
    for t in [0, 1, 5, -3, 21, 1000] {
        println!("horizon({t}) = {:?}", membership_horizon(t, &seq));
    }
    let obstruction = verify_tangent_obstruction(13, &seq, 1000)?;
    println!("tangent obstruction on |t| <= 1000: {}", obstruction.holds);

    let (m_max, n_max) = (10, 32);
    for k in 1..=8 {
        let start = Instant::now();
        let strong = verify_finite_order_equivalence(k, m_max, n_max, k + 3)?;
        let weak = verify_at_order(k, m_max, n_max, k + 3, k + 1, false)?;
        println!(
            "k = {k}: shear by {:>4}; order {}: {} ({} unmatched); order {}: {} ({} boundary) [{:.2?}]",
            strong.shift,
            strong.order,
            if strong.passes { "pass" } else { "fail" },
            strong.genuine.len(),
            weak.order,
            if weak.passes { "pass" } else { "fail" },
            weak.boundary.len(),
            start.elapsed()
        );
        if let Some(u) = strong.genuine.first() {
            println!("    e.g. {} has no partner at order {}", u.curve, strong.order);
        }
    }
    Ok(())
}
