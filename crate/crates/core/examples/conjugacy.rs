//! Conjugating self-maps and locating the order where two maps part ways.

use formal_germs::dynamics::{conjugate, is_order_k_conjugacy};
use formal_germs::expr::Variables;
use formal_germs::{FormalMap, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = Variables::new(["z"]);
    let k = 6;
    let f: FormalMap<Rational> = vars.parse_map("z + z^2", k, 64)?;
    let phi: FormalMap<Rational> = vars.parse_map("2*z", k, 64)?;
    let g = conjugate(&f, &phi)?;
    println!("phi o f o phi^-1 = {}", vars.print_map(&g));

    let h: FormalMap<Rational> = vars.parse_map("z + 1/2*z^2 + z^5", k, 64)?;
    for order in 1..=k {
        let r = is_order_k_conjugacy(&phi, std::slice::from_ref(&f), std::slice::from_ref(&h), order)?;
        println!("order {order}: holds = {}, contact {:?}", r.holds, r.contact);
    }
    Ok(())
}
