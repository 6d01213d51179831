//! Pushing vector fields forward along coordinate changes.

use formal_germs::dynamics::{is_order_k_field_equivalence, pushforward_field, VectorFieldGerm};
use formal_germs::expr::Variables;
use formal_germs::{FormalMap, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 6;
    let z = Variables::new(["z"]);
    let xi = VectorFieldGerm::new(z.parse_tuple::<Rational>("z^2", k, 64)?)?;
    let doubling: FormalMap<Rational> = z.parse_map("2*z", k, 64)?;
    println!("z^2 d/dz under z -> 2z: {} d/dz", z.print_tuple(pushforward_field(&xi, &doubling)?.components()));

    let zw = Variables::new(["z", "w"]);
    let phi: FormalMap<Rational> = zw.parse_map("(2*z, w + z^2)", k, 64)?;
    let field = VectorFieldGerm::new(zw.parse_tuple::<Rational>("(z^2, w)", k, 64)?)?;
    let pushed = pushforward_field(&field, &phi)?;
    println!("(z^2, w) pushed forward: {}", zw.print_tuple(pushed.components()));

    let truncated = VectorFieldGerm::new(zw.parse_tuple::<Rational>("(1/2*z^2, w - 1/4*z^2)", k, 64)?)?;
    for order in [3, 4] {
        let r = is_order_k_field_equivalence(&phi, std::slice::from_ref(&field), std::slice::from_ref(&truncated), order)?;
        println!("dropping the cubic term, order {order}: holds = {}", r.holds);
    }
    Ok(())
}
