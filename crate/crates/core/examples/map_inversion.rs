//! Inverting and composing invertible maps.

use formal_germs::expr::Variables;
use formal_germs::{FormalMap, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = Variables::new(["z", "w"]);
    let k = 6;
    let phi: FormalMap<Rational> = vars.parse_map("(2*z + w^2, w - z^3)", k, 64)?;
    let inv = phi.invert()?;
    println!("phi      = {}", vars.print_map(&phi));
    println!("phi^-1   = {}", vars.print_map(&inv));
    println!("phi o phi^-1 = {}", vars.print_map(&phi.compose(&inv)?));

    let singular: FormalMap<Rational> = vars.parse_map("(z + w, 2*z + 2*w)", k, 64)?;
    println!("(z + w, 2z + 2w) invertible: {}", singular.is_invertible());
    println!("inverting it: {}", singular.invert().unwrap_err());
    Ok(())
}
