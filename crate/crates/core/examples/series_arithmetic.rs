//! Truncated series: ring operations, substitution and derivatives.

use formal_germs::expr::Variables;
use formal_germs::{FormalSeries, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = Variables::new(["x", "y"]);
    let k = 5;
    let f: FormalSeries<Rational> = vars.parse_series("1 + x - 2*y^2", k, 64)?;
    let g: FormalSeries<Rational> = vars.parse_series("x*y + 1/3*x^3", k, 64)?;
    println!("f = {}", vars.print_series(&f));
    println!("g = {}", vars.print_series(&g));
    println!("f + g   = {}", vars.print_series(&f.add(&g)?));
    println!("f * g   = {}", vars.print_series(&f.mul(&g)?));
    println!("f^3     = {}  (terms above degree {k} dropped)", vars.print_series(&f.pow(3)));
    println!("d/dx g  = {}", vars.print_series(&g.derivative(0)?));
    println!("order(g) = {:?}, initial exponent {:?}", g.order(), g.initial_exponent());

    let sub: Vec<FormalSeries<Rational>> = vec![vars.parse_series("x + y", k, 64)?, vars.parse_series("x^2", k, 64)?];
    println!("g(x + y, x^2) = {}", vars.print_series(&g.substitute(&sub)?));
    Ok(())
}
