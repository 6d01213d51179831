//! Division by several series, and normal forms modulo an ideal.

use formal_germs::division::{formal_division, reduce_mod_ideal};
use formal_germs::expr::Variables;
use formal_germs::ideal::IdealPresentation;
use formal_germs::{FormalSeries, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = Variables::new(["x", "y", "z"]);
    let k = 6;
    let parse = |s: &str| vars.parse_series::<Rational>(s, k, 64);
    let f = parse("x*y*z + x^3 - 2*y^2 + z")?;
    let divisors = vec![parse("x + y^2")?, parse("y - z^3")?];
    let res = formal_division(&f, &divisors, k)?;
    for (j, q) in res.quotients.iter().enumerate() {
        println!("q_{j} = {}", vars.print_series(q));
    }
    println!("remainder = {}", vars.print_series(&res.remainder));
    println!("staircase = {}", res.staircase);
    println!("f - sum q_j g_j - r vanishes: {}", res.residual(&f, &divisors)?.is_zero());

    let ideal = IdealPresentation::new(3, divisors)?;
    let g: FormalSeries<Rational> = f.add(&parse("x*z^2 + y*z^2")?)?;
    println!("normal form of f: {}", vars.print_series(&reduce_mod_ideal(&f, &ideal, k)?));
    println!("normal form of g: {}", vars.print_series(&reduce_mod_ideal(&g, &ideal, k)?));
    Ok(())
}
