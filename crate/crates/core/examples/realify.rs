//! Complex series seen as pairs of real series in twice as many variables.

use formal_germs::expr::Variables;
use formal_germs::series::{realify, realify_map};
use formal_germs::{FormalMap, FormalSeries, GaussianRational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 4;
    let zw = Variables::new(["z", "w"]);
    let real = Variables::real_pairs(2);
    let f: FormalSeries<GaussianRational> = zw.parse_series("w - (2 + i)*z - z^2", k, 64)?;
    let (re, im) = realify(&f);
    println!("f      = {}", zw.print_series(&f));
    println!("Re f   = {}", real.print_series(&re));
    println!("Im f   = {}", real.print_series(&im));

    let phi: FormalMap<GaussianRational> = zw.parse_map("(i*z, w + z)", k, 64)?;
    println!("realified map = {}", real.print_map(&realify_map(&phi)?));
    Ok(())
}
