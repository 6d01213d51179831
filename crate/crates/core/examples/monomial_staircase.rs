//! The monomial order and staircases generated by finite point sets.

use formal_germs::monomial::{chain_stabilization, monomials_up_to};
use formal_germs::{MultiIndex, Staircase};

fn main() -> formal_germs::Result<()> {
    // degree first, then the last exponent, then the one before it
    let mut sorted = monomials_up_to(2, 2);
    sorted.sort();
    let listed: Vec<String> = sorted.iter().map(MultiIndex::to_string).collect();
    println!("monomials of degree <= 2, ascending: {}", listed.join(" < "));

    let points: Vec<MultiIndex> = ["(3,0)", "(1,2)", "(2,2)", "(0,4)", "(1,3)"].iter().map(|s| s.parse().unwrap()).collect();
    let s = Staircase::from_points(2, &points)?;
    println!("staircase of {} points has vertices {s}", points.len());
    for probe in ["(2,1)", "(1,1)", "(5,5)"] {
        let e: MultiIndex = probe.parse().unwrap();
        println!("  {probe} in staircase: {}", s.contains(&e)?);
    }

    let chain = [Staircase::parse("[(3,0)]", 2)?, s.clone(), s.clone(), s];
    println!("chain stabilization: {:?}", chain_stabilization(&chain)?);
    Ok(())
}
