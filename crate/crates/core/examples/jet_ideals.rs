//! Jet spaces, diagrams of initial exponents and membership by order.

use formal_germs::expr::Variables;
use formal_germs::ideal::{diagram, jet_ideal, jet_membership, membership_up_to, IdealPresentation};
use formal_germs::monomial::chain_stabilization;
use formal_germs::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = Variables::new(["x", "y"]);
    let k = 8;
    let parse = |s: &str| vars.parse_series::<Rational>(s, k, 64);
    let ideal = IdealPresentation::new(2, vec![parse("y^2 - x^3")?, parse("x*y")?])?;

    let jet = jet_ideal(&ideal, 3)?;
    println!("3-jet space has dimension {}:", jet.len());
    for b in jet.basis() {
        println!("  {}", vars.print_series(b));
    }

    let chain: Vec<_> = (0..=k).map(|d| diagram(&ideal, d)).collect::<Result<_, _>>()?;
    for (d, s) in chain.iter().enumerate() {
        println!("diagram at degree {d}: {s}");
    }
    println!("stabilization: {:?}", chain_stabilization(&chain)?);

    let f = parse("x^3 + y^3")?;
    for order in 1..=5 {
        println!("x^3 + y^3 in I + m^{order}: {}", jet_membership(&f, &ideal, order)?);
    }
    println!("x^5 scan: {:?}", membership_up_to(&parse("x^5")?, &ideal, k)?);
    Ok(())
}
