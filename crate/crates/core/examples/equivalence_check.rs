//! Finite-order equivalence of families and sets of ideals.

use formal_germs::equivalence::{equivalence_horizon, is_order_k_equivalence, jet_coset_membership, GermFamily, MatchMode};
use formal_germs::expr::Variables;
use formal_germs::ideal::IdealPresentation;
use formal_germs::{FormalMap, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = Variables::new(["z", "w"]);
    let k = 6;
    let members = |mode, gens: &[&str]| -> Result<GermFamily<Rational>, Box<dyn std::error::Error>> {
        let ideals = gens
            .iter()
            .map(|g| Ok(IdealPresentation::new(2, vec![vars.parse_series(g, k, 64)?])?))
            .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;
        Ok(GermFamily::from_ideals(2, mode, ideals)?)
    };
    let phi: FormalMap<Rational> = vars.parse_map("(z, w + z)", k, 64)?;

    let left = members(MatchMode::Set, &["w - 3*z - z^3", "w - 5*z"])?;
    let right = members(MatchMode::Set, &["w - 6*z", "w - 4*z - 2*z^3"])?;
    let report = is_order_k_equivalence(&phi, &left, &right, 3)?;
    println!("sets at order 3: holds = {}, matching {:?}", report.holds, report.matching());
    let report = is_order_k_equivalence(&phi, &left, &right, 4)?;
    println!("sets at order 4: holds = {}, failure {:?}", report.holds, report.failure);

    let left = members(MatchMode::Family, &["w - 2*z - z^4"])?;
    let right = members(MatchMode::Family, &["w - 3*z"])?;
    let horizon = equivalence_horizon(&left, &right, &phi, k)?;
    println!("family horizon: verdicts {:?}, first failure {:?}", horizon.verdicts, horizon.first_failure);

    let coset = jet_coset_membership(&phi.truncate(3)?, &left, &right)?;
    println!("3-jet of the map carries the right 3-jets onto the left ones: {}", coset.holds);
    Ok(())
}
