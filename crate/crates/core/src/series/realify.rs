use crate::error::Result;
use crate::monomial::MultiIndex;
use crate::scalar::{GaussianRational, Rational};

use super::{FormalMap, FormalSeries};
use num_traits::One;

/// Splits a holomorphic series into real and imaginary parts.
///
/// Substitutes `z_j = x_j + i y_j`; the result lives in `2n` real variables
/// ordered `x_1, y_1, ..., x_n, y_n`.
pub fn realify(p: &FormalSeries<GaussianRational>) -> (FormalSeries<Rational>, FormalSeries<Rational>) {
    let n = p.dim();
    let k = p.truncation();
    let subs: Vec<FormalSeries<GaussianRational>> = (0..n)
        .map(|j| {
            FormalSeries::from_terms(
                2 * n,
                k,
                [
                    (MultiIndex::unit(2 * n, 2 * j), GaussianRational::one()),
                    (MultiIndex::unit(2 * n, 2 * j + 1), GaussianRational::i()),
                ],
            )
            .expect("dimensions agree")
        })
        .collect();
    let expanded = if n == 0 { p.clone() } else { p.substitute(&subs).expect("linear substitution") };
    let re = expanded.map_coefficients(|c| c.re.clone());
    let im = expanded.map_coefficients(|c| c.im.clone());
    (re, im)
}

/// The real map `(x, y) -> (Re Φ, Im Φ)` of a holomorphic map, in the
/// variable order used by [`realify`].
pub fn realify_map(phi: &FormalMap<GaussianRational>) -> Result<FormalMap<Rational>> {
    let mut comps = Vec::with_capacity(2 * phi.dim());
    for c in phi.components() {
        let (re, im) = realify(c);
        comps.push(re);
        comps.push(im);
    }
    FormalMap::new(comps)
}
