//! Grauert–Hironaka division of truncated series.

use std::ops::Bound;

use crate::error::{check_dim, Error, Result};
use crate::ideal::{jet_ideal, IdealPresentation};
use crate::monomial::{MultiIndex, Staircase};
use crate::scalar::Field;
use crate::series::FormalSeries;

/// `f = Σ q_j g_j + r` modulo `m^{K+1}`, with no term of `r` in the staircase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult<F: Field> {
    pub quotients: Vec<FormalSeries<F>>,
    pub remainder: FormalSeries<F>,
    /// `∪ (α_j + N^n)` over the divisors' initial exponents.
    pub staircase: Staircase,
    /// The working truncation `K`.
    pub truncation: u32,
}

impl<F: Field> DivisionResult<F> {
    /// `f - Σ q_j g_j - r` up to degree `K`; zero whenever the division identity holds.
    pub fn residual(&self, f: &FormalSeries<F>, divisors: &[FormalSeries<F>]) -> Result<FormalSeries<F>> {
        let k = self.truncation;
        let mut acc = f.truncate(k)?.sub(&self.remainder)?;
        for (q, g) in self.quotients.iter().zip(divisors) {
            // q is only determined up to degree K - ord(g), which is all the product needs
            acc = acc.sub(&q.mul_to(g, k))?;
        }
        Ok(acc)
    }
}

/// Divides `f` by `divisors`, exactly up to degree `k`.
///
/// Walks the remainder in ascending monomial order, cancelling each term
/// that lies in the staircase with the lowest-indexed divisor whose initial
/// exponent divides it. Cancelling a term only creates larger terms, so
/// every term is visited at most once.
pub fn formal_division<F: Field>(f: &FormalSeries<F>, divisors: &[FormalSeries<F>], k: u32) -> Result<DivisionResult<F>> {
    if divisors.is_empty() {
        return Err(Error::EmptyDivisorList);
    }
    let n = f.dim();
    let mut inits: Vec<(MultiIndex, F)> = Vec::with_capacity(divisors.len());
    for (j, g) in divisors.iter().enumerate() {
        check_dim(n, g.dim())?;
        let (e, c) = g.initial_term().ok_or(Error::ZeroDivisor { index: j })?;
        if k > g.truncation() {
            return Err(Error::InsufficientTruncation { required: k, available: g.truncation() });
        }
        inits.push((e.clone(), c.inv().expect("nonzero")));
    }
    let staircase = Staircase::from_points(n, inits.iter().map(|(e, _)| e))?;
    let mut remainder = f.truncate(k)?;
    let mut quotients: Vec<FormalSeries<F>> =
        inits.iter().map(|(e, _)| FormalSeries::zero(n, k - e.degree().min(k))).collect();

    let mut cursor: Option<MultiIndex> = None;
    loop {
        let lower = cursor.as_ref().map_or(Bound::Unbounded, Bound::Excluded);
        let step = remainder.terms.range((lower, Bound::Unbounded)).find_map(|(e, c)| {
            inits.iter().position(|(a, _)| a.divides(e)).map(|j| (e.clone(), c.clone(), j))
        });
        let Some((beta, c, j)) = step else { break };
        let shift = beta.checked_sub(&inits[j].0).expect("divisible");
        let factor = c * &inits[j].1;
        quotients[j].add_term(shift.clone(), &factor);
        remainder.sub_scaled_shifted(&factor, &shift, &divisors[j]);
        debug_assert!(remainder.coeff(&beta).is_zero());
        cursor = Some(beta);
    }
    Ok(DivisionResult { quotients, remainder, staircase, truncation: k })
}

/// The normal form of `f` modulo `I` at truncation `k`.
///
/// Divides by ideal elements (jets) realizing the vertices of the degree-`k`
/// diagram, so the remainder avoids the whole diagram and is unique.
pub fn reduce_mod_ideal<F: Field>(f: &FormalSeries<F>, ideal: &IdealPresentation<F>, k: u32) -> Result<FormalSeries<F>> {
    check_dim(ideal.dim(), f.dim())?;
    let jet = jet_ideal(ideal, k)?;
    if jet.is_empty() {
        return f.truncate(k);
    }
    let diagram = Staircase::from_points(ideal.dim(), jet.leading_exponents())?;
    let divisors: Vec<FormalSeries<F>> =
        diagram.vertices().map(|v| jet.row(v).expect("vertex is a pivot").clone()).collect();
    Ok(formal_division(f, &divisors, k)?.remainder)
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::strategies::series;

    const K: u32 = 6;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn division_identity_and_remainder_support(
            f in series(3, K, 0, 8),
            divisors in prop::collection::vec(series(3, K, 0, 4), 1..=3),
        ) {
            prop_assume!(divisors.iter().all(|g| !g.is_zero()));
            let res = formal_division(&f, &divisors, K)?;
            prop_assert!(res.residual(&f, &divisors)?.is_zero());
            for (e, _) in res.remainder.terms() {
                prop_assert!(!res.staircase.contains(e)?);
            }
        }
    }
}
