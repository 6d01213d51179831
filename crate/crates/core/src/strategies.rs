//! Proptest strategies shared by the property tests.

use proptest::prelude::*;

use crate::monomial::MultiIndex;
use crate::scalar::Rational;
use crate::series::{FormalMap, FormalSeries};

pub(crate) fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

pub(crate) fn exponent(n: usize, max: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max, n).prop_map(MultiIndex::new)
}

/// Up to `terms` terms with degrees in `lo..=k`.
pub(crate) fn series(n: usize, k: u32, lo: u32, terms: usize) -> impl Strategy<Value = FormalSeries<Rational>> {
    prop::collection::vec((exponent(n, k), rational()), 0..=terms).prop_map(move |ts| {
        FormalSeries::from_terms(n, k, ts.into_iter().filter(|(e, _)| e.degree() >= lo)).unwrap()
    })
}

/// A map without constant terms; its linear part may be singular.
pub(crate) fn self_map(n: usize, k: u32) -> impl Strategy<Value = FormalMap<Rational>> {
    prop::collection::vec(series(n, k, 1, 4), n).prop_map(|c| FormalMap::new(c).unwrap())
}

/// An invertible map: small integer linear part plus higher-order terms.
pub(crate) fn invertible_map(n: usize, k: u32) -> impl Strategy<Value = FormalMap<Rational>> {
    (prop::collection::vec(prop::collection::vec(-2i64..=2, n), n), prop::collection::vec(series(n, k, 2, 3), n))
        .prop_filter_map("singular linear part", move |(lin, higher)| {
            let comps = higher
                .into_iter()
                .enumerate()
                .map(|(i, h)| {
                    let linear = FormalSeries::from_terms(
                        n,
                        k,
                        lin[i].iter().enumerate().map(|(j, &a)| (MultiIndex::unit(n, j), Rational::from_integer(a.into()))),
                    )
                    .unwrap();
                    h.add(&linear).unwrap()
                })
                .collect();
            let map = FormalMap::new(comps).ok()?;
            map.is_invertible().then_some(map)
        })
}
