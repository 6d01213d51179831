//! Truncated multivariate formal power series over an exact field.

mod map;
mod realify;

pub use map::FormalMap;
pub use realify::{realify, realify_map};

use std::collections::{BTreeMap, HashMap};

use crate::error::{check_dim, Error, Result};
use crate::monomial::MultiIndex;
use crate::scalar::Field;

/// A power series in `dim` variables known exactly up to total degree `trunc`.
///
/// Terms of degree above the truncation are unknown and never stored, and
/// no zero coefficient is stored. Terms are kept in ascending monomial
/// order, so the first stored term is the initial term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalSeries<F> {
    pub(crate) dim: usize,
    pub(crate) trunc: u32,
    pub(crate) terms: BTreeMap<MultiIndex, F>,
}

impl<F: Field> FormalSeries<F> {
    pub fn zero(dim: usize, trunc: u32) -> Self {
        FormalSeries { dim, trunc, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, trunc: u32, c: F) -> Self {
        Self::monomial(MultiIndex::zero(dim), c, trunc)
    }

    pub fn one(dim: usize, trunc: u32) -> Self {
        Self::constant(dim, trunc, F::one())
    }

    /// The coordinate function `t_var`.
    pub fn variable(dim: usize, var: usize, trunc: u32) -> Self {
        Self::monomial(MultiIndex::unit(dim, var), F::one(), trunc)
    }

    pub fn monomial(exp: MultiIndex, coeff: F, trunc: u32) -> Self {
        let dim = exp.dim();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() && exp.degree() <= trunc {
            terms.insert(exp, coeff);
        }
        FormalSeries { dim, trunc, terms }
    }

    /// Builds a series from arbitrary terms; duplicates are summed and
    /// terms above the truncation dropped.
    pub fn from_terms(dim: usize, trunc: u32, terms: impl IntoIterator<Item = (MultiIndex, F)>) -> Result<Self> {
        let mut s = Self::zero(dim, trunc);
        for (e, c) in terms {
            check_dim(dim, e.dim())?;
            s.add_term(e, &c);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> F {
        self.terms.get(exp).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&MultiIndex::zero(self.dim))
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.contains_key(&MultiIndex::zero(self.dim))
    }

    /// Smallest degree of a stored term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(MultiIndex::degree)
    }

    /// Exponent of the smallest nonzero monomial; `None` marks the zero series.
    pub fn initial_exponent(&self) -> Option<&MultiIndex> {
        self.terms.keys().next()
    }

    pub fn initial_term(&self) -> Option<(&MultiIndex, &F)> {
        self.terms.iter().next()
    }

    /// Adds `c·t^exp` in place, ignoring it above the truncation.
    pub(crate) fn add_term(&mut self, exp: MultiIndex, c: &F) {
        if exp.degree() > self.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self -= c · t^shift · other`, keeping degrees up to `self`'s truncation.
    pub(crate) fn sub_scaled_shifted(&mut self, c: &F, shift: &MultiIndex, other: &Self) {
        let budget = self.trunc.saturating_sub(shift.degree());
        if shift.degree() > self.trunc {
            return;
        }
        for (e, a) in other.terms.iter() {
            if e.degree() > budget {
                // ascending order groups by degree: nothing later fits
                break;
            }
            let prod = a.clone() * c;
            self.add_term(e + shift, &(-prod));
        }
    }

    pub(crate) fn remove_term(&mut self, exp: &MultiIndex) -> Option<F> {
        self.terms.remove(exp)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone().with_truncation_at_most(other.trunc);
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone().with_truncation_at_most(other.trunc);
        for (e, c) in other.terms.iter() {
            out.add_term(e.clone(), &(-c.clone()));
        }
        Ok(out)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(self.mul_to(other, self.trunc.min(other.trunc)))
    }

    /// Product keeping degrees up to `trunc`. The caller guarantees that the
    /// known parts of both factors determine those degrees.
    pub(crate) fn mul_to(&self, other: &Self, trunc: u32) -> Self {
        let mut out = Self::zero(self.dim, trunc);
        for (a, ca) in self.terms.iter() {
            let da = a.degree();
            if da > trunc {
                break;
            }
            for (b, cb) in other.terms.iter() {
                if da + b.degree() > trunc {
                    break;
                }
                out.add_term(a + b, &(ca.clone() * cb));
            }
        }
        out
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim, self.trunc);
        }
        FormalSeries {
            dim: self.dim,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a.clone() * c)).collect(),
        }
    }

    /// `self^e`, truncated.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.dim, self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_to(&base, self.trunc);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_to(&base, self.trunc);
            }
        }
        acc
    }

    /// The degree-`d` jet: terms of degree at most `d`.
    pub fn truncate(&self, d: u32) -> Result<Self> {
        if d > self.trunc {
            return Err(Error::InsufficientTruncation { required: d, available: self.trunc });
        }
        Ok(self.clone().with_truncation_at_most(d))
    }

    /// Alias of [`truncate`](Self::truncate) under the jet naming.
    pub fn jet(&self, k: u32) -> Result<Self> {
        self.truncate(k)
    }

    /// Lowers the truncation to `min(K, d)`, dropping what is no longer known.
    pub fn with_truncation_at_most(mut self, d: u32) -> Self {
        if d < self.trunc {
            self.trunc = d;
            self.terms.retain(|e, _| e.degree() <= d);
        }
        self
    }

    /// Membership in `m^k`: every term has degree at least `k`.
    ///
    /// Needs degrees below `k` to be known.
    pub fn vanishes_to_order(&self, k: u32) -> Result<bool> {
        if k > 0 && self.trunc < k - 1 {
            return Err(Error::InsufficientTruncation { required: k - 1, available: self.trunc });
        }
        Ok(self.order().is_none_or(|o| o >= k))
    }

    /// Formal partial derivative; known one degree less.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if var >= self.dim {
            return Err(Error::InvalidArgument(format!("variable index {var} out of range for {} variables", self.dim)));
        }
        if self.trunc == 0 {
            return Err(Error::InsufficientTruncation { required: 1, available: 0 });
        }
        let mut out = Self::zero(self.dim, self.trunc - 1);
        for (e, c) in self.terms.iter() {
            let k = e.exponents()[var];
            if k == 0 {
                continue;
            }
            let mut ex = e.exponents().to_vec();
            ex[var] -= 1;
            out.add_term(MultiIndex::new(ex), &(c.clone() * &F::from_integer(i64::from(k))));
        }
        Ok(out)
    }

    /// Substitutes `t_j -> components[j]`.
    ///
    /// The components may live in a different number of variables but must
    /// vanish at the origin. Every coefficient up to the result truncation
    /// `min(K_self, K_components)` equals that of the untruncated substitution.
    pub fn substitute(&self, components: &[FormalSeries<F>]) -> Result<Self> {
        check_dim(self.dim, components.len())?;
        let Some(first) = components.first() else {
            return Ok(self.clone());
        };
        let target_dim = first.dim;
        let mut trunc = self.trunc;
        for (j, c) in components.iter().enumerate() {
            check_dim(target_dim, c.dim)?;
            if c.has_constant_term() {
                return Err(Error::ConstantTerm { component: j });
            }
            trunc = trunc.min(c.trunc);
        }
        let comps: Vec<Self> = components.iter().map(|c| c.clone().with_truncation_at_most(trunc)).collect();
        let mut powers: HashMap<MultiIndex, Self> = HashMap::new();
        let mut out = Self::zero(target_dim, trunc);
        for (e, c) in self.terms.iter() {
            // each component lies in m, so t^e maps into m^|e|
            if e.degree() > trunc {
                break;
            }
            let p = power_product(e, &comps, trunc, &mut powers);
            for (pe, pc) in p.terms.iter() {
                out.add_term(pe.clone(), &(pc.clone() * c));
            }
        }
        Ok(out)
    }

    /// Evaluates the stored polynomial at a point.
    pub fn evaluate(&self, point: &[F]) -> Result<F> {
        check_dim(self.dim, point.len())?;
        let mut acc = F::zero();
        for (e, c) in self.terms.iter() {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e.exponents()) {
                for _ in 0..k {
                    term = term * x;
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// The same series viewed in `new_dim` variables, with variable `j`
    /// renamed to `j + offset`.
    pub fn embed(&self, new_dim: usize, offset: usize) -> Self {
        assert!(offset + self.dim <= new_dim, "embedding does not fit");
        let mut out = Self::zero(new_dim, self.trunc);
        for (e, c) in self.terms.iter() {
            let mut ex = vec![0; new_dim];
            ex[offset..offset + self.dim].copy_from_slice(e.exponents());
            out.add_term(MultiIndex::new(ex), c);
        }
        out
    }

    pub fn map_coefficients<G: Field>(&self, f: impl Fn(&F) -> G) -> FormalSeries<G> {
        let mut out = FormalSeries::zero(self.dim, self.trunc);
        for (e, c) in self.terms.iter() {
            out.add_term(e.clone(), &f(c));
        }
        out
    }
}

impl<F: Field> std::fmt::Debug for FormalSeries<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars = crate::expr::Variables::indexed("t", self.dim);
        write!(f, "{} + O({})", vars.print_series(self), self.trunc + 1)
    }
}

fn power_product<F: Field>(
    e: &MultiIndex,
    comps: &[FormalSeries<F>],
    trunc: u32,
    cache: &mut HashMap<MultiIndex, FormalSeries<F>>,
) -> FormalSeries<F> {
    if let Some(p) = cache.get(e) {
        return p.clone();
    }
    let dim = comps[0].dim;
    let result = match e.exponents().iter().position(|&k| k > 0) {
        None => FormalSeries::one(dim, trunc),
        Some(j) => {
            let mut lower = e.exponents().to_vec();
            lower[j] -= 1;
            let prev = power_product(&MultiIndex::new(lower), comps, trunc, cache);
            prev.mul_to(&comps[j], trunc)
        }
    };
    cache.insert(e.clone(), result.clone());
    result
}
