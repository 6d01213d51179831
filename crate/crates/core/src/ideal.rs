//! Ideals given by finite generator lists, and their jets.
//!
//! The `d`-jet of an ideal `I` is a finite-dimensional subspace of the
//! polynomials of degree at most `d`, spanned by the truncations of
//! `t^m · g` over monomials `t^m` and generators `g`. It is stored in
//! reduced row echelon form with respect to the monomial order, pivoting
//! on the smallest exponent of each row, which makes it canonical.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::error::{check_dim, Error, Result};
use crate::monomial::{monomials_up_to, MultiIndex, Staircase};
use crate::scalar::Field;
use crate::series::{FormalMap, FormalSeries};

/// An ideal of `K[[t_1, ..., t_n]]` presented by generators.
///
/// Zero generators are dropped; an empty list is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation<F: Field> {
    dim: usize,
    generators: Vec<FormalSeries<F>>,
}

impl<F: Field> IdealPresentation<F> {
    pub fn new(dim: usize, generators: Vec<FormalSeries<F>>) -> Result<Self> {
        for g in &generators {
            check_dim(dim, g.dim())?;
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealPresentation { dim, generators })
    }

    pub fn zero(dim: usize) -> Self {
        IdealPresentation { dim, generators: Vec::new() }
    }

    /// The whole ring, generated by `1`.
    pub fn unit(dim: usize, trunc: u32) -> Self {
        IdealPresentation { dim, generators: vec![FormalSeries::one(dim, trunc)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[FormalSeries<F>] {
        &self.generators
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    /// Common precision of the generators; unbounded (`u32::MAX`) for the zero ideal.
    pub fn truncation(&self) -> u32 {
        self.generators.iter().map(FormalSeries::truncation).min().unwrap_or(u32::MAX)
    }

    /// Generators composed with `phi`.
    pub fn pull_back(&self, phi: &FormalMap<F>) -> Result<Self> {
        check_dim(self.dim, phi.dim())?;
        let gens = self.generators.iter().map(|g| phi.pull_back(g)).collect::<Result<Vec<_>>>()?;
        IdealPresentation::new(self.dim, gens)
    }

    fn require(&self, d: u32) -> Result<()> {
        let available = self.truncation();
        if d > available {
            return Err(Error::InsufficientTruncation { required: d, available });
        }
        Ok(())
    }
}

/// The space `j^d I` in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JetSpace<F: Field> {
    dim: usize,
    degree: u32,
    rows: BTreeMap<MultiIndex, FormalSeries<F>>,
}

impl<F: Field> JetSpace<F> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of basis vectors.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Basis in ascending order of leading exponent; each has leading coefficient 1.
    pub fn basis(&self) -> impl Iterator<Item = &FormalSeries<F>> {
        self.rows.values()
    }

    pub fn leading_exponents(&self) -> impl Iterator<Item = &MultiIndex> {
        self.rows.keys()
    }

    pub(crate) fn row(&self, lead: &MultiIndex) -> Option<&FormalSeries<F>> {
        self.rows.get(lead)
    }

    /// Whether the degree-`d` jet of `f` lies in the space.
    pub fn contains(&self, f: &FormalSeries<F>) -> Result<bool> {
        check_dim(self.dim, f.dim())?;
        let mut v = f.truncate(self.degree)?;
        // leading exponents of the rows are distinct, so a combination's
        // smallest exponent is always a pivot
        while let Some((lead, c)) = v.initial_term().map(|(e, c)| (e.clone(), c.clone())) {
            match self.rows.get(&lead) {
                Some(row) => v.sub_scaled_shifted(&c, &MultiIndex::zero(self.dim), row),
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// The unique representative of `j^d f` modulo the space with no pivot monomials.
    pub fn normal_form(&self, f: &FormalSeries<F>) -> Result<FormalSeries<F>> {
        check_dim(self.dim, f.dim())?;
        let mut v = f.truncate(self.degree)?;
        let zero = MultiIndex::zero(self.dim);
        for (lead, row) in self.rows.iter() {
            let c = v.coeff(lead);
            if !c.is_zero() {
                // reduced rows only add non-pivot monomials
                v.sub_scaled_shifted(&c, &zero, row);
            }
        }
        Ok(v)
    }

    /// `j^e` of this space for `e <= d`, recomputed by row reduction.
    pub fn truncated(&self, e: u32) -> Result<JetSpace<F>> {
        if e > self.degree {
            return Err(Error::InsufficientTruncation { required: e, available: self.degree });
        }
        let mut ech = Echelon::new(self.dim, e);
        for row in self.rows.values() {
            ech.insert(row.truncate(e)?);
        }
        Ok(ech.finish())
    }
}

/// Incremental row echelon form over sparse rows.
pub(crate) struct Echelon<F> {
    dim: usize,
    degree: u32,
    rows: BTreeMap<MultiIndex, FormalSeries<F>>,
}

impl<F: Field> Echelon<F> {
    pub(crate) fn new(dim: usize, degree: u32) -> Self {
        Echelon { dim, degree, rows: BTreeMap::new() }
    }

    /// Adds a row; returns whether the span grew.
    pub(crate) fn insert(&mut self, mut v: FormalSeries<F>) -> bool {
        let zero = MultiIndex::zero(self.dim);
        while let Some((lead, c)) = v.initial_term().map(|(e, c)| (e.clone(), c.clone())) {
            match self.rows.get(&lead) {
                Some(row) => v.sub_scaled_shifted(&c, &zero, row),
                None => {
                    let inv = c.inv().expect("nonzero leading coefficient");
                    self.rows.insert(lead, v.scale(&inv));
                    return true;
                }
            }
        }
        false
    }

    /// Back-substitutes so that no row contains another row's pivot.
    pub(crate) fn finish(mut self) -> JetSpace<F> {
        let zero = MultiIndex::zero(self.dim);
        let leads: Vec<MultiIndex> = self.rows.keys().rev().cloned().collect();
        for lead in leads {
            let mut row = self.rows.remove(&lead).expect("present");
            let mut cursor = lead.clone();
            loop {
                let next = row
                    .terms
                    .range((Bound::Excluded(&cursor), Bound::Unbounded))
                    .find(|(e, _)| self.rows.contains_key(*e))
                    .map(|(e, c)| (e.clone(), c.clone()));
                let Some((e, c)) = next else { break };
                row.sub_scaled_shifted(&c, &zero, &self.rows[&e]);
                cursor = e;
            }
            self.rows.insert(lead, row);
        }
        JetSpace { dim: self.dim, degree: self.degree, rows: self.rows }
    }
}

/// `j^d I`: span of `j^d(t^m g)` over generators `g` and monomials `t^m`.
///
/// This is all of `j^d I` because `j^d(q g) = j^d(j^d q · g)`.
pub fn jet_ideal<F: Field>(ideal: &IdealPresentation<F>, d: u32) -> Result<JetSpace<F>> {
    ideal.require(d)?;
    let mut ech = Echelon::new(ideal.dim, d);
    for g in &ideal.generators {
        let g = g.truncate(d)?;
        let Some(order) = g.order() else { continue };
        for m in monomials_up_to(ideal.dim, d - order) {
            let mut row = FormalSeries::zero(ideal.dim, d);
            for (e, c) in g.terms() {
                row.add_term(e + &m, c);
            }
            ech.insert(row);
        }
    }
    Ok(ech.finish())
}

/// The diagram of initial exponents of `I`, exact in degrees up to `d`.
pub fn diagram<F: Field>(ideal: &IdealPresentation<F>, d: u32) -> Result<Staircase> {
    let jet = jet_ideal(ideal, d)?;
    Staircase::from_points(ideal.dim, jet.leading_exponents())
}

/// `f ∈ I + m^k`, decided on the `(k-1)`-jets.
pub fn jet_membership<F: Field>(f: &FormalSeries<F>, ideal: &IdealPresentation<F>, k: u32) -> Result<bool> {
    check_dim(ideal.dim, f.dim())?;
    if k == 0 {
        return Ok(true);
    }
    jet_ideal(ideal, k - 1)?.contains(f)
}

/// Verdict of a membership scan over `k = 1..=K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `f ∈ I + m^k` for every `k <= K`. Evidence only: it does not prove `f ∈ I`.
    MemberUpTo(u32),
    /// `f ∉ I + m^k` for this `k`, which certifies `f ∉ I`.
    NonMember { order: u32 },
}

pub fn membership_up_to<F: Field>(f: &FormalSeries<F>, ideal: &IdealPresentation<F>, max_order: u32) -> Result<Membership> {
    check_dim(ideal.dim, f.dim())?;
    for k in 1..=max_order {
        if !jet_membership(f, ideal, k)? {
            return Ok(Membership::NonMember { order: k });
        }
    }
    Ok(Membership::MemberUpTo(max_order))
}
