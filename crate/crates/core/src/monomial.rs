//! Multi-indices, the degree-compatible monomial order, and staircases.
//!
//! The order compares the tuple `(a_1, ..., a_n, |a|)` lexicographically
//! starting from the right: total degree first, then the last exponent,
//! then the one before it, and so on. It is the order used everywhere in
//! this crate to pick initial exponents.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};

/// An exponent vector in `N^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Box<[u32]>);

impl MultiIndex {
    pub fn new(exponents: impl Into<Vec<u32>>) -> Self {
        MultiIndex(exponents.into().into_boxed_slice())
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n].into_boxed_slice())
    }

    /// The exponent of `t_var`.
    pub fn unit(n: usize, var: usize) -> Self {
        let mut e = vec![0; n];
        e[var] = 1;
        MultiIndex::new(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|a|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self <= other`, i.e. `other` lies in `self + N^n`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `self - other`, if `other` divides `self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.divides(self) {
            return None;
        }
        Some(MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect()))
    }

    /// Order-checked comparison; fails on dimension mismatch.
    pub fn compare(&self, other: &MultiIndex) -> Result<Ordering> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.cmp(other))
    }
}

impl std::ops::Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), rhs.dim());
        MultiIndex(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // Mixed dimensions never meet inside one series; order them by length
        // so that `Ord` stays total.
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidArgument(format!("multi-index must be parenthesised: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(MultiIndex::new(Vec::new()));
        }
        inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad exponent {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex::new)
    }
}

/// All exponents in `n` variables with total degree at most `degree`,
/// in ascending monomial order.
pub fn monomials_up_to(n: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=degree {
        monomials_of_degree(n, d, &mut out);
    }
    out.sort();
    out
}

fn monomials_of_degree(n: usize, d: u32, out: &mut Vec<MultiIndex>) {
    fn rec(prefix: &mut Vec<u32>, n: usize, left: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(prefix, n, left - e, out);
            prefix.pop();
        }
    }
    if n == 0 {
        if d == 0 {
            out.push(MultiIndex::new(Vec::new()));
        }
        return;
    }
    rec(&mut Vec::with_capacity(n), n, d, out);
}

/// A stable subset `S = B + N^n` of `N^n`, stored by its minimal vertex set `B`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Staircase {
    dim: usize,
    vertices: BTreeSet<MultiIndex>,
}

impl Staircase {
    pub fn empty(dim: usize) -> Self {
        Staircase { dim, vertices: BTreeSet::new() }
    }

    /// Minimal vertex set of `points + N^n`.
    ///
    /// Points are visited in ascending order; anything that strictly
    /// dominates a point has larger degree, so a single pass suffices.
    pub fn from_points<'a>(dim: usize, points: impl IntoIterator<Item = &'a MultiIndex>) -> Result<Self> {
        let mut sorted: Vec<&MultiIndex> = Vec::new();
        for p in points {
            check_dim(dim, p.dim())?;
            sorted.push(p);
        }
        sorted.sort();
        sorted.dedup();
        let mut vertices: Vec<MultiIndex> = Vec::new();
        for p in sorted {
            if !vertices.iter().any(|v| v.divides(p)) {
                vertices.push(p.clone());
            }
        }
        Ok(Staircase { dim, vertices: vertices.into_iter().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> impl Iterator<Item = &MultiIndex> {
        self.vertices.iter()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True iff `a` dominates some vertex componentwise.
    pub fn contains(&self, a: &MultiIndex) -> Result<bool> {
        check_dim(self.dim, a.dim())?;
        Ok(self.contains_unchecked(a))
    }

    pub(crate) fn contains_unchecked(&self, a: &MultiIndex) -> bool {
        self.vertices.iter().any(|v| v.divides(a))
    }

    /// Set equality of the represented stable sets.
    pub fn equals(&self, other: &Staircase) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        Ok(self.vertices == other.vertices)
    }

    /// `self ⊆ other` as stable sets.
    pub fn is_subset(&self, other: &Staircase) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        Ok(self.vertices.iter().all(|v| other.contains_unchecked(v)))
    }

    /// Parses `[(1,0),(0,2)]`. The dimension is needed for the empty staircase.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidArgument(format!("staircase must be bracketed: {text:?}")))?;
        let mut points = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let end = rest
                .find(')')
                .ok_or_else(|| Error::InvalidArgument(format!("unterminated vertex in {text:?}")))?;
            points.push(rest[..=end].parse::<MultiIndex>()?);
            rest = rest[end + 1..].trim_start().trim_start_matches(',').trim_start();
        }
        Staircase::from_points(dim, points.iter())
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of scanning a finite prefix of an increasing chain of staircases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilization {
    /// All entries from this (0-based) position on coincide.
    At(usize),
    /// The last two entries differ: the prefix says nothing about where the chain stops.
    NotWithinPrefix,
}

/// Finds the first position after which an increasing chain is constant.
pub fn chain_stabilization(chain: &[Staircase]) -> Result<Stabilization> {
    let Some(first) = chain.first() else {
        return Ok(Stabilization::At(0));
    };
    for (i, pair) in chain.windows(2).enumerate() {
        check_dim(first.dim(), pair[1].dim())?;
        if !pair[0].is_subset(&pair[1])? {
            return Err(Error::NotIncreasing { index: i + 1 });
        }
    }
    let last = chain.len() - 1;
    let mut k = last;
    while k > 0 && chain[k - 1] == chain[last] {
        k -= 1;
    }
    if k == last && last > 0 {
        return Ok(Stabilization::NotWithinPrefix);
    }
    Ok(Stabilization::At(k))
}
