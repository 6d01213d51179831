//! Independent reference implementations and random generators for the
//! acceptance suite. Nothing here calls into the library's arithmetic: the
//! oracles work on plain coefficient maps with dense linear algebra.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use formal_germs::{FormalMap, FormalSeries, MultiIndex, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Poly = BTreeMap<Vec<u32>, Rational>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Degree first, then the last exponent, then the one before it, smaller wins.
pub fn order_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let key = |e: &[u32]| {
        let mut k = vec![degree(e)];
        k.extend(e.iter().rev());
        k
    };
    key(a).cmp(&key(b))
}

pub fn dominates(vertex: &[u32], e: &[u32]) -> bool {
    vertex.iter().zip(e).all(|(v, x)| v <= x)
}

/// All exponents of total degree at most `d`, in increasing monomial order.
pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=budget {
            prefix.push(x);
            rec(n, budget - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| order_cmp(a, b));
    out
}

pub fn to_poly(s: &FormalSeries<Rational>) -> Poly {
    s.terms().map(|(e, c)| (e.exponents().to_vec(), c.clone())).collect()
}

pub fn from_poly(n: usize, trunc: u32, p: &Poly) -> FormalSeries<Rational> {
    FormalSeries::from_terms(n, trunc, p.iter().map(|(e, c)| (MultiIndex::new(e.clone()), c.clone()))).unwrap()
}

fn add_into(acc: &mut Poly, e: Vec<u32>, c: Rational) {
    let slot = acc.entry(e.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        acc.remove(&e);
    }
}

pub fn truncate(p: &Poly, d: u32) -> Poly {
    p.iter().filter(|(e, _)| degree(e) <= d).map(|(e, c)| (e.clone(), c.clone())).collect()
}

pub fn add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        add_into(&mut out, e.clone(), c.clone());
    }
    out
}

pub fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        add_into(&mut out, e.clone(), -c.clone());
    }
    out
}

/// Schoolbook product, dropping degrees above `d`.
pub fn mul(a: &Poly, b: &Poly, d: u32) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if degree(&e) <= d {
                add_into(&mut out, e, ca.clone() * cb.clone());
            }
        }
    }
    out
}

pub fn initial(p: &Poly) -> Option<Vec<u32>> {
    p.keys().min_by(|a, b| order_cmp(a, b)).cloned()
}

/// Row-reduced span of polynomials over the exponents of degree `<= d`.
pub struct Dense {
    cols: Vec<Vec<u32>>,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Dense {
    pub fn new(n: usize, d: u32) -> Self {
        Dense { cols: exponents(n, d), rows: Vec::new(), pivots: Vec::new() }
    }

    fn vector(&self, p: &Poly) -> Vec<Rational> {
        self.cols.iter().map(|e| p.get(e).cloned().unwrap_or_else(Rational::zero)).collect()
    }

    /// Reduces against the rows; pivots sit at the smallest monomial of each row.
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= f.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn insert(&mut self, p: &Poly) {
        let v = self.reduce(self.vector(p));
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else { return };
        let inv = Rational::one() / v[piv].clone();
        let v: Vec<Rational> = v.into_iter().map(|x| x * inv.clone()).collect();
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if !row[piv].is_zero() {
                let f = row[piv].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= f.clone() * r.clone();
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(self.vector(p)).iter().all(Zero::is_zero)
    }

    pub fn leading(&self) -> BTreeSet<Vec<u32>> {
        self.pivots.iter().map(|&p| self.cols[p].clone()).collect()
    }
}

/// The `d`-jets of the ideal generated by `gens`, as a dense span.
pub fn jet_span(n: usize, gens: &[Poly], d: u32) -> Dense {
    let mut span = Dense::new(n, d);
    for e in exponents(n, d) {
        let mono: Poly = [(e, Rational::one())].into_iter().collect();
        for g in gens {
            span.insert(&mul(&mono, g, d));
        }
    }
    span
}

pub fn rand_coeff(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let num = rng.gen_range(-5i64..=5);
        if num != 0 {
            return q(num, rng.gen_range(1i64..=4));
        }
    }
}

pub fn rand_exponent(rng: &mut ChaCha8Rng, n: usize, lo: u32, hi: u32) -> Vec<u32> {
    let d = rng.gen_range(lo..=hi);
    let mut e = vec![0u32; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// A random nonzero polynomial with `1..=terms` terms of degrees in `lo..=hi`.
pub fn rand_poly(rng: &mut ChaCha8Rng, n: usize, terms: usize, lo: u32, hi: u32) -> Poly {
    loop {
        let mut p = Poly::new();
        for _ in 0..rng.gen_range(1..=terms) {
            add_into(&mut p, rand_exponent(rng, n, lo, hi), rand_coeff(rng));
        }
        if !p.is_empty() {
            return p;
        }
    }
}

pub fn rand_series(rng: &mut ChaCha8Rng, n: usize, trunc: u32, terms: usize, lo: u32, hi: u32) -> FormalSeries<Rational> {
    from_poly(n, trunc, &rand_poly(rng, n, terms, lo, hi))
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// A random invertible map: integer linear part with nonzero determinant plus
/// a few terms of degree `2..=hi`.
pub fn rand_invertible(rng: &mut ChaCha8Rng, n: usize, trunc: u32, hi: u32) -> FormalMap<Rational> {
    let lin = loop {
        let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2i64..=2)).collect()).collect();
        if det(&m) != 0 {
            break m;
        }
    };
    let comps = (0..n)
        .map(|i| {
            let mut p = if rng.gen_bool(0.6) { rand_poly(rng, n, 3, 2, hi) } else { Poly::new() };
            for (j, &a) in lin[i].iter().enumerate() {
                let mut e = vec![0; n];
                e[j] = 1;
                add_into(&mut p, e, Rational::from_integer(BigInt::from(a)));
            }
            from_poly(n, trunc, &p)
        })
        .collect();
    FormalMap::new(comps).unwrap()
}

/// Random terms of degrees `lo..=hi` added to one random component.
pub fn perturb(rng: &mut ChaCha8Rng, map: &FormalMap<Rational>, lo: u32, hi: u32) -> (FormalMap<Rational>, usize) {
    let n = map.dim();
    let i = rng.gen_range(0..n);
    let mut comps = map.components().to_vec();
    let extra = rand_series(rng, n, map.truncation(), 2, lo, hi);
    comps[i] = comps[i].add(&extra).unwrap();
    (FormalMap::new(comps).unwrap(), i)
}
