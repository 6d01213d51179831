use crate::error::{check_dim, Error, Result};
use crate::linalg;
use crate::monomial::MultiIndex;
use crate::scalar::Field;

use super::FormalSeries;

/// A formal map `(K^n, 0) -> (K^n, 0)` known up to a common truncation degree.
///
/// A map truncated at degree `k` doubles as a `k`-jet of maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalMap<F> {
    components: Vec<FormalSeries<F>>,
    trunc: u32,
    invertible: bool,
}

impl<F: Field> FormalMap<F> {
    /// Components must all live in `components.len()` variables and vanish at 0.
    /// The truncation becomes the minimum over the components.
    pub fn new(components: Vec<FormalSeries<F>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a map needs at least one component".into()));
        }
        let mut trunc = u32::MAX;
        for (i, c) in components.iter().enumerate() {
            check_dim(n, c.dim())?;
            if c.has_constant_term() {
                return Err(Error::ConstantTerm { component: i });
            }
            trunc = trunc.min(c.truncation());
        }
        if trunc == 0 {
            return Err(Error::InsufficientTruncation { required: 1, available: 0 });
        }
        let components: Vec<_> = components.into_iter().map(|c| c.with_truncation_at_most(trunc)).collect();
        let mut map = FormalMap { components, trunc, invertible: false };
        map.invertible = linalg::invert(&map.linear_part()).is_some();
        Ok(map)
    }

    pub fn identity(n: usize, trunc: u32) -> Self {
        let comps = (0..n).map(|i| FormalSeries::variable(n, i, trunc)).collect();
        FormalMap::new(comps).expect("identity map is well formed")
    }

    /// The linear map `z -> A z`.
    pub fn linear(matrix: &[Vec<F>], trunc: u32) -> Result<Self> {
        let n = matrix.len();
        let comps = matrix
            .iter()
            .map(|row| {
                check_dim(n, row.len())?;
                FormalSeries::from_terms(
                    n,
                    trunc,
                    row.iter().enumerate().map(|(j, a)| (MultiIndex::unit(n, j), a.clone())),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        FormalMap::new(comps)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn truncation(&self) -> u32 {
        self.trunc
    }

    pub fn components(&self) -> &[FormalSeries<F>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &FormalSeries<F> {
        &self.components[i]
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    /// Jacobian at the origin: `A[i][j]` is the coefficient of `z_j` in component `i`.
    pub fn linear_part(&self) -> Vec<Vec<F>> {
        let n = self.dim();
        self.components
            .iter()
            .map(|c| (0..n).map(|j| c.coeff(&MultiIndex::unit(n, j))).collect())
            .collect()
    }

    pub fn truncate(&self, k: u32) -> Result<Self> {
        let comps = self.components.iter().map(|c| c.truncate(k)).collect::<Result<Vec<_>>>()?;
        FormalMap::new(comps)
    }

    /// The `k`-jet of the map.
    pub fn jet(&self, k: u32) -> Result<Self> {
        self.truncate(k)
    }

    /// Lowers the truncation without failing.
    pub fn with_truncation_at_most(&self, k: u32) -> Self {
        if k >= self.trunc {
            return self.clone();
        }
        FormalMap {
            components: self.components.iter().map(|c| c.clone().with_truncation_at_most(k)).collect(),
            trunc: k,
            invertible: self.invertible,
        }
    }

    /// `g ∘ self`.
    pub fn pull_back(&self, g: &FormalSeries<F>) -> Result<FormalSeries<F>> {
        g.substitute(&self.components)
    }

    /// `self ∘ inner`, i.e. components `self_i(inner)`.
    pub fn compose(&self, inner: &FormalMap<F>) -> Result<FormalMap<F>> {
        check_dim(self.dim(), inner.dim())?;
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        FormalMap::new(comps)
    }

    /// Componentwise difference; used for order-of-contact checks.
    pub fn difference(&self, other: &FormalMap<F>) -> Result<Vec<FormalSeries<F>>> {
        check_dim(self.dim(), other.dim())?;
        self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect()
    }

    /// Two-sided inverse up to the truncation degree.
    ///
    /// Writing `self = A z + N(z)` with `N` of order at least two, the inverse
    /// solves `psi = A^{-1}(z - N(psi))`. Iterating from `psi = A^{-1} z`
    /// fixes one more homogeneous degree per step, since the degree-`d` part
    /// of `N(psi)` only involves parts of `psi` of degree below `d`.
    pub fn invert(&self) -> Result<FormalMap<F>> {
        let n = self.dim();
        let k = self.trunc;
        let a_inv = linalg::invert(&self.linear_part()).ok_or(Error::SingularLinearPart)?;
        let nonlinear: Vec<FormalSeries<F>> = self
            .components
            .iter()
            .map(|c| {
                let mut c = c.clone();
                for j in 0..n {
                    c.remove_term(&MultiIndex::unit(n, j));
                }
                c
            })
            .collect();
        let apply_inverse_linear = |v: &[FormalSeries<F>]| -> Vec<FormalSeries<F>> {
            (0..n)
                .map(|i| {
                    let mut acc = FormalSeries::zero(n, k);
                    for (j, vj) in v.iter().enumerate() {
                        if !a_inv[i][j].is_zero() {
                            acc = acc.add(&vj.scale(&a_inv[i][j])).expect("same dimension");
                        }
                    }
                    acc
                })
                .collect()
        };
        let ident: Vec<FormalSeries<F>> = (0..n).map(|i| FormalSeries::variable(n, i, k)).collect();
        let mut psi = apply_inverse_linear(&ident);
        // after the pass for `degree`, psi is exact through that degree
        for _degree in 2..=k {
            let rhs = ident
                .iter()
                .zip(&nonlinear)
                .map(|(z, nl)| z.sub(&nl.substitute(&psi)?))
                .collect::<Result<Vec<_>>>()?;
            psi = apply_inverse_linear(&rhs);
        }
        FormalMap::new(psi)
    }

    /// `self × other` acting on `K^{n+m}`: the first block on the first `n`
    /// coordinates, the second on the remaining `m`.
    pub fn product(&self, other: &FormalMap<F>) -> Result<FormalMap<F>> {
        let n = self.dim();
        let total = n + other.dim();
        let mut comps: Vec<FormalSeries<F>> = self.components.iter().map(|c| c.embed(total, 0)).collect();
        comps.extend(other.components.iter().map(|c| c.embed(total, n)));
        FormalMap::new(comps)
    }
}

impl<F: Field> std::fmt::Debug for FormalMap<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars = crate::expr::Variables::indexed("t", self.dim());
        write!(f, "{} + O({})", vars.print_map(self), self.trunc + 1)
    }
}
