//! Finite-order conjugacy of self-maps and equivalence of singular vector fields.

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::ideal::IdealPresentation;
use crate::scalar::Field;
use crate::series::{FormalMap, FormalSeries};

/// A self-map germ fixing the origin. It need not be invertible.
pub type SelfMapGerm<F> = FormalMap<F>;

/// A vector field `Σ ξ_i ∂/∂t_i` vanishing at the origin.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorFieldGerm<F: Field> {
    components: Vec<FormalSeries<F>>,
    trunc: u32,
}

impl<F: Field> VectorFieldGerm<F> {
    /// The truncation becomes the minimum over the components.
    pub fn new(components: Vec<FormalSeries<F>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidArgument("a vector field needs at least one component".into()));
        }
        let mut trunc = u32::MAX;
        for (i, c) in components.iter().enumerate() {
            check_dim(n, c.dim())?;
            if c.has_constant_term() {
                return Err(Error::ConstantTerm { component: i });
            }
            trunc = trunc.min(c.truncation());
        }
        let components = components.into_iter().map(|c| c.with_truncation_at_most(trunc)).collect();
        Ok(VectorFieldGerm { components, trunc })
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

    /// Componentwise difference.
    pub fn difference(&self, other: &Self) -> Result<Vec<FormalSeries<F>>> {
        check_dim(self.dim(), other.dim())?;
        self.components.iter().zip(&other.components).map(|(a, b)| a.sub(b)).collect()
    }
}

impl<F: Field> std::fmt::Debug for VectorFieldGerm<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vars = crate::expr::Variables::indexed("t", self.dim());
        write!(f, "{} + O({})", vars.print_tuple(&self.components), self.trunc + 1)
    }
}

/// `Φ ∘ F ∘ Φ⁻¹`.
pub fn conjugate<F: Field>(map: &SelfMapGerm<F>, phi: &FormalMap<F>) -> Result<SelfMapGerm<F>> {
    check_dim(phi.dim(), map.dim())?;
    let inv = phi.invert()?;
    phi.compose(&map.compose(&inv)?)
}

/// `Φ_* ξ = (DΦ · ξ) ∘ Φ⁻¹`.
pub fn pushforward_field<F: Field>(field: &VectorFieldGerm<F>, phi: &FormalMap<F>) -> Result<VectorFieldGerm<F>> {
    let n = field.dim();
    check_dim(phi.dim(), n)?;
    let inv = phi.invert()?;
    let k = field.trunc.min(phi.truncation());
    let mut image = Vec::with_capacity(n);
    for phi_i in phi.components() {
        let mut acc = FormalSeries::zero(n, k);
        for (j, xi_j) in field.components.iter().enumerate() {
            // ∂_j Φ_i is known to degree K-1 and ξ_j has order at least 1
            let partial = phi_i.derivative(j)?;
            acc = acc.add(&partial.mul_to(xi_j, k))?;
        }
        image.push(acc.substitute(inv.components())?);
    }
    VectorFieldGerm::new(image)
}

/// Outcome of an index-matched order-`k` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContactReport {
    pub order: u32,
    pub holds: bool,
    /// Per member: the order of contact reached, capped at `k`.
    pub contact: Vec<u32>,
    pub failing_index: Option<usize>,
    pub failing_component: Option<usize>,
    /// Lowest degree carrying a nonzero difference, for the first failure.
    pub failing_degree: Option<u32>,
}

fn contact_report<F: Field>(k: u32, differences: Vec<Vec<FormalSeries<F>>>) -> Result<ContactReport> {
    let mut contact = Vec::with_capacity(differences.len());
    let mut failure = None;
    for (a, diff) in differences.iter().enumerate() {
        let mut reached = k;
        for (i, d) in diff.iter().enumerate() {
            if d.vanishes_to_order(k)? {
                continue;
            }
            let ord = d.order().expect("nonzero difference");
            if ord < reached {
                reached = ord;
            }
            if failure.is_none() {
                failure = Some((a, i, ord));
            }
        }
        contact.push(reached);
    }
    Ok(ContactReport {
        order: k,
        holds: failure.is_none(),
        contact,
        failing_index: failure.map(|f| f.0),
        failing_component: failure.map(|f| f.1),
        failing_degree: failure.map(|f| f.2),
    })
}

fn require(k: u32, truncs: impl IntoIterator<Item = u32>) -> Result<()> {
    let available = truncs.into_iter().min().unwrap_or(u32::MAX);
    if k > available {
        return Err(Error::InsufficientTruncation { required: k, available });
    }
    Ok(())
}

fn require_matched(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::ModeMismatch(format!("families have {left} and {right} members")));
    }
    Ok(())
}

/// Whether `G_α - Φ ∘ F_α ∘ Φ⁻¹ ∈ m^k` componentwise for every index `α`.
pub fn is_order_k_conjugacy<F: Field>(
    phi: &FormalMap<F>,
    left: &[SelfMapGerm<F>],
    right: &[SelfMapGerm<F>],
    k: u32,
) -> Result<ContactReport> {
    require_matched(left.len(), right.len())?;
    require(k, left.iter().chain(right).map(FormalMap::truncation).chain([phi.truncation()]))?;
    let diffs = left
        .iter()
        .zip(right)
        .map(|(f, g)| g.difference(&conjugate(f, phi)?))
        .collect::<Result<Vec<_>>>()?;
    contact_report(k, diffs)
}

/// Whether `ξ'_α - Φ_* ξ_α ∈ m^k` componentwise for every index `α`.
pub fn is_order_k_field_equivalence<F: Field>(
    phi: &FormalMap<F>,
    left: &[VectorFieldGerm<F>],
    right: &[VectorFieldGerm<F>],
    k: u32,
) -> Result<ContactReport> {
    require_matched(left.len(), right.len())?;
    require(k, left.iter().chain(right).map(VectorFieldGerm::truncation).chain([phi.truncation()]))?;
    let diffs = left
        .iter()
        .zip(right)
        .map(|(xi, eta)| eta.difference(&pushforward_field(xi, phi)?))
        .collect::<Result<Vec<_>>>()?;
    contact_report(k, diffs)
}

/// The graph `{w = F(z)}` in `2n` variables `(z, w)`, generated by `w_i - F_i(z)`.
pub fn graph_ideal<F: Field>(map: &SelfMapGerm<F>) -> IdealPresentation<F> {
    let n = map.dim();
    let k = map.truncation();
    let gens = map
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| FormalSeries::variable(2 * n, n + i, k).sub(&c.embed(2 * n, 0)).expect("same dimension"))
        .collect();
    IdealPresentation::new(2 * n, gens).expect("same dimension")
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::strategies::{invertible_map, self_map};

    const K: u32 = 5;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn conjugation_is_a_group_action(f in self_map(2, K), phi in invertible_map(2, K), psi in invertible_map(2, K)) {
            prop_assert_eq!(conjugate(&f, &FormalMap::identity(2, K))?, f.clone());
            let stepwise = conjugate(&conjugate(&f, &phi)?, &psi)?;
            prop_assert_eq!(stepwise, conjugate(&f, &psi.compose(&phi)?)?);
        }

        #[test]
        fn pushforward_is_a_group_action(f in self_map(2, K), phi in invertible_map(2, K), psi in invertible_map(2, K)) {
            prop_assume!(f.components().iter().all(|c| !c.has_constant_term()));
            let xi = VectorFieldGerm::new(f.components().to_vec())?;
            let stepwise = pushforward_field(&pushforward_field(&xi, &phi)?, &psi)?;
            let direct = pushforward_field(&xi, &psi.compose(&phi)?)?;
            prop_assert!(stepwise.difference(&direct)?.iter().all(FormalSeries::is_zero));
        }
    }
}
