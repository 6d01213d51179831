//! Finite-order equivalence of families and sets of ideals.
//!
//! Conventions: an invertible map `Φ` carries the left family to the right
//! one, so generators of a right member are pulled back (`g ∘ Φ`) into the
//! matching left member and generators of a left member are pushed forward
//! (`f ∘ Φ⁻¹`) into the right member. Order `k` means membership modulo
//! `m^k`, which only sees degrees below `k`.
//!
//! Because pulling back by `Φ` is an automorphism of `K[[t]]/m^k`, the two
//! inclusions hold together exactly when `j^{k-1}(Φ* J) = j^{k-1} I`. Set
//! matching uses that canonical jet space as a hash key; every candidate pair
//! is then confirmed generator by generator.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::ideal::{jet_ideal, IdealPresentation, JetSpace};
use crate::scalar::Field;
use crate::series::{FormalMap, FormalSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    /// Members are matched by index.
    Family,
    /// Every member on each side needs some partner on the other side.
    Set,
}

/// Labelled ideals in a common ring.
#[derive(Clone, Debug)]
pub struct GermFamily<F: Field> {
    dim: usize,
    mode: MatchMode,
    labels: Vec<String>,
    members: Vec<IdealPresentation<F>>,
}

impl<F: Field> GermFamily<F> {
    pub fn new(dim: usize, mode: MatchMode, members: Vec<(String, IdealPresentation<F>)>) -> Result<Self> {
        let mut labels = Vec::with_capacity(members.len());
        let mut ideals = Vec::with_capacity(members.len());
        for (label, ideal) in members {
            check_dim(dim, ideal.dim())?;
            labels.push(label);
            ideals.push(ideal);
        }
        Ok(GermFamily { dim, mode, labels, members: ideals })
    }

    /// Members labelled by their position.
    pub fn from_ideals(dim: usize, mode: MatchMode, ideals: Vec<IdealPresentation<F>>) -> Result<Self> {
        Self::new(dim, mode, ideals.into_iter().enumerate().map(|(i, m)| (i.to_string(), m)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn members(&self) -> &[IdealPresentation<F>] {
        &self.members
    }

    pub fn member(&self, index: usize) -> &IdealPresentation<F> {
        &self.members[index]
    }

    /// Smallest truncation over all generators of all members.
    pub fn truncation(&self) -> u32 {
        self.members.iter().map(IdealPresentation::truncation).min().unwrap_or(u32::MAX)
    }

    /// Every member pulled back by `phi`, keeping labels and mode.
    pub fn pull_back(&self, phi: &FormalMap<F>) -> Result<Self> {
        let members = self.members.iter().map(|m| pullback(m, phi)).collect::<Result<Vec<_>>>()?;
        Ok(GermFamily { dim: self.dim, mode: self.mode, labels: self.labels.clone(), members })
    }
}

/// `Φ* I`, generated by `g ∘ Φ`.
pub fn pullback<F: Field>(ideal: &IdealPresentation<F>, phi: &FormalMap<F>) -> Result<IdealPresentation<F>> {
    ideal.pull_back(phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureKind {
    /// `g ∘ Φ ∉ I + m^k` for this right-hand generator.
    PullBack { generator: usize },
    /// `f ∘ Φ⁻¹ ∉ J + m^k` for this left-hand generator.
    PushForward { generator: usize },
    /// Set mode: no member on the other side matches.
    NoPartner,
}

/// The first obstruction found, in index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub side: Side,
    pub index: usize,
    pub label: String,
    /// The member it was compared against (family mode).
    pub partner: Option<usize>,
    #[serde(flatten)]
    pub kind: FailureKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberVerdict {
    pub index: usize,
    pub label: String,
    /// Lowest-indexed matching member on the other side.
    pub partner: Option<usize>,
    pub partner_label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub order: u32,
    pub mode: MatchMode,
    pub holds: bool,
    pub left: Vec<MemberVerdict>,
    /// Set mode only.
    pub right: Vec<MemberVerdict>,
    pub failure: Option<Failure>,
}

impl EquivalenceReport {
    /// `(left, right)` index pairs of the matching, left members first.
    pub fn matching(&self) -> Vec<(usize, usize)> {
        self.left.iter().filter_map(|v| v.partner.map(|p| (v.index, p))).collect()
    }
}

/// How set-mode partners are searched for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Bucket members by their canonical jet space, then confirm each pair.
    #[default]
    Indexed,
    /// Test every pair generator by generator.
    Exhaustive,
}

/// Order-`k` checks of one map between two fixed families, with caches
/// shared across orders.
pub struct EquivalenceChecker<'a, F: Field> {
    phi: &'a FormalMap<F>,
    phi_inv: FormalMap<F>,
    left: &'a GermFamily<F>,
    right: &'a GermFamily<F>,
    /// `f ∘ Φ⁻¹` for each left member.
    pushed_left: Vec<IdealPresentation<F>>,
    /// `g ∘ Φ` for each right member.
    pulled_right: Vec<IdealPresentation<F>>,
    jets: HashMap<(Side, bool, usize, u32), JetSpace<F>>,
}

impl<'a, F: Field> EquivalenceChecker<'a, F> {
    pub fn new(phi: &'a FormalMap<F>, left: &'a GermFamily<F>, right: &'a GermFamily<F>) -> Result<Self> {
        if left.mode != right.mode {
            return Err(Error::ModeMismatch(format!("left is {:?} but right is {:?}", left.mode, right.mode)));
        }
        check_dim(left.dim, right.dim)?;
        check_dim(left.dim, phi.dim())?;
        if left.mode == MatchMode::Family && left.len() != right.len() {
            return Err(Error::ModeMismatch(format!(
                "families must have equally many members, found {} and {}",
                left.len(),
                right.len()
            )));
        }
        let phi_inv = phi.invert()?;
        let pushed_left = left.members.iter().map(|m| m.pull_back(&phi_inv)).collect::<Result<Vec<_>>>()?;
        let pulled_right = right.members.iter().map(|m| m.pull_back(phi)).collect::<Result<Vec<_>>>()?;
        Ok(EquivalenceChecker { phi, phi_inv, left, right, pushed_left, pulled_right, jets: HashMap::new() })
    }

    pub fn inverse(&self) -> &FormalMap<F> {
        &self.phi_inv
    }

    fn require(&self, k: u32) -> Result<()> {
        let available = self.phi.truncation().min(self.left.truncation()).min(self.right.truncation());
        if k > available {
            return Err(Error::InsufficientTruncation { required: k, available });
        }
        Ok(())
    }

    /// `j^d` of a member (`moved = false`) or of its transport to the other side.
    fn jet(&mut self, side: Side, moved: bool, index: usize, d: u32) -> Result<&JetSpace<F>> {
        let key = (side, moved, index, d);
        if !self.jets.contains_key(&key) {
            let ideal = match (side, moved) {
                (Side::Left, false) => &self.left.members[index],
                (Side::Right, false) => &self.right.members[index],
                (Side::Left, true) => &self.pushed_left[index],
                (Side::Right, true) => &self.pulled_right[index],
            };
            let space = jet_ideal(ideal, d)?;
            self.jets.insert(key, space);
        }
        Ok(&self.jets[&key])
    }

    /// The first generator failing between left member `a` and right member `b`.
    fn pair_failure(&mut self, a: usize, b: usize, k: u32) -> Result<Option<FailureKind>> {
        if k == 0 {
            return Ok(None);
        }
        let d = k - 1;
        let pulled: Vec<FormalSeries<F>> = self.pulled_right[b].generators().to_vec();
        let target = self.jet(Side::Left, false, a, d)?;
        for (j, g) in pulled.iter().enumerate() {
            if !target.contains(g)? {
                return Ok(Some(FailureKind::PullBack { generator: j }));
            }
        }
        let pushed: Vec<FormalSeries<F>> = self.pushed_left[a].generators().to_vec();
        let target = self.jet(Side::Right, false, b, d)?;
        for (j, f) in pushed.iter().enumerate() {
            if !target.contains(f)? {
                return Ok(Some(FailureKind::PushForward { generator: j }));
            }
        }
        Ok(None)
    }

    pub fn check(&mut self, k: u32, strategy: Strategy) -> Result<EquivalenceReport> {
        self.require(k)?;
        match self.left.mode {
            MatchMode::Family => self.check_family(k),
            MatchMode::Set => self.check_set(k, strategy),
        }
    }

    fn check_family(&mut self, k: u32) -> Result<EquivalenceReport> {
        let mut left = Vec::with_capacity(self.left.len());
        let mut failure = None;
        for a in 0..self.left.len() {
            let verdict = self.pair_failure(a, a, k)?;
            let ok = verdict.is_none();
            if let (Some(kind), None) = (verdict, &failure) {
                failure = Some(Failure {
                    side: Side::Left,
                    index: a,
                    label: self.left.labels[a].clone(),
                    partner: Some(a),
                    kind,
                });
            }
            left.push(MemberVerdict {
                index: a,
                label: self.left.labels[a].clone(),
                partner: ok.then_some(a),
                partner_label: ok.then(|| self.right.labels[a].clone()),
            });
        }
        Ok(EquivalenceReport { order: k, mode: MatchMode::Family, holds: failure.is_none(), left, right: Vec::new(), failure })
    }

    fn check_set(&mut self, k: u32, strategy: Strategy) -> Result<EquivalenceReport> {
        let (nl, nr) = (self.left.len(), self.right.len());
        let mut left_partner: Vec<Option<usize>> = vec![None; nl];
        let mut right_partner: Vec<Option<usize>> = vec![None; nr];
        match strategy {
            Strategy::Exhaustive => {
                for a in 0..nl {
                    for b in 0..nr {
                        if left_partner[a].is_some() && right_partner[b].is_some() {
                            continue;
                        }
                        if self.pair_failure(a, b, k)?.is_none() {
                            left_partner[a].get_or_insert(b);
                            right_partner[b].get_or_insert(a);
                        }
                    }
                }
            }
            Strategy::Indexed => {
                let d = k.saturating_sub(1);
                let mut buckets: HashMap<JetSpace<F>, (Vec<usize>, Vec<usize>)> = HashMap::new();
                for a in 0..nl {
                    let key = self.jet(Side::Left, false, a, d)?.clone();
                    buckets.entry(key).or_default().0.push(a);
                }
                for b in 0..nr {
                    let key = self.jet(Side::Right, true, b, d)?.clone();
                    buckets.entry(key).or_default().1.push(b);
                }
                let mut groups: Vec<(Vec<usize>, Vec<usize>)> =
                    buckets.into_values().filter(|(l, r)| !l.is_empty() && !r.is_empty()).collect();
                groups.sort();
                for (ls, rs) in groups {
                    for &a in &ls {
                        for &b in &rs {
                            if self.pair_failure(a, b, k)?.is_none() {
                                left_partner[a] = Some(b);
                                break;
                            }
                        }
                    }
                    for &b in &rs {
                        for &a in &ls {
                            if self.pair_failure(a, b, k)?.is_none() {
                                right_partner[b] = Some(a);
                                break;
                            }
                        }
                    }
                }
            }
        }
        let verdicts = |labels: &[String], other: &[String], partners: &[Option<usize>]| -> Vec<MemberVerdict> {
            partners
                .iter()
                .enumerate()
                .map(|(i, p)| MemberVerdict {
                    index: i,
                    label: labels[i].clone(),
                    partner: *p,
                    partner_label: p.map(|j| other[j].clone()),
                })
                .collect()
        };
        let left = verdicts(&self.left.labels, &self.right.labels, &left_partner);
        let right = verdicts(&self.right.labels, &self.left.labels, &right_partner);
        let failure = left
            .iter()
            .map(|v| (Side::Left, v))
            .chain(right.iter().map(|v| (Side::Right, v)))
            .find(|(_, v)| v.partner.is_none())
            .map(|(side, v)| Failure { side, index: v.index, label: v.label.clone(), partner: None, kind: FailureKind::NoPartner });
        Ok(EquivalenceReport { order: k, mode: MatchMode::Set, holds: failure.is_none(), left, right, failure })
    }
}

/// Whether `Φ` is an order-`k` equivalence from `left` to `right`.
pub fn is_order_k_equivalence<F: Field>(
    phi: &FormalMap<F>,
    left: &GermFamily<F>,
    right: &GermFamily<F>,
    k: u32,
) -> Result<EquivalenceReport> {
    EquivalenceChecker::new(phi, left, right)?.check(k, Strategy::default())
}

pub fn is_order_k_equivalence_with<F: Field>(
    phi: &FormalMap<F>,
    left: &GermFamily<F>,
    right: &GermFamily<F>,
    k: u32,
    strategy: Strategy,
) -> Result<EquivalenceReport> {
    EquivalenceChecker::new(phi, left, right)?.check(k, strategy)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetReport {
    pub degree: u32,
    pub holds: bool,
    /// First member whose jet spaces differ.
    pub failing_index: Option<usize>,
    pub failing_label: Option<String>,
}

/// Whether the jet `Λ` (known to its truncation `k`) sends every `j^k I'_α`
/// onto `j^k I_α`, i.e. `j^k(Λ* I'_α) = j^k I_α` as subspaces.
///
/// Family mode only: the condition is stated index by index.
pub fn jet_coset_membership<F: Field>(lambda: &FormalMap<F>, left: &GermFamily<F>, right: &GermFamily<F>) -> Result<CosetReport> {
    if left.mode != MatchMode::Family || right.mode != MatchMode::Family {
        return Err(Error::ModeMismatch("jet coset membership is defined for families only".into()));
    }
    if left.len() != right.len() {
        return Err(Error::ModeMismatch(format!("families have {} and {} members", left.len(), right.len())));
    }
    check_dim(left.dim, right.dim)?;
    check_dim(left.dim, lambda.dim())?;
    if !lambda.is_invertible() {
        return Err(Error::SingularLinearPart);
    }
    let k = lambda.truncation();
    for a in 0..left.len() {
        let pulled = right.members[a].pull_back(lambda)?;
        if jet_ideal(&pulled, k)? != jet_ideal(&left.members[a], k)? {
            return Ok(CosetReport {
                degree: k,
                holds: false,
                failing_index: Some(a),
                failing_label: Some(left.labels[a].clone()),
            });
        }
    }
    Ok(CosetReport { degree: k, holds: true, failing_index: None, failing_label: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Horizon {
    pub max_order: u32,
    /// Verdict for each order `1..=K`; set mode may change matchings between orders.
    pub verdicts: Vec<bool>,
    /// First failing order, `None` meaning the equivalence holds up to `K`.
    pub first_failure: Option<u32>,
}

/// Scans orders `1..=K`, reporting each verdict.
pub fn equivalence_horizon<F: Field>(
    left: &GermFamily<F>,
    right: &GermFamily<F>,
    phi: &FormalMap<F>,
    max_order: u32,
) -> Result<Horizon> {
    let mut checker = EquivalenceChecker::new(phi, left, right)?;
    checker.require(max_order)?;
    let mut verdicts = Vec::with_capacity(max_order as usize);
    for k in 1..=max_order {
        verdicts.push(checker.check(k, Strategy::default())?.holds);
    }
    let first_failure = verdicts.iter().position(|ok| !ok).map(|i| i as u32 + 1);
    Ok(Horizon { max_order, verdicts, first_failure })
}
