//! Two sets of plane curves through the origin that are equivalent to every
//! finite order but not formally equivalent.
//!
//! With `S_m = 2^m Z + c_m` nested and with empty intersection, the sets are
//!
//! ```text
//! phi(m,n):  w = 2^m n z + z^{m+1}
//! psi(m,n):  w = (2^m n + c_m) z + z^{m+1}        m >= 1, n in Z
//! ```
//!
//! and the candidate equivalence of level `k` is `(z, w) -> (z, w + c_k z)`.
//! The `phi(m,0)` all share the tangent `w = 0`, while a tangent slope `t`
//! can only appear among the `psi` curves of levels `m` with `t ∈ S_m`,
//! which is a bounded set of levels.

use std::fmt;

use serde::Serialize;

use crate::equivalence::{EquivalenceChecker, GermFamily, MatchMode, Strategy};
use crate::error::{Error, Result};
use crate::ideal::IdealPresentation;
use crate::monomial::MultiIndex;
use crate::scalar::{Field, GaussianRational, Rational};
use crate::series::{realify, realify_map, FormalMap, FormalSeries};

/// Largest supported number of levels; `2^m` must fit comfortably in `i128`.
pub const MAX_LEVELS: u32 = 120;

/// The integers `c_1, ..., c_M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftSequence {
    c: Vec<i128>,
}

fn pow2(m: u32) -> i128 {
    1i128 << m
}

impl ShiftSequence {
    pub fn len(&self) -> u32 {
        self.c.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    fn level(&self, m: u32) -> usize {
        assert!(m >= 1 && m <= self.len(), "level {m} outside 1..={}", self.len());
        m as usize - 1
    }

    /// `c_m`, for `1 <= m <= M`.
    pub fn c(&self, m: u32) -> i128 {
        self.c[self.level(m)]
    }

    pub fn values(&self) -> &[i128] {
        &self.c
    }

    /// The largest negative element of `S_m`.
    pub fn a(&self, m: u32) -> i128 {
        self.b(m) - pow2(m)
    }

    /// The smallest positive element of `S_m`.
    pub fn b(&self, m: u32) -> i128 {
        // 0 ∉ S_m, so the residue is never 0
        self.c(m).rem_euclid(pow2(m))
    }

    /// `t ∈ S_m`.
    pub fn contains(&self, m: u32, t: i128) -> bool {
        (t - self.c(m)).rem_euclid(pow2(m)) == 0
    }

    /// Checks every structural property exactly on `[-window, window]`.
    /// Returns descriptions of the violations found.
    pub fn invariant_violations(&self, window: i128) -> Vec<String> {
        let mut out = Vec::new();
        let m_top = self.len();
        if self.c.first() != Some(&1) {
            out.push(format!("c_1 = {:?}, expected 1", self.c.first()));
        }
        for m in 1..=m_top {
            if self.contains(m, 0) {
                out.push(format!("0 ∈ S_{m}"));
            }
            if self.b(m) - self.a(m) != pow2(m) {
                out.push(format!("b_{m} - a_{m} != 2^{m}"));
            }
            if m < m_top {
                let next = self.c(m + 1).abs();
                if !(pow2(m - 1) <= next && next < pow2(m)) {
                    out.push(format!("|c_{}| = {next} outside [2^{}, 2^{m})", m + 1, m - 1));
                }
            }
        }
        for l in -window..=window {
            for m in 1..=m_top {
                if !self.contains(m, l) {
                    // nesting: membership can only fail from here on
                    for later in m + 1..=m_top {
                        if self.contains(later, l) {
                            out.push(format!("{l} ∈ S_{later} but not S_{m}"));
                        }
                    }
                    break;
                }
                if m >= 2 && l.abs() < pow2(m - 2) {
                    out.push(format!("{l} ∈ S_{m} has |l| < 2^{}", m - 2));
                }
            }
            // l -> l + c_k is a bijection from 2^m Z onto S_m for m <= k
            for k in 1..=m_top {
                for m in 1..=k {
                    if (l.rem_euclid(pow2(m)) == 0) != self.contains(m, l + self.c(k)) {
                        out.push(format!("shift by c_{k} does not carry 2^{m}Z onto S_{m} at {l}"));
                    }
                }
            }
        }
        out
    }
}

/// Builds `c_1 = 1` and `c_{m+1} = a_m` if `|a_m| > b_m`, else `b_m`.
pub fn build_shift_sequence(levels: u32) -> Result<ShiftSequence> {
    if levels == 0 || levels > MAX_LEVELS {
        return Err(Error::InvalidArgument(format!("levels must lie in 1..={MAX_LEVELS}, got {levels}")));
    }
    let mut seq = ShiftSequence { c: vec![1] };
    for m in 1..levels {
        let (a, b) = (seq.a(m), seq.b(m));
        seq.c.push(if a.abs() > b { a } else { b });
    }
    Ok(seq)
}

/// The least level `m` with `t ∉ S_m`, or `None` if `t` lies in every computed level.
pub fn membership_horizon(t: i128, seq: &ShiftSequence) -> Option<u32> {
    (1..=seq.len()).find(|&m| !seq.contains(m, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveTag {
    Phi,
    Psi,
}

impl fmt::Display for CurveTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveTag::Phi => "phi",
            CurveTag::Psi => "psi",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveId {
    pub tag: CurveTag,
    pub m: u32,
    pub n: i128,
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.tag, self.m, self.n)
    }
}

impl CurveId {
    /// Tangent slope `2^m n` or `2^m n + c_m`.
    pub fn slope(&self, seq: &ShiftSequence) -> i128 {
        let base = pow2(self.m) * self.n;
        match self.tag {
            CurveTag::Phi => base,
            CurveTag::Psi => base + seq.c(self.m),
        }
    }
}

/// A curve `w = s z + z^{m+1}` with its defining series `w - s z - z^{m+1}` in `(z, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec<F: Field> {
    pub id: CurveId,
    pub slope: i128,
    pub series: FormalSeries<F>,
}

/// The curve `phi(m,n)` or `psi(m,n)` at truncation `K >= m + 1`.
pub fn curve<F: Field>(seq: &ShiftSequence, tag: CurveTag, m: u32, n: i128, trunc: u32) -> Result<CurveSpec<F>> {
    if m == 0 || m > seq.len() {
        return Err(Error::InvalidArgument(format!("level {m} outside 1..={}", seq.len())));
    }
    if trunc < m + 1 {
        return Err(Error::InsufficientTruncation { required: m + 1, available: trunc });
    }
    let id = CurveId { tag, m, n };
    let slope = id.slope(seq);
    let series = FormalSeries::from_terms(
        2,
        trunc,
        [
            (MultiIndex::new([0, 1]), F::one()),
            (MultiIndex::new([1, 0]), -F::from_big_integer(slope.into())),
            (MultiIndex::new([m + 1, 0]), -F::one()),
        ],
    )?;
    Ok(CurveSpec { id, slope, series })
}

/// `(z, w) -> (z, w + c z)`.
pub fn shear<F: Field>(c: i128, trunc: u32) -> FormalMap<F> {
    let z = FormalSeries::variable(2, 0, trunc);
    let w = FormalSeries::variable(2, 1, trunc).add(&z.scale(&F::from_big_integer(c.into()))).expect("same dimension");
    FormalMap::new(vec![z, w]).expect("shear is well formed")
}

/// The setting in which curves are compared: holomorphic, or realified to
/// two real equations in `(x1, y1, x2, y2)`.
trait Setting: Field {
    fn ideal(s: &FormalSeries<GaussianRational>) -> IdealPresentation<Self>;
    fn map(m: &FormalMap<GaussianRational>) -> Result<FormalMap<Self>>;
}

impl Setting for GaussianRational {
    fn ideal(s: &FormalSeries<GaussianRational>) -> IdealPresentation<Self> {
        IdealPresentation::new(s.dim(), vec![s.clone()]).expect("one generator")
    }

    fn map(m: &FormalMap<GaussianRational>) -> Result<FormalMap<Self>> {
        Ok(m.clone())
    }
}

impl Setting for Rational {
    fn ideal(s: &FormalSeries<GaussianRational>) -> IdealPresentation<Self> {
        let (re, im) = realify(s);
        IdealPresentation::new(2 * s.dim(), vec![re, im]).expect("two generators")
    }

    fn map(m: &FormalMap<GaussianRational>) -> Result<FormalMap<Self>> {
        realify_map(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveMatch {
    pub curve: CurveId,
    pub partner: CurveId,
}

/// A curve with no partner inside the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unmatched {
    pub curve: CurveId,
    /// The only partner shape that can match, when one exists.
    pub predicted: Option<CurveId>,
    /// Whether the pairwise check accepted the predicted partner.
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub k: u32,
    pub order: u32,
    pub m_max: u32,
    pub n_max: i128,
    pub truncation: u32,
    pub shift: i128,
    pub realified: bool,
    pub curves_per_side: usize,
    /// Verdict of the set-mode checker on the finite windows alone.
    pub window_verdict: bool,
    /// Partners found inside the window, for the `phi` curves.
    pub forward: Vec<CurveMatch>,
    /// Partners found inside the window, for the `psi` curves.
    pub backward: Vec<CurveMatch>,
    /// Partners that exist outside the window and were confirmed pairwise.
    pub boundary: Vec<Unmatched>,
    /// Curves with no partner at all, or whose predicted partner was rejected.
    pub genuine: Vec<Unmatched>,
    /// Every curve on both sides has a confirmed partner.
    pub passes: bool,
}

/// Checks `(z, w) -> (z, w + c_k z)` at order `k + 2`.
pub fn verify_finite_order_equivalence(k: u32, m_max: u32, n_max: i128, trunc: u32) -> Result<VerificationReport> {
    verify_at_order(k, m_max, n_max, trunc, k + 2, false)
}

/// Checks the level-`k` map at an arbitrary order, optionally in the realified setting.
///
/// Both windows are `1 <= m <= m_max`, `|n| <= n_max`. The set-mode checker
/// runs on the windows; any curve left without a partner is classified by
/// solving for the unique partner shape and checking that single pair.
pub fn verify_at_order(k: u32, m_max: u32, n_max: i128, trunc: u32, order: u32, realified: bool) -> Result<VerificationReport> {
    if k == 0 || m_max < k {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= m_max, got k = {k}, m_max = {m_max}")));
    }
    if n_max < 0 {
        return Err(Error::InvalidArgument("n_max must be nonnegative".into()));
    }
    if trunc < order {
        return Err(Error::InsufficientTruncation { required: order, available: trunc });
    }
    let seq = build_shift_sequence(m_max.max(order).max(k) + 1)?;
    if realified {
        run::<Rational>(&seq, k, m_max, n_max, trunc, order)
    } else {
        run::<GaussianRational>(&seq, k, m_max, n_max, trunc, order)
    }
}

fn window(tag: CurveTag, m_max: u32, n_max: i128) -> Vec<CurveId> {
    (1..=m_max).flat_map(|m| (-n_max..=n_max).map(move |n| CurveId { tag, m, n })).collect()
}

fn family<F: Setting>(seq: &ShiftSequence, ids: &[CurveId], trunc: u32) -> Result<GermFamily<F>> {
    let members = ids
        .iter()
        .map(|id| {
            let c = curve::<GaussianRational>(seq, id.tag, id.m, id.n, trunc.max(id.m + 1))?;
            Ok((id.to_string(), F::ideal(&c.series)))
        })
        .collect::<Result<Vec<_>>>()?;
    let dim = members.first().map_or(2, |(_, i)| i.dim());
    GermFamily::new(dim, MatchMode::Set, members)
}

/// The only curve of the `target` kind that can agree with `w = slope z + z^{m+1}`
/// below degree `order`.
fn predict(seq: &ShiftSequence, slope: i128, m: u32, order: u32, target: CurveTag) -> Option<CurveId> {
    // a visible z^{m+1} term forces the same level; otherwise any level whose
    // own z^{l+1} is invisible will do, and the lowest such level is the
    // weakest congruence by nesting
    let level = if m + 1 < order { m } else { (order - 1).max(1) };
    let offset = match target {
        CurveTag::Phi => 0,
        CurveTag::Psi => seq.c(level),
    };
    let diff = slope - offset;
    (diff.rem_euclid(pow2(level)) == 0).then_some(CurveId { tag: target, m: level, n: diff / pow2(level) })
}

fn run<F: Setting>(seq: &ShiftSequence, k: u32, m_max: u32, n_max: i128, trunc: u32, order: u32) -> Result<VerificationReport> {
    let shift = seq.c(k);
    let phi = F::map(&shear::<GaussianRational>(shift, trunc))?;
    let left_ids = window(CurveTag::Phi, m_max, n_max);
    let right_ids = window(CurveTag::Psi, m_max, n_max);
    let left = family::<F>(seq, &left_ids, trunc)?;
    let right = family::<F>(seq, &right_ids, trunc)?;
    let report = EquivalenceChecker::new(&phi, &left, &right)?.check(order, Strategy::Indexed)?;

    let in_window = |id: &CurveId| id.m <= m_max && id.n.abs() <= n_max;
    let confirm = |a: &CurveId, b: &CurveId| -> Result<bool> {
        let l = family::<F>(seq, std::slice::from_ref(a), trunc)?;
        let r = family::<F>(seq, std::slice::from_ref(b), trunc)?;
        Ok(EquivalenceChecker::new(&phi, &l, &r)?.check(order, Strategy::Exhaustive)?.holds)
    };

    let mut forward = Vec::new();
    let mut backward = Vec::new();
    let mut boundary = Vec::new();
    let mut genuine = Vec::new();
    for (verdicts, ids, other_ids, matches, target) in [
        (&report.left, &left_ids, &right_ids, &mut forward, CurveTag::Psi),
        (&report.right, &right_ids, &left_ids, &mut backward, CurveTag::Phi),
    ] {
        for v in verdicts {
            let id = ids[v.index];
            if let Some(p) = v.partner {
                matches.push(CurveMatch { curve: id, partner: other_ids[p] });
                continue;
            }
            // slope of the transported curve: pushed forward adds c_k, pulled back subtracts it
            let moved = match target {
                CurveTag::Psi => id.slope(seq) + shift,
                CurveTag::Phi => id.slope(seq) - shift,
            };
            let predicted = predict(seq, moved, id.m, order, target);
            let confirmed = match &predicted {
                Some(p) => match target {
                    CurveTag::Psi => confirm(&id, p)?,
                    CurveTag::Phi => confirm(p, &id)?,
                },
                None => false,
            };
            let entry = Unmatched { curve: id, predicted, confirmed };
            if confirmed && !predicted.as_ref().is_some_and(in_window) {
                boundary.push(entry);
            } else {
                genuine.push(entry);
            }
        }
    }
    let passes = genuine.is_empty();
    Ok(VerificationReport {
        k,
        order,
        m_max,
        n_max,
        truncation: trunc,
        shift,
        realified: F::imaginary_unit().is_none(),
        curves_per_side: left_ids.len(),
        window_verdict: report.holds,
        forward,
        backward,
        boundary,
        genuine,
        passes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub m_max: u32,
    pub window: i128,
    /// Every `psi(m,n)` slope lies in `S_m` (m <= m_max, |n| <= window).
    pub psi_slopes_in_levels: bool,
    /// Every `phi(m,0)` has slope 0.
    pub phi_tangents_zero: bool,
    /// `0 ∉ S_m` for every `m <= m_max`.
    pub zero_excluded: bool,
    /// Largest horizon over `|t| <= window`; `None` if some `t` survived every level.
    pub max_horizon: Option<u32>,
    pub holds: bool,
}

/// The finite part of the argument that no formal map can match the two sets:
/// the shared tangent of the `phi(m,0)` has no counterpart among `psi` curves
/// of unboundedly many levels.
pub fn verify_tangent_obstruction(m_max: u32, seq: &ShiftSequence, window: i128) -> Result<ObstructionReport> {
    if m_max == 0 || seq.len() < m_max {
        return Err(Error::InvalidArgument(format!("need 1 <= m_max <= {}, got {m_max}", seq.len())));
    }
    let mut psi_slopes_in_levels = true;
    let mut phi_tangents_zero = true;
    let mut zero_excluded = true;
    for m in 1..=m_max {
        for n in -window..=window {
            let psi = CurveId { tag: CurveTag::Psi, m, n };
            psi_slopes_in_levels &= seq.contains(m, psi.slope(seq));
        }
        phi_tangents_zero &= CurveId { tag: CurveTag::Phi, m, n: 0 }.slope(seq) == 0;
        zero_excluded &= !seq.contains(m, 0);
    }
    let mut max_horizon = Some(0);
    for t in -window..=window {
        let h = (1..=m_max).find(|&m| !seq.contains(m, t));
        max_horizon = match (max_horizon, h) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    let holds = psi_slopes_in_levels && phi_tangents_zero && zero_excluded && max_horizon.is_some();
    Ok(ObstructionReport { m_max, window, psi_slopes_in_levels, phi_tangents_zero, zero_excluded, max_horizon, holds })
}
