//! Wall self-intersection numbers.
//!
//! `μ(S)` lives in the quotient of `Z[t, t^-1]` (as an abelian group) that
//! identifies `t^r` with `t^-r`; a class is stored by its coefficients on
//! `[t^r]` for `r >= 0`. Surfaces are described by their net intersection
//! events, and `λ(S, S) = μ(S) + conj(μ(S)) + e(S)`.

use std::collections::BTreeMap;
use std::ops::{Add, Neg};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{self, solve_hermitian_zero_aug};
use crate::laurent::{iota, LaurentPoly, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WallError {
    #[error("pairing shape check needs Euler number 0, got {0}")]
    NonzeroEuler(BigInt),
    #[error("pairing shape check does not apply to surfaces with generic double points (event {0})")]
    GenericDoublePoint(usize),
    #[error("relabeling is not a permutation of {0} events")]
    NotAPermutation(usize),
    #[error(transparent)]
    Form(#[from] forms::FormError),
}

/// An element of `Λ / <t^r ~ t^-r>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WallClass {
    coeffs: BTreeMap<u64, BigInt>,
}

impl WallClass {
    pub fn zero() -> Self {
        WallClass::default()
    }

    pub fn from_classes<C: Into<BigInt>>(pairs: impl IntoIterator<Item = (u64, C)>) -> Self {
        let mut w = WallClass::zero();
        for (r, c) in pairs {
            w.add_class(r, c.into());
        }
        w
    }

    fn add_class(&mut self, r: u64, c: BigInt) {
        let slot = self.coeffs.entry(r).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&r);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, r: u64) -> BigInt {
        self.coeffs.get(&r).cloned().unwrap_or_default()
    }

    pub fn classes(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.coeffs.iter().map(|(r, c)| (*r, c))
    }

    /// The representative `sum a_r t^r` with nonnegative exponents.
    pub fn representative(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(r, c)| (*r as i64, c.clone())))
    }

    pub fn scale(&self, s: Sign) -> WallClass {
        match s {
            Sign::Plus => self.clone(),
            Sign::Minus => -self.clone(),
        }
    }
}

impl Add for WallClass {
    type Output = WallClass;
    fn add(mut self, rhs: WallClass) -> WallClass {
        for (r, c) in rhs.coeffs {
            self.add_class(r, c);
        }
        self
    }
}

impl Neg for WallClass {
    type Output = WallClass;
    fn neg(mut self) -> WallClass {
        for c in self.coeffs.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl std::iter::Sum for WallClass {
    fn sum<I: Iterator<Item = WallClass>>(iter: I) -> Self {
        iter.fold(WallClass::zero(), Add::add)
    }
}

/// Folds `t^-r` onto `t^r`.
pub fn project(p: &LaurentPoly) -> WallClass {
    WallClass::from_classes(p.terms().iter().map(|(k, c)| (k.unsigned_abs(), c.clone())))
}

/// `w + conj(w)` computed on the nonnegative representative; this is the
/// same for every lift of `w`.
pub fn hermitize(w: &WallClass) -> LaurentPoly {
    let rep = w.representative();
    &rep + &rep.involve()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A transverse double point with group element `t^k`.
    GenericDoublePoint,
    /// Net contribution `±t^k (1 - t)` of a disc interior meeting the torus it surgers.
    TorusPiercing,
    /// Net contribution `±t^k (1 - t)(1 - t^-1)` of a self-intersection of the surgery disc.
    DiscSelfIntersection,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionEvent {
    pub kind: EventKind,
    pub sign: Sign,
    pub k: i64,
}

impl IntersectionEvent {
    pub fn new(kind: EventKind, sign: Sign, k: i64) -> Self {
        IntersectionEvent { kind, sign, k }
    }

    /// The event's contribution to `μ`, as a polynomial before folding.
    pub fn contribution(&self) -> LaurentPoly {
        let omt = LaurentPoly::one_minus_t();
        let mono = LaurentPoly::monomial(self.sign.as_i64(), self.k);
        match self.kind {
            EventKind::GenericDoublePoint => mono,
            EventKind::TorusPiercing => mono * omt,
            EventKind::DiscSelfIntersection => mono * &omt * omt.involve(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    pub label: String,
    pub events: Vec<IntersectionEvent>,
    /// Euler number of the normal bundle.
    pub euler: BigInt,
}

impl SurfaceModel {
    pub fn new(label: impl Into<String>, events: Vec<IntersectionEvent>, euler: impl Into<BigInt>) -> Self {
        SurfaceModel { label: label.into(), events, euler: euler.into() }
    }
}

pub fn mu(s: &SurfaceModel) -> WallClass {
    s.events.iter().map(|e| project(&e.contribution())).sum()
}

pub fn lambda_self(s: &SurfaceModel) -> LaurentPoly {
    hermitize(&mu(s)) + iota(s.euler.clone())
}

/// For a framed surface built only from torus piercings and disc
/// self-intersections, returns `c` with `λ(S, S) = c (1 - t) + c̄ (1 - t^-1)`.
pub fn pairing_shape_check(s: &SurfaceModel) -> Result<LaurentPoly, WallError> {
    if !s.euler.is_zero() {
        return Err(WallError::NonzeroEuler(s.euler.clone()));
    }
    if let Some(i) = s.events.iter().position(|e| e.kind == EventKind::GenericDoublePoint) {
        return Err(WallError::GenericDoublePoint(i));
    }
    let lambda = lambda_self(s);
    let c =
        solve_hermitian_zero_aug(&lambda)?.expect("torus piercings and disc self-intersections have augmentation zero");
    Ok(c)
}

/// Applies the relabeling `perm` (event `i` of the result is event `perm[i]`
/// of `s`) and reports whether `μ` and `λ` are unchanged.
pub fn relabel_invariance(s: &SurfaceModel, perm: &[usize]) -> Result<bool, WallError> {
    let n = s.events.len();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(WallError::NotAPermutation(n));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(WallError::NotAPermutation(n));
        }
        seen[p] = true;
    }
    let relabeled = SurfaceModel {
        label: s.label.clone(),
        events: perm.iter().map(|&p| s.events[p].clone()).collect(),
        euler: s.euler.clone(),
    };
    Ok(mu(&relabeled) == mu(s) && lambda_self(&relabeled) == lambda_self(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::hermitian_zero_aug;
    use crate::laurent::tests::{arb_poly, lp};
    use proptest::prelude::*;

    fn ev(kind: EventKind, sign: i64, k: i64) -> IntersectionEvent {
        IntersectionEvent::new(kind, Sign::from_i64(sign).unwrap(), k)
    }

    fn class(pairs: &[(u64, i64)]) -> WallClass {
        WallClass::from_classes(pairs.iter().copied())
    }

    #[test]
    fn project_examples() {
        assert_eq!(project(&LaurentPoly::one_minus_t()), class(&[(0, 1), (1, -1)]));
        assert_eq!(project(&lp(&[(0, 1), (-1, -1)])), class(&[(0, 1), (1, -1)]));
        assert_eq!(project(&lp(&[(-1, -1), (0, 2), (1, -1)])), class(&[(0, 2), (1, -2)]));
    }

    #[test]
    fn hermitize_examples() {
        assert_eq!(hermitize(&class(&[(0, 1), (1, -1)])), lp(&[(-1, -1), (0, 2), (1, -1)]));
        assert!(hermitize(&WallClass::zero()).is_zero());
        assert_eq!(hermitize(&class(&[(2, 3)])), lp(&[(-2, 3), (2, 3)]));
    }

    #[test]
    fn mu_examples() {
        let s = SurfaceModel::new("S1", vec![ev(EventKind::TorusPiercing, 1, 0)], 0);
        assert_eq!(mu(&s), class(&[(0, 1), (1, -1)]));
        let s = SurfaceModel::new(
            "cancel",
            vec![ev(EventKind::GenericDoublePoint, 1, 1), ev(EventKind::GenericDoublePoint, -1, 1)],
            0,
        );
        assert!(mu(&s).is_zero());
        let s = SurfaceModel::new("disc", vec![ev(EventKind::DiscSelfIntersection, 1, 0)], 0);
        assert_eq!(mu(&s), class(&[(0, 2), (1, -2)]));
    }

    #[test]
    fn lambda_examples() {
        let s1 = SurfaceModel::new("S1", vec![ev(EventKind::TorusPiercing, 1, 0)], 0);
        assert_eq!(lambda_self(&s1), lp(&[(-1, -1), (0, 2), (1, -1)]));
        assert!(lambda_self(&SurfaceModel::new("S0", vec![], 0)).is_zero());
        assert_eq!(lambda_self(&SurfaceModel::new("e4", vec![], 4)), lp(&[(0, 4)]));
    }

    #[test]
    fn shape_check_examples() {
        let s1 = SurfaceModel::new("S1", vec![ev(EventKind::TorusPiercing, 1, 0)], 0);
        assert_eq!(pairing_shape_check(&s1).unwrap(), LaurentPoly::one());
        assert!(pairing_shape_check(&SurfaceModel::new("S0", vec![], 0)).unwrap().is_zero());
        let s = SurfaceModel::new("disc", vec![ev(EventKind::DiscSelfIntersection, -1, 1)], 0);
        let c = pairing_shape_check(&s).unwrap();
        assert_eq!(hermitian_zero_aug(&c), lambda_self(&s));

        assert!(matches!(pairing_shape_check(&SurfaceModel::new("e4", vec![], 4)), Err(WallError::NonzeroEuler(_))));
        let s = SurfaceModel::new("gdp", vec![ev(EventKind::GenericDoublePoint, 1, 2)], 0);
        assert_eq!(pairing_shape_check(&s), Err(WallError::GenericDoublePoint(0)));
    }

    #[test]
    fn relabel_examples() {
        let s = SurfaceModel::new(
            "mixed",
            vec![ev(EventKind::TorusPiercing, 1, 3), ev(EventKind::DiscSelfIntersection, -1, -2)],
            0,
        );
        assert!(relabel_invariance(&s, &[0, 1]).unwrap());
        assert!(relabel_invariance(&s, &[1, 0]).unwrap());
        assert!(relabel_invariance(&s, &[0, 0]).is_err());
        assert!(relabel_invariance(&s, &[0]).is_err());
    }

    fn arb_event() -> impl Strategy<Value = IntersectionEvent> {
        (0..3usize, any::<bool>(), -4i64..=4).prop_map(|(k, s, e)| {
            let kind = [EventKind::GenericDoublePoint, EventKind::TorusPiercing, EventKind::DiscSelfIntersection][k];
            IntersectionEvent::new(kind, if s { Sign::Plus } else { Sign::Minus }, e)
        })
    }

    proptest! {
        #[test]
        fn project_is_additive(p in arb_poly(4, 5), q in arb_poly(4, 5), k in -6i64..=6) {
            prop_assert_eq!(project(&(&p + &q)), project(&p) + project(&q));
            prop_assert_eq!(project(&LaurentPoly::monomial(1, k)), project(&LaurentPoly::monomial(1, -k)));
            prop_assert_eq!(hermitize(&project(&p)), &p + &p.involve());
        }

        #[test]
        fn any_lift_hermitizes_the_same(w in arb_poly(4, 5), flips in prop::collection::vec(any::<bool>(), 9)) {
            let w = project(&w);
            // negate a subset of exponents in the representative
            let lift = LaurentPoly::from_terms(w.classes().map(|(r, c)| {
                let r = r as i64;
                (if flips[(r as usize) % flips.len()] { -r } else { r }, c.clone())
            }));
            prop_assert_eq!(&lift + &lift.involve(), hermitize(&w));
        }

        #[test]
        fn lambda_is_hermitian_and_order_free(
            (events, perm) in prop::collection::vec(arb_event(), 0..8).prop_flat_map(|events| {
                let ids: Vec<usize> = (0..events.len()).collect();
                (Just(events), Just(ids).prop_shuffle())
            }),
            euler in -5i64..=5,
        ) {
            let s = SurfaceModel::new("random", events, euler);
            prop_assert!(lambda_self(&s).is_involution_fixed());
            prop_assert!(relabel_invariance(&s, &perm).unwrap());
        }

        #[test]
        fn framed_surgery_surfaces_have_the_pairing_shape(
            events in prop::collection::vec(arb_event(), 0..8),
        ) {
            let events: Vec<_> = events.into_iter().filter(|e| e.kind != EventKind::GenericDoublePoint).collect();
            let s = SurfaceModel::new("surgered", events, 0);
            prop_assert!(lambda_self(&s).augment().is_zero());
            let c = pairing_shape_check(&s).unwrap();
            prop_assert_eq!(hermitian_zero_aug(&c), lambda_self(&s));
        }
    }
}
