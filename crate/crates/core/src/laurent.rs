//! Exact arithmetic in the Laurent polynomial ring `Z[t, t^-1]`.
//!
//! Elements are stored sparsely as a sorted list of `(exponent, coefficient)`
//! pairs with no zero coefficients, so structural equality is ring equality.
//! The ring carries the involution `t -> t^-1`, and the units are exactly the
//! monomials `±t^k`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// An element of `Z[t, t^-1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigInt)>,
}

/// Sign of a unit `±t^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// The unit `sign * t^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnitWitness {
    pub sign: Sign,
    pub exponent: i64,
}

impl UnitWitness {
    pub const ONE: UnitWitness = UnitWitness { sign: Sign::Plus, exponent: 0 };

    pub fn new(sign: Sign, exponent: i64) -> Self {
        UnitWitness { sign, exponent }
    }

    pub fn inverse(self) -> Self {
        UnitWitness { sign: self.sign, exponent: -self.exponent }
    }

    pub fn involve(self) -> Self {
        self.inverse()
    }

    pub fn to_poly(self) -> LaurentPoly {
        LaurentPoly::monomial(self.sign.as_i64(), self.exponent)
    }
}

impl Mul for UnitWitness {
    type Output = UnitWitness;
    fn mul(self, rhs: UnitWitness) -> UnitWitness {
        UnitWitness { sign: self.sign * rhs.sign, exponent: self.exponent + rhs.exponent }
    }
}

impl fmt::Display for UnitWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Plus { "+" } else { "-" };
        write!(f, "({s},{})", self.exponent)
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// `1 - t`, the recurring generator of the augmentation ideal.
    pub fn one_minus_t() -> Self {
        Self::from_terms([(0, 1), (1, -1)])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(k, c)] }
        }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut v: Vec<(i64, BigInt)> = terms.into_iter().map(|(k, c)| (k, c.into())).collect();
        v.sort_by_key(|(k, _)| *k);
        let mut out: Vec<(i64, BigInt)> = Vec::with_capacity(v.len());
        for (k, c) in v {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => *lc += c,
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    /// Builds `sum c_i t^(lowest + i)` from a dense coefficient list.
    pub fn from_dense<C: Into<BigInt>>(lowest: i64, coeffs: impl IntoIterator<Item = C>) -> Self {
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (lowest + i as i64, c.into()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        match self.terms.binary_search_by_key(&k, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.first().map(|(k, _)| *k)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.last().map(|(k, _)| *k)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    /// The involution `t -> t^-1`.
    pub fn involve(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn is_involution_fixed(&self) -> bool {
        *self == self.involve()
    }

    /// Evaluation at `t = 1`.
    pub fn augment(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Returns the witness when `self = ±t^k`.
    pub fn is_unit(&self) -> Option<UnitWitness> {
        match self.terms.as_slice() {
            [(k, c)] if c.is_one() => Some(UnitWitness::new(Sign::Plus, *k)),
            [(k, c)] if (-c).is_one() => Some(UnitWitness::new(Sign::Minus, *k)),
            _ => None,
        }
    }

    /// Splits `self = unit * canonical`, where `canonical` has lowest exponent
    /// zero and a positive constant term. Zero maps to `(0, +t^0)`.
    pub fn normalize_associate(&self) -> (LaurentPoly, UnitWitness) {
        let Some((low, lc)) = self.terms.first() else {
            return (Self::zero(), UnitWitness::ONE);
        };
        let sign = if lc.is_negative() { Sign::Minus } else { Sign::Plus };
        let unit = UnitWitness::new(sign, *low);
        let canonical = LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e - low, if sign == Sign::Minus { -c } else { c.clone() }))
                .collect(),
        };
        (canonical, unit)
    }

    pub fn canonical(&self) -> LaurentPoly {
        self.normalize_associate().0
    }

    /// Equality up to multiplication by a unit `±t^k`.
    pub fn assoc_eq(&self, other: &LaurentPoly) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn mul_unit(&self, u: UnitWitness) -> LaurentPoly {
        let shifted = self.shift(u.exponent);
        match u.sign {
            Sign::Plus => shifted,
            Sign::Minus => -shifted,
        }
    }

    /// Returns `r` with `self = divisor * r` when such `r` exists in the ring.
    pub fn divide_exact(&self, divisor: &LaurentPoly) -> Result<Option<LaurentPoly>, LaurentError> {
        let (Some(dlow), Some(dhigh)) = (divisor.min_exponent(), divisor.max_exponent()) else {
            return Err(LaurentError::DivisionByZero);
        };
        let Some(plow) = self.min_exponent() else {
            return Ok(Some(Self::zero()));
        };
        // Shift both to ordinary polynomials with nonzero constant term and
        // run long division from the top; the divisor is coprime to t.
        let num_deg = (self.max_exponent().unwrap() - plow) as usize;
        let den_deg = (dhigh - dlow) as usize;
        if num_deg < den_deg {
            return Ok(None);
        }
        let mut rem: Vec<BigInt> = vec![BigInt::zero(); num_deg + 1];
        for (e, c) in &self.terms {
            rem[(e - plow) as usize] = c.clone();
        }
        let den: Vec<(usize, &BigInt)> = divisor.terms.iter().map(|(e, c)| ((e - dlow) as usize, c)).collect();
        let lead = den.last().unwrap().1;
        let mut quot = vec![BigInt::zero(); num_deg - den_deg + 1];
        for qi in (0..quot.len()).rev() {
            let top = &rem[qi + den_deg];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Ok(None);
            }
            for (d, c) in &den {
                let v = &rem[qi + d] - &q * *c;
                rem[qi + d] = v;
            }
            quot[qi] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Ok(None);
        }
        Ok(Some(Self::from_dense(plow - dlow, quot)))
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest absolute coefficient, zero for the zero polynomial.
    pub fn height(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
    }
}

/// The ring map `Z -> Z[t, t^-1]`.
pub fn iota(n: impl Into<BigInt>) -> LaurentPoly {
    LaurentPoly::constant(n)
}

fn merge(a: &[(i64, BigInt)], b: &[(i64, BigInt)], negate_b: bool) -> Vec<(i64, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let fix = |c: &BigInt| if negate_b { -c } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push((b[j].0, fix(&b[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(k, c)| (*k, fix(c))));
    out
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: merge(&self.terms, &rhs.terms, false) }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly { terms: merge(&self.terms, &rhs.terms, true) }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let low = self.terms[0].0 + rhs.terms[0].0;
        let high = self.terms.last().unwrap().0 + rhs.terms.last().unwrap().0;
        let mut acc = vec![BigInt::zero(); (high - low + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                acc[(ea + eb - low) as usize] += ca * cb;
            }
        }
        LaurentPoly::from_dense(low, acc)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.terms = merge(&self.terms, &rhs.terms, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.terms = merge(&self.terms, &rhs.terms, true);
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| &acc + &p)
    }
}

impl fmt::Display for LaurentPoly {
    /// Prints terms in increasing exponent, e.g. `-t^-1 + 2 - t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match *e {
                0 => String::new(),
                1 => "t".to_string(),
                k => format!("t^{k}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}{mono}")?;
            }
        }
        Ok(())
    }
}
