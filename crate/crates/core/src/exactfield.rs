//! Exact scalars: the rationals and quadratic extensions `Q(sqrt d)`.
//!
//! Every algebraic routine in the crate is generic over [`Field`]. A field
//! value carries a runtime tag (`()` for [`Rat`], the defining constant `d`
//! for [`QuadExt`]) so that constants such as zero and one can be built
//! without a value in hand. Operator impls panic on a tag mismatch; the
//! `checked_*` methods report it as [`FieldError::FieldMismatch`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("invalid defining constant d = {0}: must be squarefree and not 0 or 1")]
    InvalidDefiningConstant(i64),
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Exact field arithmetic shared by [`Rat`] and [`QuadExt`].
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Div<Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Neg<Output = Self>
{
    /// Runtime description of the field a value lives in.
    type Tag: Copy + Eq + fmt::Debug + Send + Sync;

    fn tag(&self) -> Self::Tag;
    fn zero(tag: Self::Tag) -> Self;
    fn one(tag: Self::Tag) -> Self;
    fn from_rat(q: Rat, tag: Self::Tag) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self, FieldError>;
    /// Square root inside the same field, if one exists.
    fn sqrt(&self) -> Option<Self>;
    /// The value as a rational, if it lies in `Q`.
    fn to_rat(&self) -> Option<Rat>;
    /// Least common multiple of the rational denominators appearing in the value.
    fn denominator_lcm(&self) -> BigInt;
    fn parse_in(s: &str, tag: Self::Tag) -> Result<Self, FieldError>;
    /// Human-readable field name, e.g. `q` or `q-sqrt:3`.
    fn describe_tag(tag: Self::Tag) -> String;

    fn from_int(n: i64, tag: Self::Tag) -> Self {
        Self::from_rat(Rat::from(n), tag)
    }

    fn is_one(&self) -> bool {
        *self == Self::one(self.tag())
    }

    fn check_same(&self, other: &Self) -> Result<(), FieldError> {
        if self.tag() == other.tag() {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch {
                left: Self::describe_tag(self.tag()),
                right: Self::describe_tag(other.tag()),
            })
        }
    }

    fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        Ok(self.clone() + other)
    }

    fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        Ok(self.clone() - other)
    }

    fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        Ok(self.clone() * other)
    }

    fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_same(other)?;
        Ok(self.clone() * &other.inv()?)
    }

    fn scale_rat(&self, q: &Rat) -> Self {
        self.clone() * Self::from_rat(q.clone(), self.tag())
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.tag());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }
}

/// An exact rational number, always stored in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are held inline.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

// `Small` is used exactly when both parts fit and the numerator is not `i64::MIN`.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Result<Self, FieldError> {
        if denom == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rat::from_i128(numer.into(), denom.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Self, FieldError> {
        if denom.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rat::from_big(BigRational::new(numer, denom)))
    }

    fn from_i128(n: i128, d: i128) -> Self {
        let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.gcd(&d);
        let (n, d) = (n / g, d / g);
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) if a != i64::MIN => Rat(Repr::Small(a, b)),
            _ => Rat(Repr::Big(BigRational::new_raw(n.into(), d.into()))),
        }
    }

    fn from_big(q: BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(a), Some(b)) if a != i64::MIN => Rat(Repr::Small(a, b)),
            _ => Rat(Repr::Big(q)),
        }
    }

    pub fn to_big_rational(&self) -> BigRational {
        match &self.0 {
            Repr::Small(a, b) => BigRational::new_raw((*a).into(), (*b).into()),
            Repr::Big(q) => q.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(a, _) => (*a).into(),
            Repr::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, b) => (*b).into(),
            Repr::Big(q) => q.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, b) => *b == 1,
            Repr::Big(q) => q.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(a, _) => *a < 0,
            Repr::Big(q) => q.is_negative(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn binop(
        &self,
        other: &Rat,
        small: impl FnOnce(i128, i128, i128, i128) -> (i128, i128),
        big: impl FnOnce(BigRational, BigRational) -> BigRational,
    ) -> Rat {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (n, d) = small((*a).into(), (*b).into(), (*c).into(), (*d).into());
                Rat::from_i128(n, d)
            }
            _ => Rat::from_big(big(self.to_big_rational(), other.to_big_rational())),
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat(Repr::Small(0, 1))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big_rational().cmp(&other.to_big_rational()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_i128(n.into(), 1)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rat {
    fn from(q: BigRational) -> Self {
        Rat::from_big(q)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(a, 1) => write!(f, "{a}"),
            Repr::Small(a, b) => write!(f, "{a}/{b}"),
            Repr::Big(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Repr::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = |reason: &str| FieldError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err("bad numerator"))?;
        let d: BigInt = d.parse().map_err(|_| err("bad denominator"))?;
        Rat::from_bigints(n, d)
    }
}

fn big_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Field for Rat {
    type Tag = ();

    fn tag(&self) -> Self::Tag {}

    fn zero(_: ()) -> Self {
        Rat(Repr::Small(0, 1))
    }

    fn one(_: ()) -> Self {
        Rat(Repr::Small(1, 1))
    }

    fn from_rat(q: Rat, _: ()) -> Self {
        q
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    fn inv(&self) -> Result<Self, FieldError> {
        match &self.0 {
            Repr::Small(0, _) => Err(FieldError::DivisionByZero),
            Repr::Small(a, b) => Ok(Rat::from_i128((*b).into(), (*a).into())),
            Repr::Big(q) => Ok(Rat::from_big(q.recip())),
        }
    }

    fn sqrt(&self) -> Option<Self> {
        let n = big_sqrt_exact(&self.numer())?;
        let d = big_sqrt_exact(&self.denom())?;
        Some(Rat::from_big(BigRational::new(n, d)))
    }

    fn to_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }

    fn denominator_lcm(&self) -> BigInt {
        self.denom()
    }

    fn parse_in(s: &str, _: ()) -> Result<Self, FieldError> {
        s.parse()
    }

    fn describe_tag(_: ()) -> String {
        "q".to_string()
    }
}

/// Element `a + b*w` of `Q(w)` with `w^2 = d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: i64,
}

/// Whether `d` is an admissible defining constant: squarefree and not 0 or 1.
pub fn is_valid_defining_constant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat, d: i64) -> Result<Self, FieldError> {
        if !is_valid_defining_constant(d) {
            return Err(FieldError::InvalidDefiningConstant(d));
        }
        Ok(QuadExt { a, b, d })
    }

    /// The generator `w` itself.
    pub fn omega(d: i64) -> Result<Self, FieldError> {
        QuadExt::new(Rat::from(0), Rat::from(1), d)
    }

    pub fn rational(q: Rat, d: i64) -> Result<Self, FieldError> {
        QuadExt::new(q, Rat::from(0), d)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn conjugate(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// `a^2 - d b^2`.
    pub fn norm(&self) -> Rat {
        self.a.clone() * &self.a - Rat::from(self.d) * &self.b * &self.b
    }

    fn assert_same(&self, other: &Self) {
        assert_eq!(
            self.d, other.d,
            "field mismatch: q-sqrt:{} vs q-sqrt:{}",
            self.d, other.d
        );
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*w", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{}-{}*w", self.a, self.b.abs()),
            (false, false) => write!(f, "{}+{}*w", self.a, self.b),
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [w^2={}]", self, self.d)
    }
}

impl Field for QuadExt {
    type Tag = i64;

    fn tag(&self) -> i64 {
        self.d
    }

    fn zero(d: i64) -> Self {
        QuadExt { a: Rat::from(0), b: Rat::from(0), d }
    }

    fn one(d: i64) -> Self {
        QuadExt { a: Rat::from(1), b: Rat::from(0), d }
    }

    fn from_rat(q: Rat, d: i64) -> Self {
        QuadExt { a: q, b: Rat::from(0), d }
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn inv(&self) -> Result<Self, FieldError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let ninv = n.inv()?;
        Ok(QuadExt {
            a: self.a.clone() * &ninv,
            b: -(self.b.clone() * &ninv),
            d: self.d,
        })
    }

    fn sqrt(&self) -> Option<Self> {
        let d = self.d;
        if self.b.is_zero() {
            if let Some(r) = self.a.sqrt() {
                return Some(QuadExt::from_rat(r, d));
            }
            let c = (self.a.clone() / Rat::from(d)).sqrt()?;
            return Some(QuadExt { a: Rat::from(0), b: c, d });
        }
        // (u + v w)^2 = a + b w  <=>  u^2 + d v^2 = a, 2 u v = b.
        let n = self.norm().sqrt()?;
        let half = Rat::new(1, 2).ok()?;
        for cand in [self.a.clone() + &n, self.a.clone() - &n] {
            let u2 = cand * &half;
            if let Some(u) = u2.sqrt() {
                if u.is_zero() {
                    continue;
                }
                let v = self.b.clone() / (Rat::from(2) * &u);
                let r = QuadExt { a: u, b: v, d };
                if r.clone() * &r == *self {
                    return Some(r);
                }
            }
        }
        None
    }

    fn to_rat(&self) -> Option<Rat> {
        self.b.is_zero().then(|| self.a.clone())
    }

    fn denominator_lcm(&self) -> BigInt {
        self.a.denom().lcm(&self.b.denom())
    }

    fn parse_in(s: &str, d: i64) -> Result<Self, FieldError> {
        if !is_valid_defining_constant(d) {
            return Err(FieldError::InvalidDefiningConstant(d));
        }
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(head) = t.strip_suffix('w') else {
            return Ok(QuadExt::from_rat(t.parse()?, d));
        };
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let b = match b_str {
            "" | "+" => Rat::from(1),
            "-" => Rat::from(-1),
            other => other.trim_start_matches('+').parse().map_err(|_| FieldError::Parse {
                input: s.to_string(),
                reason: "bad w-coefficient".to_string(),
            })?,
        };
        let a: Rat = a_str.parse().map_err(|_| FieldError::Parse {
            input: s.to_string(),
            reason: "bad rational part".to_string(),
        })?;
        Ok(QuadExt { a, b, d })
    }

    fn describe_tag(d: i64) -> String {
        format!("q-sqrt:{d}")
    }
}

// Operator forwarding: owned/borrowed combinations share one implementation.
macro_rules! forward_binop {
    ($t:ty, $tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a $t> for &'a $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                let f: fn(&$t, &$t) -> $t = $body;
                f(self, rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_binop!(Rat, Add, add, |x, y| x.binop(y, |a, b, c, d| (a * d + c * b, b * d), |p, q| p + q));
forward_binop!(Rat, Sub, sub, |x, y| x.binop(y, |a, b, c, d| (a * d - c * b, b * d), |p, q| p - q));
forward_binop!(Rat, Mul, mul, |x, y| x.binop(y, |a, b, c, d| (a * c, b * d), |p, q| p * q));
forward_binop!(Rat, Div, div, |x, y| {
    assert!(!y.is_zero(), "division by zero");
    x.binop(y, |a, b, c, d| (a * d, b * c), |p, q| p / q)
});

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self.0 {
            Repr::Small(a, b) => Rat(Repr::Small(-a, b)),
            Repr::Big(q) => Rat::from_big(-q),
        }
    }
}

forward_binop!(QuadExt, Add, add, |x, y| {
    x.assert_same(y);
    QuadExt { a: x.a.clone() + &y.a, b: x.b.clone() + &y.b, d: x.d }
});
forward_binop!(QuadExt, Sub, sub, |x, y| {
    x.assert_same(y);
    QuadExt { a: x.a.clone() - &y.a, b: x.b.clone() - &y.b, d: x.d }
});
forward_binop!(QuadExt, Mul, mul, |x, y| {
    x.assert_same(y);
    let dd = Rat::from(x.d);
    QuadExt {
        a: x.a.clone() * &y.a + dd * &x.b * &y.b,
        b: x.a.clone() * &y.b + x.b.clone() * &y.a,
        d: x.d,
    }
});
forward_binop!(QuadExt, Div, div, |x, y| {
    x.assert_same(y);
    x.clone() * y.inv().expect("division by zero")
});

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn q(s: &str, d: i64) -> QuadExt {
        QuadExt::parse_in(s, d).unwrap()
    }

    #[test]
    fn rational_sum() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
        assert_eq!(r("4/6").to_string(), "2/3");
        assert_eq!(r("-3/-6").to_string(), "1/2");
    }

    #[test]
    fn omega_squares_to_d() {
        let w = QuadExt::omega(3).unwrap();
        assert_eq!(w.clone() * &w, QuadExt::from_int(3, 3));
    }

    #[test]
    fn conjugate_product_is_norm() {
        let x = q("1+w", -3);
        let y = q("1-w", -3);
        assert_eq!(x.clone() * &y, QuadExt::from_int(4, -3));
        assert_eq!(x.norm(), Rat::from(4));
        assert_eq!(x.conjugate(), y);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Rat::from(1).checked_div(&Rat::from(0)), Err(FieldError::DivisionByZero));
        assert_eq!(
            QuadExt::one(5).checked_div(&QuadExt::zero(5)),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let x = QuadExt::omega(3).unwrap();
        let y = QuadExt::omega(-3).unwrap();
        assert!(matches!(x.checked_mul(&y), Err(FieldError::FieldMismatch { .. })));
    }

    #[test]
    fn defining_constant_must_be_squarefree() {
        assert!(QuadExt::omega(4).is_err());
        assert!(QuadExt::omega(1).is_err());
        assert!(QuadExt::omega(0).is_err());
        assert!(QuadExt::omega(-12).is_err());
        assert!(QuadExt::omega(-1).is_ok());
        assert!(QuadExt::omega(30).is_ok());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "3", "-1/2", "w", "-w", "2*w", "1+w", "1/2-3/4*w", "-5+7*w"] {
            let x = q(s, -3);
            assert_eq!(q(&x.to_string(), -3), x, "{s}");
        }
        assert_eq!(q("-w", 2).b(), &Rat::from(-1));
        assert_eq!(q("1/2-3/4*w", 2).a(), &r("1/2"));
        assert!(QuadExt::parse_in("1+x", 2).is_err());
    }

    #[test]
    fn inverse_and_sqrt() {
        let x = q("2-3*w", 7);
        assert_eq!(x.clone() * x.inv().unwrap(), QuadExt::one(7));
        let s = q("1/3+2*w", 5);
        let sq = s.clone() * &s;
        let root = sq.sqrt().unwrap();
        assert_eq!(root.clone() * &root, sq);
        assert_eq!(QuadExt::from_int(-3, -3).sqrt().unwrap(), QuadExt::omega(-3).unwrap());
        assert!(QuadExt::from_int(2, 3).sqrt().is_none());
        assert_eq!(r("9/4").sqrt(), Some(r("3/2")));
        assert_eq!(r("2").sqrt(), None);
    }
}
