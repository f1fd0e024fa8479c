//! Exact arithmetic in the two totally real ground fields ℚ and ℚ(√2).
//!
//! Elements are stored as a pair of reduced big rationals `a + b√2`. Nothing
//! here ever rounds: signs at the real embeddings are decided by comparing
//! `a²` with `2b²`, so signatures computed from these values are exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed fields: {0} and {1}")]
    MixedFields(FieldTag, FieldTag),
    #[error("cannot parse field element {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// The ground field `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Q(sqrt2)")]
    RationalsSqrt2,
}

impl FieldTag {
    /// Real embeddings of the field, identity first.
    pub fn embeddings(self) -> &'static [Embedding] {
        match self {
            FieldTag::Rationals => &[Embedding::Identity],
            FieldTag::RationalsSqrt2 => &[Embedding::Identity, Embedding::Sigma],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldTag::Rationals => "Q",
            FieldTag::RationalsSqrt2 => "Q(sqrt2)",
        }
    }

    pub fn parse(s: &str) -> Result<FieldTag, FieldError> {
        match s.trim() {
            "Q" | "q" | "QQ" | "rationals" => Ok(FieldTag::Rationals),
            "Q(sqrt2)" | "Q(r2)" | "q(sqrt2)" | "Qsqrt2" | "sqrt2" => Ok(FieldTag::RationalsSqrt2),
            other => Err(FieldError::Parse {
                input: other.to_string(),
                reason: "unknown field, expected Q or Q(sqrt2)".into(),
            }),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A real embedding `k → ℝ`. `Sigma` sends √2 to −√2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Embedding {
    Identity,
    Sigma,
}

/// An exact element `a + b√2` of `k`. For `FieldTag::Rationals`, `b` is always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    a: BigRational,
    b: BigRational,
    field: FieldTag,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sign_of(x: &BigRational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sign of `a + b√2` without leaving ℚ.
fn sign_of_surd(a: &BigRational, b: &BigRational) -> i8 {
    let sa = sign_of(a);
    let sb = sign_of(b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // opposite signs: |a| vs |b|√2
    let a2 = a * a;
    let b2 = b * b * rat(2);
    match a2.cmp(&b2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Skips the gcd work when either factor is zero, the common case for
/// rational elements.
fn product(x: &BigRational, y: &BigRational) -> BigRational {
    if x.is_zero() || y.is_zero() {
        BigRational::zero()
    } else {
        x * y
    }
}

impl FieldElement {
    /// Builds `a + b√2`; fails if `b ≠ 0` in ℚ.
    pub fn new(a: BigRational, b: BigRational, field: FieldTag) -> Result<Self, FieldError> {
        if field == FieldTag::Rationals && !b.is_zero() {
            return Err(FieldError::Parse {
                input: format!("{a} + {b}*r2"),
                reason: "√2 component in Q".into(),
            });
        }
        Ok(FieldElement { a, b, field })
    }

    pub fn rational(a: BigRational, field: FieldTag) -> Self {
        FieldElement { a, b: BigRational::zero(), field }
    }

    pub fn from_int(n: i64, field: FieldTag) -> Self {
        Self::rational(rat(n), field)
    }

    pub fn from_ratio(p: i64, q: i64, field: FieldTag) -> Self {
        Self::rational(BigRational::new(BigInt::from(p), BigInt::from(q)), field)
    }

    /// `a + b√2` with integer parts. Panics when `b ≠ 0` over ℚ.
    pub fn from_ints(a: i64, b: i64, field: FieldTag) -> Self {
        Self::new(rat(a), rat(b), field).expect("√2 component in Q")
    }

    pub fn sqrt2() -> Self {
        FieldElement { a: BigRational::zero(), b: rat(1), field: FieldTag::RationalsSqrt2 }
    }

    pub fn zero(field: FieldTag) -> Self {
        Self::from_int(0, field)
    }

    pub fn one(field: FieldTag) -> Self {
        Self::from_int(1, field)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Membership in the ring of integers: ℤ for ℚ, ℤ[√2] for ℚ(√2).
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    fn check_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field != other.field {
            Err(FieldError::MixedFields(self.field, other.field))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        Ok(FieldElement { a: &self.a + &other.a, b: &self.b + &other.b, field: self.field })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        Ok(FieldElement { a: &self.a - &other.a, b: &self.b - &other.b, field: self.field })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        let bb = product(&self.b, &other.b);
        let a = product(&self.a, &other.a) + &bb + bb;
        let b = product(&self.a, &other.b) + product(&self.b, &other.a);
        Ok(FieldElement { a, b, field: self.field })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_field(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse via `1/(a+b√2) = (a−b√2)/(a²−2b²)`.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = &self.a * &self.a - &self.b * &self.b * rat(2);
        Ok(FieldElement { a: &self.a / &n, b: -&self.b / &n, field: self.field })
    }

    /// `a − b√2`; the identity on ℚ.
    pub fn galois_conjugate(&self) -> Self {
        FieldElement { a: self.a.clone(), b: -&self.b, field: self.field }
    }

    /// Field norm to ℚ: `a² − 2b²` over ℚ(√2), `a` itself over ℚ.
    pub fn norm(&self) -> BigRational {
        match self.field {
            FieldTag::Rationals => self.a.clone(),
            FieldTag::RationalsSqrt2 => &self.a * &self.a - &self.b * &self.b * rat(2),
        }
    }

    /// Trace to ℚ.
    pub fn trace(&self) -> BigRational {
        match self.field {
            FieldTag::Rationals => self.a.clone(),
            FieldTag::RationalsSqrt2 => &self.a * rat(2),
        }
    }

    /// Image under an embedding, still as an exact element.
    pub fn embed(&self, embedding: Embedding) -> Self {
        match embedding {
            Embedding::Identity => self.clone(),
            Embedding::Sigma => self.galois_conjugate(),
        }
    }

    /// Exact sign of the real number `a ± b√2`.
    pub fn sign_at(&self, embedding: Embedding) -> i8 {
        match embedding {
            Embedding::Identity => sign_of_surd(&self.a, &self.b),
            Embedding::Sigma => sign_of_surd(&self.a, &-&self.b),
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign_at(Embedding::Identity)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.field.embeddings().iter().all(|&e| self.sign_at(e) > 0)
    }

    /// Decides whether `self = y²` for some `y ∈ k`.
    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// An exact square root in `k`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match self.field {
            FieldTag::Rationals => rational_sqrt(&self.a).map(|r| Self::rational(r, self.field)),
            FieldTag::RationalsSqrt2 => self.sqrt_quadratic(),
        }
    }

    // (c + d√2)² = c² + 2d² + 2cd√2, so c² and 2d² are the roots of
    // t² − a·t + b²/2 = 0, i.e. (a ± s)/2 with s² = a² − 2b².
    fn sqrt_quadratic(&self) -> Option<Self> {
        let field = self.field;
        if !self.is_totally_positive() {
            return None;
        }
        let s = rational_sqrt(&self.norm())?;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let roots = [(&self.a + &s) * &half, (&self.a - &s) * &half];
        for (c2, two_d2) in [(&roots[0], &roots[1]), (&roots[1], &roots[0])] {
            let d2 = two_d2 * &half;
            if let (Some(c), Some(d)) = (rational_sqrt(c2), rational_sqrt(&d2)) {
                // fix the sign of d so that 2cd = b
                let d = if sign_of(&self.b) * sign_of(&c) < 0 { -d } else { d };
                let y = FieldElement { a: c, b: d, field };
                if &y * &y == *self {
                    return Some(y);
                }
            }
        }
        None
    }

    /// Approximate real value at an embedding.
    pub fn to_f64_at(&self, embedding: Embedding) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        match embedding {
            Embedding::Identity => a + b * std::f64::consts::SQRT_2,
            Embedding::Sigma => a - b * std::f64::consts::SQRT_2,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_f64_at(Embedding::Identity)
    }

    /// Smallest positive integer `d` with `d·self ∈ ℤ[√2]` (or ℤ).
    pub fn denominator_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.a.denom(), self.b.denom())
    }

    /// Parses the textual form `"a/b + c/d*r2"` (also `"r2"`, `"-3*r2"`, `"5"`).
    pub fn parse(input: &str, field: FieldTag) -> Result<Self, FieldError> {
        let err = |reason: &str| FieldError::Parse { input: input.to_string(), reason: reason.into() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let bytes: Vec<char> = s.chars().collect();
        let mut terms = Vec::new();
        let mut start = 0;
        for i in 1..bytes.len() {
            if (bytes[i] == '+' || bytes[i] == '-') && bytes[i - 1] != '*' && bytes[i - 1] != '/' {
                terms.push(bytes[start..i].iter().collect::<String>());
                start = i;
            }
        }
        terms.push(bytes[start..].iter().collect::<String>());
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, surd) = if body == "r2" || body == "sqrt2" {
                (BigRational::one(), true)
            } else if let Some(c) = body.strip_suffix("*r2").or_else(|| body.strip_suffix("*sqrt2")) {
                (parse_rational(c).ok_or_else(|| err("bad coefficient"))?, true)
            } else {
                (parse_rational(body).ok_or_else(|| err("bad rational"))?, false)
            };
            let coef = if neg { -coef } else { coef };
            if surd {
                b += coef;
            } else {
                a += coef;
            }
        }
        if field == FieldTag::Rationals && !b.is_zero() {
            return Err(err("√2 component in Q"));
        }
        Ok(FieldElement { a, b, field })
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => {
            if let Some((int, frac)) = s.split_once('.') {
                // decimal literal, exact
                let neg = int.starts_with('-');
                let digits = format!("{}{}", int.trim_start_matches('-'), frac);
                let n: BigInt = digits.parse().ok()?;
                let d = num_traits::pow(BigInt::from(10), frac.len());
                let r = BigRational::new(n, d);
                Some(if neg { -r } else { r })
            } else {
                Some(BigRational::from_integer(s.parse().ok()?))
            }
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b_abs = self.b.abs();
        let surd = if b_abs.is_one() { "r2".to_string() } else { format!("{b_abs}*r2") };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{surd}")
            } else {
                write!(f, "{surd}")
            }
        } else {
            let op = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {} {}", self.a, op, surd)
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self, self.field)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics on mixed fields (and on division by zero for `Div`);
            /// use the `checked_*` method to get an error instead.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -self.a, b: -self.b, field: self.field }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -(self.clone())
    }
}

/// Orders elements by their real value at the identity embedding.
pub fn cmp_real(x: &FieldElement, y: &FieldElement) -> Ordering {
    match (x - y).sign() {
        -1 => Ordering::Less,
        0 => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: FieldTag = FieldTag::RationalsSqrt2;

    fn e(a: i64, b: i64) -> FieldElement {
        FieldElement::from_ints(a, b, K)
    }

    #[test]
    fn norm_identity() {
        assert_eq!(&e(1, 1) * &e(1, -1), e(-1, 0));
        assert_eq!(&e(3, 0) + &e(0, 2), e(3, 2));
        assert_eq!(e(1, 0).checked_div(&e(1, 1)).unwrap(), e(-1, 1));
    }

    #[test]
    fn errors_are_explicit() {
        assert_eq!(e(1, 1).checked_div(&e(0, 0)), Err(FieldError::DivisionByZero));
        let q = FieldElement::from_int(1, FieldTag::Rationals);
        assert!(matches!(q.checked_add(&e(1, 0)), Err(FieldError::MixedFields(..))));
        assert!(FieldElement::new(rat(1), rat(1), FieldTag::Rationals).is_err());
    }

    #[test]
    fn conjugation() {
        assert_eq!(e(1, 1).galois_conjugate(), e(1, -1));
        let seven = FieldElement::from_int(7, FieldTag::Rationals);
        assert_eq!(seven.galois_conjugate(), seven);
    }

    #[test]
    fn signs() {
        assert_eq!(FieldElement::sqrt2().sign_at(Embedding::Sigma), -1);
        assert_eq!(e(3, 1).sign_at(Embedding::Sigma), 1);
        assert_eq!(e(0, 0).sign_at(Embedding::Identity), 0);
        assert_eq!(e(-3, 2).sign(), -1); // −3 + 2.83
        assert_eq!(e(-3, 3).sign(), 1);
        assert!(e(3, 1).is_totally_positive());
        assert!(!FieldElement::sqrt2().is_totally_positive());
        assert!(FieldElement::one(FieldTag::Rationals).is_totally_positive());
    }

    #[test]
    fn squares() {
        assert!(e(3, 2).is_square());
        assert_eq!(e(3, 2).sqrt().unwrap(), e(1, 1));
        assert!(!FieldElement::from_int(2, FieldTag::Rationals).is_square());
        assert!(e(2, 0).is_square());
        assert!(!FieldElement::from_int(5, FieldTag::Rationals).is_square());
        assert!(!e(5, 0).is_square());
        assert!(e(3, -2).is_square()); // (1 − √2)²
        assert!(FieldElement::from_ratio(9, 4, FieldTag::Rationals).is_square());
        assert!(!e(-1, 0).is_square());
    }

    #[test]
    fn five_is_not_a_square_by_search() {
        // small-denominator exhaustive search over (c + d√2)/q
        for q in 1..=12i64 {
            for c in -40..=40i64 {
                for d in -40..=40i64 {
                    let y = FieldElement::new(
                        BigRational::new(c.into(), q.into()),
                        BigRational::new(d.into(), q.into()),
                        K,
                    )
                    .unwrap();
                    assert_ne!(&y * &y, e(5, 0));
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["3/4 + 5/7*r2", "-1/2 - r2", "r2", "-2*r2", "0", "-7/3"] {
            let x = FieldElement::parse(s, K).unwrap();
            assert_eq!(FieldElement::parse(&x.to_string(), K).unwrap(), x, "{s}");
        }
        assert_eq!(FieldElement::parse("1+r2", K).unwrap(), e(1, 1));
        assert_eq!(FieldElement::parse("0.25", FieldTag::Rationals).unwrap(), FieldElement::from_ratio(1, 4, FieldTag::Rationals));
        assert!(FieldElement::parse("r2", FieldTag::Rationals).is_err());
        assert!(FieldElement::parse("1/0", FieldTag::Rationals).is_err());
        assert!(FieldElement::parse("abc", K).is_err());
        assert_eq!(e(3, -2).to_string(), "3 - 2*r2");
    }

    #[test]
    fn integrality() {
        assert!(e(3, -2).is_integral());
        assert!(!FieldElement::from_ratio(1, 2, K).is_integral());
    }
}
