//! Elements of the ring of integers `R = Z[ω]` and of the field `F = Q(√d)`.
//!
//! Coordinates are taken in the integral basis `{1, ω}` where `ω = √d` for
//! `d ≡ 2, 3 (mod 4)` and `ω = (1 + √d)/2` for `d ≡ 1 (mod 4)`. The first real
//! embedding sends `√d` to the positive root.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Tag identifying the quadratic field `Q(√d)`; cheap to copy into every element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticField {
    d: i64,
}

impl QuadraticField {
    pub(crate) fn new(d: i64) -> Self {
        QuadraticField { d }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `true` when the integral basis is `{1, (1+√d)/2}`.
    pub fn half_integral_basis(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// Field discriminant `D`.
    pub fn discriminant(&self) -> i64 {
        if self.half_integral_basis() {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn sqrt_d(&self) -> f64 {
        (self.d as f64).sqrt()
    }

    /// Coefficients `(p, q)` of the minimal polynomial `X² - pX - q` of `ω`.
    pub fn omega_min_poly(&self) -> (i64, i64) {
        if self.half_integral_basis() {
            (1, (self.d - 1) / 4)
        } else {
            (0, self.d)
        }
    }

    pub fn element(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> RingElement {
        RingElement::new(*self, a.into(), b.into())
    }

    pub fn int(&self, a: impl Into<BigInt>) -> RingElement {
        RingElement::new(*self, a.into(), BigInt::zero())
    }

    pub fn zero(&self) -> RingElement {
        self.int(0)
    }

    pub fn one(&self) -> RingElement {
        self.int(1)
    }

    pub fn omega(&self) -> RingElement {
        self.element(0, 1)
    }

    /// `√d` as an element of `R`.
    pub fn sqrt_element(&self) -> RingElement {
        if self.half_integral_basis() {
            self.element(-1, 2)
        } else {
            self.element(0, 1)
        }
    }
}

/// An exact element `a + b·ω` of the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    a: BigInt,
    b: BigInt,
    field: QuadraticField,
}

impl RingElement {
    pub fn new(field: QuadraticField, a: BigInt, b: BigInt) -> Self {
        RingElement { a, b, field }
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.b)
    }

    /// Coordinates as machine integers, when they fit.
    pub fn small_coords(&self) -> Option<(i64, i64)> {
        Some((self.a.to_i64()?, self.b.to_i64()?))
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

    /// `2x = A + B√d` with integral `A, B`.
    fn doubled(&self) -> (BigInt, BigInt) {
        if self.field.half_integral_basis() {
            (&self.a * 2 + &self.b, self.b.clone())
        } else {
            (&self.a * 2, &self.b * 2)
        }
    }

    pub fn norm(&self) -> BigInt {
        let (p, q) = self.field.omega_min_poly();
        // N(a + bω) = a² + p·ab - q·b²
        &self.a * &self.a + &self.a * &self.b * p - &self.b * &self.b * q
    }

    pub fn trace(&self) -> BigInt {
        let (p, _) = self.field.omega_min_poly();
        &self.a * 2 + &self.b * p
    }

    pub fn conj(&self) -> RingElement {
        if self.field.half_integral_basis() {
            // ω' = 1 - ω
            RingElement::new(self.field, &self.a + &self.b, -&self.b)
        } else {
            RingElement::new(self.field, self.a.clone(), -&self.b)
        }
    }

    /// Exact signs of the two real embeddings.
    pub fn embedding_signs(&self) -> [Ordering; 2] {
        let (big_a, big_b) = self.doubled();
        let d = BigInt::from(self.field.d);
        let sign_of = |b_coef: &BigInt| -> Ordering {
            // sign of A + b_coef·√d
            let sa = big_a.sign();
            let sb = b_coef.sign();
            use num_bigint::Sign::*;
            match (sa, sb) {
                (NoSign, NoSign) => Ordering::Equal,
                (NoSign, s) | (s, NoSign) => {
                    if s == Plus {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                }
                (Plus, Plus) => Ordering::Greater,
                (Minus, Minus) => Ordering::Less,
                _ => {
                    let lhs = &big_a * &big_a;
                    let rhs = b_coef * b_coef * &d;
                    let a_dominates = lhs > rhs;
                    match (a_dominates, sa == Plus) {
                        (true, true) | (false, false) => Ordering::Greater,
                        _ => Ordering::Less,
                    }
                }
            }
        };
        [sign_of(&big_b), sign_of(&(-&big_b))]
    }

    /// Total positivity decided by integer comparisons only.
    pub fn is_totally_positive(&self) -> bool {
        self.embedding_signs() == [Ordering::Greater, Ordering::Greater]
    }

    /// The two real embeddings `(x⁽¹⁾, x⁽²⁾)` in double precision.
    ///
    /// The embedding without cancellation is computed directly and the other
    /// one as `N(x)/x⁽ⁱ⁾`, so both carry full relative precision.
    pub fn embeddings(&self) -> [f64; 2] {
        let (big_a, big_b) = self.doubled();
        let fa = big_a.to_f64().unwrap_or(f64::NAN);
        let fb = big_b.to_f64().unwrap_or(f64::NAN) * self.field.sqrt_d();
        if big_b.is_zero() || big_a.is_zero() {
            return [(fa + fb) / 2.0, (fa - fb) / 2.0];
        }
        let n = self.norm().to_f64().unwrap_or(f64::NAN);
        if big_a.sign() == big_b.sign() {
            let e1 = (fa + fb) / 2.0;
            [e1, n / e1]
        } else {
            let e2 = (fa - fb) / 2.0;
            [n / e2, e2]
        }
    }

    /// `self / other` when the quotient lies in `R`.
    pub fn exact_div(&self, other: &RingElement) -> Option<RingElement> {
        assert_eq!(self.field, other.field, "mixed fields");
        if other.is_zero() {
            return None;
        }
        let n = other.norm();
        let num = self * &other.conj();
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(RingElement::new(self.field, qa, qb))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &RingElement) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }

    pub fn is_unit(&self) -> bool {
        let n = self.norm();
        n.is_one() || (-n).is_one()
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut result = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Integral power of a unit; negative exponents use the inverse.
    pub fn unit_pow(&self, e: i64) -> RingElement {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            let inv = self.field.one().exact_div(self).expect("unit_pow on a non-unit");
            inv.pow((-e) as u32)
        }
    }

    pub fn scale(&self, k: &BigInt) -> RingElement {
        RingElement::new(self.field, &self.a * k, &self.b * k)
    }

    /// Content: gcd of the coordinates.
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b)
    }

    pub fn to_field_element(&self) -> FieldElement {
        FieldElement::new(
            self.field,
            BigRational::from_integer(self.a.clone()),
            BigRational::from_integer(self.b.clone()),
        )
    }
}

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic order used throughout: trace, then lexicographic coordinates.
impl Ord for RingElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.trace()
            .cmp(&other.trace())
            .then_with(|| self.a.cmp(&other.a))
            .then_with(|| self.b.cmp(&other.b))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = if self.field.half_integral_basis() {
            "w".to_string()
        } else {
            format!("√{}", self.field.d)
        };
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b_part = if self.b.is_one() {
            sym.clone()
        } else if (-&self.b).is_one() {
            format!("-{sym}")
        } else {
            format!("{}{}", self.b, sym)
        };
        if self.a.is_zero() {
            write!(f, "{b_part}")
        } else if self.b.is_positive() {
            write!(f, "{}+{}", self.a, b_part)
        } else {
            write!(f, "{}{}", self.a, b_part)
        }
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &'a RingElement) -> RingElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        RingElement::new(self.field, &self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &'a RingElement) -> RingElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        RingElement::new(self.field, &self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &'a RingElement) -> RingElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        let (p, q) = self.field.omega_min_poly();
        let bb = &self.b * &rhs.b;
        // ω² = pω + q
        let a = &self.a * &rhs.a + &bb * q;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + &bb * p;
        RingElement::new(self.field, a, b)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::new(self.field, -&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($ty:ty, $tr:ident, $m:ident) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(RingElement, Add, add);
forward_owned!(RingElement, Sub, sub);
forward_owned!(RingElement, Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

/// An element of `F` with rational coordinates in the basis `{1, ω}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    a: BigRational,
    b: BigRational,
    field: QuadraticField,
}

impl FieldElement {
    pub fn new(field: QuadraticField, a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b, field }
    }

    pub fn zero(field: QuadraticField) -> Self {
        FieldElement::new(field, BigRational::zero(), BigRational::zero())
    }

    pub fn one(field: QuadraticField) -> Self {
        FieldElement::new(field, BigRational::one(), BigRational::zero())
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> FieldElement {
        if self.field.half_integral_basis() {
            FieldElement::new(self.field, &self.a + &self.b, -&self.b)
        } else {
            FieldElement::new(self.field, self.a.clone(), -&self.b)
        }
    }

    pub fn norm(&self) -> BigRational {
        let (p, q) = self.field.omega_min_poly();
        let p = BigRational::from_integer(p.into());
        let q = BigRational::from_integer(q.into());
        &self.a * &self.a + &self.a * &self.b * p - &self.b * &self.b * q
    }

    pub fn trace(&self) -> BigRational {
        let (p, _) = self.field.omega_min_poly();
        &self.a * BigRational::from_integer(2.into()) + &self.b * BigRational::from_integer(p.into())
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(FieldElement::new(self.field, &c.a / &n, &c.b / &n))
    }

    /// The element as a ring element, if its coordinates are integral.
    pub fn to_ring(&self) -> Option<RingElement> {
        if self.a.is_integer() && self.b.is_integer() {
            Some(RingElement::new(self.field, self.a.to_integer(), self.b.to_integer()))
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Membership in the fractional ideal `g·R`.
    pub fn in_ideal(&self, generator: &FieldElement) -> bool {
        match generator.inv() {
            Some(inv) => (self * &inv).is_integral(),
            None => self.is_zero(),
        }
    }

    pub fn embeddings(&self) -> [f64; 2] {
        // Clear denominators and reuse the cancellation-free integral path.
        let den = self.a.denom().lcm(self.b.denom());
        let num = RingElement::new(
            self.field,
            (&self.a * BigRational::from_integer(den.clone())).to_integer(),
            (&self.b * BigRational::from_integer(den.clone())).to_integer(),
        );
        let e = num.embeddings();
        let den = den.to_f64().unwrap_or(f64::NAN);
        [e[0] / den, e[1] / den]
    }

    pub fn coords(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }
}

impl From<&RingElement> for FieldElement {
    fn from(x: &RingElement) -> Self {
        x.to_field_element()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = if self.field.half_integral_basis() {
            "w".to_string()
        } else {
            format!("√{}", self.field.d)
        };
        write!(f, "({})+({}){}", self.a, self.b, sym)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElement::new(self.field, &self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElement::new(self.field, &self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        let (p, q) = self.field.omega_min_poly();
        let p = BigRational::from_integer(p.into());
        let q = BigRational::from_integer(q.into());
        let bb = &self.b * &rhs.b;
        let a = &self.a * &rhs.a + &bb * &q;
        let b = &self.a * &rhs.b + &self.b * &rhs.a + &bb * &p;
        FieldElement::new(self.field, a, b)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(self.field, -&self.a, -&self.b)
    }
}

forward_owned!(FieldElement, Add, add);
forward_owned!(FieldElement, Sub, sub);
forward_owned!(FieldElement, Mul, mul);
