//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`, stored in the power
//! basis `1, ζ, …, ζ^{φ(N)-1}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// `ζ_n^k` with `0 ≤ k < n` and `gcd(k, n) = 1` unless `k = 0`, `n = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    k: u64,
    n: u64,
}

impl RootOfUnity {
    pub fn new(k: u64, n: u64) -> Self {
        assert!(n > 0);
        let k = k % n;
        if k == 0 {
            return RootOfUnity { k: 0, n: 1 };
        }
        let g = k.gcd(&n);
        RootOfUnity { k: k / g, n: n / g }
    }

    pub fn one() -> Self {
        RootOfUnity { k: 0, n: 1 }
    }

    pub fn minus_one() -> Self {
        RootOfUnity { k: 1, n: 2 }
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let l = self.n.lcm(&other.n);
        RootOfUnity::new(self.k * (l / self.n) + other.k * (l / other.n), l)
    }

    pub fn pow(&self, e: u64) -> RootOfUnity {
        RootOfUnity::new((self.k as u128 * e as u128 % self.n as u128) as u64, self.n)
    }

    pub fn conj(&self) -> RootOfUnity {
        RootOfUnity::new(self.n - self.k, self.n)
    }

    /// `±1` when the root is real.
    pub fn sign(&self) -> Option<i64> {
        match self.n {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.k as f64 / self.n as f64)
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.k, self.n)
    }
}

type Poly = Vec<BigInt>;

fn cyclotomic_poly(n: u64) -> Arc<Poly> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Poly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Φ_n = (xⁿ - 1) / ∏_{d | n, d < n} Φ_d
    let mut num: Poly = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_poly(d));
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn div_monic(num: &Poly, den: &Poly) -> Poly {
    let dn = den.len() - 1;
    let mut rem = num.clone();
    let mut quo = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dn].clone();
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
        }
        quo[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quo
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// An element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: u64,
    coeffs: Vec<BigRational>,
}

fn reduce_mod_phi(mut c: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    for i in (deg..c.len()).rev() {
        let lead = std::mem::replace(&mut c[i], BigRational::zero());
        if lead.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            c[i - deg + j] -= &lead * BigRational::from_integer(pj.clone());
        }
    }
    c.resize(deg, BigRational::zero());
    c
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            n: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic { n: 1, coeffs: vec![q] }
    }

    pub fn from_int(k: i64) -> Self {
        Cyclotomic::from_rational(BigRational::from_integer(k.into()))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Cyclotomic::from_rational(BigRational::new(p.into(), q.into()))
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(k: u64, n: u64) -> Self {
        Self::root_of_unity_reduced(RootOfUnity::new(k, n))
    }

    fn root_of_unity_reduced(r: RootOfUnity) -> Self {
        if r.n == 1 {
            return Cyclotomic::one();
        }
        if r.n == 2 {
            return Cyclotomic::from_int(-1);
        }
        let mut c = vec![BigRational::zero(); r.k as usize + 1];
        c[r.k as usize] = BigRational::one();
        Cyclotomic {
            n: r.n,
            coeffs: reduce_mod_phi(c, r.n),
        }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The same number in `Q(ζ_m)`, `n | m`.
    pub fn lift(&self, m: u64) -> Cyclotomic {
        assert_eq!(m % self.n, 0, "lift to a non-multiple order");
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut c = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, cj) in self.coeffs.iter().enumerate() {
            c[j * step] = cj.clone();
        }
        Cyclotomic {
            n: m,
            coeffs: reduce_mod_phi(c, m),
        }
    }

    fn common(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = self.n.lcm(&other.n);
        (self.lift(m), other.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value when the number lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            return Some(self.coeffs[0].clone());
        }
        // average over the Galois group, then compare
        let mut sum = Cyclotomic {
            n: self.n,
            coeffs: vec![BigRational::zero(); self.coeffs.len()],
        };
        let mut count = 0i64;
        for a in 1..self.n {
            if a.gcd(&self.n) == 1 {
                sum = &sum + &self.galois(a);
                count += 1;
            }
        }
        let r = sum.coeffs[0].clone() / BigRational::from_integer(count.into());
        (Cyclotomic::from_rational(r.clone()) == *self).then_some(r)
    }

    /// Image under `ζ ↦ ζ^a`.
    pub fn galois(&self, a: u64) -> Cyclotomic {
        let n = self.n as usize;
        let mut c = vec![BigRational::zero(); n.max(1)];
        for (j, cj) in self.coeffs.iter().enumerate() {
            c[(j * a as usize) % n.max(1)] += cj;
        }
        Cyclotomic {
            n: self.n,
            coeffs: reduce_mod_phi(c, self.n),
        }
    }

    pub fn conj(&self) -> Cyclotomic {
        let n = self.n as usize;
        let mut c = vec![BigRational::zero(); n.max(1)];
        for (j, cj) in self.coeffs.iter().enumerate() {
            c[(n - j) % n] += cj;
        }
        Cyclotomic {
            n: self.n,
            coeffs: reduce_mod_phi(c, self.n),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Cyclotomic> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        if self.n == 1 {
            return Ok(Cyclotomic::from_rational(self.coeffs[0].recip()));
        }
        let phi: Vec<BigRational> = cyclotomic_poly(self.n)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let s = poly_inverse_mod(&self.coeffs, &phi);
        Ok(Cyclotomic {
            n: self.n,
            coeffs: reduce_mod_phi(s, self.n),
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / self.n as f64);
            z += w * c.to_f64().unwrap_or(f64::NAN);
        }
        z
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn to_json(&self) -> Value {
        json!([self.n, self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()])
    }

    pub fn from_json(v: &Value) -> Result<Cyclotomic> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("cyclotomic must be [order, coeffs]".into()))?;
        if arr.len() != 2 {
            return Err(Error::Parse("cyclotomic must be [order, coeffs]".into()));
        }
        let n = arr[0].as_u64().ok_or_else(|| Error::Parse("bad cyclotomic order".into()))?;
        let coeffs = arr[1]
            .as_array()
            .ok_or_else(|| Error::Parse("bad cyclotomic coefficients".into()))?
            .iter()
            .map(|c| {
                c.as_str()
                    .and_then(|s| s.parse::<BigRational>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad rational {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if n == 0 || coeffs.len() != totient(n).max(1) as usize {
            return Err(Error::Parse(format!("cyclotomic of order {n} needs {} coefficients", totient(n))));
        }
        Ok(Cyclotomic { n, coeffs })
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

/// `s` with `s·a ≡ 1 (mod m)` for coprime `a`, `m`.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant
    let c = r0[0].clone();
    s0.iter().map(|x| x / &c).collect()
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        Cyclotomic {
            n: a.n,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        Cyclotomic {
            n: a.n,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(rhs);
        Cyclotomic {
            n: a.n,
            coeffs: reduce_mod_phi(poly_mul(&a.coeffs, &b.coeffs), a.n),
        }
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·z{}", self.n)?,
                _ => write!(f, "({c})·z{}^{j}", self.n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Cyclotomic::zero()
    }
}

/// Sign of a rational as `-1`, `0` or `1`.
pub fn rational_sign(q: &BigRational) -> i64 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
