use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::{FieldContext, RingElement};
use crate::error::{Error, Result};

/// Decomposition type of a rational prime in `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// `x = unit_part · ∏ primeᵉ` with totally positive canonical primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub unit_part: RingElement,
    pub factors: Vec<(RingElement, u32)>,
}

impl PrimeFactorization {
    /// Product of the listed prime powers and the unit part.
    pub fn expand(&self) -> RingElement {
        self.factors.iter().fold(self.unit_part.clone(), |acc, (p, e)| &acc * &p.pow(*e))
    }

    pub fn exponent_of(&self, p: &RingElement) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map(|(_, e)| *e).unwrap_or(0)
    }
}

/// Prime factorisation of a positive integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn rational_primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| factor_u64(p) == vec![(p, 1)]).collect()
}

fn legendre(a: i64, p: i64) -> i64 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut result = 1i64;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

fn is_square_i64(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

impl FieldContext {
    pub fn split_type(&self, p: u64) -> SplitType {
        let disc = self.discriminant();
        let p = p as i64;
        if p == 2 {
            return match disc.rem_euclid(8) {
                1 => SplitType::Split,
                5 => SplitType::Inert,
                _ => SplitType::Ramified,
            };
        }
        match legendre(disc, p) {
            0 => SplitType::Ramified,
            1 => SplitType::Split,
            _ => SplitType::Inert,
        }
    }

    /// An element of norm `±p`, when one exists.
    fn element_of_norm(&self, p: i64) -> RingElement {
        let d = self.d();
        let half = self.field().half_integral_basis();
        let mut b: i64 = 1;
        loop {
            for s in [1i64, -1] {
                if half {
                    // (2a + b)² = d·b² ± 4p
                    if let Some(r) = is_square_i64(d * b * b + s * 4 * p) {
                        if (r - b) % 2 == 0 {
                            return self.element((r - b) / 2, b);
                        }
                    }
                } else if let Some(r) = is_square_i64(d * b * b + s * p) {
                    return self.element(r, b);
                }
            }
            b += 1;
        }
    }

    /// Canonical totally positive generators of the primes above `p`.
    pub fn primes_above(&self, p: u64) -> Vec<RingElement> {
        let gens = match self.split_type(p) {
            SplitType::Inert => vec![self.int(p as i64)],
            SplitType::Ramified => vec![self.element_of_norm(p as i64)],
            SplitType::Split => {
                let x = self.element_of_norm(p as i64);
                let y = x.conj();
                vec![x, y]
            }
        };
        let mut out: Vec<RingElement> = gens
            .iter()
            .map(|g| self.ideal_generator(g).expect("prime generator is nonzero"))
            .collect();
        out.sort();
        out
    }

    /// The rational prime below the prime element `p`.
    pub fn rational_prime_below(&self, p: &RingElement) -> u64 {
        let n = p.norm().abs().to_u64().expect("norm fits in u64");
        factor_u64(n)[0].0
    }

    pub fn factor(&self, x: &RingElement) -> Result<PrimeFactorization> {
        if x.is_zero() {
            return Err(Error::Zero);
        }
        let n = x
            .norm()
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Degenerate(format!("norm of {x} exceeds 64 bits")))?;
        let mut rest = x.clone();
        let mut factors = Vec::new();
        for (p, _) in factor_u64(n) {
            for pi in self.primes_above(p) {
                let mut e = 0u32;
                while let Some(q) = rest.exact_div(&pi) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    factors.push((pi, e));
                }
            }
        }
        debug_assert!(rest.is_unit());
        factors.sort_by(|(p, _), (q, _)| p.norm().abs().cmp(&q.norm().abs()).then_with(|| p.cmp(q)));
        Ok(PrimeFactorization { unit_part: rest, factors })
    }

    /// Whether `x` is a prime element.
    pub fn is_prime(&self, x: &RingElement) -> bool {
        match self.factor(x) {
            Ok(f) => f.factors.len() == 1 && f.factors[0].1 == 1,
            Err(_) => false,
        }
    }

    /// Canonical representative of the product of primes of odd exponent.
    pub fn squarefree_part(&self, x: &RingElement) -> Result<RingElement> {
        if !x.is_totally_positive() {
            return Err(Error::Positivity(x.to_string()));
        }
        let f = self.factor(x)?;
        let s = f
            .factors
            .iter()
            .filter(|(_, e)| e % 2 == 1)
            .fold(self.int(1), |acc, (p, _)| &acc * p);
        self.canonical_rep_mod_squared_units(&s)
    }

    pub fn is_squarefree_element(&self, x: &RingElement) -> Result<bool> {
        Ok(self.factor(x)?.factors.iter().all(|(_, e)| *e == 1))
    }

    /// One canonical generator per divisor ideal of `(x)`, in element order.
    pub fn divisors_up_to_units(&self, x: &RingElement) -> Result<Vec<RingElement>> {
        let f = self.factor(x)?;
        let mut divs = vec![self.int(1)];
        for (p, e) in &f.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut cur = d.clone();
                for k in 0..=*e {
                    if k > 0 {
                        cur = &cur * p;
                    }
                    next.push(cur.clone());
                }
            }
            divs = next;
        }
        let mut out: Vec<RingElement> = divs
            .iter()
            .map(|d| self.canonical_rep_mod_squared_units(d))
            .collect::<Result<_>>()?;
        out.sort();
        Ok(out)
    }

    /// Canonical generator of `(x) ∩ (y)`.
    pub fn ideal_lcm(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.combine_exponents(x, y, u32::max)
    }

    /// Canonical generator of `(x) + (y)`.
    pub fn ideal_gcd(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.combine_exponents(x, y, u32::min)
    }

    fn combine_exponents(&self, x: &RingElement, y: &RingElement, f: fn(u32, u32) -> u32) -> Result<RingElement> {
        let fx = self.factor(x)?;
        let fy = self.factor(y)?;
        let mut primes: Vec<RingElement> = fx.factors.iter().chain(&fy.factors).map(|(p, _)| p.clone()).collect();
        primes.sort();
        primes.dedup();
        let g = primes.iter().fold(self.int(1), |acc, p| {
            let e = f(fx.exponent_of(p), fy.exponent_of(p));
            &acc * &p.pow(e)
        });
        self.canonical_rep_mod_squared_units(&g)
    }

    /// Exponent of the prime `p` in `x`.
    pub fn valuation(&self, x: &RingElement, p: &RingElement) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::Zero);
        }
        if p.is_unit() || p.is_zero() {
            return Err(Error::NotPrime(p.to_string()));
        }
        let mut e = 0;
        let mut rest = x.clone();
        while let Some(q) = rest.exact_div(p) {
            rest = q;
            e += 1;
        }
        Ok(e)
    }

    /// Whether every prime dividing `x` lies over an inert or ramified prime.
    pub fn is_nonsplit(&self, x: &RingElement) -> Result<bool> {
        let f = self.factor(x)?;
        Ok(f.factors
            .iter()
            .all(|(p, _)| self.split_type(self.rational_prime_below(p)) != SplitType::Split))
    }

    /// Canonical prime elements of norm at most `bound`, ordered by norm.
    pub fn primes_up_to_norm(&self, bound: u64) -> Vec<RingElement> {
        let mut out = Vec::new();
        for p in rational_primes_up_to(bound) {
            for pi in self.primes_above(p) {
                if pi.norm().abs() <= BigInt::from(bound) {
                    out.push(pi);
                }
            }
        }
        out.sort_by(|p, q| p.norm().abs().cmp(&q.norm().abs()).then_with(|| p.cmp(q)));
        out
    }

    /// Canonical generators of all nonzero ideals of norm at most `bound`,
    /// ordered by norm.
    pub fn ideals_up_to_norm(&self, bound: u64) -> Vec<RingElement> {
        let primes = self.primes_up_to_norm(bound);
        let mut ideals: Vec<(u64, RingElement)> = vec![(1, self.int(1))];
        for p in &primes {
            let np = p.norm().abs().to_u64().unwrap();
            let mut extra = Vec::new();
            for (n, g) in &ideals {
                let mut n2 = *n;
                let mut g2 = g.clone();
                while n2 * np <= bound {
                    n2 *= np;
                    g2 = &g2 * p;
                    extra.push((n2, g2.clone()));
                }
            }
            ideals.extend(extra);
        }
        let mut out: Vec<(u64, RingElement)> = ideals
            .into_iter()
            .map(|(n, g)| (n, self.canonical_rep_mod_squared_units(&g).unwrap()))
            .collect();
        out.sort();
        out.into_iter().map(|(_, g)| g).collect()
    }
}
