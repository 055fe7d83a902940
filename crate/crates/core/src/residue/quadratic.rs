use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};

use super::character::DirichletCharacter;
use super::ring::ResidueRing;
use crate::cyclotomic::RootOfUnity;
use crate::error::{Error, Result};
use crate::field::{FieldContext, RingElement};

fn prime_norm(ctx: &FieldContext, p: &RingElement) -> Result<i64> {
    if !ctx.is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(p.norm().abs().to_i64().expect("prime norm fits in i64"))
}

/// Euler criterion `ξ^{(N(p)-1)/2} mod p` as `-1`, `0` or `1`.
pub fn quadratic_symbol(ctx: &FieldContext, xi: &RingElement, p: &RingElement) -> Result<i8> {
    let n = prime_norm(ctx, p)?;
    if n % 2 == 0 {
        return Err(Error::EvenPrime(p.to_string()));
    }
    let ring = ResidueRing::new(p, std::slice::from_ref(p));
    let x = ring.reduce(xi);
    if ring.is_zero(x) {
        return Ok(0);
    }
    let e = ring.pow(x, ((n - 1) / 2) as u64);
    if e == ring.one() {
        Ok(1)
    } else if e == ring.neg(ring.one()) {
        Ok(-1)
    } else {
        unreachable!("Euler criterion in a finite field")
    }
}

/// Whether `t` is congruent to a square modulo `m`.
pub fn is_square_mod(t: &RingElement, m: &RingElement) -> bool {
    let ring = ResidueRing::new(m, &[]);
    let target = ring.reduce(t);
    let found = ring.elements().any(|y| ring.mul(y, y) == target);
    found
}

/// Behaviour of the prime `p` in `F(√t)/F`: `1` split, `-1` inert, `0` ramified.
///
/// Above 2 the test strips an even valuation and compares squares modulo
/// `p^{2e}` and `p^{2e+1}`, `e = v_p(2)`.
pub fn splitting_symbol(ctx: &FieldContext, t: &RingElement, p: &RingElement) -> Result<i8> {
    let n = prime_norm(ctx, p)?;
    if n % 2 == 1 {
        return quadratic_symbol(ctx, t, p);
    }
    let v = ctx.valuation(t, p)?;
    if v % 2 == 1 {
        return Ok(0);
    }
    let unit_part = t.exact_div(&p.pow(v)).expect("valuation divides");
    let e = ctx.valuation(&ctx.int(2), p)?;
    if is_square_mod(&unit_part, &p.pow(2 * e + 1)) {
        Ok(1)
    } else if is_square_mod(&unit_part, &p.pow(2 * e)) {
        Ok(-1)
    } else {
        Ok(0)
    }
}

/// The quadratic character attached to `F(√t)/F` for squarefree totally
/// positive `t`, returned at its conductor.
pub fn epsilon_t(ctx: &Arc<FieldContext>, t: &RingElement) -> Result<DirichletCharacter> {
    if !t.is_totally_positive() {
        return Err(Error::Positivity(t.to_string()));
    }
    if !ctx.is_squarefree_element(t)? {
        return Err(Error::NotSquarefree(t.to_string()));
    }
    let t = ctx.canonical_rep_mod_squared_units(t)?;
    let m = t.scale(&4.into());
    let group = ctx.unit_group(&m)?;
    let mut values = Vec::with_capacity(group.orders().len());
    for g in group.generators() {
        let mut s = 1i8;
        for (pi, e) in ctx.factor(&g)?.factors {
            if e % 2 == 1 {
                s *= quadratic_symbol(ctx, &t, &pi)?;
            }
        }
        values.push(if s == 1 { RootOfUnity::one() } else { RootOfUnity::minus_one() });
    }
    DirichletCharacter::from_values(ctx.clone(), group, &values)?.primitive()
}

/// `ε_t` for any totally positive `t`, through its squarefree part.
pub fn epsilon_of(ctx: &Arc<FieldContext>, t: &RingElement) -> Result<DirichletCharacter> {
    let s = ctx.squarefree_part(t)?;
    epsilon_t(ctx, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::residue::character::characters_trivial_on_units;

    #[test]
    fn symbols() {
        let k = make_field(2).unwrap();
        let p = k.element(3, 1);
        assert_eq!(quadratic_symbol(&k, &k.element(1, 1), &p).unwrap(), -1);
        assert_eq!(quadratic_symbol(&k, &p, &p).unwrap(), 0);
        let x = k.element(5, 3);
        assert_eq!(quadratic_symbol(&k, &(&x * &x), &p).unwrap(), 1);
        assert!(matches!(quadratic_symbol(&k, &x, &k.element(2, 1)), Err(Error::EvenPrime(_))));
        assert!(matches!(quadratic_symbol(&k, &x, &k.int(21)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn euler_matches_brute_force() {
        for d in [2, 5, 13] {
            let k = make_field(d).unwrap();
            for p in k.primes_up_to_norm(200) {
                if p.norm().abs() % 2 == num_bigint::BigInt::from(0) {
                    continue;
                }
                let ring = ResidueRing::new(&p, std::slice::from_ref(&p));
                for x in ring.elements().take(60) {
                    let xi = ring.lift(x);
                    let expect = if ring.is_zero(x) {
                        0
                    } else if is_square_mod(&xi, &p) {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(quadratic_symbol(&k, &xi, &p).unwrap(), expect, "d={d} p={p} x={xi}");
                }
            }
        }
    }

    #[test]
    fn epsilon_of_two_plus_root_two_is_phi() {
        let k = make_field(2).unwrap();
        let u = k.element(2, 1);
        let eps = epsilon_t(&k, &u).unwrap();
        let q5 = k.prime_power_above_two(5).unwrap();
        assert_eq!(eps.conductor().unwrap(), q5);
        let phi = characters_trivial_on_units(&k, &q5, Some(2)).unwrap().pop().unwrap();
        assert!(eps.equals(&phi).unwrap());
        assert_eq!(eps.value(&k.element(3, 1)), Some(RootOfUnity::minus_one()));
        assert!(eps.mul(&eps).unwrap().is_trivial());
        assert!(epsilon_t(&k, &k.int(1)).unwrap().is_trivial());
        assert!(matches!(epsilon_t(&k, &k.int(4)), Err(Error::NotSquarefree(_))));
        assert!(matches!(epsilon_t(&k, &k.element(0, 1)), Err(Error::Positivity(_))));
    }

    #[test]
    fn even_splitting_agrees_with_conductor() {
        // ε_t is unramified at p | 2 exactly when p does not divide its
        // conductor, and then the local symbol is the character value.
        for d in [2, 5, 13] {
            let k = make_field(d).unwrap();
            let two = k.primes_above(2);
            for t in k.enumerate_box(12.0, 12.0, false) {
                if !k.is_squarefree_element(&t).unwrap() {
                    continue;
                }
                let t = k.canonical_rep_mod_squared_units(&t).unwrap();
                let eps = epsilon_t(&k, &t).unwrap();
                let r = eps.conductor().unwrap();
                for p in &two {
                    let s = splitting_symbol(&k, &t, p).unwrap();
                    if p.divides(&r) {
                        assert_eq!(s, 0, "d={d} t={t}");
                    } else {
                        let v = eps.value(p).unwrap().sign().unwrap() as i8;
                        assert_eq!(s, v, "d={d} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn epsilon_values_match_splitting() {
        let k = make_field(13).unwrap();
        let t = k.element(4, 1);
        let t = k.squarefree_part(&k.totally_positive_associate(&t).unwrap()).unwrap();
        let eps = epsilon_t(&k, &t).unwrap();
        for p in k.primes_up_to_norm(120) {
            if let Some(v) = eps.value(&p) {
                assert_eq!(v.sign().unwrap() as i8, splitting_symbol(&k, &t, &p).unwrap());
            }
        }
    }
}
