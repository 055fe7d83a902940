use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::FourierExpansion;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::{BoxBound, RingElement};
use crate::residue::{epsilon_of, quadratic_symbol, DirichletCharacter};

fn require_totally_positive(x: &RingElement) -> Result<()> {
    if x.is_totally_positive() {
        Ok(())
    } else {
        Err(Error::Positivity(x.to_string()))
    }
}

fn mul_level(f: &FourierExpansion, m: &RingElement) -> Result<Option<RingElement>> {
    match f.level() {
        Some(c) => Ok(Some(f.ctx().ideal_generator(&(c * m))?)),
        None => Ok(None),
    }
}

fn mul_character(f: &FourierExpansion, m: &RingElement) -> Result<Option<DirichletCharacter>> {
    match f.character() {
        Some(psi) => Ok(Some(psi.mul(&epsilon_of(f.ctx(), m)?)?)),
        None => Ok(None),
    }
}

/// Largest box on which `T_{p²}` is determined by `f`.
fn hecke_box(f: &FourierExpansion, p: &RingElement, p_divides_level: bool) -> BoxBound {
    let p2 = p * p;
    let shrunk = f.bound().shrink_by(&p2);
    if p_divides_level {
        shrunk
    } else {
        shrunk.min(&f.bound().scale_by(&p2))
    }
}

/// Smallest input box on which `T_{p²}` with `p ∤ c` is determined on `out`:
/// it must contain both `out·p²` and `out/p²`.
pub fn hecke_input_box(out: BoxBound, p: &RingElement) -> BoxBound {
    let p2 = p * p;
    let (a, b) = (out.scale_by(&p2), out.shrink_by(&p2));
    BoxBound::new(a.x1.max(b.x1), a.x2.max(b.x2))
}

/// `f | T_{p²}` for the character `ψ` modulo `c` on its largest valid box.
pub fn op_t_p2(f: &FourierExpansion, p: &RingElement, psi: &DirichletCharacter, c: &RingElement) -> Result<FourierExpansion> {
    require_totally_positive(p)?;
    let out = hecke_box(f, p, p.divides(c));
    op_t_p2_to(f, p, psi, c, out)
}

/// `f | T_{p²}` on the requested output box, which must be determined by `f`.
///
/// `b(ξ) = a(ξp²) + [p ∤ c]·N(p)⁻¹·(ψ̄(p)·(ξ/p)·a(ξ) + ψ̄(p)²·a(ξ/p²))`.
pub fn op_t_p2_to(
    f: &FourierExpansion,
    p: &RingElement,
    psi: &DirichletCharacter,
    c: &RingElement,
    out: BoxBound,
) -> Result<FourierExpansion> {
    let ctx = f.ctx();
    require_totally_positive(p)?;
    if !ctx.is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let p_divides_level = p.divides(c);
    if !hecke_box(f, p, p_divides_level).covers(&out) {
        return Err(Error::BoxTooSmall(format!(
            "T_(p²) for p = {p} on ({}, {}) needs a larger input box than ({}, {})",
            out.x1,
            out.x2,
            f.bound().x1,
            f.bound().x2
        )));
    }
    let p2 = p * p;
    let mut g = FourierExpansion::zero(ctx, out)
        .with_level(f.level().cloned())
        .with_character(f.character().cloned());
    let mut extra: Option<(Cyclotomic, Cyclotomic)> = None;
    if !p_divides_level {
        let n = p.norm().abs();
        if n.to_i64().is_some_and(|n| n % 2 == 0) {
            return Err(Error::Symbol(format!("T_(p²) at the even prime {p} needs p | c")));
        }
        let v = psi
            .primitive()?
            .value(p)
            .ok_or_else(|| Error::Character(format!("{psi} vanishes at {p}, which does not divide {c}")))?
            .conj()
            .to_cyclotomic();
        let inv_n = Cyclotomic::from_rational(BigRational::new(BigInt::from(1), n));
        extra = Some((&v * &inv_n, &(&v * &v) * &inv_n));
    }
    for xi in ctx.enumerate_bound(&out, true) {
        let mut b = f.coeff(&(&xi * &p2))?;
        if let Some((c1, c2)) = &extra {
            let s = if xi.is_zero() { 0 } else { quadratic_symbol(ctx, &xi, p)? };
            if s != 0 {
                let a = f.coeff(&xi)?;
                if !a.is_zero() {
                    let term = c1 * &a;
                    b = if s == 1 { &b + &term } else { &b - &term };
                }
            }
            if let Some(q) = xi.exact_div(&p2) {
                let a = f.coeff(&q)?;
                if !a.is_zero() {
                    b = &b + &(c2 * &a);
                }
            }
        }
        g.set(xi, b);
    }
    Ok(g)
}

/// `f | V(m)`, `f(mz)`: `b(ξ) = a(ξ/m)`.
pub fn op_v(f: &FourierExpansion, m: &RingElement) -> Result<FourierExpansion> {
    require_totally_positive(m)?;
    let mut g = FourierExpansion::zero(f.ctx(), f.bound().scale_by(m))
        .with_level(mul_level(f, m)?)
        .with_character(mul_character(f, m)?);
    for (xi, a) in f.support() {
        g.set(xi * m, a.clone());
    }
    Ok(g)
}

/// `f | U(p)`: `b(ξ) = a(pξ)`.
pub fn op_u(f: &FourierExpansion, p: &RingElement) -> Result<FourierExpansion> {
    require_totally_positive(p)?;
    let mut g = FourierExpansion::zero(f.ctx(), f.bound().shrink_by(p))
        .with_level(f.level().cloned())
        .with_character(mul_character(f, p)?);
    for (xi, a) in f.support() {
        if let Some(q) = xi.exact_div(p) {
            g.set(q, a.clone());
        }
    }
    Ok(g)
}

/// `f | K(p)`: keeps the coefficients at `ξ` prime to `p`.
pub fn op_k(f: &FourierExpansion, p: &RingElement) -> Result<FourierExpansion> {
    require_totally_positive(p)?;
    let mut g = FourierExpansion::zero(f.ctx(), f.bound())
        .with_level(mul_level(f, &(p * p))?)
        .with_character(f.character().cloned());
    for (xi, a) in f.support() {
        if !p.divides(xi) {
            g.set(xi.clone(), a.clone());
        }
    }
    Ok(g)
}

/// `f | H`: coefficientwise complex conjugation.
pub fn op_h(f: &FourierExpansion) -> FourierExpansion {
    let mut g = FourierExpansion::zero(f.ctx(), f.bound())
        .with_level(f.level().cloned())
        .with_character(f.character().map(|c| c.conjugate()));
    for (xi, a) in f.support() {
        g.set(xi.clone(), a.conj());
    }
    g
}

/// The `λ` with `f = λ·g` on the shared box, if any; `1` when both vanish.
pub fn is_proportional(f: &FourierExpansion, g: &FourierExpansion) -> Option<Cyclotomic> {
    let bound = f.bound().min(&g.bound());
    let f = f.restrict(bound).expect("shared box");
    let g = g.restrict(bound).expect("shared box");
    let Some((k, b)) = g.support().next() else {
        return f.is_zero().then(Cyclotomic::one);
    };
    let a = f.coeff(k).expect("key in box");
    let lambda = &a * &b.inverse().expect("nonzero");
    f.equal_on_shared_box(&g.scale(&lambda)).then_some(lambda)
}

/// `a(I)` for the ideal `I = (x)`, after checking `a(ξε²) = a(ξ) = a(ξε⁻²)`
/// wherever those coefficients lie in the box.
pub fn coeff_at_ideal(f: &FourierExpansion, x: &RingElement) -> Result<Cyclotomic> {
    let ctx = f.ctx();
    if x.is_zero() {
        return f.coeff(x);
    }
    let xi = ctx.ideal_generator(x)?;
    let a = f.coeff(&xi)?;
    for k in [2, -2] {
        let y = &xi * &ctx.unit_power(k);
        if f.bound().contains(&y) && f.coeff(&y)? != a {
            return Err(Error::WellDefinedness(format!("a({xi}) differs from a({y})")));
        }
    }
    Ok(a)
}
