use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;

use super::FourierExpansion;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::{BoxBound, FieldContext, RingElement};
use crate::residue::{epsilon_of, DirichletCharacter};

/// Nonzero `x ∈ R` with `|x⁽ⁱ⁾| ≤ bᵢ`, up to slack; callers re-check exactly.
fn ring_elements_in_symmetric_box(ctx: &FieldContext, b1: f64, b2: f64) -> Vec<RingElement> {
    let w = ctx.field().omega().embeddings();
    let span = (w[0] - w[1]).abs();
    let slack = 1e-9 * (1.0 + b1 + b2);
    let bmax = ((b1 + b2) / span + slack).floor() as i64;
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        let bf = b as f64;
        let lo = (-b1 - bf * w[0]).max(-b2 - bf * w[1]) - slack;
        let hi = (b1 - bf * w[0]).min(b2 - bf * w[1]) + slack;
        if lo > hi {
            continue;
        }
        for a in lo.ceil() as i64..=hi.floor() as i64 {
            if a != 0 || b != 0 {
                out.push(ctx.element(a, b));
            }
        }
    }
    out
}

/// `θ_{χ,t}(z) = Σ_x χ⁻¹(x) e(t x² z / 2)` truncated to `bound`.
///
/// `χ` must be trivial on units; values are taken from its primitive
/// character, so `x` not coprime to the conductor contributes zero.
pub fn theta_chi_t(ctx: &Arc<FieldContext>, chi: &DirichletCharacter, t: &RingElement, bound: BoxBound) -> Result<FourierExpansion> {
    if !t.is_totally_positive() {
        return Err(Error::Positivity(t.to_string()));
    }
    let prim = chi.primitive()?;
    for u in [ctx.int(-1), ctx.fundamental_unit().clone()] {
        if let Some(v) = prim.value(&u) {
            if !v.is_one() {
                return Err(Error::Character(format!("{chi} is not trivial on the unit {u}")));
            }
        }
    }
    let te = t.embeddings();
    let xs = ring_elements_in_symmetric_box(ctx, (bound.x1 / te[0]).sqrt(), (bound.x2 / te[1]).sqrt());
    let mut f = FourierExpansion::zero(ctx, bound);
    if prim.is_trivial() {
        f.set(ctx.int(0), Cyclotomic::one());
    }
    let mut acc: std::collections::BTreeMap<RingElement, Cyclotomic> = Default::default();
    for x in xs {
        let xi = &(&x * &x) * t;
        if !bound.contains(&xi) {
            continue;
        }
        if let Some(v) = prim.value(&x) {
            let e = acc.entry(xi).or_default();
            *e = &*e + &v.conj().to_cyclotomic();
        }
    }
    for (xi, c) in acc {
        f.set(xi, c);
    }
    let r = prim.conductor()?;
    let four: BigInt = 4.into();
    let level = ctx.ideal_generator(&(&(&r * &r) * t).scale(&four))?;
    let character = prim.mul(&epsilon_of(ctx, t)?)?;
    debug_assert!(f.support().all(|(_, c)| c.abs() <= 2.0 + 1e-9));
    debug_assert!(level.norm().is_positive());
    Ok(f.with_level(Some(level)).with_character(Some(character)))
}
