use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use crate::error::Result;
use crate::field::FieldContext;
use crate::qexp::{coeff_at_ideal, FourierExpansion};
use crate::residue::DirichletCharacter;

/// `Σ_{N(I) ≤ B} a(I) N(I)^{-s}`.
pub fn partial_l(f: &FourierExpansion, s: Complex64, norm_bound: u64) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for ideal in f.ctx().ideals_up_to_norm(norm_bound) {
        let a = coeff_at_ideal(f, &ideal)?;
        if a.is_zero() {
            continue;
        }
        let n = ideal.norm().abs().to_f64().unwrap_or(f64::NAN);
        total += a.to_complex() * Complex64::new(n, 0.0).powc(-s);
    }
    Ok(total)
}

/// `∏_{N(p) ≤ B} (1 − ψ*(p) N(p)^{-2s})^{-1}`.
pub fn euler_partial(ctx: &FieldContext, psi: &DirichletCharacter, s: Complex64, norm_bound: u64) -> Result<Complex64> {
    let mut total = Complex64::new(1.0, 0.0);
    for p in ctx.primes_up_to_norm(norm_bound) {
        let Some(v) = psi.ideal_value(&p)? else {
            continue;
        };
        let n = p.norm().abs().to_f64().unwrap_or(f64::NAN);
        total /= Complex64::new(1.0, 0.0) - v.to_complex() * Complex64::new(n, 0.0).powc(-2.0 * s);
    }
    Ok(total)
}
