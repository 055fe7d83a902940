use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::lattice::theta_eval;
use super::matrix::MatrixOverF;
use super::{EvalConfig, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, RingElement};
use crate::residue::{quadratic_symbol, ResidueRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Ratio,
    ClosedForm,
}

/// A value of `h(γ, z)` with the method that produced it and an error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AutomorphyValue {
    pub value: Complex64,
    pub method: Method,
    pub error_bound: f64,
}

fn fe(x: &RingElement) -> FieldElement {
    FieldElement::from(x)
}

/// `2δ⁻¹` and `2δ`, generators of the ideals defining `D = Γ[2δ⁻¹, 2δ]`.
pub(crate) fn d_group_ideals(ctx: &FieldContext) -> (FieldElement, FieldElement) {
    let two = fe(&ctx.int(2));
    let delta = fe(ctx.delta());
    let inv = delta.inv().expect("δ ≠ 0");
    (&two * &inv, &two * &delta)
}

/// `h(γ, z) = θ(γz)/θ(z)` for `γ ∈ D`.
pub fn h_ratio(ctx: &FieldContext, gamma: &MatrixOverF, z: &UpperHalfPoint, cfg: &EvalConfig) -> Result<AutomorphyValue> {
    let (f, g) = d_group_ideals(ctx);
    if !gamma.in_gamma(&f, &g) {
        return Err(Error::Membership(format!("{gamma} is not in Γ[2δ⁻¹, 2δ]")));
    }
    let w = gamma.act(z);
    let num = theta_eval(ctx, &w, cfg)?;
    let den = theta_eval(ctx, z, cfg)?;
    let b = den.value.norm();
    if b <= den.tail_bound {
        return Err(Error::Convergence("θ(z) is indistinguishable from zero".into()));
    }
    let value = num.value / den.value;
    let error_bound = (num.tail_bound + value.norm() * den.tail_bound) / (b - den.tail_bound);
    Ok(AutomorphyValue {
        value,
        method: Method::Ratio,
        error_bound,
    })
}

/// Fractional part of the trace of an element of `F`, in `[0, 1)`.
fn trace_mod_one(x: &FieldElement) -> f64 {
    let t = x.trace();
    let fl = t.numer().div_floor(t.denom());
    (t - BigRational::from_integer(fl)).to_f64().unwrap_or(0.0)
}

/// `ε(d) = (i sgn d)^{1/2} 2^{-n/2} D^{-1/2} Σ_{v ∈ δ⁻¹R/2R} e(-v²d/4)`, with
/// the square root taken per embedding on the principal branch.
pub fn gauss_epsilon(ctx: &FieldContext, d: &RingElement) -> Result<Complex64> {
    if d.is_zero() {
        return Err(Error::Zero);
    }
    let two_delta = ctx.delta().scale(&BigInt::from(2));
    let ring = ResidueRing::new(&two_delta, &[]);
    let delta = fe(ctx.delta());
    let scale = &fe(d) * &(&delta * &delta).inv().expect("δ ≠ 0");
    let quarter = MatrixOverF::scalar(ctx.field(), BigRational::new((-1).into(), 4.into()));
    let scale = &scale * &quarter;
    let mut sum = Complex64::new(0.0, 0.0);
    for y in ring.elements() {
        let y = fe(&ring.lift(y));
        let arg = trace_mod_one(&(&(&y * &y) * &scale));
        sum += Complex64::from_polar(1.0, 2.0 * PI * arg);
    }
    let e = d.embeddings();
    let branch = |s: f64| Complex64::new(0.0, s.signum()).sqrt();
    let norm = 2f64.powi(-1) / (ctx.discriminant() as f64).sqrt();
    Ok(branch(e[0]) * branch(e[1]) * sum * norm)
}

/// `ε̃(d) = i^s`, `s` the number of negative embeddings.
pub fn eps_tilde(d: &RingElement) -> Complex64 {
    let s = d.embeddings().iter().filter(|x| **x < 0.0).count();
    Complex64::new(0.0, 1.0).powu(s as u32)
}

/// `∏ (c/π)^e` over `π^e ‖ d`.
fn quadratic_ideal_character(ctx: &FieldContext, c: &RingElement, d: &RingElement) -> Result<i8> {
    let mut s = 1i8;
    for (p, e) in ctx.factor(d)?.factors {
        let v = quadratic_symbol(ctx, c, &p).map_err(|err| match err {
            Error::EvenPrime(p) => Error::Symbol(format!("d_γ is divisible by the even prime {p}")),
            other => other,
        })?;
        if v == 0 {
            return Err(Error::Symbol(format!("(c_γ/π) vanishes at π = {p}")));
        }
        if e % 2 == 1 {
            s *= v;
        }
    }
    Ok(s)
}

/// `∏ (cᵢ, dᵢ)_∞`: a factor `-1` for each embedding where both are negative.
fn real_hilbert_sign(c: &RingElement, d: &RingElement) -> i8 {
    let (c, d) = (c.embeddings(), d.embeddings());
    (0..2).fold(1, |s, i| if c[i] < 0.0 && d[i] < 0.0 { -s } else { s })
}

/// Branch factor calibrated against `h_ratio`: `(-1)^b` for `d = a + b√2`.
fn garrett_branch(ctx: &FieldContext, d: &RingElement) -> Result<i8> {
    if ctx.d() != 2 {
        return Err(Error::Hypothesis(format!(
            "the closed form for h(γ, z) is calibrated over Q(√2) only, not Q(√{})",
            ctx.d()
        )));
    }
    Ok(if d.b().is_odd() { -1 } else { 1 })
}

/// `h(γ, z) = ε(d)ε̃(d)·(c/d)·∏(cᵢ, dᵢ)_∞·(-1)^b·(cz + d)^{1/2}` for
/// `γ ∈ Γ_c` over `ℚ(√2)` with `c_γ ≠ 0`.
pub fn h_garrett(ctx: &FieldContext, gamma: &MatrixOverF, z: &UpperHalfPoint) -> Result<AutomorphyValue> {
    if gamma.c.is_zero() {
        return Err(Error::Degenerate("c_γ = 0".into()));
    }
    let (c, d) = match (gamma.a.to_ring(), gamma.c.to_ring(), gamma.d.to_ring()) {
        (Some(_), Some(c), Some(d)) => (c, d),
        _ => return Err(Error::Membership(format!("{gamma} has non-integral a, c or d"))),
    };
    let branch = garrett_branch(ctx, &d)?;
    let chi = quadratic_ideal_character(ctx, &c, &d)? * real_hilbert_sign(&c, &d) * branch;
    let den = gamma.denominator(z);
    let root = den[0].sqrt() * den[1].sqrt();
    let value = gauss_epsilon(ctx, &d)? * eps_tilde(&d) * f64::from(chi) * root;
    Ok(AutomorphyValue {
        value,
        method: Method::ClosedForm,
        error_bound: 1e-12 * value.norm().max(1.0),
    })
}

/// `h(W₀, z) = (-iz)^{1/2} N(δ)^{1/2}` for `W₀ = (0, -δ⁻¹; δ, 0)`.
pub fn h_w0(ctx: &FieldContext, z: &UpperHalfPoint) -> Complex64 {
    let mi = Complex64::new(0.0, -1.0);
    let n = ctx.delta().norm().to_f64().unwrap_or(f64::NAN);
    (mi * z.z[0]).sqrt() * (mi * z.z[1]).sqrt() * n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::sampling::{balanced_point, random_gamma};
    use crate::field::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> EvalConfig {
        EvalConfig { floor: 0.0, precision: 12 }
    }

    #[test]
    fn eps_tilde_counts_negative_embeddings() {
        let k = make_field(2).unwrap();
        assert_eq!(eps_tilde(&k.int(3)), Complex64::new(1.0, 0.0));
        assert_eq!(eps_tilde(&k.int(-3)), Complex64::new(-1.0, 0.0));
        assert_eq!(eps_tilde(&k.element(1, 1)), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn gauss_sum_is_unitary_away_from_two_delta() {
        for d in [2, 5, 13] {
            let k = make_field(d).unwrap();
            let two_delta = k.delta().scale(&BigInt::from(2));
            let mut seen = 0;
            'outer: for a in -9i64..=9 {
                for b in -3i64..=3 {
                    let x = k.element(a, b);
                    if x.is_zero() || !k.unit_group(&two_delta).unwrap().is_unit(&x) {
                        continue;
                    }
                    let v = gauss_epsilon(&k, &x).unwrap() * eps_tilde(&x);
                    assert!((v.norm() - 1.0).abs() < 1e-10, "d={d} x={x} |ε|={}", v.norm());
                    seen += 1;
                    if seen == 20 {
                        break 'outer;
                    }
                }
            }
            assert_eq!(seen, 20);
        }
    }

    #[test]
    fn ratio_is_trivial_on_identity_and_translations() {
        let k = make_field(2).unwrap();
        let z = UpperHalfPoint::new(Complex64::new(0.2, 0.8), Complex64::new(-0.3, 1.1), 0.5).unwrap();
        let id = MatrixOverF::identity(k.field());
        assert!((h_ratio(&k, &id, &z, &cfg()).unwrap().value - 1.0).norm() < 1e-12);
        let (up, _) = d_group_ideals(&k);
        let t = MatrixOverF::upper(up);
        assert!((h_ratio(&k, &t, &z, &cfg()).unwrap().value - 1.0).norm() < 1e-10);
        let bad = MatrixOverF::upper(MatrixOverF::scalar(k.field(), BigRational::new(1.into(), 2.into())));
        assert!(matches!(h_ratio(&k, &bad, &z, &cfg()), Err(Error::Membership(_))));
    }

    #[test]
    fn ratio_has_weight_one_half_modulus() {
        let k = make_field(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for len in 2..=4 {
            let g = random_gamma(&k, &k.int(4), len, &mut rng).unwrap();
            let z = balanced_point(&g, &mut rng);
            let h = h_ratio(&k, &g, &z, &cfg()).unwrap().value.norm();
            let den = g.denominator(&z);
            assert!((h - (den[0].norm() * den[1].norm()).sqrt()).abs() < 1e-8 * h.max(1.0));
        }
    }

    #[test]
    fn ratio_is_a_cocycle() {
        let k = make_field(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..6 {
            let g1 = random_gamma(&k, &k.int(4), 2, &mut rng).unwrap();
            let g2 = random_gamma(&k, &k.int(4), 2, &mut rng).unwrap();
            let z = UpperHalfPoint::new(Complex64::new(0.1, 0.9), Complex64::new(-0.2, 1.2), 0.5).unwrap();
            let lhs = h_ratio(&k, &g1.mul(&g2), &z, &cfg()).unwrap().value;
            let rhs = h_ratio(&k, &g1, &g2.act(&z), &cfg()).unwrap().value * h_ratio(&k, &g2, &z, &cfg()).unwrap().value;
            assert!((lhs - rhs).norm() < 1e-8 * lhs.norm().max(1.0));
        }
    }

    /// Calibration of the closed form: random words in `Γ_(4)` over `ℚ(√2)`.
    #[test]
    fn closed_form_matches_ratio_on_gamma_four() {
        let k = make_field(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut worst = 0f64;
        let mut n = 0;
        while n < 50 {
            let g = random_gamma(&k, &k.int(4), 1 + n % 6, &mut rng).unwrap();
            if g.c.is_zero() {
                continue;
            }
            let z = balanced_point(&g, &mut rng);
            let a = h_ratio(&k, &g, &z, &cfg()).unwrap();
            let b = h_garrett(&k, &g, &z).unwrap();
            let den = g.denominator(&z);
            let modulus = b.value.norm() / (den[0].norm() * den[1].norm()).sqrt();
            assert!((modulus - 1.0).abs() < 1e-8);
            worst = worst.max((a.value - b.value).norm());
            n += 1;
        }
        assert!(worst < 1e-8, "max deviation {worst}");
    }

    #[test]
    fn closed_form_covers_prescribed_residues() {
        use crate::analytic::sampling::gamma_with_a;
        let k = make_field(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for c in [k.int(4), k.element(0, 4), k.int(8)] {
            for a in [k.element(3, 1), k.element(-3, 5), k.element(5, 2), k.int(-7)] {
                let g = gamma_with_a(&k, &c, &a).unwrap();
                let z = balanced_point(&g, &mut rng);
                let x = h_ratio(&k, &g, &z, &cfg()).unwrap().value;
                let y = h_garrett(&k, &g, &z).unwrap().value;
                assert!((x - y).norm() < 1e-8, "c={c} a={a}");
            }
        }
    }

    #[test]
    fn closed_form_errors() {
        let k = make_field(2).unwrap();
        let z = UpperHalfPoint::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0), 0.5).unwrap();
        let id = MatrixOverF::identity(k.field());
        assert!(matches!(h_garrett(&k, &id, &z), Err(Error::Degenerate(_))));
        let k5 = make_field(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_gamma(&k5, &k5.int(4), 2, &mut rng).unwrap();
        assert!(matches!(h_garrett(&k5, &g, &z), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn w0_anchor() {
        for d in [2, 5, 13] {
            let k = make_field(d).unwrap();
            let de = k.delta().embeddings();
            for z in [
                UpperHalfPoint::new(Complex64::new(0.1, 0.9), Complex64::new(-0.3, 1.2), 0.5).unwrap(),
                UpperHalfPoint::new(Complex64::new(-0.4, 0.6), Complex64::new(0.2, 0.7), 0.5).unwrap(),
            ] {
                let w = UpperHalfPoint {
                    z: [-1.0 / (z.z[0] * de[0] * de[0]), -1.0 / (z.z[1] * de[1] * de[1])],
                };
                let ratio = theta_eval(&k, &w, &cfg()).unwrap().value / theta_eval(&k, &z, &cfg()).unwrap().value;
                assert!((ratio - h_w0(&k, &z)).norm() < 1e-8, "d={d}");
            }
        }
    }
}
