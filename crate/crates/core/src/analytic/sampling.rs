use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::automorphy::d_group_ideals;
use super::matrix::MatrixOverF;
use super::UpperHalfPoint;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, RingElement};
use crate::residue::ResidueRing;

fn fe(x: &RingElement) -> FieldElement {
    FieldElement::from(x)
}

/// Generators `2δ⁻¹` and `2⁻¹δc` of the ideals defining `Γ_c`.
pub(crate) fn gamma_c_ideals(ctx: &FieldContext, c: &RingElement) -> (FieldElement, FieldElement) {
    let (two_over_delta, _) = d_group_ideals(ctx);
    let half = MatrixOverF::scalar(ctx.field(), BigRational::new(1.into(), 2.into()));
    let lower = &(&half * &fe(ctx.delta())) * &fe(c);
    (two_over_delta, lower)
}

fn small_nonzero(ctx: &FieldContext, rng: &mut ChaCha8Rng) -> RingElement {
    loop {
        let x = ctx.element(rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        if !x.is_zero() {
            return x;
        }
    }
}

/// A word of `word_length` alternating factors `(1, 2bδ⁻¹; 0, 1)` and
/// `(1, 0; 2⁻¹δc·b′, 1)` with small random `b, b′ ∈ R`.
pub fn random_gamma(ctx: &FieldContext, c: &RingElement, word_length: usize, rng: &mut ChaCha8Rng) -> Result<MatrixOverF> {
    if !ctx.int(4).divides(c) {
        return Err(Error::Level(format!("4 does not divide {c}")));
    }
    let (up, low) = gamma_c_ideals(ctx, c);
    let mut g = MatrixOverF::identity(ctx.field());
    let mut upper_next = rng.gen_bool(0.5);
    for _ in 0..word_length {
        let x = fe(&small_nonzero(ctx, rng));
        let step = if upper_next {
            MatrixOverF::upper(&up * &x)
        } else {
            MatrixOverF::lower(&low * &x)
        };
        g = g.mul(&step);
        upper_next = !upper_next;
    }
    debug_assert!(g.in_gamma(&up, &low));
    Ok(g)
}

/// Nearest-lattice reduction of `x` modulo `mR`.
fn reduce_mod(x: &RingElement, m: &RingElement) -> RingElement {
    let q = &fe(x) * &fe(m).inv().expect("m ≠ 0");
    let (a, b) = q.coords();
    let round = |r: &BigRational| -> BigInt {
        let two = BigInt::from(2);
        (r.numer() * &two + r.denom()).div_floor(&(r.denom() * &two))
    };
    let k = x.field().element(round(a), round(b));
    x - &(m * &k)
}

/// `γ ∈ Γ_c` with `a_γ = a` and `c_γ = 2⁻¹δc·ε^k`, the unit power chosen to
/// balance the two embeddings of `c_γ`, and `d_γ` reduced modulo `c`.
pub fn gamma_with_a(ctx: &FieldContext, c: &RingElement, a: &RingElement) -> Result<MatrixOverF> {
    if !ctx.int(4).divides(c) {
        return Err(Error::Level(format!("4 does not divide {c}")));
    }
    let group = ctx.unit_group(c)?;
    if !group.is_unit(a) {
        return Err(Error::Membership(format!("{a} is not coprime to {c}")));
    }
    let ring: &ResidueRing = group.ring();
    let inv = ring.pow(ring.reduce(a), group.order() - 1);
    let d = reduce_mod(&ring.lift(inv), c);
    let (up, low) = gamma_c_ideals(ctx, c);
    let k = (-4..=4)
        .min_by(|&i, &j| {
            let e = |k: i64| {
                let v = (&low * &fe(&ctx.unit_power(k))).embeddings();
                v[0].abs().max(v[1].abs())
            };
            e(i).total_cmp(&e(j))
        })
        .expect("nonempty range");
    let cg = &low * &fe(&ctx.unit_power(k));
    let one = FieldElement::one(ctx.field());
    let b = &(&(&fe(a) * &fe(&d)) - &one) * &cg.inv().expect("c_γ ≠ 0");
    let g = MatrixOverF::new(fe(a), b, cg, fe(&d));
    if !g.in_gamma(&up, &low) {
        return Err(Error::Membership(format!("constructed {g} is not in Γ_c")));
    }
    Ok(g)
}

/// A random point with `zᵢ = -dᵢ/cᵢ + (s + ir)/|cᵢ|`, for which `z` and `γz`
/// have imaginary parts of size about `1/|cᵢ|`.
pub fn balanced_point(gamma: &MatrixOverF, rng: &mut ChaCha8Rng) -> UpperHalfPoint {
    let (c, d) = (gamma.c.embeddings(), gamma.d.embeddings());
    let mut z = [Complex64::new(0.0, 1.0); 2];
    for i in 0..2 {
        let s = rng.gen_range(-0.5..0.5);
        let r = rng.gen_range(0.7..1.4);
        z[i] = if c[i] == 0.0 {
            Complex64::new(s, r)
        } else {
            Complex64::new(-d[i] / c[i] + s / c[i].abs(), r / c[i].abs())
        };
    }
    UpperHalfPoint { z }
}

/// A random point with real parts in `[-1, 1]` and imaginary parts in `[lo, hi]`.
pub fn random_point_near(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> UpperHalfPoint {
    let mut z = [Complex64::new(0.0, 1.0); 2];
    for zi in &mut z {
        *zi = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(lo..hi));
    }
    UpperHalfPoint { z }
}
