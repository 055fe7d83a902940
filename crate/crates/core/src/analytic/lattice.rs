use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{EvalConfig, Evaluated, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::field::{FieldContext, RingElement};
use crate::qexp::FourierExpansion;
use crate::residue::DirichletCharacter;

/// Extent of the fundamental parallelogram of `R` in each embedding.
fn cell_extent(ctx: &FieldContext) -> [f64; 2] {
    let w = ctx.field().omega().embeddings();
    [1.0 + w[0].abs(), 1.0 + w[1].abs()]
}

/// Upper bound for `Σ_{k≥0} N(t0+k+1)·e^{-(t0+k)}` where `N(T)` bounds the
/// number of lattice points with exponent at most `T`.
fn tail_envelope(t0: f64, count: impl Fn(f64) -> f64) -> f64 {
    let mut total = 0.0;
    for k in 0..10_000 {
        let t = t0 + k as f64;
        let term = count(t + 1.0) * (-t).exp();
        total += term;
        if term < 1e-30 * total.max(1e-300) || term == 0.0 {
            break;
        }
    }
    total
}

/// `x ∈ R` with `Σ aᵢ (x⁽ⁱ⁾)² ≤ bound`.
fn ellipse_points(ctx: &FieldContext, a: [f64; 2], bound: f64) -> Vec<(i64, i64, [f64; 2])> {
    let w = ctx.field().omega().embeddings();
    let r = [(bound / a[0]).sqrt(), (bound / a[1]).sqrt()];
    let span = (w[0] - w[1]).abs();
    let bmax = ((r[0] + r[1]) / span).floor() as i64 + 1;
    let mut out = Vec::new();
    for b in -bmax..=bmax {
        let bf = b as f64;
        let lo = (-r[0] - bf * w[0]).max(-r[1] - bf * w[1]);
        let hi = (r[0] - bf * w[0]).min(r[1] - bf * w[1]);
        if lo > hi {
            continue;
        }
        for x in lo.ceil() as i64..=hi.floor() as i64 {
            let e = [x as f64 + bf * w[0], x as f64 + bf * w[1]];
            if a[0] * e[0] * e[0] + a[1] * e[1] * e[1] <= bound {
                out.push((x, b, e));
            }
        }
    }
    out
}

/// `Σ_x w(x) e(t x² z / 2)` over `x ∈ R` with `|w| ≤ 1`.
fn weighted_theta(
    ctx: &FieldContext,
    z: &UpperHalfPoint,
    t: [f64; 2],
    cfg: &EvalConfig,
    weight: impl Fn(i64, i64) -> Option<Complex64> + Sync,
) -> Result<Evaluated> {
    z.check_floor(cfg.floor)?;
    let y = [z.z[0].im, z.z[1].im];
    let a = [PI * t[0] * y[0], PI * t[1] * y[1]];
    let lambda = (cfg.tolerance() * 1e-2).recip().ln();
    let pts = ellipse_points(ctx, a, lambda);
    let phase = [Complex64::new(0.0, PI * t[0]) * z.z[0], Complex64::new(0.0, PI * t[1]) * z.z[1]];
    let value: Complex64 = pts
        .par_iter()
        .filter_map(|&(x, b, e)| weight(x, b).map(|w| w * (phase[0] * e[0] * e[0] + phase[1] * e[1] * e[1]).exp()))
        .sum();
    let s = cell_extent(ctx);
    let d = (ctx.discriminant() as f64).sqrt();
    let count = |tt: f64| (2.0 * (tt / a[0]).sqrt() + s[0]) * (2.0 * (tt / a[1]).sqrt() + s[1]) / d;
    let tail_bound = tail_envelope(lambda, count);
    Ok(Evaluated { value, tail_bound })
}

/// `θ(z) = Σ_{x∈R} e(x² z / 2)`.
pub fn theta_eval(ctx: &FieldContext, z: &UpperHalfPoint, cfg: &EvalConfig) -> Result<Evaluated> {
    weighted_theta(ctx, z, [1.0, 1.0], cfg, |_, _| Some(Complex64::new(1.0, 0.0)))
}

/// `θ_{χ,t}(z)` summed directly over `x`, without a coefficient table.
pub fn theta_chi_t_eval(
    ctx: &FieldContext,
    chi: &DirichletCharacter,
    t: &RingElement,
    z: &UpperHalfPoint,
    cfg: &EvalConfig,
) -> Result<Evaluated> {
    if !t.is_totally_positive() {
        return Err(Error::Positivity(t.to_string()));
    }
    let prim = chi.primitive()?;
    weighted_theta(ctx, z, t.embeddings(), cfg, |x, b| {
        prim.value(&ctx.element(x, b)).map(|v| v.conj().to_complex())
    })
}

/// Coefficients of an expansion flattened for repeated evaluation.
#[derive(Clone, Debug)]
pub struct PreparedExpansion {
    terms: Vec<([f64; 2], Complex64)>,
    bound: [f64; 2],
    coefficient_bound: f64,
    extent: [f64; 2],
    sqrt_disc: f64,
}

impl PreparedExpansion {
    pub fn new(f: &FourierExpansion) -> Self {
        let terms: Vec<([f64; 2], Complex64)> = f
            .support()
            .map(|(xi, a)| (if xi.is_zero() { [0.0, 0.0] } else { xi.embeddings() }, a.to_complex()))
            .collect();
        let b = f.bound();
        PreparedExpansion {
            terms,
            bound: [b.x1, b.x2],
            coefficient_bound: f.max_abs().max(1.0),
            extent: cell_extent(f.ctx()),
            sqrt_disc: (f.ctx().discriminant() as f64).sqrt(),
        }
    }

    /// Certified bound for the coefficients outside the box at `z`.
    pub fn tail_bound(&self, z: &UpperHalfPoint) -> f64 {
        let y = [z.z[0].im, z.z[1].im];
        let t0 = PI * (self.bound[0] * y[0]).min(self.bound[1] * y[1]);
        let count = |t: f64| (t / (PI * y[0]) + self.extent[0]) * (t / (PI * y[1]) + self.extent[1]) / self.sqrt_disc;
        self.coefficient_bound * tail_envelope(t0, count)
    }

    pub fn eval(&self, z: &UpperHalfPoint) -> Evaluated {
        let p = [Complex64::new(0.0, PI) * z.z[0], Complex64::new(0.0, PI) * z.z[1]];
        let value = self.terms.iter().map(|(e, a)| a * (p[0] * e[0] + p[1] * e[1]).exp()).sum();
        Evaluated {
            value,
            tail_bound: self.tail_bound(z),
        }
    }
}

/// `f(z) = Σ a(ξ) e(ξ z / 2)` from the stored coefficients.
pub fn eval_expansion(f: &FourierExpansion, z: &UpperHalfPoint, cfg: &EvalConfig) -> Result<Evaluated> {
    z.check_floor(cfg.floor)?;
    Ok(PreparedExpansion::new(f).eval(z))
}
