use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::automorphy::{d_group_ideals, h_ratio};
use super::lattice::PreparedExpansion;
use super::matrix::MatrixOverF;
use super::sampling::{balanced_point, gamma_with_a};
use super::{EvalConfig, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::field::RingElement;
use crate::qexp::FourierExpansion;
use crate::residue::DirichletCharacter;

/// Outcome of a numerical modularity check.
#[derive(Clone, Debug)]
pub struct ModularityReport {
    pub level: RingElement,
    pub samples: usize,
    pub max_deviation: f64,
    pub tol: f64,
}

impl ModularityReport {
    pub fn pass(&self) -> bool {
        self.max_deviation < self.tol
    }

    pub fn to_json(&self, form: &str, character: Value) -> Value {
        json!({
            "form": form,
            "level": [self.level.a().to_string(), self.level.b().to_string()],
            "character": character,
            "samples": self.samples,
            "max_deviation": self.max_deviation,
            "tol": self.tol,
            "pass": self.pass(),
        })
    }
}

/// Random `(γ, z)` with `γ = u₁·g·u₂ ∈ Γ_c`, where `g` has a random upper-left
/// entry coprime to `c` and `u₁, u₂` are random translations by `2δ⁻¹R`.
pub(crate) fn sample_pairs(
    ctx: &crate::field::FieldContext,
    c: &RingElement,
    samples: usize,
    seed: u64,
) -> Result<Vec<(MatrixOverF, UpperHalfPoint)>> {
    let group = ctx.unit_group(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let a = ctx.element(rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        if !group.is_unit(&a) {
            continue;
        }
        let g = gamma_with_a(ctx, c, &a)?;
        let g = translation(ctx, &mut rng).mul(&g).mul(&translation(ctx, &mut rng));
        let z = balanced_point(&g, &mut rng);
        out.push((g, z));
    }
    Ok(out)
}

fn translation(ctx: &crate::field::FieldContext, rng: &mut ChaCha8Rng) -> MatrixOverF {
    let (up, _) = d_group_ideals(ctx);
    let b = ctx.element(rng.gen_range(-1..=1), rng.gen_range(-1..=1));
    MatrixOverF::upper(&up * &crate::field::FieldElement::from(&b))
}

/// `max |f(γz) − ψ_c(a_γ)·h(γ, z)·f(z)|` over random `γ ∈ Γ_c` and `z`,
/// with `h` the theta quotient and `ψ_c(a)` the Dirichlet value of `ψ`.
pub fn verify_modularity(
    f: &FourierExpansion,
    psi: &DirichletCharacter,
    c: &RingElement,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<ModularityReport> {
    let ctx = f.ctx();
    let prim = psi.primitive()?;
    if !prim.conductor()?.divides(c) {
        return Err(Error::Level(format!("the conductor of {psi} does not divide {c}")));
    }
    let pairs = sample_pairs(ctx, c, samples, seed)?;
    let prepared = PreparedExpansion::new(f);
    let digits = (-(tol / 100.0).log10()).ceil().max(1.0) as u32;
    let deviations: Vec<f64> = pairs
        .par_iter()
        .map(|(g, z)| -> Result<f64> {
            let w = g.act(z);
            let cfg = EvalConfig {
                floor: 0.0,
                precision: digits,
            };
            let fz = prepared.eval(z);
            let fw = prepared.eval(&w);
            if fz.tail_bound > tol / 10.0 || fw.tail_bound > tol / 10.0 {
                return Err(Error::BoxTooSmall(format!(
                    "expansion box too small for evaluation at Im z = {:.4}",
                    z.y_min().min(w.y_min())
                )));
            }
            let h = h_ratio(ctx, g, z, &cfg)?;
            let a = g.a.to_ring().expect("a_γ is integral");
            let chi = prim.value(&a).expect("a_γ is coprime to c").to_complex();
            let dev: Complex64 = fw.value - chi * h.value * fz.value;
            Ok(dev.norm())
        })
        .collect::<Result<_>>()?;
    Ok(ModularityReport {
        level: c.clone(),
        samples,
        max_deviation: deviations.into_iter().fold(0.0, f64::max),
        tol,
    })
}
