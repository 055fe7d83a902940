use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::lattice::PreparedExpansion;
use super::{EvalConfig, Evaluated, UpperHalfPoint};
use crate::error::{Error, Result};
use crate::field::RingElement;
use crate::qexp::FourierExpansion;

/// `(f | W(c))(z) = (-iz)^{-1/2} N(2⁻²δ²c)^{-1/4} f(-4/(cδ²z))`.
pub fn w_operator_eval(f: &FourierExpansion, c: &RingElement, z: &UpperHalfPoint, cfg: &EvalConfig) -> Result<Evaluated> {
    if !c.is_totally_positive() {
        return Err(Error::Positivity(c.to_string()));
    }
    z.check_floor(cfg.floor)?;
    let ctx = f.ctx();
    let de = ctx.delta().embeddings();
    let ce = c.embeddings();
    let w = UpperHalfPoint {
        z: [
            Complex64::new(-4.0, 0.0) / (z.z[0] * ce[0] * de[0] * de[0]),
            Complex64::new(-4.0, 0.0) / (z.z[1] * ce[1] * de[1] * de[1]),
        ],
    };
    w.check_floor(cfg.floor)?;
    let fw = PreparedExpansion::new(f).eval(&w);
    let dn = ctx.delta().norm().to_f64().unwrap_or(f64::NAN);
    let cn = c.norm().to_f64().unwrap_or(f64::NAN);
    let n = dn * dn * cn / 16.0;
    let mi = Complex64::new(0.0, -1.0);
    let factor = ((mi * z.z[0]).sqrt() * (mi * z.z[1]).sqrt()).inv() * n.powf(-0.25);
    Ok(Evaluated {
        value: factor * fw.value,
        tail_bound: factor.norm() * fw.tail_bound,
    })
}

/// `(f | H)(z) = conj f(-conj z)`.
pub fn h_operator_eval(f: &FourierExpansion, z: &UpperHalfPoint, cfg: &EvalConfig) -> Result<Evaluated> {
    z.check_floor(cfg.floor)?;
    let w = UpperHalfPoint {
        z: [-z.z[0].conj(), -z.z[1].conj()],
    };
    let v = PreparedExpansion::new(f).eval(&w);
    Ok(Evaluated {
        value: v.value.conj(),
        tail_bound: v.tail_bound,
    })
}
