//! Floating-point evaluation on `ℍ²`: theta series and expansions, the
//! automorphy factor `h(γ, z)` both as a theta quotient and in closed form,
//! numerical modularity checks, the `W(c)` operator and partial L-series.

mod automorphy;
mod lattice;
mod lseries;
mod matrix;
mod modularity;
mod sampling;
mod w_operator;

use num_complex::Complex64;

pub use automorphy::{eps_tilde, gauss_epsilon, h_garrett, h_ratio, h_w0, AutomorphyValue, Method};
pub use lattice::{eval_expansion, theta_chi_t_eval, theta_eval, PreparedExpansion};
pub use lseries::{euler_partial, partial_l};
pub use matrix::MatrixOverF;
pub use modularity::{verify_modularity, ModularityReport};
pub use sampling::{balanced_point, gamma_with_a, random_gamma, random_point_near};
pub use w_operator::{h_operator_eval, w_operator_eval};

use crate::error::{Error, Result};

/// Default lower bound on the imaginary parts of evaluation points.
pub const DEFAULT_FLOOR: f64 = 0.5;

/// Evaluation settings: the imaginary-part floor and the number of
/// requested decimal digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig {
    pub floor: f64,
    pub precision: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            floor: DEFAULT_FLOOR,
            precision: 12,
        }
    }
}

impl EvalConfig {
    pub fn with_floor(floor: f64) -> Self {
        EvalConfig {
            floor,
            ..Default::default()
        }
    }

    /// Target truncation error `10^(-precision)`.
    pub fn tolerance(&self) -> f64 {
        10f64.powi(-(self.precision as i32))
    }
}

/// A point `(z₁, z₂)` of `ℍ²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint {
    pub z: [Complex64; 2],
}

impl UpperHalfPoint {
    /// Accepts `z` when both imaginary parts are at least `floor`.
    pub fn new(z1: Complex64, z2: Complex64, floor: f64) -> Result<Self> {
        let p = UpperHalfPoint { z: [z1, z2] };
        p.check_floor(floor)?;
        Ok(p)
    }

    pub fn y_min(&self) -> f64 {
        self.z[0].im.min(self.z[1].im)
    }

    pub fn check_floor(&self, floor: f64) -> Result<()> {
        if self.y_min() >= floor && self.z.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::Convergence(format!(
                "point ({}, {}) lies below the evaluation floor {floor}",
                self.z[0], self.z[1]
            )))
        }
    }

    /// `∏ zᵢ^α` with principal branches.
    pub fn power_product(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        f(self.z[0]) * f(self.z[1])
    }
}

/// A value with a certified bound on its truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated {
    pub value: Complex64,
    pub tail_bound: f64,
}
