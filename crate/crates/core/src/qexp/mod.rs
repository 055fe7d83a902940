//! Box-truncated Fourier expansions `Σ a(ξ) e(ξz/2)` with exact cyclotomic
//! coefficients, theta series and the operators acting on them.

mod operators;
mod theta;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use serde_json::{json, Value};

pub use operators::{coeff_at_ideal, hecke_input_box, is_proportional, op_h, op_k, op_t_p2, op_t_p2_to, op_u, op_v};
pub use theta::theta_chi_t;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::{BoxBound, FieldContext, RingElement};
use crate::residue::DirichletCharacter;

/// Coefficients `a(ξ)` for `ξ = 0` and totally positive `ξ` in a box.
///
/// Only nonzero coefficients are stored; every other key of the box has
/// coefficient zero. Keys outside the box are unknown.
#[derive(Clone, Debug)]
pub struct FourierExpansion {
    ctx: Arc<FieldContext>,
    bound: BoxBound,
    coeffs: BTreeMap<RingElement, Cyclotomic>,
    level: Option<RingElement>,
    character: Option<DirichletCharacter>,
}

impl FourierExpansion {
    pub fn zero(ctx: &Arc<FieldContext>, bound: BoxBound) -> Self {
        FourierExpansion {
            ctx: ctx.clone(),
            bound,
            coeffs: BTreeMap::new(),
            level: None,
            character: None,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn bound(&self) -> BoxBound {
        self.bound
    }

    pub fn level(&self) -> Option<&RingElement> {
        self.level.as_ref()
    }

    pub fn character(&self) -> Option<&DirichletCharacter> {
        self.character.as_ref()
    }

    pub fn with_level(mut self, level: Option<RingElement>) -> Self {
        self.level = level;
        self
    }

    pub fn with_character(mut self, character: Option<DirichletCharacter>) -> Self {
        self.character = character;
        self
    }

    /// Stores `a(ξ)`; zero values are dropped.
    pub fn set(&mut self, xi: RingElement, c: Cyclotomic) {
        if c.is_zero() {
            self.coeffs.remove(&xi);
        } else {
            self.coeffs.insert(xi, c);
        }
    }

    /// `a(ξ)`, zero for nonzero `ξ` that is not totally positive.
    pub fn coeff(&self, xi: &RingElement) -> Result<Cyclotomic> {
        if !xi.is_zero() && !xi.is_totally_positive() {
            return Ok(Cyclotomic::zero());
        }
        if !self.bound.contains(xi) {
            return Err(Error::BoxTooSmall(format!(
                "{xi} lies outside the box ({}, {})",
                self.bound.x1, self.bound.x2
            )));
        }
        Ok(self.coeffs.get(xi).cloned().unwrap_or_default())
    }

    /// Nonzero coefficients in key order.
    pub fn support(&self) -> impl Iterator<Item = (&RingElement, &Cyclotomic)> {
        self.coeffs.iter()
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.len()
    }

    /// All keys of the box, including zero.
    pub fn keys(&self) -> Vec<RingElement> {
        self.ctx.enumerate_bound(&self.bound, true)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The same expansion on a smaller box.
    pub fn restrict(&self, bound: BoxBound) -> Result<Self> {
        if !self.bound.covers(&bound) {
            return Err(Error::BoxTooSmall("restriction to a larger box".into()));
        }
        let mut out = self.clone();
        out.bound = bound;
        out.coeffs.retain(|xi, _| bound.contains(xi));
        Ok(out)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let mut out = self.clone();
        out.coeffs = BTreeMap::new();
        for (xi, a) in &self.coeffs {
            out.set(xi.clone(), a * c);
        }
        out
    }

    pub fn scale_rational(&self, q: BigRational) -> Self {
        self.scale(&Cyclotomic::from_rational(q))
    }

    fn combine(&self, other: &Self, f: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic) -> Self {
        let bound = self.bound.min(&other.bound);
        let mut out = FourierExpansion::zero(&self.ctx, bound);
        out.level = self.level.clone();
        out.character = self.character.clone();
        let zero = Cyclotomic::zero();
        let keys: std::collections::BTreeSet<&RingElement> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .filter(|k| bound.contains(k))
            .collect();
        for k in keys {
            let a = self.coeffs.get(k).unwrap_or(&zero);
            let b = other.coeffs.get(k).unwrap_or(&zero);
            out.set(k.clone(), f(a, b));
        }
        out
    }

    /// Coefficientwise sum on the shared box.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    /// Coefficientwise difference on the shared box.
    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    /// Exact coefficientwise equality on the shared box.
    pub fn equal_on_shared_box(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let pair = |x: &RingElement| json!([x.a().to_string(), x.b().to_string()]);
        json!({
            "field": self.ctx.d(),
            "box": [self.bound.x1, self.bound.x2],
            "level": self.level.as_ref().map(pair),
            "character": self.character.as_ref().map(|c| c.to_json()),
            "coeffs": self.coeffs.iter().map(|(k, v)| json!([pair(k), v.to_json()])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(ctx: &Arc<FieldContext>, v: &Value) -> Result<Self> {
        if v["field"].as_i64() != Some(ctx.d()) {
            return Err(Error::Parse(format!(
                "expansion is over d = {}, context is d = {}",
                v["field"],
                ctx.d()
            )));
        }
        let b = v["box"]
            .as_array()
            .filter(|b| b.len() == 2)
            .ok_or_else(|| Error::Parse("bad box".into()))?;
        let x1 = b[0].as_f64().ok_or_else(|| Error::Parse("bad box".into()))?;
        let x2 = b[1].as_f64().ok_or_else(|| Error::Parse("bad box".into()))?;
        let mut out = FourierExpansion::zero(ctx, BoxBound::new(x1, x2));
        if !v["level"].is_null() {
            out.level = Some(crate::residue::parse_pair(ctx, &v["level"])?);
        }
        if !v["character"].is_null() {
            out.character = Some(DirichletCharacter::from_json(ctx, &v["character"])?);
        }
        for entry in v["coeffs"].as_array().ok_or_else(|| Error::Parse("missing coeffs".into()))? {
            let e = entry
                .as_array()
                .filter(|e| e.len() == 2)
                .ok_or_else(|| Error::Parse("bad coefficient".into()))?;
            let xi = crate::residue::parse_pair(ctx, &e[0])?;
            if !out.bound.contains(&xi) {
                return Err(Error::Parse(format!("coefficient key {xi} outside the box")));
            }
            out.set(xi, Cyclotomic::from_json(&e[1])?);
        }
        Ok(out)
    }
}
