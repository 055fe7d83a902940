//! Arithmetic in the ring of integers of a real quadratic field of narrow
//! class number one.

mod element;
mod enumerate;
mod factor;
mod units;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive};

pub use element::{FieldElement, QuadraticField, RingElement};
pub use enumerate::{BoxBound, BOX_SLACK};
pub use factor::{factor_u64, rational_primes_up_to, PrimeFactorization, SplitType};

use crate::error::{Error, Result};
use crate::residue::UnitGroupStructure;

/// Fields whose narrow class number has been checked externally.
pub const CATALOG: [i64; 3] = [2, 5, 13];

/// A real quadratic field with its integral basis, fundamental unit,
/// discriminant and a fixed totally positive generator of the different.
pub struct FieldContext {
    field: QuadraticField,
    fundamental_unit: RingElement,
    delta: RingElement,
    discriminant: i64,
    groups: RwLock<HashMap<RingElement, Arc<UnitGroupStructure>>>,
    cache_dir: Option<PathBuf>,
}

impl std::fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldContext")
            .field("d", &self.field.d())
            .field("fundamental_unit", &self.fundamental_unit)
            .field("delta", &self.delta)
            .field("discriminant", &self.discriminant)
            .finish()
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d;
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Fundamental unit `> 1` of `Z[ω]`, from the period of the continued
/// fraction of `ω` (`√d`, or `(1+√d)/2` when `d ≡ 1 mod 4`).
pub fn fundamental_unit(field: QuadraticField) -> RingElement {
    let d = field.d();
    let root = d.sqrt();
    // ω = (P + √d)/Q
    let (p0, q0) = if field.half_integral_basis() { (1i64, 2i64) } else { (0, 1) };
    let (mut p, mut q) = (p0, q0);
    // convergents h/k of ω
    let (mut h_prev, mut h) = (BigInt::from(0), BigInt::from(1));
    let (mut k_prev, mut k) = (BigInt::from(1), BigInt::from(0));
    loop {
        let a = (p + root).div_euclid(q);
        let h_next = &h * a + &h_prev;
        let k_next = &k * a + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let p_next = a * q - p;
        let q_next = (d - p_next * p_next) / q;
        p = p_next;
        q = q_next;
        if q == q0 {
            break;
        }
    }
    // unit = h - k·ω'  where ω' is the conjugate of ω
    let omega_conj = field.omega().conj();
    let unit = &field.int(h) - &omega_conj.scale(&k);
    debug_assert!(unit.is_unit());
    unit
}

/// Builds the context for `Q(√d)`.
///
/// Rejects non-squarefree input, fields whose fundamental unit has norm
/// `+1`, and anything outside [`CATALOG`].
pub fn make_field(d: i64) -> Result<Arc<FieldContext>> {
    make_field_with_cache(d, None)
}

/// As [`make_field`], persisting unit-group tables under `cache_dir`.
pub fn make_field_with_cache(d: i64, cache_dir: Option<PathBuf>) -> Result<Arc<FieldContext>> {
    if d <= 1 || !is_squarefree(d) {
        return Err(Error::Catalog(d));
    }
    let field = QuadraticField::new(d);
    let unit = fundamental_unit(field);
    if unit.norm().is_one() {
        return Err(Error::UnitSign { d, unit: unit.to_string() });
    }
    if !CATALOG.contains(&d) {
        return Err(Error::Catalog(d));
    }
    let mut ctx = FieldContext {
        field,
        fundamental_unit: unit,
        delta: field.one(),
        discriminant: field.discriminant(),
        groups: RwLock::new(HashMap::new()),
        cache_dir,
    };
    let raw_delta = if field.half_integral_basis() {
        field.sqrt_element()
    } else {
        field.sqrt_element().scale(&BigInt::from(2))
    };
    ctx.delta = ctx.totally_positive_associate(&raw_delta)?;
    debug_assert_eq!(ctx.delta.norm().abs(), BigInt::from(ctx.discriminant));
    Ok(Arc::new(ctx))
}

impl FieldContext {
    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn d(&self) -> i64 {
        self.field.d()
    }

    pub fn degree(&self) -> usize {
        2
    }

    pub fn fundamental_unit(&self) -> &RingElement {
        &self.fundamental_unit
    }

    /// The fixed totally positive generator `δ` of the different.
    pub fn delta(&self) -> &RingElement {
        &self.delta
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    pub fn cache_dir(&self) -> Option<&PathBuf> {
        self.cache_dir.as_ref()
    }

    pub fn element(&self, a: i64, b: i64) -> RingElement {
        self.field.element(a, b)
    }

    pub fn int(&self, a: i64) -> RingElement {
        self.field.int(a)
    }

    /// Totally positive generator of the unique prime ideal above 2, when
    /// 2 is inert or ramified.
    pub fn prime_above_two(&self) -> Option<RingElement> {
        let fac = self.factor(&self.int(2)).ok()?;
        if fac.factors.len() == 1 {
            Some(fac.factors[0].0.clone())
        } else {
            None
        }
    }

    pub(crate) fn group_cache(&self) -> &RwLock<HashMap<RingElement, Arc<UnitGroupStructure>>> {
        &self.groups
    }

    /// Rational integer value when `x` lies in `Z`, as `i64`.
    pub fn rational_value(x: &RingElement) -> Option<i64> {
        if x.is_rational() {
            x.a().to_i64()
        } else {
            None
        }
    }
}
