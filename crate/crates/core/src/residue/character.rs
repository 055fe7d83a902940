use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::Signed;
use serde_json::{json, Value};

use super::group::UnitGroupStructure;
use super::ring::ResidueRing;
use crate::cyclotomic::RootOfUnity;
use crate::error::{Error, Result};
use crate::field::{FieldContext, RingElement};

/// A character of `(R/m)ˣ` trivial on the image of the units of `R`,
/// stored by exponents `eᵢ` with `χ(gᵢ) = exp(2πi·eᵢ/nᵢ)`.
#[derive(Clone)]
pub struct DirichletCharacter {
    ctx: Arc<FieldContext>,
    group: Arc<UnitGroupStructure>,
    exps: Vec<u64>,
    conductor: OnceLock<RingElement>,
    primitive: OnceLock<Arc<DirichletCharacter>>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus().to_string())
            .field("orders", &self.group.orders())
            .field("exps", &self.exps)
            .finish()
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "trivial mod {}", self.modulus())
        } else {
            write!(f, "chi mod {} exps {:?}", self.modulus(), self.exps)
        }
    }
}

impl DirichletCharacter {
    /// Validates ranges and triviality on units.
    pub fn new(ctx: Arc<FieldContext>, group: Arc<UnitGroupStructure>, exps: Vec<u64>) -> Result<Self> {
        if exps.len() != group.orders().len() || exps.iter().zip(group.orders()).any(|(e, n)| e >= n) {
            return Err(Error::Character(format!(
                "exponents {exps:?} do not fit orders {:?}",
                group.orders()
            )));
        }
        let chi = DirichletCharacter {
            ctx,
            group,
            exps,
            conductor: OnceLock::new(),
            primitive: OnceLock::new(),
        };
        if !chi.trivial_on_units() {
            return Err(Error::Character(format!("{chi} is not trivial on the units")));
        }
        Ok(chi)
    }

    pub fn trivial(ctx: &Arc<FieldContext>, m: &RingElement) -> Result<Self> {
        let group = ctx.unit_group(m)?;
        let n = group.orders().len();
        DirichletCharacter::new(ctx.clone(), group, vec![0; n])
    }

    /// The character taking the given values on the group generators.
    pub fn from_values(ctx: Arc<FieldContext>, group: Arc<UnitGroupStructure>, values: &[RootOfUnity]) -> Result<Self> {
        let mut exps = Vec::with_capacity(values.len());
        for (v, &n) in values.iter().zip(group.orders()) {
            if n % v.order() != 0 {
                return Err(Error::Character(format!(
                    "value of order {} on a generator of order {n}",
                    v.order()
                )));
            }
            exps.push(v.exponent() * (n / v.order()));
        }
        DirichletCharacter::new(ctx, group, exps)
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn group(&self) -> &Arc<UnitGroupStructure> {
        &self.group
    }

    pub fn modulus(&self) -> &RingElement {
        self.group.modulus()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.exps
            .iter()
            .zip(self.group.orders())
            .fold(1u64, |l, (&e, &n)| l.lcm(&(n / e.gcd(&n))))
    }

    fn value_of_log(&self, v: &[u64]) -> RootOfUnity {
        let l = self.group.exponent();
        let mut k = 0u128;
        for ((&e, &x), &n) in self.exps.iter().zip(v).zip(self.group.orders()) {
            k += e as u128 * x as u128 * (l / n) as u128;
        }
        RootOfUnity::new((k % l as u128) as u64, l)
    }

    fn trivial_on_units(&self) -> bool {
        self.group.unit_logs().iter().all(|u| self.value_of_log(u).is_one())
    }

    /// `χ(x)`, or `None` when `x` is not coprime to the modulus.
    pub fn value(&self, x: &RingElement) -> Option<RootOfUnity> {
        self.group.log(x).map(|v| self.value_of_log(&v))
    }

    /// The smallest divisor of the modulus through which the character factors.
    pub fn conductor(&self) -> Result<RingElement> {
        if let Some(c) = self.conductor.get() {
            return Ok(c.clone());
        }
        let c = self.compute_conductor()?;
        Ok(self.conductor.get_or_init(|| c).clone())
    }

    fn compute_conductor(&self) -> Result<RingElement> {
        if self.is_trivial() {
            return Ok(self.ctx.int(1));
        }
        let m = self.modulus().clone();
        let mut divs = self.ctx.divisors_up_to_units(&m)?;
        divs.sort_by(|a, b| a.norm().abs().cmp(&b.norm().abs()).then_with(|| a.cmp(b)));
        let one = self.ctx.int(1);
        for d in divs {
            let q = m.exact_div(&d).expect("divisor divides the modulus");
            let quotient = ResidueRing::new(&q, &[]);
            // kernel of (R/m)ˣ → (R/d)ˣ is {1 + d·y}
            let factors_through = quotient.elements().all(|y| {
                let x = &one + &(&d * &quotient.lift(y));
                match self.value(&x) {
                    Some(v) => v.is_one(),
                    None => true,
                }
            });
            if factors_through {
                return Ok(d);
            }
        }
        unreachable!("the modulus itself always qualifies")
    }

    /// An element `≡ g (mod r)` that is coprime to the modulus.
    fn lift_coprime(&self, g: &RingElement, r: &RingElement) -> RingElement {
        let big = ResidueRing::new(self.modulus(), &[]);
        for y in big.elements() {
            let x = g + &(r * &big.lift(y));
            if self.group.is_unit(&x) {
                return x;
            }
        }
        unreachable!("a class coprime to r lifts to a class coprime to m")
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Result<DirichletCharacter> {
        if let Some(p) = self.primitive.get() {
            return Ok((**p).clone());
        }
        let r = self.conductor()?;
        let p = if self.ctx.same_ideal(&r, self.modulus()) {
            let mut c = self.clone();
            c.primitive = OnceLock::new();
            c
        } else {
            let gr = self.ctx.unit_group(&r)?;
            let values: Vec<RootOfUnity> = gr
                .generators()
                .iter()
                .map(|g| self.value(&self.lift_coprime(g, &r)).expect("lift is coprime"))
                .collect();
            DirichletCharacter::from_values(self.ctx.clone(), gr, &values)?
        };
        let _ = p.conductor.set(r);
        Ok((**self.primitive.get_or_init(|| Arc::new(p))).clone())
    }

    /// The character modulo a multiple `big` of the conductor.
    pub fn induce(&self, big: &RingElement) -> Result<DirichletCharacter> {
        let r = self.conductor()?;
        if !r.divides(big) {
            return Err(Error::Character(format!("conductor {r} does not divide {big}")));
        }
        let prim = self.primitive()?;
        let g = self.ctx.unit_group(big)?;
        let values: Vec<RootOfUnity> = g
            .generators()
            .iter()
            .map(|x| prim.value(x).expect("coprime to the modulus implies coprime to the conductor"))
            .collect();
        DirichletCharacter::from_values(self.ctx.clone(), g, &values)
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self.exps.iter().zip(self.group.orders()).map(|(&e, &n)| (n - e) % n).collect();
        DirichletCharacter {
            ctx: self.ctx.clone(),
            group: self.group.clone(),
            exps,
            conductor: self.conductor.clone(),
            primitive: OnceLock::new(),
        }
    }

    /// Product, computed modulo the lcm of the two conductors.
    pub fn mul(&self, other: &DirichletCharacter) -> Result<DirichletCharacter> {
        let l = self.ctx.ideal_lcm(&self.conductor()?, &other.conductor()?)?;
        let a = self.induce(&l)?;
        let b = other.induce(&l)?;
        let exps = a
            .exps
            .iter()
            .zip(&b.exps)
            .zip(a.group.orders())
            .map(|((x, y), n)| (x + y) % n)
            .collect();
        DirichletCharacter::new(self.ctx.clone(), a.group.clone(), exps)
    }

    /// Equality of the underlying primitive characters.
    pub fn equals(&self, other: &DirichletCharacter) -> Result<bool> {
        let r1 = self.conductor()?;
        let r2 = other.conductor()?;
        if r1 != r2 {
            return Ok(false);
        }
        let p1 = self.primitive()?;
        let p2 = other.primitive()?;
        Ok(p1.group.generator_residues() == p2.group.generator_residues() && p1.exps == p2.exps)
    }

    /// `ψ*((x)) = conj χ(x)` on ideals coprime to the conductor, else `None` (zero).
    pub fn ideal_value(&self, x: &RingElement) -> Result<Option<RootOfUnity>> {
        let p = self.primitive()?;
        Ok(p.value(x).map(|v| v.conj()))
    }

    pub fn to_json(&self) -> Value {
        let pair = |x: &RingElement| json!([x.a().to_string(), x.b().to_string()]);
        json!({
            "d": self.ctx.d(),
            "modulus": pair(self.modulus()),
            "generators": self.group.generators().iter().map(pair).collect::<Vec<_>>(),
            "orders": self.group.orders(),
            "exponents": self.exps,
            "order": self.order(),
        })
    }

    pub fn from_json(ctx: &Arc<FieldContext>, v: &Value) -> Result<Self> {
        let m = parse_pair(ctx, &v["modulus"])?;
        let group = ctx.unit_group(&m)?;
        if let Some(gens) = v["generators"].as_array() {
            let given: Vec<RingElement> = gens.iter().map(|g| parse_pair(ctx, g)).collect::<Result<_>>()?;
            if given != group.generators() {
                return Err(Error::Parse("character generators differ from the unit-group generators".into()));
            }
        }
        let exps: Vec<u64> = v["exponents"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing exponents".into()))?
            .iter()
            .map(|e| e.as_u64().ok_or_else(|| Error::Parse("bad exponent".into())))
            .collect::<Result<_>>()?;
        DirichletCharacter::new(ctx.clone(), group, exps)
    }
}

pub(crate) fn parse_pair(ctx: &FieldContext, v: &Value) -> Result<RingElement> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected [a, b], got {v}")))?;
    let coord = |x: &Value| -> Result<num_bigint::BigInt> {
        match x {
            Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer {s}"))),
            Value::Number(n) => n.as_i64().map(Into::into).ok_or_else(|| Error::Parse(format!("bad integer {n}"))),
            _ => Err(Error::Parse(format!("bad integer {x}"))),
        }
    };
    Ok(ctx.field().element(coord(&arr[0])?, coord(&arr[1])?))
}

/// All characters mod `m` trivial on units, optionally of order dividing `order_divides`.
pub fn characters_trivial_on_units(
    ctx: &Arc<FieldContext>,
    m: &RingElement,
    order_divides: Option<u64>,
) -> Result<Vec<DirichletCharacter>> {
    let group = ctx.unit_group(m)?;
    let orders = group.orders().to_vec();
    let steps: Vec<u64> = orders
        .iter()
        .map(|&n| match order_divides {
            Some(k) => n / n.gcd(&k),
            None => 1,
        })
        .collect();
    let counts: Vec<u64> = orders.iter().zip(&steps).map(|(n, s)| n / s).collect();
    let total: u64 = counts.iter().product();
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let exps: Vec<u64> = counts
            .iter()
            .zip(&steps)
            .map(|(&k, &s)| {
                let e = (c % k) * s;
                c /= k;
                e
            })
            .collect();
        if let Ok(chi) = DirichletCharacter::new(ctx.clone(), group.clone(), exps) {
            out.push(chi);
        }
    }
    Ok(out)
}

/// Primitive characters trivial on units with conductor exactly `(r)`.
pub fn primitive_characters(ctx: &Arc<FieldContext>, r: &RingElement) -> Result<Vec<DirichletCharacter>> {
    let mut out = Vec::new();
    for chi in characters_trivial_on_units(ctx, r, None)? {
        if ctx.same_ideal(&chi.conductor()?, r) {
            out.push(chi);
        }
    }
    Ok(out)
}

pub fn char_mul(a: &DirichletCharacter, b: &DirichletCharacter) -> Result<DirichletCharacter> {
    a.mul(b)
}

pub fn char_conjugate(a: &DirichletCharacter) -> DirichletCharacter {
    a.conjugate()
}

pub fn char_equal(a: &DirichletCharacter, b: &DirichletCharacter) -> Result<bool> {
    a.equals(b)
}
