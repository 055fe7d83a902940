//! The sets `Ω(c, ψ)`, theta bases of `M(c, ψ)` with exact independence
//! certificates, and the dimension tables over `ℚ(√2)`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::field::{BoxBound, FieldContext, RingElement};
use crate::linalg::rank_with_pivots;
use crate::qexp::{theta_chi_t, FourierExpansion};
use crate::residue::{characters_trivial_on_units, epsilon_of, primitive_characters, quadratic_symbol, DirichletCharacter};

/// A pair `(χ, t)`: primitive `χ` trivial on units and canonical `t ∈ R⁺/U²`.
#[derive(Clone, Debug)]
pub struct OmegaPair {
    pub chi: DirichletCharacter,
    pub t: RingElement,
}

impl OmegaPair {
    pub fn to_json(&self) -> Value {
        json!({
            "chi": self.chi.to_json(),
            "t": [self.t.a().to_string(), self.t.b().to_string()],
        })
    }
}

/// How linear independence was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `a_j(t_i) = 0` for `j > i` and `a_i(t_i) ≠ 0`.
    Triangular,
    /// Full rank found by exact elimination.
    Elimination,
}

#[derive(Clone, Debug)]
pub struct BasisReport {
    pub level: RingElement,
    pub character: DirichletCharacter,
    pub pairs: Vec<OmegaPair>,
    pub expansions: Vec<FourierExpansion>,
    pub pivots: Vec<RingElement>,
    pub certificate: Certificate,
}

impl BasisReport {
    pub fn dimension(&self) -> usize {
        self.pairs.len()
    }

    pub fn to_json(&self) -> Value {
        let pair = |x: &RingElement| json!([x.a().to_string(), x.b().to_string()]);
        json!({
            "level": pair(&self.level),
            "character": self.character.to_json(),
            "dimension": self.dimension(),
            "pairs": self.pairs.iter().map(OmegaPair::to_json).collect::<Vec<_>>(),
            "pivots": self.pivots.iter().map(pair).collect::<Vec<_>>(),
            "certificate": match self.certificate {
                Certificate::Triangular => "triangular",
                Certificate::Elimination => "elimination",
            },
            "expansion_refs": self
                .pairs
                .iter()
                .enumerate()
                .map(|(i, p)| format!("theta[{i}]: chi mod {}, t = {}", p.chi.modulus(), p.t))
                .collect::<Vec<_>>(),
        })
    }
}

/// Number of prime factors of `t` counted with multiplicity.
fn prime_count(ctx: &FieldContext, t: &RingElement) -> Result<u32> {
    Ok(ctx.factor(t)?.factors.iter().map(|(_, e)| e).sum())
}

fn four_r2(r: &RingElement) -> RingElement {
    (r * r).scale(&BigInt::from(4))
}

/// `Ω(c, ψ)`: pairs with `4r(χ)²t | c` and `ψ = χ·ε_t`, ordered by the
/// number of prime factors of `t`, then `t`, then the conductor.
pub fn omega_set(ctx: &Arc<FieldContext>, c: &RingElement, psi: &DirichletCharacter) -> Result<Vec<OmegaPair>> {
    let four = ctx.int(4);
    if !four.divides(c) {
        return Err(Error::Level(format!("4 does not divide {c}")));
    }
    let mut eps: HashMap<RingElement, DirichletCharacter> = HashMap::new();
    let mut out = Vec::new();
    for r in ctx.divisors_up_to_units(c)? {
        let Some(rest) = c.exact_div(&four_r2(&r)) else {
            continue;
        };
        let chis = primitive_characters(ctx, &r)?;
        if chis.is_empty() {
            continue;
        }
        for t in ctx.divisors_up_to_units(&rest)? {
            let e = match eps.get(&t) {
                Some(e) => e.clone(),
                None => {
                    let e = epsilon_of(ctx, &t)?;
                    eps.insert(t.clone(), e.clone());
                    e
                }
            };
            for chi in &chis {
                if psi.equals(&chi.mul(&e)?)? {
                    out.push(OmegaPair {
                        chi: chi.clone(),
                        t: t.clone(),
                    });
                }
            }
        }
    }
    let mut keyed: Vec<(u32, OmegaPair)> = out.into_iter().map(|p| Ok((prime_count(ctx, &p.t)?, p))).collect::<Result<_>>()?;
    keyed.sort_by(|(na, a), (nb, b)| {
        na.cmp(nb)
            .then_with(|| a.t.norm().abs().cmp(&b.t.norm().abs()))
            .then_with(|| a.t.cmp(&b.t))
            .then_with(|| a.chi.modulus().norm().abs().cmp(&b.chi.modulus().norm().abs()))
    });
    let pairs: Vec<OmegaPair> = keyed.into_iter().map(|(_, p)| p).collect();
    for p in &pairs {
        verify_pair(ctx, c, psi, p)?;
    }
    Ok(pairs)
}

/// Re-checks the three defining conditions of `Ω(c, ψ)` for one pair.
fn verify_pair(ctx: &Arc<FieldContext>, c: &RingElement, psi: &DirichletCharacter, p: &OmegaPair) -> Result<()> {
    let r = p.chi.conductor()?;
    let ok_level = (&four_r2(&r) * &p.t).divides(c);
    let ok_units = [ctx.int(-1), ctx.fundamental_unit().clone()]
        .iter()
        .all(|u| p.chi.value(u).is_none_or(|v| v.is_one()));
    let ok_char = psi.equals(&p.chi.mul(&epsilon_of(ctx, &p.t)?)?)?;
    let ok_t = ctx.ideal_generator(&p.t)? == p.t;
    if ok_level && ok_units && ok_char && ok_t {
        Ok(())
    } else {
        Err(Error::Membership(format!(
            "(χ mod {}, t = {}) is not in Ω({c}, ψ)",
            p.chi.modulus(),
            p.t
        )))
    }
}

/// The theta basis of `M(c, ψ)` on `bound` with an exact independence certificate.
pub fn basis(ctx: &Arc<FieldContext>, c: &RingElement, psi: &DirichletCharacter, bound: BoxBound) -> Result<BasisReport> {
    if !ctx.is_nonsplit(c)? {
        return Err(Error::Hypothesis(format!("{c} is divisible by a split prime")));
    }
    let pairs = omega_set(ctx, c, psi)?;
    for p in &pairs {
        if !bound.contains(&p.t) {
            return Err(Error::BoxTooSmall(format!("leading element {} lies outside the box", p.t)));
        }
    }
    let expansions: Vec<FourierExpansion> = pairs
        .par_iter()
        .map(|p| theta_chi_t(ctx, &p.chi, &p.t, bound))
        .collect::<Result<_>>()?;
    let (pivots, certificate) = certify(&pairs, &expansions)?;
    Ok(BasisReport {
        level: ctx.ideal_generator(c)?,
        character: psi.clone(),
        pairs,
        expansions,
        pivots,
        certificate,
    })
}

fn certify(pairs: &[OmegaPair], expansions: &[FourierExpansion]) -> Result<(Vec<RingElement>, Certificate)> {
    let n = pairs.len();
    let mut triangular = true;
    'rows: for (i, p) in pairs.iter().enumerate() {
        for (j, f) in expansions.iter().enumerate().skip(i) {
            let a = f.coeff(&p.t)?;
            if (j == i && a.is_zero()) || (j > i && !a.is_zero()) {
                triangular = false;
                break 'rows;
            }
        }
    }
    if triangular {
        return Ok((pairs.iter().map(|p| p.t.clone()).collect(), Certificate::Triangular));
    }
    let keys: std::collections::BTreeSet<RingElement> = expansions.iter().flat_map(|f| f.support().map(|(k, _)| k.clone())).collect();
    let keys: Vec<RingElement> = keys.into_iter().collect();
    let rows: Vec<Vec<Cyclotomic>> = keys
        .iter()
        .map(|k| expansions.iter().map(|f| f.coeff(k)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let (rank, piv) = rank_with_pivots(&rows);
    if rank < n {
        return Err(Error::Degenerate(format!(
            "theta series span only {rank} of {n} dimensions on the box"
        )));
    }
    let mut pivots = vec![None; n];
    for (row, col) in piv {
        pivots[col] = Some(keys[row].clone());
    }
    Ok((
        pivots.into_iter().map(|p| p.expect("full rank")).collect(),
        Certificate::Elimination,
    ))
}

/// The quadratic character `φ` of conductor `q⁵` over `ℚ(√2)`, trivial on units.
pub fn phi_character(ctx: &Arc<FieldContext>) -> Result<DirichletCharacter> {
    if ctx.d() != 2 {
        return Err(Error::Catalog(ctx.d()));
    }
    let q5 = ctx.prime_power_above_two(5)?;
    characters_trivial_on_units(ctx, &q5, Some(2))?
        .into_iter()
        .find(|c| !c.is_trivial())
        .ok_or_else(|| Error::Character("no nontrivial quadratic character mod q⁵".into()))
}

/// Closed-form dimensions of `M(qⁿ, 𝟏)` and `M(qⁿ, φ)` over `ℚ(√2)`.
pub fn sqrt2_dimension_formula(n: u32) -> (usize, usize) {
    let n = n as i64;
    let fl = |x: i64| x.div_euclid(2).max(0) as usize;
    (fl(n - 2) + fl(n - 13), fl(n - 3) + fl(n - 12))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub n: u32,
    pub trivial: usize,
    pub phi: usize,
}

/// `|Ω(qⁿ, ψ)|` for `ψ ∈ {𝟏, φ}` and `4 ≤ n ≤ n_max`, checked against the
/// closed forms.
pub fn sqrt2_dimension_table(ctx: &Arc<FieldContext>, n_max: u32) -> Result<Vec<DimensionRow>> {
    let phi = phi_character(ctx)?;
    let one = DirichletCharacter::trivial(ctx, &ctx.int(1))?;
    let mut rows = Vec::new();
    for n in 4..=n_max {
        let c = ctx.prime_power_above_two(n)?;
        let trivial = omega_set(ctx, &c, &one)?.len();
        let twisted = omega_set(ctx, &c, &phi)?.len();
        let (f1, f2) = sqrt2_dimension_formula(n);
        if trivial != f1 {
            return Err(Error::DimensionMismatch {
                n,
                formula: f1,
                computed: trivial,
            });
        }
        if twisted != f2 {
            return Err(Error::DimensionMismatch {
                n,
                formula: f2,
                computed: twisted,
            });
        }
        rows.push(DimensionRow { n, trivial, phi: twisted });
    }
    Ok(rows)
}

/// Predicted `T_{p²}` eigenvalue `ψ*(p)·(t/p)·(1 + N(p)⁻¹)` of `θ_{χ,t}` for
/// an odd prime `p` not dividing the level `c`.
pub fn hecke_eigenvalue(
    ctx: &Arc<FieldContext>,
    psi: &DirichletCharacter,
    t: &RingElement,
    p: &RingElement,
    c: &RingElement,
) -> Result<Cyclotomic> {
    if !ctx.is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if p.divides(c) {
        return Err(Error::Hypothesis(format!("{p} divides the level {c}")));
    }
    let chi = psi
        .ideal_value(p)?
        .ok_or_else(|| Error::Hypothesis(format!("{p} divides the conductor of ψ")))?;
    let symbol = quadratic_symbol(ctx, t, p)?;
    let n = p.norm().abs();
    let factor = BigRational::new(&n + BigInt::from(1), n);
    Ok(chi.to_cyclotomic().scale(&factor).scale(&BigRational::from_integer(symbol.into())))
}

/// `½θ_{ψ,1}` at level `4r(ψ)²`, normalised so that `a(1) = 1`.
pub fn newform_candidate(ctx: &Arc<FieldContext>, psi: &DirichletCharacter, bound: BoxBound) -> Result<FourierExpansion> {
    let f = theta_chi_t(ctx, psi, &ctx.int(1), bound)?.scale(&Cyclotomic::from_ratio(1, 2));
    if f.coeff(&ctx.int(1))? != Cyclotomic::one() {
        return Err(Error::Degenerate("normalised theta series has a(1) ≠ 1".into()));
    }
    Ok(f)
}
