//! Parsing of level, character, element and box specifications.

use std::path::PathBuf;
use std::sync::Arc;

use hmf_theta::basis::phi_character;
use hmf_theta::field::{make_field_with_cache, BoxBound, FieldContext, RingElement};
use hmf_theta::residue::DirichletCharacter;
use hmf_theta::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

/// Environment variable naming the unit-group cache directory.
pub const CACHE_ENV: &str = "HMF_CACHE_DIR";

/// Options shared by every subcommand, kept as the raw strings the user gave.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandConfig {
    pub d: i64,
    pub level: Option<String>,
    pub character: Option<String>,
    pub bound: Option<[f64; 2]>,
    pub precision: u32,
    pub seed: u64,
    pub json: bool,
}

impl Default for CommandConfig {
    fn default() -> Self {
        CommandConfig {
            d: 2,
            level: None,
            character: None,
            bound: None,
            precision: 12,
            seed: 1,
            json: false,
        }
    }
}

impl CommandConfig {
    /// Rejects malformed specs before any computation starts.
    pub fn validate(&self, ctx: &Arc<FieldContext>) -> Result<()> {
        let level = match &self.level {
            Some(l) => Some(parse_level(ctx, l)?),
            None => None,
        };
        if let Some(c) = &self.character {
            parse_character(ctx, c, level.as_ref())?;
        }
        if let Some([x1, x2]) = self.bound {
            if !(x1 > 0.0 && x2 > 0.0 && x1.is_finite() && x2.is_finite()) {
                return Err(Error::Parse(format!("box ({x1}, {x2}) must be positive")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn field(&self) -> Result<Arc<FieldContext>> {
        make_field_with_cache(self.d, std::env::var_os(CACHE_ENV).map(PathBuf::from))
    }

    pub fn box_bound(&self) -> Option<BoxBound> {
        self.bound.map(|[a, b]| BoxBound::new(a, b))
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

/// One signed term: an integer, a symbol, or an integer followed by a symbol.
fn parse_term(ctx: &FieldContext, term: &str) -> Result<RingElement> {
    let f = ctx.field();
    let symbols: [(&str, Option<RingElement>); 5] = [
        ("sqrt", Some(f.sqrt_element())),
        ("√", Some(f.sqrt_element())),
        ("s", Some(f.sqrt_element())),
        ("w", Some(f.omega())),
        ("q", if ctx.d() == 2 { Some(f.sqrt_element()) } else { None }),
    ];
    for (name, value) in symbols {
        if let Some(pos) = term.find(name) {
            let tail = term[pos + name.len()..].trim_start_matches(|ch: char| ch.is_ascii_digit() || ch == '(' || ch == ')');
            if !tail.is_empty() {
                return Err(Error::Parse(format!("unexpected '{tail}' in '{term}'")));
            }
            let value = value.ok_or_else(|| Error::Parse(format!("'q' means √2 and needs d = 2, got d = {}", ctx.d())))?;
            let coeff = match term[..pos].trim().trim_end_matches('*') {
                "" => BigInt::from(1),
                c => parse_int(c)?,
            };
            return Ok(value.scale(&coeff));
        }
    }
    Ok(f.int(parse_int(term)?))
}

/// An element given as coordinates `a,b` in the integral basis or as an
/// expression such as `3+q`, `2-√2`, `1+2w` or `-5`.
pub fn parse_element(ctx: &FieldContext, s: &str) -> Result<RingElement> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    if let Some((a, b)) = s.split_once(',') {
        return Ok(ctx.field().element(parse_int(a)?, parse_int(b)?));
    }
    let mut total = ctx.field().zero();
    let mut start = 0;
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    for (i, &(pos, ch)) in bytes.iter().enumerate() {
        if i > 0 && (ch == '+' || ch == '-') {
            total = &total + &signed_term(ctx, &s[start..pos])?;
            start = pos;
        }
    }
    Ok(&total + &signed_term(ctx, &s[start..])?)
}

fn signed_term(ctx: &FieldContext, t: &str) -> Result<RingElement> {
    if let Some(rest) = t.strip_prefix('-') {
        Ok(-&parse_term(ctx, rest)?)
    } else {
        parse_term(ctx, t.strip_prefix('+').unwrap_or(t))
    }
}

/// `q^n` for the `n`-th power of the prime above 2, otherwise an element.
pub fn parse_level(ctx: &FieldContext, s: &str) -> Result<RingElement> {
    if let Some(n) = s.trim().strip_prefix("q^") {
        let n: u32 = n.parse().map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?;
        return ctx.prime_power_above_two(n);
    }
    let x = parse_element(ctx, s)?;
    if x.is_zero() {
        return Err(Error::Parse("the level must be nonzero".into()));
    }
    Ok(x)
}

/// `trivial`, `phi`, or exponents `e1,e2,…` on the generators of `(R/c)ˣ`.
pub fn parse_character(ctx: &Arc<FieldContext>, s: &str, level: Option<&RingElement>) -> Result<DirichletCharacter> {
    match s.trim() {
        "trivial" | "1" => DirichletCharacter::trivial(ctx, level.unwrap_or(&ctx.int(1))),
        "phi" => phi_character(ctx),
        spec => {
            let level = level.ok_or_else(|| Error::Parse("exponent characters need --level".into()))?;
            let exps: Vec<u64> = spec
                .split(',')
                .map(|e| e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent '{e}'"))))
                .collect::<Result<_>>()?;
            DirichletCharacter::new(ctx.clone(), ctx.unit_group(level)?, exps)
        }
    }
}

/// `X` for a square box or `X1,X2`.
pub fn parse_box(s: &str) -> Result<[f64; 2]> {
    let parse = |x: &str| -> Result<f64> {
        x.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0 && v.is_finite())
            .ok_or_else(|| Error::Parse(format!("bad box '{s}'")))
    };
    match s.split_once(',') {
        Some((a, b)) => Ok([parse(a)?, parse(b)?]),
        None => {
            let x = parse(s)?;
            Ok([x, x])
        }
    }
}
