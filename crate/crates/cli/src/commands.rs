//! Subcommand implementations. Each returns a JSON record and a plain-text
//! rendering; `main` picks one according to `--json`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use hmf_theta::analytic::{euler_partial, partial_l};
use hmf_theta::basis::{basis, BasisReport};
use hmf_theta::field::{BoxBound, FieldContext, RingElement};
use hmf_theta::qexp::{coeff_at_ideal, is_proportional, op_h, op_k, op_t_p2, op_u, op_v, theta_chi_t, FourierExpansion};
use hmf_theta::residue::characters_trivial_on_units;
use hmf_theta::{Error, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{parse_character, parse_element, parse_level, CommandConfig};
use crate::suites::{self, SuiteOptions};

/// What a command produced and the status the process should exit with.
#[derive(Clone, Debug)]
pub struct Output {
    pub json: Value,
    pub text: String,
    pub status: i32,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, status: 0 }
    }
}

fn pair(x: &RingElement) -> Value {
    json!([x.a().to_string(), x.b().to_string()])
}

fn level(ctx: &FieldContext, cfg: &CommandConfig) -> Result<RingElement> {
    let s = cfg.level.as_deref().ok_or_else(|| Error::Parse("--level is required".into()))?;
    parse_level(ctx, s)
}

fn read_expansion(ctx: &Arc<FieldContext>, path: &Path) -> Result<FourierExpansion> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    FourierExpansion::from_json(ctx, &v)
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Leading coefficients in key order, for text output.
fn preview(f: &FourierExpansion, n: usize) -> String {
    let mut lines: Vec<String> = f.support().take(n).map(|(xi, a)| format!("  a({xi}) = {a}")).collect();
    if f.nonzero_count() > n {
        lines.push(format!("  ... {} nonzero coefficients in total", f.nonzero_count()));
    }
    lines.join("\n")
}

pub fn field(cfg: &CommandConfig) -> Result<Output> {
    let ctx = cfg.field()?;
    let u = ctx.fundamental_unit();
    let json = json!({
        "d": ctx.d(),
        "discriminant": ctx.discriminant(),
        "delta": pair(ctx.delta()),
        "fundamental_unit": pair(u),
        "fundamental_unit_norm": u.norm().to_string(),
        "prime_above_two": ctx.prime_above_two().as_ref().map(pair),
        "catalog": true,
    });
    let text = format!(
        "Q(√{d}): D = {D}, δ = {delta}, fundamental unit {u} of norm {n}, prime above 2: {q}",
        d = ctx.d(),
        D = ctx.discriminant(),
        delta = ctx.delta(),
        n = u.norm(),
        q = ctx.prime_above_two().map_or("none (2 splits)".to_string(), |q| q.to_string()),
    );
    Ok(Output::ok(json, text))
}

pub fn unit_group(cfg: &CommandConfig) -> Result<Output> {
    let ctx = cfg.field()?;
    let c = level(&ctx, cfg)?;
    let g = ctx.unit_group(&c)?;
    let mut json = g.to_json();
    json["invariants"] = json!(g.invariant_multiset());
    json["generated_by_units"] = json!(g.generated_by_units());
    let gens: Vec<String> = g.generators().iter().map(|x| x.to_string()).collect();
    let text = format!(
        "(R/({c}))ˣ: order {}, cyclic factors {:?} generated by [{}], unit image of order {}{}",
        g.order(),
        g.orders(),
        gens.join(", "),
        g.unit_image_order(),
        if g.generated_by_units() { " (generated by units)" } else { "" }
    );
    Ok(Output::ok(json, text))
}

pub fn characters(cfg: &CommandConfig, order: Option<u64>) -> Result<Output> {
    let ctx = cfg.field()?;
    let c = level(&ctx, cfg)?;
    let chars = characters_trivial_on_units(&ctx, &c, order)?;
    let mut rows = Vec::new();
    let mut lines = vec![format!("{} characters mod {c} trivial on units", chars.len())];
    for chi in &chars {
        let r = chi.conductor()?;
        let mut v = chi.to_json();
        v["conductor"] = pair(&r);
        rows.push(v);
        lines.push(format!("  exponents {:?}, order {}, conductor {r}", chi.exponents(), chi.order()));
    }
    Ok(Output::ok(json!({ "level": pair(&c), "characters": rows }), lines.join("\n")))
}

fn basis_text(r: &BasisReport) -> String {
    let mut lines = vec![format!(
        "dim M({}, ψ) = {} (certificate: {:?})",
        r.level,
        r.dimension(),
        r.certificate
    )];
    for (i, (p, piv)) in r.pairs.iter().zip(&r.pivots).enumerate() {
        lines.push(format!(
            "  [{i}] χ mod {} (order {}), t = {}, pivot {}",
            p.chi.modulus(),
            p.chi.order(),
            p.t,
            piv
        ));
    }
    lines.join("\n")
}

pub fn basis_cmd(cfg: &CommandConfig) -> Result<Output> {
    let ctx = cfg.field()?;
    let c = level(&ctx, cfg)?;
    if !ctx.is_nonsplit(&c)? {
        return Err(Error::Hypothesis(format!(
            "level {c} is divisible by a split prime; the theta basis theorem assumes every prime dividing the level is inert or ramified"
        )));
    }
    let psi = parse_character(&ctx, cfg.character.as_deref().unwrap_or("trivial"), Some(&c))?;
    let bound = match cfg.box_bound() {
        Some(b) => b,
        None => suites::auto_box(&ctx, &c, &psi, 30.0)?,
    };
    let r = basis(&ctx, &c, &psi, bound)?;
    let mut json = r.to_json();
    json["box"] = json!([bound.x1, bound.x2]);
    Ok(Output::ok(json, basis_text(&r)))
}

pub fn theta(cfg: &CommandConfig, chi: &str, t: &str, out: Option<&Path>) -> Result<Output> {
    let ctx = cfg.field()?;
    let modulus = match &cfg.level {
        Some(l) => Some(parse_level(&ctx, l)?),
        None => None,
    };
    let chi = parse_character(&ctx, chi, modulus.as_ref())?;
    let t = parse_element(&ctx, t)?;
    let bound = cfg.box_bound().unwrap_or(BoxBound::square(30.0));
    let f = theta_chi_t(&ctx, &chi, &t, bound)?;
    let json = f.to_json();
    if let Some(path) = out {
        write_json(path, &json)?;
    }
    let text = format!(
        "θ_(χ,{t}) on box ({}, {}), level {}:\n{}",
        bound.x1,
        bound.x2,
        f.level().map_or("?".into(), |c| c.to_string()),
        preview(&f, 12)
    );
    Ok(Output::ok(json, text))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeOp {
    T,
    U,
    V,
    K,
    H,
}

impl HeckeOp {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" => Ok(HeckeOp::T),
            "u" => Ok(HeckeOp::U),
            "v" => Ok(HeckeOp::V),
            "k" => Ok(HeckeOp::K),
            "h" => Ok(HeckeOp::H),
            other => Err(Error::Parse(format!("unknown operator '{other}'; expected t, u, v, k or h"))),
        }
    }
}

pub fn hecke(cfg: &CommandConfig, op: HeckeOp, p: Option<&str>, on: &Path, out: Option<&Path>) -> Result<Output> {
    let ctx = cfg.field()?;
    let f = read_expansion(&ctx, on)?;
    let p = match (op, p) {
        (HeckeOp::H, _) => None,
        (_, Some(s)) => Some(parse_element(&ctx, s)?),
        (_, None) => return Err(Error::Parse("--p is required for this operator".into())),
    };
    let g = match op {
        HeckeOp::T => {
            let c = match &cfg.level {
                Some(l) => parse_level(&ctx, l)?,
                None => f.level().cloned().ok_or_else(|| Error::Parse("--level is required".into()))?,
            };
            let psi = match &cfg.character {
                Some(s) => parse_character(&ctx, s, Some(&c))?,
                None => f.character().cloned().ok_or_else(|| Error::Parse("--char is required".into()))?,
            };
            op_t_p2(&f, p.as_ref().expect("p given"), &psi, &c)?
        }
        HeckeOp::U => op_u(&f, p.as_ref().expect("p given"))?,
        HeckeOp::V => op_v(&f, p.as_ref().expect("p given"))?,
        HeckeOp::K => op_k(&f, p.as_ref().expect("p given"))?,
        HeckeOp::H => op_h(&f),
    };
    let ratio = is_proportional(&g, &f);
    let json = json!({
        "operator": format!("{op:?}"),
        "p": p.as_ref().map(pair),
        "expansion": g.to_json(),
        "proportionality": ratio.as_ref().map(|r| r.to_json()),
    });
    if let Some(path) = out {
        write_json(path, &g.to_json())?;
    }
    let text = format!(
        "{op:?}{} applied on box ({:.3}, {:.3}); ratio to input: {}\n{}",
        p.as_ref().map_or(String::new(), |p| format!("({p})")),
        g.bound().x1,
        g.bound().x2,
        ratio.map_or("not proportional".to_string(), |r| r.to_string()),
        preview(&g, 8)
    );
    Ok(Output::ok(json, text))
}

pub fn lseries(cfg: &CommandConfig, form: &Path, s: f64, bound: u64, euler_bound: Option<u64>) -> Result<Output> {
    let ctx = cfg.field()?;
    let f = read_expansion(&ctx, form)?;
    let s = Complex64::new(s, 0.0);
    let a1 = coeff_at_ideal(&f, &ctx.int(1))?.to_complex();
    if a1.norm() < 1e-12 {
        return Err(Error::Hypothesis("a(1) = 0, cannot normalise the L-series".into()));
    }
    let partial = partial_l(&f, s, bound)? / a1;
    let eb = euler_bound.unwrap_or((bound as f64).sqrt().floor() as u64);
    let psi = match &cfg.character {
        Some(spec) => Some(parse_character(&ctx, spec, None)?),
        None => f.character().cloned(),
    };
    let euler = match &psi {
        Some(psi) => Some(euler_partial(&ctx, psi, s, eb)?),
        None => None,
    };
    let json = json!({
        "s": s.re,
        "bound": bound,
        "a1": [a1.re, a1.im],
        "partial": [partial.re, partial.im],
        "euler_bound": eb,
        "euler": euler.map(|e| [e.re, e.im]),
        "difference": euler.map(|e| (e - partial).norm()),
    });
    let text = match euler {
        Some(e) => format!(
            "partial L(f, {}) / a(1) over N ≤ {bound}: {partial:.10}\nEuler product of L(2s, ψ) over N(p) ≤ {eb}: {e:.10}\ndifference {:.3e}",
            s.re,
            (e - partial).norm()
        ),
        None => format!("partial L(f, {}) / a(1) over N ≤ {bound}: {partial:.10}", s.re),
    };
    Ok(Output::ok(json, text))
}

pub fn verify(cfg: &CommandConfig, suite: &str, opts: &SuiteOptions) -> Result<Output> {
    let ctx = cfg.field()?;
    let names: Vec<&str> = if suite == "all" { suites::SUITES.to_vec() } else { vec![suite] };
    let mut outcomes = Vec::new();
    for name in names {
        outcomes.push(suites::run(&ctx, name, opts)?);
    }
    let pass = outcomes.iter().all(|o| o.pass);
    let mut lines = Vec::new();
    for o in &outcomes {
        lines.push(format!("[{}] {}", if o.pass { "pass" } else { "FAIL" }, o.name));
        lines.extend(o.lines.iter().map(|l| format!("  {l}")));
    }
    if let Some(first) = outcomes.iter().find_map(|o| o.failure.clone()) {
        lines.push(format!("first failure: {first}"));
    }
    let json = json!({ "pass": pass, "suites": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>() });
    Ok(Output {
        json,
        text: lines.join("\n"),
        status: if pass { 0 } else { 1 },
    })
}
