//! Named verification suites run by `hmf verify`.

use std::sync::Arc;

use hmf_theta::analytic::{
    balanced_point, eps_tilde, euler_partial, gauss_epsilon, h_garrett, h_ratio, h_w0, partial_l, random_gamma, theta_eval,
    verify_modularity, EvalConfig, UpperHalfPoint,
};
use hmf_theta::basis::{basis, hecke_eigenvalue, newform_candidate, omega_set, phi_character, sqrt2_dimension_table};
use hmf_theta::cyclotomic::Cyclotomic;
use hmf_theta::field::{BoxBound, FieldContext, RingElement};
use hmf_theta::qexp::{coeff_at_ideal, hecke_input_box, op_t_p2, op_t_p2_to, theta_chi_t};
use hmf_theta::residue::DirichletCharacter;
use hmf_theta::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const SUITES: [&str; 6] = ["unit-groups", "dimensions", "hecke-eigen", "modularity", "gauss-sum", "l-coeff"];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub n_max: u32,
    pub primes: Option<Vec<RingElement>>,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            n_max: 16,
            primes: None,
            samples: 20,
            tol: 1e-6,
            seed: 1,
        }
    }
}

/// Result of one suite: a verdict, human-readable lines and a JSON record.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: String,
    pub pass: bool,
    pub lines: Vec<String>,
    pub failure: Option<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.into(),
            pass: true,
            lines: Vec::new(),
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        if !ok && self.failure.is_none() {
            self.failure = Some(line.clone());
        }
        self.pass &= ok;
        self.lines.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    pub fn to_json(&self) -> Value {
        json!({ "suite": self.name, "pass": self.pass, "checks": self.lines, "first_failure": self.failure })
    }
}

pub fn run(ctx: &Arc<FieldContext>, name: &str, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let needs_sqrt2 = matches!(name, "unit-groups" | "dimensions" | "hecke-eigen" | "modularity" | "l-coeff");
    if needs_sqrt2 && ctx.d() != 2 {
        return Err(Error::Hypothesis(format!("suite {name} is defined over Q(√2) only")));
    }
    match name {
        "unit-groups" => unit_groups(ctx, opts),
        "dimensions" => dimensions(ctx, opts),
        "hecke-eigen" => hecke_eigen(ctx, opts),
        "modularity" => modularity(ctx, opts),
        "gauss-sum" => gauss_sum(ctx, opts),
        "l-coeff" => l_coeff(ctx),
        other => Err(Error::Parse(format!(
            "unknown suite '{other}'; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn q(ctx: &FieldContext, n: u32) -> Result<RingElement> {
    ctx.prime_power_above_two(n)
}

fn unit_groups(ctx: &Arc<FieldContext>, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("unit-groups");
    let one_q = ctx.element(1, 1);
    let three_4q = ctx.element(3, 4);
    for n in 1..=opts.n_max {
        let g = ctx.unit_group(&q(ctx, n)?)?;
        if n <= 4 {
            out.check(g.generated_by_units(), format!("n = {n}: generated by units"));
            continue;
        }
        let k = 1u64 << (n / 2);
        let l = 1u64 << ((n - 3) / 2);
        let mut inv = g.invariant_multiset();
        inv.sort_unstable();
        let mut want = vec![k, l, 2];
        want.sort_unstable();
        let ok = g.order() == 1 << (n - 1) && g.element_order(&one_q) == Some(k) && g.element_order(&three_4q) == Some(l) && inv == want;
        out.check(ok, format!("n = {n}: order {}, invariants {inv:?}", g.order()));
    }
    Ok(out)
}

fn dimensions(ctx: &Arc<FieldContext>, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("dimensions");
    match sqrt2_dimension_table(ctx, opts.n_max) {
        Ok(rows) => {
            for r in rows {
                out.check(true, format!("n = {}: dim M(qⁿ, 1) = {}, dim M(qⁿ, φ) = {}", r.n, r.trivial, r.phi));
            }
        }
        Err(e @ Error::DimensionMismatch { .. }) => out.check(false, e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn default_primes(ctx: &FieldContext) -> Vec<RingElement> {
    ctx.primes_up_to_norm(50)
        .into_iter()
        .filter(|p| p.norm().abs() % BigInt::from(2) != BigInt::from(0))
        .collect()
}

fn hecke_eigen(ctx: &Arc<FieldContext>, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("hecke-eigen");
    let primes = opts.primes.clone().unwrap_or_else(|| default_primes(ctx));
    let chars = [DirichletCharacter::trivial(ctx, &ctx.int(1))?, phi_character(ctx)?];
    for n in 5..=opts.n_max.max(5) {
        let c = q(ctx, n)?;
        for psi in &chars {
            for p in &primes {
                if p.divides(&c) {
                    continue;
                }
                let target = auto_box(ctx, &c, psi, 40.0)?;
                let report = basis(ctx, &c, psi, hecke_input_box(target, p))?;
                for (pair, f) in report.pairs.iter().zip(&report.expansions) {
                    let lambda = hecke_eigenvalue(ctx, psi, &pair.t, p, &c)?;
                    let g = op_t_p2_to(f, p, psi, &c, target)?;
                    let ok = g.equal_on_shared_box(&f.scale(&lambda)) && !g.is_zero();
                    out.check(ok, format!("q^{n}, t = {}, p = {p}: eigenvalue {lambda}", pair.t));
                }
            }
        }
    }
    Ok(out)
}

/// Smallest square box, at least `min`, containing every leading element `t`
/// of `Ω(c, ψ)` with some margin.
pub fn auto_box(ctx: &Arc<FieldContext>, c: &RingElement, psi: &DirichletCharacter, min: f64) -> Result<BoxBound> {
    let mut x = min;
    for p in omega_set(ctx, c, psi)? {
        let e = p.t.embeddings();
        x = x.max(1.25 * e[0].max(e[1]));
    }
    Ok(BoxBound::square(x.ceil()))
}

/// A box large enough for expansions at the sample points used at level `c`.
pub fn modularity_box(ctx: &FieldContext, c: &RingElement, tol: f64) -> BoxBound {
    let n = c.norm().abs().to_f64().unwrap_or(f64::MAX) * ctx.delta().norm().abs().to_f64().unwrap_or(1.0) / 4.0;
    let y = 0.3 / n.sqrt();
    BoxBound::square((-(tol.ln()) + 12.0) / (std::f64::consts::PI * y))
}

fn modularity(ctx: &Arc<FieldContext>, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("modularity");
    let chars = [DirichletCharacter::trivial(ctx, &ctx.int(1))?, phi_character(ctx)?];
    for n in 5..=opts.n_max.max(5) {
        let c = q(ctx, n)?;
        let bound = modularity_box(ctx, &c, opts.tol);
        for psi in &chars {
            let report = basis(ctx, &c, psi, bound)?;
            for (pair, f) in report.pairs.iter().zip(&report.expansions) {
                let r = verify_modularity(f, psi, &c, opts.samples, opts.tol, opts.seed)?;
                out.check(r.pass(), format!("q^{n}, t = {}: deviation {:.2e}", pair.t, r.max_deviation));
            }
        }
    }
    let c = q(ctx, 14)?;
    let phi = phi_character(ctx)?;
    let one = DirichletCharacter::trivial(ctx, &ctx.int(1))?;
    let f = theta_chi_t(ctx, &one, &ctx.int(1), modularity_box(ctx, &c, opts.tol))?;
    let r = verify_modularity(&f, &phi, &c, opts.samples, opts.tol, opts.seed)?;
    out.check(
        r.max_deviation >= 1e-2,
        format!("negative control θ_(1,1) with φ at q^14: deviation {:.2e}", r.max_deviation),
    );
    Ok(out)
}

fn gauss_sum(ctx: &Arc<FieldContext>, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("gauss-sum");
    let two_delta = ctx.delta().scale(&BigInt::from(2));
    let group = ctx.unit_group(&two_delta)?;
    let mut worst = 0f64;
    let mut count = 0;
    'outer: for a in -9i64..=9 {
        for b in -3i64..=3 {
            let x = ctx.element(a, b);
            if x.is_zero() || !group.is_unit(&x) {
                continue;
            }
            worst = worst.max(((gauss_epsilon(ctx, &x)? * eps_tilde(&x)).norm() - 1.0).abs());
            count += 1;
            if count == 20 {
                break 'outer;
            }
        }
    }
    out.check(worst < 1e-10, format!("|ε(d)ε̃(d)| = 1 on {count} values: max error {worst:.2e}"));
    let cfg = EvalConfig { floor: 0.0, precision: 12 };
    let de = ctx.delta().embeddings();
    let mut w0 = 0f64;
    for (x1, y1, x2, y2) in [(0.1, 0.9, -0.3, 1.2), (-0.4, 0.6, 0.2, 0.7), (0.0, 1.0, 0.0, 1.0)] {
        let z = UpperHalfPoint {
            z: [Complex64::new(x1, y1), Complex64::new(x2, y2)],
        };
        let w = UpperHalfPoint {
            z: [-1.0 / (z.z[0] * de[0] * de[0]), -1.0 / (z.z[1] * de[1] * de[1])],
        };
        let ratio = theta_eval(ctx, &w, &cfg)?.value / theta_eval(ctx, &z, &cfg)?.value;
        w0 = w0.max((ratio - h_w0(ctx, &z)).norm());
    }
    out.check(w0 < 1e-8, format!("θ(W₀z)/θ(z) = (-iz)^(1/2) N(δ)^(1/2): max error {w0:.2e}"));
    if ctx.d() == 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut worst = 0f64;
        let mut n = 0;
        while n < 50 {
            let g = random_gamma(ctx, &ctx.int(4), 1 + n % 6, &mut rng)?;
            if g.c.is_zero() {
                continue;
            }
            let z = balanced_point(&g, &mut rng);
            worst = worst.max((h_ratio(ctx, &g, &z, &cfg)?.value - h_garrett(ctx, &g, &z)?.value).norm());
            n += 1;
        }
        out.check(
            worst < 1e-8,
            format!("closed form vs theta quotient on 50 words in Γ_(4): max error {worst:.2e}"),
        );
    }
    Ok(out)
}

fn l_coeff(ctx: &Arc<FieldContext>) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("l-coeff");
    let chars = [DirichletCharacter::trivial(ctx, &ctx.int(1))?, phi_character(ctx)?];
    let ideals = ctx.ideals_up_to_norm(100);
    for psi in &chars {
        let f = newform_candidate(ctx, psi, BoxBound::square(250.0))?;
        let label = if psi.is_trivial() { "1" } else { "φ" };
        out.check(f.coeff(&ctx.int(1))? == Cyclotomic::one(), format!("ψ = {label}: a(1) = 1"));
        let mut bad = Vec::new();
        for i in &ideals {
            let a = coeff_at_ideal(&f, i)?;
            let expect = match ideals.iter().find(|l| ctx.same_ideal(&(*l * *l), i)) {
                Some(l) => psi.ideal_value(l)?.map_or(Cyclotomic::zero(), |v| v.to_cyclotomic()),
                None => Cyclotomic::zero(),
            };
            if a != expect {
                bad.push(i.to_string());
            }
        }
        out.check(
            bad.is_empty(),
            format!("ψ = {label}: a(L²) = ψ*(L), a = 0 off squares, N ≤ 100 {bad:?}"),
        );
        let r = psi.conductor()?;
        let c = (&r * &r).scale(&BigInt::from(4));
        let c = ctx.ideal_generator(&c)?;
        for p in ctx.primes_up_to_norm(50) {
            if !(&ctx.int(4) * &p).divides(&c) {
                continue;
            }
            let g = op_t_p2(&f, &p, psi, &c)?;
            out.check(g.is_zero(), format!("ψ = {label}: T_(p²) f = 0 for p = {p} with 4p | c"));
        }
        let big = newform_candidate(ctx, psi, BoxBound::square(1200.0))?;
        let s = Complex64::new(2.0, 0.0);
        let a = partial_l(&big, s, 400)?;
        let b = euler_partial(ctx, psi, s, 20)?;
        out.check(
            (a - b).norm() < 1e-3,
            format!("ψ = {label}: L(2, f) partial {a:.6} vs Euler product {b:.6}"),
        );
    }
    Ok(out)
}
