//! One pass/fail line per acceptance criterion. Each check compares the
//! library against an oracle computed here from first principles: brute-force
//! residue arithmetic in ℤ[√2], Euler's criterion, naive theta sums and the
//! explicit families of the ℚ(√2) examples.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use hmf_theta::analytic::{
    balanced_point, gamma_with_a, gauss_epsilon, h_garrett, h_w0, random_gamma, verify_modularity, w_operator_eval, EvalConfig,
    PreparedExpansion, UpperHalfPoint,
};
use hmf_theta::basis::{basis, newform_candidate, omega_set, phi_character};
use hmf_theta::cyclotomic::Cyclotomic;
use hmf_theta::field::{make_field, BoxBound, FieldContext, RingElement};
use hmf_theta::qexp::{coeff_at_ideal, hecke_input_box, op_h, op_k, op_t_p2, op_t_p2_to, op_u, op_v, theta_chi_t};
use hmf_theta::residue::{char_equal, characters_trivial_on_units, epsilon_t, DirichletCharacter};
use hmf_theta::Result;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Brute-force arithmetic in ℤ[√2]/qⁿ with q = √2.

/// `R/qⁿ` as pairs `(a, b)` for `a + b√2`, with `a mod 2^⌈n/2⌉` and `b mod 2^⌊n/2⌋`.
#[derive(Clone, Copy)]
struct Qn {
    ma: i64,
    mb: i64,
}

impl Qn {
    fn new(n: u32) -> Self {
        Qn {
            ma: 1 << n.div_ceil(2),
            mb: 1 << (n / 2),
        }
    }

    fn red(&self, (a, b): (i64, i64)) -> (i64, i64) {
        (a.rem_euclid(self.ma), b.rem_euclid(self.mb))
    }

    fn mul(&self, x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
        self.red((x.0 * y.0 + 2 * x.1 * y.1, x.0 * y.1 + x.1 * y.0))
    }

    fn units(&self) -> Vec<(i64, i64)> {
        let mut v = Vec::new();
        for a in (1..self.ma).step_by(2) {
            for b in 0..self.mb {
                v.push((a, b));
            }
        }
        v
    }

    fn order(&self, x: (i64, i64)) -> u64 {
        let one = self.red((1, 0));
        let mut y = self.red(x);
        let mut k = 1;
        while y != one {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn subgroup(&self, gens: &[(i64, i64)]) -> HashSet<(i64, i64)> {
        let mut seen: HashSet<(i64, i64)> = HashSet::from([self.red((1, 0))]);
        let mut frontier: Vec<(i64, i64)> = seen.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.mul(x, self.red(*g));
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    /// Invariant factors of the 2-group `(R/qⁿ)ˣ` from the counts of
    /// `2^k`-torsion elements.
    fn invariants(&self) -> Vec<u64> {
        let orders: Vec<u64> = self.units().into_iter().map(|x| self.order(x)).collect();
        let torsion = |k: u32| orders.iter().filter(|o| (1u64 << k).is_multiple_of(**o)).count() as u64;
        let mut at_least = Vec::new();
        let mut k = 1;
        loop {
            let (hi, lo) = (torsion(k), torsion(k - 1));
            if hi == lo {
                break;
            }
            at_least.push((hi / lo).trailing_zeros() as usize);
            k += 1;
        }
        // at_least[k-1] = number of cyclic factors of order ≥ 2^k.
        let mut out = Vec::new();
        for (i, &cnt) in at_least.iter().enumerate() {
            let next = at_least.get(i + 1).copied().unwrap_or(0);
            for _ in 0..cnt - next {
                out.push(1u64 << (i + 1));
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

// ---------------------------------------------------------------------------
// Residue symbols by Euler's criterion in R/p for odd primes p of ℤ[√2].

/// `(x/p)` for `x = a + b√2` and a prime element `p`, computed in the residue
/// field: `𝔽_ℓ` via `√2 ↦ r` when `N(p) = ℓ`, and `𝔽_ℓ[√2]` when `p = ℓ` is inert.
fn legendre(x: (i64, i64), p: (i64, i64)) -> i64 {
    let n = (p.0 * p.0 - 2 * p.1 * p.1).abs();
    let ell = (2..=n).find(|l| n % l == 0).unwrap();
    let pow_mod = |mut base: (i64, i64), mut e: i64, mul: &dyn Fn((i64, i64), (i64, i64)) -> (i64, i64)| {
        let mut acc = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let v = if n == ell {
        // √2 ≡ r with p0 + p1 r ≡ 0.
        let inv = (1..ell).find(|i| (p.1.rem_euclid(ell) * i) % ell == 1).unwrap();
        let r = (-p.0 * inv).rem_euclid(ell);
        let y = ((x.0 + x.1 * r).rem_euclid(ell), 0);
        let mul = |u: (i64, i64), w: (i64, i64)| ((u.0 * w.0) % ell, 0);
        pow_mod(y, (ell - 1) / 2, &mul)
    } else {
        let mul = |u: (i64, i64), w: (i64, i64)| ((u.0 * w.0 + 2 * u.1 * w.1).rem_euclid(ell), (u.0 * w.1 + u.1 * w.0).rem_euclid(ell));
        let y = (x.0.rem_euclid(ell), x.1.rem_euclid(ell));
        pow_mod(y, (n - 1) / 2, &mul)
    };
    match v {
        (0, 0) => 0,
        (1, 0) => 1,
        (w, 0) if w == ell - 1 => -1,
        other => panic!("Euler criterion gave {other:?}"),
    }
}

fn small(x: &RingElement) -> (i64, i64) {
    x.small_coords().expect("small element")
}

/// `φ(x)` for `x` odd: `(-1)^e` where `x ≡ (1+q)^i (-1)^j (3+4q)^e mod q⁵`.
fn phi_oracle(x: (i64, i64)) -> i64 {
    let g = Qn::new(5);
    let target = g.red(x);
    let pow = |y: (i64, i64), e: u32| (0..e).fold(g.red((1, 0)), |acc, _| g.mul(acc, y));
    for i in 0..4 {
        for j in 0..2 {
            for e in 0..2 {
                let v = g.mul(g.mul(pow((1, 1), i), pow((-1, 0), j)), pow((3, 4), e));
                if v == target {
                    return if e == 1 { -1 } else { 1 };
                }
            }
        }
    }
    panic!("{x:?} is not a unit mod q⁵")
}

/// A totally positive associate of `x`.
fn totally_positive(ctx: &FieldContext, x: &RingElement) -> RingElement {
    let candidates = [x.clone(), -x, x * &ctx.unit_power(1), &(-x) * &ctx.unit_power(1)];
    candidates
        .into_iter()
        .find(|y| y.is_totally_positive())
        .expect("narrow class number one")
}

// ---------------------------------------------------------------------------
// Naive theta sums over R.

fn naive_theta(ctx: &FieldContext, z: &UpperHalfPoint) -> Complex64 {
    let w = ctx.field().omega().embeddings();
    let y = [z.z[0].im, z.z[1].im];
    let cut = 80.0;
    let r = [(cut / (PI * y[0])).sqrt(), (cut / (PI * y[1])).sqrt()];
    let bmax = ((r[0] + r[1]) / (w[0] - w[1]).abs()).ceil() as i64 + 1;
    let amax = (r[0].max(r[1]) + bmax as f64 * w[0].abs().max(w[1].abs())).ceil() as i64 + 1;
    let mut sum = Complex64::new(0.0, 0.0);
    for b in -bmax..=bmax {
        for a in -amax..=amax {
            let e = [a as f64 + b as f64 * w[0], a as f64 + b as f64 * w[1]];
            if PI * (y[0] * e[0] * e[0] + y[1] * e[1] * e[1]) > cut {
                continue;
            }
            let i = Complex64::new(0.0, PI);
            sum += (i * (z.z[0] * e[0] * e[0] + z.z[1] * e[1] * e[1])).exp();
        }
    }
    sum
}

/// `Σ e(-v²d/4)` over `v = δ⁻¹y` with `y` running over the box `[0, 2D)²` of
/// coordinates, which covers `δ⁻¹R/2R` exactly `D` times.
fn naive_gauss(ctx: &FieldContext, d: &RingElement) -> Complex64 {
    let disc = ctx.discriminant();
    let dd = d.embeddings();
    let mut sum = Complex64::new(0.0, 0.0);
    let delta = ctx.delta();
    let nd = delta.norm().to_i64().unwrap();
    for a in 0..2 * disc {
        for b in 0..2 * disc {
            let y = ctx.element(a, b);
            // y² d δ'² / N(δ)² has trace t / N(δ)², with t an integer.
            let num = &(&(&y * &y) * d) * &(&delta.conj() * &delta.conj());
            let t = num.trace().to_i64().unwrap();
            let den = 4 * nd * nd;
            let frac = (-t).rem_euclid(den) as f64 / den as f64;
            sum += Complex64::from_polar(1.0, 2.0 * PI * frac);
        }
    }
    let branch = |s: f64| Complex64::new(0.0, s.signum()).sqrt();
    branch(dd[0]) * branch(dd[1]) * sum / (disc as f64) * 0.5 / (disc as f64).sqrt()
}

// ---------------------------------------------------------------------------

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn field2() -> Arc<FieldContext> {
    make_field(2).expect("Q(√2)")
}

fn q(ctx: &FieldContext, n: u32) -> RingElement {
    ctx.prime_power_above_two(n).expect("q^n")
}

fn criterion_1() -> Result<Outcome> {
    let ctx = field2();
    let mut bad = Vec::new();
    for n in 1..=16u32 {
        let g = ctx.unit_group(&q(&ctx, n))?;
        let zq = Qn::new(n);
        let brute_order = zq.units().len() as u64;
        if g.order() != brute_order || brute_order != 1 << (n - 1) {
            bad.push(format!("n={n}: order {} vs brute force {brute_order}", g.order()));
        }
        if n <= 4 {
            let gen_by_units = zq.subgroup(&[(-1, 0), (1, 1)]).len() as u64 == brute_order;
            if !gen_by_units || !g.generated_by_units() {
                bad.push(format!("n={n}: not generated by units"));
            }
            continue;
        }
        let k = n / 2;
        let l = (n - 3) / 2;
        let o1 = g.element_order(&ctx.element(1, 1)).unwrap_or(0);
        let o2 = g.element_order(&ctx.element(3, 4)).unwrap_or(0);
        if o1 != 1 << k || zq.order((1, 1)) != o1 {
            bad.push(format!("n={n}: ord(1+q) = {o1}"));
        }
        if o2 != 1 << l || zq.order((3, 4)) != o2 {
            bad.push(format!("n={n}: ord(3+4q) = {o2}"));
        }
        let mut expected = vec![1u64 << k, 1 << l, 2];
        expected.sort_unstable_by(|a, b| b.cmp(a));
        if g.invariant_multiset() != expected || zq.invariants() != expected {
            bad.push(format!("n={n}: invariants {:?} vs {expected:?}", g.invariant_multiset()));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "n = 1..16 agree with brute force".into()
        } else {
            bad.join("; ")
        },
    )
}

fn criterion_2() -> Result<Outcome> {
    let ctx = field2();
    let phi = phi_character(&ctx)?;
    let eps_u = epsilon_t(&ctx, &ctx.element(2, 1))?;
    let mut bad = Vec::new();
    if !ctx.same_ideal(&phi.conductor()?, &q(&ctx, 5)) {
        bad.push(format!("conductor(φ) = {}", phi.conductor()?));
    }
    if !char_equal(&phi, &eps_u)? {
        bad.push("φ ≠ ε_(2+√2)".into());
    }
    for n in 5..=16u32 {
        let chars = characters_trivial_on_units(&ctx, &q(&ctx, n), Some(2))?;
        // Oracle: quadratic characters trivial on units ↔ dual of G/(G²·U).
        let zq = Qn::new(n);
        let squares: HashSet<(i64, i64)> = zq.units().into_iter().map(|x| zq.mul(x, x)).collect();
        let units = zq.subgroup(&[(-1, 0), (1, 1)]);
        let product: HashSet<(i64, i64)> = squares.iter().flat_map(|s| units.iter().map(|u| zq.mul(*s, *u))).collect();
        let index = zq.units().len() / product.len();
        let trivial = chars.iter().filter(|c| c.is_trivial()).count();
        let nontrivial: Vec<&DirichletCharacter> = chars.iter().filter(|c| !c.is_trivial()).collect();
        let phi_ok = nontrivial.len() == 1 && char_equal(nontrivial[0], &phi)?;
        let values_ok = nontrivial.iter().all(|c| {
            [(3, 4), (5, 0), (1, 2), (7, 3)]
                .iter()
                .all(|&(a, b)| c.value(&ctx.element(a, b)).and_then(|v| v.sign()) == Some(phi_oracle((a, b))))
        });
        if chars.len() != 2 || index != 2 || trivial != 1 || !phi_ok || !values_ok {
            bad.push(format!("n={n}: {} characters, brute-force index {index}", chars.len()));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "n = 5..16: {1, φ}, r(φ) = q⁵, φ = ε_(2+√2)".into()
        } else {
            bad.join("; ")
        },
    )
}

/// Pairs `(is φ, t)` of the explicit families for `M(qⁿ, ψ)`.
fn expected_pairs(ctx: &FieldContext, n: i64, psi_is_phi: bool) -> Vec<(bool, RingElement)> {
    let u = ctx.element(2, 1);
    let pow2 = |k: i64| ctx.int(1i64 << k);
    let mut out = Vec::new();
    let (first, second) = if psi_is_phi {
        (floor_div(n - 5, 2), floor_div(n - 14, 2))
    } else {
        (floor_div(n - 4, 2), floor_div(n - 15, 2))
    };
    for k in 0..=first {
        out.push((false, if psi_is_phi { &pow2(k) * &u } else { pow2(k) }));
    }
    for k in 0..=second {
        out.push((true, if psi_is_phi { pow2(k) } else { &pow2(k) * &u }));
    }
    out
}

fn criterion_3() -> Result<Outcome> {
    let ctx = field2();
    let phi = phi_character(&ctx)?;
    let one = DirichletCharacter::trivial(&ctx, &ctx.int(1))?;
    let mut bad = Vec::new();
    for n in 4..=20i64 {
        let c = q(&ctx, n as u32);
        for (psi, is_phi) in [(&one, false), (&phi, true)] {
            let omega = omega_set(&ctx, &c, psi)?;
            let formula = if is_phi {
                floor_div(n - 3, 2) + floor_div(n - 12, 2).max(0)
            } else {
                floor_div(n - 2, 2) + floor_div(n - 13, 2).max(0)
            };
            let expected = expected_pairs(&ctx, n, is_phi);
            let mut matched = vec![false; expected.len()];
            for p in &omega {
                let chi_is_phi = !p.chi.primitive()?.is_trivial();
                if chi_is_phi && !char_equal(&p.chi, &phi)? {
                    bad.push(format!("n={n}: unexpected χ in Ω"));
                    continue;
                }
                let hit = expected.iter().enumerate().position(|(i, (e_phi, t))| {
                    !matched[i] && *e_phi == chi_is_phi && p.t.is_totally_positive() && ctx.same_ideal(&p.t, t)
                });
                match hit {
                    Some(i) => matched[i] = true,
                    None => bad.push(format!("n={n}: pair t = {} not in the explicit family", p.t)),
                }
            }
            if omega.len() as i64 != formula || expected.len() as i64 != formula || matched.iter().any(|m| !m) {
                bad.push(format!(
                    "n={n}, ψ = {}: |Ω| = {}, formula {formula}",
                    if is_phi { "φ" } else { "1" },
                    omega.len()
                ));
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "n = 4..20: |Ω| and pair lists match both families".into()
        } else {
            bad.join("; ")
        },
    )
}

fn criterion_4() -> Result<Outcome> {
    let ctx = field2();
    let phi = phi_character(&ctx)?;
    let one = DirichletCharacter::trivial(&ctx, &ctx.int(1))?;
    let primes: Vec<RingElement> = ctx
        .primes_up_to_norm(50)
        .into_iter()
        .filter(|p| p.norm().abs().to_i64().unwrap() % 2 == 1)
        .map(|p| totally_positive(&ctx, &p))
        .collect();
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 5..=16u32 {
        let c = q(&ctx, n);
        for (psi, is_phi) in [(&one, false), (&phi, true)] {
            let omega = omega_set(&ctx, &c, psi)?;
            let mut x = 40.0f64;
            for pair in &omega {
                let e = pair.t.embeddings();
                x = x.max(1.25 * e[0].max(e[1]));
            }
            let target = BoxBound::square(x.ceil());
            for p in &primes {
                let report = basis(&ctx, &c, psi, hecke_input_box(target, p))?;
                let np = p.norm().abs().to_i64().unwrap();
                for (pair, f) in report.pairs.iter().zip(&report.expansions) {
                    let psi_p = if is_phi { legendre((2, 1), small(p)) } else { 1 };
                    let sym = legendre(small(&pair.t), small(p));
                    let lambda = Cyclotomic::from_ratio(psi_p * sym * (np + 1), np);
                    let g = op_t_p2_to(f, p, psi, &c, target)?;
                    checked += 1;
                    if g.is_zero() || !g.equal_on_shared_box(&f.scale(&lambda)) {
                        bad.push(format!("n={n}, t = {}, p = {p}", pair.t));
                    }
                }
            }
        }
    }
    let names: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
    outcome(
        bad.is_empty() && checked > 0,
        if bad.is_empty() {
            format!("{checked} exact eigenvalue checks, levels q⁵..q¹⁶, p ∈ {{{}}}", names.join(", "))
        } else {
            bad.join("; ")
        },
    )
}

fn criterion_5() -> Result<Outcome> {
    let ctx = field2();
    let phi = phi_character(&ctx)?;
    let one = DirichletCharacter::trivial(&ctx, &ctx.int(1))?;
    let mut bad = Vec::new();
    for (psi, is_phi) in [(&one, false), (&phi, true)] {
        let r = if is_phi { q(&ctx, 5) } else { ctx.int(1) };
        let c = (&r * &r).scale(&4.into());
        let f = newform_candidate(&ctx, psi, BoxBound::square(250.0))?;
        if coeff_at_ideal(&f, &ctx.int(1))? != Cyclotomic::one() {
            bad.push("a(1) ≠ 1".into());
        }
        let ideals = ctx.ideals_up_to_norm(100);
        for i in &ideals {
            let a = coeff_at_ideal(&f, i)?;
            let root = ideals.iter().find(|l| ctx.same_ideal(&(*l * *l), i));
            let expect = match root {
                None => 0,
                Some(_) if !is_phi => 1,
                Some(l) => {
                    let (x, y) = small(&totally_positive(&ctx, l));
                    if x % 2 == 0 {
                        0
                    } else {
                        phi_oracle((x, y))
                    }
                }
            };
            if a != Cyclotomic::from_int(expect) {
                bad.push(format!(
                    "ψ = {}: a({i}) = {:?}, expected {expect}",
                    if is_phi { "φ" } else { "1" },
                    a.as_rational()
                ));
            }
        }
        for p in ctx.primes_up_to_norm(50) {
            let p = totally_positive(&ctx, &p);
            if !(&ctx.int(4) * &p).divides(&c) {
                continue;
            }
            if !op_t_p2(&f, &p, psi, &c)?.is_zero() {
                bad.push(format!("T_(p²) f ≠ 0 for p = {p}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "a(1) = 1, a(L²) = ψ*(L), zero off squares, T_(p²) f = 0 for 4p | c".into()
        } else {
            bad.join("; ")
        },
    )
}

fn modularity_box(ctx: &FieldContext, c: &RingElement, tol: f64) -> BoxBound {
    let n = c.norm().abs().to_f64().unwrap() * ctx.delta().norm().abs().to_f64().unwrap() / 4.0;
    let y = 0.3 / n.sqrt();
    BoxBound::square((-(tol.ln()) + 12.0) / (PI * y))
}

fn criterion_6() -> Result<Outcome> {
    let ctx = field2();
    let phi = phi_character(&ctx)?;
    let one = DirichletCharacter::trivial(&ctx, &ctx.int(1))?;
    let tol = 1e-6;
    let mut worst = 0f64;
    let mut bad = Vec::new();
    let mut count = 0;
    for n in 5..=16u32 {
        let c = q(&ctx, n);
        for psi in [&one, &phi] {
            let report = basis(&ctx, &c, psi, modularity_box(&ctx, &c, tol))?;
            for (pair, f) in report.pairs.iter().zip(&report.expansions) {
                let r = verify_modularity(f, psi, &c, 20, tol, 2024 + n as u64)?;
                count += 1;
                worst = worst.max(r.max_deviation);
                if !r.pass() {
                    bad.push(format!("q^{n}, t = {}: {:.2e}", pair.t, r.max_deviation));
                }
            }
        }
    }
    let c = q(&ctx, 14);
    let f = theta_chi_t(&ctx, &one, &ctx.int(1), modularity_box(&ctx, &c, tol))?;
    let control = verify_modularity(&f, &phi, &c, 20, tol, 7)?;
    if control.max_deviation < 1e-2 {
        bad.push(format!("negative control deviation {:.2e}", control.max_deviation));
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "{count} basis forms, worst deviation {worst:.2e}; negative control {:.2e}",
                control.max_deviation
            )
        } else {
            bad.join("; ")
        },
    )
}

fn criterion_7() -> Result<Outcome> {
    let mut bad = Vec::new();
    // Closed form against a naive theta quotient on Γ_(4) and nearby levels.
    let ctx = field2();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst_h = 0f64;
    let levels = [ctx.int(4), ctx.int(8), ctx.element(0, 4)];
    for i in 0..50 {
        let c = &levels[i % levels.len()];
        let gamma = if i % 2 == 0 {
            random_gamma(&ctx, c, 1 + i % 6, &mut rng)?
        } else {
            let group = ctx.unit_group(c)?;
            let a = loop {
                let a = ctx.element(rng.gen_range(-15..=15), rng.gen_range(-15..=15));
                if group.is_unit(&a) {
                    break a;
                }
            };
            gamma_with_a(&ctx, c, &a)?
        };
        if gamma.c.is_zero() {
            continue;
        }
        let z = balanced_point(&gamma, &mut rng);
        let ratio = naive_theta(&ctx, &gamma.act(&z)) / naive_theta(&ctx, &z);
        let closed = h_garrett(&ctx, &gamma, &z)?.value;
        worst_h = worst_h.max((ratio - closed).norm());
    }
    if worst_h >= 1e-8 {
        bad.push(format!("closed form vs ratio {worst_h:.2e}"));
    }
    // W₀ anchor and Gauss-sum unitarity on all catalog fields.
    let mut worst_w0 = 0f64;
    let mut worst_gauss = 0f64;
    for d in [2, 5, 13] {
        let ctx = make_field(d)?;
        let de = ctx.delta().embeddings();
        for _ in 0..10 {
            let z = UpperHalfPoint {
                z: [
                    Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.7..1.4) / de[0]),
                    Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.7..1.4) / de[1]),
                ],
            };
            let w = UpperHalfPoint {
                z: [-1.0 / (z.z[0] * de[0] * de[0]), -1.0 / (z.z[1] * de[1] * de[1])],
            };
            let ratio = naive_theta(&ctx, &w) / naive_theta(&ctx, &z);
            worst_w0 = worst_w0.max((ratio - h_w0(&ctx, &z)).norm() / ratio.norm());
        }
        let mut tested = 0;
        for a in -9i64..=9 {
            for b in -9i64..=9 {
                let x = ctx.element(a, b);
                let coprime = x.norm().to_i64().unwrap() % 2 != 0 && (x.norm().to_i64().unwrap() % ctx.discriminant()) != 0;
                if !coprime || tested >= 20 {
                    continue;
                }
                tested += 1;
                let lib = gauss_epsilon(&ctx, &x)?;
                let naive = naive_gauss(&ctx, &x);
                worst_gauss = worst_gauss.max((lib.norm() - 1.0).abs()).max((lib - naive).norm());
            }
        }
    }
    if worst_w0 >= 1e-8 {
        bad.push(format!("W₀ anchor {worst_w0:.2e}"));
    }
    if worst_gauss >= 1e-10 {
        bad.push(format!("Gauss sums {worst_gauss:.2e}"));
    }
    outcome(
        bad.is_empty(),
        format!("closed form {worst_h:.2e} (< 1e-8), W₀ anchor {worst_w0:.2e} (< 1e-8), Gauss unitarity {worst_gauss:.2e} (< 1e-10)"),
    )
}

fn criterion_8() -> Result<Outcome> {
    let ctx = field2();
    let phi = phi_character(&ctx)?;
    let one = DirichletCharacter::trivial(&ctx, &ctx.int(1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    let bound = BoxBound::square(60.0);
    let forms = [
        theta_chi_t(&ctx, &one, &ctx.int(1), bound)?,
        theta_chi_t(&ctx, &one, &ctx.element(2, 1), bound)?,
        theta_chi_t(&ctx, &phi, &ctx.int(1), bound)?,
        theta_chi_t(&ctx, &phi, &ctx.element(4, 2), bound)?,
    ];
    let ps = [ctx.int(3), ctx.element(3, 1), ctx.element(2, 1), ctx.int(2)];
    for f in &forms {
        for p in ps.iter().filter(|p| p.is_totally_positive()) {
            let uv = op_u(&op_v(f, p)?, p)?;
            if !uv.equal_on_shared_box(f) {
                bad.push(format!("U∘V ≠ id for p = {p}"));
            }
            let one_minus_uv = f.sub(&op_v(&op_u(f, p)?, p)?);
            if !op_k(f, p)?.equal_on_shared_box(&one_minus_uv) {
                bad.push(format!("K ≠ 1 − U·V for p = {p}"));
            }
        }
        if !op_h(&op_h(f)).equal_on_shared_box(f) || op_h(&op_h(f)).nonzero_count() != f.nonzero_count() {
            bad.push("H∘H ≠ id".into());
        }
    }
    // W(c)∘W(c) = id at random points near the fixed locus.
    let cfg = EvalConfig::with_floor(0.02);
    let mut worst = 0f64;
    let mut evaluated = 0;
    for (psi, c) in [(&one, ctx.int(4)), (&phi, ctx.int(8)), (&one, ctx.element(4, 2))] {
        let f = newform_candidate(&ctx, psi, BoxBound::square(400.0))?;
        let prepared = PreparedExpansion::new(&f);
        let (de, ce) = (ctx.delta().embeddings(), c.embeddings());
        let radius = [2.0 / (ce[0].sqrt() * de[0]), 2.0 / (ce[1].sqrt() * de[1])];
        let n = (ctx.delta().norm().to_f64().unwrap().powi(2) * c.norm().to_f64().unwrap() / 16.0).powf(-0.25);
        for _ in 0..20 {
            let z = UpperHalfPoint {
                z: [
                    Complex64::from_polar(radius[0] * rng.gen_range(0.8..1.25), rng.gen_range(0.5..2.6)),
                    Complex64::from_polar(radius[1] * rng.gen_range(0.8..1.25), rng.gen_range(0.5..2.6)),
                ],
            };
            if z.y_min() < 0.03 {
                continue;
            }
            let w = UpperHalfPoint {
                z: [-4.0 / (z.z[0] * ce[0] * de[0] * de[0]), -4.0 / (z.z[1] * ce[1] * de[1] * de[1])],
            };
            let Ok(fw_at_w) = w_operator_eval(&f, &c, &w, &cfg) else { continue };
            let mi = Complex64::new(0.0, -1.0);
            let twice = ((mi * z.z[0]).sqrt() * (mi * z.z[1]).sqrt()).inv() * n * fw_at_w.value;
            let direct = prepared.eval(&z).value;
            worst = worst.max((twice - direct).norm());
            evaluated += 1;
        }
    }
    if evaluated < 30 {
        bad.push(format!("only {evaluated} points evaluated for W(c)"));
    }
    if worst >= 1e-8 {
        bad.push(format!("W(c) involution {worst:.2e}"));
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("U∘V = id, K = 1 − U·V, H∘H = id exactly; W(c)² = id within {worst:.2e} at {evaluated} points")
        } else {
            bad.join("; ")
        },
    )
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("unit-group structure of (R/qⁿ)ˣ", criterion_1),
        ("unique even quadratic character φ", criterion_2),
        ("dimension formulas and basis families", criterion_3),
        ("theta series are T(p²) eigenforms", criterion_4),
        ("newform coefficient identities", criterion_5),
        ("numerical modularity", criterion_6),
        ("closed-form automorphy factor", criterion_7),
        ("operator algebra", criterion_8),
    ];
    let mut all = true;
    let mut lines = BTreeMap::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= pass;
        let line = format!(
            "criterion {} [{}] {name}: {detail} ({:.1}s)",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        println!("{line}");
        lines.insert(i + 1, pass);
    }
    let passed = lines.values().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria pass", lines.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
