use std::cmp::Ordering;

use super::{FieldContext, RingElement};
use crate::error::{Error, Result};

impl FieldContext {
    /// `ε^k` for the fundamental unit `ε`.
    pub fn unit_power(&self, k: i64) -> RingElement {
        self.fundamental_unit.unit_pow(k)
    }

    /// Exponent `k` and sign `s` with `x = s·ε^k`, when `x` is a unit.
    pub fn unit_log(&self, x: &RingElement) -> Option<(i64, i64)> {
        if !x.is_unit() {
            return None;
        }
        let e = x.embeddings();
        let eps = self.fundamental_unit.embeddings()[0];
        let k = (e[0].abs().ln() / eps.ln()).round() as i64;
        let p = self.unit_power(k);
        if &p == x {
            Some((k, 1))
        } else if &(-&p) == x {
            Some((k, -1))
        } else {
            None
        }
    }

    /// `u·x` totally positive for a unit `u = ±ε^k` with `|k|` minimal,
    /// `k ≥ 0` preferred, then the `+` sign.
    pub fn totally_positive_associate(&self, x: &RingElement) -> Result<RingElement> {
        if x.is_zero() {
            return Err(Error::Zero);
        }
        for k in [0i64, 1, -1] {
            let y = &self.unit_power(k) * x;
            if y.is_totally_positive() {
                return Ok(y);
            }
            let y = -y;
            if y.is_totally_positive() {
                return Ok(y);
            }
        }
        // Unreachable when N(ε) = -1: ε flips exactly one embedding sign.
        Err(Error::Positivity(x.to_string()))
    }

    /// Unique representative of `x·U²` of minimal trace, ties broken towards
    /// the lexicographically larger coordinates (so `2+√2` beats `2-√2`).
    pub fn canonical_rep_mod_squared_units(&self, x: &RingElement) -> Result<RingElement> {
        if !x.is_totally_positive() {
            return Err(Error::Positivity(x.to_string()));
        }
        let up = self.unit_power(2);
        let down = self.unit_power(-2);
        let mut cur = x.clone();
        let mut t = cur.trace();
        // The trace along the orbit is convex in the exponent, so a walk in
        // the descending direction terminates at the minimum.
        for step in [&up, &down] {
            loop {
                let next = &cur * step;
                let nt = next.trace();
                if nt < t {
                    cur = next;
                    t = nt;
                } else {
                    break;
                }
            }
        }
        let mut best = cur.clone();
        for step in [&up, &down] {
            let nb = &cur * step;
            if nb.trace() == t && lex(&nb, &best) == Ordering::Greater {
                best = nb;
            }
        }
        Ok(best)
    }

    /// Canonical totally positive generator of the ideal `(x)`.
    pub fn ideal_generator(&self, x: &RingElement) -> Result<RingElement> {
        let tp = self.totally_positive_associate(x)?;
        self.canonical_rep_mod_squared_units(&tp)
    }

    /// Whether `x` and `y` generate the same ideal.
    pub fn same_ideal(&self, x: &RingElement, y: &RingElement) -> bool {
        match x.exact_div(y) {
            Some(q) => q.is_unit(),
            None => false,
        }
    }
}

fn lex(x: &RingElement, y: &RingElement) -> Ordering {
    x.a().cmp(y.a()).then_with(|| x.b().cmp(y.b()))
}
