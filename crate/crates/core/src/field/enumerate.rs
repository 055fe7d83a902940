use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{FieldContext, RingElement};

/// Relative slack applied to box comparisons so that elements sitting on the
/// boundary are not lost to rounding.
pub const BOX_SLACK: f64 = 1e-12;

/// Per-embedding truncation box `ξ⁽¹⁾ ≤ x1`, `ξ⁽²⁾ ≤ x2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxBound {
    pub x1: f64,
    pub x2: f64,
}

impl BoxBound {
    pub fn new(x1: f64, x2: f64) -> Self {
        BoxBound { x1, x2 }
    }

    pub fn square(x: f64) -> Self {
        BoxBound { x1: x, x2: x }
    }

    /// Whether the embeddings `e` fit in the box (with slack).
    pub fn contains_embeddings(&self, e: [f64; 2]) -> bool {
        e[0] <= self.x1 * (1.0 + BOX_SLACK) && e[1] <= self.x2 * (1.0 + BOX_SLACK)
    }

    /// Whether `ξ` is zero or a totally positive element in the box.
    pub fn contains(&self, xi: &RingElement) -> bool {
        xi.is_zero() || (xi.is_totally_positive() && self.contains_embeddings(xi.embeddings()))
    }

    /// Componentwise product with the embeddings of a totally positive `m`.
    pub fn scale_by(&self, m: &RingElement) -> Self {
        let e = m.embeddings();
        BoxBound {
            x1: self.x1 * e[0],
            x2: self.x2 * e[1],
        }
    }

    /// Componentwise quotient by the embeddings of a totally positive `m`.
    pub fn shrink_by(&self, m: &RingElement) -> Self {
        let e = m.embeddings();
        BoxBound {
            x1: self.x1 / e[0],
            x2: self.x2 / e[1],
        }
    }

    pub fn min(&self, other: &BoxBound) -> Self {
        BoxBound {
            x1: self.x1.min(other.x1),
            x2: self.x2.min(other.x2),
        }
    }

    /// Whether `other` lies inside `self` (with slack).
    pub fn covers(&self, other: &BoxBound) -> bool {
        other.x1 <= self.x1 * (1.0 + BOX_SLACK) && other.x2 <= self.x2 * (1.0 + BOX_SLACK)
    }
}

impl FieldContext {
    /// Totally positive `ξ` with `ξ⁽¹⁾ ≤ x1`, `ξ⁽²⁾ ≤ x2`, plus 0 when asked,
    /// ordered by trace and then coordinates.
    pub fn enumerate_box(&self, x1: f64, x2: f64, include_zero: bool) -> Vec<RingElement> {
        let bound = BoxBound::new(x1, x2);
        let field = self.field();
        let sd = field.sqrt_d();
        // ξ⁽¹⁾ - ξ⁽²⁾ = b·√d in the half basis and 2b·√d otherwise
        let span = if field.half_integral_basis() { sd } else { 2.0 * sd };
        let b_lo = (-x2 / span).floor() as i64 - 1;
        let b_hi = (x1 / span).ceil() as i64 + 1;
        let w = field.omega().embeddings();
        let mut out: Vec<RingElement> = Vec::new();
        if include_zero {
            out.push(field.zero());
        }
        for b in b_lo..=b_hi {
            let bf = b as f64;
            // 0 < a + b·ωᵢ ≤ Xᵢ
            let lo = (-bf * w[0]).max(-bf * w[1]);
            let hi = (x1 - bf * w[0]).min(x2 - bf * w[1]);
            if hi < lo - 1.0 {
                continue;
            }
            let a_lo = lo.floor() as i64 - 1;
            let a_hi = hi.ceil() as i64 + 1;
            for a in a_lo..=a_hi {
                let xi = RingElement::new(field, BigInt::from(a), BigInt::from(b));
                if !xi.is_zero() && bound.contains(&xi) {
                    out.push(xi);
                }
            }
        }
        out.sort();
        out
    }

    pub fn enumerate_bound(&self, bound: &BoxBound, include_zero: bool) -> Vec<RingElement> {
        self.enumerate_box(bound.x1, bound.x2, include_zero)
    }
}

#[cfg(test)]
mod tests {
    use crate::field::make_field;

    fn slow_oracle(d: i64, x1: f64, x2: f64) -> Vec<(i64, i64)> {
        let k = make_field(d).unwrap();
        let r = (x1 + x2) as i64 + 2;
        let mut v = Vec::new();
        for a in -4 * r..=4 * r {
            for b in -4 * r..=4 * r {
                let x = k.element(a, b);
                if x.is_totally_positive() {
                    let e = x.embeddings();
                    if e[0] <= x1 * (1.0 + 1e-12) && e[1] <= x2 * (1.0 + 1e-12) {
                        v.push(x);
                    }
                }
            }
        }
        v.sort();
        v.into_iter().map(|x| x.small_coords().unwrap()).collect()
    }

    #[test]
    fn small_boxes() {
        let k = make_field(2).unwrap();
        let got: Vec<_> = k.enumerate_box(3.0, 3.0, false).iter().map(|x| x.small_coords().unwrap()).collect();
        assert_eq!(got, vec![(1, 0), (2, 0), (3, 0)]);
        let got: Vec<_> = k.enumerate_box(3.5, 3.5, false).iter().map(|x| x.small_coords().unwrap()).collect();
        assert_eq!(got, vec![(1, 0), (2, -1), (2, 0), (2, 1), (3, 0)]);
        assert_eq!(k.enumerate_box(0.5, 0.5, true), vec![k.int(0)]);
    }

    #[test]
    fn matches_double_loop() {
        for d in [2, 5, 13] {
            let k = make_field(d).unwrap();
            for (x1, x2) in [(3.0, 3.0), (10.0, 4.0), (1.5, 20.0), (25.0, 25.0)] {
                let got: Vec<_> = k.enumerate_box(x1, x2, false).iter().map(|x| x.small_coords().unwrap()).collect();
                assert_eq!(got, slow_oracle(d, x1, x2), "d={d} box=({x1},{x2})");
            }
        }
    }
}
