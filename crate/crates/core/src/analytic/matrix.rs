use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;

use super::UpperHalfPoint;
use crate::field::{FieldElement, QuadraticField, RingElement};

/// A `2×2` matrix over `F` with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOverF {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl MatrixOverF {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Self {
        MatrixOverF { a, b, c, d }
    }

    pub fn from_ring(a: &RingElement, b: &RingElement, c: &RingElement, d: &RingElement) -> Self {
        MatrixOverF::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity(field: QuadraticField) -> Self {
        let (o, z) = (FieldElement::one(field), FieldElement::zero(field));
        MatrixOverF::new(o.clone(), z.clone(), z, o)
    }

    /// `(1, b; 0, 1)`.
    pub fn upper(b: FieldElement) -> Self {
        let f = b.field();
        MatrixOverF::new(FieldElement::one(f), b, FieldElement::zero(f), FieldElement::one(f))
    }

    /// `(1, 0; c, 1)`.
    pub fn lower(c: FieldElement) -> Self {
        let f = c.field();
        MatrixOverF::new(FieldElement::one(f), FieldElement::zero(f), c, FieldElement::one(f))
    }

    pub fn field(&self) -> QuadraticField {
        self.a.field()
    }

    pub fn det(&self) -> FieldElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &MatrixOverF) -> MatrixOverF {
        MatrixOverF::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> MatrixOverF {
        MatrixOverF::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Membership in `Γ[f, g]`: `a, d ∈ R`, `b ∈ f`, `c ∈ g`, determinant 1.
    pub fn in_gamma(&self, f: &FieldElement, g: &FieldElement) -> bool {
        self.det() == FieldElement::one(self.field())
            && self.a.is_integral()
            && self.d.is_integral()
            && self.b.in_ideal(f)
            && self.c.in_ideal(g)
    }

    /// Componentwise Möbius action.
    pub fn act(&self, z: &UpperHalfPoint) -> UpperHalfPoint {
        let (a, b, c, d) = (self.a.embeddings(), self.b.embeddings(), self.c.embeddings(), self.d.embeddings());
        let w = |i: usize| (z.z[i] * a[i] + b[i]) / (z.z[i] * c[i] + d[i]);
        UpperHalfPoint { z: [w(0), w(1)] }
    }

    /// `c_γ z + d_γ` in each embedding.
    pub fn denominator(&self, z: &UpperHalfPoint) -> [Complex64; 2] {
        let (c, d) = (self.c.embeddings(), self.d.embeddings());
        [z.z[0] * c[0] + d[0], z.z[1] * c[1] + d[1]]
    }

    pub fn scalar(field: QuadraticField, q: BigRational) -> FieldElement {
        FieldElement::new(field, q, BigRational::from_integer(0.into()))
    }
}

impl fmt::Display for MatrixOverF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}
