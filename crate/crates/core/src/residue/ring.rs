use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::field::{QuadraticField, RingElement};

/// A residue class as reduced coordinates `(a, b)` with `0 ≤ a < A`, `0 ≤ b < B`.
pub type Res = (i64, i64);

/// `R/m` with coordinates reduced against the Hermite basis
/// `{(A, 0), (c, B)}` of the lattice `mR`, `A·B = |N(m)|`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    modulus: RingElement,
    field: QuadraticField,
    big_a: i64,
    big_b: i64,
    shift: i64,
    p: i64,
    q: i64,
    /// Prime divisors of the modulus as `(a, b, |norm|)`.
    primes: Vec<(i64, i64, i64)>,
}

impl ResidueRing {
    /// `primes` are the prime elements dividing `modulus`.
    pub fn new(modulus: &RingElement, primes: &[RingElement]) -> Self {
        assert!(!modulus.is_zero(), "zero modulus");
        let field = modulus.field();
        let (p, q) = field.omega_min_poly();
        let n = modulus.norm().abs().to_i64().expect("modulus norm fits in i64");
        let (ma, mb) = modulus.small_coords().expect("modulus coordinates fit in i64");
        // m·ω = q·mb + (ma + p·mb)·ω
        let (wa, wb) = (q * mb, ma + p * mb);
        let eg = mb.extended_gcd(&wb);
        let big_b = eg.gcd.abs();
        let sign = eg.gcd.signum();
        let big_a = n / big_b;
        let c = (sign * (eg.x * ma + eg.y * wa)).rem_euclid(big_a);
        let primes = primes
            .iter()
            .map(|pi| {
                let (a, b) = pi.small_coords().expect("prime coordinates fit in i64");
                (a, b, pi.norm().abs().to_i64().unwrap())
            })
            .collect();
        ResidueRing {
            modulus: modulus.clone(),
            field,
            big_a,
            big_b,
            shift: c,
            p,
            q,
            primes,
        }
    }

    pub fn modulus(&self) -> &RingElement {
        &self.modulus
    }

    pub fn field(&self) -> QuadraticField {
        self.field
    }

    pub fn size(&self) -> usize {
        (self.big_a * self.big_b) as usize
    }

    fn reduce_i128(&self, a: i128, b: i128) -> Res {
        let bb = self.big_b as i128;
        let k = b.div_euclid(bb);
        let b = b - k * bb;
        let a = (a - k * self.shift as i128).rem_euclid(self.big_a as i128);
        (a as i64, b as i64)
    }

    pub fn reduce(&self, x: &RingElement) -> Res {
        if let Some((a, b)) = x.small_coords() {
            return self.reduce_i128(a as i128, b as i128);
        }
        let bb = BigInt::from(self.big_b);
        let k = x.b().div_floor(&bb);
        let b = x.b() - &k * &bb;
        let a = (x.a() - &k * self.shift).mod_floor(&BigInt::from(self.big_a));
        (a.to_i64().unwrap(), b.to_i64().unwrap())
    }

    pub fn lift(&self, r: Res) -> RingElement {
        self.field.element(r.0, r.1)
    }

    pub fn index(&self, r: Res) -> usize {
        (r.1 * self.big_a + r.0) as usize
    }

    pub fn from_index(&self, i: usize) -> Res {
        let i = i as i64;
        (i % self.big_a, i / self.big_a)
    }

    pub fn one(&self) -> Res {
        self.reduce_i128(1, 0)
    }

    pub fn mul(&self, x: Res, y: Res) -> Res {
        let (a, b) = (x.0 as i128, x.1 as i128);
        let (c, d) = (y.0 as i128, y.1 as i128);
        let bd = b * d;
        self.reduce_i128(a * c + self.q as i128 * bd, a * d + b * c + self.p as i128 * bd)
    }

    pub fn add(&self, x: Res, y: Res) -> Res {
        self.reduce_i128(x.0 as i128 + y.0 as i128, x.1 as i128 + y.1 as i128)
    }

    pub fn neg(&self, x: Res) -> Res {
        self.reduce_i128(-(x.0 as i128), -(x.1 as i128))
    }

    pub fn pow(&self, x: Res, mut e: u64) -> Res {
        let mut result = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Whether the class is a unit, i.e. not divisible by any prime of the modulus.
    pub fn is_unit(&self, x: Res) -> bool {
        let conj = |a: i64, b: i64| -> (i128, i128) {
            if self.p == 1 {
                ((a + b) as i128, -(b as i128))
            } else {
                (a as i128, -(b as i128))
            }
        };
        for &(pa, pb, n) in &self.primes {
            let (ca, cb) = conj(pa, pb);
            let (a, b) = (x.0 as i128, x.1 as i128);
            let bd = b * cb;
            let ra = a * ca + self.q as i128 * bd;
            let rb = a * cb + b * ca + self.p as i128 * bd;
            let n = n as i128;
            if ra % n == 0 && rb % n == 0 {
                return false;
            }
        }
        true
    }

    pub fn is_zero(&self, x: Res) -> bool {
        x == (0, 0)
    }

    /// Every residue class in index order.
    pub fn elements(&self) -> impl Iterator<Item = Res> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }
}
