use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ring::{Res, ResidueRing};
use crate::error::{Error, Result};
use crate::field::{factor_u64, FieldContext, RingElement};

const NOT_UNIT: u32 = u32::MAX;

/// `(R/m)ˣ` as a direct sum of cyclic groups of prime-power order, with a
/// complete discrete-log table.
#[derive(Debug)]
pub struct UnitGroupStructure {
    ring: ResidueRing,
    generators: Vec<Res>,
    orders: Vec<u64>,
    radix: Vec<u64>,
    order: u64,
    exponent: u64,
    table: Vec<u32>,
    unit_logs: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct CachedGroup {
    d: i64,
    modulus: [String; 2],
    generators: Vec<[i64; 2]>,
    orders: Vec<u64>,
}

impl UnitGroupStructure {
    /// Builds `(R/m)ˣ` by enumeration and greedy splitting of each Sylow subgroup.
    pub fn build(ring: ResidueRing, units_of_r: &[RingElement]) -> Self {
        let units: Vec<Res> = ring.elements().filter(|&x| ring.is_unit(x)).collect();
        let n = units.len() as u64;
        let mut generators = Vec::new();
        let mut orders = Vec::new();
        for (ell, a) in factor_u64(n) {
            let pa = ell.pow(a);
            let cofactor = n / pa;
            let mut sylow: BTreeSet<usize> = BTreeSet::new();
            for &x in &units {
                sylow.insert(ring.index(ring.pow(x, cofactor)));
            }
            let sylow: Vec<Res> = sylow.into_iter().map(|i| ring.from_index(i)).collect();
            let (g, o) = split_p_group(&ring, &sylow, ell);
            generators.extend(g);
            orders.extend(o);
        }
        Self::from_generators(ring, generators, orders, units_of_r)
    }

    /// Rebuilds the log table from a known independent generating set.
    pub fn from_generators(ring: ResidueRing, generators: Vec<Res>, orders: Vec<u64>, units_of_r: &[RingElement]) -> Self {
        let mut radix = Vec::with_capacity(orders.len());
        let mut acc = 1u64;
        for &o in &orders {
            radix.push(acc);
            acc *= o;
        }
        let order = acc;
        let exponent = orders.iter().fold(1u64, |l, &o| l.lcm(&o));
        let mut table = vec![NOT_UNIT; ring.size()];
        let mut elems: Vec<(Res, u32)> = vec![(ring.one(), 0)];
        table[ring.index(ring.one())] = 0;
        for (i, (&g, &o)) in generators.iter().zip(&orders).enumerate() {
            let mut next = Vec::with_capacity(elems.len() * o as usize);
            for &(x, code) in &elems {
                let mut y = x;
                for j in 0..o {
                    if j > 0 {
                        y = ring.mul(y, g);
                    }
                    let c = code + (j * radix[i]) as u32;
                    table[ring.index(y)] = c;
                    next.push((y, c));
                }
            }
            elems = next;
        }
        let mut s = UnitGroupStructure {
            ring,
            generators,
            orders,
            radix,
            order,
            exponent,
            table,
            unit_logs: Vec::new(),
        };
        s.unit_logs = units_of_r.iter().map(|u| s.log(u).expect("a unit of R is a unit mod m")).collect();
        s
    }

    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }

    pub fn modulus(&self) -> &RingElement {
        self.ring.modulus()
    }

    pub fn generators(&self) -> Vec<RingElement> {
        self.generators.iter().map(|&g| self.ring.lift(g)).collect()
    }

    pub fn generator_residues(&self) -> &[Res] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    fn decode(&self, code: u32) -> Vec<u64> {
        self.orders.iter().zip(&self.radix).map(|(&o, &r)| (code as u64 / r) % o).collect()
    }

    pub fn log_res(&self, x: Res) -> Option<Vec<u64>> {
        match self.table[self.ring.index(x)] {
            NOT_UNIT => None,
            c => Some(self.decode(c)),
        }
    }

    /// Exponent vector of `x` on the generators, `None` when `x` is not a unit.
    pub fn log(&self, x: &RingElement) -> Option<Vec<u64>> {
        self.log_res(self.ring.reduce(x))
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        self.table[self.ring.index(self.ring.reduce(x))] != NOT_UNIT
    }

    pub fn element_order(&self, x: &RingElement) -> Option<u64> {
        let v = self.log(x)?;
        Some(v.iter().zip(&self.orders).fold(1u64, |l, (&e, &o)| l.lcm(&(o / e.gcd(&o)))))
    }

    /// Logs of the images of `-1` and the fundamental unit.
    pub fn unit_logs(&self) -> &[Vec<u64>] {
        &self.unit_logs
    }

    /// Order of the subgroup generated by the given exponent vectors.
    pub fn subgroup_order(&self, gens: &[Vec<u64>]) -> u64 {
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let zero = vec![0u64; self.orders.len()];
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(v) = frontier.pop() {
            for g in gens {
                let w: Vec<u64> = v.iter().zip(g).zip(&self.orders).map(|((a, b), o)| (a + b) % o).collect();
                if seen.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        seen.len() as u64
    }

    pub fn unit_image_order(&self) -> u64 {
        self.subgroup_order(&self.unit_logs)
    }

    /// Whether the images of the units of `R` generate the whole group.
    pub fn generated_by_units(&self) -> bool {
        self.unit_image_order() == self.order
    }

    /// Elementary divisors in decreasing order.
    pub fn invariant_multiset(&self) -> Vec<u64> {
        let mut v = self.orders.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "modulus": [self.modulus().a().to_string(), self.modulus().b().to_string()],
            "order": self.order,
            "generators": self.generators.iter().map(|g| [g.0.to_string(), g.1.to_string()]).collect::<Vec<_>>(),
            "orders": self.orders,
            "unit_image_order": self.unit_image_order(),
        })
    }
}

/// Independent generators of a finite abelian `ℓ`-group given by its elements.
fn split_p_group(ring: &ResidueRing, elems: &[Res], ell: u64) -> (Vec<Res>, Vec<u64>) {
    let size = elems.len();
    // logs of the span H of the generators chosen so far
    let mut in_h: Vec<Option<Vec<u64>>> = vec![None; ring.size()];
    in_h[ring.index(ring.one())] = Some(Vec::new());
    let mut h_elems: Vec<Res> = vec![ring.one()];
    let mut gens: Vec<Res> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    while h_elems.len() < size {
        // element of maximal order modulo H
        let mut best: Option<(u64, Res)> = None;
        for &x in elems {
            let mut k = 1u64;
            let mut y = x;
            while in_h[ring.index(y)].is_none() {
                y = ring.pow(y, ell);
                k *= ell;
            }
            if best.is_none_or(|(bk, _)| k > bk) {
                best = Some((k, x));
            }
        }
        let (k, x) = best.expect("group is nonempty");
        let m = in_h[ring.index(ring.pow(x, k))].clone().unwrap();
        let mut adjusted = x;
        for (i, &mi) in m.iter().enumerate() {
            debug_assert_eq!(mi % k, 0);
            let e = (orders[i] - (mi / k) % orders[i]) % orders[i];
            adjusted = ring.mul(adjusted, ring.pow(gens[i], e));
        }
        // extend H by ⟨adjusted⟩
        let mut next = Vec::with_capacity(h_elems.len() * k as usize);
        for &h in &h_elems {
            let base = in_h[ring.index(h)].clone().unwrap();
            let mut y = h;
            for j in 0..k {
                if j > 0 {
                    y = ring.mul(y, adjusted);
                }
                let mut v = base.clone();
                v.push(j);
                in_h[ring.index(y)] = Some(v);
                next.push(y);
            }
        }
        h_elems = next;
        gens.push(adjusted);
        orders.push(k);
    }
    (gens, orders)
}

impl FieldContext {
    /// `(R/m)ˣ` for the ideal `(m)`, memoised per context and optionally on disk.
    pub fn unit_group(&self, m: &RingElement) -> Result<Arc<UnitGroupStructure>> {
        let m = self.ideal_generator(m)?;
        if let Some(g) = self.group_cache().read().unwrap().get(&m) {
            return Ok(g.clone());
        }
        let primes: Vec<RingElement> = self.factor(&m)?.factors.into_iter().map(|(p, _)| p).collect();
        let ring = ResidueRing::new(&m, &primes);
        let units = [self.int(-1), self.fundamental_unit().clone()];
        let group = match self.load_cached_group(&m, &ring, &units) {
            Some(g) => g,
            None => {
                let g = UnitGroupStructure::build(ring, &units);
                self.store_cached_group(&m, &g);
                g
            }
        };
        let group = Arc::new(group);
        self.group_cache().write().unwrap().insert(m, group.clone());
        Ok(group)
    }

    fn cache_file(&self, m: &RingElement) -> Option<std::path::PathBuf> {
        self.cache_dir()
            .map(|dir| dir.join(format!("unit-group-d{}-{}_{}.json", self.d(), m.a(), m.b())))
    }

    fn load_cached_group(&self, m: &RingElement, ring: &ResidueRing, units: &[RingElement]) -> Option<UnitGroupStructure> {
        let path = self.cache_file(m)?;
        let text = fs::read_to_string(&path).ok()?;
        let cached: CachedGroup = serde_json::from_str(&text).ok()?;
        if cached.d != self.d() || cached.modulus != [m.a().to_string(), m.b().to_string()] {
            return None;
        }
        let gens: Vec<Res> = cached.generators.iter().map(|g| (g[0], g[1])).collect();
        let g = UnitGroupStructure::from_generators(ring.clone(), gens, cached.orders, units);
        // a stale or corrupted file is ignored rather than trusted
        let count = ring.elements().filter(|&x| ring.is_unit(x)).count() as u64;
        let complete = g.table.iter().filter(|&&c| c != NOT_UNIT).count() as u64;
        (g.order == count && complete == count).then_some(g)
    }

    fn store_cached_group(&self, m: &RingElement, g: &UnitGroupStructure) {
        if let Some(path) = self.cache_file(m) {
            let cached = CachedGroup {
                d: self.d(),
                modulus: [m.a().to_string(), m.b().to_string()],
                generators: g.generators.iter().map(|r| [r.0, r.1]).collect(),
                orders: g.orders.clone(),
            };
            let _ = write_atomic(&path, &serde_json::to_string(&cached).unwrap_or_default());
        }
    }

    /// Totally positive generator of `qⁿ` for the unique prime `q` above 2.
    pub fn prime_power_above_two(&self, n: u32) -> Result<RingElement> {
        let q = self
            .prime_above_two()
            .ok_or_else(|| Error::Parse("2 splits in this field".into()))?;
        self.canonical_rep_mod_squared_units(&q.pow(n))
    }
}

fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(tmp, path)
}
