//! Finite posets, monotone maps, and symmetric monoidal posets.
//!
//! Posets are thin, so a 2-cell between monotone maps is a yes/no fact
//! ([`Cell2::holds`]) rather than data, and every pseudo-monoid law is an
//! equation. Whatever would be coherence data in a richer 2-category is a
//! boolean here.
//!
//! Predicate fibers are powers `V^A` of a small value algebra `V` (see
//! [`Values`]). An element of `V^A` is indexed in mixed radix with element
//! `i` of `A` as digit `i`, least significant first, so for the booleans
//! the index of a subset is its bitmask.

use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::report::{Clause, Report};
use std::fmt;
use std::sync::Arc;

/// Largest carrier we are willing to tabulate.
pub const MAX_CARRIER: usize = 1 << 22;

#[derive(Debug, PartialEq, Eq)]
enum Shape {
    Explicit { size: usize, leq: Vec<bool> },
    /// Pointwise order on `values^len`.
    Power { values: Poset, len: usize, size: usize },
    /// Row-major product order.
    Product { a: Poset, b: Poset },
}

/// A finite partial order on `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset(Arc<Shape>);

impl Poset {
    /// Validates reflexivity, antisymmetry and transitivity of a row-major
    /// relation matrix.
    pub fn explicit(size: usize, leq: Vec<bool>) -> Result<Self> {
        if leq.len() != size * size {
            return Err(Error::ShapeMismatch(format!("relation of length {} for {size} elements", leq.len())));
        }
        let r = |i: usize, j: usize| leq[i * size + j];
        for i in 0..size {
            if !r(i, i) {
                return Err(Error::Invalid(format!("not reflexive at {i}")));
            }
            for j in 0..size {
                if i != j && r(i, j) && r(j, i) {
                    return Err(Error::Invalid(format!("not antisymmetric at {i}, {j}")));
                }
                for k in 0..size {
                    if r(i, j) && r(j, k) && !r(i, k) {
                        return Err(Error::Invalid(format!("not transitive at {i} ≤ {j} ≤ {k}")));
                    }
                }
            }
        }
        Ok(Poset(Arc::new(Shape::Explicit { size, leq })))
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let leq = (0..n * n).map(|k| k / n <= k % n).collect();
        Poset(Arc::new(Shape::Explicit { size: n, leq }))
    }

    /// The chain with the order reversed: `n-1 < … < 0`.
    pub fn reversed_chain(n: usize) -> Self {
        let leq = (0..n * n).map(|k| k / n >= k % n).collect();
        Poset(Arc::new(Shape::Explicit { size: n, leq }))
    }

    pub fn discrete(n: usize) -> Self {
        let leq = (0..n * n).map(|k| k / n == k % n).collect();
        Poset(Arc::new(Shape::Explicit { size: n, leq }))
    }

    pub fn terminal() -> Self {
        Poset::discrete(1)
    }

    /// `values^len` ordered pointwise.
    pub fn power(values: &Poset, len: usize) -> Result<Self> {
        let size = u32::try_from(len)
            .ok()
            .and_then(|l| values.size().checked_pow(l))
            .filter(|&s| s <= MAX_CARRIER)
            .ok_or_else(|| Error::Invalid(format!("{}^{len} elements is too many to tabulate", values.size())))?;
        Ok(Poset(Arc::new(Shape::Power { values: values.clone(), len, size })))
    }

    pub fn product(a: &Poset, b: &Poset) -> Self {
        Poset(Arc::new(Shape::Product { a: a.clone(), b: b.clone() }))
    }

    pub fn size(&self) -> usize {
        match &*self.0 {
            Shape::Explicit { size, .. } | Shape::Power { size, .. } => *size,
            Shape::Product { a, b } => a.size() * b.size(),
        }
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        match &*self.0 {
            Shape::Explicit { size, leq } => leq[i * size + j],
            Shape::Power { values, len, .. } => {
                let base = values.size();
                let (mut i, mut j) = (i, j);
                for _ in 0..*len {
                    if !values.leq(i % base, j % base) {
                        return false;
                    }
                    i /= base;
                    j /= base;
                }
                true
            }
            Shape::Product { a, b } => {
                let n = b.size();
                a.leq(i / n, j / n) && b.leq(i % n, j % n)
            }
        }
    }

    /// Index of the pair `(i, j)` in a product poset `a × b`.
    pub fn pair(&self, i: usize, j: usize) -> usize {
        match &*self.0 {
            Shape::Product { b, .. } => i * b.size() + j,
            _ => panic!("pair() on a poset that is not a product"),
        }
    }

    pub fn factors(&self) -> Option<(&Poset, &Poset)> {
        match &*self.0 {
            Shape::Product { a, b } => Some((a, b)),
            _ => None,
        }
    }
}

/// Digits of `index` in base `levels`, least significant first.
pub fn decode(levels: usize, len: usize, mut index: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let d = index % levels;
            index /= levels;
            d as u8
        })
        .collect()
}

/// Inverse of [`decode`].
pub fn encode(levels: usize, digits: &[u8]) -> usize {
    digits.iter().rev().fold(0, |acc, &d| acc * levels + d as usize)
}

/// An order-preserving map, stored as a table. Construction does not
/// enforce monotonicity; see [`MonotoneMap::check_monotone`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    dom: Poset,
    cod: Poset,
    map: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(dom: Poset, cod: Poset, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.size() {
            return Err(Error::ShapeMismatch(format!("table of length {} for {} elements", map.len(), dom.size())));
        }
        if let Some(v) = map.iter().find(|&&v| v >= cod.size()) {
            return Err(Error::OutOfRange(format!("value {v} outside a poset of {} elements", cod.size())));
        }
        Ok(MonotoneMap { dom, cod, map })
    }

    /// Like [`MonotoneMap::new`] but rejects non-monotone tables.
    pub fn checked(dom: Poset, cod: Poset, map: Vec<usize>) -> Result<Self> {
        let m = MonotoneMap::new(dom, cod, map)?;
        m.check_monotone()?;
        Ok(m)
    }

    pub fn tabulate(dom: &Poset, cod: &Poset, f: impl Fn(usize) -> usize) -> Self {
        let map = (0..dom.size()).map(f).collect();
        MonotoneMap { dom: dom.clone(), cod: cod.clone(), map }
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap { dom: p.clone(), cod: p.clone(), map: (0..p.size()).collect() }
    }

    /// The map `1 → p` picking `x`.
    pub fn point(p: &Poset, x: usize) -> Self {
        MonotoneMap { dom: Poset::terminal(), cod: p.clone(), map: vec![x] }
    }

    pub fn dom(&self) -> &Poset {
        &self.dom
    }

    pub fn cod(&self) -> &Poset {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn check_monotone(&self) -> Result<()> {
        let n = self.dom.size();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.dom.leq(i, j) && !self.cod.leq(self.map[i], self.map[j]) {
                    return Err(Error::NotMonotone(format!(
                        "{i} ≤ {j} but {} ≰ {}",
                        self.map[i], self.map[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_monotone(&self) -> bool {
        self.check_monotone().is_ok()
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &MonotoneMap) -> Result<MonotoneMap> {
        if self.cod != then.dom {
            return Err(Error::ShapeMismatch("composing monotone maps with mismatched posets".into()));
        }
        Ok(MonotoneMap {
            dom: self.dom.clone(),
            cod: then.cod.clone(),
            map: self.map.iter().map(|&i| then.map[i]).collect(),
        })
    }
}

/// `f × g` on product posets.
pub fn map_product(f: &MonotoneMap, g: &MonotoneMap) -> MonotoneMap {
    let dom = Poset::product(&f.dom, &g.dom);
    let cod = Poset::product(&f.cod, &g.cod);
    let m = g.cod.size();
    let map = f.map.iter().flat_map(|&i| g.map.iter().map(move |&j| i * m + j)).collect();
    MonotoneMap { dom, cod, map }
}

pub fn product_poset(a: &Poset, b: &Poset) -> Poset {
    Poset::product(a, b)
}

/// Whether `lower ≤ upper` pointwise. In a thin 2-category this is all a
/// 2-cell is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell2 {
    pub lower: MonotoneMap,
    pub upper: MonotoneMap,
    pub holds: bool,
    /// First element where the inequality fails.
    pub witness: Option<usize>,
}

pub fn leq_maps(f: &MonotoneMap, g: &MonotoneMap) -> Result<Cell2> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::ShapeMismatch("comparing maps with different boundaries".into()));
    }
    let witness = (0..f.dom.size()).find(|&i| !f.cod.leq(f.map[i], g.map[i]));
    Ok(Cell2 { lower: f.clone(), upper: g.clone(), holds: witness.is_none(), witness })
}

/// Both `f ≤ g` and `g ≤ f`; by antisymmetry, equality of tables.
pub fn iso_maps(f: &MonotoneMap, g: &MonotoneMap) -> Result<bool> {
    Ok(leq_maps(f, g)?.holds && leq_maps(g, f)?.holds)
}

/// A symmetric monoidal poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoPoset {
    pub carrier: Poset,
    /// `carrier × carrier → carrier`.
    pub tensor: MonotoneMap,
    pub unit: usize,
}

impl MonoPoset {
    pub fn new(carrier: Poset, tensor: MonotoneMap, unit: usize) -> Result<Self> {
        let sq = Poset::product(&carrier, &carrier);
        if tensor.dom != sq || tensor.cod != carrier {
            return Err(Error::ShapeMismatch("tensor must map carrier × carrier to carrier".into()));
        }
        if unit >= carrier.size() {
            return Err(Error::OutOfRange(format!("unit {unit}")));
        }
        Ok(MonoPoset { carrier, tensor, unit })
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.tensor.map[a * self.carrier.size() + b]
    }
}

/// Associativity, unitality, symmetry and monotonicity of the tensor.
pub fn check_mono_poset(m: &MonoPoset) -> Report {
    let n = m.carrier.size();
    let mut assoc = Clause::new("monoid.associativity", "pseudo-monoid associativity");
    let mut unit = Clause::new("monoid.unit", "pseudo-monoid unitality");
    let mut sym = Clause::new("monoid.symmetry", "symmetry");
    let mut mono = Clause::new("monoid.monotone", "tensor is monotone in each argument");
    for a in 0..n {
        unit.check(m.mul(a, m.unit) == a && m.mul(m.unit, a) == a, || format!("unit law at {a}"));
        for b in 0..n {
            sym.check(m.mul(a, b) == m.mul(b, a), || format!("{a}⊗{b} ≠ {b}⊗{a}"));
            for c in 0..n {
                assoc.check(m.mul(m.mul(a, b), c) == m.mul(a, m.mul(b, c)), || format!("({a}⊗{b})⊗{c}"));
            }
        }
    }
    for a in 0..n {
        for a2 in (0..n).filter(|&a2| m.carrier.leq(a, a2)) {
            for b in 0..n {
                mono.check(m.carrier.leq(m.mul(a, b), m.mul(a2, b)), || {
                    format!("{a} ≤ {a2} but {a}⊗{b} ≰ {a2}⊗{b}")
                });
            }
        }
    }
    let mut r = Report::new();
    r.push(assoc);
    r.push(unit);
    r.push(sym);
    r.push(mono);
    r
}

/// A finite commutative ordered monoid with binary joins and meets, used
/// pointwise as a predicate algebra. Values are small codes `0..levels`.
pub trait Values: Send + Sync + fmt::Debug {
    fn levels(&self) -> usize;
    fn leq(&self, a: u8, b: u8) -> bool;
    fn tensor(&self, a: u8, b: u8) -> u8;
    fn unit(&self) -> u8;
    fn join(&self, a: u8, b: u8) -> u8;
    fn bottom(&self) -> u8;
    fn meet(&self, a: u8, b: u8) -> u8;
    fn top(&self) -> u8;
    fn show(&self, a: u8) -> String;
    fn name(&self) -> String;

    fn poset(&self) -> Poset {
        let n = self.levels();
        let leq = (0..n * n).map(|k| self.leq((k / n) as u8, (k % n) as u8)).collect();
        Poset::explicit(n, leq).expect("value order is a partial order")
    }
}

/// Truth values `false < true` under conjunction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Booleans;

impl Values for Booleans {
    fn levels(&self) -> usize {
        2
    }
    fn leq(&self, a: u8, b: u8) -> bool {
        a <= b
    }
    fn tensor(&self, a: u8, b: u8) -> u8 {
        a & b
    }
    fn unit(&self) -> u8 {
        1
    }
    fn join(&self, a: u8, b: u8) -> u8 {
        a | b
    }
    fn bottom(&self) -> u8 {
        0
    }
    fn meet(&self, a: u8, b: u8) -> u8 {
        a & b
    }
    fn top(&self) -> u8 {
        1
    }
    fn show(&self, a: u8) -> String {
        (a == 1).to_string()
    }
    fn name(&self) -> String {
        "powerset".into()
    }
}

/// A value of the truncated cost chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(u32),
    Inf,
}

impl Cost {
    /// Addition where anything above `cap` becomes ∞.
    pub fn saturating_add(self, other: Cost, cap: u32) -> Cost {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) if a + b <= cap => Cost::Finite(a + b),
            _ => Cost::Inf,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(c) => write!(f, "{c}"),
            Cost::Inf => f.write_str("inf"),
        }
    }
}

/// The chain `{0, 1, …, cap, ∞}` ordered by `≥` (so 0 is the top) with
/// saturating addition: a finite quotient of the min-plus quantale.
///
/// Code `c ≤ cap` stands for cost `c`; code `cap + 1` for ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedCosts {
    pub cap: u8,
}

impl TruncatedCosts {
    pub fn new(cap: u8) -> Self {
        assert!((1..254).contains(&cap), "cost cap must lie in 1..254");
        TruncatedCosts { cap }
    }

    pub fn inf(&self) -> u8 {
        self.cap + 1
    }

    pub fn encode(&self, c: Cost) -> u8 {
        match c {
            Cost::Finite(v) if v <= self.cap as u32 => v as u8,
            _ => self.inf(),
        }
    }

    pub fn decode(&self, code: u8) -> Cost {
        if code > self.cap {
            Cost::Inf
        } else {
            Cost::Finite(code as u32)
        }
    }
}

impl Values for TruncatedCosts {
    fn levels(&self) -> usize {
        self.cap as usize + 2
    }
    fn leq(&self, a: u8, b: u8) -> bool {
        a >= b
    }
    fn tensor(&self, a: u8, b: u8) -> u8 {
        let s = a as u16 + b as u16;
        if s > self.cap as u16 {
            self.inf()
        } else {
            s as u8
        }
    }
    fn unit(&self) -> u8 {
        0
    }
    fn join(&self, a: u8, b: u8) -> u8 {
        a.min(b)
    }
    fn bottom(&self) -> u8 {
        self.inf()
    }
    fn meet(&self, a: u8, b: u8) -> u8 {
        a.max(b)
    }
    fn top(&self) -> u8 {
        0
    }
    fn show(&self, a: u8) -> String {
        self.decode(a).to_string()
    }
    fn name(&self) -> String {
        format!("tropical(K={})", self.cap)
    }
}

/// `V^A` with the pointwise tensor.
pub fn pointwise_fiber(values: &dyn Values, base: FinSet) -> Result<MonoPoset> {
    let levels = values.levels();
    let n = base.size();
    let carrier = Poset::power(&values.poset(), n)?;
    let sq = Poset::product(&carrier, &carrier);
    let size = carrier.size();
    let tensor = MonotoneMap::tabulate(&sq, &carrier, |k| {
        let a = decode(levels, n, k / size);
        let b = decode(levels, n, k % size);
        let c: Vec<u8> = a.iter().zip(&b).map(|(&x, &y)| values.tensor(x, y)).collect();
        encode(levels, &c)
    });
    let unit = encode(levels, &vec![values.unit(); n]);
    MonoPoset::new(carrier, tensor, unit)
}

/// Subsets of a finite set under intersection, indexed by bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowersetFiber {
    pub base: FinSet,
}

impl PowersetFiber {
    pub fn new(base: FinSet) -> Self {
        PowersetFiber { base }
    }

    pub fn mono_poset(&self) -> Result<MonoPoset> {
        pointwise_fiber(&Booleans, self.base)
    }
}

/// Cost functions `base → {0, …, K, ∞}` under pointwise saturating addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TropicalFiber {
    pub base: FinSet,
    pub values: TruncatedCosts,
}

impl TropicalFiber {
    pub fn new(base: FinSet, cap: u8) -> Self {
        TropicalFiber { base, values: TruncatedCosts::new(cap) }
    }

    pub fn mono_poset(&self) -> Result<MonoPoset> {
        pointwise_fiber(&self.values, self.base)
    }

    pub fn index_of(&self, costs: &[Cost]) -> usize {
        let codes: Vec<u8> = costs.iter().map(|&c| self.values.encode(c)).collect();
        encode(self.values.levels(), &codes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_poset_validation() {
        assert!(Poset::explicit(2, vec![true, true, true, true]).is_err());
        assert!(Poset::explicit(2, vec![true, false, false, false]).is_err());
        assert!(Poset::explicit(2, vec![true, true, false, true]).is_ok());
    }

    #[test]
    fn leq_maps_examples() {
        let c = Poset::chain(2);
        let one = Poset::terminal();
        let const0 = MonotoneMap::new(one.clone(), c.clone(), vec![0]).unwrap();
        let const1 = MonotoneMap::new(one.clone(), c.clone(), vec![1]).unwrap();
        assert!(leq_maps(&const0, &const0).unwrap().holds);
        assert!(iso_maps(&const0, &const0).unwrap());
        assert!(leq_maps(&const0, &const1).unwrap().holds);
        assert!(!leq_maps(&const1, &const0).unwrap().holds);
        assert!(leq_maps(&const0, &MonotoneMap::identity(&c)).is_err());
    }

    #[test]
    fn image_after_preimage_is_deflationary() {
        // f = constant {0,1} → {0}; ∃f ∘ f* on P({0}) versus the identity.
        let p1 = PowersetFiber::new(FinSet(1)).mono_poset().unwrap().carrier;
        // preimage: ∅ ↦ ∅, {0} ↦ {0,1}; image: ∅ ↦ ∅, nonempty ↦ {0}.
        let roundtrip = MonotoneMap::new(p1.clone(), p1.clone(), vec![0, 1]).unwrap();
        let id = MonotoneMap::identity(&p1);
        assert!(iso_maps(&roundtrip, &id).unwrap());
        // Preimage after image on P({0,1}) is inflationary but not equal.
        let p2 = PowersetFiber::new(FinSet(2)).mono_poset().unwrap().carrier;
        let up = MonotoneMap::new(p2.clone(), p2.clone(), vec![0, 3, 3, 3]).unwrap();
        let id2 = MonotoneMap::identity(&p2);
        assert!(leq_maps(&id2, &up).unwrap().holds);
        let back = leq_maps(&up, &id2).unwrap();
        assert!(!back.holds);
        assert_eq!(back.witness, Some(1));
    }

    #[test]
    fn fibers_are_monoidal() {
        assert!(check_mono_poset(&PowersetFiber::new(FinSet(3)).mono_poset().unwrap()).passed());
        let t = TropicalFiber::new(FinSet(2), 3).mono_poset().unwrap();
        assert_eq!(t.carrier.size(), 25);
        assert!(check_mono_poset(&t).passed());
    }

    #[test]
    fn broken_tensor_is_caught() {
        let good = PowersetFiber::new(FinSet(1)).mono_poset().unwrap();
        // Negation-flavoured tensor: not monotone.
        let sq = Poset::product(&good.carrier, &good.carrier);
        let bad = MonotoneMap::new(sq, good.carrier.clone(), vec![1, 0, 0, 1]).unwrap();
        let m = MonoPoset::new(good.carrier.clone(), bad, 1).unwrap();
        let r = check_mono_poset(&m);
        let mono = r.get("monoid.monotone").unwrap();
        assert!(!mono.passed());
        assert!(mono.witness.is_some());
    }

    #[test]
    fn product_indexing_is_row_major() {
        let a = Poset::chain(2);
        let b = Poset::chain(3);
        let p = product_poset(&a, &b);
        assert_eq!(p.size(), 6);
        assert_eq!(p.pair(1, 2), 5);
        assert!(p.leq(p.pair(0, 1), p.pair(1, 2)));
        assert!(!p.leq(p.pair(1, 0), p.pair(0, 2)));
        let f = MonotoneMap::identity(&a);
        let g = MonotoneMap::new(b.clone(), b.clone(), vec![0, 0, 2]).unwrap();
        let fg = map_product(&f, &g);
        assert_eq!(fg.table(), &[0, 0, 2, 3, 3, 5]);
    }

    #[test]
    fn power_index_is_bitmask_for_booleans() {
        let p = Poset::power(&Booleans.poset(), 3).unwrap();
        assert_eq!(p.size(), 8);
        assert!(p.leq(0b001, 0b011));
        assert!(!p.leq(0b010, 0b001));
        assert_eq!(encode(2, &[1, 0, 1]), 0b101);
        assert_eq!(decode(2, 3, 0b110), vec![0, 1, 1]);
    }

    #[test]
    fn cost_order_runs_backwards() {
        let v = TruncatedCosts::new(3);
        assert!(v.leq(v.inf(), 0));
        assert!(!v.leq(0, 1));
        assert_eq!(v.tensor(2, 2), v.inf());
        assert_eq!(v.tensor(1, 2), 3);
        assert_eq!(Cost::Finite(2).saturating_add(Cost::Finite(2), 3), Cost::Inf);
    }

    #[test]
    fn tensor_idempotence_tags() {
        let v = TruncatedCosts::new(3);
        assert!((0..2u8).all(|a| Booleans.tensor(a, a) == a));
        assert!((0..v.levels() as u8).any(|a| v.tensor(a, a) != a));
    }
}
