//! Finite sets and functions, their limits and colimits, and adequate triples.
//!
//! A finite set of size `n` has elements `0..n`. Every construction here
//! picks a canonical indexing for its result (row-major products,
//! lexicographic pullback pairs, first-occurrence pushout classes) so that
//! two constructions of "the same" object are equal as data, not merely
//! isomorphic.

use crate::error::{Error, Result};
use crate::report::{Clause, Report};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FinSet(pub usize);

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet(size)
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A function between finite sets, stored as its table of values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    map: Vec<usize>,
}

impl FinFn {
    pub fn new(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.size() {
            return Err(Error::DomMismatch(format!(
                "table of length {} for domain of size {}",
                map.len(),
                dom.size()
            )));
        }
        if let Some((i, &v)) = map.iter().enumerate().find(|(_, &v)| v >= cod.size()) {
            return Err(Error::OutOfRange(format!("entry {i} is {v}, codomain has size {}", cod.size())));
        }
        Ok(FinFn { dom, cod, map })
    }

    /// Shorthand for tests and examples; panics on malformed input.
    pub fn from_table(cod: usize, map: &[usize]) -> Self {
        FinFn::new(FinSet(map.len()), FinSet(cod), map.to_vec()).expect("well-formed table")
    }

    pub fn identity(a: FinSet) -> Self {
        FinFn { dom: a, cod: a, map: a.elements().collect() }
    }

    pub fn dom(&self) -> FinSet {
        self.dom
    }

    pub fn cod(&self) -> FinSet {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom == self.cod && self.is_injective()
    }

    /// Elements of the domain sent to `b`, in increasing order.
    pub fn fiber(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().enumerate().filter(move |(_, &v)| v == b).map(|(i, _)| i)
    }

    /// `then ∘ self`: first `self`, then `then`.
    pub fn then(&self, then: &FinFn) -> Result<FinFn> {
        compose(self, then)
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<FinFn> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod.size()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Some(FinFn { dom: self.cod, cod: self.dom, map: inv })
    }

    /// Every function `dom → cod`, in lexicographic order of tables (first
    /// entry most significant).
    pub fn all(dom: FinSet, cod: FinSet) -> AllMaps {
        AllMaps::new(dom, cod)
    }
}

impl fmt::Display for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}{:?}", self.dom, self.cod, self.map)
    }
}

/// Iterator over all functions between two finite sets.
#[derive(Debug, Clone)]
pub struct AllMaps {
    dom: FinSet,
    cod: FinSet,
    next: Option<Vec<usize>>,
}

impl AllMaps {
    fn new(dom: FinSet, cod: FinSet) -> Self {
        let next = if cod.is_empty() && !dom.is_empty() { None } else { Some(vec![0; dom.size()]) };
        AllMaps { dom, cod, next }
    }
}

impl Iterator for AllMaps {
    type Item = FinFn;

    fn next(&mut self) -> Option<FinFn> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        let mut advanced = false;
        while pos > 0 {
            pos -= 1;
            if succ[pos] + 1 < self.cod.size() {
                succ[pos] += 1;
                advanced = true;
                break;
            }
            succ[pos] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(FinFn { dom: self.dom, cod: self.cod, map: current })
    }
}

/// `g ∘ f`.
pub fn compose(f: &FinFn, g: &FinFn) -> Result<FinFn> {
    if f.cod != g.dom {
        return Err(Error::CodMismatch(format!("cannot compose {f} with {g}")));
    }
    Ok(FinFn { dom: f.dom, cod: g.cod, map: f.map.iter().map(|&i| g.map[i]).collect() })
}

/// A chosen pullback of a cospan `x: X → Z ← Y: y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub apex: FinSet,
    /// Projection to `X`.
    pub p: FinFn,
    /// Projection to `Y`.
    pub q: FinFn,
}

impl Pullback {
    /// The unique map from a cone `(z1, z2)` into the apex.
    pub fn mediate(&self, z1: &FinFn, z2: &FinFn) -> Result<FinFn> {
        if z1.dom != z2.dom {
            return Err(Error::DomMismatch(format!("cone legs {z1} and {z2}")));
        }
        let index: HashMap<(usize, usize), usize> =
            self.apex.elements().map(|k| ((self.p.map[k], self.q.map[k]), k)).collect();
        let map = z1
            .map
            .iter()
            .zip(&z2.map)
            .map(|(&a, &b)| {
                index.get(&(a, b)).copied().ok_or_else(|| {
                    Error::NotAPullback(format!("cone point ({a},{b}) does not lie over the cospan"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FinFn::new(z1.dom, self.apex, map)
    }
}

/// Pullback of `x` and `y`. The apex lists the pairs `(a, b)` with
/// `x(a) = y(b)` lexicographically, except that pulling back along an
/// identity returns the other leg verbatim.
pub fn pullback(x: &FinFn, y: &FinFn) -> Result<Pullback> {
    if x.cod != y.cod {
        return Err(Error::CodMismatch(format!("cospan {x}, {y} has no common codomain")));
    }
    if y.is_identity() {
        return Ok(Pullback { apex: x.dom, p: FinFn::identity(x.dom), q: x.clone() });
    }
    if x.is_identity() {
        return Ok(Pullback { apex: y.dom, p: y.clone(), q: FinFn::identity(y.dom) });
    }
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for a in x.dom.elements() {
        for b in y.fiber(x.map[a]) {
            ps.push(a);
            qs.push(b);
        }
    }
    let apex = FinSet(ps.len());
    Ok(Pullback {
        apex,
        p: FinFn { dom: apex, cod: x.dom, map: ps },
        q: FinFn { dom: apex, cod: y.dom, map: qs },
    })
}

/// Type tag attached to a port of a wiring diagram.
pub type Label = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelledFinSet {
    labels: Vec<Label>,
}

impl LabelledFinSet {
    pub fn new(labels: Vec<Label>) -> Self {
        LabelledFinSet { labels }
    }

    pub fn from_strs(labels: &[&str]) -> Self {
        LabelledFinSet { labels: labels.iter().map(|s| s.to_string()).collect() }
    }

    pub fn base(&self) -> FinSet {
        FinSet(self.labels.len())
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Disjoint union, left ports first.
    pub fn coproduct(&self, other: &LabelledFinSet) -> LabelledFinSet {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        LabelledFinSet { labels }
    }

    /// Does `f: self → cod` preserve labels?
    pub fn preserved_by(&self, f: &FinFn, cod: &LabelledFinSet) -> Result<()> {
        if f.dom() != self.base() || f.cod() != cod.base() {
            return Err(Error::ShapeMismatch(format!("{f} is not a map between the labelled sets")));
        }
        for (i, &j) in f.table().iter().enumerate() {
            if self.labels[i] != cod.labels[j] {
                return Err(Error::LabelClash(format!(
                    "port {i} labelled {:?} sent to {j} labelled {:?}",
                    self.labels[i], cod.labels[j]
                )));
            }
        }
        Ok(())
    }
}

/// A chosen pushout of a span `f: S → A`, `g: S → B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushout {
    pub apex: FinSet,
    /// `A → apex`.
    pub i1: FinFn,
    /// `B → apex`.
    pub i2: FinFn,
}

impl Pushout {
    /// The unique map out of the apex induced by a cocone `(c1, c2)`.
    pub fn mediate(&self, c1: &FinFn, c2: &FinFn) -> Result<FinFn> {
        if c1.cod != c2.cod {
            return Err(Error::CodMismatch(format!("cocone legs {c1} and {c2}")));
        }
        let mut out: Vec<Option<usize>> = vec![None; self.apex.size()];
        let legs = [(&self.i1, c1), (&self.i2, c2)];
        for (inj, c) in legs {
            for (i, &k) in inj.map.iter().enumerate() {
                match out[k] {
                    None => out[k] = Some(c.map[i]),
                    Some(v) if v == c.map[i] => {}
                    Some(v) => {
                        return Err(Error::Invalid(format!(
                            "cocone disagrees on class {k}: {v} vs {}",
                            c.map[i]
                        )))
                    }
                }
            }
        }
        let map = out.into_iter().map(|v| v.unwrap_or(0)).collect();
        FinFn::new(self.apex, c1.cod, map)
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Pushout of `f` and `g`: the quotient of `cod f ⊔ cod g` by the smallest
/// equivalence with `f(s) ~ g(s)`. Classes are numbered by their first
/// element in the order `cod f` then `cod g`.
pub fn pushout(f: &FinFn, g: &FinFn) -> Result<Pushout> {
    if f.dom != g.dom {
        return Err(Error::DomMismatch(format!("span {f}, {g} has no common domain")));
    }
    let left = f.cod.size();
    let total = left + g.cod.size();
    let mut parent: Vec<usize> = (0..total).collect();
    for s in f.dom.elements() {
        let a = find(&mut parent, f.map[s]);
        let b = find(&mut parent, left + g.map[s]);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let mut class_of_root = vec![usize::MAX; total];
    let mut next = 0;
    let mut class = Vec::with_capacity(total);
    for i in 0..total {
        let r = find(&mut parent, i);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = next;
            next += 1;
        }
        class.push(class_of_root[r]);
    }
    let apex = FinSet(next);
    Ok(Pushout {
        apex,
        i1: FinFn { dom: f.cod, cod: apex, map: class[..left].to_vec() },
        i2: FinFn { dom: g.cod, cod: apex, map: class[left..].to_vec() },
    })
}

/// Pushout of labelled sets; every class inherits the common label of its
/// members.
pub fn pushout_labelled(
    f: &FinFn,
    g: &FinFn,
    a: &LabelledFinSet,
    b: &LabelledFinSet,
) -> Result<(LabelledFinSet, Pushout)> {
    if f.cod != a.base() || g.cod != b.base() {
        return Err(Error::ShapeMismatch("labelled sets do not match the pushout legs".into()));
    }
    let po = pushout(f, g)?;
    let mut labels: Vec<Option<Label>> = vec![None; po.apex.size()];
    let sides = [(&po.i1, a), (&po.i2, b)];
    for (inj, src) in sides {
        for (i, &k) in inj.map.iter().enumerate() {
            match &labels[k] {
                None => labels[k] = Some(src.labels[i].clone()),
                Some(l) if *l == src.labels[i] => {}
                Some(l) => {
                    return Err(Error::LabelClash(format!(
                        "class {k} glues {l:?} to {:?}",
                        src.labels[i]
                    )))
                }
            }
        }
    }
    let labels = labels.into_iter().map(|l| l.expect("every class has a member")).collect();
    Ok((LabelledFinSet { labels }, po))
}

/// Binary product with row-major indexing `(i, j) ↦ i·|b| + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub apex: FinSet,
    pub pi_a: FinFn,
    pub pi_b: FinFn,
}

impl Product {
    pub fn pair(&self, i: usize, j: usize) -> usize {
        i * self.pi_b.cod.size() + j
    }

    /// `⟨f, g⟩: Z → a × b`.
    pub fn tuple(&self, f: &FinFn, g: &FinFn) -> Result<FinFn> {
        if f.dom != g.dom || f.cod != self.pi_a.cod || g.cod != self.pi_b.cod {
            return Err(Error::ShapeMismatch(format!("cannot pair {f} and {g}")));
        }
        let map = f.map.iter().zip(&g.map).map(|(&i, &j)| self.pair(i, j)).collect();
        FinFn::new(f.dom, self.apex, map)
    }
}

pub fn product(a: FinSet, b: FinSet) -> Product {
    let apex = FinSet(a.size() * b.size());
    let n = b.size();
    Product {
        apex,
        pi_a: FinFn { dom: apex, cod: a, map: apex.elements().map(|k| k / n).collect() },
        pi_b: FinFn { dom: apex, cod: b, map: apex.elements().map(|k| k % n).collect() },
    }
}

/// `f × g: A × B → A' × B'`.
pub fn map_product(f: &FinFn, g: &FinFn) -> FinFn {
    let dom = FinSet(f.dom.size() * g.dom.size());
    let cod = FinSet(f.cod.size() * g.cod.size());
    let m = g.cod.size();
    let map = f.map.iter().flat_map(|&i| g.map.iter().map(move |&j| i * m + j)).collect();
    FinFn { dom, cod, map }
}

/// `Δ: a → a × a`.
pub fn diagonal(a: FinSet) -> FinFn {
    let n = a.size();
    FinFn { dom: a, cod: FinSet(n * n), map: a.elements().map(|i| i * n + i).collect() }
}

pub fn terminal() -> FinSet {
    FinSet(1)
}

/// The unique map `a → 1`.
pub fn bang(a: FinSet) -> FinFn {
    FinFn { dom: a, cod: terminal(), map: vec![0; a.size()] }
}

/// The symmetry `a × b → b × a`.
pub fn swap(a: FinSet, b: FinSet) -> FinFn {
    let (n, m) = (a.size(), b.size());
    let map = (0..n * m).map(|k| (k % m) * n + k / m).collect();
    FinFn { dom: FinSet(n * m), cod: FinSet(n * m), map }
}

/// A class of morphisms of finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorClass {
    All,
    Injections,
    Surjections,
    Explicit(Vec<FinFn>),
}

impl MorClass {
    pub fn contains(&self, f: &FinFn) -> bool {
        match self {
            MorClass::All => true,
            MorClass::Injections => f.is_injective(),
            MorClass::Surjections => f.is_surjective(),
            MorClass::Explicit(list) => list.contains(f),
        }
    }
}

impl fmt::Display for MorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorClass::All => f.write_str("all"),
            MorClass::Injections => f.write_str("injections"),
            MorClass::Surjections => f.write_str("surjections"),
            MorClass::Explicit(l) => write!(f, "explicit({} maps)", l.len()),
        }
    }
}

/// Finite sets of size at most `universe` with classes `left` (L) and
/// `right` (R), optionally restricted to nonempty sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdequateTriple {
    pub universe: usize,
    #[serde(default)]
    pub nonempty_only: bool,
    pub left: MorClass,
    pub right: MorClass,
}

impl AdequateTriple {
    /// `(FinSet, all, all)`: ordinary spans.
    pub fn all(universe: usize) -> Self {
        AdequateTriple { universe, nonempty_only: false, left: MorClass::All, right: MorClass::All }
    }

    /// Nonempty sets, all maps on the left, surjections on the right.
    pub fn surjective(universe: usize) -> Self {
        AdequateTriple {
            universe,
            nonempty_only: true,
            left: MorClass::All,
            right: MorClass::Surjections,
        }
    }

    /// All maps on the left, injections on the right. Not cartesian:
    /// product projections are not injective.
    pub fn injective_right(universe: usize) -> Self {
        AdequateTriple { universe, nonempty_only: false, left: MorClass::All, right: MorClass::Injections }
    }

    /// Injections on the left, all maps on the right. Not cartesian either.
    pub fn injective_left(universe: usize) -> Self {
        AdequateTriple { universe, nonempty_only: false, left: MorClass::Injections, right: MorClass::All }
    }

    pub fn with_universe(&self, universe: usize) -> Self {
        AdequateTriple { universe, ..self.clone() }
    }

    pub fn admits_object(&self, a: FinSet) -> bool {
        !(self.nonempty_only && a.is_empty())
    }

    pub fn in_left(&self, f: &FinFn) -> bool {
        self.left.contains(f)
    }

    pub fn in_right(&self, f: &FinFn) -> bool {
        self.right.contains(f)
    }

    /// Objects up to the universe bound, by size.
    pub fn objects(&self) -> Vec<FinSet> {
        self.objects_up_to(self.universe)
    }

    pub fn objects_up_to(&self, bound: usize) -> Vec<FinSet> {
        let lo = usize::from(self.nonempty_only);
        (lo..=bound).map(FinSet).collect()
    }

    /// Every morphism between objects of size at most `bound`, ordered by
    /// domain, then codomain, then table.
    pub fn morphisms_up_to(&self, bound: usize) -> Vec<FinFn> {
        let objs = self.objects_up_to(bound);
        let mut out = Vec::new();
        for &a in &objs {
            for &b in &objs {
                out.extend(FinFn::all(a, b));
            }
        }
        out
    }

    pub fn left_up_to(&self, bound: usize) -> Vec<FinFn> {
        self.morphisms_up_to(bound).into_iter().filter(|f| self.in_left(f)).collect()
    }

    pub fn right_up_to(&self, bound: usize) -> Vec<FinFn> {
        self.morphisms_up_to(bound).into_iter().filter(|f| self.in_right(f)).collect()
    }
}

impl fmt::Display for AdequateTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(FinSet{}≤{}, L={}, R={})",
            if self.nonempty_only { "⁺" } else { "" },
            self.universe,
            self.left,
            self.right
        )
    }
}

/// Exhaustively checks the adequate-triple axioms and the cartesian clauses
/// over all sets up to the universe bound.
pub fn check_adequate_triple(t: &AdequateTriple) -> Report {
    let mut report = Report::new();
    let objs = t.objects();
    let maps = t.morphisms_up_to(t.universe);
    let sides: [(&str, &MorClass); 2] = [("left", &t.left), ("right", &t.right)];

    for (side, class) in sides {
        let mut c = Clause::new(format!("triple.identities-{side}"), "identities in L and R");
        for &a in &objs {
            let id = FinFn::identity(a);
            c.check(class.contains(&id), || format!("id_{a} ∉ {class}"));
        }
        report.push(c);
    }

    for (side, class) in sides {
        let mut c = Clause::new(format!("triple.composition-{side}"), "closure under composition");
        let members: Vec<&FinFn> = maps.iter().filter(|f| class.contains(f)).collect();
        for f in &members {
            for g in members.iter().filter(|g| g.dom() == f.cod()) {
                let gf = compose(f, g).expect("composable");
                c.check(class.contains(&gf), || format!("{g} ∘ {f} = {gf} ∉ {class}"));
            }
        }
        report.push(c);
    }

    let mut exists = Clause::new("triple.pullback-exists", "L-against-R cospans admit pullbacks");
    let mut stable = Clause::new("triple.pullback-stable", "pullback stability of L and R");
    for x in maps.iter().filter(|f| t.in_left(f)) {
        for y in maps.iter().filter(|g| g.cod() == x.cod() && t.in_right(g)) {
            let pb = pullback(x, y).expect("common codomain");
            exists.check(t.admits_object(pb.apex), || format!("cospan {x}, {y} has empty apex"));
            // q is the pullback of x ∈ L along y ∈ R; p of y ∈ R along x ∈ L.
            let ok = t.in_left(&pb.q) && t.in_right(&pb.p);
            stable.check(ok, || {
                format!("cospan {x}, {y}: projections p={} q={} leave their classes", pb.p, pb.q)
            });
        }
    }
    report.push(exists);
    report.push(stable);

    for (side, class) in sides {
        let mut c = Clause::new(format!("triple.products-{side}"), "closure under finite products");
        let members: Vec<&FinFn> = maps.iter().filter(|f| class.contains(f)).collect();
        for f in &members {
            for g in &members {
                let fg = map_product(f, g);
                c.check(class.contains(&fg), || format!("{f} × {g} = {fg} ∉ {class}"));
            }
        }
        report.push(c);
    }

    for (side, class) in sides {
        let mut c = Clause::new(format!("triple.projections-{side}"), "product projections in L and R");
        for &a in &objs {
            for &b in &objs {
                let pr = product(a, b);
                c.check(class.contains(&pr.pi_a), || format!("π_A: {a}×{b}→{a} = {} ∉ {class}", pr.pi_a));
                c.check(class.contains(&pr.pi_b), || format!("π_B: {a}×{b}→{b} = {} ∉ {class}", pr.pi_b));
            }
        }
        report.push(c);
    }

    if t.nonempty_only {
        if let Some(first) = report.clauses.first_mut() {
            first.note = Some("objects restricted to nonempty sets".into());
        }
    }
    report
}
