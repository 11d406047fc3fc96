//! Indexed monoidal structures with existential quantifiers.
//!
//! A [`Doctrine`] assigns to each finite set `A` a fiber `P(A)` of
//! predicates (a symmetric monoidal poset), to each function `f: A → B` a
//! substitution `P(f): P(B) → P(A)`, and to each `f ∈ R` a quantifier
//! `∃f: P(A) → P(B)`. The checkers in this module verify, exhaustively over
//! small sets, that the data is a regular doctrine: functorial, strong
//! monoidal, with `∃f ⊣ P(f)`, Beck-Chevalley along `(L, R)`-pullbacks and
//! Frobenius reciprocity.
//!
//! Order conventions are per fiber and always go through
//! [`Doctrine::leq`]: inclusion for subsets, `≥` for costs.

use crate::error::{Error, Result};
use crate::finset::{bang, compose, map_product, product, pullback, terminal, AdequateTriple, FinFn, FinSet};
use crate::poskit::{decode, encode, Booleans, MonoPoset, MonotoneMap, Poset, TruncatedCosts, Values};
use crate::report::{Clause, Report};
use std::fmt;

/// A predicate over a finite set: one value code per element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate(pub Vec<u8>);

impl Predicate {
    pub fn base(&self) -> FinSet {
        FinSet(self.0.len())
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    /// A subset given by a bitmask, as a boolean predicate.
    pub fn from_bits(base: FinSet, mask: u64) -> Self {
        Predicate(base.elements().map(|i| ((mask >> i) & 1) as u8).collect())
    }

    /// Bitmask of a boolean predicate.
    pub fn bits(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &v)| (u64::from(v != 0)) << i).sum()
    }
}

pub trait Doctrine: Send + Sync {
    fn name(&self) -> String;
    fn triple(&self) -> &AdequateTriple;
    /// The value algebra whose powers are the fibers.
    fn values(&self) -> &dyn Values;
    fn tensor(&self, a: &Predicate, b: &Predicate) -> Predicate;
    fn unit(&self, base: FinSet) -> Predicate;
    /// `P(f)(b)` for `f: A → B`, `b ∈ P(B)`.
    fn subst(&self, f: &FinFn, b: &Predicate) -> Predicate;
    /// `∃f(a)` for `f: A → B` in R, `a ∈ P(A)`.
    fn exists(&self, f: &FinFn, a: &Predicate) -> Predicate;

    fn leq(&self, a: &Predicate, b: &Predicate) -> bool {
        let v = self.values();
        a.0.len() == b.0.len() && a.0.iter().zip(&b.0).all(|(&x, &y)| v.leq(x, y))
    }

    /// All predicates over `base`, in index order.
    fn predicates(&self, base: FinSet) -> Vec<Predicate> {
        let levels = self.values().levels();
        let count = levels.pow(base.size() as u32);
        (0..count).map(|k| Predicate(decode(levels, base.size(), k))).collect()
    }

    fn index_of(&self, p: &Predicate) -> usize {
        encode(self.values().levels(), &p.0)
    }

    fn predicate_at(&self, base: FinSet, index: usize) -> Predicate {
        Predicate(decode(self.values().levels(), base.size(), index))
    }

    fn show(&self, p: &Predicate) -> String {
        let v = self.values();
        let parts: Vec<String> = p.0.iter().map(|&x| v.show(x)).collect();
        format!("[{}]", parts.join(","))
    }

    /// The poset `P(A)`.
    fn carrier(&self, base: FinSet) -> Result<Poset> {
        Poset::power(&self.values().poset(), base.size())
    }

    /// `P(A)` as a monoidal poset, tabulating [`Doctrine::tensor`].
    fn fiber(&self, base: FinSet) -> Result<MonoPoset> {
        let carrier = self.carrier(base)?;
        let preds = self.predicates(base);
        let sq = Poset::product(&carrier, &carrier);
        let n = preds.len();
        let tensor = MonotoneMap::tabulate(&sq, &carrier, |k| self.index_of(&self.tensor(&preds[k / n], &preds[k % n])));
        MonoPoset::new(carrier, tensor, self.index_of(&self.unit(base)))
    }

    fn subst_map(&self, f: &FinFn) -> Result<MonotoneMap> {
        let dom = self.carrier(f.cod())?;
        let cod = self.carrier(f.dom())?;
        let preds = self.predicates(f.cod());
        Ok(MonotoneMap::tabulate(&dom, &cod, |k| self.index_of(&self.subst(f, &preds[k]))))
    }

    fn exists_map(&self, f: &FinFn) -> Result<MonotoneMap> {
        let dom = self.carrier(f.dom())?;
        let cod = self.carrier(f.cod())?;
        let preds = self.predicates(f.dom());
        Ok(MonotoneMap::tabulate(&dom, &cod, |k| self.index_of(&self.exists(f, &preds[k]))))
    }
}

impl<D: Doctrine + ?Sized> Doctrine for &D {
    fn name(&self) -> String {
        (**self).name()
    }
    fn triple(&self) -> &AdequateTriple {
        (**self).triple()
    }
    fn values(&self) -> &dyn Values {
        (**self).values()
    }
    fn tensor(&self, a: &Predicate, b: &Predicate) -> Predicate {
        (**self).tensor(a, b)
    }
    fn unit(&self, base: FinSet) -> Predicate {
        (**self).unit(base)
    }
    fn subst(&self, f: &FinFn, b: &Predicate) -> Predicate {
        (**self).subst(f, b)
    }
    fn exists(&self, f: &FinFn, a: &Predicate) -> Predicate {
        (**self).exists(f, a)
    }
}

impl<D: Doctrine + ?Sized> Doctrine for Box<D> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn triple(&self) -> &AdequateTriple {
        (**self).triple()
    }
    fn values(&self) -> &dyn Values {
        (**self).values()
    }
    fn tensor(&self, a: &Predicate, b: &Predicate) -> Predicate {
        (**self).tensor(a, b)
    }
    fn unit(&self, base: FinSet) -> Predicate {
        (**self).unit(base)
    }
    fn subst(&self, f: &FinFn, b: &Predicate) -> Predicate {
        (**self).subst(f, b)
    }
    fn exists(&self, f: &FinFn, a: &Predicate) -> Predicate {
        (**self).exists(f, a)
    }
}

/// `P(A) = V^A` with pointwise tensor, reindexing by precomposition and
/// quantification by joins over fibers.
#[derive(Debug, Clone)]
pub struct PointwiseDoctrine<V> {
    triple: AdequateTriple,
    values: V,
}

impl<V: Values> PointwiseDoctrine<V> {
    pub fn new(triple: AdequateTriple, values: V) -> Self {
        PointwiseDoctrine { triple, values }
    }
}

impl<V: Values> Doctrine for PointwiseDoctrine<V> {
    fn name(&self) -> String {
        self.values.name()
    }
    fn triple(&self) -> &AdequateTriple {
        &self.triple
    }
    fn values(&self) -> &dyn Values {
        &self.values
    }
    fn tensor(&self, a: &Predicate, b: &Predicate) -> Predicate {
        Predicate(a.0.iter().zip(&b.0).map(|(&x, &y)| self.values.tensor(x, y)).collect())
    }
    fn unit(&self, base: FinSet) -> Predicate {
        Predicate(vec![self.values.unit(); base.size()])
    }
    fn subst(&self, f: &FinFn, b: &Predicate) -> Predicate {
        Predicate(f.table().iter().map(|&j| b.0[j]).collect())
    }
    fn exists(&self, f: &FinFn, a: &Predicate) -> Predicate {
        let mut out = vec![self.values.bottom(); f.cod().size()];
        for (i, &j) in f.table().iter().enumerate() {
            out[j] = self.values.join(out[j], a.0[i]);
        }
        Predicate(out)
    }
}

pub type PowersetDoctrine = PointwiseDoctrine<Booleans>;
pub type TropicalDoctrine = PointwiseDoctrine<TruncatedCosts>;

/// Subsets, preimage and image: the classical regular hyperdoctrine of
/// finite sets.
pub fn powerset_doctrine(triple: AdequateTriple) -> PowersetDoctrine {
    PointwiseDoctrine::new(triple, Booleans)
}

/// Cost functions into `{0, …, K, ∞}` ordered by `≥`, with saturating
/// addition, precomposition, and `∃f(φ)(b) = min { φ(a) | f(a) = b }`.
pub fn tropical_doctrine(triple: AdequateTriple, cap: u8) -> TropicalDoctrine {
    PointwiseDoctrine::new(triple, TruncatedCosts::new(cap))
}

/// Deliberate defects, used as negative controls for the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// The tensor ignores its arguments and returns the unit.
    BrokenTensor,
    /// Quantification uses the right adjoint `∀f` in place of `∃f`.
    SwappedAdjoint,
    /// Substitution along a non-injective map returns the bottom predicate.
    NonFunctorialSubst,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mutation::BrokenTensor => "broken-tensor",
            Mutation::SwappedAdjoint => "swapped-adjoint",
            Mutation::NonFunctorialSubst => "non-functorial-subst",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Mutant<D> {
    pub inner: D,
    pub mutation: Mutation,
}

impl<D: Doctrine> Mutant<D> {
    pub fn new(inner: D, mutation: Mutation) -> Self {
        Mutant { inner, mutation }
    }
}

impl<D: Doctrine> Doctrine for Mutant<D> {
    fn name(&self) -> String {
        format!("{}+{}", self.inner.name(), self.mutation)
    }
    fn triple(&self) -> &AdequateTriple {
        self.inner.triple()
    }
    fn values(&self) -> &dyn Values {
        self.inner.values()
    }
    fn tensor(&self, a: &Predicate, b: &Predicate) -> Predicate {
        match self.mutation {
            Mutation::BrokenTensor => self.inner.unit(a.base()),
            _ => self.inner.tensor(a, b),
        }
    }
    fn unit(&self, base: FinSet) -> Predicate {
        self.inner.unit(base)
    }
    fn subst(&self, f: &FinFn, b: &Predicate) -> Predicate {
        match self.mutation {
            Mutation::NonFunctorialSubst if !f.is_injective() => {
                Predicate(vec![self.values().bottom(); f.dom().size()])
            }
            _ => self.inner.subst(f, b),
        }
    }
    fn exists(&self, f: &FinFn, a: &Predicate) -> Predicate {
        match self.mutation {
            Mutation::SwappedAdjoint => {
                let v = self.values();
                let mut out = vec![v.top(); f.cod().size()];
                for (i, &j) in f.table().iter().enumerate() {
                    out[j] = v.meet(out[j], a.0[i]);
                }
                Predicate(out)
            }
            _ => self.inner.exists(f, a),
        }
    }
}

fn require_right(d: &dyn Doctrine, f: &FinFn) -> Result<()> {
    if d.triple().in_right(f) {
        Ok(())
    } else {
        Err(Error::ClassViolation(format!("{f} ∉ R has no quantifier")))
    }
}

fn morphisms(d: &dyn Doctrine, bound: usize) -> Vec<FinFn> {
    d.triple().morphisms_up_to(bound)
}

/// `∃f ⊣ P(f)`: unit, counit and the Galois biconditional, exhaustively.
pub fn check_adjunction(d: &dyn Doctrine, f: &FinFn) -> Result<Report> {
    require_right(d, f)?;
    let mut galois = Clause::new("adjunction.galois", "∃f(a) ≤ b ⟺ a ≤ Pf(b)");
    let mut unit = Clause::new("adjunction.unit", "a ≤ Pf ∃f a");
    let mut counit = Clause::new("adjunction.counit", "∃f Pf b ≤ b");
    adjunction_into(d, f, &mut galois, &mut unit, &mut counit);
    let mut r = Report::new();
    r.push(galois);
    r.push(unit);
    r.push(counit);
    Ok(r)
}

fn adjunction_into(d: &dyn Doctrine, f: &FinFn, galois: &mut Clause, unit: &mut Clause, counit: &mut Clause) {
    let over_a = d.predicates(f.dom());
    let over_b = d.predicates(f.cod());
    let ex: Vec<Predicate> = over_a.iter().map(|a| d.exists(f, a)).collect();
    let sb: Vec<Predicate> = over_b.iter().map(|b| d.subst(f, b)).collect();
    for (a, ea) in over_a.iter().zip(&ex) {
        unit.check(d.leq(a, &d.subst(f, ea)), || format!("f={f}, a={}", d.show(a)));
        for (b, pb) in over_b.iter().zip(&sb) {
            galois.check(d.leq(ea, b) == d.leq(a, pb), || {
                format!("f={f}, a={}, b={}: ∃f(a)={}, Pf(b)={}", d.show(a), d.show(b), d.show(ea), d.show(pb))
            });
        }
    }
    for (b, pb) in over_b.iter().zip(&sb) {
        counit.check(d.leq(&d.exists(f, pb), b), || format!("f={f}, b={}", d.show(b)));
    }
}

/// [`check_adjunction`] for every `f ∈ R` with sets up to `bound`.
pub fn check_adjunctions(d: &dyn Doctrine, bound: usize) -> Report {
    let mut galois = Clause::new("adjunction.galois", "∃f(a) ≤ b ⟺ a ≤ Pf(b)");
    let mut unit = Clause::new("adjunction.unit", "a ≤ Pf ∃f a");
    let mut counit = Clause::new("adjunction.counit", "∃f Pf b ≤ b");
    for f in morphisms(d, bound).iter().filter(|f| d.triple().in_right(f)) {
        adjunction_into(d, f, &mut galois, &mut unit, &mut counit);
    }
    let mut r = Report::new();
    r.push(galois);
    r.push(unit);
    r.push(counit);
    r
}

/// Strict functoriality of substitution and of quantification.
pub fn check_functoriality(d: &dyn Doctrine, bound: usize) -> Report {
    let maps = morphisms(d, bound);
    let mut subst_id = Clause::new("functor.subst-identity", "P(id) = id");
    let mut subst_comp = Clause::new("functor.subst-composition", "P(g∘f) = Pf ∘ Pg");
    let mut ex_id = Clause::new("functor.exists-identity", "∃id = id");
    let mut ex_comp = Clause::new("functor.exists-composition", "∃(g∘f) = ∃g ∘ ∃f");
    for a in d.triple().objects_up_to(bound) {
        let id = FinFn::identity(a);
        for p in d.predicates(a) {
            subst_id.check(d.subst(&id, &p) == p, || format!("A={a}, p={}", d.show(&p)));
            if d.triple().in_right(&id) {
                ex_id.check(d.exists(&id, &p) == p, || format!("A={a}, p={}", d.show(&p)));
            }
        }
    }
    for f in &maps {
        for g in maps.iter().filter(|g| g.dom() == f.cod()) {
            let gf = compose(f, g).expect("composable");
            for c in d.predicates(g.cod()) {
                let lhs = d.subst(&gf, &c);
                let rhs = d.subst(f, &d.subst(g, &c));
                subst_comp.check(lhs == rhs, || {
                    format!("f={f}, g={g}, c={}: {} vs {}", d.show(&c), d.show(&lhs), d.show(&rhs))
                });
            }
            if d.triple().in_right(f) && d.triple().in_right(g) {
                for a in d.predicates(f.dom()) {
                    let lhs = d.exists(&gf, &a);
                    let rhs = d.exists(g, &d.exists(f, &a));
                    ex_comp.check(lhs == rhs, || format!("f={f}, g={g}, a={}", d.show(&a)));
                }
            }
        }
    }
    let mut r = Report::new();
    r.push(subst_id);
    r.push(subst_comp);
    r.push(ex_id);
    r.push(ex_comp);
    r
}

/// Each `P(f)` preserves tensor and unit on the nose.
pub fn check_strong_monoidal(d: &dyn Doctrine, bound: usize) -> Report {
    let mut tensor = Clause::new("monoidal.subst-tensor", "Pf(b ⊗ b') = Pf b ⊗ Pf b'");
    let mut unit = Clause::new("monoidal.subst-unit", "Pf(I) = I");
    for f in morphisms(d, bound) {
        unit.check(d.subst(&f, &d.unit(f.cod())) == d.unit(f.dom()), || format!("f={f}"));
        let preds = d.predicates(f.cod());
        for b in &preds {
            for b2 in &preds {
                let lhs = d.subst(&f, &d.tensor(b, b2));
                let rhs = d.tensor(&d.subst(&f, b), &d.subst(&f, b2));
                tensor.check(lhs == rhs, || format!("f={f}, b={}, b'={}", d.show(b), d.show(b2)));
            }
        }
    }
    let mut r = Report::new();
    r.push(tensor);
    r.push(unit);
    r
}

/// `∃f(a ⊗ a') ≤ ∃f a ⊗ ∃f a'` and `∃f(I) ≤ I` for every `f ∈ R`.
pub fn check_comonoidal(d: &dyn Doctrine, bound: usize) -> Report {
    let mut tensor = Clause::new("monoidal.exists-comonoidal", "∃f(a ⊗ a') ≤ ∃f a ⊗ ∃f a'");
    let mut unit = Clause::new("monoidal.exists-counit", "∃f(I) ≤ I");
    for f in morphisms(d, bound).into_iter().filter(|f| d.triple().in_right(f)) {
        unit.check(d.leq(&d.exists(&f, &d.unit(f.dom())), &d.unit(f.cod())), || format!("f={f}"));
        let preds = d.predicates(f.dom());
        for a in &preds {
            for a2 in &preds {
                let lhs = d.exists(&f, &d.tensor(a, a2));
                let rhs = d.tensor(&d.exists(&f, a), &d.exists(&f, a2));
                tensor.check(d.leq(&lhs, &rhs), || format!("f={f}, a={}, a'={}", d.show(a), d.show(a2)));
            }
        }
    }
    let mut r = Report::new();
    r.push(tensor);
    r.push(unit);
    r
}

/// A commuting square `g ∘ h = f ∘ k`
///
/// ```text
///   A --h--> I
///   |        |
///   k        g
///   v        v
///   B --f--> J
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Square {
    pub h: FinFn,
    pub k: FinFn,
    pub g: FinFn,
    pub f: FinFn,
}

impl Square {
    /// The chosen pullback of the cospan `f: B → J ← I: g`.
    pub fn pullback_of(f: &FinFn, g: &FinFn) -> Result<Square> {
        let pb = pullback(f, g)?;
        Ok(Square { h: pb.q, k: pb.p, g: g.clone(), f: f.clone() })
    }

    /// Is this a pullback square with `f ∈ L` and `g ∈ R`?
    /// The same square read with the roles of the two cospan legs exchanged.
    pub fn transpose(&self) -> Square {
        Square { h: self.k.clone(), k: self.h.clone(), g: self.f.clone(), f: self.g.clone() }
    }

    pub fn validate(&self, t: &AdequateTriple) -> Result<()> {
        if !t.in_left(&self.f) || !t.in_right(&self.g) {
            return Err(Error::NotAPullback(format!("cospan {}, {} is not an (L, R)-cospan", self.f, self.g)));
        }
        if compose(&self.h, &self.g)? != compose(&self.k, &self.f)? {
            return Err(Error::NotAPullback("square does not commute".into()));
        }
        let pb = pullback(&self.f, &self.g)?;
        let m = pb.mediate(&self.k, &self.h)?;
        if !m.is_bijective() {
            return Err(Error::NotAPullback(format!("comparison {m} to the chosen pullback is not bijective")));
        }
        Ok(())
    }
}

impl fmt::Display for Square {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "(h={}, k={}, g={}, f={})", self.h, self.k, self.g, self.f)
    }
}

fn bc_into(d: &dyn Doctrine, s: &Square, fwd: &mut Clause, bwd: &mut Clause) {
    for i in d.predicates(s.g.dom()) {
        let mated = d.exists(&s.k, &d.subst(&s.h, &i));
        let direct = d.subst(&s.f, &d.exists(&s.g, &i));
        fwd.check(d.leq(&mated, &direct), || format!("{s}, φ={}", d.show(&i)));
        bwd.check(d.leq(&direct, &mated), || {
            format!("{s}, φ={}: ∃k Ph φ = {}, Pf ∃g φ = {}", d.show(&i), d.show(&mated), d.show(&direct))
        });
    }
}

/// Beck-Chevalley for one square: `∃k ∘ P(h) = P(f) ∘ ∃g`. The first
/// clause is the inequality every square satisfies, the second its
/// converse; together they say the mate is invertible.
pub fn check_beck_chevalley(d: &dyn Doctrine, s: &Square) -> Result<Report> {
    s.validate(d.triple())?;
    if !d.triple().in_right(&s.k) {
        return Err(Error::ClassViolation(format!("pulled-back leg {} ∉ R", s.k)));
    }
    let mut fwd = Clause::new("beck-chevalley.canonical", "∃k Ph ≤ Pf ∃g");
    let mut bwd = Clause::new("beck-chevalley.inverse", "Pf ∃g ≤ ∃k Ph");
    bc_into(d, s, &mut fwd, &mut bwd);
    let mut r = Report::new();
    r.push(fwd);
    r.push(bwd);
    Ok(r)
}

/// Beck-Chevalley for the chosen pullback of every `(L, R)`-cospan with
/// sets up to `bound`.
pub fn check_beck_chevalley_all(d: &dyn Doctrine, bound: usize) -> Report {
    let t = d.triple();
    let maps = morphisms(d, bound);
    let mut fwd = Clause::new("beck-chevalley.canonical", "∃k Ph ≤ Pf ∃g");
    let mut bwd = Clause::new("beck-chevalley.inverse", "Pf ∃g ≤ ∃k Ph");
    let mut stable = Clause::new("beck-chevalley.square", "chosen pullbacks are (L, R)-pullbacks");
    for f in maps.iter().filter(|f| t.in_left(f)) {
        for g in maps.iter().filter(|g| g.cod() == f.cod() && t.in_right(g)) {
            let s = Square::pullback_of(f, g).expect("common codomain");
            let ok = s.validate(t).is_ok() && t.in_right(&s.k) && t.admits_object(s.k.dom());
            stable.check(ok, || format!("{s}"));
            if ok {
                bc_into(d, &s, &mut fwd, &mut bwd);
            }
        }
    }
    let mut r = Report::new();
    r.push(stable);
    r.push(fwd);
    r.push(bwd);
    r
}

fn frobenius_into(d: &dyn Doctrine, f: &FinFn, right: &mut Clause, left: &mut Clause) {
    let over_a = d.predicates(f.dom());
    let over_b = d.predicates(f.cod());
    for a in &over_a {
        let ea = d.exists(f, a);
        for b in &over_b {
            let pb = d.subst(f, b);
            let lhs = d.exists(f, &d.tensor(&pb, a));
            let rhs = d.tensor(b, &ea);
            right.check(lhs == rhs, || {
                format!("f={f}, a={}, b={}: {} vs {}", d.show(a), d.show(b), d.show(&lhs), d.show(&rhs))
            });
            let lhs = d.exists(f, &d.tensor(a, &pb));
            let rhs = d.tensor(&ea, b);
            left.check(lhs == rhs, || format!("f={f}, a={}, b={}", d.show(a), d.show(b)));
        }
    }
}

/// Frobenius reciprocity `∃f(Pf(b) ⊗ a) = b ⊗ ∃f(a)` and its mirror image.
pub fn check_frobenius(d: &dyn Doctrine, f: &FinFn) -> Result<Report> {
    require_right(d, f)?;
    let mut right = Clause::new("frobenius.right", "∃f(Pf b ⊗ a) = b ⊗ ∃f a");
    let mut left = Clause::new("frobenius.left", "∃f(a ⊗ Pf b) = ∃f a ⊗ b");
    frobenius_into(d, f, &mut right, &mut left);
    let mut r = Report::new();
    r.push(right);
    r.push(left);
    Ok(r)
}

pub fn check_frobenius_all(d: &dyn Doctrine, bound: usize) -> Report {
    let mut right = Clause::new("frobenius.right", "∃f(Pf b ⊗ a) = b ⊗ ∃f a");
    let mut left = Clause::new("frobenius.left", "∃f(a ⊗ Pf b) = ∃f a ⊗ b");
    for f in morphisms(d, bound).iter().filter(|f| d.triple().in_right(f)) {
        frobenius_into(d, f, &mut right, &mut left);
    }
    let mut r = Report::new();
    r.push(right);
    r.push(left);
    r
}

/// `μ₀(a, b) = Pπ_A(a) ⊗ Pπ_B(b)` in `P(A × B)`.
pub fn laxate(d: &dyn Doctrine, a: &Predicate, b: &Predicate) -> Predicate {
    let pr = product(a.base(), b.base());
    d.tensor(&d.subst(&pr.pi_a, a), &d.subst(&pr.pi_b, b))
}

/// The external laxator `P(A) × P(B) → P(A × B)` as a monotone map.
pub fn external_laxator(d: &dyn Doctrine, a: FinSet, b: FinSet) -> Result<MonotoneMap> {
    let pa = d.carrier(a)?;
    let pb = d.carrier(b)?;
    let pab = d.carrier(product(a, b).apex)?;
    let over_a = d.predicates(a);
    let over_b = d.predicates(b);
    let n = over_b.len();
    Ok(MonotoneMap::tabulate(&Poset::product(&pa, &pb), &pab, |k| {
        d.index_of(&laxate(d, &over_a[k / n], &over_b[k % n]))
    }))
}

/// The monoidal unit of `P(1)`.
pub fn external_unit(d: &dyn Doctrine) -> Predicate {
    d.unit(terminal())
}

/// Naturality, associativity, unitality and symmetry of the external
/// laxator.
pub fn check_external_monoidal(d: &dyn Doctrine, bound: usize) -> Report {
    let objs = d.triple().objects_up_to(bound);
    let maps = morphisms(d, bound);
    let mut nat = Clause::new("external.naturality", "P(f×g) μ₀ = μ₀ (Pf × Pg)");
    let mut assoc = Clause::new("external.associativity", "μ₀(μ₀(a,b),c) = μ₀(a,μ₀(b,c))");
    let mut unit = Clause::new("external.unit", "μ₀(I, a) = a = μ₀(a, I)");
    let mut sym = Clause::new("external.symmetry", "P(σ) μ₀(b, a) = μ₀(a, b)");
    for f in &maps {
        for g in &maps {
            let fg = map_product(f, g);
            for a in d.predicates(f.cod()) {
                for b in d.predicates(g.cod()) {
                    let lhs = d.subst(&fg, &laxate(d, &a, &b));
                    let rhs = laxate(d, &d.subst(f, &a), &d.subst(g, &b));
                    nat.check(lhs == rhs, || format!("f={f}, g={g}, a={}, b={}", d.show(&a), d.show(&b)));
                }
            }
        }
    }
    let i = external_unit(d);
    for &a in &objs {
        for p in d.predicates(a) {
            // 1 × A and A × 1 share A's indexing.
            unit.check(laxate(d, &i, &p) == p && laxate(d, &p, &i) == p, || format!("a={}", d.show(&p)));
        }
        for &b in &objs {
            let sigma = crate::finset::swap(a, b);
            for p in d.predicates(a) {
                for q in d.predicates(b) {
                    let lhs = d.subst(&sigma, &laxate(d, &q, &p));
                    sym.check(lhs == laxate(d, &p, &q), || format!("a={}, b={}", d.show(&p), d.show(&q)));
                }
            }
            for &c in objs.iter().filter(|c| a.size() * b.size() * c.size() <= 8) {
                for p in d.predicates(a) {
                    for q in d.predicates(b) {
                        for r in d.predicates(c) {
                            // Row-major products make the associator an identity.
                            let lhs = laxate(d, &laxate(d, &p, &q), &r);
                            let rhs = laxate(d, &p, &laxate(d, &q, &r));
                            assoc.check(lhs == rhs, || format!("{} {} {}", d.show(&p), d.show(&q), d.show(&r)));
                        }
                    }
                }
            }
        }
    }
    let mut r = Report::new();
    r.push(nat);
    r.push(assoc);
    r.push(unit);
    r.push(sym);
    r
}

/// Every fiber is a symmetric monoidal poset.
pub fn check_fibers(d: &dyn Doctrine, bound: usize) -> Report {
    let mut out = Report::new();
    let mut merged: Vec<Clause> = Vec::new();
    for a in d.triple().objects_up_to(bound) {
        let r = match d.fiber(a) {
            Ok(m) => crate::poskit::check_mono_poset(&m),
            Err(e) => {
                let mut c = Clause::new("monoid.tabulate", "fiber can be tabulated");
                c.check(false, || e.to_string());
                let mut r = Report::new();
                r.push(c);
                r
            }
        };
        for c in r.clauses {
            match merged.iter_mut().find(|m| m.clause == c.clause) {
                Some(m) => m.merge(c),
                None => merged.push(c),
            }
        }
    }
    for mut c in merged {
        c.clause = format!("fiber.{}", c.clause.trim_start_matches("monoid."));
        out.push(c);
    }
    out
}

/// Bounds for [`check_doctrine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoctrineBounds {
    /// Sets up to this size for functoriality, monoidality, adjunction,
    /// comonoidality and Frobenius.
    pub laws: usize,
    /// Sets up to this size for Beck-Chevalley cospans.
    pub beck_chevalley: usize,
    /// Sets up to this size for the external laxator.
    pub external: usize,
}

impl DoctrineBounds {
    pub fn uniform(n: usize) -> Self {
        DoctrineBounds { laws: n, beck_chevalley: n, external: n }
    }
}

/// The whole doctrine suite. Clause ids are prefixed with `doctrine.`.
pub fn check_doctrine(d: &dyn Doctrine, bounds: DoctrineBounds) -> Report {
    use rayon::prelude::*;
    type Job<'a> = Box<dyn Fn() -> Report + Send + Sync + 'a>;
    let jobs: Vec<Job> = vec![
        Box::new(|| check_fibers(d, bounds.laws)),
        Box::new(|| check_functoriality(d, bounds.laws)),
        Box::new(|| check_strong_monoidal(d, bounds.laws)),
        Box::new(|| check_adjunctions(d, bounds.laws)),
        Box::new(|| check_comonoidal(d, bounds.laws)),
        Box::new(|| check_beck_chevalley_all(d, bounds.beck_chevalley)),
        Box::new(|| check_frobenius_all(d, bounds.laws)),
        Box::new(|| check_external_monoidal(d, bounds.external)),
    ];
    let parts: Vec<Report> = jobs.par_iter().map(|job| job()).collect();
    let mut out = Report::new();
    for part in parts {
        for mut c in part.clauses {
            c.clause = format!("doctrine.{}", c.clause);
            out.push(c);
        }
    }
    out
}

/// `I_A = P(!_A)(I)`, the unit of `P(A)` seen from `P(1)`.
pub fn unit_via_terminal(d: &dyn Doctrine, a: FinSet) -> Predicate {
    d.subst(&bang(a), &external_unit(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(cod: usize, map: &[usize]) -> FinFn {
        FinFn::from_table(cod, map)
    }

    fn pw() -> PowersetDoctrine {
        powerset_doctrine(AdequateTriple::all(3))
    }

    fn tr(k: u8) -> TropicalDoctrine {
        tropical_doctrine(AdequateTriple::all(3), k)
    }

    fn costs(d: &TropicalDoctrine, cs: &[Option<u32>]) -> Predicate {
        use crate::poskit::Cost;
        let v = TruncatedCosts::new(d.values().levels() as u8 - 2);
        Predicate(cs.iter().map(|c| v.encode(c.map_or(Cost::Inf, Cost::Finite))).collect())
    }

    #[test]
    fn powerset_examples() {
        let d = pw();
        let constant = f(1, &[0, 0]);
        let s = Predicate::from_bits(FinSet(1), 0b1);
        assert_eq!(d.subst(&constant, &s).bits(), 0b11);
        assert_eq!(d.exists(&constant, &Predicate::from_bits(FinSet(2), 0)).bits(), 0);
        let id = FinFn::identity(FinSet(2));
        assert_eq!(d.exists(&id, &Predicate::from_bits(FinSet(2), 0b01)).bits(), 0b01);
    }

    #[test]
    fn tropical_examples() {
        let d = tr(5);
        let constant = f(1, &[0, 0]);
        let phi = costs(&d, &[Some(2), Some(5)]);
        assert_eq!(d.exists(&constant, &phi), costs(&d, &[Some(2)]));
        let empty = FinFn::new(FinSet(0), FinSet(1), vec![]).unwrap();
        assert_eq!(d.exists(&empty, &Predicate(vec![])), costs(&d, &[None]));
        let psi = costs(&d, &[Some(3)]);
        assert_eq!(d.subst(&constant, &psi), costs(&d, &[Some(3), Some(3)]));
    }

    #[test]
    fn adjunction_examples() {
        assert!(check_adjunction(&pw(), &f(1, &[0, 0])).unwrap().passed());
        assert!(check_adjunction(&tr(2), &FinFn::identity(FinSet(2))).unwrap().passed());
        let bad = Mutant::new(pw(), Mutation::SwappedAdjoint);
        let r = check_adjunction(&bad, &f(1, &[0, 0])).unwrap();
        let c = r.get("adjunction.galois").unwrap();
        assert!(!c.passed());
        assert!(c.witness.is_some());
    }

    #[test]
    fn adjunction_requires_right_class() {
        let d = powerset_doctrine(AdequateTriple::injective_right(2));
        assert!(matches!(check_adjunction(&d, &f(1, &[0, 0])), Err(Error::ClassViolation(_))));
    }

    #[test]
    fn beck_chevalley_examples() {
        let id = FinFn::identity(FinSet(2));
        let s = Square::pullback_of(&id, &id).unwrap();
        assert!(check_beck_chevalley(&pw(), &s).unwrap().passed());
        let c = f(1, &[0, 0]);
        let s = Square::pullback_of(&c, &c).unwrap();
        assert_eq!(s.h.dom(), FinSet(4));
        assert!(check_beck_chevalley(&pw(), &s).unwrap().passed());
        assert!(check_beck_chevalley(&tr(2), &s).unwrap().passed());
    }

    #[test]
    fn non_pullback_square_is_rejected() {
        // A commuting square whose apex is too small.
        let c = f(1, &[0, 0]);
        let s = Square { h: f(2, &[0]), k: f(2, &[0]), g: c.clone(), f: c };
        assert!(matches!(check_beck_chevalley(&pw(), &s), Err(Error::NotAPullback(_))));
    }

    #[test]
    fn frobenius_examples() {
        let c = f(1, &[0, 0]);
        let d = pw();
        let a = Predicate::from_bits(FinSet(2), 0b01);
        let b = Predicate::from_bits(FinSet(1), 0b1);
        assert_eq!(d.exists(&c, &d.tensor(&d.subst(&c, &b), &a)).bits(), 0b1);
        assert!(check_frobenius(&d, &c).unwrap().passed());

        let t = tr(7);
        let a = costs(&t, &[Some(2), Some(5)]);
        let b = costs(&t, &[Some(1)]);
        let lhs = t.exists(&c, &t.tensor(&t.subst(&c, &b), &a));
        assert_eq!(lhs, costs(&t, &[Some(3)]));
        assert_eq!(lhs, t.tensor(&b, &t.exists(&c, &a)));
        assert!(check_frobenius(&t, &c).unwrap().passed());
        assert!(check_frobenius(&t, &FinFn::identity(FinSet(2))).unwrap().passed());
    }

    #[test]
    fn external_laxator_examples() {
        let d = pw();
        let one = Predicate::from_bits(FinSet(1), 1);
        assert_eq!(laxate(&d, &one, &one).bits(), 1);
        // Cylinders intersect to the product S × T.
        for s in 0..4u64 {
            for t in 0..4u64 {
                let got = laxate(&d, &Predicate::from_bits(FinSet(2), s), &Predicate::from_bits(FinSet(2), t));
                let mut want = 0u64;
                for i in 0..2 {
                    for j in 0..2 {
                        if (s >> i) & 1 == 1 && (t >> j) & 1 == 1 {
                            want |= 1 << (i * 2 + j);
                        }
                    }
                }
                assert_eq!(got.bits(), want);
            }
        }
        let t = tr(3);
        let phi = costs(&t, &[Some(0), Some(2)]);
        let psi = costs(&t, &[Some(1), None]);
        assert_eq!(laxate(&t, &phi, &psi), costs(&t, &[Some(1), None, Some(3), None]));
        let m = external_laxator(&d, FinSet(1), FinSet(2)).unwrap();
        assert_eq!(m.dom().size(), 8);
        assert!(m.is_monotone());
    }

    #[test]
    fn suites_pass_on_small_bounds() {
        assert!(check_doctrine(&pw(), DoctrineBounds::uniform(2)).passed());
        assert!(check_doctrine(&tr(2), DoctrineBounds::uniform(2)).passed());
    }

    #[test]
    fn non_functorial_subst_is_caught() {
        let bad = Mutant::new(pw(), Mutation::NonFunctorialSubst);
        let r = check_functoriality(&bad, 2);
        assert!(!r.get("functor.subst-composition").unwrap().passed());
    }
}
