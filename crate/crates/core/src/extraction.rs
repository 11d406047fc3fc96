//! Recovering a doctrine from a double functor `Q: Span(C, L, R)^op → Qt(Pos)`.
//!
//! Quantifiers come from conjoints, `∃f := Q(f_!)`. Fiber tensors come
//! from the laxator, `⊗_A := Q(Δ_A) ∘ μ₀(A, A)`. Units come from the unit
//! cell, `I_A := Q(!_A)(I)`. Running this on `P•` must give back `P`
//! exactly, which is what [`roundtrip`] checks.
//!
//! Double functors are only ever obtained by doubling a doctrine here, so
//! [`DoubleFunctorData`] is built from a [`PDot`] after its coherence suite
//! has passed. A doctrine whose doubling is incoherent is refused.

use crate::doctrine::{check_frobenius, Doctrine, Square};
use crate::doubling::{verify_pdot, PDot, PDotBounds};
use crate::error::{Error, Result};
use crate::finset::{bang, compose, diagonal, map_product, FinFn, FinSet};
use crate::poskit::{check_mono_poset, leq_maps, MonoPoset, MonotoneMap, Poset};
use crate::report::{Clause, Report};
use crate::spancat::{Span, SpanCell};
use std::sync::Arc;

/// A verified lax symmetric monoidal double functor, as data.
pub struct DoubleFunctorData<D> {
    pdot: PDot<D>,
    bound: usize,
    verdicts: Report,
}

impl<D: Doctrine> DoubleFunctorData<D> {
    /// Doubles `d` and verifies the result up to `bound`. Fails with
    /// `CoherenceFailure` naming the first failing clause.
    pub fn from_doctrine(d: D, bound: usize) -> Result<Self> {
        let pdot = PDot::new(d);
        let verdicts = verify_pdot(&pdot, PDotBounds::uniform(bound));
        if let Some(c) = verdicts.failed_clauses().next() {
            return Err(Error::CoherenceFailure(format!(
                "{} fails {} of {}: {}",
                c.clause,
                c.failures,
                c.instances,
                c.witness.as_deref().unwrap_or("no witness")
            )));
        }
        Ok(DoubleFunctorData { pdot, bound, verdicts })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// The coherence report the data was accepted on.
    pub fn verdicts(&self) -> &Report {
        &self.verdicts
    }

    pub fn pdot(&self) -> &PDot<D> {
        &self.pdot
    }

    pub fn object(&self, a: FinSet) -> Result<Poset> {
        self.pdot.doctrine().carrier(a)
    }

    pub fn tight(&self, f: &FinFn) -> Result<MonotoneMap> {
        self.pdot.tight_image(f)
    }

    pub fn loose(&self, x: &Span) -> Result<Arc<MonotoneMap>> {
        self.pdot.loose_image(x)
    }

    /// `(μ₀)_{A,B}: Q(A) × Q(B) → Q(A × B)`.
    pub fn laxator(&self, a: FinSet, b: FinSet) -> Result<MonotoneMap> {
        self.pdot.laxator_map(a, b)
    }

    /// The element of `Q(1)` picked out by the unit cell.
    pub fn unit(&self) -> Result<usize> {
        Ok(self.pdot.unit_cell()?.left.apply(0))
    }
}

/// `∃f := Q(f_!)`.
pub fn quantifier_from_conjoint<D: Doctrine>(q: &DoubleFunctorData<D>, f: &FinFn) -> Result<MonotoneMap> {
    if !q.pdot.doctrine().triple().in_right(f) {
        return Err(Error::ClassViolation(format!("{f} ∉ R has no conjoint")));
    }
    Ok((*q.loose(&Span::conjoint(f))?).clone())
}

/// `⊗_A := Q(Δ_A) ∘ μ₀(A, A)`.
pub fn tensor_from_laxator<D: Doctrine>(q: &DoubleFunctorData<D>, a: FinSet) -> Result<MonotoneMap> {
    q.laxator(a, a)?.then(&q.tight(&diagonal(a))?)
}

/// `I_A := Q(!_A)(I)`.
pub fn unit_from_i<D: Doctrine>(q: &DoubleFunctorData<D>, a: FinSet) -> Result<usize> {
    Ok(q.tight(&bang(a))?.apply(q.unit()?))
}

/// The fiber over `A` as recovered from `Q`.
pub fn fiber_from_q<D: Doctrine>(q: &DoubleFunctorData<D>, a: FinSet) -> Result<MonoPoset> {
    MonoPoset::new(q.object(a)?, tensor_from_laxator(q, a)?, unit_from_i(q, a)?)
}

/// `Q(f_!) ⊣ Q(f)` in `Pos`, plus the images of the conjoint cells.
pub fn check_conjoint<D: Doctrine>(q: &DoubleFunctorData<D>, f: &FinFn) -> Result<Report> {
    let ex = quantifier_from_conjoint(q, f)?;
    let pf = q.tight(f)?;
    let unit = leq_maps(&MonotoneMap::identity(ex.dom()), &ex.then(&pf)?)?;
    let counit = leq_maps(&pf.then(&ex)?, &MonotoneMap::identity(ex.cod()))?;
    let mut adj = Clause::new("conjoint.adjunction", "∃f ⊣ P(f) recovered from the conjoint");
    adj.check(unit.holds, || format!("unit fails for {f} at #{:?}", unit.witness));
    adj.check(counit.holds, || format!("counit fails for {f} at #{:?}", counit.witness));
    let data = q.pdot.spans().conjoint_of(f)?;
    let mut cells = Clause::new("conjoint.cells", "images of the conjoint unit and counit");
    for (name, c) in [("η", &data.eta), ("ε", &data.epsilon)] {
        let ok = q.pdot.cell_image(c).is_ok();
        cells.check(ok, || format!("{name} for {f}"));
    }
    let mut r = Report::new();
    r.push(adj);
    r.push(cells);
    Ok(r)
}

/// Frobenius reciprocity for `f: A → B` assembled from a Beck-Chevalley
/// square and a laxator commuter, then compared with the direct check.
///
/// The square has apex `A`, corner `A × B`, legs `h = (id × f) ∘ Δ_A` and
/// `k = f`, and cospan `f × id_B`, `Δ_B` into `B × B`. Beck-Chevalley gives
/// `∃f ∘ P(h) = P(Δ_B) ∘ ∃(f × id)`, and the laxator at `(f_!, e_B)` turns
/// `∃(f × id) ∘ μ₀` into `μ₀ ∘ (∃f × id)`. Together these are the left
/// Frobenius law; the right one follows by symmetry.
pub fn frobenius_via_bhat<D: Doctrine>(q: &DoubleFunctorData<D>, f: &FinFn) -> Result<Report> {
    let d = q.pdot.doctrine();
    let t = d.triple();
    let (a, b) = (f.dom(), f.cod());
    let h = compose(&diagonal(a), &map_product(&FinFn::identity(a), f))?;
    let square = Square { h: h.clone(), k: f.clone(), g: map_product(f, &FinFn::identity(b)), f: diagonal(b) };
    square.validate(t)?;
    if !t.in_right(f) {
        return Err(Error::ClassViolation(format!("{f} ∉ R")));
    }

    let ex_f = quantifier_from_conjoint(q, f)?;
    let ex_g = quantifier_from_conjoint(q, &square.g)?;
    let mated = q.tight(&h)?.then(&ex_f)?;
    let direct = ex_g.then(&q.tight(&diagonal(b))?)?;
    let bc_ok = mated == direct;

    let xf = Span::conjoint(f);
    let eb = Span::identity(b);
    let lax = q.pdot.laxator_cell(&xf, &eb)?;
    let commuter_ok = lax.is_invertible();
    let sym_ok = q.pdot.symmetry_cell(&xf, &eb).is_ok();

    // Direct Frobenius on the extracted structure, as maps out of Q(A) × Q(B).
    let ta = tensor_from_laxator(q, a)?;
    let tb = tensor_from_laxator(q, b)?;
    let pf = q.tight(f)?;
    let (na, nb) = (q.object(a)?.size(), q.object(b)?.size());
    let mut left_direct = true;
    let mut right_direct = true;
    let mut witness = None;
    for i in 0..na {
        let ei = ex_f.apply(i);
        for j in 0..nb {
            let pj = pf.apply(j);
            let l = ex_f.apply(ta.apply(i * na + pj)) == tb.apply(ei * nb + j);
            let r = ex_f.apply(ta.apply(pj * na + i)) == tb.apply(j * nb + ei);
            if !(l && r) && witness.is_none() {
                witness = Some(format!("a=#{i}, b=#{j}"));
            }
            left_direct &= l;
            right_direct &= r;
        }
    }

    let lemma_left = bc_ok && commuter_ok;
    let lemma_right = lemma_left && sym_ok;
    let source = check_frobenius(d, f)?;
    let src_right = source.get("frobenius.right").is_some_and(|c| c.passed());
    let src_left = source.get("frobenius.left").is_some_and(|c| c.passed());

    let mut r = Report::new();
    let mut c = Clause::new("frobenius.beck-chevalley", "Beck-Chevalley on the diagonal square");
    c.check(bc_ok, || format!("{square}"));
    r.push(c);
    let mut c = Clause::new("frobenius.commuter", "laxator commuter at (f_!, e_B)");
    c.check(commuter_ok, || q.pdot.describe(&lax));
    r.push(c);
    let mut c = Clause::new("frobenius.lemma-left", "∃f(a ⊗ Pf b) = ∃f a ⊗ b assembled from the square");
    c.check(lemma_left && left_direct, || witness.clone().unwrap_or_else(|| format!("f={f}")));
    r.push(c);
    let mut c = Clause::new("frobenius.lemma-right", "∃f(Pf b ⊗ a) = b ⊗ ∃f a assembled from the square");
    c.check(lemma_right && right_direct, || witness.clone().unwrap_or_else(|| format!("f={f}")));
    r.push(c);
    let mut c = Clause::new("frobenius.agreement", "assembled verdict matches the direct check");
    c.check(lemma_left == src_left && lemma_right == src_right, || {
        format!("f={f}: assembled ({lemma_left}, {lemma_right}), direct ({src_left}, {src_right})")
    });
    r.push(c);
    Ok(r)
}

/// Doubles `d`, extracts it back and checks literal equality everywhere
/// up to `max_size`. Clause ids are prefixed with `roundtrip.`.
pub fn roundtrip<D: Doctrine>(d: D, max_size: usize) -> Report {
    let mut out = Report::new();
    let mut verify = Clause::new("roundtrip.verify", "the doubled doctrine is coherent");
    let q = match DoubleFunctorData::from_doctrine(d, max_size) {
        Ok(q) => {
            verify.check(true, String::new);
            q
        }
        Err(e) => {
            verify.check(false, || e.to_string());
            out.push(verify);
            return out;
        }
    };
    out.push(verify);
    match roundtrip_clauses(&q) {
        Ok(r) => {
            for mut c in r.clauses {
                c.clause = format!("roundtrip.{}", c.clause);
                out.push(c);
            }
        }
        Err(e) => {
            let mut c = Clause::new("roundtrip.extraction", "extraction is total");
            c.check(false, || e.to_string());
            out.push(c);
        }
    }
    out
}

fn roundtrip_clauses<D: Doctrine>(q: &DoubleFunctorData<D>) -> Result<Report> {
    let d = q.pdot.doctrine();
    let t = d.triple();
    let bound = q.bound;
    let mut fiber = Clause::new("fiber", "Q(A) = P(A)");
    let mut tensor = Clause::new("tensor", "Q(Δ) ∘ μ₀ = ⊗");
    let mut unit = Clause::new("unit", "Q(!)(I) = I");
    let mut mono = Clause::new("monoidal-fiber", "recovered fibers are commutative monoidal posets");
    for a in t.objects_up_to(bound) {
        let p = q.object(a)?;
        fiber.check(p == d.carrier(a)?, || format!("A={a}"));
        let source = d.fiber(a)?;
        tensor.check(tensor_from_laxator(q, a)? == source.tensor, || format!("A={a}"));
        unit.check(unit_from_i(q, a)? == source.unit, || format!("A={a}"));
        mono.check(check_mono_poset(&fiber_from_q(q, a)?).passed(), || format!("A={a}"));
    }
    let mut subst = Clause::new("subst", "Q(f) = P(f)");
    let mut quant = Clause::new("quantifier", "Q(f_!) = ∃f");
    let mut conj = Clause::new("conjoint", "conjoints go to adjunctions");
    let mut frob = Report::new();
    for f in t.morphisms_up_to(bound) {
        subst.check(q.tight(&f)? == d.subst_map(&f)?, || format!("f={f}"));
        if t.in_right(&f) {
            quant.check(quantifier_from_conjoint(q, &f)? == d.exists_map(&f)?, || format!("f={f}"));
            conj.check(check_conjoint(q, &f)?.passed(), || format!("f={f}"));
            let diag_ok = t.in_left(&diagonal(f.cod()));
            if diag_ok {
                for c in frobenius_via_bhat(q, &f)?.clauses {
                    match frob.clauses.iter_mut().find(|x| x.clause == c.clause) {
                        Some(x) => x.merge(c),
                        None => frob.push(c),
                    }
                }
            }
        }
    }
    let mut factor = Clause::new("factorisation", "Q(X) = Q(x₂_!) ∘ Q(x₁^*)");
    let mut companion_lax = Clause::new("companion-laxator", "μ at companions is invertible");
    let spans = q.pdot.spans().enumerate_spans(bound);
    for x in &spans {
        let star = q.loose(&Span::companion(x.left()))?;
        let shriek = q.loose(&Span::conjoint(x.right()))?;
        factor.check(*q.loose(x)? == star.then(&shriek)?, || format!("X={x}"));
    }
    let lefts = t.left_up_to(bound);
    for f in &lefts {
        for g in &lefts {
            let ok = q.pdot.laxator_cell(&Span::companion(f), &Span::companion(g)).is_ok_and(|c| c.is_invertible());
            companion_lax.check(ok, || format!("f={f}, g={g}"));
        }
    }
    let mut r = Report::new();
    for c in [fiber, tensor, unit, mono, subst, quant, conj, factor, companion_lax] {
        r.push(c);
    }
    r.extend(frob);
    Ok(r)
}

/// The tight identity on `f` as a span cell, sent through `Q`.
pub fn tight_identity_image<D: Doctrine>(q: &DoubleFunctorData<D>, f: &FinFn) -> Result<bool> {
    Ok(q.pdot.cell_image(&SpanCell::tight_identity(f))?.exists())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::{powerset_doctrine, tropical_doctrine, Mutant, Mutation};
    use crate::finset::AdequateTriple;
    use crate::poskit::{PowersetFiber, TropicalFiber};

    fn c2() -> FinFn {
        FinFn::from_table(1, &[0, 0])
    }

    #[test]
    fn quantifier_examples() {
        let q = DoubleFunctorData::from_doctrine(powerset_doctrine(AdequateTriple::all(2)), 1).unwrap();
        let ex = quantifier_from_conjoint(&q, &c2()).unwrap();
        assert_eq!(ex, q.pdot().doctrine().exists_map(&c2()).unwrap());
        // Image of a subset of {0,1} under the constant map.
        assert_eq!(ex.table(), &[0, 1, 1, 1]);
        let id = quantifier_from_conjoint(&q, &FinFn::identity(FinSet(2))).unwrap();
        assert_eq!(id, MonotoneMap::identity(id.dom()));

        let q = DoubleFunctorData::from_doctrine(tropical_doctrine(AdequateTriple::all(2), 3), 1).unwrap();
        let ex = quantifier_from_conjoint(&q, &c2()).unwrap();
        assert_eq!(ex, q.pdot().doctrine().exists_map(&c2()).unwrap());
        // min(2, 1) = 1: predicate (2, 1) has index 2 + 5·1.
        assert_eq!(ex.apply(7), 1);
    }

    #[test]
    fn quantifier_requires_right_class() {
        let q = DoubleFunctorData::from_doctrine(powerset_doctrine(AdequateTriple::injective_right(2)), 1).unwrap();
        assert!(matches!(quantifier_from_conjoint(&q, &c2()), Err(Error::ClassViolation(_))));
    }

    #[test]
    fn tensor_and_unit_examples() {
        let q = DoubleFunctorData::from_doctrine(powerset_doctrine(AdequateTriple::all(2)), 1).unwrap();
        let a = FinSet(2);
        let want = PowersetFiber::new(a).mono_poset().unwrap();
        assert_eq!(tensor_from_laxator(&q, a).unwrap(), want.tensor);
        assert_eq!(unit_from_i(&q, a).unwrap(), 0b11);
        let one = FinSet(1);
        assert_eq!(tensor_from_laxator(&q, one).unwrap(), q.pdot().doctrine().fiber(one).unwrap().tensor);

        let q = DoubleFunctorData::from_doctrine(tropical_doctrine(AdequateTriple::all(2), 3), 1).unwrap();
        let want = TropicalFiber::new(a, 3).mono_poset().unwrap();
        assert_eq!(tensor_from_laxator(&q, a).unwrap(), want.tensor);
        assert_eq!(unit_from_i(&q, a).unwrap(), want.unit);
        assert_eq!(want.unit, 0);
    }

    #[test]
    fn frobenius_examples() {
        let q = DoubleFunctorData::from_doctrine(powerset_doctrine(AdequateTriple::all(2)), 1).unwrap();
        assert!(frobenius_via_bhat(&q, &c2()).unwrap().passed());
        assert!(frobenius_via_bhat(&q, &FinFn::identity(FinSet(2))).unwrap().passed());
        let q = DoubleFunctorData::from_doctrine(tropical_doctrine(AdequateTriple::all(2), 2), 1).unwrap();
        let r = frobenius_via_bhat(&q, &c2()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn roundtrip_small() {
        let r = roundtrip(powerset_doctrine(AdequateTriple::all(2)), 1);
        assert!(r.passed(), "{r}");
        assert!(r.get("roundtrip.factorisation").unwrap().instances > 0);
        let r = roundtrip(tropical_doctrine(AdequateTriple::all(2), 2), 1);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn non_functorial_subst_is_refused() {
        let bad = Mutant::new(powerset_doctrine(AdequateTriple::all(2)), Mutation::NonFunctorialSubst);
        assert!(matches!(DoubleFunctorData::from_doctrine(bad, 2), Err(Error::CoherenceFailure(_))));
        let bad = Mutant::new(powerset_doctrine(AdequateTriple::all(2)), Mutation::NonFunctorialSubst);
        let r = roundtrip(bad, 2);
        assert!(!r.get("roundtrip.verify").unwrap().passed());
    }
}
