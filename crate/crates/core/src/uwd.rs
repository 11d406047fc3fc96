//! Undirected wiring diagrams and the systems they wire together.
//!
//! A diagram is a cospan of labelled finite sets `inner −f→ junctions ←g− outer`.
//! Labels are types, and a [`TypeAssignment`] gives each type a finite set
//! of values. A context (a labelled set of ports) denotes the product of its
//! ports' value sets, indexed row-major with the first port most significant.
//!
//! Evaluating a diagram on a system over its inner boundary substitutes
//! along `f̂: ∏junctions → ∏inner` and then quantifies along
//! `ĝ: ∏junctions → ∏outer`. In the powerset doctrine this is a conjunctive
//! query; in the tropical doctrine it is a min-plus contraction.
//!
//! Diagrams compose by nesting: filling the inner boundary of one diagram
//! with the outer boundary of another glues their junctions by a pushout.

use crate::doctrine::{laxate, powerset_doctrine, tropical_doctrine, Doctrine, Predicate};
use crate::error::{Error, Result};
use crate::finset::{pushout_labelled, AdequateTriple, FinFn, FinSet, LabelledFinSet};
use crate::poskit::{Cost, TruncatedCosts};
use crate::report::{Clause, Report};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A finite value set for every type.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TypeAssignment {
    pub domains: BTreeMap<String, usize>,
}

impl TypeAssignment {
    pub fn new(domains: impl IntoIterator<Item = (String, usize)>) -> Self {
        TypeAssignment { domains: domains.into_iter().collect() }
    }

    /// Every type gets the same number of values.
    pub fn uniform(labels: &[&str], size: usize) -> Self {
        TypeAssignment::new(labels.iter().map(|l| (l.to_string(), size)))
    }

    pub fn size_of(&self, label: &str) -> Result<usize> {
        self.domains
            .get(label)
            .copied()
            .ok_or_else(|| Error::ContextMismatch(format!("type {label:?} has no value set")))
    }

    /// Fails if some type has no values.
    pub fn require_nonempty(&self) -> Result<()> {
        match self.domains.iter().find(|(_, &n)| n == 0) {
            Some((l, _)) => Err(Error::Invalid(format!("type {l:?} has an empty value set"))),
            None => Ok(()),
        }
    }

    fn sizes(&self, ctx: &LabelledFinSet) -> Result<Vec<usize>> {
        ctx.labels().iter().map(|l| self.size_of(l)).collect()
    }
}

/// `∏_{p ∈ ctx} S_{label(p)}`. The empty context denotes a one-element set.
pub fn denote(ctx: &LabelledFinSet, tau: &TypeAssignment) -> Result<FinSet> {
    Ok(FinSet(tau.sizes(ctx)?.iter().product()))
}

/// Row-major digits of an element of a product.
fn digits(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &n) in out.iter_mut().zip(sizes).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

fn undigits(sizes: &[usize], ds: impl IntoIterator<Item = usize>) -> usize {
    sizes.iter().zip(ds).fold(0, |acc, (&n, d)| acc * n + d)
}

/// The map `∏cod → ∏dom` induced by a label-preserving `h: dom → cod`:
/// a tuple over `cod` is sent to the tuple reading port `p` at `h(p)`.
pub fn reindex(h: &FinFn, dom: &LabelledFinSet, cod: &LabelledFinSet, tau: &TypeAssignment) -> Result<FinFn> {
    dom.preserved_by(h, cod)?;
    let src = tau.sizes(cod)?;
    let tgt = tau.sizes(dom)?;
    let n: usize = src.iter().product();
    let map = (0..n)
        .map(|k| {
            let t = digits(&src, k);
            undigits(&tgt, h.table().iter().map(|&j| t[j]))
        })
        .collect();
    FinFn::new(FinSet(n), FinSet(tgt.iter().product()), map)
}

/// A cospan `inner −f→ junctions ←g− outer` of labelled sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UwdDiagram {
    pub inner: LabelledFinSet,
    pub junctions: LabelledFinSet,
    pub outer: LabelledFinSet,
    pub f: FinFn,
    pub g: FinFn,
}

impl UwdDiagram {
    pub fn new(
        inner: LabelledFinSet,
        junctions: LabelledFinSet,
        outer: LabelledFinSet,
        f: FinFn,
        g: FinFn,
    ) -> Result<Self> {
        inner.preserved_by(&f, &junctions)?;
        outer.preserved_by(&g, &junctions)?;
        Ok(UwdDiagram { inner, junctions, outer, f, g })
    }

    /// Builds a diagram from label lists and leg tables.
    pub fn from_parts(inner: &[&str], junctions: &[&str], outer: &[&str], f: &[usize], g: &[usize]) -> Result<Self> {
        let j = junctions.len();
        let leg = |map: &[usize], dom: usize| FinFn::new(FinSet(dom), FinSet(j), map.to_vec());
        UwdDiagram::new(
            LabelledFinSet::from_strs(inner),
            LabelledFinSet::from_strs(junctions),
            LabelledFinSet::from_strs(outer),
            leg(f, inner.len())?,
            leg(g, outer.len())?,
        )
    }

    /// Every port wired straight through.
    pub fn identity(ctx: &LabelledFinSet) -> Self {
        let id = FinFn::identity(ctx.base());
        UwdDiagram { inner: ctx.clone(), junctions: ctx.clone(), outer: ctx.clone(), f: id.clone(), g: id }
    }

    /// Side-by-side placement; ports and junctions of `self` come first.
    pub fn disjoint_union(&self, other: &UwdDiagram) -> UwdDiagram {
        let j = self.junctions.base().size();
        let shift = |h: &FinFn, other_h: &FinFn, dom: usize| {
            let mut map = h.table().to_vec();
            map.extend(other_h.table().iter().map(|&x| x + j));
            FinFn::new(FinSet(dom), FinSet(j + other.junctions.base().size()), map).expect("in range")
        };
        let inner = self.inner.coproduct(&other.inner);
        let outer = self.outer.coproduct(&other.outer);
        UwdDiagram {
            f: shift(&self.f, &other.f, inner.base().size()),
            g: shift(&self.g, &other.g, outer.base().size()),
            inner,
            outer,
            junctions: self.junctions.coproduct(&other.junctions),
        }
    }

    /// Junctions hit by neither leg.
    pub fn dangling(&self) -> Vec<usize> {
        let mut hit = vec![false; self.junctions.base().size()];
        for &j in self.f.table().iter().chain(self.g.table()) {
            hit[j] = true;
        }
        hit.iter().enumerate().filter(|(_, &h)| !h).map(|(j, _)| j).collect()
    }

    /// Dangling junctions whose type has no values: evaluation then yields
    /// the bottom predicate whatever the input.
    pub fn warnings(&self, tau: &TypeAssignment) -> Vec<String> {
        self.dangling()
            .into_iter()
            .filter(|&j| tau.size_of(self.junctions.label(j)).is_ok_and(|n| n == 0))
            .map(|j| format!("junction {j} is dangling and its type {:?} is empty", self.junctions.label(j)))
            .collect()
    }
}

/// A context together with a predicate over its denotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub context: LabelledFinSet,
    pub predicate: Predicate,
}

impl System {
    pub fn new(context: LabelledFinSet, predicate: Predicate, tau: &TypeAssignment) -> Result<Self> {
        let n = denote(&context, tau)?;
        if predicate.base() != n {
            return Err(Error::ShapeMismatch(format!(
                "predicate has {} entries, context denotes {}",
                predicate.base().size(),
                n.size()
            )));
        }
        Ok(System { context, predicate })
    }
}

/// `∃ĝ(P(f̂)(φ))`.
pub fn evaluate(w: &UwdDiagram, sys: &System, d: &dyn Doctrine, tau: &TypeAssignment) -> Result<System> {
    if sys.context != w.inner {
        return Err(Error::ContextMismatch(format!(
            "system over {:?}, diagram expects {:?}",
            sys.context.labels(),
            w.inner.labels()
        )));
    }
    let f_hat = reindex(&w.f, &w.inner, &w.junctions, tau)?;
    let g_hat = reindex(&w.g, &w.outer, &w.junctions, tau)?;
    let pulled = d.subst(&f_hat, &sys.predicate);
    Ok(System { context: w.outer.clone(), predicate: d.exists(&g_hat, &pulled) })
}

/// Fills the inner boundary of `outer` with `fill`. Junctions are glued by
/// the pushout of `fill.g` and `outer.f` over the shared boundary.
pub fn compose_diagrams(outer: &UwdDiagram, fill: &UwdDiagram) -> Result<UwdDiagram> {
    if fill.outer != outer.inner {
        return Err(Error::BoundaryMismatch(format!(
            "filling boundary {:?} into holes {:?}",
            fill.outer.labels(),
            outer.inner.labels()
        )));
    }
    let (junctions, po) = pushout_labelled(&fill.g, &outer.f, &fill.junctions, &outer.junctions)?;
    let f = fill.f.then(&po.i1)?;
    let g = outer.g.then(&po.i2)?;
    UwdDiagram::new(fill.inner.clone(), junctions, outer.outer.clone(), f, g)
}

/// Tensor of systems through the external laxator; the context is the
/// disjoint union, first system's ports first.
pub fn tensor_systems(d: &dyn Doctrine, a: &System, b: &System) -> System {
    System { context: a.context.coproduct(&b.context), predicate: laxate(d, &a.predicate, &b.predicate) }
}

/// Evaluating the nested diagram equals evaluating in two steps.
pub fn functoriality_check(
    outer: &UwdDiagram,
    fill: &UwdDiagram,
    sys: &System,
    d: &dyn Doctrine,
    tau: &TypeAssignment,
) -> Result<Report> {
    let nested = evaluate(&compose_diagrams(outer, fill)?, sys, d, tau)?;
    let stepwise = evaluate(outer, &evaluate(fill, sys, d, tau)?, d, tau)?;
    let mut c = Clause::new("uwd.nesting", "evaluation is functorial in nesting");
    c.check(nested == stepwise, || {
        format!("nested {} vs stepwise {}", d.show(&nested.predicate), d.show(&stepwise.predicate))
    });
    let mut r = Report::new();
    r.push(c);
    Ok(r)
}

/// `evaluate(w₁ ⊕ w₂, s₁ ⊗ s₂) = evaluate(w₁, s₁) ⊗ evaluate(w₂, s₂)`.
pub fn monoidality_check(
    w1: &UwdDiagram,
    s1: &System,
    w2: &UwdDiagram,
    s2: &System,
    d: &dyn Doctrine,
    tau: &TypeAssignment,
) -> Result<Report> {
    let together = evaluate(&w1.disjoint_union(w2), &tensor_systems(d, s1, s2), d, tau)?;
    let apart = tensor_systems(d, &evaluate(w1, s1, d, tau)?, &evaluate(w2, s2, d, tau)?);
    let mut c = Clause::new("uwd.monoidal", "evaluation preserves disjoint union");
    c.check(together == apart, || format!("{} vs {}", d.show(&together.predicate), d.show(&apart.predicate)));
    let mut r = Report::new();
    r.push(c);
    Ok(r)
}

/// Evaluates a diagram by enumerating every assignment of values to its
/// junctions, without going through a doctrine. Relations become a
/// conjunctive query; costs become a min-plus sum over the assignments.
pub fn brute_force(
    w: &UwdDiagram,
    sys: &System,
    semantics: Semantics,
    k: u8,
    tau: &TypeAssignment,
) -> Result<Predicate> {
    if sys.context != w.inner {
        return Err(Error::ContextMismatch("system does not sit on the inner boundary".into()));
    }
    let junction_sizes = tau.sizes(&w.junctions)?;
    let inner_sizes = tau.sizes(&w.inner)?;
    let outer_sizes = tau.sizes(&w.outer)?;
    let costs = TruncatedCosts::new(k.max(1));
    let out_len: usize = outer_sizes.iter().product();
    let mut out: Vec<u8> = match semantics {
        Semantics::Rel => vec![0; out_len],
        Semantics::Trop => vec![costs.inf(); out_len],
    };
    let assignments: usize = junction_sizes.iter().product();
    for n in 0..assignments {
        let values = digits(&junction_sizes, n);
        let i = undigits(&inner_sizes, w.f.table().iter().map(|&j| values[j]));
        let o = undigits(&outer_sizes, w.g.table().iter().map(|&j| values[j]));
        let v = sys.predicate.0[i];
        match semantics {
            Semantics::Rel => out[o] |= v,
            Semantics::Trop => out[o] = out[o].min(v),
        }
    }
    Ok(Predicate(out))
}

/// Which doctrine a system is read in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Relations: the powerset doctrine.
    Rel,
    /// Costs: the truncated tropical doctrine.
    Trop,
}

/// The doctrine for a semantics; `k` caps tropical costs.
pub fn doctrine_for(semantics: Semantics, k: u8) -> Box<dyn Doctrine> {
    let triple = AdequateTriple::all(usize::MAX);
    match semantics {
        Semantics::Rel => Box::new(powerset_doctrine(triple)),
        Semantics::Trop => Box::new(tropical_doctrine(triple, k)),
    }
}

/// Predicate data as it appears in files: a hex bitset for relations, a
/// cost array (numbers or `"inf"`) for tropical systems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Data {
    Hex(String),
    Costs(Vec<CostEntry>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostEntry {
    Finite(u32),
    Named(InfTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfTag {
    #[serde(rename = "inf")]
    Inf,
}

/// Bit `i` of the hex number is the truth value of tuple `i`. Printed most
/// significant digit first, without a prefix.
pub fn bits_to_hex(bits: &[u8]) -> String {
    let nibbles = bits.len().div_ceil(4).max(1);
    let mut out = String::new();
    for n in (0..nibbles).rev() {
        let v = (0..4).filter(|b| bits.get(4 * n + b).is_some_and(|&x| x != 0)).fold(0, |acc, b| acc | 1 << b);
        write!(out, "{v:x}").expect("write to string");
    }
    let trimmed = out.trim_start_matches('0');
    if trimmed.is_empty() { "0".into() } else { trimmed.into() }
}

pub fn hex_to_bits(hex: &str, len: usize) -> Result<Vec<u8>> {
    let digits = hex.strip_prefix("0x").unwrap_or(hex);
    let mut bits = vec![0u8; len];
    for (pos, ch) in digits.chars().rev().enumerate() {
        let v = ch.to_digit(16).ok_or_else(|| Error::Invalid(format!("{ch:?} is not a hex digit")))?;
        for b in 0..4 {
            if v & (1 << b) != 0 {
                let i = 4 * pos + b;
                if i >= len {
                    return Err(Error::ShapeMismatch(format!("bit {i} set beyond {len} tuples")));
                }
                bits[i] = 1;
            }
        }
    }
    Ok(bits)
}

/// Decodes file data into a predicate. Costs above `k` saturate to ∞,
/// matching the truncated quantale.
pub fn decode_data(semantics: Semantics, k: u8, data: &Data, len: usize) -> Result<Predicate> {
    match (semantics, data) {
        (Semantics::Rel, Data::Hex(h)) => Ok(Predicate(hex_to_bits(h, len)?)),
        (Semantics::Trop, Data::Costs(cs)) => {
            if cs.len() != len {
                return Err(Error::ShapeMismatch(format!("{} costs for {len} tuples", cs.len())));
            }
            let v = TruncatedCosts::new(k);
            Ok(Predicate(
                cs.iter()
                    .map(|c| match c {
                        CostEntry::Finite(x) => v.encode(Cost::Finite(*x)),
                        CostEntry::Named(InfTag::Inf) => v.inf(),
                    })
                    .collect(),
            ))
        }
        (Semantics::Rel, _) => Err(Error::Invalid("relational data must be a hex string".into())),
        (Semantics::Trop, _) => Err(Error::Invalid("tropical data must be a cost array".into())),
    }
}

pub fn encode_data(semantics: Semantics, k: u8, p: &Predicate) -> Data {
    match semantics {
        Semantics::Rel => Data::Hex(bits_to_hex(&p.0)),
        Semantics::Trop => {
            let v = TruncatedCosts::new(k);
            Data::Costs(
                p.0.iter()
                    .map(|&c| match v.decode(c) {
                        Cost::Finite(x) => CostEntry::Finite(x),
                        Cost::Inf => CostEntry::Named(InfTag::Inf),
                    })
                    .collect(),
            )
        }
    }
}

/// A diagram as written in a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramEntry {
    pub inner: Vec<String>,
    pub junctions: Vec<String>,
    pub outer: Vec<String>,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

/// A system as written in a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemEntry {
    pub context: Vec<String>,
    pub semantics: Semantics,
    pub data: Data,
}

/// The on-disk format: types, their value counts, named diagrams and named
/// systems, plus an optional tropical cap `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UwdFile {
    pub labels: Vec<String>,
    pub domains: BTreeMap<String, usize>,
    #[serde(default)]
    pub diagrams: BTreeMap<String, DiagramEntry>,
    #[serde(default)]
    pub systems: BTreeMap<String, SystemEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
}

impl UwdFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: UwdFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("parse error: {e}")))?;
        for l in file.domains.keys() {
            if !file.labels.contains(l) {
                return Err(Error::Invalid(format!("domain given for undeclared type {l:?}")));
            }
        }
        for l in &file.labels {
            if !file.domains.contains_key(l) {
                return Err(Error::Invalid(format!("type {l:?} has no domain")));
            }
        }
        Ok(file)
    }

    pub fn types(&self) -> TypeAssignment {
        TypeAssignment { domains: self.domains.clone() }
    }

    pub fn diagram(&self, name: &str) -> Result<UwdDiagram> {
        let s = self.diagrams.get(name).ok_or_else(|| Error::Invalid(format!("no diagram named {name:?}")))?;
        fn strs(v: &[String]) -> Vec<&str> {
            v.iter().map(String::as_str).collect()
        }
        UwdDiagram::from_parts(&strs(&s.inner), &strs(&s.junctions), &strs(&s.outer), &s.f, &s.g)
    }

    /// A named system, decoded with cap `k` (the file's own cap wins).
    pub fn system(&self, name: &str, k: u8) -> Result<(Semantics, System)> {
        let s = self.systems.get(name).ok_or_else(|| Error::Invalid(format!("no system named {name:?}")))?;
        let tau = self.types();
        let ctx = LabelledFinSet::new(s.context.clone());
        let n = denote(&ctx, &tau)?;
        let p = decode_data(s.semantics, self.k.unwrap_or(k), &s.data, n.size())?;
        Ok((s.semantics, System::new(ctx, p, &tau)?))
    }
}
