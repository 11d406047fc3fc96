//! Spans of finite sets as loose arrows, span morphisms as cells.
//!
//! A [`Span`] `X₁ ← X → X₂` has its left leg in the class L and its right
//! leg in R of an [`AdequateTriple`]. Loose composition is by pullback,
//! using the chosen pullbacks of [`crate::finset::pullback`], so identity
//! spans are strict units. Composition is associative only up to the
//! canonical bijection of apices returned by [`associator`].
//!
//! A [`SpanCell`] is a morphism of spans drawn in the direction of the
//! underlying functions: `apex: top.apex → bottom.apex` over tight maps
//! `tight_left: top.X₁ → bottom.X₁` and `tight_right: top.X₂ → bottom.X₂`.
//! Passing to the opposite double category reverses the tight maps; the
//! doubling module accounts for that when it sends cells to quintets.

use crate::error::{Error, Result};
use crate::finset::{compose, map_product, pullback, AdequateTriple, FinFn, FinSet};
use crate::report::{Clause, Report};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    left: FinFn,
    right: FinFn,
}

impl Span {
    /// A span with no class check. Prefer [`Spans::span`].
    pub fn new(left: FinFn, right: FinFn) -> Result<Self> {
        if left.dom() != right.dom() {
            return Err(Error::DomMismatch(format!("legs {left} and {right} have different apices")));
        }
        Ok(Span { left, right })
    }

    pub fn identity(a: FinSet) -> Self {
        Span { left: FinFn::identity(a), right: FinFn::identity(a) }
    }

    /// `f^* = (B ←f− A =− A)` for `f: A → B`.
    pub fn companion(f: &FinFn) -> Self {
        Span { left: f.clone(), right: FinFn::identity(f.dom()) }
    }

    /// `f_! = (A =− A −f→ B)` for `f: A → B`.
    pub fn conjoint(f: &FinFn) -> Self {
        Span { left: FinFn::identity(f.dom()), right: f.clone() }
    }

    pub fn left(&self) -> &FinFn {
        &self.left
    }

    pub fn right(&self) -> &FinFn {
        &self.right
    }

    pub fn apex(&self) -> FinSet {
        self.left.dom()
    }

    pub fn source(&self) -> FinSet {
        self.left.cod()
    }

    pub fn target(&self) -> FinSet {
        self.right.cod()
    }

    pub fn is_identity(&self) -> bool {
        self.left.is_identity() && self.right.is_identity()
    }

    /// Componentwise product `X × Y`.
    pub fn product(&self, other: &Span) -> Span {
        Span { left: map_product(&self.left, &other.left), right: map_product(&self.right, &other.right) }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ← {} → {})", self.left, self.apex(), self.right)
    }
}

/// A morphism of spans, see the module docs for orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanCell {
    pub top: Span,
    pub bottom: Span,
    pub tight_left: FinFn,
    pub tight_right: FinFn,
    pub apex: FinFn,
}

impl SpanCell {
    /// Builds a cell after checking that both squares commute.
    pub fn new(top: Span, bottom: Span, tight_left: FinFn, tight_right: FinFn, apex: FinFn) -> Result<Self> {
        let shapes_ok = apex.dom() == top.apex()
            && apex.cod() == bottom.apex()
            && tight_left.dom() == top.source()
            && tight_left.cod() == bottom.source()
            && tight_right.dom() == top.target()
            && tight_right.cod() == bottom.target();
        if !shapes_ok {
            return Err(Error::BoundaryMismatch(format!(
                "maps {tight_left}, {apex}, {tight_right} do not fit {top} ⇒ {bottom}"
            )));
        }
        let left_ok = compose(&apex, &bottom.left)? == compose(&top.left, &tight_left)?;
        let right_ok = compose(&apex, &bottom.right)? == compose(&top.right, &tight_right)?;
        if !(left_ok && right_ok) {
            return Err(Error::BoundaryMismatch(format!("squares of {top} ⇒ {bottom} do not commute")));
        }
        Ok(SpanCell { top, bottom, tight_left, tight_right, apex })
    }

    pub fn identity(x: &Span) -> Self {
        SpanCell {
            top: x.clone(),
            bottom: x.clone(),
            tight_left: FinFn::identity(x.source()),
            tight_right: FinFn::identity(x.target()),
            apex: FinFn::identity(x.apex()),
        }
    }

    /// The identity cell on a tight map: `e_A ⇒ e_B` with every component `f`.
    pub fn tight_identity(f: &FinFn) -> Self {
        SpanCell {
            top: Span::identity(f.dom()),
            bottom: Span::identity(f.cod()),
            tight_left: f.clone(),
            tight_right: f.clone(),
            apex: f.clone(),
        }
    }

    /// Componentwise product of two cells.
    pub fn product(&self, other: &SpanCell) -> SpanCell {
        SpanCell {
            top: self.top.product(&other.top),
            bottom: self.bottom.product(&other.bottom),
            tight_left: map_product(&self.tight_left, &other.tight_left),
            tight_right: map_product(&self.tight_right, &other.tight_right),
            apex: map_product(&self.apex, &other.apex),
        }
    }
}

impl fmt::Display for SpanCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} ⇒ {} via {} | {} | {}]",
            self.top, self.bottom, self.tight_left, self.apex, self.tight_right
        )
    }
}

/// Vertical pasting: `alpha` above `beta`.
pub fn cell_vcompose(alpha: &SpanCell, beta: &SpanCell) -> Result<SpanCell> {
    if alpha.bottom != beta.top {
        return Err(Error::BoundaryMismatch(format!(
            "bottom {} of the upper cell is not the top {} of the lower",
            alpha.bottom, beta.top
        )));
    }
    Ok(SpanCell {
        top: alpha.top.clone(),
        bottom: beta.bottom.clone(),
        tight_left: compose(&alpha.tight_left, &beta.tight_left)?,
        tight_right: compose(&alpha.tight_right, &beta.tight_right)?,
        apex: compose(&alpha.apex, &beta.apex)?,
    })
}

/// Horizontal pasting: `alpha` then `beta` along the shared tight map.
pub fn cell_hcompose(alpha: &SpanCell, beta: &SpanCell) -> Result<SpanCell> {
    if alpha.tight_right != beta.tight_left {
        return Err(Error::BoundaryMismatch(format!(
            "right edge {} does not match left edge {}",
            alpha.tight_right, beta.tight_left
        )));
    }
    let top = compose_unchecked(&alpha.top, &beta.top)?;
    let bottom = compose_unchecked(&alpha.bottom, &beta.bottom)?;
    let top_pb = pullback(alpha.top.right(), beta.top.left())?;
    let bottom_pb = pullback(alpha.bottom.right(), beta.bottom.left())?;
    let apex = bottom_pb.mediate(&compose(&top_pb.p, &alpha.apex)?, &compose(&top_pb.q, &beta.apex)?)?;
    Ok(SpanCell {
        top,
        bottom,
        tight_left: alpha.tight_left.clone(),
        tight_right: beta.tight_right.clone(),
        apex,
    })
}

fn compose_unchecked(x: &Span, y: &Span) -> Result<Span> {
    if x.target() != y.source() {
        return Err(Error::ObjMismatch(format!("{x} ends at {}, {y} starts at {}", x.target(), y.source())));
    }
    let pb = pullback(x.right(), y.left())?;
    Ok(Span { left: compose(&pb.p, x.left())?, right: compose(&pb.q, y.right())? })
}

/// The canonical bijection from the apex of `(x ⊙ y) ⊙ z` to the apex of
/// `x ⊙ (y ⊙ z)`.
pub fn associator(x: &Span, y: &Span, z: &Span) -> Result<FinFn> {
    let xy = pullback(x.right(), y.left())?;
    let xy_z = pullback(&compose(&xy.q, y.right())?, z.left())?;
    let yz = pullback(y.right(), z.left())?;
    let x_yz = pullback(x.right(), &compose(&yz.p, y.left())?)?;
    // Each apex element is determined by its (x, y, z) components.
    let triple_l: Vec<(usize, usize, usize)> = xy_z
        .apex
        .elements()
        .map(|k| {
            let m = xy_z.p.apply(k);
            (xy.p.apply(m), xy.q.apply(m), xy_z.q.apply(k))
        })
        .collect();
    let index_r: std::collections::HashMap<(usize, usize, usize), usize> = x_yz
        .apex
        .elements()
        .map(|k| {
            let m = x_yz.q.apply(k);
            ((x_yz.p.apply(k), yz.p.apply(m), yz.q.apply(m)), k)
        })
        .collect();
    let map = triple_l
        .iter()
        .map(|t| index_r.get(t).copied().ok_or_else(|| Error::NotAPullback(format!("no partner for {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    FinFn::new(xy_z.apex, x_yz.apex, map)
}

/// Companion `f^*` with its two structure cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompanionData {
    pub tight: FinFn,
    pub span: Span,
    /// `e_A ⇒ f^*`.
    pub eta: SpanCell,
    /// `f^* ⇒ e_B`.
    pub epsilon: SpanCell,
}

/// Conjoint `f_!` with its two structure cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjointData {
    pub tight: FinFn,
    pub span: Span,
    /// `e_A ⇒ f_!`.
    pub eta: SpanCell,
    /// `f_! ⇒ e_B`.
    pub epsilon: SpanCell,
}

/// Outcome of the two triangle identities for a companion or conjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangles {
    /// Vertical pasting equals the tight identity cell on `f`.
    pub vertical: bool,
    /// Horizontal pasting equals the identity cell on the span.
    pub horizontal: bool,
}

impl Triangles {
    pub fn hold(self) -> bool {
        self.vertical && self.horizontal
    }
}

impl CompanionData {
    pub fn verify_triangles(&self) -> Result<Triangles> {
        let vertical = cell_vcompose(&self.eta, &self.epsilon)? == SpanCell::tight_identity(&self.tight);
        let horizontal = cell_hcompose(&self.epsilon, &self.eta)? == SpanCell::identity(&self.span);
        Ok(Triangles { vertical, horizontal })
    }
}

impl ConjointData {
    pub fn verify_triangles(&self) -> Result<Triangles> {
        let vertical = cell_vcompose(&self.eta, &self.epsilon)? == SpanCell::tight_identity(&self.tight);
        let horizontal = cell_hcompose(&self.eta, &self.epsilon)? == SpanCell::identity(&self.span);
        Ok(Triangles { vertical, horizontal })
    }
}

/// The double category of `(L, R)`-spans over a fixed adequate triple.
#[derive(Debug, Clone)]
pub struct Spans {
    pub triple: AdequateTriple,
}

impl Spans {
    pub fn new(triple: AdequateTriple) -> Self {
        Spans { triple }
    }

    pub fn span(&self, left: FinFn, right: FinFn) -> Result<Span> {
        if !self.triple.in_left(&left) {
            return Err(Error::ClassViolation(format!("left leg {left} ∉ L")));
        }
        if !self.triple.in_right(&right) {
            return Err(Error::ClassViolation(format!("right leg {right} ∉ R")));
        }
        Span::new(left, right)
    }

    pub fn is_span(&self, x: &Span) -> bool {
        self.triple.in_left(x.left()) && self.triple.in_right(x.right())
    }

    /// `x ⊙ y`: first `x`, then `y`.
    pub fn loose_compose(&self, x: &Span, y: &Span) -> Result<Span> {
        if x.target() != y.source() {
            return Err(Error::ObjMismatch(format!("{x} ends at {}, {y} starts at {}", x.target(), y.source())));
        }
        if !self.triple.in_right(x.right()) || !self.triple.in_left(y.left()) {
            return Err(Error::ClassViolation(format!("cospan {}, {} is not an (L, R)-cospan", x.right(), y.left())));
        }
        let composite = compose_unchecked(x, y)?;
        if !self.is_span(&composite) {
            return Err(Error::ClassViolation(format!(
                "composite {composite} leaves the classes; the triple is not adequate"
            )));
        }
        Ok(composite)
    }

    pub fn companion_of(&self, f: &FinFn) -> Result<CompanionData> {
        if !self.triple.in_left(f) {
            return Err(Error::ClassViolation(format!("{f} ∉ L has no companion")));
        }
        let a = f.dom();
        let b = f.cod();
        let span = Span::companion(f);
        let eta = SpanCell::new(
            Span::identity(a),
            span.clone(),
            f.clone(),
            FinFn::identity(a),
            FinFn::identity(a),
        )?;
        let epsilon = SpanCell::new(span.clone(), Span::identity(b), FinFn::identity(b), f.clone(), f.clone())?;
        Ok(CompanionData { tight: f.clone(), span, eta, epsilon })
    }

    pub fn conjoint_of(&self, f: &FinFn) -> Result<ConjointData> {
        if !self.triple.in_right(f) {
            return Err(Error::ClassViolation(format!("{f} ∉ R has no conjoint")));
        }
        let a = f.dom();
        let b = f.cod();
        let span = Span::conjoint(f);
        let eta = SpanCell::new(
            Span::identity(a),
            span.clone(),
            FinFn::identity(a),
            f.clone(),
            FinFn::identity(a),
        )?;
        let epsilon = SpanCell::new(span.clone(), Span::identity(b), f.clone(), FinFn::identity(b), f.clone())?;
        Ok(ConjointData { tight: f.clone(), span, eta, epsilon })
    }

    /// All `(L, R)`-spans whose sets have size at most `max_size`, ordered by
    /// source, target, apex, then the leg tables. Empty when `max_size` is 0.
    pub fn enumerate_spans(&self, max_size: usize) -> Vec<Span> {
        if max_size == 0 {
            return Vec::new();
        }
        let objs = self.triple.objects_up_to(max_size);
        let mut out = Vec::new();
        for &x1 in &objs {
            for &x2 in &objs {
                for &apex in &objs {
                    let lefts: Vec<FinFn> = FinFn::all(apex, x1).filter(|f| self.triple.in_left(f)).collect();
                    let rights: Vec<FinFn> = FinFn::all(apex, x2).filter(|f| self.triple.in_right(f)).collect();
                    for l in &lefts {
                        for r in &rights {
                            out.push(Span { left: l.clone(), right: r.clone() });
                        }
                    }
                }
            }
        }
        out
    }

    /// All cells between spans of [`Spans::enumerate_spans`].
    pub fn enumerate_cells(&self, max_size: usize) -> Vec<SpanCell> {
        let spans = self.enumerate_spans(max_size);
        let mut out = Vec::new();
        for top in &spans {
            for bottom in &spans {
                cells_between(top, bottom, &mut out);
            }
        }
        out
    }
}

/// Appends every cell `top ⇒ bottom` to `out`.
pub fn cells_between(top: &Span, bottom: &Span, out: &mut Vec<SpanCell>) {
    for tl in FinFn::all(top.source(), bottom.source()) {
        for tr in FinFn::all(top.target(), bottom.target()) {
            // Admissible images for each apex element.
            let choices: Vec<Vec<usize>> = top
                .apex()
                .elements()
                .map(|s| {
                    let want_l = tl.apply(top.left().apply(s));
                    let want_r = tr.apply(top.right().apply(s));
                    bottom
                        .apex()
                        .elements()
                        .filter(|&t| bottom.left().apply(t) == want_l && bottom.right().apply(t) == want_r)
                        .collect()
                })
                .collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0usize; choices.len()];
            loop {
                let map = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                out.push(SpanCell {
                    top: top.clone(),
                    bottom: bottom.clone(),
                    tight_left: tl.clone(),
                    tight_right: tr.clone(),
                    apex: FinFn::new(top.apex(), bottom.apex(), map).expect("in range"),
                });
                let mut pos = idx.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
    }
}

/// How far the span suite looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanBounds {
    /// Unitarity, associators and enumeration with sets up to this size.
    pub spans: usize,
    /// Companion and conjoint triangles for maps between sets up to this size.
    pub triangles: usize,
    /// Every 2×2 grid of cells with sets up to this size.
    pub interchange_exhaustive: usize,
    /// Randomly drawn grids with sets up to this size.
    pub interchange_sampled: usize,
    pub samples: usize,
    pub seed: u64,
}

impl SpanBounds {
    pub fn uniform(n: usize) -> Self {
        SpanBounds {
            spans: n,
            triangles: n,
            interchange_exhaustive: n.min(1),
            interchange_sampled: n,
            samples: 100_000,
            seed: 0x5eed,
        }
    }
}

/// The laws of the double category of spans. Clause ids start with `spans.`.
pub fn check_spans(triple: &AdequateTriple, bounds: SpanBounds) -> Report {
    let sp = Spans::new(triple.clone());
    let mut r = Report::new();

    let spans = sp.enumerate_spans(bounds.spans);
    let mut enumeration = Clause::new("spans.enumeration", "enumeration is complete and duplicate-free");
    let distinct: std::collections::BTreeSet<&Span> = spans.iter().collect();
    enumeration.check(distinct.len() == spans.len(), || "duplicate span".into());
    let objs = triple.objects_up_to(bounds.spans);
    let mut expected = 0usize;
    for &x1 in &objs {
        for &x2 in &objs {
            for &apex in &objs {
                let l = FinFn::all(apex, x1).filter(|f| triple.in_left(f)).count();
                let rr = FinFn::all(apex, x2).filter(|f| triple.in_right(f)).count();
                expected += l * rr;
            }
        }
    }
    enumeration.check(expected == spans.len(), || format!("{} spans, brute force counts {expected}", spans.len()));
    r.push(enumeration);

    let mut unitarity = Clause::new("spans.unitarity", "identity spans are strict units");
    let mut assoc = Clause::new("spans.associator", "associativity up to the canonical associator");
    let mut composite = Clause::new("spans.composition", "composites stay within the classes");
    for x in &spans {
        let ok = sp.loose_compose(&Span::identity(x.source()), x).as_ref() == Ok(x)
            && sp.loose_compose(x, &Span::identity(x.target())).as_ref() == Ok(x);
        unitarity.check(ok, || format!("X={x}"));
        for y in spans.iter().filter(|y| y.source() == x.target()) {
            let xy = sp.loose_compose(x, y);
            composite.check(xy.is_ok(), || format!("X={x}, Y={y}"));
            let Ok(xy) = xy else { continue };
            for z in spans.iter().filter(|z| z.source() == y.target()) {
                let ok = (|| -> Result<bool> {
                    let left = sp.loose_compose(&xy, z)?;
                    let right = sp.loose_compose(x, &sp.loose_compose(y, z)?)?;
                    let a = associator(x, y, z)?;
                    Ok(a.is_bijective()
                        && compose(&a, right.left())? == *left.left()
                        && compose(&a, right.right())? == *left.right())
                })();
                assoc.check(ok == Ok(true), || format!("X={x}, Y={y}, Z={z}"));
            }
        }
    }
    r.push(unitarity);
    r.push(composite);
    r.push(assoc);

    let mut companions = Clause::new("spans.companion-triangles", "companion triangle identities");
    for f in triple.left_up_to(bounds.triangles) {
        let ok = sp.companion_of(&f).and_then(|c| c.verify_triangles()).is_ok_and(Triangles::hold);
        companions.check(ok, || format!("f={f}"));
    }
    r.push(companions);
    let mut conjoints = Clause::new("spans.conjoint-triangles", "conjoint triangle identities");
    for f in triple.right_up_to(bounds.triangles) {
        let ok = sp.conjoint_of(&f).and_then(|c| c.verify_triangles()).is_ok_and(Triangles::hold);
        conjoints.check(ok, || format!("f={f}"));
    }
    r.push(conjoints);

    let mut units = Clause::new("spans.cell-units", "identity cells are units for both pastings");
    for c in sp.enumerate_cells(bounds.spans) {
        let v = cell_vcompose(&SpanCell::identity(&c.top), &c).as_ref() == Ok(&c)
            && cell_vcompose(&c, &SpanCell::identity(&c.bottom)).as_ref() == Ok(&c);
        let h = cell_hcompose(&SpanCell::tight_identity(&c.tight_left), &c).as_ref() == Ok(&c)
            && cell_hcompose(&c, &SpanCell::tight_identity(&c.tight_right)).as_ref() == Ok(&c);
        units.check(v && h, || format!("{c}"));
    }
    r.push(units);

    let mut exhaustive = Clause::new("spans.interchange", "interchange law, every grid");
    let cells = sp.enumerate_cells(bounds.interchange_exhaustive);
    let grid = Grid::new(&cells);
    for a in 0..cells.len() {
        for &b in grid.right_of(a) {
            for &c in grid.below(a) {
                for &d in grid.below(b) {
                    if cells[c].tight_right == cells[d].tight_left {
                        let ok = interchange_holds(&cells[a], &cells[b], &cells[c], &cells[d]);
                        exhaustive.check(ok, || format!("{} | {} over {} | {}", cells[a], cells[b], cells[c], cells[d]));
                    }
                }
            }
        }
    }
    r.push(exhaustive);

    if bounds.interchange_sampled > bounds.interchange_exhaustive && bounds.samples > 0 {
        let mut sampled = Clause::new("spans.interchange-sampled", "interchange law, random grids");
        let cells = sp.enumerate_cells(bounds.interchange_sampled);
        let grid = Grid::new(&cells);
        let mut rng = StdRng::seed_from_u64(bounds.seed);
        let mut attempts = 0usize;
        while sampled.instances < bounds.samples && attempts < bounds.samples * 50 {
            attempts += 1;
            let a = rng.gen_range(0..cells.len());
            let (Some(&b), Some(&c)) = (grid.right_of(a).choose(&mut rng), grid.below(a).choose(&mut rng)) else {
                continue;
            };
            let ds: Vec<usize> =
                grid.below(b).iter().copied().filter(|&d| cells[d].tight_left == cells[c].tight_right).collect();
            let Some(&d) = ds.choose(&mut rng) else { continue };
            let ok = interchange_holds(&cells[a], &cells[b], &cells[c], &cells[d]);
            sampled.check(ok, || format!("{} | {} over {} | {}", cells[a], cells[b], cells[c], cells[d]));
        }
        sampled.note = Some(format!(
            "{} grids drawn with seed {:#x}; exhaustive enumeration at this size is out of reach",
            sampled.instances, bounds.seed
        ));
        r.push(sampled);
    }
    r
}

/// Composability indices over a list of cells.
struct Grid {
    right: Vec<Vec<usize>>,
    below: Vec<Vec<usize>>,
}

impl Grid {
    fn new(cells: &[SpanCell]) -> Self {
        let mut by_top: std::collections::HashMap<&Span, Vec<usize>> = Default::default();
        let mut by_left: std::collections::HashMap<&FinFn, Vec<usize>> = Default::default();
        for (i, c) in cells.iter().enumerate() {
            by_top.entry(&c.top).or_default().push(i);
            by_left.entry(&c.tight_left).or_default().push(i);
        }
        let empty = Vec::new();
        let right = cells.iter().map(|c| by_left.get(&c.tight_right).unwrap_or(&empty).clone()).collect();
        let below = cells.iter().map(|c| by_top.get(&c.bottom).unwrap_or(&empty).clone()).collect();
        Grid { right, below }
    }

    fn right_of(&self, i: usize) -> &[usize] {
        &self.right[i]
    }

    fn below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }
}

/// `(a | b) over (c | d)` pasted rows first equals columns first.
fn interchange_holds(a: &SpanCell, b: &SpanCell, c: &SpanCell, d: &SpanCell) -> bool {
    let rows = cell_hcompose(a, b).and_then(|ab| cell_hcompose(c, d).and_then(|cd| cell_vcompose(&ab, &cd)));
    let cols = cell_vcompose(a, c).and_then(|ac| cell_vcompose(b, d).and_then(|bd| cell_hcompose(&ac, &bd)));
    matches!((rows, cols), (Ok(x), Ok(y)) if x == y)
}
