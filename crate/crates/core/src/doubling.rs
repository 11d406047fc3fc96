//! Extending a doctrine along spans: `P ↦ P•`.
//!
//! A span `X₁ ←x₁− X −x₂→ X₂` is sent to the monotone map
//! `∃x₂ ∘ P(x₁): P(X₁) → P(X₂)`, a loose arrow of the quintet double
//! category of posets. Tight arrows go to substitution maps, and a span
//! cell goes to the inequality between the two boundary composites of the
//! resulting square.
//!
//! Posets are thin, so every structure cell of `P•` (compositor, unitor,
//! laxator, unit, symmetry) is an inequality between two monotone maps, and
//! an invertible one is an equality. A [`QtCell`] records the four boundary
//! maps and both inequality verdicts.
//!
//! Square orientation: a [`QtCell`] has `top: A → B`, `bottom: A' → B'`,
//! `left: A → A'`, `right: B → B'`, and its canonical direction is
//! `bottom ∘ left ≤ right ∘ top`. Because span cells live in the opposite
//! double category, the image of a span cell `α: S ⇒ T` has `top` the image
//! of `T` and `bottom` the image of `S`.

use crate::doctrine::{check_beck_chevalley, check_external_monoidal, laxate, Doctrine, Predicate, Square};
use crate::error::{Error, Result};
use crate::finset::{compose, map_product, product, swap, FinFn, FinSet};
use crate::poskit::{leq_maps, Cell2, MonotoneMap, Poset};
use crate::report::{Clause, Report};
use crate::spancat::{cells_between, Span, SpanCell, Spans};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// A square in the quintet double category of posets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QtCell {
    pub top: MonotoneMap,
    pub bottom: MonotoneMap,
    pub left: MonotoneMap,
    pub right: MonotoneMap,
    /// `bottom ∘ left ≤ right ∘ top`.
    pub forward: Cell2,
    /// `right ∘ top ≤ bottom ∘ left`.
    pub backward: Cell2,
}

impl QtCell {
    pub fn new(top: MonotoneMap, bottom: MonotoneMap, left: MonotoneMap, right: MonotoneMap) -> Result<Self> {
        let lower = left.then(&bottom)?;
        let upper = top.then(&right)?;
        let forward = leq_maps(&lower, &upper)?;
        let backward = leq_maps(&upper, &lower)?;
        Ok(QtCell { top, bottom, left, right, forward, backward })
    }

    /// The canonical direction holds, so the square is a cell at all.
    pub fn exists(&self) -> bool {
        self.forward.holds
    }

    /// Both directions hold: the boundary composites are equal.
    pub fn is_invertible(&self) -> bool {
        self.forward.holds && self.backward.holds
    }

    /// First element of the domain where the two composites differ.
    pub fn witness(&self) -> Option<usize> {
        self.forward.witness.or(self.backward.witness)
    }
}

/// The doubled doctrine `P•`, with a cache of loose images.
pub struct PDot<D> {
    base: D,
    spans: Spans,
    loose: RwLock<HashMap<Span, Arc<MonotoneMap>>>,
}

impl<D: Doctrine> PDot<D> {
    pub fn new(base: D) -> Self {
        let spans = Spans::new(base.triple().clone());
        PDot { base, spans, loose: RwLock::new(HashMap::new()) }
    }

    pub fn doctrine(&self) -> &D {
        &self.base
    }

    pub fn spans(&self) -> &Spans {
        &self.spans
    }

    /// `∃x₂(P(x₁)(a))` for a single predicate.
    pub fn loose_apply(&self, x: &Span, a: &Predicate) -> Predicate {
        self.base.exists(x.right(), &self.base.subst(x.left(), a))
    }

    pub fn loose_image(&self, x: &Span) -> Result<Arc<MonotoneMap>> {
        if let Some(m) = self.loose.read().expect("cache lock").get(x) {
            return Ok(m.clone());
        }
        let d = &self.base;
        let dom = d.carrier(x.source())?;
        let cod = d.carrier(x.target())?;
        let preds = d.predicates(x.source());
        let m = Arc::new(MonotoneMap::tabulate(&dom, &cod, |k| d.index_of(&self.loose_apply(x, &preds[k]))));
        self.loose.write().expect("cache lock").insert(x.clone(), m.clone());
        Ok(m)
    }

    /// `P(f)` for a tight map.
    pub fn tight_image(&self, f: &FinFn) -> Result<MonotoneMap> {
        self.base.subst_map(f)
    }

    fn cell_square(&self, alpha: &SpanCell) -> Result<QtCell> {
        QtCell::new(
            (*self.loose_image(&alpha.bottom)?).clone(),
            (*self.loose_image(&alpha.top)?).clone(),
            self.tight_image(&alpha.tight_left)?,
            self.tight_image(&alpha.tight_right)?,
        )
    }

    /// The image of a span cell. Fails with `CellAbsent` if the canonical
    /// inequality does not hold.
    pub fn cell_image(&self, alpha: &SpanCell) -> Result<QtCell> {
        let cell = self.cell_square(alpha)?;
        if !cell.exists() {
            return Err(Error::CellAbsent(format!("{alpha}: {}", self.describe(&cell))));
        }
        Ok(cell)
    }

    fn compositor_square(&self, x: &Span, y: &Span) -> Result<QtCell> {
        let xy = self.spans.loose_compose(x, y)?;
        let composite = self.loose_image(x)?.then(&*self.loose_image(y)?)?;
        let id_src = MonotoneMap::identity(composite.dom());
        let id_tgt = MonotoneMap::identity(composite.cod());
        QtCell::new(composite, (*self.loose_image(&xy)?).clone(), id_src, id_tgt)
    }

    /// `P•X' ∘ P•X` against `P•(X ⊙ X')`; must be an equality.
    pub fn compositor(&self, x: &Span, y: &Span) -> Result<QtCell> {
        let cell = self.compositor_square(x, y)?;
        if !cell.is_invertible() {
            return Err(Error::CoherenceFailure(format!("compositor at {x}, {y}: {}", self.describe(&cell))));
        }
        Ok(cell)
    }

    fn unitor_square(&self, a: FinSet) -> Result<QtCell> {
        let p = self.base.carrier(a)?;
        let id = MonotoneMap::identity(&p);
        QtCell::new(id.clone(), (*self.loose_image(&Span::identity(a))?).clone(), id.clone(), id)
    }

    /// `P•(e_A)` against the identity of `P(A)`.
    pub fn unitor(&self, a: FinSet) -> Result<QtCell> {
        let cell = self.unitor_square(a)?;
        if !cell.is_invertible() {
            return Err(Error::CoherenceFailure(format!("unitor at {a}")));
        }
        Ok(cell)
    }

    /// `μ₀(A, B): P(A) × P(B) → P(A × B)`.
    pub fn laxator_map(&self, a: FinSet, b: FinSet) -> Result<MonotoneMap> {
        crate::doctrine::external_laxator(&self.base, a, b)
    }

    fn laxator_square(&self, x: &Span, y: &Span) -> Result<QtCell> {
        let top = crate::poskit::map_product(&*self.loose_image(x)?, &*self.loose_image(y)?);
        let bottom = (*self.loose_image(&x.product(y))?).clone();
        let left = self.laxator_map(x.source(), y.source())?;
        let right = self.laxator_map(x.target(), y.target())?;
        QtCell::new(top, bottom, left, right)
    }

    /// The class condition under which the laxator component must be an
    /// equality: `x₂, y₂ ∈ R` and `y₂ ∈ L`.
    pub fn commuter_hypothesis(&self, x: &Span, y: &Span) -> bool {
        let t = self.base.triple();
        t.in_right(x.right()) && t.in_right(y.right()) && t.in_left(y.right())
    }

    /// The laxator component at `(X, Y)`. Always a cell; an equality
    /// whenever [`PDot::commuter_hypothesis`] holds.
    pub fn laxator_cell(&self, x: &Span, y: &Span) -> Result<QtCell> {
        let cell = self.laxator_square(x, y)?;
        if !cell.exists() {
            return Err(Error::CellAbsent(format!("laxator at {x}, {y}")));
        }
        if self.commuter_hypothesis(x, y) && !cell.is_invertible() {
            return Err(Error::CommuterFailure(format!("laxator at {x}, {y}: {}", self.describe(&cell))));
        }
        Ok(cell)
    }

    fn unit_square(&self) -> Result<QtCell> {
        let one = FinSet(1);
        let p1 = self.base.carrier(one)?;
        let unit = self.base.index_of(&crate::doctrine::external_unit(&self.base));
        let i = MonotoneMap::point(&p1, unit);
        let top = MonotoneMap::identity(&Poset::terminal());
        QtCell::new(top, (*self.loose_image(&Span::identity(one))?).clone(), i.clone(), i)
    }

    /// `I•`: the unit of `P(1)` pushed through `P•(e_1)`.
    pub fn unit_cell(&self) -> Result<QtCell> {
        let cell = self.unit_square()?;
        if !cell.is_invertible() {
            return Err(Error::CoherenceFailure("unit cell".into()));
        }
        Ok(cell)
    }

    fn symmetry_square(&self, x: &Span, y: &Span) -> Result<QtCell> {
        let top = (*self.loose_image(&y.product(x))?).clone();
        let bottom = (*self.loose_image(&x.product(y))?).clone();
        let left = self.tight_image(&swap(x.source(), y.source()))?;
        let right = self.tight_image(&swap(x.target(), y.target()))?;
        QtCell::new(top, bottom, left, right)
    }

    /// `σ•` at `(X, Y)`: `P•(X × Y)` and `P•(Y × X)` agree up to the swaps.
    pub fn symmetry_cell(&self, x: &Span, y: &Span) -> Result<QtCell> {
        let cell = self.symmetry_square(x, y)?;
        if !cell.is_invertible() {
            return Err(Error::CoherenceFailure(format!("symmetry at {x}, {y}")));
        }
        Ok(cell)
    }

    /// Renders the first point where the two composites of a cell differ.
    pub fn describe(&self, cell: &QtCell) -> String {
        let Some(w) = cell.witness() else {
            return "composites agree".into();
        };
        let lower = cell.left.then(&cell.bottom).map(|m| m.apply(w));
        let upper = cell.top.then(&cell.right).map(|m| m.apply(w));
        format!("at input #{w}: bottom∘left gives #{lower:?}, right∘top gives #{upper:?}")
    }

    /// Decodes an element of `P(A) × P(B)` into a pair of predicates.
    pub fn decode_pair(&self, a: FinSet, b: FinSet, index: usize) -> (Predicate, Predicate) {
        let nb = self.base.values().levels().pow(b.size() as u32);
        (self.base.predicate_at(a, index / nb), self.base.predicate_at(b, index % nb))
    }

    /// The three `(L, R)`-pullback squares the laxator commuter rests on,
    /// for spans `X`, `Y` in the commuter domain.
    pub fn commuter_squares(&self, x: &Span, y: &Span) -> Vec<Square> {
        let (xa, ya) = (x.apex(), y.apex());
        let (x2, y2) = (x.target(), y.target());
        let id = FinFn::identity;
        vec![
            // X×Y over X2×Y2 through X×Y2 and X2×Y.
            Square {
                h: map_product(&id(xa), y.right()),
                k: map_product(x.right(), &id(ya)),
                g: map_product(x.right(), &id(y2)),
                f: map_product(&id(x2), y.right()),
            },
            // X2×Y over Y2 along the projection.
            Square {
                h: map_product(&id(x2), y.right()),
                k: product(x2, ya).pi_b,
                g: product(x2, y2).pi_b,
                f: y.right().clone(),
            },
            // X×Y2 over X2 along the projection.
            Square {
                h: product(xa, y2).pi_a,
                k: map_product(x.right(), &id(y2)),
                g: x.right().clone(),
                f: product(x2, y2).pi_a,
            },
        ]
    }
}

/// What to verify and how far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PDotBounds {
    /// Spans, composable pairs and triples with sets up to this size.
    pub spans: usize,
    /// Cells and their pastings with sets up to this size.
    pub cells: usize,
    /// Laxator and symmetry pairs with sets up to this size.
    pub pairs: usize,
}

impl PDotBounds {
    pub fn uniform(n: usize) -> Self {
        PDotBounds { spans: n, cells: n, pairs: n }
    }
}

struct Indexed {
    spans: Vec<Span>,
    images: Vec<Arc<MonotoneMap>>,
    tights: Vec<FinFn>,
    tight_ix: HashMap<FinFn, usize>,
    tight_images: Vec<MonotoneMap>,
}

impl Indexed {
    fn new<D: Doctrine>(pdot: &PDot<D>, bound: usize) -> Result<Self> {
        let spans = pdot.spans.enumerate_spans(bound);
        let images = spans.iter().map(|s| pdot.loose_image(s)).collect::<Result<Vec<_>>>()?;
        let tights = pdot.spans.triple.morphisms_up_to(bound);
        let tight_ix = tights.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let tight_images = tights.iter().map(|f| pdot.tight_image(f)).collect::<Result<Vec<_>>>()?;
        Ok(Indexed { spans, images, tights, tight_ix, tight_images })
    }
}

/// Runs every coherence clause of `P•` as a lax symmetric monoidal double
/// functor. Clause ids are prefixed with `pdot.`.
pub fn verify_pdot<D: Doctrine>(pdot: &PDot<D>, bounds: PDotBounds) -> Report {
    use rayon::prelude::*;
    if bounds.spans == 0 {
        return Report::new();
    }
    type Job<'a> = Box<dyn Fn() -> Result<Report> + Send + Sync + 'a>;
    let jobs: Vec<(&str, Job)> = vec![
        ("tight", Box::new(|| verify_tight(pdot, bounds.spans))),
        ("loose", Box::new(|| verify_loose(pdot, bounds.spans))),
        ("cells", Box::new(|| verify_cells(pdot, bounds.cells))),
        ("monoidal", Box::new(|| verify_monoidal(pdot, bounds.pairs))),
    ];
    let parts: Vec<Report> = jobs
        .par_iter()
        .map(|(name, job)| {
            job().unwrap_or_else(|e| {
                let mut c = Clause::new(format!("{name}.construction"), "suite could be built");
                c.check(false, || e.to_string());
                let mut r = Report::new();
                r.push(c);
                r
            })
        })
        .collect();
    let mut out = Report::new();
    for part in parts {
        for mut c in part.clauses {
            c.clause = format!("pdot.{}", c.clause);
            out.push(c);
        }
    }
    out
}

fn verify_tight<D: Doctrine>(pdot: &PDot<D>, bound: usize) -> Result<Report> {
    let ix = Indexed::new(pdot, bound)?;
    let mut ident = Clause::new("tight.identity", "unital coherence: P(id) = id");
    let mut comp = Clause::new("tight.composition", "compositional coherence: P(g∘f) = Pf ∘ Pg");
    for (f, pf) in ix.tights.iter().zip(&ix.tight_images) {
        if f.is_identity() {
            ident.check(*pf == MonotoneMap::identity(pf.dom()), || format!("{f}"));
        }
    }
    for (f, pf) in ix.tights.iter().zip(&ix.tight_images) {
        for (g, pg) in ix.tights.iter().zip(&ix.tight_images).filter(|(g, _)| g.dom() == f.cod()) {
            let gf = compose(f, g)?;
            let pgf = &ix.tight_images[ix.tight_ix[&gf]];
            comp.check(*pgf == pg.then(pf)?, || format!("f={f}, g={g}"));
        }
    }
    let mut r = Report::new();
    r.push(ident);
    r.push(comp);
    Ok(r)
}

fn verify_loose<D: Doctrine>(pdot: &PDot<D>, bound: usize) -> Result<Report> {
    let ix = Indexed::new(pdot, bound)?;
    let objs = pdot.spans.triple.objects_up_to(bound);
    let mut unitor = Clause::new("loose.unitor", "unitor: P•(e_A) = id");
    for &a in &objs {
        let c = pdot.unitor_square(a)?;
        unitor.check(c.is_invertible(), || format!("A={a}"));
    }
    let mut canon = Clause::new("loose.compositor-canonical", "compositor: P•(X⊙Y) ≤ P•Y ∘ P•X");
    let mut inverse = Clause::new("loose.compositor-inverse", "compositor inverse via Beck-Chevalley");
    let mut unital = Clause::new("loose.unitality", "double unitality: e ⊙ X = X = X ⊙ e");
    let mut assoc = Clause::new("loose.associativity", "double associativity");
    let mut associator = Clause::new("loose.associator", "canonical associator commutes with the legs");
    let spans = &ix.spans;
    let mut composites: HashMap<(usize, usize), Span> = HashMap::new();
    for (i, x) in spans.iter().enumerate() {
        let ex = Span::identity(x.source());
        let xe = pdot.spans.loose_compose(x, &Span::identity(x.target()))?;
        let ex_x = pdot.spans.loose_compose(&ex, x)?;
        unital.check(xe == *x && ex_x == *x, || format!("X={x}"));
        for (j, y) in spans.iter().enumerate().filter(|(_, y)| y.source() == x.target()) {
            let cell = pdot.compositor_square(x, y)?;
            canon.check(cell.exists(), || format!("X={x}, Y={y}: {}", pdot.describe(&cell)));
            inverse.check(cell.backward.holds, || format!("X={x}, Y={y}: {}", pdot.describe(&cell)));
            composites.insert((i, j), pdot.spans.loose_compose(x, y)?);
        }
    }
    for (i, x) in spans.iter().enumerate() {
        for (j, y) in spans.iter().enumerate().filter(|(_, y)| y.source() == x.target()) {
            let xy = &composites[&(i, j)];
            for (k, z) in spans.iter().enumerate().filter(|(_, z)| z.source() == y.target()) {
                let yz = &composites[&(j, k)];
                let left = pdot.spans.loose_compose(xy, z)?;
                let right = pdot.spans.loose_compose(x, yz)?;
                let three = ix.images[i].then(&ix.images[j])?.then(&ix.images[k])?;
                let ok = *pdot.loose_image(&left)? == three && *pdot.loose_image(&right)? == three;
                assoc.check(ok, || format!("X={x}, Y={y}, Z={z}"));
                let a = crate::spancat::associator(x, y, z)?;
                let legs_ok = a.is_bijective()
                    && compose(&a, right.left())? == *left.left()
                    && compose(&a, right.right())? == *left.right();
                associator.check(legs_ok, || format!("X={x}, Y={y}, Z={z}"));
            }
        }
    }
    let mut r = Report::new();
    r.push(unitor);
    r.push(canon);
    r.push(inverse);
    r.push(unital);
    r.push(assoc);
    r.push(associator);
    Ok(r)
}

/// `bottom ∘ left ≤ right ∘ top`, evaluated pointwise without building the
/// composites.
fn square_holds(top: &MonotoneMap, bottom: &MonotoneMap, left: &MonotoneMap, right: &MonotoneMap) -> bool {
    let cod = right.cod();
    (0..top.dom().size()).all(|a| cod.leq(bottom.apply(left.apply(a)), right.apply(top.apply(a))))
}

fn verify_cells<D: Doctrine>(pdot: &PDot<D>, bound: usize) -> Result<Report> {
    let ix = Indexed::new(pdot, bound)?;
    let (n, t) = (ix.spans.len(), ix.tights.len());

    // A quintet square depends only on its boundary, so cells are grouped by
    // (top, bottom, tight_left, tight_right) and pairs of groups are checked
    // once, weighted by how many cell pairs they stand for.
    let mut group_of: HashMap<[usize; 4], usize> = HashMap::new();
    let mut groups: Vec<([usize; 4], SpanCell, usize)> = Vec::new();
    let mut existence = Clause::new("cells.existence", "every span cell has an image cell");
    let mut identity = Clause::new("cells.identity", "identity cells go to identity squares");
    let mut tight_id = Clause::new("cells.tight-identity", "naturality of the unitor");
    let square = |top: &MonotoneMap, bottom: &MonotoneMap, l: usize, r: usize| -> Result<QtCell> {
        QtCell::new(top.clone(), bottom.clone(), ix.tight_images[l].clone(), ix.tight_images[r].clone())
    };
    let image = |key: [usize; 4]| square(&ix.images[key[1]], &ix.images[key[0]], key[2], key[3]);
    let mut exists_at: Vec<Option<bool>> = vec![None; n * n * t * t];
    let slot = |key: [usize; 4]| ((key[0] * n + key[1]) * t + key[2]) * t + key[3];
    let mut here = Vec::new();
    for (ti, top) in ix.spans.iter().enumerate() {
        for (bi, bottom) in ix.spans.iter().enumerate() {
            here.clear();
            cells_between(top, bottom, &mut here);
            for c in here.drain(..) {
                let key = [ti, bi, ix.tight_ix[&c.tight_left], ix.tight_ix[&c.tight_right]];
                let q = image(key)?;
                exists_at[slot(key)] = Some(q.exists());
                existence.check(q.exists(), || format!("{c}"));
                if c.apex.is_identity() && c.tight_left.is_identity() && c.tight_right.is_identity() && c.top == c.bottom {
                    identity.check(q.is_invertible(), || format!("{c}"));
                }
                if c.top.is_identity() && c.bottom.is_identity() && c.tight_left == c.tight_right {
                    tight_id.check(q.is_invertible(), || format!("{c}"));
                }
                match group_of.get(&key) {
                    Some(&g) => groups[g].2 += 1,
                    None => {
                        group_of.insert(key, groups.len());
                        groups.push((key, c, 1));
                    }
                }
            }
        }
    }

    // Vertical pasting: the composite's tight sides are images of composites
    // and the composite has an image cell.
    let mut by_top: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut by_left: Vec<Vec<usize>> = vec![Vec::new(); t];
    for (g, (key, _, _)) in groups.iter().enumerate() {
        by_top[key[0]].push(g);
        by_left[key[2]].push(g);
    }
    let mut tight_comp: Vec<Option<(usize, bool)>> = vec![None; t * t];
    let mut side = |fa: usize, fb: usize| -> Result<(usize, bool)> {
        if let Some(v) = tight_comp[fa * t + fb] {
            return Ok(v);
        }
        let ci = ix.tight_ix[&compose(&ix.tights[fa], &ix.tights[fb])?];
        let v = (ci, ix.tight_images[ci] == ix.tight_images[fb].then(&ix.tight_images[fa])?);
        tight_comp[fa * t + fb] = Some(v);
        Ok(v)
    };
    let mut vertical = Clause::new("cells.vertical", "image of a vertical pasting is the pasting of images");
    for (ka, alpha, ma) in &groups {
        for &g in &by_top[ka[1]] {
            let (kb, beta, mb) = &groups[g];
            let (l, l_ok) = side(ka[2], kb[2])?;
            let (r, r_ok) = side(ka[3], kb[3])?;
            let key = [ka[0], kb[1], l, r];
            let exists = match exists_at[slot(key)] {
                Some(ok) => ok,
                None => {
                    let ok = image(key)?.exists();
                    exists_at[slot(key)] = Some(ok);
                    ok
                }
            };
            vertical.check_many(l_ok && r_ok && exists, ma * mb, || format!("{alpha} above {beta}"));
        }
    }

    // Horizontal pasting: the composite's loose sides are compositor images,
    // which must agree with the composites of the pieces, and the composite
    // square exists.
    let mut composite_images: Vec<Option<(Arc<MonotoneMap>, bool)>> = vec![None; n * n];
    let mut image_of_pair = |i: usize, j: usize| -> Result<(Arc<MonotoneMap>, bool)> {
        if let Some(v) = &composite_images[i * n + j] {
            return Ok(v.clone());
        }
        let xy = pdot.spans.loose_compose(&ix.spans[i], &ix.spans[j])?;
        let img = pdot.loose_image(&xy)?;
        let ok = *img == ix.images[i].then(&ix.images[j])?;
        composite_images[i * n + j] = Some((img.clone(), ok));
        Ok((img, ok))
    };
    let mut horizontal = Clause::new("cells.horizontal", "naturality of the compositor");
    for (ka, alpha, ma) in &groups {
        for &g in &by_left[ka[3]] {
            let (kb, beta, mb) = &groups[g];
            let (top_img, top_ok) = image_of_pair(ka[0], kb[0])?;
            let (bottom_img, bottom_ok) = image_of_pair(ka[1], kb[1])?;
            let ok = top_ok
                && bottom_ok
                && square_holds(&bottom_img, &top_img, &ix.tight_images[ka[2]], &ix.tight_images[kb[3]]);
            horizontal.check_many(ok, ma * mb, || format!("{alpha} beside {beta}"));
        }
    }

    let mut r = Report::new();
    r.push(existence);
    r.push(identity);
    r.push(tight_id);
    r.push(vertical);
    r.push(horizontal);
    Ok(r)
}

fn verify_monoidal<D: Doctrine>(pdot: &PDot<D>, bound: usize) -> Result<Report> {
    let ix = Indexed::new(pdot, bound)?;
    let d = pdot.doctrine();
    let mut canonical = Clause::new("laxator.canonical", "μ• components are cells");
    let mut commuter = Clause::new("laxator.commuter", "μ• is a companion commuter when x₂, y₂ ∈ R and y₂ ∈ L");
    let mut off = Clause::new("laxator.off-domain", "μ• outside the commuter hypothesis (recorded only)");
    let mut off_strict = 0usize;
    let mut off_witness = None;
    let mut unoriented = 0usize;
    let mut sym = Clause::new("symmetry.cell", "σ• components are invertible");
    let mut unit_law = Clause::new("laxator.unit", "μ•(I•, X) = X");
    let mut bc = Clause::new("laxator.beck-chevalley", "Beck-Chevalley on the commuter squares");
    for x in &ix.spans {
        for y in &ix.spans {
            let cell = pdot.laxator_square(x, y)?;
            canonical.check(cell.exists(), || format!("X={x}, Y={y}"));
            if pdot.commuter_hypothesis(x, y) {
                commuter.check(cell.is_invertible(), || {
                    let w = cell.witness().unwrap_or(0);
                    let (a, b) = pdot.decode_pair(x.source(), y.source(), w);
                    format!("X={x}, Y={y}, a={}, b={}", d.show(&a), d.show(&b))
                });
                for s in pdot.commuter_squares(x, y) {
                    // Each square is read in whichever orientation makes it an
                    // (L, R)-square; the laxator argument needs only one.
                    let verdict = check_beck_chevalley(d, &s).or_else(|_| check_beck_chevalley(d, &s.transpose()));
                    match verdict {
                        Ok(r) => bc.check(r.passed(), || format!("{s}")),
                        Err(_) => unoriented += 1,
                    }
                }
            } else {
                off.instances += 1;
                if !cell.is_invertible() {
                    off_strict += 1;
                    off_witness.get_or_insert_with(|| format!("X={x}, Y={y}"));
                }
            }
            let sc = pdot.symmetry_square(x, y)?;
            sym.check(sc.is_invertible(), || format!("X={x}, Y={y}"));
        }
        let e1x = Span::identity(FinSet(1)).product(x);
        unit_law.check(*pdot.loose_image(&e1x)? == *pdot.loose_image(x)?, || format!("X={x}"));
    }
    off.note = Some(match off_witness {
        Some(w) => format!("{off_strict} off-domain pairs are strict inequalities; first: {w}"),
        None => format!("no strict inequality among {} off-domain pairs", off.instances),
    });

    if unoriented > 0 {
        bc.note = Some(format!("{unoriented} squares are (L, R)-squares in neither orientation"));
    }

    let mut unit_cell = Clause::new("unit.cell", "I• is invertible");
    let uc = pdot.unit_square()?;
    unit_cell.check(uc.is_invertible(), || "unit cell".into());

    let mut nat = Clause::new("laxator.naturality", "cell naturality of μ•");
    for (f, pf) in ix.tights.iter().zip(&ix.tight_images) {
        for (g, pg) in ix.tights.iter().zip(&ix.tight_images) {
            let lhs = crate::poskit::map_product(pf, pg).then(&pdot.laxator_map(f.dom(), g.dom())?)?;
            let rhs = pdot.laxator_map(f.cod(), g.cod())?.then(&pdot.tight_image(&map_product(f, g))?)?;
            nat.check(lhs == rhs, || format!("f={f}, g={g}"));
        }
    }

    let mut r = Report::new();
    r.push(canonical);
    r.push(commuter);
    r.push(bc);
    r.push(off);
    r.push(nat);
    r.push(unit_law);
    r.push(unit_cell);
    r.push(sym);
    for mut c in check_external_monoidal(d, bound).clauses {
        c.clause = format!("laxator.external-{}", c.clause.trim_start_matches("external."));
        r.push(c);
    }
    // μ• applied to a pair of predicates agrees with the laxator map.
    let mut pointwise = Clause::new("laxator.pointwise", "μ₀ table agrees with the predicate formula");
    for &a in &pdot.spans.triple.objects_up_to(bound.min(2)) {
        for &b in &pdot.spans.triple.objects_up_to(bound.min(2)) {
            let m = pdot.laxator_map(a, b)?;
            let nb = d.predicates(b).len();
            for (i, p) in d.predicates(a).iter().enumerate() {
                for (j, q) in d.predicates(b).iter().enumerate() {
                    let want = d.index_of(&laxate(d, p, q));
                    pointwise.check(m.apply(i * nb + j) == want, || format!("{} {}", d.show(p), d.show(q)));
                }
            }
        }
    }
    r.push(pointwise);
    Ok(r)
}

/// Searches every pair of spans outside the commuter hypothesis for a
/// laxator component that is a strict inequality. Works predicate by
/// predicate, so it reaches sizes where tabulating `P(X × Y)` is too costly.
///
/// The clause never fails: it records how many off-domain pairs exist, how
/// many are strict, and the first strict one in enumeration order.
pub fn search_off_domain<D: Doctrine>(pdot: &PDot<D>, bound: usize) -> Clause {
    use rayon::prelude::*;
    let d = pdot.doctrine();
    let spans = pdot.spans.enumerate_spans(bound);
    let per_x: Vec<(usize, usize, Option<String>)> = spans
        .par_iter()
        .map(|x| {
            let (mut pairs, mut strict, mut first) = (0, 0, None);
            for y in spans.iter().filter(|y| !pdot.commuter_hypothesis(x, y)) {
                pairs += 1;
                if let Some(w) = off_domain_witness(d, x, y) {
                    strict += 1;
                    first.get_or_insert(w);
                }
            }
            (pairs, strict, first)
        })
        .collect();
    let mut c = Clause::new("laxator.off-domain-search", "μ• outside the commuter hypothesis (search)");
    let pairs: usize = per_x.iter().map(|p| p.0).sum();
    let strict: usize = per_x.iter().map(|p| p.1).sum();
    c.instances = pairs;
    c.note = Some(match per_x.into_iter().find_map(|p| p.2) {
        Some(w) => format!("{strict} of {pairs} off-domain pairs are strict at sets ≤ {bound}; first: {w}"),
        None => format!("none of {pairs} off-domain pairs is strict at sets ≤ {bound}"),
    });
    c
}

fn off_domain_witness<D: Doctrine>(d: &D, x: &Span, y: &Span) -> Option<String> {
    let xy = x.product(y);
    for a in d.predicates(x.source()) {
        let ea = d.exists(x.right(), &d.subst(x.left(), &a));
        for b in d.predicates(y.source()) {
            let eb = d.exists(y.right(), &d.subst(y.left(), &b));
            let lower = d.exists(xy.right(), &d.subst(xy.left(), &laxate(d, &a, &b)));
            let upper = laxate(d, &ea, &eb);
            if lower != upper {
                return Some(format!(
                    "X={x}, Y={y}, a={}, b={}: {} < {}",
                    d.show(&a),
                    d.show(&b),
                    d.show(&lower),
                    d.show(&upper)
                ));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::{powerset_doctrine, tropical_doctrine, Mutant, Mutation};
    use crate::finset::AdequateTriple;

    fn f(cod: usize, map: &[usize]) -> FinFn {
        FinFn::from_table(cod, map)
    }

    #[test]
    fn loose_image_examples() {
        let p = PDot::new(powerset_doctrine(AdequateTriple::all(2)));
        let id = p.loose_image(&Span::identity(FinSet(2))).unwrap();
        assert_eq!(*id, MonotoneMap::identity(id.dom()));
        let x = Span::new(FinFn::identity(FinSet(2)), f(1, &[0, 0])).unwrap();
        assert_eq!(p.loose_image(&x).unwrap().table(), &[0, 1, 1, 1]);

        let t = PDot::new(tropical_doctrine(AdequateTriple::all(2), 3));
        let y = Span::new(f(1, &[0, 0]), FinFn::identity(FinSet(2))).unwrap();
        let m = t.loose_image(&y).unwrap();
        // c ↦ (c, c): index c ↦ c + 5c.
        assert_eq!(m.table(), &[0, 6, 12, 18, 24]);
    }

    #[test]
    fn cell_image_examples() {
        let p = PDot::new(powerset_doctrine(AdequateTriple::all(2)));
        let x = Span::new(FinFn::identity(FinSet(2)), f(1, &[0, 0])).unwrap();
        let id = p.cell_image(&SpanCell::identity(&x)).unwrap();
        assert!(id.is_invertible());
        // The constant map as a cell from e_2 to e_1.
        let c = f(1, &[0, 0]);
        let alpha = SpanCell::tight_identity(&c);
        let q = p.cell_image(&alpha).unwrap();
        assert!(q.exists());
        // A cell whose reverse fails: e_2 ⇒ (2 ← 2 → 1) over (id, !).
        let beta = SpanCell::new(Span::identity(FinSet(2)), x.clone(), FinFn::identity(FinSet(2)), c.clone(), FinFn::identity(FinSet(2))).unwrap();
        let q = p.cell_image(&beta).unwrap();
        assert!(q.exists());
        assert!(!q.is_invertible());
        let t = PDot::new(tropical_doctrine(AdequateTriple::all(2), 2));
        let q = t.cell_image(&beta).unwrap();
        assert!(q.exists() && !q.is_invertible());
    }

    #[test]
    fn compositor_examples() {
        let p = PDot::new(powerset_doctrine(AdequateTriple::all(2)));
        let c = f(1, &[0, 0]);
        let star = Span::companion(&c);
        let shriek = Span::conjoint(&c);
        assert!(p.compositor(&star, &shriek).unwrap().is_invertible());
        assert!(p.compositor(&shriek, &star).unwrap().is_invertible());
        assert!(p.compositor(&star, &Span::identity(FinSet(2))).unwrap().is_invertible());
        let t = PDot::new(tropical_doctrine(AdequateTriple::all(2), 2));
        assert!(t.compositor(&shriek, &star).unwrap().is_invertible());
    }

    #[test]
    fn unitor_unit_and_symmetry() {
        let p = PDot::new(powerset_doctrine(AdequateTriple::all(3)));
        for n in 1..=3 {
            assert!(p.unitor(FinSet(n)).unwrap().is_invertible());
        }
        let u = p.unit_cell().unwrap();
        assert_eq!(u.left.table(), &[1]);
        let x = Span::new(FinFn::identity(FinSet(2)), f(1, &[0, 0])).unwrap();
        let y = Span::companion(&f(2, &[1]));
        assert!(p.symmetry_cell(&x, &x).unwrap().is_invertible());
        assert!(p.symmetry_cell(&x, &y).unwrap().is_invertible());
    }

    #[test]
    fn laxator_examples() {
        let p = PDot::new(powerset_doctrine(AdequateTriple::all(2)));
        let e = Span::identity(FinSet(1));
        assert!(p.laxator_cell(&e, &e).unwrap().is_invertible());
        let x = Span::new(FinFn::identity(FinSet(2)), f(1, &[0, 0])).unwrap();
        assert!(p.laxator_cell(&x, &x).unwrap().is_invertible());
        let t = PDot::new(tropical_doctrine(AdequateTriple::all(2), 3));
        assert!(t.laxator_cell(&x, &x).unwrap().is_invertible());
    }

    #[test]
    fn broken_tensor_breaks_the_commuter() {
        let bad = Mutant::new(powerset_doctrine(AdequateTriple::all(1)), Mutation::BrokenTensor);
        let p = PDot::new(bad);
        let r = verify_pdot(&p, PDotBounds::uniform(1));
        let c = r.get("pdot.laxator.commuter").unwrap();
        assert!(!c.passed());
        assert!(c.witness.is_some());
    }

    #[test]
    fn small_suite_passes() {
        let p = PDot::new(powerset_doctrine(AdequateTriple::all(1)));
        let r = verify_pdot(&p, PDotBounds::uniform(1));
        assert!(r.passed(), "{r}");
    }
}
