//! A seeded corpus of small wiring diagrams with systems on them, and
//! oracles that evaluate a diagram without any doctrine machinery.

#![allow(dead_code)]

use doctrina::doctrine::Predicate;
use doctrina::finset::LabelledFinSet;
use doctrina::poskit::TruncatedCosts;
use doctrina::uwd::{Semantics, System, TypeAssignment, UwdDiagram};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const CORPUS_SEED: u64 = 0xC0FFEE;
pub const K: u8 = 3;
pub const PER_FAMILY: usize = 20;

/// Instances sharing a type assignment, so their boundaries can be matched.
pub struct Family {
    pub tau: TypeAssignment,
    pub instances: Vec<Instance>,
}

pub struct Instance {
    pub diagram: UwdDiagram,
    pub rel: System,
    pub trop: System,
}

const LABELS: [&str; 2] = ["a", "b"];

fn boundary(rng: &mut StdRng, max: usize) -> Vec<&'static str> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| LABELS[rng.gen_range(0..2)]).collect()
}

/// A diagram with the given boundaries. Junctions are created on demand so
/// every port finds one of its own type, then topped up with extra
/// (possibly dangling) junctions up to three.
fn diagram(rng: &mut StdRng, inner: &[&'static str], outer: &[&'static str]) -> Option<UwdDiagram> {
    let mut junctions: Vec<&'static str> = Vec::new();
    let attach = |rng: &mut StdRng, junctions: &mut Vec<&'static str>, label: &'static str| -> Option<usize> {
        let existing: Vec<usize> = (0..junctions.len()).filter(|&j| junctions[j] == label).collect();
        if !existing.is_empty() && (junctions.len() == 3 || rng.gen_bool(0.6)) {
            Some(existing[rng.gen_range(0..existing.len())])
        } else if junctions.len() < 3 {
            junctions.push(label);
            Some(junctions.len() - 1)
        } else {
            None
        }
    };
    let f = inner.iter().map(|&l| attach(rng, &mut junctions, l)).collect::<Option<Vec<_>>>()?;
    let g = outer.iter().map(|&l| attach(rng, &mut junctions, l)).collect::<Option<Vec<_>>>()?;
    while junctions.len() < 3 && rng.gen_bool(0.2) {
        junctions.push(LABELS[rng.gen_range(0..2)]);
    }
    if junctions.is_empty() {
        junctions.push(LABELS[rng.gen_range(0..2)]);
    }
    Some(UwdDiagram::from_parts(inner, &junctions, outer, &f, &g).expect("labels preserved by construction"))
}

fn random_systems(rng: &mut StdRng, ctx: &LabelledFinSet, tau: &TypeAssignment) -> (System, System) {
    let len: usize = ctx.labels().iter().map(|l| tau.size_of(l).unwrap()).product();
    let inf = TruncatedCosts::new(K).inf();
    let bits = Predicate((0..len).map(|_| u8::from(rng.gen_bool(0.5))).collect());
    let costs = Predicate((0..len).map(|_| rng.gen_range(0..=inf)).collect());
    (System::new(ctx.clone(), bits, tau).unwrap(), System::new(ctx.clone(), costs, tau).unwrap())
}

/// Three families of twenty instances: junctions ≤ 3, value sets ≤ 3.
pub fn corpus() -> Vec<Family> {
    let mut rng = StdRng::seed_from_u64(CORPUS_SEED);
    let taus = [[("a", 2), ("b", 3)], [("a", 3), ("b", 1)], [("a", 2), ("b", 2)]];
    taus.iter()
        .map(|t| {
            let tau = TypeAssignment::new(t.iter().map(|&(l, n)| (l.to_string(), n)));
            let mut instances = Vec::new();
            while instances.len() < PER_FAMILY {
                let inner = boundary(&mut rng, 3);
                let outer = boundary(&mut rng, 2);
                let Some(diagram) = diagram(&mut rng, &inner, &outer) else { continue };
                let (rel, trop) = random_systems(&mut rng, &diagram.inner, &tau);
                instances.push(Instance { diagram, rel, trop });
            }
            Family { tau, instances }
        })
        .collect()
}

/// For every instance, a second diagram whose inner boundary is the first
/// one's outer boundary, so each instance takes part in at least one nesting.
pub fn caps(family: &Family, seed: u64) -> Vec<UwdDiagram> {
    let mut rng = StdRng::seed_from_u64(seed);
    family
        .instances
        .iter()
        .map(|inst| {
            let inner: Vec<&'static str> =
                inst.diagram.outer.labels().iter().map(|l| if l == "a" { "a" } else { "b" }).collect();
            loop {
                let outer = boundary(&mut rng, 2);
                if let Some(d) = diagram(&mut rng, &inner, &outer) {
                    break d;
                }
            }
        })
        .collect()
}

fn sizes(ctx: &LabelledFinSet, tau: &TypeAssignment) -> Vec<usize> {
    ctx.labels().iter().map(|l| tau.size_of(l).unwrap()).collect()
}

/// Row-major tuples, first coordinate most significant.
fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out.into_iter().flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

/// Whether inner tuple `t` and outer tuple `o` can be extended to a value
/// for every junction: ports on a shared junction must agree, and a
/// junction nobody touches needs a nonempty type.
fn consistent(w: &UwdDiagram, tau: &TypeAssignment, t: &[usize], o: &[usize]) -> bool {
    let mut value: Vec<Option<usize>> = vec![None; w.junctions.base().size()];
    let wires = w.f.table().iter().zip(t).chain(w.g.table().iter().zip(o));
    for (&j, &v) in wires {
        match value[j] {
            Some(u) if u != v => return false,
            _ => value[j] = Some(v),
        }
    }
    value.iter().enumerate().all(|(j, v)| v.is_some() || tau.size_of(w.junctions.label(j)).unwrap() > 0)
}

/// Evaluates a diagram as a conjunctive query (relations) or as a min-plus
/// sum (costs): for each outer tuple, combine every inner tuple that joins
/// with it.
pub fn oracle(w: &UwdDiagram, sys: &System, semantics: Semantics, tau: &TypeAssignment) -> Predicate {
    let inner = tuples(&sizes(&w.inner, tau));
    let outer = tuples(&sizes(&w.outer, tau));
    let inf = TruncatedCosts::new(K).inf();
    let values = outer.iter().map(|o| {
        let joined = inner.iter().enumerate().filter(|(_, t)| consistent(w, tau, t, o)).map(|(i, _)| sys.predicate.0[i]);
        match semantics {
            Semantics::Rel => joined.max().unwrap_or(0),
            Semantics::Trop => joined.min().unwrap_or(inf),
        }
    });
    Predicate(values.collect())
}
