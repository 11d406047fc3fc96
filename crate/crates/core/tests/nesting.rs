//! A path of three relations, nested two different ways.

use doctrina::doctrine::{laxate, Doctrine, Predicate};
use doctrina::finset::LabelledFinSet;
use doctrina::uwd::{
    brute_force, compose_diagrams, doctrine_for, evaluate, functoriality_check, Semantics, System, TypeAssignment,
    UwdDiagram,
};

const K: u8 = 6;
const INF: u8 = K + 1;

fn chain() -> UwdDiagram {
    UwdDiagram::from_parts(&["v"; 4], &["v"; 3], &["v"; 2], &[0, 1, 1, 2], &[0, 2]).unwrap()
}

fn three_chain() -> UwdDiagram {
    UwdDiagram::from_parts(&["v"; 6], &["v"; 4], &["v"; 2], &[0, 1, 1, 2, 2, 3], &[0, 3]).unwrap()
}

fn pass_through() -> UwdDiagram {
    UwdDiagram::identity(&LabelledFinSet::from_strs(&["v"; 2]))
}

/// Glue the first two edges, then the result to the third; and the other
/// way round.
fn splits() -> [(UwdDiagram, UwdDiagram); 2] {
    [(chain(), chain().disjoint_union(&pass_through())), (chain(), pass_through().disjoint_union(&chain()))]
}

fn system(d: &dyn Doctrine, edges: &[Predicate; 3], tau: &TypeAssignment) -> System {
    let p = laxate(d, &laxate(d, &edges[0], &edges[1]), &edges[2]);
    System::new(LabelledFinSet::from_strs(&["v"; 6]), p, tau).unwrap()
}

fn check(sem: Semantics, edges: [Predicate; 3], tau: &TypeAssignment) -> Predicate {
    let d = doctrine_for(sem, K);
    let sys = system(&*d, &edges, tau);
    let flat = evaluate(&three_chain(), &sys, &*d, tau).unwrap().predicate;
    assert_eq!(flat, brute_force(&three_chain(), &sys, sem, K, tau).unwrap());
    for (outer, fill) in splits() {
        assert!(functoriality_check(&outer, &fill, &sys, &*d, tau).unwrap().passed());
        let nested = compose_diagrams(&outer, &fill).unwrap();
        assert_eq!(nested.junctions.base().size(), 4);
        assert_eq!(evaluate(&nested, &sys, &*d, tau).unwrap().predicate, flat);
    }
    flat
}

#[test]
fn relational_three_chain_splits_agree_with_the_flat_join() {
    let tau = TypeAssignment::uniform(&["v"], 2);
    // R = {(0,1)}, S = {(1,1), (1,0)}, T = {(0,1)}; bit 2a + b.
    let edges = [Predicate(vec![0, 1, 0, 0]), Predicate(vec![0, 0, 1, 1]), Predicate(vec![0, 1, 0, 0])];
    assert_eq!(check(Semantics::Rel, edges, &tau), Predicate(vec![0, 1, 0, 0]));
}

fn min_plus(x: &[u8], y: &[u8], n: usize) -> Vec<u8> {
    let mut out = vec![INF; n * n];
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let (a, b) = (x[i * n + m], y[m * n + j]);
                if a < INF && b < INF {
                    out[i * n + j] = out[i * n + j].min((a + b).min(INF));
                }
            }
        }
    }
    out
}

#[test]
fn tropical_three_chain_is_the_min_plus_matrix_product() {
    let n = 3;
    let tau = TypeAssignment::uniform(&["v"], n);
    let r = vec![0, 1, INF, INF, 0, 2, INF, INF, 0];
    let s = vec![0, INF, 3, 1, 0, INF, INF, 1, 0];
    let t = vec![2, INF, INF, 1, 1, INF, 0, INF, 1];
    let expected = min_plus(&min_plus(&r, &s, n), &t, n);
    let got = check(Semantics::Trop, [Predicate(r), Predicate(s), Predicate(t)], &tau);
    assert_eq!(got.0, expected);
}
