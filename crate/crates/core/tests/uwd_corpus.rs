mod common;

use common::{caps, corpus, oracle, K};
use doctrina::uwd::{
    brute_force, compose_diagrams, doctrine_for, evaluate, functoriality_check, monoidality_check, Semantics,
};

#[test]
fn corpus_respects_its_bounds() {
    let families = corpus();
    let total: usize = families.iter().map(|f| f.instances.len()).sum();
    assert!(total >= 50);
    for fam in &families {
        assert!(fam.tau.domains.values().all(|&n| (1..=3).contains(&n)));
        for inst in &fam.instances {
            assert!(inst.diagram.junctions.base().size() <= 3);
        }
    }
}

#[test]
fn relational_evaluation_is_a_conjunctive_query() {
    let d = doctrine_for(Semantics::Rel, K);
    for fam in corpus() {
        for inst in &fam.instances {
            let got = evaluate(&inst.diagram, &inst.rel, &*d, &fam.tau).unwrap();
            assert_eq!(got.predicate, oracle(&inst.diagram, &inst.rel, Semantics::Rel, &fam.tau), "{:?}", inst.diagram);
            assert_eq!(got.context, inst.diagram.outer);
        }
    }
}

#[test]
fn tropical_evaluation_is_a_min_plus_sum() {
    let d = doctrine_for(Semantics::Trop, K);
    for fam in corpus() {
        for inst in &fam.instances {
            let got = evaluate(&inst.diagram, &inst.trop, &*d, &fam.tau).unwrap();
            assert_eq!(got.predicate, oracle(&inst.diagram, &inst.trop, Semantics::Trop, &fam.tau), "{:?}", inst.diagram);
        }
    }
}

#[test]
fn library_brute_force_matches_the_join_oracle() {
    for fam in corpus() {
        for inst in &fam.instances {
            for (sem, sys) in [(Semantics::Rel, &inst.rel), (Semantics::Trop, &inst.trop)] {
                assert_eq!(brute_force(&inst.diagram, sys, sem, K, &fam.tau).unwrap(), oracle(&inst.diagram, sys, sem, &fam.tau));
            }
        }
    }
}

#[test]
fn nesting_is_functorial_on_every_composable_pair() {
    let mut pairs = 0;
    for (n, fam) in corpus().iter().enumerate() {
        let capped = caps(fam, n as u64);
        let mut outers: Vec<_> = fam.instances.iter().map(|i| &i.diagram).collect();
        outers.extend(capped.iter());
        for fill in &fam.instances {
            for outer in outers.iter().filter(|o| o.inner == fill.diagram.outer) {
                for (sem, sys) in [(Semantics::Rel, &fill.rel), (Semantics::Trop, &fill.trop)] {
                    let d = doctrine_for(sem, K);
                    let r = functoriality_check(outer, &fill.diagram, sys, &*d, &fam.tau).unwrap();
                    assert!(r.passed(), "{r}");
                    let nested = compose_diagrams(outer, &fill.diagram).unwrap();
                    let flat = evaluate(&nested, sys, &*d, &fam.tau).unwrap();
                    assert_eq!(flat.predicate, oracle(&nested, sys, sem, &fam.tau));
                }
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 60, "only {pairs} composable pairs");
}

#[test]
fn side_by_side_evaluation_is_monoidal() {
    for fam in corpus() {
        for pair in fam.instances.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            for (sem, sa, sb) in [(Semantics::Rel, &a.rel, &b.rel), (Semantics::Trop, &a.trop, &b.trop)] {
                let d = doctrine_for(sem, K);
                let r = monoidality_check(&a.diagram, sa, &b.diagram, sb, &*d, &fam.tau).unwrap();
                assert!(r.passed(), "{r}");
            }
        }
    }
}
