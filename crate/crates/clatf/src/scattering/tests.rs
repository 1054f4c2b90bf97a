use super::*;
use crate::exact::{rat, FiniteType, LatticeVec, Vec2};

fn completed(t: FiniteType, v: Variant, order: u32) -> ScatteringDiagram {
    let d = initial_diagram_with_order(&Seed::standard(t), v, order).unwrap();
    complete(&d).unwrap()
}

fn rays(d: &ScatteringDiagram) -> Vec<(LatticeVec, String)> {
    let mut out = vec![];
    for w in &d.walls {
        for r in w.support.arms_at(&Vec2::zero()) {
            out.push((r, w.function.to_string()));
        }
    }
    out.sort();
    out
}

#[test]
fn initial_walls() {
    let d = initial_diagram(&Seed::standard(FiniteType::A2), Variant::X).unwrap();
    assert_eq!(d.walls.len(), 2);
    for w in &d.walls {
        assert_eq!(w.function.factors().values().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(w.kind(), WallKind::Incoming);
    }
    let b = initial_diagram(&Seed::standard(FiniteType::B2), Variant::A).unwrap();
    assert!(b.walls.iter().any(|w| w.function.factors().contains_key(&2)));
    assert!(initial_diagram(&Seed::standard(FiniteType::A1xA1), Variant::X).is_err());
}

#[test]
fn a2_initial_defect_at_order_two() {
    let d = initial_diagram(&Seed::standard(FiniteType::A2), Variant::X).unwrap();
    let r = d.is_consistent().unwrap();
    assert!(!r.consistent);
    assert_eq!(r.defects[0].grading, Some(rat(2)));
    assert_eq!(r.defects[0].terms[0].0, Vec2::new(-1, 1));
}

#[test]
fn completion_chamber_counts() {
    for (t, n) in [(FiniteType::A2, 5), (FiniteType::B2, 6), (FiniteType::G2, 8)] {
        for v in [Variant::X, Variant::A] {
            let d = completed(t, v, 8);
            assert_eq!(chambers(&d).unwrap().len(), n, "{t} {v}");
            assert!(d.finite);
            assert!(d.is_consistent().unwrap().consistent);
        }
    }
    let a2 = completed(FiniteType::A2, Variant::X, 8);
    assert_eq!(a2.walls.len(), 3);
}

#[test]
fn exact_engine_confirms_completion() {
    for t in [FiniteType::A2, FiniteType::B2] {
        let d = completed(t, Variant::X, 10);
        assert!(d.exact_loop(&Vec2::zero()).unwrap().is_identity(), "{t}");
    }
}

#[test]
fn empty_and_single_line() {
    let d = initial_diagram(&Seed::standard(FiniteType::A2), Variant::X).unwrap();
    let mut e = d.clone();
    e.walls.clear();
    assert!(e.path_ordered_product(&Vec2::zero()).unwrap().is_identity());
    e.walls.push(d.walls[0].clone());
    assert!(e.path_ordered_product(&Vec2::zero()).unwrap().is_identity());
}

#[test]
fn mutation_matches_mutated_seed() {
    for t in [FiniteType::A2, FiniteType::B2, FiniteType::G2] {
        for v in [Variant::X, Variant::A] {
            for k in 0..2 {
                let d = completed(t, v, 10);
                let m = mutate_diagram(&d, k).unwrap();
                assert!(m.is_consistent().unwrap().consistent, "{t} {v} {k}");
                let direct = completed(t, v, 10);
                let seed = seed_mutate(&direct.seed, k).unwrap();
                let fresh = complete(&initial_diagram_with_order(&seed, v, 10).unwrap()).unwrap();
                assert_eq!(rays(&m), rays(&fresh), "{t} {v} {k}");
            }
        }
    }
}

#[test]
fn mutation_fixes_negative_half() {
    let d = completed(FiniteType::A2, Variant::X, 8);
    let t = d.seed.cluster_shear(0, Variant::X).unwrap();
    let m = mutate_diagram(&d, 0).unwrap();
    let before = rays(&d);
    let after = rays(&m);
    for (r, f) in &before {
        if t.n.dot(r) < 0 {
            assert!(after.contains(&(*r, f.clone())));
        }
    }
}

#[test]
fn alternating_mutation_returns() {
    for t in [FiniteType::A2, FiniteType::B2, FiniteType::G2] {
        for start in 0..2 {
            let d0 = completed(t, Variant::X, 10);
            let mut d = d0.clone();
            let mut k = start;
            let mut back = None;
            for step in 1..=16 {
                d = mutate_diagram(&d, k).unwrap();
                k = 1 - k;
                if rays(&d) == rays(&d0) {
                    back = Some(step);
                    break;
                }
            }
            let expected = match (t, start) {
                (_, 0) => 4,
                (FiniteType::A2, _) => 6,
                (FiniteType::B2, _) => 8,
                _ => 12,
            };
            assert_eq!(back, Some(expected), "{t} start {start}");
        }
    }
}

#[test]
fn dp5_canonical_is_consistent() {
    let d = dp5_canonical().unwrap();
    let r = d.is_consistent().unwrap();
    assert!(r.consistent, "{:?}", r.defects);
}

#[test]
fn dp5_pushed_matches_picture() {
    let d = dp5_partially_pushed().unwrap();
    assert!(d.is_consistent().unwrap().consistent);
    assert_eq!(d.singular_points[0].position, crate::exact::rat_vec(3, 0));
    let lin = d.singular_points[0].linear();
    // the node left at the origin acts by (1,0) -> (1,1), (0,1) -> (0,1)
    let b = d.singular_points[1].linear();
    assert_eq!(b.apply(Vec2::new(1, 0)), Vec2::new(1, 1));
    assert_eq!(b.apply(Vec2::new(0, 1)), Vec2::new(0, 1));
    assert_eq!(lin, crate::exact::Mat2([[1, -1], [0, 1]]));
    let labels: Vec<(LatticeVec, LatticeVec)> = d
        .walls
        .iter()
        .filter(|w| w.support.anchor().is_zero())
        .map(|w| (w.support.dir(), w.function.base()))
        .collect();
    assert!(labels.contains(&(Vec2::new(-1, -1), Vec2::new(1, 1))));
    assert!(labels.contains(&(Vec2::new(0, 1), Vec2::new(0, -1))));
}

#[test]
fn dp5_monodromy_diagram_is_consistent() {
    let d = dp5_monodromy_diagram().unwrap();
    let r = d.is_consistent().unwrap();
    assert!(r.consistent, "{:?}", r.defects);
    assert_eq!(d.singular_points[0].position, crate::exact::rat_vec(1, 0));
    assert_eq!(d.singular_points[1].position, crate::exact::rat_vec(0, 1));
    assert_eq!(d.walls.len(), 5);
}

#[test]
fn worm_identity_and_infinity() {
    let d = dp5_canonical().unwrap();
    assert_eq!(move_worm(&d, 0, WormParam::At(rat(0))).unwrap(), d);
    let inf = move_worm(&d, 0, WormParam::Infinity).unwrap();
    assert!(inf.is_consistent().unwrap().consistent);
    assert!(inf.walls.iter().any(|w| matches!(w.support, Support::Line { .. })));
}

#[test]
fn cut_through_wall_is_rejected() {
    let mut d = dp5_canonical().unwrap();
    d.singular_points[0].cut = Vec2::new(1, 1);
    d.singular_points[0].cut = Vec2::new(1, 0);
    assert!(d.is_consistent().is_err());
}

#[test]
fn swapped_cuts_are_inconsistent() {
    let mut d = dp5_canonical().unwrap();
    let a = d.singular_points[0].cut;
    d.singular_points[0].cut = d.singular_points[1].cut;
    d.singular_points[1].cut = a;
    assert!(!d.is_consistent().unwrap().consistent);
}

#[test]
fn blocked_worm_is_an_error() {
    let d = dp5_canonical().unwrap();
    assert!(move_worm(&d, 1, WormParam::At(rat(1))).is_err());
}

mod worms {
    use super::*;
    use crate::exact::ratio;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn worm_moves_preserve_consistency(num in 0i64..200, den in 1i64..13, which in 0usize..3) {
            let t = ratio(num, den);
            let (base, idx) = match which {
                0 => (dp5_canonical().unwrap(), 0),
                1 => (dp5_partially_pushed().unwrap(), 0),
                _ => (dp5_partially_pushed().unwrap(), 1),
            };
            let moved = move_worm(&base, idx, WormParam::At(t)).unwrap();
            prop_assert!(moved.is_consistent().unwrap().consistent);
        }
    }
}
