//! Acceptance run: one line per criterion, `PASS` or `FAIL` with the computed values.
//! Run with `cargo test --test acceptance -- --nocapture --test-threads 1` to see every line.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::OnceLock;
use std::time::Instant;

use clatf::affine::{first_return, mutate_polytope, tropicalize, wall_direction_hull, CutPolytope, LooijengaData};
use clatf::atbd::{
    canonical_polygon, mutation_graph_with, seed_catalog, torus_class, Atbd, Depth, Group, MutationGraph, CATALOG,
    DEFAULT_STATE_BOUND,
};
use clatf::exact::{half_plane_shear, half_plane_shear_inv, primitive, rat, ratio, FiniteType, Polygon};
use clatf::scattering::{
    chamber_period, chambers, complete, crossing_automorphism, dp5_canonical, dp5_monodromy_diagram, initial_diagram_with_order,
    is_consistent, ScatteringDiagram, Seed, Variant,
};
use clatf::theta::{is_positive, theta_function, theta_product, BrokenLineCaps, ThetaEngine};
use clatf::{Error, LatticeVec, Mat2, Rat, RatVec, UnimodularAffineMap, Vec2};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const TYPES: [FiniteType; 3] = [FiniteType::A2, FiniteType::B2, FiniteType::G2];

fn line(n: &str, ok: bool, t0: Instant, detail: String) {
    let text = format!("criterion {n}: {} ({:.2}s) {detail}\n", if ok { "PASS" } else { "FAIL" }, t0.elapsed().as_secs_f64());
    // Written past the test harness capture so passing criteria are listed too.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn completed(t: FiniteType, v: Variant, order: u32) -> ScatteringDiagram {
    complete(&initial_diagram_with_order(&Seed::standard(t), v, order).unwrap()).unwrap()
}

fn finite_diagrams() -> &'static Vec<ScatteringDiagram> {
    static D: OnceLock<Vec<ScatteringDiagram>> = OnceLock::new();
    D.get_or_init(|| {
        let mut out = vec![];
        for t in TYPES {
            for v in [Variant::A, Variant::X] {
                out.push(completed(t, v, 12));
            }
        }
        out
    })
}

fn lv(x: i64, y: i64) -> LatticeVec {
    Vec2::new(x, y)
}

/// Period of x_{n+1} x_{n-1} = x_n^{e_n} + 1 (exponents alternating b, c), in exact rationals.
fn exchange_period(b: u32, c: u32) -> usize {
    let (x0, x1) = (Rat::new(2.into(), 3.into()), Rat::new(5.into(), 7.into()));
    let mut xs = vec![x0.clone(), x1.clone()];
    for n in 1..40 {
        let e = if n % 2 == 1 { b } else { c };
        let next = (num_traits::pow(xs[n].clone(), e as usize) + Rat::from_integer(1.into())) / xs[n - 1].clone();
        xs.push(next);
        if xs[n] == x0 && xs[n + 1] == x1 {
            return n;
        }
    }
    0
}

#[test]
fn criterion_1_chamber_counts() {
    let t0 = Instant::now();
    let oracle: BTreeMap<FiniteType, usize> =
        [(FiniteType::A2, exchange_period(1, 1)), (FiniteType::B2, exchange_period(1, 2)), (FiniteType::G2, exchange_period(1, 3))]
            .into();
    let expected = [(FiniteType::A2, 5), (FiniteType::B2, 6), (FiniteType::G2, 8)];
    let mut ok = true;
    let mut parts = vec![];
    for (t, want) in expected {
        for v in [Variant::X, Variant::A] {
            let d8 = completed(t, v, 8);
            let d12 = completed(t, v, 12);
            let (c8, c12) = (chambers(&d8).unwrap().len(), chambers(&d12).unwrap().len());
            let stable = d8.ray_directions().unwrap() == d12.ray_directions().unwrap();
            ok &= c8 == want && c12 == want && stable && oracle[&t] == want;
            parts.push(format!("{t}/{v}: {c8}@8 {c12}@12 (exchange period {})", oracle[&t]));
        }
    }
    line("1", ok, t0, parts.join(", "));
    assert!(ok);
}

#[test]
fn criterion_2_consistency() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = vec![];
    for d in finite_diagrams() {
        let r = is_consistent(d).unwrap();
        ok &= r.consistent;
        parts.push(format!("{}/{}: {}", d.seed.label(), d.variant, r.consistent));
    }
    for (name, d) in [("monodromy", dp5_monodromy_diagram().unwrap()), ("canonical dP5", dp5_canonical().unwrap())] {
        let r = is_consistent(&d).unwrap();
        ok &= r.consistent;
        parts.push(format!("{name}: {} ({} junctions)", r.consistent, r.junctions));
    }
    line("2", ok, t0, parts.join(", "));
    assert!(ok);
}

#[test]
fn criterion_3_theta_relations() {
    let t0 = Instant::now();
    let d = completed(FiniteType::A2, Variant::A, 12);
    let rays = d.ray_directions().unwrap();
    let mut e = ThetaEngine::new(&d, BrokenLineCaps::default()).unwrap();
    let mut ok = rays.len() == 5;
    let mut parts = vec![];
    for i in 0..rays.len() {
        let row = e.product(rays[i], rays[(i + 2) % 5]).unwrap();
        let want: BTreeMap<LatticeVec, BigInt> = [(lv(0, 0), BigInt::from(1)), (rays[(i + 1) % 5], BigInt::from(1))].into();
        ok &= row == want;
        parts.push(format!("t{}*t{} = {} terms", i + 1, (i + 2) % 5 + 1, row.len()));
    }
    line("3", ok, t0, parts.join(", "));
    assert!(ok);
}

/// Least d with p in d*S.
fn level(s: &Polygon, p: LatticeVec, dmax: u32) -> Option<u32> {
    (0..=dmax).find(|&d| s.scale(&rat(d as i64)).contains(&p.to_rat()))
}

#[test]
fn criterion_4_positivity() {
    let t0 = Instant::now();
    let a2 = completed(FiniteType::A2, Variant::A, 12);
    let pent = Polygon::from_lattice(&[(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)]).unwrap();
    let rp = is_positive(&pent, &a2, 3).unwrap();
    let g2 = completed(FiniteType::G2, Variant::A, 12);
    let hull = Polygon::new(wall_direction_hull(&g2).unwrap().vertices).unwrap();
    let rg = is_positive(&hull, &g2, 3).unwrap();
    let witness_ok = match rg.witness {
        Some((p1, p2, r)) => {
            let row = theta_product(&g2, p1, p2).unwrap();
            match (level(&hull, p1, 3), level(&hull, p2, 3)) {
                (Some(d1), Some(d2)) => row.contains_key(&r) && !hull.scale(&rat((d1 + d2) as i64)).contains(&r.to_rat()),
                _ => false,
            }
        }
        None => false,
    };
    let ok = rp.positive && !rg.positive && witness_ok;
    line(
        "4",
        ok,
        t0,
        format!(
            "pentagon positive={} ({} pairs); G2 hull positive={} witness={:?} verified={witness_ok}",
            rp.positive, rp.pairs_checked, rg.positive, rg.witness.map(|(a, b, r)| ((a.x, a.y), (b.x, b.y), (r.x, r.y)))
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_5_mutation_periods() {
    let t0 = Instant::now();
    let p = CutPolytope::plain(&[(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)]).unwrap();
    let r1 = first_return(&p, 0, 24).unwrap();
    let r2 = first_return(&p, 1, 24).unwrap();
    let seed = Seed::standard(FiniteType::A2);
    let c1 = chamber_period(&seed, 0, Variant::X).unwrap();
    let c2 = chamber_period(&seed, 1, Variant::X).unwrap();
    let ok = r1 == Some(4) && r2 == Some(6);
    line(
        "5",
        ok,
        t0,
        format!("vertex-set first return: {r1:?} steps from k=1, {r2:?} from k=2; seed-chamber period {c1:?} / {c2:?} (reported, not the same count)"),
    );
    assert!(ok);
}

#[test]
fn criterion_6a_dp5_monodromy() {
    let t0 = Instant::now();
    let atlas = tropicalize(&LooijengaData::new(vec![-1; 5]).unwrap()).unwrap();
    let m = atlas.total_monodromy.matrix();
    let (e1, e2) = (m.column(0), m.column(1));
    let ok = e1 == lv(1, 1) && e2 == lv(1, 0);
    line(
        "6a",
        ok,
        t0,
        format!(
            "(1,0)->({},{}), (0,1)->({},{}), det {}; expected (1,0)->(1,1), (0,1)->(1,0), det -1",
            e1.x,
            e1.y,
            e2.x,
            e2.y,
            m.det()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_6b_toric_identity() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = vec![];
    for cyc in [vec![1, 1, 1], vec![0, 0, 0, 0], vec![0, 1, 0, -1], vec![-1; 6]] {
        let m = tropicalize(&LooijengaData::new(cyc.clone()).unwrap()).unwrap().total_monodromy.matrix();
        ok &= m.is_identity();
        parts.push(format!("{cyc:?}: {:?}", m.0));
    }
    line("6b", ok, t0, parts.join(", "));
    assert!(ok);
}

const EXPECTED_CLASSES: [(&str, usize); 9] = [
    ("dp5_cycle", 1),
    ("dp5_5tori", 5),
    ("dp8", 2),
    ("dp4_3tori", 3),
    ("dp6", 6),
    ("dp6_scat", 1),
    ("dp5_3tori", 3),
    ("dp3", 8),
    ("dp4_8tori", 8),
];

fn graph(name: &str, g: Group) -> MutationGraph {
    mutation_graph_with(&seed_catalog(name).unwrap(), Depth::Exhaustive, g, DEFAULT_STATE_BOUND).unwrap()
}

#[test]
fn criterion_7_torus_counts() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = vec![];
    for (name, want) in EXPECTED_CLASSES {
        let sl = graph(name, Group::Sl).class_count();
        let gl = graph(name, Group::Gl).class_count();
        ok &= sl == want;
        parts.push(format!("{name} {sl}/{want}{} (GL {gl})", if sl == want { "" } else { " x" }));
    }
    line("7", ok, t0, parts.join(", "));
    assert!(ok);
}

#[test]
fn criterion_8_cycles() {
    let t0 = Instant::now();
    let g5 = graph("dp5_5tori", Group::Sl);
    let g6 = graph("dp6", Group::Sl);
    let c5 = g5.class_cycle(5);
    let c6 = g6.class_cycle(6);
    let ok = c5.is_some() && c6.is_some();
    line(
        "8",
        ok,
        t0,
        format!(
            "dp5_5tori: {} classes, class 5-cycle {:?}, state 5-cycle classes {:?}; dp6: {} classes, class 6-cycle {:?}, state 6-cycle classes {:?}",
            g5.class_count(),
            c5,
            g5.classes_on_state_cycle(5),
            g6.class_count(),
            c6,
            g6.classes_on_state_cycle(6)
        ),
    );
    assert!(ok);
}

fn sl_word(word: &[u8]) -> Mat2 {
    let gens = [Mat2([[0, -1], [1, 0]]), Mat2([[1, 1], [0, 1]]), Mat2([[1, -1], [0, 1]])];
    word.iter().fold(Mat2::IDENTITY, |m, &c| m * gens[c as usize % 3])
}

fn small_vectors(n: i64) -> Vec<LatticeVec> {
    let mut v = vec![];
    for x in -n..=n {
        for y in -n..=n {
            if x * x + y * y <= n * n {
                v.push(lv(x, y));
            }
        }
    }
    v
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn prop_shear_bijective() -> bool {
    let strat = ((-40i64..41, -40i64..41), (-6i64..7, -6i64..7), 1i64..4);
    runner(1000)
        .run(&strat, |((mx, my), (vx, vy), k)| {
            prop_assume!((vx, vy) != (0, 0));
            let v = primitive(lv(vx, vy)).unwrap();
            let n = lv(-v.y * k, v.x * k);
            let m = lv(mx, my);
            let img = half_plane_shear(&v, &n, &m).unwrap();
            prop_assert_eq!(half_plane_shear_inv(&v, &n, &img).unwrap(), m);
            prop_assert_eq!(half_plane_shear(&v, &n, &half_plane_shear_inv(&v, &n, &m).unwrap()).unwrap(), m);
            Ok(())
        })
        .is_ok()
}

fn prop_crossing_invertible() -> bool {
    finite_diagrams().iter().all(|d| {
        d.walls.iter().all(|w| {
            let f = crossing_automorphism(&w.function, w.normal, 1, d.grading, d.order).unwrap();
            let b = crossing_automorphism(&w.function, w.normal, -1, d.grading, d.order).unwrap();
            f.compose(&b).unwrap().is_identity() && b.compose(&f).unwrap().is_identity()
        })
    })
}

fn interior(a: LatticeVec, b: LatticeVec, s: (i64, i64), t: (i64, i64)) -> RatVec {
    a.to_rat() * ratio(s.0, s.1) + b.to_rat() * ratio(t.0, t.1)
}

fn prop_endpoint_independent() -> bool {
    let strat = (0usize..6, (-3i64..4, -3i64..4), ((1i64..50, 1i64..50), (1i64..50, 1i64..50), (1i64..50, 1i64..50), (1i64..50, 1i64..50)), 0usize..8);
    runner(100)
        .run(&strat, |(ty, (px, py), (s1, t1, s2, t2), which)| {
            let d = &finite_diagrams()[ty];
            let e = ThetaEngine::new(d, BrokenLineCaps::default()).unwrap();
            let (a, b) = e.chambers()[which % e.chambers().len()];
            let q1 = interior(a, b, s1, t1);
            let q2 = interior(a, b, s2, t2);
            let f1 = theta_function(d, lv(px, py), &q1, BrokenLineCaps::default());
            let f2 = theta_function(d, lv(px, py), &q2, BrokenLineCaps::default());
            prop_assume!(!matches!(f1, Err(Error::NotGeneric)) && !matches!(f2, Err(Error::NotGeneric)));
            prop_assert_eq!(f1.unwrap(), f2.unwrap());
            Ok(())
        })
        .is_ok()
}

fn prop_cap_stable() -> bool {
    finite_diagrams().iter().all(|d| {
        let mut a = ThetaEngine::fixed(d, BrokenLineCaps::default()).unwrap();
        let mut b = ThetaEngine::fixed(d, BrokenLineCaps { degree: 48, bends: 96 }).unwrap();
        let vs = small_vectors(3);
        vs.iter().all(|&p| vs.iter().filter(|&&q| p <= q).all(|&q| a.product(p, q).unwrap() == b.product(p, q).unwrap()))
    })
}

fn catalog() -> Vec<Atbd> {
    CATALOG.iter().map(|n| seed_catalog(n).unwrap()).collect()
}

fn prop_canonical_form() -> bool {
    catalog().iter().all(|a| {
        let c = torus_class(a).unwrap();
        let idem = canonical_polygon(&c.canonical_polygon, Group::Sl) == c.canonical_polygon;
        let strat = (proptest::collection::vec(0u8..3, 0..16), -4i64..5, -4i64..5);
        idem && runner(500)
            .run(&strat, |(w, tx, ty)| {
                let f = UnimodularAffineMap::new(sl_word(&w), Vec2::new(rat(tx), rat(ty))).unwrap();
                prop_assert_eq!(torus_class(&a.map(&f).unwrap()).unwrap(), c.clone());
                Ok(())
            })
            .is_ok()
    })
}

fn prop_quasi_involution() -> bool {
    catalog().iter().all(|a| {
        let c = torus_class(a).unwrap();
        (0..a.nodes.len())
            .filter(|&i| !a.nodes[i].frozen)
            .all(|i| torus_class(&a.mutate(i).unwrap().mutate(i).unwrap()).unwrap() == c)
    })
}

fn counts(vertices: &[RatVec]) -> (Rat, Vec<usize>) {
    let p = Polygon::new(vertices.to_vec()).unwrap();
    (p.double_area(), (1..=3).map(|d| clatf::exact::dilation_points(&p, d).len()).collect())
}

fn prop_mutation_invariants() -> bool {
    let mut polys = vec![CutPolytope::plain(&[(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)]).unwrap()];
    for t in [FiniteType::B2, FiniteType::G2] {
        polys.push(wall_direction_hull(&completed(t, Variant::X, 12)).unwrap());
    }
    let poly_ok = polys.into_iter().all(|p| {
        let measure = |q: &CutPolytope| {
            (q.double_area(), (1..=3).map(|d| q.dilation_points(d).len()).collect::<Vec<_>>(), q.cuts.len())
        };
        let base = measure(&p);
        let mut q = p;
        (0..12).all(|s| {
            q = mutate_polytope(&q, s % 2).unwrap();
            measure(&q) == base
        })
    });
    let atbd_ok = catalog().iter().all(|a| {
        let base = counts(&a.boundary);
        (0..a.nodes.len()).filter(|&i| !a.nodes[i].frozen).all(|i| counts(&a.mutate(i).unwrap().boundary) == base)
    });
    poly_ok && atbd_ok
}

#[test]
fn criterion_9_property_suites() {
    let t0 = Instant::now();
    let props: [(&str, fn() -> bool); 7] = [
        ("shear bijective on Z^2 (1000 vectors)", prop_shear_bijective),
        ("crossing automorphisms invertible (every wall)", prop_crossing_invertible),
        ("alpha endpoint-independent (100 pairs)", prop_endpoint_independent),
        ("alpha cap-stable (|p|,|q| <= 3)", prop_cap_stable),
        ("canonical form idempotent and SL(2,Z)-invariant (500 per diagram)", prop_canonical_form),
        ("mutation quasi-involution (every node)", prop_quasi_involution),
        ("area and dilation counts d <= 3 invariant", prop_mutation_invariants),
    ];
    let results: Vec<(&str, bool)> = props.iter().map(|(n, f)| (*n, f())).collect();
    let ok = results.iter().all(|r| r.1);
    let detail: Vec<String> = results.iter().map(|(n, r)| format!("{n}: {}", if *r { "ok" } else { "failed" })).collect();
    line("9", ok, t0, detail.join("; "));
    assert!(ok);
}

#[test]
fn catalog_builds_for_every_name() {
    for n in CATALOG {
        let a = seed_catalog(n).unwrap();
        assert!(a.is_well_formed().unwrap());
    }
}
