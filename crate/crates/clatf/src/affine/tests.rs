use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::exact::{rat_vec, FiniteType, LatticeVec, Mat2, UnimodularAffineMap, Vec2};
use crate::scattering::{complete, initial_diagram, Seed, Variant};

fn pentagon() -> CutPolytope {
    CutPolytope::plain(&[(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)]).unwrap()
}

fn lattice_set(p: &CutPolytope) -> BTreeSet<LatticeVec> {
    p.lattice_points().into_iter().collect()
}

#[test]
fn lower_half_plane_is_fixed() {
    let p = CutPolytope::plain(&[(-1, -1), (0, -2), (0, 0), (-2, 1)]).unwrap();
    let q = mutate_polytope(&p, 0).unwrap();
    assert_eq!(q.vertex_set(), p.vertex_set());
}

#[test]
fn mutation_matches_pointwise_shear() {
    let mut p = pentagon();
    let mut k = 0;
    for _ in 0..8 {
        let t = p.seed.cluster_shear(k, p.variant).unwrap();
        let q = mutate_polytope(&p, k).unwrap();
        let image: BTreeSet<_> = p.lattice_points().into_iter().map(|m| t.apply(m)).collect();
        assert_eq!(lattice_set(&q), image);
        p = q;
        k = 1 - k;
    }
}

#[test]
fn pentagon_first_returns() {
    let p = pentagon();
    assert_eq!(first_return(&p, 0, 20).unwrap(), Some(4));
    assert_eq!(first_return(&p, 1, 20).unwrap(), Some(6));
}

#[test]
fn square_without_cuts_is_convex() {
    let sq = CutPolytope::plain(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap();
    assert!(chartwise_convex(&sq).unwrap());
    let dart = CutPolytope::plain(&[(0, 0), (2, 1), (0, 2), (1, 1)]).unwrap();
    assert!(!chartwise_convex(&dart).unwrap());
}

fn cut_pentagon(dir: (i64, i64)) -> CutPolytope {
    CutPolytope::plain(&[(-1, -1), (0, -1), (2, 0), (0, 1), (-1, 0)])
        .unwrap()
        .with_cut(Cut::new(rat_vec(0, 0), Vec2::new(dir.0, dir.1), 1).unwrap())
}

#[test]
fn cut_along_fixed_direction() {
    let up = cut_pentagon((0, 1));
    assert_eq!(up.cuts[0].monodromy(), Mat2([[1, 0], [1, 1]]));
    assert!(chartwise_convex(&up).unwrap());
    // same vertices, cut on the opposite side of the base
    let down = cut_pentagon((0, -1));
    assert_eq!(down.cuts[0].monodromy(), Mat2([[1, 0], [1, 1]]));
    assert!(!chartwise_convex(&down).unwrap());
}

#[test]
fn traded_corner_is_straight() {
    // a corner smoothed by a node on the diagonal; the corner stays
    // convex, while a second unit of shear makes it reflex
    let p = CutPolytope::plain(&[(0, 0), (3, 0), (0, 3)]).unwrap();
    let one = p.clone().with_cut(Cut::new(rat_vec(1, 1), Vec2::new(-1, -1), 1).unwrap());
    assert!(chartwise_convex(&one).unwrap());
    let two = p.with_cut(Cut::new(rat_vec(1, 1), Vec2::new(-1, -1), 2).unwrap());
    assert!(!chartwise_convex(&two).unwrap());
}

#[test]
fn edge_crossing_is_a_kink() {
    let p = CutPolytope::plain(&[(-1, -1), (1, -1), (1, 1), (-1, 1)])
        .unwrap()
        .with_cut(Cut::new(rat_vec(0, 0), Vec2::new(1, 0), 1).unwrap());
    assert!(!chartwise_convex(&p).unwrap());
}

#[test]
fn tangent_cut_is_an_error() {
    let p = CutPolytope::plain(&[(0, 0), (2, 0), (2, 2), (0, 2)])
        .unwrap()
        .with_cut(Cut::new(rat_vec(1, 0), Vec2::new(1, 0), 1).unwrap());
    assert!(chartwise_convex(&p).is_err());
}

/// Developing map computed directly: each chart's third ray in its own
/// coordinates, pulled back through the chart matrices.
fn developed_by_charts(d: &[i64], steps: usize) -> Vec<LatticeVec> {
    let n = d.len();
    let mut v = vec![Vec2::new(1, 0), Vec2::new(0, 1)];
    for j in 1..steps {
        let frame = Mat2::from_columns(v[j - 1], v[j]);
        let local = Vec2::new(-1, -d[j % n]);
        v.push(frame.apply(local));
    }
    v
}

#[test]
fn dp5_cycle_monodromy() {
    let atlas = tropicalize(&LooijengaData::new(vec![-1; 5]).unwrap()).unwrap();
    let dev = developed_by_charts(&[-1; 5], 7);
    let m = atlas.total_monodromy.matrix();
    assert_eq!(m.apply(dev[0]), dev[5]);
    assert_eq!(m.apply(dev[1]), dev[6]);
    assert_eq!(atlas.rays, vec![Vec2::new(1, 0), Vec2::new(0, 1), Vec2::new(-1, 1), Vec2::new(-1, 0), Vec2::new(0, -1)]);
    assert_eq!(m, Mat2([[1, 1], [-1, 0]]));
    assert_eq!(m.det(), 1);
    for i in 0..5 {
        let psi = atlas.chart(i);
        let d2 = -1;
        assert_eq!(psi.apply(atlas.developed(i as i64 - 1)), Vec2::new(1, 0));
        assert_eq!(psi.apply(atlas.developed(i as i64)), Vec2::new(0, 1));
        assert_eq!(psi.apply(atlas.developed(i as i64 + 1)), Vec2::new(-1, -d2));
    }
}

#[test]
fn toric_cycles_have_trivial_monodromy() {
    for d in [vec![1, 1, 1], vec![0, 0, 0, 0], vec![0, 1, 0, -1], vec![-1, -1, -1, -1, -1, -1]] {
        let atlas = tropicalize(&LooijengaData::new(d.clone()).unwrap()).unwrap();
        assert!(atlas.total_monodromy.matrix().is_identity(), "{d:?}");
    }
}

#[test]
fn hull_of_a2_walls_is_the_pentagon() {
    let d = complete(&initial_diagram(&Seed::standard(FiniteType::A2), Variant::X).unwrap()).unwrap();
    let h = wall_direction_hull(&d).unwrap();
    assert_eq!(h.vertex_set(), pentagon().vertex_set());
}

#[test]
fn hulls_of_b2_and_g2_walls() {
    for (t, gens, verts) in [(FiniteType::B2, 6, 4), (FiniteType::G2, 8, 5)] {
        let d = complete(&initial_diagram(&Seed::standard(t), Variant::X).unwrap()).unwrap();
        let g = wall_generators(&d);
        let h = wall_direction_hull(&d).unwrap();
        assert_eq!((g.len(), h.vertices.len()), (gens, verts), "{t:?}: {g:?}");
    }
}

fn sl2_or_gl2() -> impl Strategy<Value = Mat2> {
    let gens = prop::collection::vec(0usize..5, 0..8);
    gens.prop_map(|ws| {
        let pool = [Mat2([[1, 1], [0, 1]]), Mat2([[1, 0], [1, 1]]), Mat2([[0, -1], [1, 0]]), Mat2([[1, -1], [0, 1]]), Mat2([[0, 1], [1, 0]])];
        ws.iter().fold(Mat2::IDENTITY, |m, &i| pool[i] * m)
    })
}

proptest! {
    #[test]
    fn mutation_preserves_counts(start in 0usize..2, steps in 1usize..7, shift in -2i64..3) {
        let base = pentagon();
        let t = UnimodularAffineMap::new(Mat2::IDENTITY, rat_vec(shift, 0)).unwrap();
        let mut p = base.map(&t).unwrap().with_cut(Cut::new(rat_vec(0, 2), Vec2::new(0, 1), 1).unwrap());
        let counts = |q: &CutPolytope| (1..=3).map(|d| q.dilation_points(d).len()).collect::<Vec<_>>();
        let (c0, a0, n0) = (counts(&p), p.double_area(), p.cuts.len());
        let mut k = start;
        for _ in 0..steps {
            p = mutate_polytope(&p, k).unwrap();
            k = 1 - k;
            prop_assert_eq!(counts(&p), c0.clone());
            prop_assert_eq!(p.double_area(), a0.clone());
            prop_assert_eq!(p.cuts.len(), n0);
        }
    }

    #[test]
    fn rotation_keeps_monodromy_class(d in prop::collection::vec(-3i64..3, 1..8), k in 0usize..8) {
        let l = LooijengaData::new(d).unwrap();
        let a = tropicalize(&l).unwrap().total_monodromy.matrix();
        let b = tropicalize(&l.rotate(k)).unwrap().total_monodromy.matrix();
        prop_assert_eq!(a.trace(), b.trace());
        prop_assert_eq!(a.det(), b.det());
        prop_assert_eq!(a.det(), 1);
    }

    #[test]
    fn convexity_is_invariant(m in sl2_or_gl2(), tx in -3i64..4, ty in -3i64..4, which in 0usize..4) {
        let p = match which {
            0 => cut_pentagon((0, 1)),
            1 => cut_pentagon((0, -1)),
            2 => CutPolytope::plain(&[(0, 0), (3, 0), (0, 3)]).unwrap().with_cut(Cut::new(rat_vec(1, 1), Vec2::new(-1, -1), 1).unwrap()),
            _ => CutPolytope::plain(&[(-1, -1), (1, -1), (1, 1), (-1, 1)]).unwrap().with_cut(Cut::new(rat_vec(0, 0), Vec2::new(1, 0), 1).unwrap()),
        };
        let g = UnimodularAffineMap::new(m, rat_vec(tx, ty)).unwrap();
        prop_assert_eq!(chartwise_convex(&p.map(&g).unwrap()).unwrap(), chartwise_convex(&p).unwrap());
    }
}
