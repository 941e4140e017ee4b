//! Root-system examples and invariants of the Weyl action on exact vectors.

use proptest::prelude::*;
use weylwalk::coxeter::{RootKind, RootSystem, Wall};
use weylwalk::{QVector, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn systems() -> Vec<RootSystem> {
    let mut out = Vec::new();
    for r in 1..=4 {
        out.push(RootSystem::new(RootKind::A, r).unwrap());
    }
    for r in 2..=3 {
        out.push(RootSystem::new(RootKind::B, r).unwrap());
        out.push(RootSystem::new(RootKind::C, r).unwrap());
    }
    out
}

fn arb_system() -> impl Strategy<Value = RootSystem> {
    prop::sample::select(systems())
}

fn arb_vector(rank: usize) -> impl Strategy<Value = QVector> {
    prop::collection::vec((-20i64..=20, 1i64..=6), rank)
        .prop_map(|v| QVector::new(v.into_iter().map(|(n, d)| q(n, d)).collect()))
}

fn system_and_vectors(k: usize) -> impl Strategy<Value = (RootSystem, Vec<QVector>)> {
    arb_system().prop_flat_map(move |rs| {
        let r = rs.rank();
        (Just(rs), prop::collection::vec(arb_vector(r), k))
    })
}

#[test]
fn a1_and_a2_examples() {
    let a1 = RootSystem::new(RootKind::A, 1).unwrap();
    assert_eq!(a1.positive_roots(), &[vec![1]]);
    assert_eq!(a1.coroot(&[1]), QVector::from_ints(&[2]));
    assert_eq!(a1.weyl_order(), 2);
    // omega = alpha / 2 in the ambient model
    let alpha = a1.simple_roots_ambient()[0].clone();
    let omega = a1.fundamental_coweights_ambient()[0].clone();
    assert!(alpha.iter().zip(&omega).all(|(a, w)| *a == *w * q(2, 1)));

    let a2 = RootSystem::new(RootKind::A, 2).unwrap();
    assert_eq!(a2.positive_roots().len(), 3);
    assert_eq!(a2.highest_root(), &[1, 1]);
    assert_eq!(a2.weyl_order(), 6);
}

#[test]
fn c2_apartment_distance_and_dominance_examples() {
    let c2 = RootSystem::new(RootKind::C, 2).unwrap();
    let w2 = QVector::fundamental(2, 2);
    assert_eq!(c2.vector_distance_apartment(&w2, &QVector::zero(2)), w2);
    let zero = QVector::zero(2);
    let (plus, w) = c2.dominant_representative(&zero);
    assert!(plus.is_zero() && w.is_identity());
    let w1 = QVector::fundamental(2, 1);
    let (plus, w) = c2.dominant_representative(&w1);
    assert_eq!(plus, w1);
    assert!(w.is_identity());
    // the orbit of omega1 has four points, and C is the least pairwise gap
    assert_eq!(c2.orbit(&w1).len(), 4);
    let c = c2.orbit_separation_constant(&w1).unwrap();
    let orbit = c2.orbit(&w1);
    let brute = orbit
        .iter()
        .flat_map(|a| orbit.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| c2.distance_sq(a, b))
        .min()
        .unwrap();
    assert_eq!(c.squared, brute / c2.norm_sq(&w1));
    assert!(c2.orbit_separation_constant(&zero).is_err());
}

#[test]
fn inversion_set_examples() {
    for rs in systems() {
        assert!(rs.inversion_set(rs.identity()).is_empty());
        for i in 1..=rs.rank() {
            let mut e = vec![0; rs.rank()];
            e[i - 1] = 1;
            assert_eq!(rs.inversion_set(rs.simple_reflection(i)), vec![e]);
        }
        assert_eq!(rs.inversion_set(rs.longest_element()), rs.positive_roots().to_vec());
    }
}

#[test]
fn reflection_examples() {
    let a2 = RootSystem::new(RootKind::A, 2).unwrap();
    let alpha = QVector::from_ints(&[2, -1]);
    assert_eq!(a2.reflect(&Wall::new(vec![1, 0], 0), &alpha), QVector::from_ints(&[-2, 1]));
    let on_wall = QVector::new(vec![q(3, 1), q(1, 2)]);
    assert_eq!(a2.reflect(&Wall::new(vec![1, 0], 3), &on_wall), on_wall);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dominant_representative_is_dominant_and_in_orbit((rs, v) in system_and_vectors(1)) {
        let (plus, w) = rs.dominant_representative(&v[0]);
        prop_assert!(plus.is_dominant());
        prop_assert_eq!(w.act(&plus), v[0].clone());
        // minimal length: no shorter element maps plus to v
        for u in rs.weyl_elements().iter().filter(|u| u.len() < w.len()) {
            prop_assert_ne!(u.act(&plus), v[0].clone());
        }
    }

    #[test]
    fn apartment_distance_symmetry_and_separation((rs, v) in system_and_vectors(2)) {
        let d = rs.vector_distance_apartment(&v[0], &v[1]);
        let back = rs.vector_distance_apartment(&v[1], &v[0]);
        let minus_w0 = rs.longest_element().act(&d.scale(&q(-1, 1)));
        prop_assert_eq!(back, minus_w0);
        prop_assert_eq!(d.is_zero(), v[0] == v[1]);
        prop_assert_eq!(rs.norm_sq(&d), rs.distance_sq(&v[0], &v[1]));
    }

    #[test]
    fn reflections_are_isometric_involutions((rs, v) in system_and_vectors(2), idx in 0usize..16, level in -3i64..=3) {
        let root = rs.positive_roots()[idx % rs.positive_roots().len()].clone();
        let wall = Wall::new(root, level);
        let (x, y) = (&v[0], &v[1]);
        prop_assert_eq!(rs.reflect(&wall, &rs.reflect(&wall, x)), x.clone());
        prop_assert_eq!(rs.distance_sq(&rs.reflect(&wall, x), &rs.reflect(&wall, y)), rs.distance_sq(x, y));
        prop_assert!(wall.contains(&rs, &(&rs.reflect(&wall, x) + x).scale(&q(1, 2))));
    }

    #[test]
    fn inversion_sets_grow_by_one_root(rs in arb_system(), idx in 0usize..400, letter in 1usize..=4) {
        let w = &rs.weyl_elements()[idx % rs.weyl_order()];
        let s = rs.simple_reflection(1 + (letter - 1) % rs.rank());
        let ws = rs.compose(w, s);
        prop_assert_eq!(rs.inversion_set(w).len(), w.len());
        let a = rs.inversion_set(w);
        let b = rs.inversion_set(ws);
        let sym: usize = a.iter().filter(|r| !b.contains(r)).count() + b.iter().filter(|r| !a.contains(r)).count();
        prop_assert_eq!(sym, 1);
    }

    #[test]
    fn separation_constant_is_scale_invariant((rs, v) in system_and_vectors(1), k in 1i64..=5) {
        let lam = rs.dominant_representative(&v[0]).0;
        prop_assume!(!lam.is_zero());
        let c1 = rs.orbit_separation_constant(&lam).unwrap();
        let c2 = rs.orbit_separation_constant(&lam.scale(&q(k, 1))).unwrap();
        prop_assert_eq!(c1.squared, c2.squared);
    }
}
