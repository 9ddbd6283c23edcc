use knotfit_core::bspline::{
    basis_eval, build_clamped_knot_vector, BSplineCurve, KnotVector, Point,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn bernstein(n: usize, i: usize, u: f64) -> f64 {
    binomial(n, i) * u.powi(i as i32) * (1.0 - u).powi((n - i) as i32)
}

fn knots_strategy() -> impl Strategy<Value = (Vec<f64>, usize)> {
    (1usize..=4, prop::collection::vec(0.001f64..0.999, 0..12)).prop_map(|(p, mut interior)| {
        interior.sort_by(f64::total_cmp);
        (interior, p)
    })
}

#[test]
fn partition_of_unity_on_random_u() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let kv = build_clamped_knot_vector(&[0.1, 0.15, 0.4, 0.4, 0.77], 3).unwrap();
    for _ in 0..1000 {
        let u: f64 = rng.gen();
        let sum: f64 = (0..kv.control_point_count())
            .map(|i| basis_eval(&kv, i, 3, u).unwrap())
            .sum();
        assert!((sum - 1.0).abs() <= 1e-12, "u={u} sum={sum}");
    }
}

#[test]
fn bernstein_equivalence_without_interior_knots() {
    for p in 1..=5 {
        let kv = build_clamped_knot_vector::<f64>(&[], p).unwrap();
        for k in 0..100 {
            let u = k as f64 / 99.0;
            for i in 0..=p {
                let got = basis_eval(&kv, i, p, u).unwrap();
                assert!(
                    (got - bernstein(p, i, u)).abs() <= 1e-12,
                    "p={p} i={i} u={u}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn basis_properties((interior, p) in knots_strategy(), u in 0.0f64..=1.0) {
        let kv = build_clamped_knot_vector(&interior, p).unwrap();
        let t = kv.knots();
        let mut sum = 0.0;
        for i in 0..kv.control_point_count() {
            let v = basis_eval(&kv, i, p, u).unwrap();
            prop_assert!(v >= 0.0);
            if u < t[i] || u > t[i + p + 1] {
                prop_assert_eq!(v, 0.0);
            }
            sum += v;
        }
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    /// The recursive definition and the triangular table agree.
    #[test]
    fn recursive_and_tabulated_basis_agree((interior, p) in knots_strategy(), u in 0.0f64..=1.0) {
        let kv = build_clamped_knot_vector(&interior, p).unwrap();
        let (span, values) = kv.nonzero_basis(u).unwrap();
        for (k, v) in values.iter().enumerate() {
            let i = span - p + k;
            prop_assert!((basis_eval(&kv, i, p, u).unwrap() - v).abs() <= 1e-13);
        }
    }

    #[test]
    fn clamped_curves_interpolate_their_end_control_points(
        (interior, p) in knots_strategy(),
        seed in any::<u64>(),
    ) {
        let kv = build_clamped_knot_vector(&interior, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cps: Vec<Point<f64, 3>> = (0..kv.control_point_count())
            .map(|_| Point::new([rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]))
            .collect();
        let curve = BSplineCurve::new(kv, cps.clone()).unwrap();
        prop_assert_eq!(curve.eval(0.0).unwrap(), cps[0]);
        prop_assert_eq!(curve.eval(1.0).unwrap(), *cps.last().unwrap());
    }

    #[test]
    fn equal_control_points_give_a_constant_curve(
        (interior, p) in knots_strategy(),
        u in 0.0f64..=1.0,
        q in prop::array::uniform2(-100.0f64..100.0),
    ) {
        let kv = build_clamped_knot_vector(&interior, p).unwrap();
        let n = kv.control_point_count();
        let c = BSplineCurve::new(kv, vec![Point::new(q); n]).unwrap().eval(u).unwrap();
        prop_assert!((c[0] - q[0]).abs() <= 1e-12 * (1.0 + q[0].abs()));
        prop_assert!((c[1] - q[1]).abs() <= 1e-12 * (1.0 + q[1].abs()));
    }
}

#[test]
fn non_normalized_domains_work() {
    let kv = KnotVector::new(vec![2.0, 2.0, 2.0, 3.0, 5.0, 5.0, 5.0], 2).unwrap();
    let sum: f64 = (0..4).map(|i| basis_eval(&kv, i, 2, 4.2).unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-14);
    assert!(basis_eval(&kv, 0, 2, 1.9).is_err());
}
