use proptest::prelude::*;

use sjgeo::geometry::{
    act_disk, act_upper, cayley, cayley_differential, cayley_differential_inv, cayley_inv, random_disk_point_with,
    random_tangent_with, random_upper_point_with, Chart, Model, Point,
};
use sjgeo::groups::random::{random_heisenberg_with, random_jacobi_star_with, random_jacobi_with, sample_rng};
use sjgeo::groups::{theta_inv, theta_map, HeisenbergElement};
use sjgeo::metrics::{metric_tensor, q_disk, q_upper, MetricKind, MetricParams};
use sjgeo::operators::{test_field_suite, wirtinger_hessian, OpKind, Operator, Reading};
use sjgeo::verify::{fmt15, pushforward, GroupAction};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=2)
}

fn params() -> impl Strategy<Value = MetricParams<f64>> {
    (0.2f64..5.0, 0.2f64..5.0).prop_map(|(a, b)| MetricParams::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn heisenberg_product_keeps_the_symmetry_invariant(seed: u64, (n, m) in dims()) {
        let mut rng = sample_rng(seed, 0);
        let a = random_heisenberg_with::<f64>(&mut rng, n, m);
        let b = random_heisenberg_with::<f64>(&mut rng, n, m);
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.symmetry_defect() < 1e-12);
        prop_assert!(ab.mul(&ab.inverse()).unwrap().dist(&HeisenbergElement::identity(n, m)) < 1e-12);
    }

    #[test]
    fn theta_is_multiplicative_and_invertible(seed: u64, (n, m) in dims()) {
        let mut rng = sample_rng(seed, 1);
        let a = random_jacobi_with::<f64>(&mut rng, n, m);
        let b = random_jacobi_with::<f64>(&mut rng, n, m);
        let lhs = theta_map(&a.mul(&b).unwrap());
        let rhs = theta_map(&a).mul(&theta_map(&b)).unwrap();
        prop_assert!(lhs.dist(&rhs) < 1e-9);
        prop_assert!(theta_inv(&theta_map(&a)).dist(&a) < 1e-10);
    }

    #[test]
    fn actions_stay_in_their_domains(seed: u64, (n, m) in dims()) {
        let mut rng = sample_rng(seed, 2);
        let g = random_jacobi_with::<f64>(&mut rng, n, m);
        let h = random_jacobi_star_with::<f64>(&mut rng, n, m);
        let p = random_upper_point_with::<f64>(&mut rng, n, m);
        let q = random_disk_point_with::<f64>(&mut rng, n, m);
        prop_assert!(act_upper(&g, &p).unwrap().validate().is_ok());
        prop_assert!(act_disk(&h, &q).unwrap().validate().is_ok());
    }

    #[test]
    fn cayley_intertwines_the_actions(seed: u64, (n, m) in dims()) {
        let mut rng = sample_rng(seed, 3);
        let g = random_jacobi_with::<f64>(&mut rng, n, m);
        let q = random_disk_point_with::<f64>(&mut rng, n, m);
        let upper = act_upper(&g, &cayley(&q).unwrap()).unwrap();
        let disk = cayley(&act_disk(&theta_map(&g), &q).unwrap()).unwrap();
        prop_assert!(upper.dist(&disk) <= 1e-8 * (1.0 + upper.omega.max_abs() + upper.z.max_abs()));
    }

    #[test]
    fn cayley_differential_inverts(seed: u64, (n, m) in dims()) {
        let mut rng = sample_rng(seed, 4);
        let q = random_disk_point_with::<f64>(&mut rng, n, m);
        let t = random_tangent_with::<f64>(&mut rng, Model::Disk, n, m);
        let back = cayley_differential_inv(&q, &cayley_differential(&q, &t).unwrap()).unwrap();
        prop_assert!(back.dist(&t) < 1e-9 * (1.0 + t.max_abs()));
    }

    #[test]
    fn f32_cayley_roundtrip_at_single_precision(seed: u64, (n, m) in dims()) {
        let mut rng = sample_rng(seed, 5);
        let q = random_disk_point_with::<f32>(&mut rng, n, m);
        let back = cayley_inv(&cayley(&q).unwrap()).unwrap();
        prop_assert!(back.dist(&q) < 1e-3);
    }

    #[test]
    fn metrics_are_positive_definite(seed: u64, (n, m) in dims(), params in params()) {
        let mut rng = sample_rng(seed, 6);
        let p = random_upper_point_with::<f64>(&mut rng, n, m);
        let q = random_disk_point_with::<f64>(&mut rng, n, m);
        let t = random_tangent_with::<f64>(&mut rng, Model::Upper, n, m);
        let s = random_tangent_with::<f64>(&mut rng, Model::Disk, n, m);
        prop_assert!(q_upper(&p, &t, params).unwrap() > 0.0);
        prop_assert!(q_disk(&q, &s, params).unwrap() > 0.0);
        prop_assert!(metric_tensor(MetricKind::Disk(params), &Point::Disk(q)).unwrap().min_eigenvalue() > 0.0);
    }

    #[test]
    fn metric_tensor_reproduces_the_form(seed: u64, (n, m) in dims(), params in params()) {
        let mut rng = sample_rng(seed, 7);
        let p = Point::Upper(random_upper_point_with::<f64>(&mut rng, n, m));
        let t = random_tangent_with::<f64>(&mut rng, Model::Upper, n, m);
        let g = metric_tensor(MetricKind::Upper(params), &p).unwrap();
        let v = Chart::new(n, m).tangent_coords(&t);
        let direct = q_upper(p.as_upper().unwrap(), &t, params).unwrap();
        prop_assert!((g.quadratic(&v) - direct).abs() < 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn chart_coordinates_roundtrip(seed: u64, (n, m) in dims()) {
        let chart = Chart::new(n, m);
        let mut rng = sample_rng(seed, 8);
        let p = Point::Disk(random_disk_point_with::<f64>(&mut rng, n, m));
        let back = chart.point_from_coords(Model::Disk, &chart.point_coords(&p)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn fifteen_digit_output_roundtrips(x in -1e12f64..1e12) {
        let y: f64 = fmt15(x).parse().unwrap();
        prop_assert!((x - y).abs() <= 1e-14 * x.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pushforward_preserves_the_upper_metric(seed: u64, (n, m) in dims(), params in params()) {
        let mut rng = sample_rng(seed, 9);
        let g = GroupAction::Jacobi(random_jacobi_with(&mut rng, n, m));
        let p = Point::Upper(random_upper_point_with(&mut rng, n, m));
        let t = random_tangent_with(&mut rng, Model::Upper, n, m);
        let gt = pushforward(&g, &p, &t, None).unwrap();
        let gp = g.apply(&p).unwrap();
        let l = q_upper(gp.as_upper().unwrap(), &gt, params).unwrap();
        let r = q_upper(p.as_upper().unwrap(), &t, params).unwrap();
        prop_assert!((l - r).abs() <= 1e-6 * (1.0 + r.abs()));
    }

    #[test]
    fn disk_laplacian_is_linear_in_the_parameters(seed in 0u64..1000, (n, m) in (1usize..=2, 1usize..=2)) {
        let p = sjgeo::geometry::random_point::<f64>(Model::Disk, n, m, seed);
        let f = &test_field_suite(Model::Disk, n, m, seed)[5];
        let hess = wirtinger_hessian(f, &p, None).unwrap();
        let op = |o: Operator| o.contract(&p, &hess).unwrap().re;
        let l = op(Operator::Invariant(OpKind::Ltilde, Reading::Symmetrized));
        let d = op(Operator::Invariant(OpKind::Dtilde, Reading::Symmetrized));
        // Δ̃_{A,B} = L̃/A + D̃/B.
        let v = op(Operator::Disk(MetricParams::new(2.0, 0.5).unwrap(), Reading::Symmetrized));
        prop_assert!((v - (l / 2.0 + 2.0 * d)).abs() <= 1e-9 * (1.0 + v.abs()));
    }
}
