use isocone::foliation::{cap_at, cap_for_volume, foliation_threshold, ReferenceProfile};
use isocone::geometry::{
    asymptotic_cone, detect_asymptote, radial_slice, BodyOfRevolution, GeneratingFunction, DEFAULT_ASYMPTOTE_TOL,
};
use isocone::solver::solve_volume;
use isocone::spectral::{neumann_mu1, CapSpectrumQuery};
use proptest::prelude::*;

fn profiles() -> impl Strategy<Value = GeneratingFunction> {
    prop_oneof![
        (0.2f64..5.0, 0.1f64..10.0).prop_map(|(a, s)| GeneratingFunction::Hyperbolic { a, s }),
        (0.2f64..5.0, 0.1f64..10.0).prop_map(|(a, c)| GeneratingFunction::ExpCap { a, c }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn registered_profiles_are_convex_and_normalized(f in profiles()) {
        prop_assert!(f.validate().is_ok());
        prop_assert_eq!(f.value(0.0), 0.0);
        prop_assert_eq!(f.slope(0.0), 0.0);
    }

    #[test]
    fn asymptote_supports_the_graph_from_below(f in profiles(), u in 0.0f64..50.0) {
        let asym = detect_asymptote(&f, DEFAULT_ASYMPTOTE_TOL).unwrap();
        let x = u * f.length_scale();
        prop_assert!(f.value(x) >= asym.a * x + asym.b - 1e-9 * (1.0 + f.value(x)));
    }

    #[test]
    fn approach_to_the_asymptote_is_monotone(f in profiles(), u in 0.0f64..20.0) {
        let asym = detect_asymptote(&f, DEFAULT_ASYMPTOTE_TOL).unwrap();
        let x = u * f.length_scale();
        let gap = |x: f64| f.value(x) - asym.a * x - asym.b;
        prop_assert!(gap(2.0 * x + 0.1) <= gap(x) + 1e-9 * (1.0 + f.value(x)));
    }

    #[test]
    fn asymptote_of_hyperbola_is_exact(a in 0.2f64..5.0, s in 0.1f64..10.0) {
        let asym = detect_asymptote(&GeneratingFunction::Hyperbolic { a, s }, DEFAULT_ASYMPTOTE_TOL).unwrap();
        prop_assert!((asym.a - a).abs() < 1e-8 * a);
        prop_assert!((asym.b + s).abs() < 1e-6 * (1.0 + s));
    }

    #[test]
    fn slices_scale_with_dilation(f in profiles(), t in 0.01f64..100.0, lambda in 0.1f64..10.0) {
        let body = BodyOfRevolution::new(2, f).unwrap();
        let r = radial_slice(&body, t).unwrap();
        let r_scaled = radial_slice(&body.dilate(lambda), lambda * t).unwrap();
        prop_assert!((r_scaled - lambda * r).abs() < 1e-10 * (1.0 + lambda * r));
    }

    #[test]
    fn cone_is_dilation_invariant(f in profiles(), lambda in 0.1f64..10.0) {
        let body = BodyOfRevolution::new(3, f).unwrap();
        let a = asymptotic_cone(&body).unwrap().a;
        let a_scaled = asymptotic_cone(&body.dilate(lambda)).unwrap().a;
        prop_assert!((a - a_scaled).abs() < 1e-8 * a);
    }

    #[test]
    fn caps_are_orthogonal_and_incident(f in profiles(), n in 1usize..5, u in 0.05f64..200.0) {
        let body = BodyOfRevolution::new(n, f).unwrap();
        let cap = cap_at(&body, u * f.length_scale()).unwrap();
        prop_assert!(cap.incidence_residual() < 1e-10);
        prop_assert!(cap.orthogonality_residual(&body) < 1e-10);
        prop_assert!((cap.mean_curvature * cap.radius - 1.0).abs() < 1e-14);
    }

    #[test]
    fn caps_sit_between_reference_profiles(f in profiles(), n in 1usize..4, u in 1.0f64..1e4) {
        let body = BodyOfRevolution::new(n, f).unwrap();
        let x = u * f.length_scale().max(foliation_threshold(&body).unwrap());
        let cap = cap_at(&body, x).unwrap();
        let a = asymptotic_cone(&body).unwrap().a;
        let v = cap.enclosed_volume;
        prop_assert!(cap.cap_perimeter >= ReferenceProfile::cone(a, n).perimeter(v) * (1.0 - 1e-9));
        prop_assert!(cap.cap_perimeter <= ReferenceProfile::half_space(n).perimeter(v) * (1.0 + 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn profile_obeys_the_scaling_law(a in 0.3f64..3.0, s in 0.3f64..3.0, v in 1e-2f64..1e2, lambda in 0.2f64..5.0) {
        let body = BodyOfRevolution::new(2, GeneratingFunction::Hyperbolic { a, s }).unwrap();
        let p = solve_volume(&body, v).unwrap().perimeter_upper_bound;
        let p_scaled = solve_volume(&body.dilate(lambda), lambda.powi(3) * v).unwrap().perimeter_upper_bound;
        prop_assert!((p_scaled / (lambda * lambda * p) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn cap_for_volume_round_trips(f in profiles(), v in 1.0f64..1e5) {
        let body = BodyOfRevolution::new(2, f).unwrap();
        if let Ok(cap) = cap_for_volume(&body, v) {
            prop_assert!((cap.enclosed_volume / v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn eigenvalue_scales_with_sphere_radius(n in 2usize..4, big_r in 0.2f64..5.0, theta in 0.05f64..1.5) {
        let a = neumann_mu1(&CapSpectrumQuery::new(n, big_r, theta * big_r).unwrap()).unwrap();
        let b = neumann_mu1(&CapSpectrumQuery::new(n, 1.0, theta).unwrap()).unwrap();
        prop_assert!((a * big_r * big_r / b - 1.0).abs() < 1e-8);
        prop_assert!(a > n as f64 / (big_r * big_r));
    }
}
