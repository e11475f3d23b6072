use gmajor::opf::{
    gradient_condition_at, interior_samples, invariance_check, lookup_function, monotonicity_oracle, GridSpec,
    SuiteOptions, DEFAULT_INVARIANCE_TOL,
};
use gmajor::sample::{rng, RationalDist};
use gmajor::{family_region_check, Family, GroupSpec, ScalarFunction};

fn spec(family: Family, n: usize) -> GroupSpec {
    GroupSpec::new(family, n).unwrap()
}

fn named(name: &str, n: usize) -> ScalarFunction {
    lookup_function(name, n).unwrap().function
}

#[test]
fn analytic_gradients_match_central_differences() {
    let dist = RationalDist { bound: 2, max_denom: 64 };
    for name in ["g1", "gk:2", "gk:3", "h", "family:a=3/4,b=-5/4", "paper-counterexample-n4"] {
        let f = named(name, 4);
        let mut r = rng(11);
        for _ in 0..100 {
            let x = dist.vector(&mut r, 4).to_f64();
            if x.iter().product::<f64>().abs() < 1e-3 {
                continue; // |h| has a kink there
            }
            let (analytic, numeric) = (f.gradient(&x), f.finite_difference_gradient(&x));
            for (a, d) in analytic.iter().zip(&numeric) {
                assert!((a - d).abs() <= 1e-6 * (1.0 + a.abs()), "{name} at {x:?}: {a} vs {d}");
            }
        }
    }
}

#[test]
fn exact_gradient_agrees_with_float_gradient() {
    let dist = RationalDist { bound: 2, max_denom: 16 };
    let f = named("gk:2", 3);
    let mut r = rng(12);
    for _ in 0..50 {
        let x = dist.vector(&mut r, 3);
        let exact = f.gradient_exact(&x).unwrap();
        for (e, a) in exact.iter().zip(f.gradient(&x.to_f64())) {
            assert!((gmajor::vector::to_f64(e) - a).abs() < 1e-9);
        }
    }
}

#[test]
fn b_pass_implies_d_pass_on_b_cone_samples() {
    let opts = SuiteOptions { samples: 100, seed: 5, ..Default::default() };
    for n in [3, 4] {
        let (b, d) = (spec(Family::HyperoctahedralB, n), spec(Family::DemihyperoctahedralD, n));
        let points = interior_samples(&b, &opts).unwrap();
        let mut b_passes = 0;
        for name in ["g1", "gk:2", "h", "family:a=1,b=1/2", "family:a=1,b=-1/2", "family:a=-1,b=0"] {
            let f = named(name, n);
            if gradient_condition_at(&f, &b, &points, &[], &opts).unwrap().passed {
                b_passes += 1;
                assert!(gradient_condition_at(&f, &d, &points, &[], &opts).unwrap().passed, "{name} on D{n}");
            }
        }
        assert!(b_passes >= 2);
    }
}

#[test]
fn invariant_polynomials_under_b() {
    let opts = SuiteOptions { samples: 60, seed: 6, tol: DEFAULT_INVARIANCE_TOL, ..Default::default() };
    let b3 = spec(Family::HyperoctahedralB, 3);
    for name in ["g1", "gk:2", "gk:3"] {
        assert!(invariance_check(&named(name, 3), &b3, &opts).unwrap().passed, "{name}");
    }
    assert!(monotonicity_oracle(&named("g1", 3), &b3, &opts).unwrap().passed);
    // Invariance is not enough: (1,1,0) ≺ (2,0,0) but g2 rises from 0 to 1.
    assert!(!monotonicity_oracle(&named("gk:2", 3), &b3, &opts).unwrap().passed);
}

#[test]
fn non_invariant_function_is_caught_by_monotonicity() {
    let opts = SuiteOptions { samples: 60, seed: 7, tol: DEFAULT_INVARIANCE_TOL, ..Default::default() };
    let h = named("h", 3);
    let report = monotonicity_oracle(&h, &spec(Family::HyperoctahedralB, 3), &opts).unwrap();
    assert!(!report.passed);
    assert!(report.violation_count > 0 && report.worst_gap.unwrap() > 0.0);
}

#[test]
fn family_region_is_symmetric_in_b() {
    // Conjugating by x_n -> -x_n normalizes D_n and sends h to -h, so
    // a·g1 + b·h and a·g1 - b·h are classified alike.
    let report =
        family_region_check(&spec(Family::DemihyperoctahedralD, 3), &GridSpec::default(), &SuiteOptions::default())
            .unwrap();
    for p in &report.points {
        let mirror = report.points.iter().find(|q| q.a == p.a && q.b == -p.b).unwrap();
        assert_eq!(p.preserving, mirror.preserving, "({}, {})", p.a, p.b);
    }
    for p in report.points.iter().filter(|p| p.b >= 0.0 && p.counted) {
        assert!(p.matches, "({}, {})", p.a, p.b);
    }
}

#[test]
fn b_family_region_rejects_any_product_term() {
    let report =
        family_region_check(&spec(Family::HyperoctahedralB, 3), &GridSpec::default(), &SuiteOptions::default())
            .unwrap();
    for p in &report.points {
        assert_eq!(p.preserving, p.b == 0.0 && p.a >= 0.0, "({}, {})", p.a, p.b);
    }
}

#[test]
fn suites_reject_unsupported_inputs() {
    assert!(family_region_check(&spec(Family::SymmetricA, 3), &GridSpec::default(), &SuiteOptions::default()).is_err());
    assert!(lookup_function("gk:0", 3).is_err());
}
