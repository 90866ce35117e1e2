use loglog_core::certificates::ThreeBallsCertificate;
use loglog_core::lab::validate::Solver;
use loglog_core::lab::{
    check_three_balls, empirical_alpha, solve_dirichlet, FamilySpec, GridSpec, Harmonic, Point,
    Sample,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn maximum_principle_holds_exactly(seed in any::<u64>(), shift in 0usize..2) {
        let cells = 32 << shift;
        let spec = GridSpec::random(cells, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let field = solve_dirichlet(&spec).unwrap();
        prop_assert!(field.interior_max() <= field.boundary_max());
        prop_assert!(field.interior_min() >= field.boundary_min());
        prop_assert!(field.max_interior_residual() <= 1e-10 * spec.boundary_sup());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ball_sup_is_nondecreasing_in_radius(
        seed in any::<u64>(),
        cx in -0.5..0.5f64,
        cy in -0.5..0.5f64,
        radii in prop::collection::vec(0.001..0.5f64, 2..12),
    ) {
        let spec = GridSpec::random(64, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let field = solve_dirichlet(&spec).unwrap();
        let closed = Harmonic { degree: 3, coeff_re: 1.0, coeff_im: 0.7 };
        let c = Point::new(cx, cy);
        let mut radii = radii;
        radii.sort_by(f64::total_cmp);
        for w in radii.windows(2) {
            prop_assert!(field.sup_on_ball(c, w[0]).unwrap() <= field.sup_on_ball(c, w[1]).unwrap());
            let (lo, hi) = (closed.sup_on_ball(c, w[0]).unwrap(), closed.sup_on_ball(c, w[1]).unwrap());
            prop_assert!(lo <= hi * (1.0 + 1e-12), "{lo} > {hi}");
        }
    }
}

#[test]
fn closed_form_alpha_is_scale_independent() {
    let samples: Vec<Harmonic> = (1..=10).map(Harmonic::monomial).collect();
    let at = |r: f64| {
        empirical_alpha(&samples, Point::ORIGIN, (2.0, 4.0), r)
            .unwrap()
            .alpha_emp
    };
    let reference = at(0.05);
    for r in [0.1, 0.2] {
        assert!((at(r) - reference).abs() < 1e-9, "r = {r}");
    }
    assert!((reference - 0.5).abs() < 1e-9);
}

/// `h = 1/256` with balls of inner radius at least 0.2.
#[test]
fn grid_samples_respect_slack_certificate() {
    let cert = ThreeBallsCertificate::new(2.0, 4.0, 1.01, 0.5).unwrap();
    let mut samples = FamilySpec::monomials(512, (1..=10).collect(), Solver::Grid)
        .build()
        .unwrap();
    samples.extend(FamilySpec::random(512, 6, 17).build().unwrap());
    for (id, s) in samples.iter().enumerate() {
        for r in [0.2, 0.25] {
            let res = check_three_balls(s, Point::ORIGIN, r, &cert).unwrap();
            assert!(res >= -1e-9, "sample {id}, r = {r}: residual {res}");
        }
    }
}
