use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use antkinetics::dynamics::{
    random_smooth_seed, PhaseState, Scheme, Stepper, StepperConfig, F_STAR,
};
use antkinetics::experiments::{run_instability_scan, ExperimentConfig, ExperimentKind};
use antkinetics::linstab::{
    assemble_viscous_operator, dispersion_closed_form, eigenspace_rank, find_unstable_root,
    resolvent_norm_check, viscous_spectrum,
};
use antkinetics::params::{instability_margin, reduce, reduced_margin};
use antkinetics::spectral::{SpectralField3, SpectralGrid};
use antkinetics::{Coupling, ModelParams, ReducedParams};

fn params() -> impl Strategy<Value = ModelParams> {
    (
        1e-4f64..0.1,
        1e-4f64..0.1,
        1e-3f64..0.2,
        0.1f64..3.0,
        0.05f64..2.0,
        0.0f64..5.0,
        0.0f64..2.0,
    )
        .prop_map(
            |(sigma_x, sigma_theta, sigma_c, gamma, lambda, chi, tau)| ModelParams {
                sigma_x,
                sigma_theta,
                sigma_c,
                gamma,
                lambda,
                chi,
                tau,
                coupling: Coupling::Elliptic,
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn margin_sign_is_the_algebraic_condition(p in params(), k in 1u32..6) {
        let kf = f64::from(k);
        let lhs = p.chi * (2.0 * PI * kf * p.tau + 1.0);
        let rhs = p.lambda * (p.gamma + 4.0 * PI * PI * p.sigma_c * kf * kf);
        // Skip draws too close to the threshold to decide in floating point.
        prop_assume!((lhs - rhs).abs() > 1e-9 * rhs);
        prop_assert_eq!(instability_margin(&p, k).unwrap() > 0.0, lhs > rhs);
    }

    #[test]
    fn margin_grows_with_chi_and_falls_with_lambda(p in params(), k in 1u32..6) {
        prop_assume!(p.chi > 0.0);
        let m = instability_margin(&p, k).unwrap();
        let more_chi = ModelParams { chi: 2.0 * p.chi, ..p };
        let more_lambda = ModelParams { lambda: 2.0 * p.lambda, ..p };
        prop_assert!(instability_margin(&more_chi, k).unwrap() > m);
        prop_assert!(instability_margin(&more_lambda, k).unwrap() < m);
    }

    #[test]
    fn root_exists_iff_viscous_margin_is_positive(p in params(), k in 1u32..4, parabolic in any::<bool>()) {
        let coupling = if parabolic { Coupling::Parabolic } else { Coupling::Elliptic };
        let rp = reduce(&p, k, coupling).unwrap();
        let m = reduced_margin(&rp, coupling).unwrap();
        prop_assume!(m.abs() > 1e-12);
        let root = find_unstable_root(&rp, coupling).unwrap();
        prop_assert_eq!(root.mu0().is_some(), m > 0.0);
    }

    #[test]
    fn dispersion_integral_decreases_on_the_real_axis(
        tau in 0.0f64..10.0,
        lambda in 0.01f64..10.0,
        a in 0.0f64..20.0,
        gap in 1e-6f64..5.0,
    ) {
        let i = |mu: f64| dispersion_closed_form(tau, lambda, Complex64::new(mu, 0.0)).unwrap().re;
        prop_assert!(i(a + gap) < i(a));
    }

    #[test]
    fn resolvent_is_bounded_by_inverse_real_part(
        sigma in 0.0f64..2.0,
        tau in 0.0f64..5.0,
        lambda in 0.01f64..10.0,
        re in 0.1f64..10.0,
        im in -10.0f64..10.0,
    ) {
        let rp = ReducedParams::direct(1.0, tau, lambda);
        let c = resolvent_norm_check(&rp, sigma, Complex64::new(re, im), 16).unwrap();
        prop_assert!(c.bound_ok, "{:?}", c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unstable_rightmost_eigenvalue_is_a_double_real_pair(
        tau in 0.0f64..3.0,
        lambda in 0.2f64..4.0,
        excess in 1.2f64..4.0,
        sigma in 0.0f64..0.05,
    ) {
        let i0 = dispersion_closed_form(tau, lambda, Complex64::new(0.0, 0.0)).unwrap().re;
        let rp = ReducedParams::direct(excess / i0, tau, lambda).with_sigma(sigma);
        let s = viscous_spectrum(&rp, 32, Coupling::Elliptic).unwrap();
        prop_assume!(s.rightmost.re > 0.0);
        prop_assert_eq!(s.rightmost_multiplicity, 2);
        let m = assemble_viscous_operator(&rp, 32, Coupling::Elliptic).unwrap();
        prop_assert_eq!(eigenspace_rank(&m, s.rightmost, 1e-9).unwrap(), 2);
    }

    #[test]
    fn scan_columns_are_consistent(p in params()) {
        let mut cfg = ExperimentConfig::defaults(ExperimentKind::InstabilityScan);
        cfg.params = p;
        cfg.k_max = 4;
        cfg.n_modes = 24;
        let r = run_instability_scan(&cfg).unwrap();
        for row in &r.rows {
            if row.rightmost_re.is_some_and(|x| x > 1e-10) {
                prop_assert!(row.mu0.is_some(), "{:?}", row);
            }
            if row.mu0.is_some() {
                prop_assert!(row.margin.unwrap() > 0.0, "{:?}", row);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn steps_conserve_mass(seed in any::<u64>(), chi in 0.0f64..3.0, tau in 0.0f64..1.0, euler in any::<bool>()) {
        let g = SpectralGrid::cube(8).unwrap();
        let p = ModelParams { chi, tau, sigma_x: 0.01, sigma_theta: 0.05, ..ModelParams::default() };
        let cfg = StepperConfig {
            dt: 0.01,
            scheme: if euler { Scheme::ImexEuler } else { Scheme::Etdrk2 },
            ..Default::default()
        };
        let mut st = Stepper::new(g, p, cfg).unwrap();
        let f = random_smooth_seed(g, 2, 0.3, seed).unwrap();
        let mut s = PhaseState::with_elliptic_chemical(f, &p, st.context());
        let m0 = s.mass();
        for _ in 0..10 {
            s = st.step(&s).unwrap().0;
        }
        prop_assert!((s.mass() - m0).abs() <= 1e-10);
        prop_assert!((m0 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn homogeneous_state_is_a_fixed_point(chi in 0.0f64..5.0, tau in 0.0f64..2.0, euler in any::<bool>()) {
        let g = SpectralGrid::new(8, 8, 16).unwrap();
        let p = ModelParams { chi, tau, ..ModelParams::default() };
        let cfg = StepperConfig {
            dt: 0.05,
            scheme: if euler { Scheme::ImexEuler } else { Scheme::Etdrk2 },
            ..Default::default()
        };
        let mut st = Stepper::new(g, p, cfg).unwrap();
        let s0 = PhaseState::with_elliptic_chemical(SpectralField3::constant(g, F_STAR), &p, st.context());
        let mut s = s0.clone();
        for _ in 0..5 {
            s = st.step(&s).unwrap().0;
        }
        let mut d = s.f.clone();
        d.axpy(-1.0, &s0.f).unwrap();
        prop_assert!(d.l2_norm() <= 1e-14);
    }
}
