use innergrowth::cyclicity::{
    certified_truncation, reciprocal_dilation_series, truncation_degree, GrowthWeight,
};
use innergrowth::functions::{
    eval_inner, eval_singular_inner, min_modulus_envelope, taylor_inner, taylor_singular_inner, taylor_via_fft,
    Atom, BlaschkeZeros, CirclePoint, InnerFunctionSpec, SingularMeasure,
};
use innergrowth::model::{ktheta_kernel, pairing, project_ktheta};
use innergrowth::spectra::{embedding_sequence, radial_difference_identity, verify_embedding, ModulusOfContinuity};
use innergrowth::weights::{
    moment_weight, multiplier_weight, verify_lambdanorm, verify_moments, LambdaSequence, RadialWeight,
};
use innergrowth::{Certification, Complex64, PowerSeries};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn measure_strategy() -> impl Strategy<Value = SingularMeasure> {
    prop::collection::vec((0.0..TAU, 0.05f64..1.5), 1..4).prop_map(|atoms| {
        SingularMeasure::new(
            atoms.into_iter().map(|(a, m)| Atom { position: CirclePoint::new(a), mass: m }).collect(),
            vec![],
        )
        .unwrap()
    })
}

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1)
        .prop_map(|v| PowerSeries::new(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

fn disk_point(max_r: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_r, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inner_functions_are_bounded_by_one(m in measure_strategy(), z in disk_point(0.999)) {
        let v = eval_singular_inner(&m, z).unwrap();
        prop_assert!(v.norm() <= 1.0 + 1e-15);
    }

    #[test]
    fn envelope_is_a_lower_bound_on_the_circle(m in measure_strategy(), r in 0.05f64..0.95, t in 0.0..TAU) {
        let spec = InnerFunctionSpec::singular(m.clone());
        let env = min_modulus_envelope(&spec, r, 2048).unwrap().value;
        // any circle point is at least the grid minimum minus grid resolution effects;
        // the grid minimum is attained by a grid point, so compare against one
        let grid_point = Complex64::from_polar(r, (t / TAU * 2048.0).floor() * TAU / 2048.0);
        prop_assert!(env <= eval_singular_inner(&m, grid_point).unwrap().norm());
        // maximum principle lower bound by the a-priori Poisson estimate
        prop_assert!(env >= (-m.total_mass() * (1.0 + r) / (1.0 - r)).exp() * (1.0 - 1e-12));
    }

    #[test]
    fn taylor_coefficients_match_fft(m in measure_strategy()) {
        let series = taylor_singular_inner(&m, 32);
        let fft = taylor_via_fft(|z| eval_singular_inner(&m, z * 0.5).unwrap(), 1.0, 32, 512).unwrap();
        for k in 0..=32 {
            let scaled = series.coeff(k) * 0.5f64.powi(k as i32);
            prop_assert!((scaled - fft.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn taylor_series_evaluates_to_closed_form(m in measure_strategy(), z in disk_point(0.5),
                                              zero in disk_point(0.8)) {
        prop_assume!(zero.norm() > 1e-3);
        let spec = InnerFunctionSpec::new(BlaschkeZeros::new(vec![zero]).unwrap(), Some(m)).unwrap();
        let series = taylor_inner(&spec, 200);
        prop_assert!((series.eval(z) - eval_inner(&spec, z).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn inner_coefficients_have_norm_at_most_one(m in measure_strategy()) {
        let s = taylor_singular_inner(&m, 512);
        prop_assert!(s.h2_norm_sq() <= 1.0 + 1e-12);
    }

    #[test]
    fn truncation_degree_is_minimal(radius in 1.01f64..3.0, bound in 0.1f64..1e6, eps in 1e-8f64..0.5) {
        let cert = Certification::new(radius, bound).unwrap();
        let (d, tail) = truncation_degree(cert, eps).unwrap();
        prop_assert!(tail <= eps);
        if d > 0 {
            prop_assert!(cert.tail_bound(d - 1) > eps);
        }
    }

    #[test]
    fn certified_error_is_honest(mass in 0.05f64..0.6, n in 2usize..8) {
        let m = SingularMeasure::atom(0.0, mass).unwrap();
        let cert = reciprocal_dilation_series(&m, n, 0).unwrap().certification().unwrap();
        let approx = certified_truncation(cert, 1.0 / n as f64, |d| reciprocal_dilation_series(&m, n, d)).unwrap();
        let r = 1.0 - 1.0 / n as f64;
        let worst = (0..2048)
            .map(|j| {
                let z = Complex64::from_polar(1.0, TAU * j as f64 / 2048.0);
                (1.0 / eval_singular_inner(&m, z * r).unwrap() - approx.polynomial.eval(z)).norm()
            })
            .fold(0.0, f64::max);
        prop_assert!(worst <= approx.sup_error);
    }

    #[test]
    fn moment_weight_dominates_decreasing_sequences(
        steps in prop::collection::vec(0.0f64..1.0, 60),
        n_max in 62usize..120,
    ) {
        // μ_n = Σ_{j>=n} steps_j / (j+1)^2, padded with a tail so the sequence is long enough
        let mut mu = vec![0.0; n_max];
        let mut acc = 1e-3;
        for n in (0..n_max).rev() {
            acc += steps.get(n).copied().unwrap_or(0.5) / ((n + 1) * (n + 1)) as f64;
            mu[n] = acc;
        }
        let w = moment_weight(&mu, n_max).unwrap();
        let rep = verify_moments(&w, &mu, n_max - 2).unwrap();
        prop_assert!(rep.all_pass, "{:?}", rep.rows.iter().find(|r| r.margin < -rep.residual));
    }

    #[test]
    fn multiplier_keeps_integrable(values in prop::collection::vec(0.0f64..5.0, 1..20), levels in 1usize..60) {
        let n = values.len();
        let breakpoints: Vec<f64> = (0..=n).map(|i| 1.0 - 1.0 / (i + 1) as f64).map(|x| x.max(0.0)).collect();
        prop_assume!(values.iter().any(|&v| v > 0.0));
        let g = RadialWeight::new(breakpoints, values).unwrap();
        let w = multiplier_weight(&g, levels).unwrap();
        prop_assert!(w.gaps().windows(2).all(|p| p[1] <= p[0]));
        // level n carries at most 2^n 4^{-n}, so ∫Wg <= ∫g + 1
        prop_assert!(w.weighted_integral(&g) <= g.total() + 1.0 + 1e-12);
        prop_assert!(w.weighted_integral(&g) >= g.total() * (1.0 - 1e-12));
    }

    #[test]
    fn lambda_norm_inequality(f in poly_strategy(60), a in 0.5f64..2.0) {
        let lambda = LambdaSequence::Power { a };
        let mu = lambda.reciprocals(100).unwrap();
        let w = moment_weight(&mu, 100).unwrap();
        prop_assert!(verify_lambdanorm(&f, &lambda, &w).unwrap().ok);
    }

    #[test]
    fn radial_difference_is_parseval(f in poly_strategy(64), r in 0.01f64..0.999) {
        let rd = radial_difference_identity(&f, r).unwrap();
        prop_assert!((rd.lhs - rd.rhs).abs() <= 1e-10 * (1.0 + rd.lhs));
    }

    #[test]
    fn embedding_inequality(f in poly_strategy(50), a in 0.2f64..0.8) {
        let omega = ModulusOfContinuity::Hoelder { a };
        let seq = embedding_sequence(&omega, 20, 50).unwrap();
        let check = verify_embedding(&f, &omega, &seq).unwrap();
        prop_assert!(check.ok, "{check:?}");
    }

    #[test]
    fn projection_is_orthogonal_and_contractive(f in poly_strategy(40), mass in 0.1f64..2.0) {
        let theta = taylor_singular_inner(&SingularMeasure::atom(0.0, mass).unwrap(), 512);
        let p = project_ktheta(&f, &theta, 512).unwrap();
        for j in 0..16 {
            prop_assert!(p.pairing_with_theta_multiple(&theta, &PowerSeries::monomial(j)).unwrap().norm() < 1e-12);
        }
        // ‖Pf‖ <= ‖f‖ up to the recorded truncation error
        prop_assert!(p.series.h2_norm_sq().sqrt() <= f.h2_norm_sq().sqrt() + p.truncation_error + 1e-12);
    }

    #[test]
    fn kernel_value_at_zero(lam in disk_point(0.9), mass in 0.1f64..2.0) {
        let m = SingularMeasure::atom(1.0, mass).unwrap();
        let theta = taylor_singular_inner(&m, 512);
        let k = ktheta_kernel(&theta, lam, 512).unwrap();
        let expected = 1.0 - eval_singular_inner(&m, lam).unwrap().conj() * eval_singular_inner(&m, Complex64::new(0.0, 0.0)).unwrap();
        prop_assert!((k.series.coeff(0) - expected).norm() < 1e-12);
        prop_assert!((pairing(&k.series, &PowerSeries::constant(Complex64::new(1.0, 0.0))) - expected).norm() < 1e-12);
    }

    #[test]
    fn growth_weights_decrease(m in 0.01f64..3.0, a in 0.1f64..3.0, r1 in 0.0f64..0.999, r2 in 0.0f64..0.999) {
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        for w in [GrowthWeight::ExponentialPoisson { m }, GrowthWeight::PowerLog { a }] {
            prop_assert!(w.eval(hi) <= w.eval(lo));
            prop_assert!(w.eval(lo) < 1.0 && w.eval(hi) >= 0.0);
        }
        // strictly positive wherever exp(−m(1+r)/(1−r)) does not underflow
        let (poisson, power) = (GrowthWeight::ExponentialPoisson { m }, GrowthWeight::PowerLog { a });
        if m * (1.0 + hi) / (1.0 - hi) < 700.0 {
            prop_assert!(poisson.eval(hi) > 0.0);
        }
        prop_assert!(power.eval(hi) > 0.0);
    }
}
