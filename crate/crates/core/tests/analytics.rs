use mpzeta::analytics::*;
use mpzeta::boundary::*;
use mpzeta::lfunc::*;
use mpzeta::mellin::EllipticBoundary;
use mpzeta::{Error, C64};
use std::sync::{Arc, OnceLock};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn eleven() -> EllipticCurve {
    EllipticCurve::builtin("11a1").unwrap()
}

fn decomposition() -> &'static H2Decomposition {
    static D: OnceLock<H2Decomposition> = OnceLock::new();
    D.get_or_init(|| H2Decomposition::new(&eleven(), &builtin_curve_zeros("11a1").unwrap()).unwrap())
}

fn zeta_zeros() -> &'static ZeroList {
    static Z: OnceLock<ZeroList> = OnceLock::new();
    Z.get_or_init(|| zeta_zero_scan(90.0).unwrap())
}

#[test]
fn scan_synthetic_root() {
    let r = sign_scan(|t| Ok((-t).exp() - 1.0), 0, (-1.0, 1.0), 0.01).unwrap();
    assert_eq!(r.sign_changes.len(), 1);
    let (a, b) = r.sign_changes[0];
    assert!(a <= 0.0 && 0.0 <= b);
    assert!(!r.has_constant_sign());
    let flat = sign_scan(|_| Ok(0.0), 0, (0.0, 1.0), 0.1).unwrap();
    assert!(flat.constant_sign_from.is_none());
    assert!(sign_scan(|t| Ok(t), 0, (1.0, 0.0), 0.1).is_err());
}

#[test]
fn eleven_a1_constant_sign_tail() {
    let r = single_sign_scan(&eleven(), 0, (3.0, 8.0), 0.01).unwrap();
    assert!(r.sign_changes.is_empty());
    assert!(r.has_constant_sign());
    assert_eq!(r.constant_sign_from, Some(3.0));
    assert!(matches!(single_sign_scan(&eleven(), 7, (3.0, 8.0), 0.01), Err(Error::InvalidInput(_))));
}

#[test]
fn analytic_derivatives_match_differences() {
    let b = EllipticBoundary::new(&eleven()).unwrap();
    let h = 1e-4;
    let d = (b.theta(1.0 + h).unwrap() - b.theta(1.0 - h).unwrap()) / (2.0 * h);
    assert!((b.theta_derivative(1.0, 1).unwrap() - d).abs() < 1e-7);
    let h = 1e-3;
    for k in 1..=4 {
        let g = |u: f64| b.theta_derivative(u, k - 1).unwrap();
        for t in [-2.0, -0.5, 1.0, 2.0, 3.5] {
            let approx = (8.0 * (g(t + h) - g(t - h)) - (g(t + 2.0 * h) - g(t - 2.0 * h))) / (12.0 * h);
            let exact = b.theta_derivative(t, k).unwrap();
            assert!((exact - approx).abs() < 1e-6, "k={k} t={t}: {exact} {approx}");
        }
    }
}

#[test]
fn h2_components_sum() {
    let d = decomposition();
    let at0 = d.at(0.0).unwrap();
    assert!(at0.total.abs() < 1e-12, "{}", at0.total);
    assert!(at0.residual < 1e-6, "{}", at0.residual);
    // log powers vanish at x = 1
    assert!((at0.h00 - d.at_zero.coeffs[0].re).abs() < 1e-14);
    for t in [-1.0, -0.3, 0.4, 1.0] {
        let r = d.at(t).unwrap();
        assert!(r.residual < 1e-6, "t={t}: {}", r.residual);
        assert!(r.imag_residual < 1e-10, "t={t}: {}", r.imag_residual);
    }
}

#[test]
fn h2_components_reflect() {
    let d = decomposition();
    // h(1/x) = -x·h(x): the parts at 0 and 1 swap, the rest maps to itself
    for t in [0.2, 0.7, 1.3] {
        let (p, m) = (d.at(t).unwrap(), d.at(-t).unwrap());
        let x = (-t).exp();
        assert!((m.h00 + x * p.h01).abs() < 1e-9 * (1.0 + m.h00.abs()), "t={t}");
        assert!((m.h01 + x * p.h00).abs() < 1e-9 * (1.0 + m.h01.abs()), "t={t}");
        assert!((m.h1 + x * p.h1).abs() < 1e-9 * (1.0 + m.h1.abs()), "t={t}");
    }
}

#[test]
fn h2_needs_both_ledger_entries() {
    let e = eleven();
    assert!(matches!(H2Decomposition::from_ledger(&e, vec![], 10.0), Err(Error::MissingLedger(_))));
    let only_zero = vec![decomposition().at_zero.clone()];
    assert!(matches!(H2Decomposition::from_ledger(&e, only_zero, 10.0), Err(Error::MissingLedger(_))));
}

#[test]
fn zeta_ordinates_near_thirty() {
    let z = LFunctionSpec::riemann();
    let r = good_ordinates(&z, 30.0, 10.0, (-1.0, 2.0)).unwrap();
    assert!(!r.accepted.is_empty());
    assert!(r.excluded_measure_estimate <= 0.1);
    assert!(r.pass());
    assert!(r.accepted.iter().all(|&t| t > 30.0 && t < 31.0));
    assert!(r.accepted.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn ordinates_near_a_zero_rejected() {
    let z = LFunctionSpec::riemann();
    let gamma = zeta_zeros().ordinates.iter().copied().find(|g| (g - 32.935).abs() < 1e-2).unwrap();
    let r = good_ordinates(&z, 32.5, 10.0, (-1.0, 2.0)).unwrap();
    assert!(r.exponent_a <= 4.0, "A = {}", r.exponent_a);
    let near: Vec<f64> = (0..500).map(|j| 32.5 + (j as f64 + 0.5) * r.grid_step).filter(|t| (t - gamma).abs() < 1e-3).collect();
    assert!(!near.is_empty());
    for t in near {
        assert!(!r.accepted.contains(&t), "{t}");
    }
}

#[test]
fn unit_function_fully_accepted() {
    let one = LFunctionSpec::new(
        "one",
        Arc::new(DirichletCoefficients::new(vec![0.0, 1.0], 1.0)),
        GammaFactor::trivial(),
        c(1.0, 0.0),
        0,
        Evaluator::Composite(Arc::new(|_| Ok(c(1.0, 0.0)))),
    )
    .unwrap();
    let r = good_ordinates(&one, 10.0, 4.0, (0.0, 1.0)).unwrap();
    assert_eq!(r.exponent_a, 0.0);
    assert_eq!(r.accepted.len(), 200);
    assert_eq!(r.excluded_measure_estimate, 0.0);
    assert!(good_ordinates(&one, 1.0, 4.0, (0.0, 1.0)).is_err());
}

#[test]
fn ordinate_exponent_monotone_in_h() {
    let z = LFunctionSpec::riemann();
    let mut last = 0.0;
    for h in [2.0, 5.0, 10.0, 20.0] {
        let r = good_ordinates(&z, 32.5, h, (-1.0, 2.0)).unwrap();
        assert!(r.excluded_measure_estimate <= 1.0 / h);
        assert!(r.exponent_a >= last, "H={h}: {} < {last}", r.exponent_a);
        last = r.exponent_a;
    }
}

#[test]
fn zero_density_examples() {
    let zeros = zeta_zeros();
    let (m, ratio) = zero_density_check(zeros, 30.0).unwrap();
    assert_eq!(m, 1);
    assert!(ratio < 2.0);
    assert_eq!(zero_density_check(zeros, 12.0).unwrap().0, 0);
    for t in [20.0, 40.0, 80.0] {
        let (_, ratio) = zero_density_check(zeros, t).unwrap();
        assert!(ratio < 3.0, "T={t}: {ratio}");
    }
    assert!(matches!(zero_density_check(zeros, 89.5), Err(Error::Coverage(..))));
}

#[test]
fn log_derivative_examples() {
    let z = LFunctionSpec::riemann();
    let zeros = zeta_zeros();
    let r = log_deriv_expansion_check(&z, c(2.0, 30.0), zeros).unwrap();
    assert!(r.ratio < 5.0, "{}", r.ratio);
    let far = log_deriv_expansion_check(&z, c(5.0, 30.0), zeros).unwrap();
    assert_eq!(far.local_zeros, 0);
    assert!(far.residual < 0.1, "{}", far.residual);
    let near = log_deriv_expansion_check(&z, c(0.9, 30.0), zeros).unwrap();
    assert!(near.local_zeros >= 1);
    for s in [c(2.0, 30.0), c(0.9, 30.0), c(1.5, 45.0)] {
        let a = log_deriv_expansion_check(&z, s, zeros).unwrap();
        let b = log_deriv_expansion_check(&z, s.conj(), zeros).unwrap();
        assert!((a.residual - b.residual).abs() < 1e-8 * (1.0 + a.residual), "{s}");
        assert!((a.log_derivative.conj() - b.log_derivative).norm() < 1e-8);
    }
    let short = zeta_zero_scan(20.0).unwrap();
    assert!(matches!(log_deriv_expansion_check(&z, c(2.0, 30.0), &short), Err(Error::MissingLocalZeros(_))));
    assert!(log_deriv_expansion_check(&z, c(2.0, 1.0), zeros).is_err());
}

#[test]
fn log_derivative_fit_reports_c() {
    let z = LFunctionSpec::riemann();
    let fit = log_deriv_fit(&z, 0.5, &[20.0, 30.0, 40.0], zeta_zeros(), 10.0).unwrap();
    assert_eq!(fit.checks.len(), 3);
    assert!(fit.pass);
    let max = fit.checks.iter().map(|c| c.ratio).fold(0.0, f64::max);
    assert_eq!(fit.fitted_c, max);
}

#[test]
fn c_gamma_sums_grow() {
    let field = QuadField::rationals();
    let zeros = zeta_zero_scan(50.0).unwrap();
    let sums = c_gamma_partial_sums(&field, &zeros, &[15.0, 30.0, 50.0]).unwrap();
    assert_eq!(sums[0].1, c_gamma_coefficient(&field, zeros.ordinates[0]).unwrap().norm());
    assert!(sums.windows(2).all(|w| w[1].1 >= w[0].1));
    assert!(matches!(c_gamma_partial_sums(&field, &zeros, &[60.0]), Err(Error::MissingZeroData { .. })));
}
