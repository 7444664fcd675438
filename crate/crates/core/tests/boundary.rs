use mpzeta::boundary::*;
use mpzeta::lfunc::*;
use mpzeta::meanper::log_grid;
use mpzeta::mellin::*;
use mpzeta::{Error, C64};
use std::f64::consts::E;
use std::io::Write;
use std::sync::Arc;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn one() -> C64 {
    c(1.0, 0.0)
}

#[test]
fn boundary_term_examples() {
    let f = Arc::new(|x: f64| Ok(x.powf(-0.5) * (-(x + 1.0 / x)).exp()));
    let h = boundary_term("self-dual", f, one(), 0.5).unwrap();
    for x in [0.3, 1.0, 4.0] {
        assert!(h.eval(x).unwrap().abs() < 1e-16);
    }
    let h = boundary_term("exp", Arc::new(|x: f64| Ok((-x).exp())), one(), 1.0).unwrap();
    assert_eq!(h.eval(1.0).unwrap(), 0.0);
    assert!(h.max_reflection_residual(41).unwrap() < 1e-12);
    let q = lambda_q_boundary();
    assert!((q.eval(0.5).unwrap() - 1.0).abs() < 1e-12);
    assert!(boundary_term("bad", Arc::new(|_| Ok(0.0)), c(0.0, 1.0), 1.0).is_err());
}

#[test]
fn reflection_invariant_on_constructed_terms() {
    let q = lambda_q_boundary();
    assert!(q.max_reflection_residual(41).unwrap() < 1e-8);
    let e = EllipticCurve::builtin("11a1").unwrap();
    let theta = EllipticBoundary::new(&e).unwrap();
    assert!(theta.theta_term().max_reflection_residual(41).unwrap() < 1e-8);
    assert!(theta.bessel2_term().max_reflection_residual(41).unwrap() < 1e-8);
    let z = build_z_e(&e).unwrap();
    let h = contour_boundary(&z, &ContourSpec::for_spec(&z, 1e-16).unwrap(), 1e-12).unwrap();
    assert!(h.max_reflection_residual(41).unwrap() < 1e-8);
    // a perturbation breaks it
    assert!(q.perturbed(0.01, 0.25).max_reflection_residual(41).unwrap() > 1e-4);
}

#[test]
fn pole_expansion_examples() {
    let half = PoleDatum::new(c(0.5, 0.0), vec![one()]).unwrap();
    for x in [0.2, 1.0, 7.0] {
        assert!((pole_expansion(std::slice::from_ref(&half), x, 0.0).value - x.powf(-0.5)).abs() < 1e-15);
    }
    let ledger = vec![PoleDatum::new(c(0.0, 0.0), vec![-one()]).unwrap(), PoleDatum::new(one(), vec![one()]).unwrap()];
    let h = lambda_q_boundary();
    for x in log_grid(0.1, 10.0, 31) {
        let v = pole_expansion(&ledger, x, 0.0);
        assert!((v.value - h.eval(x).unwrap()).abs() < 1e-10);
        assert!(v.is_conjugate_closed());
    }
    let double = PoleDatum::new(c(0.0, 0.0), vec![c(0.0, 0.0), one()]).unwrap();
    assert!((pole_expansion(&[double], E, 0.0).value + 1.0).abs() < 1e-15);
    assert!(PoleDatum::new(one(), vec![one(), c(0.0, 0.0)]).is_err());
}

#[test]
fn expansion_reports_unpaired_poles() {
    let lone = PoleDatum::new(c(0.5, 3.0), vec![one()]).unwrap();
    let v = pole_expansion(std::slice::from_ref(&lone), 2.0, 10.0);
    assert!(!v.is_conjugate_closed());
    let v = pole_expansion(&[lone.clone(), lone.conj()], 2.0, 10.0);
    assert!(v.is_conjugate_closed());
    // the cutoff drops both
    assert_eq!(pole_expansion(&[lone.clone(), lone.conj()], 2.0, 2.0).value, 0.0);
}

#[test]
fn lambda_q_residues() {
    let q = LFunctionSpec::riemann();
    let ledger = residue_ledger(&q, &[(c(0.0, 0.0), 1), (one(), 1)]).unwrap();
    assert_eq!(ledger.len(), 2);
    assert!((ledger[0].coeffs[0] + 1.0).norm() < 1e-10);
    assert!((ledger[1].coeffs[0] - 1.0).norm() < 1e-10);
    // a regular point contributes nothing
    assert!(residue_ledger(&q, &[(c(2.0, 0.0), 1)]).unwrap().is_empty());
    assert!(matches!(residue_ledger(&q, &[(one(), 1), (c(1.01, 0.0), 1)]), Err(Error::OverlappingPoles(..))));
}

#[test]
fn z_e_double_pole_two_radii() {
    let e = EllipticCurve::builtin("11a1").unwrap();
    let z = build_z_e(&e).unwrap();
    let f = |s: C64| completed_l(&z, s);
    let opts = ResidueOptions { check_tol: None, ..ResidueOptions::default() };
    let a = residue_ledger_with(&f, &[(one(), 2)], &opts).unwrap();
    let b = residue_ledger_with(&f, &[(one(), 2)], &ResidueOptions { radius: 5e-3, ..opts }).unwrap();
    assert_eq!(a[0].multiplicity, 2);
    let (ca, cb) = (a[0].coeffs[1], b[0].coeffs[1]);
    assert!((ca - cb).norm() < 1e-8 * ca.norm(), "{ca} vs {cb}");
    // a declared bound above the true order is trimmed
    let ledger = residue_ledger(&z, &[(c(0.5, 0.0), 3)]).unwrap();
    assert_eq!(ledger[0].multiplicity, 1);
}

#[test]
fn residues_stable_under_radius_halving() {
    let zk = build_z_k(&QuadField::rationals()).unwrap();
    let f = |s: C64| completed_l(&zk, s);
    let opts = ResidueOptions { check_tol: None, ..ResidueOptions::default() };
    let cands = [(c(0.5, 0.0), 2), (c(0.5, 14.134_725_141_734_694), 1)];
    let a = residue_ledger_with(&f, &cands, &opts).unwrap();
    let b = residue_ledger_with(&f, &cands, &ResidueOptions { radius: 5e-3, ..opts }).unwrap();
    assert_eq!(a.len(), b.len());
    for (p, q) in a.iter().zip(&b) {
        let scale = p.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (x, y) in p.coeffs.iter().zip(&q.coeffs) {
            assert!((x - y).norm() <= 1e-8 * scale, "{p:?} {q:?}");
        }
    }
    // the double pole of Z_K at 1/2
    let lead = a[0].coeffs[1];
    let want = -0.25 / completed_riemann(c(0.5, 0.0)).unwrap();
    assert!((lead - want).norm() < 1e-10, "{lead} vs {want}");
}

#[test]
fn zeta_zeros() {
    let zeros = zeta_zero_scan(30.0).unwrap();
    assert_eq!(zeros.source, ZeroSource::Computed);
    assert!((zeros.ordinates[0] - 14.134725).abs() < 1e-6);
    assert_eq!(zeros.len(), 3);
    assert_eq!(zeta_zero_count(30.0).unwrap(), 3);
    assert!(zeros.ordinates.windows(2).all(|w| w[1] > w[0]));
    assert!(zeta_zero_scan(150.0).is_err());
}

#[test]
fn zero_files() {
    let z = parse_zeros("14.134725\n21.022040\n").unwrap();
    assert_eq!(z.len(), 2);
    assert_eq!(z.source, ZeroSource::File);
    assert!(parse_zeros("").unwrap().is_empty());
    assert!(matches!(parse_zeros("abc"), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(parse_zeros("# zeros\n3.0\n2.0\n"), Err(Error::Unsorted { line: 3 })));
    let z = parse_zeros("# height=60\n5.0\n").unwrap();
    assert_eq!(z.height_limit, 60.0);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# ordinates\n1.5\n\n2.5").unwrap();
    let z = load_zeros(file.path()).unwrap();
    assert_eq!(z.ordinates, vec![1.5, 2.5]);
    assert!(load_zeros(std::path::Path::new("/nonexistent/zeros.txt")).is_err());
    assert!(builtin_curve_zeros("11a1").unwrap().height_limit >= 100.0);
    assert!(builtin_curve_zeros("389a1").is_err());
}

#[test]
fn c_gamma_examples() {
    let q = QuadField::rationals();
    let zeros = zeta_zero_scan(50.0).unwrap();
    let g = zeros.ordinates[0];
    let a = c_gamma_coefficient(&q, g).unwrap();
    assert!(a.norm() > 0.0 && a.norm().is_finite());
    let b = c_gamma_coefficient(&q, -g).unwrap();
    assert!((a.conj() - b).norm() < 1e-8 * a.norm(), "{a} {b}");
    assert!(matches!(c_gamma_coefficient(&q, 15.0), Err(Error::NotAZero(..))));
    let parts = (c(0.3, 0.1), c(1.2, -0.4), c(0.7, 0.2), c(-0.5, 0.9));
    let base = c_gamma_from_parts(parts.0, parts.1, parts.2, parts.3);
    let doubled = c_gamma_from_parts(parts.0, parts.1, parts.2, parts.3 * 2.0);
    assert!((base - doubled * 2.0).norm() < 1e-15);
    let tail = |t: f64| -> f64 {
        zeros.ordinates.iter().filter(|&&g| g > t).map(|&g| c_gamma_coefficient(&q, g).unwrap().norm()).sum()
    };
    assert!(tail(40.0) < tail(20.0));
}

#[test]
fn z_e_ledger_shape() {
    let e = EllipticCurve::builtin("11a1").unwrap();
    let none = ZeroList::new(vec![], 20.0, ZeroSource::File).unwrap();
    let ledger = pole_ledger_for_z_e(&e, &none, 5.0).unwrap();
    assert!(ledger.iter().all(|p| p.location.im == 0.0));
    let locs: Vec<f64> = ledger.iter().map(|p| p.location.re).collect();
    for want in [0.0, 0.5, 1.0] {
        assert!(locs.iter().any(|l| (l - want).abs() < 1e-9), "{locs:?}");
    }
    let zeros = builtin_curve_zeros("11a1").unwrap();
    let ledger = pole_ledger_for_z_e(&e, &zeros, 15.0).unwrap();
    for p in &ledger {
        let twin = ledger.iter().find(|q| (q.location - p.location.conj()).norm() < 1e-9).expect("conjugate entry");
        assert!((twin.coeffs[0] - p.coeffs[0].conj()).norm() < 1e-9 * p.coeffs[0].norm());
    }
    assert!(matches!(pole_ledger_for_z_e(&e, &zeros, 80.0), Err(Error::MissingZeroData { .. })));
    let mut csv = Vec::new();
    write_ledger_csv(&ledger, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("re_lambda,im_lambda,m,re_C1,im_C1"));
    assert_eq!(text.lines().count(), ledger.len() + 1);
}

#[test]
fn z_e_expansion_improves_with_cutoff() {
    let e = EllipticCurve::builtin("11a1").unwrap();
    let zeros = builtin_curve_zeros("11a1").unwrap();
    let ledger = pole_ledger_for_z_e(&e, &zeros, 30.0).unwrap();
    let direct = theta_boundary_e(&e, 1.0, None).unwrap();
    let x = (-1.0f64).exp();
    let e10 = (pole_expansion(&ledger, x, 10.0).value - direct).abs();
    let e30 = (pole_expansion(&ledger, x, 30.0).value - direct).abs();
    assert!(e30 < e10, "{e10} {e30}");
}

#[test]
fn z_k_expansion_matches_contour() {
    let zk = build_z_k(&QuadField::rationals()).unwrap();
    let h = contour_boundary(&zk, &ContourSpec::for_spec(&zk, 1e-14).unwrap(), 1e-10).unwrap();
    let zeros = zeta_zero_scan(50.0).unwrap();
    let ledger = pole_ledger_for_z_k(&zeros, 50.0).unwrap();
    let mut last = f64::INFINITY;
    for cut in [20.0, 30.0, 50.0] {
        let mut sup: f64 = 0.0;
        for i in 0..=40 {
            let t = -1.0 + 0.05 * i as f64;
            sup = sup.max((h.eval_t(t).unwrap() - pole_expansion(&ledger, (-t).exp(), cut).value).abs());
        }
        assert!(sup <= last);
        last = sup;
    }
    assert!(last < 5e-3, "{last}");
    assert!(pole_ledger_for_z_k(&zeros, 60.0).is_err());
}
