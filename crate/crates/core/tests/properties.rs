use mpzeta::boundary::*;
use mpzeta::cli::parse_complex;
use mpzeta::lfunc::*;
use mpzeta::C64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn riemann_functional_equation(sigma in -1.5f64..2.5, t in -25.0f64..25.0) {
        let s = c(sigma, t);
        prop_assume!(s.norm() > 0.05 && (s - 1.0).norm() > 0.05);
        let q = LFunctionSpec::riemann();
        let a = completed_l(&q, s).unwrap();
        let b = completed_l(&q, c(1.0, 0.0) - s).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(b.norm()), "s={} {} {}", s, a, b);
    }

    #[test]
    fn riemann_conjugate_symmetry(sigma in -1.0f64..3.0, t in 0.1f64..30.0) {
        let q = LFunctionSpec::riemann();
        let a = completed_l(&q, c(sigma, t)).unwrap();
        let b = completed_l(&q, c(sigma, -t)).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn pole_expansion_is_linear(
        alpha in -3.0f64..3.0,
        x in 0.05f64..20.0,
        gamma in 1.0f64..30.0,
        c1 in -2.0f64..2.0,
        c2 in 0.1f64..2.0,
    ) {
        let datum = |k: f64| {
            vec![
                PoleDatum::new(c(0.5, gamma), vec![c(k * c1, k), c(0.0, k * c2)]).unwrap(),
                PoleDatum::new(c(0.5, -gamma), vec![c(k * c1, -k), c(0.0, -k * c2)]).unwrap(),
            ]
        };
        prop_assume!(alpha.abs() > 1e-6);
        let base = pole_expansion(&datum(1.0), x, 100.0);
        let scaled = pole_expansion(&datum(alpha), x, 100.0);
        prop_assert!((scaled.value - alpha * base.value).abs() <= 1e-12 * (1.0 + scaled.value.abs()));
        prop_assert!(base.is_conjugate_closed());
        // poles above the cutoff do not contribute
        prop_assert_eq!(pole_expansion(&datum(1.0), x, 0.5 * gamma).value, 0.0);
    }

    #[test]
    fn complex_text_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let forms = [format!("{re}{im:+}i"), format!("{re},{im}"), format!("{re:e}{im:+e}i")];
        for text in forms {
            prop_assert_eq!(parse_complex(&text).unwrap(), c(re, im), "{}", text);
        }
    }

    #[test]
    fn zero_files_sorted(mut gs in proptest::collection::vec(0.5f64..200.0, 1..40)) {
        gs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        gs.dedup();
        let text: String = gs.iter().map(|g| format!("{g}\n")).collect();
        let z = parse_zeros(&text).unwrap();
        prop_assert_eq!(&z.ordinates, &gs);
        prop_assert_eq!(z.height_limit, *gs.last().unwrap());
        prop_assert_eq!(z.count_below(gs[0]), 1);
        if gs.len() > 1 {
            let mut swapped = gs.clone();
            swapped.swap(0, 1);
            let text: String = swapped.iter().map(|g| format!("{g}\n")).collect();
            prop_assert!(parse_zeros(&text).is_err());
        }
    }
}
