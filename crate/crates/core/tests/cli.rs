use mpzeta::cli::run;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn mpzeta(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["mpzeta"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

// data rows of a CSV output, without header and trailer
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn field(text: &str, row: usize, col: usize) -> f64 {
    rows(text)[row][col].parse().unwrap()
}

#[test]
fn eval_zeta_two() {
    let r = mpzeta(&["eval", "--spec", "riemann", "--s", "2"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("quantity,re,im,error\n"));
    let zeta2 = field(&r.out, 0, 1);
    assert!((zeta2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
    assert!(r.out.contains("1.6449340668"));
}

#[test]
fn eval_zk_symmetric() {
    let a = mpzeta(&["eval", "--spec", "ZK", "--dK", "1", "--s", "0.25"]);
    let b = mpzeta(&["eval", "--spec", "ZK", "--dK", "1", "--s", "0.75"]);
    assert_eq!((a.code, b.code), (0, 0));
    let (za, zb) = (field(&a.out, 0, 1), field(&b.out, 0, 1));
    assert!((za - zb).abs() < 1e-12 * za.abs(), "{za} {zb}");
}

#[test]
fn eval_usage_errors() {
    let r = mpzeta(&["eval", "--spec", "riemann", "--s", "two"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("usage") || r.err.contains("--help"), "{}", r.err);
    assert_eq!(mpzeta(&["eval", "--spec", "nonsense", "--s", "2"]).code, 1);
    assert_eq!(mpzeta(&["eval", "--s", "2"]).code, 1);
    assert_eq!(mpzeta(&["frobnicate"]).code, 1);
    assert_eq!(mpzeta(&["--help"]).code, 0);
}

#[test]
fn boundary_two_methods() {
    let r = mpzeta(&["boundary", "--curve", "11a1", "--method", "theta,bessel2", "--t-from", "-0.5", "--t-to", "0.5", "--t-step", "0.25"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("t,H_theta,H_bessel2,diff\n"));
    let data = rows(&r.out);
    assert_eq!(data.len(), 5);
    assert!(r.err.contains("max diff"));
    let r = mpzeta(&["boundary", "--method", "theta,contour", "--t-from", "-1", "--t-to", "1", "--t-step", "0.5"]);
    assert_eq!(r.code, 0, "{}", r.err);
    for row in rows(&r.out) {
        assert!(row[3].parse::<f64>().unwrap() < 1e-6, "{row:?}");
    }
}

#[test]
fn boundary_empty_grid_and_bad_input() {
    let r = mpzeta(&["boundary", "--t-from", "1", "--t-to", "0"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("t,H_theta"));
    assert!(rows(&r.out).is_empty());
    assert!(r.out.contains("# config-hash="));
    assert_eq!(mpzeta(&["boundary", "--curve", "99z9"]).code, 1);
    assert_eq!(mpzeta(&["boundary", "--method", "guess"]).code, 1);
    assert_eq!(mpzeta(&["boundary", "--t-step", "0"]).code, 1);
    assert_eq!(mpzeta(&["boundary", "--tol", "-1"]).code, 1);
}

#[test]
fn certify_verdicts() {
    let r = mpzeta(&["certify", "--curve", "11a1"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let json: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(json["pass"], true);
    assert!(json["config_hash"].as_str().unwrap().len() == 64);
    assert!(r.err.starts_with("PASS"));
    let r = mpzeta(&["certify", "--curve", "11a1", "--perturb", "0.01"]);
    assert_eq!(r.code, 0);
    assert!(r.err.starts_with("FAIL"));
    let r = mpzeta(&["certify", "--curve", "riemann", "--perturb", "0.01", "--strict"]);
    assert_eq!(r.code, 2);
    assert_eq!(mpzeta(&["certify", "--curve", "riemann", "--strict"]).code, 0);
}

#[test]
fn explicit_formula_command() {
    let r = mpzeta(&["explicit", "--spec", "riemann"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("lhs,rhs,difference\n"));
    assert!(field(&r.out, 0, 2) < 1e-8);
    let r = mpzeta(&["explicit", "--phi-amp", "0"]);
    assert_eq!(r.code, 0);
    assert_eq!((field(&r.out, 0, 0), field(&r.out, 0, 1)), (0.0, 0.0));
    assert_eq!(mpzeta(&["explicit", "--spec", "ze"]).code, 1);
    assert_eq!(mpzeta(&["explicit", "--phi-lo", "0"]).code, 1);
}

#[test]
fn scans_pass_through() {
    let r = mpzeta(&["signscan", "--curve", "11a1", "--k", "0", "--t-from", "3", "--t-to", "8", "--t-step", "0.05"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(rows(&r.out).is_empty());
    assert!(r.err.starts_with("0 sign changes"));
    assert_eq!(mpzeta(&["signscan", "--k", "9"]).code, 1);

    let r = mpzeta(&["ordinates", "--spec", "riemann", "--T", "30", "--H", "10"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(!rows(&r.out).is_empty());
    assert!(r.err.contains("A = "));

    let r = mpzeta(&["zeros", "--spec", "riemann", "--height", "30"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let g: Vec<f64> = rows(&r.out).iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(g.len(), 3);
    assert!((g[0] - 14.134725142).abs() < 1e-6);
    assert_eq!(mpzeta(&["zeros", "--height", "500"]).code, 1);
    let r = mpzeta(&["zeros", "--spec", "le", "--curve", "11a1", "--height", "10"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!((field(&r.out, 0, 0) - 6.362614).abs() < 1e-5);
}

#[test]
fn output_is_deterministic() {
    let args = ["boundary", "--method", "theta,poles", "--t-from", "-1", "--t-to", "1", "--t-step", "0.25"];
    let a = mpzeta(&args);
    let b = mpzeta(&args);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    let hash = a.out.lines().last().unwrap();
    assert!(hash.starts_with("# config-hash=") && hash.len() == "# config-hash=".len() + 64);
    let other = mpzeta(&["boundary", "--method", "theta,poles", "--t-from", "-1", "--t-to", "1", "--t-step", "0.5"]);
    assert_ne!(other.out.lines().last(), Some(hash));
}

#[test]
fn out_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let p = path.to_str().unwrap();
    let direct = mpzeta(&["boundary", "--t-from", "0", "--t-to", "1", "--t-step", "0.5"]);
    let r = mpzeta(&["boundary", "--t-from", "0", "--t-to", "1", "--t-step", "0.5", "--out", p]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct.out);

    let cache = dir.path().join("cache");
    std::fs::create_dir(&cache).unwrap();
    let c = cache.to_str().unwrap();
    let cold = mpzeta(&["eval", "--spec", "le", "--s", "1.5+2i", "--cache-dir", c]);
    let warm = mpzeta(&["eval", "--spec", "le", "--s", "1.5+2i", "--cache-dir", c]);
    let none = mpzeta(&["eval", "--spec", "le", "--s", "1.5+2i"]);
    assert_eq!(cold.code, 0, "{}", cold.err);
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
    assert_eq!(cold.out, warm.out);
    assert_eq!(rows(&cold.out), rows(&none.out));
}
