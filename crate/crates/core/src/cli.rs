//! Command-line front end: argument parsing, run configuration, caching and
//! CSV/JSON output.
//!
//! Exit codes: 0 success, 1 usage error, 2 numeric failure (or a failed
//! certification under `--strict`).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analytics::{good_ordinates, single_sign_scan};
use crate::boundary::{
    builtin_curve_zeros, lambda_q_boundary, load_zeros, pole_expansion, pole_ledger_for_z_e, residue_ledger,
    zeta_zero_scan, ZeroList,
};
use crate::error::{Error, Result};
use crate::lfunc::builders::build_lambda_e;
use crate::lfunc::elliptic::{ec_an_cached, DEFAULT_DEPTH};
use crate::lfunc::{build_z_e, build_z_e_squared, build_z_k, completed_l, EllipticCurve, LFunctionSpec, QuadField};
use crate::meanper::{
    build_convolutor_v, certify_mean_periodicity, explicit_formula_check, lambda_q_convolutor, log_grid, TestFunction,
};
use crate::mellin::{contour_boundary, ContourSpec, EllipticBoundary};
use crate::specfun::C64;

#[derive(Parser, Debug)]
#[command(name = "mpzeta", version, about = "Zeta functions, boundary terms and mean-periodicity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Absolute tolerance for series and contour truncation.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for cached Dirichlet coefficients.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct Grid {
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    t_from: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t_to: f64,
    #[arg(long, default_value_t = 0.1)]
    t_step: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an L-function or zeta function at one point.
    Eval {
        #[arg(long)]
        spec: String,
        #[arg(long = "dK", default_value_t = 1, allow_hyphen_values = true)]
        d_k: i64,
        #[arg(long, default_value = "11a1")]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[command(flatten)]
        common: Common,
    },
    /// Boundary term H(t) of Z_E on a grid, by one or more methods.
    Boundary {
        #[arg(long, default_value = "11a1")]
        curve: String,
        /// Comma-separated: contour, theta, bessel2, poles.
        #[arg(long, default_value = "theta")]
        method: String,
        /// Zero file for the pole expansion; shipped data when absent.
        #[arg(long)]
        zeros: Option<PathBuf>,
        /// Height cutoff in Im λ for the pole expansion.
        #[arg(long, default_value_t = 50.0)]
        cutoff: f64,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        common: Common,
    },
    /// Residual of v ∗ h over a log grid on [0.1, 10]; JSON report.
    Certify {
        /// A curve label, or `riemann` for the Λ_Q pair.
        #[arg(long, default_value = "11a1")]
        curve: String,
        /// Adds amplitude·x^{-1/4} to h.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Both sides of the explicit formula for a bump test function.
    Explicit {
        #[arg(long, default_value = "riemann")]
        spec: String,
        #[arg(long, default_value_t = 0.5)]
        phi_lo: f64,
        #[arg(long, default_value_t = 2.0)]
        phi_hi: f64,
        /// 0 selects the zero test function.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        phi_amp: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Sign changes of H_E^{(k)} on a t-range.
    Signscan {
        #[arg(long, default_value = "11a1")]
        curve: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        common: Common,
    },
    /// Heights in (T, T+1) where |L|^{-1} is polynomially bounded.
    Ordinates {
        #[arg(long, default_value = "riemann")]
        spec: String,
        #[arg(long = "dK", default_value_t = 1, allow_hyphen_values = true)]
        d_k: i64,
        #[arg(long = "T", default_value_t = 30.0)]
        t_base: f64,
        #[arg(long = "H", default_value_t = 10.0)]
        h: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        sigma_from: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        sigma_to: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Zero ordinates: ζ by scanning, curves from data files.
    Zeros {
        #[arg(long, default_value = "riemann")]
        spec: String,
        #[arg(long, default_value = "11a1")]
        curve: String,
        #[arg(long, default_value_t = 50.0)]
        height: f64,
        #[arg(long)]
        zeros: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Everything that determines a command's numeric output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub label: String,
    pub grid: Option<(f64, f64, f64)>,
    pub tolerances: BTreeMap<String, f64>,
    pub params: BTreeMap<String, String>,
    pub zero_file: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: &str, label: &str, tol: f64) -> Self {
        let mut tolerances = BTreeMap::new();
        tolerances.insert("tol".to_string(), tol);
        RunConfig {
            command: command.into(),
            label: label.into(),
            grid: None,
            tolerances,
            params: BTreeMap::new(),
            zero_file: None,
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((_, _, step)) = self.grid {
            if !(step > 0.0) {
                return Err(Error::InvalidInput(format!("grid step must be positive, got {step}")));
            }
        }
        for (k, v) in &self.tolerances {
            if !(*v > 0.0) {
                return Err(Error::InvalidInput(format!("tolerance {k} must be positive, got {v}")));
            }
        }
        if let Some(p) = &self.zero_file {
            if !p.is_file() {
                return Err(Error::InvalidInput(format!("zero file {} not found", p.display())));
            }
        }
        Ok(())
    }

    /// SHA-256 of the JSON form, as hex.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

// Errors that are the caller's fault rather than the numerics'.
fn is_usage(e: &Error) -> bool {
    matches!(e, Error::InvalidInput(_) | Error::UnsupportedField(_) | Error::InvalidDiscriminant(_) | Error::Parse { .. })
}

/// Parses `a`, `a+bi`, `a-bi`, `bi` or `a,b`.
pub fn parse_complex(text: &str) -> Result<C64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse complex number '{text}'"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = t.split_once(',') {
        return Ok(C64::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(C64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let cut = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match cut {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(C64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}

fn grid_points(g: &Grid) -> Vec<f64> {
    if g.t_from > g.t_to || !(g.t_step > 0.0) {
        return Vec::new();
    }
    let n = ((g.t_to - g.t_from) / g.t_step + 1e-9).floor() as usize;
    (0..=n).map(|i| g.t_from + i as f64 * g.t_step).collect()
}

fn curve_for(label: &str, cache_dir: &Option<PathBuf>) -> Result<EllipticCurve> {
    let curve = EllipticCurve::builtin(label).or_else(|_| {
        let p = Path::new(label);
        if p.is_file() {
            EllipticCurve::load(p)
        } else {
            Err(Error::InvalidInput(format!("unknown curve '{label}'")))
        }
    })?;
    if let Some(dir) = cache_dir {
        ec_an_cached(&curve, DEFAULT_DEPTH, dir)?;
    }
    Ok(curve)
}

fn zeros_for(path: &Option<PathBuf>, curve: &str) -> Result<ZeroList> {
    match path {
        Some(p) => load_zeros(p),
        None => builtin_curve_zeros(curve).map_err(|_| Error::InvalidInput(format!("no zero data shipped for '{curve}'"))),
    }
}

struct Output {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(out: &mut dyn Write, o: &Output, cfg: &RunConfig) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&o.header)?;
    for r in &o.rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    out.write_all(&bytes)?;
    writeln!(out, "# config-hash={}", cfg.hash())?;
    Ok(())
}

fn emit(common: &Common, stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &common.out {
        Some(p) => {
            let mut file = std::fs::File::create(p)?;
            f(&mut file)
        }
        None => f(stdout),
    }
}

fn spec_for(name: &str, d_k: i64, curve: &str, cache: &Option<PathBuf>) -> Result<LFunctionSpec> {
    match name.to_ascii_lowercase().as_str() {
        "riemann" | "zeta" => Ok(LFunctionSpec::riemann()),
        "dedekind" => LFunctionSpec::dedekind(QuadField::new(d_k)?),
        "zk" => build_z_k(&QuadField::new(d_k)?),
        "ze" => build_z_e(&curve_for(curve, cache)?),
        "ze2" => build_z_e_squared(&curve_for(curve, cache)?),
        "le" => build_lambda_e(&curve_for(curve, cache)?, DEFAULT_DEPTH),
        _ => Err(Error::InvalidInput(format!("unknown spec '{name}'"))),
    }
}

fn run_command(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Eval { spec, d_k, curve, s, common } => {
            let s = parse_complex(&s)?;
            let sp = spec_for(&spec, d_k, &curve, &common.cache_dir)?;
            let cfg = RunConfig::new("eval", &sp.label, common.tol).param("s", s);
            cfg.validate()?;
            let z = completed_l(&sp, s)?;
            let k = C64::new(sp.weight_d as f64 + 1.0, 0.0);
            // functional-equation defect as the error column; symmetric in s ↔ k - s
            let defect = (z - sp.sign_eps * completed_l(&sp, k - s)?).norm();
            let mut rows = vec![vec!["Lambda".to_string(), num(z.re), num(z.im), num(defect)]];
            if matches!(spec.to_ascii_lowercase().as_str(), "riemann" | "zeta" | "dedekind" | "le") {
                let g = sp.gamma.eval(s)?;
                let l = sp.dirichlet_part(s)?;
                rows.insert(0, vec!["L".to_string(), num(l.re), num(l.im), num(defect / g.norm())]);
            }
            let o = Output { header: vec!["quantity".into(), "re".into(), "im".into(), "error".into()], rows, notes: vec![] };
            emit(&common, stdout, |w| write_csv(w, &o, &cfg))?;
            Ok(0)
        }
        Command::Boundary { curve, method, zeros, cutoff, grid, common } => {
            let methods: Vec<String> = method.split(',').map(|m| m.trim().to_ascii_lowercase()).collect();
            for m in &methods {
                if !["contour", "theta", "bessel2", "poles"].contains(&m.as_str()) {
                    return Err(Error::InvalidInput(format!("unknown method '{m}'")));
                }
            }
            let c = curve_for(&curve, &common.cache_dir)?;
            let mut cfg = RunConfig::new("boundary", &c.label, common.tol).param("method", &method).param("cutoff", cutoff);
            cfg.grid = Some((grid.t_from, grid.t_to, grid.t_step));
            cfg.zero_file = zeros.clone();
            cfg.validate()?;
            let ts = grid_points(&grid);
            let mut columns: Vec<Vec<f64>> = Vec::new();
            if !ts.is_empty() {
                for m in &methods {
                    let col: Vec<f64> = match m.as_str() {
                        "theta" => {
                            let eb = EllipticBoundary::new(&c)?;
                            ts.iter().map(|&t| eb.theta(t)).collect::<Result<_>>()?
                        }
                        "bessel2" => {
                            let eb = EllipticBoundary::new(&c)?;
                            ts.iter().map(|&t| eb.bessel2(t)).collect::<Result<_>>()?
                        }
                        "contour" => {
                            let spec = build_z_e(&c)?;
                            let h = contour_boundary(&spec, &ContourSpec::for_spec(&spec, common.tol * 1e-2)?, common.tol)?;
                            ts.iter().map(|&t| h.eval_t(t)).collect::<Result<_>>()?
                        }
                        _ => {
                            let z = zeros_for(&zeros, &c.label)?;
                            let ledger = pole_ledger_for_z_e(&c, &z, cutoff)?;
                            ts.iter().map(|&t| pole_expansion(&ledger, (-t).exp(), cutoff).value).collect()
                        }
                    };
                    columns.push(col);
                }
            }
            let mut header = vec!["t".to_string()];
            header.extend(methods.iter().map(|m| format!("H_{m}")));
            let two = methods.len() == 2;
            if two {
                header.push("diff".into());
            }
            let mut max_diff: f64 = 0.0;
            let rows = ts
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let mut r = vec![num(t)];
                    r.extend(columns.iter().map(|c| num(c[i])));
                    if two {
                        let d = (columns[0][i] - columns[1][i]).abs();
                        max_diff = max_diff.max(d);
                        r.push(num(d));
                    }
                    r
                })
                .collect();
            let o = Output { header, rows, notes: vec![] };
            emit(&common, stdout, |w| write_csv(w, &o, &cfg))?;
            if two {
                writeln!(stderr, "max diff {max_diff:e}")?;
            }
            Ok(0)
        }
        Command::Certify { curve, perturb, points, strict, common } => {
            let cfg = RunConfig::new("certify", &curve, common.tol).param("perturb", perturb).param("points", points);
            cfg.validate()?;
            let (v, h) = if curve.eq_ignore_ascii_case("riemann") {
                (lambda_q_convolutor(0)?, lambda_q_boundary())
            } else {
                let c = curve_for(&curve, &common.cache_dir)?;
                (build_convolutor_v(&c, None, 0)?, EllipticBoundary::new(&c)?.theta_term())
            };
            let h = if perturb != 0.0 { h.perturbed(perturb, 0.25) } else { h };
            let report = certify_mean_periodicity(&v, &h, &log_grid(0.1, 10.0, points.max(2)))?;
            #[derive(Serialize)]
            struct Json<'a> {
                #[serde(flatten)]
                report: &'a crate::meanper::CertificationReport,
                config_hash: String,
            }
            let text = serde_json::to_string_pretty(&Json { report: &report, config_hash: cfg.hash() })?;
            emit(&common, stdout, |w| Ok(writeln!(w, "{text}")?))?;
            writeln!(stderr, "{} ratio {:e}", if report.pass { "PASS" } else { "FAIL" }, report.ratio)?;
            Ok(if strict && !report.pass { 2 } else { 0 })
        }
        Command::Explicit { spec, phi_lo, phi_hi, phi_amp, common } => {
            if !spec.eq_ignore_ascii_case("riemann") {
                return Err(Error::InvalidInput(format!("explicit formula supports spec 'riemann' only, got '{spec}'")));
            }
            let cfg = RunConfig::new("explicit", "riemann", common.tol)
                .param("phi_lo", phi_lo)
                .param("phi_hi", phi_hi)
                .param("phi_amp", phi_amp);
            cfg.validate()?;
            let phi = if phi_amp == 0.0 {
                TestFunction::Zero
            } else {
                TestFunction::Bump { lo: phi_lo, hi: phi_hi, amplitude: phi_amp }
            };
            phi.support().map_err(|e| Error::InvalidInput(e.to_string()))?;
            let sp = LFunctionSpec::riemann();
            let ledger = residue_ledger(&sp, &sp.structural_poles)?;
            let r = explicit_formula_check(&sp, &phi, &ledger)?;
            let o = Output {
                header: vec!["lhs".into(), "rhs".into(), "difference".into()],
                rows: vec![vec![num(r.lhs), num(r.rhs), num(r.difference())]],
                notes: vec![],
            };
            emit(&common, stdout, |w| write_csv(w, &o, &cfg))?;
            Ok(0)
        }
        Command::Signscan { curve, k, grid, common } => {
            let c = curve_for(&curve, &common.cache_dir)?;
            let mut cfg = RunConfig::new("signscan", &c.label, common.tol).param("k", k);
            cfg.grid = Some((grid.t_from, grid.t_to, grid.t_step));
            cfg.validate()?;
            let r = single_sign_scan(&c, k, (grid.t_from, grid.t_to), grid.t_step)?;
            let o = Output {
                header: vec!["bracket_lo".into(), "bracket_hi".into()],
                rows: r.sign_changes.iter().map(|(a, b)| vec![num(*a), num(*b)]).collect(),
                notes: vec![],
            };
            emit(&common, stdout, |w| write_csv(w, &o, &cfg))?;
            match r.constant_sign_from {
                Some(t0) => writeln!(stderr, "{} sign changes; constant sign from t = {t0}", r.sign_changes.len())?,
                None => writeln!(stderr, "all samples vanished")?,
            }
            Ok(0)
        }
        Command::Ordinates { spec, d_k, t_base, h, sigma_from, sigma_to, common } => {
            let sp = spec_for(&spec, d_k, "11a1", &common.cache_dir)?;
            let cfg = RunConfig::new("ordinates", &sp.label, common.tol)
                .param("T", t_base)
                .param("H", h)
                .param("sigma", format!("{sigma_from}:{sigma_to}"));
            cfg.validate()?;
            let r = good_ordinates(&sp, t_base, h, (sigma_from, sigma_to))?;
            let o = Output {
                header: vec!["t".into()],
                rows: r.accepted.iter().map(|&t| vec![num(t)]).collect(),
                notes: vec![format!(
                    "A = {}, excluded measure {} (limit {})",
                    r.exponent_a,
                    r.excluded_measure_estimate,
                    1.0 / r.h
                )],
            };
            emit(&common, stdout, |w| write_csv(w, &o, &cfg))?;
            for n in &o.notes {
                writeln!(stderr, "{n}")?;
            }
            Ok(0)
        }
        Command::Zeros { spec, curve, height, zeros, common } => {
            let mut cfg = RunConfig::new("zeros", &spec, common.tol).param("height", height);
            cfg.zero_file = zeros.clone();
            cfg.validate()?;
            let list = match spec.to_ascii_lowercase().as_str() {
                "riemann" | "zeta" => {
                    if height > 100.0 {
                        return Err(Error::InvalidInput(format!("zeta zero scan is limited to height 100, got {height}")));
                    }
                    zeta_zero_scan(height)?
                }
                "le" => {
                    let z = zeros_for(&zeros, &curve)?;
                    if z.height_limit < height {
                        return Err(Error::MissingZeroData { have: z.height_limit, need: height });
                    }
                    z
                }
                _ => return Err(Error::InvalidInput(format!("unknown spec '{spec}'"))),
            };
            let o = Output {
                header: vec!["gamma".into()],
                rows: list.ordinates.iter().filter(|&&g| g <= height).map(|&g| vec![num(g)]).collect(),
                notes: vec![],
            };
            emit(&common, stdout, |w| write_csv(w, &o, &cfg))?;
            Ok(0)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match run_command(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if is_usage(&e) {
                let _ = writeln!(stderr, "run with --help for usage");
                1
            } else {
                2
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
        assert_eq!(parse_complex("0.5+14.1i").unwrap(), C64::new(0.5, 14.1));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), C64::new(1e-3, -20.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.5,3").unwrap(), C64::new(0.5, 3.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }
}
