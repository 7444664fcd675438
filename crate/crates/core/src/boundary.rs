//! Boundary terms h(x) = f(x) - εx^{-1}f(1/x), pole ledgers and their
//! exponential-polynomial expansions, and zero lists.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunc::{
    build_z_e, build_z_k, completed_dedekind, completed_l, completed_riemann, zeta::log_zeta_infinity, EllipticCurve,
    LFunctionSpec, QuadField,
};
use crate::specfun::C64;

pub type RealFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// h(x) on (0, ∞) with h(1/x) = -ε x^p h(x); p = 1 for boundary terms,
/// p = 0 after the √x twist.
#[derive(Clone)]
pub struct BoundaryTerm {
    pub evaluator: RealFn,
    pub sign_eps: C64,
    /// |h(x)| ≪ x^{-g} as x → 0.
    pub growth_exponent: f64,
    pub reflection_power: f64,
    pub label: String,
}

impl fmt::Debug for BoundaryTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryTerm")
            .field("label", &self.label)
            .field("sign_eps", &self.sign_eps)
            .field("growth_exponent", &self.growth_exponent)
            .finish()
    }
}

impl BoundaryTerm {
    pub fn new(label: &str, evaluator: RealFn, sign_eps: C64, growth_exponent: f64) -> Self {
        BoundaryTerm { evaluator, sign_eps, growth_exponent, reflection_power: 1.0, label: label.to_string() }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("boundary term needs x > 0, got {x}")));
        }
        (self.evaluator)(x)
    }

    /// H(t) = h(e^{-t}).
    pub fn eval_t(&self, t: f64) -> Result<f64> {
        self.eval((-t).exp())
    }

    /// |h(1/x) + ε x^p h(x)| relative to 1 + |x^p h(x)|.
    pub fn reflection_residual(&self, x: f64) -> Result<f64> {
        let hx = self.eval(x)? * x.powf(self.reflection_power);
        let hinv = self.eval(1.0 / x)?;
        Ok((C64::new(hinv, 0.0) + self.sign_eps * hx).norm() / (1.0 + hx.abs()))
    }

    /// Largest reflection residual on a log grid over [0.1, 10].
    pub fn max_reflection_residual(&self, points: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..points {
            let x = 10f64.powf(-1.0 + 2.0 * i as f64 / (points.max(2) - 1) as f64);
            worst = worst.max(self.reflection_residual(x)?);
        }
        Ok(worst)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let inner = self.evaluator.clone();
        let mut out = self.clone();
        out.evaluator = Arc::new(move |x| Ok(alpha * inner(x)?));
        out
    }

    /// h + amplitude·x^{-exponent}; breaks the reflection relation on purpose.
    pub fn perturbed(&self, amplitude: f64, exponent: f64) -> Self {
        let inner = self.evaluator.clone();
        let mut out = self.clone();
        out.evaluator = Arc::new(move |x| Ok(inner(x)? + amplitude * x.powf(-exponent)));
        out.label = format!("{}+perturbation", self.label);
        out
    }

    /// h̃(x) = √x·h(x), which satisfies h̃(1/x) = -ε h̃(x).
    pub fn sqrt_twisted(&self) -> Self {
        let inner = self.evaluator.clone();
        BoundaryTerm {
            evaluator: Arc::new(move |x| Ok(x.sqrt() * inner(x)?)),
            sign_eps: self.sign_eps,
            growth_exponent: self.growth_exponent - 0.5,
            reflection_power: self.reflection_power - 1.0,
            label: format!("sqrt*{}", self.label),
        }
    }
}

/// h(x) = f(x) - ε x^{-1} f(1/x) for real ε.
pub fn boundary_term(label: &str, f: RealFn, eps: C64, growth_exponent: f64) -> Result<BoundaryTerm> {
    if eps.im.abs() > 1e-12 || (eps.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("real boundary terms need ε = ±1, got {eps}")));
    }
    let e = eps.re;
    let g = f.clone();
    let h: RealFn = Arc::new(move |x| Ok(g(x)? - e / x * g(1.0 / x)?));
    Ok(BoundaryTerm::new(label, h, eps, growth_exponent))
}

/// f(x) = 2∑e^{-πn²x²}, the inverse Mellin transform of Λ_Q.
pub fn theta_tail(x: f64) -> f64 {
    let mut acc = 0.0;
    let mut n = 1.0f64;
    loop {
        let e = PI * n * n * x * x;
        if e > 745.0 {
            break;
        }
        let term = (-e).exp();
        acc += term;
        if term < 1e-18 * acc {
            break;
        }
        n += 1.0;
    }
    2.0 * acc
}

/// Boundary term of Λ_Q by direct theta summation; equals x^{-1} - 1.
pub fn lambda_q_boundary() -> BoundaryTerm {
    let f: RealFn = Arc::new(|x| {
        if x < 1e-3 {
            // the direct series needs ~1/x terms; use the transformed form
            Ok(1.0 / x - 1.0)
        } else {
            Ok(theta_tail(x))
        }
    });
    let mut h = boundary_term("Lambda_Q", f, C64::new(1.0, 0.0), 1.0).expect("ε = 1");
    h.growth_exponent = 1.0;
    h
}

/// Principal part ∑ C_m/(s-λ)^m of a pole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleDatum {
    pub location: C64,
    pub multiplicity: u32,
    /// C_1 .. C_m.
    pub coeffs: Vec<C64>,
}

impl PoleDatum {
    pub fn new(location: C64, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.last().map(|c| c.norm()) == Some(0.0) {
            return Err(Error::InvalidInput("leading principal coefficient must be nonzero".into()));
        }
        Ok(PoleDatum { location, multiplicity: coeffs.len() as u32, coeffs })
    }

    /// ∑_m C_m (-1)^{m-1}/(m-1)! log^{m-1}(x) x^{-λ}.
    pub fn term(&self, x: f64) -> C64 {
        let l = x.ln();
        let xl = (-self.location * l).exp();
        let mut acc = C64::new(0.0, 0.0);
        let mut w = 1.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                w *= -l / i as f64;
            }
            acc += c * w;
        }
        acc * xl
    }

    pub fn conj(&self) -> Self {
        PoleDatum {
            location: self.location.conj(),
            multiplicity: self.multiplicity,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }
}

/// Truncated pole expansion with the size of its imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionValue {
    pub value: f64,
    pub imag_residual: f64,
}

impl ExpansionValue {
    pub fn is_conjugate_closed(&self) -> bool {
        self.imag_residual <= 1e-9 * (1.0 + self.value.abs())
    }
}

/// ∑ over poles with |Im λ| ≤ cutoff.
pub fn pole_expansion(ledger: &[PoleDatum], x: f64, height_cutoff: f64) -> ExpansionValue {
    let mut acc = C64::new(0.0, 0.0);
    for p in ledger.iter().filter(|p| p.location.im.abs() <= height_cutoff) {
        acc += p.term(x);
    }
    ExpansionValue { value: acc.re, imag_residual: acc.im.abs() }
}

/// Contour settings for `residue_ledger`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueOptions {
    pub radius: f64,
    pub nodes: usize,
    /// Recompute with half the radius and require agreement.
    pub check_tol: Option<f64>,
    /// Coefficients below this are treated as zero.
    pub drop_below: f64,
}

impl Default for ResidueOptions {
    fn default() -> Self {
        ResidueOptions { radius: 1e-2, nodes: 64, check_tol: Some(1e-8), drop_below: 1e-10 }
    }
}

// C_m = (1/2πi)∮ Z(s)(s-λ)^{m-1} ds for m = 1..=order
fn circle_coeffs(
    f: &dyn Fn(C64) -> Result<C64>,
    center: C64,
    radius: f64,
    nodes: usize,
    order: usize,
) -> Result<Vec<C64>> {
    let mut out = vec![C64::new(0.0, 0.0); order];
    for k in 0..nodes {
        let th = 2.0 * PI * (k as f64 + 0.5) / nodes as f64;
        let e = C64::from_polar(1.0, th);
        let z = f(center + e * radius)?;
        let mut w = e * radius;
        for c in out.iter_mut() {
            *c += z * w;
            w *= e * radius;
        }
    }
    for c in out.iter_mut() {
        *c /= nodes as f64;
    }
    Ok(out)
}

fn ledger_entry(
    f: &dyn Fn(C64) -> Result<C64>,
    loc: C64,
    order: u32,
    opts: &ResidueOptions,
) -> Result<Option<PoleDatum>> {
    let order = order.max(1) as usize;
    let mut center = loc;
    let mut c = circle_coeffs(f, center, opts.radius, opts.nodes, order + 1)?;
    // a simple pole off the center shows up as C_2 = δ·C_1
    if order == 1 && c[0].norm() > opts.drop_below {
        let delta = c[1] / c[0];
        if delta.norm() > 1e-13 && delta.norm() < 0.5 * opts.radius {
            center += delta;
            c = circle_coeffs(f, center, opts.radius, opts.nodes, order + 1)?;
        }
    }
    c.truncate(order);
    if c.iter().all(|z| z.norm() < opts.drop_below) {
        return Ok(None);
    }
    if let Some(tol) = opts.check_tol {
        let c2 = circle_coeffs(f, center, 0.5 * opts.radius, opts.nodes, order)?;
        let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (a, b) in c.iter().zip(&c2) {
            let diff = (a - b).norm();
            if diff > tol * scale.max(opts.drop_below) {
                return Err(Error::QuadratureInconsistency { at: center, diff });
            }
        }
    }
    while c.last().is_some_and(|z| z.norm() < opts.drop_below) {
        c.pop();
    }
    if c.is_empty() {
        return Ok(None);
    }
    Ok(Some(PoleDatum { location: center, multiplicity: c.len() as u32, coeffs: c }))
}

/// Principal parts at the candidate poles by circular contour quadrature;
/// conjugate entries are added for candidates off the real axis.
pub fn residue_ledger_with(
    f: &(dyn Fn(C64) -> Result<C64> + Sync),
    candidates: &[(C64, u32)],
    opts: &ResidueOptions,
) -> Result<Vec<PoleDatum>> {
    for (i, a) in candidates.iter().enumerate() {
        for b in &candidates[i + 1..] {
            if (a.0 - b.0).norm() <= 2.0 * opts.radius {
                return Err(Error::OverlappingPoles(a.0, b.0));
            }
        }
    }
    let mut out: Vec<PoleDatum> = Vec::new();
    for &(loc, order) in candidates {
        let have_conj = loc.im != 0.0 && candidates.iter().any(|(l, _)| (*l - loc.conj()).norm() < opts.radius);
        if have_conj && loc.im < 0.0 {
            continue;
        }
        if let Some(p) = ledger_entry(f, loc, order, opts)? {
            if p.location.im != 0.0 {
                out.push(p.conj());
            }
            out.push(p);
        }
    }
    Ok(out)
}

pub fn residue_ledger(spec: &LFunctionSpec, candidates: &[(C64, u32)]) -> Result<Vec<PoleDatum>> {
    residue_ledger_with(&|s| completed_l(spec, s), candidates, &ResidueOptions::default())
}

/// Sorted positive ordinates valid up to `height_limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub ordinates: Vec<f64>,
    pub source: ZeroSource,
    pub height_limit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroSource {
    File,
    Computed,
}

impl ZeroList {
    pub fn new(ordinates: Vec<f64>, height_limit: f64, source: ZeroSource) -> Result<Self> {
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Unsorted { line: i + 2 });
            }
        }
        if ordinates.iter().any(|&g| !(g > 0.0) || g > height_limit) {
            return Err(Error::InvalidInput("ordinates must lie in (0, height_limit]".into()));
        }
        Ok(ZeroList { ordinates, source, height_limit })
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn count_below(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }
}

/// Parse a zeros file: one ordinate per line, '#' comments. A comment of the
/// form `# height=<T>` sets the height limit; otherwise the last ordinate does.
pub fn parse_zeros(text: &str) -> Result<ZeroList> {
    let mut ords = Vec::new();
    let mut height = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some(v) = c.trim().strip_prefix("height=") {
                height = Some(v.trim().parse::<f64>().map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?);
            }
            continue;
        }
        let g: f64 = line.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("not a number: '{line}'") })?;
        if !(g > 0.0) {
            return Err(Error::Parse { line: i + 1, msg: format!("ordinate must be positive, got {g}") });
        }
        if ords.last().is_some_and(|&p| g <= p) {
            return Err(Error::Unsorted { line: i + 1 });
        }
        ords.push(g);
    }
    let h = height.unwrap_or_else(|| ords.last().copied().unwrap_or(0.0));
    ZeroList::new(ords, h, ZeroSource::File)
}

pub fn load_zeros(path: &Path) -> Result<ZeroList> {
    parse_zeros(&std::fs::read_to_string(path)?)
}

const ZEROS_11A1: &str = include_str!("../data/zeros/11a1.txt");
const ZEROS_37A1: &str = include_str!("../data/zeros/37a1.txt");

/// Shipped ordinates of L(E, 1+iγ) for 11a1 and 37a1.
pub fn builtin_curve_zeros(label: &str) -> Result<ZeroList> {
    match label {
        "11a1" => parse_zeros(ZEROS_11A1),
        "37a1" => parse_zeros(ZEROS_37A1),
        _ => Err(Error::MissingZeroData { have: 0.0, need: f64::INFINITY }),
    }
}

// Λ_Q(1/2+it)e^{πt/4}, real on the critical line
fn rotated_xi(t: f64) -> Result<f64> {
    Ok((completed_riemann(C64::new(0.5, t))? * (PI * t / 4.0).exp()).re)
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a)?;
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Sign changes of `f` on a grid over (t0, t1], refined by bisection.
pub fn sign_change_roots<F: Fn(f64) -> Result<f64>>(f: F, t0: f64, t1: f64, step: f64, tol: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::new();
    let mut a = t0;
    let mut fa = f(a)?;
    while a < t1 {
        let b = (a + step).min(t1);
        let fb = f(b)?;
        if fa != 0.0 && (fa > 0.0) != (fb > 0.0) {
            roots.push(bisect(&f, a, b, tol)?);
        }
        a = b;
        fa = fb;
    }
    Ok(roots)
}

/// Number of zeros of ξ(s) = s(s-1)Λ_Q(s)/2 with 1 < Im s < T (none lie lower), by the
/// argument principle on the rectangle [-1, 2] × [1, T].
pub fn zeta_zero_count(height: f64) -> Result<usize> {
    let xi = |s: C64| -> Result<C64> { Ok(completed_riemann(s)? * s * (s - 1.0) * 0.5) };
    let corners = [C64::new(2.0, 1.0), C64::new(2.0, height), C64::new(-1.0, height), C64::new(-1.0, 1.0)];
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let base = 0.05 / (b - a).norm();
        let mut prev = xi(a)?;
        let mut u = 0.0;
        // shrink the step when the phase moves too far between samples
        while u < 1.0 {
            let mut du = base.min(1.0 - u);
            let next = loop {
                let next = xi(a + (b - a) * (u + du))?;
                let d = (next / prev).arg();
                if d.abs() < 0.5 || du < 1e-9 {
                    total += d;
                    break next;
                }
                du *= 0.25;
            };
            u += du;
            prev = next;
        }
    }
    Ok((total / (2.0 * PI)).round().max(0.0) as usize)
}

/// ζ zero ordinates up to `height_limit` (≤ 100), checked against the
/// argument-principle count.
pub fn zeta_zero_scan(height_limit: f64) -> Result<ZeroList> {
    if height_limit > 100.0 {
        return Err(Error::InvalidInput(format!("zeta_zero_scan is limited to height 100, got {height_limit}")));
    }
    let mut step = 0.1;
    loop {
        let roots = sign_change_roots(rotated_xi, 1.0, height_limit, step, 1e-10)?;
        let count = zeta_zero_count(height_limit)?;
        if roots.len() == count {
            return ZeroList::new(roots, height_limit, ZeroSource::Computed);
        }
        if step < 1e-3 {
            return Err(Error::NonConvergence(format!(
                "zero scan found {} sign changes but the argument principle gives {count}",
                roots.len()
            )));
        }
        step /= 4.0;
    }
}

/// c_γ = Λ_K(2iγ)Λ_K(1+2iγ) / (ζ_{K,∞}(1/2+iγ) ζ_K'(1/2+iγ)) from its parts.
pub fn c_gamma_from_parts(lambda_2ig: C64, lambda_1p2ig: C64, zeta_inf: C64, dzeta: C64) -> C64 {
    lambda_2ig * lambda_1p2ig / (zeta_inf * dzeta)
}

/// ζ_K'(s) by central difference, cross-checked with a 4-point stencil.
pub fn dedekind_derivative(s: C64, field: &QuadField) -> Result<C64> {
    let h = 1e-6;
    let f = |z: C64| -> Result<C64> { crate::lfunc::dedekind_zeta(z, field) };
    let (p1, m1) = (f(s + h)?, f(s - h)?);
    let central = (p1 - m1) / (2.0 * h);
    let (p2, m2) = (f(s + 2.0 * h)?, f(s - 2.0 * h)?);
    let stencil = (-p2 + p1 * 8.0 - m1 * 8.0 + m2) / (12.0 * h);
    if (central - stencil).norm() > 1e-5 * (1.0 + central.norm()) {
        return Err(Error::NonConvergence(format!("derivative at {s}: {central} vs {stencil}")));
    }
    Ok(stencil)
}

pub fn c_gamma_coefficient(field: &QuadField, gamma_ordinate: f64) -> Result<C64> {
    let rho = C64::new(0.5, gamma_ordinate);
    let z = crate::lfunc::dedekind_zeta(rho, field)?;
    if z.norm() >= 1e-6 {
        return Err(Error::NotAZero(gamma_ordinate, z.norm()));
    }
    let dz = dedekind_derivative(rho, field)?;
    if dz.norm() <= 1e-8 {
        return Err(Error::PossiblyMultipleZero(gamma_ordinate));
    }
    let two_ig = C64::new(0.0, 2.0 * gamma_ordinate);
    let zinf = log_zeta_infinity(rho, field)?.exp();
    Ok(c_gamma_from_parts(
        completed_dedekind(two_ig, field)?,
        completed_dedekind(two_ig + 1.0, field)?,
        zinf,
        dz,
    ))
}

/// Poles of Z_E with |Im λ| ≤ cutoff: 0, 1/2, 1 and λ = (1+iγ)/2 for the
/// zeros 1+iγ of L(E, s).
pub fn pole_ledger_for_z_e(curve: &EllipticCurve, zeros: &ZeroList, height_cutoff: f64) -> Result<Vec<PoleDatum>> {
    let spec = build_z_e(curve)?;
    pole_ledger_for_z_e_spec(&spec, zeros, height_cutoff)
}

pub fn pole_ledger_for_z_e_spec(spec: &LFunctionSpec, zeros: &ZeroList, height_cutoff: f64) -> Result<Vec<PoleDatum>> {
    pole_ledger_with_spectral(spec, zeros, height_cutoff, 1)
}

/// Structural poles of `spec` plus poles of order `order` at (1+iγ)/2.
pub fn pole_ledger_with_spectral(
    spec: &LFunctionSpec,
    zeros: &ZeroList,
    height_cutoff: f64,
    order: u32,
) -> Result<Vec<PoleDatum>> {
    if zeros.height_limit < 2.0 * height_cutoff {
        return Err(Error::MissingZeroData { have: zeros.height_limit, need: 2.0 * height_cutoff });
    }
    let f = |s: C64| completed_l(spec, s);
    let mut ledger = residue_ledger_with(&f, &spec.structural_poles, &ResidueOptions::default())?;
    let spectral: Vec<(C64, u32)> = zeros
        .ordinates
        .iter()
        .filter(|&&g| g <= 2.0 * height_cutoff)
        .map(|&g| (C64::new(0.5, 0.5 * g), order))
        .collect();
    // simple poles: fewer nodes suffice, the two-radius check still applies
    let nodes = if order == 1 { 32 } else { 64 };
    let opts = ResidueOptions { nodes, ..ResidueOptions::default() };
    ledger.extend(residue_ledger_with(&f, &spectral, &opts)?);
    Ok(ledger)
}

/// Poles of Z_K for K = Q with |Im λ| ≤ cutoff: the double pole at 1/2 and
/// the zeros 1/2 + iγ of ζ.
pub fn pole_ledger_for_z_k(zeros: &ZeroList, height_cutoff: f64) -> Result<Vec<PoleDatum>> {
    if zeros.height_limit < height_cutoff {
        return Err(Error::MissingZeroData { have: zeros.height_limit, need: height_cutoff });
    }
    let spec = build_z_k(&QuadField::rationals())?;
    let f = |s: C64| completed_l(&spec, s);
    let mut ledger = residue_ledger_with(&f, &spec.structural_poles, &ResidueOptions::default())?;
    let spectral: Vec<(C64, u32)> =
        zeros.ordinates.iter().filter(|&&g| g <= height_cutoff).map(|&g| (C64::new(0.5, g), 1)).collect();
    let opts = ResidueOptions { nodes: 32, ..ResidueOptions::default() };
    ledger.extend(residue_ledger_with(&f, &spectral, &opts)?);
    Ok(ledger)
}

/// `re_lambda,im_lambda,m,re_C1,im_C1,...`
pub fn write_ledger_csv<W: Write>(ledger: &[PoleDatum], mut out: W) -> Result<()> {
    let width = ledger.iter().map(|p| p.coeffs.len()).max().unwrap_or(1);
    let mut header = vec!["re_lambda".to_string(), "im_lambda".into(), "m".into()];
    for m in 1..=width {
        header.push(format!("re_C{m}"));
        header.push(format!("im_C{m}"));
    }
    writeln!(out, "{}", header.join(","))?;
    for p in ledger {
        let mut row = vec![format!("{:e}", p.location.re), format!("{:e}", p.location.im), p.multiplicity.to_string()];
        for c in &p.coeffs {
            row.push(format!("{:e}", c.re));
            row.push(format!("{:e}", c.im));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
