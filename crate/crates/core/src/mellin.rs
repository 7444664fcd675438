//! Inverse Mellin transforms along vertical lines, the theta and Bessel
//! series for boundary terms of Z_E and Z_E², half-Mellin transforms and the
//! Mellin–Carleman transform.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{boundary_term, BoundaryTerm};
use crate::error::{Error, Result};
use crate::lfunc::elliptic::dirichlet_convolve;
use crate::lfunc::{hasse_weil_coeffs, EllipticCurve, EvalFn, GammaFactor, LFunctionSpec};
use crate::meanper::{certify_mean_periodicity, log_grid, Convolutor};
use crate::quad;
use crate::specfun::{self, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContourRule {
    Trapezoid,
    TanhSinh,
}

/// The line Re s = c, truncated at |Im s| = T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub abscissa_c: f64,
    pub height_t: f64,
    pub node_count: usize,
    pub rule: ContourRule,
}

impl ContourSpec {
    pub fn new(abscissa_c: f64, height_t: f64, node_count: usize, rule: ContourRule) -> Result<Self> {
        if !(height_t > 0.0) || node_count == 0 || !abscissa_c.is_finite() {
            return Err(Error::InvalidInput("contour needs T > 0, nodes > 0 and finite c".into()));
        }
        Ok(ContourSpec { abscissa_c, height_t, node_count, rule })
    }

    /// Trapezoid line for an integrand decaying like |t|^power e^{-rate|t|},
    /// analytic in a strip of half-width `strip` around the line.
    pub fn for_decay(abscissa_c: f64, strip: f64, rate: f64, power: f64, tol: f64) -> Result<Self> {
        if !(rate > 0.0) {
            return Err(Error::DecayViolation(format!("no exponential decay on the line (rate {rate})")));
        }
        let l = (1.0 / tol).ln() + 3.0;
        let mut t = l / rate;
        for _ in 0..4 {
            t = (l + power.max(0.0) * t.max(1.0).ln()) / rate;
        }
        let h = (2.0 * PI * strip / (l + 3.0)).min(0.1);
        Self::new(abscissa_c, t, (t / h).ceil() as usize, ContourRule::Trapezoid)
    }

    /// Line to the right of every pole of `spec`.
    pub fn for_spec(spec: &LFunctionSpec, tol: f64) -> Result<Self> {
        let c = spec.center() + spec.pole_strip_halfwidth_w + 0.5;
        Self::for_decay(c, 0.5, spec.gamma.stirling_rate(), spec.gamma.stirling_power(c), tol)
    }

    /// Line to the right of every pole of the gamma factor.
    pub fn for_gamma(gamma: &GammaFactor, tol: f64) -> Result<Self> {
        let right = gamma.shifts.iter().map(|(l, m)| -m.re / l).fold(f64::NEG_INFINITY, f64::max);
        let c = if right.is_finite() { right + 1.0 } else { 1.0 };
        Self::for_decay(c, 1.0, gamma.stirling_rate(), gamma.stirling_power(c), tol)
    }

    /// Requires c > (d+1)/2 + w.
    pub fn check_for(&self, spec: &LFunctionSpec) -> Result<()> {
        let need = spec.center() + spec.pole_strip_halfwidth_w;
        if self.abscissa_c <= need {
            return Err(Error::Domain(format!("contour abscissa {} must exceed {need}", self.abscissa_c)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.height_t / self.node_count as f64
    }

    pub fn doubled(&self) -> Self {
        ContourSpec { node_count: 2 * self.node_count, ..*self }
    }
}

/// A transform value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinValue {
    pub value: f64,
    pub error: f64,
}

/// Samples of Z(c+it), 0 ≤ t ≤ T, for repeated inverse transforms. Assumes
/// Z(s̄) = conj Z(s), so the lower half of the line is not stored.
#[derive(Debug, Clone)]
pub struct LineSamples {
    c: f64,
    step: f64,
    values: Vec<C64>,
}

impl LineSamples {
    pub fn new(f: &(dyn Fn(C64) -> Result<C64> + Sync), contour: &ContourSpec) -> Result<Self> {
        let h = contour.step();
        let c = contour.abscissa_c;
        let values = (0..=contour.node_count)
            .into_par_iter()
            .map(|j| f(C64::new(c, j as f64 * h)))
            .collect::<Result<Vec<_>>>()?;
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonConvergence("non-finite value on the contour".into()));
        }
        Ok(LineSamples { c, step: h, values })
    }

    pub fn abscissa(&self) -> f64 {
        self.c
    }

    /// Z(c + i·j·step).
    pub fn node_value(&self, j: usize) -> C64 {
        self.values[j]
    }

    /// (1/2πi)∫ Z(s) x^{-s} ds by the trapezoid rule.
    pub fn eval(&self, x: f64) -> MellinValue {
        let l = x.ln();
        let xc = (-self.c * l).exp();
        let rot = C64::from_polar(1.0, -self.step * l);
        let mut phase = C64::new(xc, 0.0);
        let (mut fine, mut coarse, mut mass) = (0.0, 0.0, 0.0);
        for (j, v) in self.values.iter().enumerate() {
            let w = if j == 0 { 0.5 } else { 1.0 };
            let term = (v * phase).re * w;
            fine += term;
            if j % 2 == 0 {
                coarse += term;
            }
            mass += v.norm() * xc * w;
            phase *= rot;
            if j % 64 == 63 {
                // keep the recurrence from drifting
                phase = C64::from_polar(xc, -((j + 1) as f64) * self.step * l);
            }
        }
        let fine = fine * self.step / PI;
        let coarse = coarse * 2.0 * self.step / PI;
        let mass = mass * self.step / PI;
        let n = self.values.len() - 1;
        let m = (n / 10).max(1);
        let last = self.values[n].norm();
        let earlier = self.values[n - m].norm().max(last);
        let rate = if last > 0.0 { ((earlier / last).ln() / (m as f64 * self.step)).max(0.05) } else { 1.0 };
        let tail = last * xc / (PI * rate);
        // trapezoid errors square when the step halves
        let disc = (fine - coarse).abs();
        let disc = if mass > 0.0 { disc.min(disc * disc / mass) } else { disc };
        // rounding: up to 64 recurrence steps between phase resets
        MellinValue { value: fine, error: disc + tail + 64.0 * f64::EPSILON * mass }
    }
}

/// (1/2πi)∫_{(c)} f(s) x^{-s} ds; fails when the error estimate exceeds `tol`.
pub fn inverse_mellin(
    f: &(dyn Fn(C64) -> Result<C64> + Sync),
    x: f64,
    contour: &ContourSpec,
    tol: f64,
) -> Result<MellinValue> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("inverse Mellin transform needs x > 0, got {x}")));
    }
    let r = match contour.rule {
        ContourRule::Trapezoid => LineSamples::new(f, contour)?.eval(x),
        ContourRule::TanhSinh => {
            let c = contour.abscissa_c;
            let l = x.ln();
            let mut failed = None;
            let q = quad::tanh_sinh(
                |t| match f(C64::new(c, t)) {
                    Ok(v) => v * (-C64::new(c, t) * l).exp(),
                    Err(e) => {
                        failed.get_or_insert(e);
                        C64::new(0.0, 0.0)
                    }
                },
                0.0,
                contour.height_t,
                tol.max(1e-15),
            );
            if let Some(e) = failed {
                return Err(e);
            }
            MellinValue { value: q.value.re / PI, error: q.error / PI }
        }
    };
    if r.error > tol {
        return Err(Error::NonConvergence(format!("inverse Mellin at x={x}: error {:e} > {tol:e}", r.error)));
    }
    Ok(r)
}

pub fn inverse_mellin_spec(spec: &LFunctionSpec, x: f64, contour: &ContourSpec, tol: f64) -> Result<MellinValue> {
    contour.check_for(spec)?;
    inverse_mellin(&|s| crate::lfunc::completed_l(spec, s), x, contour, tol)
}

/// h(x) = f(x) - εx^{-1}f(1/x) with f sampled once on the contour.
pub fn contour_boundary(spec: &LFunctionSpec, contour: &ContourSpec, tol: f64) -> Result<BoundaryTerm> {
    contour.check_for(spec)?;
    let samples = Arc::new(LineSamples::new(&|s| crate::lfunc::completed_l(spec, s), contour)?);
    let f = move |x: f64| -> Result<f64> {
        let r = samples.eval(x);
        if r.error > tol {
            return Err(Error::NonConvergence(format!("inverse Mellin at x={x}: error {:e} > {tol:e}", r.error)));
        }
        Ok(r.value)
    };
    let growth = spec.center() + spec.pole_strip_halfwidth_w;
    let label = format!("h_{}", spec.label);
    boundary_term(&label, Arc::new(f), spec.sign_eps, growth)
}

/// κ(x), the inverse Mellin transform of γ(s).
pub fn kappa_kernel(gamma: &GammaFactor, x: f64, contour: &ContourSpec) -> Result<MellinValue> {
    inverse_mellin(&|s| gamma.eval(s), x, contour, 1e-8)
}

/// κ sampled once for many arguments.
pub fn kappa_samples(gamma: &GammaFactor, tol: f64) -> Result<LineSamples> {
    LineSamples::new(&|s| gamma.eval(s), &ContourSpec::for_gamma(gamma, tol)?)
}

/// Number of series terms kept and a bound for the dropped tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTruncation {
    pub n_max: usize,
    pub tail_bound: f64,
}

// first n whose Gaussian/exponential tail bound ∑_{m>n} m² e^{-α m^p} is below tol
fn truncation_for(alpha: f64, power: i32, tol: f64, available: usize) -> Result<SeriesTruncation> {
    let tail_from = |n: usize| -> f64 {
        let mut acc = 0.0;
        for m in n + 1..n + 200 {
            let mf = m as f64;
            let e = alpha * mf.powi(power) - 2.0 * mf.ln();
            if e > 745.0 {
                break;
            }
            acc += (-e).exp();
        }
        acc
    };
    // the tail bound is decreasing; locate the crossing by doubling and bisection
    let mut hi = 1usize;
    while tail_from(hi) > tol {
        hi *= 2;
        if hi > 4 * available.max(1) {
            return Err(Error::Truncation(format!("series needs more than {available} terms")));
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if tail_from(mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi > available {
        return Err(Error::Truncation(format!("series needs {hi} terms, have {available}")));
    }
    Ok(SeriesTruncation { n_max: hi, tail_bound: tail_from(hi) })
}

/// 2∑ b_n [exp(-a n² e^{-2t}) + ε e^t exp(-a n² e^{2t})].
pub fn theta_boundary(coeffs: &[f64], a: f64, eps: f64, t: f64, tol: f64) -> Result<(f64, SeriesTruncation)> {
    theta_boundary_derivative(coeffs, a, eps, t, 0, tol)
}

// P_k with d^k/dt^k exp(-z(t)) = P_k(z) e^{-z}, z = a n² e^{-2t}; Q_k likewise for e^t exp(-a n² e^{2t})
fn derivative_polys(k: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut p = vec![vec![1.0]];
    let mut q = vec![vec![1.0]];
    for i in 0..k {
        // P_{k+1} = 2z(P - P'),  Q_{k+1} = Q + 2z(Q' - Q)
        let pk = &p[i];
        let mut np = vec![0.0; pk.len() + 1];
        for (j, &c) in pk.iter().enumerate() {
            np[j + 1] += 2.0 * c;
            if j > 0 {
                np[j] -= 2.0 * j as f64 * c;
            }
        }
        let qk = &q[i];
        let mut nq = vec![0.0; qk.len() + 1];
        for (j, &c) in qk.iter().enumerate() {
            nq[j] += c;
            nq[j + 1] -= 2.0 * c;
            if j > 0 {
                nq[j] += 2.0 * j as f64 * c;
            }
        }
        p.push(np);
        q.push(nq);
    }
    (p, q)
}

fn poly(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &x| acc * z + x)
}

/// k-th t-derivative of the theta boundary series, differentiated term by term.
pub fn theta_boundary_derivative(
    coeffs: &[f64],
    a: f64,
    eps: f64,
    t: f64,
    k: usize,
    tol: f64,
) -> Result<(f64, SeriesTruncation)> {
    let available = coeffs.len().saturating_sub(1);
    let alpha = a * (-2.0 * t.abs()).exp();
    // polynomial prefactors grow like z^k; fold them into the tolerance
    let trunc = truncation_for(alpha, 2, tol / (1.0 + (2.0f64).powi(k as i32) * 1e3), available)
        .or_else(|e| if coeffs.iter().all(|&c| c == 0.0) { Ok(SeriesTruncation { n_max: 0, tail_bound: 0.0 }) } else { Err(e) })?;
    let (p, q) = derivative_polys(k);
    let (pk, qk) = (&p[k], &q[k]);
    let et = t.exp();
    let mut acc = 0.0;
    for n in 1..=trunc.n_max.min(available) {
        let b = coeffs[n];
        if b == 0.0 {
            continue;
        }
        let an2 = a * (n * n) as f64;
        let z1 = an2 / (et * et);
        let z2 = an2 * et * et;
        let first = if z1 < 745.0 { poly(pk, z1) * (-z1).exp() } else { 0.0 };
        let second = if z2 < 745.0 { poly(qk, z2) * et * (-z2).exp() } else { 0.0 };
        acc += b * (first + eps * second);
    }
    Ok((2.0 * acc, trunc))
}

/// 4∑ β_n [K_0(2π n q e^{-t}) - e^t K_0(2π n q e^t)].
pub fn bessel_boundary(coeffs: &[f64], q: f64, t: f64, tol: f64) -> Result<(f64, SeriesTruncation)> {
    let available = coeffs.len().saturating_sub(1);
    // K_0(x) ≤ √(π/2x) e^{-x} ≤ e^{-x} for x ≥ 2
    let alpha = 2.0 * PI * q * (-t.abs()).exp();
    let trunc = truncation_for(alpha, 1, tol / 10.0, available)
        .or_else(|e| if coeffs.iter().all(|&c| c == 0.0) { Ok(SeriesTruncation { n_max: 0, tail_bound: 0.0 }) } else { Err(e) })?;
    let et = t.exp();
    let mut acc = 0.0;
    for n in 1..=trunc.n_max.min(available) {
        let b = coeffs[n];
        if b == 0.0 {
            continue;
        }
        let x = 2.0 * PI * n as f64 * q;
        acc += b * (specfun::bessel_k0(x / et)? - et * specfun::bessel_k0(x * et)?);
    }
    Ok((4.0 * acc, trunc))
}

/// Series data for the boundary terms of Z_E and Z_E².
#[derive(Debug, Clone)]
pub struct EllipticBoundary {
    pub label: String,
    pub conductor: f64,
    pub omega: f64,
    /// b_n = ∑_{d|n} c_d.
    pub theta_coeffs: Arc<Vec<f64>>,
    /// (b∗b)_n = ∑_{d|n} c_d σ_0∗… coefficients of (ζ(s)ζ_E(2s))².
    pub bessel_coeffs: Arc<Vec<f64>>,
    pub tol: f64,
}

impl EllipticBoundary {
    pub const DEPTH: usize = 20_000;

    pub fn new(curve: &EllipticCurve) -> Result<Self> {
        Self::with_depth(curve, Self::DEPTH)
    }

    pub fn with_depth(curve: &EllipticCurve, depth: usize) -> Result<Self> {
        let c = hasse_weil_coeffs(curve, depth)?;
        let ci: Vec<i64> = c.values.iter().map(|&x| x as i64).collect();
        let ones: Vec<i64> = (0..=depth).map(|i| (i > 0) as i64).collect();
        let b = dirichlet_convolve(&ones, &ci);
        let bb = dirichlet_convolve(&b, &b);
        Ok(EllipticBoundary {
            label: curve.label.clone(),
            conductor: curve.conductor as f64,
            omega: curve.sign_omega as f64,
            theta_coeffs: Arc::new(b.iter().map(|&x| x as f64).collect()),
            bessel_coeffs: Arc::new(bb.iter().map(|&x| x as f64).collect()),
            tol: 1e-17,
        })
    }

    /// H_E(t).
    pub fn theta(&self, t: f64) -> Result<f64> {
        self.theta_derivative(t, 0)
    }

    /// H_E^{(k)}(t).
    pub fn theta_derivative(&self, t: f64, k: usize) -> Result<f64> {
        if k > 6 {
            return Err(Error::InvalidInput(format!("derivative order {k} exceeds 6")));
        }
        let a = PI * self.conductor * self.conductor;
        Ok(theta_boundary_derivative(&self.theta_coeffs, a, self.omega, t, k, self.tol)?.0)
    }

    /// h_E^{(2)}(e^{-t}).
    pub fn bessel2(&self, t: f64) -> Result<f64> {
        Ok(bessel_boundary(&self.bessel_coeffs, self.conductor * self.conductor, t, self.tol)?.0)
    }

    /// H_E as a boundary term in x = e^{-t}.
    pub fn theta_term(&self) -> BoundaryTerm {
        let me = self.clone();
        BoundaryTerm::new(
            &format!("H_E_{}", self.label),
            Arc::new(move |x| me.theta(-x.ln())),
            C64::new(-self.omega, 0.0),
            1.1,
        )
    }

    pub fn bessel2_term(&self) -> BoundaryTerm {
        let me = self.clone();
        BoundaryTerm::new(&format!("h2_E_{}", self.label), Arc::new(move |x| me.bessel2(-x.ln())), C64::new(1.0, 0.0), 1.1)
    }
}

pub fn theta_boundary_e(curve: &EllipticCurve, t: f64, trunc: Option<SeriesTruncation>) -> Result<f64> {
    let eb = EllipticBoundary::with_depth(curve, trunc.map_or(EllipticBoundary::DEPTH, |s| s.n_max))?;
    eb.theta(t)
}

pub fn bessel_boundary_e2(curve: &EllipticCurve, t: f64, trunc: Option<SeriesTruncation>) -> Result<f64> {
    let eb = EllipticBoundary::with_depth(curve, trunc.map_or(EllipticBoundary::DEPTH, |s| s.n_max))?;
    eb.bessel2(t)
}

/// ω(s) = ∫_0^1 h(x) x^{s-1} dx = ∫_0^∞ H(t) e^{-st} dt.
pub fn half_mellin(h: &BoundaryTerm, s: C64, tol: f64) -> Result<C64> {
    let gap = s.re - h.growth_exponent;
    if gap <= 0.0 {
        return Err(Error::Divergence { re_s: s.re, threshold: h.growth_exponent });
    }
    let t_max = 745.0 / gap;
    let mut acc = C64::new(0.0, 0.0);
    let mut t0 = 0.0;
    let width = (1.0 / gap).min(1.0);
    let mut failed = None;
    while t0 < t_max {
        let t1 = t0 + width;
        let r = quad::adaptive(
            |t| match h.eval_t(t) {
                Ok(v) => (-s * t).exp() * v,
                Err(e) => {
                    failed.get_or_insert(e);
                    C64::new(0.0, 0.0)
                }
            },
            t0,
            t1,
            tol * 1e-2,
            1e-14,
        );
        if let Some(e) = failed {
            return Err(e);
        }
        acc += r.value;
        // remaining mass ≲ |H(t1)e^{-st1}| / gap when |H| grows no faster than e^{gt}
        let edge = (h.eval_t(t1)?.abs() + h.eval_t(t1 - 0.5 * width)?.abs()) * (-s.re * t1).exp();
        t0 = t1;
        if edge / gap < tol * acc.norm().max(1e-300) || (edge == 0.0 && r.value.norm() == 0.0 && t0 > 5.0) {
            break;
        }
    }
    Ok(acc)
}

/// Options for `MellinCarleman`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub panel_width: f64,
    pub order: usize,
    /// Certification threshold on the convolution residual ratio.
    pub certify_threshold: f64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { panel_width: 0.05, order: 20, certify_threshold: 1e-5 }
    }
}

/// MC(h)(s) = M(v∗h⁺)(s) / M(v)(s), with v∗h⁺ tabulated once.
#[derive(Clone)]
pub struct MellinCarleman {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    g: Vec<f64>,
    mellin_v: EvalFn,
    scale: f64,
}

fn gl_grid(a: f64, b: f64, width: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = quad::gauss_legendre(order);
    let (x, w) = (&rule.0, &rule.1);
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let hw = 0.5 * (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for k in 0..panels {
        let mid = a + (2 * k + 1) as f64 * hw;
        for (xi, wi) in x.iter().zip(w) {
            nodes.push(mid + hw * xi);
            weights.push(hw * wi);
        }
    }
    (nodes, weights)
}

impl MellinCarleman {
    pub fn new(h: &BoundaryTerm, v: &Convolutor, opts: &McOptions) -> Result<Self> {
        let report = certify_mean_periodicity(v, h, &log_grid(0.1, 10.0, 9))?;
        if !(report.ratio <= opts.certify_threshold) {
            return Err(Error::UncertifiedConvolutor(report.ratio));
        }
        let (a, b) = v.log_support();
        // v∗h⁺ vanishes (to working precision) outside [a, b] in log x
        let (nodes, weights) = gl_grid(a, b, opts.panel_width, opts.order);
        let (wm, wm_w) = gl_grid(a - b, 0.0, opts.panel_width, opts.order);
        let (wp, wp_w) = gl_grid(0.0, b - a, opts.panel_width, opts.order);
        let hm: Vec<f64> = wm.iter().map(|&w| h.eval(w.exp())).collect::<Result<_>>()?;
        let hp: Vec<f64> = wp.iter().map(|&w| h.eval(w.exp())).collect::<Result<_>>()?;
        // x ≥ 1: ∫_{y<1} v(x/y)h(y)dy/y;  x < 1: -∫_{y>1} v(x/y)h(y)dy/y
        let g: Vec<f64> = nodes
            .par_iter()
            .map(|&u| {
                let (ws, ww, hv, sign) = if u >= 0.0 { (&wm, &wm_w, &hm, 1.0) } else { (&wp, &wp_w, &hp, -1.0) };
                let mut acc = 0.0;
                for ((w, q), hw) in ws.iter().zip(ww).zip(hv) {
                    let vv = v.eval_log(u - w);
                    if vv != 0.0 {
                        acc += q * vv * hw;
                    }
                }
                sign * acc
            })
            .collect();
        let scale = g.iter().zip(&weights).map(|(g, w)| g.abs() * w).sum::<f64>();
        Ok(MellinCarleman { nodes, weights, g, mellin_v: v.mellin.clone(), scale })
    }

    /// M(v∗h⁺)(s).
    pub fn numerator(&self, s: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for ((u, w), g) in self.nodes.iter().zip(&self.weights).zip(&self.g) {
            acc += (s * *u).exp() * (w * g);
        }
        acc
    }

    pub fn eval(&self, s: C64) -> Result<C64> {
        let den = (self.mellin_v)(s)?;
        if den.norm() < 1e-12 * self.scale.max(1e-300) {
            return Err(Error::ZeroDenominator(s));
        }
        Ok(self.numerator(s) / den)
    }
}

pub fn mellin_carleman(h: &BoundaryTerm, v: &Convolutor, s: C64) -> Result<C64> {
    MellinCarleman::new(h, v, &McOptions::default())?.eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_polys_match_first_derivative() {
        let (p, q) = derivative_polys(1);
        assert_eq!(p[1], vec![0.0, 2.0]);
        assert_eq!(q[1], vec![1.0, -2.0]);
    }
}
