//! Convolutors, multiplicative convolution, numerical certification of
//! v ∗ h = 0, and the explicit summation formula.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryTerm, PoleDatum};
use crate::error::{Error, Result};
use crate::lfunc::builders::build_lambda_e;
use crate::lfunc::elliptic::DEFAULT_DEPTH;
use crate::lfunc::{completed_l, completed_riemann, EllipticCurve, EvalFn, LFunctionSpec};
use crate::mellin::{kappa_samples, ContourSpec, LineSamples, MellinValue};
use crate::quad::{self, ChebPanels};
use crate::specfun::C64;

const PANEL: f64 = 0.05;
const ORDER: usize = 20;

/// A rapidly decaying v on (0, ∞) given by its Mellin transform V.
#[derive(Clone)]
pub struct Convolutor {
    pub label: String,
    pub mellin: EvalFn,
    pub decay_class: bool,
    samples: Option<Arc<LineSamples>>,
    interp: Arc<ChebPanels>,
    // v(x) = x^weight · (inverse transform of the samples)
    weight: f64,
}

impl fmt::Debug for Convolutor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Convolutor").field("label", &self.label).field("support", &self.log_support()).finish()
    }
}

impl Convolutor {
    /// v(x) = (1/2πi)∫_{(c)} V(s) x^{-s} ds for an entire V.
    pub fn from_mellin(label: &str, mellin: EvalFn, contour: &ContourSpec) -> Result<Self> {
        let m = mellin.clone();
        let samples = LineSamples::new(&move |s| m(s), contour)?;
        let first = samples_abs(&samples, 0);
        let last = samples_abs(&samples, contour.node_count);
        let top = (0..=contour.node_count).map(|j| samples_abs(&samples, j)).fold(0.0, f64::max);
        if top == 0.0 {
            return Err(Error::InvalidInput("convolutor is identically zero".into()));
        }
        // sampled line decay must beat |t|^{-1.1}
        let decay_class = last * contour.height_t.powf(1.1) <= 1e-3 * top.max(first);
        if !decay_class {
            return Err(Error::DecayViolation(format!("|V| = {last:e} at height {}", contour.height_t)));
        }
        let v = |u: f64| samples.eval(u.exp()).value;
        let vmax = (-20..=20).map(|i| v(0.05 * i as f64).abs()).fold(0.0, f64::max);
        if vmax == 0.0 {
            return Err(Error::InvalidInput("convolutor is identically zero".into()));
        }
        let edge = |dir: f64| -> f64 {
            let mut u: f64 = 0.0;
            let mut quiet = 0;
            while quiet < 3 && u.abs() < 8.0 {
                u += dir * 0.05;
                if v(u).abs() < 1e-14 * vmax {
                    quiet += 1;
                } else {
                    quiet = 0;
                }
            }
            u
        };
        let (a, b) = (edge(-1.0), edge(1.0));
        let panels = ((b - a) / 0.05).ceil() as usize;
        let interp = ChebPanels::new(v, a, b, panels, 24);
        Ok(Convolutor {
            label: label.to_string(),
            mellin,
            decay_class,
            samples: Some(Arc::new(samples)),
            interp: Arc::new(interp),
            weight: 0.0,
        })
    }

    /// Range of log x outside which v is negligible.
    pub fn log_support(&self) -> (f64, f64) {
        self.interp.range()
    }

    /// v(e^u) from the interpolant, zero outside the support.
    pub fn eval_log(&self, u: f64) -> f64 {
        match self.interp.eval(u) {
            Some(v) => v * (self.weight * u).exp(),
            None => 0.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_log(x.ln())
    }

    /// v(x) straight from the contour samples; the interpolant for
    /// convolutors built from a function.
    pub fn eval_contour(&self, x: f64) -> MellinValue {
        match &self.samples {
            Some(samples) => {
                let r = samples.eval(x);
                let w = x.powf(self.weight);
                MellinValue { value: r.value * w, error: r.error * w }
            }
            None => MellinValue { value: self.eval(x), error: 0.0 },
        }
    }

    /// A convolutor given directly as a function, negligible outside
    /// [a, b] in log x; V is computed by quadrature.
    pub fn from_function<F>(label: &str, f: F, log_support: (f64, f64)) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        let (a, b) = log_support;
        if !(b > a) {
            return Err(Error::Support(format!("[{a}, {b}] in log x")));
        }
        let g = |u: f64| f(u.exp());
        let peak = (0..=400).map(|i| g(a + (b - a) * i as f64 / 400.0).abs()).fold(0.0, f64::max);
        if peak == 0.0 {
            return Err(Error::InvalidInput("convolutor is identically zero".into()));
        }
        let decay_class = g(a).abs().max(g(b).abs()) <= 1e-14 * peak;
        if !decay_class {
            return Err(Error::DecayViolation(format!("v is not negligible at the ends of [{a}, {b}]")));
        }
        let interp = Arc::new(ChebPanels::new(g, a, b, ((b - a) / PANEL).ceil() as usize, 24));
        let it = interp.clone();
        let mellin: EvalFn = Arc::new(move |s: C64| {
            Ok(quad::gauss_panels(|u| (s * u).exp() * it.eval(u).unwrap_or(0.0), a, b, ((b - a) / PANEL).ceil() as usize, ORDER))
        });
        Ok(Convolutor { label: label.to_string(), mellin, decay_class, samples: None, interp, weight: 0.0 })
    }

    /// sup |v(x)| x^m on the support, for m in -5..=5.
    pub fn seminorms(&self) -> Vec<f64> {
        let (a, b) = self.log_support();
        (-5..=5)
            .map(|m| {
                (0..=400)
                    .map(|i| {
                        let u = a + (b - a) * i as f64 / 400.0;
                        (self.eval_log(u) * (m as f64 * u).exp()).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// x ↦ √x·v(x), whose Mellin transform is V(s + 1/2).
    pub fn sqrt_twisted(&self) -> Self {
        let m = self.mellin.clone();
        let mut out = self.clone();
        out.mellin = Arc::new(move |s| m(s + 0.5));
        out.weight += 0.5;
        out.label = format!("sqrt*{}", self.label);
        out
    }
}

fn samples_abs(s: &LineSamples, j: usize) -> f64 {
    s.node_value(j).norm()
}

/// V(s) = (2s-1)s²(s-1)²Λ(E,2s)·(s(1-s))^k.
pub fn convolutor_v_mellin(curve: &EllipticCurve, damping_k: u32) -> Result<EvalFn> {
    let lambda_e = build_lambda_e(curve, DEFAULT_DEPTH)?;
    Ok(Arc::new(move |s: C64| {
        let p = (s * 2.0 - 1.0) * s * s * (s - 1.0) * (s - 1.0) * (s * (-s + 1.0)).powu(damping_k);
        Ok(p * completed_l(&lambda_e, s * 2.0)?)
    }))
}

/// The convolutor of Z_E: inverse Mellin transform of V on Re s = 1/2.
pub fn build_convolutor_v(curve: &EllipticCurve, contour: Option<ContourSpec>, damping_k: u32) -> Result<Convolutor> {
    let mellin = convolutor_v_mellin(curve, damping_k)?;
    // Γ_C(2s) decays like e^{-π|t|}; the polynomial adds 5 + 2k powers
    let contour = match contour {
        Some(c) => c,
        None => ContourSpec::for_decay(0.5, 1.0, PI, 5.5 + 2.0 * damping_k as f64, 1e-16)?,
    };
    Convolutor::from_mellin(&format!("v_{}", curve.label), mellin, &contour)
}

/// V₂(s) = (2s-1)²s⁴(s-1)⁴Λ(E,2s)²·(s(1-s))^k, the convolutor of Z_E².
pub fn convolutor_v2_mellin(curve: &EllipticCurve, damping_k: u32) -> Result<EvalFn> {
    let lambda_e = build_lambda_e(curve, DEFAULT_DEPTH)?;
    Ok(Arc::new(move |s: C64| {
        let p = (s * 2.0 - 1.0) * s * s * (s - 1.0) * (s - 1.0);
        Ok(p * p * completed_l(&lambda_e, s * 2.0)?.powu(2) * (s * (-s + 1.0)).powu(damping_k))
    }))
}

pub fn build_convolutor_v2(curve: &EllipticCurve, contour: Option<ContourSpec>, damping_k: u32) -> Result<Convolutor> {
    let mellin = convolutor_v2_mellin(curve, damping_k)?;
    let contour = match contour {
        Some(c) => c,
        None => ContourSpec::for_decay(0.5, 1.0, 2.0 * PI, 11.0 + 2.0 * damping_k as f64, 1e-16)?,
    };
    Convolutor::from_mellin(&format!("v2_{}", curve.label), mellin, &contour)
}

/// Which coefficients multiply W(n²x/N²) in the series form of v₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesReading {
    /// (a∗a)_n, the coefficients of L(E,s)².
    DirichletSquare,
    /// a_n, the coefficients of L(E,s).
    Plain,
}

/// v₂(x) = ∑ b_n W(n²x/N²) with W the inverse Mellin transform of
/// (2s-1)²s⁴(s-1)⁴((2π)^{-2s}Γ(2s))², on the line Re s = 3/2.
pub fn convolutor_v2_series(curve: &EllipticCurve, xs: &[f64], reading: SeriesReading) -> Result<Vec<f64>> {
    let g = crate::lfunc::GammaFactor::gamma_c();
    let w_mellin = move |s: C64| -> Result<C64> {
        let p = (s * 2.0 - 1.0) * s * s * (s - 1.0) * (s - 1.0);
        Ok(p * p * g.eval(s * 2.0)?.powu(2))
    };
    let contour = ContourSpec::for_decay(1.5, 1.0, 2.0 * PI, 15.0, 1e-16)?;
    let w = LineSamples::new(&w_mellin, &contour)?;
    let n2 = (curve.conductor * curve.conductor) as f64;
    let xmin = xs.iter().copied().fold(f64::INFINITY, f64::min);
    if !(xmin > 0.0) {
        return Err(Error::Domain("series form needs x > 0".into()));
    }
    // W(y) decays like e^{-4πy^{1/4}} times a degree-10 polynomial
    let y_max = (120.0 / (4.0 * PI)).powi(4);
    let n_max = (y_max * n2 / xmin).sqrt().ceil() as usize + 1;
    let a = crate::lfunc::elliptic::ec_an_integers(curve, n_max)?;
    let b = match reading {
        SeriesReading::Plain => a.to_vec(),
        SeriesReading::DirichletSquare => crate::lfunc::elliptic::dirichlet_convolve(&a, &a),
    };
    Ok(xs
        .iter()
        .map(|&x| (1..=n_max).map(|n| b[n] as f64 * w.eval((n * n) as f64 * x / n2).value).sum())
        .collect())
}

/// Convolutor of Λ_Q: V(s) = s(s-1)Λ_Q(s)·(s(1-s))^{k+1}.
///
/// s(s-1)Λ_Q(s) alone is nonzero at 0 and 1, so at least one damping factor
/// is needed for V to vanish at the poles of Λ_Q.
pub fn lambda_q_convolutor(damping_k: u32) -> Result<Convolutor> {
    let mellin: EvalFn = Arc::new(move |s: C64| {
        Ok(s * (s - 1.0) * (s * (-s + 1.0)).powu(damping_k + 1) * completed_riemann(s)?)
    });
    let contour = ContourSpec::for_decay(0.5, 1.0, PI / 4.0, 4.0 + 2.0 * damping_k as f64, 1e-16)?;
    Convolutor::from_mellin("v_Lambda_Q", mellin, &contour)
}

/// n points spaced evenly in log x over [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

/// (v∗h)(x) and ∫|v(x/y)h(y)|dy/y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionValue {
    pub value: f64,
    pub abs_integral: f64,
}

fn convolve_log<F: Fn(f64) -> Result<(f64, f64)>>(integrand: F, a: f64, b: f64, split: Option<f64>) -> Result<ConvolutionValue> {
    let mut cuts = vec![a];
    if let Some(c) = split.filter(|c| *c > a && *c < b) {
        cuts.push(c);
    }
    cuts.push(b);
    let rule = quad::gauss_legendre(ORDER);
    let (mut value, mut abs, mut peak): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for w in cuts.windows(2) {
        let panels = ((w[1] - w[0]) / PANEL).ceil().max(1.0) as usize;
        let hw = 0.5 * (w[1] - w[0]) / panels as f64;
        for k in 0..panels {
            let mid = w[0] + (2 * k + 1) as f64 * hw;
            for (x, q) in rule.0.iter().zip(&rule.1) {
                let (vv, hh) = integrand(mid + hw * x)?;
                let p = vv * hh;
                value += hw * q * p;
                abs += hw * q * p.abs();
                peak = peak.max(p.abs());
            }
        }
    }
    let (va, ha) = integrand(a)?;
    let (vb, hb) = integrand(b)?;
    let ends = (va * ha).abs().max((vb * hb).abs());
    if peak > 0.0 && ends > 1e-8 * peak {
        return Err(Error::EnvelopeViolation(format!("integrand {ends:e} at the window ends (peak {peak:e})")));
    }
    Ok(ConvolutionValue { value, abs_integral: abs })
}

/// (v ∗ h)(x) = ∫ v(x/y) h(y) dy/y, integrated over y.
pub fn mult_convolve_full(v: &Convolutor, h: &BoundaryTerm, x: f64) -> Result<ConvolutionValue> {
    let u = x.ln();
    let (a, b) = v.log_support();
    convolve_log(|w| Ok((v.eval_log(u - w), h.eval(w.exp())?)), u - b, u - a, Some(0.0))
}

pub fn mult_convolve(v: &Convolutor, h: &BoundaryTerm, x: f64) -> Result<f64> {
    Ok(mult_convolve_full(v, h, x)?.value)
}

/// The same convolution integrated over z = x/y.
pub fn mult_convolve_swapped(v: &Convolutor, h: &BoundaryTerm, x: f64) -> Result<f64> {
    let u = x.ln();
    let (a, b) = v.log_support();
    Ok(convolve_log(|r| Ok((v.eval_log(r), h.eval((u - r).exp())?)), a, b, Some(u))?.value)
}

/// Residuals of v ∗ h over a grid, relative to the size of the integrals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub label: String,
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub scale: f64,
    pub ratio: f64,
    pub pass: bool,
}

pub const CERTIFY_THRESHOLD: f64 = 1e-5;

pub fn certify_mean_periodicity(v: &Convolutor, h: &BoundaryTerm, grid: &[f64]) -> Result<CertificationReport> {
    let mut residuals = Vec::with_capacity(grid.len());
    let mut scale: f64 = 0.0;
    for &x in grid {
        let c = mult_convolve_full(v, h, x)?;
        residuals.push(c.value);
        scale = scale.max(c.abs_integral);
    }
    let worst = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let ratio = if scale > 0.0 { worst / scale } else { 0.0 };
    Ok(CertificationReport {
        label: format!("{} * {}", v.label, h.label),
        grid: grid.to_vec(),
        residuals,
        scale,
        ratio,
        pass: ratio <= CERTIFY_THRESHOLD,
    })
}

/// Smooth compactly supported test functions on (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    /// amplitude·exp(-1/(1-u²)), u the affine image of log x in [-1, 1].
    Bump { lo: f64, hi: f64, amplitude: f64 },
    /// A Gaussian in log x times the bump window.
    TruncatedGaussian { lo: f64, hi: f64, center: f64, width: f64, amplitude: f64 },
    Zero,
}

impl TestFunction {
    pub fn support(&self) -> Result<Option<(f64, f64)>> {
        let (lo, hi) = match *self {
            TestFunction::Bump { lo, hi, .. } | TestFunction::TruncatedGaussian { lo, hi, .. } => (lo, hi),
            TestFunction::Zero => return Ok(None),
        };
        if !(lo > 0.0) || !hi.is_finite() || !(hi > lo) {
            return Err(Error::Support(format!("[{lo}, {hi}]")));
        }
        Ok(Some((lo, hi)))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let window = |lo: f64, hi: f64| -> f64 {
            let (a, b) = (lo.ln(), hi.ln());
            let u = (2.0 * x.ln() - a - b) / (b - a);
            if u.abs() >= 1.0 { 0.0 } else { (-1.0 / (1.0 - u * u)).exp() }
        };
        match *self {
            TestFunction::Bump { lo, hi, amplitude } => amplitude * window(lo, hi),
            TestFunction::TruncatedGaussian { lo, hi, center, width, amplitude } => {
                let d = (x.ln() - center) / width;
                amplitude * (-0.5 * d * d).exp() * window(lo, hi)
            }
            TestFunction::Zero => 0.0,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        match *self {
            TestFunction::Bump { lo, hi, amplitude } => TestFunction::Bump { lo, hi, amplitude: amplitude * c },
            TestFunction::TruncatedGaussian { lo, hi, center, width, amplitude } => {
                TestFunction::TruncatedGaussian { lo, hi, center, width, amplitude: amplitude * c }
            }
            TestFunction::Zero => TestFunction::Zero,
        }
    }

    /// M(φ)^{(k)}(λ) = ∫ φ(x) log^k(x) x^{λ-1} dx.
    pub fn mellin_derivative(&self, lambda: C64, k: u32, panels: usize) -> Result<C64> {
        let Some((lo, hi)) = self.support()? else { return Ok(C64::new(0.0, 0.0)) };
        Ok(quad::gauss_panels(
            |u| (lambda * u).exp() * (self.eval(u.exp()) * u.powi(k as i32)),
            lo.ln(),
            hi.ln(),
            panels,
            ORDER,
        ))
    }
}

/// Both sides of the explicit formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitFormula {
    pub lhs: f64,
    pub rhs: f64,
    pub terms: usize,
}

impl ExplicitFormula {
    pub fn difference(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// ∑_λ ∑_m C_m(λ)/(m-1)!·M(φ)^{(m-1)}(λ) against
/// ∑_m d_m[(φ∗κ)(m) - ε(φ^∨∗κ)(m)] with φ^∨(x) = x^{-1}φ(1/x).
pub fn explicit_formula_check(spec: &LFunctionSpec, phi: &TestFunction, ledger: &[PoleDatum]) -> Result<ExplicitFormula> {
    explicit_formula_check_with(spec, phi, ledger, 64)
}

pub fn explicit_formula_check_with(
    spec: &LFunctionSpec,
    phi: &TestFunction,
    ledger: &[PoleDatum],
    panels: usize,
) -> Result<ExplicitFormula> {
    if spec.sign_eps.im.abs() > 1e-12 {
        return Err(Error::InvalidInput("explicit formula needs a self-dual spec with real ε".into()));
    }
    let Some((lo, hi)) = phi.support()? else { return Ok(ExplicitFormula { lhs: 0.0, rhs: 0.0, terms: 0 }) };
    let mut lhs = C64::new(0.0, 0.0);
    for p in ledger {
        let mut fact = 1.0;
        for (i, c) in p.coeffs.iter().enumerate() {
            if i > 0 {
                fact *= i as f64;
            }
            lhs += c * phi.mellin_derivative(p.location, i as u32, panels)? / fact;
        }
    }
    let kappa = kappa_samples(&spec.gamma, 1e-16)?;
    let k = |y: f64| kappa.eval(y).value;
    let (a, b) = (lo.ln(), hi.ln());
    let eps = spec.sign_eps.re;
    let mut rhs = 0.0;
    let mut quiet = 0;
    let mut m = 1;
    while quiet < 3 && m < spec.coefficients.len() {
        let mf = m as f64;
        let direct = quad::gauss_panels_real(|u| phi.eval(u.exp()) * k(mf * (-u).exp()), a, b, panels, ORDER);
        let dual = quad::gauss_panels_real(|u| phi.eval(u.exp()) * k(mf * u.exp()) * u.exp(), a, b, panels, ORDER);
        let term = spec.coefficients.get(m) * (direct - eps * dual);
        rhs += term;
        if direct.abs() + dual.abs() < 1e-18 {
            quiet += 1;
        } else {
            quiet = 0;
        }
        m += 1;
    }
    Ok(ExplicitFormula { lhs: lhs.re, rhs, terms: m - 1 })
}
