//! Sign scans of boundary terms and desk-scale checks of the growth
//! estimates used for good summation heights.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{c_gamma_coefficient, pole_expansion, pole_ledger_with_spectral, PoleDatum, ZeroList};
use crate::error::{Error, Result};
use crate::lfunc::{build_z_e_squared, EllipticCurve, LFunctionSpec, QuadField};
use crate::mellin::EllipticBoundary;
use crate::specfun::C64;

/// Sign changes of a sampled function over a t-range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignScanReport {
    pub derivative_order: usize,
    pub t_range: (f64, f64),
    pub grid_step: f64,
    /// Brackets [a, b] each containing a sign change, narrowed by bisection.
    pub sign_changes: Vec<(f64, f64)>,
    /// Start of the final constant-sign stretch; None if every sample vanished.
    pub constant_sign_from: Option<f64>,
}

impl SignScanReport {
    pub fn has_constant_sign(&self) -> bool {
        self.sign_changes.is_empty() && self.constant_sign_from.is_some()
    }
}

/// Samples f on a grid and brackets each sign change to width 1e-10.
pub fn sign_scan<F>(f: F, derivative_order: usize, t_range: (f64, f64), step: f64) -> Result<SignScanReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (lo, hi) = t_range;
    if !(step > 0.0) || !(hi > lo) {
        return Err(Error::InvalidInput(format!("bad scan range [{lo}, {hi}] step {step}")));
    }
    let n = ((hi - lo) / step).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect();
    let vals: Vec<f64> = ts.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let mut sign_changes = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    let mut from = None;
    for (&t, &v) in ts.iter().zip(&vals) {
        if v == 0.0 {
            continue;
        }
        match last {
            Some((tp, vp)) if vp.signum() != v.signum() => {
                let (mut a, mut b, fa) = (tp, t, vp);
                while b - a > 1e-10 {
                    let m = 0.5 * (a + b);
                    let fm = f(m)?;
                    if fm == 0.0 {
                        a = m;
                        b = m;
                        break;
                    }
                    if fm.signum() == fa.signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                sign_changes.push((a, b));
                from = Some(b);
            }
            None => from = Some(t),
            _ => {}
        }
        last = Some((t, v));
    }
    Ok(SignScanReport { derivative_order, t_range, grid_step: step, sign_changes, constant_sign_from: from })
}

/// Scan of H_E^{(k)}(t) from the term-by-term differentiated theta series.
pub fn single_sign_scan(curve: &EllipticCurve, k: usize, t_range: (f64, f64), step: f64) -> Result<SignScanReport> {
    if k > 6 {
        return Err(Error::InvalidInput(format!("derivative order {k} exceeds 6")));
    }
    let eb = EllipticBoundary::new(curve)?;
    sign_scan(|t| eb.theta_derivative(t, k), k, t_range, step)
}

/// h_E^{(2)} split as principal parts at 0 and at 1 plus the rest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Components {
    pub t: f64,
    pub h00: f64,
    pub h01: f64,
    /// Pole at 1/2 and the spectral poles up to the ledger height.
    pub h1: f64,
    /// h_E^{(2)} from its Bessel series.
    pub total: f64,
    /// |total - h00 - h01 - h1|, the spectral truncation error.
    pub residual: f64,
    pub imag_residual: f64,
}

/// Ledger of Z_E² split into the three parts of h_E^{(2)}.
#[derive(Debug, Clone)]
pub struct H2Decomposition {
    pub at_zero: PoleDatum,
    pub at_one: PoleDatum,
    pub rest: Vec<PoleDatum>,
    pub height_cutoff: f64,
    series: EllipticBoundary,
}

impl H2Decomposition {
    pub fn new(curve: &EllipticCurve, zeros: &ZeroList) -> Result<Self> {
        let cutoff = 0.5 * zeros.height_limit;
        let spec = build_z_e_squared(curve)?;
        let ledger = pole_ledger_with_spectral(&spec, zeros, cutoff, 2)?;
        Self::from_ledger(curve, ledger, cutoff)
    }

    pub fn from_ledger(curve: &EllipticCurve, ledger: Vec<PoleDatum>, height_cutoff: f64) -> Result<Self> {
        let find = |x: f64| ledger.iter().position(|p| (p.location - C64::new(x, 0.0)).norm() < 1e-6);
        let i0 = find(0.0).ok_or_else(|| Error::MissingLedger("pole of Z_E² at 0".into()))?;
        let i1 = find(1.0).ok_or_else(|| Error::MissingLedger("pole of Z_E² at 1".into()))?;
        let at_zero = ledger[i0].clone();
        let at_one = ledger[i1].clone();
        let rest = ledger.into_iter().enumerate().filter(|(i, _)| *i != i0 && *i != i1).map(|(_, p)| p).collect();
        Ok(H2Decomposition { at_zero, at_one, rest, height_cutoff, series: EllipticBoundary::new(curve)? })
    }

    pub fn at(&self, t: f64) -> Result<H2Components> {
        let x = (-t).exp();
        let h00 = self.at_zero.term(x).re;
        let h01 = self.at_one.term(x).re;
        let rest = pole_expansion(&self.rest, x, self.height_cutoff);
        let total = self.series.bessel2(t)?;
        Ok(H2Components {
            t,
            h00,
            h01,
            h1: rest.value,
            total,
            residual: (total - h00 - h01 - rest.value).abs(),
            imag_residual: rest.imag_residual,
        })
    }
}

pub fn decompose_h2(curve: &EllipticCurve, zeros: &ZeroList, t: f64) -> Result<H2Components> {
    H2Decomposition::new(curve, zeros)?.at(t)
}

/// Heights in (T, T+1) where |L| stays above t^{-A} across a strip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinateReport {
    pub t_base: f64,
    pub h: f64,
    pub accepted: Vec<f64>,
    pub excluded_measure_estimate: f64,
    pub exponent_a: f64,
    pub grid_step: f64,
    pub sigma_step: f64,
}

impl OrdinateReport {
    pub fn pass(&self) -> bool {
        self.excluded_measure_estimate <= 1.0 / self.h
    }
}

pub const SIGMA_STEP: f64 = 0.05;
pub const EXPONENT_A_MAX: f64 = 20.0;

/// min over the σ-grid of |D(σ+it)|.
pub fn strip_minimum(spec: &LFunctionSpec, t: f64, strip: (f64, f64)) -> Result<f64> {
    let n = ((strip.1 - strip.0) / SIGMA_STEP).round() as usize;
    let mut m = f64::INFINITY;
    for i in 0..=n {
        let sigma = strip.0 + i as f64 * SIGMA_STEP;
        m = m.min(spec.dirichlet_part(C64::new(sigma, t))?.norm());
    }
    Ok(m)
}

/// Accepts t when min_σ |D(σ+it)| ≥ t^{-A}, A the smallest half-integer with
/// rejected measure at most 1/H. The t-grid has step 1/(50H), midpoints.
pub fn good_ordinates(spec: &LFunctionSpec, t_base: f64, h: f64, strip: (f64, f64)) -> Result<OrdinateReport> {
    if t_base < 2.0 || !(h > 0.0) || !(strip.1 >= strip.0) {
        return Err(Error::InvalidInput(format!("good_ordinates needs T ≥ 2, H > 0; got T={t_base}, H={h}")));
    }
    let step = 1.0 / (50.0 * h);
    let n = (1.0 / step).round() as usize;
    let ts: Vec<f64> = (0..n).map(|j| t_base + (j as f64 + 0.5) * step).collect();
    let minima: Vec<f64> = ts.par_iter().map(|&t| strip_minimum(spec, t, strip)).collect::<Result<_>>()?;
    let mut a = 0.0;
    while a <= EXPONENT_A_MAX {
        let ok: Vec<bool> = ts.iter().zip(&minima).map(|(&t, &m)| m >= t.powf(-a)).collect();
        let excluded = ok.iter().filter(|&&b| !b).count() as f64 * step;
        if excluded <= 1.0 / h {
            let accepted = ts.iter().zip(&ok).filter(|(_, &b)| b).map(|(&t, _)| t).collect();
            return Ok(OrdinateReport {
                t_base,
                h,
                accepted,
                excluded_measure_estimate: excluded,
                exponent_a: a,
                grid_step: step,
                sigma_step: SIGMA_STEP,
            });
        }
        a += 0.5;
    }
    Err(Error::AllRejected(EXPONENT_A_MAX))
}

/// m(T) = #{γ : |γ - T| ≤ 1} and m(T)/log T.
pub fn zero_density_check(zeros: &ZeroList, t: f64) -> Result<(usize, f64)> {
    if zeros.height_limit < t + 1.0 {
        return Err(Error::Coverage(zeros.height_limit, t + 1.0));
    }
    let m = zeros.ordinates.iter().filter(|&&g| (g - t).abs() <= 1.0).count();
    Ok((m, m as f64 / t.ln()))
}

/// |L'/L(s) - ∑_{|s-ρ|<1} 1/(s-ρ)| at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDerivCheck {
    pub s: C64,
    pub log_derivative: C64,
    pub local_zeros: usize,
    pub residual: f64,
    /// residual / log|Im s|.
    pub ratio: f64,
}

// L'/L by a 4-point central stencil of log L along the real direction
fn log_derivative(spec: &LFunctionSpec, s: C64) -> Result<C64> {
    let h = 1e-3;
    let l = |d: f64| -> Result<C64> { Ok(spec.dirichlet_part(s + d)?.ln()) };
    let (p1, m1, p2, m2) = (l(h)?, l(-h)?, l(2.0 * h)?, l(-2.0 * h)?);
    // the branch of ln can jump between samples; differences are unwrapped
    let unwrap = |a: C64, b: C64| -> C64 {
        let mut d = a - b;
        let tau = 2.0 * std::f64::consts::PI;
        d.im -= tau * (d.im / tau).round();
        d
    };
    Ok((unwrap(p1, m1) * 8.0 - unwrap(p2, m2)) / (12.0 * h))
}

/// Zeros are the ordinates γ of 1/2 + iγ (and their conjugates).
pub fn log_deriv_expansion_check(spec: &LFunctionSpec, s: C64, zeros: &ZeroList) -> Result<LogDerivCheck> {
    if s.im.abs() < 2.0 {
        return Err(Error::InvalidInput(format!("log-derivative check needs |Im s| ≥ 2, got {s}")));
    }
    if zeros.height_limit < s.im.abs() + 1.0 {
        return Err(Error::MissingLocalZeros(s));
    }
    let ld = log_derivative(spec, s)?;
    let mut sum = C64::new(0.0, 0.0);
    let mut local = 0;
    for &g in &zeros.ordinates {
        for rho in [C64::new(0.5, g), C64::new(0.5, -g)] {
            if (s - rho).norm() < 1.0 {
                sum += (s - rho).inv();
                local += 1;
            }
        }
    }
    let residual = (ld - sum).norm();
    Ok(LogDerivCheck { s, log_derivative: ld, local_zeros: local, residual, ratio: residual / s.im.abs().ln() })
}

/// Checks at σ + it over a t-sample; C is the largest residual/log t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogDerivFit {
    pub checks: Vec<LogDerivCheck>,
    pub fitted_c: f64,
    pub c_max: f64,
    pub pass: bool,
}

pub fn log_deriv_fit(spec: &LFunctionSpec, sigma: f64, ts: &[f64], zeros: &ZeroList, c_max: f64) -> Result<LogDerivFit> {
    let checks: Vec<LogDerivCheck> =
        ts.iter().map(|&t| log_deriv_expansion_check(spec, C64::new(sigma, t), zeros)).collect::<Result<_>>()?;
    let fitted_c = checks.iter().map(|c| c.ratio).fold(0.0, f64::max);
    Ok(LogDerivFit { checks, fitted_c, c_max, pass: fitted_c <= c_max })
}

/// Partial sums ∑_{0<γ<T} |c_γ| for each T, over the supplied ζ_K zeros.
pub fn c_gamma_partial_sums(field: &QuadField, zeros: &ZeroList, heights: &[f64]) -> Result<Vec<(f64, f64)>> {
    let top = heights.iter().cloned().fold(0.0, f64::max);
    if zeros.height_limit < top {
        return Err(Error::MissingZeroData { have: zeros.height_limit, need: top });
    }
    let terms: Vec<(f64, f64)> = zeros
        .ordinates
        .iter()
        .filter(|&&g| g < top)
        .map(|&g| Ok((g, c_gamma_coefficient(field, g)?.norm())))
        .collect::<Result<_>>()?;
    Ok(heights.iter().map(|&t| (t, terms.iter().filter(|(g, _)| *g < t).map(|(_, c)| c).sum())).collect())
}
