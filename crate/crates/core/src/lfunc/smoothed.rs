//! Smoothed approximate functional equation for entire self-dual
//! L-functions with a single gamma factor γ(s) = P·𝔮^{s/2}Γ(λs + μ).
//!
//! With Θ(x) = ∑ a_n κ(nx), κ the inverse Mellin transform of γ, and a
//! rotation δ = e^{iθ},
//!
//!   Λ(s) = δ^s ∫_1^∞ Θ(δu) u^{s-1} du + ε δ^{s-k} ∫_1^∞ Θ(u/δ) u^{k-s-1} du.
//!
//! Each term of either integral is an incomplete gamma function. Rotating
//! towards the imaginary axis keeps the integrals at the size of Λ(s) itself
//! instead of e^{π|t|/2} times larger.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lfunc::{DirichletCoefficients, GammaFactor};
use crate::quad;
use crate::specfun::{self, C64};

// Terms with |e^{-w}| below e^{-CUTOFF} are dropped.
const CUTOFF: f64 = 45.0;

/// G(z, w) = ∫_1^∞ e^{-wx} x^{z-1} dx = w^{-z} Γ(z, w), for Re w > 0.
pub fn incomplete_g(z: C64, w: C64) -> Result<C64> {
    if !(w.re > 0.0) {
        return Err(Error::Domain(format!("incomplete_g needs Re w > 0, got {w}")));
    }
    let near_pole = z.re < 0.5 && (z - z.re.round()).norm() < 0.25;
    if w.norm() < z.norm() && !near_pole {
        return Ok(series_g(z, w)?);
    }
    match cf_g(z, w) {
        Some(v) => Ok(v),
        None => quadrature_g(z, w),
    }
}

// w^{-z}Γ(z) - e^{-w} ∑_j w^j / (z)_{j+1}
fn series_g(z: C64, w: C64) -> Result<C64> {
    let full = (specfun::log_gamma(z)? - z * w.ln()).exp();
    let mut term = z.inv();
    let mut sum = term;
    for j in 1..5000 {
        term *= w / (z + j as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() && (w / (z + j as f64)).norm() < 0.5 {
            break;
        }
    }
    Ok(full - (-w).exp() * sum)
}

// e^{-w} / (w+1-z - 1(1-z)/(w+3-z - 2(2-z)/(w+5-z - ...))), modified Lentz.
fn cf_g(z: C64, w: C64) -> Option<C64> {
    let tiny = 1e-300;
    let mut h = w + 1.0 - z;
    if h.norm() < tiny {
        h = C64::new(tiny, 0.0);
    }
    let mut c = h;
    let mut d = C64::new(0.0, 0.0);
    for i in 1..20_000 {
        let fi = i as f64;
        let a = (z - fi) * fi;
        let b = w + (2.0 * fi + 1.0) - z;
        d = b + a * d;
        if d.norm() < tiny {
            d = C64::new(tiny, 0.0);
        }
        c = b + a / c;
        if c.norm() < tiny {
            c = C64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            return Some((-w).exp() / h);
        }
    }
    None
}

fn quadrature_g(z: C64, w: C64) -> Result<C64> {
    // x = 1 + y, integrate e^{-w(1+y)}(1+y)^{z-1} over y in [0, ∞)
    let r = quad::exp_sinh(|y| (-w * (1.0 + y) + (z - 1.0) * (1.0 + y).ln()).exp(), 0.0, 1e-14);
    if !r.value.re.is_finite() {
        return Err(Error::NonConvergence(format!("incomplete gamma at z={z}, w={w}")));
    }
    Ok(r.value)
}

/// Λ(s) = γ(s)∑a_n n^{-s} for an entire function with Λ(s) = εΛ(k - s).
#[derive(Debug, Clone)]
pub struct SmoothedSeries {
    pub coeffs: Arc<DirichletCoefficients>,
    pub gamma: GammaFactor,
    pub sign_eps: C64,
    /// The functional equation relates s and k - s.
    pub k: f64,
    /// Distance c in arg(w) = ±(π/2 - c/|Im z|); trades speed for cancellation.
    pub rotation_c: f64,
}

impl SmoothedSeries {
    pub fn new(coeffs: Arc<DirichletCoefficients>, gamma: GammaFactor, sign_eps: C64, k: f64) -> Result<Self> {
        if gamma.shifts.len() != 1 || !gamma.inverse_shifts.is_empty() {
            return Err(Error::InvalidInput("smoothed series supports exactly one gamma factor".into()));
        }
        gamma.validate()?;
        Ok(SmoothedSeries { coeffs, gamma, sign_eps, k, rotation_c: 2.0 })
    }

    fn params(&self) -> (f64, C64, f64, f64) {
        let (lambda, mu) = self.gamma.shifts[0];
        (lambda, mu, self.gamma.conductor_q.sqrt(), self.gamma.prefactor)
    }

    // argument of w for the first integral at s
    fn w_angle(&self, s: C64) -> f64 {
        let (lambda, _, _, _) = self.params();
        let im = lambda * s.im;
        if im.abs() * FRAC_PI_2 <= self.rotation_c {
            0.0
        } else {
            im.signum() * (FRAC_PI_2 - self.rotation_c / im.abs())
        }
    }

    /// Number of coefficients needed at `s`.
    pub fn terms_needed(&self, s: C64) -> usize {
        let (lambda, _, q, _) = self.params();
        let cos = self.w_angle(s).cos();
        // (n/Q)^{1/λ} cos θ_w ≥ CUTOFF
        ((CUTOFF / cos).powf(lambda) * q).ceil() as usize + 1
    }

    /// Λ(s) through incomplete gamma functions.
    pub fn eval(&self, s: C64) -> Result<C64> {
        let (lambda, mu, q, pref) = self.params();
        let need = self.terms_needed(s);
        if need > self.coeffs.len() {
            return Err(Error::PrecisionLoss(format!(
                "smoothed series at {s} needs {need} coefficients, have {}",
                self.coeffs.len()
            )));
        }
        let phi = self.w_angle(s);
        let theta = lambda * phi;
        let k = C64::new(self.k, 0.0);
        let z1 = s * lambda + mu;
        let z2 = (k - s) * lambda + mu;
        let (mut first, mut second) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for n in 1..=need {
            let a = self.coeffs.values[n];
            if a == 0.0 {
                continue;
            }
            let r = (n as f64 / q).powf(1.0 / lambda);
            let w1 = C64::from_polar(r, phi);
            let w2 = C64::from_polar(r, -phi);
            // (nδ/Q)^{μ/λ} and (n/(δQ))^{μ/λ}
            let ln_nq = (n as f64 / q).ln();
            let p1 = ((C64::new(ln_nq, theta)) * (mu / lambda)).exp();
            let p2 = ((C64::new(ln_nq, -theta)) * (mu / lambda)).exp();
            first += incomplete_g(z1, w1)? * p1 * a;
            second += incomplete_g(z2, w2)? * p2 * a;
        }
        let i_theta = C64::new(0.0, theta);
        let d_s = (i_theta * s).exp();
        let d_sk = (i_theta * (s - k)).exp();
        Ok((d_s * first + self.sign_eps * d_sk * second) * pref)
    }

    /// Λ(s) by direct quadrature of the two theta integrals; an independent
    /// check on `eval`, practical only for moderate |Im s|.
    pub fn eval_by_quadrature(&self, s: C64) -> Result<C64> {
        let (lambda, mu, q, pref) = self.params();
        let phi = self.w_angle(s);
        let theta = lambda * phi;
        let cos = phi.cos();
        let theta_fn = |u: f64, ang: f64| -> C64 {
            // Θ(e^{i·ang} u) / P
            let mut acc = C64::new(0.0, 0.0);
            let mut n = 1;
            loop {
                let x = n as f64 * u / q;
                let rr = x.powf(1.0 / lambda);
                if rr * cos > CUTOFF || n > self.coeffs.len() {
                    break;
                }
                let a = self.coeffs.values[n];
                if a != 0.0 {
                    let w = C64::from_polar(rr, ang / lambda);
                    let pw = (C64::new(x.ln(), ang) * (mu / lambda)).exp();
                    acc += pw * (-w).exp() * (a / lambda);
                }
                n += 1;
            }
            acc
        };
        let t = s.im.abs();
        let u_end = q * (CUTOFF / cos).powf(lambda) * 1.05;
        let integrate = |exponent: C64, ang: f64| -> C64 {
            let mut acc = C64::new(0.0, 0.0);
            let mut u = 1.0;
            while u < u_end {
                let omega = (t + CUTOFF / (lambda * cos)) / u;
                let width = (2.0 / omega).min(u_end - u);
                acc += quad::gauss_panels(
                    |x| theta_fn(x, ang) * ((exponent - 1.0) * x.ln()).exp(),
                    u,
                    u + width,
                    1,
                    20,
                );
                u += width;
            }
            acc
        };
        let k = C64::new(self.k, 0.0);
        let first = integrate(s, theta);
        let second = integrate(k - s, -theta);
        let i_theta = C64::new(0.0, theta);
        Ok(((i_theta * s).exp() * first + self.sign_eps * (i_theta * (s - k)).exp() * second) * pref)
    }
}
