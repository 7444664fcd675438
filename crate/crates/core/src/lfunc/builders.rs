//! Concrete members of the class: Λ(E,s), Z_E, Z_E², Z_K, Z_𝓔 and the
//! U/V factorization of Z_E.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunc::elliptic::{dirichlet_convolve, dirichlet_inverse, hasse_weil_e, DEFAULT_DEPTH};
use crate::lfunc::{
    completed_dedekind, completed_l, completed_riemann, ec_an, kronecker, DirichletCoefficients, EllipticCurve,
    EvalFn, Evaluator, GammaFactor, LFunctionSpec, QuadField, SmoothedSeries,
};
use crate::specfun::C64;

/// Depth of the Dirichlet coefficients stored on composite specs.
const COMPOSITE_DEPTH: usize = 20_000;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Λ(E,s) = N^{s/2}Γ_C(s)L(E,s) with `depth` coefficients.
pub fn build_lambda_e(curve: &EllipticCurve, depth: usize) -> Result<LFunctionSpec> {
    let coeffs = Arc::new(ec_an(curve, depth)?);
    let gamma = GammaFactor::elliptic(curve.conductor as f64);
    let eps = C64::new(curve.sign_omega as f64, 0.0);
    let series = SmoothedSeries::new(coeffs.clone(), gamma.clone(), eps, 2.0)?;
    let mut spec =
        LFunctionSpec::new(format!("L_{}", curve.label), coeffs, gamma, eps, 1, Evaluator::Smoothed(Arc::new(series)))?;
    spec.pole_strip_halfwidth_w = 0.0;
    Ok(spec)
}

// b_n = ∑_{d|n} c_d, coefficients of ζ(s)ζ_E(2s)
fn theta_coefficients(curve: &EllipticCurve, m: usize) -> Result<Vec<i64>> {
    let k_max = (m as f64).sqrt().floor() as usize;
    let e = hasse_weil_e(curve, k_max.max(1))?;
    let mut c = vec![0i64; m + 1];
    for k in 1..=k_max {
        c[k * k] = e[k];
    }
    let ones: Vec<i64> = (0..=m).map(|i| (i > 0) as i64).collect();
    Ok(dirichlet_convolve(&ones, &c))
}

/// Z_E(s) = Λ_Q(s) q_E^{-s} ζ_E(2s), evaluated as
/// Λ_Q(s)·(2s-1)/(4π)·Λ_Q(2s)Λ_Q(2s-1)/Λ(E,2s).
pub fn build_z_e(curve: &EllipticCurve) -> Result<LFunctionSpec> {
    build_z_e_with_depth(curve, DEFAULT_DEPTH)
}

pub fn build_z_e_with_depth(curve: &EllipticCurve, depth: usize) -> Result<LFunctionSpec> {
    let lambda_e = build_lambda_e(curve, depth)?;
    let f: EvalFn = Arc::new(move |s: C64| z_e_value(&lambda_e, s));
    let b = theta_coefficients(curve, COMPOSITE_DEPTH)?;
    let q = curve.conductor as f64;
    let mut gamma = GammaFactor::gamma_r();
    gamma.conductor_q /= q * q;
    let eps = C64::new(-(curve.sign_omega as f64), 0.0);
    let mut spec = LFunctionSpec::new(
        format!("Z_E_{}", curve.label),
        Arc::new(DirichletCoefficients::new(b.iter().map(|&x| x as f64).collect(), 1.0)),
        gamma,
        eps,
        0,
        Evaluator::Composite(f),
    )?;
    spec.structural_poles = vec![(C64::new(0.0, 0.0), 2), (C64::new(0.5, 0.0), 3), (one(), 2)];
    Ok(spec)
}

fn z_e_value(lambda_e: &LFunctionSpec, s: C64) -> Result<C64> {
    let two_s = s * 2.0;
    let num = completed_riemann(s)? * (two_s - 1.0) / (4.0 * PI)
        * completed_riemann(two_s)?
        * completed_riemann(two_s - 1.0)?;
    Ok(num / completed_l(lambda_e, two_s)?)
}

/// Z_E(s)², sign +1.
pub fn build_z_e_squared(curve: &EllipticCurve) -> Result<LFunctionSpec> {
    let base = build_z_e(curve)?;
    let inner = base.clone();
    let f: EvalFn = Arc::new(move |s: C64| {
        let z = completed_l(&inner, s)?;
        Ok(z * z)
    });
    let c = &base.coefficients.values;
    let ci: Vec<i64> = c.iter().map(|&x| x as i64).collect();
    let sq = dirichlet_convolve(&ci, &ci);
    let mut gamma = GammaFactor::gamma_r().with_gamma_r(1.0, 0.0, false);
    let q = curve.conductor as f64;
    gamma.conductor_q /= q.powi(4);
    let mut spec = LFunctionSpec::new(
        format!("Z_E2_{}", curve.label),
        Arc::new(DirichletCoefficients::new(sq.iter().map(|&x| x as f64).collect(), 1.0)),
        gamma,
        one(),
        0,
        Evaluator::Composite(f),
    )?;
    spec.structural_poles = vec![(C64::new(0.0, 0.0), 4), (C64::new(0.5, 0.0), 6), (one(), 4)];
    Ok(spec)
}

/// Z_K(s) = Λ_K(2s)Λ_K(2s-1)/Λ_K(s), sign +1.
pub fn build_z_k(field: &QuadField) -> Result<LFunctionSpec> {
    let fld = *field;
    let f: EvalFn = Arc::new(move |s: C64| {
        let two_s = s * 2.0;
        Ok(completed_dedekind(two_s, &fld)? * completed_dedekind(two_s - 1.0, &fld)? / completed_dedekind(s, &fld)?)
    });
    let d = field.fundamental_discriminant;
    let m = 2000;
    // ζ_K coefficients r(n) = ∑_{k|n} χ(k)
    let r: Vec<i64> = (0..=m)
        .map(|n| if n == 0 { 0 } else { (1..=n).filter(|k| n % k == 0).map(|k| kronecker(d, k as u64) as i64).sum() })
        .collect();
    let mut a = vec![0i64; m + 1];
    let mut b = vec![0i64; m + 1];
    let mut k = 1;
    while k * k <= m {
        a[k * k] = r[k];
        b[k * k] = k as i64 * r[k];
        k += 1;
    }
    let coeffs = dirichlet_convolve(&dirichlet_convolve(&a, &b), &dirichlet_inverse(&r));
    let mut gamma = GammaFactor::trivial();
    for (scale, shift, inv) in [(2.0, 0.0, false), (2.0, -1.0, false), (1.0, 0.0, true)] {
        for _ in 0..field.r1 {
            gamma = gamma.with_gamma_r(scale, shift, inv);
        }
        for _ in 0..field.r2 {
            gamma = gamma.with_gamma_c(scale, shift, inv);
        }
    }
    let dk = d.unsigned_abs() as f64;
    gamma.conductor_q *= dk.powi(3);
    gamma.prefactor *= dk.powf(-0.5);
    gamma.r1 = field.r1;
    gamma.r2 = field.r2;
    let mut spec = LFunctionSpec::new(
        format!("Z_K_{d}"),
        Arc::new(DirichletCoefficients::new(coeffs.iter().map(|&x| x as f64).collect(), 1.0)),
        gamma,
        one(),
        0,
        Evaluator::Composite(f),
    )?;
    spec.structural_poles = vec![(C64::new(0.5, 0.0), 2)];
    Ok(spec)
}

/// Sizes q_j of the bad fibers of a regular model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelData {
    pub curve_label: String,
    pub fiber_sizes: Vec<u64>,
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut r = q;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

impl ModelData {
    pub fn new(curve_label: &str, fiber_sizes: Vec<u64>) -> Result<Self> {
        let m = ModelData { curve_label: curve_label.to_string(), fiber_sizes };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(q) = self.fiber_sizes.iter().find(|&&q| !is_prime_power(q)) {
            return Err(Error::InvalidInput(format!("fiber size {q} is not a prime power ≥ 2")));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let m: ModelData = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        m.validate()?;
        Ok(m)
    }

    pub fn j(&self) -> usize {
        self.fiber_sizes.len()
    }

    /// c_𝓔 = q_E·∏q_j.
    pub fn c_e(&self, curve: &EllipticCurve) -> f64 {
        curve.conductor as f64 * self.fiber_sizes.iter().map(|&q| q as f64).product::<f64>()
    }

    /// n_𝓔(s) = ∏(1 - q_j^{1-s})^{-1}.
    pub fn n_factor(&self, s: C64) -> C64 {
        self.fiber_sizes
            .iter()
            .map(|&q| (one() - ((one() - s) * (q as f64).ln()).exp()).inv())
            .product()
    }
}

/// Z_𝓔(s) = Λ_Q(s) c_𝓔^{-s} n_𝓔(2s) ζ_E(2s) (one field, K_1 = ℚ).
pub fn build_z_model(curve: &EllipticCurve, model: &ModelData) -> Result<LFunctionSpec> {
    model.validate()?;
    let base = build_z_e(curve)?;
    let inner = base.clone();
    let m = model.clone();
    let extra: f64 = model.fiber_sizes.iter().map(|&q| q as f64).product();
    let f: EvalFn = Arc::new(move |s: C64| {
        Ok(completed_l(&inner, s)? * (-s * extra.ln()).exp() * m.n_factor(s * 2.0))
    });
    let sign = if model.j() % 2 == 0 { -1.0 } else { 1.0 } * curve.sign_omega as f64;
    let mut gamma = base.gamma.clone();
    gamma.conductor_q /= extra * extra;
    let mut spec = LFunctionSpec::new(
        format!("Z_model_{}", curve.label),
        base.coefficients.clone(),
        gamma,
        C64::new(sign, 0.0),
        0,
        Evaluator::Composite(f),
    )?;
    spec.structural_poles = base.structural_poles.clone();
    Ok(spec)
}

/// Evaluators U, V with Z_E = U/V.
#[derive(Clone)]
pub struct UvPair {
    pub u: EvalFn,
    pub v: EvalFn,
}

/// U(s) = (4π)^{-1}(2s-1)²s²(s-1)²Λ_Q(s)Λ_Q(2s)Λ_Q(2s-1),
/// V(s) = (2s-1)s²(s-1)²Λ(E,2s) (P = 1).
pub fn uv_split_e(curve: &EllipticCurve) -> Result<UvPair> {
    let lambda_e = build_lambda_e(curve, DEFAULT_DEPTH)?;
    let u: EvalFn = Arc::new(|s: C64| {
        let two_s = s * 2.0;
        let poly = (two_s - 1.0) * (two_s - 1.0) * s * s * (s - 1.0) * (s - 1.0) / (4.0 * PI);
        Ok(poly * completed_riemann(s)? * completed_riemann(two_s)? * completed_riemann(two_s - 1.0)?)
    });
    let v: EvalFn = Arc::new(move |s: C64| {
        let two_s = s * 2.0;
        Ok((two_s - 1.0) * s * s * (s - 1.0) * (s - 1.0) * completed_l(&lambda_e, two_s)?)
    });
    Ok(UvPair { u, v })
}

// |t|-exponent of ζ(σ+it) from the convexity bound
fn zeta_convexity(sigma: f64) -> f64 {
    if sigma >= 1.0 {
        0.0
    } else if sigma >= 0.0 {
        (1.0 - sigma) / 2.0
    } else {
        0.5 - sigma
    }
}

/// Stirling exponent of Λ_Q(s)^m·γ((d+1)s) along Re s = σ, maximized over
/// `strip`; -∞ when the product decays exponentially.
pub fn stirling_exponent(spec: &LFunctionSpec, m: u32, strip: (f64, f64)) -> f64 {
    let g = spec.gamma.rescaled(spec.weight_d as f64 + 1.0);
    let rate = m as f64 * PI / 4.0 + g.stirling_rate();
    if rate > 1e-12 {
        return f64::NEG_INFINITY;
    }
    if rate < -1e-12 {
        return f64::INFINITY;
    }
    // piecewise linear in σ: check the ends and the convexity breakpoints
    let mut worst = f64::NEG_INFINITY;
    for sigma in [strip.0, strip.1, 0.0, 1.0] {
        if sigma < strip.0 || sigma > strip.1 {
            continue;
        }
        let e = m as f64 * ((sigma - 1.0) / 2.0 + zeta_convexity(sigma)) + g.stirling_power(sigma);
        worst = worst.max(e);
    }
    worst
}

/// Smallest m ≤ m_max with Λ_Q(s)^m γ((d+1)s) ≪ |t|^{-(1+δ)} across the strip.
pub fn power_search_m_with(spec: &LFunctionSpec, m_max: u32, delta: f64) -> Result<u32> {
    let c = spec.center();
    let w = spec.pole_strip_halfwidth_w;
    let strip = (c - w - 1.0, c + w + 1.0);
    let mut best = f64::INFINITY;
    for m in 0..=m_max {
        let e = stirling_exponent(spec, m, strip);
        if e <= -(1.0 + delta) {
            return Ok(m);
        }
        best = best.min(e);
    }
    Err(Error::NotFound { m_max, best_exponent: best })
}

/// `power_search_m_with` at δ = 0.1.
pub fn power_search_m(spec: &LFunctionSpec, m_max: u32) -> Result<u32> {
    power_search_m_with(spec, m_max, 0.1)
}
