//! Riemann and Hurwitz zeta by Euler–Maclaurin, quadratic characters and
//! the completed functions Λ_Q, Λ_K built on them.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, C64};

const EM_TERMS: usize = 22;

// B_{2k}/(2k)! for k = 1..EM_TERMS, from ζ(2k).
fn bernoulli_ratios() -> &'static [f64; EM_TERMS] {
    static TABLE: OnceLock<[f64; EM_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; EM_TERMS];
        for (k1, slot) in out.iter_mut().enumerate() {
            let k = k1 + 1;
            let two_k = 2 * k as i32;
            let zeta_2k = match k {
                1 => PI * PI / 6.0,
                2 => PI.powi(4) / 90.0,
                3 => PI.powi(6) / 945.0,
                _ => {
                    let n = 60.0f64;
                    let mut s = 0.0;
                    for m in (1..60).rev() {
                        s += (m as f64).powi(-two_k);
                    }
                    s + n.powi(1 - two_k) / (two_k as f64 - 1.0) + 0.5 * n.powi(-two_k)
                        + two_k as f64 / 12.0 * n.powi(-two_k - 1)
                }
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign * 2.0 * zeta_2k / (2.0 * PI).powi(two_k);
        }
        out
    })
}

// Euler–Maclaurin tail ∑_{n≥0} (n + N + a)^{-s} starting at x = N + a,
// with the pole term supplied by the caller.
fn em_tail(s: C64, x: f64) -> C64 {
    let b = bernoulli_ratios();
    let lx = x.ln();
    let xs = (-s * lx).exp();
    let mut acc = xs * 0.5;
    // rising product s(s+1)...(s+2k-2) times x^{-s-2k+1}
    let mut rising = s;
    let mut pow = xs / x;
    let inv_x2 = 1.0 / (x * x);
    for (k1, bk) in b.iter().enumerate() {
        let term = rising * pow * *bk;
        acc += term;
        if term.norm() < 1e-18 * acc.norm() {
            break;
        }
        let k = (k1 + 1) as f64;
        rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        pow *= inv_x2;
    }
    acc
}

fn em_cutoff(s: C64) -> usize {
    (0.6 * s.norm()).ceil() as usize + 20
}

/// Riemann zeta function.
pub fn riemann_zeta(s: C64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    if s.re < -5.0 {
        // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
        let one_minus = C64::new(1.0, 0.0) - s;
        let log_factor = s * std::f64::consts::LN_2 + (s - 1.0) * PI.ln() + specfun::log_gamma(one_minus)?;
        return Ok(log_factor.exp() * (s * PI * 0.5).sin() * riemann_zeta(one_minus)?);
    }
    let n = em_cutoff(s);
    let mut acc = C64::new(0.0, 0.0);
    for k in (1..n).rev() {
        acc += (-s * (k as f64).ln()).exp();
    }
    let x = n as f64;
    acc += ((C64::new(1.0, 0.0) - s) * x.ln()).exp() / (s - 1.0) + em_tail(s, x);
    Ok(acc)
}

// Hurwitz zeta split into a part regular at s = 1 and the pole 1/(s-1).
fn hurwitz_parts(s: C64, a: f64, n: usize) -> (C64, C64) {
    let mut acc = C64::new(0.0, 0.0);
    for k in (0..n).rev() {
        acc += (-s * (k as f64 + a).ln()).exp();
    }
    let x = n as f64 + a;
    acc += em_tail(s, x);
    // x^{1-s}/(s-1) split as 1/(s-1) + regular part
    let u = (C64::new(1.0, 0.0) - s) * x.ln();
    let regular = -x.ln() * expm1_over(u);
    (acc + regular, C64::new(1.0, 0.0) / (s - 1.0))
}

// (e^u - 1)/u
fn expm1_over(u: C64) -> C64 {
    if u.norm() < 1e-3 {
        C64::new(1.0, 0.0) + u / 2.0 + u * u / 6.0 + u * u * u / 24.0
    } else {
        (u.exp() - 1.0) / u
    }
}

/// Hurwitz zeta ζ(s, a), 0 < a ≤ 1.
pub fn hurwitz_zeta(s: C64, a: f64) -> Result<C64> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("hurwitz_zeta needs 0 < a <= 1, got {a}")));
    }
    let (reg, pole) = hurwitz_parts(s, a, em_cutoff(s));
    Ok(reg + pole)
}

/// A quadratic field (or ℚ when the discriminant is 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    pub fundamental_discriminant: i64,
    pub r1: u32,
    pub r2: u32,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if !is_fundamental_discriminant(d) {
            return Err(Error::InvalidDiscriminant(d));
        }
        let (r1, r2) = if d == 1 { (1, 0) } else if d > 0 { (2, 0) } else { (0, 1) };
        Ok(QuadField { fundamental_discriminant: d, r1, r2 })
    }

    pub fn rationals() -> Self {
        QuadField { fundamental_discriminant: 1, r1: 1, r2: 0 }
    }

    pub fn is_rational(&self) -> bool {
        self.fundamental_discriminant == 1
    }
}

fn squarefree(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        squarefree(d.unsigned_abs())
    } else if m == 0 {
        let q = d / 4;
        let r = q.rem_euclid(4);
        (r == 2 || r == 3) && squarefree(q.unsigned_abs())
    } else {
        false
    }
}

/// Kronecker symbol (d/n) for n ≥ 1.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1;
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = d.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // Jacobi symbol (d/n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 { result } else { 0 }
}

/// Dirichlet L-function of the quadratic character of `field`.
pub fn quad_dirichlet_l(s: C64, field: &QuadField) -> Result<C64> {
    if !is_fundamental_discriminant(field.fundamental_discriminant) {
        return Err(Error::InvalidDiscriminant(field.fundamental_discriminant));
    }
    let d = field.fundamental_discriminant;
    if d == 1 {
        return riemann_zeta(s);
    }
    if s.re < -5.0 {
        // Λ(s,χ) = (|d|/π)^{(s+a)/2} Γ((s+a)/2) L(s,χ) is symmetric under s -> 1-s
        let a = if d > 0 { 0.0 } else { 1.0 };
        let k = d.unsigned_abs() as f64;
        let log_fac = |z: C64| -> Result<C64> {
            Ok((z + a) * 0.5 * (k / PI).ln() + specfun::log_gamma((z + a) * 0.5)?)
        };
        let one_minus = C64::new(1.0, 0.0) - s;
        return Ok((log_fac(one_minus)? - log_fac(s)?).exp() * quad_dirichlet_l(one_minus, field)?);
    }
    let k = d.unsigned_abs();
    let kf = k as f64;
    let n = em_cutoff(s);
    let mut acc = C64::new(0.0, 0.0);
    for a in 1..=k {
        let chi = kronecker(d, a);
        if chi == 0 {
            continue;
        }
        // the 1/(s-1) parts cancel since the character sums to zero
        let (reg, _) = hurwitz_parts(s, a as f64 / kf, n);
        acc += reg * chi as f64;
    }
    Ok(acc * (-s * kf.ln()).exp())
}

/// Dedekind zeta of a quadratic field (ζ itself for ℚ).
pub fn dedekind_zeta(s: C64, field: &QuadField) -> Result<C64> {
    if field.is_rational() {
        return riemann_zeta(s);
    }
    Ok(riemann_zeta(s)? * quad_dirichlet_l(s, field)?)
}

/// log of the archimedean factor ζ_{K,∞}(s) = Γ_R(s)^{r1} Γ_C(s)^{r2}.
pub fn log_zeta_infinity(s: C64, field: &QuadField) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    if field.r1 > 0 {
        acc += specfun::log_gamma_r(s)? * field.r1 as f64;
    }
    if field.r2 > 0 {
        acc += specfun::log_gamma_c(s)? * field.r2 as f64;
    }
    Ok(acc)
}

/// Λ_Q(s) = π^{-s/2} Γ(s/2) ζ(s).
pub fn completed_riemann(s: C64) -> Result<C64> {
    if s == C64::new(0.0, 0.0) || s == C64::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    // use the reflected argument on the left so that trivial zeros of ζ
    // and poles of Γ never meet
    if s.re < 0.5 {
        let one_minus = C64::new(1.0, 0.0) - s;
        return Ok(specfun::gamma_r(one_minus)? * riemann_zeta(one_minus)?);
    }
    Ok(specfun::gamma_r(s)? * riemann_zeta(s)?)
}

/// Λ_K(s) = |d_K|^{s/2} ζ_{K,∞}(s) ζ_K(s).
pub fn completed_dedekind(s: C64, field: &QuadField) -> Result<C64> {
    if field.is_rational() {
        return completed_riemann(s);
    }
    if s == C64::new(0.0, 0.0) || s == C64::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    let z = if s.re < 0.5 { C64::new(1.0, 0.0) - s } else { s };
    let d = field.fundamental_discriminant.unsigned_abs() as f64;
    let log_fac = z * 0.5 * d.ln() + log_zeta_infinity(z, field)?;
    Ok(log_fac.exp() * dedekind_zeta(z, field)?)
}
