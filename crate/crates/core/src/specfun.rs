//! Complex log-gamma, the archimedean factors Γ_R and Γ_C, and K₀.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const LN_2PI: f64 = 1.837_877_066_409_345_5;
const LN_PI: f64 = 1.144_729_885_849_400_2;
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// B_{2k} / (2k(2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

fn is_gamma_pole(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling(z: C64) -> C64 {
    let zinv = z.inv();
    let z2 = zinv * zinv;
    let mut acc = C64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        acc = acc * z2 + c;
    }
    (z - 0.5) * z.ln() - z + 0.5 * LN_2PI + acc * zinv
}

/// Principal branch of log Γ(z).
///
/// For moderate negative real parts the argument is shifted upward and the
/// principal logs of the shifted factors are subtracted, which keeps the
/// result continuous off the negative real axis.
pub fn log_gamma(z: C64) -> Result<C64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if is_gamma_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re < -150.0 {
        return Ok(log_gamma_reflected(z));
    }
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < 0.5 || w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

// log(sin(pi z)) on the principal branch, stable for large |Im z|.
fn log_sinpi(z: C64) -> C64 {
    if z.im.abs() < 15.0 {
        return (z * PI).sin().ln();
    }
    let i = C64::i();
    let raw = if z.im > 0.0 {
        -i * PI * z + C64::new(-std::f64::consts::LN_2, PI / 2.0) + ln1p(-(i * 2.0 * PI * z).exp())
    } else {
        i * PI * z + C64::new(-std::f64::consts::LN_2, -PI / 2.0) + ln1p(-(-i * 2.0 * PI * z).exp())
    };
    let k = ((raw.im + PI) / (2.0 * PI)).floor();
    C64::new(raw.re, raw.im - 2.0 * PI * k)
}

fn ln1p(w: C64) -> C64 {
    if w.norm() < 1e-4 {
        w - w * w / 2.0 + w * w * w / 3.0
    } else {
        (w + 1.0).ln()
    }
}

fn log_gamma_reflected(z: C64) -> C64 {
    let one_minus = C64::new(1.0, 0.0) - z;
    let right = stirling_shifted(one_minus);
    let branch = (0.5 * z.re + 0.25).floor() * 2.0 * PI * z.im.signum();
    C64::new(LN_PI, branch) - log_sinpi(z) - right
}

fn stirling_shifted(z: C64) -> C64 {
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

/// Γ(z) through `log_gamma`.
pub fn gamma(z: C64) -> Result<C64> {
    Ok(log_gamma(z)?.exp())
}

/// log Γ_R(s) = -(s/2) log π + log Γ(s/2).
pub fn log_gamma_r(s: C64) -> Result<C64> {
    Ok(-s * 0.5 * LN_PI + log_gamma(s * 0.5)?)
}

/// log Γ_C(s) = -s log 2π + log Γ(s).
pub fn log_gamma_c(s: C64) -> Result<C64> {
    Ok(-s * LN_2PI + log_gamma(s)?)
}

/// Γ_R(s) = π^{-s/2} Γ(s/2).
pub fn gamma_r(s: C64) -> Result<C64> {
    Ok(log_gamma_r(s)?.exp())
}

/// Γ_C(s) = (2π)^{-s} Γ(s).
pub fn gamma_c(s: C64) -> Result<C64> {
    Ok(log_gamma_c(s)?.exp())
}

/// K₀(x) together with an underflow marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct K0Value {
    pub value: f64,
    /// The true value is below the smallest positive double; `value` is 0.
    pub underflow: bool,
}

/// e^x K₀(x) for x > 0.
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k0 needs x > 0, got {x}")));
    }
    if x < 2.0 {
        Ok(k0_series(x) * x.exp())
    } else {
        Ok(k0_steed_scaled(x))
    }
}

pub fn bessel_k0_checked(x: f64) -> Result<K0Value> {
    let scaled = bessel_k0_scaled(x)?;
    if x < 2.0 {
        return Ok(K0Value { value: scaled * (-x).exp(), underflow: false });
    }
    // log of the result; below ln(f64::MIN_POSITIVE) the value is flushed to 0
    let log_value = scaled.ln() - x;
    if log_value < -744.0 {
        Ok(K0Value { value: 0.0, underflow: true })
    } else {
        Ok(K0Value { value: scaled * (-x).exp(), underflow: false })
    }
}

/// Modified Bessel function K₀(x).
pub fn bessel_k0(x: f64) -> Result<f64> {
    Ok(bessel_k0_checked(x)?.value)
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let lead = -((0.5 * x).ln() + EULER_GAMMA);
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-18 * tail.abs() {
            break;
        }
    }
    lead * i0 + tail
}

// Steed's continued fraction (Temme's CF2) for nu = 0.
fn k0_steed_scaled(x: f64) -> f64 {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..20_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() / s
}
