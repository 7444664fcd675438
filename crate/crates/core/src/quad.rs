//! Quadrature rules shared by the transform and convolution code.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::specfun::C64;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> std::sync::Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<(Vec<f64>, Vec<f64>)>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| std::sync::Arc::new(legendre_rule(n)))
        .clone()
}

fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre over `panels` equal panels of [a, b].
pub fn gauss_panels<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> C64 {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in rule.0.iter().zip(rule.1.iter()) {
            acc += f(mid + 0.5 * h * xi) * (wi * 0.5 * h);
        }
    }
    acc
}

pub fn gauss_panels_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    gauss_panels(|x| C64::new(f(x), 0.0), a, b, panels, order).re
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> C64>(f: &mut F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: C64,
    pub error: f64,
}

/// Adaptive Gauss–Kronrod (7/15) with a global error target `abs_tol + rel_tol·|I|`.
pub fn adaptive<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> QuadResult {
    let mut segs: Vec<(f64, f64, C64, f64)> = Vec::new();
    let (v, e) = gk15(&mut f, a, b);
    segs.push((a, b, v, e));
    for _ in 0..2000 {
        let total: C64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            break;
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = segs.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            segs.push((lo, hi, C64::new(0.0, 0.0), 0.0));
            continue;
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
    QuadResult { value: segs.iter().map(|s| s.2).sum(), error: segs.iter().map(|s| s.3).sum() }
}

pub fn adaptive_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    let r = adaptive(|x| C64::new(f(x), 0.0), a, b, abs_tol, rel_tol);
    (r.value.re, r.error)
}

/// Tanh-sinh quadrature of ∫_a^b f, halving the step until two levels agree
/// within `tol` relative to the running magnitude.
pub fn tanh_sinh<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let tmax: f64 = 3.2;
    let mut sample = |tau: f64| -> C64 {
        let u = half_pi * tau.sinh();
        let (th, ch) = (u.tanh(), u.cosh());
        let w = half * half_pi * tau.cosh() / (ch * ch);
        let v = f(mid + half * th);
        if v.re.is_finite() && v.im.is_finite() { v * w } else { C64::new(0.0, 0.0) }
    };
    let mut h: f64 = 0.5;
    let n = (tmax / h) as i64;
    let mut sum: C64 = (-n..=n).map(|k| sample(k as f64 * h)).sum();
    let mut prev = sum * h;
    let mut err = f64::INFINITY;
    for _ in 0..10 {
        h *= 0.5;
        let n = (tmax / h) as i64;
        let mut k = -n + if n % 2 == 0 { 1 } else { 0 };
        while k <= n {
            sum += sample(k as f64 * h);
            k += 2;
        }
        let cur = sum * h;
        err = (cur - prev).norm();
        prev = cur;
        if err <= tol * cur.norm().max(1e-300) {
            break;
        }
    }
    QuadResult { value: prev, error: err }
}

/// Exp-sinh quadrature of ∫_a^∞ f, refined by halving the step until two
/// levels agree within `tol` (relative to the running magnitude).
pub fn exp_sinh<F: FnMut(f64) -> C64>(mut f: F, a: f64, tol: f64) -> QuadResult {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |tau: f64| {
        let x = (half_pi * tau.sinh()).exp();
        (x, x * half_pi * tau.cosh())
    };
    let (tmin, tmax): (f64, f64) = (-4.5, 4.5);
    let mut h: f64 = 0.5;
    let mut sum = C64::new(0.0, 0.0);
    let mut k = (tmin / h).ceil() as i64;
    while (k as f64) * h <= tmax {
        let (x, dx) = node(k as f64 * h);
        let v = f(a + x);
        if v.re.is_finite() && v.im.is_finite() {
            sum += v * dx;
        }
        k += 1;
    }
    let mut prev = sum * h;
    let mut err = f64::INFINITY;
    for _ in 0..8 {
        h *= 0.5;
        let mut k = (tmin / h).ceil() as i64;
        if k % 2 == 0 {
            k += 1;
        }
        while (k as f64) * h <= tmax {
            let (x, dx) = node(k as f64 * h);
            let v = f(a + x);
            if v.re.is_finite() && v.im.is_finite() {
                sum += v * dx;
            }
            k += 2;
        }
        let cur = sum * h;
        err = (cur - prev).norm();
        prev = cur;
        if err <= tol * cur.norm().max(1e-300) {
            break;
        }
    }
    QuadResult { value: prev, error: err }
}

/// Piecewise Chebyshev interpolant of a smooth real function on [a, b].
#[derive(Debug, Clone)]
pub struct ChebPanels {
    a: f64,
    width: f64,
    nodes: Vec<f64>,
    bary: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl ChebPanels {
    /// `panels` equal panels with `order` second-kind Chebyshev points each.
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> Self {
        let panels = panels.max(1);
        let order = order.max(2);
        let nodes: Vec<f64> =
            (0..order).map(|j| (std::f64::consts::PI * j as f64 / (order - 1) as f64).cos()).collect();
        let bary: Vec<f64> = (0..order)
            .map(|j| {
                let w = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == order - 1 { 0.5 * w } else { w }
            })
            .collect();
        let width = (b - a) / panels as f64;
        let values = (0..panels)
            .map(|k| {
                let mid = a + (k as f64 + 0.5) * width;
                nodes.iter().map(|x| f(mid + 0.5 * width * x)).collect()
            })
            .collect();
        ChebPanels { a, width, nodes, bary, values }
    }

    pub fn range(&self) -> (f64, f64) {
        (self.a, self.a + self.width * self.values.len() as f64)
    }

    /// Interpolated value; `None` outside the covered range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.range();
        if !(x >= lo && x <= hi) {
            return None;
        }
        let k = (((x - lo) / self.width) as usize).min(self.values.len() - 1);
        let mid = lo + (k as f64 + 0.5) * self.width;
        let t = (x - mid) / (0.5 * self.width);
        let vals = &self.values[k];
        let (mut num, mut den) = (0.0, 0.0);
        for (j, &xj) in self.nodes.iter().enumerate() {
            let d = t - xj;
            if d == 0.0 {
                return Some(vals[j]);
            }
            let c = self.bary[j] / d;
            num += c * vals[j];
            den += c;
        }
        Some(num / den)
    }
}
