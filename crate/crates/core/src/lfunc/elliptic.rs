//! Elliptic curves over ℚ: traces of Frobenius, L-series coefficients and
//! the Dirichlet coefficients of the Hasse–Weil zeta function ζ_E(2s).

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lfunc::DirichletCoefficients;

/// Largest coefficient depth accepted by `ec_an`.
pub const COEFF_CAP: usize = 2_000_000;
pub const DEFAULT_DEPTH: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Good,
    Split,
    Nonsplit,
    Additive,
}

impl Reduction {
    pub fn trace(self) -> Option<i64> {
        match self {
            Reduction::Good => None,
            Reduction::Split => Some(1),
            Reduction::Nonsplit => Some(-1),
            Reduction::Additive => Some(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPrime {
    pub p: u64,
    #[serde(rename = "type")]
    pub kind: Reduction,
}

/// y² + a1xy + a3y = x³ + a2x² + a4x + a6, assumed minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurve {
    pub label: String,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub conductor: u64,
    #[serde(rename = "sign")]
    pub sign_omega: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad_primes: Option<Vec<BadPrime>>,
}

const BUILTIN: [(&str, &str); 3] = [
    ("11a1", include_str!("../../data/curves/11a1.json")),
    ("37a1", include_str!("../../data/curves/37a1.json")),
    ("389a1", include_str!("../../data/curves/389a1.json")),
];

impl EllipticCurve {
    pub fn new(label: &str, a: [i64; 5], conductor: u64, sign_omega: i32) -> Result<Self> {
        let c = EllipticCurve {
            label: label.to_string(),
            a1: a[0],
            a2: a[1],
            a3: a[2],
            a4: a[3],
            a6: a[4],
            conductor,
            sign_omega,
            bad_primes: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.discriminant() == 0 {
            return Err(Error::InvalidInput(format!("curve {} is singular", self.label)));
        }
        if self.sign_omega != 1 && self.sign_omega != -1 {
            return Err(Error::InvalidInput(format!("root number must be ±1, got {}", self.sign_omega)));
        }
        if self.conductor == 0 {
            return Err(Error::InvalidInput("conductor must be positive".into()));
        }
        Ok(())
    }

    /// One of the shipped curves: 11a1, 37a1, 389a1.
    pub fn builtin(label: &str) -> Result<Self> {
        BUILTIN
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, json)| Self::from_json(json))
            .unwrap_or_else(|| Err(Error::InvalidInput(format!("unknown curve label '{label}'"))))
    }

    pub fn builtin_labels() -> Vec<&'static str> {
        BUILTIN.iter().map(|(l, _)| *l).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: EllipticCurve = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn coefficients(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    pub fn discriminant(&self) -> i128 {
        let (a1, a2, a3, a4, a6) =
            (self.a1 as i128, self.a2 as i128, self.a3 as i128, self.a4 as i128, self.a6 as i128);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    /// Reduction type at p, from the user override when present.
    pub fn reduction(&self, p: u64) -> Reduction {
        if let Some(list) = &self.bad_primes {
            if let Some(bp) = list.iter().find(|b| b.p == p) {
                return bp.kind;
            }
        }
        if self.discriminant() % p as i128 != 0 {
            return Reduction::Good;
        }
        reduction_from_singular_point(self, p)
    }
}

fn md(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

// Tangent cone at the singular point of the reduced cubic.
fn reduction_from_singular_point(c: &EllipticCurve, p: u64) -> Reduction {
    let p = p as i64;
    let [a1, a2, a3, a4, a6] = c.coefficients().map(|a| md(a, p));
    for x in 0..p {
        for y in 0..p {
            let f = md(y * y + a1 * x % p * y + a3 * y - x * x % p * x - a2 * x % p * x - a4 * x - a6, p);
            let fx = md(a1 * y - 3 * x * x - 2 * a2 * x - a4, p);
            let fy = md(2 * y + a1 * x + a3, p);
            if f == 0 && fx == 0 && fy == 0 {
                // Y² + a1·XY - (3x + a2)·X²
                let c0 = md(-(3 * x + a2), p);
                if p == 2 {
                    return if a1 % 2 == 0 {
                        Reduction::Additive
                    } else if c0 == 0 {
                        Reduction::Split
                    } else {
                        Reduction::Nonsplit
                    };
                }
                let disc = md(a1 * a1 - 4 * c0, p);
                if disc == 0 {
                    return Reduction::Additive;
                }
                return if legendre(disc, p) == 1 { Reduction::Split } else { Reduction::Nonsplit };
            }
        }
    }
    // p divides Δ of a non-minimal model; treat as additive
    Reduction::Additive
}

fn legendre(a: i64, p: i64) -> i64 {
    let mut result = 1i64;
    let mut base = md(a, p);
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == p - 1 { -1 } else { result }
}

/// Number of points on the reduction mod p, including ∞ and any singular point.
pub fn count_points(c: &EllipticCurve, p: u64) -> u64 {
    let pi = p as i64;
    let [a1, a2, a3, a4, a6] = c.coefficients().map(|a| md(a, pi));
    if p == 2 {
        let mut n = 1;
        for x in 0..2 {
            for y in 0..2 {
                if md(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6, 2) == 0 {
                    n += 1;
                }
            }
        }
        return n;
    }
    // (2y + a1x + a3)² = d(x) = 4x³ + b2x² + 2b4x + b6, stepped by forward differences
    let pu = p as usize;
    let mut is_square = vec![false; pu];
    let mut sq = 0usize;
    for i in 0..pu.div_ceil(2) {
        is_square[sq] = true;
        sq += 2 * i + 1;
        while sq >= pu {
            sq -= pu;
        }
    }
    let d = |x: i64| md(4 * x * x * x + (4 * a2 + a1 * a1) * x * x + (4 * a4 + 2 * a1 * a3) * x + 4 * a6 + a3 * a3, pi);
    let (d0, d1, d2, d3) = (d(0), d(1), d(2), d(3));
    let mut v = d0;
    let mut f1 = md(d1 - d0, pi);
    let mut f2 = md(d2 - 2 * d1 + d0, pi);
    let f3 = md(d3 - 3 * d2 + 3 * d1 - d0, pi);
    let step = |a: &mut i64, b: i64| {
        *a += b;
        if *a >= pi {
            *a -= pi;
        }
    };
    let mut n: u64 = 1;
    for _ in 0..pi {
        n += if v == 0 {
            1
        } else if is_square[v as usize] {
            2
        } else {
            0
        };
        step(&mut v, f1);
        step(&mut f1, f2);
        step(&mut f2, f3);
    }
    n
}

/// Trace of Frobenius a_p (±1 or 0 at bad primes by reduction type).
pub fn ec_ap(curve: &EllipticCurve, p: u64) -> i64 {
    match curve.reduction(p).trace() {
        Some(t) => t,
        None => p as i64 + 1 - count_points(curve, p) as i64,
    }
}

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

type CoeffKey = ([i64; 5], usize);

fn an_cache() -> &'static Mutex<HashMap<CoeffKey, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CoeffKey, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients a_0..a_N (a_0 = 0) of L(E,s), memoized per process.
pub fn ec_an_integers(curve: &EllipticCurve, n: usize) -> Result<Arc<Vec<i64>>> {
    if n > COEFF_CAP {
        return Err(Error::Overflow { requested: n, cap: COEFF_CAP });
    }
    let key = (curve.coefficients(), n);
    if let Some(v) = an_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let spf = smallest_prime_factors(n.max(1));
    let mut a = vec![0i64; n + 1];
    if n >= 1 {
        a[1] = 1;
    }
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut pk = p;
        let mut rest = m / p;
        while rest % p == 0 {
            rest /= p;
            pk *= p;
        }
        if rest > 1 {
            a[m] = a[pk] * a[rest];
            continue;
        }
        // m = p^k
        if pk == p {
            a[m] = ec_ap(curve, p as u64);
        } else if curve.conductor % p as u64 == 0 {
            a[m] = a[p] * a[m / p];
        } else {
            a[m] = a[p] * a[m / p] - p as i64 * a[m / p / p];
        }
    }
    let arc = Arc::new(a);
    an_cache().lock().unwrap().insert(key, arc.clone());
    Ok(arc)
}

/// Coefficients a_n of L(E,s) for n ≤ N.
pub fn ec_an(curve: &EllipticCurve, n: usize) -> Result<DirichletCoefficients> {
    let a = ec_an_integers(curve, n)?;
    Ok(DirichletCoefficients::new(a.iter().map(|&x| x as f64).collect(), 1.5))
}

/// Dirichlet inverse of a multiplicative sequence with a_1 = 1.
pub fn dirichlet_inverse(a: &[i64]) -> Vec<i64> {
    let n = a.len() - 1;
    let mut b = vec![0i64; n + 1];
    if n == 0 {
        return b;
    }
    b[1] = 1;
    for m in 2..=n {
        let mut acc = 0i64;
        let mut d = 1;
        while d * d <= m {
            if m % d == 0 {
                let e = m / d;
                if d < m {
                    acc += a[e] * b[d];
                }
                if e != d && e < m {
                    acc += a[d] * b[e];
                }
            }
            d += 1;
        }
        b[m] = -acc;
    }
    b
}

/// Dirichlet convolution of two sequences indexed from 1.
pub fn dirichlet_convolve(x: &[i64], y: &[i64]) -> Vec<i64> {
    let n = x.len().min(y.len()) - 1;
    let mut out = vec![0i64; n + 1];
    for d in 1..=n {
        if x[d] == 0 {
            continue;
        }
        let mut m = d;
        let mut k = 1;
        while m <= n {
            out[m] += x[d] * y[k];
            m += d;
            k += 1;
        }
    }
    out
}

/// Coefficients e_k of ζ_E(s) = ζ(s)ζ(s-1)/L(E,s), k ≤ K.
pub fn hasse_weil_e(curve: &EllipticCurve, k: usize) -> Result<Vec<i64>> {
    let a = ec_an_integers(curve, k)?;
    let b = dirichlet_inverse(&a);
    let ones: Vec<i64> = (0..=k).map(|i| if i == 0 { 0 } else { 1 }).collect();
    let ids: Vec<i64> = (0..=k as i64).collect();
    let sigma1 = dirichlet_convolve(&ones, &ids);
    Ok(dirichlet_convolve(&sigma1, &b))
}

/// Coefficients c_m of ζ_E(2s) = ∑ c_m m^{-s}, m ≤ M (c_{k²} = e_k, zero elsewhere).
pub fn hasse_weil_coeffs(curve: &EllipticCurve, m: usize) -> Result<DirichletCoefficients> {
    let k_max = (m as f64).sqrt().floor() as usize;
    let e = hasse_weil_e(curve, k_max.max(1))?;
    let mut c = vec![0.0; m + 1];
    for k in 1..=k_max {
        c[k * k] = e[k] as f64;
    }
    Ok(DirichletCoefficients::new(c, 1.0))
}

/// Read an `n,a_n` cache file; `None` when absent or stale.
pub fn read_coefficient_cache(path: &Path, curve: &EllipticCurve, n: usize) -> Result<Option<Vec<i64>>> {
    if !path.exists() {
        return Ok(None);
    }
    let mut rdr = csv::Reader::from_path(path)?;
    let mut values = vec![0i64];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let idx: usize = rec.get(0).and_then(|x| x.trim().parse().ok()).ok_or(Error::Parse {
            line: i + 2,
            msg: "bad index".into(),
        })?;
        let val: i64 = rec.get(1).and_then(|x| x.trim().parse().ok()).ok_or(Error::Parse {
            line: i + 2,
            msg: "bad coefficient".into(),
        })?;
        if idx != values.len() {
            return Ok(None);
        }
        values.push(val);
    }
    if values.len() < n + 1 || n < 3 {
        return Ok(None);
    }
    if values[2] != ec_ap(curve, 2) || values[3] != ec_ap(curve, 3) {
        return Ok(None);
    }
    values.truncate(n + 1);
    Ok(Some(values))
}

pub fn write_coefficient_cache(path: &Path, a: &[i64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "a_n"])?;
    for (n, v) in a.iter().enumerate().skip(1) {
        w.write_record([n.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Coefficients through an on-disk cache keyed by label and depth.
pub fn ec_an_cached(curve: &EllipticCurve, n: usize, cache_dir: &Path) -> Result<DirichletCoefficients> {
    std::fs::create_dir_all(cache_dir)?;
    let path = cache_dir.join(format!("{}_{}.csv", curve.label, n));
    if let Some(v) = read_coefficient_cache(&path, curve, n)? {
        an_cache().lock().unwrap().insert((curve.coefficients(), n), Arc::new(v.clone()));
        return Ok(DirichletCoefficients::new(v.iter().map(|&x| x as f64).collect(), 1.5));
    }
    let a = ec_an_integers(curve, n)?;
    write_coefficient_cache(&path, &a)?;
    Ok(DirichletCoefficients::new(a.iter().map(|&x| x as f64).collect(), 1.5))
}
