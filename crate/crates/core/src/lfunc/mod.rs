//! Dirichlet series, gamma factors and completed functions of the form
//! Z(s) = γ(s)·D(s).

pub mod builders;
pub mod elliptic;
pub mod smoothed;
pub mod zeta;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, C64};

pub use builders::{
    build_z_e, build_z_e_squared, build_z_k, build_z_model, power_search_m, uv_split_e, ModelData, UvPair,
};
pub use elliptic::{ec_an, ec_ap, hasse_weil_coeffs, EllipticCurve, Reduction};
pub use smoothed::SmoothedSeries;
pub use zeta::{
    completed_dedekind, completed_riemann, dedekind_zeta, hurwitz_zeta, kronecker, quad_dirichlet_l,
    riemann_zeta, QuadField,
};

/// γ(s) = prefactor · 𝔮^{s/2} · ∏Γ(λ_j s + μ_j) / ∏Γ(λ'_k s + μ'_k).
///
/// `inverse_shifts` is empty for ordinary L-functions; it is used by the
/// quotient functions such as Z_K whose archimedean part is a ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFactor {
    pub conductor_q: f64,
    pub prefactor: f64,
    pub shifts: Vec<(f64, C64)>,
    #[serde(default)]
    pub inverse_shifts: Vec<(f64, C64)>,
    pub r1: u32,
    pub r2: u32,
}

impl GammaFactor {
    pub fn new(conductor_q: f64, shifts: Vec<(f64, C64)>, r1: u32, r2: u32) -> Result<Self> {
        let g = GammaFactor { conductor_q, prefactor: 1.0, shifts, inverse_shifts: Vec::new(), r1, r2 };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.conductor_q > 0.0) || !(self.prefactor != 0.0) {
            return Err(Error::InvalidInput("gamma factor needs q > 0 and a nonzero prefactor".into()));
        }
        if self.shifts.iter().chain(&self.inverse_shifts).any(|(l, _)| !(*l > 0.0)) {
            return Err(Error::InvalidInput("gamma factor needs every λ_j > 0".into()));
        }
        Ok(())
    }

    /// The constant factor 1.
    pub fn trivial() -> Self {
        GammaFactor { conductor_q: 1.0, prefactor: 1.0, shifts: Vec::new(), inverse_shifts: Vec::new(), r1: 0, r2: 0 }
    }

    /// Γ_R(s) = π^{-s/2}Γ(s/2).
    pub fn gamma_r() -> Self {
        GammaFactor {
            conductor_q: 1.0 / PI,
            prefactor: 1.0,
            shifts: vec![(0.5, C64::new(0.0, 0.0))],
            inverse_shifts: Vec::new(),
            r1: 1,
            r2: 0,
        }
    }

    /// Γ_C(s) = (2π)^{-s}Γ(s).
    pub fn gamma_c() -> Self {
        GammaFactor {
            conductor_q: 1.0 / (4.0 * PI * PI),
            prefactor: 1.0,
            shifts: vec![(1.0, C64::new(0.0, 0.0))],
            inverse_shifts: Vec::new(),
            r1: 0,
            r2: 1,
        }
    }

    /// Plain Γ(s).
    pub fn gamma() -> Self {
        GammaFactor {
            conductor_q: 1.0,
            prefactor: 1.0,
            shifts: vec![(1.0, C64::new(0.0, 0.0))],
            inverse_shifts: Vec::new(),
            r1: 0,
            r2: 0,
        }
    }

    /// N^{s/2}Γ_C(s), the archimedean factor of an elliptic curve over ℚ.
    pub fn elliptic(conductor: f64) -> Self {
        let mut g = Self::gamma_c();
        g.conductor_q *= conductor;
        g.r1 = 1;
        g.r2 = 0;
        g
    }

    /// Multiply by Γ_R(a s + b) (in the denominator when `inverse`).
    pub fn with_gamma_r(mut self, a: f64, b: f64, inverse: bool) -> Self {
        // π^{-(as+b)/2} Γ(as/2 + b/2)
        let sign = if inverse { -1.0 } else { 1.0 };
        self.conductor_q *= PI.powf(-a * sign);
        self.prefactor *= PI.powf(-b * sign / 2.0);
        let entry = (a / 2.0, C64::new(b / 2.0, 0.0));
        if inverse {
            self.inverse_shifts.push(entry);
        } else {
            self.shifts.push(entry);
        }
        self
    }

    /// Multiply by Γ_C(a s + b) (in the denominator when `inverse`).
    pub fn with_gamma_c(mut self, a: f64, b: f64, inverse: bool) -> Self {
        let sign = if inverse { -1.0 } else { 1.0 };
        let two_pi = 2.0 * PI;
        self.conductor_q *= two_pi.powf(-2.0 * a * sign);
        self.prefactor *= two_pi.powf(-b * sign);
        let entry = (a, C64::new(b, 0.0));
        if inverse {
            self.inverse_shifts.push(entry);
        } else {
            self.shifts.push(entry);
        }
        self
    }

    pub fn log_eval(&self, s: C64) -> Result<C64> {
        let mut acc = s * 0.5 * self.conductor_q.ln() + self.prefactor.abs().ln();
        if self.prefactor < 0.0 {
            acc += C64::new(0.0, PI);
        }
        for (l, m) in &self.shifts {
            acc += specfun::log_gamma(s * *l + *m)?;
        }
        for (l, m) in &self.inverse_shifts {
            acc -= specfun::log_gamma(s * *l + *m)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, s: C64) -> Result<C64> {
        Ok(self.log_eval(s)?.exp())
    }

    /// Rate ρ in |γ(σ+it)| ≍ |t|^{p(σ)} e^{-ρ|t|}.
    pub fn stirling_rate(&self) -> f64 {
        let num: f64 = self.shifts.iter().map(|(l, _)| l).sum();
        let den: f64 = self.inverse_shifts.iter().map(|(l, _)| l).sum();
        0.5 * PI * (num - den)
    }

    /// Power p(σ) in |γ(σ+it)| ≍ |t|^{p(σ)} e^{-ρ|t|}.
    pub fn stirling_power(&self, sigma: f64) -> f64 {
        let num: f64 = self.shifts.iter().map(|(l, m)| l * sigma + m.re - 0.5).sum();
        let den: f64 = self.inverse_shifts.iter().map(|(l, m)| l * sigma + m.re - 0.5).sum();
        num - den
    }

    /// The same factor evaluated at c·s.
    pub fn rescaled(&self, c: f64) -> Self {
        let mut g = self.clone();
        g.conductor_q = self.conductor_q.powf(c);
        g.shifts = self.shifts.iter().map(|(l, m)| (l * c, *m)).collect();
        g.inverse_shifts = self.inverse_shifts.iter().map(|(l, m)| (l * c, *m)).collect();
        g
    }
}

/// Coefficients a_1..a_N of a Dirichlet series ∑ a_n n^{-s}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCoefficients {
    /// `values[n]` is a_n; `values[0]` is unused and zero.
    pub values: Vec<f64>,
    /// Right edge σ₁ of guaranteed absolute convergence.
    pub declared_abscissa: f64,
}

impl DirichletCoefficients {
    pub fn new(mut values: Vec<f64>, declared_abscissa: f64) -> Self {
        if values.is_empty() {
            values.push(0.0);
        }
        values[0] = 0.0;
        DirichletCoefficients { values, declared_abscissa }
    }

    /// a_n = 1 for all n ≤ len (the Riemann zeta function).
    pub fn ones(len: usize) -> Self {
        let mut v = vec![1.0; len + 1];
        v[0] = 0.0;
        DirichletCoefficients { values: v, declared_abscissa: 1.0 }
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values.get(n).copied().unwrap_or(0.0)
    }

    // Constant C in |a_n| ≤ C n^{σ₁-1}, estimated from the stored range.
    fn growth_constant(&self) -> f64 {
        let alpha = self.declared_abscissa - 1.0;
        (1..=self.len()).map(|n| self.values[n].abs() / (n as f64).powf(alpha)).fold(0.0, f64::max)
    }

    /// Bound for ∑_{n>N} |a_n| n^{-σ}; infinite when σ ≤ σ₁.
    pub fn tail_bound(&self, sigma: f64) -> f64 {
        let gap = sigma - self.declared_abscissa;
        if gap <= 0.0 {
            return f64::INFINITY;
        }
        let n = self.len() as f64;
        // log-divisor slack: the growth constant is only sampled
        let slack = 1.0 + n.ln();
        slack * self.growth_constant() * n.powf(-gap) / gap
    }

    /// Direct summation ∑ a_n n^{-s} with tail bound.
    pub fn eval(&self, s: C64) -> (C64, f64) {
        let mut acc = C64::new(0.0, 0.0);
        for n in (1..=self.len()).rev() {
            let a = self.values[n];
            if a != 0.0 {
                acc += (-s * (n as f64).ln()).exp() * a;
            }
        }
        (acc, self.tail_bound(s.re))
    }
}

pub type EvalFn = Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>;

/// How a spec's completed function is evaluated.
#[derive(Clone)]
pub enum Evaluator {
    /// Λ_Q(s) by Euler–Maclaurin.
    Riemann,
    /// Λ_K(s) for a quadratic field.
    Dedekind(QuadField),
    /// γ(s)·D(s) with D summed directly, reflected through the functional
    /// equation on the left half; fails inside the critical strip.
    Direct,
    /// Single-gamma entire function through the smoothed functional equation.
    Smoothed(Arc<SmoothedSeries>),
    /// Any closure, typically a product/quotient of other completed functions.
    Composite(EvalFn),
}

impl fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluator::Riemann => write!(f, "Riemann"),
            Evaluator::Dedekind(k) => write!(f, "Dedekind({})", k.fundamental_discriminant),
            Evaluator::Direct => write!(f, "Direct"),
            Evaluator::Smoothed(_) => write!(f, "Smoothed"),
            Evaluator::Composite(_) => write!(f, "Composite"),
        }
    }
}

/// A member of the class of completed functions Z(s) = γ(s)D(s).
#[derive(Debug, Clone)]
pub struct LFunctionSpec {
    pub label: String,
    pub coefficients: Arc<DirichletCoefficients>,
    pub gamma: GammaFactor,
    pub sign_eps: C64,
    pub weight_d: u32,
    pub pole_strip_halfwidth_w: f64,
    pub evaluator: Evaluator,
    /// Candidate poles (location, maximal order) from the construction.
    pub structural_poles: Vec<(C64, u32)>,
    /// Decay exponents filled in by analytics, if computed.
    pub exponent_a1: Option<f64>,
    pub exponent_a2: Option<f64>,
    /// Tolerance for the direct Dirichlet tail.
    pub tail_tolerance: f64,
}

impl LFunctionSpec {
    pub fn new(
        label: impl Into<String>,
        coefficients: Arc<DirichletCoefficients>,
        gamma: GammaFactor,
        sign_eps: C64,
        weight_d: u32,
        evaluator: Evaluator,
    ) -> Result<Self> {
        if (sign_eps.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("|ε| must be 1, got {}", sign_eps.norm())));
        }
        gamma.validate()?;
        Ok(LFunctionSpec {
            label: label.into(),
            coefficients,
            gamma,
            sign_eps,
            weight_d,
            pole_strip_halfwidth_w: 0.5,
            evaluator,
            structural_poles: Vec::new(),
            exponent_a1: None,
            exponent_a2: None,
            tail_tolerance: 1e-12,
        })
    }

    /// Λ_Q(s) = Γ_R(s)ζ(s).
    pub fn riemann() -> Self {
        let mut spec = LFunctionSpec::new(
            "riemann",
            Arc::new(DirichletCoefficients::ones(1000)),
            GammaFactor::gamma_r(),
            C64::new(1.0, 0.0),
            0,
            Evaluator::Riemann,
        )
        .expect("valid constant spec");
        spec.structural_poles = vec![(C64::new(0.0, 0.0), 1), (C64::new(1.0, 0.0), 1)];
        spec
    }

    /// Λ_K(s) for a quadratic field (Λ_Q when d_K = 1).
    pub fn dedekind(field: QuadField) -> Result<Self> {
        if field.is_rational() {
            return Ok(Self::riemann());
        }
        let d = field.fundamental_discriminant;
        let len = 1000;
        let mut values = vec![0.0; len + 1];
        for n in 1..=len {
            // ζ_K coefficients: ∑_{m|n} χ(m)
            let mut acc = 0;
            for m in 1..=n {
                if n % m == 0 {
                    acc += kronecker(d, m as u64);
                }
            }
            values[n] = acc as f64;
        }
        let mut gamma = if field.r1 == 2 {
            GammaFactor::trivial().with_gamma_r(1.0, 0.0, false).with_gamma_r(1.0, 0.0, false)
        } else {
            GammaFactor::trivial().with_gamma_c(1.0, 0.0, false)
        };
        gamma.conductor_q *= d.unsigned_abs() as f64;
        gamma.r1 = field.r1;
        gamma.r2 = field.r2;
        let mut spec = LFunctionSpec::new(
            format!("dedekind_{d}"),
            Arc::new(DirichletCoefficients::new(values, 1.0)),
            gamma,
            C64::new(1.0, 0.0),
            0,
            Evaluator::Dedekind(field),
        )?;
        spec.structural_poles = vec![(C64::new(0.0, 0.0), 1), (C64::new(1.0, 0.0), 1)];
        Ok(spec)
    }

    /// Center (d+1)/2 of the functional equation.
    pub fn center(&self) -> f64 {
        (self.weight_d as f64 + 1.0) / 2.0
    }

    /// D(s) = Z(s)/γ(s).
    pub fn dirichlet_part(&self, s: C64) -> Result<C64> {
        match &self.evaluator {
            Evaluator::Riemann => riemann_zeta(s),
            Evaluator::Dedekind(k) => dedekind_zeta(s, k),
            _ => Ok(completed_l(self, s)? / self.gamma.eval(s)?),
        }
    }
}

/// The completed function of `spec` at `s`.
pub fn completed_l(spec: &LFunctionSpec, s: C64) -> Result<C64> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    match &spec.evaluator {
        Evaluator::Riemann => completed_riemann(s),
        Evaluator::Dedekind(k) => completed_dedekind(s, k),
        Evaluator::Smoothed(series) => series.eval(s),
        Evaluator::Composite(f) => f(s),
        Evaluator::Direct => {
            // real coefficients: the dual function is the function itself
            let k = spec.weight_d as f64 + 1.0;
            let (z, factor) =
                if s.re >= k / 2.0 { (s, C64::new(1.0, 0.0)) } else { (C64::new(k, 0.0) - s, spec.sign_eps) };
            let (d, tail) = spec.coefficients.eval(z);
            if !(tail <= spec.tail_tolerance * d.norm().max(1e-300)) {
                return Err(Error::PrecisionLoss(format!(
                    "Dirichlet tail {tail:e} at Re s = {} exceeds tolerance; use the smoothed path",
                    z.re
                )));
            }
            Ok(spec.gamma.eval(z)? * d * factor)
        }
    }
}
