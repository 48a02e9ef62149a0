//! Composite Simpson quadrature and the Green's kernel of the linear wave operator.
//!
//! The kernel is the bounded solution of `G'' - c·G'(·+r₁) - δ·G(·+r₁) = -δ₀`,
//! given by the Fourier integral
//!
//! ```text
//! G(t) = -(1/2π) ∫ e^{iξt} / Δ₁(iξ) dξ,   Δ₁(iξ) = -ξ² - c·iξ·e^{iξr₁} - δ·e^{iξr₁}
//! ```
//!
//! truncated to `|ξ| ≤ N`. Before truncating, the two leading terms of the
//! large-`ξ` expansion `1/Δ₁(iξ) ≈ -1/ξ² + i·c·e^{iξr₁}/ξ³` are subtracted in a
//! regularized form whose transforms are known exactly, so the truncated
//! remainder decays like `ξ⁻⁴` instead of `ξ⁻²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::charroots::{CharFn, CharKind};
use crate::model::ModelParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid Simpson plan: {0}")]
    Plan(String),
    #[error("integrand is not finite at node {index} (x = {x})")]
    NonFinite { index: usize, x: f64 },
    #[error("characteristic denominator vanishes on the contour at xi = {xi} (|D| = {abs:e})")]
    ContourSingularity { xi: f64, abs: f64 },
    #[error("invalid kernel grid: {0}")]
    Grid(String),
    #[error("kernel does not decay: {0}")]
    KernelQuality(String),
    #[error("epsilon must be positive, got {0}")]
    Epsilon(f64),
}

/// Uniform partition of `[lower, upper]` into an even number of subintervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonPlan {
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
    pub h: f64,
}

impl SimpsonPlan {
    pub fn new(lower: f64, upper: f64, n: usize) -> Result<Self, QuadError> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(QuadError::Plan(format!("n must be even and >= 2, got {n}")));
        }
        if !(upper > lower) || !lower.is_finite() || !upper.is_finite() {
            return Err(QuadError::Plan(format!("need finite lower < upper, got [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper, n, h: (upper - lower) / n as f64 })
    }

    pub fn node(&self, j: usize) -> f64 {
        self.lower + j as f64 * self.h
    }

    /// Simpson weight of node `j`, without the `h/3` factor.
    fn weight(&self, j: usize) -> f64 {
        if j == 0 || j == self.n {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        }
    }
}

/// Composite Simpson sum `h/3·[f₀ + 4f₁ + 2f₂ + … + 4f_{n-1} + f_n]`.
pub fn simpson<F: Fn(f64) -> Complex64>(integrand: F, plan: &SimpsonPlan) -> Result<Complex64, QuadError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=plan.n {
        let x = plan.node(j);
        let v = integrand(x);
        if !v.is_finite() {
            return Err(QuadError::NonFinite { index: j, x });
        }
        acc += v * plan.weight(j);
    }
    Ok(acc * (plan.h / 3.0))
}

/// Real-valued convenience wrapper.
pub fn simpson_real<F: Fn(f64) -> f64>(integrand: F, plan: &SimpsonPlan) -> Result<f64, QuadError> {
    Ok(simpson(|x| Complex64::new(integrand(x), 0.0), plan)?.re)
}

/// Simpson subintervals needed for at least 20 nodes per period of `e^{iξt}`
/// on `[-N, N]` for all `|t| ≤ t_max`.
pub fn default_n_freq(n_trunc: f64, t_max: f64) -> usize {
    let n = (40.0 * n_trunc * t_max.abs() / PI).ceil() as usize;
    let n = n.max(20_000);
    n + n % 2
}

/// Width of the Lorentzian used in the asymptotic subtraction.
const MODEL_WIDTH: f64 = 1.0;

/// Frequency-side data for the kernel: Simpson weights times the regularized
/// integrand on `[-N, N]`.
#[derive(Debug, Clone)]
struct FourierData {
    xi: Vec<f64>,
    weighted: Vec<Complex64>,
    c: f64,
    r1: f64,
    subtract: bool,
}

impl FourierData {
    fn new(params: &ModelParams, n_trunc: f64, n_freq: usize, subtract: bool) -> Result<Self, QuadError> {
        let plan = SimpsonPlan::new(-n_trunc, n_trunc, n_freq)?;
        let ce = CharFn::new(CharKind::Ce, params);
        let k2 = MODEL_WIDTH * MODEL_WIDTH;
        let mut xi = Vec::with_capacity(n_freq + 1);
        let mut weighted = Vec::with_capacity(n_freq + 1);
        for j in 0..=n_freq {
            let x = plan.node(j);
            let d = ce.eval(Complex64::new(0.0, x));
            if !(d.norm() >= 1e-12) {
                return Err(QuadError::ContourSingularity { xi: x, abs: d.norm() });
            }
            let mut v = d.inv();
            if subtract {
                let lor = x * x + k2;
                let m1 = -1.0 / lor;
                let m2 = Complex64::new(0.0, params.c * x) * Complex64::from_polar(1.0, x * params.r1) / (lor * lor);
                v = v - m1 - m2;
            }
            xi.push(x);
            weighted.push(v * (plan.weight(j) * plan.h / 3.0));
        }
        Ok(Self { xi, weighted, c: params.c, r1: params.r1, subtract })
    }

    /// Exact transforms `∫ e^{iξt}·model(ξ) dξ` of the subtracted terms.
    fn model_transform(&self, t: f64) -> f64 {
        if !self.subtract {
            return 0.0;
        }
        let k = MODEL_WIDTH;
        let s = t + self.r1;
        -(PI / k) * (-k * t.abs()).exp() - self.c * PI * s / (2.0 * k) * (-k * s.abs()).exp()
    }

    fn finish(&self, t: f64, sum: Complex64) -> GreenSample {
        let total = sum + self.model_transform(t);
        GreenSample {
            value: -total.re / (2.0 * PI),
            imag_residual: (total.im / (2.0 * PI)).abs(),
        }
    }

    fn eval(&self, t: f64) -> GreenSample {
        let sum = self
            .xi
            .iter()
            .zip(&self.weighted)
            .fold(Complex64::new(0.0, 0.0), |acc, (&x, &w)| acc + w * Complex64::from_polar(1.0, x * t));
        self.finish(t, sum)
    }

    /// Evaluates on `t₀ + k·h`, `k = 0..count`, advancing the phasors by
    /// multiplication and reseeding them periodically.
    fn eval_uniform(&self, t0: f64, h: f64, count: usize) -> Vec<GreenSample> {
        const RESEED: usize = 256;
        let step: Vec<Complex64> = self.xi.iter().map(|&x| Complex64::from_polar(1.0, x * h)).collect();
        let mut phase: Vec<Complex64> = Vec::new();
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let t = t0 + k as f64 * h;
            if k % RESEED == 0 {
                phase = self.xi.iter().map(|&x| Complex64::from_polar(1.0, x * t)).collect();
            } else {
                for (p, s) in phase.iter_mut().zip(&step) {
                    *p *= s;
                }
            }
            let sum = phase
                .iter()
                .zip(&self.weighted)
                .fold(Complex64::new(0.0, 0.0), |acc, (p, w)| acc + p * w);
            out.push(self.finish(t, sum));
        }
        out
    }
}

/// One kernel sample: the real part and the discarded imaginary magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenSample {
    pub value: f64,
    pub imag_residual: f64,
}

/// `G(t)` with frequency truncation `n_trunc` and `n_freq` Simpson subintervals.
pub fn green_value(t: f64, params: &ModelParams, n_trunc: f64, n_freq: usize) -> Result<GreenSample, QuadError> {
    Ok(FourierData::new(params, n_trunc, n_freq, true)?.eval(t))
}

/// Same integral without the asymptotic subtraction: the bare truncated
/// Fourier integral, kept for comparison.
pub fn green_value_plain(t: f64, params: &ModelParams, n_trunc: f64, n_freq: usize) -> Result<GreenSample, QuadError> {
    Ok(FourierData::new(params, n_trunc, n_freq, false)?.eval(t))
}

/// Grid and truncation controls for a kernel table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub t_half: f64,
    pub step: f64,
    pub n_trunc: f64,
    /// `None` picks [`default_n_freq`] for `t_half`.
    pub n_freq: Option<usize>,
}

impl KernelSpec {
    pub fn new(t_half: f64, step: f64) -> Self {
        Self { t_half, step, n_trunc: 50.0, n_freq: None }
    }
}

/// Fitted envelope `|G(t)| ≤ m1·e^{-delta1·|t|}` on the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub m1: f64,
    pub delta1: f64,
}

/// Sampled kernel on the uniform grid `-t_half + k·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub t_half: f64,
    pub step: f64,
    pub values: Vec<f64>,
    pub r1: f64,
    pub c: f64,
    pub delta: f64,
    pub n_trunc: f64,
    pub n_freq: usize,
    pub decay_m1: f64,
    pub decay_delta1: f64,
    pub max_imag: f64,
    cumulative: Vec<f64>,
}

impl KernelTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of steps from the centre to either edge.
    pub fn half_count(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    pub fn t(&self, k: usize) -> f64 {
        (k as f64 - self.half_count() as f64) * self.step
    }

    pub fn ts(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.t(k)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Linear interpolation; zero outside the table (the truncated tails).
    pub fn at(&self, t: f64) -> f64 {
        let x = (t + self.t_half) / self.step;
        if !(x >= 0.0) || x > (self.len() - 1) as f64 {
            return 0.0;
        }
        let k = x.floor() as usize;
        if k + 1 >= self.len() {
            return self.values[self.len() - 1];
        }
        let w = x - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }

    /// Value at an integer offset from the centre, zero outside the table.
    pub fn at_offset(&self, offset: i64) -> f64 {
        let k = offset + self.half_count() as i64;
        if k < 0 || k as usize >= self.len() {
            0.0
        } else {
            self.values[k as usize]
        }
    }

    /// `∫_{-∞}^{u} G`: trapezoid inside the table, exponential tails with the
    /// fitted rate outside it.
    pub fn integral_below(&self, u: f64) -> f64 {
        let rate = self.decay_delta1;
        let left_tail = self.values[0] / rate;
        let x = (u + self.t_half) / self.step;
        if x <= 0.0 {
            return left_tail * (rate * (u + self.t_half)).exp();
        }
        let last = self.len() - 1;
        if x >= last as f64 {
            let right_tail = self.values[last] / rate;
            return left_tail + self.cumulative[last] + right_tail * (1.0 - (-rate * (u - self.t_half)).exp());
        }
        let k = x.floor() as usize;
        let w = x - k as f64;
        let gu = self.values[k] * (1.0 - w) + self.values[k + 1] * w;
        left_tail + self.cumulative[k] + 0.5 * (self.values[k] + gu) * w * self.step
    }

    /// `∫_{u}^{∞} G`.
    pub fn integral_above(&self, u: f64) -> f64 {
        self.total_mass() - self.integral_below(u)
    }

    /// Trapezoid mass `∫ G` over the table.
    pub fn mass(&self) -> f64 {
        self.cumulative[self.len() - 1]
    }

    /// Table mass plus both exponential tails.
    pub fn total_mass(&self) -> f64 {
        (self.values[0] + self.values[self.len() - 1]) / self.decay_delta1 + self.mass()
    }

    pub fn fit(&self) -> Result<DecayFit, QuadError> {
        fit_decay_samples(&self.ts(), &self.values, self.t_half)
    }

    /// Radius beyond which the envelope guarantees `|G(-N) + G(N)| < eps`.
    pub fn truncation_radius(&self, eps: f64) -> Result<f64, QuadError> {
        tail_truncation_radius(self.decay_m1, self.decay_delta1, eps, self.step)
    }
}

fn cumulative_trapezoid(values: &[f64], step: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * (w[0] + w[1]) * step;
        out.push(acc);
    }
    out
}

pub fn build_kernel_table(params: &ModelParams, spec: &KernelSpec) -> Result<KernelTable, QuadError> {
    if !(spec.t_half > 0.0 && spec.step > 0.0 && spec.n_trunc > 0.0) {
        return Err(QuadError::Grid(format!("grid parameters must be positive: {spec:?}")));
    }
    let ratio = spec.t_half / spec.step;
    let half = ratio.round();
    if (ratio - half).abs() > 1e-9 * ratio.max(1.0) {
        return Err(QuadError::Grid(format!(
            "step {} does not divide half-width {}",
            spec.step, spec.t_half
        )));
    }
    let half = half as usize;
    let n_freq = spec.n_freq.unwrap_or_else(|| default_n_freq(spec.n_trunc, spec.t_half));
    let data = FourierData::new(params, spec.n_trunc, n_freq, true)?;
    let samples = data.eval_uniform(-(half as f64) * spec.step, spec.step, 2 * half + 1);
    let values: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let max_imag = samples.iter().fold(0.0, |m: f64, s| m.max(s.imag_residual));
    let ts: Vec<f64> = (0..values.len()).map(|k| (k as f64 - half as f64) * spec.step).collect();
    let fit = fit_decay_samples(&ts, &values, spec.t_half)?;
    Ok(KernelTable {
        t_half: spec.t_half,
        step: spec.step,
        cumulative: cumulative_trapezoid(&values, spec.step),
        values,
        r1: params.r1,
        c: params.c,
        delta: params.delta,
        n_trunc: spec.n_trunc,
        n_freq,
        decay_m1: fit.m1,
        decay_delta1: fit.delta1,
        max_imag,
    })
}

/// Samples below this fraction of the peak are treated as quadrature noise.
const FIT_FLOOR: f64 = 1e-6;
const FIT_MIN_SAMPLES: usize = 8;

/// Log-linear least squares `ln|G| ≈ ln M - δ₁·|t|` on `|t| ≥ t_half/2`.
///
/// Each side is fitted on its own and the slower rate is kept; the amplitude
/// is raised so the envelope covers every fitted sample, then inflated by 10%.
/// A side with fewer than eight samples above the noise floor decays too fast
/// to resolve and is skipped.
pub fn fit_decay_samples(ts: &[f64], gs: &[f64], t_half: f64) -> Result<DecayFit, QuadError> {
    let peak = gs.iter().fold(0.0, |m: f64, g| m.max(g.abs()));
    let floor = FIT_FLOOR * peak;
    let mut fits = Vec::new();
    let mut used: Vec<(f64, f64)> = Vec::new();
    for sign in [-1.0, 1.0] {
        let pts: Vec<(f64, f64)> = ts
            .iter()
            .zip(gs)
            .filter(|(&t, &g)| t * sign >= 0.5 * t_half && g.abs() > floor && g.abs() > 0.0)
            .map(|(&t, &g)| (t.abs(), g.abs()))
            .collect();
        if pts.len() < FIT_MIN_SAMPLES {
            continue;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let slope = sxy / sxx;
        fits.push((slope, my - slope * mx));
        used.extend(pts);
    }
    if fits.is_empty() {
        return Err(QuadError::KernelQuality(format!(
            "fewer than {FIT_MIN_SAMPLES} tail samples above the noise floor"
        )));
    }
    let (slope, intercept) = fits.iter().copied().fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    let delta1 = -slope;
    if !(delta1 > 0.0) {
        return Err(QuadError::KernelQuality(format!("fitted tail slope {slope} is not negative")));
    }
    let cover = used.iter().fold(0.0, |m: f64, &(t, g)| m.max(g * (delta1 * t).exp()));
    Ok(DecayFit {
        m1: 1.1 * intercept.exp().max(cover),
        delta1,
    })
}

/// Smallest multiple of `step` with `m1·e^{-delta1·N} ≤ eps/2`.
pub fn tail_truncation_radius(m1: f64, delta1: f64, eps: f64, step: f64) -> Result<f64, QuadError> {
    if !(eps > 0.0) {
        return Err(QuadError::Epsilon(eps));
    }
    if 2.0 * m1 <= eps {
        return Ok(0.0);
    }
    let exact = (2.0 * m1 / eps).ln() / delta1;
    let units = exact / step;
    // tolerate round-off when exact is already on the grid
    let k = (units - 1e-9 * units.max(1.0)).ceil();
    Ok(k * step)
}

/// Which integrand the κ-table uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaMode {
    /// `1/[z² + (2iz + 1)·e^{z}]`, `z = ξ + i|λ₁|`.
    Printed,
    /// `1/Δ₁(iz)` with the model's `c`, `δ`, `r₁`.
    Consistent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaRow {
    pub n: usize,
    pub h: f64,
    pub abs_printed: f64,
    pub abs_consistent: f64,
}

/// Integrand of the κ-table on the shifted line `z = ξ + i|λ₁|`. Points where
/// the exponential saturates contribute zero.
pub fn kappa_integrand(mode: KappaMode, xi: f64, lambda1_abs: f64, params: &ModelParams) -> Complex64 {
    let z = Complex64::new(xi, lambda1_abs);
    let denom = match mode {
        KappaMode::Printed => z * z + (Complex64::new(0.0, 2.0) * z + 1.0) * z.exp(),
        KappaMode::Consistent => CharFn::new(CharKind::Ce, params).eval(Complex64::i() * z),
    };
    let v = denom.inv() / (2.0 * PI);
    if v.is_finite() {
        v
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// `|I_n|` on `[-50, 50]` for each step size, in both integrand modes.
pub fn kappa_table(params: &ModelParams, lambda1_abs: f64, step_sizes: &[f64]) -> Result<Vec<KappaRow>, QuadError> {
    step_sizes
        .iter()
        .map(|&h| {
            if !(h > 0.0) {
                return Err(QuadError::Plan(format!("step must be positive, got {h}")));
            }
            let n = (100.0 / h).round() as usize;
            let plan = SimpsonPlan::new(-50.0, 50.0, n)?;
            let printed = simpson(|x| kappa_integrand(KappaMode::Printed, x, lambda1_abs, params), &plan)?;
            let consistent = simpson(|x| kappa_integrand(KappaMode::Consistent, x, lambda1_abs, params), &plan)?;
            Ok(KappaRow {
                n,
                h: plan.h,
                abs_printed: printed.norm(),
                abs_consistent: consistent.norm(),
            })
        })
        .collect()
}

/// Zero-delay kernel `e^{λ₁t}/(λ₂-λ₁)` for `t ≥ 0`, `e^{λ₂t}/(λ₂-λ₁)` for `t < 0`.
pub fn zero_delay_kernel(c: f64, delta: f64, t: f64) -> f64 {
    let (l1, l2) = crate::charroots::quadratic_roots_lambda(c, delta);
    let rate = if t >= 0.0 { l1 } else { l2 };
    (rate * t).exp() / (l2 - l1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_exactness() {
        let p = SimpsonPlan::new(0.0, 1.0, 2).unwrap();
        assert_eq!(simpson_real(|_| 1.0, &p).unwrap(), 1.0);
        assert_relative_eq!(simpson_real(|x| x * x * x, &p).unwrap(), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn simpson_complex_exponential() {
        let p = SimpsonPlan::new(0.0, PI, 1000).unwrap();
        let v = simpson(|x| Complex64::from_polar(1.0, x), &p).unwrap();
        // (e^{iπ} - 1)/i = 2i
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-10);
    }

    #[test]
    fn simpson_fourth_order() {
        for n in [4usize, 8, 16, 32] {
            let e1 = simpson_real(|x| x.powi(4), &SimpsonPlan::new(0.0, 1.0, n).unwrap()).unwrap() - 0.2;
            let e2 = simpson_real(|x| x.powi(4), &SimpsonPlan::new(0.0, 1.0, 2 * n).unwrap()).unwrap() - 0.2;
            let ratio = e1 / e2;
            assert!((15.0..=17.0).contains(&ratio), "ratio {ratio} at n = {n}");
        }
    }

    #[test]
    fn simpson_errors() {
        assert!(SimpsonPlan::new(0.0, 1.0, 3).is_err());
        assert!(SimpsonPlan::new(0.0, 1.0, 0).is_err());
        assert!(SimpsonPlan::new(1.0, 0.0, 2).is_err());
        let p = SimpsonPlan::new(0.0, 1.0, 4).unwrap();
        let err = simpson_real(|x| 1.0 / (x - 0.5), &p).unwrap_err();
        assert_eq!(err, QuadError::NonFinite { index: 2, x: 0.5 });
    }

    #[test]
    fn model_transforms_match_quadrature() {
        // The closed forms used for the subtracted terms against brute Simpson.
        let k = MODEL_WIDTH;
        let (c, r1, t) = (2.5, 0.3, 0.7);
        let plan = SimpsonPlan::new(-4000.0, 4000.0, 4_000_000).unwrap();
        let m1 = simpson(|x| Complex64::from_polar(1.0, x * t) * (-1.0 / (x * x + k * k)), &plan).unwrap();
        assert!((m1.re + PI / k * (-k * t).exp()).abs() < 1e-6);
        let m2 = simpson(
            |x| {
                Complex64::from_polar(1.0, x * (t + r1)) * Complex64::new(0.0, c * x) / ((x * x + k * k) * (x * x + k * k))
            },
            &plan,
        )
        .unwrap();
        let s = t + r1;
        assert!((m2.re + c * PI * s / (2.0 * k) * (-k * s).exp()).abs() < 1e-6);
    }

    #[test]
    fn green_zero_delay_closed_form() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.0, 0.0, 2.0 * 2f64.sqrt());
        let g0 = green_value(0.0, &p, 50.0, 20_000).unwrap();
        assert!((g0.value - 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-5);
        assert!(g0.imag_residual < 1e-12);
        for t in [-4.0, 4.0] {
            let g = green_value(t, &p, 50.0, 20_000).unwrap();
            assert!((g.value - zero_delay_kernel(p.c, p.delta, t)).abs() < 1e-4);
        }
    }

    #[test]
    fn green_hermitian_halves() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.5, 0.0, 2.0 * 2f64.sqrt());
        let ce = CharFn::new(CharKind::Ce, &p);
        let t = 1.3;
        let f = |x: f64| Complex64::from_polar(1.0, x * t) / ce.eval(Complex64::new(0.0, x));
        let left = simpson(f, &SimpsonPlan::new(-50.0, 0.0, 10_000).unwrap()).unwrap();
        let right = simpson(f, &SimpsonPlan::new(0.0, 50.0, 10_000).unwrap()).unwrap();
        assert!((left - right.conj()).norm() < 1e-12);
        assert!((left + right).im.abs() < 1e-12);
    }

    #[test]
    fn subtraction_agrees_with_plain_integral_at_large_cutoff() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.2, 0.0, 3.1);
        for t in [-1.0, 0.4, 3.0] {
            let fast = green_value(t, &p, 50.0, 20_000).unwrap().value;
            let slow = green_value_plain(t, &p, 3000.0, 1_200_000).unwrap().value;
            assert!((fast - slow).abs() < 2e-4, "t = {t}: {fast} vs {slow}");
        }
    }

    #[test]
    fn fit_synthetic_exponentials() {
        let ts: Vec<f64> = (-1000..=1000).map(|k| k as f64 * 0.01).collect();
        let g: Vec<f64> = ts.iter().map(|t| (-t.abs()).exp()).collect();
        let fit = fit_decay_samples(&ts, &g, 10.0).unwrap();
        assert_relative_eq!(fit.delta1, 1.0, max_relative = 1e-9);
        assert_relative_eq!(fit.m1, 1.1, max_relative = 1e-9);

        let g: Vec<f64> = ts
            .iter()
            .enumerate()
            .map(|(k, t)| (-2.0 * t.abs()).exp() + if k % 2 == 0 { 1e-12 } else { -1e-12 })
            .collect();
        let fit = fit_decay_samples(&ts, &g, 10.0).unwrap();
        assert!((1.9..=2.1).contains(&fit.delta1));

        let flat = vec![1.0; ts.len()];
        assert!(matches!(
            fit_decay_samples(&ts, &flat, 10.0),
            Err(QuadError::KernelQuality(_))
        ));
    }

    #[test]
    fn truncation_radius_examples() {
        assert_eq!(tail_truncation_radius(1.0, 1.0, 2.0 / std::f64::consts::E, 1.0).unwrap(), 1.0);
        let n = tail_truncation_radius(0.3, 0.3, 1e-6, 0.01).unwrap();
        let exact = (0.6f64 / 1e-6).ln() / 0.3;
        assert!(n >= exact && n - exact < 0.01 + 1e-12);
        assert!((n - 44.35).abs() < 0.01);
        assert_eq!(tail_truncation_radius(0.3, 0.3, 1.0, 0.01).unwrap(), 0.0);
        assert!(tail_truncation_radius(0.3, 0.3, 0.0, 0.01).is_err());
    }

    #[test]
    fn kernel_grid_validation() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.0, 0.0, 3.1);
        assert!(build_kernel_table(&p, &KernelSpec::new(1.0, 0.3)).is_err());
        assert!(build_kernel_table(&p, &KernelSpec::new(-1.0, 0.1)).is_err());
    }

    #[test]
    fn kappa_saturation_is_finite() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 1.0, 0.25, 2.0 * 2f64.sqrt());
        let v = kappa_integrand(KappaMode::Printed, 1e4, 0.3, &p);
        assert_eq!(v, Complex64::new(0.0, 0.0));
        assert!(kappa_integrand(KappaMode::Consistent, 49.9, 0.3, &p).is_finite());
    }
}
