//! Nicholson blowflies model with a delayed diffusion term, written in the
//! shifted wave frame.
//!
//! With `ξ = x + c·t` and the shift `t ↦ t - r₁`, a front `φ` solves
//!
//! ```text
//! φ''(t) - c·φ'(t + r₁) - δ·φ(t + r₁) + g(φ(t + r₁ - r₂)) = 0,   g(u) = p·u·e^{-a·u}
//! ```
//!
//! with `φ(-∞) = 0` and `φ(+∞) = uₑ = ln(p/δ)/a`. Adding `β·φ(t + r₁)` to both
//! sides gives the monotone splitting `H(φ)(t) = g(φ(t + r₁ - r₂)) + β·φ(t + r₁)`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("equilibria require 1 < p/delta <= e, got p/delta = {ratio}")]
    RatioOutOfRange { ratio: f64 },
    #[error("non-finite wave residual at t = {t}")]
    NonFinite { t: f64 },
}

/// Physical constants plus the wave-frame delays `r₁ = c·τ₁`, `r₂ = c·τ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub p: f64,
    pub delta: f64,
    pub a: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub c: f64,
    pub beta: f64,
    pub r1: f64,
    pub r2: f64,
}

impl ModelParams {
    /// Builds parameters from time delays; the wave-frame delays are derived.
    pub fn new(p: f64, delta: f64, a: f64, tau1: f64, tau2: f64, c: f64, beta: f64) -> Self {
        Self {
            p,
            delta,
            a,
            tau1,
            tau2,
            c,
            beta,
            r1: c * tau1,
            r2: c * tau2,
        }
    }

    /// Builds parameters directly from the wave-frame delays, keeping `r₁`, `r₂`
    /// bit-exact (the time delays are back-computed).
    pub fn from_wave_delays(p: f64, delta: f64, a: f64, r1: f64, r2: f64, c: f64) -> Self {
        Self {
            p,
            delta,
            a,
            tau1: r1 / c,
            tau2: r2 / c,
            c,
            beta: 0.0,
            r1,
            r2,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// Same physics with different wave-frame delays.
    pub fn with_delays(self, r1: f64, r2: f64) -> Self {
        Self::from_wave_delays(self.p, self.delta, self.a, r1, r2, self.c).with_beta(self.beta)
    }

    /// `uₑ = ln(p/δ)/a`, evaluated without checking the standing assumption.
    pub fn upper_equilibrium(&self) -> f64 {
        (self.p / self.delta).ln() / self.a
    }
}

/// A violated standing assumption.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositive { name: &'static str, value: f64 },
    NegativeDelay { name: &'static str, value: f64 },
    RatioNotAboveOne { ratio: f64 },
    RatioAboveE { ratio: f64 },
    SpeedBelowDeath { c: f64, bound: f64 },
    SpeedBelowBirth { c: f64, bound: f64 },
    DelayMismatch { name: &'static str, expected: f64, actual: f64 },
    NegativeBeta { beta: f64 },
}

fn equality_note(c: f64, bound: f64) -> &'static str {
    if c == bound {
        " (equality)"
    } else {
        ""
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositive { name, value } => write!(f, "{name} > 0 violated ({name} = {value})"),
            Violation::NegativeDelay { name, value } => write!(f, "{name} >= 0 violated ({name} = {value})"),
            Violation::RatioNotAboveOne { ratio } => write!(f, "1 < p/delta fails (p/delta = {ratio})"),
            Violation::RatioAboveE { ratio } => write!(f, "p/delta <= e fails (p/delta = {ratio})"),
            Violation::SpeedBelowDeath { c, bound } => write!(
                f,
                "c > 2*sqrt(delta) violated{} (c = {c}, 2*sqrt(delta) = {bound})",
                equality_note(*c, *bound)
            ),
            Violation::SpeedBelowBirth { c, bound } => write!(
                f,
                "c > 2*sqrt(p) violated{} (c = {c}, 2*sqrt(p) = {bound})",
                equality_note(*c, *bound)
            ),
            Violation::DelayMismatch { name, expected, actual } => {
                write!(f, "{name} = c*tau violated (expected {expected}, stored {actual})")
            }
            Violation::NegativeBeta { beta } => write!(f, "beta >= 0 violated (beta = {beta})"),
        }
    }
}

/// Every standing assumption that `params` breaks. Empty means valid.
pub fn validate_params(params: &ModelParams) -> Vec<Violation> {
    let mut out = Vec::new();
    for (name, value) in [("p", params.p), ("delta", params.delta), ("a", params.a), ("c", params.c)] {
        if !(value > 0.0) {
            out.push(Violation::NonPositive { name, value });
        }
    }
    for (name, value) in [("tau1", params.tau1), ("tau2", params.tau2)] {
        if !(value >= 0.0) {
            out.push(Violation::NegativeDelay { name, value });
        }
    }
    if !(params.beta >= 0.0) {
        out.push(Violation::NegativeBeta { beta: params.beta });
    }
    let ratio = params.p / params.delta;
    if !(ratio > 1.0) {
        out.push(Violation::RatioNotAboveOne { ratio });
    }
    if !(ratio <= std::f64::consts::E) {
        out.push(Violation::RatioAboveE { ratio });
    }
    let death_bound = 2.0 * params.delta.sqrt();
    if !(params.c > death_bound) {
        out.push(Violation::SpeedBelowDeath { c: params.c, bound: death_bound });
    }
    let birth_bound = 2.0 * params.p.sqrt();
    if !(params.c > birth_bound) {
        out.push(Violation::SpeedBelowBirth { c: params.c, bound: birth_bound });
    }
    for (name, tau, r) in [("r1", params.tau1, params.r1), ("r2", params.tau2, params.r2)] {
        let expected = params.c * tau;
        // from_wave_delays round-trips through a division, so allow one ulp-ish.
        if (expected - r).abs() > 4.0 * f64::EPSILON * r.abs().max(1.0) {
            out.push(Violation::DelayMismatch { name, expected, actual: r });
        }
    }
    out
}

/// The two constant states of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibria {
    pub u0: f64,
    pub ue: f64,
}

pub fn equilibria(params: &ModelParams) -> Result<Equilibria, ModelError> {
    let ratio = params.p / params.delta;
    if !(ratio > 1.0 && ratio <= std::f64::consts::E) {
        return Err(ModelError::RatioOutOfRange { ratio });
    }
    Ok(Equilibria {
        u0: 0.0,
        ue: ratio.ln() / params.a,
    })
}

/// Birth term `g(u) = p·u·e^{-a·u}`. Negative round-off input is clamped to 0;
/// the second component reports whether that happened.
pub fn birth_clamped(u: f64, params: &ModelParams) -> (f64, bool) {
    let clamped = u < 0.0;
    let u = u.max(0.0);
    (params.p * u * (-params.a * u).exp(), clamped)
}

pub fn birth(u: f64, params: &ModelParams) -> f64 {
    birth_clamped(u, params).0
}

/// `g'(u) = p·(1 - a·u)·e^{-a·u}`.
pub fn birth_slope(u: f64, params: &ModelParams) -> f64 {
    params.p * (1.0 - params.a * u) * (-params.a * u).exp()
}

/// Least `β ≥ 0` making `u ↦ g(u) + β·u` nondecreasing on `[0, uₑ]`.
///
/// `g'` decreases on `[0, 2/a]` and increases (staying negative) after, so its
/// minimum over `[0, uₑ]` sits at `min(uₑ, 2/a)`.
pub fn beta_floor(params: &ModelParams) -> f64 {
    let ue = params.upper_equilibrium();
    if !(ue > 0.0) {
        return 0.0;
    }
    let argmin = ue.min(2.0 / params.a);
    (-birth_slope(argmin, params)).max(0.0)
}

/// Anything that can be evaluated, with derivatives, along the wave coordinate.
pub trait WaveProfile {
    fn value(&self, t: f64) -> f64;
    fn d1(&self, t: f64) -> f64;
    fn d2(&self, t: f64) -> f64;
    /// Break points where the second derivative may jump.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Constant profile; both equilibria are exact solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantProfile(pub f64);

impl WaveProfile for ConstantProfile {
    fn value(&self, _t: f64) -> f64 {
        self.0
    }
    fn d1(&self, _t: f64) -> f64 {
        0.0
    }
    fn d2(&self, _t: f64) -> f64 {
        0.0
    }
}

/// `R(φ)(t) = φ''(t) - c·φ'(t + r₁) - δ·φ(t + r₁) + g(φ(t + r₁ - r₂))`.
///
/// Upper solutions give `R ≤ 0`, lower solutions `R ≥ 0`.
pub fn wave_residual<P: WaveProfile + ?Sized>(phi: &P, t: f64, params: &ModelParams) -> Result<f64, ModelError> {
    let lead = t + params.r1;
    let lag = t + params.r1 - params.r2;
    let r = phi.d2(t) - params.c * phi.d1(lead) - params.delta * phi.value(lead) + birth(phi.value(lag), params);
    if r.is_finite() {
        Ok(r)
    } else {
        Err(ModelError::NonFinite { t })
    }
}

/// `H(φ)(t) = g(φ(t + r₁ - r₂)) + β·φ(t + r₁)`.
pub fn h_operator<P: WaveProfile + ?Sized>(phi: &P, t: f64, params: &ModelParams) -> f64 {
    birth(phi.value(t + params.r1 - params.r2), params) + params.beta * phi.value(t + params.r1)
}
