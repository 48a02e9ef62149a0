//! Roots of the characteristic quasi-polynomials
//!
//! ```text
//! CE:   Δ₁(z) = z² - c·z·e^{r₁z} - δ·e^{r₁z}
//! CE1:  Δ₂(z) = z² - c·z·e^{r₁z} + p·e^{r₁z}
//! ```
//!
//! At `r₁ = 0` both collapse to real quadratics with closed-form roots. For
//! `r₁ > 0` the roots needed by the quasi solutions are tracked by a homotopy
//! in `r₁` starting from the quadratic roots, and root counts in rectangles are
//! certified with the argument principle.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::model::ModelParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("c > 2*sqrt(p) required for real mu roots (c = {c}, p = {p})")]
    Discriminant { c: f64, p: f64 },
    #[error("invalid rectangle: {0}")]
    BadRectangle(String),
    #[error("characteristic function too close to zero on the contour (|D| = {min_abs:e} at {at})")]
    BoundaryTooClose { min_abs: f64, at: Complex64 },
    #[error("argument refinement exceeded {cap} samples")]
    RefinementCap { cap: usize },
    #[error("winding number {raw} is not close to an integer")]
    NonIntegerWinding { raw: f64 },
    #[error("continuation failed after r1 = {last_good_r1} (Newton did not converge at r1 = {failed_r1})")]
    Continuation { last_good_r1: f64, failed_r1: f64 },
    #[error("continued roots collided: {a} and {b}")]
    Collision { a: Complex64, b: Complex64 },
    #[error("root {value} fails the residual certificate (|D| = {residual:e})")]
    Residual { value: Complex64, residual: f64 },
    #[error("{kind:?} root {value} is not real and positive; r1 = {r1} is outside the small-delay regime")]
    Consistency { kind: CharKind, value: Complex64, r1: f64 },
    #[error("steps must be at least 1")]
    ZeroSteps,
    #[error("non-finite characteristic value at {0}")]
    NonFinite(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharKind {
    /// `z² - c·z·e^{r₁z} - δ·e^{r₁z}`
    Ce,
    /// `z² - c·z·e^{r₁z} + p·e^{r₁z}`
    Ce1,
}

/// A characteristic function with its coefficients frozen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharFn {
    pub kind: CharKind,
    pub c: f64,
    /// Constant term multiplying `e^{r₁z}` (`-δ` for CE, `+p` for CE1).
    pub constant: f64,
    pub r1: f64,
}

impl CharFn {
    pub fn new(kind: CharKind, params: &ModelParams) -> Self {
        Self::with_r1(kind, params, params.r1)
    }

    pub fn with_r1(kind: CharKind, params: &ModelParams, r1: f64) -> Self {
        let constant = match kind {
            CharKind::Ce => -params.delta,
            CharKind::Ce1 => params.p,
        };
        Self { kind, c: params.c, constant, r1 }
    }

    /// `z² - (c·z - constant)·e^{r₁z}`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let e = (z * self.r1).exp();
        z * z - (z * self.c - self.constant) * e
    }

    /// `2z - c·e^{r₁z} - r₁·(c·z - constant)·e^{r₁z}`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let e = (z * self.r1).exp();
        z * 2.0 - e * self.c - (z * self.c - self.constant) * e * self.r1
    }
}

pub fn char_eval(kind: CharKind, z: Complex64, params: &ModelParams) -> Complex64 {
    CharFn::new(kind, params).eval(z)
}

/// Roots of `λ² - c·λ - δ = 0`, returned as `(λ₁ < 0, λ₂ > 0)`.
pub fn quadratic_roots_lambda(c: f64, delta: f64) -> (f64, f64) {
    let l2 = 0.5 * (c + (c * c + 4.0 * delta).sqrt());
    (-delta / l2, l2)
}

/// Roots of `μ² - c·μ + p = 0` sorted ascending; both positive.
pub fn quadratic_roots_mu(c: f64, p: f64) -> Result<(f64, f64), RootError> {
    let disc = c * c - 4.0 * p;
    if !(disc > 0.0) {
        return Err(RootError::Discriminant { c, p });
    }
    let m2 = 0.5 * (c + disc.sqrt());
    Ok((p / m2, m2))
}

/// Axis-aligned rectangle for root counting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripQuery {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub boundary_samples: usize,
}

impl StripQuery {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self { re_min, re_max, im_min, im_max, boundary_samples: 4096 }
    }

    pub fn with_samples(mut self, boundary_samples: usize) -> Self {
        self.boundary_samples = boundary_samples;
        self
    }

    /// The truncated strip `{λ₁ - ε ≤ Re z ≤ re_max, |Im z| ≤ im_max}`.
    pub fn strip(re_min: f64, re_max: f64, im_max: f64) -> Self {
        Self::new(re_min, re_max, -im_max, im_max)
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

const BOUNDARY_FLOOR: f64 = 1e-8;
const MAX_BOUNDARY_SAMPLES: usize = 1 << 22;

/// Argument increment of `f` from `a` to `b`, bisecting until every piece turns
/// by less than π/2. Returns the accumulated increment.
fn arg_increment(
    f: &CharFn,
    a: Complex64,
    fa: Complex64,
    b: Complex64,
    fb: Complex64,
    budget: &mut usize,
    min_seen: &mut (f64, Complex64),
) -> Result<f64, RootError> {
    let step = (fb / fa).arg();
    if step.abs() < PI / 2.0 {
        return Ok(step);
    }
    if *budget == 0 {
        return Err(RootError::RefinementCap { cap: MAX_BOUNDARY_SAMPLES });
    }
    *budget -= 1;
    let m = (a + b) * 0.5;
    let fm = f.eval(m);
    note_min(fm, m, min_seen)?;
    Ok(arg_increment(f, a, fa, m, fm, budget, min_seen)? + arg_increment(f, m, fm, b, fb, budget, min_seen)?)
}

fn note_min(v: Complex64, at: Complex64, min_seen: &mut (f64, Complex64)) -> Result<(), RootError> {
    if !v.is_finite() {
        return Err(RootError::NonFinite(at));
    }
    let n = v.norm();
    if n < min_seen.0 {
        *min_seen = (n, at);
    }
    Ok(())
}

/// Number of zeros of the characteristic function inside `query`, by winding
/// number along the positively oriented boundary.
pub fn count_roots_rect(kind: CharKind, query: &StripQuery, params: &ModelParams) -> Result<usize, RootError> {
    count_roots_with(&CharFn::new(kind, params), query)
}

pub fn count_roots_with(f: &CharFn, query: &StripQuery) -> Result<usize, RootError> {
    if !(query.re_min < query.re_max && query.im_min < query.im_max) {
        return Err(RootError::BadRectangle(format!("{query:?}")));
    }
    if query.boundary_samples < 4 {
        return Err(RootError::BadRectangle("need at least 4 boundary samples".into()));
    }
    let corners = query.corners();
    let perimeter = 2.0 * ((query.re_max - query.re_min) + (query.im_max - query.im_min));
    let mut budget = MAX_BOUNDARY_SAMPLES;
    let mut min_seen = (f64::INFINITY, corners[0]);
    let mut total = 0.0;
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        let pieces = (((b - a).norm() / perimeter) * query.boundary_samples as f64).ceil().max(1.0) as usize;
        let mut prev = a;
        let mut fprev = f.eval(a);
        note_min(fprev, a, &mut min_seen)?;
        for j in 1..=pieces {
            let z = if j == pieces { b } else { a + (b - a) * (j as f64 / pieces as f64) };
            let fz = f.eval(z);
            note_min(fz, z, &mut min_seen)?;
            total += arg_increment(f, prev, fprev, z, fz, &mut budget, &mut min_seen)?;
            prev = z;
            fprev = fz;
        }
    }
    if min_seen.0 <= BOUNDARY_FLOOR {
        return Err(RootError::BoundaryTooClose { min_abs: min_seen.0, at: min_seen.1 });
    }
    let raw = total / (2.0 * PI);
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-6 || rounded < 0.0 {
        return Err(RootError::NonIntegerWinding { raw });
    }
    Ok(rounded as usize)
}

/// Samples `|Δ(z)| ≥ |z|²/2` over the parts of the strip `re_min ≤ Re z ≤ re_max`
/// with `im_max ≤ |Im z| ≤ 8·im_max`, so a count truncated at `im_max` is the
/// count for the whole strip.
pub fn strip_dominance_holds(f: &CharFn, re_min: f64, re_max: f64, im_max: f64, samples: usize) -> bool {
    let samples = samples.max(2);
    (0..samples).all(|i| {
        let x = re_min + (re_max - re_min) * i as f64 / (samples - 1) as f64;
        (0..samples).all(|j| {
            let y = im_max * (1.0 + 7.0 * j as f64 / (samples - 1) as f64);
            [y, -y].iter().all(|&y| {
                let z = Complex64::new(x, y);
                f.eval(z).norm() >= 0.5 * z.norm_sqr()
            })
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisClearance {
    pub clear: bool,
    pub min_abs: f64,
    pub xi_at_min: f64,
    /// `ξ²/2 ≥ c·ξ + |constant|` at `xi_max`, which forces `|Δ(iξ)| ≥ ξ²/2` beyond it.
    pub dominance: bool,
}

const AXIS_FLOOR: f64 = 1e-6;

/// Checks that `Δ(iξ)` stays away from zero for `ξ ∈ [-xi_max, xi_max]`.
pub fn imaginary_axis_clear(kind: CharKind, params: &ModelParams, xi_max: f64, samples: usize) -> AxisClearance {
    let f = CharFn::new(kind, params);
    let samples = samples.max(3) | 1;
    let mut min_abs = f64::INFINITY;
    let mut xi_at_min = 0.0;
    for j in 0..samples {
        let xi = -xi_max + 2.0 * xi_max * j as f64 / (samples - 1) as f64;
        let v = f.eval(Complex64::new(0.0, xi)).norm();
        if v < min_abs || v.is_nan() {
            min_abs = v;
            xi_at_min = xi;
        }
    }
    let dominance = 0.5 * xi_max * xi_max >= f.c * xi_max + f.constant.abs();
    AxisClearance {
        clear: min_abs > AXIS_FLOOR,
        min_abs,
        xi_at_min,
        dominance,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootResult {
    pub value: Complex64,
    pub residual: f64,
    pub kind: CharKind,
    pub seed: Complex64,
    pub path_steps: usize,
    /// Real part of the root after each continuation increment (first entry is the seed).
    pub path: Vec<f64>,
}

const NEWTON_MAX: usize = 50;

pub fn residual_bound(z: Complex64) -> f64 {
    1e-10 * z.norm_sqr().max(1.0)
}

fn newton(f: &CharFn, start: Complex64) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..NEWTON_MAX {
        let fz = f.eval(z);
        let dz = fz / f.derivative(z);
        if !dz.is_finite() {
            return None;
        }
        z -= dz;
        if dz.norm() <= 1e-15 * z.norm().max(1.0) {
            // one more step to land on the rounding floor
            let fz = f.eval(z);
            let dz = fz / f.derivative(z);
            if dz.is_finite() && dz.norm() < 1e-12 * z.norm().max(1.0) {
                z -= dz;
            }
            return Some(z);
        }
    }
    None
}

/// Default number of increments in `r₁` for a homotopy to `r1_target`.
pub fn default_steps(r1_target: f64) -> usize {
    ((r1_target.abs() / 0.005).ceil() as usize).max(10)
}

/// Follows several simple roots of the `r₁ = 0` quadratic to `r1_target`.
pub fn continue_roots(
    kind: CharKind,
    params: &ModelParams,
    seeds: &[f64],
    r1_target: f64,
    steps: usize,
) -> Result<Vec<RootResult>, RootError> {
    if steps == 0 {
        return Err(RootError::ZeroSteps);
    }
    let mut out = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let seed = Complex64::new(seed, 0.0);
        let mut z = seed;
        let mut prev = seed;
        let mut path = vec![seed.re];
        let mut last_good = 0.0;
        let start = CharFn::with_r1(kind, params, 0.0);
        z = newton(&start, z).ok_or(RootError::Continuation { last_good_r1: 0.0, failed_r1: 0.0 })?;
        for k in 1..=steps {
            let r1 = r1_target * k as f64 / steps as f64;
            let f = CharFn::with_r1(kind, params, r1);
            // secant predictor along the path
            let guess = if k > 1 { z + (z - prev) } else { z };
            let next = newton(&f, guess)
                .or_else(|| newton(&f, z))
                .ok_or(RootError::Continuation { last_good_r1: last_good, failed_r1: r1 })?;
            prev = z;
            z = next;
            last_good = r1;
            path.push(z.re);
        }
        let f = CharFn::with_r1(kind, params, r1_target);
        let residual = f.eval(z).norm();
        if !(residual <= residual_bound(z)) {
            return Err(RootError::Residual { value: z, residual });
        }
        out.push(RootResult {
            value: z,
            residual,
            kind,
            seed,
            path_steps: steps,
            path,
        });
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if (out[i].value - out[j].value).norm() < 1e-8 {
                return Err(RootError::Collision { a: out[i].value, b: out[j].value });
            }
        }
    }
    Ok(out)
}

pub fn continue_root(
    kind: CharKind,
    params: &ModelParams,
    seed: f64,
    r1_target: f64,
    steps: usize,
) -> Result<RootResult, RootError> {
    Ok(continue_roots(kind, params, &[seed], r1_target, steps)?.remove(0))
}

fn real_positive(root: RootResult, r1: f64) -> Result<RootResult, RootError> {
    if root.value.im.abs() > 1e-10 || !(root.value.re > 0.0) {
        return Err(RootError::Consistency { kind: root.kind, value: root.value, r1 });
    }
    Ok(root)
}

/// Positive root of CE continued from `λ₂`; the growth rate of the quasi lower solution.
pub fn eta1(params: &ModelParams) -> Result<RootResult, RootError> {
    let (_, l2) = quadratic_roots_lambda(params.c, params.delta);
    let root = continue_root(CharKind::Ce, params, l2, params.r1, default_steps(params.r1))?;
    real_positive(root, params.r1)
}

/// Root of CE1 continued from `μ₂`; the rate of the quasi upper solution.
pub fn eta2(params: &ModelParams) -> Result<RootResult, RootError> {
    let (_, m2) = quadratic_roots_mu(params.c, params.p)?;
    let root = continue_root(CharKind::Ce1, params, m2, params.r1, default_steps(params.r1))?;
    real_positive(root, params.r1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference(r1: f64) -> ModelParams {
        ModelParams::from_wave_delays(2.0, 1.0, 1.0, r1, 0.0, 2.0 * 2f64.sqrt())
    }

    #[test]
    fn lambda_closed_form() {
        let (l1, l2) = quadratic_roots_lambda(2.0 * 2f64.sqrt(), 1.0);
        assert_relative_eq!(l1, 2f64.sqrt() - 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(l2, 2f64.sqrt() + 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(l1 + l2, 2.0 * 2f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(l1 * l2, -1.0, max_relative = 1e-12);

        let (l1, l2) = quadratic_roots_lambda(1e-12, 1.0);
        assert_relative_eq!(l1, -1.0, max_relative = 1e-11);
        assert_relative_eq!(l2, 1.0, max_relative = 1e-11);

        assert_eq!(quadratic_roots_lambda(3.0, 4.0), (-1.0, 4.0));
    }

    #[test]
    fn mu_closed_form() {
        assert_eq!(quadratic_roots_mu(3.0, 2.0).unwrap(), (1.0, 2.0));
        assert_eq!(quadratic_roots_mu(5.0, 4.0).unwrap(), (1.0, 4.0));
        assert!(matches!(quadratic_roots_mu(4.0, 4.0), Err(RootError::Discriminant { .. })));
        let (m1, m2) = quadratic_roots_mu(3.1, 2.0).unwrap();
        assert_relative_eq!(m1 * m2, 2.0, max_relative = 1e-12);
        assert_relative_eq!(m1 + m2, 3.1, max_relative = 1e-12);
    }

    #[test]
    fn zero_delay_reduces_to_quadratics() {
        let p = reference(0.0);
        let (_, l2) = quadratic_roots_lambda(p.c, p.delta);
        assert!(char_eval(CharKind::Ce, Complex64::new(l2, 0.0), &p).norm() < 1e-14);
        let q = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.0, 0.0, 3.0);
        assert!(char_eval(CharKind::Ce1, Complex64::new(2.0, 0.0), &q).norm() < 1e-14);
        let z = Complex64::new(0.3, -1.7);
        let direct = z * z - z * p.c - p.delta;
        assert!((char_eval(CharKind::Ce, z, &p) - direct).norm() < 1e-14);
    }

    #[test]
    fn delayed_value_at_lambda2() {
        // Direct evaluation oracle for z real: z² - (c·z + δ)·e^{r₁z}.
        let p = reference(0.1);
        let z = 2f64.sqrt() + 3f64.sqrt();
        let expected = z * z - (p.c * z + 1.0) * (0.1 * z).exp();
        let got = char_eval(CharKind::Ce, Complex64::new(z, 0.0), &p);
        assert_relative_eq!(got.re, expected, max_relative = 1e-13);
        assert_eq!(got.im, 0.0);
        assert!(got.re < -1.0);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let p = reference(0.2);
        for kind in [CharKind::Ce, CharKind::Ce1] {
            let f = CharFn::new(kind, &p);
            let z = Complex64::new(0.7, 1.3);
            let h = 1e-6;
            let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
            assert!((fd - f.derivative(z)).norm() < 1e-7);
        }
    }

    #[test]
    fn count_zero_delay_rectangles() {
        let p = reference(0.0);
        let (l1, l2) = quadratic_roots_lambda(p.c, p.delta);
        let only_l1 = StripQuery::new(l1 - 0.5, 0.5, -1.0, 1.0);
        assert_eq!(count_roots_rect(CharKind::Ce, &only_l1, &p).unwrap(), 1);
        let both = StripQuery::new(l1 - 0.5, l2 + 0.5, -1.0, 1.0);
        assert_eq!(count_roots_rect(CharKind::Ce, &both, &p).unwrap(), 2);
        let none = StripQuery::new(0.5, 2.0, -1.0, 1.0);
        assert_eq!(count_roots_rect(CharKind::Ce, &none, &p).unwrap(), 0);
    }

    #[test]
    fn count_rejects_boundary_root() {
        let p = reference(0.0);
        let (l1, _) = quadratic_roots_lambda(p.c, p.delta);
        let q = StripQuery::new(l1, 0.5, -1.0, 1.0);
        assert!(matches!(
            count_roots_rect(CharKind::Ce, &q, &p),
            Err(RootError::BoundaryTooClose { .. })
        ));
        let bad = StripQuery::new(1.0, 0.0, -1.0, 1.0);
        assert!(matches!(count_roots_rect(CharKind::Ce, &bad, &p), Err(RootError::BadRectangle(_))));
    }

    /// Independent oracle: raw argument accumulation on a very fine uniform
    /// mesh with no adaptive refinement.
    fn brute_force_winding(f: &CharFn, q: &StripQuery, per_edge: usize) -> f64 {
        let c = q.corners();
        let mut total = 0.0;
        for k in 0..4 {
            let (a, b) = (c[k], c[(k + 1) % 4]);
            let mut prev = f.eval(a);
            for j in 1..=per_edge {
                let z = a + (b - a) * (j as f64 / per_edge as f64);
                let v = f.eval(z);
                total += (v / prev).arg();
                prev = v;
            }
        }
        total / (2.0 * PI)
    }

    #[test]
    fn single_root_in_left_strip() {
        let p = reference(0.05);
        let (l1, _) = quadratic_roots_lambda(p.c, p.delta);
        let eps = l1.abs() / 10.0;
        let q = StripQuery::strip(l1 - eps, 0.0, 50.0);
        let f = CharFn::new(CharKind::Ce, &p);
        let oracle = brute_force_winding(&f, &q, 400_000);
        assert!((oracle - 1.0).abs() < 1e-6, "oracle winding {oracle}");
        assert_eq!(count_roots_with(&f, &q).unwrap(), 1);
        assert!(strip_dominance_holds(&f, l1 - eps, 0.0, 50.0, 64));
    }

    #[test]
    fn axis_clearance() {
        let p = reference(0.0);
        let a = imaginary_axis_clear(CharKind::Ce, &p, 100.0, 20_001);
        assert!(a.clear && a.dominance);
        assert_relative_eq!(a.min_abs, 1.0, max_relative = 1e-12);
        assert_eq!(a.xi_at_min, 0.0);

        let mut degenerate = p;
        degenerate.delta = 0.0;
        let a = imaginary_axis_clear(CharKind::Ce, &degenerate, 100.0, 20_001);
        assert!(!a.clear);
        assert_eq!(a.min_abs, 0.0);

        let a = imaginary_axis_clear(CharKind::Ce, &reference(0.1), 100.0, 200_001);
        assert!(a.clear);
        // dense sampling oracle
        let f = CharFn::new(CharKind::Ce, &reference(0.1));
        let dense = (0..2_000_001)
            .map(|j| f.eval(Complex64::new(0.0, -100.0 + 1e-4 * j as f64)).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(dense > 1e-6);
        assert!((dense - a.min_abs).abs() < 1e-3);
    }

    #[test]
    fn continuation_examples() {
        let q = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.0, 0.0, 3.0);
        let r = continue_root(CharKind::Ce1, &q, 2.0, 0.0, 10).unwrap();
        assert_eq!(r.value, Complex64::new(2.0, 0.0));

        let r = continue_root(CharKind::Ce1, &q, 2.0, 0.01, default_steps(0.01)).unwrap();
        assert!((r.value.re - 2.0).abs() < 0.1 && r.value.im == 0.0);
        assert!(r.residual <= residual_bound(r.value));
        assert_eq!(r.path.len(), r.path_steps + 1);

        let p = reference(0.0);
        let (_, l2) = quadratic_roots_lambda(p.c, p.delta);
        let r = continue_root(CharKind::Ce, &p, l2, 0.01, 10).unwrap();
        assert!((r.value.re - 3.146264).abs() < 0.1);
        assert!(matches!(continue_root(CharKind::Ce, &p, l2, 0.01, 0), Err(RootError::ZeroSteps)));
    }

    #[test]
    fn continuation_step_halving() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.1, 0.1, 3.1);
        let (_, l2) = quadratic_roots_lambda(p.c, p.delta);
        let a = continue_root(CharKind::Ce, &p, l2, 0.1, 40).unwrap();
        let b = continue_root(CharKind::Ce, &p, l2, 0.1, 20).unwrap();
        assert!((a.value - b.value).norm() < 1e-9);
    }

    #[test]
    fn collision_is_reported() {
        let p = reference(0.0);
        let (_, l2) = quadratic_roots_lambda(p.c, p.delta);
        let err = continue_roots(CharKind::Ce, &p, &[l2, l2 + 1e-3], 0.01, 10).unwrap_err();
        assert!(matches!(err, RootError::Collision { .. }));
    }

    #[test]
    fn etas_at_zero_delay() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.0, 0.0, 3.0);
        let (_, l2) = quadratic_roots_lambda(3.0, 1.0);
        assert_relative_eq!(eta1(&p).unwrap().value.re, l2, max_relative = 1e-14);
        assert_relative_eq!(eta2(&p).unwrap().value.re, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn etas_small_delay() {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.01, 0.0, 3.0);
        let e2 = eta2(&p).unwrap();
        assert!((e2.value.re - 2.0).abs() < 0.1);
        // drift direction: the root moves up monotonically with r1
        assert!(e2.path.windows(2).all(|w| w[1] >= w[0]));
        let p = reference(0.01);
        assert!((eta1(&p).unwrap().value.re - 3.146).abs() < 0.1);
    }
}
