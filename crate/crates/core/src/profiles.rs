//! Wave profiles on uniform grids and the analytic quasi upper/lower families.

use thiserror::Error;

use crate::model::{wave_residual, ModelParams, WaveProfile};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("profile has {got} values for a grid of {expected} nodes")]
    Length { got: usize, expected: usize },
    #[error("construction failed: {0}")]
    Construction(String),
}

/// Nodes `-L + j·h`, `j = 0..count`, covering `[-L, L]` with `0` on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub half_width: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(half_width: f64, step: f64) -> Result<Self, ProfileError> {
        if !(step > 0.0 && half_width > 0.0) {
            return Err(ProfileError::Grid(format!("need L > 0 and h > 0, got L = {half_width}, h = {step}")));
        }
        let ratio = half_width / step;
        let half = ratio.round();
        if (ratio - half).abs() > 1e-9 * ratio.max(1.0) {
            return Err(ProfileError::Grid(format!("L/h = {ratio} is not an integer")));
        }
        Ok(Self { half_width, step, count: 2 * half as usize + 1 })
    }

    pub fn half_count(&self) -> usize {
        (self.count - 1) / 2
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - self.half_count() as f64) * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|j| self.node(j))
    }

    /// Index of the node at `t`, if `t` is (to round-off) a node.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = t / self.step + self.half_count() as f64;
        let k = x.round();
        if (x - k).abs() < 1e-9 && k >= 0.0 && (k as usize) < self.count {
            Some(k as usize)
        } else {
            None
        }
    }
}

/// `f(t) = a·(t-T)³ + b·(t-T)² + 1/2`, joining `e^{η₁t}/4` at `-T` to `1/2` at `T`
/// with matching value and slope at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeCubic {
    pub half_width: f64,
    pub eta1: f64,
    pub a: f64,
    pub b: f64,
}

impl BridgeCubic {
    /// Solves `f(-T) = e^{-η₁T}/4`, `f'(-T) = (η₁/4)·e^{-η₁T}` for `(a, b)`.
    pub fn new(eta1: f64, half_width: f64) -> Result<Self, ProfileError> {
        if !(eta1 > 0.0 && half_width > 0.0) {
            return Err(ProfileError::Construction(format!(
                "bridge needs eta1 > 0 and T > 0, got eta1 = {eta1}, T = {half_width}"
            )));
        }
        let t = half_width;
        let e = (-eta1 * t).exp();
        // -8aT³ + 4bT² = e/4 - 1/2
        // 12aT² - 4bT = (η₁/4)e
        let (m11, m12, r1) = (-8.0 * t.powi(3), 4.0 * t * t, 0.25 * e - 0.5);
        let (m21, m22, r2) = (12.0 * t * t, -4.0 * t, 0.25 * eta1 * e);
        let det = m11 * m22 - m12 * m21;
        let a = (r1 * m22 - m12 * r2) / det;
        let b = (m11 * r2 - r1 * m21) / det;
        Ok(Self { half_width, eta1, a, b })
    }

    pub fn value(&self, t: f64) -> f64 {
        let s = t - self.half_width;
        (self.a * s + self.b) * s * s + 0.5
    }

    pub fn d1(&self, t: f64) -> f64 {
        let s = t - self.half_width;
        (3.0 * self.a * s + 2.0 * self.b) * s
    }

    pub fn d2(&self, t: f64) -> f64 {
        let s = t - self.half_width;
        6.0 * self.a * s + 2.0 * self.b
    }

    /// `sup_{[-T,T]} max(|f'|, |f''|)`. `f''` is linear and `f'` quadratic, so
    /// the endpoints and the vertex of `f'` suffice.
    pub fn sup_derivatives(&self) -> f64 {
        let t = self.half_width;
        let mut pts = vec![-t, t];
        if self.a != 0.0 {
            let vertex = t - self.b / (3.0 * self.a);
            if vertex.abs() <= t {
                pts.push(vertex);
            }
        }
        pts.iter().fold(0.0, |m: f64, &x| m.max(self.d1(x).abs()).max(self.d2(x).abs()))
    }

    /// Coefficients from the closed-form expressions quoted alongside the
    /// construction, `(a, b)`.
    pub fn quoted_coefficients(eta1: f64, half_width: f64) -> (f64, f64) {
        let t = half_width;
        let e = (-eta1 * t).exp();
        let a = (eta1 * t * e + e - 2.0) / (16.0 * t.powi(3));
        let b = (-eta1 * t * e + 6.0 * (0.25 * e - 0.5)) / (8.0 * t * t);
        (a, b)
    }

    /// Largest absolute gap between the solved and the quoted coefficients.
    pub fn quoted_discrepancy(&self) -> f64 {
        let (a, b) = Self::quoted_coefficients(self.eta1, self.half_width);
        (a - self.a).abs().max((b - self.b).abs())
    }
}

/// Analytic descriptor that gives a profile exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Generic,
    /// `(uₑ/2)e^{η₂t}` for `t ≤ 0`, `uₑ(1 - e^{-η₂t}/2)` for `t > 0`.
    QuasiUpper { ue: f64, eta2: f64 },
    /// `uₑe^{η₁t}/4` for `t < -T`, `uₑ·f(t)` on `[-T, T]`, `uₑ/2` for `t > T`.
    QuasiLower { ue: f64, bridge: BridgeCubic },
}

impl Family {
    fn eval(&self, t: f64) -> Option<[f64; 3]> {
        match *self {
            Family::Generic => None,
            Family::QuasiUpper { ue, eta2 } => Some(if t <= 0.0 {
                let e = 0.5 * ue * (eta2 * t).exp();
                [e, eta2 * e, eta2 * eta2 * e]
            } else {
                let e = 0.5 * ue * (-eta2 * t).exp();
                [ue - e, eta2 * e, -eta2 * eta2 * e]
            }),
            Family::QuasiLower { ue, bridge } => {
                let t_half = bridge.half_width;
                Some(if t < -t_half {
                    let e = 0.25 * ue * (bridge.eta1 * t).exp();
                    [e, bridge.eta1 * e, bridge.eta1 * bridge.eta1 * e]
                } else if t <= t_half {
                    [ue * bridge.value(t), ue * bridge.d1(t), ue * bridge.d2(t)]
                } else {
                    [0.5 * ue, 0.0, 0.0]
                })
            }
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match *self {
            Family::Generic => Vec::new(),
            Family::QuasiUpper { .. } => vec![0.0],
            Family::QuasiLower { bridge, .. } => vec![-bridge.half_width, bridge.half_width],
        }
    }
}

/// Wave-profile candidate on a grid with constant extensions outside `[-L, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub left_limit: f64,
    pub right_limit: f64,
    pub family: Family,
}

impl Profile {
    pub fn generic(grid: Grid, values: Vec<f64>, left_limit: f64, right_limit: f64) -> Result<Self, ProfileError> {
        if values.len() != grid.count {
            return Err(ProfileError::Length { got: values.len(), expected: grid.count });
        }
        Ok(Self { grid, values, left_limit, right_limit, family: Family::Generic })
    }

    /// Samples an analytic family; the stored limits are the family's values
    /// at the grid edges.
    fn from_family(grid: Grid, family: Family) -> Self {
        let at = |t: f64| family.eval(t).expect("analytic family")[0];
        let values = grid.nodes().map(at).collect();
        Self {
            grid,
            values,
            left_limit: at(-grid.half_width),
            right_limit: at(grid.half_width),
            family,
        }
    }

    pub fn is_analytic(&self) -> bool {
        self.family != Family::Generic
    }

    /// Same samples with the analytic descriptor dropped.
    pub fn to_generic(&self) -> Profile {
        Profile { family: Family::Generic, ..self.clone() }
    }

    fn interp(&self, t: f64) -> f64 {
        let l = self.grid.half_width;
        if t < -l {
            return self.left_limit;
        }
        if t > l {
            return self.right_limit;
        }
        let x = (t + l) / self.grid.step;
        let k = (x.floor() as usize).min(self.grid.count - 1);
        if k + 1 >= self.grid.count {
            return self.values[self.grid.count - 1];
        }
        let w = x - k as f64;
        self.values[k] * (1.0 - w) + self.values[k + 1] * w
    }

    /// Whether `t` is a break point of an analytic family.
    pub fn is_kink(&self, t: f64) -> bool {
        self.family.kinks().iter().any(|&k| (k - t).abs() < 1e-12)
    }

    /// Bounds `0 ≤ φ ≤ uₑ + 1e-12` on the nodes, limits in `[0, uₑ]`.
    pub fn within_bounds(&self, ue: f64) -> bool {
        let tol = 1e-12;
        self.values.iter().all(|&v| (-tol..=ue + tol).contains(&v))
            && (-tol..=ue + tol).contains(&self.left_limit)
            && (-tol..=ue + tol).contains(&self.right_limit)
    }

    pub fn sup_distance(&self, other: &Profile) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()))
    }
}

impl WaveProfile for Profile {
    /// Analytic families use their formula everywhere; generic profiles
    /// interpolate linearly inside the grid and use the limits outside.
    fn value(&self, t: f64) -> f64 {
        match self.family.eval(t) {
            Some(v) => v[0],
            None => self.interp(t),
        }
    }

    /// Analytic, or a central difference with step `h`. At a kink the
    /// right-hand piece is used.
    fn d1(&self, t: f64) -> f64 {
        match self.family.eval(t) {
            Some(v) => v[1],
            None => {
                let h = self.grid.step;
                (self.interp(t + h) - self.interp(t - h)) / (2.0 * h)
            }
        }
    }

    fn d2(&self, t: f64) -> f64 {
        if let Some(k) = self.family.kinks().iter().find(|&&k| (k - t).abs() < 1e-12) {
            // one-sided right value at the break point
            let right = self.family.eval(k + 1e-9).expect("analytic family");
            return right[2];
        }
        match self.family.eval(t) {
            Some(v) => v[2],
            None => {
                let h = self.grid.step;
                (self.interp(t + h) - 2.0 * self.interp(t) + self.interp(t - h)) / (h * h)
            }
        }
    }

    fn kinks(&self) -> Vec<f64> {
        self.family.kinks()
    }
}

/// Upper family with rate `η₂`.
pub fn quasi_upper(params: &ModelParams, eta2: f64, grid: Grid) -> Result<Profile, ProfileError> {
    if !(eta2 > 0.0) || !eta2.is_finite() {
        return Err(ProfileError::Construction(format!("eta2 must be positive, got {eta2}")));
    }
    let ue = params.upper_equilibrium();
    Ok(Profile::from_family(grid, Family::QuasiUpper { ue, eta2 }))
}

/// Lower family with rate `η₁` and bridge half-width `T`.
pub fn quasi_lower(params: &ModelParams, eta1: f64, half_width: f64, grid: Grid) -> Result<Profile, ProfileError> {
    if !(eta1 > 0.0) || !eta1.is_finite() {
        return Err(ProfileError::Construction(format!("eta1 must be positive, got {eta1}")));
    }
    let bridge = BridgeCubic::new(eta1, half_width)?;
    let ue = params.upper_equilibrium();
    let family = Family::QuasiLower { ue, bridge };
    let c0 = continuity_gap(&family);
    if c0 > 1e-10 {
        return Err(ProfileError::Construction(format!("bridge matching gap {c0:e} exceeds 1e-10")));
    }
    Ok(Profile::from_family(grid, family))
}

/// Largest value/slope mismatch across the break points of an analytic family.
pub fn continuity_gap(family: &Family) -> f64 {
    family.kinks().iter().fold(0.0, |m: f64, &k| match pieces_at(family, k) {
        Some((l, r)) => m.max((l[0] - r[0]).abs()).max((l[1] - r[1]).abs()),
        None => m,
    })
}

/// Left and right closed-form pieces evaluated exactly at break point `k`.
fn pieces_at(family: &Family, k: f64) -> Option<([f64; 3], [f64; 3])> {
    match *family {
        Family::Generic => None,
        Family::QuasiUpper { ue, eta2 } => {
            let l = 0.5 * ue * (eta2 * k).exp();
            let r = 0.5 * ue * (-eta2 * k).exp();
            Some((
                [l, eta2 * l, eta2 * eta2 * l],
                [ue - r, eta2 * r, -eta2 * eta2 * r],
            ))
        }
        Family::QuasiLower { ue, bridge } => {
            let t = bridge.half_width;
            if (k + t).abs() < 1e-12 {
                let e = 0.25 * ue * (bridge.eta1 * k).exp();
                Some((
                    [e, bridge.eta1 * e, bridge.eta1 * bridge.eta1 * e],
                    [ue * bridge.value(k), ue * bridge.d1(k), ue * bridge.d2(k)],
                ))
            } else {
                Some(([ue * bridge.value(k), ue * bridge.d1(k), ue * bridge.d2(k)], [0.5 * ue, 0.0, 0.0]))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiReport {
    pub side: Side,
    pub passed: bool,
    /// Worst signed violation: the largest residual for an upper check, the
    /// most negative for a lower check.
    pub worst_residual: f64,
    pub worst_at: f64,
    pub violations: Vec<(f64, f64)>,
    pub checked_nodes: usize,
    pub skipped_nodes: usize,
}

/// Residual points whose stencils cross a break point: the kinks themselves
/// and their images under the `r₁` and `r₁ - r₂` shifts.
fn singular_points<P: WaveProfile + ?Sized>(profile: &P, params: &ModelParams) -> Vec<f64> {
    profile
        .kinks()
        .iter()
        .flat_map(|&k| [k, k - params.r1, k - params.r1 + params.r2])
        .collect()
}

/// Evaluates the residual at every grid node away from the break points and
/// checks its sign. Nodes within one grid step of a break point are skipped.
pub fn verify_quasi<P: WaveProfile + ?Sized>(
    profile: &P,
    params: &ModelParams,
    grid: &Grid,
    tol: f64,
    side: Side,
) -> QuasiReport {
    let skip = singular_points(profile, params);
    let h = grid.step;
    let mut violations = Vec::new();
    let mut worst = match side {
        Side::Upper => f64::NEG_INFINITY,
        Side::Lower => f64::INFINITY,
    };
    let mut worst_at = f64::NAN;
    let mut checked = 0;
    let mut skipped = 0;
    for t in grid.nodes() {
        if skip.iter().any(|&s| (t - s).abs() <= h * (1.0 + 1e-9)) {
            skipped += 1;
            continue;
        }
        checked += 1;
        let r = wave_residual(profile, t, params).unwrap_or(f64::NAN);
        let bad = match side {
            Side::Upper => !(r <= tol),
            Side::Lower => !(r >= -tol),
        };
        let more = match side {
            Side::Upper => r > worst,
            Side::Lower => r < worst,
        };
        if more || r.is_nan() {
            worst = r;
            worst_at = t;
        }
        if bad {
            violations.push((t, r));
        }
    }
    QuasiReport {
        side,
        passed: violations.is_empty() && checked > 0,
        worst_residual: worst,
        worst_at,
        violations,
        checked_nodes: checked,
        skipped_nodes: skipped,
    }
}

/// Outcome of the bridge half-width search.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeSearch {
    /// Half-width that passed, if any.
    pub half_width: Option<f64>,
    /// Every half-width tried with its lower-side report.
    pub attempts: Vec<(f64, QuasiReport)>,
}

/// Doubles `T` from `start` until the lower family passes or `T` exceeds `max`.
pub fn search_bridge_width(
    params: &ModelParams,
    eta1: f64,
    grid: Grid,
    tol: f64,
    start: f64,
    max: f64,
) -> Result<BridgeSearch, ProfileError> {
    let mut attempts = Vec::new();
    let mut t = start;
    while t <= max {
        let lower = quasi_lower(params, eta1, t, grid)?;
        let report = verify_quasi(&lower, params, &grid, tol, Side::Lower);
        let passed = report.passed;
        attempts.push((t, report));
        if passed {
            return Ok(BridgeSearch { half_width: Some(t), attempts });
        }
        t *= 2.0;
    }
    Ok(BridgeSearch { half_width: None, attempts })
}

/// `lower ≤ upper` at every node and on both extensions, and `0 ≤ lower`, `upper ≤ uₑ`.
pub fn ordered(lower: &Profile, upper: &Profile, ue: f64) -> bool {
    let tol = 1e-12;
    lower.values.iter().zip(&upper.values).all(|(&l, &u)| l >= -tol && l <= u + tol && u <= ue + tol)
        && lower.left_limit <= upper.left_limit + tol
        && lower.right_limit <= upper.right_limit + tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    use crate::charroots::{eta1, eta2};
    use crate::model::ConstantProfile;

    fn params(r: f64) -> ModelParams {
        ModelParams::from_wave_delays(2.0, 1.0, 1.0, r, r, 3.1)
    }

    #[test]
    fn grid_basics() {
        let g = Grid::new(1.0, 0.25).unwrap();
        assert_eq!(g.count, 9);
        assert_eq!(g.node(4), 0.0);
        assert_eq!(g.index_of(0.5), Some(6));
        assert!(Grid::new(1.0, 0.3).is_err());
        assert!(Grid::new(0.0, 0.1).is_err());
    }

    #[test]
    fn generic_interpolation_and_limits() {
        let g = Grid::new(1.0, 0.5).unwrap();
        let p = Profile::generic(g, vec![0.0, 0.1, 0.2, 0.4, 0.5], 0.0, 0.6).unwrap();
        assert_eq!(p.value(0.5), 0.4);
        assert_relative_eq!(p.value(0.25), 0.3, max_relative = 1e-15);
        assert_eq!(p.value(3.0), 0.6);
        assert_eq!(p.value(-3.0), 0.0);
        assert!(Profile::generic(g, vec![0.0; 3], 0.0, 0.0).is_err());
    }

    #[test]
    fn bridge_reference_values() {
        // Frozen from an independent dense 2x2 solve (numpy.linalg.solve).
        let b = BridgeCubic::new(3.146264, 1.0).unwrap();
        assert_relative_eq!(b.a, -0.113_853_670_570_492_85, max_relative = 1e-12);
        assert_relative_eq!(b.b, -0.350_019_058_525_718_8, max_relative = 1e-12);
        assert_relative_eq!(b.value(-1.0), 0.010_753_130_461_067_732, max_relative = 1e-12);
        assert_relative_eq!(b.d1(-1.0), 0.033_832_187_256_960_806, max_relative = 1e-12);
        assert_eq!(b.value(1.0), 0.5);
        assert_eq!(b.d1(1.0), 0.0);
        // The quoted `a` agrees with the solve; the quoted `b` does not.
        let (qa, qb) = BridgeCubic::quoted_coefficients(3.146264, 1.0);
        assert_relative_eq!(qa, b.a, max_relative = 1e-12);
        assert!((qb - b.b).abs() > 0.03);
    }

    #[test]
    fn bridge_smallness_decreases() {
        let sups: Vec<f64> = [1.0, 2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&t| BridgeCubic::new(3.146264, t).unwrap().sup_derivatives())
            .collect();
        assert!(sups.windows(2).all(|w| w[1] < w[0]), "{sups:?}");
    }

    #[test]
    fn bridge_sup_matches_dense_scan() {
        let b = BridgeCubic::new(2.0, 3.0).unwrap();
        let dense = (0..=60_000)
            .map(|i| -3.0 + 6.0 * i as f64 / 60_000.0)
            .fold(0.0, |m: f64, t| m.max(b.d1(t).abs()).max(b.d2(t).abs()));
        assert_relative_eq!(b.sup_derivatives(), dense, max_relative = 1e-6);
    }

    #[test]
    fn quasi_upper_shape() {
        let p = params(0.01);
        let ue = p.upper_equilibrium();
        let e2 = eta2(&p).unwrap().value.re;
        let g = Grid::new(40.0, 0.01).unwrap();
        let up = quasi_upper(&p, e2, g).unwrap();
        assert_relative_eq!(up.value(0.0), ue / 2.0, max_relative = 1e-15);
        assert_relative_eq!(up.value(1.0), ue * (1.0 - (-e2).exp() / 2.0), max_relative = 1e-15);
        assert!((up.value(1e6) - ue).abs() < 1e-12);
        assert!(up.value(-1e3) < 1e-300);
        assert!((up.right_limit - ue).abs() < 1e-6);
        assert!(up.values.windows(2).all(|w| w[1] >= w[0]));
        assert!(continuity_gap(&up.family) < 1e-10);
        assert!(up.within_bounds(ue));
        let j = g.index_of(1.0).unwrap();
        assert_relative_eq!(up.values[j], ue * (1.0 - (-e2).exp() / 2.0), max_relative = 1e-14);
        assert!(quasi_upper(&p, -1.0, g).is_err());
    }

    #[test]
    fn quasi_lower_shape() {
        let p = params(0.01);
        let ue = p.upper_equilibrium();
        let e1 = eta1(&p).unwrap().value.re;
        let g = Grid::new(40.0, 0.01).unwrap();
        let t = 4.0;
        let lo = quasi_lower(&p, e1, t, g).unwrap();
        assert_relative_eq!(lo.value(-t), ue * (-e1 * t).exp() / 4.0, max_relative = 1e-10);
        assert_eq!(lo.value(t + 5.0), ue / 2.0);
        assert!(continuity_gap(&lo.family) < 1e-10);
        assert!(lo.values.windows(2).all(|w| w[1] >= w[0]));
        assert!(lo.values.iter().all(|&v| v >= 0.0) && lo.values.iter().all(|&v| v <= ue / 2.0 + 1e-15));
    }

    #[test]
    fn upper_case_one_closed_form() {
        let p = params(0.01);
        let ue = p.upper_equilibrium();
        let e2 = eta2(&p).unwrap().value.re;
        let up = quasi_upper(&p, e2, Grid::new(40.0, 0.01).unwrap()).unwrap();
        for t in [-p.r1 - 1.0, -3.0, -10.0] {
            let r = wave_residual(&up, t, &p).unwrap();
            // On the exponential piece the characteristic relation turns
            // φ'' - cφ'(t+r₁) into -p·φ(t+r₁).
            let lag = up.value(t + p.r1 - p.r2);
            let ahead = 0.5 * ue * (e2 * (t + p.r1)).exp();
            let expected = -(p.p + p.delta) * ahead + p.p * lag * (-p.a * lag).exp();
            assert!((r - expected).abs() < 1e-12 * (1.0 + expected.abs()), "t = {t}: {r} vs {expected}");
            assert!(r < 0.0);
        }
    }

    #[test]
    fn verify_upper_passes_small_delay() {
        let p = params(0.01);
        let e2 = eta2(&p).unwrap().value.re;
        let g = Grid::new(40.0, 0.01).unwrap();
        let up = quasi_upper(&p, e2, g).unwrap();
        let rep = verify_quasi(&up, &p, &g, 1e-8, Side::Upper);
        assert!(rep.passed, "{:?}", (rep.worst_residual, rep.worst_at));
        assert!(rep.skipped_nodes > 0);
    }

    #[test]
    fn constant_upper_passes() {
        let p = params(0.01);
        let g = Grid::new(5.0, 0.01).unwrap();
        let rep = verify_quasi(&ConstantProfile(p.upper_equilibrium()), &p, &g, 1e-12, Side::Upper);
        assert!(rep.passed);
        assert!(rep.worst_residual.abs() < 1e-15);
    }

    #[test]
    fn lower_fails_with_short_bridge() {
        let p = params(0.05);
        let e1 = eta1(&p).unwrap().value.re;
        let g = Grid::new(40.0, 0.01).unwrap();
        let lo = quasi_lower(&p, e1, 1.0, g).unwrap();
        let rep = verify_quasi(&lo, &p, &g, 1e-8, Side::Lower);
        assert!(!rep.passed);
        assert!(rep.worst_residual < -1e-8);
        assert!(!rep.violations.is_empty());
    }
}
