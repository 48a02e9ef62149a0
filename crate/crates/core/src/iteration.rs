//! Convolution operator `F(φ) = ∫ G(t - s)·H(φ)(s) ds` and the monotone
//! iteration `φₙ = F(φₙ₋₁)` started from the quasi upper solution.

use thiserror::Error;

use crate::charroots::{eta1, eta2, RootError};
use crate::model::{birth_clamped, wave_residual, ModelParams, WaveProfile};
use crate::profiles::{
    ordered, quasi_lower, quasi_upper, search_bridge_width, verify_quasi, Grid, Profile, ProfileError, Side,
};
use crate::quadrature::{KernelTable, QuadError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IterError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("non-finite value in F(phi) at t = {t}")]
    NonFinite { t: f64 },
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("quasi solutions not certified: {0}")]
    Uncertified(String),
    #[error("iteration diverged at step {step}: sup-norm delta grew for 5 consecutive steps")]
    Diverged { step: usize, report: Box<IterationReport> },
}

/// How the first iterate is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Start {
    QuasiUpper,
    /// `uₑ` times this factor, everywhere.
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationConfig {
    pub grid: Grid,
    pub tol: f64,
    pub max_iter: usize,
    /// Project each iterate into `[max(lower, 0), min(previous, uₑ)]`.
    pub clamp: bool,
    /// Add the right-tail contribution `(δ+β)·uₑ·∫_{L}^{∞} G(t-s) ds`.
    pub tail_mode: bool,
    pub start: Start,
    /// Bridge half-width for the lower family; `None` runs the doubling search.
    pub bridge_half_width: Option<f64>,
    /// Refuse to iterate unless both quasi families pass their residual checks.
    pub require_certificates: bool,
    pub certificate_tol: f64,
    /// Slack for the per-step order and monotonicity flags.
    pub order_slack: f64,
}

impl IterationConfig {
    pub fn new(grid: Grid) -> Self {
        Self {
            grid,
            tol: 1e-6,
            max_iter: 200,
            clamp: false,
            tail_mode: true,
            start: Start::QuasiUpper,
            bridge_half_width: None,
            require_certificates: true,
            certificate_tol: 1e-8,
            order_slack: 1e-8,
        }
    }

    fn check(&self, kernel: &KernelTable, params: &ModelParams) -> Result<(), IterError> {
        if !(self.tol > 0.0) {
            return Err(IterError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(IterError::Config("max_iter must be at least 1".into()));
        }
        check_kernel(kernel, params, &self.grid)?;
        let needed = kernel.truncation_radius(self.tol / 10.0)?;
        if kernel.t_half < needed {
            return Err(IterError::Config(format!(
                "kernel half-width {} is below the truncation radius {needed} for tol/10",
                kernel.t_half
            )));
        }
        Ok(())
    }
}

fn check_kernel(kernel: &KernelTable, params: &ModelParams, grid: &Grid) -> Result<(), IterError> {
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    if !(same(kernel.c, params.c) && same(kernel.delta, params.delta) && same(kernel.r1, params.r1)) {
        return Err(IterError::Config(format!(
            "kernel built for (c, delta, r1) = ({}, {}, {}) but params have ({}, {}, {})",
            kernel.c, kernel.delta, kernel.r1, params.c, params.delta, params.r1
        )));
    }
    if params.beta != 0.0 {
        // The kernel denominator carries no β term.
        return Err(IterError::Config("the kernel is built for beta = 0".into()));
    }
    if !(grid.step > 0.0) {
        return Err(IterError::Config("grid step must be positive".into()));
    }
    Ok(())
}

/// Kernel index stride when the profile step is a whole multiple of the kernel step.
fn aligned_stride(kernel: &KernelTable, grid: &Grid) -> Option<i64> {
    let m = grid.step / kernel.step;
    let k = m.round();
    ((m - k).abs() < 1e-9 && k >= 1.0).then_some(k as i64)
}

/// `F(φ)` on `φ`'s grid, with a count of birth-term clamps.
pub fn apply_f(
    phi: &(impl WaveProfile + HasGrid),
    kernel: &KernelTable,
    params: &ModelParams,
    tail_mode: bool,
) -> Result<(Profile, usize), IterError> {
    let grid = *phi.grid();
    check_kernel(kernel, params, &grid)?;
    let h = grid.step;
    let n = grid.count;
    let mut clamps = 0;
    let weighted: Vec<f64> = (0..n)
        .map(|j| {
            let s = grid.node(j);
            let (g, clamped) = birth_clamped(phi.value(s + params.r1 - params.r2), params);
            clamps += clamped as usize;
            let hv = g + params.beta * phi.value(s + params.r1);
            let w = if j == 0 || j == n - 1 { 0.5 * h } else { h };
            hv * w
        })
        .collect();
    // Outside the grid the profile sits at its limits, so H is constant there.
    let (left, right) = phi.limits();
    let h_left = birth_clamped(left, params).0 + params.beta * left;
    let h_right = birth_clamped(right, params).0 + params.beta * right;
    let stride = aligned_stride(kernel, &grid);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let t = grid.node(i);
        let mut acc = match stride {
            Some(m) => {
                let i = i as i64;
                weighted
                    .iter()
                    .enumerate()
                    .map(|(j, w)| kernel.at_offset((i - j as i64) * m) * w)
                    .sum::<f64>()
            }
            None => weighted.iter().enumerate().map(|(j, w)| kernel.at(t - grid.node(j)) * w).sum(),
        };
        if tail_mode {
            acc += h_left * kernel.integral_above(t + grid.half_width);
            acc += h_right * kernel.integral_below(t - grid.half_width);
        }
        if !acc.is_finite() {
            return Err(IterError::NonFinite { t });
        }
        out.push(acc);
    }
    let limits = (h_left / params.delta, h_right / params.delta);
    Ok((Profile::generic(grid, out, limits.0, limits.1)?, clamps))
}

/// Access to the sampling grid of a profile.
pub trait HasGrid {
    fn grid(&self) -> &Grid;
    /// Constant values taken to the left and right of the grid.
    fn limits(&self) -> (f64, f64);
}

impl HasGrid for Profile {
    fn grid(&self) -> &Grid {
        &self.grid
    }
    fn limits(&self) -> (f64, f64) {
        (self.left_limit, self.right_limit)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationReport {
    /// `‖φₙ₊₁ - φₙ‖_∞` per step.
    pub deltas: Vec<f64>,
    /// `φₙ₊₁ ≤ φₙ` (within slack) per step.
    pub monotone_ok: Vec<bool>,
    /// `lower ≤ φₙ₊₁` (within slack) per step.
    pub order_ok: Vec<bool>,
    /// Nodes moved by the order projection, per step.
    pub clamp_counts: Vec<usize>,
    pub clamp_events: usize,
    /// Negative inputs clamped inside the birth term.
    pub birth_clamps: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub boundary_errors: (f64, f64),
    pub bridge_half_width: f64,
    /// Largest excursion of any iterate above the starting profile.
    pub max_above_start: f64,
    /// Largest excursion of any iterate below the lower profile.
    pub max_below_lower: f64,
}

impl IterationReport {
    pub fn steps(&self) -> usize {
        self.deltas.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationOutcome {
    pub profile: Profile,
    pub start: Profile,
    pub lower: Profile,
    pub upper: Profile,
    pub report: IterationReport,
}

/// Sup of `|wave_residual|` over nodes whose difference stencils stay inside the grid.
pub fn interior_residual(profile: &Profile, params: &ModelParams) -> Result<f64, IterError> {
    let g = profile.grid;
    let lo = -g.half_width + g.step + params.r2.max(0.0);
    let hi = g.half_width - g.step - params.r1.max(0.0);
    let mut worst: f64 = 0.0;
    for t in g.nodes().filter(|&t| t >= lo && t <= hi) {
        let r = wave_residual(profile, t, params).map_err(|_| IterError::NonFinite { t })?;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

pub fn iterate(config: &IterationConfig, kernel: &KernelTable, params: &ModelParams) -> Result<IterationOutcome, IterError> {
    config.check(kernel, params)?;
    let grid = config.grid;
    let ue = params.upper_equilibrium();
    let e2 = eta2(params)?.value.re;
    let e1 = eta1(params)?.value.re;
    let upper = quasi_upper(params, e2, grid)?;
    let bridge = match config.bridge_half_width {
        Some(t) => t,
        None => {
            let search = search_bridge_width(params, e1, grid, config.certificate_tol, 1.0, 1024.0)?;
            match search.half_width {
                Some(t) => t,
                None if config.require_certificates => {
                    let (t, rep) = search.attempts.last().expect("at least one attempt");
                    return Err(IterError::Uncertified(format!(
                        "no bridge half-width up to 1024 gives a quasi lower solution (last T = {t}: residual {:e} at t = {})",
                        rep.worst_residual, rep.worst_at
                    )));
                }
                None => 1.0,
            }
        }
    };
    let lower = quasi_lower(params, e1, bridge, grid)?;
    if config.require_certificates {
        let up = verify_quasi(&upper, params, &grid, config.certificate_tol, Side::Upper);
        let lo = verify_quasi(&lower, params, &grid, config.certificate_tol, Side::Lower);
        let mut problems = Vec::new();
        if !up.passed {
            problems.push(format!("upper residual {:e} at t = {}", up.worst_residual, up.worst_at));
        }
        if !lo.passed {
            problems.push(format!("lower residual {:e} at t = {}", lo.worst_residual, lo.worst_at));
        }
        if !ordered(&lower, &upper, ue) {
            problems.push("lower <= upper fails".into());
        }
        if !problems.is_empty() {
            return Err(IterError::Uncertified(problems.join("; ")));
        }
    }

    let start = match config.start {
        Start::QuasiUpper => upper.clone(),
        Start::Constant(f) => Profile::generic(grid, vec![f * ue; grid.count], f * ue, f * ue)?,
    };
    let mut report = IterationReport { bridge_half_width: bridge, ..Default::default() };
    let mut current = start.clone();
    let mut rising = 0;
    for step in 1..=config.max_iter {
        let (mut next, clamps) = apply_f(&current, kernel, params, config.tail_mode)?;
        report.birth_clamps += clamps;
        let mut projected = 0;
        if config.clamp {
            for (j, v) in next.values.iter_mut().enumerate() {
                let lo = lower.values[j].max(0.0);
                let hi = current.values[j].min(ue);
                let p = v.max(lo).min(hi.max(lo));
                if p != *v {
                    projected += 1;
                    *v = p;
                }
            }
        }
        let delta = next.sup_distance(&current);
        let slack = config.order_slack;
        let monotone = next.values.iter().zip(&current.values).all(|(n, c)| *n <= c + slack);
        let order = next.values.iter().zip(&lower.values).all(|(n, l)| *n >= l - slack);
        for (j, v) in next.values.iter().enumerate() {
            report.max_above_start = report.max_above_start.max(v - start.values[j]);
            report.max_below_lower = report.max_below_lower.max(lower.values[j] - v);
        }
        if let Some(&last) = report.deltas.last() {
            rising = if delta > last { rising + 1 } else { 0 };
        }
        report.deltas.push(delta);
        report.monotone_ok.push(monotone);
        report.order_ok.push(order);
        report.clamp_counts.push(projected);
        report.clamp_events += projected;
        current = next;
        if !delta.is_finite() {
            return Err(IterError::NonFinite { t: f64::NAN });
        }
        if delta < config.tol {
            report.converged = true;
            break;
        }
        if rising >= 5 {
            finish_report(&mut report, &current, params, ue)?;
            return Err(IterError::Diverged { step, report: Box::new(report) });
        }
    }
    finish_report(&mut report, &current, params, ue)?;
    Ok(IterationOutcome { profile: current, start, lower, upper, report })
}

fn finish_report(report: &mut IterationReport, profile: &Profile, params: &ModelParams, ue: f64) -> Result<(), IterError> {
    report.final_residual = interior_residual(profile, params)?;
    report.boundary_errors = (
        profile.values[0].abs(),
        (profile.values[profile.values.len() - 1] - ue).abs(),
    );
    Ok(())
}

/// Samples the front in lab coordinates: `u[i][j] = φ(x_j + c·t_i)`.
pub fn wave_to_pde<P: WaveProfile + ?Sized>(phi: &P, c: f64, xs: &[f64], ts: &[f64]) -> Vec<Vec<f64>> {
    ts.iter().map(|&t| xs.iter().map(|&x| phi.value(x + c * t)).collect()).collect()
}

/// First crossing of `level` along increasing `xs`, linearly interpolated.
pub fn level_crossing(xs: &[f64], values: &[f64], level: f64) -> Option<f64> {
    xs.windows(2).zip(values.windows(2)).find_map(|(x, v)| {
        if (v[0] - level) * (v[1] - level) <= 0.0 && v[0] != v[1] {
            Some(x[0] + (level - v[0]) / (v[1] - v[0]) * (x[1] - x[0]))
        } else {
            None
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ConstantProfile;
    use crate::quadrature::{build_kernel_table, KernelSpec};

    impl HasGrid for (ConstantProfile, Grid) {
        fn grid(&self) -> &Grid {
            &self.1
        }
        fn limits(&self) -> (f64, f64) {
            (self.0 .0, self.0 .0)
        }
    }

    impl WaveProfile for (ConstantProfile, Grid) {
        fn value(&self, t: f64) -> f64 {
            self.0.value(t)
        }
        fn d1(&self, t: f64) -> f64 {
            self.0.d1(t)
        }
        fn d2(&self, t: f64) -> f64 {
            self.0.d2(t)
        }
    }

    fn zero_delay() -> (ModelParams, KernelTable) {
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.0, 0.0, 3.1);
        let k = build_kernel_table(&p, &KernelSpec::new(40.0, 0.05)).unwrap();
        (p, k)
    }

    #[test]
    fn zero_is_fixed_exactly() {
        let (p, k) = zero_delay();
        let g = Grid::new(10.0, 0.05).unwrap();
        let zero = Profile::generic(g, vec![0.0; g.count], 0.0, 0.0).unwrap();
        let (f, _) = apply_f(&zero, &k, &p, false).unwrap();
        assert!(f.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn upper_equilibrium_is_nearly_fixed() {
        let (p, k) = zero_delay();
        let ue = p.upper_equilibrium();
        let g = Grid::new(10.0, 0.05).unwrap();
        let (f, _) = apply_f(&(ConstantProfile(ue), g), &k, &p, true).unwrap();
        let err = f.values.iter().fold(0.0, |m: f64, v| m.max((v - ue).abs()));
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn kernel_mismatch_is_rejected() {
        let (p, k) = zero_delay();
        let g = Grid::new(10.0, 0.05).unwrap();
        let other = p.with_delays(0.1, 0.0);
        let zero = Profile::generic(g, vec![0.0; g.count], 0.0, 0.0).unwrap();
        assert!(matches!(apply_f(&zero, &k, &other, true), Err(IterError::Config(_))));
    }

    #[test]
    fn unaligned_grid_uses_interpolation() {
        let (p, k) = zero_delay();
        let ue = p.upper_equilibrium();
        let g = Grid::new(9.0, 0.075).unwrap();
        let (f, _) = apply_f(&(ConstantProfile(ue), g), &k, &p, true).unwrap();
        let err = f.values.iter().fold(0.0, |m: f64, v| m.max((v - ue).abs()));
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn loose_tolerance_stops_after_one_step() {
        let (p, k) = zero_delay();
        let g = Grid::new(10.0, 0.05).unwrap();
        let mut cfg = IterationConfig::new(g);
        cfg.require_certificates = false;
        cfg.bridge_half_width = Some(1.0);
        cfg.tol = 10.0;
        let out = iterate(&cfg, &k, &p).unwrap();
        assert_eq!(out.report.steps(), 1);
        assert!(out.report.converged);
    }

    #[test]
    fn refuses_without_certificates() {
        let (p, k) = zero_delay();
        let g = Grid::new(10.0, 0.05).unwrap();
        let mut cfg = IterationConfig::new(g);
        cfg.tol = 1e-3;
        cfg.bridge_half_width = Some(1.0);
        let res = iterate(&cfg, &k, &p);
        assert!(matches!(res, Err(IterError::Uncertified(_))), "{res:?}");
    }

    #[test]
    fn clamp_keeps_iterates_in_the_order_interval() {
        let (p, k) = zero_delay();
        let g = Grid::new(10.0, 0.05).unwrap();
        let mut cfg = IterationConfig::new(g);
        cfg.require_certificates = false;
        cfg.bridge_half_width = Some(2.0);
        cfg.clamp = true;
        // Starting at uₑ keeps every iterate above the lower profile, so the
        // projection interval is never empty.
        cfg.start = Start::Constant(1.0);
        cfg.max_iter = 20;
        cfg.tol = 1e-3;
        let out = iterate(&cfg, &k, &p).unwrap();
        assert!(out.report.order_ok.iter().all(|&b| b));
        assert!(out.report.monotone_ok.iter().all(|&b| b));
        assert!(out.report.max_above_start <= 1e-12);
    }

    #[test]
    fn lab_frame_translation() {
        let g = Grid::new(10.0, 0.01).unwrap();
        let p = ModelParams::from_wave_delays(2.0, 1.0, 1.0, 0.0, 0.0, 3.1);
        let up = quasi_upper(&p, 2.0, g).unwrap();
        let xs: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.025).collect();
        let ts = [0.0, 0.5, 1.0];
        let u = wave_to_pde(&up, p.c, &xs, &ts);
        for (j, &x) in xs.iter().enumerate() {
            assert_eq!(u[0][j], up.value(x));
        }
        for (i, &t) in ts.iter().enumerate() {
            for (j, &x) in xs.iter().enumerate() {
                assert_eq!(u[i][j], up.value(x + p.c * t));
            }
        }
        let level = p.upper_equilibrium() / 2.0;
        let fronts: Vec<f64> = u.iter().map(|row| level_crossing(&xs, row, level).unwrap()).collect();
        for (i, &t) in ts.iter().enumerate() {
            assert!((fronts[i] - (fronts[0] - p.c * t)).abs() < 1e-9);
        }
    }
}
