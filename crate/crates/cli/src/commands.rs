//! The subcommands. Each writes its CSVs and a resolved copy of the config
//! into the output directory.

use std::path::PathBuf;

use blowfly_waves::charroots::{
    char_eval, count_roots_rect, eta1, eta2, imaginary_axis_clear, quadratic_roots_lambda, quadratic_roots_mu,
    AxisClearance, CharKind, RootResult, StripQuery,
};
use blowfly_waves::iteration::{apply_f, iterate as run_iteration, IterError, IterationConfig, IterationOutcome, IterationReport};
use blowfly_waves::model::{beta_floor, h_operator, wave_residual, ConstantProfile, ModelParams};
use blowfly_waves::profiles::{
    continuity_gap, ordered, quasi_lower, quasi_upper, search_bridge_width, verify_quasi, Family, Grid, Profile,
    QuasiReport, Side,
};
use blowfly_waves::quadrature::{build_kernel_table, default_n_freq, kappa_table, KappaRow, KernelSpec, KernelTable};
use num_complex::Complex64;

use crate::config::{Mode, RunConfig};
use crate::output::{num, Table};
use crate::CliError;

const CERTIFICATE_TOL: f64 = 1e-8;
const STRIP_IM: f64 = 50.0;
const AXIS_SAMPLES: usize = 200_001;

pub struct Context {
    pub cfg: RunConfig,
    pub params: ModelParams,
    pub quiet: bool,
}

impl Context {
    pub fn new(cfg: RunConfig, quiet: bool) -> Result<Self, CliError> {
        let params = cfg.params();
        std::fs::create_dir_all(&cfg.out)?;
        Ok(Self { cfg, params, quiet })
    }

    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out.join(name)
    }

    fn model_checks(&self) -> Result<(), CliError> {
        for w in self.cfg.check_model()? {
            if !self.quiet {
                eprintln!("warning: {w}");
            }
        }
        Ok(())
    }

    fn write_echo(&self, cfg: &RunConfig, derived: &[(&str, f64)]) -> Result<(), CliError> {
        std::fs::write(self.path("config.toml"), cfg.echo(derived))?;
        Ok(())
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn xi_max(params: &ModelParams) -> f64 {
    // |Δ(iξ)| ≥ ξ²/2 once ξ²/2 ≥ cξ + max(δ, p)
    let k = params.delta.max(params.p);
    2.0 * (params.c + (params.c * params.c + 2.0 * k).sqrt()) + 1.0
}

// ---------------------------------------------------------------- roots

struct RootsData {
    rows: Vec<(String, Complex64, f64)>,
    strips: Vec<(String, StripQuery, Result<usize, String>)>,
    axis: AxisClearance,
    eta1: Result<RootResult, String>,
    eta2: Result<RootResult, String>,
}

fn roots_data(params: &ModelParams) -> RootsData {
    let at_zero = params.with_delays(0.0, params.r2);
    let real = |x: f64| Complex64::new(x, 0.0);
    let mut rows = Vec::new();
    let (l1, l2) = quadratic_roots_lambda(params.c, params.delta);
    for (name, v) in [("lambda1", l1), ("lambda2", l2)] {
        rows.push((name.to_string(), real(v), char_eval(CharKind::Ce, real(v), &at_zero).norm()));
    }
    let mu = quadratic_roots_mu(params.c, params.p);
    if let Ok((m1, m2)) = mu {
        for (name, v) in [("mu1", m1), ("mu2", m2)] {
            rows.push((name.to_string(), real(v), char_eval(CharKind::Ce1, real(v), &at_zero).norm()));
        }
    }
    let e1 = eta1(params).map_err(|e| format!("eta1: {e}"));
    let e2 = eta2(params).map_err(|e| format!("eta2: {e}"));
    for (name, r) in [("eta1", &e1), ("eta2", &e2)] {
        if let Ok(r) = r {
            rows.push((name.to_string(), r.value, r.residual));
        }
    }
    let eps = l1.abs() / 10.0;
    let mut strips = vec![
        ("CE".to_string(), StripQuery::strip(l1 - eps, 0.0, STRIP_IM)),
        ("CE".to_string(), StripQuery::strip(0.0, l2 + 1.0, STRIP_IM)),
    ];
    if let Ok((_, m2)) = mu {
        strips.push(("CE1".to_string(), StripQuery::strip(0.0, m2 + 1.0, STRIP_IM)));
    }
    let strips = strips
        .into_iter()
        .map(|(name, q)| {
            let kind = if name == "CE" { CharKind::Ce } else { CharKind::Ce1 };
            let count = count_roots_rect(kind, &q, params).map_err(|e| e.to_string());
            (name, q, count)
        })
        .collect();
    let axis = imaginary_axis_clear(CharKind::Ce, params, xi_max(params), AXIS_SAMPLES);
    RootsData { rows, strips, axis, eta1: e1, eta2: e2 }
}

fn write_roots(ctx: &Context, data: &RootsData) -> Result<(), CliError> {
    let mut t = Table::new(&["name", "re", "im", "residual"]);
    for (name, z, res) in &data.rows {
        t.row([name.clone(), num(z.re), num(z.im), num(*res)]);
    }
    t.row([
        "axis_min_abs".to_string(),
        num(data.axis.min_abs),
        num(data.axis.xi_at_min),
        String::new(),
    ]);
    t.save(&ctx.path("roots.csv"))?;
    let mut s = Table::new(&["kind", "re_min", "re_max", "im_max", "count"]);
    for (name, q, count) in &data.strips {
        let count = match count {
            Ok(n) => n.to_string(),
            Err(_) => "error".to_string(),
        };
        s.row([name.clone(), num(q.re_min), num(q.re_max), num(q.im_max), count]);
    }
    s.save(&ctx.path("strips.csv"))
}

pub fn roots(ctx: &Context) -> Result<(), CliError> {
    ctx.model_checks()?;
    let data = roots_data(&ctx.params);
    write_roots(ctx, &data)?;
    ctx.write_echo(&ctx.cfg, &[])?;
    ctx.say(format!("r1 = {}, r2 = {}", ctx.params.r1, ctx.params.r2));
    ctx.say(format!("{:<8} {:>22} {:>22} {:>12}", "root", "re", "im", "|D|"));
    for (name, z, res) in &data.rows {
        ctx.say(format!("{name:<8} {:>22} {:>22} {:>12.3e}", z.re, z.im, res));
    }
    for (name, q, count) in &data.strips {
        let count = match count {
            Ok(n) => n.to_string(),
            Err(e) => format!("error ({e})"),
        };
        ctx.say(format!("{name} roots in [{}, {}] x [-{}, {}]: {count}", q.re_min, q.re_max, q.im_max, q.im_max));
    }
    ctx.say(format!(
        "min |D(i xi)| = {:e} at xi = {} ({})",
        data.axis.min_abs,
        data.axis.xi_at_min,
        if data.axis.clear { "axis clear" } else { "root near the axis" }
    ));
    if let Err(e) = quadratic_roots_mu(ctx.params.c, ctx.params.p) {
        return Err(domain(e));
    }
    for r in [&data.eta1, &data.eta2] {
        if let Err(e) = r {
            return Err(CliError::Domain(format!("continuation failure, {e}")));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- kernel

fn kernel_spec(cfg: &RunConfig) -> KernelSpec {
    KernelSpec {
        t_half: cfg.t_ker,
        step: cfg.h_ker,
        n_trunc: cfg.n_trunc,
        n_freq: cfg.n_freq,
    }
}

fn build_kernel(params: &ModelParams, cfg: &RunConfig) -> Result<KernelTable, CliError> {
    let axis = imaginary_axis_clear(CharKind::Ce, params, xi_max(params), AXIS_SAMPLES);
    if !axis.clear {
        return Err(CliError::Domain(format!(
            "characteristic function vanishes near the imaginary axis (|D| = {:e} at xi = {})",
            axis.min_abs, axis.xi_at_min
        )));
    }
    build_kernel_table(&params.with_beta(0.0), &kernel_spec(cfg)).map_err(domain)
}

fn with_n_freq(cfg: &RunConfig) -> RunConfig {
    let mut out = cfg.clone();
    out.n_freq = Some(cfg.n_freq.unwrap_or_else(|| default_n_freq(cfg.n_trunc, cfg.t_ker)));
    out
}

fn write_kernel(ctx: &Context, k: &KernelTable) -> Result<(), CliError> {
    let mut t = Table::new(&["t", "G"]);
    for (i, g) in k.values.iter().enumerate() {
        t.row([num(k.t(i)), num(*g)]);
    }
    t.save(&ctx.path("kernel.csv"))
}

pub fn kernel(ctx: &Context) -> Result<(), CliError> {
    ctx.model_checks()?;
    let k = build_kernel(&ctx.params, &ctx.cfg)?;
    write_kernel(ctx, &k)?;
    ctx.write_echo(
        &with_n_freq(&ctx.cfg),
        &[("decay_m1", k.decay_m1), ("decay_delta1", k.decay_delta1)],
    )?;
    ctx.say(format!("kernel on [-{}, {}] step {}, {} frequency intervals", k.t_half, k.t_half, k.step, k.n_freq));
    ctx.say(format!("|G(t)| <= {} exp(-{} |t|)", k.decay_m1, k.decay_delta1));
    ctx.say(format!("max |Im G| = {:e}, max |G| = {}", k.max_imag, k.max_abs()));
    ctx.say(format!("mass = {} (1/delta = {})", k.total_mass(), 1.0 / ctx.params.delta));
    Ok(())
}

// ---------------------------------------------------------------- quasi

struct QuasiData {
    grid: Grid,
    upper: Profile,
    lower: Profile,
    bridge: f64,
    searched: bool,
    upper_report: QuasiReport,
    lower_report: QuasiReport,
    ordered: bool,
}

fn default_grid(cfg: &RunConfig, fallback: f64) -> Result<Grid, CliError> {
    let l = cfg.half_width.unwrap_or(fallback);
    // round L up to a whole number of steps
    let n = (l / cfg.step - 1e-9).ceil().max(1.0);
    Grid::new(n * cfg.step, cfg.step).map_err(|e| CliError::Config(e.to_string()))
}

fn quasi_data(params: &ModelParams, cfg: &RunConfig, grid: Grid) -> Result<QuasiData, CliError> {
    let e2 = eta2(params).map_err(|e| CliError::Domain(format!("continuation failure, eta2: {e}")))?;
    let e1 = eta1(params).map_err(|e| CliError::Domain(format!("continuation failure, eta1: {e}")))?;
    let upper = quasi_upper(params, e2.value.re, grid).map_err(domain)?;
    let (bridge, searched) = match cfg.t_bridge {
        Some(t) => (t, false),
        None => {
            let search = search_bridge_width(params, e1.value.re, grid, CERTIFICATE_TOL, 1.0, 1024.0).map_err(domain)?;
            let t = search.half_width.unwrap_or_else(|| {
                // closest miss
                search
                    .attempts
                    .iter()
                    .fold((1.0, f64::NEG_INFINITY), |best, (t, r)| {
                        if r.worst_residual > best.1 {
                            (*t, r.worst_residual)
                        } else {
                            best
                        }
                    })
                    .0
            });
            (t, true)
        }
    };
    let lower = quasi_lower(params, e1.value.re, bridge, grid).map_err(domain)?;
    let upper_report = verify_quasi(&upper, params, &grid, CERTIFICATE_TOL, Side::Upper);
    let lower_report = verify_quasi(&lower, params, &grid, CERTIFICATE_TOL, Side::Lower);
    let ordered = ordered(&lower, &upper, params.upper_equilibrium());
    Ok(QuasiData { grid, upper, lower, bridge, searched, upper_report, lower_report, ordered })
}

fn write_quasi(ctx: &Context, q: &QuasiData) -> Result<(), CliError> {
    let res = |p: &Profile, t: f64| wave_residual(p, t, &ctx.params).unwrap_or(f64::NAN);
    let mut t = Table::new(&["t", "lower", "upper", "residual_lower", "residual_upper"]);
    for (j, x) in q.grid.nodes().enumerate() {
        t.row([
            num(x),
            num(q.lower.values[j]),
            num(q.upper.values[j]),
            num(res(&q.lower, x)),
            num(res(&q.upper, x)),
        ]);
    }
    t.save(&ctx.path("quasi.csv"))
}

fn describe(r: &QuasiReport) -> String {
    format!(
        "{} (worst residual {:e} at t = {}, {} nodes checked, {} skipped)",
        if r.passed { "pass" } else { "FAIL" },
        r.worst_residual,
        r.worst_at,
        r.checked_nodes,
        r.skipped_nodes
    )
}

pub fn quasi(ctx: &Context) -> Result<(), CliError> {
    ctx.model_checks()?;
    let grid = default_grid(&ctx.cfg, 40.0)?;
    let q = quasi_data(&ctx.params, &ctx.cfg, grid)?;
    write_quasi(ctx, &q)?;
    let mut echo = ctx.cfg.clone();
    echo.half_width = Some(grid.half_width);
    echo.t_bridge = Some(q.bridge);
    ctx.write_echo(&echo, &[])?;
    ctx.say(format!(
        "bridge half-width T = {}{}",
        q.bridge,
        if q.searched { " (searched)" } else { "" }
    ));
    ctx.say(format!("upper: {}", describe(&q.upper_report)));
    ctx.say(format!("lower: {}", describe(&q.lower_report)));
    ctx.say(format!("0 <= lower <= upper <= ue: {}", if q.ordered { "pass" } else { "FAIL" }));
    Ok(())
}

// ---------------------------------------------------------------- iterate

fn iteration_config(cfg: &RunConfig, grid: Grid) -> IterationConfig {
    let mut it = IterationConfig::new(grid);
    it.tol = cfg.tol;
    it.max_iter = cfg.max_iter;
    it.clamp = cfg.clamp;
    it.bridge_half_width = cfg.t_bridge;
    it.require_certificates = cfg.require_certificates;
    it.certificate_tol = CERTIFICATE_TOL;
    it
}

fn write_report(ctx: &Context, r: &IterationReport) -> Result<(), CliError> {
    let mut t = Table::new(&["step", "delta", "monotone_ok", "clamp_events"]);
    for (i, d) in r.deltas.iter().enumerate() {
        t.row([
            (i + 1).to_string(),
            num(*d),
            r.monotone_ok[i].to_string(),
            r.clamp_counts[i].to_string(),
        ]);
    }
    t.save(&ctx.path("report.csv"))
}

fn write_profile(ctx: &Context, o: &IterationOutcome) -> Result<(), CliError> {
    let mut t = Table::new(&["t", "phi_final", "phi0", "lower"]);
    for (j, x) in o.profile.grid.nodes().enumerate() {
        t.row([num(x), num(o.profile.values[j]), num(o.start.values[j]), num(o.lower.values[j])]);
    }
    t.save(&ctx.path("profile.csv"))
}

fn summarize(ctx: &Context, r: &IterationReport) {
    ctx.say(format!(
        "{} steps, last delta {:e}, converged: {}",
        r.steps(),
        r.deltas.last().copied().unwrap_or(f64::NAN),
        r.converged
    ));
    ctx.say(format!(
        "monotone at every step: {}, ordered at every step: {}, clamp events: {}",
        r.monotone_ok.iter().all(|&b| b),
        r.order_ok.iter().all(|&b| b),
        r.clamp_events
    ));
    ctx.say(format!(
        "boundary errors ({:e}, {:e}), interior residual {:e}",
        r.boundary_errors.0, r.boundary_errors.1, r.final_residual
    ));
}

pub fn iterate(ctx: &Context) -> Result<(), CliError> {
    ctx.model_checks()?;
    let k = build_kernel(&ctx.params, &ctx.cfg)?;
    let grid = default_grid(&ctx.cfg, 40f64.max(3.0 / k.decay_delta1))?;
    let mut echo = with_n_freq(&ctx.cfg);
    echo.half_width = Some(grid.half_width);
    let it = iteration_config(&ctx.cfg, grid);
    let outcome = run_iteration(&it, &k, &ctx.params);
    match outcome {
        Ok(o) => {
            echo.t_bridge = Some(o.report.bridge_half_width);
            ctx.write_echo(&echo, &[("decay_delta1", k.decay_delta1)])?;
            write_profile(ctx, &o)?;
            write_report(ctx, &o.report)?;
            summarize(ctx, &o.report);
            if o.report.converged {
                Ok(())
            } else {
                Err(CliError::NonConvergence(format!(
                    "sup-norm delta still above {} after {} steps",
                    ctx.cfg.tol, ctx.cfg.max_iter
                )))
            }
        }
        Err(IterError::Diverged { step, report }) => {
            ctx.write_echo(&echo, &[("decay_delta1", k.decay_delta1)])?;
            write_report(ctx, &report)?;
            summarize(ctx, &report);
            Err(CliError::NonConvergence(format!("delta grew for 5 consecutive steps up to step {step}")))
        }
        Err(e) => Err(domain(e)),
    }
}

// ---------------------------------------------------------------- simpson-table

fn write_kappa(ctx: &Context, rows: &[KappaRow]) -> Result<(), CliError> {
    let mut t = Table::new(&["n", "h", "abs_I_printed_mode", "abs_I_consistent_mode"]);
    for r in rows {
        t.row([r.n.to_string(), num(r.h), num(r.abs_printed), num(r.abs_consistent)]);
    }
    t.save(&ctx.path("simpson_table.csv"))
}

pub fn simpson_table(ctx: &Context) -> Result<(), CliError> {
    let rows = kappa_table(&ctx.params, ctx.cfg.kappa_shift(), &ctx.cfg.kappa_steps).map_err(domain)?;
    write_kappa(ctx, &rows)?;
    let mut echo = ctx.cfg.clone();
    echo.kappa_shift = Some(ctx.cfg.kappa_shift());
    ctx.write_echo(&echo, &[])?;
    ctx.say(format!("{:>9} {:>10} {:>12}", "n", "h", "|I_n|"));
    for r in &rows {
        let v = match ctx.cfg.kappa_mode {
            Mode::Printed => r.abs_printed,
            Mode::Consistent => r.abs_consistent,
        };
        ctx.say(format!("{:>9} {:>10} {:>12.6}", r.n, r.h, v));
    }
    Ok(())
}

// ---------------------------------------------------------------- verify

struct Check {
    name: &'static str,
    passed: bool,
    value: f64,
    detail: String,
}

fn check(name: &'static str, passed: bool, value: f64, detail: impl Into<String>) -> Check {
    Check { name, passed, value, detail: detail.into() }
}

fn failed(name: &'static str, detail: impl std::fmt::Display) -> Check {
    check(name, false, f64::NAN, detail.to_string())
}

fn root_checks(params: &ModelParams, data: &RootsData, out: &mut Vec<Check>) {
    let worst = data.rows.iter().filter(|(n, ..)| !n.starts_with("eta")).fold(0.0, |m: f64, r| m.max(r.2));
    out.push(check("quadratic_roots_residual", worst < 1e-12, worst, "max |D| at r1 = 0"));
    match &data.strips[0].2 {
        Ok(n) => out.push(check("ce_left_strip_single_root", *n == 1, *n as f64, "roots with lambda1 - eps <= Re z <= 0")),
        Err(e) => out.push(failed("ce_left_strip_single_root", e)),
    }
    out.push(check(
        "ce_axis_clear",
        data.axis.clear && data.axis.dominance,
        data.axis.min_abs,
        format!("min |D(i xi)| at xi = {}", data.axis.xi_at_min),
    ));
    for (name, r) in [("eta1_continuation", &data.eta1), ("eta2_continuation", &data.eta2)] {
        match r {
            Ok(r) => out.push(check(name, true, r.value.re, format!("residual {:e} after {} steps", r.residual, r.path_steps))),
            Err(e) => out.push(failed(name, format!("r1 = {}: {e}", params.r1))),
        }
    }
}

fn kernel_checks(params: &ModelParams, k: &KernelTable, out: &mut Vec<Check>) {
    let max = k.max_abs();
    out.push(check("kernel_real", k.max_imag < 1e-8 * max, k.max_imag, "max |Im G| against 1e-8 max |G|"));
    // the envelope is fitted on |t| >= t_half/2, above the quadrature noise floor
    let excess = k
        .values
        .iter()
        .enumerate()
        .filter(|&(i, g)| k.t(i).abs() >= 0.5 * k.t_half && g.abs() > 1e-6 * max)
        .map(|(i, g)| g.abs() / (k.decay_m1 * (-k.decay_delta1 * k.t(i).abs()).exp()))
        .fold(0.0, f64::max);
    out.push(check(
        "kernel_envelope",
        excess <= 1.0,
        excess,
        "max |G| / (M1 exp(-delta1 |t|)) on the fitted tail",
    ));
    let mass_err = (k.total_mass() - 1.0 / params.delta).abs();
    out.push(check("kernel_mass", mass_err < 1e-3, mass_err, "|integral of G - 1/delta|"));

    let g = Grid::new(10.0, k.step.max(0.05)).expect("fixed grid");
    let ue = params.upper_equilibrium();
    let zero = Profile::generic(g, vec![0.0; g.count], 0.0, 0.0).expect("sized");
    match apply_f(&zero, k, params, true) {
        Ok((f, _)) => {
            let worst = f.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
            out.push(check("fixed_point_zero", worst == 0.0, worst, "sup |F(0)|"));
        }
        Err(e) => out.push(failed("fixed_point_zero", e)),
    }
    let full = Profile::generic(g, vec![ue; g.count], ue, ue).expect("sized");
    match apply_f(&full, k, params, true) {
        Ok((f, _)) => {
            let worst = f.values.iter().fold(0.0, |m: f64, v| m.max((v - ue).abs()));
            out.push(check("fixed_point_ue", worst < 1e-3, worst, "sup |F(ue) - ue|"));
        }
        Err(e) => out.push(failed("fixed_point_ue", e)),
    }
}

fn quasi_checks(q: &QuasiData, out: &mut Vec<Check>) {
    if let Family::QuasiLower { bridge, .. } = q.lower.family {
        let gap = continuity_gap(&q.lower.family);
        out.push(check("bridge_matching", gap < 1e-12, gap, format!("T = {}", bridge.half_width)));
    }
    let u = &q.upper_report;
    out.push(check("quasi_upper_certificate", u.passed, u.worst_residual, format!("worst at t = {}", u.worst_at)));
    let l = &q.lower_report;
    out.push(check(
        "quasi_lower_certificate",
        l.passed,
        l.worst_residual,
        format!("T = {}, worst at t = {}", q.bridge, l.worst_at),
    ));
    out.push(check("quasi_ordered", q.ordered, f64::NAN, "0 <= lower <= upper <= ue"));
}

fn h_monotone(params: &ModelParams) -> Check {
    let ue = params.upper_equilibrium();
    let hs: Vec<f64> = (0..=200)
        .map(|k| h_operator(&ConstantProfile(ue * k as f64 / 200.0), 0.0, params))
        .collect();
    let ok = hs.windows(2).all(|w| w[1] >= w[0]);
    check(
        "h_monotone",
        ok && params.beta >= beta_floor(params),
        beta_floor(params),
        "H nondecreasing on constants in [0, ue]; value is the beta floor",
    )
}

fn iteration_checks(ctx: &Context, k: &KernelTable, q: &QuasiData, out: &mut Vec<Check>) -> Result<(), CliError> {
    let certified = q.upper_report.passed && q.lower_report.passed && q.ordered;
    if !certified {
        out.push(failed("iteration", "not run: no certified quasi pair"));
        return Ok(());
    }
    let mut it = iteration_config(&ctx.cfg, q.grid);
    it.bridge_half_width = Some(q.bridge);
    match run_iteration(&it, k, &ctx.params) {
        Ok(o) => {
            write_profile(ctx, &o)?;
            write_report(ctx, &o.report)?;
            let r = &o.report;
            out.push(check("iteration_converged", r.converged, r.deltas.last().copied().unwrap_or(f64::NAN), "last delta"));
            out.push(check("iteration_monotone", r.monotone_ok.iter().all(|&b| b), f64::NAN, "every step"));
            out.push(check("iteration_ordered", r.order_ok.iter().all(|&b| b), r.max_below_lower, "every step"));
            let b = r.boundary_errors.0.max(r.boundary_errors.1);
            out.push(check("iteration_boundary", b < 1e-2, b, "max boundary error"));
            out.push(check("iteration_residual", r.final_residual < 1e-5, r.final_residual, "interior sup residual"));
        }
        Err(e) => out.push(failed("iteration", e)),
    }
    Ok(())
}

pub fn verify(ctx: &Context) -> Result<(), CliError> {
    ctx.model_checks()?;
    let params = &ctx.params;
    let mut checks = Vec::new();

    let roots = roots_data(params);
    write_roots(ctx, &roots)?;
    root_checks(params, &roots, &mut checks);
    checks.push(h_monotone(params));

    let kernel = build_kernel(params, &ctx.cfg);
    let mut echo = with_n_freq(&ctx.cfg);
    match &kernel {
        Ok(k) => {
            write_kernel(ctx, k)?;
            kernel_checks(params, k, &mut checks);
        }
        Err(e) => checks.push(failed("kernel", e)),
    }

    match kappa_table(params, ctx.cfg.kappa_shift(), &ctx.cfg.kappa_steps) {
        Ok(rows) => {
            write_kappa(ctx, &rows)?;
            let finite = rows.iter().all(|r| r.abs_printed.is_finite() && r.abs_consistent.is_finite());
            let last = rows.last().map_or(f64::NAN, |r| match ctx.cfg.kappa_mode {
                Mode::Printed => r.abs_printed,
                Mode::Consistent => r.abs_consistent,
            });
            checks.push(check("simpson_table", finite, last, "finest |I_n| in the selected mode"));
        }
        Err(e) => checks.push(failed("simpson_table", e)),
    }

    let fallback = kernel.as_ref().map_or(40.0, |k| 40f64.max(3.0 / k.decay_delta1));
    let grid = default_grid(&ctx.cfg, fallback)?;
    echo.half_width = Some(grid.half_width);
    match quasi_data(params, &ctx.cfg, grid) {
        Ok(q) => {
            write_quasi(ctx, &q)?;
            echo.t_bridge = Some(q.bridge);
            quasi_checks(&q, &mut checks);
            match &kernel {
                Ok(k) => iteration_checks(ctx, k, &q, &mut checks)?,
                Err(_) => checks.push(failed("iteration", "not run: no kernel")),
            }
        }
        Err(e) => {
            checks.push(failed("quasi", e));
            checks.push(failed("iteration", "not run: no quasi pair"));
        }
    }
    echo.kappa_shift = Some(ctx.cfg.kappa_shift());
    ctx.write_echo(&echo, &[])?;

    let mut t = Table::new(&["check", "passed", "value", "detail"]);
    for c in &checks {
        t.row([c.name.to_string(), c.passed.to_string(), num(c.value), c.detail.clone()]);
        ctx.say(format!("{:<5} {:<28} {:<24} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, num(c.value), c.detail));
    }
    t.save(&ctx.path("verify.csv"))?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        Err(CliError::ChecksFailed { failed, total: checks.len() })
    } else {
        Ok(())
    }
}
