//! The four batch commands: solve, sweep, lemma-tests, report.
//!
//! Exit codes: 0 success, 2 configuration or precondition error, 3 solver
//! failure, 4 verification failure (reports are still written).

use std::path::{Path, PathBuf};

use hcma_core::checks;
use hcma_core::convexity::{degree_check, modulus_of_convexity};
use hcma_core::error::SolverError;
use hcma_core::linalg::CMat;
use hcma_core::solver::{
    continuity_solve, epsilon_sweep, residual_field, ContinuityStep, SolverConfig, SolverState,
};
use hcma_core::torus::{spatial_pair_of_slice, GridField, TorusDomain};
use hcma_core::verify::{convexity_preservation_check, convexity_report, h_squared, path_energy,
    ConvexityReport, VerifyTolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, ExperimentConfig};
use crate::io;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

pub struct CmdContext {
    pub out_override: Option<PathBuf>,
    pub quiet: bool,
    pub seed: u64,
}

impl CmdContext {
    fn say(&self, msg: &str) {
        if !self.quiet {
            println!("{msg}");
        }
    }
}

fn fail_config(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

fn fail_solver(e: &SolverError) -> u8 {
    eprintln!("error: {e}");
    match e {
        // A non-convex boundary is a violated precondition of the
        // configuration, not a numerical failure.
        SolverError::BoundaryNotConvex { .. } | SolverError::BadConfig(_) => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

struct Experiment {
    cfg: ExperimentConfig,
    dom: TorusDomain,
    section: CMat,
    solver_cfg: SolverConfig,
    phi0: Vec<f64>,
    phi1: Vec<f64>,
    out_dir: PathBuf,
}

fn setup(config_path: &Path, ctx: &CmdContext) -> Result<Experiment, ConfigError> {
    let cfg = ExperimentConfig::load(config_path)?;
    let dom = cfg.build_domain()?;
    let section = cfg.build_section()?;
    let solver_cfg = cfg.solver_config()?;
    let (phi0, phi1) = cfg.build_boundary(&dom)?;
    let out_dir = ctx
        .out_override
        .clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output.dir));
    Ok(Experiment {
        cfg,
        dom,
        section,
        solver_cfg,
        phi0,
        phi1,
        out_dir,
    })
}

/// Boundary degree-of-convexity line for the report: deterministic modulus
/// threshold at the worst boundary point, cross-checked by randomized
/// admissible sections when δ > 0.
fn boundary_degree_line(exp: &Experiment, seed: u64) -> (f64, Option<bool>) {
    let metric = exp.dom.metric_b().clone();
    let mut worst_mu = f64::INFINITY;
    let mut worst_point: Option<(CMat, CMat)> = None;
    for slice in [&exp.phi0, &exp.phi1] {
        for s in 0..exp.dom.spatial_len() {
            let (a, b) = spatial_pair_of_slice(slice, &exp.dom, s);
            let mu = modulus_of_convexity(&a, &b, &exp.section, &metric);
            if mu < worst_mu {
                worst_mu = mu;
                worst_point = Some((a, b));
            }
        }
    }
    let delta = exp.cfg.convexity.delta;
    let verdict = if delta > 0.0 {
        worst_point.map(|(a, b)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            degree_check(&a, &b, &exp.section, &metric, delta, 128, &mut rng)
        })
    } else {
        None
    };
    (worst_mu, verdict)
}

struct ReportBundle {
    report: ConvexityReport,
    per_p: Vec<(u32, f64, f64, bool)>,
    energy: f64,
    speed_osc: f64,
    boundary_mu: f64,
    degree_verdict: Option<bool>,
    residual_norm: f64,
    all_pass: bool,
}

fn run_verification(
    exp: &Experiment,
    state: &SolverState,
    eps: f64,
    seed: u64,
) -> Result<ReportBundle, SolverError> {
    let mut cfg_eps = exp.solver_cfg.clone();
    cfg_eps.epsilon = eps;
    let tols = VerifyTolerances::default();
    let p0 = exp.cfg.convexity.p_list[0];
    let report = convexity_report(
        state,
        &exp.dom,
        &exp.section,
        p0,
        exp.cfg.convexity.mu,
        &cfg_eps,
        &tols,
    )?;
    let h2 = h_squared(&exp.dom);
    let mut per_p = Vec::new();
    let mut preservation_all = true;
    for &p in &exp.cfg.convexity.p_list {
        let tol = tols.preservation_fixed + tols.preservation_h2 * h2;
        let (interior, boundary, pass) =
            convexity_preservation_check(&state.phi, &exp.dom, &exp.section, p, tol);
        preservation_all &= pass;
        per_p.push((p, interior, boundary, pass));
    }
    let (energy, speed) = path_energy(&state.phi, &exp.dom);
    let max_speed = speed.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let min_speed = speed.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    let (boundary_mu, degree_verdict) = boundary_degree_line(exp, seed);
    let residual = residual_field(&state.phi, &exp.dom, &cfg_eps, None)?
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let all_pass =
        report.all_pass() && preservation_all && degree_verdict.unwrap_or(true);
    Ok(ReportBundle {
        report,
        per_p,
        energy,
        speed_osc: max_speed - min_speed,
        boundary_mu,
        degree_verdict,
        residual_norm: residual,
        all_pass,
    })
}

fn report_text(
    exp: &Experiment,
    state: &SolverState,
    bundle: &ReportBundle,
    trace: Option<&[ContinuityStep]>,
) -> String {
    let mut out = String::new();
    let fmt = io::fmt_f;
    out.push_str("verification report (all quantities dimensionless)\n");
    out.push_str(&format!("n: {}\n", exp.dom.n()));
    out.push_str(&format!(
        "grid: rows {} x spatial {} (nx {}, ny {}, y_invariant {})\n",
        exp.dom.rows(),
        exp.dom.spatial_len(),
        exp.dom.nx(),
        exp.dom.ny(),
        exp.dom.y_invariant()
    ));
    out.push_str(&format!("epsilon: {}\n", fmt(exp.solver_cfg.epsilon)));
    out.push_str(&format!("sigma: {}\n", fmt(state.sigma)));
    out.push_str(&format!("residual_sup: {}\n", fmt(bundle.residual_norm)));
    out.push_str(&format!("min_eig_a: {}\n", fmt(state.min_eig_a)));
    out.push_str(&format!("newton_iters_last: {}\n", state.newton_iters_used));
    if let Some(steps) = trace {
        out.push_str(&format!("sigma_steps: {}\n", steps.len()));
    }
    out.push_str(&format!("energy: {}\n", fmt(bundle.energy)));
    out.push_str(&format!("speed_oscillation: {}\n", fmt(bundle.speed_osc)));
    out.push_str(&format!(
        "boundary_modulus_worst: {}\n",
        fmt(bundle.boundary_mu)
    ));
    if let Some(v) = bundle.degree_verdict {
        out.push_str(&format!(
            "boundary_degree_check (delta {}): {}\n",
            fmt(exp.cfg.convexity.delta),
            if v { "pass" } else { "FAIL" }
        ));
    }
    let r = &bundle.report;
    out.push_str(&format!("target_mu: {}\n", fmt(r.mu)));
    out.push_str(&format!(
        "min_slice_modulus: {}\n",
        fmt(r.slices.iter().map(|s| s.modulus).fold(f64::INFINITY, f64::min))
    ));
    out.push_str(&format!(
        "metric_gap: {} (tol {}) -> {}\n",
        fmt(r.min_metric_gap),
        fmt(r.metric_tol),
        if r.metric_bound_pass { "pass" } else { "FAIL" }
    ));
    for (p, interior, boundary, pass) in &bundle.per_p {
        out.push_str(&format!(
            "q_preservation p={p}: interior {} boundary {} (tol {}) -> {}\n",
            fmt(*interior),
            fmt(*boundary),
            fmt(r.preservation_tol),
            if *pass { "pass" } else { "FAIL" }
        ));
    }
    out.push_str(&format!(
        "max_principle_min p={}: {} (tol {}, eligible {}, excluded {}) -> {}\n",
        r.p,
        fmt(r.max_principle_min),
        fmt(r.max_principle_tol),
        r.max_principle_eligible,
        r.max_principle_excluded,
        if r.max_principle_pass { "pass" } else { "FAIL" }
    ));
    out.push_str(&format!(
        "overall: {}\n",
        if bundle.all_pass { "pass" } else { "FAIL" }
    ));
    out
}

fn write_solution_files(exp: &Experiment, state: &SolverState) -> std::io::Result<()> {
    let csv = io::solution_csv(&exp.dom, &state.phi);
    io::write_atomic(&exp.out_dir.join("solution.csv"), csv.as_bytes())?;
    if exp.cfg.output.formats.iter().any(|f| f == "bin") {
        let bin = io::solution_bin(&exp.dom, &state.phi);
        io::write_atomic(&exp.out_dir.join("solution.bin"), &bin)?;
    }
    Ok(())
}

pub fn cmd_solve(config_path: &Path, ctx: &CmdContext) -> u8 {
    let exp = match setup(config_path, ctx) {
        Ok(e) => e,
        Err(e) => return fail_config(e),
    };
    ctx.say(&format!(
        "solving: {} rows x {} spatial points, epsilon {}",
        exp.dom.rows(),
        exp.dom.spatial_len(),
        exp.solver_cfg.epsilon
    ));
    let (state, trace) =
        match continuity_solve(&exp.dom, &exp.phi0, &exp.phi1, &exp.section, &exp.solver_cfg) {
            Ok(r) => r,
            Err(e) => return fail_solver(&e),
        };
    ctx.say(&format!(
        "converged: residual {:.3e}, {} sigma steps",
        state.residual_norm,
        trace.len()
    ));
    let bundle = match run_verification(&exp, &state, exp.solver_cfg.epsilon, ctx.seed) {
        Ok(b) => b,
        Err(e) => return fail_solver(&e),
    };
    let text = report_text(&exp, &state, &bundle, Some(&trace));
    if let Err(e) = write_solution_files(&exp, &state)
        .and_then(|_| io::write_atomic(&exp.out_dir.join("report.txt"), text.as_bytes()))
        .and_then(|_| {
            io::write_atomic(
                &exp.out_dir.join("slices.csv"),
                io::slices_csv(&bundle.report).as_bytes(),
            )
        })
    {
        eprintln!("error: cannot write outputs: {e}");
        return EXIT_SOLVER;
    }
    ctx.say(&text);
    if bundle.all_pass {
        EXIT_OK
    } else {
        eprintln!("verification failed; see {}", exp.out_dir.join("report.txt").display());
        EXIT_VERIFY
    }
}

pub fn cmd_sweep(config_path: &Path, ctx: &CmdContext) -> u8 {
    let exp = match setup(config_path, ctx) {
        Ok(e) => e,
        Err(e) => return fail_config(e),
    };
    let eps_list = match exp.cfg.sweep_eps() {
        Ok(e) => e,
        Err(e) => return fail_config(e),
    };
    ctx.say(&format!("sweep over {} epsilon values", eps_list.len()));
    let sweep = match epsilon_sweep(
        &exp.dom,
        &exp.phi0,
        &exp.phi1,
        &exp.section,
        &eps_list,
        &exp.solver_cfg,
    ) {
        Ok(s) => s,
        Err(e) => return fail_solver(&e),
    };
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (k, state) in sweep.states.iter().enumerate() {
        let bundle = match run_verification(&exp, state, sweep.eps[k], ctx.seed) {
            Ok(b) => b,
            Err(e) => return fail_solver(&e),
        };
        all_pass &= bundle.all_pass;
        let min_mod = bundle
            .report
            .slices
            .iter()
            .map(|s| s.modulus)
            .fold(f64::INFINITY, f64::min);
        rows.push((
            sweep.eps[k],
            sweep.distances[k],
            min_mod,
            bundle.energy,
            bundle.speed_osc,
        ));
    }
    let csv = io::sweep_csv(&rows);
    if let Err(e) = io::write_atomic(&exp.out_dir.join("sweep.csv"), csv.as_bytes()) {
        eprintln!("error: cannot write outputs: {e}");
        return EXIT_SOLVER;
    }
    ctx.say(&csv);
    if all_pass {
        EXIT_OK
    } else {
        eprintln!("verification failed for at least one epsilon");
        EXIT_VERIFY
    }
}

pub fn cmd_lemma_tests(seed: u64, count: Option<usize>, ctx: &CmdContext) -> u8 {
    let outcomes = checks::run_all_counts(seed, count);
    let mut table = String::new();
    table.push_str(&format!("lemma suites (seed {seed})\n"));
    table.push_str("suite                 cases  failures  worst_margin\n");
    let mut failed = false;
    let mut vacuous = true;
    for o in &outcomes {
        failed |= !o.passed();
        vacuous &= o.cases == 0;
        table.push_str(&format!(
            "{:<20} {:>6} {:>9}  {:+.6e}  ({})\n",
            o.name, o.cases, o.failures, o.worst, o.detail
        ));
    }
    if vacuous {
        table.push_str("WARNING: 0 cases in every suite — vacuous pass\n");
    }
    print!("{table}");
    if let Some(dir) = &ctx.out_override {
        if let Err(e) = io::write_atomic(&dir.join("lemma_tests.txt"), table.as_bytes()) {
            eprintln!("error: cannot write outputs: {e}");
            return EXIT_SOLVER;
        }
    }
    if failed {
        EXIT_VERIFY
    } else {
        EXIT_OK
    }
}

pub fn cmd_report(config_path: &Path, solution_path: &Path, ctx: &CmdContext) -> u8 {
    let exp = match setup(config_path, ctx) {
        Ok(e) => e,
        Err(e) => return fail_config(e),
    };
    let phi: GridField = match solution_path.extension().and_then(|e| e.to_str()) {
        Some("bin") => {
            let bytes = match std::fs::read(solution_path) {
                Ok(b) => b,
                Err(e) => return fail_config(format!("cannot read solution: {e}")),
            };
            match io::read_solution_bin(&exp.dom, &bytes) {
                Ok(f) => f,
                Err(e) => return fail_config(e),
            }
        }
        _ => {
            let text = match std::fs::read_to_string(solution_path) {
                Ok(t) => t,
                Err(e) => return fail_config(format!("cannot read solution: {e}")),
            };
            match io::read_solution_csv(&exp.dom, &text) {
                Ok(f) => f,
                Err(e) => return fail_config(e),
            }
        }
    };
    // Rebuild a state snapshot from the stored grid.
    let state = SolverState {
        phi,
        sigma: 1.0,
        residual_norm: f64::NAN,
        min_eig_a: f64::NAN,
        newton_iters_used: 0,
    };
    let bundle = match run_verification(&exp, &state, exp.solver_cfg.epsilon, ctx.seed) {
        Ok(b) => b,
        Err(e) => return fail_solver(&e),
    };
    let text = report_text(&exp, &state, &bundle, None);
    if let Err(e) = io::write_atomic(&exp.out_dir.join("report.txt"), text.as_bytes())
        .and_then(|_| {
            io::write_atomic(
                &exp.out_dir.join("slices.csv"),
                io::slices_csv(&bundle.report).as_bytes(),
            )
        })
    {
        eprintln!("error: cannot write outputs: {e}");
        return EXIT_SOLVER;
    }
    ctx.say(&text);
    if bundle.all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}
