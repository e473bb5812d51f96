//! Elliptic solver on the strip `[0,1] × torus`.
//!
//! Under the θ-invariant reduction (see [`crate::torus`]), the perturbed
//! equation `Φ_ττ̄ − Φ_τβ̄ g^{αβ̄} Φ_ατ̄ = ε b_{αβ̄} g^{αβ̄}`, multiplied by 4,
//! becomes the pointwise residual
//!
//! ```text
//! R(φ) = φ_tt − 4·Re(cᵀ A⁻¹ c̄) − 4ε·Re tr(b A⁻¹),      c_α = ¼(φ_{t xα} + i φ_{t yα}),
//! ```
//!
//! with `A = b + φ_{αβ̄}` required positive definite (the ellipticity guard).
//! Its Gâteaux derivative at φ in direction ψ is
//!
//! ```text
//! R'(φ)[ψ] = ψ_tt − 8·Re(vᵀ d) + 4 v̄ᵀ ψ_H v + 4ε·tr(ψ_H A⁻¹ b A⁻¹),
//!            v = A⁻¹c̄,  d_β = ¼(ψ_{t xβ} + i ψ_{t yβ}),  ψ_H = ¼-Hessian block of ψ,
//! ```
//!
//! which is 4× the τ-normalized elliptic operator `L^{ij̄}∂_{ij̄}` — one
//! positive rescaling used consistently, so signs of maximum-principle
//! quantities are unaffected. Newton solves `R'(φ)[δ] = −R(φ)` with a
//! matrix-free BiCGStab and backtracks until the residual decreases and the
//! guard holds. The continuity driver marches the boundary scale σ from 0
//! to 1, seeding each solve with the previous solution; the σ = 0 seed is
//! the exact z-independent quadratic `φ(t) = 2εn·t(t−1)`.

mod bicgstab;

pub use bicgstab::BiCgOutcome;

use num_complex::Complex64;

use crate::convexity::{k_matrix, q_norm, strict_convexity};
use crate::error::SolverError;
use crate::linalg::CMat;
use crate::torus::{complex_hessian, spatial_pair_of_slice, GridField, TorusDomain};

/// Tunables of the Newton/continuity machinery.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Elliptic perturbation strength; must be positive.
    pub epsilon: f64,
    /// Residual sup-norm target for Newton.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Initial boundary-scale step of the continuity march.
    pub sigma_step: f64,
    pub sigma_min_step: f64,
    /// Backtracking factor for damped Newton.
    pub damping: f64,
    pub max_backtrack: usize,
    /// Minimum allowed eigenvalue of `A` on the grid.
    pub ellipticity_guard: f64,
}

impl SolverConfig {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            newton_tol: 1e-10,
            max_newton: 50,
            sigma_step: 0.1,
            sigma_min_step: 1e-4,
            damping: 0.5,
            max_backtrack: 30,
            ellipticity_guard: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let pos = [
            ("epsilon", self.epsilon),
            ("newton_tol", self.newton_tol),
            ("sigma_step", self.sigma_step),
            ("sigma_min_step", self.sigma_min_step),
            ("damping", self.damping),
            ("ellipticity_guard", self.ellipticity_guard),
        ];
        for (name, v) in pos {
            if v.is_nan() || v <= 0.0 || !v.is_finite() {
                return Err(SolverError::BadConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.sigma_min_step >= self.sigma_step || self.sigma_step > 1.0 {
            return Err(SolverError::BadConfig(format!(
                "need sigma_min_step < sigma_step <= 1 (got {} and {})",
                self.sigma_min_step, self.sigma_step
            )));
        }
        if self.damping >= 1.0 {
            return Err(SolverError::BadConfig("damping must be < 1".into()));
        }
        if self.max_newton == 0 {
            return Err(SolverError::BadConfig("max_newton must be >= 1".into()));
        }
        Ok(())
    }
}

/// A converged solve snapshot.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub phi: GridField,
    /// Boundary scale this state solves for.
    pub sigma: f64,
    pub residual_norm: f64,
    /// Min over the interior grid of min-eig `A`.
    pub min_eig_a: f64,
    pub newton_iters_used: usize,
}

/// One accepted step of the continuity march.
#[derive(Debug, Clone)]
pub struct ContinuityStep {
    pub sigma: f64,
    pub residual_norm: f64,
    pub min_eig_a: f64,
    pub newton_iters: usize,
    /// Max over the two Dirichlet rows of `Q^[4]` for the σ-scaled section.
    pub boundary_max_q4: f64,
}

/// Result of a descending-ε sweep.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub eps: Vec<f64>,
    pub states: Vec<SolverState>,
    /// `‖Φ^{ε_{k-1}} − Φ^{ε_k}‖∞`; first entry is 0 by convention.
    pub distances: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Pointwise inversion helper (n ≤ 2 closed forms)
// ---------------------------------------------------------------------------

fn invert_hermitian(a: &CMat) -> Option<CMat> {
    match a.nrows() {
        1 => {
            let d = a[(0, 0)].re;
            if d == 0.0 {
                return None;
            }
            Some(CMat::from_row_slice(1, 1, &[Complex64::new(1.0 / d, 0.0)]))
        }
        2 => {
            let det = a[(0, 0)].re * a[(1, 1)].re - a[(0, 1)].norm_sqr();
            if det == 0.0 {
                return None;
            }
            let inv_det = Complex64::new(1.0 / det, 0.0);
            Some(CMat::from_row_slice(
                2,
                2,
                &[
                    a[(1, 1)] * inv_det,
                    -a[(0, 1)] * inv_det,
                    -a[(1, 0)] * inv_det,
                    a[(0, 0)] * inv_det,
                ],
            ))
        }
        n => {
            let c = crate::linalg::cholesky(a).ok()?;
            let q = c.solve_lower_triangular(&crate::linalg::identity(n))?;
            Some(q.adjoint() * &q)
        }
    }
}

// ---------------------------------------------------------------------------
// Assembly: residual + frozen linearization coefficients
// ---------------------------------------------------------------------------

/// Frozen per-point coefficients of the linearized operator.
struct OperatorCoeffs {
    n: usize,
    v_re: Vec<f64>,
    v_im: Vec<f64>,
    m_re: Vec<f64>,
    m_im: Vec<f64>,
    /// Jacobi diagonal of the discrete operator.
    diag: Vec<f64>,
}

struct Assembled {
    residual: Vec<f64>,
    residual_norm: f64,
    min_eig_a: f64,
    coeffs: OperatorCoeffs,
}

fn assemble(
    phi: &GridField,
    dom: &TorusDomain,
    epsilon: f64,
    guard: f64,
    forcing: Option<&GridField>,
) -> Result<Assembled, SolverError> {
    let nt = dom.nt();
    let slen = dom.spatial_len();
    let n = dom.n();
    let npts = nt * slen;
    let ht = dom.h_t();

    let mut residual = vec![0.0; npts];
    let mut v_re = vec![0.0; npts * n];
    let mut v_im = vec![0.0; npts * n];
    let mut m_re = vec![0.0; npts * n * n];
    let mut m_im = vec![0.0; npts * n * n];
    let mut diag = vec![0.0; npts];

    let b_metric = dom.metric_b().clone();
    let mut residual_norm = 0.0f64;
    let mut min_eig_a = f64::INFINITY;

    for it in 1..=nt {
        for s in 0..slen {
            let idx = (it - 1) * slen + s;
            let hess = complex_hessian(phi, dom, it, s);
            let min_eig = crate::linalg::min_eig_hermitian(&hess.a);
            if min_eig < min_eig_a {
                min_eig_a = min_eig;
            }
            if min_eig <= guard {
                return Err(SolverError::EllipticityLost {
                    min_eig,
                    guard,
                    it,
                });
            }
            let a_inv = invert_hermitian(&hess.a).ok_or(SolverError::EllipticityLost {
                min_eig,
                guard,
                it,
            })?;
            // v = A⁻¹ c̄
            let c_conj = hess.cross.map(|z| z.conj());
            let v = &a_inv * &c_conj;
            // quadratic term Re(cᵀ v) and metric trace Re tr(b A⁻¹)
            let quad: f64 = hess
                .cross
                .iter()
                .zip(v.iter())
                .map(|(c, w)| (c * w).re)
                .sum();
            let trace: f64 = (0..n)
                .map(|al| {
                    (0..n)
                        .map(|be| (b_metric[(al, be)] * a_inv[(be, al)]).re)
                        .sum::<f64>()
                })
                .sum();
            let f = forcing.map(|f| f.at(it, s)).unwrap_or(0.0);
            let r = hess.t_block - 4.0 * quad - 4.0 * epsilon * trace - f;
            residual[idx] = r;
            residual_norm = residual_norm.max(r.abs());

            // M = v v* + ε A⁻¹ b A⁻¹
            let e_mat = &a_inv * &b_metric * &a_inv;
            for al in 0..n {
                v_re[idx * n + al] = v[al].re;
                v_im[idx * n + al] = v[al].im;
                for be in 0..n {
                    let m_entry = v[al] * v[be].conj() + e_mat[(al, be)] * epsilon;
                    m_re[(idx * n + al) * n + be] = m_entry.re;
                    m_im[(idx * n + al) * n + be] = m_entry.im;
                }
            }
            // Jacobi diagonal: ψ_tt plus the pure second-derivative terms.
            let mut d = -2.0 / (ht * ht);
            for al in 0..n {
                let r_aa = m_re[(idx * n + al) * n + al];
                let hx = dom.axes()[dom.x_axis(al)].h;
                d -= r_aa * 2.0 / (hx * hx);
                if let Some(ay) = dom.y_axis(al) {
                    let hy = dom.axes()[ay].h;
                    d -= r_aa * 2.0 / (hy * hy);
                }
            }
            diag[idx] = d;
        }
    }

    Ok(Assembled {
        residual,
        residual_norm,
        min_eig_a,
        coeffs: OperatorCoeffs {
            n,
            v_re,
            v_im,
            m_re,
            m_im,
            diag,
        },
    })
}

impl OperatorCoeffs {
    /// Applies the frozen linearized operator to the field given by `value`,
    /// writing interior values into `out`.
    fn apply_with<F>(&self, dom: &TorusDomain, value: F, out: &mut [f64])
    where
        F: Fn(usize, usize) -> f64,
    {
        let nt = dom.nt();
        let slen = dom.spatial_len();
        let n = self.n;
        let ht = dom.h_t();
        let axes = dom.axes();
        for it in 1..=nt {
            for s in 0..slen {
                let idx = (it - 1) * slen + s;
                let center = value(it, s);
                let mut acc = (value(it + 1, s) - 2.0 * center + value(it - 1, s)) / (ht * ht);
                // −2 Σ_β [Re v_β ψ_{t xβ} − Im v_β ψ_{t yβ}]
                for be in 0..n {
                    let ax = dom.x_axis(be);
                    let h = axes[ax].h;
                    let sp = dom.shift(s, ax, 1);
                    let sm = dom.shift(s, ax, -1);
                    let cross_tx = (value(it + 1, sp) - value(it + 1, sm)
                        - (value(it - 1, sp) - value(it - 1, sm)))
                        / (4.0 * ht * h);
                    acc -= 2.0 * self.v_re[idx * n + be] * cross_tx;
                    if let Some(ay) = dom.y_axis(be) {
                        let hy = axes[ay].h;
                        let syp = dom.shift(s, ay, 1);
                        let sym = dom.shift(s, ay, -1);
                        let cross_ty = (value(it + 1, syp) - value(it + 1, sym)
                            - (value(it - 1, syp) - value(it - 1, sym)))
                            / (4.0 * ht * hy);
                        acc += 2.0 * self.v_im[idx * n + be] * cross_ty;
                    }
                }
                // Σ_{αβ} [Re M_{αβ}(ψ_{xαxβ} + ψ_{yαyβ}) + Im M_{αβ}(ψ_{xαyβ} − ψ_{yαxβ})]
                for al in 0..n {
                    for be in 0..n {
                        let re = self.m_re[(idx * n + al) * n + be];
                        let im = self.m_im[(idx * n + al) * n + be];
                        let xa = dom.x_axis(al);
                        let xb = dom.x_axis(be);
                        acc += re * second_or_cross(dom, &value, it, s, xa, xb, center);
                        if let (Some(ya), Some(yb)) = (dom.y_axis(al), dom.y_axis(be)) {
                            acc += re * second_or_cross(dom, &value, it, s, ya, yb, center);
                            let d_xy = second_or_cross(dom, &value, it, s, xa, yb, center);
                            let d_yx = second_or_cross(dom, &value, it, s, ya, xb, center);
                            acc += im * (d_xy - d_yx);
                        }
                    }
                }
                out[idx] = acc;
            }
        }
    }

    /// Operator action on an interior-unknown vector with zero Dirichlet rows.
    fn apply_interior(&self, dom: &TorusDomain, x: &[f64], out: &mut [f64]) {
        let nt = dom.nt();
        let slen = dom.spatial_len();
        self.apply_with(
            dom,
            |it, s| {
                if it == 0 || it == nt + 1 {
                    0.0
                } else {
                    x[(it - 1) * slen + s]
                }
            },
            out,
        );
    }
}

#[inline]
fn second_or_cross<F>(
    dom: &TorusDomain,
    value: &F,
    it: usize,
    s: usize,
    a: usize,
    b: usize,
    center: f64,
) -> f64
where
    F: Fn(usize, usize) -> f64,
{
    let axes = dom.axes();
    if a == b {
        let h = axes[a].h;
        let sp = dom.shift(s, a, 1);
        let sm = dom.shift(s, a, -1);
        (value(it, sp) - 2.0 * center + value(it, sm)) / (h * h)
    } else {
        let ha = axes[a].h;
        let hb = axes[b].h;
        let spp = dom.shift(dom.shift(s, a, 1), b, 1);
        let spm = dom.shift(dom.shift(s, a, 1), b, -1);
        let smp = dom.shift(dom.shift(s, a, -1), b, 1);
        let smm = dom.shift(dom.shift(s, a, -1), b, -1);
        (value(it, spp) - value(it, spm) - value(it, smp) + value(it, smm)) / (4.0 * ha * hb)
    }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Pointwise residual over interior points, indexed `(it−1)·spatial_len + s`.
pub fn residual_field(
    phi: &GridField,
    dom: &TorusDomain,
    cfg: &SolverConfig,
    forcing: Option<&GridField>,
) -> Result<Vec<f64>, SolverError> {
    Ok(assemble(phi, dom, cfg.epsilon, cfg.ellipticity_guard, forcing)?.residual)
}

/// Applies the linearization of the residual at `phi` to the field `psi`
/// (using ψ's own Dirichlet rows). Interior-indexed output.
pub fn linearized_apply(
    phi: &GridField,
    psi: &GridField,
    dom: &TorusDomain,
    cfg: &SolverConfig,
) -> Result<Vec<f64>, SolverError> {
    let asm = assemble(phi, dom, cfg.epsilon, cfg.ellipticity_guard, None)?;
    let mut out = vec![0.0; dom.nt() * dom.spatial_len()];
    asm.coeffs.apply_with(dom, |it, s| psi.at(it, s), &mut out);
    Ok(out)
}

/// The exact z-independent solution for zero boundary data:
/// `φ(t) = 2εn·t(t−1)`.
pub fn quadratic_seed(dom: &TorusDomain, epsilon: f64) -> GridField {
    let n = dom.n() as f64;
    GridField::from_fn(dom, |it, _| {
        let t = dom.t_of_row(it);
        2.0 * epsilon * n * t * (t - 1.0)
    })
}

/// `(1−t)·φ0 + t·φ1` as a grid field.
pub fn linear_blend(dom: &TorusDomain, phi0: &[f64], phi1: &[f64]) -> GridField {
    GridField::from_fn(dom, |it, s| {
        let t = dom.t_of_row(it);
        (1.0 - t) * phi0[s] + t * phi1[s]
    })
}

/// Damped Newton from `phi_init`, whose Dirichlet rows define the boundary
/// data. Each step solves the frozen linear system `R'(φ)δ = −R(φ)` by
/// preconditioned BiCGStab, then backtracks until the residual decreases and
/// the ellipticity guard holds.
pub fn newton_solve(
    phi_init: &GridField,
    dom: &TorusDomain,
    cfg: &SolverConfig,
) -> Result<SolverState, SolverError> {
    newton_solve_forced(phi_init, dom, cfg, None)
}

/// Newton with an optional interior forcing field: solves `R(φ) = f`.
pub fn newton_solve_forced(
    phi_init: &GridField,
    dom: &TorusDomain,
    cfg: &SolverConfig,
    forcing: Option<&GridField>,
) -> Result<SolverState, SolverError> {
    cfg.validate()?;
    phi_init.validate_finite()?;
    let npts = dom.nt() * dom.spatial_len();
    let mut phi = phi_init.clone();
    let mut asm = assemble(&phi, dom, cfg.epsilon, cfg.ellipticity_guard, forcing)?;

    for iter in 0..cfg.max_newton {
        if asm.residual_norm <= cfg.newton_tol {
            return Ok(SolverState {
                phi,
                sigma: 1.0,
                residual_norm: asm.residual_norm,
                min_eig_a: asm.min_eig_a,
                newton_iters_used: iter,
            });
        }
        // Loose inner tolerance far from the solution, tight near it.
        let rel_tol = if asm.residual_norm > 1e-6 { 1e-3 } else { 1e-8 };
        let rhs: Vec<f64> = asm.residual.iter().map(|r| -r).collect();
        let inv_diag: Vec<f64> = asm.coeffs.diag.iter().map(|d| 1.0 / d).collect();
        let mut delta = vec![0.0; npts];
        let out = bicgstab::solve(
            |x, y| asm.coeffs.apply_interior(dom, x, y),
            &inv_diag,
            &rhs,
            &mut delta,
            rel_tol,
            20_000,
        );
        if !out.converged && out.rel_residual > 1e-1 {
            return Err(SolverError::LinearSolveFailed {
                achieved: out.rel_residual,
                iters: out.iterations,
            });
        }

        let mut step = 1.0;
        let mut accepted = false;
        let mut guard_blocked = false;
        for _ in 0..=cfg.max_backtrack {
            let mut cand = phi.clone();
            cand.add_interior(&delta, step);
            match assemble(&cand, dom, cfg.epsilon, cfg.ellipticity_guard, forcing) {
                Ok(next) if next.residual_norm < asm.residual_norm => {
                    phi = cand;
                    asm = next;
                    accepted = true;
                    break;
                }
                Ok(_) => {
                    guard_blocked = false;
                }
                Err(SolverError::EllipticityLost { .. }) => {
                    guard_blocked = true;
                }
                Err(e) => return Err(e),
            }
            step *= cfg.damping;
        }
        if !accepted {
            if guard_blocked {
                return Err(SolverError::EllipticityLost {
                    min_eig: asm.min_eig_a,
                    guard: cfg.ellipticity_guard,
                    it: 0,
                });
            }
            return Err(SolverError::NewtonDiverged {
                iterations: iter,
                residual: asm.residual_norm,
            });
        }
    }
    if asm.residual_norm <= cfg.newton_tol {
        Ok(SolverState {
            phi,
            sigma: 1.0,
            residual_norm: asm.residual_norm,
            min_eig_a: asm.min_eig_a,
            newton_iters_used: cfg.max_newton,
        })
    } else {
        Err(SolverError::NewtonDiverged {
            iterations: cfg.max_newton,
            residual: asm.residual_norm,
        })
    }
}

/// Checks strict (S,ω₀)-convexity of one boundary slice over the whole
/// spatial grid.
pub fn boundary_convexity_check(
    slice: &[f64],
    dom: &TorusDomain,
    section_s: &CMat,
    t_end: u8,
) -> Result<(), SolverError> {
    for s in 0..dom.spatial_len() {
        let (a, b) = spatial_pair_of_slice(slice, dom, s);
        let margin = strict_convexity(&a, &b, section_s);
        if !margin.strictly_convex {
            return Err(SolverError::BoundaryNotConvex {
                t_end,
                min_eig_a: margin.min_eig_a,
                max_eig_k: margin.max_eig_k,
            });
        }
    }
    Ok(())
}

/// Max of `Q^[4]` over the two Dirichlet rows for the σ-scaled section.
fn boundary_max_q4(phi: &GridField, dom: &TorusDomain, section_s: &CMat, sigma: f64) -> f64 {
    let scaled_s = section_s.scale(sigma);
    let mut max_q = 0.0f64;
    for it in [0, dom.nt() + 1] {
        for s in 0..dom.spatial_len() {
            let (a, b) = spatial_pair_of_slice(phi.row(it), dom, s);
            match k_matrix(&a, &b, &scaled_s) {
                Ok(k) => max_q = max_q.max(q_norm(&k, 4)),
                Err(_) => max_q = f64::INFINITY,
            }
        }
    }
    max_q
}

/// Method of continuity: marches the boundary scale σ from 0 to 1 with
/// boundary data `σ·(φ0, φ1)`, seeding each Newton solve from the previous
/// solution plus the linear-in-t blend of the boundary increment. Fails with
/// [`SolverError::ContinuityStalled`] when the step underflows
/// `sigma_min_step`.
pub fn continuity_solve(
    dom: &TorusDomain,
    phi0: &[f64],
    phi1: &[f64],
    section_s: &CMat,
    cfg: &SolverConfig,
) -> Result<(SolverState, Vec<ContinuityStep>), SolverError> {
    cfg.validate()?;
    assert_eq!(phi0.len(), dom.spatial_len(), "phi0 length mismatch");
    assert_eq!(phi1.len(), dom.spatial_len(), "phi1 length mismatch");
    boundary_convexity_check(phi0, dom, section_s, 0)?;
    boundary_convexity_check(phi1, dom, section_s, 1)?;

    let blend = linear_blend(dom, phi0, phi1);
    let nt = dom.nt();
    let slen = dom.spatial_len();

    // σ = 0: zero boundary, exact quadratic seed.
    let seed = quadratic_seed(dom, cfg.epsilon);
    let mut state = newton_solve(&seed, dom, cfg)?;
    state.sigma = 0.0;
    let mut trace = vec![ContinuityStep {
        sigma: 0.0,
        residual_norm: state.residual_norm,
        min_eig_a: state.min_eig_a,
        newton_iters: state.newton_iters_used,
        boundary_max_q4: boundary_max_q4(&state.phi, dom, section_s, 0.0),
    }];

    let mut sigma = 0.0f64;
    let mut step = cfg.sigma_step;
    while sigma < 1.0 {
        let target = (sigma + step).min(1.0);
        let mut seed = state.phi.clone();
        let dsigma = target - sigma;
        for it in 0..dom.rows() {
            for s in 0..slen {
                let v = seed.at(it, s) + dsigma * blend.at(it, s);
                seed.set(it, s, v);
            }
        }
        // Pin the Dirichlet rows exactly.
        for s in 0..slen {
            seed.set(0, s, target * phi0[s]);
            seed.set(nt + 1, s, target * phi1[s]);
        }
        match newton_solve(&seed, dom, cfg) {
            Ok(mut next) => {
                next.sigma = target;
                sigma = target;
                trace.push(ContinuityStep {
                    sigma,
                    residual_norm: next.residual_norm,
                    min_eig_a: next.min_eig_a,
                    newton_iters: next.newton_iters_used,
                    boundary_max_q4: boundary_max_q4(&next.phi, dom, section_s, sigma),
                });
                state = next;
                step = (step * 2.0).min(cfg.sigma_step);
            }
            Err(e) => {
                step *= 0.5;
                if step < cfg.sigma_min_step {
                    return Err(match e {
                        SolverError::EllipticityLost { .. }
                        | SolverError::NewtonDiverged { .. }
                        | SolverError::LinearSolveFailed { .. } => {
                            SolverError::ContinuityStalled { sigma, step }
                        }
                        other => other,
                    });
                }
            }
        }
    }
    Ok((state, trace))
}

/// Descending-ε sweep with warm starts: the first ε runs the full continuity
/// march, each later ε re-solves by Newton from the previous solution
/// (falling back to continuity if that fails). Reports pairwise sup-norm
/// distances between consecutive solutions.
pub fn epsilon_sweep(
    dom: &TorusDomain,
    phi0: &[f64],
    phi1: &[f64],
    section_s: &CMat,
    eps_list: &[f64],
    cfg: &SolverConfig,
) -> Result<SweepResult, SolverError> {
    if eps_list.is_empty() {
        return Err(SolverError::BadConfig("empty epsilon list".into()));
    }
    for w in eps_list.windows(2) {
        if w[1].is_nan() || w[1] >= w[0] {
            return Err(SolverError::BadConfig(
                "epsilon list must be strictly descending".into(),
            ));
        }
    }
    let eps_last = eps_list[eps_list.len() - 1];
    if eps_last.is_nan() || eps_last <= 0.0 {
        return Err(SolverError::BadConfig(
            "epsilon values must be positive".into(),
        ));
    }

    let mut states: Vec<SolverState> = Vec::with_capacity(eps_list.len());
    let mut distances = vec![0.0];
    for (k, &eps) in eps_list.iter().enumerate() {
        let mut cfg_k = cfg.clone();
        cfg_k.epsilon = eps;
        let state = if k == 0 {
            continuity_solve(dom, phi0, phi1, section_s, &cfg_k)?.0
        } else {
            match newton_solve(&states[k - 1].phi, dom, &cfg_k) {
                Ok(mut st) => {
                    st.sigma = 1.0;
                    st
                }
                Err(_) => continuity_solve(dom, phi0, phi1, section_s, &cfg_k)?.0,
            }
        };
        if k > 0 {
            distances.push(state.phi.sup_distance(&states[k - 1].phi));
        }
        states.push(state);
    }
    Ok(SweepResult {
        eps: eps_list.to_vec(),
        states,
        distances,
    })
}
