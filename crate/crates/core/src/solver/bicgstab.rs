//! Matrix-free preconditioned BiCGStab for the discrete linearized systems.
//!
//! The stencil operator is nonsymmetric (first-order t–x cross terms with
//! varying coefficients), so CG is out; BiCGStab with Jacobi preconditioning
//! handles the desk-scale grids well. Breakdown restarts re-seed the shadow
//! residual from the current iterate.

pub struct BiCgOutcome {
    pub iterations: usize,
    pub rel_residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = rhs` with `apply` computing `A·input` and `inv_diag` the
/// reciprocal Jacobi diagonal. `x` carries the initial guess in and the best
/// iterate out; convergence is `‖rhs − Ax‖₂ ≤ rel_tol·‖rhs‖₂`.
pub fn solve<F>(
    apply: F,
    inv_diag: &[f64],
    rhs: &[f64],
    x: &mut [f64],
    rel_tol: f64,
    max_iter: usize,
) -> BiCgOutcome
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = rhs.len();
    let b_norm = norm(rhs);
    if b_norm == 0.0 {
        x.fill(0.0);
        return BiCgOutcome {
            iterations: 0,
            rel_residual: 0.0,
            converged: true,
        };
    }
    let target = rel_tol * b_norm;

    let mut r = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    apply(x, &mut tmp);
    for i in 0..n {
        r[i] = rhs[i] - tmp[i];
    }
    let mut r_hat = r.clone();
    let mut p = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p_hat = vec![0.0; n];
    let mut s_hat = vec![0.0; n];
    let mut t = vec![0.0; n];
    let (mut rho, mut alpha, mut omega) = (1.0f64, 1.0f64, 1.0f64);
    let mut restarts = 0usize;
    let breakdown = 1e-300;

    let mut it = 0;
    while it < max_iter {
        it += 1;
        let rho1 = dot(&r_hat, &r);
        if rho1.abs() < breakdown || omega.abs() < breakdown {
            // Stagnated pairing: re-seed the shadow residual.
            restarts += 1;
            if restarts > 5 {
                break;
            }
            apply(x, &mut tmp);
            for i in 0..n {
                r[i] = rhs[i] - tmp[i];
            }
            r_hat.copy_from_slice(&r);
            p.fill(0.0);
            v.fill(0.0);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            continue;
        }
        let beta = (rho1 / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        for i in 0..n {
            p_hat[i] = p[i] * inv_diag[i];
        }
        apply(&p_hat, &mut v);
        let denom = dot(&r_hat, &v);
        if denom.abs() < breakdown {
            restarts += 1;
            if restarts > 5 {
                break;
            }
            apply(x, &mut tmp);
            for i in 0..n {
                r[i] = rhs[i] - tmp[i];
            }
            r_hat.copy_from_slice(&r);
            p.fill(0.0);
            v.fill(0.0);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            continue;
        }
        alpha = rho1 / denom;
        // s = r − α v (reuse r)
        for i in 0..n {
            r[i] -= alpha * v[i];
        }
        if norm(&r) <= target {
            for i in 0..n {
                x[i] += alpha * p_hat[i];
            }
            return BiCgOutcome {
                iterations: it,
                rel_residual: norm(&r) / b_norm,
                converged: true,
            };
        }
        for i in 0..n {
            s_hat[i] = r[i] * inv_diag[i];
        }
        apply(&s_hat, &mut t);
        let tt = dot(&t, &t);
        if tt < breakdown {
            for i in 0..n {
                x[i] += alpha * p_hat[i];
            }
            restarts += 1;
            if restarts > 5 {
                break;
            }
            apply(x, &mut tmp);
            for i in 0..n {
                r[i] = rhs[i] - tmp[i];
            }
            r_hat.copy_from_slice(&r);
            p.fill(0.0);
            v.fill(0.0);
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            continue;
        }
        omega = dot(&t, &r) / tt;
        for i in 0..n {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
        }
        for i in 0..n {
            r[i] -= omega * t[i];
        }
        let res = norm(&r);
        if res <= target {
            return BiCgOutcome {
                iterations: it,
                rel_residual: res / b_norm,
                converged: true,
            };
        }
        rho = rho1;
    }
    // Report the true residual of whatever we ended with.
    apply(x, &mut tmp);
    for i in 0..n {
        tmp[i] = rhs[i] - tmp[i];
    }
    let res = norm(&tmp);
    BiCgOutcome {
        iterations: it,
        rel_residual: res / b_norm,
        converged: res <= target,
    }
}
