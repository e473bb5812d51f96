//! The (S,ω₀)-convexity calculus.
//!
//! For a pointwise pair `A = b + φ_{αβ̄}` (Hermitian) and `B = φ_{αβ}`
//! (symmetric) and a constant symmetric section `S`, the matrix
//!
//! ```text
//! K_S = (B − S) Ā⁻¹ (B̄ − S̄) A⁻¹
//! ```
//!
//! has real nonnegative spectrum, invariant under z → Pz applied
//! consistently to (A, B, S). Strict convexity of
//! `φ + b_{αβ̄}z^αz̄^β + Re(S_{αβ}z^αz^β)` is `A ≻ 0` together with
//! `max eig K_S < 1`; the modulus of convexity is the largest metric fraction
//! μ that can be subtracted from `A` while this holds. Trace powers
//! `Q^<p> = tr(K_S^p)` and their roots `Q^[p]` approximate the top eigenvalue
//! `M_S` from above and drive the maximum-principle machinery.

use num_complex::Complex64;
use rand::{Rng, RngExt};

use crate::error::MatrixError;
use crate::linalg::{
    cholesky, hermitian_defect, identity, min_eig_hermitian, real_symmetric_eigs,
    simultaneous_diagonalize, sup_norm, takagi, CMat, RMat,
};

/// Strict convexity verdict with its margins.
#[derive(Debug, Clone, Copy)]
pub struct ConvexityMargin {
    pub strictly_convex: bool,
    /// `max eig K_S`; `+∞` when `A` is not positive definite.
    pub max_eig_k: f64,
    pub min_eig_a: f64,
}

/// `K_S = (B−S) Ā⁻¹ (B̄−S̄) A⁻¹`.
pub fn k_matrix(a: &CMat, b: &CMat, s: &CMat) -> Result<CMat, MatrixError> {
    let n = a.nrows();
    let bs = b - s;
    let c = cholesky(a)?;
    let q = c
        .solve_lower_triangular(&identity(n))
        .expect("cholesky factor is invertible");
    let a_inv = q.adjoint() * &q;
    Ok(&bs * a_inv.conjugate() * bs.conjugate() * a_inv)
}

/// Descending spectrum of `K_S`, computed as `Λ²` from the simultaneous
/// diagonalization of `(A, B−S)` rather than from a non-Hermitian eigensolver.
pub fn k_spectrum(a: &CMat, b: &CMat, s: &CMat) -> Result<Vec<f64>, MatrixError> {
    let d = simultaneous_diagonalize(a, &(b - s))?;
    Ok(d.lambda.iter().map(|l| l * l).collect())
}

/// `M_S`: the maximum eigenvalue of `K_S`. Equals `lim_{p→∞} Q^[p]`.
pub fn m_s(a: &CMat, b: &CMat, s: &CMat) -> Result<f64, MatrixError> {
    Ok(k_spectrum(a, b, s)?.first().copied().unwrap_or(0.0))
}

/// `Q^<p> = tr(K^p)` by direct matrix powers (no spectral route).
pub fn q_trace(k: &CMat, p: u32) -> f64 {
    assert!(p >= 1, "trace power needs p >= 1");
    let mut acc = k.clone();
    for _ in 1..p {
        acc = &acc * k;
    }
    acc.trace().re
}

/// `Q^[p] = (Q^<p>)^{1/p}`.
pub fn q_norm(k: &CMat, p: u32) -> f64 {
    q_trace(k, p).max(0.0).powf(1.0 / p as f64)
}

/// Strict (S,ω₀)-convexity test on C² data: `A ≻ 0` and `max eig K_S < 1`.
pub fn strict_convexity(a: &CMat, b: &CMat, s: &CMat) -> ConvexityMargin {
    let min_eig_a = min_eig_hermitian(a);
    match k_spectrum(a, b, s) {
        Ok(spectrum) => {
            let max_eig_k = spectrum.first().copied().unwrap_or(0.0);
            ConvexityMargin {
                strictly_convex: min_eig_a > 0.0 && max_eig_k < 1.0,
                max_eig_k,
                min_eig_a,
            }
        }
        Err(_) => ConvexityMargin {
            strictly_convex: false,
            max_eig_k: f64::INFINITY,
            min_eig_a,
        },
    }
}

// ---------------------------------------------------------------------------
// Real block form ↔ complex pair
// ---------------------------------------------------------------------------

/// Real quadratic-form blocks `(U, V, W)` mapped to the complex pair:
/// `A = ¼(U+W) + (i/4)(V−Vᵀ)`, `B = ¼(U−W) − (i/4)(V+Vᵀ)`.
pub fn block_to_complex(u: &RMat, v: &RMat, w: &RMat) -> (CMat, CMat) {
    let n = u.nrows();
    let vt = v.transpose();
    let a = CMat::from_fn(n, n, |i, j| {
        Complex64::new(0.25 * (u[(i, j)] + w[(i, j)]), 0.25 * (v[(i, j)] - vt[(i, j)]))
    });
    let b = CMat::from_fn(n, n, |i, j| {
        Complex64::new(0.25 * (u[(i, j)] - w[(i, j)]), -0.25 * (v[(i, j)] + vt[(i, j)]))
    });
    (a, b)
}

/// Inverse map: `U = 2Re(A+B)`, `W = 2Re(A−B)`, `V = 2Im(A−B)`.
pub fn complex_to_block(a: &CMat, b: &CMat) -> (RMat, RMat, RMat) {
    let n = a.nrows();
    let sum = a + b;
    let diff = a - b;
    let u = RMat::from_fn(n, n, |i, j| 2.0 * sum[(i, j)].re);
    let w = RMat::from_fn(n, n, |i, j| 2.0 * diff[(i, j)].re);
    let v = RMat::from_fn(n, n, |i, j| 2.0 * diff[(i, j)].im);
    (u, w, v)
}

/// Both sides of the block-positivity equivalence.
#[derive(Debug, Clone)]
pub struct BlockEquivalence {
    pub a: CMat,
    pub b: CMat,
    /// `[[U, V], [Vᵀ, W]] ≻ 0` by a real 2n×2n eigenvalue check.
    pub block_positive: bool,
    /// `A ≻ 0` and `max eig B Ā⁻¹ B̄ A⁻¹ < 1`.
    pub complex_positive: bool,
    pub block_min_eig: f64,
}

/// Tests the equivalence `[[U,V],[Vᵀ,W]] ≻ 0 ⇔ (A ≻ 0 ∧ max eig K < 1)` on
/// one instance. Both verdicts are computed independently; agreement is the
/// caller's assertion.
pub fn block_equivalence(u: &RMat, v: &RMat, w: &RMat) -> Result<BlockEquivalence, MatrixError> {
    let n = u.nrows();
    for (name, m) in [("U", u), ("W", w)] {
        let defect = (m - m.transpose()).iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let scale = m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if defect > 1e-10 * (1.0 + scale) {
            let _ = name;
            return Err(MatrixError::NotSymmetric {
                defect,
                tol: 1e-10 * (1.0 + scale),
            });
        }
    }
    let mut big = RMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = u[(i, j)];
            big[(i, j + n)] = v[(i, j)];
            big[(i + n, j)] = v[(j, i)];
            big[(i + n, j + n)] = w[(i, j)];
        }
    }
    let block_min_eig = real_symmetric_eigs(&big)[0];
    let (a, b) = block_to_complex(u, v, w);
    let margin = strict_convexity(&a, &b, &CMat::zeros(n, n));
    Ok(BlockEquivalence {
        a,
        b,
        block_positive: block_min_eig > 0.0,
        complex_positive: margin.strictly_convex,
        block_min_eig,
    })
}

// ---------------------------------------------------------------------------
// Modulus and degree of convexity
// ---------------------------------------------------------------------------

/// Convexity predicate with the metric fraction μ subtracted:
/// `A − μ·metric ≻ 0` and `max eig K(A − μ·metric, B − S) < 1`.
pub fn convex_at_modulus(a: &CMat, b: &CMat, s: &CMat, metric: &CMat, mu: f64) -> bool {
    let shifted = a - metric.scale(mu);
    if min_eig_hermitian(&shifted) <= 0.0 {
        return false;
    }
    match k_spectrum(&shifted, b, s) {
        Ok(spectrum) => spectrum.first().copied().unwrap_or(0.0) < 1.0,
        Err(_) => false,
    }
}

/// Modulus of convexity `μ* = sup{μ : convex_at_modulus(μ)}` by bisection to
/// absolute tolerance 1e-10. The predicate is monotone in μ (the cone shrinks
/// as μ grows), so bisection is valid. Instances that are not strictly convex
/// at μ = 0 get the signed extension: the bracket is grown to negative μ and
/// the returned value is ≤ 0.
pub fn modulus_of_convexity(a: &CMat, b: &CMat, s: &CMat, metric: &CMat) -> f64 {
    const TOL: f64 = 1e-10;
    let scale = 1.0 + sup_norm(a) / min_eig_hermitian(metric).max(1e-300);
    let (mut lo, mut hi);
    if convex_at_modulus(a, b, s, metric, 0.0) {
        lo = 0.0;
        hi = (min_eig_hermitian(a) / min_eig_hermitian(metric)).max(TOL);
        let mut grow = 0;
        while convex_at_modulus(a, b, s, metric, hi) && grow < 80 {
            hi *= 2.0;
            grow += 1;
        }
        if grow == 80 {
            return hi; // unreachable for positive definite metrics
        }
    } else {
        hi = 0.0;
        lo = -scale.max(1.0);
        let mut grow = 0;
        while !convex_at_modulus(a, b, s, metric, lo) && grow < 80 {
            lo *= 2.0;
            grow += 1;
        }
        if grow == 80 {
            return f64::NEG_INFINITY;
        }
    }
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        if convex_at_modulus(a, b, s, metric, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Draws a constant symmetric section Θ admissible for degree δ: the
/// Takagi values of `PΘPᵀ` (with `P·metric·P* = I`) are at most δ. With
/// `extreme` the largest value is exactly δ.
pub fn sample_admissible_theta<R: Rng>(
    metric: &CMat,
    delta: f64,
    extreme: bool,
    rng: &mut R,
) -> CMat {
    let n = metric.nrows();
    let raw = CMat::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let sym = (&raw + raw.transpose()).scale(0.5);
    let tak = takagi(&sym).expect("symmetrized draw");
    let top = tak.sigma.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return CMat::zeros(n, n);
    }
    let factor = if extreme {
        delta / top
    } else {
        delta * rng.random_range(0.0..1.0) / top
    };
    let scaled = sym.scale(factor);
    // Undo the metric normalization: Θ = C S̃ Cᵀ for metric = CC*, P = C⁻¹.
    let c = cholesky(metric).expect("metric is positive definite");
    &c * scaled * c.transpose()
}

/// Degree-of-convexity check: strict (S+Θ,ω₀)-convexity over `samples` random
/// admissible sections Θ (half of them extreme), combined with the
/// deterministic worst-case route `modulus_of_convexity > δ`. The two routes
/// agree on margin-safe data; the conjunction is returned so a disagreement
/// surfaces as a failure.
pub fn degree_check<R: Rng>(
    a: &CMat,
    b: &CMat,
    s: &CMat,
    metric: &CMat,
    delta: f64,
    samples: usize,
    rng: &mut R,
) -> bool {
    assert!(delta >= 0.0, "degree must be nonnegative");
    if delta == 0.0 {
        // Degenerate case: reduces to the strict convexity verdict.
        return strict_convexity(a, b, s).strictly_convex;
    }
    let deterministic = modulus_of_convexity(a, b, s, metric) > delta;
    let mut randomized = true;
    for k in 0..samples {
        let theta = sample_admissible_theta(metric, delta, k % 2 == 0, rng);
        let shifted_s = s + theta;
        if !strict_convexity(a, b, &shifted_s).strictly_convex {
            randomized = false;
            break;
        }
    }
    deterministic && randomized
}

// ---------------------------------------------------------------------------
// The 2×2 weight matrix of the trace-power identity
// ---------------------------------------------------------------------------

/// The 2×2 weight matrix `W_{αβ}` of the `L Q^<p>` expansion, assembled by
/// direct geometric summation:
///
/// ```text
/// W₁₁ = Σ_{k=0}^{p−1} Λa^{2k} Λb^{2p−2−2k}           W₁₂ = Σ_{k=0}^{p−2} Λa^{2k+1} Λb^{2p−3−2k}
/// W₂₂ = W₁₁ − Λa^{2p} − Λb^{2p}                      W₂₁ = W₁₂
/// ```
#[derive(Debug, Clone)]
pub struct WMatrix {
    pub entries: RMat,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub p: u32,
}

pub fn w_matrix(lambda_a: f64, lambda_b: f64, p: u32) -> WMatrix {
    assert!(p >= 1, "w_matrix needs p >= 1");
    let p = p as i32;
    let diag: f64 = (0..p)
        .map(|k| lambda_a.powi(2 * k) * lambda_b.powi(2 * p - 2 - 2 * k))
        .sum();
    let off: f64 = (0..p - 1)
        .map(|k| lambda_a.powi(2 * k + 1) * lambda_b.powi(2 * p - 3 - 2 * k))
        .sum();
    let w22 = diag - lambda_a.powi(2 * p) - lambda_b.powi(2 * p);
    WMatrix {
        entries: RMat::from_row_slice(2, 2, &[diag, off, off, w22]),
        lambda_a,
        lambda_b,
        p: p as u32,
    }
}

impl WMatrix {
    pub fn det(&self) -> f64 {
        self.entries[(0, 0)] * self.entries[(1, 1)] - self.entries[(0, 1)] * self.entries[(1, 0)]
    }

    pub fn trace(&self) -> f64 {
        self.entries[(0, 0)] + self.entries[(1, 1)]
    }

    /// Positive semidefiniteness of the 2×2 symmetric matrix.
    pub fn is_psd(&self) -> bool {
        self.trace() >= -1e-14 && self.det() >= -1e-14
    }
}

/// Closed-form determinant via `f(x) = −x^{2p} + x^{2p−1}`:
/// `(f(Λb²) − f(Λa²)) / (Λb² − Λa²)`, with the equal-value limit
/// `(2p−1)λ^{4p−4}[1 − 2p/(2p−1)·λ²]`.
pub fn w_det_closed_form(lambda_a: f64, lambda_b: f64, p: u32) -> f64 {
    assert!(p >= 1);
    let p = p as i32;
    let xa = lambda_a * lambda_a;
    let xb = lambda_b * lambda_b;
    let f = |x: f64| -x.powi(2 * p) + x.powi(2 * p - 1);
    if (xa - xb).abs() > 1e-9 * (1.0 + xa.max(xb)) {
        (f(xb) - f(xa)) / (xb - xa)
    } else {
        let lam2 = 0.5 * (xa + xb);
        let pf = p as f64;
        (2.0 * pf - 1.0) * lam2.powi(2 * p - 2) * (1.0 - 2.0 * pf / (2.0 * pf - 1.0) * lam2)
    }
}

// ---------------------------------------------------------------------------
// Monotonicity probe
// ---------------------------------------------------------------------------

/// Curves `t^{2p}·tr(K_t^p)` and `t²·max eig(K_t)` for
/// `K_t = B (Ā₀+tĀ)⁻¹ B̄ (A₀+tA)⁻¹`; both are non-decreasing in t when
/// `A₀ ≻ 0` and `A₀ + A ≻ 0`.
#[derive(Debug, Clone)]
pub struct MonotonicityCurve {
    pub t_grid: Vec<f64>,
    pub trace_curve: Vec<f64>,
    pub max_eig_curve: Vec<f64>,
}

pub fn monotonicity_curve(
    a0: &CMat,
    a: &CMat,
    b: &CMat,
    p: u32,
    t_grid: &[f64],
) -> Result<MonotonicityCurve, MatrixError> {
    let mut trace_curve = Vec::with_capacity(t_grid.len());
    let mut max_eig_curve = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let at = a0 + a.scale(t);
        // Cholesky doubles as the positive definiteness gate.
        let _ = cholesky(&at)?;
        let k = k_matrix(&at, b, &CMat::zeros(b.nrows(), b.ncols()))?;
        trace_curve.push(t.powi(2 * p as i32) * q_trace(&k, p));
        let spectrum = k_spectrum(&at, b, &CMat::zeros(b.nrows(), b.ncols()))?;
        max_eig_curve.push(t * t * spectrum.first().copied().unwrap_or(0.0));
    }
    Ok(MonotonicityCurve {
        t_grid: t_grid.to_vec(),
        trace_curve,
        max_eig_curve,
    })
}

// ---------------------------------------------------------------------------
// Concavity probes
// ---------------------------------------------------------------------------

/// `F₁(A+tH) = log(A₀₀̄ − A₀β̄ 𝒜^{αβ̄} A_{α0̄})` for an (n+1)×(n+1) Hermitian
/// positive definite argument; 𝒜 is the lower-right n×n block. Concave in
/// the full Hermitian argument.
pub fn concavity_probe_f1(a: &CMat, h: &CMat, t: f64) -> Result<f64, MatrixError> {
    let m = a + h.scale(t);
    let defect = hermitian_defect(&m);
    if defect > 1e-10 * (1.0 + sup_norm(&m)) {
        return Err(MatrixError::NotHermitian {
            defect,
            tol: 1e-10 * (1.0 + sup_norm(&m)),
        });
    }
    // Cholesky gates A + tH ≻ 0 (which also makes the Schur complement
    // positive and the block inverse well-defined).
    let _ = cholesky(&m)?;
    let n = m.nrows() - 1;
    let block = m.view((1, 1), (n, n)).clone_owned();
    let c = cholesky(&block)?;
    let q = c
        .solve_lower_triangular(&identity(n))
        .expect("cholesky factor is invertible");
    let block_inv = q.adjoint() * &q;
    let mut quad = Complex64::new(0.0, 0.0);
    for al in 0..n {
        for be in 0..n {
            // A_{0β̄} 𝒜^{αβ̄} A_{α0̄}: the (β,α) entry of the inverse pairs the
            // first row with the first column.
            quad += m[(0, be + 1)] * block_inv[(be, al)] * m[(al + 1, 0)];
        }
    }
    let f1 = m[(0, 0)].re - quad.re;
    Ok(f1.ln())
}

/// `F₂(𝒜+t𝓗) = −log(𝒢_{αβ̄} 𝒜^{αβ̄}) = −log tr(𝒢 𝒜⁻¹)`; concave in the
/// Hermitian positive definite block 𝒜 for a fixed positive definite 𝒢.
pub fn concavity_probe_f2(g: &CMat, a: &CMat, h: &CMat, t: f64) -> Result<f64, MatrixError> {
    let m = a + h.scale(t);
    let c = cholesky(&m)?;
    let q = c
        .solve_lower_triangular(&identity(m.nrows()))
        .expect("cholesky factor is invertible");
    let m_inv = q.adjoint() * &q;
    let val = (g * m_inv).trace().re;
    Ok(-val.ln())
}
