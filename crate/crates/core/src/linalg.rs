//! Dense complex linear algebra kernels.
//!
//! Everything here operates on small (n ≤ 16) dense matrices. The two
//! nonstandard pieces are the Autonne–Takagi factorization `S = UᵀΣU` of a
//! complex symmetric matrix and the simultaneous diagonalization
//! `PAP* = I, PBPᵀ = Λ` of a Hermitian positive definite `A` with a complex
//! symmetric `B`; everything downstream (the `K` matrix spectrum, the modulus
//! of convexity, the monotonicity and concavity probes) is built on them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::MatrixError;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;

/// Relative pivot tolerance for the positive-definiteness test in [`cholesky`].
pub const PD_TOL_FACTOR: f64 = 1e-12;
/// Relative symmetry tolerance accepted by [`takagi`].
pub const SYM_TOL: f64 = 1e-10;
/// Relative Hermitian tolerance accepted by [`hermitian_eigs`].
pub const HERM_TOL: f64 = 1e-8;

/// Max modulus of the entries.
pub fn sup_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖M − M*‖∞`.
pub fn hermitian_defect(m: &CMat) -> f64 {
    sup_norm(&(m - m.adjoint()))
}

/// `‖M − Mᵀ‖∞`.
pub fn symmetric_defect(m: &CMat) -> f64 {
    sup_norm(&(m - m.transpose()))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn real_to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Autonne–Takagi factorization `S = UᵀΣU` with `U` unitary and `Σ`
/// nonnegative, sorted descending.
#[derive(Debug, Clone)]
pub struct TakagiFactorization {
    pub u: CMat,
    pub sigma: Vec<f64>,
}

impl TakagiFactorization {
    /// Rebuild `UᵀΣU`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.sigma.len();
        let sig = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(self.sigma[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        self.u.transpose() * sig * &self.u
    }
}

/// Simultaneous diagonalization `PAP* = I`, `PBPᵀ = Λ = diag(lambda)` with
/// `Λ` nonnegative, sorted descending.
#[derive(Debug, Clone)]
pub struct SimDiag {
    pub p: CMat,
    pub lambda: Vec<f64>,
}

/// Lower-triangular Cholesky factor `C` with `A = CC*`, using the default
/// pivot tolerance `1e-12·‖A‖∞`.
pub fn cholesky(a: &CMat) -> Result<CMat, MatrixError> {
    cholesky_with(a, PD_TOL_FACTOR * sup_norm(a))
}

/// Cholesky with an explicit absolute pivot tolerance; a pivot `≤ pd_tol`
/// reports loss of positive definiteness.
pub fn cholesky_with(a: &CMat, pd_tol: f64) -> Result<CMat, MatrixError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "cholesky requires a square matrix");
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= pd_tol {
            return Err(MatrixError::NotPositiveDefinite {
                index: j,
                pivot: d,
                tol: pd_tol,
            });
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Determinant of a Hermitian matrix (real); closed forms for n ≤ 2.
pub fn det_hermitian(h: &CMat) -> f64 {
    match h.nrows() {
        0 => 1.0,
        1 => h[(0, 0)].re,
        2 => h[(0, 0)].re * h[(1, 1)].re - h[(0, 1)].norm_sqr(),
        _ => h.clone().lu().determinant().re,
    }
}

/// Smallest eigenvalue of a Hermitian matrix; closed forms for n ≤ 2.
pub fn min_eig_hermitian(h: &CMat) -> f64 {
    match h.nrows() {
        0 => 0.0,
        1 => h[(0, 0)].re,
        2 => {
            let a = h[(0, 0)].re;
            let d = h[(1, 1)].re;
            let m = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + h[(0, 1)].norm_sqr()).sqrt();
            m - r
        }
        _ => hermitian_eigs(h).map(|e| e[0]).unwrap_or(f64::NEG_INFINITY),
    }
}

/// Ascending real eigenvalues of a Hermitian matrix.
///
/// The input is Hermitian-symmetrized before the decomposition; an asymmetry
/// above `1e-8·‖H‖∞` is rejected as [`MatrixError::NotHermitian`].
pub fn hermitian_eigs(h: &CMat) -> Result<Vec<f64>, MatrixError> {
    Ok(hermitian_eigen_pairs(h)?.0)
}

/// Ascending eigenvalues with a unitary eigenbasis (columns).
pub fn hermitian_eigen_pairs(h: &CMat) -> Result<(Vec<f64>, CMat), MatrixError> {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "eigendecomposition requires a square matrix");
    let scale = sup_norm(h);
    let defect = hermitian_defect(h);
    if defect > HERM_TOL * scale {
        return Err(MatrixError::NotHermitian {
            defect,
            tol: HERM_TOL * scale,
        });
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(sym, 1e-15, 0)
        .ok_or(MatrixError::EigenFailed { size: n })?;
    // Sort ascending, carrying the eigenvectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn real_symmetric_eigs(m: &RMat) -> Vec<f64> {
    let sym = (m + m.transpose()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(sym);
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Autonne–Takagi factorization of a complex symmetric matrix.
///
/// The factor comes from the unitary eigendecomposition of the Hermitian
/// matrix `SS̄`: its eigenvectors are Takagi vectors up to phase, and the
/// phases are fixed so that `S v̄ₖ = σₖ vₖ` holds column by column. Clusters
/// of equal singular values need a joint fix: on a cluster basis `W` the
/// reduced matrix `M = W*SW̄/σ` is unitary symmetric, and the corrected basis
/// solves `M z̄ = z`, i.e. the `+1` eigenvectors of the real embedding
/// `[[Re M, Im M], [Im M, −Re M]]`.
pub fn takagi(s: &CMat) -> Result<TakagiFactorization, MatrixError> {
    takagi_with(s, SYM_TOL * (1.0 + sup_norm(s)))
}

/// Takagi factorization with an explicit absolute symmetry tolerance.
pub fn takagi_with(s: &CMat, sym_tol: f64) -> Result<TakagiFactorization, MatrixError> {
    let n = s.nrows();
    assert_eq!(n, s.ncols(), "takagi requires a square matrix");
    let defect = symmetric_defect(s);
    if defect > sym_tol {
        return Err(MatrixError::NotSymmetric {
            defect,
            tol: sym_tol,
        });
    }
    let s = (s + s.transpose()).scale(0.5);
    // SS̄ = S·conj(S) equals SS* for symmetric S: Hermitian PSD.
    let h = &s * s.conjugate();
    let (vals, vecs) = hermitian_eigen_pairs(&h)?;

    // Descending singular values. Near zero, sqrt amplifies eigenvalue
    // roundoff to √ε·‖S‖; these values only steer the clustering and are
    // re-estimated from S itself below.
    let sigma_raw: Vec<f64> = vals.iter().rev().map(|&l| l.max(0.0).sqrt()).collect();
    let mut basis = CMat::from_fn(n, n, |i, j| vecs[(i, n - 1 - j)]);

    let scale = sigma_raw.first().copied().unwrap_or(0.0);
    let cluster_tol = 1e-7 * (1.0 + scale);
    let zero_tol = 1e-13 * (1.0 + scale);

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && sigma_raw[start] - sigma_raw[end] <= cluster_tol {
            end += 1;
        }
        let m = end - start;
        let w = basis.columns(start, m).clone_owned();
        // On the cluster, C = W*SW̄ ≈ σ·(unitary symmetric); its entries carry
        // the phases at full precision even when σ is tiny.
        let c = w.adjoint() * &s * w.conjugate();
        let c_scale = sup_norm(&c);
        if c_scale > zero_tol {
            let mm = c.scale(1.0 / c_scale);
            let fixed = unitary_symmetric_fixed_basis(&mm);
            let corrected = &w * fixed;
            for (jj, col) in corrected.column_iter().enumerate() {
                basis.set_column(start + jj, &col);
            }
            orthonormalize_columns(&mut basis, start, m);
        }
        // Exactly-null clusters need no phase: SS̄w = 0 already forces Sw̄ = 0.
        start = end;
    }

    // Re-estimate σₖ = vₖ*·S·v̄ₖ: real and nonnegative after the phase fix,
    // accurate to ε·‖S‖ even for (near-)singular input.
    let mut pairs: Vec<(f64, usize)> = (0..n)
        .map(|k| {
            let v = basis.column(k);
            let sv = &s * v.conjugate();
            let val: Complex64 = v.iter().zip(sv.iter()).map(|(a, b)| a.conj() * b).sum();
            (val.re.max(0.0), k)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let sigma: Vec<f64> = pairs.iter().map(|&(v, _)| v).collect();
    let basis = CMat::from_fn(n, n, |i, j| basis[(i, pairs[j].1)]);

    Ok(TakagiFactorization {
        u: basis.transpose(),
        sigma,
    })
}

/// For a unitary symmetric `M`, returns a unitary `N` whose columns satisfy
/// `M z̄ = z`: the `+1`-eigenvectors of the real embedding of `z ↦ M z̄`.
fn unitary_symmetric_fixed_basis(m: &CMat) -> CMat {
    let k = m.nrows();
    let mut t = RMat::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            t[(i, j)] = m[(i, j)].re;
            t[(i, j + k)] = m[(i, j)].im;
            t[(i + k, j)] = m[(i, j)].im;
            t[(i + k, j + k)] = -m[(i, j)].re;
        }
    }
    let eig = nalgebra::linalg::SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..2 * k).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    // Eigenvalues pair up as ±1; take the k largest.
    CMat::from_fn(k, k, |i, j| {
        let col = order[j];
        Complex64::new(eig.eigenvectors[(i, col)], eig.eigenvectors[(i + k, col)])
    })
}

/// Modified Gram–Schmidt on columns `[start, start+m)`.
fn orthonormalize_columns(basis: &mut CMat, start: usize, m: usize) {
    for j in start..start + m {
        for i in start..j {
            let proj: Complex64 = basis
                .column(i)
                .iter()
                .zip(basis.column(j).iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            let col_i = basis.column(i).clone_owned();
            let mut col_j = basis.column(j).clone_owned();
            col_j -= col_i * proj;
            basis.set_column(j, &col_j);
        }
        let norm = basis.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            let col = basis.column(j).clone_owned() / Complex64::new(norm, 0.0);
            basis.set_column(j, &col);
        }
    }
}

/// Simultaneous diagonalization of a Hermitian positive definite `A` and a
/// complex symmetric `B`: finds invertible `P` with `PAP* = I` and
/// `PBPᵀ = Λ ≥ 0` diagonal. The `Λᵢ` are exactly the nonnegative square roots
/// of the eigenvalues of `K = B Ā⁻¹ B̄ A⁻¹`.
pub fn simultaneous_diagonalize(a: &CMat, b: &CMat) -> Result<SimDiag, MatrixError> {
    let n = a.nrows();
    let c = cholesky(a)?;
    // Q = C⁻¹ gives QAQ* = I.
    let q = c
        .solve_lower_triangular(&identity(n))
        .expect("cholesky factor has positive diagonal");
    let s0 = &q * b * q.transpose();
    let tak = takagi(&s0)?;
    // With S₀ = UᵀΛU, the unitary R = Ū satisfies R S₀ Rᵀ = Λ.
    let p = tak.u.conjugate() * q;
    Ok(SimDiag {
        p,
        lambda: tak.sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cholesky_identity() {
        let a = identity(3);
        let l = cholesky(&a).unwrap();
        assert!(sup_norm(&(l.clone() * l.adjoint() - a)) < 1e-14);
    }

    #[test]
    fn cholesky_diagonal() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(4.0, 0.0), c(9.0, 0.0)]));
        let l = cholesky(&a).unwrap();
        assert!((l[(0, 0)].re - 2.0).abs() < 1e-15);
        assert!((l[(1, 1)].re - 3.0).abs() < 1e-15);
    }

    #[test]
    fn cholesky_reconstructs_complex() {
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let l = cholesky(&a).unwrap();
        assert!(sup_norm(&(l.clone() * l.adjoint() - &a)) < 1e-14);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(
            cholesky(&a),
            Err(MatrixError::NotPositiveDefinite { index: 1, .. })
        ));
    }

    #[test]
    fn hermitian_eigs_sorted() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c(3.0, 0.0), c(1.0, 0.0)]));
        assert_eq!(hermitian_eigs(&a).unwrap(), vec![1.0, 3.0]);
        let b = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let e = hermitian_eigs(&b).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eigs_rejects_asymmetric() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            hermitian_eigs(&a),
            Err(MatrixError::NotHermitian { .. })
        ));
    }

    /// Independent oracle: roots of the characteristic polynomial, located by
    /// sign changes and bisection. Coefficients via Faddeev–LeVerrier.
    fn char_poly_roots(h: &CMat) -> Vec<f64> {
        let n = h.nrows();
        // p(λ) = λ^n + c[1] λ^{n-1} + ... + c[n]
        let mut coeffs = vec![1.0f64];
        let mut m = CMat::zeros(n, n);
        for k in 1..=n {
            m = h * &m;
            for i in 0..n {
                m[(i, i)] += Complex64::new(coeffs[k - 1], 0.0);
            }
            let trace = (h * &m).trace();
            coeffs.push(-trace.re / k as f64);
        }
        let eval = |x: f64| -> f64 {
            let mut acc = 0.0;
            for c_k in &coeffs {
                acc = acc * x + c_k;
            }
            acc
        };
        // All roots are real and inside the Gershgorin bound.
        let bound: f64 = (0..n)
            .map(|i| (0..n).map(|j| h[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
            + 1.0;
        let samples = 20_000;
        let mut roots = Vec::new();
        let mut prev_x = -bound;
        let mut prev_f = eval(prev_x);
        for k in 1..=samples {
            let x = -bound + 2.0 * bound * k as f64 / samples as f64;
            let f = eval(x);
            if prev_f == 0.0 {
                roots.push(prev_x);
            } else if prev_f * f < 0.0 {
                let (mut lo, mut hi) = (prev_x, x);
                let (mut flo, _) = (prev_f, f);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = eval(mid);
                    if flo * fm <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev_f = f;
        }
        roots
    }

    #[test]
    fn hermitian_eigs_match_char_poly_oracle() {
        // Fixed 6x6 Hermitian instance with well-separated spectrum.
        let mut g = CMat::from_fn(6, 6, |i, j| {
            c(
                ((i * 7 + j * 3) % 11) as f64 - 5.0,
                ((i * 5 + j) % 7) as f64 - 3.0,
            )
        });
        g = (&g + g.adjoint()).scale(0.5);
        let eigs = hermitian_eigs(&g).unwrap();
        let roots = char_poly_roots(&g);
        assert_eq!(roots.len(), 6, "oracle must isolate all six roots");
        for (e, r) in eigs.iter().zip(roots.iter()) {
            assert!(
                (e - r).abs() <= 1e-9 * (1.0 + sup_norm(&g)),
                "eig {e} vs oracle root {r}"
            );
        }
    }

    #[test]
    fn takagi_real_diagonal() {
        let s = CMat::from_diagonal(&CVec::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        let t = takagi(&s).unwrap();
        assert!((t.sigma[0] - 2.0).abs() < 1e-12);
        assert!((t.sigma[1] - 1.0).abs() < 1e-12);
        assert!(sup_norm(&(t.reconstruct() - &s)) < 1e-12);
    }

    #[test]
    fn takagi_pure_phase() {
        // S = [i]: Σ = 1 and UᵀΣU must reproduce the phase e^{iπ/2}.
        let s = CMat::from_row_slice(1, 1, &[c(0.0, 1.0)]);
        let t = takagi(&s).unwrap();
        assert!((t.sigma[0] - 1.0).abs() < 1e-13);
        assert!(sup_norm(&(t.reconstruct() - &s)) < 1e-13);
        assert!(sup_norm(&(t.u.adjoint() * &t.u - identity(1))) < 1e-13);
    }

    #[test]
    fn takagi_degenerate_offdiagonal() {
        // σ = (1,1): a genuinely degenerate cluster.
        let s = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let t = takagi(&s).unwrap();
        assert!((t.sigma[0] - 1.0).abs() < 1e-12);
        assert!((t.sigma[1] - 1.0).abs() < 1e-12);
        assert!(sup_norm(&(t.reconstruct() - &s)) < 1e-11);
        assert!(sup_norm(&(t.u.adjoint() * &t.u - identity(2))) < 1e-11);
    }

    #[test]
    fn takagi_rejects_asymmetric() {
        let s = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        assert!(matches!(takagi(&s), Err(MatrixError::NotSymmetric { .. })));
    }

    #[test]
    fn takagi_squared_values_match_ssbar_spectrum() {
        let s = CMat::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.5),
                c(0.3, -0.2),
                c(0.0, 1.1),
                c(0.3, -0.2),
                c(-0.7, 0.4),
                c(0.9, 0.0),
                c(0.0, 1.1),
                c(0.9, 0.0),
                c(0.2, -1.3),
            ],
        );
        let t = takagi(&s).unwrap();
        assert!(sup_norm(&(t.reconstruct() - &s)) < 1e-10 * (1.0 + sup_norm(&s)));
        let h = &s * s.conjugate();
        let mut eigs = hermitian_eigs(&h).unwrap();
        eigs.reverse();
        for (sig, lam) in t.sigma.iter().zip(eigs.iter()) {
            assert!((sig * sig - lam).abs() < 1e-9 * (1.0 + lam.abs()));
        }
    }

    #[test]
    fn simdiag_zero_b() {
        let a = identity(2);
        let d = simultaneous_diagonalize(&a, &CMat::zeros(2, 2)).unwrap();
        assert!(d.lambda.iter().all(|&l| l.abs() < 1e-14));
        assert!(sup_norm(&(&d.p * &a * d.p.adjoint() - identity(2))) < 1e-12);

        let a4 = identity(2).scale(4.0);
        let d4 = simultaneous_diagonalize(&a4, &CMat::zeros(2, 2)).unwrap();
        assert!(sup_norm(&(&d4.p * &a4 * d4.p.adjoint() - identity(2))) < 1e-12);
        assert!(d4.lambda.iter().all(|&l| l.abs() < 1e-14));
    }

    #[test]
    fn simdiag_unit_offdiagonal() {
        let a = identity(2);
        let b = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let d = simultaneous_diagonalize(&a, &b).unwrap();
        assert!((d.lambda[0] - 1.0).abs() < 1e-11);
        assert!((d.lambda[1] - 1.0).abs() < 1e-11);
        // K-eigenvalue oracle: K is similar to DD* for D = QBQᵀ, A = CC*, Q = C⁻¹.
        let cfac = cholesky(&a).unwrap();
        let q = cfac.solve_lower_triangular(&identity(2)).unwrap();
        let dd = &q * &b * q.transpose();
        let k_herm = &dd * dd.adjoint();
        let eigs = hermitian_eigs(&k_herm).unwrap();
        for (lam, eig) in d.lambda.iter().zip(eigs.iter().rev()) {
            assert!((lam * lam - eig).abs() < 1e-10);
        }
    }

    #[test]
    fn simdiag_invariants_random_instance() {
        let m = CMat::from_fn(3, 3, |i, j| c((i + j) as f64 * 0.4 - 1.0, (i as f64 - j as f64) * 0.3));
        let a = &m * m.adjoint() + identity(3).scale(0.5);
        let raw = CMat::from_fn(3, 3, |i, j| c((2 * i + j) as f64 * 0.2 - 0.6, (i * j) as f64 * 0.5 - 0.4));
        let b = (&raw + raw.transpose()).scale(0.5);
        let d = simultaneous_diagonalize(&a, &b).unwrap();
        assert!(sup_norm(&(&d.p * &a * d.p.adjoint() - identity(3))) < 1e-10);
        let lam = CMat::from_fn(3, 3, |i, j| if i == j { c(d.lambda[i], 0.0) } else { c(0.0, 0.0) });
        assert!(sup_norm(&(&d.p * &b * d.p.transpose() - lam)) < 1e-10 * (1.0 + sup_norm(&b)));
        // Descending order.
        for w in d.lambda.windows(2) {
            assert!(w[0] >= w[1] - 1e-12);
        }
    }
}
