//! The strip × torus grid and its finite-difference calculus.
//!
//! The spatial manifold is the flat torus `ℂⁿ/ℤ²ⁿ` in a single global chart
//! with unit periods, coordinates `z^α = x^α + i y^α`, and a constant
//! Hermitian metric `b`. Potentials live on the strip `[0,1] × torus` with a
//! real time coordinate `t`, Dirichlet rows at `t = 0, 1`, and periodic wrap
//! in every spatial direction. All derivatives are second-order central
//! differences; mixed terms use the 4-point cross stencil.
//!
//! # Complex derivative matrices
//!
//! With `∂_{z^α} = (∂_{x^α} − i ∂_{y^α})/2`, the complex Hessian blocks of a
//! real potential φ are
//!
//! ```text
//! A_{αβ̄} = b_{αβ̄} + ¼[φ_{xαxβ} + φ_{yαyβ} + i(φ_{xαyβ} − φ_{yαxβ})]   (Hermitian)
//! B_{αβ} =          ¼[φ_{xαxβ} − φ_{yαyβ} − i(φ_{xαyβ} + φ_{yαxβ})]   (symmetric)
//! ```
//!
//! # The factor-4 strip reduction
//!
//! Potentials on the strip extend to the complex strip `{τ = t + iθ}` by
//! θ-invariance. Writing `∂_τ = (∂_t − i∂_θ)/2` and using `φ_θ = 0`:
//!
//! ```text
//! Φ_ττ̄ = ¼ φ_tt,        Φ_τᾱ = ¼ (φ_{t xα} + i φ_{t yα}).
//! ```
//!
//! The pair stores the *unscaled* `t_block = φ_tt` together with the reduced
//! cross terms `cross_α = Φ_τᾱ`; the quarter factors above are the single
//! normalization used everywhere downstream (residual, linearization,
//! maximum-principle stencil).

use num_complex::Complex64;

use crate::error::DomainError;
use crate::linalg::{min_eig_hermitian, sup_norm, CMat, CVec, RMat};

/// Which real coordinate a spatial grid axis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisCoord {
    /// `x^α`, α zero-based.
    X(usize),
    /// `y^α`, α zero-based.
    Y(usize),
}

/// One periodic spatial axis of the grid.
#[derive(Debug, Clone, Copy)]
pub struct SpatialAxis {
    pub coord: AxisCoord,
    pub len: usize,
    pub h: f64,
}

/// Flat complex torus `ℂⁿ/ℤ²ⁿ` with a constant Hermitian metric and the
/// strip grid resolution.
#[derive(Debug, Clone)]
pub struct TorusDomain {
    n: usize,
    metric_b: CMat,
    nx: usize,
    ny: usize,
    nt: usize,
    y_invariant: bool,
    axes: Vec<SpatialAxis>,
    strides: Vec<usize>,
    spatial_len: usize,
}

impl TorusDomain {
    /// Validates and builds a domain. `nt` counts interior time levels, so the
    /// grid has `nt + 2` rows and `h_t = 1/(nt+1)`. With `y_invariant` the
    /// `y^α` axes are dropped and every y-derivative is identically zero.
    pub fn new(
        n: usize,
        metric_b: CMat,
        nx: usize,
        ny: usize,
        nt: usize,
        y_invariant: bool,
    ) -> Result<Self, DomainError> {
        if n == 0 || n > 2 {
            return Err(DomainError::BadDimension(n));
        }
        if metric_b.nrows() != n || metric_b.ncols() != n {
            return Err(DomainError::BadMetric {
                n,
                reason: format!("got {}x{}", metric_b.nrows(), metric_b.ncols()),
            });
        }
        let defect = crate::linalg::hermitian_defect(&metric_b);
        if defect > 1e-12 * (1.0 + sup_norm(&metric_b)) {
            return Err(DomainError::BadMetric {
                n,
                reason: format!("Hermitian defect {defect:.3e}"),
            });
        }
        let min_eig = min_eig_hermitian(&metric_b);
        if min_eig.is_nan() || min_eig <= 0.0 {
            return Err(DomainError::BadMetric {
                n,
                reason: format!("min eigenvalue {min_eig:.3e}"),
            });
        }
        if nx < 8 || !nx.is_multiple_of(2) || ny < 8 || !ny.is_multiple_of(2) || nt < 2 {
            return Err(DomainError::BadGrid { nx, ny, nt });
        }
        let mut axes = Vec::new();
        for alpha in 0..n {
            axes.push(SpatialAxis {
                coord: AxisCoord::X(alpha),
                len: nx,
                h: 1.0 / nx as f64,
            });
            if !y_invariant {
                axes.push(SpatialAxis {
                    coord: AxisCoord::Y(alpha),
                    len: ny,
                    h: 1.0 / ny as f64,
                });
            }
        }
        // Row-major strides over the spatial axes.
        let mut strides = vec![0usize; axes.len()];
        let mut acc = 1usize;
        for (k, axis) in axes.iter().enumerate().rev() {
            strides[k] = acc;
            acc *= axis.len;
        }
        Ok(Self {
            n,
            metric_b,
            nx,
            ny,
            nt,
            y_invariant,
            axes,
            strides,
            spatial_len: acc,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn metric_b(&self) -> &CMat {
        &self.metric_b
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    /// Interior time levels.
    pub fn nt(&self) -> usize {
        self.nt
    }
    pub fn y_invariant(&self) -> bool {
        self.y_invariant
    }
    /// Total rows including the two Dirichlet rows.
    pub fn rows(&self) -> usize {
        self.nt + 2
    }
    pub fn h_t(&self) -> f64 {
        1.0 / (self.nt + 1) as f64
    }
    pub fn t_of_row(&self, it: usize) -> f64 {
        it as f64 * self.h_t()
    }
    pub fn axes(&self) -> &[SpatialAxis] {
        &self.axes
    }
    pub fn spatial_len(&self) -> usize {
        self.spatial_len
    }

    /// Axis index carrying `x^α`.
    pub fn x_axis(&self, alpha: usize) -> usize {
        if self.y_invariant {
            alpha
        } else {
            2 * alpha
        }
    }

    /// Axis index carrying `y^α`, absent under y-invariance.
    pub fn y_axis(&self, alpha: usize) -> Option<usize> {
        if self.y_invariant {
            None
        } else {
            Some(2 * alpha + 1)
        }
    }

    /// Periodic shift of a flat spatial index along one axis.
    #[inline]
    pub fn shift(&self, s: usize, axis: usize, off: isize) -> usize {
        let len = self.axes[axis].len;
        let stride = self.strides[axis];
        let coord = (s / stride) % len;
        let new = (coord as isize + off).rem_euclid(len as isize) as usize;
        (s as isize + (new as isize - coord as isize) * stride as isize) as usize
    }

    /// Coordinate value of a flat spatial index along one axis, in `[0,1)`.
    pub fn coord_value(&self, s: usize, axis: usize) -> f64 {
        let len = self.axes[axis].len;
        let stride = self.strides[axis];
        ((s / stride) % len) as f64 * self.axes[axis].h
    }
}

/// Real scalar function sampled on the `(t, spatial)` grid.
#[derive(Debug, Clone)]
pub struct GridField {
    rows: usize,
    spatial_len: usize,
    values: Vec<f64>,
}

impl GridField {
    pub fn zeros(dom: &TorusDomain) -> Self {
        Self {
            rows: dom.rows(),
            spatial_len: dom.spatial_len(),
            values: vec![0.0; dom.rows() * dom.spatial_len()],
        }
    }

    pub fn from_fn(dom: &TorusDomain, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut field = Self::zeros(dom);
        for it in 0..field.rows {
            for s in 0..field.spatial_len {
                field.values[it * field.spatial_len + s] = f(it, s);
            }
        }
        field
    }

    pub fn from_values(dom: &TorusDomain, values: Vec<f64>) -> Result<Self, DomainError> {
        let want = dom.rows() * dom.spatial_len();
        if values.len() != want {
            return Err(DomainError::BadFieldLength {
                got: values.len(),
                want,
            });
        }
        Ok(Self {
            rows: dom.rows(),
            spatial_len: dom.spatial_len(),
            values,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn spatial_len(&self) -> usize {
        self.spatial_len
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, it: usize, s: usize) -> f64 {
        self.values[it * self.spatial_len + s]
    }

    #[inline]
    pub fn set(&mut self, it: usize, s: usize, v: f64) {
        self.values[it * self.spatial_len + s] = v;
    }

    pub fn row(&self, it: usize) -> &[f64] {
        &self.values[it * self.spatial_len..(it + 1) * self.spatial_len]
    }

    pub fn row_mut(&mut self, it: usize) -> &mut [f64] {
        &mut self.values[it * self.spatial_len..(it + 1) * self.spatial_len]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_distance(&self, other: &GridField) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn validate_finite(&self) -> Result<(), DomainError> {
        for it in 0..self.rows {
            for s in 0..self.spatial_len {
                if !self.at(it, s).is_finite() {
                    return Err(DomainError::NonFinite { it, s });
                }
            }
        }
        Ok(())
    }

    /// Adds `scale * delta` to the interior rows; `delta` is indexed
    /// `(it-1)*spatial_len + s` over interior points only.
    pub fn add_interior(&mut self, delta: &[f64], scale: f64) {
        let nt = self.rows - 2;
        debug_assert_eq!(delta.len(), nt * self.spatial_len);
        for it in 1..=nt {
            for s in 0..self.spatial_len {
                self.values[it * self.spatial_len + s] += scale * delta[(it - 1) * self.spatial_len + s];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Finite-difference stencils
// ---------------------------------------------------------------------------

impl GridField {
    /// φ_tt by the central stencil. Panics on a Dirichlet row.
    #[inline]
    pub fn d2_tt(&self, dom: &TorusDomain, it: usize, s: usize) -> f64 {
        assert!(it >= 1 && it <= dom.nt(), "time index {it} is not interior");
        let ht = dom.h_t();
        (self.at(it + 1, s) - 2.0 * self.at(it, s) + self.at(it - 1, s)) / (ht * ht)
    }

    /// φ_t by the central stencil at interior rows.
    #[inline]
    pub fn d1_t(&self, dom: &TorusDomain, it: usize, s: usize) -> f64 {
        assert!(it >= 1 && it <= dom.nt(), "time index {it} is not interior");
        (self.at(it + 1, s) - self.at(it - 1, s)) / (2.0 * dom.h_t())
    }

    /// One-sided second-order φ_t, valid on every row.
    pub fn d1_t_onesided(&self, dom: &TorusDomain, it: usize, s: usize) -> f64 {
        let ht = dom.h_t();
        if it == 0 {
            (-3.0 * self.at(0, s) + 4.0 * self.at(1, s) - self.at(2, s)) / (2.0 * ht)
        } else if it == dom.nt() + 1 {
            (3.0 * self.at(it, s) - 4.0 * self.at(it - 1, s) + self.at(it - 2, s)) / (2.0 * ht)
        } else {
            self.d1_t(dom, it, s)
        }
    }

    /// Second derivative along a spatial axis, periodic wrap. Valid on any row.
    #[inline]
    pub fn d2_axis(&self, dom: &TorusDomain, it: usize, s: usize, axis: usize) -> f64 {
        let h = dom.axes()[axis].h;
        let sp = dom.shift(s, axis, 1);
        let sm = dom.shift(s, axis, -1);
        (self.at(it, sp) - 2.0 * self.at(it, s) + self.at(it, sm)) / (h * h)
    }

    /// Mixed spatial derivative by the 4-point cross stencil. Valid on any row.
    #[inline]
    pub fn d2_cross_axes(&self, dom: &TorusDomain, it: usize, s: usize, a: usize, b: usize) -> f64 {
        debug_assert_ne!(a, b);
        let ha = dom.axes()[a].h;
        let hb = dom.axes()[b].h;
        let spp = dom.shift(dom.shift(s, a, 1), b, 1);
        let spm = dom.shift(dom.shift(s, a, 1), b, -1);
        let smp = dom.shift(dom.shift(s, a, -1), b, 1);
        let smm = dom.shift(dom.shift(s, a, -1), b, -1);
        (self.at(it, spp) - self.at(it, spm) - self.at(it, smp) + self.at(it, smm)) / (4.0 * ha * hb)
    }

    /// Mixed t–spatial derivative. Panics on a Dirichlet row.
    #[inline]
    pub fn d2_t_axis(&self, dom: &TorusDomain, it: usize, s: usize, axis: usize) -> f64 {
        assert!(it >= 1 && it <= dom.nt(), "time index {it} is not interior");
        let ht = dom.h_t();
        let h = dom.axes()[axis].h;
        let sp = dom.shift(s, axis, 1);
        let sm = dom.shift(s, axis, -1);
        (self.at(it + 1, sp) - self.at(it + 1, sm) - self.at(it - 1, sp) + self.at(it - 1, sm))
            / (4.0 * ht * h)
    }
}

// ---------------------------------------------------------------------------
// Hessians
// ---------------------------------------------------------------------------

/// Pointwise complex second-derivative data of a potential on the strip.
///
/// `a = b + φ_{αβ̄}` (Hermitian), `b_mat = φ_{αβ}` (symmetric),
/// `t_block = φ_tt`, and `cross_α = ¼(φ_{t xα} + i φ_{t yα})` — the reduced
/// mixed derivative `Φ_τᾱ` of the θ-invariant extension.
#[derive(Debug, Clone)]
pub struct ComplexHessianPair {
    pub a: CMat,
    pub b_mat: CMat,
    pub t_block: f64,
    pub cross: CVec,
}

/// Real second-derivative matrix in coordinates `(t, x¹, y¹, …, xⁿ, yⁿ)`,
/// `(2n+1)×(2n+1)`, symmetric; y-rows are zero under y-invariance.
///
/// Panics if `it` is a Dirichlet row.
pub fn real_hessian(field: &GridField, dom: &TorusDomain, it: usize, s: usize) -> RMat {
    assert!(it >= 1 && it <= dom.nt(), "time index {it} is not interior");
    let n = dom.n();
    let dim = 2 * n + 1;
    // coordinate index -> spatial axis (None = collapsed y direction)
    let axis_of = |k: usize| -> Option<usize> {
        debug_assert!(k >= 1);
        let alpha = (k - 1) / 2;
        if k % 2 == 1 {
            Some(dom.x_axis(alpha))
        } else {
            dom.y_axis(alpha)
        }
    };
    let mut h = RMat::zeros(dim, dim);
    h[(0, 0)] = field.d2_tt(dom, it, s);
    for k in 1..dim {
        let v = match axis_of(k) {
            Some(a) => field.d2_t_axis(dom, it, s, a),
            None => 0.0,
        };
        h[(0, k)] = v;
        h[(k, 0)] = v;
    }
    for k in 1..dim {
        for l in k..dim {
            let v = match (axis_of(k), axis_of(l)) {
                (Some(a), Some(b)) => {
                    if a == b {
                        field.d2_axis(dom, it, s, a)
                    } else {
                        field.d2_cross_axes(dom, it, s, a, b)
                    }
                }
                _ => 0.0,
            };
            h[(k, l)] = v;
            h[(l, k)] = v;
        }
    }
    h
}

/// Spatial-only complex Hessian blocks `(A, B)`, valid on any row including
/// the Dirichlet rows.
pub fn spatial_hessian_pair(
    field: &GridField,
    dom: &TorusDomain,
    it: usize,
    s: usize,
) -> (CMat, CMat) {
    spatial_pair_of_slice(field.row(it), dom, s)
}

/// Same as [`spatial_hessian_pair`] on a bare spatial slice.
pub fn spatial_pair_of_slice(row: &[f64], dom: &TorusDomain, s: usize) -> (CMat, CMat) {
    let n = dom.n();
    let d2 = |a_opt: Option<usize>, b_opt: Option<usize>| -> f64 {
        match (a_opt, b_opt) {
            (Some(a), Some(b)) => {
                if a == b {
                    let h = dom.axes()[a].h;
                    let sp = dom.shift(s, a, 1);
                    let sm = dom.shift(s, a, -1);
                    (row[sp] - 2.0 * row[s] + row[sm]) / (h * h)
                } else {
                    let ha = dom.axes()[a].h;
                    let hb = dom.axes()[b].h;
                    let spp = dom.shift(dom.shift(s, a, 1), b, 1);
                    let spm = dom.shift(dom.shift(s, a, 1), b, -1);
                    let smp = dom.shift(dom.shift(s, a, -1), b, 1);
                    let smm = dom.shift(dom.shift(s, a, -1), b, -1);
                    (row[spp] - row[spm] - row[smp] + row[smm]) / (4.0 * ha * hb)
                }
            }
            _ => 0.0,
        }
    };
    let mut a = CMat::zeros(n, n);
    let mut b = CMat::zeros(n, n);
    for al in 0..n {
        for be in 0..n {
            let xa = Some(dom.x_axis(al));
            let xb = Some(dom.x_axis(be));
            let ya = dom.y_axis(al);
            let yb = dom.y_axis(be);
            let dxx = d2(xa, xb);
            let dyy = d2(ya, yb);
            let dxy = d2(xa, yb);
            let dyx = d2(ya, xb);
            a[(al, be)] = dom.metric_b()[(al, be)]
                + 0.25 * Complex64::new(dxx + dyy, dxy - dyx);
            b[(al, be)] = 0.25 * Complex64::new(dxx - dyy, -(dxy + dyx));
        }
    }
    // Symmetrize away the last bits of stencil roundoff.
    let a = (&a + a.adjoint()).scale(0.5);
    let b = (&b + b.transpose()).scale(0.5);
    (a, b)
}

/// Full complex Hessian data at an interior grid point.
///
/// Panics if `it` is a Dirichlet row.
pub fn complex_hessian(
    field: &GridField,
    dom: &TorusDomain,
    it: usize,
    s: usize,
) -> ComplexHessianPair {
    assert!(it >= 1 && it <= dom.nt(), "time index {it} is not interior");
    let n = dom.n();
    let (a, b_mat) = spatial_hessian_pair(field, dom, it, s);
    let mut cross = CVec::zeros(n);
    for alpha in 0..n {
        let dtx = field.d2_t_axis(dom, it, s, dom.x_axis(alpha));
        let dty = match dom.y_axis(alpha) {
            Some(ay) => field.d2_t_axis(dom, it, s, ay),
            None => 0.0,
        };
        cross[alpha] = 0.25 * Complex64::new(dtx, dty);
    }
    ComplexHessianPair {
        a,
        b_mat,
        t_block: field.d2_tt(dom, it, s),
        cross,
    }
}

// ---------------------------------------------------------------------------
// Test potentials
// ---------------------------------------------------------------------------

/// Built-in torus-periodic trigonometric potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    /// `c · cos(2π(x¹ + phase))`
    CosineX,
    /// `c · cos(2π(y¹ + phase))`; constant when the grid is y-invariant.
    CosineY,
    /// `c · cos(2π(Σ_α x^α + phase))` — non-diagonal `A`, `B` for n ≥ 2.
    CosineMix,
}

/// Samples a potential on the whole strip grid (constant in `t`).
pub fn sample_potential(
    kind: PotentialKind,
    amplitude: f64,
    phase: f64,
    dom: &TorusDomain,
) -> GridField {
    let tau = std::f64::consts::TAU;
    let spatial_value = |s: usize| -> f64 {
        match kind {
            PotentialKind::CosineX => {
                let x = dom.coord_value(s, dom.x_axis(0));
                amplitude * (tau * (x + phase)).cos()
            }
            PotentialKind::CosineY => match dom.y_axis(0) {
                Some(axis) => {
                    let y = dom.coord_value(s, axis);
                    amplitude * (tau * (y + phase)).cos()
                }
                None => amplitude * (tau * phase).cos(),
            },
            PotentialKind::CosineMix => {
                let sum: f64 = (0..dom.n())
                    .map(|alpha| dom.coord_value(s, dom.x_axis(alpha)))
                    .sum();
                amplitude * (tau * (sum + phase)).cos()
            }
        }
    };
    let row: Vec<f64> = (0..dom.spatial_len()).map(spatial_value).collect();
    GridField::from_fn(dom, |_, s| row[s])
}

/// Convenience: the spatial slice of a sampled potential (one Dirichlet row).
pub fn sample_boundary(
    kind: PotentialKind,
    amplitude: f64,
    phase: f64,
    dom: &TorusDomain,
) -> Vec<f64> {
    sample_potential(kind, amplitude, phase, dom).row(0).to_vec()
}
