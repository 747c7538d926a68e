//! Solvers for the per-pixel system `Λ a = L`, where `Λ` is the `N x 6`
//! design matrix of light monomials.
//!
//! Two routes are provided:
//!
//! * Moore-Penrose least squares through a one-sided Jacobi SVD, computed
//!   once per capture set ([`PseudoInverse`]); each pixel is then a single
//!   `6 x N` mat-vec.
//! * General {1}-inverses `X = P [[I, U], [V, W]] Q` built from a rank
//!   factorization `Q Λ P = E_ρ` ([`rank_factorize`], [`one_inverse`]).
//!   Every choice of the free blocks `U, V, W` satisfies `Λ X Λ = Λ`.
//!
//! The routines on plain matrices accept any shape; the typed wrappers
//! work on [`DesignMatrix`] and return [`CoefficientVector`]s.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::lightgeom::{LightSample, ProjectedLight};
use crate::ptm::{CoefficientVector, N_COEFFS};

/// Relative rank cutoff for singular values and Gauss-Jordan pivots.
pub const RANK_EPS: f64 = 1e-10;

/// `Λ a = L` counts as solved when the max-norm residual is below this.
pub const CONSISTENCY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("design matrix needs at least one sample")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
}

fn mismatch(expected: impl ToString, found: impl ToString) -> SolveError {
    SolveError::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// The `N x 6` matrix whose row `k` is
/// `(lu_k^2, lv_k^2, lu_k lv_k, lu_k, lv_k, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    lights: Vec<ProjectedLight>,
    matrix: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn from_lights(lights: &[ProjectedLight]) -> Result<Self, SolveError> {
        if lights.is_empty() {
            return Err(SolveError::EmptyInput);
        }
        let matrix = DMatrix::from_fn(lights.len(), N_COEFFS, |r, c| {
            CoefficientVector::monomials(lights[r].lu, lights[r].lv)[c]
        });
        Ok(Self {
            lights: lights.to_vec(),
            matrix,
        })
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn lights(&self) -> &[ProjectedLight] {
        &self.lights
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `Λ a` for one coefficient vector.
    pub fn apply(&self, a: &CoefficientVector) -> Vec<f64> {
        self.lights.iter().map(|l| a.eval(l.lu, l.lv)).collect()
    }
}

/// Builds the design matrix for a list of samples.
pub fn build_design_matrix(samples: &[LightSample]) -> Result<DesignMatrix, SolveError> {
    let lights: Vec<_> = samples.iter().map(LightSample::light).collect();
    DesignMatrix::from_lights(&lights)
}

/// A precomputed Moore-Penrose pseudoinverse, stored row-major for fast
/// repeated application.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoInverse {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    rank: usize,
    singular_values: Vec<f64>,
}

impl PseudoInverse {
    /// Pseudoinverse of an arbitrary `m x n` matrix. Singular values below
    /// `1e-10 * max(m, n) * σ_max` are treated as zero.
    pub fn new(a: &DMatrix<f64>) -> Self {
        let (m, n) = a.shape();
        // A = U Σ V^T; a wide matrix is decomposed through its transpose.
        let (u, sigma, v) = if m >= n {
            jacobi_svd(a)
        } else {
            let (v, s, u) = jacobi_svd(&a.transpose());
            (u, s, v)
        };

        let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
        let cutoff = RANK_EPS * m.max(n) as f64 * sigma_max;
        let inv: Vec<f64> = sigma
            .iter()
            .map(|&s| if sigma_max > 0.0 && s >= cutoff { 1.0 / s } else { 0.0 })
            .collect();
        let rank = inv.iter().filter(|&&s| s != 0.0).count();

        // X = V diag(1/σ) U^T, an n x m matrix.
        let mut data = vec![0.0; n * m];
        for i in 0..n {
            for j in 0..m {
                let mut acc = 0.0;
                for (k, &s) in inv.iter().enumerate() {
                    if s != 0.0 {
                        acc += v[(i, k)] * s * u[(j, k)];
                    }
                }
                data[i * m + j] = acc;
            }
        }

        let mut singular_values = sigma;
        singular_values.sort_by(|a, b| b.total_cmp(a));
        Self {
            rows: n,
            cols: m,
            data,
            rank,
            singular_values,
        }
    }

    /// Number of singular values kept.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Singular values of the original matrix, largest first.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Observation count this inverse expects.
    pub fn observations(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Writes `X b` into `out`.
    #[inline]
    pub fn apply_into(&self, b: &[f64], out: &mut [f64]) {
        debug_assert_eq!(b.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = row.iter().zip(b).map(|(x, y)| x * y).sum();
        }
    }

    /// Coefficients `Λ⁺ L` for one observation vector.
    #[inline]
    pub fn solve(&self, obs: &[f64]) -> Result<CoefficientVector, SolveError> {
        if self.rows != N_COEFFS {
            return Err(mismatch(format!("{N_COEFFS} unknowns"), format!("{} unknowns", self.rows)));
        }
        if obs.len() != self.cols {
            return Err(mismatch(format!("{} observations", self.cols), format!("{}", obs.len())));
        }
        let mut out = [0.0; N_COEFFS];
        self.apply_into(obs, &mut out);
        Ok(CoefficientVector(out))
    }
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided Jacobi SVD of a tall `m x n` matrix (`m >= n`): returns
/// `U` (`m x n`), the singular values and `V` (`n x n`) with `A = U Σ V^T`.
/// Columns of `U` belonging to zero singular values are left zero.
fn jacobi_svd(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
    for (k, &s) in sigma.iter().enumerate() {
        if s > 0.0 {
            w.column_mut(k).unscale_mut(s);
        }
    }
    (w, sigma, v)
}

fn rotate_columns(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

/// Precomputes `Λ⁺` for a design matrix.
pub fn precompute_pseudoinverse(m: &DesignMatrix) -> PseudoInverse {
    PseudoInverse::new(&m.matrix)
}

/// Minimum-norm least-squares coefficients `Λ⁺ L`.
pub fn pseudo_solve(m: &DesignMatrix, obs: &[f64]) -> Result<CoefficientVector, SolveError> {
    if obs.len() != m.rows() {
        return Err(mismatch(format!("{} observations", m.rows()), obs.len()));
    }
    precompute_pseudoinverse(m).solve(obs)
}

/// Max-norm residuals of the four Penrose conditions for a candidate `X`:
/// `AXA - A`, `XAX - X`, `(AX)^T - AX`, `(XA)^T - XA`.
pub fn penrose_residuals(a: &DMatrix<f64>, x: &DMatrix<f64>) -> [f64; 4] {
    let ax = a * x;
    let xa = x * a;
    [
        (&ax * a - a).amax(),
        (&xa * x - x).amax(),
        (ax.transpose() - &ax).amax(),
        (xa.transpose() - &xa).amax(),
    ]
}

/// Regular `P` (`n x n`) and `Q` (`m x m`) with `Q A P = E_ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankFactorization {
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub rank: usize,
}

impl RankFactorization {
    /// Rows of the factorized matrix.
    pub fn nrows(&self) -> usize {
        self.q.nrows()
    }

    /// Columns of the factorized matrix.
    pub fn ncols(&self) -> usize {
        self.p.nrows()
    }

    /// `E_ρ`: `I_ρ` in the top-left corner, zeros elsewhere.
    pub fn e_rho(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows(), self.ncols(), |i, j| {
            if i == j && i < self.rank {
                1.0
            } else {
                0.0
            }
        })
    }
}

/// Gauss-Jordan elimination with full pivoting. Row operations accumulate
/// into `Q`, column swaps and the final column clearing into `P`. A pivot
/// counts as zero once it falls below `1e-10` times the largest entry of `A`.
pub fn rank_factorize(a: &DMatrix<f64>) -> RankFactorization {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut q = DMatrix::<f64>::identity(m, m);
    let mut p = DMatrix::<f64>::identity(n, n);
    let tol = RANK_EPS * a.amax();
    let mut rank = 0;

    for k in 0..m.min(n) {
        let mut best = (0.0, k, k);
        for j in k..n {
            for i in k..m {
                let v = w[(i, j)].abs();
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (pivot_abs, pi, pj) = best;
        if pivot_abs.is_nan() || pivot_abs <= tol {
            break;
        }
        w.swap_rows(k, pi);
        q.swap_rows(k, pi);
        w.swap_columns(k, pj);
        p.swap_columns(k, pj);

        let inv = 1.0 / w[(k, k)];
        w.row_mut(k).scale_mut(inv);
        q.row_mut(k).scale_mut(inv);
        w[(k, k)] = 1.0;

        for i in (0..m).filter(|&i| i != k) {
            let f = w[(i, k)];
            if f != 0.0 {
                for j in 0..n {
                    w[(i, j)] -= f * w[(k, j)];
                }
                for j in 0..m {
                    q[(i, j)] -= f * q[(k, j)];
                }
                w[(i, k)] = 0.0;
            }
        }
        rank = k + 1;
    }

    // Clear the block right of I_ρ with column operations.
    for j in rank..n {
        for k in 0..rank {
            let f = w[(k, j)];
            if f != 0.0 {
                for i in 0..n {
                    p[(i, j)] -= f * p[(i, k)];
                }
                w[(k, j)] = 0.0;
            }
        }
    }

    RankFactorization { p, q, rank }
}

/// The free blocks of a {1}-inverse: `U` is `ρ x (m - ρ)`, `V` is
/// `(n - ρ) x ρ` and `W` is `(n - ρ) x (m - ρ)` for an `m x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OneInverseFreeParams {
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub w: DMatrix<f64>,
}

impl OneInverseFreeParams {
    /// All-zero blocks sized for a factorization.
    pub fn zeros(f: &RankFactorization) -> Self {
        Self::from_fn(f, |_, _, _| 0.0)
    }

    /// Fills the blocks entry by entry; the closure gets the block index
    /// (0 = U, 1 = V, 2 = W) and the entry position.
    pub fn from_fn(f: &RankFactorization, mut fill: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let (m, n, r) = (f.nrows(), f.ncols(), f.rank);
        Self {
            u: DMatrix::from_fn(r, m - r, |i, j| fill(0, i, j)),
            v: DMatrix::from_fn(n - r, r, |i, j| fill(1, i, j)),
            w: DMatrix::from_fn(n - r, m - r, |i, j| fill(2, i, j)),
        }
    }
}

/// `X = P [[I_ρ, U], [V, W]] Q`, an `n x m` {1}-inverse of the factorized
/// `m x n` matrix.
pub fn one_inverse(
    f: &RankFactorization,
    params: &OneInverseFreeParams,
) -> Result<DMatrix<f64>, SolveError> {
    let (m, n, r) = (f.nrows(), f.ncols(), f.rank);
    let check = |name: &str, mat: &DMatrix<f64>, rows: usize, cols: usize| {
        if mat.shape() != (rows, cols) {
            Err(mismatch(
                format!("{name} of {rows}x{cols}"),
                format!("{}x{}", mat.nrows(), mat.ncols()),
            ))
        } else {
            Ok(())
        }
    };
    check("U", &params.u, r, m - r)?;
    check("V", &params.v, n - r, r)?;
    check("W", &params.w, n - r, m - r)?;

    let mut block = DMatrix::<f64>::zeros(n, m);
    for i in 0..r {
        block[(i, i)] = 1.0;
    }
    block.view_mut((0, r), (r, m - r)).copy_from(&params.u);
    block.view_mut((r, 0), (n - r, r)).copy_from(&params.v);
    block.view_mut((r, r), (n - r, m - r)).copy_from(&params.w);

    Ok(&f.p * block * &f.q)
}

/// `x = X b` for a {1}-inverse `X` of `a`, with a flag telling whether `x`
/// solves `a x = b` exactly (max-norm residual at most `1e-8`) or is only a
/// pseudo-solution of an inconsistent system.
pub fn one_inverse_solve(
    a: &DMatrix<f64>,
    b: &[f64],
    params: &OneInverseFreeParams,
) -> Result<(DVector<f64>, bool), SolveError> {
    if b.len() != a.nrows() {
        return Err(mismatch(format!("{} observations", a.nrows()), b.len()));
    }
    let f = rank_factorize(a);
    let x = one_inverse(&f, params)?;
    let b = DVector::from_column_slice(b);
    let sol = &x * &b;
    let residual = (a * &sol - &b).amax();
    Ok((sol, residual <= CONSISTENCY_TOL))
}

/// [`one_inverse_solve`] on a design matrix.
pub fn solve_via_one_inverse(
    m: &DesignMatrix,
    obs: &[f64],
    params: &OneInverseFreeParams,
) -> Result<(CoefficientVector, bool), SolveError> {
    let (sol, consistent) = one_inverse_solve(&m.matrix, obs, params)?;
    let mut out = [0.0; N_COEFFS];
    out.copy_from_slice(sol.as_slice());
    Ok((CoefficientVector(out), consistent))
}
