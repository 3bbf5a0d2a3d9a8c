//! Small dense symmetric linear algebra.
//!
//! Everything here is sized for the memory orders the noise model uses (a few up to a
//! few dozen), so the algorithms favour accuracy over asymptotic speed: cyclic Jacobi
//! for the eigenproblem and plain Cholesky for the factors.

use std::ops::{Index, IndexMut};

use crate::error::{GsError, Result};

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(GsError::Dimension {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigen-decomposition `m = Pᵀ diag(λ) P` with eigenvalues in descending order.
///
/// Row `k` of `basis` is the unit eigenvector belonging to `eigenvalues[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub eigenvalues: Vec<f64>,
    pub basis: SquareMatrix,
}

impl SymmetricEigen {
    /// Rebuild `Pᵀ Λ P`.
    pub fn reconstruct(&self) -> SquareMatrix {
        let n = self.eigenvalues.len();
        let mut out = SquareMatrix::zeros(n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = self.basis.row(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += lambda * v[i] * v[j];
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for a symmetric matrix.
pub fn jacobi_eigen(m: &SquareMatrix) -> Result<SymmetricEigen> {
    let n = m.dim();
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(GsError::Numeric("non-finite matrix entries".into()));
    }
    let mut a = m.clone();
    // columns of v are eigenvectors
    let mut v = SquareMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(GsError::Numeric("Jacobi sweeps did not converge".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let eigenvalues = order.iter().map(|&k| a[(k, k)]).collect();
    let mut basis = SquareMatrix::zeros(n);
    for (row, &k) in order.iter().enumerate() {
        for i in 0..n {
            basis[(row, i)] = v[(i, k)];
        }
    }
    Ok(SymmetricEigen { eigenvalues, basis })
}

/// Lower Cholesky factor `L` with `L Lᵀ = m`. Fails when a pivot is not positive.
fn cholesky_lower(m: &SquareMatrix) -> Option<SquareMatrix> {
    let n = m.dim();
    let mut l = SquareMatrix::zeros(n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Inverse of a lower-triangular matrix.
fn invert_lower(l: &SquareMatrix) -> SquareMatrix {
    let n = l.dim();
    let mut inv = SquareMatrix::zeros(n);
    for j in 0..n {
        inv[(j, j)] = 1.0 / l[(j, j)];
        for i in (j + 1)..n {
            let mut s = 0.0;
            for k in j..i {
                s -= l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = s / l[(i, i)];
        }
    }
    inv
}

/// Symmetric positive-definite matrix with cached factorizations.
///
/// Construction symmetrizes the input, so `get(i, j) == get(j, i)` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    entries: SquareMatrix,
    chol: SquareMatrix,
    chol_inv: SquareMatrix,
    inverse: SquareMatrix,
    inv_upper: SquareMatrix,
    eigen: SymmetricEigen,
    ln_det: f64,
}

impl SpdMatrix {
    pub fn new(dim: usize, row_major: Vec<f64>) -> Result<Self> {
        let raw = SquareMatrix::from_row_major(dim, row_major)?;
        Self::from_matrix(raw)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(SquareMatrix::identity(dim)).expect("identity is SPD")
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut m = SquareMatrix::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        Self::from_matrix(m)
    }

    /// Symmetric Toeplitz matrix from its first row.
    pub fn toeplitz(first_row: &[f64]) -> Result<Self> {
        let n = first_row.len();
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = first_row[i.abs_diff(j)];
            }
        }
        Self::from_matrix(m)
    }

    pub fn from_matrix(raw: SquareMatrix) -> Result<Self> {
        let n = raw.dim();
        if n == 0 {
            return Err(GsError::Dimension { expected: 1, got: 0 });
        }
        if raw.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(GsError::NonFinite("matrix entries"));
        }
        let mut entries = raw;
        for i in 0..n {
            for j in (i + 1)..n {
                let s = 0.5 * (entries[(i, j)] + entries[(j, i)]);
                entries[(i, j)] = s;
                entries[(j, i)] = s;
            }
        }
        let eigen = jacobi_eigen(&entries)?;
        let min_eig = *eigen.eigenvalues.last().expect("non-empty");
        if min_eig <= 0.0 {
            return Err(GsError::NotPositiveDefinite {
                min_eigenvalue: min_eig,
            });
        }
        let chol = cholesky_lower(&entries).ok_or(GsError::NotPositiveDefinite {
            min_eigenvalue: min_eig,
        })?;
        let chol_inv = invert_lower(&chol);
        // m⁻¹ = L⁻ᵀ L⁻¹
        let mut inverse = chol_inv.transpose().matmul(&chol_inv);
        for i in 0..n {
            for j in (i + 1)..n {
                let s = 0.5 * (inverse[(i, j)] + inverse[(j, i)]);
                inverse[(i, j)] = s;
                inverse[(j, i)] = s;
            }
        }
        // m⁻¹ = Rᵀ R with R upper: R is the transpose of the lower Cholesky factor of m⁻¹.
        let inv_upper = cholesky_lower(&inverse)
            .ok_or(GsError::NotPositiveDefinite {
                min_eigenvalue: min_eig,
            })?
            .transpose();
        let ln_det = 2.0 * (0..n).map(|i| chol[(i, i)].ln()).sum::<f64>();
        Ok(Self {
            entries,
            chol,
            chol_inv,
            inverse,
            inv_upper,
            eigen,
            ln_det,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.entries
    }

    pub fn row_major(&self) -> &[f64] {
        self.entries.as_slice()
    }

    pub fn det(&self) -> f64 {
        self.ln_det.exp()
    }

    pub fn ln_det(&self) -> f64 {
        self.ln_det
    }

    /// Lower factor `L` with `L Lᵀ = m`.
    pub fn chol_lower(&self) -> &SquareMatrix {
        &self.chol
    }

    /// Upper factor `R` with `Rᵀ R = m⁻¹`; row `p` of `R` has its only nonzero on the diagonal.
    pub fn inv_upper(&self) -> &SquareMatrix {
        &self.inv_upper
    }

    pub fn inverse(&self) -> &SquareMatrix {
        &self.inverse
    }

    pub fn eigen(&self) -> &SymmetricEigen {
        &self.eigen
    }

    pub fn is_identity(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == if i == j { 1.0 } else { 0.0 }))
    }

    /// `xᵀ m⁻¹ x`, via a forward solve with the Cholesky factor.
    pub fn inv_quad_form(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            let row = self.chol_inv.row(i);
            let y: f64 = row[..=i].iter().zip(&x[..=i]).map(|(a, b)| a * b).sum();
            acc += y * y;
        }
        acc
    }

    /// `xᵀ m x`
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            acc += x[i] * dot(self.entries.row(i), x);
        }
        acc
    }

    /// `L z`, mapping a standard normal vector to covariance `m`.
    pub fn color(&self, z: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let row = self.chol.row(i);
                row[..=i].iter().zip(&z[..=i]).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let data = self.entries.as_slice().iter().map(|v| v * factor).collect();
        Self::new(self.dim(), data)
    }

    /// Leading `k × k` block.
    pub fn leading(&self, k: usize) -> Result<Self> {
        let mut m = SquareMatrix::zeros(k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = self.get(i, j);
            }
        }
        Self::from_matrix(m)
    }
}

/// Eigenvalues (descending) and the orthogonal basis `P` of `m = Pᵀ Λ P`.
pub fn eigen_sym(m: &SpdMatrix) -> (Vec<f64>, SquareMatrix) {
    let e = m.eigen();
    (e.eigenvalues.clone(), e.basis.clone())
}

/// Upper-triangular `R` with `Rᵀ R = m⁻¹`.
pub fn tri_factor_inverse(m: &SpdMatrix) -> SquareMatrix {
    m.inv_upper().clone()
}
