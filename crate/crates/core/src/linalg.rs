//! Small dense symmetric-matrix routines: Cholesky, Jacobi eigendecomposition,
//! and the [`CorrelationMatrix`] type built on them. Matrices are row-major `d*d`
//! slices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::SeededRandomSource;

/// Largest negative (or zero) pivot treated as a semi-definite zero.
pub const PIVOT_SHIFT: f64 = 1e-10;
/// Residual below a zero pivot that still counts as consistent with PSD.
const ZERO_PIVOT_RESIDUAL: f64 = 1e-8;

/// Lower-triangular `L` with `L Lᵀ = matrix`.
///
/// Pivots in `[-1e-10, 1e-10]` are treated as zero (semi-definite input); a more
/// negative pivot fails with [`Error::Matrix`] naming its index.
pub fn cholesky(matrix: &[f64], d: usize) -> Result<Vec<f64>> {
    if matrix.len() != d * d {
        return Err(Error::dimension(format!("expected a {d}x{d} matrix, got {} entries", matrix.len())));
    }
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        let mut pivot = matrix[i * d + i];
        for k in 0..i {
            pivot -= l[i * d + k] * l[i * d + k];
        }
        if pivot.is_nan() || pivot < -PIVOT_SHIFT {
            return Err(Error::Matrix { pivot: i, value: pivot });
        }
        if pivot <= PIVOT_SHIFT {
            // zero pivot: the rest of the column must vanish too
            for r in i + 1..d {
                let mut residual = matrix[r * d + i];
                for k in 0..i {
                    residual -= l[r * d + k] * l[i * d + k];
                }
                if libm::fabs(residual) > ZERO_PIVOT_RESIDUAL {
                    return Err(Error::Matrix { pivot: i, value: pivot });
                }
            }
            continue;
        }
        let diag = libm::sqrt(pivot);
        l[i * d + i] = diag;
        for r in i + 1..d {
            let mut s = matrix[r * d + i];
            for k in 0..i {
                s -= l[r * d + k] * l[i * d + k];
            }
            l[r * d + i] = s / diag;
        }
    }
    Ok(l)
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvector `k` stored in column `k`.
pub fn symmetric_eigen(matrix: &[f64], d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * d + j] * a[i * d + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..d).map(|i| a[i * d + i]).collect();
    (values, v)
}

/// A `d x d` correlation matrix: symmetric, unit diagonal, off-diagonals in
/// `[-1, 1]`, positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    dim: usize,
    values: Vec<f64>,
}

impl CorrelationMatrix {
    /// Validates and wraps a row-major matrix.
    ///
    /// Asymmetry up to 1e-9 is averaged away and diagonal entries within 1e-9 of one
    /// are snapped to exactly one.
    pub fn new(dim: usize, mut values: Vec<f64>) -> Result<Self> {
        if dim == 0 || values.len() != dim * dim {
            return Err(Error::dimension(format!(
                "correlation matrix of dimension {dim} needs {} entries, got {}",
                dim * dim,
                values.len()
            )));
        }
        for i in 0..dim {
            if libm::fabs(values[i * dim + i] - 1.0) > 1e-9 {
                return Err(Error::parameter(format!("diagonal entry {i} is {}, expected 1", values[i * dim + i])));
            }
            values[i * dim + i] = 1.0;
            for j in i + 1..dim {
                let (a, b) = (values[i * dim + j], values[j * dim + i]);
                if a.is_nan() || b.is_nan() || libm::fabs(a - b) > 1e-9 {
                    return Err(Error::parameter(format!("entries ({i},{j}) and ({j},{i}) differ: {a} vs {b}")));
                }
                let s = 0.5 * (a + b);
                if !(-1.0..=1.0).contains(&s) {
                    return Err(Error::parameter(format!("correlation ({i},{j}) = {s} is outside [-1, 1]")));
                }
                values[i * dim + j] = s;
                values[j * dim + i] = s;
            }
        }
        cholesky(&values, dim)?;
        Ok(CorrelationMatrix { dim, values })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::constant(dim, 0.0)
    }

    /// Every off-diagonal equal to `rho`. PSD requires `rho >= -1/(dim-1)`.
    pub fn constant(dim: usize, rho: f64) -> Result<Self> {
        let mut values = vec![rho; dim * dim];
        for i in 0..dim {
            values[i * dim + i] = 1.0;
        }
        Self::new(dim, values)
    }

    /// Normalized `A Aᵀ` for a `dim x dim` matrix `A` of independent standard normals.
    pub fn random(dim: usize, rng: &mut SeededRandomSource) -> Result<Self> {
        if dim == 0 {
            return Err(Error::dimension("correlation matrix dimension must be at least 1"));
        }
        let a: Vec<f64> = (0..dim * dim).map(|_| rng.standard_normal()).collect();
        let mut s = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let dot: f64 = (0..dim).map(|k| a[i * dim + k] * a[j * dim + k]).sum();
                s[i * dim + j] = dot;
                s[j * dim + i] = dot;
            }
        }
        Ok(Self::normalize_covariance(dim, &s))
    }

    /// Nearest valid correlation matrix to a symmetric estimate: eigenvalues are
    /// clipped below at `eigen_floor`, the matrix is rebuilt and rescaled to a unit
    /// diagonal.
    pub fn project(dim: usize, estimate: &[f64], eigen_floor: f64) -> Result<Self> {
        if dim == 0 || estimate.len() != dim * dim {
            return Err(Error::dimension("projection needs a square, non-empty matrix"));
        }
        let (eigenvalues, vectors) = symmetric_eigen(estimate, dim);
        let clipped: Vec<f64> = eigenvalues.iter().map(|&l| l.max(eigen_floor)).collect();
        let mut rebuilt = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let s: f64 = (0..dim).map(|k| vectors[i * dim + k] * clipped[k] * vectors[j * dim + k]).sum();
                rebuilt[i * dim + j] = s;
                rebuilt[j * dim + i] = s;
            }
        }
        Ok(Self::normalize_covariance(dim, &rebuilt))
    }

    fn normalize_covariance(dim: usize, s: &[f64]) -> Self {
        let scale: Vec<f64> = (0..dim).map(|i| libm::sqrt(s[i * dim + i])).collect();
        let mut values = vec![0.0; dim * dim];
        for i in 0..dim {
            values[i * dim + i] = 1.0;
            for j in 0..i {
                let r = (s[i * dim + j] / (scale[i] * scale[j])).clamp(-1.0, 1.0);
                values[i * dim + j] = r;
                values[j * dim + i] = r;
            }
        }
        CorrelationMatrix { dim, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cholesky(&self) -> Result<Vec<f64>> {
        cholesky(&self.values, self.dim)
    }
}
