//! Symmetric positive-definite matrices and the block identities used for
//! conditional quadratic forms.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// A symmetric positive-definite matrix with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct SpdMatrix {
    matrix: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl PartialEq for SpdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl SpdMatrix {
    /// Validates symmetry (relative to the largest entry) and factors the
    /// matrix. The stored matrix is the exact symmetrization `(M + Mᵀ)/2`.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.ncols(),
            });
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        if (&matrix - matrix.transpose()).amax() > SYMMETRY_TOL * scale {
            return Err(Error::NotPositiveDefinite);
        }
        let matrix = (&matrix + matrix.transpose()) * 0.5;
        let chol = Cholesky::new(matrix.clone()).ok_or(Error::NotPositiveDefinite)?;
        if chol.l_dirty().diagonal().iter().any(|&d| d <= 0.0 || !d.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(SpdMatrix { matrix, chol })
    }

    /// Row-major entries of a `dim × dim` matrix.
    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim)).expect("identity is SPD")
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Lower-triangular `L` with `M = L Lᵀ`.
    pub fn cholesky_l(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    pub fn ln_det(&self) -> f64 {
        2.0 * self.chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }

    pub fn det(&self) -> f64 {
        self.ln_det().exp()
    }

    pub fn inverse(&self) -> SpdMatrix {
        SpdMatrix::new(self.chol.inverse()).expect("inverse of an SPD matrix is SPD")
    }

    pub fn scaled(&self, t: f64) -> Result<SpdMatrix> {
        SpdMatrix::new(&self.matrix * t)
    }

    /// `M⁻¹ b`.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.matrix * x))
    }

    /// `xᵀ M⁻¹ x`, via the Cholesky factor.
    pub fn inv_quad_form(&self, x: &DVector<f64>) -> f64 {
        let z = self
            .chol
            .l_dirty()
            .solve_lower_triangular(x)
            .expect("Cholesky factor is nonsingular");
        z.norm_squared()
    }

    /// Split into blocks `(Σ11, Σ21, Σ22)` with `Σ11` of size `k × k`.
    pub fn blocks(&self, k: usize) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let m = &self.matrix;
        (
            m.view((0, 0), (k, k)).into_owned(),
            m.view((k, 0), (n - k, k)).into_owned(),
            m.view((k, k), (n - k, n - k)).into_owned(),
        )
    }

    /// Schur complement `Σ22.1 = Σ22 − Σ21 Σ11⁻¹ Σ12` of the leading `k × k`
    /// block.
    pub fn schur_complement(&self, k: usize) -> Result<SpdMatrix> {
        let n = self.dim();
        if k == 0 || k >= n {
            return Err(Error::DimensionMismatch { expected: n - 1, got: k });
        }
        let (s11, s21, s22) = self.blocks(k);
        let c11 = Cholesky::new(s11).ok_or(Error::NotPositiveDefinite)?;
        let s11_inv_s12 = c11.solve(&s21.transpose());
        SpdMatrix::new(s22 - &s21 * s11_inv_s12)
    }
}
