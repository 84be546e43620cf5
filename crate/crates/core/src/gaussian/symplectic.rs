use nalgebra::{Cholesky, Complex, DMatrix, SymmetricEigen};

use super::GaussianState;
use crate::error::{Error, Result};

impl GaussianState {
    /// Symplectic eigenvalues of the covariance matrix, ascending, one per mode.
    ///
    /// With `cov = L L^T` they are the square roots of the eigenvalues of the
    /// symmetric matrix `L^T (W cov W^T) L`, where `W` is the symplectic form;
    /// each appears twice in that spectrum.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let dim = self.cov.nrows();
        let chol = Cholesky::new(self.cov.clone()).ok_or_else(|| {
            Error::InvalidState("covariance matrix is not positive definite".into())
        })?;
        let l = chol.unpack();
        let mut omega = DMatrix::zeros(dim, dim);
        for m in 0..dim / 2 {
            omega[(2 * m, 2 * m + 1)] = 1.0;
            omega[(2 * m + 1, 2 * m)] = -1.0;
        }
        let inner = &omega * &self.cov * omega.transpose();
        let k = l.transpose() * inner * &l;
        let k = (&k + k.transpose()) * 0.5;
        let mut eig: Vec<f64> = SymmetricEigen::new(k)
            .eigenvalues
            .iter()
            .map(|v| v.max(0.0).sqrt())
            .collect();
        eig.sort_by(f64::total_cmp);
        Ok(eig.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect())
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i/2) W`.
    ///
    /// A covariance matrix is physical exactly when this is non-negative. Unlike
    /// [`symplectic_eigenvalues`](Self::symplectic_eigenvalues) it needs no
    /// factorization, and its rounding error stays at `eps * |cov|`, so it remains
    /// meaningful for states whose variances span many orders of magnitude.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let dim = self.cov.nrows();
        let h = DMatrix::from_fn(dim, dim, |a, b| {
            let im = match (a % 2, b) {
                (0, b) if b == a + 1 => 0.5,
                (1, b) if b + 1 == a => -0.5,
                _ => 0.0,
            };
            Complex::new(self.cov[(a, b)], im)
        });
        SymmetricEigen::new(h).eigenvalues.min()
    }

    /// Largest absolute covariance entry.
    pub fn cov_scale(&self) -> f64 {
        self.cov.amax()
    }

    /// Whether every symplectic eigenvalue is at least `1/2 - tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        match self.symplectic_eigenvalues() {
            Ok(nu) => nu.iter().all(|&v| v >= super::VACUUM_VARIANCE - tol),
            Err(_) => false,
        }
    }
}
