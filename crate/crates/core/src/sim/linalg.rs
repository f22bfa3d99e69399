use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

fn to_nalgebra(s: &Matrix) -> Result<DMatrix<f64>> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch {
            expected: s.rows(),
            found: s.cols(),
        });
    }
    let asym = s.asymmetry();
    if asym > 1e-10 {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(DMatrix::from_row_slice(s.rows(), s.cols(), s.as_slice()))
}

pub fn min_eigenvalue(s: &Matrix) -> Result<f64> {
    let m = to_nalgebra(s)?;
    Ok(m.symmetric_eigenvalues().min())
}

/// Symmetric square root through the eigendecomposition. Eigenvalues down
/// to `-1e-8 ||S||_F` are clipped to zero; anything lower is an error.
pub fn matrix_sqrt_psd(s: &Matrix) -> Result<Matrix> {
    let m = to_nalgebra(s)?;
    let p = s.rows();
    if p == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m);
    let min = eig.eigenvalues.min();
    if min < -1e-8 * s.frobenius_norm() {
        return Err(Error::NotPositiveSemidefinite(min));
    }
    let roots: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, r) in roots.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*r);
    }
    let root = &scaled * v.transpose();
    let mut out = Matrix::from_fn(p, p, |i, j| root[(i, j)]);
    out.symmetrize();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_root() {
        let r = matrix_sqrt_psd(&Matrix::identity(4)).unwrap();
        assert!(r.max_abs_diff(&Matrix::identity(4)).unwrap() < 1e-14);
    }

    #[test]
    fn diagonal_root() {
        let r = matrix_sqrt_psd(&Matrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert!(r.max_abs_diff(&Matrix::from_diagonal(&[2.0, 3.0])).unwrap() < 1e-14);
    }

    #[test]
    fn random_psd_round_trip() {
        let a = Matrix::from_fn(6, 4, |i, j| {
            ((i * 5 + j * 3) % 7) as f64 - 2.7 + 0.1 * j as f64
        });
        let s = a.gram();
        let r = matrix_sqrt_psd(&s).unwrap();
        let back = r.matmul(&r).unwrap();
        let rel = back.sub(&s).unwrap().frobenius_norm() / s.frobenius_norm();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        let s = Matrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(
            matrix_sqrt_psd(&s),
            Err(Error::NotPositiveSemidefinite(_))
        ));
        let t = Matrix::from_rows(&[[1.0, 0.5], [0.0, 1.0]]).unwrap();
        assert!(matches!(matrix_sqrt_psd(&t), Err(Error::NotSymmetric(_))));
    }
}
