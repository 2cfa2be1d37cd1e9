//! Scalar abstraction for the numeric core.
//!
//! All math in this crate is generic over [`Scalar`], which bundles the
//! `num-traits` floating-point surface with the few dense factorizations we
//! need. Factorizations are provided per concrete type through
//! [`DenseLinalg`] so generic code never touches a linear-algebra backend
//! directly. `f64` is the reference precision; `f32` exists for the timing
//! harness.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Dense factorizations backed by a concrete linear-algebra implementation.
///
/// Matrices are passed as row-major slices of length `n * n`.
pub trait DenseLinalg: Sized {
    /// Eigendecomposition of a symmetric matrix. Returns `(eigenvalues, q)`
    /// where `q` is row-major with eigenvectors in columns, so
    /// `a = q * diag(eigenvalues) * q^T`.
    fn sym_eigen(n: usize, a: &[Self]) -> (Vec<Self>, Vec<Self>);

    /// Solve `a * x = b` for symmetric positive-definite `a` with `ncols`
    /// right-hand sides stored row-major in `b` (`n * ncols`). Returns `None`
    /// when the Cholesky factorization fails.
    fn solve_spd(n: usize, a: &[Self], ncols: usize, b: &[Self]) -> Option<Vec<Self>>;
}

macro_rules! impl_dense_linalg {
    ($t:ty) => {
        impl DenseLinalg for $t {
            fn sym_eigen(n: usize, a: &[Self]) -> (Vec<Self>, Vec<Self>) {
                assert_eq!(a.len(), n * n, "symmetric eigen input must be n*n");
                let m = DMatrix::from_row_slice(n, n, a);
                let eig = SymmetricEigen::new(m);
                let values = eig.eigenvalues.iter().copied().collect();
                // DMatrix iterates column-major; transpose to hand out row-major.
                let mut q = vec![0.0 as $t; n * n];
                for r in 0..n {
                    for c in 0..n {
                        q[r * n + c] = eig.eigenvectors[(r, c)];
                    }
                }
                (values, q)
            }

            fn solve_spd(n: usize, a: &[Self], ncols: usize, b: &[Self]) -> Option<Vec<Self>> {
                assert_eq!(a.len(), n * n);
                assert_eq!(b.len(), n * ncols);
                let m = DMatrix::from_row_slice(n, n, a);
                let rhs = DMatrix::from_row_slice(n, ncols, b);
                let chol = Cholesky::new(m)?;
                let x = chol.solve(&rhs);
                let mut out = vec![0.0 as $t; n * ncols];
                for r in 0..n {
                    for c in 0..ncols {
                        out[r * ncols + c] = x[(r, c)];
                    }
                }
                Some(out)
            }
        }
    };
}

impl_dense_linalg!(f32);
impl_dense_linalg!(f64);

/// Floating-point scalar used throughout the crate.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + DenseLinalg
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; used for constants and for routing all
    /// random sampling through a single `f64` stream so that `f32` and `f64`
    /// runs consume identical RNG sequences.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 conversion")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("f64 conversion")
    }

    /// Error function, used by the `erf` activation.
    fn erf(self) -> Self {
        Self::from_f64_lossy(libm::erf(self.to_f64_lossy()))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_eigen_reconstructs_matrix() {
        // 3x3 symmetric matrix with known structure.
        let a = [4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let (vals, q) = f64::sym_eigen(3, &a);
        // Reconstruct q * diag(vals) * q^T.
        let mut rec = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += q[r * 3 + k] * vals[k] * q[c * 3 + k];
                }
                rec[r * 3 + c] = s;
            }
        }
        for (x, y) in rec.iter().zip(a.iter()) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn solve_spd_matches_direct_inverse() {
        let a = [2.0, 0.5, 0.5, 1.0];
        let b = [1.0, 0.0, 0.0, 1.0]; // identity rhs -> inverse
        let x = f64::solve_spd(2, &a, 2, &b).unwrap();
        // a * x should be the identity.
        let prod = [
            a[0] * x[0] + a[1] * x[2],
            a[0] * x[1] + a[1] * x[3],
            a[2] * x[0] + a[3] * x[2],
            a[2] * x[1] + a[3] * x[3],
        ];
        assert!((prod[0] - 1.0).abs() < 1e-12);
        assert!(prod[1].abs() < 1e-12);
        assert!(prod[2].abs() < 1e-12);
        assert!((prod[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn erf_reference_values() {
        assert!(Scalar::erf(0.0f64).abs() < 1e-15);
        assert!((Scalar::erf(1.0f64) - 0.8427007929497149).abs() < 1e-12);
        assert!((Scalar::erf(1.0f32) - 0.842_700_8f32).abs() < 1e-6);
    }
}
