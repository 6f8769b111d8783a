//! Cholesky factorization of symmetric positive definite matrices.
//!
//! A completed factorization doubles as the positive definiteness
//! certificate: any pivot that is not strictly positive (or not finite)
//! aborts with `NotPositiveDefinite`.

use super::{SymMatrix, Vector};
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `L L^T = A`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    n: usize,
    lower: Vec<f64>, // row-major, only entries j <= i are used
}

impl CholeskyFactor {
    pub fn new(m: &SymMatrix) -> Result<Self> {
        let n = m.dim();
        let mut lower = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = m.get(i, j);
                for k in 0..j {
                    sum -= lower[i * n + k] * lower[j * n + k];
                }
                if i == j {
                    if !(sum > 0.0) || !sum.is_finite() {
                        return Err(Error::NotPositiveDefinite {
                            index: i,
                            pivot: sum,
                        });
                    }
                    lower[i * n + i] = sum.sqrt();
                } else {
                    lower[i * n + j] = sum / lower[j * n + j];
                }
            }
        }
        Ok(Self { n, lower })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A y = b` by forward and back substitution.
    pub fn solve(&self, b: &Vector) -> Result<Vector> {
        if b.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: b.dim(),
            });
        }
        let n = self.n;
        let mut y = b.as_slice().to_vec();
        // L z = b
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.lower[i * n + k] * y[k];
            }
            y[i] /= self.lower[i * n + i];
        }
        // L^T y = z
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                y[i] -= self.lower[k * n + i] * y[k];
            }
            y[i] /= self.lower[i * n + i];
        }
        Vector::new(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_gaussian_vector, random_spd};
    use crate::seed::rng_for;

    #[test]
    fn factor_of_identity_solves_exactly() {
        let f = CholeskyFactor::new(&SymMatrix::identity(4)).unwrap();
        let b = Vector::from_slice(&[1.0, 2.0, -3.0, 0.25]).unwrap();
        assert_eq!(f.solve(&b).unwrap(), b);
    }

    #[test]
    fn rejects_zero_and_negative_pivots() {
        let zero = SymMatrix::diagonal(&[1.0, 0.0]);
        assert!(matches!(
            CholeskyFactor::new(&zero),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        let neg = SymMatrix::diagonal(&[-1.0, 1.0]);
        assert!(matches!(
            CholeskyFactor::new(&neg),
            Err(Error::NotPositiveDefinite { index: 0, .. })
        ));
    }

    #[test]
    fn solve_accuracy_on_random_spd() {
        let mut rng = rng_for(42, 30, 0);
        for _ in 0..30 {
            let a = random_spd(6, 0.05, 20.0, &mut rng).unwrap();
            let b = random_gaussian_vector(6, &mut rng);
            let y = a.solve(&b).unwrap();
            let res = a.matvec(&y).unwrap().sub(&b).norm();
            assert!(res <= 1e-10 * (a.lambda_max() * y.norm() + b.norm()));
        }
    }
}
