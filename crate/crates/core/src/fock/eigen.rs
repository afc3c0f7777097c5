//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Chosen for self-contained correctness over speed: every rotation is
//! an exact unitary similarity, so orthonormality of the eigenvector
//! columns holds to round-off with no re-orthogonalization pass.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::HermitianOperator;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending; eigenvector k is column k of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows())
            .map(|i| self.eigenvectors[(i, k)])
            .collect()
    }
}

/// Diagonalize a Hermitian matrix: H = V diag(E) V^dagger.
///
/// Converges when the off-diagonal Frobenius norm falls below
/// 1e-12 * |H|_F; the residual |H v_k - E_k v_k| <= 1e-9 |H| contract
/// follows with a wide margin.
pub fn hermitian_eigen(h: &HermitianOperator) -> Result<EigenDecomposition> {
    let n = h.dimension();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let norm = a.frobenius_norm();
    let target = 1e-12 * norm;

    if n == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![a[(0, 0)].re],
            eigenvectors: v,
        });
    }

    let mut converged = norm == 0.0 || off_diagonal_norm(&a) <= target;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= target;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi sweep cap {MAX_SWEEPS} reached; off-diagonal norm {:e} above target {target:e}",
            off_diagonal_norm(&a)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation annihilating a_pq.
///
/// With a_pq = |a| e^{i theta}, tau = (a_qq - a_pp) / (2|a|) and
/// t = sgn(tau) / (|tau| + sqrt(1 + tau^2)), the unitary
/// J = [[c, s e^{i theta}], [-s e^{-i theta}, c]] on the (p, q) plane
/// zeroes the pivot: diagonals move by -t|a| and +t|a|.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let pivot = a[(p, q)];
    let mag = pivot.norm();
    if mag < f64::MIN_POSITIVE {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = pivot / mag;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
    let t = sign / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    // Columns: B = A J.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = c * aip - s * phase.conj() * aiq;
        a[(i, q)] = s * phase * aip + c * aiq;
    }
    // Rows: A' = J^dagger B.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = c * apj - s * phase * aqj;
        a[(q, j)] = s * phase.conj() * apj + c * aqj;
    }
    // The closed forms are exact; writing them explicitly removes the
    // cancellation noise the two-pass update leaves on the pivot.
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);

    // Accumulate V <- V J.
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = c * vip - s * phase.conj() * viq;
        v[(i, q)] = s * phase * vip + c * viq;
    }
}
