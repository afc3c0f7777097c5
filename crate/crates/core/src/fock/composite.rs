//! Bipartite composite states |Psi_AB> = sum c_nm |n> (x) |m> and the
//! entanglement entropy of their reduced density operators.

use super::eigen::hermitian_eigen;
use super::matrix::ComplexMatrix;
use super::{DensityOperator, HermitianOperator, COMPOSITE_CAP};
use crate::error::{Error, Result};
use crate::special::KahanSum;

/// Coefficient matrix c_nm of a normalized bipartite pure state;
/// rows index subsystem A, columns subsystem B.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeState {
    coefficients: ComplexMatrix,
}

/// Validate and wrap a coefficient matrix: sum |c_nm|^2 = 1 within
/// 1e-10 and D_A * D_B within the composite cap.
pub fn joint_state(coefficients: ComplexMatrix) -> Result<CompositeState> {
    let joint = coefficients.rows() * coefficients.cols();
    if joint > COMPOSITE_CAP {
        return Err(Error::InvalidParameter {
            name: "coefficients",
            reason: format!("joint dimension {joint} exceeds the cap {COMPOSITE_CAP}"),
        });
    }
    let norm_sqr: f64 = (0..coefficients.rows())
        .map(|i| {
            coefficients
                .row(i)
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
        })
        .sum();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!(
            "joint norm^2 = {norm_sqr}, expected 1 within 1e-10"
        )));
    }
    Ok(CompositeState { coefficients })
}

impl CompositeState {
    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.coefficients
    }

    pub fn dim_a(&self) -> usize {
        self.coefficients.rows()
    }

    pub fn dim_b(&self) -> usize {
        self.coefficients.cols()
    }

    /// P_nm = |c_nm|^2.
    pub fn joint_probability(&self, n: usize, m: usize) -> f64 {
        self.coefficients[(n, m)].norm_sqr()
    }

    /// Marginal law of subsystem A (row sums of P_nm).
    pub fn marginal_a(&self) -> Vec<f64> {
        (0..self.dim_a())
            .map(|n| {
                self.coefficients
                    .row(n)
                    .iter()
                    .map(|z| z.norm_sqr())
                    .sum::<f64>()
            })
            .collect()
    }

    /// Marginal law of subsystem B (column sums of P_nm).
    pub fn marginal_b(&self) -> Vec<f64> {
        (0..self.dim_b())
            .map(|m| {
                (0..self.dim_a())
                    .map(|n| self.coefficients[(n, m)].norm_sqr())
                    .sum::<f64>()
            })
            .collect()
    }

    /// rho_A = c c^dagger, the partial trace over B.
    pub fn reduced_density_a(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.coefficients.mul(&self.coefficients.adjoint()))
    }

    /// rho_B = c^T conj(c), the partial trace over A.
    pub fn reduced_density_b(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.coefficients.adjoint().mul(&self.coefficients).hermitize())
    }
}

/// Entanglement entropy S_A = -Tr(rho_A ln rho_A) in nats.
///
/// Computed from the spectrum of c c^dagger; eigenvalues within
/// round-off of zero contribute nothing (0 ln 0 = 0).
pub fn entanglement_entropy(state: &CompositeState) -> Result<f64> {
    let rho = state
        .coefficients()
        .mul(&state.coefficients().adjoint())
        .hermitize();
    let eigen = hermitian_eigen(&HermitianOperator::new(rho)?)?;
    let mut entropy = KahanSum::new();
    for &lambda in &eigen.eigenvalues {
        if lambda < -1e-10 {
            return Err(Error::Numerical(format!(
                "reduced density eigenvalue {lambda:e} below -1e-10"
            )));
        }
        if lambda > 0.0 {
            entropy.add(-lambda * lambda.ln());
        }
    }
    Ok(entropy.value())
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_state_has_zero_entropy() {
        // c = u v^T for unit vectors u, v.
        let u = [c(0.6, 0.0), c(0.0, 0.8)];
        let v = [c(0.5f64.sqrt(), 0.0), c(0.0, -(0.5f64.sqrt()))];
        let coeff = ComplexMatrix::from_fn(2, 2, |i, j| u[i] * v[j]);
        let state = joint_state(coeff).unwrap();
        assert!(entanglement_entropy(&state).unwrap().abs() < 1e-12);

        // Joint probabilities factorize exactly.
        let ma = state.marginal_a();
        let mb = state.marginal_b();
        for (n, &pa) in ma.iter().enumerate() {
            for (m, &pb) in mb.iter().enumerate() {
                assert!((state.joint_probability(n, m) - pa * pb).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn point_mass_product() {
        let mut coeff = ComplexMatrix::zeros(2, 3);
        coeff[(1, 2)] = c(1.0, 0.0);
        let state = joint_state(coeff).unwrap();
        assert_eq!(state.joint_probability(1, 2), 1.0);
        assert_eq!(state.marginal_a(), vec![0.0, 1.0]);
        assert!(entanglement_entropy(&state).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bell_pair_reaches_ln_two() {
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut coeff = ComplexMatrix::zeros(2, 2);
        coeff[(0, 0)] = h;
        coeff[(1, 1)] = h;
        let state = joint_state(coeff).unwrap();
        let s = entanglement_entropy(&state).unwrap();
        assert!((s - std::f64::consts::LN_2).abs() < 1e-10);
        assert_eq!(state.marginal_a(), state.marginal_b());
    }

    #[test]
    fn skewed_singular_values_closed_form() {
        // Singular values sqrt(0.9), sqrt(0.1): frozen closed form
        // -0.9 ln 0.9 - 0.1 ln 0.1 = 0.3250829733914482.
        let mut coeff = ComplexMatrix::zeros(2, 2);
        coeff[(0, 0)] = c(0.9f64.sqrt(), 0.0);
        coeff[(1, 1)] = c(0.0, 0.1f64.sqrt());
        let state = joint_state(coeff).unwrap();
        let s = entanglement_entropy(&state).unwrap();
        assert!((s - 0.3250829733914482).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_symmetric_between_subsystems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..5 {
            let (da, db) = (rng.gen_range(2..5), rng.gen_range(2..6));
            let raw = ComplexMatrix::from_fn(da, db, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let norm: f64 = (0..da)
                .map(|i| raw.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>())
                .sum::<f64>()
                .sqrt();
            let state = joint_state(raw.scale(c(1.0 / norm, 0.0))).unwrap();

            let s_a = entanglement_entropy(&state).unwrap();
            let rho_b = state.reduced_density_b().unwrap();
            let eigen = hermitian_eigen(
                &HermitianOperator::new(rho_b.matrix().clone()).unwrap(),
            )
            .unwrap();
            let s_b: f64 = eigen
                .eigenvalues
                .iter()
                .filter(|&&l| l > 0.0)
                .map(|&l| -l * l.ln())
                .sum();
            assert!((s_a - s_b).abs() < 1e-10, "S_A {s_a} vs S_B {s_b}");
        }
    }

    #[test]
    fn joint_state_rejects_bad_inputs() {
        let coeff = ComplexMatrix::identity(2); // norm^2 = 2
        assert!(joint_state(coeff).is_err());
        let big = ComplexMatrix::zeros(70, 70); // 4900 > 4096
        assert!(joint_state(big).is_err());
    }

    #[test]
    fn marginals_sum_to_one() {
        let mut coeff = ComplexMatrix::zeros(2, 2);
        coeff[(0, 0)] = c(0.5, 0.5);
        coeff[(1, 0)] = c(0.5, 0.0);
        coeff[(0, 1)] = c(0.0, 0.5);
        let state = joint_state(coeff).unwrap();
        assert!((state.marginal_a().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((state.marginal_b().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let rho_a = state.reduced_density_a().unwrap();
        assert!((rho_a.trace() - 1.0).abs() < 1e-12);
    }
}
