//! Closed (unitary) and open (master-equation) time evolution.

use num_complex::Complex64;

use super::eigen::hermitian_eigen;
use super::matrix::ComplexMatrix;
use super::{DensityOperator, HermitianOperator, QuantumStateVector};
use crate::error::{Error, Result};

/// Spectral evolution |psi(t)> = sum_k e^{-i E_k t} <phi_k|psi(0)> |phi_k>.
pub fn evolve(
    h: &HermitianOperator,
    psi0: &QuantumStateVector,
    t: f64,
) -> Result<QuantumStateVector> {
    if h.dimension() != psi0.dimension() {
        return Err(Error::InvalidParameter {
            name: "psi0",
            reason: format!(
                "state dimension {} does not match operator dimension {}",
                psi0.dimension(),
                h.dimension()
            ),
        });
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("must be finite, got {t}"),
        });
    }
    let eigen = hermitian_eigen(h)?;
    let n = h.dimension();
    let v = &eigen.eigenvectors;
    // c = V^dagger psi0, then phases, then back through V.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            acc += v[(i, k)].conj() * psi0.entries()[i];
        }
        coeffs[k] = acc * Complex64::from_polar(1.0, -eigen.eigenvalues[k] * t);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += v[(i, k)] * coeffs[k];
        }
        out[i] = acc;
    }
    QuantumStateVector::from_entries(out)
}

/// Fixed-step RK4 integration of the master equation
/// d rho / dt = -i [H0, rho] + V rho V^dagger - (W rho + rho W)/2,
/// with W = V^dagger V (the standard trace-preserving dissipator).
pub fn lindblad_step(
    h0: &HermitianOperator,
    v: &ComplexMatrix,
    rho: &DensityOperator,
    dt: f64,
    steps: u64,
) -> Result<DensityOperator> {
    let d = h0.dimension();
    if !(v.rows() == d && v.cols() == d && rho.dimension() == d) {
        return Err(Error::InvalidParameter {
            name: "dimensions",
            reason: "H0, V, and rho must share one dimension".into(),
        });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("must be a positive real, got {dt}"),
        });
    }
    let h_norm = h0.matrix().frobenius_norm();
    if h_norm > 0.0 && dt > 1e-2 / h_norm {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("step {dt} exceeds the stability budget 1e-2/|H0| = {:e}", 1e-2 / h_norm),
        });
    }

    let hm = h0.matrix();
    let v_adj = v.adjoint();
    let w = v_adj.mul(v);
    let liouville = |m: &ComplexMatrix| -> ComplexMatrix {
        let comm = hm.mul(m).sub(&m.mul(hm)).scale(Complex64::new(0.0, -1.0));
        let jump = v.mul(m).mul(&v_adj);
        let anti = w.mul(m).add(&m.mul(&w)).scale(Complex64::new(-0.5, 0.0));
        comm.add(&jump).add(&anti)
    };

    let half = Complex64::new(dt / 2.0, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let mut state = rho.matrix().clone();
    for _ in 0..steps {
        let k1 = liouville(&state);
        let k2 = liouville(&state.add(&k1.scale(half)));
        let k3 = liouville(&state.add(&k2.scale(half)));
        let k4 = liouville(&state.add(&k3.scale(full)));
        let increment = k1
            .add(&k2.scale(two))
            .add(&k3.scale(two))
            .add(&k4)
            .scale(sixth);
        // The exact flow stays Hermitian; projecting back each step
        // stops round-off drift from accumulating over long runs.
        state = state.add(&increment).hermitize();
    }

    DensityOperator::new(state).map_err(|e| match e {
        Error::Numerical(msg) => {
            Error::Numerical(format!("{msg}; positivity lost during integration, reduce dt"))
        }
        other => other,
    })
}
