//! Truncated Fock-space operator engine.
//!
//! Everything lives on the first D number states |0> .. |D-1>. The
//! truncation is explicit: boundary artifacts (the [a, a^dagger]
//! corner, displacement unitarity at the edge) are measured on
//! interior blocks rather than hidden, and accuracy envelopes such as
//! |alpha|^2 <= D/4 surface as warning flags on results.

pub mod composite;
pub mod dynamics;
pub mod eigen;
pub mod expm;
pub mod matrix;
pub mod operators;

pub use composite::{entanglement_entropy, joint_state, CompositeState};
pub use dynamics::{evolve, lindblad_step};
pub use eigen::{hermitian_eigen, EigenDecomposition};
pub use expm::matrix_exponential;
pub use matrix::ComplexMatrix;
pub use operators::{
    annihilation, coherent_state, creation, displacement, number_operator, poisson_perturbation,
    qho_hamiltonian, synthesize_perturbation, Enveloped,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Desk-scale cap on the truncation dimension.
pub const DIMENSION_CAP: usize = 512;
/// Cap on the joint dimension D_A * D_B of composite states.
pub const COMPOSITE_CAP: usize = 4096;

/// Truncation dimension and energy scale (hbar omega) shared by the
/// operator constructors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockConfig {
    dimension: usize,
    energy_scale: f64,
}

impl FockConfig {
    /// Unit energy scale (hbar*omega = 1), the default everywhere.
    pub fn new(dimension: usize) -> Result<Self> {
        Self::with_scale(dimension, 1.0)
    }

    pub fn with_scale(dimension: usize, energy_scale: f64) -> Result<Self> {
        if !(2..=DIMENSION_CAP).contains(&dimension) {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: format!("must lie in 2..={DIMENSION_CAP}, got {dimension}"),
            });
        }
        if !(energy_scale > 0.0 && energy_scale.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "energy_scale",
                reason: format!("must be a positive real, got {energy_scale}"),
            });
        }
        Ok(FockConfig {
            dimension,
            energy_scale,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn energy_scale(&self) -> f64 {
        self.energy_scale
    }
}

/// A square complex matrix certified Hermitian at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("must be square, got {}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let scale = matrix.max_abs().max(1.0);
        let defect = matrix.hermitian_defect();
        if defect > 1e-12 * scale {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("Hermitian defect {defect:e} exceeds 1e-12 relative tolerance"),
            });
        }
        Ok(HermitianOperator { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        if self.dimension() != other.dimension() {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: "operator dimensions differ".into(),
            });
        }
        HermitianOperator::new(self.matrix.add(&other.matrix))
    }

    pub fn apply(&self, psi: &QuantumStateVector) -> Vec<Complex64> {
        self.matrix.apply(psi.entries())
    }
}

/// A normalized vector on the D-dimensional truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStateVector {
    entries: Vec<Complex64>,
}

impl QuantumStateVector {
    /// Accept entries already normalized within the 1e-10 invariant.
    pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter {
                name: "entries",
                reason: "state vector must be nonempty".into(),
            });
        }
        let norm = vector_norm(&entries);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter {
                name: "entries",
                reason: format!("norm {norm} deviates from 1 beyond 1e-10"),
            });
        }
        Ok(QuantumStateVector { entries })
    }

    /// Normalize explicitly; used by truncated series constructions.
    pub fn normalized(entries: Vec<Complex64>) -> Result<Self> {
        let norm = vector_norm(&entries);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numerical(format!(
                "cannot normalize a vector of norm {norm}"
            )));
        }
        Ok(QuantumStateVector {
            entries: entries.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// The basis vector |n>.
    pub fn basis(dimension: usize, n: usize) -> Result<Self> {
        if n >= dimension {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("basis index {n} outside dimension {dimension}"),
            });
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); dimension];
        entries[n] = Complex64::new(1.0, 0.0);
        Ok(QuantumStateVector { entries })
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self) -> f64 {
        vector_norm(&self.entries)
    }

    /// <self|other>.
    pub fn inner(&self, other: &QuantumStateVector) -> Complex64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Measurement probabilities |<n|psi>|^2.
    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm_sqr()).collect()
    }
}

pub(crate) fn vector_norm(entries: &[Complex64]) -> f64 {
    entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A density matrix: Hermitian, unit trace, positive within 1e-8.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: "density operator must be square".into(),
            });
        }
        if matrix.hermitian_defect() > 1e-10 {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: "density operator is not Hermitian within 1e-10".into(),
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("trace {trace} deviates from 1 beyond 1e-10"),
            });
        }
        let rho = DensityOperator { matrix };
        let min = rho.min_eigenvalue()?;
        if min < -1e-8 {
            return Err(Error::Numerical(format!(
                "density operator has negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    /// |psi><psi|; positivity holds by construction, skip the solve.
    pub fn from_pure(psi: &QuantumStateVector) -> Self {
        DensityOperator {
            matrix: ComplexMatrix::outer(psi.entries(), psi.entries()),
        }
    }

    pub fn maximally_mixed(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter {
                name: "dimension",
                reason: "must be positive".into(),
            });
        }
        Ok(DensityOperator {
            matrix: ComplexMatrix::identity(dimension)
                .scale(Complex64::new(1.0 / dimension as f64, 0.0)),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Tr(rho^2), 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let h = HermitianOperator::new(self.matrix.hermitize())?;
        let eigen = hermitian_eigen(&h)?;
        Ok(eigen.eigenvalues[0])
    }

    /// Population <n|rho|n>.
    pub fn population(&self, n: usize) -> f64 {
        self.matrix[(n, n)].re
    }
}
