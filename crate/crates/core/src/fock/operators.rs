//! Ladder operators, the oscillator Hamiltonian, coherent states, and
//! the perturbation constructions.

use num_complex::Complex64;

use super::expm::matrix_exponential;
use super::matrix::ComplexMatrix;
use super::{FockConfig, HermitianOperator, QuantumStateVector};
use crate::error::{Error, Result};
use crate::hilbert::StochasticState;
use crate::special::ln_factorial;

/// A result whose accuracy envelope (|alpha|^2 <= D/4) was checked;
/// `envelope_warning` is set instead of failing when it is exceeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Enveloped<T> {
    pub value: T,
    pub envelope_warning: bool,
}

fn outside_envelope(cfg: &FockConfig, alpha: Complex64) -> bool {
    alpha.norm_sqr() > cfg.dimension() as f64 / 4.0
}

/// The annihilation operator: a|n> = sqrt(n)|n-1>, a single
/// superdiagonal of sqrt(n) at (n-1, n).
pub fn annihilation(cfg: &FockConfig) -> ComplexMatrix {
    let d = cfg.dimension();
    let mut a = ComplexMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// The creation operator, the adjoint of [`annihilation`].
pub fn creation(cfg: &FockConfig) -> ComplexMatrix {
    annihilation(cfg).adjoint()
}

/// The number operator diag(0, 1, .., D-1).
pub fn number_operator(cfg: &FockConfig) -> ComplexMatrix {
    let d = cfg.dimension();
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// H_QHO = hbar omega (N + 1/2), diagonal E_n = hbar omega (n + 1/2).
pub fn qho_hamiltonian(cfg: &FockConfig) -> HermitianOperator {
    let d = cfg.dimension();
    let scale = cfg.energy_scale();
    let m = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(scale * (i as f64 + 0.5), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    HermitianOperator::new(m).expect("diagonal real matrix is Hermitian")
}

/// The displacement operator D(alpha) = exp(alpha a^dagger - alpha* a).
///
/// Unitary up to truncation; the interior (D/2)x(D/2) block satisfies
/// |D^dagger D - I|_max <= 1e-8 inside the accuracy envelope.
pub fn displacement(cfg: &FockConfig, alpha: Complex64) -> Result<Enveloped<ComplexMatrix>> {
    let a = annihilation(cfg);
    let generator = a.adjoint().scale(alpha).sub(&a.scale(alpha.conj()));
    let value = matrix_exponential(&generator, 1.0)?;
    Ok(Enveloped {
        value,
        envelope_warning: outside_envelope(cfg, alpha),
    })
}

/// The coherent state |alpha> = e^{-|alpha|^2/2} sum_n alpha^n/sqrt(n!) |n>,
/// truncated and renormalized. Photon statistics are Poisson with
/// mean |alpha|^2 up to the truncation tail.
pub fn coherent_state(cfg: &FockConfig, alpha: Complex64) -> Result<Enveloped<QuantumStateVector>> {
    let d = cfg.dimension();
    let mean = alpha.norm_sqr();
    let entries: Vec<Complex64> = if mean == 0.0 {
        let mut e = vec![Complex64::new(0.0, 0.0); d];
        e[0] = Complex64::new(1.0, 0.0);
        e
    } else {
        let (r, arg) = (alpha.norm(), alpha.arg());
        (0..d)
            .map(|n| {
                // Magnitude in log space: n ln r - ln(n!)/2 - |alpha|^2/2.
                let ln_mag = n as f64 * r.ln() - 0.5 * ln_factorial(n as u64) - 0.5 * mean;
                Complex64::from_polar(ln_mag.exp(), n as f64 * arg)
            })
            .collect()
    };
    Ok(Enveloped {
        value: QuantumStateVector::normalized(entries)?,
        envelope_warning: outside_envelope(cfg, alpha),
    })
}

/// Theorem 1 perturbation: Delta V = hbar omega (-alpha a^dagger -
/// alpha* a + |alpha|^2). Added to H_QHO it makes |alpha> the exact
/// ground state with eigenvalue hbar omega / 2.
pub fn poisson_perturbation(cfg: &FockConfig, alpha: Complex64) -> HermitianOperator {
    let d = cfg.dimension();
    let scale = cfg.energy_scale();
    let mut m = ComplexMatrix::zeros(d, d);
    for n in 0..d {
        m[(n, n)] = Complex64::new(scale * alpha.norm_sqr(), 0.0);
    }
    for n in 1..d {
        let root = (n as f64).sqrt();
        // -alpha* a on the superdiagonal, -alpha a^dagger below.
        m[(n - 1, n)] = -alpha.conj() * root * scale;
        m[(n, n - 1)] = -alpha * root * scale;
    }
    HermitianOperator::new(m).expect("construction is Hermitian")
}

/// Generic perturbation synthesis: Delta V = hbar omega (I -
/// |psi><psi|) - H_QHO, so H_QHO + Delta V has |psi> as its unique
/// ground state with eigenvalue 0 and spectral gap hbar omega.
pub fn synthesize_perturbation(
    target: &StochasticState,
    cfg: &FockConfig,
) -> Result<HermitianOperator> {
    let d = cfg.dimension();
    // Mass the truncation would drop: the certified tail plus any
    // amplitudes beyond dimension D.
    let mut dropped = target.tail_mass();
    for n in d..target.dimension() {
        dropped += target.probability(n);
    }
    if dropped > 1e-10 {
        return Err(Error::Domain(format!(
            "target state leaves mass {dropped:e} beyond dimension {d}; limit is 1e-10"
        )));
    }
    let psi: Vec<Complex64> = (0..d)
        .map(|n| {
            Complex64::new(
                target.amplitudes().get(n).copied().unwrap_or(0.0),
                0.0,
            )
        })
        .collect();
    let psi = QuantumStateVector::normalized(psi)?;

    let scale = Complex64::new(cfg.energy_scale(), 0.0);
    let projector = ComplexMatrix::outer(psi.entries(), psi.entries());
    let m = ComplexMatrix::identity(d)
        .sub(&projector)
        .scale(scale)
        .sub(qho_hamiltonian(cfg).matrix());
    HermitianOperator::new(m)
}
