//! Amplitude-state analysis of discrete stochastic systems.
//!
//! The crate treats a discrete probability distribution as a unit
//! vector of real amplitudes `alpha_n = sqrt(p_n)` in a truncated
//! Hilbert space, and builds four layers on that representation:
//!
//! * [`distributions`]: five classical families (binomial, negative
//!   binomial, geometric, Poisson, hypergeometric) behind the
//!   [`distributions::Family`] strategy trait, registered by name and
//!   parsed from runtime spec strings.
//! * [`hilbert`]: adaptive state construction with certified tail
//!   bounds, Shannon entropy, Fisher information (closed forms plus a
//!   finite-difference cross-check), moments, and fidelity overlaps.
//! * [`modproj`]: the modular projection of a law onto residues mod M,
//!   computed by direct lattice folding and independently through the
//!   characteristic function, with analytic uniformity certificates
//!   and scale advice for residue generators ([`turng`]).
//! * [`fock`]: a dense complex operator engine on the truncated Fock
//!   space: ladder operators, displacement, Hermitian eigensolves,
//!   matrix exponentials, unitary and Lindblad dynamics, and bipartite
//!   entanglement entropy.
//!
//! Numerical contracts (tolerances, caps, error taxonomy) live on the
//! individual items; every fallible path returns [`error::Error`].

pub mod distributions;
pub mod error;
pub mod fock;
pub mod hilbert;
pub mod modproj;
pub mod special;
pub mod turng;

pub use distributions::{DistributionSpec, Family, NbConvention, Parameter};
pub use error::{Error, Result};
pub use hilbert::{build_state, Measured, StochasticState};
pub use modproj::{project_cf, project_direct, ModularLaw};
