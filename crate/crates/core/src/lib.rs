//! Statevector VQE engine for small molecular Hamiltonians.
//!
//! The crate covers the full pipeline from molecular integrals to a
//! variational ground-state energy:
//!
//! - [`pauli`] — symplectic Pauli-string algebra and expectation values;
//! - [`fermion`] — second-quantized operators, Jordan-Wigner mapping,
//!   Hamiltonian assembly and frozen-core reduction;
//! - [`integrals`] — FCIDUMP I/O plus a built-in STO-3G s-orbital engine
//!   and restricted Hartree-Fock solver for hydrogen chains;
//! - [`sim`] — dense statevector simulator with particle-preserving
//!   exchange gates;
//! - [`ansatz`] — spin-preserving excitation lists, the exchange-gate
//!   coupled-cluster circuit (QCCSD), the Trotterized UCCSD circuit, and
//!   elementary-gate decompositions;
//! - [`vqe`] — box-constrained quasi-Newton energy minimization;
//! - [`exact`] — particle-number/S_z-sector exact diagonalization used as
//!   the error oracle.
//!
//! Qubit indexing is little-endian throughout: qubit 0 is the least
//! significant bit of a basis-state index, and ket strings are written
//! `|q_{n-1} ... q_0>`.

pub mod ansatz;
pub mod error;
pub mod exact;
pub mod fermion;
pub mod integrals;
pub mod pauli;
pub mod sim;
pub mod vqe;

pub use error::Error;
pub use fermion::{ActiveSpace, FermionOperator, MolecularIntegrals};
pub use pauli::{PauliSum, PauliTerm};
pub use sim::{Gate, StateVector};

/// Per-crate result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Coefficient magnitudes below this are dropped from operator sums.
///
/// Set below the accumulation noise of f64 at this problem scale; exact
/// cancellations (e.g. in Jordan-Wigner images of Hermitian operators)
/// land many orders of magnitude under it.
pub const DROP_TOLERANCE: f64 = 1e-12;
