//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("duplicate qubit index {index} in gate")]
    DuplicateQubit { index: usize },

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("register of {n_qubits} qubits exceeds dense-matrix guard of {max_qubits}")]
    RegisterTooLarge { n_qubits: usize, max_qubits: usize },

    #[error("state not normalized: |1 - <psi|psi>| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("basis mask {mask:#x} out of range for {n_qubits} qubits")]
    MaskOutOfRange { mask: u64, n_qubits: usize },

    #[error("parameter count mismatch: {expected} excitations vs {got} values")]
    ParameterCountMismatch { expected: usize, got: usize },

    #[error("invalid excitation index ordering: {0}")]
    InvalidOrdering(String),

    #[error("Pauli exponential generator must have a real coefficient, got {re}+{im}i")]
    NonRealGenerator { re: f64, im: f64 },

    #[error("inconsistent integral dimensions: {0}")]
    InconsistentIntegrals(String),

    #[error("active space invalid: {0}")]
    InvalidActiveSpace(String),

    #[error("electron count {electrons} exceeds {modes} spin orbitals")]
    TooManyElectrons { electrons: usize, modes: usize },

    #[error("{path}:{line}: {message}")]
    FcidumpParse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("SCF did not converge in {cycles} cycles (last density change {last_delta:.3e})")]
    ScfNotConverged { cycles: usize, last_delta: f64 },

    #[error(
        "Hamiltonian leaks out of the ({n_alpha},{n_beta}) sector: \
         amplitude {amplitude:.3e} on basis state {mask:#x}"
    )]
    SectorLeakage {
        n_alpha: usize,
        n_beta: usize,
        mask: u64,
        amplitude: f64,
    },

    #[error("Hartree-Fock state {mask:#x} lies outside the sector basis")]
    HfOutsideSector { mask: u64 },

    #[error("iterative eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    EigenNotConverged { residual: f64, iterations: usize },

    #[error("objective returned a non-finite value at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
