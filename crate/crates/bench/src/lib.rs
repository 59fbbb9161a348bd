//! Shared fixtures for the criterion benchmarks.

use qccsd_core::ansatz::{build_excitation_list, ExcitationList};
use qccsd_core::fermion::{build_hamiltonian, hf_reference, jordan_wigner, ActiveSpace};
use qccsd_core::integrals::{hydrogen_mo_integrals, Geometry};
use qccsd_core::PauliSum;

pub struct ChainFixture {
    pub hamiltonian: PauliSum,
    pub reference: u64,
    pub excitations: ExcitationList,
    pub n_spatial: usize,
}

/// Hydrogen-chain problem at 1.0 Angstrom spacing.
pub fn chain_fixture(n_atoms: usize) -> ChainFixture {
    let geometry = Geometry::hydrogen_chain(n_atoms, 1.0).expect("valid chain");
    let mi = hydrogen_mo_integrals(&geometry).expect("SCF converges");
    let hamiltonian =
        jordan_wigner(&build_hamiltonian(&mi, &ActiveSpace::full()).expect("valid space"))
            .expect("JW");
    let reference = hf_reference(mi.n_spatial, mi.n_alpha, mi.n_beta).expect("reference");
    let excitations =
        build_excitation_list(mi.n_spatial, mi.n_alpha, mi.n_beta).expect("excitations");
    ChainFixture {
        hamiltonian,
        reference,
        excitations,
        n_spatial: mi.n_spatial,
    }
}
