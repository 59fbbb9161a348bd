//! Single-point pipeline: integrals -> qubit Hamiltonian -> sector FCI ->
//! one VQE run per requested ansatz.

use std::path::PathBuf;

use qccsd_core::ansatz::{
    build_excitation_list, decomposed_gate_count, ExcitationList, ParameterVector,
};
use qccsd_core::exact::{sector_ground_state, SectorBasis, SectorGroundState};
use qccsd_core::fermion::{build_hamiltonian, freeze_core, hf_reference, jordan_wigner, ActiveSpace};
use qccsd_core::integrals::{hydrogen_mo_integrals, parse_fcidump, Geometry};
use qccsd_core::pauli::PauliSum;
use qccsd_core::vqe::{minimize, AnsatzKind, MinimizeOptions, VqeProblem, VqeResult};
use qccsd_core::{Error, MolecularIntegrals};

use crate::config::{AnsatzChoice, SeedParams};

/// Where one scan point's integrals come from.
#[derive(Debug, Clone)]
pub enum PointSource {
    Chain { n_atoms: usize, spacing: f64 },
    Fcidump(PathBuf),
}

#[derive(Debug, Clone)]
pub struct PointSpec {
    pub bond_length: f64,
    pub source: PointSource,
}

#[derive(Debug, Clone, Copy)]
pub struct PointOptions {
    pub ansatz: AnsatzChoice,
    pub frozen: usize,
    pub removed: usize,
    pub max_iters: usize,
    pub ftol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    VqeUnconverged,
    ScfFailed,
}

impl PointStatus {
    pub fn label(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::VqeUnconverged => "vqe_unconverged",
            PointStatus::ScfFailed => "scf_failed",
        }
    }
}

/// Everything one CSV row reports.
#[derive(Debug, Clone, Default)]
pub struct PointOutcome {
    pub bond_length: f64,
    pub e_hf: Option<f64>,
    pub e_fci: Option<f64>,
    pub e_qccsd: Option<f64>,
    pub e_uccsd: Option<f64>,
    pub overlap_hf: Option<f64>,
    pub params: Option<usize>,
    pub gates: Option<usize>,
    pub iters_q: Option<usize>,
    pub iters_u: Option<usize>,
    pub converged_q: Option<bool>,
    pub converged_u: Option<bool>,
    pub status: Option<PointStatus>,
    /// Failure detail for logs; never part of the CSV schema.
    pub detail: Option<String>,
    /// Optimal parameters per ansatz, for warm starts and dumps.
    pub qccsd_result: Option<VqeResult>,
    pub uccsd_result: Option<VqeResult>,
}

impl PointOutcome {
    pub fn status_label(&self) -> &'static str {
        self.status.map(PointStatus::label).unwrap_or("ok")
    }
}

/// The assembled problem for one point, before any VQE runs.
pub struct PreparedPoint {
    pub hamiltonian: PauliSum,
    pub reference: u64,
    pub excitations: ExcitationList,
    pub basis: SectorBasis,
    pub ground: SectorGroundState,
    pub e_hf: f64,
    pub e_fci: f64,
    pub overlap_hf: f64,
    pub n_active_spatial: usize,
}

pub fn load_integrals(source: &PointSource) -> qccsd_core::Result<MolecularIntegrals> {
    match source {
        PointSource::Chain { n_atoms, spacing } => {
            let geometry = Geometry::hydrogen_chain(*n_atoms, *spacing)?;
            hydrogen_mo_integrals(&geometry)
        }
        PointSource::Fcidump(path) => {
            let file = std::fs::File::open(path).map_err(Error::Io)?;
            parse_fcidump(std::io::BufReader::new(file), &path.display().to_string())
        }
    }
}

/// Build Hamiltonian, reference, excitation list, and the FCI oracle for
/// one point.
pub fn prepare_point(
    source: &PointSource,
    frozen: usize,
    removed: usize,
) -> qccsd_core::Result<PreparedPoint> {
    let mi = load_integrals(source)?;
    let space = ActiveSpace::new(frozen, removed);
    let active = freeze_core(&mi, &space)?;
    let hamiltonian = jordan_wigner(&build_hamiltonian(&mi, &space)?)?;
    let reference = hf_reference(active.n_spatial, active.n_alpha, active.n_beta)?;
    let excitations = build_excitation_list(active.n_spatial, active.n_alpha, active.n_beta)?;
    let basis = SectorBasis::spin_sector(active.n_spatial, active.n_alpha, active.n_beta)?;
    let ground = sector_ground_state(&hamiltonian, &basis)?;

    let hf_state =
        qccsd_core::StateVector::basis_state(2 * active.n_spatial, reference)?;
    let e_hf = hamiltonian.expectation(hf_state.amplitudes())?;
    let e_fci = ground.energy;
    let overlap_hf = ground.hf_overlap(&basis, reference)?;

    Ok(PreparedPoint {
        hamiltonian,
        reference,
        excitations,
        basis,
        ground,
        e_hf,
        e_fci,
        overlap_hf,
        n_active_spatial: active.n_spatial,
    })
}

pub fn initial_parameters(
    seed: &SeedParams,
    count: usize,
    previous: Option<&ParameterVector>,
) -> qccsd_core::Result<ParameterVector> {
    match seed {
        SeedParams::Zeros => Ok(ParameterVector::zeros(count)),
        SeedParams::Broadcast(v) => ParameterVector::new(vec![*v; count]),
        SeedParams::Explicit(values) => {
            if values.len() != count {
                return Err(Error::ParameterCountMismatch {
                    expected: count,
                    got: values.len(),
                });
            }
            ParameterVector::new(values.clone())
        }
        SeedParams::Previous => match previous {
            Some(p) if p.len() == count => Ok(p.clone()),
            _ => Ok(ParameterVector::zeros(count)),
        },
    }
}

/// Run the full pipeline for one point; errors fold into the row status.
pub fn evaluate_point(
    spec: &PointSpec,
    options: &PointOptions,
    seed: &SeedParams,
    warm_start: Option<&ParameterVector>,
) -> PointOutcome {
    let mut outcome = PointOutcome {
        bond_length: spec.bond_length,
        ..PointOutcome::default()
    };

    let prepared = match prepare_point(&spec.source, options.frozen, options.removed) {
        Ok(p) => p,
        Err(err) => {
            outcome.status = Some(PointStatus::ScfFailed);
            outcome.detail = Some(err.to_string());
            return outcome;
        }
    };
    outcome.e_hf = Some(prepared.e_hf);
    outcome.e_fci = Some(prepared.e_fci);
    outcome.overlap_hf = Some(prepared.overlap_hf);
    outcome.params = Some(prepared.excitations.parameter_count());

    let minimize_options = MinimizeOptions {
        energy_tolerance: options.ftol,
        max_iterations: options.max_iters,
    };

    let mut status = PointStatus::Ok;
    if options.ansatz.runs_qccsd() {
        match run_ansatz(
            &prepared,
            AnsatzKind::Qccsd,
            &minimize_options,
            seed,
            warm_start,
        ) {
            Ok(result) => {
                outcome.e_qccsd = Some(result.energy);
                outcome.iters_q = Some(result.iterations);
                outcome.converged_q = Some(result.converged);
                outcome.gates = Some(prepared.excitations.parameter_count());
                if !result.converged {
                    status = PointStatus::VqeUnconverged;
                }
                outcome.qccsd_result = Some(result);
            }
            Err(err) => {
                outcome.status = Some(PointStatus::ScfFailed);
                outcome.detail = Some(err.to_string());
                return outcome;
            }
        }
    }
    if options.ansatz.runs_uccsd() {
        match run_ansatz(
            &prepared,
            AnsatzKind::UccsdTrotter1,
            &minimize_options,
            seed,
            warm_start,
        ) {
            Ok(result) => {
                outcome.e_uccsd = Some(result.energy);
                outcome.iters_u = Some(result.iterations);
                outcome.converged_u = Some(result.converged);
                if outcome.gates.is_none() {
                    outcome.gates =
                        Some(qccsd_core::ansatz::uccsd_gate_count(&prepared.excitations));
                }
                if !result.converged {
                    status = PointStatus::VqeUnconverged;
                }
                outcome.uccsd_result = Some(result);
            }
            Err(err) => {
                outcome.status = Some(PointStatus::ScfFailed);
                outcome.detail = Some(err.to_string());
                return outcome;
            }
        }
    }
    outcome.status = Some(status);
    outcome
}

fn run_ansatz(
    prepared: &PreparedPoint,
    kind: AnsatzKind,
    options: &MinimizeOptions,
    seed: &SeedParams,
    warm_start: Option<&ParameterVector>,
) -> qccsd_core::Result<VqeResult> {
    let problem = VqeProblem::new(
        prepared.hamiltonian.clone(),
        prepared.reference,
        prepared.excitations.clone(),
        kind,
    )?;
    let start = initial_parameters(seed, problem.parameter_count(), warm_start)?;
    minimize(&problem, &start, options)
}

/// Gate-count audit for the `counts` subcommand:
/// `(parameters, exchange gates, elementary gates)`.
pub fn gate_counts(source: &PointSource, frozen: usize, removed: usize) -> qccsd_core::Result<(usize, usize, usize)> {
    let mi = load_integrals(source)?;
    let active = freeze_core(&mi, &ActiveSpace::new(frozen, removed))?;
    let ex = build_excitation_list(active.n_spatial, active.n_alpha, active.n_beta)?;
    Ok((
        ex.parameter_count(),
        ex.parameter_count(),
        decomposed_gate_count(&ex),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_point_pipeline_end_to_end() {
        let spec = PointSpec {
            bond_length: 0.735,
            source: PointSource::Chain {
                n_atoms: 2,
                spacing: 0.735,
            },
        };
        let options = PointOptions {
            ansatz: AnsatzChoice::Qccsd,
            frozen: 0,
            removed: 0,
            max_iters: 500,
            ftol: 1e-6,
        };
        let outcome = evaluate_point(&spec, &options, &SeedParams::Zeros, None);
        assert_eq!(outcome.status, Some(PointStatus::Ok));
        let err = (outcome.e_qccsd.unwrap() - outcome.e_fci.unwrap()).abs();
        assert!(err < 1e-6, "error {err}");
        assert_eq!(outcome.params, Some(3));
        assert!(outcome.overlap_hf.unwrap() > 0.9);
        assert!(outcome.e_uccsd.is_none());
    }

    #[test]
    fn failed_point_reports_status_not_panic() {
        let spec = PointSpec {
            bond_length: 1.0,
            source: PointSource::Fcidump(PathBuf::from("/nonexistent/file.fcidump")),
        };
        let options = PointOptions {
            ansatz: AnsatzChoice::Qccsd,
            frozen: 0,
            removed: 0,
            max_iters: 500,
            ftol: 1e-6,
        };
        let outcome = evaluate_point(&spec, &options, &SeedParams::Zeros, None);
        assert_eq!(outcome.status, Some(PointStatus::ScfFailed));
        assert!(outcome.detail.is_some());
        assert!(outcome.e_fci.is_none());
    }

    #[test]
    fn seed_parameter_resolution() {
        let prev = ParameterVector::new(vec![0.1, 0.2]).unwrap();
        let p = initial_parameters(&SeedParams::Previous, 2, Some(&prev)).unwrap();
        assert_eq!(p.values(), &[0.1, 0.2]);
        // size mismatch falls back to zeros
        let p = initial_parameters(&SeedParams::Previous, 3, Some(&prev)).unwrap();
        assert_eq!(p.values(), &[0.0; 3]);
        assert!(initial_parameters(&SeedParams::Explicit(vec![0.1]), 2, None).is_err());
        let p = initial_parameters(&SeedParams::Broadcast(0.5), 2, None).unwrap();
        assert_eq!(p.values(), &[0.5, 0.5]);
    }

    #[test]
    fn counts_for_h4() {
        let source = PointSource::Chain {
            n_atoms: 4,
            spacing: 1.0,
        };
        let (params, exchange, elementary) = gate_counts(&source, 0, 0).unwrap();
        assert_eq!(params, 26);
        assert_eq!(exchange, 26);
        assert_eq!(elementary, 3 * 8 + 11 * 18);
    }
}
