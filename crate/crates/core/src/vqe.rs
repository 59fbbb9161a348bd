//! The variational loop: energy objective, finite-difference gradients,
//! and a box-constrained quasi-Newton minimizer.
//!
//! The stopping rule is the experimental protocol's: parameters start at
//! zero (the Hartree-Fock point), live in `[-pi, pi]`, and iteration ends
//! when the energy change between accepted steps drops below 1e-6 Hartree
//! or after 500 accepted steps. Everything is deterministic; identical
//! inputs give bit-identical results.

use nalgebra::{DMatrix, DVector};

use crate::ansatz::{qccsd_circuit, uccsd_trotter_circuit, ExcitationList, ParameterVector};
use crate::pauli::PauliSum;
use crate::sim::StateVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnsatzKind {
    Qccsd,
    UccsdTrotter1,
}

/// One variational problem instance.
#[derive(Debug, Clone)]
pub struct VqeProblem {
    hamiltonian: PauliSum,
    reference: u64,
    excitations: ExcitationList,
    ansatz: AnsatzKind,
}

/// Optimizer knobs; the defaults are the experimental protocol's.
#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    /// Stop when |dE| between accepted iterates falls below this (Hartree).
    pub energy_tolerance: f64,
    /// Accepted-iteration cap.
    pub max_iterations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            energy_tolerance: 1e-6,
            max_iterations: 500,
        }
    }
}

/// Per-accepted-iteration convergence record.
#[derive(Debug, Clone, Copy)]
pub struct IterationTrace {
    pub iteration: usize,
    pub energy: f64,
    pub gradient_norm: f64,
    pub evaluations: usize,
}

/// Minimization outcome.
#[derive(Debug, Clone)]
pub struct VqeResult {
    /// Final energy, Hartree; equals `objective(parameters)` exactly.
    pub energy: f64,
    pub parameters: ParameterVector,
    /// Accepted optimizer iterations.
    pub iterations: usize,
    pub converged: bool,
    /// Energy at the start point followed by each accepted iterate;
    /// non-increasing.
    pub energy_history: Vec<f64>,
    /// Total objective evaluations, line search and gradients included.
    pub evaluations: usize,
    pub trace: Vec<IterationTrace>,
}

/// Finite-difference step, radians.
pub const GRADIENT_STEP: f64 = 1e-4;

const BOUND: f64 = std::f64::consts::PI;

impl VqeProblem {
    pub fn new(
        hamiltonian: PauliSum,
        reference: u64,
        excitations: ExcitationList,
        ansatz: AnsatzKind,
    ) -> Result<Self> {
        if hamiltonian.n_qubits() != excitations.n_qubits {
            return Err(Error::SizeMismatch {
                left: hamiltonian.n_qubits(),
                right: excitations.n_qubits,
            });
        }
        if reference >= 1u64 << excitations.n_qubits {
            return Err(Error::MaskOutOfRange {
                mask: reference,
                n_qubits: excitations.n_qubits,
            });
        }
        let electrons = excitations.n_alpha + excitations.n_beta;
        if reference.count_ones() as usize != electrons {
            return Err(Error::TooManyElectrons {
                electrons: reference.count_ones() as usize,
                modes: electrons,
            });
        }
        Ok(Self {
            hamiltonian,
            reference,
            excitations,
            ansatz,
        })
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn reference(&self) -> u64 {
        self.reference
    }

    pub fn excitations(&self) -> &ExcitationList {
        &self.excitations
    }

    pub fn ansatz(&self) -> AnsatzKind {
        self.ansatz
    }

    pub fn parameter_count(&self) -> usize {
        self.excitations.parameter_count()
    }

    /// Ansatz circuit for one parameter vector.
    pub fn circuit(&self, params: &ParameterVector) -> Result<Vec<crate::sim::Gate>> {
        match self.ansatz {
            AnsatzKind::Qccsd => qccsd_circuit(&self.excitations, params),
            AnsatzKind::UccsdTrotter1 => uccsd_trotter_circuit(&self.excitations, params),
        }
    }

    /// The state the ansatz prepares from the reference.
    pub fn prepare_state(&self, params: &ParameterVector) -> Result<StateVector> {
        let mut psi = StateVector::basis_state(self.excitations.n_qubits, self.reference)?;
        psi.run_circuit(&self.circuit(params)?)?;
        Ok(psi)
    }

    /// `<psi(theta)| H |psi(theta)>`, Hartree.
    pub fn objective(&self, params: &ParameterVector) -> Result<f64> {
        let psi = self.prepare_state(params)?;
        self.hamiltonian.expectation(psi.amplitudes())
    }

    /// Central finite differences at [`GRADIENT_STEP`]; components whose
    /// stencil would leave the box fall back to a one-sided difference.
    pub fn gradient(&self, params: &ParameterVector) -> Result<Vec<f64>> {
        self.gradient_with_step(params, GRADIENT_STEP)
    }

    /// Finite differences with an explicit step (step-halving checks).
    pub fn gradient_with_step(&self, params: &ParameterVector, h: f64) -> Result<Vec<f64>> {
        let mut grad = Vec::with_capacity(params.len());
        let values = params.values();
        for i in 0..values.len() {
            let mut plus = values.to_vec();
            let mut minus = values.to_vec();
            let up_ok = values[i] + h <= BOUND;
            let down_ok = values[i] - h >= -BOUND;
            let (num, den) = match (up_ok, down_ok) {
                (true, true) => {
                    plus[i] += h;
                    minus[i] -= h;
                    (
                        self.objective(&ParameterVector::new(plus)?)?
                            - self.objective(&ParameterVector::new(minus)?)?,
                        2.0 * h,
                    )
                }
                (true, false) => {
                    plus[i] += h;
                    (
                        self.objective(&ParameterVector::new(plus)?)?
                            - self.objective(params)?,
                        h,
                    )
                }
                (false, true) => {
                    minus[i] -= h;
                    (
                        self.objective(params)?
                            - self.objective(&ParameterVector::new(minus)?)?,
                        h,
                    )
                }
                (false, false) => (0.0, 1.0),
            };
            grad.push(num / den);
        }
        Ok(grad)
    }
}

fn clamp_to_box(x: &DVector<f64>) -> DVector<f64> {
    x.map(|v| v.clamp(-BOUND, BOUND))
}

/// Box-constrained quasi-Newton descent: BFGS-updated search direction,
/// projection onto `[-pi, pi]^n`, backtracking Armijo line search.
///
/// Returns the best accepted point when the iteration budget runs out
/// (`converged = false`); converged means the accepted-step energy change
/// fell below tolerance or no descent direction remains.
pub fn minimize(
    problem: &VqeProblem,
    start: &ParameterVector,
    options: &MinimizeOptions,
) -> Result<VqeResult> {
    let n = problem.parameter_count();
    if start.len() != n {
        return Err(Error::ParameterCountMismatch {
            expected: n,
            got: start.len(),
        });
    }

    fn eval_objective(
        problem: &VqeProblem,
        x: &DVector<f64>,
        iteration: usize,
        count: &mut usize,
    ) -> Result<f64> {
        *count += 1;
        let value = problem.objective(&ParameterVector::new(x.iter().copied().collect())?)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective { iteration });
        }
        Ok(value)
    }

    fn eval_gradient(
        problem: &VqeProblem,
        x: &DVector<f64>,
        count: &mut usize,
    ) -> Result<DVector<f64>> {
        let params = ParameterVector::new(x.iter().copied().collect())?;
        let g = problem.gradient(&params)?;
        *count += 2 * g.len(); // two objective calls per stencil component
        Ok(DVector::from_vec(g))
    }

    let mut evaluations = 0usize;
    let mut x = DVector::from_column_slice(start.values());
    let mut fx = eval_objective(problem, &x, 0, &mut evaluations)?;
    let mut history = vec![fx];
    let mut trace = Vec::new();

    if n == 0 {
        return Ok(VqeResult {
            energy: fx,
            parameters: ParameterVector::new(Vec::new())?,
            iterations: 0,
            converged: true,
            energy_history: history,
            evaluations,
            trace,
        });
    }

    let mut g = eval_gradient(problem, &x, &mut evaluations)?;
    let mut h_inv: DMatrix<f64> = DMatrix::identity(n, n);
    let mut converged = false;
    let mut iterations = 0usize;

    while iterations < options.max_iterations {
        let mut tried_reset = false;
        let step_result = loop {
            let mut direction = -(&h_inv * &g);
            if direction.dot(&g) >= 0.0 {
                // curvature estimate went bad; restart from steepest descent
                h_inv = DMatrix::identity(n, n);
                direction = -g.clone();
                tried_reset = true;
            }

            // backtracking with projection
            let mut step = 1.0f64;
            let mut accepted: Option<(DVector<f64>, f64)> = None;
            while step > 1e-14 {
                let candidate = clamp_to_box(&(&x + &direction * step));
                let displacement = &candidate - &x;
                let predicted = g.dot(&displacement);
                if predicted < 0.0 {
                    let f_candidate =
                        eval_objective(problem, &candidate, iterations + 1, &mut evaluations)?;
                    if f_candidate <= fx + 1e-4 * predicted {
                        accepted = Some((candidate, f_candidate));
                        break;
                    }
                }
                step *= 0.5;
            }

            // A sub-tolerance step out of a stale quasi-Newton direction is
            // not evidence of stationarity; reject it once and retry the
            // line search along the raw gradient before accepting.
            if let Some((_, f_candidate)) = &accepted {
                if fx - f_candidate < options.energy_tolerance && !tried_reset {
                    tried_reset = true;
                    h_inv = DMatrix::identity(n, n);
                    continue;
                }
            }
            break accepted;
        };

        let Some((x_new, f_new)) = step_result else {
            // no descent step exists: (projected) stationary point
            converged = true;
            break;
        };

        iterations += 1;
        history.push(f_new);
        let delta = fx - f_new;

        let g_new = eval_gradient(problem, &x_new, &mut evaluations)?;
        trace.push(IterationTrace {
            iteration: iterations,
            energy: f_new,
            gradient_norm: g_new.norm(),
            evaluations,
        });

        // BFGS inverse-Hessian update when curvature is usable
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 {
            let rho = 1.0 / sy;
            let identity = DMatrix::<f64>::identity(n, n);
            let left = &identity - &s * y.transpose() * rho;
            let right = &identity - &y * s.transpose() * rho;
            h_inv = &left * h_inv * &right + &s * s.transpose() * rho;
        }

        x = x_new;
        fx = f_new;
        g = g_new;

        if delta.abs() < options.energy_tolerance {
            converged = true;
            break;
        }
    }

    Ok(VqeResult {
        energy: fx,
        parameters: ParameterVector::new(x.iter().copied().collect())?,
        iterations,
        converged,
        energy_history: history,
        evaluations,
        trace,
    })
}

/// Convergence trace as CSV: `iteration,energy,grad_norm,evals`.
pub fn trace_to_csv(result: &VqeResult) -> String {
    let mut out = String::from("iteration,energy,grad_norm,evals\n");
    for row in &result.trace {
        out.push_str(&format!(
            "{},{:.12e},{:.6e},{}\n",
            row.iteration, row.energy, row.gradient_norm, row.evaluations
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::build_excitation_list;
    use crate::exact::{sector_ground_state, SectorBasis};
    use crate::fermion::{build_hamiltonian, hf_reference, jordan_wigner, ActiveSpace};
    use crate::integrals::{hydrogen_mo_integrals, Geometry};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h_chain_problem(n: usize, spacing: f64, ansatz: AnsatzKind) -> (VqeProblem, f64, f64) {
        let geom = Geometry::hydrogen_chain(n, spacing).unwrap();
        let mi = hydrogen_mo_integrals(&geom).unwrap();
        let h = jordan_wigner(&build_hamiltonian(&mi, &ActiveSpace::full()).unwrap()).unwrap();
        let basis = SectorBasis::spin_sector(mi.n_spatial, mi.n_alpha, mi.n_beta).unwrap();
        let e_fci = sector_ground_state(&h, &basis).unwrap().energy;
        let reference = hf_reference(mi.n_spatial, mi.n_alpha, mi.n_beta).unwrap();
        let excitations = build_excitation_list(mi.n_spatial, mi.n_alpha, mi.n_beta).unwrap();
        let scf = mi.scf_energy.unwrap();
        (
            VqeProblem::new(h, reference, excitations, ansatz).unwrap(),
            e_fci,
            scf,
        )
    }

    #[test]
    fn zero_parameters_give_hf_energy() {
        for ansatz in [AnsatzKind::Qccsd, AnsatzKind::UccsdTrotter1] {
            let (problem, _, scf) = h_chain_problem(2, 0.735, ansatz);
            let zeros = ParameterVector::zeros(problem.parameter_count());
            let e0 = problem.objective(&zeros).unwrap();
            assert_abs_diff_eq!(e0, scf, epsilon = 1e-8);
        }
    }

    #[test]
    fn variational_bound_holds_for_random_parameters() {
        let (problem, e_fci, _) = h_chain_problem(2, 1.1, AnsatzKind::Qccsd);
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..25 {
            let values: Vec<f64> = (0..problem.parameter_count())
                .map(|_| rng.gen_range(-3.1..3.1))
                .collect();
            let e = problem
                .objective(&ParameterVector::new(values).unwrap())
                .unwrap();
            assert!(e >= e_fci - 1e-10);
        }
    }

    #[test]
    fn h2_double_parameter_sweep_reaches_fci() {
        let (problem, e_fci, _) = h_chain_problem(2, 0.735, AnsatzKind::Qccsd);
        let n = problem.parameter_count();
        let mut best = f64::INFINITY;
        let mut previous: Option<f64> = None;
        let steps = 6300;
        for k in 0..=steps {
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * (k as f64) / (steps as f64);
            let mut values = vec![0.0; n];
            values[n - 1] = theta.clamp(-BOUND, BOUND);
            let e = problem
                .objective(&ParameterVector::new(values).unwrap())
                .unwrap();
            if let Some(prev) = previous {
                // smoothness: bounded slope on the sweep
                assert!((e - prev).abs() < 5.0 * (2.0 * std::f64::consts::PI / steps as f64));
            }
            previous = Some(e);
            best = best.min(e);
        }
        assert!(best >= e_fci - 1e-10);
        assert!(best - e_fci < 1e-6, "sweep minimum {best} vs FCI {e_fci}");
    }

    #[test]
    fn gradient_step_halving_self_consistency() {
        let (problem, _, _) = h_chain_problem(2, 0.9, AnsatzKind::Qccsd);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let values: Vec<f64> = (0..problem.parameter_count())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let params = ParameterVector::new(values).unwrap();
        let coarse = problem.gradient(&params).unwrap();
        let fine = problem.gradient_with_step(&params, 1e-5).unwrap();
        for (a, b) in coarse.iter().zip(&fine) {
            let scale = b.abs().max(1e-6);
            assert!(
                (a - b).abs() / scale < 1e-3,
                "gradient step sensitivity: {a} vs {b}"
            );
        }
    }

    #[test]
    fn gradient_vanishes_at_optimum() {
        // one-parameter problem: only the mixed double of H2
        let geom = Geometry::hydrogen_chain(2, 0.735).unwrap();
        let mi = hydrogen_mo_integrals(&geom).unwrap();
        let h = jordan_wigner(&build_hamiltonian(&mi, &ActiveSpace::full()).unwrap()).unwrap();
        let mut excitations = build_excitation_list(2, 1, 1).unwrap();
        excitations.singles.clear();
        let reference = hf_reference(2, 1, 1).unwrap();
        let problem = VqeProblem::new(h, reference, excitations, AnsatzKind::Qccsd).unwrap();

        // drive to the exact optimum, well past the protocol tolerance
        let result = minimize(
            &problem,
            &ParameterVector::zeros(1),
            &MinimizeOptions {
                energy_tolerance: 1e-13,
                max_iterations: 500,
            },
        )
        .unwrap();
        let grad = problem.gradient(&result.parameters).unwrap();
        assert!(grad[0].abs() < 1e-6, "gradient component {}", grad[0]);
    }

    #[test]
    fn brillouin_condition_kills_single_gradients() {
        // RHF orbitals: <HF|H|singly excited> = 0, so every single-only
        // gradient component vanishes at the origin
        let geom = Geometry::hydrogen_chain(4, 1.0).unwrap();
        let mi = hydrogen_mo_integrals(&geom).unwrap();
        let h = jordan_wigner(&build_hamiltonian(&mi, &ActiveSpace::full()).unwrap()).unwrap();
        let reference = hf_reference(4, 2, 2).unwrap();
        let mut excitations = build_excitation_list(4, 2, 2).unwrap();
        excitations.doubles.clear();
        let problem =
            VqeProblem::new(h.clone(), reference, excitations.clone(), AnsatzKind::Qccsd).unwrap();
        let grad = problem
            .gradient(&ParameterVector::zeros(problem.parameter_count()))
            .unwrap();
        for component in &grad {
            assert!(component.abs() < 1e-6, "Brillouin violation: {component}");
        }

        // matrix-element oracle: the sector matrix couples HF to no single
        let basis = SectorBasis::spin_sector(4, 2, 2).unwrap();
        let matrix = basis.project_matrix(&h).unwrap();
        let hf_pos = basis.position(reference).unwrap();
        for s in &excitations.singles {
            let excited = reference ^ (1u64 << s.occ) ^ (1u64 << s.virt);
            let pos = basis.position(excited).unwrap();
            assert!(
                matrix[(pos, hf_pos)].norm() < 1e-8,
                "nonzero single coupling {}",
                matrix[(pos, hf_pos)].norm()
            );
        }
    }

    #[test]
    fn h2_minimize_reaches_fci_within_protocol_tolerance() {
        for ansatz in [AnsatzKind::Qccsd, AnsatzKind::UccsdTrotter1] {
            let (problem, e_fci, _) = h_chain_problem(2, 0.735, ansatz);
            let result = minimize(
                &problem,
                &ParameterVector::zeros(problem.parameter_count()),
                &MinimizeOptions::default(),
            )
            .unwrap();
            assert!(result.converged);
            assert!(
                (result.energy - e_fci).abs() < 1e-6,
                "{ansatz:?}: {} vs {}",
                result.energy,
                e_fci
            );
            assert!(result.energy >= e_fci - 1e-10);
        }
    }

    #[test]
    fn zero_excitation_problem_returns_hf_immediately() {
        let geom = Geometry::hydrogen_chain(2, 0.8).unwrap();
        let mi = hydrogen_mo_integrals(&geom).unwrap();
        // freeze the lone occupied orbital: nothing left to vary
        let space = ActiveSpace::new(1, 0);
        let h = jordan_wigner(&build_hamiltonian(&mi, &space).unwrap()).unwrap();
        let excitations = build_excitation_list(1, 0, 0).unwrap();
        let problem = VqeProblem::new(h, 0, excitations, AnsatzKind::Qccsd).unwrap();
        let result = minimize(
            &problem,
            &ParameterVector::zeros(0),
            &MinimizeOptions::default(),
        )
        .unwrap();
        assert_eq!(result.iterations, 0);
        assert!(result.converged);
        assert_eq!(result.energy_history.len(), 1);
    }

    #[test]
    fn history_monotone_and_result_reproducible() {
        let (problem, e_fci, _) = h_chain_problem(4, 1.0, AnsatzKind::Qccsd);
        let start = ParameterVector::zeros(problem.parameter_count());
        let options = MinimizeOptions::default();
        let a = minimize(&problem, &start, &options).unwrap();
        let b = minimize(&problem, &start, &options).unwrap();

        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
        for (x, y) in a.parameters.values().iter().zip(b.parameters.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }

        for w in a.energy_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(a.converged);
        assert_abs_diff_eq!(
            a.energy,
            problem.objective(&a.parameters).unwrap(),
            epsilon = 1e-12
        );
        // the experimental accuracy scale for H4
        assert!(
            (a.energy - e_fci).abs() <= 2e-3,
            "H4 error {}",
            (a.energy - e_fci).abs()
        );
        assert!(a.energy >= e_fci - 1e-10);
    }

    #[test]
    fn trace_csv_shape() {
        let (problem, _, _) = h_chain_problem(2, 0.735, AnsatzKind::Qccsd);
        let result = minimize(
            &problem,
            &ParameterVector::zeros(problem.parameter_count()),
            &MinimizeOptions::default(),
        )
        .unwrap();
        let csv = trace_to_csv(&result);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "iteration,energy,grad_norm,evals");
        assert_eq!(csv.lines().count(), result.trace.len() + 1);
    }
}
