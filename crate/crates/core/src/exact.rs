//! Particle-number / S_z-sector exact diagonalization.
//!
//! The qubit Hamiltonian of a number- and spin-conserving molecular problem
//! never mixes occupation sectors, so the ground state can be found inside
//! the tiny `(n_alpha, n_beta)` block instead of the full 2^n space. The
//! sector projection also doubles as a symmetry check: any accumulated
//! amplitude leaving the sector aborts the build.

use std::collections::BTreeMap;
use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::pauli::PauliSum;
use crate::{Error, Result};

/// Above this dimension the ground pair comes from Lanczos instead of a
/// dense eigensolve.
pub const DENSE_DIMENSION_LIMIT: usize = 4000;

/// Eigenvalues within this of the ground energy count as degenerate for
/// the overlap diagnostic.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

const LEAK_TOLERANCE: f64 = 1e-10;
const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// An ordered list of occupation bitmasks spanning one symmetry sector.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    n_qubits: usize,
    n_alpha: usize,
    n_beta: usize,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
}

/// Enumerate k-bit subsets of an m-bit word in increasing numeric order.
fn bit_subsets(m: usize, k: usize) -> Vec<u64> {
    if k > m {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let limit = 1u64 << m;
    let mut v = (1u64 << k) - 1;
    while v < limit {
        out.push(v);
        // Gosper's hack: next higher integer with the same popcount
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

impl SectorBasis {
    /// The `(n_alpha, n_beta)` spin sector over `2 * n_active_spatial`
    /// qubits, alpha block low.
    pub fn spin_sector(n_active_spatial: usize, n_alpha: usize, n_beta: usize) -> Result<Self> {
        if n_alpha > n_active_spatial || n_beta > n_active_spatial {
            return Err(Error::TooManyElectrons {
                electrons: n_alpha + n_beta,
                modes: 2 * n_active_spatial,
            });
        }
        let m = n_active_spatial;
        let mut states = Vec::new();
        for beta in bit_subsets(m, n_beta) {
            for alpha in bit_subsets(m, n_alpha) {
                states.push(alpha | (beta << m));
            }
        }
        states.sort_unstable();
        Ok(Self::from_sorted(2 * m, n_alpha, n_beta, states))
    }

    /// All basis states with a fixed total particle number.
    pub fn total_number(n_qubits: usize, n_particles: usize) -> Result<Self> {
        if n_particles > n_qubits {
            return Err(Error::TooManyElectrons {
                electrons: n_particles,
                modes: n_qubits,
            });
        }
        let states = bit_subsets(n_qubits, n_particles);
        Ok(Self::from_sorted(n_qubits, n_particles, 0, states))
    }

    /// Explicit state list (e.g. a frozen-core-constrained subspace).
    pub fn from_states(n_qubits: usize, mut states: Vec<u64>) -> Self {
        states.sort_unstable();
        states.dedup();
        Self::from_sorted(n_qubits, 0, 0, states)
    }

    fn from_sorted(n_qubits: usize, n_alpha: usize, n_beta: usize, states: Vec<u64>) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect();
        Self {
            n_qubits,
            n_alpha,
            n_beta,
            states,
            index,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn position(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Project the Hamiltonian onto the sector. Amplitude accumulated on
    /// any state outside the sector above tolerance means the operator is
    /// not sector-preserving and the build fails.
    pub fn project_matrix(&self, hamiltonian: &PauliSum) -> Result<DMatrix<Complex64>> {
        if hamiltonian.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                left: hamiltonian.n_qubits(),
                right: self.n_qubits,
            });
        }
        let dim = self.len();
        let mut matrix = DMatrix::zeros(dim, dim);
        for (col, &state) in self.states.iter().enumerate() {
            let mut leaked: BTreeMap<u64, Complex64> = BTreeMap::new();
            for term in hamiltonian.iter() {
                let (target, amplitude) = term.apply_to_basis_state(state);
                match self.position(target) {
                    Some(row) => matrix[(row, col)] += amplitude,
                    None => *leaked.entry(target).or_insert(Complex64::new(0.0, 0.0)) += amplitude,
                }
            }
            for (mask, amplitude) in leaked {
                if amplitude.norm() > LEAK_TOLERANCE {
                    return Err(Error::SectorLeakage {
                        n_alpha: self.n_alpha,
                        n_beta: self.n_beta,
                        mask,
                        amplitude: amplitude.norm(),
                    });
                }
            }
        }
        Ok(matrix)
    }

    /// Projection P H P without the leakage check, for restricting to a
    /// subspace that is not a symmetry sector (e.g. frozen-occupation
    /// determinant lists). Couplings out of the subspace are dropped.
    pub fn restrict_matrix(&self, hamiltonian: &PauliSum) -> Result<DMatrix<Complex64>> {
        if hamiltonian.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                left: hamiltonian.n_qubits(),
                right: self.n_qubits,
            });
        }
        let dim = self.len();
        let mut matrix = DMatrix::zeros(dim, dim);
        for (col, &state) in self.states.iter().enumerate() {
            for term in hamiltonian.iter() {
                let (target, amplitude) = term.apply_to_basis_state(state);
                if let Some(row) = self.position(target) {
                    matrix[(row, col)] += amplitude;
                }
            }
        }
        Ok(matrix)
    }
}

/// Ground eigenpair of a sector-projected Hamiltonian.
#[derive(Debug, Clone)]
pub struct SectorGroundState {
    /// Ground energy, Hartree.
    pub energy: f64,
    /// Ground vector in sector-basis order.
    pub amplitudes: Vec<Complex64>,
    /// Orthonormal partners within [`DEGENERACY_TOLERANCE`] of the ground
    /// energy, when the ground space is degenerate.
    pub degenerate_partners: Vec<Vec<Complex64>>,
}

impl SectorGroundState {
    pub fn is_degenerate(&self) -> bool {
        !self.degenerate_partners.is_empty()
    }

    /// Squared overlap of the basis state `hf_mask` with the ground space:
    /// `|<hf|ground>|^2`, maximized over the degenerate subspace.
    pub fn hf_overlap(&self, basis: &SectorBasis, hf_mask: u64) -> Result<f64> {
        let pos = basis
            .position(hf_mask)
            .ok_or(Error::HfOutsideSector { mask: hf_mask })?;
        let mut overlap = self.amplitudes[pos].norm_sqr();
        for partner in &self.degenerate_partners {
            overlap += partner[pos].norm_sqr();
        }
        Ok(overlap.clamp(0.0, 1.0))
    }
}

/// Lowest eigenpair of the sector-projected Hamiltonian: dense below
/// [`DENSE_DIMENSION_LIMIT`], Lanczos with full reorthogonalization above.
pub fn sector_ground_state(
    hamiltonian: &PauliSum,
    basis: &SectorBasis,
) -> Result<SectorGroundState> {
    sector_ground_state_with_dense_limit(hamiltonian, basis, DENSE_DIMENSION_LIMIT)
}

/// Same as [`sector_ground_state`] with an explicit dense/iterative
/// crossover, mostly so tests can force the Lanczos path on small systems.
pub fn sector_ground_state_with_dense_limit(
    hamiltonian: &PauliSum,
    basis: &SectorBasis,
    dense_limit: usize,
) -> Result<SectorGroundState> {
    let matrix = basis.project_matrix(hamiltonian)?;
    let dim = matrix.nrows();
    if dim == 0 {
        return Err(Error::InvalidActiveSpace("empty sector basis".into()));
    }

    let hermiticity = (&matrix - matrix.adjoint())
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if hermiticity > 1e-10 {
        return Err(Error::InconsistentIntegrals(format!(
            "projected Hamiltonian not Hermitian (deviation {hermiticity:.3e})"
        )));
    }

    let mut ground = if dim <= dense_limit {
        dense_ground(&matrix)
    } else {
        lanczos_ground(&matrix)?
    };
    refine_ground(&matrix, &mut ground);

    // eigen-residual guard on every returned pair
    for (energy, vector) in std::iter::once((ground.energy, &ground.amplitudes))
        .chain(ground.degenerate_partners.iter().map(|v| (ground.energy, v)))
    {
        let v = DVector::from_column_slice(vector);
        let residual = (&matrix * &v - &v * Complex64::new(energy, 0.0)).norm();
        if residual > RESIDUAL_TOLERANCE {
            return Err(Error::EigenNotConverged {
                residual,
                iterations: 0,
            });
        }
    }
    Ok(ground)
}

/// Push each returned eigenpair's residual down to roundoff with shifted
/// inverse iteration; eigensolver output can sit just above the residual
/// contract on ill-scaled sectors.
fn refine_ground(matrix: &DMatrix<Complex64>, ground: &mut SectorGroundState) {
    let refine = |energy: f64, vector: &mut DVector<Complex64>, deflate: &[DVector<Complex64>]| -> f64 {
        let mut e = energy;
        for _ in 0..3 {
            let residual = (matrix * &*vector - &*vector * Complex64::new(e, 0.0)).norm();
            if residual < 1e-12 {
                break;
            }
            let dim = matrix.nrows();
            let mut shifted = matrix.clone();
            // tiny offset keeps the factorization from hitting an exactly
            // singular pivot at a converged eigenvalue
            let shift = Complex64::new(e - 1e-12 * (1.0 + e.abs()), 0.0);
            for i in 0..dim {
                shifted[(i, i)] -= shift;
            }
            let Some(mut w) = shifted.lu().solve(&*vector) else {
                break;
            };
            for d in deflate {
                let proj = d.dotc(&w);
                w -= d * proj;
            }
            let norm = w.norm();
            if norm < 1e-300 {
                break;
            }
            *vector = w / Complex64::new(norm, 0.0);
            e = (vector.adjoint() * matrix * &*vector)[(0, 0)].re;
        }
        e
    };

    let mut primary = DVector::from_column_slice(&ground.amplitudes);
    let energy = refine(ground.energy, &mut primary, &[]);
    let mut kept = vec![primary.clone()];
    ground.energy = energy;
    ground.amplitudes = primary.iter().copied().collect();

    for partner in &mut ground.degenerate_partners {
        let mut v = DVector::from_column_slice(partner);
        for d in &kept {
            let proj = d.dotc(&v);
            v -= d * proj;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= Complex64::new(norm, 0.0);
        }
        refine(ground.energy, &mut v, &kept);
        *partner = v.iter().copied().collect();
        kept.push(v);
    }
}

fn dense_ground(matrix: &DMatrix<Complex64>) -> SectorGroundState {
    let eig = matrix.clone().symmetric_eigen();
    let dim = matrix.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap()
            .then(a.cmp(&b))
    });
    let ground_idx = order[0];
    let energy = eig.eigenvalues[ground_idx];
    let amplitudes: Vec<Complex64> = eig.eigenvectors.column(ground_idx).iter().copied().collect();
    let mut degenerate_partners = Vec::new();
    for &i in order.iter().skip(1) {
        if eig.eigenvalues[i] - energy < DEGENERACY_TOLERANCE {
            degenerate_partners.push(eig.eigenvectors.column(i).iter().copied().collect());
        } else {
            break;
        }
    }
    SectorGroundState {
        energy,
        amplitudes,
        degenerate_partners,
    }
}

/// Lanczos with full reorthogonalization, deflating until the ground space
/// is exhausted of near-degenerate partners.
fn lanczos_ground(matrix: &DMatrix<Complex64>) -> Result<SectorGroundState> {
    let dim = matrix.nrows();
    let mut found: Vec<(f64, DVector<Complex64>)> = Vec::new();
    loop {
        let deflate: Vec<&DVector<Complex64>> = found.iter().map(|(_, v)| v).collect();
        let (energy, vector) = lanczos_lowest(matrix, &deflate)?;
        match found.first() {
            Some(&(ground_energy, _)) if energy - ground_energy >= DEGENERACY_TOLERANCE => {
                break;
            }
            _ => found.push((energy, vector)),
        }
        if found.len() >= 4 || found.len() == dim {
            break;
        }
    }
    let (energy, primary) = found.remove(0);
    Ok(SectorGroundState {
        energy,
        amplitudes: primary.iter().copied().collect(),
        degenerate_partners: found
            .into_iter()
            .map(|(_, v)| v.iter().copied().collect())
            .collect(),
    })
}

fn lanczos_lowest(
    matrix: &DMatrix<Complex64>,
    deflate: &[&DVector<Complex64>],
) -> Result<(f64, DVector<Complex64>)> {
    let dim = matrix.nrows();
    let max_iter = 400.min(dim + 2);

    // deterministic pseudo-random start vector
    let mut seed = 0x2545F4914F6CDD1Du64;
    let mut start = DVector::from_fn(dim, |_, _| {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        Complex64::new(((seed >> 11) as f64) / (1u64 << 53) as f64 - 0.5, 0.0)
    });
    for d in deflate {
        let proj = d.dotc(&start);
        start -= *d * proj;
    }
    let norm = start.norm();
    if norm < 1e-12 {
        return Err(Error::EigenNotConverged {
            residual: norm,
            iterations: 0,
        });
    }
    start /= Complex64::new(norm, 0.0);

    let mut vectors: Vec<DVector<Complex64>> = vec![start];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    for iteration in 0..max_iter {
        let v = vectors.last().unwrap().clone();
        let mut w = matrix * &v;
        let alpha = v.dotc(&w).re;
        alphas.push(alpha);
        // full reorthogonalization against the Krylov basis and deflated
        // vectors, twice for numerical safety
        for _ in 0..2 {
            for u in &vectors {
                let proj = u.dotc(&w);
                w -= u * proj;
            }
            for d in deflate {
                let proj = d.dotc(&w);
                w -= *d * proj;
            }
        }
        let beta = w.norm();

        // Ritz estimate for the lowest pair
        let k = alphas.len();
        let mut tri = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            tri[(i, i)] = alphas[i];
            if i + 1 < k {
                tri[(i, i + 1)] = betas.get(i).copied().unwrap_or(0.0);
                tri[(i + 1, i)] = tri[(i, i + 1)];
            }
        }
        let eig = tri.symmetric_eigen();
        let mut lowest = 0;
        for i in 1..k {
            if eig.eigenvalues[i] < eig.eigenvalues[lowest] {
                lowest = i;
            }
        }
        let ritz_residual = beta * eig.eigenvectors[(k - 1, lowest)].abs();

        if ritz_residual < 1e-11 || beta < 1e-13 || iteration + 1 == max_iter {
            let mut ritz = DVector::from_element(dim, Complex64::new(0.0, 0.0));
            for (i, u) in vectors.iter().enumerate() {
                ritz += u * Complex64::new(eig.eigenvectors[(i, lowest)], 0.0);
            }
            let norm = ritz.norm();
            ritz /= Complex64::new(norm, 0.0);
            let energy = eig.eigenvalues[lowest];
            let residual = (matrix * &ritz - &ritz * Complex64::new(energy, 0.0)).norm();
            if residual > RESIDUAL_TOLERANCE {
                if iteration + 1 == max_iter {
                    return Err(Error::EigenNotConverged {
                        residual,
                        iterations: iteration + 1,
                    });
                }
            } else {
                return Ok((energy, ritz));
            }
        }
        if beta < 1e-13 {
            // invariant subspace exhausted; the Ritz pair above either
            // returned or the residual check failed
            return Err(Error::EigenNotConverged {
                residual: beta,
                iterations: iteration + 1,
            });
        }
        betas.push(beta);
        vectors.push(w / Complex64::new(beta, 0.0));
    }
    Err(Error::EigenNotConverged {
        residual: f64::NAN,
        iterations: max_iter,
    })
}
