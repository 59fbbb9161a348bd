//! Dense statevector simulator.
//!
//! Gates are applied in place by partitioning the 2^n amplitudes into the
//! groups a gate actually mixes; no gate matrix is materialized during
//! application. For multi-qubit gates the first-listed qubit is the most
//! significant *local* bit, so the exchange gates read exactly like their
//! defining matrices: `ExchangeSingle` mixes local |01> and |10>,
//! `ExchangeDouble` mixes local |0101> (index 5) and |1010> (index 10).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::PauliTerm;
use crate::{Error, Result};

/// A 2^n-amplitude pure state, little-endian basis indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// One parameterized gate on explicit qubit indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Particle-preserving exchange between two qubits: leaves |00> and |11>
    /// alone and rotates the single-occupation pair,
    /// |10> -> cos(theta)|10> - sin(theta)|01>.
    ExchangeSingle { qubits: [usize; 2], theta: f64 },
    /// Four-qubit exchange: rotates |1010> <-> |0101| and fixes every other
    /// basis state, |1010> -> cos(theta)|1010> - sin(theta)|0101>.
    ExchangeDouble { qubits: [usize; 4], theta: f64 },
    /// Single-qubit rotation exp(-i angle Y / 2).
    Ry { qubit: usize, angle: f64 },
    /// Pauli X.
    PauliX { qubit: usize },
    /// Controlled NOT.
    Cnot { control: usize, target: usize },
    /// Ry on `target` applied when every control qubit is |1>.
    ControlledRy {
        controls: Vec<usize>,
        target: usize,
        angle: f64,
    },
    /// exp(i * angle * P) for a Pauli string P; the term must carry a unit
    /// coefficient (use [`Gate::pauli_exponential`] to fold a real one).
    PauliExponential { pauli: PauliTerm, angle: f64 },
}

impl Gate {
    /// Build a Pauli-exponential gate, folding the term's real coefficient
    /// into the angle. Complex coefficients would not generate a unitary.
    pub fn pauli_exponential(pauli: PauliTerm, angle: f64) -> Result<Gate> {
        let c = pauli.coefficient();
        if c.im.abs() > 1e-14 {
            return Err(Error::NonRealGenerator { re: c.re, im: c.im });
        }
        Ok(Gate::PauliExponential {
            angle: angle * c.re,
            pauli: pauli.unit(),
        })
    }

    /// Qubit indices the gate touches, in listed order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::ExchangeSingle { qubits, .. } => qubits.to_vec(),
            Gate::ExchangeDouble { qubits, .. } => qubits.to_vec(),
            Gate::Ry { qubit, .. } | Gate::PauliX { qubit } => vec![*qubit],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::ControlledRy {
                controls, target, ..
            } => {
                let mut v = controls.clone();
                v.push(*target);
                v
            }
            Gate::PauliExponential { pauli, .. } => {
                let support = pauli.x_bits() | pauli.z_bits();
                (0..pauli.n_qubits()).filter(|q| support >> q & 1 == 1).collect()
            }
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit { index: q });
            }
        }
        if let Gate::PauliExponential { pauli, .. } = self {
            if pauli.n_qubits() != n_qubits {
                return Err(Error::SizeMismatch {
                    left: pauli.n_qubits(),
                    right: n_qubits,
                });
            }
        }
        Ok(())
    }

    /// The gate's unitary on its listed qubits (first-listed = most
    /// significant local bit). Diagnostic/oracle realization; the simulator
    /// never applies gates through this matrix.
    pub fn local_unitary(&self) -> DMatrix<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Gate::ExchangeSingle { theta, .. } => {
                let (c, s) = (theta.cos(), theta.sin());
                let mut m = DMatrix::identity(4, 4);
                m[(1, 1)] = one * c;
                m[(1, 2)] = one * -s;
                m[(2, 1)] = one * s;
                m[(2, 2)] = one * c;
                m
            }
            Gate::ExchangeDouble { theta, .. } => {
                let (c, s) = (theta.cos(), theta.sin());
                let mut m = DMatrix::identity(16, 16);
                m[(5, 5)] = one * c;
                m[(5, 10)] = one * -s;
                m[(10, 5)] = one * s;
                m[(10, 10)] = one * c;
                m
            }
            Gate::Ry { angle, .. } => {
                let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                DMatrix::from_row_slice(2, 2, &[one * c, one * -s, one * s, one * c])
            }
            Gate::PauliX { .. } => {
                DMatrix::from_row_slice(2, 2, &[one * 0.0, one, one, one * 0.0])
            }
            Gate::Cnot { .. } => {
                // control is the first-listed (local MSB) qubit
                let mut m = DMatrix::zeros(4, 4);
                m[(0, 0)] = one;
                m[(1, 1)] = one;
                m[(2, 3)] = one;
                m[(3, 2)] = one;
                m
            }
            Gate::ControlledRy {
                controls, angle, ..
            } => {
                let k = controls.len() + 1;
                let dim = 1usize << k;
                let mut m = DMatrix::identity(dim, dim);
                // controls are listed first (higher local bits), target last (LSB)
                let ctrl_mask = dim - 2; // all bits except the target LSB
                let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                let lo = ctrl_mask; // controls set, target 0
                let hi = ctrl_mask | 1;
                m[(lo, lo)] = one * c;
                m[(lo, hi)] = one * -s;
                m[(hi, lo)] = one * s;
                m[(hi, hi)] = one * c;
                m
            }
            Gate::PauliExponential { pauli, angle } => {
                // exp(i a P) = cos(a) I + i sin(a) P, restricted to the support
                let support: Vec<usize> = self.qubits();
                let k = support.len();
                let dim = 1usize << k;
                let mut m = DMatrix::zeros(dim, dim);
                let (ca, sa) = (angle.cos(), angle.sin());
                for col in 0..dim as u64 {
                    // expand local (MSB-first) index into a global mask
                    let mut global = 0u64;
                    for (pos, &q) in support.iter().enumerate() {
                        if col >> (k - 1 - pos) & 1 == 1 {
                            global |= 1 << q;
                        }
                    }
                    let (gx, phase) = pauli.apply_to_basis_state(global);
                    let mut row = 0usize;
                    for (pos, &q) in support.iter().enumerate() {
                        if gx >> q & 1 == 1 {
                            row |= 1 << (k - 1 - pos);
                        }
                    }
                    m[(col as usize, col as usize)] += Complex64::new(ca, 0.0);
                    m[(row, col as usize)] += Complex64::new(0.0, sa) * phase;
                }
                m
            }
        }
    }
}

impl StateVector {
    /// |mask> as a basis state.
    pub fn basis_state(n_qubits: usize, mask: u64) -> Result<Self> {
        if n_qubits > 40 {
            return Err(Error::RegisterTooLarge {
                n_qubits,
                max_qubits: 40,
            });
        }
        let dim = 1usize << n_qubits;
        if mask >= dim as u64 {
            return Err(Error::MaskOutOfRange { mask, n_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[mask as usize] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// State from explicit amplitudes; must already be normalized.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << n_qubits {
            return Err(Error::SizeMismatch {
                left: amplitudes.len(),
                right: 1usize << n_qubits,
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized {
                deviation: (norm - 1.0).abs(),
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// |<self|other>|^2.
    pub fn overlap_sqr(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// Apply one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let dim = self.amplitudes.len() as u64;
        match gate {
            Gate::ExchangeSingle { qubits, theta } => {
                let (ct, st) = (theta.cos(), theta.sin());
                let ma = 1u64 << qubits[0];
                let mb = 1u64 << qubits[1];
                for idx in 0..dim {
                    // visit each mixed pair once, anchored at local |01>
                    if idx & mb != 0 && idx & ma == 0 {
                        let partner = idx ^ ma ^ mb; // local |10>
                        let a01 = self.amplitudes[idx as usize];
                        let a10 = self.amplitudes[partner as usize];
                        self.amplitudes[idx as usize] = a01 * ct - a10 * st;
                        self.amplitudes[partner as usize] = a01 * st + a10 * ct;
                    }
                }
            }
            Gate::ExchangeDouble { qubits, theta } => {
                let (ct, st) = (theta.cos(), theta.sin());
                let m1 = 1u64 << qubits[0];
                let m2 = 1u64 << qubits[1];
                let m3 = 1u64 << qubits[2];
                let m4 = 1u64 << qubits[3];
                let all = m1 | m2 | m3 | m4;
                for idx in 0..dim {
                    // anchor at local |0101| (second and fourth listed set)
                    if idx & all == m2 | m4 {
                        let partner = idx ^ all; // local |1010>
                        let a0101 = self.amplitudes[idx as usize];
                        let a1010 = self.amplitudes[partner as usize];
                        self.amplitudes[idx as usize] = a0101 * ct - a1010 * st;
                        self.amplitudes[partner as usize] = a0101 * st + a1010 * ct;
                    }
                }
            }
            Gate::Ry { qubit, angle } => {
                let (ca, sa) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                let m = 1u64 << qubit;
                for idx in 0..dim {
                    if idx & m == 0 {
                        let hi = idx | m;
                        let a0 = self.amplitudes[idx as usize];
                        let a1 = self.amplitudes[hi as usize];
                        self.amplitudes[idx as usize] = a0 * ca - a1 * sa;
                        self.amplitudes[hi as usize] = a0 * sa + a1 * ca;
                    }
                }
            }
            Gate::PauliX { qubit } => {
                let m = 1u64 << qubit;
                for idx in 0..dim {
                    if idx & m == 0 {
                        self.amplitudes.swap(idx as usize, (idx | m) as usize);
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let mc = 1u64 << control;
                let mt = 1u64 << target;
                for idx in 0..dim {
                    if idx & mc != 0 && idx & mt == 0 {
                        self.amplitudes.swap(idx as usize, (idx | mt) as usize);
                    }
                }
            }
            Gate::ControlledRy {
                controls,
                target,
                angle,
            } => {
                let (ca, sa) = ((angle / 2.0).cos(), (angle / 2.0).sin());
                let mc: u64 = controls.iter().map(|&q| 1u64 << q).sum();
                let mt = 1u64 << target;
                for idx in 0..dim {
                    if idx & mc == mc && idx & mt == 0 {
                        let hi = idx | mt;
                        let a0 = self.amplitudes[idx as usize];
                        let a1 = self.amplitudes[hi as usize];
                        self.amplitudes[idx as usize] = a0 * ca - a1 * sa;
                        self.amplitudes[hi as usize] = a0 * sa + a1 * ca;
                    }
                }
            }
            Gate::PauliExponential { pauli, angle } => {
                let (ca, sa) = (angle.cos(), angle.sin());
                let isa = Complex64::new(0.0, sa);
                let x = pauli.x_bits();
                if x == 0 {
                    // diagonal: amp *= cos + i sin * (+-1)
                    for idx in 0..dim {
                        let (_, phase) = pauli.apply_to_basis_state(idx);
                        self.amplitudes[idx as usize] *= Complex64::new(ca, 0.0) + isa * phase;
                    }
                } else {
                    for idx in 0..dim {
                        let partner = idx ^ x;
                        if idx < partner {
                            let (_, ph_idx) = pauli.apply_to_basis_state(idx);
                            let (_, ph_partner) = pauli.apply_to_basis_state(partner);
                            let a = self.amplitudes[idx as usize];
                            let b = self.amplitudes[partner as usize];
                            self.amplitudes[idx as usize] = a * ca + isa * ph_partner * b;
                            self.amplitudes[partner as usize] = b * ca + isa * ph_idx * a;
                        }
                    }
                }
            }
        }
        #[cfg(debug_assertions)]
        {
            debug_assert!(
                (self.norm_sqr() - 1.0).abs() < 1e-10,
                "gate application broke normalization"
            );
        }
        Ok(())
    }

    /// Apply gates left to right.
    pub fn run_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        for gate in gates {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// Probability mass per Hamming weight of the basis index.
    pub fn hamming_weight_distribution(&self) -> BTreeMap<u32, f64> {
        self.masked_weight_distribution(u64::MAX)
    }

    /// Probability mass per popcount of `index & mask`; `mask` selects a
    /// qubit block (e.g. one spin sector).
    pub fn masked_weight_distribution(&self, mask: u64) -> BTreeMap<u32, f64> {
        let mut dist = BTreeMap::new();
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            let p = amp.norm_sqr();
            if p > 0.0 {
                *dist.entry((idx as u64 & mask).count_ones()).or_insert(0.0) += p;
            }
        }
        dist
    }

    /// Amplitudes with |amp|^2 above `threshold`, ascending index, as
    /// `index real imag` lines.
    pub fn dump_nonzero(&self, threshold: f64) -> String {
        let mut out = String::new();
        for (idx, amp) in self.amplitudes.iter().enumerate() {
            if amp.norm_sqr() > threshold {
                out.push_str(&format!("{idx} {:.17e} {:.17e}\n", amp.re, amp.im));
            }
        }
        out
    }
}

/// Embed a gate's local unitary into the full 2^n space (first-listed qubit
/// = local MSB). Oracle path for tests: independent of `apply_gate`'s
/// in-place updates.
pub fn embed_unitary(gate: &Gate, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    if n_qubits > crate::pauli::DENSE_QUBIT_GUARD {
        return Err(Error::RegisterTooLarge {
            n_qubits,
            max_qubits: crate::pauli::DENSE_QUBIT_GUARD,
        });
    }
    gate.validate(n_qubits)?;
    let listed = gate.qubits();
    let k = listed.len();
    let local = gate.local_unitary();
    let dim = 1usize << n_qubits;
    let rest: Vec<usize> = (0..n_qubits).filter(|q| !listed.contains(q)).collect();
    let mut m = DMatrix::zeros(dim, dim);
    for lr in 0..1usize << k {
        for lc in 0..1usize << k {
            let v = local[(lr, lc)];
            if v.norm() == 0.0 {
                continue;
            }
            for other in 0..1usize << rest.len() {
                let mut base = 0usize;
                for (b, &q) in rest.iter().enumerate() {
                    if other >> b & 1 == 1 {
                        base |= 1 << q;
                    }
                }
                let mut row = base;
                let mut col = base;
                for (pos, &q) in listed.iter().enumerate() {
                    if lr >> (k - 1 - pos) & 1 == 1 {
                        row |= 1 << q;
                    }
                    if lc >> (k - 1 - pos) & 1 == 1 {
                        col |= 1 << q;
                    }
                }
                m[(row, col)] = v;
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
        let dim = 1usize << n;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::from_amplitudes(n, amps).unwrap()
    }

    fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
        let distinct = |rng: &mut ChaCha8Rng, k: usize| -> Vec<usize> {
            let mut v = Vec::new();
            while v.len() < k {
                let q = rng.gen_range(0..n);
                if !v.contains(&q) {
                    v.push(q);
                }
            }
            v
        };
        match rng.gen_range(0..7) {
            0 => {
                let q = distinct(rng, 2);
                Gate::ExchangeSingle {
                    qubits: [q[0], q[1]],
                    theta: rng.gen_range(-3.0..3.0),
                }
            }
            1 => {
                let q = distinct(rng, 4.min(n));
                if q.len() < 4 {
                    Gate::PauliX { qubit: q[0] }
                } else {
                    Gate::ExchangeDouble {
                        qubits: [q[0], q[1], q[2], q[3]],
                        theta: rng.gen_range(-3.0..3.0),
                    }
                }
            }
            2 => Gate::Ry {
                qubit: rng.gen_range(0..n),
                angle: rng.gen_range(-3.0..3.0),
            },
            3 => Gate::PauliX {
                qubit: rng.gen_range(0..n),
            },
            4 => {
                let q = distinct(rng, 2);
                Gate::Cnot {
                    control: q[0],
                    target: q[1],
                }
            }
            5 => {
                let q = distinct(rng, 3.min(n));
                if q.len() < 3 {
                    Gate::PauliX { qubit: q[0] }
                } else {
                    Gate::ControlledRy {
                        controls: vec![q[0], q[1]],
                        target: q[2],
                        angle: rng.gen_range(-3.0..3.0),
                    }
                }
            }
            _ => {
                let mask = (1u64 << n) - 1;
                let term = PauliTerm::new(
                    n,
                    rng.gen::<u64>() & mask,
                    rng.gen::<u64>() & mask,
                    c(1.0, 0.0),
                )
                .unwrap();
                Gate::pauli_exponential(term, rng.gen_range(-3.0..3.0)).unwrap()
            }
        }
    }

    #[test]
    fn basis_state_placement() {
        let psi = StateVector::basis_state(2, 0b01).unwrap();
        assert_abs_diff_eq!(psi.amplitudes()[1].re, 1.0);
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0);

        let psi = StateVector::basis_state(4, 0b0101).unwrap();
        assert_abs_diff_eq!(psi.amplitudes()[5].re, 1.0);

        assert!(StateVector::basis_state(2, 4).is_err());
    }

    #[test]
    fn exchange_single_quarter_turn() {
        // listed (a, b): local |10> means qubit a set; theta = pi/2 sends it to -|01>
        let mut psi = StateVector::basis_state(2, 0b01).unwrap(); // qubit 0 set
        psi.apply_gate(&Gate::ExchangeSingle {
            qubits: [0, 1],
            theta: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        // |01> local (qubit 1 set) picks up -1
        assert_abs_diff_eq!(psi.amplitudes()[2].re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.amplitudes()[1].norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn exchange_double_zero_angle_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi0 = random_state(&mut rng, 4);
        let mut psi = psi0.clone();
        psi.apply_gate(&Gate::ExchangeDouble {
            qubits: [0, 1, 2, 3],
            theta: 0.0,
        })
        .unwrap();
        for (a, b) in psi.amplitudes().iter().zip(psi0.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn exchange_double_scattered_matches_embedded_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let gate = Gate::ExchangeDouble {
            qubits: [0, 2, 3, 5],
            theta: 0.83,
        };
        let psi0 = random_state(&mut rng, 6);
        let mut psi = psi0.clone();
        psi.apply_gate(&gate).unwrap();

        let m = embed_unitary(&gate, 6).unwrap();
        let v = nalgebra::DVector::from_column_slice(psi0.amplitudes());
        let expected = &m * v;
        for (a, b) in psi.amplitudes().iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn scattered_gates_match_embedding_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let n = rng.gen_range(2..=6);
            let gate = random_gate(&mut rng, n);
            let psi0 = random_state(&mut rng, n);
            let mut psi = psi0.clone();
            psi.apply_gate(&gate).unwrap();
            let m = embed_unitary(&gate, n).unwrap();
            let v = nalgebra::DVector::from_column_slice(psi0.amplitudes());
            let expected = &m * v;
            for (a, b) in psi.amplitudes().iter().zip(expected.iter()) {
                assert!((a - b).norm() < 1e-12, "gate {gate:?} mismatch");
            }
        }
    }

    #[test]
    fn every_gate_dense_matrix_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..80 {
            let n = rng.gen_range(2..=5);
            let gate = random_gate(&mut rng, n);
            let m = embed_unitary(&gate, n).unwrap();
            let prod = m.adjoint() * &m;
            let eye = DMatrix::<Complex64>::identity(prod.nrows(), prod.ncols());
            let dev = (&prod - eye).iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-12, "non-unitary gate {gate:?}: {dev:.3e}");
        }
    }

    #[test]
    fn norm_preserved_over_many_random_gates() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 6;
        let mut psi = random_state(&mut rng, n);
        for _ in 0..10_000 {
            let gate = random_gate(&mut rng, n);
            psi.apply_gate(&gate).unwrap();
            debug_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        }
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exchange_gates_commute_with_total_number() {
        // dense commutator with sum_q (I - Z_q)/2 on minimal registers
        use crate::pauli::PauliSum;
        for (gate, n) in [
            (
                Gate::ExchangeSingle {
                    qubits: [1, 0],
                    theta: 0.4,
                },
                2usize,
            ),
            (
                Gate::ExchangeDouble {
                    qubits: [3, 1, 2, 0],
                    theta: 1.1,
                },
                4usize,
            ),
        ] {
            let mut number = PauliSum::new(n);
            for q in 0..n {
                number
                    .add_term(&PauliTerm::identity(n).scaled(c(0.5, 0.0)))
                    .unwrap();
                number
                    .add_term(&PauliTerm::single(n, q, 'Z', c(-0.5, 0.0)).unwrap())
                    .unwrap();
            }
            let nm = number.to_dense_matrix(6).unwrap();
            let gm = embed_unitary(&gate, n).unwrap();
            let comm = &gm * &nm - &nm * &gm;
            let dev = comm.iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn run_circuit_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi0 = random_state(&mut rng, 3);

        let mut psi = psi0.clone();
        psi.run_circuit(&[]).unwrap();
        assert_eq!(psi, psi0);

        let mut psi = psi0.clone();
        psi.run_circuit(&[Gate::PauliX { qubit: 1 }, Gate::PauliX { qubit: 1 }])
            .unwrap();
        for (a, b) in psi.amplitudes().iter().zip(psi0.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn gate_index_validation() {
        let mut psi = StateVector::basis_state(2, 0).unwrap();
        assert!(matches!(
            psi.apply_gate(&Gate::ExchangeSingle {
                qubits: [0, 2],
                theta: 0.1
            }),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            psi.apply_gate(&Gate::ExchangeSingle {
                qubits: [1, 1],
                theta: 0.1
            }),
            Err(Error::DuplicateQubit { .. })
        ));
    }

    #[test]
    fn hamming_distribution_cases() {
        let psi = StateVector::basis_state(4, 0b0101).unwrap();
        let dist = psi.hamming_weight_distribution();
        assert_eq!(dist.len(), 1);
        assert_abs_diff_eq!(dist[&2], 1.0);

        let a = 1.0 / 2f64.sqrt();
        let bell = StateVector::from_amplitudes(
            2,
            vec![c(a, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(a, 0.0)],
        )
        .unwrap();
        let dist = bell.hamming_weight_distribution();
        assert_abs_diff_eq!(dist[&0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(dist[&2], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn dump_lists_nonzero_amplitudes_in_order() {
        let a = 1.0 / 2f64.sqrt();
        let psi = StateVector::from_amplitudes(
            2,
            vec![c(a, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -a)],
        )
        .unwrap();
        let dump = psi.dump_nonzero(1e-12);
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("0 "));
        assert!(lines[1].starts_with("3 "));
    }
}
