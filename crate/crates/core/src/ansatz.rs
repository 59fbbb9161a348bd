//! Excitation lists and ansatz circuits.
//!
//! Two circuit families share one spin-preserving excitation list:
//!
//! - the exchange-gate coupled-cluster ansatz (QCCSD): one
//!   particle-preserving exchange gate per excitation, so parity strings
//!   never appear and the gate count equals the parameter count;
//! - the first-order Trotterized UCCSD ansatz: each excitation becomes the
//!   Jordan-Wigner Pauli exponentials of its fermionic generator (two per
//!   single, eight per double), parity strings included.
//!
//! The excitation list runs in a fixed loop order: alpha singles, beta
//! singles, mixed-spin doubles, alpha-alpha doubles, beta-beta doubles,
//! each loop ascending in orbital index.

use num_complex::Complex64;

use crate::fermion::{FermionOperator, LadderOp};
use crate::pauli::{PauliSum, PauliTerm};
use crate::sim::Gate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Alpha,
    Beta,
}

/// Spin-preserving single excitation between two spin orbitals (qubit
/// indices; `virt > occ` always holds under block ordering).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingleExcitation {
    pub occ: usize,
    pub virt: usize,
    pub spin: Spin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleKind {
    /// One alpha pair and one beta pair.
    Mixed,
    /// Both pairs in the same spin block.
    SameSpin(Spin),
}

/// Spin-preserving double excitation; `(occ1, virt1)` and `(occ2, virt2)`
/// are the two pairs. Mixed doubles carry the alpha pair first; same-spin
/// doubles satisfy `occ1 < occ2`, `virt1 < virt2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleExcitation {
    pub occ1: usize,
    pub virt1: usize,
    pub occ2: usize,
    pub virt2: usize,
    pub kind: DoubleKind,
}

/// The ordered excitation list; one variational parameter per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationList {
    pub n_qubits: usize,
    pub n_active_spatial: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub singles: Vec<SingleExcitation>,
    pub doubles: Vec<DoubleExcitation>,
}

impl ExcitationList {
    pub fn parameter_count(&self) -> usize {
        self.singles.len() + self.doubles.len()
    }
}

/// Closed-form parameter count:
/// `oa*va + ob*vb + oa*va*ob*vb + C(oa,2)*C(va,2) + C(ob,2)*C(vb,2)`.
pub fn parameter_count_formula(o_alpha: usize, v_alpha: usize, o_beta: usize, v_beta: usize) -> usize {
    let choose2 = |n: usize| n * n.saturating_sub(1) / 2;
    o_alpha * v_alpha
        + o_beta * v_beta
        + o_alpha * v_alpha * o_beta * v_beta
        + choose2(o_alpha) * choose2(v_alpha)
        + choose2(o_beta) * choose2(v_beta)
}

/// Enumerate the spin-preserving excitations for `n_alpha`/`n_beta`
/// electrons in `n_active_spatial` orbitals. No virtual orbitals in a spin
/// sector simply contributes nothing.
pub fn build_excitation_list(
    n_active_spatial: usize,
    n_alpha: usize,
    n_beta: usize,
) -> Result<ExcitationList> {
    let m = n_active_spatial;
    if n_alpha > m || n_beta > m {
        return Err(Error::TooManyElectrons {
            electrons: n_alpha + n_beta,
            modes: 2 * m,
        });
    }
    let alpha_occ: Vec<usize> = (0..n_alpha).collect();
    let alpha_virt: Vec<usize> = (n_alpha..m).collect();
    let beta_occ: Vec<usize> = (m..m + n_beta).collect();
    let beta_virt: Vec<usize> = (m + n_beta..2 * m).collect();

    let mut singles = Vec::new();
    for &i in &alpha_occ {
        for &j in &alpha_virt {
            singles.push(SingleExcitation {
                occ: i,
                virt: j,
                spin: Spin::Alpha,
            });
        }
    }
    for &k in &beta_occ {
        for &l in &beta_virt {
            singles.push(SingleExcitation {
                occ: k,
                virt: l,
                spin: Spin::Beta,
            });
        }
    }

    let mut doubles = Vec::new();
    for &i in &alpha_occ {
        for &j in &alpha_virt {
            for &k in &beta_occ {
                for &l in &beta_virt {
                    doubles.push(DoubleExcitation {
                        occ1: i,
                        virt1: j,
                        occ2: k,
                        virt2: l,
                        kind: DoubleKind::Mixed,
                    });
                }
            }
        }
    }
    for (occ, virt, spin) in [
        (&alpha_occ, &alpha_virt, Spin::Alpha),
        (&beta_occ, &beta_virt, Spin::Beta),
    ] {
        for (a, &i) in occ.iter().enumerate() {
            for (c, &k) in virt.iter().enumerate() {
                for &j in &occ[a + 1..] {
                    for &l in &virt[c + 1..] {
                        doubles.push(DoubleExcitation {
                            occ1: i,
                            virt1: k,
                            occ2: j,
                            virt2: l,
                            kind: DoubleKind::SameSpin(spin),
                        });
                    }
                }
            }
        }
    }

    Ok(ExcitationList {
        n_qubits: 2 * m,
        n_active_spatial: m,
        n_alpha,
        n_beta,
        singles,
        doubles,
    })
}

/// Variational parameters, radians, one per excitation, bounded to
/// `[-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !(-std::f64::consts::PI..=std::f64::consts::PI).contains(&v) {
                return Err(Error::InvalidOrdering(format!(
                    "parameter {v} outside [-pi, pi]"
                )));
            }
        }
        Ok(Self(values))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn check_lengths(excitations: &ExcitationList, params: &ParameterVector) -> Result<()> {
    if excitations.parameter_count() != params.len() {
        return Err(Error::ParameterCountMismatch {
            expected: excitations.parameter_count(),
            got: params.len(),
        });
    }
    Ok(())
}

/// One exchange gate per excitation, in list order. Gate count equals
/// parameter count.
pub fn qccsd_circuit(excitations: &ExcitationList, params: &ParameterVector) -> Result<Vec<Gate>> {
    check_lengths(excitations, params)?;
    let mut gates = Vec::with_capacity(params.len());
    let mut values = params.values().iter();
    for s in &excitations.singles {
        gates.push(Gate::ExchangeSingle {
            qubits: [s.occ, s.virt],
            theta: *values.next().unwrap(),
        });
    }
    for d in &excitations.doubles {
        gates.push(Gate::ExchangeDouble {
            qubits: [d.occ1, d.virt1, d.occ2, d.virt2],
            theta: *values.next().unwrap(),
        });
    }
    Ok(gates)
}

/// The fermionic generator of a single excitation at unit amplitude:
/// `a^_virt a_occ - a^_occ a_virt`.
fn single_generator(n_modes: usize, occ: usize, virt: usize) -> FermionOperator {
    let mut op = FermionOperator::new(n_modes);
    op.add_product(
        &[LadderOp::create(virt), LadderOp::annihilate(occ)],
        Complex64::new(1.0, 0.0),
    )
    .expect("indices bounded");
    op.add_product(
        &[LadderOp::create(occ), LadderOp::annihilate(virt)],
        Complex64::new(-1.0, 0.0),
    )
    .expect("indices bounded");
    op
}

/// The fermionic generator of a double excitation at unit amplitude:
/// `a^_virt1 a^_virt2 a_occ2 a_occ1 - h.c.`.
fn double_generator(n_modes: usize, d: &DoubleExcitation) -> FermionOperator {
    let mut op = FermionOperator::new(n_modes);
    op.add_product(
        &[
            LadderOp::create(d.virt1),
            LadderOp::create(d.virt2),
            LadderOp::annihilate(d.occ2),
            LadderOp::annihilate(d.occ1),
        ],
        Complex64::new(1.0, 0.0),
    )
    .expect("indices bounded");
    op.add_product(
        &[
            LadderOp::create(d.occ1),
            LadderOp::create(d.occ2),
            LadderOp::annihilate(d.virt2),
            LadderOp::annihilate(d.virt1),
        ],
        Complex64::new(-1.0, 0.0),
    )
    .expect("indices bounded");
    op
}

/// Fixed emission order for the exponential factors of one excitation:
/// the printed row order of the eight double-excitation terms, keyed by
/// the X/Y letters at the four excitation qubits taken as
/// (occ1, virt1, occ2, virt2); singles use (YX, XY) at (occ, virt).
fn pattern_rank(term: &PauliTerm, qubits: &[usize]) -> usize {
    let mut pattern = 0usize; // bit per qubit: 0 = X, 1 = Y
    for (pos, &q) in qubits.iter().enumerate() {
        let y = term.z_bits() >> q & 1; // x is set for both X and Y
        pattern |= (y as usize) << pos;
    }
    match qubits.len() {
        2 => match pattern {
            0b01 => 0, // Y at occ, X at virt
            0b10 => 1, // X at occ, Y at virt
            _ => usize::MAX,
        },
        4 => {
            // (l, i, k, j) = (occ1, virt1, occ2, virt2); bit order below is
            // (j k i l) reading the pattern MSB-to-LSB
            const ORDER: [usize; 8] = [
                0b1000, // X X X Y
                0b0010, // X Y X X
                0b1110, // X Y Y Y
                0b1011, // Y Y X Y
                0b0100, // X X Y X
                0b0001, // Y X X X
                0b1101, // Y X Y Y
                0b0111, // Y Y Y X
            ];
            ORDER
                .iter()
                .position(|&p| p == pattern)
                .unwrap_or(usize::MAX)
        }
        _ => usize::MAX,
    }
}

/// Jordan-Wigner expansion of one excitation generator at unit amplitude,
/// as `(pauli letters, coefficient)` pairs where the generator equals
/// `sum_k i * c_k * P_k`, ordered by the fixed row order.
fn generator_exponents(
    generator: &FermionOperator,
    excitation_qubits: &[usize],
) -> Result<Vec<(PauliTerm, f64)>> {
    let image: PauliSum = crate::fermion::jordan_wigner(generator)?;
    let mut rows: Vec<(usize, PauliTerm, f64)> = Vec::new();
    for term in image.iter() {
        let c = term.coefficient();
        debug_assert!(c.re.abs() < 1e-14, "anti-Hermitian generator expected");
        let rank = pattern_rank(&term, excitation_qubits);
        debug_assert!(rank != usize::MAX, "unexpected letter pattern");
        rows.push((rank, term.unit(), c.im));
    }
    rows.sort_by_key(|(rank, _, _)| *rank);
    Ok(rows.into_iter().map(|(_, p, c)| (p, c)).collect())
}

/// First-order Trotterized UCCSD circuit: for each excitation the Pauli
/// exponentials of its Jordan-Wigner image (parity strings included), two
/// per single and eight per double, emitted in the fixed row order.
pub fn uccsd_trotter_circuit(
    excitations: &ExcitationList,
    params: &ParameterVector,
) -> Result<Vec<Gate>> {
    check_lengths(excitations, params)?;
    let n = excitations.n_qubits;
    let mut gates = Vec::new();
    let mut values = params.values().iter();
    for s in &excitations.singles {
        let theta = *values.next().unwrap();
        let generator = single_generator(n, s.occ, s.virt);
        for (pauli, c) in generator_exponents(&generator, &[s.occ, s.virt])? {
            gates.push(Gate::pauli_exponential(pauli, theta * c)?);
        }
    }
    for d in &excitations.doubles {
        let theta = *values.next().unwrap();
        let generator = double_generator(n, d);
        for (pauli, c) in
            generator_exponents(&generator, &[d.occ1, d.virt1, d.occ2, d.virt2])?
        {
            gates.push(Gate::pauli_exponential(pauli, theta * c)?);
        }
    }
    Ok(gates)
}

/// UCCSD gate count: two exponentials per single, eight per double.
pub fn uccsd_gate_count(excitations: &ExcitationList) -> usize {
    2 * excitations.singles.len() + 8 * excitations.doubles.len()
}

/// Exchange-single decomposition: CNOT, controlled-Ry(2 theta), CNOT.
///
/// The product equals `ExchangeSingle(qubits, theta)` exactly (sign +1,
/// pinned by the dense equivalence tests).
pub fn decompose_exchange_single(theta: f64, qubits: [usize; 2]) -> Result<Vec<Gate>> {
    let [a, b] = qubits;
    if a == b {
        return Err(Error::DuplicateQubit { index: a });
    }
    Ok(vec![
        Gate::Cnot {
            control: a,
            target: b,
        },
        Gate::ControlledRy {
            controls: vec![b],
            target: a,
            angle: 2.0 * theta,
        },
        Gate::Cnot {
            control: a,
            target: b,
        },
    ])
}

/// Exchange-double decomposition: CNOT ladder, X conjugation, one
/// triply-controlled Ry(2 theta), mirrored back out.
///
/// The product equals `ExchangeDouble(qubits, theta)` exactly (sign +1,
/// pinned by the dense equivalence tests). The multi-controlled Ry stays a
/// single controlled-gate primitive.
pub fn decompose_exchange_double(theta: f64, qubits: [usize; 4]) -> Result<Vec<Gate>> {
    let [q1, q2, q3, q4] = qubits;
    for (i, &q) in qubits.iter().enumerate() {
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit { index: q });
        }
    }
    Ok(vec![
        Gate::Cnot {
            control: q1,
            target: q3,
        },
        Gate::Cnot {
            control: q2,
            target: q4,
        },
        Gate::Cnot {
            control: q1,
            target: q2,
        },
        Gate::PauliX { qubit: q3 },
        Gate::PauliX { qubit: q4 },
        Gate::ControlledRy {
            controls: vec![q2, q3, q4],
            target: q1,
            angle: 2.0 * theta,
        },
        Gate::PauliX { qubit: q3 },
        Gate::PauliX { qubit: q4 },
        Gate::Cnot {
            control: q1,
            target: q2,
        },
        Gate::Cnot {
            control: q2,
            target: q4,
        },
        Gate::Cnot {
            control: q1,
            target: q3,
        },
    ])
}

/// Elementary-gate count after decomposing every exchange gate: three per
/// single, eleven per double.
pub fn decomposed_gate_count(excitations: &ExcitationList) -> usize {
    3 * excitations.singles.len() + 11 * excitations.doubles.len()
}

fn dense_exponential(
    n_qubits: usize,
    factors: &[(PauliTerm, f64)],
    scale: f64,
) -> Result<nalgebra::DMatrix<Complex64>> {
    let dim = 1usize << n_qubits;
    let mut product = nalgebra::DMatrix::identity(dim, dim);
    for (pauli, c) in factors {
        let angle = scale * c;
        let p = pauli.to_dense_matrix(crate::pauli::DENSE_QUBIT_GUARD)?;
        let exp = nalgebra::DMatrix::identity(dim, dim) * Complex64::new(angle.cos(), 0.0)
            + p * Complex64::new(0.0, angle.sin());
        product = exp * product; // factors act left to right
    }
    Ok(product)
}

fn strip_parity(factors: Vec<(PauliTerm, f64)>, keep: u64) -> Vec<(PauliTerm, f64)> {
    factors
        .into_iter()
        .map(|(p, c)| {
            let stripped = PauliTerm::new(
                p.n_qubits(),
                p.x_bits(),
                p.z_bits() & keep,
                p.coefficient(),
            )
            .expect("masks shrink");
            (stripped, c)
        })
        .collect()
}

fn max_abs_diff(
    a: &nalgebra::DMatrix<Complex64>,
    b: &nalgebra::DMatrix<Complex64>,
) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Check that stripping the parity strings from a single-excitation
/// exponential yields the exchange gate with negated angle: builds both
/// sides densely on `n_qubits` and returns the max-abs deviation.
///
/// `virt > occ` is required (the canonical block-ordered form).
pub fn verify_parity_removal_single(
    n_qubits: usize,
    occ: usize,
    virt: usize,
    theta: f64,
) -> Result<f64> {
    if virt <= occ {
        return Err(Error::InvalidOrdering(format!(
            "single excitation needs virt > occ, got occ={occ}, virt={virt}"
        )));
    }
    if virt >= n_qubits {
        return Err(Error::QubitOutOfRange {
            index: virt,
            n_qubits,
        });
    }
    let generator = single_generator(n_qubits, occ, virt);
    let factors = generator_exponents(&generator, &[occ, virt])?;
    let keep = (1u64 << occ) | (1u64 << virt);
    let stripped = strip_parity(factors, keep);
    let lhs = dense_exponential(n_qubits, &stripped, theta)?;
    let rhs = crate::sim::embed_unitary(
        &Gate::ExchangeSingle {
            qubits: [occ, virt],
            theta: -theta,
        },
        n_qubits,
    )?;
    Ok(max_abs_diff(&lhs, &rhs))
}

/// Doubles analog of [`verify_parity_removal_single`]: index ordering
/// `virt2 > occ2 > virt1 > occ1` (the mixed-spin block-ordered layout),
/// stripped exponentials against `ExchangeDouble(-theta)` on the listed
/// qubits `(occ1, virt1, occ2, virt2)`.
pub fn verify_parity_removal_double(
    n_qubits: usize,
    occ1: usize,
    virt1: usize,
    occ2: usize,
    virt2: usize,
    theta: f64,
) -> Result<f64> {
    if !(occ1 < virt1 && virt1 < occ2 && occ2 < virt2) {
        return Err(Error::InvalidOrdering(format!(
            "double excitation needs occ1 < virt1 < occ2 < virt2, got \
             ({occ1}, {virt1}, {occ2}, {virt2})"
        )));
    }
    if virt2 >= n_qubits {
        return Err(Error::QubitOutOfRange {
            index: virt2,
            n_qubits,
        });
    }
    let d = DoubleExcitation {
        occ1,
        virt1,
        occ2,
        virt2,
        kind: DoubleKind::Mixed,
    };
    let generator = double_generator(n_qubits, &d);
    let factors = generator_exponents(&generator, &[occ1, virt1, occ2, virt2])?;
    let keep = (1u64 << occ1) | (1u64 << virt1) | (1u64 << occ2) | (1u64 << virt2);
    let stripped = strip_parity(factors, keep);
    let lhs = dense_exponential(n_qubits, &stripped, theta)?;
    let rhs = crate::sim::embed_unitary(
        &Gate::ExchangeDouble {
            qubits: [occ1, virt1, occ2, virt2],
            theta: -theta,
        },
        n_qubits,
    )?;
    Ok(max_abs_diff(&lhs, &rhs))
}
