//! Second-quantized operators and their qubit images.
//!
//! Spin orbitals are block ordered: for `m` active spatial orbitals, the
//! alpha spin orbitals occupy modes `0..m` and the beta spin orbitals
//! `m..2m`. The Jordan-Wigner substitution used throughout is
//!
//! ```text
//! a_j^dag = (X_j - i Y_j)/2 (x) Z_{j-1} ... Z_0
//! a_j     = (X_j + i Y_j)/2 (x) Z_{j-1} ... Z_0
//! ```
//!
//! with the parity string on strictly lower qubit indices.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::{PauliSum, PauliTerm};
use crate::{Error, Result, DROP_TOLERANCE};

/// One creation or annihilation factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LadderOp {
    pub mode: usize,
    pub dagger: bool,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

/// A sum of ladder-operator products, kept in canonical (normal) order:
/// creation factors left of annihilation factors, mode indices strictly
/// descending within each group, signs tracked through anticommutation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: BTreeMap<Vec<LadderOp>, Complex64>,
}

impl FermionOperator {
    pub fn new(n_modes: usize) -> Self {
        Self {
            n_modes,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[LadderOp], Complex64)> {
        self.terms.iter().map(|(f, &c)| (f.as_slice(), c))
    }

    /// Constant (identity) part.
    pub fn constant(&self) -> Complex64 {
        self.terms
            .get(&Vec::new())
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Add `coefficient * factors`, normal ordering on the way in.
    pub fn add_product(&mut self, factors: &[LadderOp], coefficient: Complex64) -> Result<()> {
        for f in factors {
            if f.mode >= self.n_modes {
                return Err(Error::ModeOutOfRange {
                    index: f.mode,
                    n_modes: self.n_modes,
                });
            }
        }
        let mut work = vec![(factors.to_vec(), coefficient)];
        while let Some((mut f, c)) = work.pop() {
            match first_violation(&f) {
                None => {
                    let entry = self
                        .terms
                        .entry(f.clone())
                        .or_insert(Complex64::new(0.0, 0.0));
                    *entry += c;
                    if entry.norm() < DROP_TOLERANCE {
                        self.terms.remove(&f);
                    }
                }
                Some(i) => {
                    let (a, b) = (f[i], f[i + 1]);
                    if a.mode == b.mode {
                        if a.dagger == b.dagger {
                            continue; // a a or a^ a^ with equal modes vanishes
                        }
                        // a_p a_p^dag = 1 - a_p^dag a_p
                        let mut contracted = f.clone();
                        contracted.drain(i..=i + 1);
                        work.push((contracted, c));
                    }
                    f.swap(i, i + 1);
                    work.push((f, -c));
                }
            }
        }
        Ok(())
    }

    pub fn add_operator(&mut self, other: &FermionOperator) -> Result<()> {
        for (f, c) in other.terms() {
            self.add_product(f, c)?;
        }
        Ok(())
    }

    /// Hermitian conjugate: reverse factors, toggle daggers, conjugate
    /// coefficients (re-normal-ordered on insertion).
    pub fn adjoint(&self) -> FermionOperator {
        let mut out = FermionOperator::new(self.n_modes);
        for (f, c) in self.terms() {
            let rev: Vec<LadderOp> = f
                .iter()
                .rev()
                .map(|op| LadderOp {
                    mode: op.mode,
                    dagger: !op.dagger,
                })
                .collect();
            out.add_product(&rev, c.conj()).expect("modes validated");
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> FermionOperator {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= factor;
        }
        out
    }
}

fn first_violation(f: &[LadderOp]) -> Option<usize> {
    for i in 0..f.len().saturating_sub(1) {
        let (a, b) = (f[i], f[i + 1]);
        let ok = match (a.dagger, b.dagger) {
            (true, false) => true,             // dagger left of non-dagger
            (false, true) => false,            // must commute through
            (true, true) | (false, false) => a.mode > b.mode,
        };
        if !ok {
            return Some(i);
        }
    }
    None
}

/// Jordan-Wigner image of one ladder factor: two Pauli strings.
fn jw_factor(n_qubits: usize, op: LadderOp) -> [PauliTerm; 2] {
    let j = op.mode;
    let lower = (1u64 << j) - 1;
    let x_part = PauliTerm::new(n_qubits, 1 << j, lower, Complex64::new(0.5, 0.0))
        .expect("mode bounded by register");
    let y_im = if op.dagger { -0.5 } else { 0.5 };
    let y_part = PauliTerm::new(n_qubits, 1 << j, lower | (1 << j), Complex64::new(0.0, y_im))
        .expect("mode bounded by register");
    [x_part, y_part]
}

/// Jordan-Wigner transformation of a whole operator into a simplified
/// Pauli sum over `n_modes` qubits.
pub fn jordan_wigner(op: &FermionOperator) -> Result<PauliSum> {
    let n = op.n_modes;
    let mut out = PauliSum::new(n);
    for (factors, coefficient) in op.terms() {
        let mut acc = vec![PauliTerm::identity(n).scaled(coefficient)];
        for &f in factors {
            if f.mode >= n {
                return Err(Error::ModeOutOfRange {
                    index: f.mode,
                    n_modes: n,
                });
            }
            let imgs = jw_factor(n, f);
            let mut next = Vec::with_capacity(acc.len() * 2);
            for left in &acc {
                for img in &imgs {
                    next.push(left.multiply(img)?);
                }
            }
            acc = next;
        }
        for term in acc {
            out.add_term(&term)?;
        }
    }
    Ok(out)
}

/// Dense matrix of a fermionic operator through its Jordan-Wigner image.
pub fn to_dense_matrix(op: &FermionOperator, max_qubits: usize) -> Result<DMatrix<Complex64>> {
    jordan_wigner(op)?.to_dense_matrix(max_qubits)
}

/// Molecular integrals in a spatial-orbital basis, chemists' notation
/// `(pq|rs)` for the two-body tensor.
#[derive(Debug, Clone)]
pub struct MolecularIntegrals {
    pub n_spatial: usize,
    /// Nuclear repulsion plus any folded frozen-core energy, Hartree.
    pub core_energy: f64,
    /// Symmetric one-body matrix h_pq, Hartree.
    pub one_body: DMatrix<f64>,
    /// Rank-4 tensor (pq|rs), row-major [p][q][r][s], Hartree.
    pub two_body: Vec<f64>,
    pub orbital_energies: Vec<f64>,
    pub n_alpha: usize,
    pub n_beta: usize,
    /// Total SCF energy when these integrals came out of an RHF solve.
    pub scf_energy: Option<f64>,
}

impl MolecularIntegrals {
    pub fn two(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_spatial;
        self.two_body[((p * n + q) * n + r) * n + s]
    }

    pub fn set_two(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let n = self.n_spatial;
        self.two_body[((p * n + q) * n + r) * n + s] = v;
    }

    pub fn n_electrons(&self) -> usize {
        self.n_alpha + self.n_beta
    }

    /// Check the structural invariants: symmetric one-body, 8-fold
    /// symmetric two-body, electron count within capacity.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_spatial;
        if self.one_body.nrows() != n || self.one_body.ncols() != n {
            return Err(Error::InconsistentIntegrals(format!(
                "one_body is {}x{}, expected {n}x{n}",
                self.one_body.nrows(),
                self.one_body.ncols()
            )));
        }
        if self.two_body.len() != n * n * n * n {
            return Err(Error::InconsistentIntegrals(format!(
                "two_body has {} entries, expected n^4 = {}",
                self.two_body.len(),
                n * n * n * n
            )));
        }
        if self.orbital_energies.len() != n {
            return Err(Error::InconsistentIntegrals(
                "orbital_energies length != n_spatial".into(),
            ));
        }
        if self.n_electrons() > 2 * n {
            return Err(Error::TooManyElectrons {
                electrons: self.n_electrons(),
                modes: 2 * n,
            });
        }
        for p in 0..n {
            for q in 0..n {
                if (self.one_body[(p, q)] - self.one_body[(q, p)]).abs() > 1e-10 {
                    return Err(Error::InconsistentIntegrals(format!(
                        "one_body not symmetric at ({p},{q})"
                    )));
                }
            }
        }
        for p in 0..n {
            for q in 0..=p {
                for r in 0..n {
                    for s in 0..=r {
                        let v = self.two(p, q, r, s);
                        for w in [
                            self.two(q, p, r, s),
                            self.two(p, q, s, r),
                            self.two(q, p, s, r),
                            self.two(r, s, p, q),
                            self.two(s, r, p, q),
                            self.two(r, s, q, p),
                            self.two(s, r, q, p),
                        ] {
                            if (v - w).abs() > 1e-10 {
                                return Err(Error::InconsistentIntegrals(format!(
                                    "two_body breaks 8-fold symmetry at ({p},{q},{r},{s})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Complete-active-space selection: the lowest `n_frozen_spatial` orbitals
/// stay doubly occupied and the highest `n_removed_spatial` stay empty.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ActiveSpace {
    pub n_frozen_spatial: usize,
    pub n_removed_spatial: usize,
}

impl ActiveSpace {
    pub fn full() -> Self {
        Self::default()
    }

    pub fn new(n_frozen_spatial: usize, n_removed_spatial: usize) -> Self {
        Self {
            n_frozen_spatial,
            n_removed_spatial,
        }
    }

    pub fn validate(&self, mi: &MolecularIntegrals) -> Result<()> {
        if self.n_frozen_spatial + self.n_removed_spatial >= mi.n_spatial {
            return Err(Error::InvalidActiveSpace(format!(
                "{} frozen + {} removed leaves no active orbitals out of {}",
                self.n_frozen_spatial, self.n_removed_spatial, mi.n_spatial
            )));
        }
        if self.n_frozen_spatial > mi.n_alpha || self.n_frozen_spatial > mi.n_beta {
            return Err(Error::InvalidActiveSpace(format!(
                "cannot doubly occupy {} frozen orbitals with ({},{}) electrons",
                self.n_frozen_spatial, mi.n_alpha, mi.n_beta
            )));
        }
        let n_active = mi.n_spatial - self.n_frozen_spatial - self.n_removed_spatial;
        let active_alpha = mi.n_alpha - self.n_frozen_spatial;
        let active_beta = mi.n_beta - self.n_frozen_spatial;
        if active_alpha > n_active || active_beta > n_active {
            return Err(Error::InvalidActiveSpace(format!(
                "({active_alpha},{active_beta}) active electrons exceed {n_active} active orbitals"
            )));
        }
        Ok(())
    }
}

/// Fold the frozen orbitals into the core energy and an effective one-body
/// term, and delete the removed virtuals; the returned integrals span only
/// the active orbitals.
pub fn freeze_core(mi: &MolecularIntegrals, space: &ActiveSpace) -> Result<MolecularIntegrals> {
    space.validate(mi)?;
    let nf = space.n_frozen_spatial;
    let na = mi.n_spatial - nf - space.n_removed_spatial;

    let mut core = mi.core_energy;
    for i in 0..nf {
        core += 2.0 * mi.one_body[(i, i)];
        for j in 0..nf {
            core += 2.0 * mi.two(i, i, j, j) - mi.two(i, j, j, i);
        }
    }

    let mut one = DMatrix::zeros(na, na);
    for p in 0..na {
        for q in 0..na {
            let mut v = mi.one_body[(p + nf, q + nf)];
            for i in 0..nf {
                v += 2.0 * mi.two(p + nf, q + nf, i, i) - mi.two(p + nf, i, i, q + nf);
            }
            one[(p, q)] = v;
        }
    }

    let mut two = vec![0.0; na * na * na * na];
    for p in 0..na {
        for q in 0..na {
            for r in 0..na {
                for s in 0..na {
                    two[((p * na + q) * na + r) * na + s] =
                        mi.two(p + nf, q + nf, r + nf, s + nf);
                }
            }
        }
    }

    Ok(MolecularIntegrals {
        n_spatial: na,
        core_energy: core,
        one_body: one,
        two_body: two,
        orbital_energies: mi.orbital_energies[nf..nf + na].to_vec(),
        n_alpha: mi.n_alpha - nf,
        n_beta: mi.n_beta - nf,
        scf_energy: mi.scf_energy,
    })
}

/// Assemble the active-space spin-orbital Hamiltonian
/// `core + sum h_pq a^_p a_q + 1/2 sum (pq|rs) a^_ps a^_rt a_st a_qs`
/// over `2 * n_active` modes, alpha block first.
pub fn build_hamiltonian(mi: &MolecularIntegrals, space: &ActiveSpace) -> Result<FermionOperator> {
    let act = freeze_core(mi, space)?;
    let m = act.n_spatial;
    let modes = 2 * m;
    let spin_orbital = |p: usize, beta: bool| if beta { p + m } else { p };

    let mut op = FermionOperator::new(modes);
    op.add_product(&[], Complex64::new(act.core_energy, 0.0))?;

    for p in 0..m {
        for q in 0..m {
            let h = act.one_body[(p, q)];
            if h.abs() < 1e-14 {
                continue;
            }
            for beta in [false, true] {
                op.add_product(
                    &[
                        LadderOp::create(spin_orbital(p, beta)),
                        LadderOp::annihilate(spin_orbital(q, beta)),
                    ],
                    Complex64::new(h, 0.0),
                )?;
            }
        }
    }

    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for s in 0..m {
                    let g = act.two(p, q, r, s);
                    if g.abs() < 1e-14 {
                        continue;
                    }
                    for sigma in [false, true] {
                        for tau in [false, true] {
                            op.add_product(
                                &[
                                    LadderOp::create(spin_orbital(p, sigma)),
                                    LadderOp::create(spin_orbital(r, tau)),
                                    LadderOp::annihilate(spin_orbital(s, tau)),
                                    LadderOp::annihilate(spin_orbital(q, sigma)),
                                ],
                                Complex64::new(0.5 * g, 0.0),
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(op)
}

/// Hartree-Fock occupation mask over the active register: the lowest
/// `n_alpha` modes of the alpha block and lowest `n_beta` of the beta block.
pub fn hf_reference(n_active_spatial: usize, n_alpha: usize, n_beta: usize) -> Result<u64> {
    if n_alpha > n_active_spatial || n_beta > n_active_spatial {
        return Err(Error::TooManyElectrons {
            electrons: n_alpha + n_beta,
            modes: 2 * n_active_spatial,
        });
    }
    let alpha = (1u64 << n_alpha) - 1;
    let beta = ((1u64 << n_beta) - 1) << n_active_spatial;
    Ok(alpha | beta)
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

    /// Fermionic matrices straight from occupation-number rules — the
    /// independent oracle for everything Jordan-Wigner produces.
    fn annihilate_dense(n: usize, j: usize) -> DMatrix<Complex64> {
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            if col >> j & 1 == 1 {
                let parity = (col as u64 & ((1 << j) - 1)).count_ones();
                let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
                m[(col ^ (1 << j), col)] = c(sign, 0.0);
            }
        }
        m
    }

    fn create_dense(n: usize, j: usize) -> DMatrix<Complex64> {
        annihilate_dense(n, j).adjoint()
    }

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn random_symmetric_integrals(rng: &mut ChaCha8Rng, n: usize, na: usize, nb: usize) -> MolecularIntegrals {
        let mut one = DMatrix::zeros(n, n);
        for p in 0..n {
            for q in 0..=p {
                let v = rng.gen_range(-1.0..1.0);
                one[(p, q)] = v;
                one[(q, p)] = v;
            }
        }
        let mut mi = MolecularIntegrals {
            n_spatial: n,
            core_energy: rng.gen_range(-1.0..1.0),
            one_body: one,
            two_body: vec![0.0; n * n * n * n],
            orbital_energies: (0..n).map(|i| i as f64).collect(),
            n_alpha: na,
            n_beta: nb,
            scf_energy: None,
        };
        for p in 0..n {
            for q in 0..=p {
                for r in 0..n {
                    for s in 0..=r {
                        if (p, q) < (r, s) {
                            continue;
                        }
                        let v = rng.gen_range(-0.5..0.5);
                        for (a, b, cc, d) in [
                            (p, q, r, s),
                            (q, p, r, s),
                            (p, q, s, r),
                            (q, p, s, r),
                            (r, s, p, q),
                            (s, r, p, q),
                            (r, s, q, p),
                            (s, r, q, p),
                        ] {
                            mi.set_two(a, b, cc, d, v);
                        }
                    }
                }
            }
        }
        mi.validate().unwrap();
        mi
    }

    #[test]
    fn jw_number_operator() {
        let mut op = FermionOperator::new(1);
        op.add_product(
            &[LadderOp::create(0), LadderOp::annihilate(0)],
            c(1.0, 0.0),
        )
        .unwrap();
        let sum = jordan_wigner(&op).unwrap();
        // (I - Z0)/2
        assert_eq!(sum.len(), 2);
        let m = sum.to_dense_matrix(4).unwrap();
        assert_abs_diff_eq!(m[(0, 0)].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 1)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn jw_adjacent_hopping_difference() {
        // a_1^ a_0 - a_0^ a_1 -> (i/2) Y0 X1 - (i/2) X0 Y1 (empty Z string)
        let mut op = FermionOperator::new(2);
        op.add_product(
            &[LadderOp::create(1), LadderOp::annihilate(0)],
            c(1.0, 0.0),
        )
        .unwrap();
        op.add_product(
            &[LadderOp::create(0), LadderOp::annihilate(1)],
            c(-1.0, 0.0),
        )
        .unwrap();
        let sum = jordan_wigner(&op).unwrap();
        assert_eq!(sum.len(), 2);
        for term in sum.iter() {
            assert_eq!(term.x_bits(), 0b11);
            match term.z_bits() {
                0b01 => {
                    // Y0 X1
                    assert_abs_diff_eq!(term.coefficient().im, 0.5, epsilon = 1e-15);
                    assert_abs_diff_eq!(term.coefficient().re, 0.0, epsilon = 1e-15);
                }
                0b10 => {
                    // X0 Y1
                    assert_abs_diff_eq!(term.coefficient().im, -0.5, epsilon = 1e-15);
                }
                other => panic!("unexpected z mask {other:#b}"),
            }
        }
    }

    #[test]
    fn jw_satisfies_canonical_anticommutation() {
        let n = 4;
        for i in 0..n {
            for j in 0..n {
                let mut ai = FermionOperator::new(n);
                ai.add_product(&[LadderOp::annihilate(i)], c(1.0, 0.0))
                    .unwrap();
                let mut ajd = FermionOperator::new(n);
                ajd.add_product(&[LadderOp::create(j)], c(1.0, 0.0)).unwrap();

                let mi = jordan_wigner(&ai).unwrap().to_dense_matrix(6).unwrap();
                let mj = jordan_wigner(&ajd).unwrap().to_dense_matrix(6).unwrap();
                let anti = &mi * &mj + &mj * &mi;
                let expected = if i == j {
                    DMatrix::identity(1 << n, 1 << n)
                } else {
                    DMatrix::zeros(1 << n, 1 << n)
                };
                assert!(max_abs(&(anti - expected)) < 1e-12);

                // and against the occupation-rule oracle
                let oi = annihilate_dense(n, i);
                let oj = create_dense(n, j);
                assert!(max_abs(&(&mi - &oi)) < 1e-12);
                assert!(max_abs(&(&mj - &oj)) < 1e-12);
            }
        }
    }

    #[test]
    fn jw_image_of_hermitian_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let n = 4;
            let mut op = FermionOperator::new(n);
            for _ in 0..5 {
                let k = rng.gen_range(1..=4);
                let factors: Vec<LadderOp> = (0..k)
                    .map(|_| LadderOp {
                        mode: rng.gen_range(0..n),
                        dagger: rng.gen(),
                    })
                    .collect();
                op.add_product(&factors, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .unwrap();
            }
            let mut herm = op.clone();
            herm.add_operator(&op.adjoint()).unwrap();
            let sum = jordan_wigner(&herm).unwrap();
            assert!(sum.max_imag_coefficient() < 1e-12);
            let m = sum.to_dense_matrix(6).unwrap();
            assert!(max_abs(&(m.adjoint() - &m)) < 1e-12);
        }
    }

    #[test]
    fn normal_order_contraction() {
        // a_0 a_0^dag = 1 - a_0^dag a_0
        let mut op = FermionOperator::new(1);
        op.add_product(
            &[LadderOp::annihilate(0), LadderOp::create(0)],
            c(1.0, 0.0),
        )
        .unwrap();
        assert_abs_diff_eq!(op.constant().re, 1.0);
        assert_eq!(op.len(), 2);

        // a_0^dag a_0^dag = 0
        let mut zero = FermionOperator::new(1);
        zero.add_product(&[LadderOp::create(0), LadderOp::create(0)], c(1.0, 0.0))
            .unwrap();
        assert!(zero.is_empty());
    }

    #[test]
    fn hamiltonian_one_orbital_toy() {
        let mi = MolecularIntegrals {
            n_spatial: 1,
            core_energy: 0.25,
            one_body: DMatrix::from_element(1, 1, -1.0),
            two_body: vec![0.0],
            orbital_energies: vec![-1.0],
            n_alpha: 1,
            n_beta: 0,
            scf_energy: None,
        };
        let h = build_hamiltonian(&mi, &ActiveSpace::full()).unwrap();
        assert_eq!(h.n_modes(), 2);
        assert_abs_diff_eq!(h.constant().re, 0.25);
        let num0 = vec![LadderOp::create(0), LadderOp::annihilate(0)];
        let num1 = vec![LadderOp::create(1), LadderOp::annihilate(1)];
        let coeffs: BTreeMap<_, _> = h.terms().map(|(f, c)| (f.to_vec(), c)).collect();
        assert_abs_diff_eq!(coeffs[&num0].re, -1.0);
        assert_abs_diff_eq!(coeffs[&num1].re, -1.0);
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn hamiltonian_commutes_with_number_and_sz() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let mi = random_symmetric_integrals(&mut rng, 3, 1, 1);
        let h = jordan_wigner(&build_hamiltonian(&mi, &ActiveSpace::full()).unwrap()).unwrap();
        let hm = h.to_dense_matrix(6).unwrap();

        for qubits in [vec![0usize, 1, 2, 3, 4, 5], vec![0, 1, 2], vec![3, 4, 5]] {
            let mut number = PauliSum::new(6);
            for &q in &qubits {
                number
                    .add_term(&PauliTerm::identity(6).scaled(c(0.5, 0.0)))
                    .unwrap();
                number
                    .add_term(&PauliTerm::single(6, q, 'Z', c(-0.5, 0.0)).unwrap())
                    .unwrap();
            }
            let nm = number.to_dense_matrix(6).unwrap();
            assert!(max_abs(&(&hm * &nm - &nm * &hm)) < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_invariant_under_symmetry_partner_storage() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mi = random_symmetric_integrals(&mut rng, 2, 1, 1);
        let base = jordan_wigner(&build_hamiltonian(&mi, &ActiveSpace::full()).unwrap()).unwrap();

        // permute the whole tensor through each symmetry partner slot
        type Perm = fn(usize, usize, usize, usize) -> (usize, usize, usize, usize);
        let perms: [Perm; 4] = [
            |p, q, r, s| (q, p, r, s),
            |p, q, r, s| (p, q, s, r),
            |p, q, r, s| (r, s, p, q),
            |p, q, r, s| (s, r, q, p),
        ];
        for perm in perms {
            let mut alt = mi.clone();
            for p in 0..2 {
                for q in 0..2 {
                    for r in 0..2 {
                        for s in 0..2 {
                            let (a, b, cc, d) = perm(p, q, r, s);
                            alt.set_two(p, q, r, s, mi.two(a, b, cc, d));
                        }
                    }
                }
            }
            let h = jordan_wigner(&build_hamiltonian(&alt, &ActiveSpace::full()).unwrap()).unwrap();
            let dev = max_abs(&(h.to_dense_matrix(6).unwrap() - base.to_dense_matrix(6).unwrap()));
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn freeze_core_identity_when_nothing_frozen() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mi = random_symmetric_integrals(&mut rng, 3, 2, 2);
        let out = freeze_core(&mi, &ActiveSpace::full()).unwrap();
        assert_eq!(out.n_spatial, 3);
        assert_abs_diff_eq!(out.core_energy, mi.core_energy);
        assert!(max_abs(&(out.one_body.map(|v| c(v, 0.0)) - mi.one_body.map(|v| c(v, 0.0)))) < 1e-15);
        assert_eq!(out.two_body, mi.two_body);
    }

    #[test]
    fn freeze_core_shapes_active_register() {
        // 7 spatial orbitals, freeze 1 + remove 1 -> 5 active -> 10 qubits
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let mi = random_symmetric_integrals(&mut rng, 7, 3, 3);
        let space = ActiveSpace::new(1, 1);
        let act = freeze_core(&mi, &space).unwrap();
        assert_eq!(act.n_spatial, 5);
        assert_eq!((act.n_alpha, act.n_beta), (2, 2));
        let h = build_hamiltonian(&mi, &space).unwrap();
        assert_eq!(h.n_modes(), 10);
        act.validate().unwrap();
    }

    #[test]
    fn active_space_validation_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let mi = random_symmetric_integrals(&mut rng, 3, 1, 1);
        assert!(ActiveSpace::new(2, 0).validate(&mi).is_err()); // over-freezes electrons
        assert!(ActiveSpace::new(1, 2).validate(&mi).is_err()); // nothing left
    }

    #[test]
    fn hf_reference_masks() {
        assert_eq!(hf_reference(2, 1, 1).unwrap(), 0b0100 | 0b0001); // qubits {0,2}
        assert_eq!(hf_reference(4, 2, 2).unwrap(), 0b0011_0011); // qubits {0,1,4,5}
        assert_eq!(hf_reference(5, 2, 2).unwrap(), 0b11_00011); // qubits {0,1,5,6}
        assert!(hf_reference(2, 3, 0).is_err());
    }
}
