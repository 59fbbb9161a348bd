//! Molecular-integral ingestion.
//!
//! Two routes produce a [`MolecularIntegrals`]: the FCIDUMP reader
//! ([`parse_fcidump`]) for arbitrary molecules, and a built-in STO-3G
//! s-orbital engine plus restricted Hartree-Fock solver that covers
//! hydrogen chains without any external dependency. All closed-form
//! s-type Gaussian integrals reduce to the Boys function
//! `F0(x) = (1/2) sqrt(pi/x) erf(sqrt(x))`.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector};

use crate::fermion::MolecularIntegrals;
use crate::{Error, Result};

/// Bohr per Angstrom (CODATA 2018 Bohr radius 0.529177210903 A).
pub const ANGSTROM_TO_BOHR: f64 = 1.0 / 0.529177210903;

/// STO-3G hydrogen 1s: primitive exponents for the zeta = 1.24 scaled
/// Slater orbital, standard basis-set-exchange values.
pub const STO3G_H_EXPONENTS: [f64; 3] = [3.42525091, 0.62391373, 0.16885540];
/// Matching contraction coefficients.
pub const STO3G_H_COEFFICIENTS: [f64; 3] = [0.15432897, 0.53532814, 0.44463454];

/// A molecular geometry; coordinates in Angstrom.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub atoms: Vec<(String, [f64; 3])>,
    pub charge: i32,
    pub multiplicity: u32,
}

impl Geometry {
    pub fn new(atoms: Vec<(String, [f64; 3])>, charge: i32, multiplicity: u32) -> Result<Self> {
        let g = Self {
            atoms,
            charge,
            multiplicity,
        };
        let n = g.electron_count()?;
        // singlet/doublet/... parity must match the electron count
        if g.multiplicity == 0 || (n + g.multiplicity as i64 + 1) % 2 != 0 {
            return Err(Error::Geometry(format!(
                "multiplicity {} inconsistent with {} electrons",
                g.multiplicity, n
            )));
        }
        Ok(g)
    }

    /// Evenly spaced hydrogen chain along z; lowest consistent multiplicity.
    pub fn hydrogen_chain(n_atoms: usize, spacing_angstrom: f64) -> Result<Self> {
        let atoms = (0..n_atoms)
            .map(|i| ("H".to_string(), [0.0, 0.0, i as f64 * spacing_angstrom]))
            .collect();
        Self::new(atoms, 0, if n_atoms % 2 == 0 { 1 } else { 2 })
    }

    pub fn electron_count(&self) -> Result<i64> {
        let mut n = 0i64;
        for (el, _) in &self.atoms {
            n += nuclear_charge(el)
                .ok_or_else(|| Error::Geometry(format!("unknown element symbol {el:?}")))?
                as i64;
        }
        Ok(n - self.charge as i64)
    }

    /// Parse plain-text XYZ: count line, comment line, `element x y z`
    /// lines in Angstrom.
    pub fn from_xyz(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let count: usize = lines
            .next()
            .ok_or_else(|| Error::Geometry("empty XYZ input".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::Geometry("first XYZ line must be the atom count".into()))?;
        let _comment = lines.next();
        let mut atoms = Vec::with_capacity(count);
        for (i, line) in lines.enumerate() {
            if atoms.len() == count {
                break;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() != 4 {
                return Err(Error::Geometry(format!(
                    "XYZ atom line {} has {} fields, expected 4",
                    i + 3,
                    fields.len()
                )));
            }
            let coord = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::Geometry(format!("bad coordinate {s:?} on line {}", i + 3)))
            };
            atoms.push((
                fields[0].to_string(),
                [coord(fields[1])?, coord(fields[2])?, coord(fields[3])?],
            ));
        }
        if atoms.len() != count {
            return Err(Error::Geometry(format!(
                "XYZ declares {count} atoms but provides {}",
                atoms.len()
            )));
        }
        let mut electrons = 0u32;
        for (el, _) in &atoms {
            electrons += nuclear_charge(el)
                .ok_or_else(|| Error::Geometry(format!("unknown element symbol {el:?}")))?;
        }
        Self::new(atoms, 0, if electrons % 2 == 0 { 1 } else { 2 })
    }
}

fn nuclear_charge(element: &str) -> Option<u32> {
    match element {
        "H" => Some(1),
        "He" => Some(2),
        "Li" => Some(3),
        "Be" => Some(4),
        "B" => Some(5),
        "C" => Some(6),
        "N" => Some(7),
        "O" => Some(8),
        _ => None,
    }
}

/// Zeroth Boys function.
pub fn boys_f0(x: f64) -> f64 {
    if x < 1e-12 {
        1.0 - x / 3.0
    } else {
        0.5 * (std::f64::consts::PI / x).sqrt() * libm::erf(x.sqrt())
    }
}

/// Atomic-orbital basis integrals over contracted s-type Gaussians.
#[derive(Debug, Clone)]
pub struct AoIntegrals {
    pub n_basis: usize,
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub nuclear_attraction: DMatrix<f64>,
    /// Chemists' (mu nu | lambda sigma), row-major rank-4.
    pub repulsion: Vec<f64>,
    pub nuclear_repulsion: f64,
    pub n_electrons: usize,
}

impl AoIntegrals {
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n_basis;
        self.repulsion[((p * n + q) * n + r) * n + s]
    }
}

struct ContractedS {
    exponents: [f64; 3],
    coefficients: [f64; 3],
    center: [f64; 3],
}

fn dist_sqr(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

/// STO-3G integrals for an all-hydrogen geometry.
///
/// Coordinates convert to bohr internally; every returned quantity is in
/// Hartree atomic units.
pub fn sto3g_hydrogen_integrals(geometry: &Geometry) -> Result<AoIntegrals> {
    for (el, _) in &geometry.atoms {
        if el != "H" {
            return Err(Error::Geometry(format!(
                "built-in integral engine handles hydrogen only, got {el:?}"
            )));
        }
    }
    let centers: Vec<[f64; 3]> = geometry
        .atoms
        .iter()
        .map(|(_, xyz)| {
            [
                xyz[0] * ANGSTROM_TO_BOHR,
                xyz[1] * ANGSTROM_TO_BOHR,
                xyz[2] * ANGSTROM_TO_BOHR,
            ]
        })
        .collect();
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if dist_sqr(centers[i], centers[j]) < 1e-12 {
                return Err(Error::Geometry(format!("atoms {i} and {j} coincide")));
            }
        }
    }

    // normalized primitives, then renormalize the contraction so <s|s> = 1
    let basis: Vec<ContractedS> = centers
        .iter()
        .map(|&center| {
            let mut coefficients = [0.0; 3];
            for i in 0..3 {
                coefficients[i] = STO3G_H_COEFFICIENTS[i]
                    * (2.0 * STO3G_H_EXPONENTS[i] / std::f64::consts::PI).powf(0.75);
            }
            let mut self_overlap = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    let p = STO3G_H_EXPONENTS[i] + STO3G_H_EXPONENTS[j];
                    self_overlap +=
                        coefficients[i] * coefficients[j] * (std::f64::consts::PI / p).powf(1.5);
                }
            }
            let scale = self_overlap.sqrt().recip();
            for c in &mut coefficients {
                *c *= scale;
            }
            ContractedS {
                exponents: STO3G_H_EXPONENTS,
                coefficients,
                center,
            }
        })
        .collect();

    let nb = basis.len();
    let pi = std::f64::consts::PI;
    let mut overlap = DMatrix::zeros(nb, nb);
    let mut kinetic = DMatrix::zeros(nb, nb);
    let mut nuclear = DMatrix::zeros(nb, nb);

    for a in 0..nb {
        for b in 0..nb {
            let ba = &basis[a];
            let bb = &basis[b];
            let r2 = dist_sqr(ba.center, bb.center);
            for i in 0..3 {
                for j in 0..3 {
                    let alpha = ba.exponents[i];
                    let beta = bb.exponents[j];
                    let p = alpha + beta;
                    let mu = alpha * beta / p;
                    let pre = ba.coefficients[i] * bb.coefficients[j] * (-mu * r2).exp();
                    overlap[(a, b)] += pre * (pi / p).powf(1.5);
                    kinetic[(a, b)] += pre * mu * (3.0 - 2.0 * mu * r2) * (pi / p).powf(1.5);
                    let composite = [
                        (alpha * ba.center[0] + beta * bb.center[0]) / p,
                        (alpha * ba.center[1] + beta * bb.center[1]) / p,
                        (alpha * ba.center[2] + beta * bb.center[2]) / p,
                    ];
                    for nucleus in &centers {
                        let pc2 = dist_sqr(composite, *nucleus);
                        nuclear[(a, b)] += -pre * (2.0 * pi / p) * boys_f0(p * pc2);
                    }
                }
            }
        }
    }

    let mut repulsion = vec![0.0; nb * nb * nb * nb];
    for a in 0..nb {
        for b in 0..=a {
            for cc in 0..nb {
                for d in 0..=cc {
                    if (a, b) < (cc, d) {
                        continue;
                    }
                    let (ba, bb, bc, bd) = (&basis[a], &basis[b], &basis[cc], &basis[d]);
                    let rab = dist_sqr(ba.center, bb.center);
                    let rcd = dist_sqr(bc.center, bd.center);
                    let mut total = 0.0;
                    for i in 0..3 {
                        for j in 0..3 {
                            let p = ba.exponents[i] + bb.exponents[j];
                            let kab = (-ba.exponents[i] * bb.exponents[j] / p * rab).exp();
                            let pc = [
                                (ba.exponents[i] * ba.center[0] + bb.exponents[j] * bb.center[0])
                                    / p,
                                (ba.exponents[i] * ba.center[1] + bb.exponents[j] * bb.center[1])
                                    / p,
                                (ba.exponents[i] * ba.center[2] + bb.exponents[j] * bb.center[2])
                                    / p,
                            ];
                            for k in 0..3 {
                                for l in 0..3 {
                                    let q = bc.exponents[k] + bd.exponents[l];
                                    let kcd = (-bc.exponents[k] * bd.exponents[l] / q * rcd).exp();
                                    let qc = [
                                        (bc.exponents[k] * bc.center[0]
                                            + bd.exponents[l] * bd.center[0])
                                            / q,
                                        (bc.exponents[k] * bc.center[1]
                                            + bd.exponents[l] * bd.center[1])
                                            / q,
                                        (bc.exponents[k] * bc.center[2]
                                            + bd.exponents[l] * bd.center[2])
                                            / q,
                                    ];
                                    let rpq = dist_sqr(pc, qc);
                                    total += ba.coefficients[i]
                                        * bb.coefficients[j]
                                        * bc.coefficients[k]
                                        * bd.coefficients[l]
                                        * kab
                                        * kcd
                                        * 2.0
                                        * pi.powf(2.5)
                                        / (p * q * (p + q).sqrt())
                                        * boys_f0(p * q / (p + q) * rpq);
                                }
                            }
                        }
                    }
                    for (w, x, y, z) in [
                        (a, b, cc, d),
                        (b, a, cc, d),
                        (a, b, d, cc),
                        (b, a, d, cc),
                        (cc, d, a, b),
                        (d, cc, a, b),
                        (cc, d, b, a),
                        (d, cc, b, a),
                    ] {
                        repulsion[((w * nb + x) * nb + y) * nb + z] = total;
                    }
                }
            }
        }
    }

    let mut nuclear_repulsion = 0.0;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            nuclear_repulsion += 1.0 / dist_sqr(centers[i], centers[j]).sqrt();
        }
    }

    Ok(AoIntegrals {
        n_basis: nb,
        overlap,
        kinetic,
        nuclear_attraction: nuclear,
        repulsion,
        nuclear_repulsion,
        n_electrons: geometry.electron_count()? as usize,
    })
}

/// Closed-shell SCF over the AO integrals, then a 4-index transformation
/// into the molecular-orbital basis.
///
/// Convergence: max-abs density change below 1e-10. Damping factor 0.5 is
/// applied on the first five cycles and again on any cycle whose density
/// change fails to shrink; stretched chains oscillate under the plain
/// Roothaan iteration otherwise.
pub fn rhf_solve(ao: &AoIntegrals) -> Result<MolecularIntegrals> {
    rhf_solve_with_history(ao).map(|(mi, _)| mi)
}

/// [`rhf_solve`] plus the per-cycle total-energy history.
pub fn rhf_solve_with_history(ao: &AoIntegrals) -> Result<(MolecularIntegrals, Vec<f64>)> {
    let nb = ao.n_basis;
    let n_electrons = ao.n_electrons;
    if n_electrons % 2 != 0 {
        return Err(Error::Geometry(format!(
            "restricted SCF needs a closed shell, got {n_electrons} electrons"
        )));
    }
    let n_occ = n_electrons / 2;
    if n_occ > nb {
        return Err(Error::TooManyElectrons {
            electrons: n_electrons,
            modes: 2 * nb,
        });
    }

    let h_core = &ao.kinetic + &ao.nuclear_attraction;

    // symmetric orthogonalization X = S^(-1/2)
    let s_eig = ao.overlap.clone().symmetric_eigen();
    let mut inv_sqrt = DMatrix::zeros(nb, nb);
    for i in 0..nb {
        let ev = s_eig.eigenvalues[i];
        if ev < 1e-10 {
            return Err(Error::InconsistentIntegrals(format!(
                "overlap matrix nearly singular (eigenvalue {ev:.3e})"
            )));
        }
        inv_sqrt[(i, i)] = ev.sqrt().recip();
    }
    let x = &s_eig.eigenvectors * inv_sqrt * s_eig.eigenvectors.transpose();

    let fock_of = |density: &DMatrix<f64>| -> DMatrix<f64> {
        let mut f = h_core.clone();
        for m in 0..nb {
            for n in 0..nb {
                let mut g = 0.0;
                for l in 0..nb {
                    for s in 0..nb {
                        g += density[(l, s)] * (ao.eri(m, n, s, l) - 0.5 * ao.eri(m, l, s, n));
                    }
                }
                f[(m, n)] += g;
            }
        }
        f
    };

    // sorted MO coefficients from a Fock matrix; energy ties break on the
    // original eigen index so degenerate chains stay deterministic
    let solve_fock = |f: &DMatrix<f64>| -> (DVector<f64>, DMatrix<f64>) {
        let fp = x.transpose() * f * &x;
        let eig = fp.symmetric_eigen();
        let mut order: Vec<usize> = (0..nb).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut eps = DVector::zeros(nb);
        let mut c = DMatrix::zeros(nb, nb);
        for (slot, &src) in order.iter().enumerate() {
            eps[slot] = eig.eigenvalues[src];
            let col = &x * eig.eigenvectors.column(src);
            // fix the sign so the largest-magnitude component is positive
            let mut lead = 0;
            for r in 1..nb {
                if col[r].abs() > col[lead].abs() {
                    lead = r;
                }
            }
            let sign = if col[lead] < 0.0 { -1.0 } else { 1.0 };
            c.set_column(slot, &(col * sign));
        }
        (eps, c)
    };

    let mut density = DMatrix::<f64>::zeros(nb, nb);
    let mut last_delta = f64::INFINITY;
    let mut converged = false;
    let mut history = Vec::new();
    for cycle in 0..200 {
        let f = fock_of(&density);
        let (_, c) = solve_fock(&f);
        let occ = c.columns(0, n_occ);
        let mut new_density = 2.0 * &occ * occ.transpose();
        let raw_delta = (&new_density - &density)
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        if cycle < 5 || raw_delta >= last_delta {
            new_density = 0.5 * &new_density + 0.5 * &density;
        }
        last_delta = (&new_density - &density)
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max);
        density = new_density;
        let f_now = fock_of(&density);
        let electronic: f64 = 0.5
            * density
                .iter()
                .zip((&h_core + &f_now).iter())
                .map(|(d, hf)| d * hf)
                .sum::<f64>();
        history.push(electronic + ao.nuclear_repulsion);
        if last_delta < 1e-10 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ScfNotConverged {
            cycles: 200,
            last_delta,
        });
    }

    let f = fock_of(&density);
    let (eps, c) = solve_fock(&f);
    let electronic: f64 = 0.5
        * density
            .iter()
            .zip((&h_core + &f).iter())
            .map(|(d, hf)| d * hf)
            .sum::<f64>();
    let scf_energy = electronic + ao.nuclear_repulsion;

    let one_mo = c.transpose() * &h_core * &c;
    let eri_mo = transform_eri(&ao.repulsion, &c, nb);

    Ok((
        MolecularIntegrals {
            n_spatial: nb,
            core_energy: ao.nuclear_repulsion,
            one_body: one_mo,
            two_body: eri_mo,
            orbital_energies: eps.iter().copied().collect(),
            n_alpha: n_occ,
            n_beta: n_occ,
            scf_energy: Some(scf_energy),
        },
        history,
    ))
}

/// One index at a time: four O(N^5) quarter transformations. Each pass
/// contracts the last axis with C and cycles it to the front, so four
/// passes restore the original axis order fully transformed.
fn transform_eri(eri: &[f64], c: &DMatrix<f64>, nb: usize) -> Vec<f64> {
    let idx = |p: usize, q: usize, r: usize, s: usize| ((p * nb + q) * nb + r) * nb + s;
    let mut cur = eri.to_vec();
    for _pass in 0..4 {
        let mut next = vec![0.0; cur.len()];
        for a in 0..nb {
            for b in 0..nb {
                for d in 0..nb {
                    for mo in 0..nb {
                        let mut acc = 0.0;
                        for ao_i in 0..nb {
                            acc += cur[idx(a, b, d, ao_i)] * c[(ao_i, mo)];
                        }
                        next[idx(mo, a, b, d)] = acc;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// Parse an FCIDUMP stream into integrals with full 8-fold symmetry
/// completion.
///
/// Record patterns: `(0,0,0,0)` core energy, `(i,0,0,0)` orbital energy,
/// `(i,j,0,0)` one-body, `(i,j,k,l)` two-body in chemists' notation, all
/// indices 1-based. When no orbital-energy records appear, diagonal Fock
/// elements computed from the first `min(n_alpha, n_beta)` occupied
/// orbitals fill in.
pub fn parse_fcidump<R: BufRead>(reader: R, path: &str) -> Result<MolecularIntegrals> {
    let err = |line: usize, message: String| Error::FcidumpParse {
        path: path.to_string(),
        line,
        message,
    };

    let mut lines = Vec::new();
    for (i, l) in reader.lines().enumerate() {
        lines.push((i + 1, l?));
    }
    let mut it = lines.iter();

    // namelist header: &FCI ... terminated by / or &END
    let mut header = String::new();
    let mut header_end = 0;
    let mut started = false;
    let mut terminated = false;
    for (lineno, line) in it.by_ref() {
        let t = line.trim();
        if !started {
            if !t.to_uppercase().starts_with("&FCI") {
                return Err(err(*lineno, format!("expected &FCI namelist, got {t:?}")));
            }
            started = true;
            header.push_str(&t[4..]);
        } else {
            header.push(' ');
            header.push_str(t);
        }
        header_end = *lineno;
        let upper = header.to_uppercase();
        if upper.contains('/') || upper.contains("&END") {
            terminated = true;
            break;
        }
    }
    if !started || !terminated {
        return Err(err(header_end, "unterminated &FCI namelist".into()));
    }
    let header = header
        .replace("&END", "")
        .replace("&end", "")
        .replace('/', " ");

    let mut norb: Option<usize> = None;
    let mut nelec: Option<usize> = None;
    let mut ms2: i32 = 0;
    for piece in header.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        if let Some((key, value)) = piece.split_once('=') {
            let key = key.trim().to_uppercase();
            let value = value.trim();
            match key.as_str() {
                "NORB" => {
                    norb = Some(
                        value
                            .parse()
                            .map_err(|_| err(header_end, format!("bad NORB value {value:?}")))?,
                    )
                }
                "NELEC" => {
                    nelec = Some(
                        value
                            .parse()
                            .map_err(|_| err(header_end, format!("bad NELEC value {value:?}")))?,
                    )
                }
                "MS2" => {
                    ms2 = value
                        .parse()
                        .map_err(|_| err(header_end, format!("bad MS2 value {value:?}")))?
                }
                _ => {} // ORBSYM, ISYM and friends are accepted and ignored
            }
        }
    }
    let norb = norb.ok_or_else(|| err(header_end, "header missing NORB".into()))?;
    let nelec = nelec.ok_or_else(|| err(header_end, "header missing NELEC".into()))?;
    if (nelec as i64 + ms2 as i64) % 2 != 0 || (nelec as i64) < ms2.abs() as i64 {
        return Err(err(
            header_end,
            format!("NELEC={nelec} and MS2={ms2} are inconsistent"),
        ));
    }
    let n_alpha = ((nelec as i64 + ms2 as i64) / 2) as usize;
    let n_beta = nelec - n_alpha;

    let mut mi = MolecularIntegrals {
        n_spatial: norb,
        core_energy: 0.0,
        one_body: DMatrix::zeros(norb, norb),
        two_body: vec![0.0; norb * norb * norb * norb],
        orbital_energies: vec![0.0; norb],
        n_alpha,
        n_beta,
        scf_energy: None,
    };
    let mut have_orbital_energies = false;

    for (lineno, line) in it {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(
                *lineno,
                format!("expected `value i j k l`, got {} fields", fields.len()),
            ));
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| err(*lineno, format!("non-numeric value {:?}", fields[0])))?;
        let mut idx = [0usize; 4];
        for (slot, f) in fields[1..].iter().enumerate() {
            idx[slot] = f
                .parse()
                .map_err(|_| err(*lineno, format!("non-integer index {f:?}")))?;
            if idx[slot] > norb {
                return Err(err(
                    *lineno,
                    format!("index {} out of range for NORB={norb}", idx[slot]),
                ));
            }
        }
        match idx {
            [0, 0, 0, 0] => mi.core_energy = value,
            [i, 0, 0, 0] => {
                mi.orbital_energies[i - 1] = value;
                have_orbital_energies = true;
            }
            [i, j, 0, 0] if i > 0 && j > 0 => {
                mi.one_body[(i - 1, j - 1)] = value;
                mi.one_body[(j - 1, i - 1)] = value;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
                for (a, b, c, d) in [
                    (i, j, k, l),
                    (j, i, k, l),
                    (i, j, l, k),
                    (j, i, l, k),
                    (k, l, i, j),
                    (l, k, i, j),
                    (k, l, j, i),
                    (l, k, j, i),
                ] {
                    mi.set_two(a, b, c, d, value);
                }
            }
            _ => {
                return Err(err(
                    *lineno,
                    format!("unsupported index pattern {idx:?}"),
                ))
            }
        }
    }

    if !have_orbital_energies {
        let n_occ = n_alpha.min(n_beta);
        for p in 0..norb {
            let mut e = mi.one_body[(p, p)];
            for i in 0..n_occ {
                e += 2.0 * mi.two(p, p, i, i) - mi.two(p, i, i, p);
            }
            mi.orbital_energies[p] = e;
        }
    }
    Ok(mi)
}

/// Write integrals as FCIDUMP: unique-symmetry records only, 17 significant
/// digits, `value i j k l` with 1-based indices.
pub fn write_fcidump<W: Write>(mi: &MolecularIntegrals, writer: &mut W) -> Result<()> {
    let n = mi.n_spatial;
    let nelec = mi.n_electrons();
    let ms2 = mi.n_alpha as i64 - mi.n_beta as i64;
    writeln!(writer, "&FCI NORB={n},NELEC={nelec},MS2={ms2},")?;
    write!(writer, " ORBSYM=")?;
    for _ in 0..n {
        write!(writer, "1,")?;
    }
    writeln!(writer)?;
    writeln!(writer, " ISYM=1,")?;
    writeln!(writer, "&END")?;

    let mut emit = |v: f64, i: usize, j: usize, k: usize, l: usize| -> Result<()> {
        writeln!(writer, " {:.16E} {:4} {:4} {:4} {:4}", v, i, j, k, l)?;
        Ok(())
    };

    for p in 0..n {
        for q in 0..=p {
            for r in 0..=p {
                let s_max = if r == p { q } else { r };
                for s in 0..=s_max {
                    let v = mi.two(p, q, r, s);
                    if v.abs() > 1e-16 {
                        emit(v, p + 1, q + 1, r + 1, s + 1)?;
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..=p {
            let v = mi.one_body[(p, q)];
            if v.abs() > 1e-16 {
                emit(v, p + 1, q + 1, 0, 0)?;
            }
        }
    }
    for (p, &e) in mi.orbital_energies.iter().enumerate() {
        if e.abs() > 1e-16 {
            emit(e, p + 1, 0, 0, 0)?;
        }
    }
    emit(mi.core_energy, 0, 0, 0, 0)?;
    Ok(())
}

/// Full built-in pipeline for hydrogen systems: STO-3G integrals then RHF.
pub fn hydrogen_mo_integrals(geometry: &Geometry) -> Result<MolecularIntegrals> {
    rhf_solve(&sto3g_hydrogen_integrals(geometry)?)
}
