//! Symplectic Pauli-string algebra.
//!
//! A Pauli string is stored as a pair of bitmasks: qubit `q` carries X iff
//! `x_bits[q] & !z_bits[q]`, Z iff `z_bits[q] & !x_bits[q]`, Y iff both bits
//! are set. The accumulated phase of any product lives in the complex
//! coefficient, so deduplication by `(x_bits, z_bits)` key is exact and
//! multiplication is a handful of word operations.
//!
//! Dense realizations use the global little-endian convention: qubit 0 is
//! the least significant bit of the basis index.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result, DROP_TOLERANCE};

/// Dense-matrix realization guard; 2^12 x 2^12 complex is 256 MiB.
pub const DENSE_QUBIT_GUARD: usize = 12;

/// A single Pauli string with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    n_qubits: usize,
    x_bits: u64,
    z_bits: u64,
    coefficient: Complex64,
}

impl PauliTerm {
    /// Term from raw symplectic masks.
    pub fn new(n_qubits: usize, x_bits: u64, z_bits: u64, coefficient: Complex64) -> Result<Self> {
        if n_qubits > 64 {
            return Err(Error::RegisterTooLarge {
                n_qubits,
                max_qubits: 64,
            });
        }
        let valid = if n_qubits == 64 {
            u64::MAX
        } else {
            (1u64 << n_qubits) - 1
        };
        for (mask, name) in [(x_bits, "x"), (z_bits, "z")] {
            if mask & !valid != 0 {
                let _ = name;
                return Err(Error::QubitOutOfRange {
                    index: (63 - (mask & !valid).leading_zeros()) as usize,
                    n_qubits,
                });
            }
        }
        Ok(Self {
            n_qubits,
            x_bits,
            z_bits,
            coefficient,
        })
    }

    /// The identity string with coefficient 1.
    pub fn identity(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            x_bits: 0,
            z_bits: 0,
            coefficient: Complex64::new(1.0, 0.0),
        }
    }

    /// Single-letter constructor; `letter` is one of `'X'`, `'Y'`, `'Z'`.
    pub fn single(n_qubits: usize, qubit: usize, letter: char, coefficient: Complex64) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits,
            });
        }
        let bit = 1u64 << qubit;
        let (x, z) = match letter {
            'X' => (bit, 0),
            'Y' => (bit, bit),
            'Z' => (0, bit),
            _ => (0, 0),
        };
        Self::new(n_qubits, x, z, coefficient)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_bits(&self) -> u64 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z_bits
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    pub fn is_identity_string(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Same letters, rescaled coefficient.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            coefficient: self.coefficient * factor,
            ..*self
        }
    }

    /// Same letters, coefficient replaced by 1.
    pub fn unit(&self) -> Self {
        Self {
            coefficient: Complex64::new(1.0, 0.0),
            ..*self
        }
    }

    /// Hermitian conjugate: Pauli letters are self-adjoint, so only the
    /// coefficient is conjugated.
    pub fn adjoint(&self) -> Self {
        Self {
            coefficient: self.coefficient.conj(),
            ..*self
        }
    }

    /// Operator product `self * rhs` as a single term.
    ///
    /// Writing each letter as i^(x&z) X^x Z^z, commuting the inner X^x Z^z
    /// pair costs (-1)^(z_l & x_r) and the phase regroups into a power of i
    /// folded into the coefficient.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.n_qubits != rhs.n_qubits {
            return Err(Error::SizeMismatch {
                left: self.n_qubits,
                right: rhs.n_qubits,
            });
        }
        let x = self.x_bits ^ rhs.x_bits;
        let z = self.z_bits ^ rhs.z_bits;
        let exponent = ((self.x_bits & self.z_bits).count_ones() as i64
            + (rhs.x_bits & rhs.z_bits).count_ones() as i64
            - (x & z).count_ones() as i64
            + 2 * (self.z_bits & rhs.x_bits).count_ones() as i64)
            .rem_euclid(4);
        let phase = match exponent {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Ok(Self {
            n_qubits: self.n_qubits,
            x_bits: x,
            z_bits: z,
            coefficient: self.coefficient * rhs.coefficient * phase,
        })
    }

    /// Action on a computational basis state: `P|c> = phase * |c ^ x_bits>`.
    ///
    /// The returned phase includes the coefficient.
    pub fn apply_to_basis_state(&self, state: u64) -> (u64, Complex64) {
        let y_count = (self.x_bits & self.z_bits).count_ones() % 4;
        let i_pow = match y_count {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let sign = if (state & self.z_bits).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        (state ^ self.x_bits, self.coefficient * i_pow * sign)
    }

    /// Dense matrix, little-endian basis ordering.
    pub fn to_dense_matrix(&self, max_qubits: usize) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > max_qubits {
            return Err(Error::RegisterTooLarge {
                n_qubits: self.n_qubits,
                max_qubits,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, phase) = self.apply_to_basis_state(col as u64);
            m[(row as usize, col)] += phase;
        }
        Ok(m)
    }

    /// Human-readable letters, e.g. `X0 Z2 Y5`; identity renders as `I`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for q in 0..self.n_qubits {
            let bit = 1u64 << q;
            let x = self.x_bits & bit != 0;
            let z = self.z_bits & bit != 0;
            match (x, z) {
                (true, false) => parts.push(format!("X{q}")),
                (false, true) => parts.push(format!("Z{q}")),
                (true, true) => parts.push(format!("Y{q}")),
                (false, false) => {}
            }
        }
        if parts.is_empty() {
            "I".to_string()
        } else {
            parts.join(" ")
        }
    }
}

/// A deduplicated sum of Pauli strings over a fixed register.
///
/// Terms are keyed by `(x_bits, z_bits)`; iteration order is the key order,
/// so reductions over a sum are deterministic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge a term into the sum; keys whose merged coefficient falls below
    /// the drop tolerance are removed.
    pub fn add_term(&mut self, term: &PauliTerm) -> Result<()> {
        if term.n_qubits != self.n_qubits {
            return Err(Error::SizeMismatch {
                left: self.n_qubits,
                right: term.n_qubits,
            });
        }
        let key = (term.x_bits, term.z_bits);
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += term.coefficient;
        if entry.norm() < DROP_TOLERANCE {
            self.terms.remove(&key);
        }
        Ok(())
    }

    /// Merge an entire sum, term by term.
    pub fn add_sum(&mut self, other: &PauliSum) -> Result<()> {
        for term in other.iter() {
            self.add_term(&term)?;
        }
        Ok(())
    }

    /// Terms in key order.
    pub fn iter(&self) -> impl Iterator<Item = PauliTerm> + '_ {
        self.terms.iter().map(|(&(x, z), &c)| PauliTerm {
            n_qubits: self.n_qubits,
            x_bits: x,
            z_bits: z,
            coefficient: c,
        })
    }

    /// Coefficient of the identity string.
    pub fn constant(&self) -> Complex64 {
        self.terms
            .get(&(0, 0))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest |Im(coefficient)| over all terms; a Hermitian operator has
    /// this at roundoff level.
    pub fn max_imag_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max)
    }

    /// Operator product, expanded term by term.
    pub fn multiply(&self, rhs: &PauliSum) -> Result<PauliSum> {
        let mut out = PauliSum::new(self.n_qubits);
        for a in self.iter() {
            for b in rhs.iter() {
                out.add_term(&a.multiply(&b)?)?;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        for ((x, z), c) in &self.terms {
            let c = c * factor;
            if c.norm() >= DROP_TOLERANCE {
                out.terms.insert((*x, *z), c);
            }
        }
        out
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        for ((x, z), c) in &self.terms {
            out.terms.insert((*x, *z), c.conj());
        }
        out
    }

    /// Dense matrix of the whole sum, little-endian.
    pub fn to_dense_matrix(&self, max_qubits: usize) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > max_qubits {
            return Err(Error::RegisterTooLarge {
                n_qubits: self.n_qubits,
                max_qubits,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for term in self.iter() {
            for col in 0..dim {
                let (row, phase) = term.apply_to_basis_state(col as u64);
                m[(row as usize, col)] += phase;
            }
        }
        Ok(m)
    }

    /// `Re <psi|O|psi>` by per-term bitmask application; no matrix is ever
    /// materialized. Terms are visited in key order and summed sequentially,
    /// so the result is bit-reproducible.
    pub fn expectation(&self, amplitudes: &[Complex64]) -> Result<f64> {
        let dim = 1usize << self.n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::SizeMismatch {
                left: amplitudes.len(),
                right: dim,
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized {
                deviation: (norm - 1.0).abs(),
            });
        }
        // Visit only the exactly-nonzero support; particle-preserving
        // circuits keep most of the register at exact zero. Skipped entries
        // contribute +0.0, so the fixed ascending summation order (and with
        // it bit-reproducibility) is unchanged.
        let support: Vec<(u64, Complex64)> = amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
            .map(|(c, &a)| (c as u64, a))
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for term in self.iter() {
            let y_count = (term.x_bits & term.z_bits).count_ones() % 4;
            let i_pow = match y_count {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            let base = term.coefficient * i_pow;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(c, a) in &support {
                let sign = if (c & term.z_bits).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                acc += amplitudes[(c ^ term.x_bits) as usize].conj() * a * sign;
            }
            total += base * acc;
        }
        Ok(total.re)
    }

    /// One term per line: `<coeff_re> <coeff_im> <label>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for term in self.iter() {
            out.push_str(&format!(
                "{:.17e} {:.17e} {}\n",
                term.coefficient.re,
                term.coefficient.im,
                term.label()
            ));
        }
        out
    }

    /// Parse the `to_text` format.
    pub fn from_text(n_qubits: usize, text: &str) -> Result<PauliSum> {
        let mut sum = PauliSum::new(n_qubits);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let bad = |msg: &str| Error::FcidumpParse {
                path: "<pauli text>".into(),
                line: lineno + 1,
                message: msg.into(),
            };
            let re: f64 = fields
                .next()
                .ok_or_else(|| bad("missing real part"))?
                .parse()
                .map_err(|_| bad("bad real part"))?;
            let im: f64 = fields
                .next()
                .ok_or_else(|| bad("missing imaginary part"))?
                .parse()
                .map_err(|_| bad("bad imaginary part"))?;
            let mut x = 0u64;
            let mut z = 0u64;
            for token in fields {
                if token == "I" {
                    continue;
                }
                let (letter, idx) = token.split_at(1);
                let q: usize = idx.parse().map_err(|_| bad("bad qubit index"))?;
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange {
                        index: q,
                        n_qubits,
                    });
                }
                let bit = 1u64 << q;
                match letter {
                    "X" => x |= bit,
                    "Y" => {
                        x |= bit;
                        z |= bit;
                    }
                    "Z" => z |= bit,
                    _ => return Err(bad("unknown Pauli letter")),
                }
            }
            sum.add_term(&PauliTerm::new(n_qubits, x, z, Complex64::new(re, im))?)?;
        }
        Ok(sum)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.6}{:+.6}i) {}", self.coefficient.re, self.coefficient.im, self.label())
    }
}
