//! The two-qubit Clifford group, up to global phase.
//!
//! A gate is stored as its action by conjugation on the Pauli group: a 4x4
//! symplectic matrix over GF(2) (columns = images of X1, Z1, X2, Z2 in the
//! bit order x1, z1, x2, z2) together with one sign bit per generator image.
//! There are 720 symplectic matrices and 16 sign patterns, 11520 gates in
//! total, in bijection with the physical group mod phase.
//!
//! Conjugation of arbitrary two-site Paulis is precomputed into a 16-entry
//! table per gate, so applying a gate to a tableau row costs one lookup.

use crate::error::{Error, Result};
use crate::pauli::{PauliKind, PauliString};
use rand::Rng;
use std::sync::OnceLock;

pub const N_SYMPLECTIC: usize = 720;
pub const N_GATES: usize = N_SYMPLECTIC * 16;

/// Symplectic form on 4-bit vectors: pairs (x1,z1) and (x2,z2).
#[inline]
fn form(u: u8, v: u8) -> u8 {
    let m = (u & 1) * ((v >> 1) & 1)
        + ((u >> 1) & 1) * (v & 1)
        + ((u >> 2) & 1) * ((v >> 3) & 1)
        + ((u >> 3) & 1) * ((v >> 2) & 1);
    m & 1
}

/// Two-site Pauli with the site convention of [`PauliString`].
fn pauli2(bits: u8, phase: u8) -> PauliString {
    let mut p = PauliString::identity(2);
    p.set(0, PauliKind::from_bits(bits & 1 == 1, (bits >> 1) & 1 == 1));
    p.set(
        1,
        PauliKind::from_bits((bits >> 2) & 1 == 1, (bits >> 3) & 1 == 1),
    );
    p.set_phase(phase);
    p
}

fn pauli2_bits(p: &PauliString) -> u8 {
    let (x1, z1) = p.get(0).bits();
    let (x2, z2) = p.get(1).bits();
    (x1 as u8) | (z1 as u8) << 1 | (x2 as u8) << 2 | (z2 as u8) << 3
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TwoQubitClifford {
    cols: [u8; 4],
    signs: u8,
    lut: [(u8, u8); 16],
}

impl TwoQubitClifford {
    /// Validates that the column images preserve the symplectic form.
    pub fn is_symplectic(cols: &[u8; 4]) -> bool {
        const LAMBDA: [[u8; 4]; 4] = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
        for i in 0..4 {
            for j in (i + 1)..4 {
                if form(cols[i], cols[j]) != LAMBDA[i][j] {
                    return false;
                }
            }
        }
        true
    }

    pub fn from_parts(cols: [u8; 4], signs: u8) -> Result<Self> {
        if cols.iter().any(|&c| c >= 16) || signs >= 16 {
            return Err(Error::InvalidGate(
                "column or sign bits out of range".into(),
            ));
        }
        if !Self::is_symplectic(&cols) {
            return Err(Error::InvalidGate(
                "images do not preserve the symplectic form".into(),
            ));
        }
        Ok(Self::from_parts_unchecked(cols, signs))
    }

    fn from_parts_unchecked(cols: [u8; 4], signs: u8) -> Self {
        let mut lut = [(0u8, 0u8); 16];
        for bits in 0..16u8 {
            let (a, b, c, d) = (bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1);
            // sigma1(a,b) sigma2(c,d) = i^{ab+cd} X1^a Z1^b X2^c Z2^d; conjugate
            // each bare factor in order and track the full phase.
            let mut acc = pauli2(0, (a * b + c * d) % 4);
            for (j, &e) in [a, b, c, d].iter().enumerate() {
                if e == 1 {
                    let sign = (signs >> j) & 1;
                    acc.mul_assign(&pauli2(cols[j], 2 * sign));
                }
            }
            let out = pauli2_bits(&acc);
            let delta = acc.phase();
            debug_assert!(delta % 2 == 0);
            lut[bits as usize] = (out, delta);
        }
        TwoQubitClifford { cols, signs, lut }
    }

    /// Image of a two-site Pauli under conjugation: bits -> (bits, i-exponent
    /// delta, always 0 or 2).
    #[inline]
    pub fn conjugate_bits(&self, bits: u8) -> (u8, u8) {
        self.lut[bits as usize]
    }

    pub fn symplectic(&self) -> [u8; 4] {
        self.cols
    }

    pub fn signs(&self) -> u8 {
        self.signs
    }

    /// Conjugates a two-qubit [`PauliString`] (n = 2), phases included.
    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        if p.n_qubits() != 2 {
            return Err(Error::Dimension(format!(
                "expected a 2-qubit Pauli, got {}",
                p.n_qubits()
            )));
        }
        let (out, delta) = self.conjugate_bits(pauli2_bits(p));
        Ok(pauli2(out, (p.phase() + delta) & 3))
    }

    /// Uniform over all 11520 gates: uniform symplectic class, then four
    /// independent sign bits. Consumes exactly two RNG draws.
    pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let table = symplectic_table();
        let idx = rng.random_range(0..table.len());
        let signs = rng.random_range(0..16u8);
        Self::from_parts_unchecked(table[idx], signs)
    }

    /// self after other (other acts first).
    pub fn compose(&self, other: &Self) -> Self {
        let mut cols = [0u8; 4];
        let mut signs = 0u8;
        for j in 0..4 {
            let (b1, p1) = other.conjugate_bits(1 << j);
            let (b2, p2) = self.conjugate_bits(b1);
            let total = (p1 + p2) & 3;
            debug_assert!(total == 0 || total == 2);
            cols[j] = b2;
            signs |= ((total == 2) as u8) << j;
        }
        Self::from_parts_unchecked(cols, signs)
    }

    pub fn inverse(&self) -> Self {
        // invert the 4x4 GF(2) matrix by Gauss-Jordan on (M | I), row-major
        let mut rows = [0u8; 4];
        for i in 0..4 {
            for j in 0..4 {
                if (self.cols[j] >> i) & 1 == 1 {
                    rows[i] |= 1 << j;
                }
            }
        }
        let mut inv_rows: [u8; 4] = [1, 2, 4, 8];
        for col in 0..4 {
            let pivot = (col..4).find(|&r| (rows[r] >> col) & 1 == 1);
            let p = pivot.expect("symplectic matrix is invertible");
            rows.swap(col, p);
            inv_rows.swap(col, p);
            for r in 0..4 {
                if r != col && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[col];
                    inv_rows[r] ^= inv_rows[col];
                }
            }
        }
        let mut cols_inv = [0u8; 4];
        for i in 0..4 {
            for j in 0..4 {
                if (inv_rows[i] >> j) & 1 == 1 {
                    cols_inv[j] |= 1 << i;
                }
            }
        }
        let mut signs = 0u8;
        for j in 0..4 {
            let (b, p) = self.conjugate_bits(cols_inv[j]);
            debug_assert_eq!(b, 1 << j);
            debug_assert!(p % 2 == 0);
            signs |= ((p == 2) as u8) << j;
        }
        Self::from_parts_unchecked(cols_inv, signs)
    }

    pub fn identity() -> Self {
        Self::from_parts_unchecked([1, 2, 4, 8], 0)
    }

    /// Control on the first qubit, target on the second.
    pub fn cnot() -> Self {
        Self::from_parts_unchecked([0b0101, 0b0010, 0b0100, 0b1010], 0)
    }

    pub fn swap() -> Self {
        Self::from_parts_unchecked([0b0100, 0b1000, 0b0001, 0b0010], 0)
    }

    pub fn cz() -> Self {
        Self::from_parts_unchecked([0b1001, 0b0010, 0b0110, 0b1000], 0)
    }

    /// Hadamard on the first qubit, identity on the second.
    pub fn hadamard_q1() -> Self {
        Self::from_parts_unchecked([0b0010, 0b0001, 0b0100, 0b1000], 0)
    }

    /// Phase gate S on the first qubit: X -> Y, Z -> Z.
    pub fn phase_q1() -> Self {
        Self::from_parts_unchecked([0b0011, 0b0010, 0b0100, 0b1000], 0)
    }
}

/// All 720 symplectic 4x4 matrices over GF(2), enumerated once.
pub fn symplectic_table() -> &'static [[u8; 4]] {
    static TABLE: OnceLock<Vec<[u8; 4]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(N_SYMPLECTIC);
        for code in 0..(1u32 << 16) {
            let cols = [
                (code & 0xF) as u8,
                ((code >> 4) & 0xF) as u8,
                ((code >> 8) & 0xF) as u8,
                ((code >> 12) & 0xF) as u8,
            ];
            if TwoQubitClifford::is_symplectic(&cols) {
                out.push(cols);
            }
        }
        assert_eq!(out.len(), N_SYMPLECTIC);
        out
    })
}
