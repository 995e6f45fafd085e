//! Pauli strings with i-exponent phase tracking.
//!
//! A string is stored as two bit vectors (X part, Z part) plus a phase
//! exponent k meaning an overall factor i^k. Site (x, z) encodes
//! I=(0,0), X=(1,0), Z=(0,1), Y=(1,1) with the convention Y = iXZ, i.e.
//! the operator at a site is i^{xz} X^x Z^z. Hermitian strings have even
//! phase exponent.

use crate::error::{Error, Result};
use crate::gf2::words_for;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }
}

/// Sum over sites, mod 4, of the i-exponents produced when the string with
/// bits (x1, z1) left-multiplies onto (x2, z2). Word-parallel: a site
/// contributes only if the two site operators anticommute, and then
/// contributes +1 exactly when (x2, z2) = (x1 xor z1, x1), else -1.
pub(crate) fn phase_exponent_sum(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u8 {
    let mut pos = 0u64;
    let mut neg = 0u64;
    for w in 0..x1.len() {
        let (a, b, c, d) = (x1[w], z1[w], x2[w], z2[w]);
        let t = (a & d) ^ (b & c);
        let p = t & !(c ^ a ^ b) & !(d ^ a);
        pos += p.count_ones() as u64;
        neg += (t & !p).count_ones() as u64;
    }
    (((pos as i64 - neg as i64).rem_euclid(4)) & 3) as u8
}

pub(crate) fn anticommutes(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> bool {
    let mut acc = 0u64;
    for w in 0..x1.len() {
        acc ^= (x1[w] & z2[w]) ^ (z1[w] & x2[w]);
    }
    acc.count_ones() % 2 == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n).max(1);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    pub fn single(n: usize, qubit: usize, kind: PauliKind) -> Self {
        assert!(qubit < n);
        let mut p = PauliString::identity(n);
        p.set(qubit, kind);
        p
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Phase exponent k in i^k, reduced mod 4.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase & 3;
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn get(&self, qubit: usize) -> PauliKind {
        assert!(qubit < self.n);
        let (w, b) = (qubit / 64, qubit % 64);
        PauliKind::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, kind: PauliKind) {
        assert!(qubit < self.n);
        let (w, b) = (qubit / 64, qubit % 64);
        let (xb, zb) = kind.bits();
        let mask = 1u64 << b;
        if xb {
            self.x[w] |= mask;
        } else {
            self.x[w] &= !mask;
        }
        if zb {
            self.z[w] |= mask;
        } else {
            self.z[w] &= !mask;
        }
    }

    pub(crate) fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>, phase: u8) -> Self {
        PauliString {
            n,
            x,
            z,
            phase: phase & 3,
        }
    }

    /// Parses e.g. "XIZ", "+YY", "-XZ", "iX", "-iZ". Site 0 is leftmost.
    pub fn from_symbols(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix("+i")
            .map(|b| (1u8, b))
            .or_else(|| s.strip_prefix("-i").map(|b| (3u8, b)))
            .or_else(|| s.strip_prefix('i').map(|b| (1u8, b)))
            .or_else(|| s.strip_prefix('+').map(|b| (0u8, b)))
            .or_else(|| s.strip_prefix('-').map(|b| (2u8, b)))
            .unwrap_or((0u8, s));
        let (phase, body) = body;
        if body.is_empty() {
            return Err(Error::Dimension("empty Pauli string".into()));
        }
        let mut p = PauliString::identity(body.len());
        for (q, ch) in body.chars().enumerate() {
            let kind = match ch {
                'I' => PauliKind::I,
                'X' => PauliKind::X,
                'Y' => PauliKind::Y,
                'Z' => PauliKind::Z,
                other => {
                    return Err(Error::Dimension(format!("unknown Pauli symbol '{other}'")));
                }
            };
            p.set(q, kind);
        }
        p.phase = phase;
        Ok(p)
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        let mut w = 0;
        for k in 0..self.x.len() {
            w += (self.x[k] | self.z[k]).count_ones() as usize;
        }
        w
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.get(q) != PauliKind::I)
            .collect()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        assert_eq!(self.n, other.n);
        !anticommutes(&self.x, &self.z, &other.x, &other.z)
    }

    /// self <- self * other, with exact phase bookkeeping.
    pub fn mul_assign(&mut self, other: &PauliString) {
        assert_eq!(self.n, other.n);
        let d = phase_exponent_sum(&self.x, &self.z, &other.x, &other.z);
        self.phase = (self.phase + other.phase + d) & 3;
        for w in 0..self.x.len() {
            self.x[w] ^= other.x[w];
            self.z[w] ^= other.z[w];
        }
    }

    pub fn product(mut a: PauliString, b: &PauliString) -> PauliString {
        a.mul_assign(b);
        a
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for q in 0..self.n {
            let ch = match self.get(q) {
                PauliKind::I => 'I',
                PauliKind::X => 'X',
                PauliKind::Y => 'Y',
                PauliKind::Z => 'Z',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}
