//! Stabilizer tableau: N commuting Pauli generators for N qubits.
//!
//! Rows live in one bit matrix with the X block in columns [0, n) and the
//! Z block starting at a word-aligned offset, so each row splits into two
//! equal word slices for phase arithmetic. Signs are i-exponents per row,
//! always 0 or 2 between operations.
//!
//! Measurements follow the usual stabilizer update. A measurement with no
//! anticommuting generator is deterministic; its sign is resolved by a
//! phase-tracked elimination that rewrites the target Z as a product of
//! generators.

use crate::clifford::TwoQubitClifford;
use crate::error::{Error, Result};
use crate::gf2::{words_for, BitMatrix};
use crate::pauli::{anticommutes, phase_exponent_sum, PauliString};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasurementOutcome {
    /// Measured eigenvalue bit: false for +1, true for -1.
    pub value: bool,
    /// True when the outcome was forced by the pre-measurement state.
    pub deterministic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    xw: usize,
    mat: BitMatrix,
    phases: Vec<u8>,
}

impl StabilizerTableau {
    /// |0...0>, stabilized by +Z on every qubit.
    pub fn new_product_state(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("need at least one qubit".into()));
        }
        let xw = words_for(n);
        let mut mat = BitMatrix::zeros(n, 2 * xw * 64);
        for q in 0..n {
            mat.set(q, xw * 64 + q, true);
        }
        Ok(StabilizerTableau {
            n,
            xw,
            mat,
            phases: vec![0; n],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Column index of the X bit of qubit q in the backing matrix.
    #[inline]
    pub fn x_col(&self, q: usize) -> usize {
        q
    }

    /// Column index of the Z bit of qubit q in the backing matrix.
    #[inline]
    pub fn z_col(&self, q: usize) -> usize {
        self.xw * 64 + q
    }

    pub fn bit_matrix(&self) -> &BitMatrix {
        &self.mat
    }

    fn row_split(&self, r: usize) -> (&[u64], &[u64]) {
        self.mat.row(r).split_at(self.xw)
    }

    pub fn generator(&self, i: usize) -> PauliString {
        let (x, z) = self.row_split(i);
        PauliString::from_words(self.n, x.to_vec(), z.to_vec(), self.phases[i])
    }

    pub fn generators(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.generator(i)).collect()
    }

    /// Builds a tableau from a complete commuting independent generator set.
    pub fn from_generators(gens: &[PauliString]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidGenerators("empty generator list".into()));
        }
        let n = gens[0].n_qubits();
        if gens.len() != n {
            return Err(Error::InvalidGenerators(format!(
                "need exactly {n} generators for {n} qubits, got {}",
                gens.len()
            )));
        }
        let mut t = StabilizerTableau::new_product_state(n)?;
        for (i, g) in gens.iter().enumerate() {
            if g.n_qubits() != n {
                return Err(Error::InvalidGenerators("mixed qubit counts".into()));
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidGenerators(format!(
                    "generator {i} has odd i-exponent, not a sign"
                )));
            }
            if g.is_identity() {
                return Err(Error::InvalidGenerators(format!(
                    "generator {i} is identity"
                )));
            }
            for q in 0..n {
                let (xb, zb) = g.get(q).bits();
                t.mat.set(i, t.x_col(q), xb);
                t.mat.set(i, t.z_col(q), zb);
            }
            t.phases[i] = g.phase();
        }
        t.check_invariants()?;
        Ok(t)
    }

    /// Pairwise commutation, full rank, and valid signs.
    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..self.n {
            if self.phases[i] % 2 != 0 {
                return Err(Error::InvalidGenerators(format!(
                    "generator {i} carries an odd i-exponent"
                )));
            }
            let (xi, zi) = self.row_split(i);
            for j in (i + 1)..self.n {
                let (xj, zj) = self.row_split(j);
                if anticommutes(xi, zi, xj, zj) {
                    return Err(Error::InvalidGenerators(format!(
                        "generators {i} and {j} anticommute"
                    )));
                }
            }
        }
        if self.mat.rank() != self.n {
            return Err(Error::InvalidGenerators(
                "generator set is linearly dependent".into(),
            ));
        }
        Ok(())
    }

    /// row dst <- row dst * row src, sign included.
    pub(crate) fn row_mul(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let (xd, zd) = self.row_split(dst);
        let (xs, zs) = self.row_split(src);
        let d = phase_exponent_sum(xd, zd, xs, zs);
        self.phases[dst] = (self.phases[dst] + self.phases[src] + d) & 3;
        self.mat.xor_row_into(src, dst);
    }

    /// Conjugates every generator by a two-qubit gate acting on (q1, q2).
    pub fn apply_clifford(&mut self, gate: &TwoQubitClifford, q1: usize, q2: usize) -> Result<()> {
        if q1 >= self.n || q2 >= self.n {
            return Err(Error::Dimension(format!(
                "qubits ({q1}, {q2}) out of range for n = {}",
                self.n
            )));
        }
        if q1 == q2 {
            return Err(Error::Dimension("gate qubits must differ".into()));
        }
        let (xc1, zc1) = (self.x_col(q1), self.z_col(q1));
        let (xc2, zc2) = (self.x_col(q2), self.z_col(q2));
        for r in 0..self.n {
            let bits = (self.mat.get(r, xc1) as u8)
                | (self.mat.get(r, zc1) as u8) << 1
                | (self.mat.get(r, xc2) as u8) << 2
                | (self.mat.get(r, zc2) as u8) << 3;
            let (out, delta) = gate.conjugate_bits(bits);
            if out != bits {
                self.mat.set(r, xc1, out & 1 == 1);
                self.mat.set(r, zc1, (out >> 1) & 1 == 1);
                self.mat.set(r, xc2, (out >> 2) & 1 == 1);
                self.mat.set(r, zc2, (out >> 3) & 1 == 1);
            }
            if delta != 0 {
                self.phases[r] = (self.phases[r] + delta) & 3;
            }
        }
        Ok(())
    }

    /// Measures Z on qubit q, updating the state and reporting the outcome.
    pub fn measure_z<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        rng: &mut R,
    ) -> Result<MeasurementOutcome> {
        if q >= self.n {
            return Err(Error::Dimension(format!(
                "qubit {q} out of range for n = {}",
                self.n
            )));
        }
        let xc = self.x_col(q);
        let pivot = (0..self.n).find(|&r| self.mat.get(r, xc));
        match pivot {
            Some(p) => {
                for r in 0..self.n {
                    if r != p && self.mat.get(r, xc) {
                        self.row_mul(r, p);
                    }
                }
                let coin = rng.random_bool(0.5);
                let row = self.mat.row_mut(p);
                row.fill(0);
                row[self.xw + q / 64] |= 1 << (q % 64);
                self.phases[p] = if coin { 2 } else { 0 };
                Ok(MeasurementOutcome {
                    value: coin,
                    deterministic: false,
                })
            }
            None => {
                let value = self.resolve_deterministic_z(q);
                Ok(MeasurementOutcome {
                    value,
                    deterministic: true,
                })
            }
        }
    }

    /// Sign of Z_q as a member of the stabilizer group: phase-tracked
    /// elimination to express Z_q as a product of generators, then read the
    /// residual sign. Only called when no generator has X support on q.
    fn resolve_deterministic_z(&self, q: usize) -> bool {
        let mut scratch = self.clone();
        let mut used = vec![false; self.n];
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let cols: Vec<usize> = (0..self.n)
            .map(|c| scratch.x_col(c))
            .chain((0..self.n).map(|c| scratch.z_col(c)))
            .collect();
        for &c in &cols {
            let Some(p) = (0..self.n).find(|&r| !used[r] && scratch.mat.get(r, c)) else {
                continue;
            };
            used[p] = true;
            for r in 0..self.n {
                if r != p && scratch.mat.get(r, c) {
                    scratch.row_mul(r, p);
                }
            }
            pivots.push((p, c));
        }
        // accumulate the product of pivot rows that build Z_q
        let mut tx = vec![0u64; self.xw];
        let mut tz = vec![0u64; self.xw];
        let mut tphase: u8 = 0;
        tz[q / 64] |= 1 << (q % 64);
        for &(p, c) in &pivots {
            let on = if c < scratch.xw * 64 {
                // X-block column: target has no X support, never set
                (tx[c / 64] >> (c % 64)) & 1 == 1
            } else {
                let zq = c - scratch.xw * 64;
                (tz[zq / 64] >> (zq % 64)) & 1 == 1
            };
            if on {
                let (px, pz) = scratch.row_split(p);
                let d = phase_exponent_sum(&tx, &tz, px, pz);
                tphase = (tphase + scratch.phases[p] + d) & 3;
                for w in 0..scratch.xw {
                    tx[w] ^= px[w];
                    tz[w] ^= pz[w];
                }
            }
        }
        debug_assert!(tx.iter().all(|&w| w == 0) && tz.iter().all(|&w| w == 0));
        debug_assert!(tphase % 2 == 0);
        // Z_q * R = i^tphase I with R the accumulated generator product, so
        // the group contains i^tphase Z_q
        tphase == 2
    }

    /// Strips all signs. Useful for sign-independence checks.
    pub fn zero_phases(&mut self) {
        self.phases.iter_mut().for_each(|p| *p = 0);
    }
}
