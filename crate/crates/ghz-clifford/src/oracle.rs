//! Brute-force verification oracles.
//!
//! Everything in this module recomputes quantities the tableau side derives
//! algebraically, using representations with no shared code path: a dense
//! statevector (gates as explicit 4x4 unitaries, measurements as projections),
//! reduced-density-matrix entropies, the partial-transpose replica formula
//! for the tripartite GHZ count, exhaustive stabilizer-group enumeration, and
//! the closed-form typicality bound.
//!
//! Dense states are capped at [`MAX_DENSE_QUBITS`] qubits.

use crate::circuit::{level_pairs, CircuitConfig};
use crate::clifford::TwoQubitClifford;
use crate::entanglement::{
    bell_counts, entanglement_entropy, ghz_index, ghz_index_by_extension, mutual_information,
};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::pauli::PauliString;
use crate::tableau::StabilizerTableau;
use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;

pub const MAX_DENSE_QUBITS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn cpow_i(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// 2x2 matrix of a single-site Pauli from its (x, z) bits, convention Y = iXZ.
fn site_matrix(x: bool, z: bool) -> [[Complex64; 2]; 2] {
    match (x, z) {
        (false, false) => [[ONE, ZERO], [ZERO, ONE]],
        (true, false) => [[ZERO, ONE], [ONE, ZERO]],
        (false, true) => [[ONE, ZERO], [ZERO, -ONE]],
        (true, true) => [
            [ZERO, Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), ZERO],
        ],
    }
}

/// 4x4 matrix of a two-site Pauli given its 4-bit code (x1, z1, x2, z2) and a
/// sign. Qubit 1 is the low bit of the dense index.
fn pauli2_matrix(bits: u8, negative: bool) -> Matrix4<Complex64> {
    let m1 = site_matrix(bits & 1 == 1, (bits >> 1) & 1 == 1);
    let m2 = site_matrix((bits >> 2) & 1 == 1, (bits >> 3) & 1 == 1);
    let mut out = Matrix4::zeros();
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let mut v = m1[i1][j1] * m2[i2][j2];
                    if negative {
                        v = -v;
                    }
                    out[(i1 | (i2 << 1), j1 | (j2 << 1))] = v;
                }
            }
        }
    }
    out
}

/// Explicit unitary of a two-qubit Clifford gate, fixed to a canonical global
/// phase (first nonzero entry in column-major order made positive real).
///
/// The matrix is reconstructed from the gate's conjugation action: the image
/// of |00> is the joint +1 eigenvector of the images of Z1 and Z2, and the
/// remaining columns follow by applying the images of X1 and X2.
pub fn clifford_unitary(gate: &TwoQubitClifford) -> Matrix4<Complex64> {
    let image = |basis: u8| -> Matrix4<Complex64> {
        let (bits, delta) = gate.conjugate_bits(basis);
        debug_assert!(delta % 2 == 0);
        pauli2_matrix(bits, delta == 2)
    };
    let img_z1 = image(0b0010);
    let img_z2 = image(0b1000);
    let img_x1 = image(0b0001);
    let img_x2 = image(0b0100);

    let half = Complex64::new(0.5, 0.0);
    let proj = (Matrix4::identity() + img_z1).map(|v| v * half)
        * (Matrix4::identity() + img_z2).map(|v| v * half);
    let mut psi00: Option<Vector4<Complex64>> = None;
    for k in 0..4 {
        let col: Vector4<Complex64> = proj.column(k).into_owned();
        let norm = col.norm();
        if norm > 1e-6 {
            psi00 = Some(col.map(|v| v / Complex64::new(norm, 0.0)));
            break;
        }
    }
    let psi00 = psi00.expect("rank-one projector has a nonzero column");
    let c1 = img_x1 * psi00;
    let c2 = img_x2 * psi00;
    let c3 = img_x1 * c2;
    let mut u = Matrix4::zeros();
    u.set_column(0, &psi00);
    u.set_column(1, &c1);
    u.set_column(2, &c2);
    u.set_column(3, &c3);
    // canonical global phase
    'outer: for c in 0..4 {
        for r in 0..4 {
            let v = u[(r, c)];
            if v.norm() > 1e-8 {
                let lambda = v.conj() / Complex64::new(v.norm(), 0.0);
                u.iter_mut().for_each(|e| *e *= lambda);
                break 'outer;
            }
        }
    }
    debug_assert!((u.adjoint() * u - Matrix4::identity()).norm() < 1e-9);
    u
}

/// Dense statevector for small systems. Qubit q maps to bit q of the basis
/// index.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::DenseTooLarge {
                max: MAX_DENSE_QUBITS,
                got: n,
            });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(DenseState { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a 4x4 unitary on (q1, q2); q1 is the low bit of the gate basis.
    pub fn apply_unitary(&mut self, u: &Matrix4<Complex64>, q1: usize, q2: usize) -> Result<()> {
        if q1 >= self.n || q2 >= self.n || q1 == q2 {
            return Err(Error::Dimension(format!(
                "bad gate qubits ({q1}, {q2}) for n = {}",
                self.n
            )));
        }
        let m1 = 1usize << q1;
        let m2 = 1usize << q2;
        for k in 0..self.amps.len() {
            if k & m1 != 0 || k & m2 != 0 {
                continue;
            }
            let idx = [k, k | m1, k | m2, k | m1 | m2];
            let old = [
                self.amps[idx[0]],
                self.amps[idx[1]],
                self.amps[idx[2]],
                self.amps[idx[3]],
            ];
            for (r, &i) in idx.iter().enumerate() {
                let mut v = ZERO;
                for (c, &o) in old.iter().enumerate() {
                    v += u[(r, c)] * o;
                }
                self.amps[i] = v;
            }
        }
        Ok(())
    }

    pub fn apply_clifford(&mut self, gate: &TwoQubitClifford, q1: usize, q2: usize) -> Result<()> {
        self.apply_unitary(&clifford_unitary(gate), q1, q2)
    }

    /// Projects qubit q onto the Z outcome (false = +1, true = -1),
    /// renormalizes, and returns the pre-projection probability of that
    /// outcome.
    pub fn project_z(&mut self, q: usize, value: bool) -> Result<f64> {
        if q >= self.n {
            return Err(Error::Dimension(format!("qubit {q} out of range")));
        }
        let mask = 1usize << q;
        let keep = |k: usize| ((k & mask) != 0) == value;
        let prob: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(k, _)| keep(*k))
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if prob < 1e-12 {
            return Err(Error::Consistency(format!(
                "projection of qubit {q} onto {} has vanishing probability",
                value as u8
            )));
        }
        let scale = Complex64::new(1.0 / prob.sqrt(), 0.0);
        for (k, a) in self.amps.iter_mut().enumerate() {
            if keep(k) {
                *a *= scale;
            } else {
                *a = ZERO;
            }
        }
        Ok(prob)
    }

    /// <psi| P |psi> for a Pauli string with phases.
    pub fn pauli_expectation(&self, p: &PauliString) -> Result<Complex64> {
        if p.n_qubits() != self.n {
            return Err(Error::Dimension(format!(
                "Pauli on {} qubits, state has {}",
                p.n_qubits(),
                self.n
            )));
        }
        let mut xmask = 0usize;
        let mut zmask = 0usize;
        let mut y_count = 0u8;
        for q in 0..self.n {
            let (x, z) = p.get(q).bits();
            if x {
                xmask |= 1 << q;
            }
            if z {
                zmask |= 1 << q;
            }
            if x && z {
                y_count = (y_count + 1) & 3;
            }
        }
        let front = cpow_i((p.phase() + y_count) & 3);
        let mut acc = ZERO;
        for (k, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            let sign = if ((zmask & k).count_ones()) % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            acc += self.amps[k ^ xmask].conj() * front * Complex64::new(sign, 0.0) * a;
        }
        Ok(acc)
    }

    fn compress(k: usize, positions: &[usize]) -> usize {
        positions
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &q)| acc | (((k >> q) & 1) << i))
    }

    fn reduced_density(&self, subset: &[usize]) -> DMatrix<Complex64> {
        let comp: Vec<usize> = (0..self.n).filter(|q| !subset.contains(q)).collect();
        let da = 1usize << subset.len();
        let db = 1usize << comp.len();
        let mut m = DMatrix::<Complex64>::zeros(da, db);
        for (k, a) in self.amps.iter().enumerate() {
            if *a != ZERO {
                m[(Self::compress(k, subset), Self::compress(k, &comp))] = *a;
            }
        }
        &m * m.adjoint()
    }

    /// Base-2 von Neumann entropy of a subset via eigenvalues of the reduced
    /// density matrix. The state is pure, so the smaller side of the cut is
    /// always the one diagonalized.
    pub fn entropy(&self, subset: &[usize]) -> Result<f64> {
        let mut seen = vec![false; self.n];
        for &q in subset {
            if q >= self.n || seen[q] {
                return Err(Error::Dimension("bad entropy subset".into()));
            }
            seen[q] = true;
        }
        if subset.is_empty() || subset.len() == self.n {
            return Ok(0.0);
        }
        let side: Vec<usize> = if 2 * subset.len() <= self.n {
            subset.to_vec()
        } else {
            (0..self.n).filter(|q| !subset.contains(q)).collect()
        };
        let rho = self.reduced_density(&side);
        let mut s = 0.0;
        for l in hermitian_eigenvalues(&rho) {
            if l > 1e-12 {
                s -= l * l.log2();
            }
        }
        Ok(s)
    }

    pub fn mutual_information(&self, a: &[usize], c: &[usize]) -> Result<f64> {
        if a.iter().any(|q| c.contains(q)) {
            return Err(Error::Dimension("subsets overlap".into()));
        }
        let mut u: Vec<usize> = a.iter().chain(c.iter()).copied().collect();
        u.sort_unstable();
        Ok(self.entropy(a)? + self.entropy(c)? - self.entropy(&u)?)
    }

    /// Tripartite GHZ count from the replica identity
    /// g3 = log2 Tr[(rho_AB^{T_B})^3] + S(A) + S(B) + S(C).
    /// On stabilizer input the result must be integral; deviations beyond
    /// 1e-4 are reported as consistency failures.
    pub fn g3_replica(&self, partition: &Partition) -> Result<f64> {
        if partition.n_qubits() != self.n {
            return Err(Error::Dimension("partition size mismatch".into()));
        }
        if partition.n_parties() != 3 {
            return Err(Error::InvalidPartition(
                "replica formula needs 3 parties".into(),
            ));
        }
        let a = partition.party_qubits(0);
        let b = partition.party_qubits(1);
        let c = partition.party_qubits(2);
        let (da, db, dc) = (1usize << a.len(), 1usize << b.len(), 1usize << c.len());
        let ab: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
        let mut m = DMatrix::<Complex64>::zeros(da * db, dc);
        for (k, amp) in self.amps.iter().enumerate() {
            if *amp != ZERO {
                m[(Self::compress(k, &ab), Self::compress(k, &c))] = *amp;
            }
        }
        let rho = &m * m.adjoint();
        // partial transpose on B: composite index a + da * b
        let mut rt = DMatrix::<Complex64>::zeros(da * db, da * db);
        for a1 in 0..da {
            for b1 in 0..db {
                for a2 in 0..da {
                    for b2 in 0..db {
                        rt[(a1 + da * b1, a2 + da * b2)] = rho[(a1 + da * b2, a2 + da * b1)];
                    }
                }
            }
        }
        let cube = (&rt * &rt) * &rt;
        let t3 = cube.trace();
        if t3.im.abs() > 1e-9 || t3.re <= 0.0 {
            return Err(Error::Consistency(format!(
                "replica trace is not a positive real: {t3}"
            )));
        }
        let value = t3.re.log2() + self.entropy(&a)? + self.entropy(&b)? + self.entropy(&c)?;
        if (value - value.round()).abs() > 1e-4 {
            return Err(Error::Consistency(format!(
                "replica count {value} is not integral"
            )));
        }
        Ok(value)
    }
}

/// Eigenvalues of a Hermitian matrix H = A + iB through the real symmetric
/// embedding [[A, -B], [B, A]], whose spectrum is that of H with every
/// eigenvalue doubled. The complex-valued symmetric eigensolver is not
/// reliable on rank-deficient input; the real one is.
fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let d = h.nrows();
    debug_assert_eq!(d, h.ncols());
    let mut m = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            // symmetrize against rounding while unpacking
            let re = 0.5 * (h[(i, j)].re + h[(j, i)].re);
            let im = 0.5 * (h[(i, j)].im - h[(j, i)].im);
            m[(i, j)] = re;
            m[(i + d, j + d)] = re;
            m[(i, j + d)] = -im;
            m[(i + d, j)] = im;
        }
    }
    let eig = m.symmetric_eigenvalues();
    let mut out: Vec<f64> = eig.iter().cloned().collect();
    // keep one copy of each doubled eigenvalue
    out.sort_by(|a, b| a.total_cmp(b));
    out.into_iter().step_by(2).collect()
}

/// GHZ count by exhaustive enumeration of the full stabilizer group: every
/// element trivial on at least one party is collected and the deficit of
/// their span is counted with plain one-bit-at-a-time elimination. Usable up
/// to ~20 qubits.
pub fn ghz_index_brute(t: &StabilizerTableau, partition: &Partition) -> Result<usize> {
    let n = t.n_qubits();
    if partition.n_qubits() != n {
        return Err(Error::Dimension("partition size mismatch".into()));
    }
    if n > 20 {
        return Err(Error::Dimension(format!(
            "group enumeration infeasible for n = {n}"
        )));
    }
    let m = t.bit_matrix();
    let words = m.words_per_row();
    // per party: (word, mask) pairs covering its X and Z columns
    let party_masks: Vec<Vec<(usize, u64)>> = (0..partition.n_parties())
        .map(|party| {
            let mut masks = vec![0u64; words];
            for q in partition.party_qubits(party) {
                for col in [t.x_col(q), t.z_col(q)] {
                    masks[col / 64] |= 1u64 << (col % 64);
                }
            }
            masks
                .into_iter()
                .enumerate()
                .filter(|&(_, mask)| mask != 0)
                .collect()
        })
        .collect();

    let mut acc = vec![0u64; words];
    let mut collected: Vec<Vec<u64>> = Vec::new();
    for i in 1usize..(1 << n) {
        let j = i.trailing_zeros() as usize;
        for (w, word) in acc.iter_mut().enumerate() {
            *word ^= m.row(j)[w];
        }
        let trivial_somewhere = party_masks
            .iter()
            .any(|masks| masks.iter().all(|&(w, mask)| acc[w] & mask == 0));
        if trivial_somewhere {
            collected.push(acc.clone());
        }
    }

    // plain elimination, no packed-word shortcuts
    let total_cols = 2 * n;
    let col_index: Vec<usize> = (0..n)
        .map(|q| t.x_col(q))
        .chain((0..n).map(|q| t.z_col(q)))
        .collect();
    let mut grid: Vec<Vec<bool>> = collected
        .iter()
        .map(|row| {
            col_index
                .iter()
                .map(|&c| (row[c / 64] >> (c % 64)) & 1 == 1)
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    for c in 0..total_cols {
        let Some(p) = (rank..grid.len()).find(|&r| grid[r][c]) else {
            continue;
        };
        grid.swap(rank, p);
        for r in 0..grid.len() {
            if r != rank && grid[r][c] {
                let (dst, src) = if r < rank {
                    let (lo, hi) = grid.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = grid.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                for (x, y) in dst.iter_mut().zip(src.iter()) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    let raw = n - rank;
    if partition.n_parties() == 2 {
        if raw % 2 != 0 {
            return Err(Error::Consistency(format!("odd bipartite deficit {raw}")));
        }
        Ok(raw / 2)
    } else {
        Ok(raw)
    }
}

/// log2(2^n + k) without overflow.
fn log2_pow2_plus(n: usize, k: f64) -> f64 {
    let n = n as f64;
    n + (1.0 + k * (-n * std::f64::consts::LN_2).exp()).log2()
}

fn log2_sum_exp(vals: &[f64]) -> f64 {
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m.is_infinite() {
        return m;
    }
    let sum: f64 = vals.iter().map(|&v| 2f64.powf(v - m)).sum();
    m + sum.log2()
}

/// Closed-form upper bound on the mean tripartite GHZ count of uniformly
/// random stabilizer states:
/// log2[3*2^{-N} + (2^{2Na} + 2^{2Nb} + 2^{2Nc}) / ((2^N+1)(2^N+2))]
/// plus the maximal entropies min(Ni, N - Ni). Evaluated in log space so it
/// stays finite for any N. Approaches log2(3) for balanced partitions and 0
/// once one party holds at least half the qubits.
pub fn typicality_bound(n: usize, sizes: [usize; 3]) -> Result<f64> {
    if sizes.iter().any(|&s| s == 0) || sizes.iter().sum::<usize>() != n {
        return Err(Error::InvalidPartition(format!(
            "party sizes {sizes:?} do not fill {n} qubits"
        )));
    }
    let c = log2_pow2_plus(n, 1.0) + log2_pow2_plus(n, 2.0);
    let mut exps = vec![(3f64).log2() - n as f64];
    for &s in &sizes {
        exps.push(2.0 * s as f64 - c);
    }
    let log_term = log2_sum_exp(&exps);
    let ent_max: usize = sizes.iter().map(|&s| s.min(n - s)).sum();
    Ok(log_term + ent_max as f64)
}

/// Summary of one mirrored trajectory.
#[derive(Clone, Copy, Debug, Default)]
pub struct MirrorReport {
    pub layers_checked: usize,
    pub comparisons: usize,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Runs one monitored trajectory simultaneously on the tableau and on a
/// dense statevector, consuming the identical RNG stream, and cross-checks
/// after every layer:
/// - each stabilizer generator has dense expectation +1;
/// - measurement outcome probabilities are exactly 0.5 (random) or 1
///   (deterministic);
/// - the GHZ count agrees across the deficit path, the basis-extension path,
///   the exhaustive group enumeration, and (for 3 parties) the dense replica
///   formula;
/// - subsystem entropies and I(A:C) agree with reduced-density-matrix values;
/// - tripartite Bell counts satisfy their entropy identities.
pub fn run_mirrored_trajectory<R: Rng + ?Sized>(
    cfg: &CircuitConfig,
    partitions: &[Partition],
    rng: &mut R,
) -> Result<MirrorReport> {
    cfg.validate()?;
    let n = cfg.n_qubits;
    let mut t = StabilizerTableau::new_product_state(n)?;
    let mut d = DenseState::zero_state(n)?;
    let mut report = MirrorReport::default();

    for layer in 1..=cfg.depth_layers {
        for parity in 0..2 {
            for (q1, q2) in level_pairs(n, parity, cfg.boundary) {
                let gate = TwoQubitClifford::sample_uniform(rng);
                t.apply_clifford(&gate, q1, q2)?;
                d.apply_clifford(&gate, q1, q2)?;
            }
            for q in 0..n {
                if rng.random_bool(cfg.meas_prob) {
                    let outcome = t.measure_z(q, rng)?;
                    let prob = d.project_z(q, outcome.value)?;
                    let expected = if outcome.deterministic { 1.0 } else { 0.5 };
                    if !close(prob, expected, 1e-6) {
                        return Err(Error::Consistency(format!(
                            "layer {layer}: outcome probability {prob} (expected {expected}) on qubit {q}"
                        )));
                    }
                    report.comparisons += 1;
                }
            }
        }

        t.check_invariants()?;
        for i in 0..n {
            let e = d.pauli_expectation(&t.generator(i))?;
            if (e - ONE).norm() > 1e-6 {
                return Err(Error::Consistency(format!(
                    "layer {layer}: generator {i} expectation {e}"
                )));
            }
            report.comparisons += 1;
        }

        for part in partitions {
            let g = ghz_index(&t, part)?;
            let g_ext = ghz_index_by_extension(&t, part)?;
            let g_brute = ghz_index_brute(&t, part)?;
            if g != g_ext || g != g_brute {
                return Err(Error::Consistency(format!(
                    "layer {layer}: GHZ count disagreement {g} / {g_ext} / {g_brute}"
                )));
            }
            report.comparisons += 2;

            let k = part.n_parties();
            for i in 0..k {
                let qs = part.party_qubits(i);
                let s_t = entanglement_entropy(&t, &qs)? as f64;
                let s_d = d.entropy(&qs)?;
                if !close(s_t, s_d, 1e-6) {
                    return Err(Error::Consistency(format!(
                        "layer {layer}: entropy of party {i} is {s_t} vs dense {s_d}"
                    )));
                }
                report.comparisons += 1;
            }
            if k >= 3 {
                let a = part.party_qubits(0);
                let c = part.party_qubits(2);
                let mi_t = mutual_information(&t, &a, &c)? as f64;
                let mi_d = d.mutual_information(&a, &c)?;
                if !close(mi_t, mi_d, 1e-6) {
                    return Err(Error::Consistency(format!(
                        "layer {layer}: I(A:C) is {mi_t} vs dense {mi_d}"
                    )));
                }
                report.comparisons += 1;
            }
            if k == 3 {
                let g_replica = d.g3_replica(part)?;
                if !close(g_replica, g as f64, 1e-4) {
                    return Err(Error::Consistency(format!(
                        "layer {layer}: replica count {g_replica} vs tableau {g}"
                    )));
                }
                let dec = bell_counts(&t, part)?;
                let s_a = entanglement_entropy(&t, &part.party_qubits(0))?;
                if s_a != dec.ghz + dec.bell_ab() + dec.bell_ac() {
                    return Err(Error::Consistency(format!(
                        "layer {layer}: S_A identity violated"
                    )));
                }
                let mi = mutual_information(&t, &part.party_qubits(0), &part.party_qubits(2))?;
                if mi != dec.ghz + 2 * dec.bell_ac() {
                    return Err(Error::Consistency(format!(
                        "layer {layer}: I(A:C) identity violated"
                    )));
                }
                report.comparisons += 3;
            }
        }
        report.layers_checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_realize_the_conjugation_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut gates = vec![
            TwoQubitClifford::identity(),
            TwoQubitClifford::cnot(),
            TwoQubitClifford::swap(),
            TwoQubitClifford::cz(),
            TwoQubitClifford::hadamard_q1(),
            TwoQubitClifford::phase_q1(),
        ];
        for _ in 0..150 {
            gates.push(TwoQubitClifford::sample_uniform(&mut rng));
        }
        for g in &gates {
            let u = clifford_unitary(g);
            assert!((u.adjoint() * u - Matrix4::identity()).norm() < 1e-9);
            for bits in 1..16u8 {
                let (out, delta) = g.conjugate_bits(bits);
                let lhs = u * pauli2_matrix(bits, false) * u.adjoint();
                let rhs = pauli2_matrix(out, false) * cpow_i(delta);
                assert!(
                    (lhs - rhs).norm() < 1e-9,
                    "gate {:?} input {bits}",
                    g.symplectic()
                );
            }
        }
    }

    #[test]
    fn cnot_unitary_matrix() {
        let u = clifford_unitary(&TwoQubitClifford::cnot());
        // |00> -> |00>, |10> -> |11> (control is the low bit)
        let expect = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert_abs_diff_eq!(u[(r, c)].re, expect[r][c], epsilon = 1e-12);
                assert_abs_diff_eq!(u[(r, c)].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    fn dense_bell() -> DenseState {
        let mut d = DenseState::zero_state(2).unwrap();
        d.apply_clifford(&TwoQubitClifford::hadamard_q1(), 0, 1)
            .unwrap();
        d.apply_clifford(&TwoQubitClifford::cnot(), 0, 1).unwrap();
        d
    }

    #[test]
    fn bell_state_amplitudes_and_entropy() {
        let d = dense_bell();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(d.amplitudes()[0].re, r, epsilon = 1e-12);
        assert_abs_diff_eq!(d.amplitudes()[3].re, r, epsilon = 1e-12);
        assert!(d.amplitudes()[1].norm() < 1e-12);
        assert_abs_diff_eq!(d.entropy(&[0]).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            d.mutual_information(&[0], &[1]).unwrap(),
            2.0,
            epsilon = 1e-9
        );
        let x = PauliString::from_symbols("+XX").unwrap();
        let e = d.pauli_expectation(&x).unwrap();
        assert_abs_diff_eq!(e.re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn projection_probabilities() {
        let mut d = dense_bell();
        let p = d.project_z(0, true).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
        // the partner is now pinned
        let p = d.project_z(1, true).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        assert!(d.project_z(0, false).is_err(), "orthogonal branch");
    }

    #[test]
    fn replica_counts_ghz_and_ignores_bell_ladders() {
        // three-qubit GHZ, one per party
        let mut d = DenseState::zero_state(3).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        d.amps[0] = Complex64::new(r, 0.0);
        d.amps[7] = Complex64::new(r, 0.0);
        let part = Partition::new(vec![0, 1, 2]).unwrap();
        assert_abs_diff_eq!(d.g3_replica(&part).unwrap(), 1.0, epsilon = 1e-9);

        // Bell pairs (0,1) and (2,3): A={0}, B={1,2}, C={3} sees no GHZ
        let mut d = DenseState::zero_state(4).unwrap();
        d.amps[0] = ONE;
        d.apply_clifford(&TwoQubitClifford::hadamard_q1(), 0, 1)
            .unwrap();
        d.apply_clifford(&TwoQubitClifford::cnot(), 0, 1).unwrap();
        d.apply_clifford(&TwoQubitClifford::hadamard_q1(), 2, 3)
            .unwrap();
        d.apply_clifford(&TwoQubitClifford::cnot(), 2, 3).unwrap();
        let part = Partition::new(vec![0, 1, 1, 2]).unwrap();
        assert_abs_diff_eq!(d.g3_replica(&part).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn brute_enumeration_matches_algebraic_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..30 {
            let n = 9;
            let mut t = StabilizerTableau::new_product_state(n).unwrap();
            for _ in 0..60 {
                let g = TwoQubitClifford::sample_uniform(&mut rng);
                let q1 = rng.random_range(0..n);
                let mut q2 = rng.random_range(0..n);
                while q2 == q1 {
                    q2 = rng.random_range(0..n);
                }
                t.apply_clifford(&g, q1, q2).unwrap();
                if rng.random_bool(0.1) {
                    let q = rng.random_range(0..n);
                    t.measure_z(q, &mut rng).unwrap();
                }
            }
            for blocks in [vec![3usize, 3, 3], vec![2, 3, 2, 2], vec![4, 5]] {
                let part = Partition::from_blocks(&blocks).unwrap();
                assert_eq!(
                    ghz_index(&t, &part).unwrap(),
                    ghz_index_brute(&t, &part).unwrap(),
                    "blocks {blocks:?}"
                );
            }
        }
    }

    #[test]
    fn typicality_bound_limits() {
        // balanced, large N: approaches log2(3)
        let b = typicality_bound(300, [100, 100, 100]).unwrap();
        assert_abs_diff_eq!(b, 3f64.log2(), epsilon = 1e-9);
        // majority party: collapses to zero
        let b = typicality_bound(300, [160, 70, 70]).unwrap();
        assert!(b.abs() < 1e-3, "majority bound {b}");
        let b = typicality_bound(300, [200, 50, 50]).unwrap();
        assert!(b.abs() < 1e-3, "majority bound {b}");
        assert!(typicality_bound(10, [5, 5, 5]).is_err());
        assert!(typicality_bound(10, [0, 5, 5]).is_err());
    }

    #[test]
    fn typicality_bound_small_n_matches_direct_evaluation() {
        for (n, sizes) in [(12usize, [4usize, 4, 4]), (12, [8, 2, 2]), (9, [3, 3, 3])] {
            let d = 2f64.powi(n as i32);
            let direct = (3.0 / d
                + sizes.iter().map(|&s| 2f64.powi(2 * s as i32)).sum::<f64>()
                    / ((d + 1.0) * (d + 2.0)))
                .log2()
                + sizes.iter().map(|&s| s.min(n - s) as f64).sum::<f64>();
            let b = typicality_bound(n, sizes).unwrap();
            assert_abs_diff_eq!(b, direct, epsilon = 1e-9);
        }
        // the N = 12 balanced bound is comfortably above log2(3) - delta
        let b = typicality_bound(12, [4, 4, 4]).unwrap();
        assert!(b > 1.5 && b < 1.8, "bound {b}");
    }

    #[test]
    fn mirrored_trajectory_passes() {
        let cfg = CircuitConfig {
            depth_layers: 5,
            ..CircuitConfig::new(6, 0.2)
        };
        let parts = vec![
            Partition::from_blocks(&[2, 2, 2]).unwrap(),
            Partition::from_blocks(&[3, 3]).unwrap(),
            Partition::from_blocks(&[1, 2, 2, 1]).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let report = run_mirrored_trajectory(&cfg, &parts, &mut rng).unwrap();
        assert_eq!(report.layers_checked, 5);
        assert!(report.comparisons > 100);
    }

    #[test]
    fn mirrored_trajectory_periodic() {
        let cfg = CircuitConfig {
            depth_layers: 4,
            boundary: crate::circuit::Boundary::Periodic,
            ..CircuitConfig::new(6, 0.15)
        };
        let parts = vec![Partition::from_blocks(&[2, 2, 2]).unwrap()];
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        run_mirrored_trajectory(&cfg, &parts, &mut rng).unwrap();
    }
}
