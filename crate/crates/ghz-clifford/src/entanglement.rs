//! Entanglement structure of stabilizer states.
//!
//! Everything here reduces to GF(2) ranks of the generator matrix restricted
//! to column subsets:
//! - entropy of a subset = rank(columns of the subset) - |subset|;
//! - the subgroup trivial on a party is spanned by the rows left without a
//!   pivot after eliminating that party's columns;
//! - the GHZ count over an n-party split is the generator deficit of the
//!   union of those subgroups (halved for bipartitions, where every deficit
//!   pair is one Bell pair across the cut);
//! - tripartition Bell-pair counts follow from the subgroup dimensions by
//!   counting degrees of freedom.
//!
//! All outputs are exact integers.

use crate::error::{Error, Result};
use crate::gf2::GaussBasis;
use crate::partition::Partition;
use crate::tableau::StabilizerTableau;

/// GHZ and Bell content of a tripartition, plus the purely local generator
/// counts per party.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhzDecomposition {
    /// Number of GHZ triples shared by all three parties.
    pub ghz: usize,
    /// Bell pairs across (A,B), (B,C), (A,C).
    pub bell: [usize; 3],
    /// Independent generators supported entirely inside A, B, C.
    pub local_dims: [usize; 3],
}

impl GhzDecomposition {
    pub fn bell_ab(&self) -> usize {
        self.bell[0]
    }
    pub fn bell_bc(&self) -> usize {
        self.bell[1]
    }
    pub fn bell_ac(&self) -> usize {
        self.bell[2]
    }
}

fn check_partition(t: &StabilizerTableau, partition: &Partition) -> Result<()> {
    if partition.n_qubits() != t.n_qubits() {
        return Err(Error::Dimension(format!(
            "partition covers {} qubits, state has {}",
            partition.n_qubits(),
            t.n_qubits()
        )));
    }
    Ok(())
}

/// Both X and Z columns of every qubit in `qubits`.
fn pauli_columns(t: &StabilizerTableau, qubits: &[usize]) -> Vec<usize> {
    let mut cols = Vec::with_capacity(2 * qubits.len());
    for &q in qubits {
        cols.push(t.x_col(q));
    }
    for &q in qubits {
        cols.push(t.z_col(q));
    }
    cols
}

fn validate_subset(t: &StabilizerTableau, subset: &[usize]) -> Result<()> {
    let mut seen = vec![false; t.n_qubits()];
    for &q in subset {
        if q >= t.n_qubits() {
            return Err(Error::Dimension(format!(
                "qubit {q} out of range for n = {}",
                t.n_qubits()
            )));
        }
        if seen[q] {
            return Err(Error::Dimension(format!("duplicate qubit {q} in subset")));
        }
        seen[q] = true;
    }
    Ok(())
}

/// Von Neumann entropy of a subset in bits: rank of the generator matrix
/// restricted to the subset's columns, minus the subset size. Empty and full
/// subsets give 0.
pub fn entanglement_entropy(t: &StabilizerTableau, subset: &[usize]) -> Result<usize> {
    validate_subset(t, subset)?;
    if subset.is_empty() || subset.len() == t.n_qubits() {
        return Ok(0);
    }
    let rank = t.bit_matrix().rank_of_columns(&pauli_columns(t, subset));
    debug_assert!(rank >= subset.len());
    Ok(rank - subset.len())
}

/// I(A : C) = S_A + S_C - S_{A union C} for disjoint subsets.
pub fn mutual_information(t: &StabilizerTableau, a: &[usize], c: &[usize]) -> Result<usize> {
    validate_subset(t, a)?;
    validate_subset(t, c)?;
    if a.iter().any(|q| c.contains(q)) {
        return Err(Error::Dimension("subsets overlap".into()));
    }
    let mut union: Vec<usize> = a.iter().chain(c.iter()).copied().collect();
    union.sort_unstable();
    let sa = entanglement_entropy(t, a)?;
    let sc = entanglement_entropy(t, c)?;
    let sac = entanglement_entropy(t, &union)?;
    debug_assert!(sa + sc >= sac);
    Ok(sa + sc - sac)
}

/// Rows spanning the subgroup of the stabilizer group that acts trivially on
/// `qubits`, as raw bit rows of the tableau layout.
fn trivial_subgroup_rows(t: &StabilizerTableau, qubits: &[usize]) -> Vec<Vec<u64>> {
    let cols = pauli_columns(t, qubits);
    let mut m = t.bit_matrix().clone();
    let pivots = m.eliminate_columns(&cols);
    let mut is_pivot = vec![false; m.rows()];
    for &(r, _) in &pivots {
        is_pivot[r] = true;
    }
    (0..m.rows())
        .filter(|&r| !is_pivot[r])
        .map(|r| m.row(r).to_vec())
        .collect()
}

fn ghz_raw_deficit(t: &StabilizerTableau, partition: &Partition) -> (usize, GaussBasis) {
    let mut basis = GaussBasis::new(t.bit_matrix().words_per_row());
    for party in 0..partition.n_parties() {
        let qubits = partition.party_qubits(party);
        for row in trivial_subgroup_rows(t, &qubits) {
            basis.insert(&row);
        }
    }
    (t.n_qubits() - basis.len(), basis)
}

/// Number of n-party GHZ states in the canonical decomposition of the state
/// over the given partition. For bipartitions this equals the entanglement
/// entropy across the cut.
pub fn ghz_index(t: &StabilizerTableau, partition: &Partition) -> Result<usize> {
    check_partition(t, partition)?;
    let (raw, _) = ghz_raw_deficit(t, partition);
    if partition.n_parties() == 2 {
        if raw % 2 != 0 {
            return Err(Error::Consistency(format!(
                "bipartition deficit {raw} is odd"
            )));
        }
        Ok(raw / 2)
    } else {
        Ok(raw)
    }
}

/// Same count, computed by extending a basis of the union of trivial
/// subgroups with original generators. Every extension generator must act on
/// all parties at once; this is checked and makes the routine an internal
/// cross-check for [`ghz_index`].
pub fn ghz_index_by_extension(t: &StabilizerTableau, partition: &Partition) -> Result<usize> {
    check_partition(t, partition)?;
    let (_, mut basis) = ghz_raw_deficit(t, partition);
    let mut added = 0usize;
    for r in 0..t.n_qubits() {
        let mut row = t.bit_matrix().row(r).to_vec();
        basis.reduce(&mut row);
        if row.iter().all(|&w| w == 0) {
            continue;
        }
        // the reduced element is outside every party-trivial subgroup, so it
        // must touch all parties
        for party in 0..partition.n_parties() {
            let qubits = partition.party_qubits(party);
            let touches = qubits.iter().any(|&q| {
                let (xw, xb) = (t.x_col(q) / 64, t.x_col(q) % 64);
                let (zw, zb) = (t.z_col(q) / 64, t.z_col(q) % 64);
                (row[xw] >> xb) & 1 == 1 || (row[zw] >> zb) & 1 == 1
            });
            if !touches {
                return Err(Error::Consistency(format!(
                    "extension generator {r} misses party {party}"
                )));
            }
        }
        assert!(basis.insert(&row));
        added += 1;
    }
    if partition.n_parties() == 2 {
        if added % 2 != 0 {
            return Err(Error::Consistency(format!(
                "bipartition extension count {added} is odd"
            )));
        }
        Ok(added / 2)
    } else {
        Ok(added)
    }
}

/// Full tripartite decomposition: GHZ triples, pairwise Bell counts, and
/// local generator dimensions. Checks the exact counting identity
/// 3g + 2(n_ab + n_bc + n_ac) + s_a + s_b + s_c = N.
pub fn bell_counts(t: &StabilizerTableau, partition: &Partition) -> Result<GhzDecomposition> {
    check_partition(t, partition)?;
    if partition.n_parties() != 3 {
        return Err(Error::InvalidPartition(format!(
            "Bell decomposition needs 3 parties, got {}",
            partition.n_parties()
        )));
    }
    let n = t.n_qubits();
    let ghz = ghz_index(t, partition)?;
    let m = t.bit_matrix();

    let mut party_rank = [0usize; 3];
    let mut local_dims = [0usize; 3];
    for i in 0..3 {
        let inside = partition.party_qubits(i);
        party_rank[i] = m.rank_of_columns(&pauli_columns(t, &inside));
        let outside: Vec<usize> = (0..n)
            .filter(|q| partition.label(*q) as usize != i)
            .collect();
        local_dims[i] = n - m.rank_of_columns(&pauli_columns(t, &outside));
    }

    let mut bell = [0usize; 3];
    // pair (i, j) with complementary party k
    for (slot, (i, j, k)) in [(0, 1, 2), (1, 2, 0), (0, 2, 1)].into_iter().enumerate() {
        let num = n
            .checked_sub(party_rank[k] + ghz + local_dims[i] + local_dims[j])
            .ok_or_else(|| Error::Consistency("negative Bell count".into()))?;
        if num % 2 != 0 {
            return Err(Error::Consistency(format!(
                "odd Bell numerator {num} for pair ({i},{j})"
            )));
        }
        bell[slot] = num / 2;
    }

    let total = 3 * ghz + 2 * (bell[0] + bell[1] + bell[2]) + local_dims.iter().sum::<usize>();
    if total != n {
        return Err(Error::Consistency(format!(
            "decomposition sums to {total}, expected {n}"
        )));
    }
    Ok(GhzDecomposition {
        ghz,
        bell,
        local_dims,
    })
}
