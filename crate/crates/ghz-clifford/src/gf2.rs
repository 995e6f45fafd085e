//! Bit-packed linear algebra over GF(2).
//!
//! Rows are stored as contiguous `u64` words, 64 columns per word. All
//! elimination routines here work on raw bits; callers that need sign
//! tracking (stabilizer phases) layer that on top.

pub const WORD_BITS: usize = 64;

pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols).max(1);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.data[r * self.words_per_row + c / WORD_BITS];
        (w >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// dst ^= src, word by word.
    #[inline]
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let w = self.words_per_row;
        let (s, d) = if src < dst {
            let (a, b) = self.data.split_at_mut(dst * w);
            (&a[src * w..src * w + w], &mut b[..w])
        } else {
            let (a, b) = self.data.split_at_mut(src * w);
            (&b[..w], &mut a[dst * w..dst * w + w])
        };
        for (dw, sw) in d.iter_mut().zip(s) {
            *dw ^= *sw;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for k in 0..w {
            self.data.swap(a * w + k, b * w + k);
        }
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(|&w| w == 0)
    }

    pub fn row_is_zero_on(&self, r: usize, cols: &[usize]) -> bool {
        cols.iter().all(|&c| !self.get(r, c))
    }

    /// Builds a new matrix keeping only the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    /// Gaussian elimination restricted to `pivot_cols`, processed in order.
    /// Each pivot column is cleared from every other row (full reduction).
    /// Returns the (row, col) pivot pairs. Rows that end up with no pivot
    /// carry zero support on all of `pivot_cols`.
    pub fn eliminate_columns(&mut self, pivot_cols: &[usize]) -> Vec<(usize, usize)> {
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut used = vec![false; self.rows];
        for &c in pivot_cols {
            let mut pivot = None;
            for r in 0..self.rows {
                if !used[r] && self.get(r, c) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            used[p] = true;
            for r in 0..self.rows {
                if r != p && self.get(r, c) {
                    self.xor_row_into(p, r);
                }
            }
            pivots.push((p, c));
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut basis = GaussBasis::new(self.words_per_row);
        for r in 0..self.rows {
            basis.insert(self.row(r));
        }
        basis.len()
    }

    /// Rank of the submatrix formed by the given columns.
    pub fn rank_of_columns(&self, cols: &[usize]) -> usize {
        self.select_columns(cols).rank()
    }

    /// Stacks rows of `other` below rows of `self`; column counts must agree.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.words_per_row, other.words_per_row);
        let mut out = BitMatrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.words_per_row);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }
}

/// Incremental GF(2) row basis. Each stored row keeps a distinct leading
/// (lowest set) bit position, which makes reduction a single pass.
pub struct GaussBasis {
    words: usize,
    rows: Vec<Vec<u64>>,
    leads: Vec<usize>,
}

impl GaussBasis {
    pub fn new(words: usize) -> Self {
        GaussBasis {
            words,
            rows: Vec::new(),
            leads: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn lead_bit(row: &[u64]) -> Option<usize> {
        for (w, &word) in row.iter().enumerate() {
            if word != 0 {
                return Some(w * WORD_BITS + word.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Reduces `row` in place against the basis.
    pub fn reduce(&self, row: &mut [u64]) {
        loop {
            let Some(lead) = Self::lead_bit(row) else {
                return;
            };
            match self.leads.iter().position(|&l| l == lead) {
                Some(i) => {
                    for (rw, bw) in row.iter_mut().zip(&self.rows[i]) {
                        *rw ^= *bw;
                    }
                }
                None => return,
            }
        }
    }

    /// Reduces and, if independent, absorbs the row. Returns true when the
    /// row extended the basis.
    pub fn insert(&mut self, row: &[u64]) -> bool {
        assert_eq!(row.len(), self.words);
        let mut r = row.to_vec();
        self.reduce(&mut r);
        match Self::lead_bit(&r) {
            Some(lead) => {
                self.rows.push(r);
                self.leads.push(lead);
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// One-bit-at-a-time elimination, no packing tricks. Test oracle only.
    fn naive_rank(m: &BitMatrix) -> usize {
        let mut grid: Vec<Vec<bool>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..grid.len()).find(|&r| grid[r][c]) else {
                continue;
            };
            grid.swap(rank, p);
            for r in 0..grid.len() {
                if r != rank && grid[r][c] {
                    let (a, b) = if r < rank {
                        let (lo, hi) = grid.split_at_mut(rank);
                        (&mut lo[r], &hi[0])
                    } else {
                        let (lo, hi) = grid.split_at_mut(r);
                        (&mut hi[0], &lo[rank])
                    };
                    for (x, y) in a.iter_mut().zip(b.iter()) {
                        *x ^= *y;
                    }
                }
            }
            rank += 1;
            if rank == grid.len() {
                break;
            }
        }
        rank
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.random_bool(density) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[test]
    fn rank_matches_naive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..20 {
            let rows = 50;
            let cols = 100;
            let density = 0.1 + 0.04 * (trial % 10) as f64;
            let m = random_matrix(&mut rng, rows, cols, density);
            assert_eq!(m.rank(), naive_rank(&m));
        }
    }

    #[test]
    fn rank_of_identity_and_duplicates() {
        let mut m = BitMatrix::zeros(4, 4);
        for i in 0..4 {
            m.set(i, i, true);
        }
        assert_eq!(m.rank(), 4);
        let dup = m.vstack(&m);
        assert_eq!(dup.rank(), 4);
        assert_eq!(BitMatrix::zeros(7, 9).rank(), 0);
    }

    #[test]
    fn eliminate_columns_clears_pivot_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut m = random_matrix(&mut rng, 30, 60, 0.3);
        let before_rank = m.rank();
        let cols: Vec<usize> = (10..25).collect();
        let pivots = m.eliminate_columns(&cols);
        assert_eq!(m.rank(), before_rank);
        assert_eq!(pivots.len(), m.rank_of_columns(&cols));
        let pivot_rows: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
        for r in 0..m.rows() {
            if !pivot_rows.contains(&r) {
                assert!(m.row_is_zero_on(r, &cols), "row {r} not cleared");
            }
        }
        // each pivot column has exactly one set bit, at its pivot row
        for &(pr, pc) in &pivots {
            for r in 0..m.rows() {
                assert_eq!(m.get(r, pc), r == pr);
            }
        }
    }

    #[test]
    fn select_columns_matches_get() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 12, 130, 0.4);
        let cols = [0, 5, 63, 64, 65, 127, 128, 129];
        let s = m.select_columns(&cols);
        for r in 0..m.rows() {
            for (j, &c) in cols.iter().enumerate() {
                assert_eq!(s.get(r, j), m.get(r, c));
            }
        }
    }

    #[test]
    fn basis_reduce_kills_dependent_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 20, 90, 0.3);
        let mut basis = GaussBasis::new(m.words_per_row());
        for r in 0..m.rows() {
            basis.insert(m.row(r));
        }
        // any xor-combination of rows must reduce to zero
        for _ in 0..50 {
            let mut acc = vec![0u64; m.words_per_row()];
            for r in 0..m.rows() {
                if rng.random_bool(0.5) {
                    for (a, b) in acc.iter_mut().zip(m.row(r)) {
                        *a ^= *b;
                    }
                }
            }
            basis.reduce(&mut acc);
            assert!(acc.iter().all(|&w| w == 0));
        }
    }
}
