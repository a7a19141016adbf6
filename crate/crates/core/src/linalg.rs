//! Exact linear algebra: dense bitset GF(2) elimination with kernel/image
//! bases and subquotient coordinates, and Smith normal form over arbitrary
//! precision integers.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A GF(2) row vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    pub words: Vec<u64>,
    pub len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }
    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }
    pub fn xor_in(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    pub fn first_set(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// A GF(2) matrix stored as rows.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    pub rows: Vec<BitVec>,
    pub ncols: usize,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix {
            rows: (0..nrows).map(|_| BitVec::zeros(ncols)).collect(),
            ncols,
        }
    }
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }
    pub fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix-vector product (rows dot v).
    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = 0u64;
            for (a, b) in row.words.iter().zip(&v.words) {
                acc ^= a & b;
            }
            out.set(r, acc.count_ones() % 2 == 1);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new(self.ncols);
        for row in &self.rows {
            elim.insert(row.clone());
        }
        elim.rank()
    }

    /// Basis of `{x : M x = 0}` where `x` ranges over column vectors;
    /// returned as vectors of length `ncols`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        // column-style: row reduce, find pivot columns
        let mut rows: Vec<BitVec> = self.rows.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (col, row index into reduced)
        let mut reduced: Vec<BitVec> = Vec::new();
        for mut row in rows.drain(..) {
            for &(c, ri) in &pivots {
                if row.get(c) {
                    let other = reduced[ri].clone();
                    row.xor_in(&other);
                }
            }
            if let Some(c) = row.first_set() {
                pivots.push((c, reduced.len()));
                reduced.push(row);
            }
        }
        // back-substitute to full RREF
        for i in (0..pivots.len()).rev() {
            let (c, ri) = pivots[i];
            for j in 0..i {
                let (_, rj) = pivots[j];
                if reduced[rj].get(c) {
                    let other = reduced[ri].clone();
                    reduced[rj].xor_in(&other);
                }
            }
        }
        let pivot_cols: std::collections::HashSet<usize> =
            pivots.iter().map(|&(c, _)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = BitVec::zeros(self.ncols);
            v.set(free, true);
            for &(c, ri) in &pivots {
                if reduced[ri].get(free) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Incremental GF(2) eliminator with optional augmentation tracking.
pub struct Eliminator {
    ncols: usize,
    /// (pivot column, reduced row, augmentation)
    rows: Vec<(usize, BitVec, BitVec)>,
    aug_len: usize,
    inserted: usize,
}

impl Eliminator {
    pub fn new(ncols: usize) -> Self {
        Eliminator {
            ncols,
            rows: Vec::new(),
            aug_len: 0,
            inserted: 0,
        }
    }

    pub fn with_aug(ncols: usize, aug_len: usize) -> Self {
        Eliminator {
            ncols,
            rows: Vec::new(),
            aug_len,
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: BitVec) -> bool {
        let aug = if self.aug_len > 0 {
            let mut a = BitVec::zeros(self.aug_len);
            if self.inserted < self.aug_len {
                a.set(self.inserted, true);
            }
            a
        } else {
            BitVec::zeros(0)
        };
        self.inserted += 1;
        self.insert_with_aug(row, aug).is_none()
    }

    /// Insert with explicit augmentation. Returns `Some(combination)` if the
    /// row reduced to zero (it was dependent), expressed in augmentation
    /// coordinates.
    pub fn insert_with_aug(&mut self, mut row: BitVec, mut aug: BitVec) -> Option<BitVec> {
        assert_eq!(row.len, self.ncols);
        loop {
            let Some(lead) = row.first_set() else {
                return Some(aug);
            };
            match self.rows.binary_search_by(|probe| probe.0.cmp(&lead)) {
                Ok(idx) => {
                    let (prow, paug) = {
                        let r = &self.rows[idx];
                        (r.1.clone(), r.2.clone())
                    };
                    row.xor_in(&prow);
                    aug.xor_in(&paug);
                }
                Err(idx) => {
                    self.rows.insert(idx, (lead, row, aug));
                    return None;
                }
            }
        }
    }

    /// Reduce a vector against the current row space without inserting.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut row = v.clone();
        loop {
            let Some(lead) = row.first_set() else {
                return row;
            };
            match self.rows.binary_search_by(|probe| probe.0.cmp(&lead)) {
                Ok(idx) => {
                    let prow = self.rows[idx].1.clone();
                    row.xor_in(&prow);
                }
                Err(_) => return row,
            }
        }
    }

    /// Membership of v in the row space, with the combination if tracked.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let mut row = v.clone();
        let mut aug = BitVec::zeros(self.aug_len.max(1));
        loop {
            let Some(lead) = row.first_set() else {
                return Some(aug);
            };
            match self.rows.binary_search_by(|probe| probe.0.cmp(&lead)) {
                Ok(idx) => {
                    let (prow, paug) = {
                        let r = &self.rows[idx];
                        (r.1.clone(), r.2.clone())
                    };
                    row.xor_in(&prow);
                    if self.aug_len > 0 {
                        aug.xor_in(&paug);
                    }
                }
                Err(_) => return None,
            }
        }
    }
}

/// Smith normal form invariant factors of an integer matrix.
///
/// Returns `(rank, torsion)` where `torsion` lists the invariant factors
/// greater than one (each dividing the next).
pub fn smith_invariant_factors(mat: &[Vec<BigInt>]) -> (usize, Vec<BigInt>) {
    let nrows = mat.len();
    let ncols = if nrows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<BigInt>> = mat.to_vec();
    let mut diag: Vec<BigInt> = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < nrows && left < ncols {
        // find smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for r in top..nrows {
            for c in left..ncols {
                if !a[r][c].is_zero()
                    && best
                        .map(|(br, bc)| a[r][c].abs() < a[br][bc].abs())
                        .unwrap_or(true)
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap(top, pr);
        for row in a.iter_mut() {
            row.swap(left, pc);
        }
        // clear row and column by division; restart if a remainder shrinks
        let mut clean = true;
        for r in top + 1..nrows {
            if a[r][left].is_zero() {
                continue;
            }
            let q = &a[r][left] / &a[top][left];
            for c in left..ncols {
                let sub = &q * &a[top][c];
                a[r][c] -= sub;
            }
            if !a[r][left].is_zero() {
                clean = false;
            }
        }
        for c in left + 1..ncols {
            if a[top][c].is_zero() {
                continue;
            }
            let q = &a[top][c] / &a[top][left];
            for r in top..nrows {
                let sub = &q * &a[r][left];
                let val = &a[r][c] - sub;
                a[r][c] = val;
            }
            if !a[top][c].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // a smaller remainder appeared; redo pivot selection
        }
        // ensure pivot divides the rest of the block; if not, fold a bad row
        let p = a[top][left].clone();
        let mut bad: Option<usize> = None;
        'outer: for r in top + 1..nrows {
            for c in left + 1..ncols {
                if (&a[r][c] % &p) != BigInt::zero() {
                    bad = Some(r);
                    break 'outer;
                }
            }
        }
        if let Some(r) = bad {
            let row = a[r].clone();
            for (c, v) in row.into_iter().enumerate() {
                a[top][c] += v;
            }
            continue;
        }
        diag.push(p.abs());
        top += 1;
        left += 1;
    }
    let rank = diag.len();
    let torsion = diag
        .into_iter()
        .filter(|d| d > &BigInt::from(1))
        .collect();
    (rank, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn bit_rank_and_kernel() {
        let mut m = BitMatrix::zeros(3, 4);
        // rows: 1100, 0110, 1010 -> rank 2
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        m.set(2, 0, true);
        m.set(2, 2, true);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).is_zero());
        }
    }

    #[test]
    fn rank_transpose_invariant() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let r = rng.gen_range(1..12);
            let c = rng.gen_range(1..12);
            let mut m = BitMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    if rng.gen_bool(0.4) {
                        m.set(i, j, true);
                    }
                }
            }
            assert_eq!(m.rank(), m.transpose().rank());
            // dimension formula
            assert_eq!(m.kernel_basis().len(), c - m.rank());
        }
    }

    #[test]
    fn eliminator_express() {
        let mut e = Eliminator::with_aug(4, 3);
        let mut v1 = BitVec::zeros(4);
        v1.set(0, true);
        v1.set(1, true);
        let mut v2 = BitVec::zeros(4);
        v2.set(1, true);
        v2.set(2, true);
        e.insert(v1.clone());
        e.insert(v2.clone());
        let mut target = BitVec::zeros(4);
        target.set(0, true);
        target.set(2, true);
        let combo = e.express(&target).expect("in span");
        assert_eq!(combo.ones(), vec![0, 1]);
        let mut off = BitVec::zeros(4);
        off.set(3, true);
        assert!(e.express(&off).is_none());
    }

    #[test]
    fn snf_examples() {
        // diag(2,6) example
        let (rank, tors) = smith_invariant_factors(&mat(&[&[2, 4], &[-2, 2]]));
        assert_eq!(rank, 2);
        assert_eq!(
            tors,
            vec![BigInt::from(2), BigInt::from(6)],
            "SNF of [[2,4],[-2,2]]"
        );
        // identity-ish
        let (rank, tors) = smith_invariant_factors(&mat(&[&[1, 0], &[0, 1]]));
        assert_eq!((rank, tors.len()), (2, 0));
        // zero matrix
        let (rank, tors) = smith_invariant_factors(&mat(&[&[0, 0]]));
        assert_eq!((rank, tors.len()), (0, 0));
        // a 3x3 with torsion 3
        let (rank, tors) = smith_invariant_factors(&mat(&[
            &[1, 0, 0],
            &[0, 3, 0],
            &[0, 0, 0],
        ]));
        assert_eq!(rank, 2);
        assert_eq!(tors, vec![BigInt::from(3)]);
    }

    #[test]
    fn snf_random_vs_mod_p_ranks() {
        // rank over Q >= rank over F_2; determinant-free sanity via random
        // small matrices compared against GF(2) rank of the mod-2 reduction
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            let m: Vec<Vec<BigInt>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| BigInt::from(rng.gen_range(-3i64..4)))
                        .collect()
                })
                .collect();
            let (rank, tors) = smith_invariant_factors(&m);
            let mut b = BitMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    if (&m[i][j] % 2i32).abs() == BigInt::from(1) {
                        b.set(i, j, true);
                    }
                }
            }
            let even_tors = tors.iter().filter(|t| (*t % 2i32).is_zero()).count();
            // rank_F2 = rank_Z - (# invariant factors divisible by 2)
            assert_eq!(b.rank(), rank - even_tors);
        }
    }
}
