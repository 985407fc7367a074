//! Exact sparse linear algebra over the rationals.
//!
//! Ranks are computed modulo several random word-size primes; agreement is
//! accepted, disagreement falls back to a dense fraction-free (Bareiss)
//! elimination over the integers. Kernels and solves are done by exact
//! sparse Gaussian elimination with combination tracking.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rat::{inv_mod, mulmod, QRat};
use crate::rng::{random_primes, SplitMix64};

/// Sparse matrix over Q, stored column-major (columns are images of basis
/// vectors under an operator).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRationalMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Each column sorted by row index, no explicit zeros.
    pub columns: Vec<Vec<(u32, QRat)>>,
}

impl SparseRationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.columns[i].push((i as u32, QRat::ONE));
        }
        m
    }

    pub fn set_column(&mut self, j: usize, mut entries: Vec<(u32, QRat)>) {
        entries.sort_by_key(|e| e.0);
        entries.retain(|e| !e.1.is_zero());
        debug_assert!(entries.iter().all(|e| (e.0 as usize) < self.rows));
        self.columns[j] = entries;
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out.columns[*i as usize].push((j as u32, v.clone()));
            }
        }
        for col in &mut out.columns {
            col.sort_by_key(|e| e.0);
        }
        out
    }

    /// self * other.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for (j, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<u32, QRat> = BTreeMap::new();
            for (k, v) in col {
                for (i, w) in &self.columns[*k as usize] {
                    let e = acc.entry(*i).or_insert(QRat::ZERO);
                    *e = e.add(&v.mul(w));
                }
            }
            out.columns[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn apply(&self, x: &[QRat]) -> Vec<QRat> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![QRat::ZERO; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in col {
                let idx = *i as usize;
                out[idx] = out[idx].add(&v.mul(&x[j]));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = Self::zero(self.rows, self.cols);
        for j in 0..self.cols {
            let mut acc: BTreeMap<u32, QRat> = BTreeMap::new();
            for (i, v) in &self.columns[j] {
                acc.insert(*i, v.clone());
            }
            for (i, v) in &other.columns[j] {
                let e = acc.entry(*i).or_insert(QRat::ZERO);
                *e = e.add(v);
            }
            out.columns[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn scale(&self, k: &QRat) -> Self {
        let mut out = self.clone();
        for col in &mut out.columns {
            for e in col.iter_mut() {
                e.1 = e.1.mul(k);
            }
            col.retain(|e| !e.1.is_zero());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&QRat::from_int(-1)))
    }

    /// Sparse triplet dump (row, col, value), row-major order.
    pub fn triplets(&self) -> Vec<(u32, u32, QRat)> {
        let mut t = Vec::with_capacity(self.nnz());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                t.push((*i, j as u32, v.clone()));
            }
        }
        t.sort_by_key(|e| (e.0, e.1));
        t
    }

    /// Rank modulo p by sparse elimination; `None` if any entry's denominator
    /// vanishes mod p.
    pub fn modular_rank(&self, p: u64) -> Option<usize> {
        // Row-major working form.
        let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                let r = v.mod_p(p)?;
                if r != 0 {
                    rows[*i as usize].push((j as u32, r));
                }
            }
        }
        for r in &mut rows {
            r.sort_by_key(|e| e.0);
        }
        // Occupancy of columns among active rows, for cheap pivot selection.
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); self.cols];
        for (i, r) in rows.iter().enumerate() {
            for (j, _) in r {
                col_rows[*j as usize].push(i as u32);
            }
        }
        let mut row_active = vec![true; self.rows];
        let mut col_done = vec![false; self.cols];
        let mut rank = 0usize;
        loop {
            // Pivot: the shortest active nonempty row; within it, the column
            // with least occupancy.
            let mut best: Option<(usize, usize)> = None; // (len, row)
            for (i, r) in rows.iter().enumerate() {
                if row_active[i] && !r.is_empty() {
                    let len = r.len();
                    if best.map(|(l, _)| len < l).unwrap_or(true) {
                        best = Some((len, i));
                        if len == 1 {
                            break;
                        }
                    }
                }
            }
            let Some((_, pivot_row)) = best else { break };
            let pcol = rows[pivot_row]
                .iter()
                .map(|(j, _)| *j)
                .min_by_key(|j| col_rows[*j as usize].len())
                .expect("nonempty row");
            rank += 1;
            row_active[pivot_row] = false;
            col_done[pcol as usize] = true;
            // Normalize pivot row.
            let pval = rows[pivot_row]
                .iter()
                .find(|(j, _)| *j == pcol)
                .map(|(_, v)| *v)
                .expect("pivot entry");
            let pinv = inv_mod(pval, p);
            let prow: Vec<(u32, u64)> = rows[pivot_row]
                .iter()
                .map(|(j, v)| (*j, mulmod(*v, pinv, p)))
                .collect();
            rows[pivot_row] = prow.clone();
            // Eliminate pcol from the other active rows.
            let victims: Vec<u32> = col_rows[pcol as usize]
                .iter()
                .copied()
                .filter(|&i| row_active[i as usize])
                .collect();
            for vi in victims {
                let i = vi as usize;
                let Some(&(_, coef)) = rows[i].iter().find(|(j, _)| *j == pcol) else {
                    continue;
                };
                // row_i -= coef * pivot_row
                let mut merged: Vec<(u32, u64)> = Vec::with_capacity(rows[i].len() + prow.len());
                let (mut a, mut b) = (0usize, 0usize);
                let old = core::mem::take(&mut rows[i]);
                while a < old.len() || b < prow.len() {
                    match (old.get(a), prow.get(b)) {
                        (Some(&(ja, va)), Some(&(jb, vb))) if ja == jb => {
                            let sub = mulmod(coef, vb, p);
                            let nv = (va + p - sub) % p;
                            if nv != 0 {
                                merged.push((ja, nv));
                            }
                            a += 1;
                            b += 1;
                        }
                        (Some(&(ja, va)), Some(&(jb, _))) if ja < jb => {
                            merged.push((ja, va));
                            a += 1;
                        }
                        (Some(&(ja, va)), None) => {
                            merged.push((ja, va));
                            a += 1;
                        }
                        (_, Some(&(jb, vb))) => {
                            let sub = mulmod(coef, vb, p);
                            if sub != 0 {
                                merged.push((jb, p - sub));
                            }
                            b += 1;
                        }
                        (None, None) => unreachable!(),
                    }
                }
                // Update occupancy for newly created entries.
                for (j, _) in &merged {
                    if !col_done[*j as usize] && !col_rows[*j as usize].contains(&vi) {
                        col_rows[*j as usize].push(vi);
                    }
                }
                rows[i] = merged;
            }
        }
        Some(rank)
    }

    /// Dense fraction-free Bareiss elimination rank over Z (denominators are
    /// cleared per column first; this does not change the rank).
    pub fn bareiss_rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if col.is_empty() {
                continue;
            }
            let mut lcm = BigInt::from(1);
            for (_, v) in col {
                let d = v.denom_big();
                let g = num_integer::Integer::gcd(&lcm, &d);
                lcm = lcm / g * d;
            }
            for (i, v) in col {
                a[*i as usize][j] = v.numer_big() * (&lcm / v.denom_big());
            }
        }
        let (n, m) = (self.rows, self.cols);
        let mut rank = 0usize;
        let mut prev = BigInt::from(1);
        let mut row = 0usize;
        for col in 0..m {
            if row >= n {
                break;
            }
            let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            for r in row + 1..n {
                for c in col + 1..m {
                    let num = &a[row][col] * &a[r][c] - &a[r][col] * &a[row][c];
                    a[r][c] = num / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[row][col].clone();
            row += 1;
            rank += 1;
        }
        rank
    }

    /// Certified exact rank: at least `nprimes` random word-size primes must
    /// agree; on disagreement the fraction-free elimination decides.
    pub fn rank_exact_seeded(&self, seed: u64, nprimes: usize) -> usize {
        if self.is_zero() {
            return 0;
        }
        let mut rng = SplitMix64::new(seed ^ 0x9d1c_37ab_22ef_01b5);
        let mut ranks: Vec<usize> = Vec::new();
        let mut attempts = 0;
        while ranks.len() < nprimes && attempts < nprimes + 8 {
            attempts += 1;
            let p = random_primes(&mut rng, 1)[0];
            if let Some(r) = self.modular_rank(p) {
                ranks.push(r);
            }
        }
        if !ranks.is_empty() && ranks.iter().all(|r| *r == ranks[0]) {
            return ranks[0];
        }
        self.bareiss_rank()
    }

    pub fn rank_exact(&self) -> usize {
        self.rank_exact_seeded(0, 3)
    }

    /// Exact kernel basis over Q by sparse elimination with combination
    /// tracking. Kernel vectors are returned in the column index space,
    /// deterministically ordered.
    pub fn kernel_basis(&self) -> Vec<Vec<(u32, QRat)>> {
        let mut pivots: Vec<(u32, Vec<(u32, QRat)>, Vec<(u32, QRat)>)> = Vec::new();
        // (pivot_row, column_vector, combination over original columns)
        let mut kernel: Vec<Vec<(u32, QRat)>> = Vec::new();
        for j in 0..self.cols {
            let mut vec_cur = self.columns[j].clone();
            let mut combo: Vec<(u32, QRat)> = vec![(j as u32, QRat::ONE)];
            for (prow, pcol, pcombo) in &pivots {
                if let Some(pos) = vec_cur.iter().position(|(i, _)| i == prow) {
                    let coef = vec_cur[pos].1.clone();
                    vec_cur = sub_scaled(&vec_cur, pcol, &coef);
                    combo = sub_scaled(&combo, pcombo, &coef);
                }
            }
            if vec_cur.is_empty() {
                kernel.push(combo);
            } else {
                // Normalize so the pivot entry is 1.
                let (prow, pval) = {
                    let e = &vec_cur[0];
                    (e.0, e.1.clone())
                };
                let inv = pval.recip();
                for e in vec_cur.iter_mut() {
                    e.1 = e.1.mul(&inv);
                }
                for e in combo.iter_mut() {
                    e.1 = e.1.mul(&inv);
                }
                pivots.push((prow, vec_cur, combo));
            }
        }
        kernel
    }

    /// Solve self * x = b exactly; `None` if inconsistent. Assumes nothing
    /// about rank; returns one solution (free variables set to zero).
    pub fn solve(&self, b: &[QRat]) -> Option<Vec<QRat>> {
        assert_eq!(b.len(), self.rows);
        let mut pivots: Vec<(u32, Vec<(u32, QRat)>, Vec<(u32, QRat)>)> = Vec::new();
        for j in 0..self.cols {
            let mut vec_cur = self.columns[j].clone();
            let mut combo: Vec<(u32, QRat)> = vec![(j as u32, QRat::ONE)];
            for (prow, pcol, pcombo) in &pivots {
                if let Some(pos) = vec_cur.iter().position(|(i, _)| i == prow) {
                    let coef = vec_cur[pos].1.clone();
                    vec_cur = sub_scaled(&vec_cur, pcol, &coef);
                    combo = sub_scaled(&combo, pcombo, &coef);
                }
            }
            if !vec_cur.is_empty() {
                let pval = vec_cur[0].1.clone();
                let prow = vec_cur[0].0;
                let inv = pval.recip();
                for e in vec_cur.iter_mut() {
                    e.1 = e.1.mul(&inv);
                }
                for e in combo.iter_mut() {
                    e.1 = e.1.mul(&inv);
                }
                pivots.push((prow, vec_cur, combo));
            }
        }
        // Reduce b against the pivots.
        let mut rb: Vec<(u32, QRat)> = b
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u32, v.clone()))
            .collect();
        let mut x: BTreeMap<u32, QRat> = BTreeMap::new();
        for (prow, pcol, pcombo) in &pivots {
            if let Some(pos) = rb.iter().position(|(i, _)| i == prow) {
                let coef = rb[pos].1.clone();
                rb = sub_scaled(&rb, pcol, &coef);
                for (idx, v) in pcombo {
                    let e = x.entry(*idx).or_insert(QRat::ZERO);
                    *e = e.add(&coef.mul(v));
                }
            }
        }
        if !rb.is_empty() {
            return None;
        }
        let mut out = vec![QRat::ZERO; self.cols];
        for (idx, v) in x {
            out[idx as usize] = v;
        }
        Some(out)
    }
}

/// a - coef * b on sorted sparse vectors.
fn sub_scaled(a: &[(u32, QRat)], b: &[(u32, QRat)], coef: &QRat) -> Vec<(u32, QRat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ia, va)), Some((ib, vb))) if ia == ib => {
                let v = va.sub(&coef.mul(vb));
                if !v.is_zero() {
                    out.push((*ia, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ia, va)), Some((ib, _))) if ia < ib => {
                out.push((*ia, va.clone()));
                i += 1;
            }
            (Some((ia, va)), None) => {
                out.push((*ia, va.clone()));
                i += 1;
            }
            (_, Some((ib, vb))) => {
                let v = coef.mul(vb).neg();
                if !v.is_zero() {
                    out.push((*ib, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn from_dense(rows: usize, cols: usize, data: &[i64]) -> SparseRationalMatrix {
        let mut m = SparseRationalMatrix::zero(rows, cols);
        for j in 0..cols {
            let col: Vec<(u32, QRat)> = (0..rows)
                .filter(|&i| data[i * cols + j] != 0)
                .map(|i| (i as u32, QRat::from_int(data[i * cols + j])))
                .collect();
            m.set_column(j, col);
        }
        m
    }

    #[test]
    fn identity_rank() {
        let m = SparseRationalMatrix::identity(5);
        assert_eq!(m.rank_exact_seeded(1, 3), 5);
        assert_eq!(m.bareiss_rank(), 5);
    }

    #[test]
    fn zero_rank() {
        let m = SparseRationalMatrix::zero(4, 7);
        assert_eq!(m.rank_exact_seeded(1, 3), 0);
        assert_eq!(m.bareiss_rank(), 0);
    }

    #[test]
    fn rank_of_dependent_columns() {
        // col3 = col1 + col2
        let m = from_dense(3, 3, &[1, 0, 1, 0, 1, 1, 2, 3, 5]);
        assert_eq!(m.rank_exact_seeded(7, 3), 2);
        assert_eq!(m.bareiss_rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // Verify M * k = 0.
        let mut x = vec![QRat::ZERO; 3];
        for (i, v) in &k[0] {
            x[*i as usize] = v.clone();
        }
        assert!(m.apply(&x).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn modular_agrees_with_bareiss_on_random_sparse() {
        let mut rng = SplitMix64::new(99);
        for trial in 0..40 {
            let rows = 1 + (rng.below(12) as usize);
            let cols = 1 + (rng.below(12) as usize);
            let mut m = SparseRationalMatrix::zero(rows, cols);
            for j in 0..cols {
                let mut col = Vec::new();
                for i in 0..rows {
                    if rng.below(3) == 0 {
                        let num = rng.range_i64(-9, 9);
                        let den = rng.range_i64(1, 4);
                        if num != 0 {
                            col.push((i as u32, QRat::new(num, den)));
                        }
                    }
                }
                m.set_column(j, col);
            }
            let expect = m.bareiss_rank();
            assert_eq!(m.rank_exact_seeded(trial, 3), expect, "trial {trial}");
        }
    }

    #[test]
    fn solve_roundtrip() {
        let m = from_dense(3, 2, &[1, 2, 0, 1, 3, 0]);
        let x = [QRat::from_int(5), QRat::from_int(-2)];
        let b = m.apply(&x);
        let got = m.solve(&b).unwrap();
        assert_eq!(m.apply(&got), b);
        // An inconsistent target has no solution.
        let bad = [QRat::ONE, QRat::ZERO, QRat::ONE];
        assert!(m.solve(&bad).is_none());
    }

    #[test]
    fn kernel_dimension_complements_rank() {
        let mut rng = SplitMix64::new(123);
        for _ in 0..20 {
            let rows = 1 + (rng.below(8) as usize);
            let cols = 1 + (rng.below(8) as usize);
            let mut m = SparseRationalMatrix::zero(rows, cols);
            for j in 0..cols {
                let mut col = Vec::new();
                for i in 0..rows {
                    if rng.below(2) == 0 {
                        let v = rng.range_i64(-4, 4);
                        if v != 0 {
                            col.push((i as u32, QRat::from_int(v)));
                        }
                    }
                }
                m.set_column(j, col);
            }
            let r = m.bareiss_rank();
            let k = m.kernel_basis().len();
            assert_eq!(r + k, cols);
        }
    }

    #[test]
    fn triplet_dump_is_row_major_sorted() {
        let m = from_dense(2, 2, &[0, 3, 1, 0]);
        let t = m.triplets();
        assert_eq!(t.len(), 2);
        assert_eq!((t[0].0, t[0].1), (0, 1));
        assert_eq!((t[1].0, t[1].1), (1, 0));
    }
}
