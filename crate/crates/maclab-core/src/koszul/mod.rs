//! Weight-graded Koszul complexes: basis monomials, slices, differentials
//! and cohomology dimensions computed by exact sparse rank.

pub mod delta1;
pub mod lie;
pub mod ops;
pub mod slice;
pub mod sym;
pub mod trunc;

pub use lie::{build_lie_algebra, LieAlgebra};
pub use slice::{Slice, SliceKey};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::rat::QRat;

/// A single exterior or symmetric mode, packed as depth << 8 | basis index.
pub type Mode = u16;

#[inline]
pub fn mode(depth: i64, idx: usize) -> Mode {
    assert!(
        (0..=255).contains(&depth) && idx < 256,
        "mode out of packed range"
    );
    ((depth as u16) << 8) | idx as u16
}

#[inline]
pub fn mode_depth(m: Mode) -> i64 {
    (m >> 8) as i64
}

#[inline]
pub fn mode_idx(m: Mode) -> usize {
    (m & 0xff) as usize
}

/// Basis monomial of Lambda (x) S: a strictly increasing wedge of odd modes
/// and a sorted multiset of even modes. The sign normal form is "odd modes
/// sorted by (depth, index)"; every operator application re-normalizes and
/// tracks the wedge sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub odd: Vec<Mode>,
    pub even: Vec<Mode>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial {
            odd: Vec::new(),
            even: Vec::new(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.odd.len() as i64
    }

    pub fn s_degree(&self) -> i64 {
        self.even.len() as i64
    }

    /// Total z-depth (the negative of the z-weight).
    pub fn z_depth(&self) -> i64 {
        self.odd
            .iter()
            .chain(self.even.iter())
            .map(|&m| mode_depth(m))
            .sum()
    }

    pub fn g_weight(&self, lie: &LieAlgebra) -> crate::root_data::Weight {
        let mut w = crate::root_data::Weight::zero(lie.rs.rank);
        for &m in self.odd.iter().chain(self.even.iter()) {
            w = w.add(&lie.basis_weight[mode_idx(m)]);
        }
        w
    }
}

/// Sort odd modes, counting transpositions; `None` on a repeated mode.
pub fn normalize_odd(mut modes: Vec<Mode>) -> Option<(Vec<Mode>, i64)> {
    let mut sign = 1i64;
    for i in 1..modes.len() {
        let mut j = i;
        while j > 0 && modes[j - 1] > modes[j] {
            modes.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in modes.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((modes, sign))
}

/// Sparse linear combination of monomials.
pub type TermVec = Vec<(Monomial, QRat)>;

/// Accumulator merging equal monomials.
#[derive(Default)]
pub struct TermAccum {
    pub map: BTreeMap<Monomial, QRat>,
}

impl TermAccum {
    pub fn new() -> Self {
        TermAccum {
            map: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, m: Monomial, c: QRat) {
        if c.is_zero() {
            return;
        }
        let e = self.map.entry(m).or_insert(QRat::ZERO);
        *e = e.add(&c);
        // Zero entries are purged on extraction.
    }

    pub fn add_all(&mut self, terms: TermVec, scale: &QRat) {
        if scale.is_zero() {
            return;
        }
        for (m, c) in terms {
            self.add(m, c.mul(scale));
        }
    }

    pub fn into_terms(self) -> TermVec {
        self.map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

/// Inner product of two single modes of equal parity (zero across depths).
fn mode_inner(lie: &LieAlgebra, a: Mode, b: Mode, odd: bool) -> QRat {
    if mode_depth(a) != mode_depth(b) {
        return QRat::ZERO;
    }
    let v = lie.binv[mode_idx(a)][mode_idx(b)].clone();
    if odd {
        v.div(&QRat::from_int(mode_depth(a).max(1)))
    } else {
        v
    }
}

/// Metric pairing of two monomials: determinant over the odd factors times
/// permanent over the even factors. Intended for small slices (the
/// adjointness and Hodge tests); permanents are exponential in the number of
/// repeated even factors.
pub fn monomial_inner(lie: &LieAlgebra, x: &Monomial, y: &Monomial) -> QRat {
    if x.odd.len() != y.odd.len() || x.even.len() != y.even.len() {
        return QRat::ZERO;
    }
    let k = x.odd.len();
    let det = if k == 0 {
        QRat::ONE
    } else {
        let m: Vec<Vec<QRat>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| mode_inner(lie, x.odd[i], y.odd[j], true))
                    .collect()
            })
            .collect();
        determinant(&m)
    };
    if det.is_zero() {
        return QRat::ZERO;
    }
    let p = x.even.len();
    let per = if p == 0 {
        QRat::ONE
    } else {
        let m: Vec<Vec<QRat>> = (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| mode_inner(lie, x.even[i], y.even[j], false))
                    .collect()
            })
            .collect();
        permanent(&m)
    };
    det.mul(&per)
}

fn determinant(m: &[Vec<QRat>]) -> QRat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = QRat::ONE;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return QRat::ZERO;
        };
        if p != col {
            a.swap(col, p);
            det = det.neg();
        }
        let piv = a[col][col].clone();
        det = det.mul(&piv);
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = a[r][col].div(&piv);
                for c in col..n {
                    a[r][c] = a[r][c].sub(&f.mul(&a[col][c]));
                }
            }
        }
    }
    det
}

fn permanent(m: &[Vec<QRat>]) -> QRat {
    // Plain expansion is fine at the sizes slices use (p <= 6).
    fn rec(m: &[Vec<QRat>], row: usize, used: &mut [bool]) -> QRat {
        let n = m.len();
        if row == n {
            return QRat::ONE;
        }
        let mut acc = QRat::ZERO;
        for j in 0..n {
            if !used[j] && !m[row][j].is_zero() {
                used[j] = true;
                let sub = rec(m, row + 1, used);
                acc = acc.add(&m[row][j].mul(&sub));
                used[j] = false;
            }
        }
        acc
    }
    let n = m.len();
    let mut used = alloc::vec![false; n];
    rec(m, 0, &mut used)
}
