//! Slice construction: the finite basis of a fixed (degree, z-weight,
//! s-weight) piece of a complex, grouped by torus weight, plus the exact
//! invariant subspace.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::koszul::ops::g_action;
use crate::koszul::{mode, mode_idx, LieAlgebra, Monomial, TermAccum};
use crate::linalg::SparseRationalMatrix;
use crate::rat::QRat;
use crate::root_data::Weight;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SliceKey {
    pub degree: i64,
    pub z_weight: i64,
    pub s_weight: i64,
}

/// Finite basis of one graded piece, with its torus-weight blocks.
#[derive(Clone, Debug)]
pub struct Slice {
    pub key: SliceKey,
    pub basis: Vec<Monomial>,
    pub index: BTreeMap<Monomial, u32>,
    pub blocks: BTreeMap<Weight, Vec<u32>>,
}

impl Slice {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn from_basis(key: SliceKey, lie: &LieAlgebra, mut basis: Vec<Monomial>) -> Slice {
        basis.sort();
        let mut index = BTreeMap::new();
        let mut blocks: BTreeMap<Weight, Vec<u32>> = BTreeMap::new();
        for (i, m) in basis.iter().enumerate() {
            index.insert(m.clone(), i as u32);
            blocks.entry(m.g_weight(lie)).or_default().push(i as u32);
        }
        Slice {
            key,
            basis,
            index,
            blocks,
        }
    }

    /// Express a term vector in slice coordinates. Terms outside the basis
    /// are an error (they indicate a differential leaving the slice).
    pub fn coords(&self, terms: &[(Monomial, QRat)]) -> Result<Vec<(u32, QRat)>> {
        let mut out = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let idx = self.index.get(m).ok_or(Error::NotAComplex)?;
            out.push((*idx, c.clone()));
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    /// Exact basis of the g-invariant subspace: zero-weight vectors killed by
    /// every simple raising operator. Vectors are sparse in slice
    /// coordinates, deterministically ordered.
    pub fn invariant_basis(&self, lie: &LieAlgebra) -> Vec<Vec<(u32, QRat)>> {
        let zero = Weight::zero(lie.rs.rank);
        let Some(zblock) = self.blocks.get(&zero) else {
            return Vec::new();
        };
        // Stack the raising operators on the zero-weight block. Row space:
        // one copy of the slice per raising generator.
        let ncols = zblock.len();
        let mut stacked = SparseRationalMatrix::zero(self.dim() * lie.simple_raise.len(), ncols);
        for (cj, &pos) in zblock.iter().enumerate() {
            let mono = &self.basis[pos as usize];
            let mut col: Vec<(u32, QRat)> = Vec::new();
            for (gi, &raise) in lie.simple_raise.iter().enumerate() {
                let image = g_action(lie, raise, mono);
                for (m, c) in image {
                    let idx = *self.index.get(&m).expect("g-action preserves the slice");
                    col.push(((gi * self.dim()) as u32 + idx, c));
                }
            }
            stacked.set_column(cj, col);
        }
        let kernel = stacked.kernel_basis();
        // Map kernel coordinates (over the zero block) back to slice coords.
        kernel
            .into_iter()
            .map(|v| {
                let mut out: Vec<(u32, QRat)> = v
                    .into_iter()
                    .map(|(i, c)| (zblock[i as usize], c))
                    .collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect()
    }

    /// Gram matrix of the slice metric (small slices only).
    pub fn gram(&self, lie: &LieAlgebra) -> SparseRationalMatrix {
        let n = self.dim();
        let mut g = SparseRationalMatrix::zero(n, n);
        for j in 0..n {
            let mut col = Vec::new();
            for i in 0..n {
                let v = crate::koszul::monomial_inner(lie, &self.basis[i], &self.basis[j]);
                if !v.is_zero() {
                    col.push((i as u32, v));
                }
            }
            g.set_column(j, col);
        }
        g
    }

    pub fn describe(&self) -> String {
        format!(
            "(degree {}, z-weight {}, s-weight {}, dim {})",
            self.key.degree,
            self.key.z_weight,
            self.key.s_weight,
            self.dim()
        )
    }
}

fn check_cap(key: SliceKey, dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        return Err(Error::CapacityError {
            slice: format!("deg {} zw {} sw {}", key.degree, key.z_weight, key.s_weight),
            dim,
            cap,
        });
    }
    Ok(())
}

/// Enumerate mode words of a given length and total depth: strictly
/// increasing when `strict` (wedges), non-decreasing otherwise (multisets).
fn mode_words(
    lie: &LieAlgebra,
    len: usize,
    total_depth: i64,
    min_depth: i64,
    max_depth: i64,
    strict: bool,
) -> Vec<Vec<u16>> {
    fn rec(
        lie: &LieAlgebra,
        out: &mut Vec<Vec<u16>>,
        cur: &mut Vec<u16>,
        from: u32,
        remaining_len: usize,
        remaining_depth: i64,
        min_depth: i64,
        max_depth: i64,
        strict: bool,
    ) {
        if remaining_len == 0 {
            if remaining_depth == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let end = ((max_depth.min(remaining_depth) as u32) + 1) << 8;
        for packed in from..end {
            let m = packed as u16;
            let d = crate::koszul::mode_depth(m);
            let idx = mode_idx(m);
            if d < min_depth || idx >= lie.dim {
                continue;
            }
            if d > remaining_depth {
                break;
            }
            cur.push(m);
            let next_from = if strict { packed + 1 } else { packed };
            rec(
                lie,
                out,
                cur,
                next_from,
                remaining_len - 1,
                remaining_depth - d,
                min_depth,
                max_depth,
                strict,
            );
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if total_depth == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if total_depth < 0 {
        return out;
    }
    let mut cur = Vec::new();
    rec(
        lie,
        &mut out,
        &mut cur,
        0,
        len,
        total_depth,
        min_depth,
        max_depth,
        strict,
    );
    out
}

fn odd_words(
    lie: &LieAlgebra,
    len: usize,
    total_depth: i64,
    min_depth: i64,
    max_depth: i64,
) -> Vec<Vec<u16>> {
    mode_words(lie, len, total_depth, min_depth, max_depth, true)
}

fn even_words(lie: &LieAlgebra, len: usize, total_depth: i64, max_depth: i64) -> Vec<Vec<u16>> {
    mode_words(lie, len, total_depth, 0, max_depth, false)
}

/// Slice of Lambda(g[z]/g)*_res (x) S g[z]*_res at fixed degree, z-weight and
/// symmetric degree. `min_odd_depth` is 1 in the standard labelling and 0
/// after the d/dz relabelling.
pub fn lambda_s_slice(
    lie: &LieAlgebra,
    degree: i64,
    s_weight: i64,
    z_weight: i64,
    min_odd_depth: i64,
    cap: usize,
) -> Result<Slice> {
    assert!(z_weight <= 0 && degree >= 0 && s_weight >= 0);
    let key = SliceKey {
        degree,
        z_weight,
        s_weight,
    };
    let total = -z_weight;
    let mut basis = Vec::new();
    for odd_depth in 0..=total {
        let odds = odd_words(lie, degree as usize, odd_depth, min_odd_depth, total);
        if odds.is_empty() {
            continue;
        }
        let evens = even_words(lie, s_weight as usize, total - odd_depth, total);
        for o in &odds {
            for e in &evens {
                basis.push(Monomial {
                    odd: o.clone(),
                    even: e.clone(),
                });
            }
        }
        check_cap(key, basis.len(), cap)?;
    }
    Ok(Slice::from_basis(key, lie, basis))
}

/// Slice of the truncated complex Lambda^degree (g[z]/z^n)* at fixed
/// z-weight; `relative` drops the constant modes (depth 0).
pub fn truncated_slice(
    lie: &LieAlgebra,
    n: i64,
    degree: i64,
    z_weight: i64,
    relative: bool,
    cap: usize,
) -> Result<Slice> {
    assert!(n >= 1 && degree >= 0 && z_weight <= 0);
    let key = SliceKey {
        degree,
        z_weight,
        s_weight: 0,
    };
    let min_depth = if relative { 1 } else { 0 };
    let words = odd_words(lie, degree as usize, -z_weight, min_depth, n - 1);
    let basis: Vec<Monomial> = words
        .into_iter()
        .map(|o| Monomial {
            odd: o,
            even: Vec::new(),
        })
        .collect();
    check_cap(key, basis.len(), cap)?;
    Ok(Slice::from_basis(key, lie, basis))
}

/// Matrix of a monomial-level operator between two slices.
pub fn operator_matrix<F>(src: &Slice, tgt: &Slice, mut op: F) -> Result<SparseRationalMatrix>
where
    F: FnMut(&Monomial) -> crate::koszul::TermVec,
{
    let mut m = SparseRationalMatrix::zero(tgt.dim(), src.dim());
    for (j, mono) in src.basis.iter().enumerate() {
        let image = op(mono);
        m.set_column(j, tgt.coords(&image)?);
    }
    Ok(m)
}

/// The same restricted to given source vectors (sparse columns in src
/// coordinates); the result's columns are the images in tgt coordinates.
pub fn operator_on_vectors<F>(
    src: &Slice,
    tgt: &Slice,
    vectors: &[Vec<(u32, QRat)>],
    mut op: F,
) -> Result<SparseRationalMatrix>
where
    F: FnMut(&Monomial) -> crate::koszul::TermVec,
{
    let mut m = SparseRationalMatrix::zero(tgt.dim(), vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        let mut acc = TermAccum::new();
        for (idx, c) in v {
            acc.add_all(op(&src.basis[*idx as usize]), c);
        }
        m.set_column(j, tgt.coords(&acc.into_terms())?);
    }
    Ok(m)
}

/// Convenience: the modes of g at a fixed depth, as monomial factors.
pub fn single_even(depth: i64, idx: usize) -> Monomial {
    Monomial {
        odd: Vec::new(),
        even: alloc::vec![mode(depth, idx)],
    }
}

pub fn single_odd(depth: i64, idx: usize) -> Monomial {
    Monomial {
        odd: alloc::vec![mode(depth, idx)],
        even: Vec::new(),
    }
}
