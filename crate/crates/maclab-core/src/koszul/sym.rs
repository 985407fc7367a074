//! The restricted Koszul complex on g-invariants and its comparison with
//! the free-algebra prediction: even generators in cohomology degree 0 and
//! symmetric degree m+1 (one per z-weight -i, i >= 0), odd generators in
//! degree 1 and symmetric degree m (one per z-weight -j, j >= 1).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::koszul::ops::dbar;
use crate::koszul::slice::{lambda_s_slice, operator_on_vectors, Slice};
use crate::koszul::trunc::{GeneratorTable, SliceOutcome, VerifyOutcome};
use crate::koszul::LieAlgebra;
use crate::rat::QRat;
use crate::root_data::RootSystem;
use crate::Result;

/// Generators with |z-weight| <= -z_bound and symmetric degree <= p_bound.
pub fn predicted_sym_hilbert(rs: &RootSystem, z_bound: i64, p_bound: i64) -> GeneratorTable {
    let mut entries = Vec::new();
    for &m in &rs.exponents {
        let m = m as i64;
        if m + 1 <= p_bound {
            for i in 0..=(-z_bound) {
                entries.push((0, -i, m + 1, 1));
            }
        }
        if m <= p_bound && m >= 1 {
            for j in 1..=(-z_bound) {
                entries.push((1, -j, m, 1));
            }
        }
    }
    entries.sort();
    // Merge duplicates (repeated exponents).
    let mut merged: Vec<(i64, i64, i64, u32)> = Vec::new();
    for e in entries {
        if let Some(last) = merged.last_mut() {
            if (last.0, last.1, last.2) == (e.0, e.1, e.2) {
                last.3 += e.3;
                continue;
            }
        }
        merged.push(e);
    }
    GeneratorTable { entries: merged }
}

/// Coefficient of the free graded-commutative algebra on the table at
/// (degree, sdeg, z-weight): generators of odd cohomological degree are
/// exterior, the rest polynomial.
pub fn free_commutative_coefficient(
    table: &GeneratorTable,
    degree: i64,
    s_degree: i64,
    z_weight: i64,
) -> i64 {
    let wmax = (-z_weight).max(0) as usize;
    let dmax = degree.max(0) as usize;
    let pmax = s_degree.max(0) as usize;
    let idx = |d: usize, p: usize, w: usize| (d * (pmax + 1) + p) * (wmax + 1) + w;
    let mut dp = vec![0i64; (dmax + 1) * (pmax + 1) * (wmax + 1)];
    dp[0] = 1;
    for &(d, zw, p, mult) in &table.entries {
        let fermionic = d % 2 != 0;
        for _ in 0..mult {
            let mut next = dp.clone();
            let (d, p, w) = (d as usize, p as usize, (-zw) as usize);
            // Add r >= 1 copies (r = 1 only for fermionic generators).
            for deg in 0..=dmax {
                for sp in 0..=pmax {
                    for wt in 0..=wmax {
                        let v = dp[idx(deg, sp, wt)];
                        if v == 0 {
                            continue;
                        }
                        let mut r = 1usize;
                        loop {
                            let (nd, np, nw) = (deg + r * d, sp + r * p, wt + r * w);
                            if nd > dmax || np > pmax || nw > wmax {
                                break;
                            }
                            // A generator with all-zero grading would loop.
                            if d == 0 && p == 0 && w == 0 {
                                break;
                            }
                            next[idx(nd, np, nw)] += v;
                            if fermionic {
                                break;
                            }
                            r += 1;
                        }
                    }
                }
            }
            dp = next;
        }
    }
    dp[idx(dmax, pmax, wmax)]
}

/// Per-degree data for one (s-degree, z-weight) column of the invariant
/// restricted complex.
#[derive(Clone, Debug)]
pub struct SymDegree {
    pub degree: i64,
    pub inv_dim: usize,
    /// rank of dbar into this degree (from degree-1).
    pub rank_in: usize,
    /// rank of dbar out of this degree (to degree+1).
    pub rank_out: usize,
    pub cohomology: i64,
}

/// One (s-degree, z-weight) column of the invariant restricted complex,
/// with the differential checked to square to zero on invariant vectors.
pub fn sym_column_detail(
    lie: &LieAlgebra,
    p: i64,
    z_weight: i64,
    cap: usize,
    seed: u64,
) -> Result<Vec<SymDegree>> {
    let kmax = (-z_weight) + 1;
    let mut slices: Vec<Slice> = Vec::new();
    for k in 0..=kmax {
        slices.push(lambda_s_slice(lie, k, p, z_weight, 1, cap)?);
    }
    let inv: Vec<Vec<Vec<(u32, QRat)>>> = slices.iter().map(|s| s.invariant_basis(lie)).collect();
    let inv_dims: Vec<usize> = inv.iter().map(|v| v.len()).collect();
    // rank of dbar restricted to invariants, degree k -> k+1.
    let mut ranks = vec![0usize; slices.len() + 1];
    for k in 0..slices.len() - 1 {
        if inv_dims[k] == 0 {
            continue;
        }
        let img = operator_on_vectors(&slices[k], &slices[k + 1], &inv[k], |m| dbar(lie, m))?;
        ranks[k + 1] = img.rank_exact_seeded(seed ^ ((p as u64) << 16) ^ (k as u64), 3);
        // dbar^2 = 0 on invariant vectors.
        if k + 2 < slices.len() {
            let imgs: Vec<Vec<(u32, QRat)>> = img.columns.clone();
            let sq = operator_on_vectors(&slices[k + 1], &slices[k + 2], &imgs, |m| dbar(lie, m))?;
            if !sq.is_zero() {
                return Err(crate::Error::NotAComplex);
            }
        }
    }
    Ok((0..slices.len())
        .map(|k| {
            let rank_in = ranks[k];
            let rank_out = ranks.get(k + 1).copied().unwrap_or(0);
            SymDegree {
                degree: k as i64,
                inv_dim: inv_dims[k],
                rank_in,
                rank_out,
                cohomology: inv_dims[k] as i64 - rank_in as i64 - rank_out as i64,
            }
        })
        .collect())
}

/// (degree, invariant dim, cohomology dim) rows of `sym_column_detail`.
pub fn sym_column(
    lie: &LieAlgebra,
    p: i64,
    z_weight: i64,
    cap: usize,
    seed: u64,
) -> Result<Vec<(i64, usize, i64)>> {
    Ok(sym_column_detail(lie, p, z_weight, cap, seed)?
        .into_iter()
        .map(|d| (d.degree, d.inv_dim, d.cohomology))
        .collect())
}

/// Compare every degree of the invariant restricted complex against the
/// free-algebra coefficients, for all symmetric degrees and weights in range.
pub fn verify_sym(
    lie: &LieAlgebra,
    z_bound: i64,
    p_bound: i64,
    cap: usize,
    seed: u64,
) -> Result<VerifyOutcome> {
    assert!(z_bound <= 0 && p_bound >= 0);
    let table = predicted_sym_hilbert(&lie.rs, z_bound, p_bound);
    let mut out = VerifyOutcome {
        pass: true,
        slices: Vec::new(),
        first_mismatch: None,
    };
    for p in 0..=p_bound {
        for w in (z_bound..=0).rev() {
            let column = sym_column(lie, p, w, cap, seed)?;
            let mut euler_inv = 0i64;
            let mut euler_expected = 0i64;
            for &(degree, dim, h) in &column {
                let expected = free_commutative_coefficient(&table, degree, p, w);
                if dim == 0 && h == 0 && expected == 0 {
                    continue;
                }
                let sign = if degree % 2 == 0 { 1 } else { -1 };
                euler_inv += sign * dim as i64;
                euler_expected += sign * expected;
                out.record(SliceOutcome {
                    degree,
                    z_weight: w,
                    s_weight: p,
                    dim,
                    computed: h,
                    expected,
                });
            }
            if euler_inv != euler_expected {
                out.pass = false;
                out.first_mismatch.get_or_insert(format!(
                    "Euler characteristic mismatch at s-degree {p}, z-weight {w}"
                ));
            }
        }
    }
    Ok(out)
}
