//! Cohomology of the truncated algebras: brute-force slice ranks against the
//! free-exterior-algebra prediction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::koszul::slice::{truncated_slice, Slice};
use crate::koszul::{
    mode, mode_depth, mode_idx, normalize_odd, LieAlgebra, Monomial, TermAccum, TermVec,
};
use crate::linalg::SparseRationalMatrix;
use crate::rat::QRat;
use crate::root_data::RootSystem;
use crate::Result;

/// Predicted free generators: (cohomological degree, z-weight, s-degree,
/// multiplicity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    pub entries: Vec<(i64, i64, i64, u32)>,
}

impl GeneratorTable {
    fn push(&mut self, degree: i64, z_weight: i64, s_degree: i64) {
        for e in self.entries.iter_mut() {
            if e.0 == degree && e.1 == z_weight && e.2 == s_degree {
                e.3 += 1;
                return;
            }
        }
        self.entries.push((degree, z_weight, s_degree, 1));
    }
}

/// Theorem-level prediction for the truncated algebra: n generators per
/// exponent m, in degree 2m+1, at z-weights 0 and -(mn+1) ... -(mn+n-1).
pub fn predicted_trunc_hilbert(rs: &RootSystem, n: i64) -> GeneratorTable {
    let mut table = GeneratorTable {
        entries: Vec::new(),
    };
    for &m in &rs.exponents {
        let m = m as i64;
        table.push(2 * m + 1, 0, 0);
        for i in 1..n {
            table.push(2 * m + 1, -(m * n + i), 0);
        }
    }
    table.entries.sort();
    table
}

/// Coefficient of y^degree x^{z_weight} in the free exterior algebra on the
/// table's generators (weights taken non-positive).
pub fn free_exterior_coefficient(table: &GeneratorTable, degree: i64, z_weight: i64) -> i64 {
    // DP over generators; dimensions stay tiny.
    let wmax = (-z_weight).max(0);
    let dmax = degree.max(0);
    let mut dp = vec![vec![0i64; (wmax + 1) as usize]; (dmax + 1) as usize];
    dp[0][0] = 1;
    for &(d, w, _s, mult) in &table.entries {
        for _ in 0..mult {
            let mut next = dp.clone();
            for deg in 0..=dmax {
                for wt in 0..=wmax {
                    let v = dp[deg as usize][wt as usize];
                    if v == 0 {
                        continue;
                    }
                    let (nd, nw) = (deg + d, wt - w);
                    if nd <= dmax && nw <= wmax {
                        next[nd as usize][nw as usize] += v;
                    }
                }
            }
            dp = next;
        }
    }
    dp[dmax as usize][wmax as usize]
}

/// The homology boundary of the truncated complex on a wedge monomial:
/// sum over pairs p < q of (-1)^{p+q} [x_p, x_q] wedged in front.
pub fn delta_trunc(lie: &LieAlgebra, n: i64, mono: &Monomial) -> TermVec {
    let mut acc = TermAccum::new();
    let k = mono.odd.len();
    for p in 0..k {
        for q in p + 1..k {
            let (dp, ip) = (mode_depth(mono.odd[p]), mode_idx(mono.odd[p]));
            let (dq, iq) = (mode_depth(mono.odd[q]), mode_idx(mono.odd[q]));
            let nd = dp + dq;
            if nd >= n {
                continue;
            }
            let pair_sign = if (p + q) % 2 == 0 { 1i64 } else { -1 };
            // (p+q) with 1-based indices is (p+q) 0-based plus 2.
            for &(kk, c) in lie.bracket_of(ip, iq) {
                let mut rest = Vec::with_capacity(k - 1);
                rest.push(mode(nd, kk));
                for (r, &om) in mono.odd.iter().enumerate() {
                    if r != p && r != q {
                        rest.push(om);
                    }
                }
                if let Some((sorted, sign)) = normalize_odd(rest) {
                    acc.add(
                        Monomial {
                            odd: sorted,
                            even: Vec::new(),
                        },
                        QRat::from_int(c * pair_sign * sign),
                    );
                }
            }
        }
    }
    acc.into_terms()
}

/// The cochain differential matrix from degree k to k+1 at fixed weight:
/// the transpose of the homology boundary of the (k+1)-slice.
pub fn trunc_cochain_matrix(
    lie: &LieAlgebra,
    n: i64,
    from: &Slice,
    to: &Slice,
) -> Result<SparseRationalMatrix> {
    let delta = crate::koszul::slice::operator_matrix(to, from, |m| delta_trunc(lie, n, m))?;
    Ok(delta.transpose())
}

/// Rank summed over torus-weight blocks (the differentials are equivariant,
/// so ranks decompose; this keeps every elimination small).
pub fn graded_rank(src: &Slice, tgt: &Slice, m: &SparseRationalMatrix, seed: u64) -> usize {
    let mut total = 0usize;
    for (w, cols) in &src.blocks {
        let rows = match tgt.blocks.get(w) {
            Some(r) => r,
            None => {
                debug_assert!(cols.iter().all(|&c| m.columns[c as usize].is_empty()));
                continue;
            }
        };
        let mut row_index: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, &r) in rows.iter().enumerate() {
            row_index.insert(r, i as u32);
        }
        let mut sub = SparseRationalMatrix::zero(rows.len(), cols.len());
        for (j, &c) in cols.iter().enumerate() {
            let col: Vec<(u32, QRat)> = m.columns[c as usize]
                .iter()
                .map(|(i, v)| {
                    (
                        *row_index
                            .get(i)
                            .expect("differential preserves torus weight"),
                        v.clone(),
                    )
                })
                .collect();
            sub.set_column(j, col);
        }
        let mut block_seed = seed;
        for &c in &w.coords {
            block_seed = block_seed
                .wrapping_mul(0x100000001b3)
                .wrapping_add(c as u64);
        }
        total += sub.rank_exact_seeded(block_seed, 3);
    }
    total
}

/// Cohomology dimension from the two adjacent ranks.
pub fn cohomology_dim(dim_mid: usize, rank_out: usize, rank_in: usize) -> i64 {
    dim_mid as i64 - rank_out as i64 - rank_in as i64
}

#[derive(Clone, Debug)]
pub struct SliceOutcome {
    pub degree: i64,
    pub z_weight: i64,
    pub s_weight: i64,
    pub dim: usize,
    pub computed: i64,
    pub expected: i64,
}

#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub pass: bool,
    pub slices: Vec<SliceOutcome>,
    pub first_mismatch: Option<String>,
}

impl VerifyOutcome {
    pub fn record(&mut self, s: SliceOutcome) {
        if s.computed != s.expected && self.first_mismatch.is_none() {
            self.pass = false;
            self.first_mismatch = Some(format!(
                "degree {} z-weight {} s-weight {}: computed {} expected {}",
                s.degree, s.z_weight, s.s_weight, s.computed, s.expected
            ));
        }
        self.slices.push(s);
    }
}

/// All cohomology dimensions of the truncated (or relative truncated)
/// complex at one z-weight, plus the per-degree slice dimensions.
pub fn trunc_column(
    lie: &LieAlgebra,
    n: i64,
    z_weight: i64,
    relative: bool,
    cap: usize,
    seed: u64,
) -> Result<Vec<(i64, usize, i64)>> {
    let max_degree = (n * lie.dim as i64).min(255);
    // Build slices until empty; keep cochain ranks between neighbours.
    let mut slices: Vec<Slice> = Vec::new();
    for degree in 0..=max_degree {
        let s = truncated_slice(lie, n, degree, z_weight, relative, cap)?;
        slices.push(s);
    }
    let dims: Vec<usize> = slices.iter().map(|s| s.dim()).collect();

    if !relative {
        // Plain slice: ranks of the boundary maps, block-graded.
        let mut ranks = vec![0usize; slices.len() + 1];
        for k in 1..slices.len() {
            if dims[k] == 0 || dims[k - 1] == 0 {
                continue;
            }
            let delta = crate::koszul::slice::operator_matrix(&slices[k], &slices[k - 1], |m| {
                delta_trunc(lie, n, m)
            })?;
            ranks[k] = graded_rank(&slices[k], &slices[k - 1], &delta, seed);
        }
        // delta^2 = 0 sanity on the matrices (cheap, exact).
        for k in 2..slices.len() {
            if dims[k] == 0 || dims[k - 2] == 0 {
                continue;
            }
            let d1 = crate::koszul::slice::operator_matrix(&slices[k], &slices[k - 1], |m| {
                delta_trunc(lie, n, m)
            })?;
            let d2 = crate::koszul::slice::operator_matrix(&slices[k - 1], &slices[k - 2], |m| {
                delta_trunc(lie, n, m)
            })?;
            if !d2.mul(&d1).is_zero() {
                return Err(crate::Error::NotAComplex);
            }
        }
        Ok((0..slices.len())
            .map(|k| {
                let h = cohomology_dim(dims[k], ranks[k], ranks.get(k + 1).copied().unwrap_or(0));
                (k as i64, dims[k], h)
            })
            .collect())
    } else {
        // Invariant subcomplex: restrict the cochain differential to the
        // exact invariant bases.
        let inv: Vec<Vec<Vec<(u32, QRat)>>> =
            slices.iter().map(|s| s.invariant_basis(lie)).collect();
        let inv_dims: Vec<usize> = inv.iter().map(|v| v.len()).collect();
        let mut ranks = vec![0usize; slices.len() + 1]; // rank of d: C^k -> C^{k+1}
        for k in 0..slices.len() - 1 {
            if inv_dims[k] == 0 || dims[k + 1] == 0 {
                continue;
            }
            let d = trunc_cochain_matrix(lie, n, &slices[k], &slices[k + 1])?;
            // Images of the invariant basis vectors under d.
            let mut img = SparseRationalMatrix::zero(dims[k + 1], inv_dims[k]);
            for (j, v) in inv[k].iter().enumerate() {
                let mut dense = vec![QRat::ZERO; dims[k]];
                for (i, c) in v {
                    dense[*i as usize] = c.clone();
                }
                let image = d.apply(&dense);
                let col: Vec<(u32, QRat)> = image
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i as u32, c))
                    .collect();
                img.set_column(j, col);
            }
            ranks[k + 1] = img.rank_exact_seeded(seed ^ (k as u64), 3);
        }
        Ok((0..slices.len())
            .map(|k| {
                let rank_out = ranks.get(k + 1).copied().unwrap_or(0);
                let rank_in = ranks[k];
                (
                    k as i64,
                    inv_dims[k],
                    cohomology_dim(inv_dims[k], rank_out, rank_in),
                )
            })
            .collect())
    }
}

/// Desk-scale verification of the truncated-cohomology prediction over all
/// z-weights down to `weight_bound`. Also asserts the per-weight Euler
/// characteristic identity, which needs no rank computation.
pub fn verify_trunc(
    lie: &LieAlgebra,
    n: i64,
    weight_bound: i64,
    cap: usize,
    seed: u64,
) -> Result<VerifyOutcome> {
    assert!(weight_bound <= 0);
    let table = predicted_trunc_hilbert(&lie.rs, n);
    let mut out = VerifyOutcome {
        pass: true,
        slices: Vec::new(),
        first_mismatch: None,
    };
    for w in (weight_bound..=0).rev() {
        let column = trunc_column(lie, n, w, false, cap, seed)?;
        let mut euler_dim = 0i64;
        let mut euler_h = 0i64;
        for &(degree, dim, h) in &column {
            if dim == 0 && h == 0 && free_exterior_coefficient(&table, degree, w) == 0 {
                continue;
            }
            let sign = if degree % 2 == 0 { 1 } else { -1 };
            euler_dim += sign * dim as i64;
            euler_h += sign * h;
            out.record(SliceOutcome {
                degree,
                z_weight: w,
                s_weight: 0,
                dim,
                computed: h,
                expected: free_exterior_coefficient(&table, degree, w),
            });
        }
        if euler_dim != euler_h {
            out.pass = false;
            out.first_mismatch
                .get_or_insert(format!("Euler characteristic mismatch at z-weight {w}"));
        }
    }
    Ok(out)
}

/// Remark-level consistency: the absolute cohomology factors as
/// H(g) (x) H(relative) in each (degree, weight); checked on computed
/// dimension tables.
pub fn absolute_relative_consistency(
    lie: &LieAlgebra,
    n: i64,
    weight_bound: i64,
    cap: usize,
    seed: u64,
) -> Result<bool> {
    // H(g) dims by degree: free exterior on degrees 2m+1 at weight 0.
    let rs = &lie.rs;
    let hg_table = GeneratorTable {
        entries: rs
            .exponents
            .iter()
            .map(|&m| (2 * m as i64 + 1, 0, 0, 1))
            .collect(),
    };
    let dmax = n * lie.dim as i64;
    for w in weight_bound..=0 {
        let absolute = trunc_column(lie, n, w, false, cap, seed)?;
        let relative = trunc_column(lie, n, w, true, cap, seed)?;
        let rel_dims: BTreeMap<i64, i64> = relative.iter().map(|&(d, _, h)| (d, h)).collect();
        for degree in 0..=dmax {
            let mut expect = 0i64;
            for dg in 0..=degree {
                let hg = free_exterior_coefficient(&hg_table, dg, 0);
                if hg != 0 {
                    expect += hg * rel_dims.get(&(degree - dg)).copied().unwrap_or(0);
                }
            }
            let got = absolute
                .iter()
                .find(|&&(d, _, _)| d == degree)
                .map(|&(_, _, h)| h)
                .unwrap_or(0);
            if got != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The degree-wise lower bound dim H(g[z]/z^n) >= dim H(g)^{(x) n}; valid
/// when the weight range covers every slice, so callers gate on that.
pub fn tensor_power_lower_bound(
    lie: &LieAlgebra,
    n: i64,
    all_weights_bound: i64,
    cap: usize,
    seed: u64,
) -> Result<bool> {
    let rs = &lie.rs;
    let mut gens = Vec::new();
    for _ in 0..n {
        for &m in &rs.exponents {
            gens.push((2 * m as i64 + 1, 0, 0, 1));
        }
    }
    let table = GeneratorTable { entries: gens };
    let mut by_degree: BTreeMap<i64, i64> = BTreeMap::new();
    for w in all_weights_bound..=0 {
        for (degree, _, h) in trunc_column(lie, n, w, false, cap, seed)? {
            *by_degree.entry(degree).or_insert(0) += h;
        }
    }
    for (degree, total) in by_degree {
        if total < free_exterior_coefficient(&table, degree, 0) {
            return Ok(false);
        }
    }
    Ok(true)
}
