//! The operator algebra on restricted Koszul slices: Laplacian identities,
//! harmonic cocycles built from invariant polynomials, and the span checks
//! that identify the harmonic space with products of those cocycles.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::koszul::ops::{
    ad_op, ad_star_op, box_bar, box_op, d_gen, d_laplace, d_star_op, dbar, dbar_star, g_action,
    k_op, r_op, r_star_op,
};
use crate::koszul::slice::{lambda_s_slice, operator_on_vectors, Slice};
use crate::koszul::{mode, normalize_odd, LieAlgebra, Monomial, TermAccum, TermVec};
use crate::linalg::SparseRationalMatrix;
use crate::rat::QRat;
use crate::{Error, Result};

/// Symmetric invariant multilinear form on g, stored on sorted index tuples.
#[derive(Clone, Debug)]
pub struct InvariantPolynomial {
    /// Tensor degree (= exponent + 1).
    pub degree: usize,
    pub tensor: BTreeMap<Vec<u8>, QRat>,
}

impl InvariantPolynomial {
    pub fn value(&self, indices: &mut [u8]) -> QRat {
        indices.sort_unstable();
        self.tensor
            .get(indices as &[u8])
            .cloned()
            .unwrap_or(QRat::ZERO)
    }
}

/// The polarized trace form of the defining representation in the given
/// tensor degree: Phi(x_1,...,x_d) = symmetrized trace of the product.
/// Unnormalized; every downstream claim is normalization-independent.
pub fn trace_form_polynomial(lie: &LieAlgebra, degree: usize) -> InvariantPolynomial {
    assert!(degree >= 2);
    let mut tensor: BTreeMap<Vec<u8>, QRat> = BTreeMap::new();
    let mut tuple = vec![0u8; degree];
    fn rec(
        lie: &LieAlgebra,
        degree: usize,
        pos: usize,
        start: usize,
        tuple: &mut Vec<u8>,
        tensor: &mut BTreeMap<Vec<u8>, QRat>,
    ) {
        if pos == degree {
            // Average of tr over all permutations of the tuple.
            let mut perm: Vec<usize> = tuple.iter().map(|&i| i as usize).collect();
            let mut total = QRat::ZERO;
            let mut count = 0i64;
            permute(&mut perm, 0, &mut |p| {
                let mut acc = lie.defining[p[0]].clone();
                for &i in &p[1..] {
                    acc = mat_mul_int(&acc, &lie.defining[i]);
                }
                let tr: i64 = (0..acc.len()).map(|r| acc[r][r]).sum();
                total = total.add(&QRat::from_int(tr));
                count += 1;
            });
            let v = total.div(&QRat::from_int(count));
            if !v.is_zero() {
                tensor.insert(tuple.clone(), v);
            }
            return;
        }
        for i in start..lie.dim {
            tuple[pos] = i as u8;
            rec(lie, degree, pos + 1, i, tuple, tensor);
        }
    }
    rec(lie, degree, 0, 0, &mut tuple, &mut tensor);
    InvariantPolynomial { degree, tensor }
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

fn mat_mul_int(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (0..n).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// Exact ad-invariance of the tensor: sum over slots of
/// Phi([x_g, x_{i_1}], x_{i_2}, ...) vanishes for every generator.
pub fn check_ad_invariance(lie: &LieAlgebra, phi: &InvariantPolynomial) -> bool {
    for g in 0..lie.dim {
        for tuple in phi.tensor.keys() {
            // Vary each slot of each stored tuple; since the tensor is
            // symmetric, stored (sorted) tuples cover all cases.
            let mut acc = QRat::ZERO;
            for slot in 0..phi.degree {
                let i = tuple[slot] as usize;
                for &(k, c) in lie.bracket_of(g, i) {
                    let mut t = tuple.clone();
                    t[slot] = k as u8;
                    acc = acc.add(&phi.clone().value(&mut t).mul(&QRat::from_int(c)));
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// The degree-0 cocycle S_Phi(-n): the z^n coefficient of
/// x(z) -> Phi(x(z), ..., x(z)) as an element of S^{m+1}.
pub fn s_cocycle(lie: &LieAlgebra, phi: &InvariantPolynomial, n: i64) -> TermVec {
    assert!(n >= 0);
    let d = phi.degree;
    let mut acc = TermAccum::new();
    // Compositions of n into d ordered non-negative parts, with all index
    // tuples; the symmetric accumulation merges duplicates.
    let mut parts = vec![0i64; d];
    fn rec(
        lie: &LieAlgebra,
        phi: &InvariantPolynomial,
        acc: &mut TermAccum,
        parts: &mut Vec<i64>,
        pos: usize,
        left: i64,
    ) {
        let d = phi.degree;
        if pos == d - 1 {
            parts[d - 1] = left;
            emit(lie, phi, acc, parts);
            return;
        }
        for p in 0..=left {
            parts[pos] = p;
            rec(lie, phi, acc, parts, pos + 1, left - p);
        }
    }
    fn emit(lie: &LieAlgebra, phi: &InvariantPolynomial, acc: &mut TermAccum, parts: &[i64]) {
        let d = phi.degree;
        let mut idx = vec![0usize; d];
        loop {
            let mut key: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
            let v = phi.clone().value(&mut key);
            if !v.is_zero() {
                let mut even: Vec<u16> = idx.iter().zip(parts).map(|(&i, &p)| mode(p, i)).collect();
                even.sort_unstable();
                acc.add(
                    Monomial {
                        odd: Vec::new(),
                        even,
                    },
                    v,
                );
            }
            // Odometer over index tuples.
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                idx[k] += 1;
                if idx[k] < lie.dim {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    rec(lie, phi, &mut acc, &mut parts, 0, n);
    // The ordered-composition sum overcounts each multiset by the number of
    // orderings; that is a harmless overall convention, but dividing by d!
    // keeps the Killing case matching the display S(-n) = sum sigma sigma.
    let norm = QRat::from_int((1..=d as i64).product::<i64>()).recip();
    acc.into_terms()
        .into_iter()
        .map(|(m, c)| (m, c.mul(&norm)))
        .collect()
}

/// The degree-1 cocycle E_Phi(-n): the z^{n-1} dz coefficient of
/// psi (x) sigmas -> Phi(d psi(z), sigma(z), ...).
pub fn e_cocycle(lie: &LieAlgebra, phi: &InvariantPolynomial, n: i64) -> TermVec {
    assert!(n >= 1);
    let d = phi.degree;
    let mut acc = TermAccum::new();
    // First slot is the exterior factor with depth p >= 1 and multiplier p;
    // remaining slots are symmetric with depths summing to n - p.
    let mut parts = vec![0i64; d - 1];
    for p in 1..=n {
        let rest = n - p;
        // compositions of `rest` into d-1 parts
        fn rec(
            lie: &LieAlgebra,
            phi: &InvariantPolynomial,
            acc: &mut TermAccum,
            parts: &mut Vec<i64>,
            pos: usize,
            left: i64,
            p: i64,
        ) {
            let d = phi.degree;
            if d == 1 || pos == d - 2 {
                if d >= 2 {
                    parts[d - 2] = left;
                }
                emit(lie, phi, acc, parts, p);
                return;
            }
            for q in 0..=left {
                parts[pos] = q;
                rec(lie, phi, acc, parts, pos + 1, left - q, p);
            }
        }
        fn emit(
            lie: &LieAlgebra,
            phi: &InvariantPolynomial,
            acc: &mut TermAccum,
            parts: &[i64],
            p: i64,
        ) {
            let d = phi.degree;
            let mut idx = vec![0usize; d];
            loop {
                let mut key: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
                let v = phi.clone().value(&mut key);
                if !v.is_zero() {
                    let odd = vec![mode(p, idx[0])];
                    let mut even: Vec<u16> = idx[1..]
                        .iter()
                        .zip(parts)
                        .map(|(&i, &q)| mode(q, i))
                        .collect();
                    even.sort_unstable();
                    acc.add(Monomial { odd, even }, v.mul(&QRat::from_int(p)));
                }
                let mut k = 0;
                loop {
                    if k == d {
                        return;
                    }
                    idx[k] += 1;
                    if idx[k] < lie.dim {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
        }
        if rest < 0 {
            continue;
        }
        rec(lie, phi, &mut acc, &mut parts, 0, rest, p);
    }
    let norm = QRat::from_int((1..=(d as i64 - 1)).product::<i64>().max(1)).recip();
    acc.into_terms()
        .into_iter()
        .map(|(m, c)| (m, c.mul(&norm)))
        .collect()
}

/// Checked cocycle builders: the invariant form's degree must be an
/// exponent plus one, and the z-weight index must be in range.
pub fn build_s_cocycle(
    lie: &LieAlgebra,
    phi: &InvariantPolynomial,
    n: i64,
) -> Result<TermVec> {
    if n < 0 || !lie.rs.exponents.iter().any(|&m| m as usize + 1 == phi.degree) {
        return Err(Error::DegreeError);
    }
    Ok(s_cocycle(lie, phi, n))
}

pub fn build_e_cocycle(
    lie: &LieAlgebra,
    phi: &InvariantPolynomial,
    n: i64,
) -> Result<TermVec> {
    if n < 1 || !lie.rs.exponents.iter().any(|&m| m as usize + 1 == phi.degree) {
        return Err(Error::DegreeError);
    }
    Ok(e_cocycle(lie, phi, n))
}

/// Supercommutative product of two cochains.
pub fn cochain_product(a: &TermVec, b: &TermVec) -> TermVec {
    let mut acc = TermAccum::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut odds = ma.odd.clone();
            odds.extend_from_slice(&mb.odd);
            if let Some((sorted, sign)) = normalize_odd(odds) {
                let mut evens = ma.even.clone();
                evens.extend_from_slice(&mb.even);
                evens.sort_unstable();
                acc.add(
                    Monomial {
                        odd: sorted,
                        even: evens,
                    },
                    ca.mul(cb).mul(&QRat::from_int(sign)),
                );
            }
        }
    }
    acc.into_terms()
}

/// Outcome of the slice-level Laplacian identity check, with the largest
/// operator entry seen (a cheap growth statistic for performance tracking).
#[derive(Clone, Debug)]
pub struct NakanoSliceOutcome {
    pub mismatch: Option<String>,
    pub max_entry: QRat,
}

/// Nakano-style identity on a full Lambda (x) S slice: for every basis
/// monomial, boxbar = box + D + K exactly.
pub fn nakano_slice_check(lie: &LieAlgebra, slice: &Slice) -> NakanoSliceOutcome {
    let mut max_entry = QRat::ZERO;
    for mono in &slice.basis {
        let bb = box_bar(lie, mono);
        for (_, c) in &bb {
            let a = if c.is_negative() { c.neg() } else { c.clone() };
            if a > max_entry {
                max_entry = a;
            }
        }
        let mut acc = TermAccum::new();
        acc.add_all(bb, &QRat::ONE);
        acc.add_all(box_op(lie, mono), &QRat::from_int(-1));
        acc.add_all(d_laplace(lie, mono), &QRat::from_int(-1));
        acc.add_all(k_op(lie, mono), &QRat::from_int(-1));
        let residue = acc.into_terms();
        if let Some((t, c)) = residue.first() {
            return NakanoSliceOutcome {
                mismatch: Some(format!(
                    "slice {} monomial {:?}: residue {} at {:?}",
                    slice.describe(),
                    mono,
                    c,
                    t
                )),
                max_entry,
            };
        }
    }
    NakanoSliceOutcome {
        mismatch: None,
        max_entry,
    }
}

/// The mismatch certificate alone.
pub fn verify_nakano_slice(lie: &LieAlgebra, slice: &Slice) -> Option<String> {
    nakano_slice_check(lie, slice).mismatch
}

/// On the invariant subspace the correction term K vanishes and the identity
/// reduces to boxbar = box + D. Checked on an exact invariant basis.
pub fn verify_nakano_invariants(lie: &LieAlgebra, slice: &Slice) -> Option<String> {
    let inv = slice.invariant_basis(lie);
    for (vi, v) in inv.iter().enumerate() {
        let mut resid = TermAccum::new();
        let mut kresid = TermAccum::new();
        for (idx, c) in v {
            let mono = &slice.basis[*idx as usize];
            resid.add_all(box_bar(lie, mono), c);
            resid.add_all(box_op(lie, mono), &c.neg());
            resid.add_all(d_laplace(lie, mono), &c.neg());
            kresid.add_all(k_op(lie, mono), c);
        }
        if let Some((t, c)) = resid.into_terms().first() {
            return Some(format!(
                "invariant vector {vi} of {}: boxbar - box - D residue {} at {:?}",
                slice.describe(),
                c,
                t
            ));
        }
        if let Some((t, c)) = kresid.into_terms().first() {
            return Some(format!(
                "invariant vector {vi} of {}: K residue {} at {:?}",
                slice.describe(),
                c,
                t
            ));
        }
    }
    None
}

/// Harmonic vectors of a restricted slice: the joint kernel, over the
/// invariant subspace, of d_i(-m)^* and (R_i(-m) + ad_i(-m))^* for m >= 1.
/// The m = 0 conditions are exactly invariance and are absorbed into the
/// invariant basis.
pub fn harmonic_basis(lie: &LieAlgebra, slice: &Slice) -> Result<Vec<Vec<(u32, QRat)>>> {
    let inv = slice.invariant_basis(lie);
    if inv.is_empty() {
        return Ok(Vec::new());
    }
    let depth = -slice.key.z_weight;
    // Stack all annihilation conditions into one tall matrix over the
    // invariant coordinates.
    let mut rows_total = 0usize;
    let mut stacked_cols: Vec<Vec<(u32, QRat)>> = vec![Vec::new(); inv.len()];
    for m in 1..=depth {
        let w_target = slice.key.z_weight + m;
        if w_target > 0 {
            break;
        }
        let tgt = if slice.key.degree >= 1 {
            Some(lambda_s_slice(
                lie,
                slice.key.degree - 1,
                slice.key.s_weight + 1,
                w_target,
                1,
                usize::MAX,
            )?)
        } else {
            None
        };
        let tgt2 = lambda_s_slice(
            lie,
            slice.key.degree,
            slice.key.s_weight,
            w_target,
            1,
            usize::MAX,
        )?;
        for i in 0..lie.dim {
            if let Some(tgt) = &tgt {
                let dmat =
                    operator_on_vectors(slice, tgt, &inv, |mono| d_star_op(lie, i, -m, mono))?;
                for (j, col) in stacked_cols.iter_mut().enumerate() {
                    for (r, c) in &dmat.columns[j] {
                        col.push((rows_total as u32 + r, c.clone()));
                    }
                }
                rows_total += tgt.dim();
            }
            let rmat = operator_on_vectors(slice, &tgt2, &inv, |mono| {
                let mut acc = TermAccum::new();
                acc.add_all(r_star_op(lie, i, -m, mono), &QRat::ONE);
                acc.add_all(ad_star_op(lie, i, -m, mono), &QRat::ONE);
                acc.into_terms()
            })?;
            for (j, col) in stacked_cols.iter_mut().enumerate() {
                for (r, c) in &rmat.columns[j] {
                    col.push((rows_total as u32 + r, c.clone()));
                }
            }
            rows_total += tgt2.dim();
        }
    }
    let mut stacked = SparseRationalMatrix::zero(rows_total.max(1), inv.len());
    for (j, col) in stacked_cols.into_iter().enumerate() {
        stacked.set_column(j, col);
    }
    let kernel = stacked.kernel_basis();
    // Expand kernel coordinates (over inv) back to slice coordinates.
    Ok(kernel
        .into_iter()
        .map(|kv| {
            let mut acc: BTreeMap<u32, QRat> = BTreeMap::new();
            for (ii, c) in kv {
                for (idx, v) in &inv[ii as usize] {
                    let e = acc.entry(*idx).or_insert(QRat::ZERO);
                    *e = e.add(&c.mul(v));
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        })
        .collect())
}

/// True when the given cochain (in slice coordinates) is killed by all the
/// harmonicity conditions and by dbar.
pub fn is_harmonic_cocycle(lie: &LieAlgebra, slice: &Slice, vec_coords: &[(u32, QRat)]) -> bool {
    let depth = -slice.key.z_weight;
    let expand = |op: &dyn Fn(&Monomial) -> TermVec| -> TermVec {
        let mut acc = TermAccum::new();
        for (idx, c) in vec_coords {
            acc.add_all(op(&slice.basis[*idx as usize]), c);
        }
        acc.into_terms()
    };
    if !expand(&|m| dbar(lie, m)).is_empty() {
        return false;
    }
    for i in 0..lie.dim {
        if !expand(&|m| g_action(lie, i, m)).is_empty() {
            return false;
        }
        for mm in 1..=depth {
            if !expand(&|m| d_star_op(lie, i, -mm, m)).is_empty() {
                return false;
            }
            let mut bad = false;
            let combined = expand(&|m| {
                let mut acc = TermAccum::new();
                acc.add_all(r_star_op(lie, i, -mm, m), &QRat::ONE);
                acc.add_all(ad_star_op(lie, i, -mm, m), &QRat::ONE);
                acc.into_terms()
            });
            if !combined.is_empty() {
                bad = true;
            }
            if bad {
                return false;
            }
        }
    }
    true
}

/// All products of S/E cocycles landing in the slice, as slice-coordinate
/// vectors. Generators come from the trace forms in degrees m_k + 1.
pub fn harmonic_products(lie: &LieAlgebra, slice: &Slice) -> Result<Vec<Vec<(u32, QRat)>>> {
    let depth = -slice.key.z_weight;
    // Generator list: (degree, sdeg, weight, cochain).
    let mut gens: Vec<(i64, i64, i64, TermVec)> = Vec::new();
    let mut phis: BTreeMap<usize, InvariantPolynomial> = BTreeMap::new();
    for &m in &lie.rs.exponents {
        let d = m as usize + 1;
        if d < 2 {
            continue;
        }
        phis.entry(d)
            .or_insert_with(|| trace_form_polynomial(lie, d));
    }
    for (&d, phi) in &phis {
        for n in 0..=depth {
            let s = s_cocycle(lie, phi, n);
            if !s.is_empty() {
                gens.push((0, d as i64, -n, s));
            }
        }
        for n in 1..=depth {
            let e = e_cocycle(lie, phi, n);
            if !e.is_empty() {
                gens.push((1, d as i64 - 1, -n, e));
            }
        }
    }
    // Enumerate monomials in the generators matching the slice key; odd
    // (degree-1) generators appear at most once.
    let mut results: Vec<TermVec> = Vec::new();
    fn rec(
        gens: &[(i64, i64, i64, TermVec)],
        pos: usize,
        cur: &TermVec,
        degree: i64,
        sdeg: i64,
        weight: i64,
        target: (i64, i64, i64),
        results: &mut Vec<TermVec>,
    ) {
        if (degree, sdeg, weight) == target {
            results.push(cur.clone());
            return;
        }
        if pos == gens.len() || degree > target.0 || sdeg > target.1 || weight < target.2 {
            return;
        }
        // Skip this generator.
        rec(gens, pos + 1, cur, degree, sdeg, weight, target, results);
        // Use it r >= 1 times (once if odd degree).
        let (gd, gp, gw, ref gv) = gens[pos];
        let mut acc = cur.clone();
        let mut r = 1;
        loop {
            acc = cochain_product(&acc, gv);
            if acc.is_empty() {
                return;
            }
            let (nd, np, nw) = (degree + r * gd, sdeg + r * gp, weight + r * gw);
            if nd > target.0 || np > target.1 || nw < target.2 {
                return;
            }
            rec(gens, pos + 1, &acc, nd, np, nw, target, results);
            if gd % 2 != 0 {
                return;
            }
            r += 1;
        }
    }
    let unit: TermVec = vec![(Monomial::unit(), QRat::ONE)];
    rec(
        &gens,
        0,
        &unit,
        0,
        0,
        0,
        (slice.key.degree, slice.key.s_weight, slice.key.z_weight),
        &mut results,
    );
    results.into_iter().map(|tv| slice.coords(&tv)).collect()
}

/// Span comparison for the harmonic description: products of S/E cocycles
/// must be harmonic cocycles and span the full harmonic space.
pub fn verify_harmonic_generation_slice(lie: &LieAlgebra, slice: &Slice) -> Result<Option<String>> {
    let harmonic = harmonic_basis(lie, slice)?;
    let products = harmonic_products(lie, slice)?;
    for p in &products {
        if !is_harmonic_cocycle(lie, slice, p) {
            return Ok(Some(format!(
                "a cocycle product in {} is not harmonic",
                slice.describe()
            )));
        }
    }
    let dim_h = harmonic.len();
    let mut prod_matrix = SparseRationalMatrix::zero(slice.dim(), products.len());
    for (j, p) in products.iter().enumerate() {
        prod_matrix.set_column(j, p.clone());
    }
    let rank_p = prod_matrix.rank_exact_seeded(0x9a7f, 3);
    if rank_p != dim_h {
        return Ok(Some(format!(
            "{}: product span has rank {rank_p} but the harmonic space has dim {dim_h}",
            slice.describe()
        )));
    }
    Ok(None)
}

/// Hodge decomposition dimensions: dim slice(inv) = rank dbar_in + rank
/// dbar_out + dim harmonic, and dim harmonic = dim H.
pub fn hodge_dims_ok(
    lie: &LieAlgebra,
    p: i64,
    z_weight: i64,
    degree: i64,
    cap: usize,
    seed: u64,
) -> Result<bool> {
    let column = crate::koszul::sym::sym_column(lie, p, z_weight, cap, seed)?;
    let slice = lambda_s_slice(lie, degree, p, z_weight, 1, cap)?;
    let inv_dim = column.get(degree as usize).map(|&(_, d, _)| d).unwrap_or(0);
    let h = column.get(degree as usize).map(|&(_, _, h)| h).unwrap_or(0);
    let harmonic = harmonic_basis(lie, &slice)?;
    if harmonic.len() as i64 != h {
        return Ok(false);
    }
    // Recompute the two ranks for the decomposition identity.
    let inv = slice.invariant_basis(lie);
    let tgt = lambda_s_slice(lie, degree + 1, p, z_weight, 1, cap)?;
    let out_rank = if inv.is_empty() {
        0
    } else {
        operator_on_vectors(&slice, &tgt, &inv, |m| dbar(lie, m))?.rank_exact_seeded(seed ^ 0x77, 3)
    };
    let in_rank = if degree == 0 {
        0
    } else {
        let src = lambda_s_slice(lie, degree - 1, p, z_weight, 1, cap)?;
        let src_inv = src.invariant_basis(lie);
        if src_inv.is_empty() {
            0
        } else {
            operator_on_vectors(&src, &slice, &src_inv, |m| dbar(lie, m))?
                .rank_exact_seeded(seed ^ 0x78, 3)
        }
    };
    Ok(inv_dim == out_rank + in_rank + harmonic.len())
}

/// Matrix of a named operator on a slice (for the CLI dump): names are
/// "dbar", "dbar_star", "box", "boxbar", "dlap", "k", or parametrized
/// "ad:i:m", "r:i:m", "d:i:m", "ad_star:i:m", "r_star:i:m", "d_star:i:m".
pub fn named_operator(lie: &LieAlgebra, name: &str, mono: &Monomial) -> Result<TermVec> {
    let parts: Vec<&str> = name.split(':').collect();
    let parse2 = |parts: &[&str]| -> Result<(usize, i64)> {
        if parts.len() != 3 {
            return Err(Error::OperatorDomainError);
        }
        let i: usize = parts[1].parse().map_err(|_| Error::OperatorDomainError)?;
        let m: i64 = parts[2].parse().map_err(|_| Error::OperatorDomainError)?;
        if i >= lie.dim {
            return Err(Error::OperatorDomainError);
        }
        Ok((i, m))
    };
    Ok(match parts[0] {
        "dbar" => dbar(lie, mono),
        "dbar_star" => dbar_star(lie, mono),
        "box" => box_op(lie, mono),
        "boxbar" => box_bar(lie, mono),
        "dlap" => d_laplace(lie, mono),
        "k" => k_op(lie, mono),
        "ad" => {
            let (i, m) = parse2(&parts)?;
            ad_op(lie, i, m, mono)
        }
        "r" => {
            let (i, m) = parse2(&parts)?;
            r_op(lie, i, m, mono)
        }
        "d" => {
            let (i, m) = parse2(&parts)?;
            d_gen(lie, i, m, mono)
        }
        "ad_star" => {
            let (i, m) = parse2(&parts)?;
            ad_star_op(lie, i, m, mono)
        }
        "r_star" => {
            let (i, m) = parse2(&parts)?;
            r_star_op(lie, i, m, mono)
        }
        "d_star" => {
            let (i, m) = parse2(&parts)?;
            d_star_op(lie, i, m, mono)
        }
        _ => return Err(Error::OperatorDomainError),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::build_lie_algebra;
    use crate::koszul::mode_idx;
    use crate::koszul::slice::single_odd;
    use crate::root_data::CartanFamily;

    fn coeff_of(v: &TermVec, m: &Monomial) -> QRat {
        v.iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or(QRat::ZERO)
    }

    #[test]
    fn killing_trace_form_is_invariant() {
        for (fam, rank) in [(CartanFamily::A, 1), (CartanFamily::A, 2)] {
            let lie = build_lie_algebra(fam, rank).unwrap();
            let phi = trace_form_polynomial(&lie, 2);
            assert!(check_ad_invariance(&lie, &phi));
            if rank == 2 {
                let phi3 = trace_form_polynomial(&lie, 3);
                assert!(check_ad_invariance(&lie, &phi3));
                assert!(!phi3.tensor.is_empty());
            }
        }
    }

    #[test]
    fn killing_s0_matches_display() {
        // S(0) = sum_a sigma^a(0) sigma^a(0) in the orthonormal frame; in
        // the rational basis it is the inverse trace form. For sl2 the dual
        // pairs are (e,f) and (h,h)/2-style coefficients; the invariant
        // content is what matters: S(0) spans the invariants of S^2 g*.
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let phi = trace_form_polynomial(&lie, 2);
        let s0 = s_cocycle(&lie, &phi, 0);
        assert!(!s0.is_empty());
        let slice = lambda_s_slice(&lie, 0, 2, 0, 1, 10_000).unwrap();
        let coords = slice.coords(&s0).unwrap();
        let inv = slice.invariant_basis(&lie);
        assert_eq!(inv.len(), 1);
        // s0 is a nonzero multiple of the invariant basis vector.
        let mut ratio: Option<QRat> = None;
        let dense_inv: BTreeMap<u32, QRat> = inv[0].iter().cloned().collect();
        for (idx, c) in &coords {
            let iv = dense_inv.get(idx).cloned().unwrap_or(QRat::ZERO);
            assert!(!iv.is_zero());
            let r = c.div(&iv);
            if let Some(r0) = &ratio {
                assert_eq!(&r, r0);
            } else {
                ratio = Some(r);
            }
        }
        assert_eq!(coords.len(), dense_inv.len());
    }

    #[test]
    fn killing_e2_matches_display() {
        // E(-2) = sum_a psi^a(-1) sigma^a(-1) + 2 psi^a(-2) sigma^a(0), up
        // to the Gram correction; check the p-weighting: the depth-2 odd
        // part carries twice the depth-1 coefficient pattern.
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let phi = trace_form_polynomial(&lie, 2);
        let e2 = e_cocycle(&lie, &phi, 2);
        // tr(e f) = 1 for sl2's defining rep, tr(h h) = 2.
        // psi^e(-1) sigma^f(-1) has coefficient tr(ef) = 1.
        let m_ef = Monomial {
            odd: alloc::vec![mode(1, 0)],
            even: alloc::vec![mode(1, 2)],
        };
        let m_ef2 = Monomial {
            odd: alloc::vec![mode(2, 0)],
            even: alloc::vec![mode(0, 2)],
        };
        let c1 = coeff_of(&e2, &m_ef);
        let c2 = coeff_of(&e2, &m_ef2);
        assert!(!c1.is_zero());
        assert_eq!(c2, c1.mul(&QRat::from_int(2)));
    }

    #[test]
    fn s_and_e_cocycles_are_closed_and_harmonic() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let phi = trace_form_polynomial(&lie, 2);
        for n in 0..=4i64 {
            let s = s_cocycle(&lie, &phi, n);
            let slice = lambda_s_slice(&lie, 0, 2, -n, 1, 100_000).unwrap();
            let coords = slice.coords(&s).unwrap();
            assert!(is_harmonic_cocycle(&lie, &slice, &coords), "S(-{n})");
        }
        for n in 1..=4i64 {
            let e = e_cocycle(&lie, &phi, n);
            let slice = lambda_s_slice(&lie, 1, 1, -n, 1, 100_000).unwrap();
            let coords = slice.coords(&e).unwrap();
            assert!(is_harmonic_cocycle(&lie, &slice, &coords), "E(-{n})");
        }
    }

    #[test]
    fn nakano_holds_on_small_full_slices() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        for degree in 0..=2i64 {
            for p in 0..=2i64 {
                for w in -3..=0i64 {
                    let slice = lambda_s_slice(&lie, degree, p, w, 1, 100_000).unwrap();
                    if slice.dim() == 0 {
                        continue;
                    }
                    assert_eq!(verify_nakano_slice(&lie, &slice), None);
                }
            }
        }
    }

    #[test]
    fn boxbar_is_scalar_on_depth_profiles_of_linear_terms() {
        // App-level spot values through the slice machinery: on the span of
        // psi(-2) the Laplacian acts as the identity.
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        for b in 0..3 {
            let x = single_odd(2, b);
            let bb = box_bar(&lie, &x);
            assert_eq!(coeff_of(&bb, &x), QRat::ONE);
        }
    }

    #[test]
    fn harmonic_dims_match_cohomology_small() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        for p in 0..=3i64 {
            for w in -3..=0i64 {
                let col = crate::koszul::sym::sym_column(&lie, p, w, 100_000, 3).unwrap();
                for &(degree, _, h) in &col {
                    if degree > -w {
                        continue;
                    }
                    let slice = lambda_s_slice(&lie, degree, p, w, 1, 100_000).unwrap();
                    let hb = harmonic_basis(&lie, &slice).unwrap();
                    assert_eq!(hb.len() as i64, h, "p={p} w={w} degree={degree}");
                    // Harmonicity implies closedness: every harmonic basis
                    // vector is a genuine cocycle.
                    for v in &hb {
                        assert!(is_harmonic_cocycle(&lie, &slice, v));
                    }
                }
            }
        }
    }

    #[test]
    fn checked_cocycle_builders_enforce_degrees() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let phi = trace_form_polynomial(&lie, 2);
        assert!(build_s_cocycle(&lie, &phi, 2).is_ok());
        assert!(build_e_cocycle(&lie, &phi, 2).is_ok());
        assert!(matches!(build_e_cocycle(&lie, &phi, 0), Err(Error::DegreeError)));
        // Degree 3 is not an exponent+1 for the rank-1 algebra.
        let phi3 = InvariantPolynomial { degree: 3, tensor: BTreeMap::new() };
        assert!(matches!(build_s_cocycle(&lie, &phi3, 1), Err(Error::DegreeError)));
    }

    #[test]
    fn named_operator_rejects_unknown_tags() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let x = single_odd(1, 0);
        assert!(named_operator(&lie, "dbar", &x).is_ok());
        assert!(matches!(
            named_operator(&lie, "frobnicate", &x),
            Err(Error::OperatorDomainError)
        ));
        assert!(matches!(
            named_operator(&lie, "ad:99:1", &x),
            Err(Error::OperatorDomainError)
        ));
    }

    #[test]
    fn hodge_dimensions_decompose() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        for p in 1..=3i64 {
            for w in -3..=-1i64 {
                for degree in 0..=(-w) {
                    assert!(
                        hodge_dims_ok(&lie, p, w, degree, 100_000, 3).unwrap(),
                        "p={p} w={w} degree={degree}"
                    );
                }
            }
        }
    }

    #[test]
    fn harmonic_generation_small_range() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        for p in 0..=3i64 {
            for w in -3..=0i64 {
                for degree in 0..=(-w) {
                    let slice = lambda_s_slice(&lie, degree, p, w, 1, 100_000).unwrap();
                    let res = verify_harmonic_generation_slice(&lie, &slice).unwrap();
                    assert_eq!(res, None, "p={p} w={w} degree={degree}");
                }
            }
        }
    }

    #[test]
    fn adjointness_via_slice_grams() {
        // G * M(P^*) = M(P)^T * G' for the generator pairs, exact.
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let src = lambda_s_slice(&lie, 1, 1, -2, 1, 10_000).unwrap();
        for (i, m) in [(0usize, 1i64), (1, 1), (2, 1)] {
            // ad(i, m): src -> tgt raises z-weight by m.
            let tgt = lambda_s_slice(&lie, 1, 1, -2 + m, 1, 10_000).unwrap();
            let fwd = crate::koszul::slice::operator_matrix(&src, &tgt, |x| ad_op(&lie, i, m, x))
                .unwrap();
            let back =
                crate::koszul::slice::operator_matrix(&tgt, &src, |x| ad_star_op(&lie, i, m, x))
                    .unwrap();
            let g_src = src.gram(&lie);
            let g_tgt = tgt.gram(&lie);
            // <P x | y>_tgt = <x | P* y>_src for all x in src, y in tgt:
            // fwd^T * G_tgt = G_src * back.
            let lhs = fwd.transpose().mul(&g_tgt);
            let rhs = g_src.mul(&back);
            assert_eq!(lhs, rhs, "ad adjointness i={i} m={m}");
        }
    }

    #[test]
    fn dbar_adjointness_via_slice_grams() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        for degree in 0..=1i64 {
            for p in 1..=2i64 {
                let src = lambda_s_slice(&lie, degree, p, -2, 1, 10_000).unwrap();
                let tgt = lambda_s_slice(&lie, degree + 1, p, -2, 1, 10_000).unwrap();
                if src.dim() == 0 || tgt.dim() == 0 {
                    continue;
                }
                let fwd =
                    crate::koszul::slice::operator_matrix(&src, &tgt, |x| dbar(&lie, x)).unwrap();
                let back =
                    crate::koszul::slice::operator_matrix(&tgt, &src, |x| dbar_star(&lie, x))
                        .unwrap();
                let lhs = fwd.transpose().mul(&tgt.gram(&lie));
                let rhs = src.gram(&lie).mul(&back);
                assert_eq!(lhs, rhs, "dbar adjointness at degree {degree}, p {p}");
            }
        }
    }

    #[test]
    fn relabelled_harmonic_dims_agree() {
        // The d/dz relabelling identifies psi~(-m) with (m+1) psi(-m-1); in
        // the relabelled complex the annihilation family takes the clean
        // form with no depth factors and odd modes start at depth 0. The
        // joint-kernel dimensions must transport: relabelled (k, p, w~)
        // matches standard (k, p, w~ - k).
        use crate::koszul::ops::{odd_to_even, r_op, r_star_op, replace_odd};
        use crate::linalg::SparseRationalMatrix;
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        // In the relabelled metric the starred operators carry no depth
        // ratios; the basis-independent kernel family is all-starred for
        // m >= 1 plus plain invariance at m = 0, with odd depths from 0.
        let clean_ad_star = |i: usize, m: i64, mono: &Monomial| -> TermVec {
            replace_odd(mono, |d, j| {
                let nd = d - m;
                if nd < 0 {
                    return alloc::vec::Vec::new();
                }
                lie.coad_star[i][j]
                    .iter()
                    .map(|(k, c)| (nd, *k, c.clone()))
                    .collect()
            })
        };
        let clean_d_star = |i: usize, m: i64, mono: &Monomial| -> TermVec {
            odd_to_even(mono, |d, j| {
                let nd = d - m;
                if nd < 0 {
                    return alloc::vec::Vec::new();
                }
                lie.coad_star[i][j]
                    .iter()
                    .map(|(k, c)| (nd, *k, c.clone()))
                    .collect()
            })
        };
        let rel_ad0 = |i: usize, mono: &Monomial| -> TermVec {
            replace_odd(mono, |d, j| {
                lie.coad[i][j]
                    .iter()
                    .map(|&(k, c)| (d, k, QRat::from_int(c)))
                    .collect()
            })
        };
        for (k, p, w_std) in [(1i64, 1i64, -2i64), (1, 2, -3), (2, 2, -3), (0, 2, -2)] {
            let w_rel = w_std + k; // psi~ depths are one less per odd factor
            if w_rel > 0 {
                continue;
            }
            let std_slice = lambda_s_slice(&lie, k, p, w_std, 1, 100_000).unwrap();
            let std_harmonic = harmonic_basis(&lie, &std_slice).unwrap();
            let rel_slice = lambda_s_slice(&lie, k, p, w_rel, 0, 100_000).unwrap();
            let mut cols: alloc::vec::Vec<alloc::vec::Vec<(u32, QRat)>> =
                alloc::vec![alloc::vec::Vec::new(); rel_slice.dim()];
            let mut rows_total = 0u32;
            let depth = -w_rel + 1;
            for m in 0..=depth {
                for i in 0..lie.dim {
                    for (ops_kind, dk, dp, dw) in [(0usize, 0i64, 0i64, m), (1, -1, 1, m)] {
                        let (td, tp, tw) = (k + dk, p + dp, w_rel + dw);
                        if td < 0 || tp < 0 || tw > 0 {
                            continue;
                        }
                        let tgt = lambda_s_slice(&lie, td, tp, tw, 0, 100_000).unwrap();
                        if tgt.dim() == 0 && rel_slice.dim() == 0 {
                            continue;
                        }
                        for (j, mono) in rel_slice.basis.iter().enumerate() {
                            let image: TermVec = if ops_kind == 1 {
                                clean_d_star(i, m, mono)
                            } else if m == 0 {
                                // invariance: the plain zero-mode action
                                let mut acc = TermAccum::new();
                                acc.add_all(r_op(&lie, i, 0, mono), &QRat::ONE);
                                acc.add_all(rel_ad0(i, mono), &QRat::ONE);
                                acc.into_terms()
                            } else {
                                let mut acc = TermAccum::new();
                                acc.add_all(r_star_op(&lie, i, -m, mono), &QRat::ONE);
                                acc.add_all(clean_ad_star(i, m, mono), &QRat::ONE);
                                acc.into_terms()
                            };
                            for (t, c) in image {
                                let idx = *tgt.index.get(&t).expect("image in slice");
                                cols[j].push((rows_total + idx, c));
                            }
                        }
                        rows_total += tgt.dim() as u32;
                    }
                }
            }
            let mut stacked =
                SparseRationalMatrix::zero(rows_total.max(1) as usize, rel_slice.dim());
            for (j, col) in cols.into_iter().enumerate() {
                let mut col = col;
                col.sort_by_key(|e| e.0);
                stacked.set_column(j, col);
            }
            let rel_dim = stacked.kernel_basis().len();
            assert_eq!(
                rel_dim,
                std_harmonic.len(),
                "labelling mismatch at (k={k}, p={p}, w={w_std})"
            );
        }
    }

    #[test]
    fn relabelled_adjoints_lose_their_depth_factors() {
        // Conjugating ad_star by the relabelling psi~(-m) = (m+1) psi(-m-1)
        // must produce the clean coad_star pattern with no depth ratios.
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        // Work on single psi modes: relabelled depth n corresponds to
        // standard depth n+1 with scale n+1.
        for i in 0..lie.dim {
            for m in 1..=2i64 {
                for n in m..=3i64 {
                    // Standard: ad_star(i, -m) on psi(-(n+1)) has scale
                    // ((n+1-m)/(n+1)); conjugation multiplies by
                    // (n+1)/(n-m+1), leaving exactly 1.
                    let x = single_odd(n + 1, 2);
                    let img = ad_star_op(&lie, i, -m, &x);
                    for (t, c) in &img {
                        let k = mode_idx(t.odd[0]);
                        let expect = lie.coad_star[i][2]
                            .iter()
                            .find(|(kk, _)| *kk == k)
                            .map(|(_, v)| v.clone())
                            .unwrap();
                        // scale in the standard labelling
                        let scale = QRat::new(n + 1 - m, n + 1);
                        assert_eq!(c, &expect.mul(&scale));
                        // relabelled scale: multiply by (n+1)/(n-m+1)
                        let rel = c.mul(&QRat::new(n + 1, n - m + 1));
                        assert_eq!(rel, expect, "clean relabelled coefficient");
                    }
                }
            }
        }
    }
}
