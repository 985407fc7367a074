//! Exact Lie algebra data for the cohomology modules.
//!
//! Structure constants come from commutators in the defining representation
//! (sl_{r+1} for the A series, gl_n for the reductive types), so every
//! constant is a small integer read off a matrix product, never a table.
//! A Killing-orthonormal basis would force irrational normalizations;
//! instead two exact forms are carried:
//!
//!  * `kform` - the invariant bilinear form used in basis contractions
//!    (the Killing form; the defining trace form for gl, whose Killing form
//!    is degenerate);
//!  * `bform` - the positive metric kform(theta(x), y), where theta is the
//!    transpose involution of the defining representation. The slice metric
//!    and every starred operator come from bform.

use alloc::vec;
use alloc::vec::Vec;

use crate::rat::QRat;
use crate::root_data::{build_root_system, CartanFamily, RootSystem, Weight};
use crate::{Error, Result};

/// Square matrix with i64 entries, used for the defining representation.
pub type Mat = Vec<Vec<i64>>;

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub rs: RootSystem,
    pub dim: usize,
    /// bracket[i][j]: [x_i, x_j] = sum c x_k as sparse (k, c).
    pub bracket: Vec<Vec<Vec<(usize, i64)>>>,
    /// coad[i][j]: the coadjoint action of x_i on the dual basis,
    /// X^j -> sum_k coad[i][j] = (k, -c_{ik}^j).
    pub coad: Vec<Vec<Vec<(usize, i64)>>>,
    /// coad_star[i] = bform * coad[i]^T * bform^{-1}, the single-mode
    /// B-adjoint matrix, stored sparse as [j] -> [(k, c)].
    pub coad_star: Vec<Vec<Vec<(usize, QRat)>>>,
    /// kform[i][j] and its inverse (dense).
    pub kform: Vec<Vec<QRat>>,
    pub kinv: Vec<Vec<QRat>>,
    /// bform[i][j] and its inverse (dense).
    pub bform: Vec<Vec<QRat>>,
    pub binv: Vec<Vec<QRat>>,
    /// Torus weight of each basis vector.
    pub basis_weight: Vec<Weight>,
    /// Basis indices acting as simple raising operators (for invariants).
    pub simple_raise: Vec<usize>,
    /// The defining representation matrices, kept for trace-form invariant
    /// polynomials.
    pub defining: Vec<Mat>,
}

/// Build the Lie algebra for a supported Cartan type. Only the types the
/// cohomology modules run on are provided: A1-A3 and gl1-gl3.
pub fn build_lie_algebra(family: CartanFamily, rank: usize) -> Result<LieAlgebra> {
    let rs = build_root_system(family, rank)?;
    let (basis, cartan_basis): (Vec<Mat>, Vec<Mat>) = match family {
        CartanFamily::A => sl_basis(rank + 1),
        CartanFamily::Gl => gl_basis(rank),
        _ => {
            return Err(Error::UnsupportedCartanType(alloc::format!(
                "{family}{rank} has no Lie-algebra backend"
            )))
        }
    };
    let dim = basis.len();
    assert_eq!(dim, rs.dim);

    // Brackets, expanded exactly in the chosen basis.
    let mut bracket = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let c = commutator(&basis[i], &basis[j]);
            bracket[i][j] = expand(&c, &basis, &cartan_basis, family, rank);
        }
    }

    // Coadjoint matrices: coad[i][j] = [(k, -c_{ik}^j)].
    let mut coad = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for (k, row) in bracket[i].iter().enumerate() {
            for &(j, c) in row {
                coad[i][j].push((k, -c));
            }
        }
        for row in coad[i].iter_mut() {
            row.sort_by_key(|e| e.0);
        }
    }

    // Invariant form: Killing (trace of ad-products) for semisimple types,
    // the defining trace form for gl.
    let kform: Vec<Vec<QRat>> = match family {
        CartanFamily::Gl => (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| QRat::from_int(trace_product(&basis[i], &basis[j])))
                    .collect()
            })
            .collect(),
        _ => {
            let ads: Vec<Mat> = (0..dim).map(|i| ad_matrix(&bracket, i, dim)).collect();
            (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| QRat::from_int(trace_product(&ads[i], &ads[j])))
                        .collect()
                })
                .collect()
        }
    };

    // theta = transpose in the defining representation; on this basis it is
    // a permutation (e_alpha <-> f_alpha, Cartan fixed).
    let theta = transpose_permutation(&basis);
    let bform: Vec<Vec<QRat>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let (ti, si) = theta[i];
                    kform[ti][j].mul(&QRat::from_int(si))
                })
                .collect()
        })
        .collect();

    let kinv = invert_dense(&kform)?;
    let binv = invert_dense(&bform)?;

    // Basis weights from the Cartan action: [h_k, x] = <wt, basis_k> x.
    let cartan_idx: Vec<usize> = cartan_indices(&basis, &cartan_basis);
    let mut basis_weight = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut coords = vec![0i64; rank];
        for (pos, &hk) in cartan_idx.iter().enumerate() {
            let row = &bracket[hk][j];
            let c = if row.is_empty() {
                0
            } else {
                assert!(
                    row.len() == 1 && row[0].0 == j,
                    "Cartan action must be diagonal"
                );
                row[0].1
            };
            coords[pos] = c;
        }
        basis_weight.push(Weight::from_coords(coords));
    }

    // Simple raising operators: the basis vectors whose weight is a simple
    // root (columns of the Cartan matrix).
    let mut simple_raise = Vec::new();
    let n_simple = match family {
        CartanFamily::Gl => rank - 1,
        _ => rank,
    };
    for s in 0..n_simple {
        let alpha: Vec<i64> = (0..rank).map(|i| rs.cartan_matrix[i][s]).collect();
        let idx = basis_weight
            .iter()
            .position(|w| w.coords == alpha)
            .expect("simple root vector present");
        simple_raise.push(idx);
    }

    // coad_star[i] = bform * coad[i]^T * binv, sparse by source index.
    let mut coad_star = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        // dense coad matrix M with M[k][j] = coefficient of X^k in op(X^j).
        let mut dense = vec![vec![QRat::ZERO; dim]; dim];
        for (j, row) in coad[i].iter().enumerate() {
            for &(k, c) in row {
                dense[k][j] = QRat::from_int(c);
            }
        }
        let mt = transpose_dense(&dense);
        let prod = mat_mul(&mat_mul(&bform, &mt), &binv);
        for j in 0..dim {
            for (k, prow) in prod.iter().enumerate() {
                if !prow[j].is_zero() {
                    coad_star[i][j].push((k, prow[j].clone()));
                }
            }
        }
    }

    let lie = LieAlgebra {
        rs,
        dim,
        bracket,
        coad,
        coad_star,
        kform,
        kinv,
        bform,
        binv,
        basis_weight,
        simple_raise,
        defining: basis,
    };
    lie.check_jacobi();
    Ok(lie)
}

impl LieAlgebra {
    /// Exhaustive Jacobi check; cheap at dim <= 9 and catches any expansion
    /// slip immediately.
    fn check_jacobi(&self) {
        let dim = self.dim;
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let mut acc = vec![0i64; dim];
                    for (mid, target) in [(a, (b, c)), (b, (c, a)), (c, (a, b))] {
                        let inner = &self.bracket[target.0][target.1];
                        for &(k, v) in inner {
                            for &(k2, v2) in &self.bracket[mid][k] {
                                acc[k2] += v * v2;
                            }
                        }
                    }
                    assert!(acc.iter().all(|&v| v == 0), "Jacobi fails at {a},{b},{c}");
                }
            }
        }
    }

    /// [x_i, x_j] as sparse coefficients.
    pub fn bracket_of(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.bracket[i][j]
    }
}

fn sl_basis(n: usize) -> (Vec<Mat>, Vec<Mat>) {
    let mut basis = Vec::new();
    // e's first, then Cartan, then f's; order within each group is fixed.
    for i in 0..n {
        for j in 0..n {
            if i < j {
                basis.push(unit_matrix(n, i, j));
            }
        }
    }
    let mut cartan = Vec::new();
    for k in 0..n - 1 {
        let mut h = vec![vec![0i64; n]; n];
        h[k][k] = 1;
        h[k + 1][k + 1] = -1;
        basis.push(h.clone());
        cartan.push(h);
    }
    for i in 0..n {
        for j in 0..n {
            if i > j {
                basis.push(unit_matrix(n, i, j));
            }
        }
    }
    (basis, cartan)
}

fn gl_basis(n: usize) -> (Vec<Mat>, Vec<Mat>) {
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j {
                basis.push(unit_matrix(n, i, j));
            }
        }
    }
    let mut cartan = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let mut h = vec![vec![0i64; n]; n];
        h[k][k] = 1;
        h[k + 1][k + 1] = -1;
        basis.push(h.clone());
        cartan.push(h);
    }
    // Central identity.
    let mut z = vec![vec![0i64; n]; n];
    for (k, row) in z.iter_mut().enumerate() {
        row[k] = 1;
    }
    basis.push(z.clone());
    cartan.push(z);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                basis.push(unit_matrix(n, i, j));
            }
        }
    }
    (basis, cartan)
}

fn unit_matrix(n: usize, i: usize, j: usize) -> Mat {
    let mut m = vec![vec![0i64; n]; n];
    m[i][j] = 1;
    m
}

fn commutator(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let mut acc = 0;
            for k in 0..n {
                acc += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
            *v = acc;
        }
    }
    out
}

/// Expand a matrix in the chosen basis: off-diagonal entries are direct
/// coefficients of unit matrices; the diagonal goes through the Cartan part.
fn expand(
    m: &Mat,
    basis: &[Mat],
    cartan_basis: &[Mat],
    family: CartanFamily,
    rank: usize,
) -> Vec<(usize, i64)> {
    let n = m.len();
    let mut coeffs = Vec::new();
    // Off-diagonal first.
    for (idx, b) in basis.iter().enumerate() {
        // identify unit matrices by their single off-diagonal entry
        let mut pos = None;
        let mut is_unit = true;
        'outer: for i in 0..n {
            for j in 0..n {
                if b[i][j] != 0 {
                    if i == j || pos.is_some() || b[i][j] != 1 {
                        is_unit = false;
                        break 'outer;
                    }
                    pos = Some((i, j));
                }
            }
        }
        if is_unit {
            if let Some((i, j)) = pos {
                if m[i][j] != 0 {
                    coeffs.push((idx, m[i][j]));
                }
            }
        }
    }
    // Diagonal part: solve in the Cartan basis.
    let diag: Vec<i64> = (0..n).map(|i| m[i][i]).collect();
    if diag.iter().any(|&d| d != 0) {
        let ncart = cartan_basis.len();
        // For sl: c_k = d_1 + ... + d_k (partial sums). For gl the extra
        // center absorbs the trace: trace must be divisible by n here, and
        // it always is for commutators (trace zero).
        let trace: i64 = diag.iter().sum();
        assert_eq!(trace, 0, "commutators are traceless");
        let mut c = vec![0i64; ncart];
        let upper = match family {
            CartanFamily::Gl => rank - 1,
            _ => ncart,
        };
        let mut partial = 0i64;
        for (k, ck) in c.iter_mut().enumerate().take(upper) {
            partial += diag[k];
            *ck = partial;
        }
        // Locate the Cartan basis vectors inside the full basis.
        for (k, ck) in c.iter().enumerate() {
            if *ck != 0 {
                let hk = &cartan_basis[k];
                let idx = basis.iter().position(|b| b == hk).expect("cartan in basis");
                coeffs.push((idx, *ck));
            }
        }
    }
    coeffs.sort_by_key(|e| e.0);
    coeffs
}

fn cartan_indices(basis: &[Mat], cartan_basis: &[Mat]) -> Vec<usize> {
    cartan_basis
        .iter()
        .map(|h| basis.iter().position(|b| b == h).expect("cartan in basis"))
        .collect()
}

fn ad_matrix(bracket: &[Vec<Vec<(usize, i64)>>], i: usize, dim: usize) -> Mat {
    let mut m = vec![vec![0i64; dim]; dim];
    for (j, row) in bracket[i].iter().enumerate() {
        for &(k, c) in row {
            m[k][j] = c;
        }
    }
    m
}

fn trace_product(a: &Mat, b: &Mat) -> i64 {
    let n = a.len();
    let mut acc = 0;
    for i in 0..n {
        for k in 0..n {
            acc += a[i][k] * b[k][i];
        }
    }
    acc
}

/// The transpose involution expressed on the basis: theta(x_i) = s * x_j.
fn transpose_permutation(basis: &[Mat]) -> Vec<(usize, i64)> {
    basis
        .iter()
        .map(|b| {
            let bt = transpose_int(b);
            for (j, cand) in basis.iter().enumerate() {
                if *cand == bt {
                    return (j, 1);
                }
                if cand
                    .iter()
                    .zip(&bt)
                    .all(|(r1, r2)| r1.iter().zip(r2).all(|(a, b)| *a == -*b))
                {
                    return (j, -1);
                }
            }
            panic!("transpose does not preserve the basis");
        })
        .collect()
}

fn transpose_int(m: &Mat) -> Mat {
    let n = m.len();
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out[j][i] = v;
        }
    }
    out
}

fn transpose_dense(m: &[Vec<QRat>]) -> Vec<Vec<QRat>> {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[j][i].clone()).collect())
        .collect()
}

fn mat_mul(a: &[Vec<QRat>], b: &[Vec<QRat>]) -> Vec<Vec<QRat>> {
    let n = a.len();
    let mut out = vec![vec![QRat::ZERO; n]; n];
    for (i, arow) in a.iter().enumerate() {
        for k in 0..n {
            if arow[k].is_zero() {
                continue;
            }
            for (j, v) in b[k].iter().enumerate() {
                if !v.is_zero() {
                    out[i][j] = out[i][j].add(&arow[k].mul(v));
                }
            }
        }
    }
    out
}

fn invert_dense(m: &[Vec<QRat>]) -> Result<Vec<Vec<QRat>>> {
    let n = m.len();
    let mut a: Vec<Vec<QRat>> = m.to_vec();
    let mut inv = vec![vec![QRat::ZERO; n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = QRat::ONE;
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::DimensionError)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].div(&p);
            inv[col][j] = inv[col][j].div(&p);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_structure_constants() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        assert_eq!(lie.dim, 3);
        // Basis order: e, h, f.
        assert_eq!(lie.bracket[0][2], vec![(1, 1)]); // [e,f] = h
        assert_eq!(lie.bracket[1][0], vec![(0, 2)]); // [h,e] = 2e
        assert_eq!(lie.bracket[1][2], vec![(2, -2)]); // [h,f] = -2f
                                                      // Killing: K(e,f) = 4, K(h,h) = 8.
        assert_eq!(lie.kform[0][2], QRat::from_int(4));
        assert_eq!(lie.kform[1][1], QRat::from_int(8));
        assert_eq!(lie.kform[0][0], QRat::ZERO);
        // bform is diagonal positive.
        assert_eq!(lie.bform[0][0], QRat::from_int(4));
        assert_eq!(lie.bform[2][2], QRat::from_int(4));
        assert_eq!(lie.bform[1][1], QRat::from_int(8));
        assert_eq!(lie.bform[0][2], QRat::ZERO);
    }

    #[test]
    fn sl3_dimensions_and_weights() {
        let lie = build_lie_algebra(CartanFamily::A, 2).unwrap();
        assert_eq!(lie.dim, 8);
        // Weights of the raising vectors are the simple-root columns.
        for (s, &idx) in lie.simple_raise.iter().enumerate() {
            let alpha: Vec<i64> = (0..2).map(|i| lie.rs.cartan_matrix[i][s]).collect();
            assert_eq!(lie.basis_weight[idx].coords, alpha);
        }
        // kform is ad-invariant: K([x,y],z) + K(y,[x,z]) = 0 on the basis.
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    let mut acc = QRat::ZERO;
                    for &(k, v) in &lie.bracket[a][b] {
                        acc = acc.add(&lie.kform[k][c].mul(&QRat::from_int(v)));
                    }
                    for &(k, v) in &lie.bracket[a][c] {
                        acc = acc.add(&lie.kform[b][k].mul(&QRat::from_int(v)));
                    }
                    assert!(acc.is_zero(), "invariance fails at {a},{b},{c}");
                }
            }
        }
    }

    #[test]
    fn gl1_is_abelian_with_unit_form() {
        let lie = build_lie_algebra(CartanFamily::Gl, 1).unwrap();
        assert_eq!(lie.dim, 1);
        assert!(lie.bracket[0][0].is_empty());
        assert_eq!(lie.kform[0][0], QRat::ONE);
    }

    #[test]
    fn coad_star_is_the_bform_adjoint() {
        let lie = build_lie_algebra(CartanFamily::A, 2).unwrap();
        // binv * M(coad_star) == M(coad)^T * binv as matrices, for each i.
        for i in 0..lie.dim {
            let mut m = vec![vec![QRat::ZERO; lie.dim]; lie.dim];
            let mut ms = vec![vec![QRat::ZERO; lie.dim]; lie.dim];
            for (j, row) in lie.coad[i].iter().enumerate() {
                for &(k, c) in row {
                    m[k][j] = QRat::from_int(c);
                }
            }
            for (j, row) in lie.coad_star[i].iter().enumerate() {
                for (k, c) in row {
                    ms[*k][j] = c.clone();
                }
            }
            // Dual-space metric is binv; adjointness reads
            // binv * ms = m^T * binv.
            let lhs = mat_mul(&lie.binv, &ms);
            let rhs = mat_mul(&transpose_dense(&m), &lie.binv);
            assert_eq!(lhs, rhs, "adjointness fails for generator {i}");
        }
    }
}
