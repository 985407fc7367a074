//! The standalone operator check behind the truncated-cohomology spectral
//! sequence: L(f) = (m+1) n z^{n-1} f dz + z^n f' dz from C[z] to C[z] dz is
//! injective for n > 0 with cokernel spanned by dz, z dz, ..., z^{n-2} dz.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::SparseRationalMatrix;
use crate::rat::QRat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta1Outcome {
    pub injective: bool,
    pub cokernel_dim: i64,
    /// z-weights of the cokernel classes after the s-weight shift m*n,
    /// i.e. the relative generator weights mn+1 ... mn+n-1.
    pub cokernel_weights: Vec<i64>,
    pub pass: bool,
}

/// Build L on polynomials of degree <= nbound and check injectivity and the
/// cokernel in low degrees exactly.
pub fn delta1_check(m: i64, n: i64, nbound: i64) -> Delta1Outcome {
    assert!(n >= 1 && m >= 0 && nbound >= 2 * n);
    let rows = (nbound + n) as usize; // z^j dz, j = 0..nbound+n-1
    let cols = (nbound + 1) as usize; // z^k, k = 0..nbound
    let mut l = SparseRationalMatrix::zero(rows, cols);
    for k in 0..=nbound {
        // L(z^k) = ((m+1) n + k) z^{n+k-1} dz.
        let coef = (m + 1) * n + k;
        l.set_column(k as usize, vec![((n + k - 1) as u32, QRat::from_int(coef))]);
    }
    let rank = l.rank_exact_seeded((m as u64) << 8 | n as u64, 3);
    let injective = rank == cols;
    // Low-degree cokernel: which z^j dz with j <= n-2 meet the column space.
    let mut cokernel_weights = Vec::new();
    for j in 0..n.saturating_sub(1) {
        let mut target = vec![QRat::ZERO; rows];
        target[j as usize] = QRat::ONE;
        if l.solve(&target).is_none() {
            cokernel_weights.push(m * n + j + 1);
        }
    }
    let cokernel_dim = cokernel_weights.len() as i64;
    let expected_weights: Vec<i64> = (1..n).map(|i| m * n + i).collect();
    let pass = injective && cokernel_dim == n - 1 && cokernel_weights == expected_weights;
    Delta1Outcome {
        injective,
        cokernel_dim,
        cokernel_weights,
        pass,
    }
}
