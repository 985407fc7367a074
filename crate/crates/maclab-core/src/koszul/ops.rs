//! The graded derivations acting on Lambda (x) S monomials: truncated
//! (co)adjoint actions, their metric adjoints, the restricted differential
//! and the Laplacian-side operators built from them.
//!
//! Conventions: a monomial is the word (odd factors | even factors). An odd
//! operator acting at a position picks up (-1)^{number of odd factors
//! strictly before it}; re-sorting the odd block contributes the wedge sign.
//! Starred operators are the second-quantized single-mode adjoints for the
//! metric <psi(-m)|psi(-m)> = B^{-1}/m, <sigma(-m)|sigma(-m)> = B^{-1};
//! their depth-ratio scales are derived from those Gram factors, not from
//! hand-copied constants, and the slice-level adjointness tests pin them.

use alloc::vec::Vec;

use crate::koszul::{
    mode, mode_depth, mode_idx, normalize_odd, LieAlgebra, Monomial, TermAccum, TermVec,
};
use crate::rat::QRat;

/// Images of a single mode under a single-mode map: (depth, basis idx, coeff).
type ModeImage = Vec<(i64, usize, QRat)>;

#[inline]
fn max_depth(mono: &Monomial) -> i64 {
    mono.odd
        .iter()
        .chain(mono.even.iter())
        .map(|&m| mode_depth(m))
        .max()
        .unwrap_or(0)
}

/// Even-parity operator replacing odd modes one at a time.
pub(crate) fn replace_odd<F>(mono: &Monomial, f: F) -> TermVec
where
    F: Fn(i64, usize) -> ModeImage,
{
    let mut acc = TermAccum::new();
    for (p, &om) in mono.odd.iter().enumerate() {
        for (d, k, c) in f(mode_depth(om), mode_idx(om)) {
            let mut odds = mono.odd.clone();
            odds[p] = mode(d, k);
            if let Some((sorted, sign)) = normalize_odd(odds) {
                acc.add(
                    Monomial {
                        odd: sorted,
                        even: mono.even.clone(),
                    },
                    c.mul(&QRat::from_int(sign)),
                );
            }
        }
    }
    acc.into_terms()
}

/// Even-parity operator replacing even modes one at a time.
pub(crate) fn replace_even<F>(mono: &Monomial, f: F) -> TermVec
where
    F: Fn(i64, usize) -> ModeImage,
{
    let mut acc = TermAccum::new();
    for (p, &em) in mono.even.iter().enumerate() {
        for (d, k, c) in f(mode_depth(em), mode_idx(em)) {
            let mut evens = mono.even.clone();
            evens[p] = mode(d, k);
            evens.sort_unstable();
            acc.add(
                Monomial {
                    odd: mono.odd.clone(),
                    even: evens,
                },
                c,
            );
        }
    }
    acc.into_terms()
}

/// Odd-parity operator turning one even mode into an odd mode.
fn even_to_odd<F>(mono: &Monomial, f: F) -> TermVec
where
    F: Fn(i64, usize) -> ModeImage,
{
    let mut acc = TermAccum::new();
    let presign = if mono.odd.len() % 2 == 0 { 1i64 } else { -1 };
    for (p, &em) in mono.even.iter().enumerate() {
        for (d, k, c) in f(mode_depth(em), mode_idx(em)) {
            let mut odds = mono.odd.clone();
            odds.push(mode(d, k));
            if let Some((sorted, sign)) = normalize_odd(odds) {
                let mut evens = mono.even.clone();
                evens.remove(p);
                acc.add(
                    Monomial {
                        odd: sorted,
                        even: evens,
                    },
                    c.mul(&QRat::from_int(sign * presign)),
                );
            }
        }
    }
    acc.into_terms()
}

/// Odd-parity operator turning one odd mode into an even mode.
pub(crate) fn odd_to_even<F>(mono: &Monomial, f: F) -> TermVec
where
    F: Fn(i64, usize) -> ModeImage,
{
    let mut acc = TermAccum::new();
    for (p, &om) in mono.odd.iter().enumerate() {
        let presign = if p % 2 == 0 { 1i64 } else { -1 };
        for (d, k, c) in f(mode_depth(om), mode_idx(om)) {
            let mut odds = mono.odd.clone();
            odds.remove(p);
            let mut evens = mono.even.clone();
            evens.push(mode(d, k));
            evens.sort_unstable();
            acc.add(
                Monomial {
                    odd: odds,
                    even: evens,
                },
                c.mul(&QRat::from_int(presign)),
            );
        }
    }
    acc.into_terms()
}

/// Wedge psi^{idx}(-depth) from the left.
pub fn wedge_psi(mono: &Monomial, depth: i64, idx: usize) -> Option<(Monomial, i64)> {
    let mut odds = Vec::with_capacity(mono.odd.len() + 1);
    odds.push(mode(depth, idx));
    odds.extend_from_slice(&mono.odd);
    let (sorted, sign) = normalize_odd(odds)?;
    Some((
        Monomial {
            odd: sorted,
            even: mono.even.clone(),
        },
        sign,
    ))
}

/// Dual-basis contraction by the mode (depth, idx): removes one odd factor.
pub fn contract_psi(mono: &Monomial, depth: i64, idx: usize) -> Option<(Monomial, i64)> {
    let target = mode(depth, idx);
    let p = mono.odd.iter().position(|&m| m == target)?;
    let mut odds = mono.odd.clone();
    odds.remove(p);
    let sign = if p % 2 == 0 { 1 } else { -1 };
    Some((
        Monomial {
            odd: odds,
            even: mono.even.clone(),
        },
        sign,
    ))
}

/// Brutally truncated adjoint action on the exterior part: psi modes move up
/// by m (depth decreases), vanishing unless the target depth stays >= 1.
pub fn ad_op(lie: &LieAlgebra, i: usize, m: i64, mono: &Monomial) -> TermVec {
    replace_odd(mono, |d, j| {
        let nd = d - m;
        if nd < 1 {
            return Vec::new();
        }
        lie.coad[i][j]
            .iter()
            .map(|&(k, c)| (nd, k, QRat::from_int(c)))
            .collect()
    })
}

/// Truncated action on the symmetric part: sigma modes move by m, target
/// depth >= 0.
pub fn r_op(lie: &LieAlgebra, i: usize, m: i64, mono: &Monomial) -> TermVec {
    replace_even(mono, |d, j| {
        let nd = d - m;
        if nd < 0 {
            return Vec::new();
        }
        lie.coad[i][j]
            .iter()
            .map(|&(k, c)| (nd, k, QRat::from_int(c)))
            .collect()
    })
}

/// The odd generator d_i(m): sigma -> psi with depth shift -m, target >= 1.
pub fn d_gen(lie: &LieAlgebra, i: usize, m: i64, mono: &Monomial) -> TermVec {
    even_to_odd(mono, |d, j| {
        let nd = d - m;
        if nd < 1 {
            return Vec::new();
        }
        lie.coad[i][j]
            .iter()
            .map(|&(k, c)| (nd, k, QRat::from_int(c)))
            .collect()
    })
}

/// Metric adjoint of ad_op(i, m): depth shift +m with the Gram ratio
/// (target depth)/(source depth).
pub fn ad_star_op(lie: &LieAlgebra, i: usize, m: i64, mono: &Monomial) -> TermVec {
    replace_odd(mono, |d, j| {
        let nd = d + m;
        if nd < 1 || d < 1 {
            return Vec::new();
        }
        let scale = QRat::new(nd, d);
        lie.coad_star[i][j]
            .iter()
            .map(|(k, c)| (nd, *k, c.mul(&scale)))
            .collect()
    })
}

/// Metric adjoint of r_op(i, m): depth shift +m, no scale.
pub fn r_star_op(lie: &LieAlgebra, i: usize, m: i64, mono: &Monomial) -> TermVec {
    replace_even(mono, |d, j| {
        let nd = d + m;
        if nd < 0 {
            return Vec::new();
        }
        lie.coad_star[i][j]
            .iter()
            .map(|(k, c)| (nd, *k, c.clone()))
            .collect()
    })
}

/// Metric adjoint of d_gen(i, m): psi -> sigma, depth shift +m, scale
/// 1/(source depth).
pub fn d_star_op(lie: &LieAlgebra, i: usize, m: i64, mono: &Monomial) -> TermVec {
    odd_to_even(mono, |d, j| {
        let nd = d + m;
        if nd < 0 || d < 1 {
            return Vec::new();
        }
        let scale = QRat::new(1, d);
        lie.coad_star[i][j]
            .iter()
            .map(|(k, c)| (nd, *k, c.mul(&scale)))
            .collect()
    })
}

/// Total zero-mode coadjoint action of x_i on the whole monomial.
pub fn g_action(lie: &LieAlgebra, i: usize, mono: &Monomial) -> TermVec {
    let mut acc = TermAccum::new();
    acc.add_all(ad_op(lie, i, 0, mono), &QRat::ONE);
    acc.add_all(r_op(lie, i, 0, mono), &QRat::ONE);
    acc.into_terms()
}

/// The restricted Koszul differential: sum over m > 0 and the basis of
/// psi^i(-m) wedge (R_i(m) + ad_i(m)/2).
pub fn dbar(lie: &LieAlgebra, mono: &Monomial) -> TermVec {
    let half = QRat::new(1, 2);
    let mut acc = TermAccum::new();
    let dmax = max_depth(mono);
    for m in 1..=dmax {
        for i in 0..lie.dim {
            let mut inner = TermAccum::new();
            inner.add_all(r_op(lie, i, m, mono), &QRat::ONE);
            inner.add_all(ad_op(lie, i, m, mono), &half);
            for (t, c) in inner.into_terms() {
                if let Some((wedged, sign)) = wedge_psi(&t, m, i) {
                    acc.add(wedged, c.mul(&QRat::from_int(sign)));
                }
            }
        }
    }
    acc.into_terms()
}

/// The metric adjoint of `dbar`.
pub fn dbar_star(lie: &LieAlgebra, mono: &Monomial) -> TermVec {
    let half = QRat::new(1, 2);
    let mut acc = TermAccum::new();
    // Iterate over the odd factors hit by the contraction part of
    // Mult[psi^i(-m)]^* = (1/m) sum_j binv[i][j] Cont[j, m].
    let odd_modes: Vec<u16> = mono.odd.clone();
    for &om in &odd_modes {
        let (m, j) = (mode_depth(om), mode_idx(om));
        let Some((rest, csign)) = contract_psi(mono, m, j) else {
            continue;
        };
        for i in 0..lie.dim {
            let bij = &lie.binv[i][j];
            if bij.is_zero() {
                continue;
            }
            let scale = bij.div(&QRat::from_int(m)).mul(&QRat::from_int(csign));
            acc.add_all(r_star_op(lie, i, m, &rest), &scale);
            acc.add_all(ad_star_op(lie, i, m, &rest), &scale.mul(&half));
        }
    }
    acc.into_terms()
}

/// The Laplacian built from the differential: (dbar + dbar^*)^2 restricted
/// to a fixed slice, i.e. dbar dbar^* + dbar^* dbar.
pub fn box_bar(lie: &LieAlgebra, mono: &Monomial) -> TermVec {
    let mut acc = TermAccum::new();
    for (t, c) in dbar(lie, mono) {
        acc.add_all(dbar_star(lie, &t), &c);
    }
    for (t, c) in dbar_star(lie, mono) {
        acc.add_all(dbar(lie, &t), &c);
    }
    acc.into_terms()
}

/// The energy operator: sum over m > 0 of (1/m) sum_{i,j} binv[i][j]
/// [R_i(-m) + ad_i(-m)] [R_j(-m) + ad_j(-m)]^*.
pub fn box_op(lie: &LieAlgebra, mono: &Monomial) -> TermVec {
    let mut acc = TermAccum::new();
    let dmax = max_depth(mono);
    for m in 1..=dmax {
        let inv_m = QRat::new(1, m);
        for j in 0..lie.dim {
            let mut starred = TermAccum::new();
            starred.add_all(r_star_op(lie, j, -m, mono), &QRat::ONE);
            starred.add_all(ad_star_op(lie, j, -m, mono), &QRat::ONE);
            let starred = starred.into_terms();
            if starred.is_empty() {
                continue;
            }
            for i in 0..lie.dim {
                let bij = &lie.binv[i][j];
                if bij.is_zero() {
                    continue;
                }
                let scale = bij.mul(&inv_m);
                for (t, c) in &starred {
                    let cc = c.mul(&scale);
                    acc.add_all(r_op(lie, i, -m, t), &cc);
                    acc.add_all(ad_op(lie, i, -m, t), &cc);
                }
            }
        }
    }
    acc.into_terms()
}

/// D = sum_{m>0} sum_{i,j} binv[i][j] d_i(-m) d_j(-m)^*.
pub fn d_laplace(lie: &LieAlgebra, mono: &Monomial) -> TermVec {
    let mut acc = TermAccum::new();
    let dmax = mono.odd.iter().map(|&m| mode_depth(m)).max().unwrap_or(0);
    for m in 1..=dmax {
        for j in 0..lie.dim {
            let starred = d_star_op(lie, j, -m, mono);
            if starred.is_empty() {
                continue;
            }
            for i in 0..lie.dim {
                let bij = &lie.binv[i][j];
                if bij.is_zero() {
                    continue;
                }
                for (t, c) in &starred {
                    acc.add_all(d_gen(lie, i, -m, t), &c.mul(bij));
                }
            }
        }
    }
    acc.into_terms()
}

/// K = sum_{m>0} (1/m) sum_{i,j,l} kinv[j][l] (R + ad)_{[x_i, x_j]}(0)
/// compose Mult[psi^i(-m)] compose Cont[l, m].
pub fn k_op(lie: &LieAlgebra, mono: &Monomial) -> TermVec {
    let mut acc = TermAccum::new();
    let odd_modes: Vec<u16> = mono.odd.clone();
    for &om in &odd_modes {
        let (m, l) = (mode_depth(om), mode_idx(om));
        let Some((rest, csign)) = contract_psi(mono, m, l) else {
            continue;
        };
        let base = QRat::new(csign, m);
        for j in 0..lie.dim {
            let kjl = &lie.kinv[j][l];
            if kjl.is_zero() {
                continue;
            }
            for i in 0..lie.dim {
                if lie.bracket[i][j].is_empty() {
                    continue;
                }
                let Some((wedged, wsign)) = wedge_psi(&rest, m, i) else {
                    continue;
                };
                let scale = base.mul(kjl).mul(&QRat::from_int(wsign));
                for &(k, c) in &lie.bracket[i][j] {
                    let cc = scale.mul(&QRat::from_int(c));
                    acc.add_all(g_action(lie, k, &wedged), &cc);
                }
            }
        }
    }
    acc.into_terms()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koszul::slice::{single_even, single_odd};
    use crate::koszul::{build_lie_algebra, mode};
    use crate::root_data::CartanFamily;

    fn terms_of(v: &TermVec, m: &Monomial) -> QRat {
        v.iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or(QRat::ZERO)
    }

    /// The Laplacian-side identities on linear psi terms, exactly as the
    /// appendix computes them in the orthonormal frame:
    ///   D psi(-n) = psi(-n),
    ///   K psi(-n) = -psi(-n)/n,
    ///   box psi(-n) = sum_{0<m<n} (1/m - 1/n) psi(-n),
    ///   boxbar psi(-n) = sum_{0<m<n} (1/m) psi(-n).
    #[test]
    fn linear_psi_values() {
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        for n in 1..=4i64 {
            for b in 0..lie.dim {
                let x = single_odd(n, b);
                let expect_scalar = |v: &TermVec, s: QRat| {
                    assert_eq!(terms_of(v, &x), s, "n={n} b={b}");
                    for (t, _) in v {
                        assert_eq!(t, &x, "operator must be scalar on psi(-{n})");
                    }
                };
                expect_scalar(&d_laplace(&lie, &x), QRat::ONE);
                expect_scalar(&k_op(&lie, &x), QRat::new(-1, n));
                let mut box_expect = QRat::ZERO;
                let mut boxbar_expect = QRat::ZERO;
                for m in 1..n {
                    box_expect = box_expect.add(&QRat::new(1, m).sub(&QRat::new(1, n)));
                    boxbar_expect = boxbar_expect.add(&QRat::new(1, m));
                }
                expect_scalar(&box_op(&lie, &x), box_expect);
                expect_scalar(&box_bar(&lie, &x), boxbar_expect);
            }
        }
    }

    #[test]
    fn linear_psi_values_rank2() {
        let lie = build_lie_algebra(CartanFamily::A, 2).unwrap();
        for n in 1..=3i64 {
            for b in 0..lie.dim {
                let x = single_odd(n, b);
                assert_eq!(terms_of(&d_laplace(&lie, &x), &x), QRat::ONE);
                assert_eq!(terms_of(&k_op(&lie, &x), &x), QRat::new(-1, n));
                let mut boxbar_expect = QRat::ZERO;
                for m in 1..n {
                    boxbar_expect = boxbar_expect.add(&QRat::new(1, m));
                }
                let bb = box_bar(&lie, &x);
                assert_eq!(terms_of(&bb, &x), boxbar_expect);
                assert_eq!(bb.len(), usize::from(!boxbar_expect.is_zero()));
            }
        }
    }

    #[test]
    fn dbar_vanishes_on_pure_symmetric_zero_modes() {
        // R_i(m) moves sigma(0) to negative depth (impossible) and there is
        // no exterior factor: dbar kills 1 (x) S(0).
        let lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let x = single_even(0, 1);
        assert!(dbar(&lie, &x).is_empty());
        assert!(dbar_star(&lie, &x).is_empty());
    }

    #[test]
    fn dbar_squares_to_zero_on_samples() {
        let lie = build_lie_algebra(CartanFamily::A, 2).unwrap();
        let samples = [
            Monomial {
                odd: alloc::vec![mode(1, 0)],
                even: alloc::vec![mode(0, 3), mode(1, 5)],
            },
            Monomial {
                odd: alloc::vec![mode(1, 2), mode(2, 4)],
                even: alloc::vec![mode(0, 0)],
            },
            Monomial {
                odd: alloc::vec![],
                even: alloc::vec![mode(2, 1), mode(1, 6)],
            },
        ];
        for x in &samples {
            let mut acc = TermAccum::new();
            for (t, c) in dbar(&lie, x) {
                acc.add_all(dbar(&lie, &t), &c);
            }
            assert!(acc.into_terms().is_empty(), "dbar^2 != 0 on {x:?}");
        }
    }

    #[test]
    fn derivation_signs_are_consistent() {
        // contract(wedge(x)) + wedge(contract(x)) = <dual pairing> * x:
        // Cont[j,m] is an odd derivation against Mult[psi^j(-m)].
        let _lie = build_lie_algebra(CartanFamily::A, 1).unwrap();
        let x = Monomial {
            odd: alloc::vec![mode(1, 1), mode(2, 0)],
            even: alloc::vec![],
        };
        let (wx, s1) = wedge_psi(&x, 1, 0).unwrap();
        let (cwx, s2) = contract_psi(&wx, 1, 0).unwrap();
        // Anticommutator {Cont, Mult} = 1 on this configuration:
        // contract misses x itself, so the wedge-then-contract path must give
        // back x with total sign +1.
        assert_eq!(cwx, x);
        assert_eq!(s1 * s2, 1);
    }
}
