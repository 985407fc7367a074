//! Exact character-ring arithmetic on the maximal torus.
//!
//! Characters are stored fully orbit-expanded (memory is cheap at rank <= 4
//! and multiplication becomes a plain convolution). Virtual characters with
//! negative multiplicities are first-class; the constant-term functional is
//! the multiplicity of the trivial summand.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::rat::QRat;
use crate::root_data::{RootSystem, Weight, WeylElement};
use crate::{Error, Result};

/// Integer-coefficient Laurent polynomial on the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusLaurent {
    pub terms: BTreeMap<Weight, i128>,
}

impl TorusLaurent {
    pub fn zero() -> Self {
        TorusLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(Weight::zero(rank), 1)
    }

    pub fn monomial(w: Weight, c: i128) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(w, c);
        }
        TorusLaurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Weight) -> i128 {
        *self.terms.get(w).unwrap_or(&0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let e = terms.entry(w.clone()).or_insert(0);
            *e = e.checked_add(*c).expect("torus coefficient overflow");
            if *e == 0 {
                terms.remove(w);
            }
        }
        TorusLaurent { terms }
    }

    pub fn neg(&self) -> Self {
        TorusLaurent {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i128) -> Self {
        if k == 0 {
            return Self::zero();
        }
        TorusLaurent {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.checked_mul(k).expect("overflow")))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Weight, i128> = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let w = wa.add(wb);
                let c = ca.checked_mul(*cb).expect("torus coefficient overflow");
                let e = terms.entry(w).or_insert(0);
                *e = e.checked_add(c).expect("torus coefficient overflow");
            }
        }
        terms.retain(|_, c| *c != 0);
        TorusLaurent { terms }
    }

    /// Substitute every torus variable by its k-th power (weights scale by k).
    pub fn power_substitute(&self, k: i64) -> Self {
        TorusLaurent {
            terms: self.terms.iter().map(|(w, c)| (w.scale(k), *c)).collect(),
        }
    }

    /// The dual character (weights negated). For a Weyl-invariant actual
    /// character this is the character of the dual representation.
    pub fn dual(&self) -> Self {
        TorusLaurent {
            terms: self.terms.iter().map(|(w, c)| (w.neg(), *c)).collect(),
        }
    }

    /// Value at the identity: the (virtual) dimension.
    pub fn dimension(&self) -> i128 {
        self.terms.values().sum()
    }

    /// Exact evaluation at a torus point given by the values of the
    /// coordinate characters.
    pub fn eval(&self, point: &[QRat]) -> QRat {
        let mut acc = QRat::ZERO;
        for (w, c) in &self.terms {
            debug_assert!(*c <= i64::MAX as i128 && *c >= i64::MIN as i128);
            let mut term = QRat::from_int(*c as i64);
            for (i, &e) in w.coords.iter().enumerate() {
                term = term.mul(&point[i].pow(e));
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn is_weyl_invariant(&self, rs: &RootSystem) -> bool {
        let els = rs.weyl_elements();
        for (w, c) in &self.terms {
            for el in &els {
                if self.coeff(&el.apply(w)) != *c {
                    return false;
                }
            }
        }
        true
    }

    /// Canonical text form "c*e[a,b,...] + ...", weights sorted.
    pub fn to_canonical_string(&self) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "{c}*e{:?}", w.coords);
        }
        s
    }
}

/// Multiplicities of a (virtual) character over dominant weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrDecomposition {
    pub mults: BTreeMap<Weight, i128>,
}

/// The character of the adjoint representation.
pub fn adjoint_character(rs: &RootSystem) -> TorusLaurent {
    let mut t = TorusLaurent::monomial(Weight::zero(rs.rank), rs.rank as i128);
    for r in rs.all_roots() {
        t = t.add(&TorusLaurent::monomial(r, 1));
    }
    t
}

/// Weight multiplicities of the irreducible with highest weight lambda, by
/// Freudenthal's recursion in exact arithmetic.
pub fn weight_multiplicities(rs: &RootSystem, lambda: &Weight) -> Result<BTreeMap<Weight, i128>> {
    if !rs.is_dominant(lambda) {
        return Err(Error::DominanceError);
    }
    let lr = lambda.add(&rs.rho);
    let lr2 = rs.weight_inner(&lr, &lr);
    // Candidate weights below lambda in the root-lattice coset, inside the
    // sphere |mu + rho| <= |lambda + rho|.
    let mut dominant: Vec<Weight> = Vec::new();
    let mut frontier = vec![lambda.clone()];
    let mut seen = BTreeMap::new();
    seen.insert(lambda.clone(), ());
    while let Some(w) = frontier.pop() {
        if rs.is_dominant(&w) {
            dominant.push(w.clone());
        }
        for alpha in &rs.positive_roots {
            let next = w.sub(alpha);
            let nr = next.add(&rs.rho);
            if rs.weight_inner(&nr, &nr) <= lr2 && !seen.contains_key(&next) {
                seen.insert(next.clone(), ());
                frontier.push(next);
            }
        }
    }
    // Process by increasing height of lambda - mu (lambda first).
    dominant.sort_by_key(|mu| height_key(rs, &lambda.sub(mu)));

    let mut mult: BTreeMap<Weight, i128> = BTreeMap::new();
    let els = rs.weyl_elements();

    for mu in &dominant {
        if mu == lambda {
            set_orbit(&mut mult, &els, mu, 1);
            continue;
        }
        let mr = mu.add(&rs.rho);
        let denom = lr2.sub(&rs.weight_inner(&mr, &mr));
        if denom.is_zero() {
            continue; // not a weight of V_lambda
        }
        let mut sum = QRat::ZERO;
        for alpha in &rs.positive_roots {
            let mut k = 1i64;
            loop {
                let shifted = mu.add(&alpha.scale(k));
                let sr = shifted.add(&rs.rho);
                if rs.weight_inner(&sr, &sr) > lr2 && k > 1 {
                    break;
                }
                let m = *mult.get(&shifted).unwrap_or(&0);
                if m != 0 {
                    let inner = rs.weight_inner(&shifted, alpha);
                    sum = sum.add(&inner.mul(&QRat::from_int(m as i64)));
                }
                k += 1;
                if k > 64 {
                    break; // far outside any supported weight polytope
                }
            }
        }
        let value = sum.mul(&QRat::from_int(2)).div(&denom);
        let (n, d) = value.as_small().expect("multiplicity fits in words");
        assert_eq!(d, 1, "Freudenthal produced a non-integer");
        if n != 0 {
            set_orbit(&mut mult, &els, mu, n as i128);
        }
    }
    mult.retain(|_, c| *c != 0);
    Ok(mult)
}

fn set_orbit(mult: &mut BTreeMap<Weight, i128>, els: &[WeylElement], mu: &Weight, value: i128) {
    for el in els {
        mult.insert(el.apply(mu), value);
    }
}

fn height_key(rs: &RootSystem, w: &Weight) -> QRat {
    // Sum of simple-root coefficients of w, used only as a processing order.
    let n = rs.rank;
    let m: Vec<Vec<QRat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| QRat::from_int(rs.cartan_matrix[i][j]))
                .collect()
        })
        .collect();
    let c = solve_square(
        &m,
        &w.coords
            .iter()
            .map(|&x| QRat::from_int(x))
            .collect::<Vec<_>>(),
    );
    let mut h = QRat::ZERO;
    for v in c {
        h = h.add(&v);
    }
    h
}

fn solve_square(m: &[Vec<QRat>], rhs: &[QRat]) -> Vec<QRat> {
    let n = m.len();
    let mut a: Vec<Vec<QRat>> = m.to_vec();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = v.div(&p);
        }
        b[col] = b[col].div(&p);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                }
                b[r] = b[r].sub(&f.mul(&b[col]));
            }
        }
    }
    b
}

/// Weyl character of the irreducible with the given dominant highest weight.
pub fn weyl_character(rs: &RootSystem, lambda: &Weight) -> Result<TorusLaurent> {
    let mult = weight_multiplicities(rs, lambda)?;
    Ok(TorusLaurent { terms: mult })
}

/// Dimension by the Weyl formula, an independent cross-check of the expanded
/// character.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<i128> {
    if !rs.is_dominant(lambda) {
        return Err(Error::DominanceError);
    }
    let mut num = QRat::ONE;
    let mut den = QRat::ONE;
    let lr = lambda.add(&rs.rho);
    for alpha in &rs.positive_roots {
        num = num.mul(&rs.weight_inner(&lr, alpha));
        den = den.mul(&rs.weight_inner(&rs.rho, alpha));
    }
    let v = num.div(&den);
    let (n, d) = v.as_small().expect("dimension fits");
    assert_eq!(d, 1);
    Ok(n as i128)
}

/// Decompose a Weyl-invariant (virtual) character into irreducibles by
/// iterated subtraction of the lexicographically largest dominant term.
pub fn decompose(rs: &RootSystem, chi: &TorusLaurent) -> Result<IrrDecomposition> {
    if !chi.is_weyl_invariant(rs) {
        return Err(Error::SymmetryError);
    }
    let mut rem = chi.clone();
    let mut mults: BTreeMap<Weight, i128> = BTreeMap::new();
    while !rem.is_zero() {
        let mu = rem
            .terms
            .iter()
            .filter(|(w, c)| **c != 0 && rs.is_dominant(w))
            .map(|(w, _)| w.clone())
            .max()
            .ok_or(Error::SymmetryError)?;
        let c = rem.coeff(&mu);
        let chi_mu = weyl_character(rs, &mu)?;
        rem = rem.sub(&chi_mu.scale(c));
        // The lex choice may revisit a dominant weight on virtual input, so
        // multiplicities accumulate rather than overwrite.
        *mults.entry(mu).or_insert(0) += c;
    }
    mults.retain(|_, c| *c != 0);
    Ok(IrrDecomposition { mults })
}

/// Rebuild the character from a decomposition (round-trip partner of
/// `decompose`).
pub fn reconstruct(rs: &RootSystem, dec: &IrrDecomposition) -> Result<TorusLaurent> {
    let mut acc = TorusLaurent::zero();
    for (w, c) in &dec.mults {
        acc = acc.add(&weyl_character(rs, w)?.scale(*c));
    }
    Ok(acc)
}

/// Multiplicity of the trivial representation: the G-constant term.
///
/// For Weyl-invariant chi, the coefficient of e^mu (mu dominant) in
/// chi * prod_{alpha>0}(1 - e^{-alpha}) is the multiplicity of V_mu; tests
/// pin the equality with decompose(chi).mults[0].
pub fn invariant_multiplicity(rs: &RootSystem, chi: &TorusLaurent) -> Result<i128> {
    if !chi.is_weyl_invariant(rs) {
        return Err(Error::SymmetryError);
    }
    Ok(invariant_multiplicity_unchecked(rs, chi))
}

/// Same functional without the (quadratic-cost) invariance precheck; used in
/// inner loops where invariance is structural.
pub fn invariant_multiplicity_unchecked(rs: &RootSystem, chi: &TorusLaurent) -> i128 {
    let mut acc = chi.clone();
    for alpha in &rs.positive_roots {
        let factor = TorusLaurent::one(rs.rank).sub(&TorusLaurent::monomial(alpha.neg(), 1));
        acc = acc.mul(&factor);
    }
    acc.coeff(&Weight::zero(rs.rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::build_root_system_str;

    fn rs(s: &str) -> RootSystem {
        build_root_system_str(s).unwrap()
    }

    fn w(coords: &[i64]) -> Weight {
        Weight::from_coords(coords.to_vec())
    }

    #[test]
    fn a1_fundamental_character() {
        let a1 = rs("A1");
        let chi = weyl_character(&a1, &w(&[1])).unwrap();
        let expect = TorusLaurent::monomial(w(&[1]), 1).add(&TorusLaurent::monomial(w(&[-1]), 1));
        assert_eq!(chi, expect);
    }

    #[test]
    fn a1_adjoint_character() {
        let a1 = rs("A1");
        let chi = weyl_character(&a1, &w(&[2])).unwrap();
        assert_eq!(chi, adjoint_character(&a1));
        assert_eq!(chi.dimension(), 3);
    }

    #[test]
    fn a2_adjoint_is_roots_plus_rank() {
        let a2 = rs("A2");
        let chi = weyl_character(&a2, &w(&[1, 1])).unwrap();
        assert_eq!(chi, adjoint_character(&a2));
        assert_eq!(chi.coeff(&Weight::zero(2)), 2);
        assert_eq!(chi.dimension(), 8);
    }

    #[test]
    fn decompose_is_idempotent_on_irreducibles() {
        let a2 = rs("A2");
        for lam in [[1i64, 0], [0, 1], [1, 1], [2, 1]] {
            let chi = weyl_character(&a2, &w(&lam)).unwrap();
            let dec = decompose(&a2, &chi).unwrap();
            assert_eq!(dec.mults.len(), 1);
            assert_eq!(dec.mults[&w(&lam)], 1);
        }
    }

    #[test]
    fn a1_clebsch_gordan_square() {
        let a1 = rs("A1");
        let v = weyl_character(&a1, &w(&[1])).unwrap();
        let dec = decompose(&a1, &v.mul(&v)).unwrap();
        assert_eq!(dec.mults.len(), 2);
        assert_eq!(dec.mults[&w(&[2])], 1);
        assert_eq!(dec.mults[&w(&[0])], 1);
    }

    #[test]
    fn a1_adjoint_square_decomposition() {
        // Brute-force weight bookkeeping of (u^2+1+u^-2)^2 gives
        // {4w: 1, 2w: 1, 0: 1}, i.e. {2 alpha, alpha, 0} with alpha = 2 omega.
        let a1 = rs("A1");
        let ad = adjoint_character(&a1);
        let dec = decompose(&a1, &ad.mul(&ad)).unwrap();
        assert_eq!(dec.mults.len(), 3);
        assert_eq!(dec.mults[&w(&[4])], 1);
        assert_eq!(dec.mults[&w(&[2])], 1);
        assert_eq!(dec.mults[&w(&[0])], 1);
    }

    #[test]
    fn invariant_multiplicity_examples() {
        for t in ["A1", "A2"] {
            let r = rs(t);
            let ad = adjoint_character(&r);
            assert_eq!(invariant_multiplicity(&r, &ad).unwrap(), 0);
            assert_eq!(invariant_multiplicity(&r, &ad.mul(&ad)).unwrap(), 1);
            assert_eq!(
                invariant_multiplicity(&r, &TorusLaurent::one(r.rank)).unwrap(),
                1
            );
        }
    }

    #[test]
    fn invariant_multiplicity_matches_decompose() {
        let a2 = rs("A2");
        let ad = adjoint_character(&a2);
        let v = weyl_character(&a2, &w(&[1, 0])).unwrap();
        let samples = [
            TorusLaurent::one(2),
            ad.clone(),
            ad.mul(&ad),
            ad.mul(&v).mul(&v.dual()),
            ad.mul(&ad).sub(&v.mul(&v.dual())),
        ];
        for chi in &samples {
            let via_ct = invariant_multiplicity(&a2, chi).unwrap();
            let via_dec = decompose(&a2, chi).unwrap();
            assert_eq!(via_ct, *via_dec.mults.get(&Weight::zero(2)).unwrap_or(&0));
        }
    }

    #[test]
    fn rejects_bad_input() {
        let a1 = rs("A1");
        let skew = TorusLaurent::monomial(w(&[1]), 1);
        assert_eq!(decompose(&a1, &skew), Err(Error::SymmetryError));
        assert_eq!(
            invariant_multiplicity(&a1, &skew),
            Err(Error::SymmetryError)
        );
        assert!(weyl_character(&a1, &w(&[-1])).is_err());
    }

    #[test]
    fn dimensions_match_weyl_formula_exhaustively() {
        for t in ["A1", "A2", "B2", "G2"] {
            let r = rs(t);
            let max = 4i64;
            let mut stack = vec![vec![]];
            while let Some(cur) = stack.pop() {
                if cur.len() == r.rank {
                    let lam = w(&cur);
                    let chi = weyl_character(&r, &lam).unwrap();
                    assert_eq!(
                        chi.dimension(),
                        weyl_dimension(&r, &lam).unwrap(),
                        "{t} {cur:?}"
                    );
                    continue;
                }
                for c in 0..=max {
                    let mut next = cur.clone();
                    next.push(c);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn ct_of_product_with_dual_is_positive_for_actual_characters() {
        let a2 = rs("A2");
        for lam in [[1i64, 0], [1, 1], [2, 0], [2, 1]] {
            let chi = weyl_character(&a2, &w(&lam)).unwrap();
            let p = chi.mul(&chi.dual());
            assert!(invariant_multiplicity(&a2, &p).unwrap() >= 1);
        }
    }

    #[test]
    fn a2_symmetric_power_invariants_detect_exponents() {
        // Independent oracle for the exponents of A2: the invariants in
        // S^k(adjoint) for k = 1,2,3 have dims 0,1,1, so the invariant ring
        // has free generators in degrees 2 and 3: exponents 1 and 2.
        let a2 = rs("A2");
        let ad = adjoint_character(&a2);
        let ad2 = ad.power_substitute(2);
        let ad3 = ad.power_substitute(3);
        let s2_times2 = ad.mul(&ad).add(&ad2);
        let s3_times6 = ad
            .mul(&ad)
            .mul(&ad)
            .add(&ad.mul(&ad2).scale(3))
            .add(&ad3.scale(2));
        assert_eq!(invariant_multiplicity(&a2, &ad).unwrap(), 0);
        assert_eq!(invariant_multiplicity(&a2, &s2_times2).unwrap(), 2); // dim 1
        assert_eq!(invariant_multiplicity(&a2, &s3_times6).unwrap(), 6); // dim 1
    }

    #[test]
    fn a1_exterior_invariants_poincare() {
        // (Lambda g)^g for the 3-dimensional simple algebra: dims 1,0,0,1,
        // forcing the single exponent m = 1 (generator degree 3 = 2m+1).
        let a1 = rs("A1");
        let x1 = adjoint_character(&a1);
        let x2 = x1.power_substitute(2);
        let x3 = x1.power_substitute(3);
        let l2_times2 = x1.mul(&x1).sub(&x2);
        let l3_times6 = x1
            .mul(&x1)
            .mul(&x1)
            .sub(&x1.mul(&x2).scale(3))
            .add(&x3.scale(2));
        assert_eq!(invariant_multiplicity(&a1, &x1).unwrap(), 0);
        assert_eq!(invariant_multiplicity(&a1, &l2_times2).unwrap(), 0);
        assert_eq!(invariant_multiplicity(&a1, &l3_times6).unwrap(), 6); // dim 1
    }

    #[test]
    fn canonical_string_is_sorted_and_stable() {
        let a1 = rs("A1");
        let chi = adjoint_character(&a1);
        assert_eq!(chi.to_canonical_string(), "1*e[-2] + 1*e[0] + 1*e[2]");
    }
}
