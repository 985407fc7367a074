//! Truncated formal series in q^{1/d} and t with exact coefficients.
//!
//! Cutoff semantics: "through order N" means every kept exponent is exact;
//! binary operations carry the componentwise min of the operands' cutoffs and
//! never silently extend them. q-exponents are stored as integer numerators
//! over a fixed denominator d per series.

pub mod coeff;
pub mod factor;
pub mod ratfun;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::rat::QRat;
use crate::{Error, Result};
pub use coeff::{Coefficient, Domain, EvalDomain, RatFun1Domain, TorusDomain};
pub use factor::{expand_factor, truncated_product, AffineFactor};
pub use ratfun::RatFun;

/// Truncation data: q-exponents are multiples of 1/qden, kept while
/// numerator <= nq and t-exponent <= nt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cutoffs {
    pub qden: i64,
    pub nq: i64,
    pub nt: i64,
}

impl Cutoffs {
    pub fn new(qden: i64, nq: i64, nt: i64) -> Self {
        assert!(qden >= 1 && nq >= 0 && nt >= 0);
        Cutoffs { qden, nq, nt }
    }

    /// Integer-q cutoffs (d = 1).
    pub fn integer(nq: i64, nt: i64) -> Self {
        Self::new(1, nq, nt)
    }

    pub fn meet(&self, other: &Cutoffs) -> Result<Cutoffs> {
        if self.qden != other.qden {
            return Err(Error::DomainError);
        }
        Ok(Cutoffs {
            qden: self.qden,
            nq: self.nq.min(other.nq),
            nt: self.nt.min(other.nt),
        })
    }
}

/// Truncated series with exact coefficients, keyed by (q numerator, t exp).
#[derive(Clone, Debug, PartialEq)]
pub struct QTSeries<C: Coefficient> {
    pub cut: Cutoffs,
    pub terms: BTreeMap<(i64, i64), C>,
}

/// First differing exponent pair of an `equal_up_to` comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub q_num: i64,
    pub qden: i64,
    pub t_exp: i64,
    pub lhs: String,
    pub rhs: String,
}

impl<C: Coefficient> QTSeries<C> {
    pub fn zero(cut: Cutoffs) -> Self {
        QTSeries {
            cut,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(cut: Cutoffs, c: C) -> Self {
        let mut s = Self::zero(cut);
        s.push(0, 0, c);
        s
    }

    pub fn one_with(cut: Cutoffs, unit: C) -> Self {
        Self::constant(cut, unit)
    }

    /// Add c * q^{qn/d} t^{te}, dropping anything outside the cutoffs.
    pub fn push(&mut self, q_num: i64, t_exp: i64, c: C) {
        if c.is_zero() || q_num > self.cut.nq || t_exp > self.cut.nt {
            return;
        }
        assert!(q_num >= 0 && t_exp >= 0, "series support is non-negative");
        let e = self.terms.entry((q_num, t_exp)).or_insert_with(C::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&(q_num, t_exp));
        }
    }

    pub fn coeff(&self, q_num: i64, t_exp: i64) -> Result<C> {
        if q_num > self.cut.nq || t_exp > self.cut.nt || q_num < 0 || t_exp < 0 {
            return Err(Error::SupportError);
        }
        Ok(self
            .terms
            .get(&(q_num, t_exp))
            .cloned()
            .unwrap_or_else(C::zero))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let cut = self.cut.meet(&other.cut)?;
        let mut out = Self::zero(cut);
        for (&(q, t), c) in &self.terms {
            out.push(q, t, c.clone());
        }
        for (&(q, t), c) in &other.terms {
            out.push(q, t, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        QTSeries {
            cut: self.cut,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self::zero(self.cut);
        for (&(q, t), c) in &self.terms {
            out.push(q, t, c.mul(k));
        }
        out
    }

    pub fn scale_rat(&self, r: &QRat) -> Self {
        let mut out = Self::zero(self.cut);
        for (&(q, t), c) in &self.terms {
            out.push(q, t, c.scale_rat(r));
        }
        out
    }

    /// Multiply by the monomial q^{qn/d} t^{te} (both shifts >= 0).
    pub fn shift(&self, q_num: i64, t_exp: i64) -> Self {
        let mut out = Self::zero(self.cut);
        for (&(q, t), c) in &self.terms {
            out.push(q + q_num, t + t_exp, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let cut = self.cut.meet(&other.cut)?;
        let mut out = Self::zero(cut);
        for (&(qa, ta), ca) in &self.terms {
            if qa > cut.nq || ta > cut.nt {
                continue;
            }
            for (&(qb, tb), cb) in &other.terms {
                let (q, t) = (qa + qb, ta + tb);
                if q > cut.nq || t > cut.nt {
                    continue;
                }
                out.push(q, t, ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Inverse of a series with constant term equal to `unit`.
    pub fn invert(&self, unit: &C) -> Result<Self> {
        let c0 = self.coeff(0, 0)?;
        if c0 != *unit {
            return Err(Error::NotAUnit);
        }
        // f = unit - g with g supported away from (0,0); iterate
        // acc <- 1 + g*acc, which converges to the inverse within cutoffs.
        let mut g = self.neg();
        g.terms.remove(&(0, 0));
        let mut acc = Self::one_with(self.cut, unit.clone());
        // Each iteration is exact one g-adic order further; the (q+t) order
        // of g is at least 1/qden in q or 1 in t, so this terminates.
        let iterations = (self.cut.nq + self.cut.nt + 2) as usize;
        for _ in 0..iterations {
            let next = Self::one_with(self.cut, unit.clone()).add(&g.mul(&acc)?)?;
            if next == acc {
                break;
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32, unit: &C) -> Result<Self> {
        let mut acc = Self::one_with(self.cut, unit.clone());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitute t -> t * q^{r_num/qden}. For negative r the exact region
    /// shrinks: the new q-cutoff is nq + r_num * nt (an error if nothing
    /// survives); terms that would acquire a negative q-exponent trigger
    /// SupportError.
    pub fn subst_t_to_t_qpow(&self, r_num: i64) -> Result<Self> {
        let new_nq = if r_num >= 0 {
            self.cut.nq
        } else {
            self.cut.nq + r_num * self.cut.nt
        };
        if new_nq < 0 {
            return Err(Error::SupportError);
        }
        let cut = Cutoffs {
            qden: self.cut.qden,
            nq: new_nq,
            nt: self.cut.nt,
        };
        let mut out = Self::zero(cut);
        for (&(q, t), c) in &self.terms {
            let q2 = q + r_num * t;
            if q2 < 0 {
                return Err(Error::SupportError);
            }
            out.push(q2, t, c.clone());
        }
        Ok(out)
    }

    /// Substitute q -> q^{1/k}: exponent values are divided by k, which means
    /// the same numerators over a k-times finer denominator.
    pub fn subst_q_root(&self, k: i64) -> Self {
        assert!(k >= 1);
        QTSeries {
            cut: Cutoffs {
                qden: self.cut.qden * k,
                nq: self.cut.nq,
                nt: self.cut.nt,
            },
            terms: self.terms.clone(),
        }
    }

    /// Re-express with a finer q-denominator without changing the value.
    pub fn refine_qden(&self, k: i64) -> Self {
        assert!(k >= 1);
        QTSeries {
            cut: Cutoffs {
                qden: self.cut.qden * k,
                nq: self.cut.nq * k,
                nt: self.cut.nt,
            },
            terms: self
                .terms
                .iter()
                .map(|(&(q, t), c)| ((q * k, t), c.clone()))
                .collect(),
        }
    }

    /// Truncate in place to smaller cutoffs.
    pub fn truncate(&self, cut: Cutoffs) -> Result<Self> {
        if cut.qden != self.cut.qden || cut.nq > self.cut.nq || cut.nt > self.cut.nt {
            return Err(Error::DomainError);
        }
        let mut out = Self::zero(cut);
        for (&(q, t), c) in &self.terms {
            out.push(q, t, c.clone());
        }
        Ok(out)
    }

    /// Compare over the shared cutoff rectangle; the first mismatch (in
    /// (q, t) lexicographic order) is reported as a certificate.
    pub fn equal_up_to(&self, other: &Self) -> core::result::Result<(), Mismatch> {
        let cut = match self.cut.meet(&other.cut) {
            Ok(c) => c,
            Err(_) => {
                return Err(Mismatch {
                    q_num: -1,
                    qden: self.cut.qden,
                    t_exp: -1,
                    lhs: String::from("qden mismatch"),
                    rhs: String::from("qden mismatch"),
                })
            }
        };
        let mut keys: Vec<(i64, i64)> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .filter(|&(q, t)| q <= cut.nq && t <= cut.nt)
            .collect();
        keys.sort_unstable();
        keys.dedup();
        for (q, t) in keys {
            let a = self.terms.get(&(q, t)).cloned().unwrap_or_else(C::zero);
            let b = other.terms.get(&(q, t)).cloned().unwrap_or_else(C::zero);
            if a != b {
                return Err(Mismatch {
                    q_num: q,
                    qden: cut.qden,
                    t_exp: t,
                    lhs: a.canonical_string(),
                    rhs: b.canonical_string(),
                });
            }
        }
        Ok(())
    }

    /// Canonical sorted text form "coeff * q^{a/d} t^b".
    pub fn to_canonical_string(&self) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (&(q, t), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "({})", c.canonical_string());
            if q != 0 {
                if self.cut.qden == 1 {
                    let _ = write!(s, " * q^{q}");
                } else {
                    let _ = write!(s, " * q^{{{q}/{}}}", self.cut.qden);
                }
            }
            if t != 0 {
                let _ = write!(s, " * t^{t}");
            }
        }
        s
    }
}

/// Evaluate the torus content of a TorusLaurent-coefficient series at an
/// exact rational point.
pub fn eval_torus_series(
    s: &QTSeries<crate::char_ring::TorusLaurent>,
    point: &[QRat],
) -> QTSeries<QRat> {
    let mut out = QTSeries::zero(s.cut);
    for (&(q, t), c) in &s.terms {
        out.push(q, t, c.eval(point));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::QRat;

    fn c(n: i64) -> QRat {
        QRat::from_int(n)
    }

    #[test]
    fn geometric_series_inverts_one_minus_tq() {
        let cut = Cutoffs::integer(6, 6);
        let mut f = QTSeries::one_with(cut, QRat::ONE);
        f.push(1, 1, c(-1)); // 1 - tq
        let inv = f.invert(&QRat::ONE).unwrap();
        // sum (tq)^k
        let mut expect = QTSeries::zero(cut);
        for k in 0..=6 {
            expect.push(k, k, c(1));
        }
        assert_eq!(inv, expect);
        assert_eq!(f.mul(&inv).unwrap(), QTSeries::one_with(cut, QRat::ONE));
    }

    #[test]
    fn euler_product_head() {
        // prod_{n=1..5} (1 - q^n) through q^5 = 1 - q - q^2 + q^5.
        let cut = Cutoffs::integer(5, 0);
        let mut acc = QTSeries::one_with(cut, QRat::ONE);
        for n in 1..=5 {
            let mut f = QTSeries::one_with(cut, QRat::ONE);
            f.push(n, 0, c(-1));
            acc = acc.mul(&f).unwrap();
        }
        let mut expect = QTSeries::zero(cut);
        expect.push(0, 0, c(1));
        expect.push(1, 0, c(-1));
        expect.push(2, 0, c(-1));
        expect.push(5, 0, c(1));
        assert_eq!(acc, expect);
    }

    #[test]
    fn additive_identity() {
        let cut = Cutoffs::integer(3, 3);
        let mut x = QTSeries::zero(cut);
        x.push(1, 2, c(7));
        x.push(0, 0, c(-2));
        assert_eq!(x.add(&QTSeries::zero(cut)).unwrap(), x);
    }

    #[test]
    fn binary_ops_meet_cutoffs() {
        let a = QTSeries::one_with(Cutoffs::integer(5, 7), QRat::ONE);
        let b = QTSeries::one_with(Cutoffs::integer(9, 2), QRat::ONE);
        let s = a.mul(&b).unwrap();
        assert_eq!(s.cut, Cutoffs::integer(5, 2));
        let denmix = QTSeries::one_with(Cutoffs::new(2, 5, 5), QRat::ONE);
        assert!(a.mul(&denmix).is_err());
    }

    #[test]
    fn invert_requires_unit_constant_term() {
        let cut = Cutoffs::integer(3, 3);
        let mut f = QTSeries::zero(cut);
        f.push(0, 0, c(2));
        assert!(matches!(f.invert(&QRat::ONE), Err(crate::Error::NotAUnit)));
    }

    #[test]
    fn substitution_examples() {
        // t^2 q^3 under t -> t q^{-1} becomes t^2 q.
        let cut = Cutoffs::integer(8, 4);
        let mut f = QTSeries::zero(cut);
        f.push(3, 2, c(1));
        let g = f.subst_t_to_t_qpow(-1).unwrap();
        assert_eq!(g.coeff(1, 2).unwrap(), c(1));
        assert_eq!(g.cut.nq, 4); // 8 - 1*4

        // q under q -> q^{1/2} has numerator 1 over qden 2.
        let mut h = QTSeries::zero(Cutoffs::integer(4, 0));
        h.push(1, 0, c(1));
        let hh = h.subst_q_root(2);
        assert_eq!(hh.cut.qden, 2);
        assert_eq!(hh.coeff(1, 0).unwrap(), c(1));

        // A substitution pushing support negative is an error.
        let mut neg = QTSeries::zero(Cutoffs::integer(2, 4));
        neg.push(0, 1, c(1));
        assert!(matches!(
            neg.subst_t_to_t_qpow(-1),
            Err(crate::Error::SupportError)
        ));
    }

    #[test]
    fn coeff_support_errors() {
        let cut = Cutoffs::integer(4, 4);
        let mut f = QTSeries::zero(cut);
        f.push(1, 0, c(-1));
        assert_eq!(f.coeff(1, 0).unwrap(), c(-1));
        assert_eq!(f.coeff(2, 2).unwrap(), QRat::ZERO);
        assert!(f.coeff(5, 0).is_err());
    }

    #[test]
    fn equal_up_to_reports_first_mismatch() {
        let cut = Cutoffs::integer(4, 4);
        let one = QTSeries::one_with(cut, QRat::ONE);
        assert!(one.equal_up_to(&one).is_ok());
        let mut other = one.clone();
        other.push(4, 4, c(1));
        let m = one.equal_up_to(&other).unwrap_err();
        assert_eq!((m.q_num, m.t_exp), (4, 4));
    }

    #[test]
    fn torus_evaluation() {
        use crate::char_ring::TorusLaurent;
        use crate::root_data::Weight;
        let cut = Cutoffs::integer(2, 2);
        let mut s: QTSeries<TorusLaurent> = QTSeries::zero(cut);
        s.push(
            0,
            0,
            TorusLaurent::monomial(Weight::from_coords(alloc::vec![2]), 1),
        );
        let v = eval_torus_series(&s, &[QRat::new(2, 3)]);
        assert_eq!(v.coeff(0, 0).unwrap(), QRat::new(4, 9));
    }
}
