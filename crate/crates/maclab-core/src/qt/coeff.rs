//! Coefficient domains for truncated (q, t)-series: plain rationals (torus
//! points evaluated), integer torus Laurent polynomials (character-valued
//! series), and rank-1 rational functions (symbolic route).
//!
//! Units and torus-weight embeddings depend on the rank, so they go through
//! a `Domain` value rather than the bare coefficient trait.

use alloc::string::String;
use alloc::vec::Vec;

use crate::char_ring::TorusLaurent;
use crate::qt::ratfun::RatFun;
use crate::rat::QRat;
use crate::root_data::Weight;

pub trait Coefficient: Clone + PartialEq + core::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale_rat(&self, r: &QRat) -> Self;
    /// Exact multiplicative inverse where the domain is a field (rationals,
    /// rational functions); `None` where it is not (torus polynomials).
    fn invert(&self) -> Option<Self>;
    fn canonical_string(&self) -> String;
}

impl Coefficient for QRat {
    fn zero() -> Self {
        QRat::ZERO
    }
    fn is_zero(&self) -> bool {
        QRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        QRat::add(self, o)
    }
    fn neg(&self) -> Self {
        QRat::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        QRat::mul(self, o)
    }
    fn scale_rat(&self, r: &QRat) -> Self {
        QRat::mul(self, r)
    }
    fn invert(&self) -> Option<Self> {
        if QRat::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn canonical_string(&self) -> String {
        alloc::format!("{self}")
    }
}

impl Coefficient for TorusLaurent {
    fn zero() -> Self {
        TorusLaurent::zero()
    }
    fn is_zero(&self) -> bool {
        TorusLaurent::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        TorusLaurent::add(self, o)
    }
    fn neg(&self) -> Self {
        TorusLaurent::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        TorusLaurent::mul(self, o)
    }
    fn scale_rat(&self, r: &QRat) -> Self {
        let (n, d) = r.as_small().expect("torus coefficients are integers");
        assert_eq!(d, 1, "torus coefficients are integers");
        self.scale(n as i128)
    }
    fn invert(&self) -> Option<Self> {
        None
    }
    fn canonical_string(&self) -> String {
        self.to_canonical_string()
    }
}

impl Coefficient for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFun::add(self, o)
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFun::mul(self, o)
    }
    fn scale_rat(&self, r: &QRat) -> Self {
        RatFun::mul(self, &RatFun::from_rat(r))
    }
    fn invert(&self) -> Option<Self> {
        RatFun::invert(self)
    }
    fn canonical_string(&self) -> String {
        RatFun::canonical_string(self)
    }
}

/// A coefficient domain bound to a torus of known rank.
pub trait Domain: Clone {
    type C: Coefficient;
    fn rank(&self) -> usize;
    fn one(&self) -> Self::C;
    fn rat(&self, r: &QRat) -> Self::C;
    /// The image of the torus character e^w in this domain.
    fn weight(&self, w: &Weight) -> Self::C;
}

/// Symbolic torus characters: coefficients are integer Laurent polynomials.
#[derive(Clone, Debug)]
pub struct TorusDomain {
    pub rank: usize,
}

impl Domain for TorusDomain {
    type C = TorusLaurent;
    fn rank(&self) -> usize {
        self.rank
    }
    fn one(&self) -> TorusLaurent {
        TorusLaurent::one(self.rank)
    }
    fn rat(&self, r: &QRat) -> TorusLaurent {
        let (n, d) = r.as_small().expect("integer scalar expected");
        assert_eq!(d, 1, "integer scalar expected");
        TorusLaurent::monomial(Weight::zero(self.rank), n as i128)
    }
    fn weight(&self, w: &Weight) -> TorusLaurent {
        TorusLaurent::monomial(w.clone(), 1)
    }
}

/// Evaluation at an exact rational torus point (values of the coordinate
/// characters e^{omega_i}).
#[derive(Clone, Debug)]
pub struct EvalDomain {
    pub point: Vec<QRat>,
}

impl Domain for EvalDomain {
    type C = QRat;
    fn rank(&self) -> usize {
        self.point.len()
    }
    fn one(&self) -> QRat {
        QRat::ONE
    }
    fn rat(&self, r: &QRat) -> QRat {
        r.clone()
    }
    fn weight(&self, w: &Weight) -> QRat {
        let mut acc = QRat::ONE;
        for (i, &e) in w.coords.iter().enumerate() {
            acc = acc.mul(&self.point[i].pow(e));
        }
        acc
    }
}

/// Rank-1 symbolic route: the torus variable is u = e^omega and weight
/// coordinates map to u-powers. Denominators in u are first-class.
#[derive(Clone, Debug)]
pub struct RatFun1Domain;

impl Domain for RatFun1Domain {
    type C = RatFun;
    fn rank(&self) -> usize {
        1
    }
    fn one(&self) -> RatFun {
        RatFun::one()
    }
    fn rat(&self, r: &QRat) -> RatFun {
        RatFun::from_rat(r)
    }
    fn weight(&self, w: &Weight) -> RatFun {
        assert_eq!(w.coords.len(), 1, "rank-1 domain");
        RatFun::monomial(QRat::ONE, w.coords[0])
    }
}
