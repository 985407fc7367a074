//! Univariate rational functions over Q in a torus variable u, with Laurent
//! numerators. This is the exact coefficient domain for rank-1 symbolic
//! series: summands of lattice sums carry denominators like (1 - u^2) that
//! only cancel after summation.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::rat::QRat;

/// Dense polynomial over Q, little-endian, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<QRat>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }
    pub fn one() -> Self {
        Poly(vec![QRat::ONE])
    }
    pub fn constant(c: QRat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
    fn trim(mut v: Vec<QRat>) -> Self {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        Poly(v)
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![QRat::ZERO; n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] = v[i].add(c);
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] = v[i].add(c);
        }
        Poly::trim(v)
    }
    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| c.neg()).collect())
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![QRat::ZERO; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::trim(v)
    }
    pub fn scale(&self, k: &QRat) -> Poly {
        Poly::trim(self.0.iter().map(|c| c.mul(k)).collect())
    }
    /// (quotient, remainder) with deg r < deg d.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero());
        let mut r = self.0.clone();
        let dd = d.0.len();
        if r.len() < dd {
            return (Poly::zero(), Poly::trim(r));
        }
        let mut q = vec![QRat::ZERO; r.len() - dd + 1];
        let lead = d.0.last().unwrap().clone();
        for i in (0..q.len()).rev() {
            let c = r[i + dd - 1].div(&lead);
            if c.is_zero() {
                continue;
            }
            q[i] = c.clone();
            for (k, dc) in d.0.iter().enumerate() {
                r[i + k] = r[i + k].sub(&c.mul(dc));
            }
        }
        (Poly::trim(q), Poly::trim(r))
    }
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        // Monic normalization makes the gcd canonical.
        let lead = a.0.last().unwrap().clone();
        a.scale(&lead.recip())
    }
    pub fn eval(&self, x: &QRat) -> QRat {
        let mut acc = QRat::ZERO;
        for c in self.0.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

/// Rational function num/den with num a Laurent polynomial (u^offset * poly)
/// and den a polynomial with den(0) = 1. The representation is canonical:
/// gcd(num_poly, den) = 1 and den is normalized by its constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    pub num_off: i64,
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun {
            num_off: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_rat(c: &QRat) -> Self {
        RatFun {
            num_off: 0,
            num: Poly::constant(c.clone()),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rat(&QRat::ONE)
    }

    /// c * u^k.
    pub fn monomial(c: QRat, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFun {
            num_off: k,
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(num_off: i64, num: Poly, den_off: i64, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        // Pull u-powers out of both parts.
        let nz = num.0.iter().position(|c| !c.is_zero()).unwrap();
        let dz = den.0.iter().position(|c| !c.is_zero()).unwrap();
        let num_p = Poly::trim(num.0[nz..].to_vec());
        let den_p = Poly::trim(den.0[dz..].to_vec());
        let off = num_off + nz as i64 - den_off - dz as i64;
        let g = num_p.gcd(&den_p);
        let (num_r, rem1) = num_p.divrem(&g);
        debug_assert!(rem1.is_zero());
        let (den_r, rem2) = den_p.divrem(&g);
        debug_assert!(rem2.is_zero());
        let c0 = den_r.0[0].clone();
        debug_assert!(!c0.is_zero());
        let inv = c0.recip();
        RatFun {
            num_off: off,
            num: num_r.scale(&inv),
            den: den_r.scale(&inv),
        }
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        // Common offset for the numerators.
        let off = self.num_off.min(o.num_off);
        let a = shift(&self.num, (self.num_off - off) as usize);
        let b = shift(&o.num, (o.num_off - off) as usize);
        let num = a.mul(&o.den).add(&b.mul(&self.den));
        RatFun::normalize(off, num, 0, self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num_off: self.num_off,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        RatFun::normalize(
            self.num_off + o.num_off,
            self.num.mul(&o.num),
            0,
            self.den.mul(&o.den),
        )
    }

    pub fn invert(&self) -> Option<RatFun> {
        if self.is_zero() {
            return None;
        }
        Some(RatFun::normalize(
            -self.num_off,
            self.den.clone(),
            0,
            self.num.clone(),
        ))
    }

    /// Some(c) when the value is the constant c.
    pub fn as_constant(&self) -> Option<QRat> {
        if self.is_zero() {
            return Some(QRat::ZERO);
        }
        if self.den == Poly::one() && self.num_off == 0 && self.num.0.len() == 1 {
            return Some(self.num.0[0].clone());
        }
        None
    }

    pub fn eval(&self, u: &QRat) -> Option<QRat> {
        let dv = self.den.eval(u);
        if dv.is_zero() {
            return None;
        }
        Some(self.num.eval(u).mul(&u.pow(self.num_off)).div(&dv))
    }

    pub fn canonical_string(&self) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let num = poly_string(&self.num, self.num_off);
        if self.den == Poly::one() {
            num
        } else {
            format!("({num})/({})", poly_string(&self.den, 0))
        }
    }
}

fn shift(p: &Poly, k: usize) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let mut v = vec![QRat::ZERO; k];
    v.extend(p.0.iter().cloned());
    Poly(v)
}

fn poly_string(p: &Poly, off: i64) -> String {
    use core::fmt::Write;
    if p.is_zero() {
        return String::from("0");
    }
    let mut s = String::new();
    let mut first = true;
    for (i, c) in p.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !first {
            s.push_str(" + ");
        }
        first = false;
        let e = off + i as i64;
        if e == 0 {
            let _ = write!(s, "{c}");
        } else {
            let _ = write!(s, "{c}*u^{e}");
        }
    }
    s
}
