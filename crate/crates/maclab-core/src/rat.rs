//! Exact rational scalars.
//!
//! `QRat` keeps numerator and denominator in machine words as long as they
//! fit and falls back to arbitrary precision transparently. The word-sized
//! fast path matters: operator applications and eliminations perform billions
//! of scalar operations whose values are almost always tiny.

use alloc::boxed::Box;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Exact rational number, reduced, denominator > 0.
#[derive(Clone)]
pub enum QRat {
    /// num/den with gcd 1, den > 0.
    Small(i64, i64),
    Big(Box<BigRational>),
}

#[inline]
fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl QRat {
    pub const ZERO: QRat = QRat::Small(0, 1);
    pub const ONE: QRat = QRat::Small(1, 1);

    pub fn from_int(n: i64) -> Self {
        QRat::Small(n, 1)
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(mut num: i128, mut den: i128) -> Self {
        assert!(den != 0);
        if den < 0 {
            num = -num;
            den = -den;
        }
        if num == 0 {
            return QRat::ZERO;
        }
        let g = gcd_i128(num, den);
        num /= g;
        den /= g;
        if num >= i64::MIN as i128 && num <= i64::MAX as i128 && den <= i64::MAX as i128 {
            QRat::Small(num as i64, den as i64)
        } else {
            QRat::Big(Box::new(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            )))
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            QRat::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            QRat::Big(b) => (**b).clone(),
        }
    }

    fn from_big(b: BigRational) -> Self {
        if let (Some(n), Some(d)) = (b.numer().try_into().ok(), b.denom().try_into().ok()) {
            let n: i64 = n;
            let d: i64 = d;
            return QRat::Small(n, d);
        }
        QRat::Big(Box::new(b))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, QRat::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, QRat::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            QRat::Small(n, _) => *n < 0,
            QRat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            QRat::Small(_, d) => *d == 1,
            QRat::Big(b) => b.is_integer(),
        }
    }

    /// The numerator, if the value is word-sized.
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self {
            QRat::Small(n, d) => Some((*n, *d)),
            QRat::Big(_) => None,
        }
    }

    pub fn numer_big(&self) -> BigInt {
        match self {
            QRat::Small(n, _) => BigInt::from(*n),
            QRat::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom_big(&self) -> BigInt {
        match self {
            QRat::Small(_, d) => BigInt::from(*d),
            QRat::Big(b) => b.denom().clone(),
        }
    }

    pub fn add(&self, other: &QRat) -> QRat {
        match (self, other) {
            (QRat::Small(an, ad), QRat::Small(bn, bd)) => {
                let num = (*an as i128) * (*bd as i128) + (*bn as i128) * (*ad as i128);
                let den = (*ad as i128) * (*bd as i128);
                QRat::from_i128(num, den)
            }
            _ => QRat::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn sub(&self, other: &QRat) -> QRat {
        match (self, other) {
            (QRat::Small(an, ad), QRat::Small(bn, bd)) => {
                let num = (*an as i128) * (*bd as i128) - (*bn as i128) * (*ad as i128);
                let den = (*ad as i128) * (*bd as i128);
                QRat::from_i128(num, den)
            }
            _ => QRat::from_big(self.to_big() - other.to_big()),
        }
    }

    pub fn mul(&self, other: &QRat) -> QRat {
        match (self, other) {
            (QRat::Small(an, ad), QRat::Small(bn, bd)) => {
                QRat::from_i128((*an as i128) * (*bn as i128), (*ad as i128) * (*bd as i128))
            }
            _ => QRat::from_big(self.to_big() * other.to_big()),
        }
    }

    pub fn div(&self, other: &QRat) -> QRat {
        assert!(!other.is_zero(), "division by zero");
        match (self, other) {
            (QRat::Small(an, ad), QRat::Small(bn, bd)) => {
                QRat::from_i128((*an as i128) * (*bd as i128), (*ad as i128) * (*bn as i128))
            }
            _ => QRat::from_big(self.to_big() / other.to_big()),
        }
    }

    pub fn neg(&self) -> QRat {
        match self {
            QRat::Small(n, d) => {
                if *n == i64::MIN {
                    QRat::from_i128(-(*n as i128), *d as i128)
                } else {
                    QRat::Small(-n, *d)
                }
            }
            QRat::Big(b) => QRat::from_big(-(**b).clone()),
        }
    }

    pub fn recip(&self) -> QRat {
        QRat::ONE.div(self)
    }

    pub fn pow(&self, e: i64) -> QRat {
        if e == 0 {
            return QRat::ONE;
        }
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = QRat::ONE;
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Reduction modulo a word-sized prime; `None` when the denominator
    /// vanishes mod p.
    pub fn mod_p(&self, p: u64) -> Option<u64> {
        fn big_mod(b: &BigInt, p: u64) -> u64 {
            use num_integer::Integer;
            let m = b.mod_floor(&BigInt::from(p));
            let (_, digits) = m.to_u64_digits();
            *digits.first().unwrap_or(&0)
        }
        let (n, d) = match self {
            QRat::Small(n, d) => (
                ((*n as i128).rem_euclid(p as i128)) as u64,
                ((*d as i128) % p as i128) as u64,
            ),
            QRat::Big(b) => (big_mod(b.numer(), p), big_mod(b.denom(), p)),
        };
        if d % p == 0 {
            return None;
        }
        Some(mulmod(n % p, inv_mod(d % p, p), p))
    }
}

/// (a * b) mod m without overflow.
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular inverse by Fermat; m must be prime and a nonzero mod m.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    powmod(a % m, m - 2, m)
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

impl PartialEq for QRat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (QRat::Small(an, ad), QRat::Small(bn, bd)) => an == bn && ad == bd,
            _ => self.to_big() == other.to_big(),
        }
    }
}
impl Eq for QRat {}

impl PartialOrd for QRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (QRat::Small(an, ad), QRat::Small(bn, bd)) => {
                ((*an as i128) * (*bd as i128)).cmp(&((*bn as i128) * (*ad as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl core::hash::Hash for QRat {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        // Values are always reduced, so hashing the canonical big form is
        // consistent with Eq across representations.
        match self {
            QRat::Small(n, d) => {
                state.write_i64(*n);
                state.write_i64(*d);
            }
            QRat::Big(b) => {
                for digit in b.numer().to_u64_digits().1 {
                    state.write_u64(digit);
                }
                for digit in b.denom().to_u64_digits().1 {
                    state.write_u64(digit);
                }
            }
        }
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QRat::Small(n, 1) => write!(f, "{n}"),
            QRat::Small(n, d) => write!(f, "{n}/{d}"),
            QRat::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl From<i64> for QRat {
    fn from(n: i64) -> Self {
        QRat::from_int(n)
    }
}

impl core::ops::Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        QRat::add(self, rhs)
    }
}
impl core::ops::Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        QRat::sub(self, rhs)
    }
}
impl core::ops::Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        QRat::mul(self, rhs)
    }
}
impl core::ops::Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn small_arithmetic_reduces() {
        let a = QRat::new(2, 4);
        assert_eq!(a, QRat::new(1, 2));
        assert_eq!(a.add(&QRat::new(1, 3)), QRat::new(5, 6));
        assert_eq!(a.mul(&QRat::new(-4, 3)), QRat::new(-2, 3));
        assert_eq!(a.sub(&a), QRat::ZERO);
    }

    #[test]
    fn promotion_and_demotion() {
        // (2^40)^2 overflows i64 through the i128 intermediate and promotes.
        let big = QRat::from_int(1 << 40);
        let sq = big.mul(&big).mul(&big);
        assert!(matches!(sq, QRat::Big(_)));
        let back = sq.div(&big).div(&big).div(&big);
        assert_eq!(back, QRat::ONE);
        assert!(matches!(back, QRat::Small(1, 1)));
    }

    #[test]
    fn mod_p_roundtrip() {
        let p = 0x7fffffff_ffffffe7u64; // 2^63 - 25, prime
        let v = QRat::new(-3, 7);
        let r = v.mod_p(p).unwrap();
        assert_eq!(mulmod(r, 7 % p, p), p - 3);
    }

    #[test]
    fn ordering_is_numeric() {
        let mut xs: Vec<QRat> = [(1, 2), (-1, 3), (5, 1), (0, 1)]
            .iter()
            .map(|&(n, d)| QRat::new(n, d))
            .collect();
        xs.sort();
        assert_eq!(
            xs,
            [
                QRat::new(-1, 3),
                QRat::ZERO,
                QRat::new(1, 2),
                QRat::new(5, 1)
            ]
        );
    }
}
