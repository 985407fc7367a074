//! Affine-root factors (1 - c t^a q^j e^mu)^{+-1} and their truncated
//! expansions, including the flip normalization for factors whose q-exponent
//! is not positive.
//!
//! Flip rule: (1 - x) = -x (1 - x^{-1}), applied so that a matched
//! numerator/denominator pair with the same (j, mu) expands as the honest
//! series of (t^a - q^{-j} e^{-mu}) / (1 - q^{-j} e^{-mu}). Unpaired factors
//! with j <= 0 only expand where the domain supports it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::qt::coeff::{Coefficient, Domain};
use crate::qt::{Cutoffs, QTSeries};
use crate::rat::QRat;
use crate::root_data::Weight;
use crate::{Error, Result};

/// One factor (1 - c * t^a * q^{j/d} * e^mu)^{sign}.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFactor {
    /// +1 for a numerator factor, -1 for a denominator factor.
    pub sign: i8,
    /// t-power a. Negative values only appear in flip normal forms.
    pub t_pow: i64,
    /// q-exponent numerator over the ambient q-denominator.
    pub q_num: i64,
    pub weight: Weight,
    pub scalar: QRat,
}

impl AffineFactor {
    pub fn new(sign: i8, t_pow: i64, q_num: i64, weight: Weight, scalar: QRat) -> Self {
        assert!(sign == 1 || sign == -1);
        AffineFactor {
            sign,
            t_pow,
            q_num,
            weight,
            scalar,
        }
    }

    /// Numerator factor (1 - c t^a q^j e^mu).
    pub fn num(t_pow: i64, q_num: i64, weight: Weight) -> Self {
        Self::new(1, t_pow, q_num, weight, QRat::ONE)
    }

    /// Denominator factor (1 - c t^a q^j e^mu)^{-1}.
    pub fn den(t_pow: i64, q_num: i64, weight: Weight) -> Self {
        Self::new(-1, t_pow, q_num, weight, QRat::ONE)
    }
}

/// The monomial prefactor -c t^a q^j e^mu recorded by a flip.
#[derive(Clone, Debug, PartialEq)]
pub struct FlipPrefactor {
    pub scalar: QRat,
    pub t_pow: i64,
    pub q_num: i64,
    pub weight: Weight,
    /// The sign of the flipped factor (prefactor appears to this power).
    pub sign: i8,
}

/// Rewrite (1 - c t^a q^j e^mu) as -c t^a q^j e^mu * (1 - c^{-1} t^{-a}
/// q^{-j} e^{-mu}); pure data transform, no domain restrictions. Applying it
/// twice returns the original factor.
pub fn flip_normal_form(f: &AffineFactor) -> (FlipPrefactor, AffineFactor) {
    let pre = FlipPrefactor {
        scalar: f.scalar.neg(),
        t_pow: f.t_pow,
        q_num: f.q_num,
        weight: f.weight.clone(),
        sign: f.sign,
    };
    let flipped = AffineFactor {
        sign: f.sign,
        t_pow: -f.t_pow,
        q_num: -f.q_num,
        weight: f.weight.neg(),
        scalar: f.scalar.recip(),
    };
    (pre, flipped)
}

/// Expand a single factor into a truncated series. Fails when the factor is
/// not a series in the domain (see module docs).
pub fn expand_factor<D: Domain>(f: &AffineFactor, cut: Cutoffs, dom: &D) -> Result<QTSeries<D::C>> {
    if f.t_pow < 0 {
        return Err(Error::FlipPairingError);
    }
    let cmu = dom.weight(&f.weight).scale_rat(&f.scalar);
    match (f.sign, f.q_num, f.t_pow) {
        (1, j, _a) if j >= 0 => {
            let mut out = QTSeries::one_with(cut, dom.one());
            out.push(f.q_num, f.t_pow, cmu.neg());
            Ok(out)
        }
        (1, _, _) => Err(Error::FlipPairingError),
        (-1, j, a) if j > 0 || (j == 0 && a > 0) => {
            // Geometric series in x = c t^a q^j e^mu.
            let mut out = QTSeries::zero(cut);
            out.push(0, 0, dom.one());
            let mut power = dom.one();
            let mut k = 1i64;
            loop {
                let (q, t) = (j * k, a * k);
                if q > cut.nq || t > cut.nt {
                    break;
                }
                power = power.mul(&cmu);
                out.push(q, t, power.clone());
                k += 1;
            }
            Ok(out)
        }
        (-1, 0, 0) => {
            // Scalar factor (1 - c e^mu)^{-1}: needs a field domain.
            let base = dom.one().add(&cmu.neg());
            let inv = base.invert().ok_or(Error::FlipPairingError)?;
            Ok(QTSeries::constant(cut, inv))
        }
        (-1, j, 0) => {
            // j < 0, a = 0: flip gives -sum_{k>=1} (c^{-1} q^{|j|} e^{-mu})^k.
            debug_assert!(j < 0);
            let y = dom.weight(&f.weight.neg()).scale_rat(&f.scalar.recip());
            let mut out = QTSeries::zero(cut);
            let mut power = dom.one();
            let mut k = 1i64;
            loop {
                let q = -j * k;
                if q > cut.nq {
                    break;
                }
                power = power.mul(&y);
                out.push(q, 0, power.neg());
                k += 1;
            }
            Ok(out)
        }
        (-1, _, _) => Err(Error::FlipPairingError),
        _ => unreachable!(),
    }
}

/// Expand a matched pair num = (1 - c t^a q^j e^mu), den = (1 - c q^j
/// e^mu)^{-1} with j <= 0: the series of (t^a - y)/(1 - y) in y = c^{-1}
/// q^{-j} e^{-mu} for j < 0, and the exact coefficient-ring ratio at j = 0.
fn expand_pair<D: Domain>(
    num: &AffineFactor,
    den: &AffineFactor,
    cut: Cutoffs,
    dom: &D,
) -> Result<QTSeries<D::C>> {
    debug_assert_eq!(num.sign, 1);
    debug_assert_eq!(den.sign, -1);
    debug_assert_eq!(num.q_num, den.q_num);
    debug_assert_eq!(num.weight, den.weight);
    debug_assert_eq!(num.scalar, den.scalar);
    debug_assert_eq!(den.t_pow, 0);
    let a = num.t_pow;
    if a < 0 {
        return Err(Error::FlipPairingError);
    }
    let j = num.q_num;
    if j < 0 {
        // t^a + (t^a - 1)(y + y^2 + ...)
        let mut out = QTSeries::zero(cut);
        out.push(0, a, dom.one());
        let y = dom.weight(&num.weight.neg()).scale_rat(&num.scalar.recip());
        let mut power = dom.one();
        let mut k = 1i64;
        loop {
            let q = -j * k;
            if q > cut.nq {
                break;
            }
            power = power.mul(&y);
            out.push(q, a, power.clone());
            out.push(q, 0, power.neg());
            k += 1;
        }
        Ok(out)
    } else if j == 0 {
        let cmu = dom.weight(&num.weight).scale_rat(&num.scalar);
        let base = dom.one().add(&cmu.neg());
        let inv = base.invert().ok_or(Error::FlipPairingError)?;
        let mut out = QTSeries::zero(cut);
        out.push(0, 0, inv.clone());
        out.push(0, a, inv.mul(&cmu).neg());
        Ok(out)
    } else {
        // Nothing to flip; expand both sides directly.
        let n = expand_factor(num, cut, dom)?;
        let d = expand_factor(den, cut, dom)?;
        n.mul(&d)
    }
}

/// Exact truncated product of a factor list. Factors with non-positive
/// q-exponent are paired numerator/denominator by (j, mu, c) before
/// expansion; leftovers expand alone where the domain allows it.
pub fn truncated_product<D: Domain>(
    factors: &[AffineFactor],
    cut: Cutoffs,
    dom: &D,
) -> Result<QTSeries<D::C>> {
    type Key = (i64, Vec<i64>, QRat);
    let mut positives: Vec<&AffineFactor> = Vec::new();
    let mut nums: BTreeMap<Key, Vec<&AffineFactor>> = BTreeMap::new();
    let mut dens: BTreeMap<Key, Vec<&AffineFactor>> = BTreeMap::new();
    for f in factors {
        if f.q_num > 0 {
            positives.push(f);
        } else if f.sign == -1 && f.q_num == 0 && f.t_pow > 0 {
            // (1 - c t^a e^mu)^{-1} is a plain geometric series in t.
            positives.push(f);
        } else {
            let key = (f.q_num, f.weight.coords.clone(), f.scalar.clone());
            if f.sign == 1 {
                nums.entry(key).or_default().push(f);
            } else if f.t_pow == 0 {
                dens.entry(key).or_default().push(f);
            } else {
                // A denominator with both a t-power and a strictly negative
                // q-exponent can never expand or pair.
                return Err(Error::FlipPairingError);
            }
        }
    }
    let mut acc = QTSeries::one_with(cut, dom.one());
    let keys: Vec<Key> = nums.keys().chain(dens.keys()).cloned().collect();
    let mut done: Vec<Key> = Vec::new();
    for key in keys {
        if done.contains(&key) {
            continue;
        }
        done.push(key.clone());
        let mut ns = nums.remove(&key).unwrap_or_default();
        let mut ds = dens.remove(&key).unwrap_or_default();
        while let (Some(n), Some(d)) = (ns.last(), ds.last()) {
            acc = acc.mul(&expand_pair(n, d, cut, dom)?)?;
            ns.pop();
            ds.pop();
        }
        for f in ns.into_iter().chain(ds) {
            acc = acc.mul(&expand_factor(f, cut, dom)?)?;
        }
    }
    for f in positives {
        acc = acc.mul(&expand_factor(f, cut, dom)?)?;
    }
    Ok(acc)
}
