//! The q-series identity suite: both sides of each identity are expanded by
//! independent code paths (lattice sums of affine-root factor products on
//! one side, explicit infinite products on the other) and compared
//! coefficient-by-coefficient in exact arithmetic.
//!
//! Rank-1 checks run symbolically with rational-function coefficients in the
//! torus variable; higher ranks run at several exact rational torus points.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::char_ring::{adjoint_character, invariant_multiplicity_unchecked, TorusLaurent};
use crate::qt::{
    truncated_product, AffineFactor, Cutoffs, Domain, EvalDomain, QTSeries, RatFun1Domain,
    TorusDomain,
};
use crate::rat::QRat;
use crate::rng::SplitMix64;
use crate::root_data::{RootSystem, TranslateMode, Weight};
use crate::{Error, Result};

/// Outcome of one identity comparison.
#[derive(Clone, Debug)]
pub struct IdentityOutcome {
    pub name: String,
    pub pass: bool,
    pub first_mismatch: Option<String>,
    /// Number of lattice translates the sum ranged over (0 when no lattice
    /// sum is involved).
    pub gamma_count: usize,
    /// Exact torus points used (empty for symbolic or torus-free checks).
    pub points: Vec<Vec<QRat>>,
}

impl IdentityOutcome {
    fn pass(name: &str, gamma_count: usize, points: Vec<Vec<QRat>>) -> Self {
        IdentityOutcome {
            name: String::from(name),
            pass: true,
            first_mismatch: None,
            gamma_count,
            points,
        }
    }

    fn fail(name: &str, detail: String, gamma_count: usize, points: Vec<Vec<QRat>>) -> Self {
        IdentityOutcome {
            name: String::from(name),
            pass: false,
            first_mismatch: Some(detail),
            gamma_count,
            points,
        }
    }
}

/// Sound truncation bound for the level-0 lattice sum: every strictly
/// negative-exponent factor pair contributes at least 1 to the combined
/// (q + t)-order of its summand, and the flip count exceeds the strict flip
/// count by at most the number of roots.
fn level0_gamma_bound(rs: &RootSystem, cut: Cutoffs) -> i64 {
    cut.nq / cut.qden + cut.nt + rs.num_roots() as i64
}

/// Affine-root factor family for one lattice translate: for every root a
/// and n >= 1, the pair (1 - t q^{n+<a|g>} e^a) / (1 - q^{n+<a|g>} e^a).
fn kac_translate_factors(rs: &RootSystem, gamma: &[i64], cut: Cutoffs) -> Vec<AffineFactor> {
    let mut out = Vec::new();
    let nq_int = cut.nq / cut.qden;
    for alpha in rs.all_roots() {
        let c = rs.pairing_coords(&alpha, gamma);
        // Factors with j > nq never contribute within cutoffs.
        for n in 1..=(nq_int - c).max(0) {
            let j = (n + c) * cut.qden;
            out.push(AffineFactor::num(1, j, alpha.clone()));
            out.push(AffineFactor::den(0, j, alpha.clone()));
        }
    }
    out
}

/// The rank-many Heisenberg factor pairs (1 - t q^n)/(1 - q^n).
fn heisenberg_factors(rs: &RootSystem, cut: Cutoffs) -> Vec<AffineFactor> {
    let mut out = Vec::new();
    let zero = Weight::zero(rs.rank);
    for _ in 0..rs.rank {
        for n in 1..=(cut.nq / cut.qden) {
            out.push(AffineFactor::num(1, n * cut.qden, zero.clone()));
            out.push(AffineFactor::den(0, n * cut.qden, zero.clone()));
        }
    }
    out
}

/// The lattice sum of translated affine-root factor products. The identity
/// display compares this directly with the exponent product; the full Euler
/// series additionally carries the rank-many Heisenberg factor pairs, which
/// cancel from both sides of the identity.
pub fn kac_lattice_sum<D: Domain>(
    rs: &RootSystem,
    cut: Cutoffs,
    dom: &D,
) -> Result<(QTSeries<D::C>, usize)> {
    let translates = rs.coroot_translates(TranslateMode::Level0Flips, level0_gamma_bound(rs, cut));
    let mut acc = QTSeries::zero(cut);
    for gamma in &translates {
        let factors = kac_translate_factors(rs, &gamma.coords, cut);
        let summand = truncated_product(&factors, cut, dom)?;
        acc = acc.add(&summand)?;
    }
    Ok((acc, translates.len()))
}

/// The z-weighted Euler series: the lattice sum times the Heisenberg factor
/// pairs [(1 - t q^n)/(1 - q^n)]^rank.
pub fn kac_e_series<D: Domain>(
    rs: &RootSystem,
    cut: Cutoffs,
    dom: &D,
) -> Result<(QTSeries<D::C>, usize)> {
    let (sum, gammas) = kac_lattice_sum(rs, cut, dom)?;
    let heis = truncated_product(&heisenberg_factors(rs, cut), cut, dom)?;
    Ok((sum.mul(&heis)?, gammas))
}

/// The product side of the level-0 identity:
/// prod_k prod_{n>=0} (1-q^{n+1})(1-t^{m_k+1}q^{n+1})
///                  / ((1-t q^{n+1})(1-t^{m_k} q^n)).
pub fn psi_product_side<D: Domain>(
    rs: &RootSystem,
    cut: Cutoffs,
    dom: &D,
) -> Result<QTSeries<D::C>> {
    let zero = Weight::zero(rs.rank);
    let mut factors = Vec::new();
    let nq_int = cut.nq / cut.qden;
    for &mk in &rs.exponents {
        let mk = mk as i64;
        for n in 0..=nq_int {
            if n + 1 <= nq_int {
                factors.push(AffineFactor::num(0, (n + 1) * cut.qden, zero.clone()));
                factors.push(AffineFactor::num(mk + 1, (n + 1) * cut.qden, zero.clone()));
                factors.push(AffineFactor::den(1, (n + 1) * cut.qden, zero.clone()));
            }
            factors.push(AffineFactor::den(mk, n * cut.qden, zero.clone()));
        }
    }
    truncated_product(&factors, cut, dom)
}

/// Deterministic exact torus points with small numerators and denominators,
/// rejecting points that degenerate any torus denominator in the checks.
pub fn sample_torus_points(rs: &RootSystem, seed: u64, count: usize) -> Vec<Vec<QRat>> {
    let mut rng = SplitMix64::new(seed ^ 0x7075_7265_7175_6573);
    let mut out = Vec::new();
    'outer: while out.len() < count {
        let mut point = Vec::with_capacity(rs.rank);
        for _ in 0..rs.rank {
            let num = rng.range_i64(2, 7);
            let den = rng.range_i64(2, 7);
            if num == den {
                continue 'outer;
            }
            point.push(QRat::new(num, den));
        }
        // Reject points where some root character degenerates to 1: those
        // are the cleared denominators of the j = 0 factors.
        for alpha in rs.all_roots() {
            let mut v = QRat::ONE;
            for (i, &e) in alpha.coords.iter().enumerate() {
                v = v.mul(&point[i].pow(e));
            }
            if v.is_one() {
                continue 'outer;
            }
        }
        if !out.contains(&point) {
            out.push(point);
        }
    }
    out
}

/// Check that a rank-1 symbolic series has constant coefficients; returns
/// the first non-constant exponent pair.
fn rank1_constancy(series: &QTSeries<crate::qt::RatFun>) -> Option<String> {
    for (&(q, t), c) in &series.terms {
        if c.as_constant().is_none() {
            return Some(format!(
                "coefficient at q^{q} t^{t} is not constant on the torus: {}",
                c.canonical_string()
            ));
        }
    }
    None
}

/// The level-0 constant-term identity, symbolically for rank 1 and at exact
/// torus points otherwise.
pub fn verify_1psi1(rs: &RootSystem, cut: Cutoffs, seed: u64) -> Result<IdentityOutcome> {
    let name = "1psi1";
    if rs.rank == 1 {
        let dom = RatFun1Domain;
        let (lhs, gammas) = kac_lattice_sum(rs, cut, &dom)?;
        if let Some(bad) = rank1_constancy(&lhs) {
            return Ok(IdentityOutcome::fail(name, bad, gammas, Vec::new()));
        }
        let rhs = psi_product_side(rs, cut, &dom)?;
        if let Err(m) = lhs.equal_up_to(&rhs) {
            return Ok(IdentityOutcome::fail(
                name,
                format!(
                    "q^{{{}/{}}} t^{}: lhs {} vs rhs {}",
                    m.q_num, m.qden, m.t_exp, m.lhs, m.rhs
                ),
                gammas,
                Vec::new(),
            ));
        }
        return Ok(IdentityOutcome::pass(name, gammas, Vec::new()));
    }
    let points = sample_torus_points(rs, seed, 3);
    let mut gammas = 0;
    let mut reference: Option<QTSeries<QRat>> = None;
    for point in &points {
        let dom = EvalDomain {
            point: point.clone(),
        };
        let (lhs, g) = kac_lattice_sum(rs, cut, &dom)?;
        gammas = g;
        let rhs = psi_product_side(rs, cut, &dom)?;
        if let Err(m) = lhs.equal_up_to(&rhs) {
            return Ok(IdentityOutcome::fail(
                name,
                format!(
                    "at point {point:?}, q^{{{}/{}}} t^{}: lhs {} vs rhs {}",
                    m.q_num, m.qden, m.t_exp, m.lhs, m.rhs
                ),
                gammas,
                points.clone(),
            ));
        }
        // Torus constancy: the lattice-sum side takes the same value at
        // every sampled point.
        if let Some(r) = &reference {
            if let Err(m) = lhs.equal_up_to(r) {
                return Ok(IdentityOutcome::fail(
                    name,
                    format!(
                        "lattice sum is not torus-constant: differs at q^{{{}/{}}} t^{}",
                        m.q_num, m.qden, m.t_exp
                    ),
                    gammas,
                    points.clone(),
                ));
            }
        } else {
            reference = Some(lhs);
        }
    }
    Ok(IdentityOutcome::pass(name, gammas, points))
}

/// Stability of the lattice truncation: enlarging the translate bound by one
/// shell never changes a coefficient within the (smaller) cutoffs.
pub fn gamma_truncation_stable(rs: &RootSystem, cut: Cutoffs, seed: u64) -> Result<bool> {
    let bound = level0_gamma_bound(rs, cut);
    let run = |extra: i64| -> Result<QTSeries<QRat>> {
        let translates = rs.coroot_translates(TranslateMode::Level0Flips, bound + extra);
        let point = sample_torus_points(rs, seed, 1).remove(0);
        let dom = EvalDomain { point };
        let mut acc = QTSeries::zero(cut);
        for gamma in &translates {
            let fs = kac_translate_factors(rs, &gamma.coords, cut);
            acc = acc.add(&truncated_product(&fs, cut, &dom)?)?;
        }
        Ok(acc)
    };
    Ok(run(0)? == run(3)?)
}

/// The spot check behind the lattice rearrangement: for fixed gamma,
/// sum_{w in W} prod_{alpha>0} (1 - q^{<w alpha|gamma>} e^{w alpha})^{-1} = 1.
pub fn weyl_denominator_spot(
    rs: &RootSystem,
    gamma: &[i64],
    cut: Cutoffs,
    seed: u64,
) -> Result<bool> {
    let point = sample_torus_points(rs, seed, 1).remove(0);
    let dom = EvalDomain { point };
    let mut acc = QTSeries::zero(cut);
    for w in rs.weyl_elements() {
        let mut factors = Vec::new();
        for alpha in &rs.positive_roots {
            let wa = w.apply(alpha);
            let j = rs.pairing_coords(&wa, gamma);
            factors.push(AffineFactor::den(0, j * cut.qden, wa));
        }
        acc = acc.add(&truncated_product(&factors, cut, &dom)?)?;
    }
    let one = QTSeries::one_with(cut, QRat::ONE);
    Ok(acc == one)
}

/// Bosonic character of the level-1 vacuum module for simply laced types:
/// sum_gamma q^{gamma^2/2} e^gamma / prod_{n>0} (1-q^n)^rank, normalized to
/// highest energy zero.
pub fn basic_character(rs: &RootSystem, cut: Cutoffs) -> Result<(QTSeries<TorusLaurent>, usize)> {
    if !rs.is_simply_laced() {
        return Err(Error::LacingError);
    }
    let dom = TorusDomain { rank: rs.rank };
    let nq_int = cut.nq / cut.qden;
    let translates = rs.coroot_translates(TranslateMode::Level1Energy, nq_int);
    let mut theta = QTSeries::zero(cut);
    for gamma in &translates {
        let (en, ed) = gamma.norm_half.as_small().expect("integral norm");
        assert_eq!(ed, 1, "simply laced norms are integers");
        let q_num = en * cut.qden;
        if q_num <= cut.nq {
            theta.push(
                q_num,
                0,
                TorusLaurent::monomial(rs.coroot_as_weight(&gamma.coords), 1),
            );
        }
    }
    let mut bosons = Vec::new();
    let zero = Weight::zero(rs.rank);
    for _ in 0..rs.rank {
        for n in 1..=nq_int {
            bosons.push(AffineFactor::den(0, n * cut.qden, zero.clone()));
        }
    }
    let heis = truncated_product(&bosons, cut, &dom)?;
    Ok((theta.mul(&heis)?, translates.len()))
}

/// Both sides of the level-1 lattice identity: the translate sum with
/// q^{gamma^2/2} e^gamma prefactors, and the exponent product times the
/// theta series.
pub fn level1_sides<D: Domain>(
    rs: &RootSystem,
    cut: Cutoffs,
    dom: &D,
    translates: &[crate::root_data::CorootPoint],
) -> Result<(QTSeries<D::C>, QTSeries<D::C>)> {
    let mut lhs = QTSeries::zero(cut);
    for gamma in translates {
        let (en, ed) = gamma.norm_half.as_small().expect("integral norm");
        assert_eq!(ed, 1);
        let q_pref = en * cut.qden;
        if q_pref > cut.nq {
            continue;
        }
        let factors = kac_translate_factors(rs, &gamma.coords, cut);
        let prod = truncated_product(&factors, cut, dom)?;
        let weight_c = dom.weight(&rs.coroot_as_weight(&gamma.coords));
        lhs = lhs.add(&prod.scale(&weight_c).shift(q_pref, 0))?;
    }
    // RHS: prod_k prod_{n>0} (1-t^{m_k+1} q^n)/(1-t q^n) * theta.
    let zero = Weight::zero(rs.rank);
    let mut fs = Vec::new();
    let nq_int = cut.nq / cut.qden;
    for &mk in &rs.exponents {
        for n in 1..=nq_int {
            fs.push(AffineFactor::num(mk as i64 + 1, n * cut.qden, zero.clone()));
            fs.push(AffineFactor::den(1, n * cut.qden, zero.clone()));
        }
    }
    let prod = truncated_product(&fs, cut, dom)?;
    let mut theta = QTSeries::zero(cut);
    for gamma in translates {
        let (en, _) = gamma.norm_half.as_small().expect("integral norm");
        let q_pref = en * cut.qden;
        if q_pref <= cut.nq {
            let mut t = QTSeries::zero(cut);
            t.push(q_pref, 0, dom.weight(&rs.coroot_as_weight(&gamma.coords)));
            theta = theta.add(&t)?;
        }
    }
    Ok((lhs, prod.mul(&theta)?))
}

/// Level-1 lattice identity: the translate sum with q^{gamma^2/2} e^gamma
/// prefactors against the exponent-product times the theta series.
pub fn verify_level1(rs: &RootSystem, cut: Cutoffs, seed: u64) -> Result<IdentityOutcome> {
    let name = "level1";
    if !rs.is_simply_laced() {
        return Err(Error::LacingError);
    }
    let nq_int = cut.nq / cut.qden;
    let translates = rs.coroot_translates(TranslateMode::Level1Energy, nq_int);
    let gamma_count = translates.len();

    if rs.rank == 1 {
        let dom = RatFun1Domain;
        let (lhs, rhs) = level1_sides(rs, cut, &dom, &translates)?;
        if let Err(m) = lhs.equal_up_to(&rhs) {
            return Ok(IdentityOutcome::fail(
                name,
                format!(
                    "q^{{{}/{}}} t^{}: lhs {} vs rhs {}",
                    m.q_num, m.qden, m.t_exp, m.lhs, m.rhs
                ),
                gamma_count,
                Vec::new(),
            ));
        }
        return Ok(IdentityOutcome::pass(name, gamma_count, Vec::new()));
    }
    let points = sample_torus_points(rs, seed, 3);
    for point in &points {
        let dom = EvalDomain {
            point: point.clone(),
        };
        let (lhs, rhs) = level1_sides(rs, cut, &dom, &translates)?;
        if let Err(m) = lhs.equal_up_to(&rhs) {
            return Ok(IdentityOutcome::fail(
                name,
                format!(
                    "at point {point:?}, q^{{{}/{}}} t^{}: lhs {} vs rhs {}",
                    m.q_num, m.qden, m.t_exp, m.lhs, m.rhs
                ),
                gamma_count,
                points.clone(),
            ));
        }
    }
    Ok(IdentityOutcome::pass(name, gamma_count, points))
}

/// The plethystic adjoint product prod_{n>0} (1 - q^n g)/(1 - t q^n g) as a
/// torus-coefficient series (one factor pair per weight of g).
pub fn adjoint_plethysm(rs: &RootSystem, cut: Cutoffs) -> Result<QTSeries<TorusLaurent>> {
    let dom = TorusDomain { rank: rs.rank };
    let adjoint = adjoint_character(rs);
    let mut fs = Vec::new();
    for n in 1..=(cut.nq / cut.qden) {
        for (w, mult) in &adjoint.terms {
            for _ in 0..*mult {
                fs.push(AffineFactor::num(0, n * cut.qden, w.clone()));
                fs.push(AffineFactor::den(1, n * cut.qden, w.clone()));
            }
        }
    }
    truncated_product(&fs, cut, &dom)
}

/// Coefficient-wise G-constant term of a torus-coefficient series.
pub fn constant_term_series(rs: &RootSystem, s: &QTSeries<TorusLaurent>) -> QTSeries<QRat> {
    let mut out = QTSeries::zero(s.cut);
    for (&(q, t), c) in &s.terms {
        debug_assert!(c.is_weyl_invariant(rs));
        let ct = invariant_multiplicity_unchecked(rs, c);
        out.push(q, t, QRat::from_int(ct as i64));
    }
    out
}

/// The constant-term identity: CT of the adjoint plethysm equals
/// prod_k prod_{n > m_k} (1 - t^{m_k} q^n)/(1 - t^{m_k+1} q^n).
pub fn verify_macdonald_ct(rs: &RootSystem, cut: Cutoffs) -> Result<IdentityOutcome> {
    let name = "macdonald-ct";
    let lhs = constant_term_series(rs, &adjoint_plethysm(rs, cut)?);
    let zero = Weight::zero(rs.rank);
    let dom = EvalDomain {
        point: vec![QRat::ZERO; rs.rank],
    };
    let mut fs = Vec::new();
    for &mk in &rs.exponents {
        let mk = mk as i64;
        for n in (mk + 1)..=(cut.nq / cut.qden) {
            fs.push(AffineFactor::new(
                1,
                mk,
                n * cut.qden,
                zero.clone(),
                QRat::ONE,
            ));
            fs.push(AffineFactor::new(
                -1,
                mk + 1,
                n * cut.qden,
                zero.clone(),
                QRat::ONE,
            ));
        }
    }
    let rhs = truncated_product(&fs, cut, &dom)?;
    if let Err(m) = lhs.equal_up_to(&rhs) {
        return Ok(IdentityOutcome::fail(
            name,
            format!(
                "q^{{{}/{}}} t^{}: lhs {} vs rhs {}",
                m.q_num, m.qden, m.t_exp, m.lhs, m.rhs
            ),
            0,
            Vec::new(),
        ));
    }
    Ok(IdentityOutcome::pass(name, 0, Vec::new()))
}

/// The vacuum-module constant term: CT[ch H0 * adjoint plethysm] equals
/// prod_k prod_{n > m_k} (1 - t^{m_k+1} q^n)^{-1}, and at the t = 0 layer
/// the graded invariant dimension prod_k prod_{n > m_k} (1 - q^n)^{-1}.
pub fn verify_brylinski_basic(rs: &RootSystem, cut: Cutoffs) -> Result<IdentityOutcome> {
    let name = "brylinski-basic";
    let (ch, gammas) = basic_character(rs, cut)?;
    let lhs = constant_term_series(rs, &ch.mul(&adjoint_plethysm(rs, cut)?)?);
    let zero = Weight::zero(rs.rank);
    let dom = EvalDomain {
        point: vec![QRat::ZERO; rs.rank],
    };
    let mut fs = Vec::new();
    for &mk in &rs.exponents {
        let mk = mk as i64;
        for n in (mk + 1)..=(cut.nq / cut.qden) {
            fs.push(AffineFactor::new(
                -1,
                mk + 1,
                n * cut.qden,
                zero.clone(),
                QRat::ONE,
            ));
        }
    }
    let rhs = truncated_product(&fs, cut, &dom)?;
    if let Err(m) = lhs.equal_up_to(&rhs) {
        return Ok(IdentityOutcome::fail(
            name,
            format!(
                "q^{{{}/{}}} t^{}: lhs {} vs rhs {}",
                m.q_num, m.qden, m.t_exp, m.lhs, m.rhs
            ),
            gammas,
            Vec::new(),
        ));
    }
    // The graded q-dimension of the invariants: prod_k prod_{n>m_k}
    // (1-q^n)^{-1}. Checked twice: directly against the plain constant term
    // of the character, and as the t-summed layer of the identity (the sum
    // over the filtration degree p is complete through q-order <= nt).
    let mut fs0 = Vec::new();
    for &mk in &rs.exponents {
        let mk = mk as i64;
        for n in (mk + 1)..=(cut.nq / cut.qden) {
            fs0.push(AffineFactor::den(0, n * cut.qden, zero.clone()));
        }
    }
    let dim_q = truncated_product(&fs0, cut, &dom)?;
    let direct_ct = constant_term_series(rs, &ch);
    for q in 0..=cut.nq {
        let a = direct_ct.coeff(q, 0)?;
        let b = dim_q.coeff(q, 0)?;
        if a != b {
            return Ok(IdentityOutcome::fail(
                name,
                format!(
                    "invariant q-dimension at q^{{{q}/{}}}: CT {a} vs product {b}",
                    cut.qden
                ),
                gammas,
                Vec::new(),
            ));
        }
    }
    let safe_nq = cut.nq.min(cut.nt * cut.qden);
    for q in 0..=safe_nq {
        let mut graded_sum = QRat::ZERO;
        for t in 0..=cut.nt {
            graded_sum = graded_sum.add(&lhs.coeff(q, t)?);
        }
        let b = dim_q.coeff(q, 0)?;
        if graded_sum != b {
            return Ok(IdentityOutcome::fail(
                name,
                format!(
                    "filtration sum at q^{{{q}/{}}}: {graded_sum} vs q-dimension {b}",
                    cut.qden
                ),
                gammas,
                Vec::new(),
            ));
        }
    }
    Ok(IdentityOutcome::pass(name, gammas, Vec::new()))
}

/// The level-1 near-orthogonality: a pure product-manipulation identity.
pub fn verify_ortho_level1(rs: &RootSystem, cut: Cutoffs) -> Result<IdentityOutcome> {
    let name = "ortho-level1";
    if !rs.is_simply_laced() {
        return Err(Error::LacingError);
    }
    let zero = Weight::zero(rs.rank);
    let dom = EvalDomain {
        point: vec![QRat::ZERO; rs.rank],
    };
    // Boosted order so the substitution t -> t/q keeps full precision.
    let boosted = Cutoffs {
        qden: cut.qden,
        nq: cut.nq + cut.nt * cut.qden,
        nt: cut.nt,
    };
    let mut a_fs = Vec::new();
    let mut b_fs = Vec::new();
    for &mk in &rs.exponents {
        let mk = mk as i64;
        for n in 1..=(boosted.nq / cut.qden) {
            a_fs.push(AffineFactor::new(
                1,
                mk + 1,
                n * cut.qden,
                zero.clone(),
                QRat::ONE,
            ));
            if n > mk {
                b_fs.push(AffineFactor::new(
                    -1,
                    mk + 1,
                    n * cut.qden,
                    zero.clone(),
                    QRat::ONE,
                ));
            }
        }
    }
    let a = truncated_product(&a_fs, boosted, &dom)?;
    let b = truncated_product(&b_fs, boosted, &dom)?;
    // t -> t q^{-1}; the q-offset n > m_k guarantees support stays valid.
    let b_shifted = b.subst_t_to_t_qpow(-cut.qden)?;
    let lhs = a
        .truncate(Cutoffs {
            qden: cut.qden,
            nq: b_shifted.cut.nq.min(cut.nq),
            nt: cut.nt,
        })?
        .mul(&b_shifted)?;
    let mut rhs_fs = Vec::new();
    for &mk in &rs.exponents {
        rhs_fs.push(AffineFactor::new(
            -1,
            mk as i64 + 1,
            0,
            zero.clone(),
            QRat::ONE,
        ));
    }
    let rhs = truncated_product(&rhs_fs, lhs.cut, &dom)?;
    if let Err(m) = lhs.equal_up_to(&rhs) {
        return Ok(IdentityOutcome::fail(
            name,
            format!(
                "q^{{{}/{}}} t^{}: lhs {} vs rhs {}",
                m.q_num, m.qden, m.t_exp, m.lhs, m.rhs
            ),
            0,
            Vec::new(),
        ));
    }
    Ok(IdentityOutcome::pass(name, 0, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::build_root_system_str;

    fn rs(s: &str) -> RootSystem {
        build_root_system_str(s).unwrap()
    }

    #[test]
    fn kac_series_constant_term_is_one() {
        let a1 = rs("A1");
        let cut = Cutoffs::integer(3, 3);
        let dom = RatFun1Domain;
        let (s, _) = kac_e_series(&a1, cut, &dom).unwrap();
        assert_eq!(s.coeff(0, 0).unwrap().as_constant(), Some(QRat::ONE));
    }

    #[test]
    fn a1_1psi1_small() {
        let a1 = rs("A1");
        let out = verify_1psi1(&a1, Cutoffs::integer(4, 4), 5).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
    }

    #[test]
    fn a2_1psi1_small_points() {
        let a2 = rs("A2");
        let out = verify_1psi1(&a2, Cutoffs::integer(3, 3), 5).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
        assert_eq!(out.points.len(), 3);
    }

    #[test]
    fn negative_control_perturbed_product_fails() {
        // Perturb one factor exponent on the product side: the comparison
        // must fail with a mismatch certificate.
        let a1 = rs("A1");
        let cut = Cutoffs::integer(4, 4);
        let dom = RatFun1Domain;
        let (lhs, _) = kac_e_series(&a1, cut, &dom).unwrap();
        let mut rhs = psi_product_side(&a1, cut, &dom).unwrap();
        // multiply by an extra (1 - q) to spoil it
        let mut extra = QTSeries::one_with(cut, RatFun1Domain.one());
        extra.push(1, 0, crate::qt::RatFun::from_rat(&QRat::from_int(-1)));
        rhs = rhs.mul(&extra).unwrap();
        assert!(lhs.equal_up_to(&rhs).is_err());
    }

    #[test]
    fn weyl_denominator_sums_to_one() {
        // Three sampled torus points (one per seed) and small gamma.
        let a1 = rs("A1");
        let cut = Cutoffs::integer(5, 0);
        for seed in [3u64, 7, 11] {
            for gamma in [vec![0i64], vec![1], vec![2]] {
                assert!(
                    weyl_denominator_spot(&a1, &gamma, cut, seed).unwrap(),
                    "{gamma:?}"
                );
            }
        }
        let a2 = rs("A2");
        let cut2 = Cutoffs::integer(4, 0);
        for seed in [3u64, 7, 11] {
            for gamma in [vec![0i64, 0], vec![1, 0], vec![1, 1]] {
                assert!(
                    weyl_denominator_spot(&a2, &gamma, cut2, seed).unwrap(),
                    "{gamma:?}"
                );
            }
        }
    }

    #[test]
    fn gamma_truncation_is_stable_small() {
        let a1 = rs("A1");
        assert!(gamma_truncation_stable(&a1, Cutoffs::integer(3, 3), 17).unwrap());
        let a2 = rs("A2");
        assert!(gamma_truncation_stable(&a2, Cutoffs::integer(2, 2), 17).unwrap());
    }

    #[test]
    fn symbolic_and_evaluated_routes_agree_for_rank_one() {
        let a1 = rs("A1");
        let cut = Cutoffs::integer(3, 3);
        let (sym, _) = kac_lattice_sum(&a1, cut, &RatFun1Domain).unwrap();
        for seed in [5u64, 9] {
            let point = sample_torus_points(&a1, seed, 1).remove(0);
            let (ev, _) = kac_lattice_sum(
                &a1,
                cut,
                &EvalDomain {
                    point: point.clone(),
                },
            )
            .unwrap();
            for q in 0..=3 {
                for t in 0..=3 {
                    let s = sym.coeff(q, t).unwrap().eval(&point[0]).unwrap();
                    assert_eq!(s, ev.coeff(q, t).unwrap(), "q^{q} t^{t} at {point:?}");
                }
            }
        }
    }

    #[test]
    fn basic_character_head() {
        let a1 = rs("A1");
        let cut = Cutoffs::integer(3, 0);
        let (ch, _) = basic_character(&a1, cut).unwrap();
        // Vacuum: q^0 coefficient 1.
        let c0 = ch.coeff(0, 0).unwrap();
        assert_eq!(c0.dimension(), 1);
        assert!(c0.coeff(&Weight::zero(1)) == 1);
        // q^1 coefficient is the adjoint character u^2 + 1 + u^-2: the two
        // lattice points of energy 1 plus one boson.
        let c1 = ch.coeff(1, 0).unwrap();
        assert_eq!(c1, adjoint_character(&a1));
        // Its constant term vanishes.
        assert_eq!(invariant_multiplicity_unchecked(&a1, &c1), 0);
    }

    #[test]
    fn d4_basic_character_energy_one_is_the_adjoint() {
        // Frenkel-Kac: the energy-1 subspace of the vacuum module is the
        // adjoint representation for simply laced types.
        let d4 = rs("D4");
        let (ch, _) = basic_character(&d4, Cutoffs::integer(2, 0)).unwrap();
        assert_eq!(ch.coeff(0, 0).unwrap().dimension(), 1);
        let c1 = ch.coeff(1, 0).unwrap();
        assert_eq!(c1, adjoint_character(&d4));
        assert_eq!(c1.dimension(), 28);
    }

    #[test]
    fn a3_level1_small_points() {
        // Exercises the lattice machinery at rank 3.
        let a3 = rs("A3");
        let out = verify_level1(&a3, Cutoffs::integer(2, 2), 5).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
        let (ch, _) = basic_character(&a3, Cutoffs::integer(2, 0)).unwrap();
        assert_eq!(ch.coeff(1, 0).unwrap(), adjoint_character(&a3));
    }

    #[test]
    fn a1_level1_small() {
        let a1 = rs("A1");
        let out = verify_level1(&a1, Cutoffs::integer(4, 4), 5).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
    }

    #[test]
    fn level1_t0_layer_is_theta() {
        // At t = 0 the factor products collapse and both sides reduce to
        // the lattice theta series.
        let a1 = rs("A1");
        let cut = Cutoffs::integer(5, 0);
        let dom = RatFun1Domain;
        let translates = a1.coroot_translates(TranslateMode::Level1Energy, 5);
        let mut lhs = QTSeries::zero(cut);
        for gamma in &translates {
            let (en, _) = gamma.norm_half.as_small().unwrap();
            if en > 5 {
                continue;
            }
            let factors = kac_translate_factors(&a1, &gamma.coords, cut);
            let prod = truncated_product(&factors, cut, &dom).unwrap();
            let wc = dom.weight(&a1.coroot_as_weight(&gamma.coords));
            lhs = lhs.add(&prod.scale(&wc).shift(en, 0)).unwrap();
        }
        for (&(q, _t), c) in &lhs.terms {
            // theta coefficients: u^{2m} at q = m^2.
            let m = (0..=2i64).find(|m| m * m == q);
            match m {
                Some(m) => {
                    let mut expect = crate::qt::RatFun::monomial(QRat::ONE, 2 * m);
                    if m != 0 {
                        expect = expect.add(&crate::qt::RatFun::monomial(QRat::ONE, -2 * m));
                    }
                    assert_eq!(c, &expect, "q={q}");
                }
                None => panic!("unexpected theta exponent {q}"),
            }
        }
    }

    #[test]
    fn bailey_specialization_small() {
        // Half-integer exponents: the same identity at qden = 2.
        let a1 = rs("A1");
        let cut = Cutoffs::new(2, 8, 4); // through q^4 in half-steps
        let out = verify_level1(&a1, cut, 5).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
    }

    #[test]
    fn macdonald_ct_heads() {
        let a1 = rs("A1");
        let out = verify_macdonald_ct(&a1, Cutoffs::integer(4, 4)).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
        // Coefficient examples: t^1 q^1 vanishes on both sides; t^1 q^2 is -1.
        let lhs =
            constant_term_series(&a1, &adjoint_plethysm(&a1, Cutoffs::integer(4, 4)).unwrap());
        assert_eq!(lhs.coeff(1, 1).unwrap(), QRat::ZERO);
        assert_eq!(lhs.coeff(2, 1).unwrap(), QRat::from_int(-1));
    }

    #[test]
    fn brylinski_small_and_negative_control() {
        let a1 = rs("A1");
        let cut = Cutoffs::integer(4, 3);
        let out = verify_brylinski_basic(&a1, cut).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);

        // Omitting the Heisenberg factor from the character must break it.
        let dom = TorusDomain { rank: 1 };
        let translates = a1.coroot_translates(TranslateMode::Level1Energy, 4);
        let mut theta: QTSeries<TorusLaurent> = QTSeries::zero(cut);
        for gamma in &translates {
            let (en, _) = gamma.norm_half.as_small().unwrap();
            if en <= 4 {
                theta.push(en, 0, dom.weight(&a1.coroot_as_weight(&gamma.coords)));
            }
        }
        let broken = constant_term_series(
            &a1,
            &theta.mul(&adjoint_plethysm(&a1, cut).unwrap()).unwrap(),
        );
        let zero = Weight::zero(1);
        let evald = EvalDomain {
            point: vec![QRat::ZERO],
        };
        let mut fs = Vec::new();
        for n in 2..=4 {
            fs.push(AffineFactor::new(-1, 2, n, zero.clone(), QRat::ONE));
        }
        let rhs = truncated_product(&fs, cut, &evald).unwrap();
        assert!(broken.equal_up_to(&rhs).is_err());
    }

    #[test]
    fn ortho_small_and_d4() {
        let a1 = rs("A1");
        let out = verify_ortho_level1(&a1, Cutoffs::integer(5, 5)).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
        let d4 = rs("D4");
        let out = verify_ortho_level1(&d4, Cutoffs::integer(3, 3)).unwrap();
        assert!(out.pass, "{:?}", out.first_mismatch);
        // t^0 layer is trivially 1 = 1.
        assert!(out.pass);
    }

    #[test]
    fn non_simply_laced_is_rejected_for_level1() {
        let b2 = rs("B2");
        assert!(matches!(
            verify_level1(&b2, Cutoffs::integer(2, 2), 1),
            Err(Error::LacingError)
        ));
        assert!(matches!(
            basic_character(&b2, Cutoffs::integer(2, 0)),
            Err(Error::LacingError)
        ));
    }
}
