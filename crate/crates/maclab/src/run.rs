//! Command dispatch: each verification command builds its slice/identity
//! work list, fans it out over a local thread pool, and assembles a
//! deterministic report (results are keyed and sorted, never
//! completion-ordered).

use std::string::String;
use std::time::Instant;
use std::vec::Vec;

use maclab_core::identity;
use maclab_core::koszul::slice::lambda_s_slice;
use maclab_core::koszul::sym::{
    free_commutative_coefficient, predicted_sym_hilbert, sym_column_detail,
};
use maclab_core::koszul::trunc::{
    free_exterior_coefficient, predicted_trunc_hilbert, trunc_column,
};
use maclab_core::koszul::{build_lie_algebra, LieAlgebra};
use maclab_core::laplacian::{
    e_cocycle, harmonic_basis, is_harmonic_cocycle, s_cocycle, trace_form_polynomial,
    verify_harmonic_generation_slice, verify_nakano_invariants,
};
use maclab_core::qt::{Cutoffs, EvalDomain, QTSeries, RatFun1Domain};
use maclab_core::root_data::{build_root_system_str, RootSystem};
use maclab_core::{Error, QRat};
use rayon::prelude::*;

use crate::report::{
    input_hash, ConfigEcho, Report, SliceRow, Status, SCHEMA_VERSION, TOOL_VERSION,
};

pub const DEFAULT_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyTrunc,
    VerifySym,
    VerifyDelta1,
    VerifyNakano,
    VerifyHarmonic,
    Verify1psi1,
    VerifyMacdonaldCt,
    VerifyLevel1,
    BaileySl2,
    VerifyBrylinski,
    VerifyOrtho,
    DumpMatrix,
    DumpSeries,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyTrunc => "verify-trunc",
            Command::VerifySym => "verify-sym",
            Command::VerifyDelta1 => "verify-delta1",
            Command::VerifyNakano => "verify-nakano",
            Command::VerifyHarmonic => "verify-harmonic",
            Command::Verify1psi1 => "verify-1psi1",
            Command::VerifyMacdonaldCt => "verify-macdonald-ct",
            Command::VerifyLevel1 => "verify-level1",
            Command::BaileySl2 => "bailey-sl2",
            Command::VerifyBrylinski => "verify-brylinski",
            Command::VerifyOrtho => "verify-ortho",
            Command::DumpMatrix => "dump-matrix",
            Command::DumpSeries => "dump-series",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub root_system: String,
    pub n: Option<i64>,
    pub nq: i64,
    pub nt: i64,
    pub qden: i64,
    pub weight_bound: i64,
    pub p_bound: i64,
    pub threads: usize,
    pub seed: u64,
    pub dump_order: Option<i64>,
    pub m: Option<i64>,
    pub cap: usize,
    /// dump-matrix / dump-series selector.
    pub object: Option<String>,
    pub degree: Option<i64>,
    pub z_weight: Option<i64>,
}

impl RunConfig {
    pub fn cutoffs(&self) -> Cutoffs {
        Cutoffs::new(self.qden, self.nq * self.qden, self.nt)
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            command: self.command.name().to_string(),
            root_system: self.root_system.clone(),
            n: self.n,
            nq: self.nq,
            nt: self.nt,
            qden: self.qden,
            weight_bound: self.weight_bound,
            p_bound: self.p_bound,
            threads: self.threads,
            seed: self.seed,
            dump_order: self.dump_order,
            m: self.m,
            cap: self.cap,
        }
    }
}

struct Collected {
    rows: Vec<SliceRow>,
    first_mismatch: Option<String>,
    gamma_count: usize,
    points: Vec<Vec<QRat>>,
    dump: Vec<String>,
}

impl Collected {
    fn new() -> Self {
        Collected {
            rows: Vec::new(),
            first_mismatch: None,
            gamma_count: 0,
            points: Vec::new(),
            dump: Vec::new(),
        }
    }

    fn note_mismatch(&mut self, s: String) {
        self.first_mismatch.get_or_insert(s);
    }
}

/// Run a command and produce its report. All work happens inside a local
/// rayon pool sized by the config.
pub fn dispatch(cfg: &RunConfig) -> Report {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .expect("thread pool");
    let (status, collected) = if !bounds_ok(cfg) {
        let mut c = Collected::new();
        c.note_mismatch(
            "usage: bounds outside the desk-scale range (nq <= 128, qden <= 16, weight bound in -128..=0, p <= 64, n in 1..=64, m in 0..=16)"
                .to_string(),
        );
        (Status::Capacity, c)
    } else {
        match pool.install(|| run_inner(cfg)) {
            Ok(c) => {
                let pass =
                    c.first_mismatch.is_none() && c.rows.iter().all(|r| r.computed == r.expected);
                (if pass { Status::Pass } else { Status::Fail }, c)
            }
            Err(Error::CapacityError { slice, dim, cap }) => {
                let mut c = Collected::new();
                c.note_mismatch(format!(
                "capacity: slice {slice} has dim {dim} > cap {cap}; tighten the bounds or raise MACLAB_CAP"
            ));
                (Status::Capacity, c)
            }
            Err(e) => {
                let mut c = Collected::new();
                c.note_mismatch(format!("error: {e}"));
                (Status::Capacity, c)
            }
        }
    };
    let echo = cfg.echo();
    let hash = input_hash(&echo);
    Report {
        schema: SCHEMA_VERSION,
        config: echo,
        status,
        per_slice: collected.rows,
        gamma_count: collected.gamma_count,
        points: collected
            .points
            .iter()
            .map(|p| p.iter().map(|v| format!("{v}")).collect())
            .collect(),
        first_mismatch: collected.first_mismatch,
        dump: collected.dump,
        wall_time_ms: start.elapsed().as_millis() as u64,
        tool_version: TOOL_VERSION.to_string(),
        input_hash: hash,
    }
}

/// Desk-scale bounds: depths pack into a byte and the verification ranges
/// are meant for small cutoffs.
fn bounds_ok(cfg: &RunConfig) -> bool {
    (0..=128).contains(&cfg.nq)
        && cfg.nt >= 0
        && (1..=16).contains(&cfg.qden)
        && (-128..=0).contains(&cfg.weight_bound)
        && (0..=64).contains(&cfg.p_bound)
        && cfg.n.map(|n| (1..=64).contains(&n)).unwrap_or(true)
        && cfg.m.map(|m| (0..=16).contains(&m)).unwrap_or(true)
}

fn run_inner(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    match cfg.command {
        Command::VerifyTrunc => run_trunc(cfg),
        Command::VerifySym => run_sym(cfg),
        Command::VerifyDelta1 => run_delta1(cfg),
        Command::VerifyNakano => run_nakano(cfg),
        Command::VerifyHarmonic => run_harmonic(cfg),
        Command::Verify1psi1 => run_identity(cfg),
        Command::VerifyMacdonaldCt => run_identity(cfg),
        Command::VerifyLevel1 => run_identity(cfg),
        Command::BaileySl2 => run_identity(cfg),
        Command::VerifyBrylinski => run_identity(cfg),
        Command::VerifyOrtho => run_identity(cfg),
        Command::DumpMatrix => run_dump_matrix(cfg),
        Command::DumpSeries => run_dump_series(cfg),
    }
}

fn lie_for(cfg: &RunConfig) -> maclab_core::Result<LieAlgebra> {
    let (family, rank) = maclab_core::root_data::parse_type(&cfg.root_system)?;
    build_lie_algebra(family, rank)
}

fn rs_for(cfg: &RunConfig) -> maclab_core::Result<RootSystem> {
    build_root_system_str(&cfg.root_system)
}

fn run_trunc(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let lie = lie_for(cfg)?;
    let n = cfg.n.ok_or(Error::DomainError)?;
    let table = predicted_trunc_hilbert(&lie.rs, n);
    let weights: Vec<i64> = (cfg.weight_bound..=0).rev().collect();
    let columns: Vec<(i64, maclab_core::Result<Vec<(i64, usize, i64)>>)> = weights
        .par_iter()
        .map(|&w| (w, trunc_column(&lie, n, w, false, cfg.cap, cfg.seed)))
        .collect();
    let mut out = Collected::new();
    for (w, col) in columns {
        let col = col?;
        let mut euler_dim = 0i64;
        let mut euler_h = 0i64;
        for (degree, dim, h) in col {
            let expected = free_exterior_coefficient(&table, degree, w);
            if dim == 0 && h == 0 && expected == 0 {
                continue;
            }
            let sign = if degree % 2 == 0 { 1 } else { -1 };
            euler_dim += sign * dim as i64;
            euler_h += sign * h;
            if h != expected {
                out.note_mismatch(format!(
                    "degree {degree} z-weight {w}: computed {h} expected {expected}"
                ));
            }
            out.rows.push(SliceRow {
                degree,
                z_weight: w,
                s_weight: 0,
                dim,
                computed: h,
                expected,
            });
        }
        if euler_dim != euler_h {
            out.note_mismatch(format!("Euler characteristic mismatch at z-weight {w}"));
        }
    }
    Ok(out)
}

fn run_sym(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let lie = lie_for(cfg)?;
    let table = predicted_sym_hilbert(&lie.rs, cfg.weight_bound, cfg.p_bound);
    let mut keys = Vec::new();
    for p in 0..=cfg.p_bound {
        for w in (cfg.weight_bound..=0).rev() {
            keys.push((p, w));
        }
    }
    let columns: Vec<((i64, i64), maclab_core::Result<Vec<(i64, usize, i64)>>)> = keys
        .par_iter()
        .map(|&(p, w)| {
            (
                (p, w),
                sym_column_detail(&lie, p, w, cfg.cap, cfg.seed).map(|v| {
                    v.into_iter()
                        .map(|d| (d.degree, d.inv_dim, d.cohomology))
                        .collect()
                }),
            )
        })
        .collect();
    let mut out = Collected::new();
    for ((p, w), col) in columns {
        let col = col?;
        let mut euler_inv = 0i64;
        let mut euler_expect = 0i64;
        for (degree, dim, h) in col {
            let expected = free_commutative_coefficient(&table, degree, p, w);
            if dim == 0 && h == 0 && expected == 0 {
                continue;
            }
            let sign = if degree % 2 == 0 { 1 } else { -1 };
            euler_inv += sign * dim as i64;
            euler_expect += sign * expected;
            if h != expected {
                out.note_mismatch(format!(
                    "degree {degree} z-weight {w} s-degree {p}: computed {h} expected {expected}"
                ));
            }
            out.rows.push(SliceRow {
                degree,
                z_weight: w,
                s_weight: p,
                dim,
                computed: h,
                expected,
            });
        }
        if euler_inv != euler_expect {
            out.note_mismatch(format!(
                "Euler characteristic mismatch at s-degree {p}, z-weight {w}"
            ));
        }
    }
    Ok(out)
}

fn run_delta1(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let m = cfg.m.ok_or(Error::DomainError)?;
    let n = cfg.n.ok_or(Error::DomainError)?;
    let bound = (2 * n + 6).max(cfg.nq);
    let outcome = maclab_core::koszul::delta1::delta1_check(m, n, bound);
    let mut out = Collected::new();
    out.rows.push(SliceRow {
        degree: 1,
        z_weight: 0,
        s_weight: m,
        dim: (bound + 1) as usize,
        computed: outcome.cokernel_dim,
        expected: n - 1,
    });
    out.dump.push(format!(
        "injective: {}; cokernel weights {:?} (expected {:?})",
        outcome.injective,
        outcome.cokernel_weights,
        (1..n).map(|i| m * n + i).collect::<Vec<_>>()
    ));
    if !outcome.pass {
        out.note_mismatch("operator check failed".to_string());
    }
    Ok(out)
}

fn nakano_keys(cfg: &RunConfig) -> Vec<(i64, i64, i64)> {
    let mut keys = Vec::new();
    for p in 0..=cfg.p_bound {
        for w in (cfg.weight_bound..=0).rev() {
            for degree in 0..=(-w) {
                keys.push((degree, w, p));
            }
        }
    }
    keys
}

fn run_nakano(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let lie = lie_for(cfg)?;
    let keys = nakano_keys(cfg);
    type NakanoRow = (usize, Option<String>, String);
    let results: Vec<((i64, i64, i64), maclab_core::Result<NakanoRow>)> = keys
        .par_iter()
        .map(|&(degree, w, p)| {
            let r = (|| {
                let slice = lambda_s_slice(&lie, degree, p, w, 1, cfg.cap)?;
                if slice.dim() == 0 {
                    return Ok((0usize, None, String::new()));
                }
                let full = maclab_core::laplacian::nakano_slice_check(&lie, &slice);
                let max_entry = format!("{}", full.max_entry);
                if full.mismatch.is_some() {
                    return Ok((slice.dim(), full.mismatch, max_entry));
                }
                Ok((
                    slice.dim(),
                    verify_nakano_invariants(&lie, &slice),
                    max_entry,
                ))
            })();
            ((degree, w, p), r)
        })
        .collect();
    let mut out = Collected::new();
    for ((degree, w, p), r) in results {
        let (dim, mismatch, max_entry) = r?;
        if dim == 0 {
            continue;
        }
        let ok = mismatch.is_none();
        if let Some(msg) = mismatch {
            out.note_mismatch(msg);
        }
        out.rows.push(SliceRow {
            degree,
            z_weight: w,
            s_weight: p,
            dim,
            computed: ok as i64,
            expected: 1,
        });
        out.dump.push(format!(
            "max |entry| at degree {degree} z-weight {w} s-degree {p}: {max_entry}"
        ));
    }
    Ok(out)
}

fn run_harmonic(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let lie = lie_for(cfg)?;
    let mut keys = Vec::new();
    for p in 0..=cfg.p_bound {
        for w in (cfg.weight_bound..=0).rev() {
            keys.push((p, w));
        }
    }
    type ColOut = Vec<(i64, usize, i64, i64, Option<String>)>;
    let results: Vec<((i64, i64), maclab_core::Result<ColOut>)> = keys
        .par_iter()
        .map(|&(p, w)| {
            let r = (|| {
                let detail = sym_column_detail(&lie, p, w, cfg.cap, cfg.seed)?;
                let mut rows = Vec::new();
                for d in &detail {
                    if d.degree > -w {
                        continue;
                    }
                    let slice = lambda_s_slice(&lie, d.degree, p, w, 1, cfg.cap)?;
                    if slice.dim() == 0 && d.inv_dim == 0 {
                        continue;
                    }
                    let harmonic = harmonic_basis(&lie, &slice)?;
                    let mut note = None;
                    if d.inv_dim != d.rank_in + d.rank_out + harmonic.len() {
                        note = Some(format!(
                            "Hodge decomposition fails at degree {} z-weight {w} s-degree {p}",
                            d.degree
                        ));
                    }
                    if note.is_none() {
                        note = verify_harmonic_generation_slice(&lie, &slice)?;
                    }
                    rows.push((
                        d.degree,
                        slice.dim(),
                        harmonic.len() as i64,
                        d.cohomology,
                        note,
                    ));
                }
                Ok(rows)
            })();
            ((p, w), r)
        })
        .collect();
    let mut out = Collected::new();
    for ((p, w), r) in results {
        for (degree, dim, harmonic_dim, cohomology, note) in r? {
            if let Some(msg) = note {
                out.note_mismatch(msg);
            }
            out.rows.push(SliceRow {
                degree,
                z_weight: w,
                s_weight: p,
                dim,
                computed: harmonic_dim,
                expected: cohomology,
            });
        }
    }
    // Generating cocycles are closed and harmonic for n up to the range.
    let nmax = (-cfg.weight_bound).min(6);
    let mut phis = Vec::new();
    for &mexp in &lie.rs.exponents {
        if mexp as usize + 1 >= 2 {
            phis.push(trace_form_polynomial(&lie, mexp as usize + 1));
        }
    }
    for phi in &phis {
        for n in 0..=nmax {
            let s = s_cocycle(&lie, phi, n);
            let slice = lambda_s_slice(&lie, 0, phi.degree as i64, -n, 1, cfg.cap)?;
            let coords = slice.coords(&s)?;
            if !is_harmonic_cocycle(&lie, &slice, &coords) {
                out.note_mismatch(format!("S(-{n}) is not harmonic"));
            }
        }
        for n in 1..=nmax {
            let e = e_cocycle(&lie, phi, n);
            let slice = lambda_s_slice(&lie, 1, phi.degree as i64 - 1, -n, 1, cfg.cap)?;
            let coords = slice.coords(&e)?;
            if !is_harmonic_cocycle(&lie, &slice, &coords) {
                out.note_mismatch(format!("E(-{n}) is not harmonic"));
            }
        }
    }
    Ok(out)
}

fn run_identity(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let rs = rs_for(cfg)?;
    let cut = cfg.cutoffs();
    let outcome = match cfg.command {
        Command::Verify1psi1 => identity::verify_1psi1(&rs, cut, cfg.seed)?,
        Command::VerifyMacdonaldCt => identity::verify_macdonald_ct(&rs, cut)?,
        Command::VerifyLevel1 | Command::BaileySl2 => identity::verify_level1(&rs, cut, cfg.seed)?,
        Command::VerifyBrylinski => identity::verify_brylinski_basic(&rs, cut)?,
        Command::VerifyOrtho => identity::verify_ortho_level1(&rs, cut)?,
        _ => unreachable!(),
    };
    let mut out = Collected::new();
    out.gamma_count = outcome.gamma_count;
    out.points = outcome.points.clone();
    if let Some(m) = outcome.first_mismatch {
        out.note_mismatch(m);
    }
    if let Some(order) = cfg.dump_order {
        out.dump = dump_identity_heads(cfg, &rs, order)?;
    }
    Ok(out)
}

/// Coefficient tables of both sides up to the requested order, for audit.
fn dump_identity_heads(
    cfg: &RunConfig,
    rs: &RootSystem,
    order: i64,
) -> maclab_core::Result<Vec<String>> {
    let cut = Cutoffs::new(cfg.qden, order.min(cfg.nq) * cfg.qden, order.min(cfg.nt));
    let mut lines = Vec::new();
    let qrat_sides: Option<(QTSeries<QRat>, QTSeries<QRat>)> = match cfg.command {
        Command::VerifyMacdonaldCt => {
            let lhs = identity::constant_term_series(rs, &identity::adjoint_plethysm(rs, cut)?);
            let zero = maclab_core::root_data::Weight::zero(rs.rank);
            let dom = EvalDomain {
                point: vec![QRat::ZERO; rs.rank],
            };
            let mut fs = Vec::new();
            for &mk in &rs.exponents {
                let mk = mk as i64;
                for n in (mk + 1)..=(cut.nq / cut.qden) {
                    fs.push(maclab_core::qt::AffineFactor::new(
                        1,
                        mk,
                        n * cut.qden,
                        zero.clone(),
                        QRat::ONE,
                    ));
                    fs.push(maclab_core::qt::AffineFactor::new(
                        -1,
                        mk + 1,
                        n * cut.qden,
                        zero.clone(),
                        QRat::ONE,
                    ));
                }
            }
            Some((lhs, maclab_core::qt::truncated_product(&fs, cut, &dom)?))
        }
        Command::Verify1psi1 if rs.rank > 1 => {
            let point = identity::sample_torus_points(rs, cfg.seed, 1).remove(0);
            let dom = EvalDomain { point };
            let (lhs, _) = identity::kac_lattice_sum(rs, cut, &dom)?;
            Some((lhs, identity::psi_product_side(rs, cut, &dom)?))
        }
        Command::VerifyBrylinski => {
            let (ch, _) = identity::basic_character(rs, cut)?;
            let lhs =
                identity::constant_term_series(rs, &ch.mul(&identity::adjoint_plethysm(rs, cut)?)?);
            let zero = maclab_core::root_data::Weight::zero(rs.rank);
            let dom = EvalDomain {
                point: vec![QRat::ZERO; rs.rank],
            };
            let mut fs = Vec::new();
            for &mk in &rs.exponents {
                let mk = mk as i64;
                for n in (mk + 1)..=(cut.nq / cut.qden) {
                    fs.push(maclab_core::qt::AffineFactor::new(
                        -1,
                        mk + 1,
                        n * cut.qden,
                        zero.clone(),
                        QRat::ONE,
                    ));
                }
            }
            Some((lhs, maclab_core::qt::truncated_product(&fs, cut, &dom)?))
        }
        Command::VerifyOrtho => {
            let zero = maclab_core::root_data::Weight::zero(rs.rank);
            let dom = EvalDomain {
                point: vec![QRat::ZERO; rs.rank],
            };
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
                    a_fs.push(maclab_core::qt::AffineFactor::new(
                        1,
                        mk + 1,
                        n * cut.qden,
                        zero.clone(),
                        QRat::ONE,
                    ));
                    if n > mk {
                        b_fs.push(maclab_core::qt::AffineFactor::new(
                            -1,
                            mk + 1,
                            n * cut.qden,
                            zero.clone(),
                            QRat::ONE,
                        ));
                    }
                }
            }
            let a = maclab_core::qt::truncated_product(&a_fs, boosted, &dom)?;
            let b = maclab_core::qt::truncated_product(&b_fs, boosted, &dom)?
                .subst_t_to_t_qpow(-cut.qden)?;
            let lhs = a
                .truncate(Cutoffs {
                    qden: cut.qden,
                    nq: b.cut.nq.min(cut.nq),
                    nt: cut.nt,
                })?
                .mul(&b)?;
            let mut rhs_fs = Vec::new();
            for &mk in &rs.exponents {
                rhs_fs.push(maclab_core::qt::AffineFactor::new(
                    -1,
                    mk as i64 + 1,
                    0,
                    zero.clone(),
                    QRat::ONE,
                ));
            }
            let rhs = maclab_core::qt::truncated_product(&rhs_fs, lhs.cut, &dom)?;
            Some((lhs, rhs))
        }
        _ => None,
    };
    if let Some((lhs, rhs)) = qrat_sides {
        lines.push(format!("lhs: {}", lhs.to_canonical_string()));
        lines.push(format!("rhs: {}", rhs.to_canonical_string()));
    } else if rs.rank == 1 {
        let dom = RatFun1Domain;
        match cfg.command {
            Command::Verify1psi1 => {
                let (lhs, _) = identity::kac_lattice_sum(rs, cut, &dom)?;
                let rhs = identity::psi_product_side(rs, cut, &dom)?;
                lines.push(format!("lhs: {}", lhs.to_canonical_string()));
                lines.push(format!("rhs: {}", rhs.to_canonical_string()));
            }
            Command::VerifyLevel1 | Command::BaileySl2 => {
                let translates = rs.coroot_translates(
                    maclab_core::root_data::TranslateMode::Level1Energy,
                    cut.nq / cut.qden,
                );
                let (lhs, rhs) = identity::level1_sides(rs, cut, &dom, &translates)?;
                lines.push(format!("lhs: {}", lhs.to_canonical_string()));
                lines.push(format!("rhs: {}", rhs.to_canonical_string()));
            }
            _ => {}
        }
    }
    Ok(lines)
}

fn run_dump_matrix(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let lie = lie_for(cfg)?;
    let object = cfg.object.clone().ok_or(Error::OperatorDomainError)?;
    let degree = cfg.degree.unwrap_or(0);
    let w = cfg.z_weight.unwrap_or(0);
    let mut out = Collected::new();
    let matrix = if object == "delta" {
        let n = cfg.n.ok_or(Error::DomainError)?;
        let src = maclab_core::koszul::slice::truncated_slice(&lie, n, degree, w, false, cfg.cap)?;
        let tgt =
            maclab_core::koszul::slice::truncated_slice(&lie, n, degree - 1, w, false, cfg.cap)?;
        maclab_core::koszul::slice::operator_matrix(&src, &tgt, |m| {
            maclab_core::koszul::trunc::delta_trunc(&lie, n, m)
        })?
    } else {
        let p = cfg.p_bound;
        let src = lambda_s_slice(&lie, degree, p, w, 1, cfg.cap)?;
        // Target slice keyed by the operator's grading shift, probed from
        // the operator itself on the source basis.
        let mut acc = maclab_core::koszul::TermAccum::new();
        for mono in &src.basis {
            for (t, c) in maclab_core::laplacian::named_operator(&lie, &object, mono)? {
                acc.add(t, c);
            }
        }
        let probe = acc.into_terms();
        let key = probe
            .first()
            .map(|(m, _)| (m.degree(), m.s_degree(), -m.z_depth()));
        let (td, tp, tw) = key.unwrap_or((degree, p, w));
        let tgt = lambda_s_slice(&lie, td, tp, tw, 1, cfg.cap)?;
        maclab_core::koszul::slice::operator_matrix(&src, &tgt, |m| {
            maclab_core::laplacian::named_operator(&lie, &object, m).unwrap_or_default()
        })?
    };
    out.dump
        .push(format!("rows {} cols {}", matrix.rows, matrix.cols));
    for (i, j, v) in matrix.triplets() {
        out.dump.push(format!("{i} {j} {v}"));
    }
    Ok(out)
}

fn run_dump_series(cfg: &RunConfig) -> maclab_core::Result<Collected> {
    let rs = rs_for(cfg)?;
    let cut = cfg.cutoffs();
    let object = cfg.object.clone().ok_or(Error::OperatorDomainError)?;
    let mut out = Collected::new();
    match object.as_str() {
        "kac" => {
            if rs.rank == 1 {
                let (s, g) = identity::kac_e_series(&rs, cut, &RatFun1Domain)?;
                out.gamma_count = g;
                out.dump.push(s.to_canonical_string());
            } else {
                let point = identity::sample_torus_points(&rs, cfg.seed, 1).remove(0);
                out.points = vec![point.clone()];
                let (s, g) = identity::kac_e_series(&rs, cut, &EvalDomain { point })?;
                out.gamma_count = g;
                out.dump.push(s.to_canonical_string());
            }
        }
        "psi-product" => {
            if rs.rank == 1 {
                let s = identity::psi_product_side(&rs, cut, &RatFun1Domain)?;
                out.dump.push(s.to_canonical_string());
            } else {
                let point = identity::sample_torus_points(&rs, cfg.seed, 1).remove(0);
                out.points = vec![point.clone()];
                let s = identity::psi_product_side(&rs, cut, &EvalDomain { point })?;
                out.dump.push(s.to_canonical_string());
            }
        }
        "basic-character" => {
            let (s, g) = identity::basic_character(&rs, cut)?;
            out.gamma_count = g;
            out.dump.push(s.to_canonical_string());
        }
        _ => return Err(Error::OperatorDomainError),
    }
    Ok(out)
}
