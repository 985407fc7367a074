//! Root systems, Weyl groups, exponents and the lattice pairings used by the
//! series and cohomology modules.
//!
//! Weights live in the basis dual to the chosen coroot basis (fundamental
//! weights for simple types; for `gl_n` the last coordinate is the central
//! charge). Both the basic inner product (long roots of squared length 2)
//! and the Killing normalization are kept as exact Gram matrices; nothing is
//! ever orthonormalized.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::rat::QRat;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CartanFamily {
    A,
    B,
    C,
    D,
    G,
    Gl,
}

impl core::fmt::Display for CartanFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CartanFamily::A => write!(f, "A"),
            CartanFamily::B => write!(f, "B"),
            CartanFamily::C => write!(f, "C"),
            CartanFamily::D => write!(f, "D"),
            CartanFamily::G => write!(f, "G"),
            CartanFamily::Gl => write!(f, "gl"),
        }
    }
}

/// Weight in the coordinates dual to the coroot basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![0; rank],
        }
    }

    pub fn from_coords(coords: Vec<i64>) -> Self {
        Weight { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Weight {
        Weight {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }
}

/// Lattice automorphism (a Weyl group element) as an integer matrix acting on
/// weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeylElement {
    /// Row-major rank x rank matrix; `apply` computes M * coords.
    pub matrix: Vec<i64>,
    pub rank: usize,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut matrix = vec![0; rank * rank];
        for i in 0..rank {
            matrix[i * rank + i] = 1;
        }
        WeylElement { matrix, rank }
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        let r = self.rank;
        let mut out = vec![0i64; r];
        for i in 0..r {
            let mut acc = 0i64;
            for j in 0..r {
                acc += self.matrix[i * r + j] * w.coords[j];
            }
            out[i] = acc;
        }
        Weight { coords: out }
    }

    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let r = self.rank;
        let mut matrix = vec![0i64; r * r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = 0;
                for k in 0..r {
                    acc += self.matrix[i * r + k] * other.matrix[k * r + j];
                }
                matrix[i * r + j] = acc;
            }
        }
        WeylElement { matrix, rank: r }
    }
}

/// Point of the coroot lattice in simple-coroot coordinates (for `gl_n`: the
/// extended coroot basis).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CorootPoint {
    pub coords: Vec<i64>,
    /// gamma^2/2 in the basic inner product.
    pub norm_half: QRat,
    /// Number of affine-root factors (n, alpha), n >= 1, with
    /// n + <alpha|gamma> <= 0.
    pub flip_count: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslateMode {
    Level0Flips,
    Level1Energy,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: CartanFamily,
    pub rank: usize,
    /// cartan[i][j] = <alpha_j, alpha_i_vee>; 2 on the diagonal.
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Positive roots in weight coordinates.
    pub positive_roots: Vec<Weight>,
    pub rho: Weight,
    pub exponents: Vec<u32>,
    /// (alpha_i, alpha_j) in the basic normalization, simple-root indices.
    pub basic_gram: Vec<Vec<QRat>>,
    /// Basic Gram on the weight coordinate basis.
    pub weight_gram: Vec<Vec<QRat>>,
    /// (gamma_i, gamma_j) for the coroot basis, basic normalization.
    pub coroot_gram: Vec<Vec<QRat>>,
    /// basic_gram / (2 * dual_coxeter): the Killing-dual normalization.
    pub killing_gram: Vec<Vec<QRat>>,
    pub dual_coxeter: u32,
    pub weyl_order: u64,
    /// Dimension of the Lie algebra: rank + number of roots.
    pub dim: usize,
    /// Number of simple reflections (rank, except gl_n where it is n-1).
    n_reflections: usize,
}

/// Parse "A1", "a2", "gl3" style type strings.
pub fn parse_type(s: &str) -> Result<(CartanFamily, usize)> {
    let t = s.trim();
    let lower: String = t.chars().map(|c| c.to_ascii_lowercase()).collect();
    let (fam, digits) = if let Some(rest) = lower.strip_prefix("gl") {
        (CartanFamily::Gl, rest)
    } else if let Some(first) = lower.chars().next() {
        let fam = match first {
            'a' => CartanFamily::A,
            'b' => CartanFamily::B,
            'c' => CartanFamily::C,
            'd' => CartanFamily::D,
            'g' => CartanFamily::G,
            _ => return Err(Error::UnsupportedCartanType(String::from(s))),
        };
        (fam, &lower[1..])
    } else {
        return Err(Error::UnsupportedCartanType(String::from(s)));
    };
    let rank: usize = digits
        .parse()
        .map_err(|_| Error::UnsupportedCartanType(String::from(s)))?;
    Ok((fam, rank))
}

/// Build one of the supported root systems. The whitelist covers the ranks a
/// desk-scale verification needs; anything else is rejected up front.
pub fn build_root_system(family: CartanFamily, rank: usize) -> Result<RootSystem> {
    let supported = matches!(
        (family, rank),
        (CartanFamily::A, 1..=3)
            | (CartanFamily::B, 2)
            | (CartanFamily::C, 2)
            | (CartanFamily::D, 4)
            | (CartanFamily::G, 2)
            | (CartanFamily::Gl, 1..=3)
    );
    if !supported {
        return Err(Error::UnsupportedCartanType(format!("{family}{rank}")));
    }
    if family == CartanFamily::Gl {
        return build_gl(rank);
    }

    let cartan = cartan_matrix(family, rank);
    let n_reflections = rank;

    // Root lengths: d_i = (alpha_i, alpha_i)/2, long roots normalized to 2.
    let d = root_half_lengths(&cartan);

    // All roots by reflection closure, tracked in weight coordinates.
    let simple_roots: Vec<Weight> = (0..rank)
        .map(|j| Weight::from_coords((0..rank).map(|i| cartan[i][j]).collect()))
        .collect();
    let mut all: BTreeSet<Weight> = simple_roots.iter().cloned().collect();
    loop {
        let mut next = all.clone();
        for root in &all {
            for i in 0..rank {
                next.insert(reflect_simple(root, i, &cartan));
            }
        }
        if next.len() == all.len() {
            break;
        }
        all = next;
    }
    // Positivity: expand in simple roots and look at the sign.
    let mut positive_roots: Vec<Weight> = Vec::new();
    for root in &all {
        let coeffs = in_simple_root_basis(root, &cartan);
        if coeffs.iter().all(|c| !c.is_negative()) {
            positive_roots.push(root.clone());
        }
    }
    positive_roots.sort();

    let dim = rank + all.len();
    let rho = Weight::from_coords(vec![1; rank]);

    let exponents = exponents_for(family, rank);
    let dual_coxeter = dual_coxeter_for(family, rank);

    let basic_gram: Vec<Vec<QRat>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| d[i].mul(&QRat::from_int(cartan[i][j])))
                .collect()
        })
        .collect();
    let coroot_gram: Vec<Vec<QRat>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| QRat::from_int(cartan[j][i]).div(&d[j]).mul(&QRat::ONE))
                .collect()
        })
        .collect();
    let weight_gram = weight_gram_from(&cartan, &d);
    let killing_gram: Vec<Vec<QRat>> = basic_gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.div(&QRat::from_int(2 * dual_coxeter as i64)))
                .collect()
        })
        .collect();

    let mut rs = RootSystem {
        family,
        rank,
        cartan_matrix: cartan,
        positive_roots,
        rho,
        exponents,
        basic_gram,
        weight_gram,
        coroot_gram,
        killing_gram,
        dual_coxeter,
        weyl_order: 0,
        dim,
        n_reflections,
    };
    rs.weyl_order = rs.weyl_elements().len() as u64;
    rs.check_invariants()?;
    Ok(rs)
}

pub fn build_root_system_str(type_str: &str) -> Result<RootSystem> {
    let (family, rank) = parse_type(type_str)?;
    build_root_system(family, rank)
}

fn build_gl(n: usize) -> Result<RootSystem> {
    // Weight coordinates: (sl_n fundamental coordinates, central charge).
    // Coroot basis: simple coroots of sl_n plus the center sum(eps_i_vee).
    let rank = n;
    let n_reflections = n - 1;
    let mut cartan = vec![vec![0i64; n]; n];
    for i in 0..n {
        cartan[i][i] = 2;
    }
    for i in 0..n_reflections.saturating_sub(1) {
        cartan[i][i + 1] = -1;
        cartan[i + 1][i] = -1;
    }
    // The last basis direction is central: no root has a last coordinate, so
    // keep the artificial diagonal 2 isolated.
    if n >= 2 {
        cartan[n - 1][n - 2] = 0;
        cartan[n - 2][n - 1] = 0;
    }

    // Roots eps_i - eps_j, i != j; in coordinates <.|alpha_k_vee>, <.|z_vee>.
    let mut positive_roots = Vec::new();
    let mut all_count = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            all_count += 1;
            if i < j {
                let mut coords = vec![0i64; n];
                for (k, c) in coords.iter_mut().enumerate().take(n - 1) {
                    // <eps_i - eps_j | alpha_k_vee> with alpha_k = eps_k - eps_{k+1}
                    let delta = |a: usize, b: usize| if a == b { 1i64 } else { 0 };
                    *c = delta(i, k) - delta(i, k + 1) - delta(j, k) + delta(j, k + 1);
                }
                coords[n - 1] = 0;
                positive_roots.push(Weight::from_coords(coords));
            }
        }
    }
    positive_roots.sort();

    // eps-basis Gram pulled back to our coordinates: weight -> eps vector.
    // eps_i has coordinates (delta_{ik} - delta_{i,k+1} summed ... ), easier:
    // build the linear map coords -> eps numerically and transport the
    // standard inner product.
    let to_eps = gl_coords_to_eps(n);
    let mut weight_gram = vec![vec![QRat::ZERO; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = QRat::ZERO;
            for k in 0..n {
                acc = acc.add(&to_eps[i][k].mul(&to_eps[j][k]));
            }
            weight_gram[i][j] = acc;
        }
    }

    let exponents: Vec<u32> = (0..n as u32).collect();
    let dim = n * n;
    let mut rho_coords = vec![1i64; n];
    rho_coords[n - 1] = 0;
    if n == 1 {
        rho_coords[0] = 0;
    }

    let basic_gram = vec![vec![QRat::ZERO; n.saturating_sub(0)]; n]; // filled below
    let mut rs = RootSystem {
        family: CartanFamily::Gl,
        rank,
        cartan_matrix: cartan,
        positive_roots,
        rho: Weight::from_coords(rho_coords),
        exponents,
        basic_gram,
        weight_gram,
        coroot_gram: vec![vec![QRat::ZERO; n]; n],
        killing_gram: vec![vec![QRat::ZERO; n]; n],
        dual_coxeter: n as u32,
        weyl_order: 0,
        dim,
        n_reflections,
    };
    // Simple-root Grams via the eps form.
    let mut basic = vec![vec![QRat::ZERO; n]; n];
    let mut coroot = vec![vec![QRat::ZERO; n]; n];
    for i in 0..n {
        for j in 0..n {
            // For i,j < n-1 these are the honest simple-root pairings; the
            // final row/column belongs to the central direction.
            let e = |k: usize, idx: usize| -> i64 {
                if k < n - 1 {
                    // alpha_k = eps_k - eps_{k+1}
                    if idx == k {
                        1
                    } else if idx == k + 1 {
                        -1
                    } else {
                        0
                    }
                } else {
                    1 // the center direction sum eps
                }
            };
            let mut acc = 0i64;
            for idx in 0..n {
                acc += e(i, idx) * e(j, idx);
            }
            basic[i][j] = QRat::from_int(acc);
            coroot[i][j] = QRat::from_int(acc);
        }
    }
    rs.killing_gram = basic
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.div(&QRat::from_int(2 * n as i64)))
                .collect()
        })
        .collect();
    rs.basic_gram = basic;
    rs.coroot_gram = coroot;
    rs.weyl_order = rs.weyl_elements().len() as u64;
    rs.check_invariants()?;
    debug_assert_eq!(all_count, rs.dim - rank);
    Ok(rs)
}

/// coords -> eps-basis conversion for gl_n (rational matrix, rows = coords).
fn gl_coords_to_eps(n: usize) -> Vec<Vec<QRat>> {
    // Solve for the dual basis of (alpha_1_vee .. alpha_{n-1}_vee, z_vee) in
    // the eps basis: row i of the result is the eps vector of the i-th weight
    // coordinate direction.
    // Coordinate functionals on a weight x (in eps coords) are:
    //   c_k(x) = x_k - x_{k+1} (k < n-1 via alpha_k_vee), c_{n-1}(x) = sum x_i.
    // We need the matrix taking coords back to eps, i.e. the inverse.
    let mut m = vec![vec![QRat::ZERO; n]; n];
    for k in 0..n - 1 {
        m[k][k] = QRat::ONE;
        m[k][k + 1] = QRat::from_int(-1);
    }
    for j in 0..n {
        m[n - 1][j] = QRat::ONE;
    }
    invert_rational(&m)
}

fn invert_rational(m: &[Vec<QRat>]) -> Vec<Vec<QRat>> {
    let n = m.len();
    let mut a: Vec<Vec<QRat>> = m.to_vec();
    let mut inv = vec![vec![QRat::ZERO; n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = QRat::ONE;
    }
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular matrix");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].div(&p);
            inv[col][j] = inv[col][j].div(&p);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    inv
}

fn cartan_matrix(family: CartanFamily, rank: usize) -> Vec<Vec<i64>> {
    match family {
        CartanFamily::A => {
            let mut m = vec![vec![0i64; rank]; rank];
            for i in 0..rank {
                m[i][i] = 2;
                if i + 1 < rank {
                    m[i][i + 1] = -1;
                    m[i + 1][i] = -1;
                }
            }
            m
        }
        CartanFamily::B => vec![vec![2, -1], vec![-2, 2]],
        CartanFamily::C => vec![vec![2, -2], vec![-1, 2]],
        CartanFamily::D => vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -1, -1],
            vec![0, -1, 2, 0],
            vec![0, -1, 0, 2],
        ],
        CartanFamily::G => vec![vec![2, -3], vec![-1, 2]],
        CartanFamily::Gl => unreachable!("gl is built separately"),
    }
}

/// d_i = (alpha_i, alpha_i)/2 normalized so long roots have length^2 = 2.
fn root_half_lengths(cartan: &[Vec<i64>]) -> Vec<QRat> {
    let n = cartan.len();
    let mut d = vec![QRat::ZERO; n];
    d[0] = QRat::ONE;
    // Propagate via symmetry d_i a_ij = d_j a_ji over the Dynkin graph.
    let mut done = vec![false; n];
    done[0] = true;
    for _ in 0..n {
        for i in 0..n {
            if !done[i] {
                continue;
            }
            for j in 0..n {
                if i != j && cartan[i][j] != 0 && !done[j] {
                    d[j] = d[i].mul(&QRat::new(cartan[i][j], cartan[j][i]));
                    done[j] = true;
                }
            }
        }
    }
    let max = d.iter().max().expect("nonempty").clone();
    d.iter().map(|v| v.div(&max)).collect()
}

fn weight_gram_from(cartan: &[Vec<i64>], d: &[QRat]) -> Vec<Vec<QRat>> {
    // (omega_i, omega_j) = ((A^T)^{-1})_{ij} d_j
    let n = cartan.len();
    let mut at = vec![vec![QRat::ZERO; n]; n];
    for i in 0..n {
        for j in 0..n {
            at[i][j] = QRat::from_int(cartan[j][i]);
        }
    }
    let inv = invert_rational(&at);
    (0..n)
        .map(|i| (0..n).map(|j| inv[i][j].mul(&d[j])).collect())
        .collect()
}

fn reflect_simple(w: &Weight, i: usize, cartan: &[Vec<i64>]) -> Weight {
    // s_i(w) = w - w_i * alpha_i, alpha_i's coordinates are column i.
    let mut coords = w.coords.clone();
    let wi = w.coords[i];
    for (k, c) in coords.iter_mut().enumerate() {
        *c -= wi * cartan[k][i];
    }
    Weight { coords }
}

fn in_simple_root_basis(w: &Weight, cartan: &[Vec<i64>]) -> Vec<QRat> {
    // Solve cartan * c = coords (coords_i = sum_j c_j cartan[i][j]).
    let n = cartan.len();
    let m: Vec<Vec<QRat>> = (0..n)
        .map(|i| (0..n).map(|j| QRat::from_int(cartan[i][j])).collect())
        .collect();
    let inv = invert_rational(&m);
    (0..n)
        .map(|j| {
            let mut acc = QRat::ZERO;
            for i in 0..n {
                acc = acc.add(&inv[j][i].mul(&QRat::from_int(w.coords[i])));
            }
            acc
        })
        .collect()
}

fn exponents_for(family: CartanFamily, rank: usize) -> Vec<u32> {
    match (family, rank) {
        (CartanFamily::A, n) => (1..=n as u32).collect(),
        (CartanFamily::B, 2) | (CartanFamily::C, 2) => vec![1, 3],
        (CartanFamily::D, 4) => vec![1, 3, 3, 5],
        (CartanFamily::G, 2) => vec![1, 5],
        (CartanFamily::Gl, n) => (0..n as u32).collect(),
        _ => unreachable!(),
    }
}

fn dual_coxeter_for(family: CartanFamily, rank: usize) -> u32 {
    match (family, rank) {
        (CartanFamily::A, n) => n as u32 + 1,
        (CartanFamily::B, 2) | (CartanFamily::C, 2) => 3,
        (CartanFamily::D, 4) => 6,
        (CartanFamily::G, 2) => 4,
        (CartanFamily::Gl, n) => n as u32,
        _ => unreachable!(),
    }
}

impl RootSystem {
    fn check_invariants(&self) -> Result<()> {
        for (i, row) in self.cartan_matrix.iter().enumerate() {
            if row[i] != 2 {
                return Err(Error::UnsupportedCartanType(String::from(
                    "bad Cartan diagonal",
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if i != j && v > 0 {
                    return Err(Error::UnsupportedCartanType(String::from(
                        "bad Cartan sign",
                    )));
                }
            }
        }
        if 2 * self.positive_roots.len() != self.dim - self.rank {
            return Err(Error::UnsupportedCartanType(String::from(
                "positive root count",
            )));
        }
        let degree_sum: u64 = self.exponents.iter().map(|&m| 2 * m as u64 + 1).sum();
        if degree_sum != self.dim as u64 {
            return Err(Error::UnsupportedCartanType(String::from(
                "exponent degree sum",
            )));
        }
        let order_product: u64 = self.exponents.iter().map(|&m| m as u64 + 1).product();
        if order_product != self.weyl_order {
            return Err(Error::UnsupportedCartanType(String::from(
                "exponent order product",
            )));
        }
        if self.exponents.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::UnsupportedCartanType(String::from(
                "exponents not sorted",
            )));
        }
        Ok(())
    }

    pub fn type_string(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, CartanFamily::A | CartanFamily::D)
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    /// All roots, negatives included.
    pub fn all_roots(&self) -> Vec<Weight> {
        let mut v: Vec<Weight> = self.positive_roots.clone();
        v.extend(self.positive_roots.iter().map(|r| r.neg()));
        v.sort();
        v
    }

    /// Simple reflection matrices on weight coordinates.
    fn simple_reflection(&self, i: usize) -> WeylElement {
        let r = self.rank;
        let mut matrix = vec![0i64; r * r];
        for k in 0..r {
            for j in 0..r {
                let mut v = if k == j { 1 } else { 0 };
                if j == i {
                    v -= self.cartan_matrix[k][i];
                }
                matrix[k * r + j] = v;
            }
        }
        WeylElement { matrix, rank: r }
    }

    /// The full Weyl group, enumerated by breadth-first closure over simple
    /// reflections. Deterministic order: BFS layer by layer, sorted within
    /// layers.
    pub fn weyl_elements(&self) -> Vec<WeylElement> {
        let gens: Vec<WeylElement> = (0..self.n_reflections)
            .map(|i| self.simple_reflection(i))
            .collect();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let id = WeylElement::identity(self.rank);
        seen.insert(id.matrix.clone());
        let mut out = vec![id];
        let mut frontier = vec![0usize];
        while let Some(layer_start) = frontier.pop() {
            let mut next_layer = Vec::new();
            for idx in layer_start..out.len() {
                for g in &gens {
                    let cand = out[idx].compose(g);
                    if seen.insert(cand.matrix.clone()) {
                        next_layer.push(cand);
                    }
                }
            }
            if !next_layer.is_empty() {
                next_layer.sort();
                let start = out.len();
                out.extend(next_layer);
                frontier.push(start);
            }
        }
        out
    }

    /// Integer pairing <lambda | gamma>; weight coordinates are dual to the
    /// coroot basis, so this is the dot product.
    pub fn pairing(&self, lambda: &Weight, gamma: &CorootPoint) -> Result<i64> {
        if lambda.coords.len() != self.rank || gamma.coords.len() != self.rank {
            return Err(Error::DimensionError);
        }
        Ok(lambda
            .coords
            .iter()
            .zip(&gamma.coords)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn pairing_coords(&self, lambda: &Weight, gamma_coords: &[i64]) -> i64 {
        lambda
            .coords
            .iter()
            .zip(gamma_coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// gamma^2/2 in the basic inner product.
    pub fn coroot_norm_half(&self, coords: &[i64]) -> QRat {
        let mut acc = QRat::ZERO;
        for i in 0..self.rank {
            for j in 0..self.rank {
                if coords[i] != 0 && coords[j] != 0 {
                    acc = acc
                        .add(&self.coroot_gram[i][j].mul(&QRat::from_int(coords[i] * coords[j])));
                }
            }
        }
        acc.div(&QRat::from_int(2))
    }

    /// Count of affine-root factors with non-positive exponent after
    /// translating by gamma: #{(n, alpha) : n >= 1, n + <alpha|gamma> <= 0}.
    pub fn flip_count(&self, coords: &[i64]) -> i64 {
        let mut total = 0i64;
        for alpha in self.all_roots() {
            let p = self.pairing_coords(&alpha, coords);
            if p < 0 {
                total += -p;
            }
        }
        total
    }

    pub fn coroot_point(&self, coords: Vec<i64>) -> CorootPoint {
        let norm_half = self.coroot_norm_half(&coords);
        let flip_count = self.flip_count(&coords);
        CorootPoint {
            coords,
            norm_half,
            flip_count,
        }
    }

    /// The weight of a coroot lattice point under the basic inner product
    /// (gamma viewed as an element of the weight lattice; integral for the
    /// supported types).
    pub fn coroot_as_weight(&self, coords: &[i64]) -> Weight {
        // <gamma | alpha_j_vee> = (gamma, alpha_j_vee * d_j ... ) in basic
        // form: entry j is sum_i coords_i * (gamma_i, alpha_j)_basic / d_j
        // which equals sum_i coords_i * cartan[j][i] ... For the coroot basis
        // the pairing with alpha_j_vee is (gamma, alpha_j) * 2/(alpha_j,
        // alpha_j); compute exactly from the Grams.
        let mut out = vec![0i64; self.rank];
        for j in 0..self.rank {
            // (gamma, alpha_j)_basic
            let mut acc = QRat::ZERO;
            for (i, &ci) in coords.iter().enumerate() {
                if ci != 0 {
                    // (alpha_i_vee, alpha_j) = cartan[j][i]
                    acc = acc.add(&QRat::from_int(ci * self.cartan_matrix[j][i]));
                }
            }
            // divide by d_j = (alpha_j, alpha_j)/2
            let dj = self.basic_gram[j][j].div(&QRat::from_int(2));
            let v = acc.div(&dj);
            let (n, d) = v.as_small().expect("coroot weight fits in words");
            assert_eq!(d, 1, "coroot does not map to an integral weight");
            out[j] = n;
        }
        Weight::from_coords(out)
    }

    /// Lattice points within a translate bound, symmetric under negation.
    /// Enumeration expands box shells until a full shell is entirely out of
    /// range; both bounding quantities grow along rays from the origin, so
    /// this is exhaustive.
    pub fn coroot_translates(&self, mode: TranslateMode, bound: i64) -> Vec<CorootPoint> {
        let mut out: Vec<CorootPoint> = Vec::new();
        let keep = |p: &CorootPoint| -> bool {
            match mode {
                TranslateMode::Level0Flips => p.flip_count <= bound,
                TranslateMode::Level1Energy => p.norm_half <= QRat::from_int(bound),
            }
        };
        let mut radius = 0i64;
        loop {
            let shell = self.box_shell(radius);
            let mut any = false;
            for coords in shell {
                let p = self.coroot_point(coords);
                if keep(&p) {
                    any = true;
                    out.push(p);
                }
            }
            if !any && radius > 0 {
                break;
            }
            radius += 1;
            // Safety valve so malformed bounds cannot spin forever.
            assert!(radius < 10_000, "coroot enumeration did not terminate");
        }
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        out
    }

    fn box_shell(&self, radius: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = vec![-radius; self.rank];
        loop {
            if cur.iter().map(|c| c.abs()).max().unwrap_or(0) == radius {
                out.push(cur.clone());
            }
            // Odometer increment.
            let mut k = 0;
            loop {
                if k == self.rank {
                    return out;
                }
                cur[k] += 1;
                if cur[k] <= radius {
                    break;
                }
                cur[k] = -radius;
                k += 1;
            }
        }
    }

    /// Basic inner product of two weights.
    pub fn weight_inner(&self, a: &Weight, b: &Weight) -> QRat {
        let mut acc = QRat::ZERO;
        for i in 0..self.rank {
            for j in 0..self.rank {
                if a.coords[i] != 0 && b.coords[j] != 0 {
                    acc = acc.add(
                        &self.weight_gram[i][j].mul(&QRat::from_int(a.coords[i] * b.coords[j])),
                    );
                }
            }
        }
        acc
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        // Only the reflection directions constrain dominance (the gl center
        // is unconstrained).
        (0..self.n_reflections).all(|i| w.coords[i] >= 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        build_root_system_str(s).unwrap()
    }

    #[test]
    fn gl3_exponents_match_the_standard_table() {
        assert_eq!(rs("gl3").exponents, vec![0, 1, 2]);
    }

    #[test]
    fn a1_exponent_from_invariant_forms() {
        // Brute-force oracle: dim of the ad-invariants in Lambda^k(g) for the
        // 3-dimensional simple algebra has Poincare polynomial 1 + y^3, so a
        // unique exponent 1 (degree 2*1+1 = 3).
        let r = rs("A1");
        assert_eq!(r.exponents, vec![1]);
        assert_eq!(r.dim, 3);
    }

    #[test]
    fn a2_exponents() {
        // Oracle in char_ring tests computes invariants of S^k g* directly;
        // here assert the table and its numeric consequences.
        let r = rs("A2");
        assert_eq!(r.exponents, vec![1, 2]);
        assert_eq!(r.dim, 8);
        assert_eq!(r.weyl_order, 6);
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(rs("A1").weyl_order, 2);
        assert_eq!(rs("A2").weyl_order, 6);
        assert_eq!(rs("B2").weyl_order, 8);
        assert_eq!(rs("C2").weyl_order, 8);
        assert_eq!(rs("A3").weyl_order, 24);
        assert_eq!(rs("D4").weyl_order, 192);
        assert_eq!(rs("G2").weyl_order, 12);
        assert_eq!(rs("gl2").weyl_order, 2);
        assert_eq!(rs("gl3").weyl_order, 6);
    }

    #[test]
    fn degree_sum_and_order_product_hold_for_all_supported() {
        for t in [
            "A1", "A2", "A3", "B2", "C2", "D4", "G2", "gl1", "gl2", "gl3",
        ] {
            let r = rs(t);
            let s: u64 = r.exponents.iter().map(|&m| 2 * m as u64 + 1).sum();
            assert_eq!(s, r.dim as u64, "{t}");
            let p: u64 = r.exponents.iter().map(|&m| m as u64 + 1).product();
            assert_eq!(p, r.weyl_order, "{t}");
        }
    }

    #[test]
    fn pairing_examples() {
        let a1 = rs("A1");
        let alpha = a1.positive_roots[0].clone();
        let g = a1.coroot_point(vec![1]);
        assert_eq!(a1.pairing(&alpha, &g).unwrap(), 2);
        let zero = a1.coroot_point(vec![0]);
        assert_eq!(a1.pairing(&alpha, &zero).unwrap(), 0);

        let a2 = rs("A2");
        // alpha_1 in weight coordinates is column 1 of the Cartan matrix.
        let alpha1 = Weight::from_coords(vec![2, -1]);
        let gamma2 = a2.coroot_point(vec![0, 1]);
        assert_eq!(a2.pairing(&alpha1, &gamma2).unwrap(), -1);
    }

    #[test]
    fn pairing_rank_mismatch_errors() {
        let a2 = rs("A2");
        let w = Weight::from_coords(vec![1]);
        let g = a2.coroot_point(vec![0, 0]);
        assert_eq!(a2.pairing(&w, &g), Err(Error::DimensionError));
    }

    #[test]
    fn weyl_elements_permute_roots() {
        for t in ["A1", "A2", "B2", "G2"] {
            let r = rs(t);
            let roots: BTreeSet<Weight> = r.all_roots().into_iter().collect();
            for w in r.weyl_elements() {
                let image: BTreeSet<Weight> = roots.iter().map(|x| w.apply(x)).collect();
                assert_eq!(image, roots, "{t}");
            }
        }
    }

    #[test]
    fn weyl_group_closed_under_composition_and_inverse() {
        let r = rs("A2");
        let els = r.weyl_elements();
        let set: BTreeSet<Vec<i64>> = els.iter().map(|w| w.matrix.clone()).collect();
        for a in &els {
            for b in &els {
                assert!(set.contains(&a.compose(b).matrix));
            }
            // Inverse exists in the set: some b with a*b = id.
            let id = WeylElement::identity(r.rank);
            assert!(els.iter().any(|b| a.compose(b) == id));
        }
    }

    #[test]
    fn a1_energy_shells() {
        let a1 = rs("A1");
        let t0 = a1.coroot_translates(TranslateMode::Level1Energy, 0);
        assert_eq!(t0.len(), 1);
        assert!(t0[0].coords == vec![0]);
        // (m alpha_vee)^2/2 = m^2 in the basic form
        let t2 = a1.coroot_translates(TranslateMode::Level1Energy, 2);
        let coords: Vec<Vec<i64>> = t2.iter().map(|p| p.coords.clone()).collect();
        assert_eq!(coords, vec![vec![-1], vec![0], vec![1]]);
        let p = a1.coroot_point(vec![2]);
        assert_eq!(p.norm_half, QRat::from_int(4));
    }

    #[test]
    fn a2_energy_shell_count() {
        // Origin plus the six shortest lattice vectors at norm_half = 1.
        let a2 = rs("A2");
        let t1 = a2.coroot_translates(TranslateMode::Level1Energy, 1);
        assert_eq!(t1.len(), 7);
    }

    #[test]
    fn energy_shells_nest() {
        let a2 = rs("A2");
        for b in 0..4i64 {
            let small: BTreeSet<Vec<i64>> = a2
                .coroot_translates(TranslateMode::Level1Energy, b)
                .into_iter()
                .map(|p| p.coords)
                .collect();
            let large: BTreeSet<Vec<i64>> = a2
                .coroot_translates(TranslateMode::Level1Energy, b + 1)
                .into_iter()
                .map(|p| p.coords)
                .collect();
            assert!(small.is_subset(&large));
        }
    }

    #[test]
    fn flip_counts_are_weyl_negation_symmetric() {
        let a2 = rs("A2");
        for p in a2.coroot_translates(TranslateMode::Level0Flips, 8) {
            let neg = a2.coroot_point(p.coords.iter().map(|c| -c).collect());
            assert_eq!(p.flip_count, neg.flip_count);
            assert_eq!(p.norm_half, neg.norm_half);
        }
    }

    #[test]
    fn pairing_is_weyl_equivariant() {
        // <w lambda | w gamma> = <lambda | gamma> checked by mapping gamma
        // through the inverse-transpose action induced on coroot coordinates.
        // Equivalent check: <w lambda | gamma'> where gamma' is defined via
        // the weight-side image of gamma under the basic identification.
        let a2 = rs("A2");
        let lambda = Weight::from_coords(vec![2, -1]);
        for w in a2.weyl_elements() {
            for gamma in [vec![1i64, 0], vec![1, 1], vec![-2, 1]] {
                let gw = a2.coroot_as_weight(&gamma);
                // Pair via the basic form: <lambda|gamma> = (lambda, gw).
                let lhs = a2.weight_inner(&lambda, &gw);
                let rhs = a2.weight_inner(&w.apply(&lambda), &w.apply(&gw));
                assert_eq!(lhs, rhs);
                let dot = a2.pairing_coords(&lambda, &gamma);
                assert_eq!(QRat::from_int(dot), lhs);
            }
        }
    }

    #[test]
    fn unsupported_types_are_rejected() {
        assert!(build_root_system_str("E8").is_err());
        assert!(build_root_system_str("A9").is_err());
        assert!(build_root_system_str("gl7").is_err());
        assert!(build_root_system_str("xyz").is_err());
    }

    #[test]
    fn parse_is_case_insensitive() {
        assert_eq!(parse_type("a2").unwrap(), (CartanFamily::A, 2));
        assert_eq!(parse_type("GL3").unwrap(), (CartanFamily::Gl, 3));
        assert_eq!(parse_type("d4").unwrap(), (CartanFamily::D, 4));
    }
}
