//! Shared optimization kernels for norm computations.
//!
//! Everything here revolves around one primitive: the support function of a
//! unit ball, `max { ⟨w, c⟩ : c ∈ ball }`, returned together with a maximizer.
//! Operator norms, bilinear-form suprema and injective tensor norms are all
//! expressed as `sup uᵀA v` over a pair of balls and solved by alternating
//! exact support steps, which makes every iterate a certified lower bound.
//!
//! Three kinds of balls occur:
//! * coordinate ℓp balls,
//! * sections `{c : ‖Bc‖_p ≤ 1}` of an ambient ℓp ball by an
//!   orthonormally-embedded subspace (the inherited norm), and
//! * their polars `{Bᵀs : ‖s‖_q ≤ 1}`.
//!
//! For p ∈ {1, ∞} the balls are polytopes; at the dimensions this crate
//! targets their vertices can be enumerated outright, which upgrades the
//! ascent to an exact computation. For p = 2 the Euclidean structure gives a
//! singular-value route. Everything else falls back to seeded multi-start
//! ascent.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{CoreError, Result};
use crate::space::{NormedSpace, PExp};

/// Budget and determinism knobs shared by all iterative norm computations.
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// Number of independent ascent starts.
    pub restarts: usize,
    /// Stagnation tolerance: an ascent stops once successive values agree
    /// to this accuracy (relative to the value's magnitude).
    pub tol: f64,
    /// Hard cap on ascent iterations per start.
    pub max_iters: usize,
    /// Root seed; every start derives its own stream deterministically.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            tol: 1e-9,
            max_iters: 10_000,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimizerConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(CoreError::invalid("optimizer needs at least one restart"));
        }
        if !(self.tol > 0.0) {
            return Err(CoreError::invalid("optimizer tolerance must be positive"));
        }
        if self.max_iters == 0 {
            return Err(CoreError::invalid("optimizer needs at least one iteration"));
        }
        Ok(())
    }

    /// Deterministic per-task RNG: the same (seed, salt) pair always yields
    /// the same stream, independent of call order.
    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix_seed(self.seed, salt))
    }
}

/// SplitMix64 step; used to derive independent seeds from (root, salt).
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.sample(StandardNormal))
}

// --- ℓp kernels ---

/// ‖v‖_p with the usual conventions for p = 1, 2, ∞.
pub(crate) fn lp_norm(v: &DVector<f64>, p: PExp) -> f64 {
    if p.is_inf() {
        return v.iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    let pv = p.value();
    if pv == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if pv == 2.0 {
        v.norm()
    } else {
        // Scale out the largest entry so x^p cannot overflow or underflow.
        let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m == 0.0 {
            return 0.0;
        }
        let s: f64 = v.iter().map(|x| (x.abs() / m).powf(pv)).sum();
        m * s.powf(1.0 / pv)
    }
}

/// `max { ⟨w, c⟩ : ‖c‖_p ≤ 1 }` = ‖w‖_q, together with a maximizer.
///
/// The maximizer is a vertex for p ∈ {1, ∞} (ties broken at the lowest
/// index) and the normalized dual-power vector otherwise.
pub(crate) fn lp_support(w: &DVector<f64>, p: PExp) -> (f64, DVector<f64>) {
    let n = w.len();
    if w.iter().all(|x| *x == 0.0) {
        let mut c = DVector::zeros(n);
        if n > 0 {
            c[0] = 1.0;
        }
        return (0.0, c);
    }
    if p.value() == 1.0 {
        let mut best = 0;
        for i in 1..n {
            if w[i].abs() > w[best].abs() {
                best = i;
            }
        }
        let mut c = DVector::zeros(n);
        c[best] = w[best].signum();
        (w[best].abs(), c)
    } else if p.is_inf() {
        let c = DVector::from_fn(n, |i, _| if w[i] < 0.0 { -1.0 } else { 1.0 });
        (w.iter().map(|x| x.abs()).sum(), c)
    } else if p.value() == 2.0 {
        let nw = w.norm();
        (nw, w / nw)
    } else {
        let q = p.dual().value();
        let mut c = DVector::from_fn(n, |i, _| w[i].signum() * w[i].abs().powf(q - 1.0));
        let np = lp_norm(&c, p);
        c /= np;
        (w.dot(&c), c)
    }
}

// --- unit balls ---

/// A centrally symmetric unit ball over which linear functionals are
/// maximized during ascent.
#[derive(Debug, Clone)]
pub(crate) enum Ball {
    /// `{ c : ‖c‖_p ≤ 1 }`
    Lp { dim: usize, p: PExp },
    /// `{ c : ‖Bc‖_p ≤ 1 }` — the inherited-norm ball of an embedded space.
    Section { basis: DMatrix<f64>, p: PExp },
    /// `{ Bᵀs : ‖s‖_q ≤ 1 }` — the dual ball of a `Section`.
    ImageOfLq { basis: DMatrix<f64>, q: PExp },
}

impl Ball {
    /// Unit ball of the space's own norm.
    pub fn primal(space: &NormedSpace) -> Ball {
        match space.embedding() {
            None => Ball::Lp {
                dim: space.dim(),
                p: space.p(),
            },
            Some(b) => Ball::Section {
                basis: b.clone(),
                p: space.p(),
            },
        }
    }

    /// Unit ball of the dual norm.
    pub fn dual(space: &NormedSpace) -> Ball {
        match space.embedding() {
            None => Ball::Lp {
                dim: space.dim(),
                p: space.p().dual(),
            },
            Some(b) => Ball::ImageOfLq {
                basis: b.clone(),
                q: space.p().dual(),
            },
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Ball::Lp { dim, .. } => *dim,
            Ball::Section { basis, .. } | Ball::ImageOfLq { basis, .. } => basis.ncols(),
        }
    }

    fn is_euclidean(&self) -> bool {
        match self {
            Ball::Lp { p, .. } => p.value() == 2.0,
            // Embedded p = 2 is canonicalized away by NormedSpace, and for an
            // orthonormal basis the image of the ℓ2 ball is the ℓ2 ball.
            Ball::Section { p, .. } => p.value() == 2.0,
            Ball::ImageOfLq { q, .. } => q.value() == 2.0,
        }
    }
}

/// Cap on how many vertex representatives an enumeration may produce.
const VERTEX_BUDGET: usize = 20_000;

/// A ball plus everything precomputed for fast repeated support queries.
pub(crate) struct BallOracle {
    ball: Ball,
    /// Vertex representatives up to sign, when the ball is a polytope small
    /// enough to enumerate. Presence makes `form_sup` exact over this side.
    vertices: Option<Vec<DVector<f64>>>,
    /// Whether `support` returns the exact maximum (true for everything
    /// except smooth sections with p ∉ {1, 2, ∞}).
    exact_support: bool,
}

impl BallOracle {
    pub fn new(ball: Ball) -> BallOracle {
        let vertices = enumerate_vertices(&ball);
        let exact_support = match &ball {
            Ball::Lp { .. } | Ball::ImageOfLq { .. } => true,
            // Vertices are only ever enumerated when they are the complete
            // extreme set, so their presence makes the support query exact.
            Ball::Section { p, .. } => p.value() == 2.0 || vertices.is_some(),
        };
        BallOracle {
            ball,
            vertices,
            exact_support,
        }
    }

    pub fn for_space(space: &NormedSpace) -> BallOracle {
        BallOracle::new(Ball::primal(space))
    }

    pub fn for_dual(space: &NormedSpace) -> BallOracle {
        BallOracle::new(Ball::dual(space))
    }

    pub fn dim(&self) -> usize {
        self.ball.dim()
    }

    pub fn is_euclidean(&self) -> bool {
        self.ball.is_euclidean()
    }

    pub fn exact_support(&self) -> bool {
        self.exact_support
    }

    pub fn vertex_reps(&self) -> Option<&[DVector<f64>]> {
        self.vertices.as_deref()
    }

    /// `max { ⟨w, c⟩ : c ∈ ball }` with a maximizer. Exact except for smooth
    /// sections, where a safeguarded ratio ascent is used instead.
    pub fn support(&self, w: &DVector<f64>) -> (f64, DVector<f64>) {
        match &self.ball {
            Ball::Lp { p, .. } => lp_support(w, *p),
            Ball::ImageOfLq { basis, q } => {
                let (value, s) = lp_support(&(basis * w), *q);
                (value, basis.transpose() * s)
            }
            Ball::Section { basis, p } => {
                if p.value() == 2.0 {
                    let nw = w.norm();
                    if nw == 0.0 {
                        return (0.0, DVector::zeros(w.len()));
                    }
                    return (nw, w / nw);
                }
                if let Some(verts) = &self.vertices {
                    let mut best_val = f64::NEG_INFINITY;
                    let mut best = None;
                    for v in verts {
                        let d = w.dot(v);
                        // Representatives are stored up to sign.
                        if d.abs() > best_val {
                            best_val = d.abs();
                            best = Some(if d < 0.0 { -v.clone() } else { v.clone() });
                        }
                    }
                    match best {
                        Some(c) => (best_val, c),
                        None => (0.0, DVector::zeros(w.len())),
                    }
                } else {
                    section_support_smooth(basis, *p, w)
                }
            }
        }
    }

    /// A deterministic pseudorandom boundary point, used to seed ascents.
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> DVector<f64> {
        match &self.ball {
            Ball::Lp { dim, p } => {
                let v = gaussian_vector(rng, *dim);
                let n = lp_norm(&v, *p);
                if n == 0.0 {
                    DVector::zeros(*dim)
                } else {
                    v / n
                }
            }
            Ball::Section { basis, p } => {
                let c = gaussian_vector(rng, basis.ncols());
                let n = lp_norm(&(basis * &c), *p);
                if n == 0.0 {
                    DVector::zeros(basis.ncols())
                } else {
                    c / n
                }
            }
            Ball::ImageOfLq { basis, q } => {
                let s = gaussian_vector(rng, basis.nrows());
                let n = lp_norm(&s, *q);
                if n == 0.0 {
                    DVector::zeros(basis.ncols())
                } else {
                    basis.transpose() * (s / n)
                }
            }
        }
    }
}

/// Flip a vector so its largest-magnitude entry (first such index) is
/// positive; used to store vertex representatives canonically.
fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    let mut idx = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v.len() > 0 && v[idx] < 0.0 {
        v = -v;
    }
    v
}

fn push_dedup(list: &mut Vec<DVector<f64>>, v: DVector<f64>) {
    let v = canonical_sign(v);
    let close = |a: &DVector<f64>, b: &DVector<f64>| (a - b).amax() <= 1e-9;
    if !list.iter().any(|u| close(u, &v)) {
        list.push(v);
    }
}

/// All sign vectors over `dim` coordinates with the first coordinate fixed
/// positive (one representative per antipodal pair).
fn sign_patterns(dim: usize) -> Vec<DVector<f64>> {
    let count = 1usize << (dim - 1);
    let mut out = Vec::with_capacity(count);
    for bits in 0..count {
        let mut v = DVector::from_element(dim, 1.0);
        for i in 1..dim {
            if bits >> (i - 1) & 1 == 1 {
                v[i] = -1.0;
            }
        }
        out.push(v);
    }
    out
}

fn enumerate_vertices(ball: &Ball) -> Option<Vec<DVector<f64>>> {
    // One-dimensional balls are segments whatever the exponent, with the
    // single extreme point (up to sign) enumerable for every p.
    match ball {
        Ball::Lp { dim: 1, .. } => {
            return Some(vec![DVector::from_element(1, 1.0)]);
        }
        Ball::Section { basis, p } if basis.ncols() == 1 => {
            let scale = lp_norm(&basis.column(0).into_owned(), *p);
            return Some(vec![DVector::from_element(1, 1.0 / scale)]);
        }
        Ball::ImageOfLq { basis, .. } if basis.nrows() == 1 => {
            return Some(vec![canonical_sign(basis.row(0).transpose())]);
        }
        _ => {}
    }
    match ball {
        Ball::Lp { dim, p } => {
            if p.value() == 1.0 {
                Some((0..*dim).map(|i| unit_vector(*dim, i)).collect())
            } else if p.is_inf() {
                if *dim == 0 || (1usize << (dim - 1)) > VERTEX_BUDGET {
                    None
                } else {
                    Some(sign_patterns(*dim))
                }
            } else {
                None
            }
        }
        Ball::ImageOfLq { basis, q } => {
            if q.value() == 1.0 {
                Some(
                    (0..basis.nrows())
                        .map(|i| canonical_sign(basis.row(i).transpose()))
                        .collect(),
                )
            } else if q.is_inf() {
                let n = basis.nrows();
                if n == 0 || (1usize << (n - 1)) > VERTEX_BUDGET {
                    None
                } else {
                    Some(
                        sign_patterns(n)
                            .into_iter()
                            .map(|s| canonical_sign(basis.transpose() * s))
                            .collect(),
                    )
                }
            } else {
                None
            }
        }
        Ball::Section { basis, p } => {
            if p.is_inf() {
                section_vertices_linf(basis)
            } else if p.value() == 1.0 {
                section_vertices_l1(basis)
            } else {
                None
            }
        }
    }
}

fn unit_vector(dim: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    v[i] = 1.0;
    v
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // Advance the lexicographically next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `{c : ‖Bc‖_∞ ≤ 1}`: points where k independent facet
/// constraints `(Bc)_i = ±1` are active.
fn section_vertices_linf(basis: &DMatrix<f64>) -> Option<Vec<DVector<f64>>> {
    let (n, k) = (basis.nrows(), basis.ncols());
    if k == 0 || k > 20 {
        return None;
    }
    let combos = combinations(n, k);
    let sign_count = 1usize << (k - 1);
    if combos.len().checked_mul(sign_count)? > VERTEX_BUDGET {
        return None;
    }
    let mut verts = Vec::new();
    for rows in &combos {
        let sub = DMatrix::from_fn(k, k, |r, c| basis[(rows[r], c)]);
        let lu = sub.lu();
        for s in sign_patterns(k) {
            if let Some(c) = lu.solve(&s) {
                if (basis * &c).amax() <= 1.0 + 1e-9 {
                    push_dedup(&mut verts, c);
                }
            }
        }
    }
    Some(verts)
}

/// Vertices of `{c : ‖Bc‖_1 ≤ 1}`: images of low-dimensional faces of the
/// ambient cross-polytope that the subspace passes through.
fn section_vertices_l1(basis: &DMatrix<f64>) -> Option<Vec<DVector<f64>>> {
    let (n, k) = (basis.nrows(), basis.ncols());
    if k == 0 {
        return None;
    }
    let max_support = n - k + 1;
    let mut budget: usize = 0;
    for size in 1..=max_support {
        let c = combinations(n, size).len() << size;
        budget = budget.checked_add(c)?;
        if budget > VERTEX_BUDGET {
            return None;
        }
    }
    let mut verts = Vec::new();
    for size in 1..=max_support {
        for support in combinations(n, size) {
            let in_support = |row: usize| support.binary_search(&row).is_ok();
            // Unknown c solves: rows of B outside the support vanish, and the
            // signed sum over the support equals one.
            let eqs = n - size + 1;
            for bits in 0..(1usize << size) {
                let mut a = DMatrix::zeros(eqs, k);
                let mut rhs = DVector::zeros(eqs);
                let mut r = 0;
                for row in 0..n {
                    if !in_support(row) {
                        for c in 0..k {
                            a[(r, c)] = basis[(row, c)];
                        }
                        r += 1;
                    }
                }
                for (j, &row) in support.iter().enumerate() {
                    let sgn = if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
                    for c in 0..k {
                        a[(r, c)] += sgn * basis[(row, c)];
                    }
                }
                rhs[r] = 1.0;
                let svd = a.clone().svd(true, true);
                let Ok(c) = svd.solve(&rhs, 1e-12) else {
                    continue;
                };
                let image = basis * &c;
                // Accept only genuine solutions whose signs match the face.
                if (&a * &c - &rhs).amax() > 1e-9 {
                    continue;
                }
                let mut ok = true;
                for (j, &row) in support.iter().enumerate() {
                    let sgn = if bits >> j & 1 == 1 { -1.0 } else { 1.0 };
                    if sgn * image[row] < -1e-9 {
                        ok = false;
                        break;
                    }
                }
                if ok && (lp_norm(&image, PExp::ONE) - 1.0).abs() <= 1e-8 {
                    push_dedup(&mut verts, c);
                }
            }
        }
    }
    Some(verts)
}

/// A subgradient of `‖·‖_p` at `x` (any element of the subdifferential).
fn lp_subgradient(x: &DVector<f64>, p: PExp) -> DVector<f64> {
    let n = x.len();
    if p.is_inf() {
        let mut idx = 0;
        for i in 1..n {
            if x[i].abs() > x[idx].abs() {
                idx = i;
            }
        }
        let mut g = DVector::zeros(n);
        if n > 0 {
            g[idx] = x[idx].signum();
        }
        return g;
    }
    let pv = p.value();
    if pv == 1.0 {
        DVector::from_fn(n, |i, _| x[i].signum())
    } else {
        let scale = lp_norm(x, p);
        if scale == 0.0 {
            return DVector::zeros(n);
        }
        DVector::from_fn(n, |i, _| {
            x[i].signum() * (x[i].abs() / scale).powf(pv - 1.0)
        })
    }
}

/// Safeguarded ratio ascent for `max ⟨w, c⟩ / ‖Bc‖_p` with smooth p. The
/// result is a feasible value (a certified lower bound on the support) but
/// is not guaranteed to be the exact maximum.
fn section_support_smooth(basis: &DMatrix<f64>, p: PExp, w: &DVector<f64>) -> (f64, DVector<f64>) {
    let k = basis.ncols();
    let a = basis * w; // objective in ambient coordinates: ⟨a, x⟩ on col(B)
    if a.norm() == 0.0 {
        return (0.0, DVector::zeros(k));
    }
    let project = |x: &DVector<f64>| basis * (basis.transpose() * x);
    let normalize = |x: &DVector<f64>| {
        let n = lp_norm(x, p);
        x / n
    };
    let mut x = normalize(&a.clone());
    let mut value = a.dot(&x);
    for _ in 0..200 {
        // (Sub)gradient of ⟨a, x⟩/‖x‖_p at ‖x‖_p = 1, then projected back
        // onto the subspace; a backtracking step keeps the iteration monotone.
        let grad_norm = lp_subgradient(&x, p);
        let dir = project(&(&a - &grad_norm * value));
        if dir.norm() <= 1e-14 * (1.0 + value.abs()) {
            break;
        }
        let mut eta = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let cand = normalize(&project(&(&x + &dir * eta)));
            let cand_value = a.dot(&cand);
            if cand_value > value + 1e-15 {
                x = cand;
                value = cand_value;
                improved = true;
                break;
            }
            eta *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (value, basis.transpose() * x)
}

// --- two-block suprema ---

/// Result of a `sup uᵀ A v` computation over a pair of balls.
pub(crate) struct SupResult {
    pub value: f64,
    pub u: DVector<f64>,
    pub v: DVector<f64>,
    /// True when an exhaustive route (vertex enumeration with exact opposite
    /// support, or the Euclidean singular-value route) covered the problem.
    pub exact: bool,
}

/// `sup { uᵀ A v : u ∈ u_ball, v ∈ v_ball }`.
///
/// Runs every applicable exact route plus seeded alternating ascent and
/// returns the best certified value found. `v_seeds` contribute additional
/// ascent starts (useful for warm-starting from a related problem).
pub(crate) fn form_sup(
    a: &DMatrix<f64>,
    u_ball: &BallOracle,
    v_ball: &BallOracle,
    cfg: &OptimizerConfig,
    salt: u64,
    v_seeds: &[DVector<f64>],
) -> Result<SupResult> {
    cfg.validate()?;
    let (nu, nv) = (a.nrows(), a.ncols());
    debug_assert_eq!(u_ball.dim(), nu);
    debug_assert_eq!(v_ball.dim(), nv);

    let mut best = SupResult {
        value: 0.0,
        u: DVector::zeros(nu),
        v: DVector::zeros(nv),
        exact: false,
    };
    if a.amax() == 0.0 {
        best.exact = true;
        return Ok(best);
    }

    let mut consider = |value: f64, u: DVector<f64>, v: DVector<f64>| {
        if value > best.value {
            best.value = value;
            best.u = u;
            best.v = v;
        }
    };

    // Euclidean route: the supremum is the largest singular value.
    if u_ball.is_euclidean() && v_ball.is_euclidean() {
        let svd = a.clone().svd(true, true);
        let (u_m, v_t) = (svd.u.as_ref().unwrap(), svd.v_t.as_ref().unwrap());
        let mut top = 0;
        for i in 1..svd.singular_values.len() {
            if svd.singular_values[i] > svd.singular_values[top] {
                top = i;
            }
        }
        let u = u_m.column(top).into_owned();
        let v = v_t.row(top).transpose();
        let value = u.dot(&(a * &v));
        consider(value.abs(), if value < 0.0 { -u } else { u }, v);
        best.exact = true;
        return Ok(best);
    }

    // Enumeration route: walk the vertex representatives of one side and take
    // exact supports on the other. Prefer the smaller vertex list.
    let mut enumerated_exactly = false;
    let u_verts = u_ball.vertex_reps().map(|v| v.len());
    let v_verts = v_ball.vertex_reps().map(|v| v.len());
    let enumerate_u = match (u_verts, v_verts) {
        (Some(a_len), Some(b_len)) => Some(a_len <= b_len),
        (Some(_), None) => Some(true),
        (None, Some(_)) => Some(false),
        (None, None) => None,
    };
    match enumerate_u {
        Some(true) => {
            for u in u_ball.vertex_reps().unwrap() {
                let (value, v) = v_ball.support(&(a.transpose() * u));
                consider(value, u.clone(), v);
            }
            enumerated_exactly = v_ball.exact_support();
        }
        Some(false) => {
            for v in v_ball.vertex_reps().unwrap() {
                let (value, u) = u_ball.support(&(a * v));
                consider(value, u, v.clone());
            }
            enumerated_exactly = u_ball.exact_support();
        }
        None => {}
    }
    best.exact = enumerated_exactly;
    if best.exact {
        // The vertex walk covered one ball completely with exact supports on
        // the other, so the supremum is already in hand.
        return Ok(best);
    }

    // Alternating ascent: each half-step is an exact (or safeguarded)
    // support query, so the objective is monotone and every iterate feasible.
    let mut rng = cfg.rng(salt);
    let mut any_converged = false;
    for start in 0..cfg.restarts.max(v_seeds.len()) {
        let mut v = if start < v_seeds.len() {
            v_seeds[start].clone()
        } else {
            v_ball.random_point(&mut rng)
        };
        if v.norm() == 0.0 {
            continue;
        }
        let mut value = f64::NEG_INFINITY;
        let mut converged = false;
        for _ in 0..cfg.max_iters {
            let (_, u) = u_ball.support(&(a * &v));
            let (val_v, v_new) = v_ball.support(&(a.transpose() * &u));
            let previous = value;
            // Guard against non-exact supports ever decreasing the value.
            let actual = u.dot(&(a * &v_new));
            if actual >= value {
                value = actual;
                v = v_new;
                consider(value, u, v.clone());
            }
            if (val_v - previous).abs() <= cfg.tol * value.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        any_converged |= converged;
    }

    if !best.exact && !any_converged {
        return Err(CoreError::NonConvergence { best: best.value });
    }
    Ok(best)
}
