//! Finite-dimensional normed spaces, subspaces, linear maps and projections.
//!
//! A space is ℝⁿ carrying an ℓp norm. A subspace is stored through an
//! orthonormal (Euclidean) basis of its ambient space; vectors of the
//! subspace are handled in basis coordinates, and the subspace always keeps
//! the norm inherited from the ambient space: `‖c‖ = ‖Bc‖_p`. For p = 2 the
//! inherited norm coincides with the coordinate ℓ2 norm and the bookkeeping
//! disappears; for p ≠ 2 the coordinate space records the embedding.

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::optim::{self, BallOracle, OptimizerConfig};
use crate::tol;

/// Column vector over f64; all public operations take and return these.
pub type Vector = DVector<f64>;

/// A norm exponent p ∈ [1, ∞].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExp(f64);

impl PExp {
    pub const ONE: PExp = PExp(1.0);
    pub const TWO: PExp = PExp(2.0);
    pub const INF: PExp = PExp(f64::INFINITY);

    pub fn new(p: f64) -> Result<PExp> {
        if p.is_nan() || p < 1.0 {
            return Err(CoreError::invalid(format!(
                "norm exponent must satisfy p ≥ 1, got {p}"
            )));
        }
        Ok(PExp(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_inf(self) -> bool {
        self.0.is_infinite()
    }

    /// The conjugate exponent q with 1/p + 1/q = 1.
    pub fn dual(self) -> PExp {
        if self.0 == 1.0 {
            PExp::INF
        } else if self.is_inf() {
            PExp::ONE
        } else {
            PExp(self.0 / (self.0 - 1.0))
        }
    }
}

/// ℝ^dim with an ℓp norm, possibly realized through an isometric embedding.
///
/// `embedding == None` means the norm is the coordinate ℓp norm. Otherwise
/// `embedding` is a matrix with orthonormal columns and the norm of `v` is
/// `‖embedding · v‖_p` — the norm a subspace inherits from its ambient space.
#[derive(Debug, Clone)]
pub struct NormedSpace {
    dim: usize,
    p: PExp,
    embedding: Option<DMatrix<f64>>,
}

impl NormedSpace {
    /// Coordinate ℓp space of the given dimension.
    pub fn lp(dim: usize, p: PExp) -> Result<NormedSpace> {
        if dim == 0 {
            return Err(CoreError::invalid("a normed space needs dimension ≥ 1"));
        }
        Ok(NormedSpace {
            dim,
            p,
            embedding: None,
        })
    }

    /// Convenience constructor for tests and examples.
    pub fn l2(dim: usize) -> NormedSpace {
        NormedSpace::lp(dim, PExp::TWO).expect("positive dimension")
    }

    /// Space whose norm is `v ↦ ‖basis · v‖_p` for an orthonormal `basis`.
    ///
    /// Collapses to a plain coordinate space whenever the embedding is an
    /// isometry of the coordinate ℓp norm (always for p = 2, and for signed
    /// coordinate selections at any p).
    pub(crate) fn embedded(basis: DMatrix<f64>, p: PExp) -> NormedSpace {
        let dim = basis.ncols();
        if p.value() == 2.0 || is_signed_coordinate_selection(&basis) {
            return NormedSpace {
                dim,
                p,
                embedding: None,
            };
        }
        NormedSpace {
            dim,
            p,
            embedding: Some(basis),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> PExp {
        self.p
    }

    pub(crate) fn embedding(&self) -> Option<&DMatrix<f64>> {
        self.embedding.as_ref()
    }

    /// Norm of a vector of this space.
    pub fn norm(&self, v: &Vector) -> Result<f64> {
        self.check_dim("vector norm", v)?;
        Ok(match &self.embedding {
            None => optim::lp_norm(v, self.p),
            Some(b) => optim::lp_norm(&(b * v), self.p),
        })
    }

    /// Norm of the functional `x ↦ ⟨f, x⟩` in the dual space, i.e. the
    /// supremum of ⟨f, x⟩ over the unit ball. For a coordinate ℓp space this
    /// is the ℓq norm of `f` with q conjugate to p.
    pub fn dual_norm(&self, f: &Vector) -> Result<f64> {
        self.check_dim("dual norm", f)?;
        Ok(BallOracle::for_space(self).support(f).0)
    }

    fn check_dim(&self, context: &'static str, v: &Vector) -> Result<()> {
        if v.len() != self.dim {
            return Err(CoreError::dim(context, self.dim, v.len()));
        }
        Ok(())
    }

    /// Largest Euclidean norm on the unit ball; used for coarse relaxations.
    pub(crate) fn euclidean_radius(&self) -> f64 {
        // ‖v‖₂ ≤ ‖v‖_p for p ≤ 2; otherwise the gap is at most n^(1/2 − 1/p).
        // With an orthonormal embedding the same bounds apply to ‖Bv‖.
        let n = match &self.embedding {
            None => self.dim as f64,
            Some(b) => b.nrows() as f64,
        };
        let p = self.p.value();
        if p <= 2.0 {
            1.0
        } else if self.p.is_inf() {
            n.sqrt()
        } else {
            n.powf(0.5 - 1.0 / p)
        }
    }
}

/// True when every column of `b` is exactly a signed standard basis vector
/// (so `v ↦ bv` permutes/flips coordinates and preserves every ℓp norm).
fn is_signed_coordinate_selection(b: &DMatrix<f64>) -> bool {
    for c in 0..b.ncols() {
        let mut nonzero = 0;
        for r in 0..b.nrows() {
            let x = b[(r, c)];
            if x == 0.0 {
                continue;
            }
            if x != 1.0 && x != -1.0 {
                return false;
            }
            nonzero += 1;
        }
        if nonzero != 1 {
            return false;
        }
    }
    true
}

/// A linear map between two normed spaces, stored densely.
#[derive(Debug, Clone)]
pub struct LinearMap {
    domain: NormedSpace,
    codomain: NormedSpace,
    matrix: DMatrix<f64>,
}

impl LinearMap {
    pub fn new(domain: NormedSpace, codomain: NormedSpace, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != codomain.dim() {
            return Err(CoreError::dim(
                "linear map rows",
                codomain.dim(),
                matrix.nrows(),
            ));
        }
        if matrix.ncols() != domain.dim() {
            return Err(CoreError::dim(
                "linear map columns",
                domain.dim(),
                matrix.ncols(),
            ));
        }
        Ok(LinearMap {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(space: NormedSpace) -> Self {
        let n = space.dim();
        LinearMap {
            domain: space.clone(),
            codomain: space,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// The scalar-valued map `x ↦ ⟨coeffs, x⟩`.
    pub fn functional(domain: NormedSpace, coeffs: &Vector) -> Result<Self> {
        let row = DMatrix::from_fn(1, coeffs.len(), |_, j| coeffs[j]);
        LinearMap::new(domain, NormedSpace::l2(1), row)
    }

    pub fn domain(&self) -> &NormedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedSpace {
        &self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.domain.dim() {
            return Err(CoreError::dim("map application", self.domain.dim(), v.len()));
        }
        Ok(&self.matrix * v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.codomain.dim() != self.domain.dim() {
            return Err(CoreError::dim(
                "composition",
                self.domain.dim(),
                other.codomain.dim(),
            ));
        }
        LinearMap::new(
            other.domain.clone(),
            self.codomain.clone(),
            &self.matrix * &other.matrix,
        )
    }

    /// Operator norm `sup { ‖Tv‖ : ‖v‖ ≤ 1 }`.
    ///
    /// Computed as `sup ωᵀ T v` over the domain ball and the dual ball of the
    /// codomain by alternating ascent with random restarts; polytope balls
    /// are enumerated exactly and the Euclidean case is settled by the
    /// largest singular value. The returned value is a certified lower bound
    /// that is exact whenever one of those routes applies.
    pub fn operator_norm(&self, cfg: &OptimizerConfig) -> Result<f64> {
        self.operator_norm_seeded(cfg, 11, &[]).map(|r| r.0)
    }

    /// As `operator_norm`, also returning a maximizing input vector.
    /// `seeds` inject additional ascent starts on the domain side.
    pub(crate) fn operator_norm_seeded(
        &self,
        cfg: &OptimizerConfig,
        salt: u64,
        seeds: &[Vector],
    ) -> Result<(f64, Vector)> {
        let u_ball = BallOracle::for_dual(&self.codomain);
        let v_ball = BallOracle::for_space(&self.domain);
        let r = optim::form_sup(&self.matrix, &u_ball, &v_ball, cfg, salt, seeds)?;
        Ok((r.value, r.v))
    }
}

/// A linear subspace of a normed space, stored via an orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: NormedSpace,
    /// Ambient-dim × subspace-dim matrix with orthonormal columns. Columns
    /// are sign-normalized so equal spans produce equal bases.
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Builds the span of the given vectors, orthonormalizing and dropping
    /// numerically dependent directions (relative singular values below the
    /// rank cutoff).
    pub fn from_spanning(ambient: &NormedSpace, spanning: &[Vector]) -> Result<Subspace> {
        if spanning.is_empty() {
            return Err(CoreError::invalid("empty spanning set"));
        }
        let n = ambient.dim();
        for v in spanning {
            if v.len() != n {
                return Err(CoreError::dim("spanning vector", n, v.len()));
            }
        }
        let m = DMatrix::from_fn(n, spanning.len(), |r, c| spanning[c][r]);
        // A spanning set that is already orthonormal is adopted verbatim:
        // orthonormalization must be idempotent so that a serialized basis
        // reconstructs the exact coordinate frame its coefficients refer to
        // (an SVD would be free to rotate within the span, since all
        // singular values coincide).
        if m.ncols() <= n {
            let gram_defect = (m.transpose() * &m - DMatrix::identity(m.ncols(), m.ncols())).amax();
            if gram_defect <= tol::ORTHONORMALITY {
                return Ok(Subspace {
                    ambient: ambient.clone(),
                    basis: m,
                });
            }
        }
        let svd = m.svd(true, false);
        let sigma = &svd.singular_values;
        let top = sigma.iter().cloned().fold(0.0f64, f64::max);
        if top == 0.0 {
            return Err(CoreError::invalid(
                "spanning set contains only zero vectors",
            ));
        }
        let rank = sigma.iter().filter(|s| **s > tol::RANK * top).count();
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let mut basis = DMatrix::zeros(n, rank);
        let mut kept = 0;
        for i in 0..sigma.len() {
            if sigma[i] > tol::RANK * top {
                basis.set_column(kept, &u.column(i));
                kept += 1;
            }
        }
        let basis = tidy_basis(orient_columns(basis));
        Ok(Subspace {
            ambient: ambient.clone(),
            basis,
        })
    }

    /// The improper subspace M = X.
    pub fn whole(ambient: &NormedSpace) -> Subspace {
        Subspace {
            ambient: ambient.clone(),
            basis: DMatrix::identity(ambient.dim(), ambient.dim()),
        }
    }

    pub fn ambient(&self) -> &NormedSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// The subspace as a normed space in its own right: basis coordinates
    /// carrying the norm inherited from the ambient space.
    pub fn coordinate_space(&self) -> NormedSpace {
        let basis = match self.ambient.embedding() {
            None => self.basis.clone(),
            // Nested subspaces compose their embeddings.
            Some(outer) => outer * &self.basis,
        };
        NormedSpace::embedded(basis, self.ambient.p())
    }

    /// Basis coordinates of an ambient vector, failing if it does not lie in
    /// the subspace.
    pub fn coords(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.ambient.dim() {
            return Err(CoreError::dim("coords", self.ambient.dim(), v.len()));
        }
        let c = self.basis.transpose() * v;
        let residual = (v - &self.basis * &c).norm();
        if residual > tol::RESTRICTION * (1.0 + v.norm()) {
            return Err(CoreError::invalid(format!(
                "vector lies outside the subspace (residual {residual:.3e})"
            )));
        }
        Ok(c)
    }

    /// The ambient vector with the given basis coordinates.
    pub fn embed(&self, c: &Vector) -> Result<Vector> {
        if c.len() != self.dim() {
            return Err(CoreError::dim("embed", self.dim(), c.len()));
        }
        Ok(&self.basis * c)
    }

    pub fn contains(&self, v: &Vector) -> bool {
        v.len() == self.ambient.dim() && {
            let c = self.basis.transpose() * v;
            (v - &self.basis * c).norm() <= tol::RESTRICTION * (1.0 + v.norm())
        }
    }

    /// The orthogonal projection onto this subspace. Only meaningful when
    /// the ambient norm is Euclidean, where it is the unique norm-one
    /// projection.
    pub fn orthogonal_projection(&self) -> Result<Projection> {
        if self.ambient.p().value() != 2.0 {
            return Err(CoreError::unsupported(
                "orthogonal projection requires the ambient space to carry the ℓ2 norm",
            ));
        }
        let e = &self.basis * self.basis.transpose();
        let map = LinearMap::new(self.ambient.clone(), self.ambient.clone(), e)?;
        Projection::new(map, self.clone())
    }

    /// ‖BBᵀ − B'B'ᵀ‖ as a span comparison (sin of the largest principal angle).
    pub(crate) fn span_gap(&self, other: &Subspace) -> f64 {
        let a = &self.basis * self.basis.transpose();
        let b = &other.basis * other.basis.transpose();
        (a - b).norm()
    }
}

/// Flip each column so its largest-magnitude entry is positive. Keeps bases
/// deterministic across runs and platforms.
fn orient_columns(mut basis: DMatrix<f64>) -> DMatrix<f64> {
    for c in 0..basis.ncols() {
        let mut idx = 0;
        for r in 1..basis.nrows() {
            if basis[(r, c)].abs() > basis[(idx, c)].abs() {
                idx = r;
            }
        }
        if basis[(idx, c)] < 0.0 {
            for r in 0..basis.nrows() {
                basis[(r, c)] = -basis[(r, c)];
            }
        }
    }
    basis
}

/// Snap entries that are within roundoff of {−1, 0, 1}, provided the snapped
/// matrix is still orthonormal. Coordinate subspaces then come out exact,
/// which lets later stages recognize them.
fn tidy_basis(basis: DMatrix<f64>) -> DMatrix<f64> {
    let snapped = basis.map(|x| {
        if x.abs() < 1e-13 {
            0.0
        } else if (x - 1.0).abs() < 1e-13 {
            1.0
        } else if (x + 1.0).abs() < 1e-13 {
            -1.0
        } else {
            x
        }
    });
    let gram = snapped.transpose() * &snapped;
    let defect = (gram - DMatrix::identity(snapped.ncols(), snapped.ncols())).amax();
    if defect <= tol::ORTHONORMALITY {
        snapped
    } else {
        basis
    }
}

/// An idempotent linear map E: X → X together with its range.
#[derive(Debug, Clone)]
pub struct Projection {
    map: LinearMap,
    range: Subspace,
}

impl Projection {
    /// Validates idempotency and that the range of the matrix matches the
    /// claimed subspace.
    pub fn new(map: LinearMap, range: Subspace) -> Result<Projection> {
        let n = map.domain().dim();
        if map.codomain().dim() != n {
            return Err(CoreError::dim("projection shape", n, map.codomain().dim()));
        }
        if range.ambient().dim() != n {
            return Err(CoreError::dim(
                "projection range ambient",
                n,
                range.ambient().dim(),
            ));
        }
        let e = map.matrix();
        let scale = 1.0 + e.norm() * e.norm();
        let idem = (e * e - e).norm();
        if idem > tol::IDEMPOTENCY * scale {
            return Err(CoreError::invalid(format!(
                "matrix is not idempotent (‖E² − E‖ = {idem:.3e})"
            )));
        }
        // Column span of E must be the claimed range.
        let col_span = Subspace::from_spanning(
            range.ambient(),
            &e.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>(),
        )?;
        if col_span.dim() != range.dim() || col_span.span_gap(&range) > tol::IDEMPOTENCY * scale {
            return Err(CoreError::invalid(
                "projection range does not match the claimed subspace",
            ));
        }
        Ok(Projection { map, range })
    }

    /// The projection with the given range whose kernel is `complement`.
    /// Requires the two subspaces to be complementary.
    pub fn onto_along(range: &Subspace, complement: &Subspace) -> Result<Projection> {
        let n = range.ambient().dim();
        if complement.ambient().dim() != n {
            return Err(CoreError::dim(
                "complement ambient",
                n,
                complement.ambient().dim(),
            ));
        }
        let k = range.dim();
        if k + complement.dim() != n {
            return Err(CoreError::invalid(format!(
                "subspace dimensions {k} + {} do not fill the ambient dimension {n}",
                complement.dim()
            )));
        }
        // W spans the orthogonal complement of the kernel; then
        // E = B (WᵀB)⁻¹ Wᵀ has range span(B) and kernel span(K).
        let kk = complement.basis();
        let perp = DMatrix::identity(n, n) - kk * kk.transpose();
        let svd = perp.svd(true, false);
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let mut w = DMatrix::zeros(n, k);
        let mut kept = 0;
        for i in 0..svd.singular_values.len() {
            if svd.singular_values[i] > 0.5 {
                w.set_column(kept, &u.column(i));
                kept += 1;
            }
        }
        if kept != k {
            return Err(CoreError::invalid(
                "complement basis is numerically degenerate",
            ));
        }
        let a = w.transpose() * range.basis();
        let lu = a.lu();
        let solved = lu.solve(&w.transpose());
        let Some(x) = solved else {
            return Err(CoreError::invalid(
                "subspaces are not complementary (intersection is nontrivial)",
            ));
        };
        let e = range.basis() * x;
        let map = LinearMap::new(range.ambient().clone(), range.ambient().clone(), e)?;
        Projection::new(map, range.clone())
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        self.map.matrix()
    }

    pub fn range(&self) -> &Subspace {
        &self.range
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        self.map.apply(v)
    }

    pub fn operator_norm(&self, cfg: &OptimizerConfig) -> Result<f64> {
        self.map.operator_norm(cfg)
    }
}

/// Outcome of the minimal-norm projection search.
#[derive(Debug, Clone)]
pub struct MinNormProjection {
    pub projection: Projection,
    pub norm: f64,
}

/// Searches over projections with the given range for one of small operator
/// norm.
///
/// The kernel is parametrized through the matrix W in
/// `E = B (WᵀB)⁻¹ Wᵀ`; the search starts from W = B (the orthogonal
/// projection, optimal for p = 2) plus random starts, refining each by
/// adaptive random perturbation. The result is the best projection found —
/// an upper bound witness, with no global-optimality claim for p ≠ 2.
pub fn min_norm_projection(sub: &Subspace, cfg: &OptimizerConfig) -> Result<MinNormProjection> {
    cfg.validate()?;
    let ambient = sub.ambient().clone();
    let (n, k) = (ambient.dim(), sub.dim());
    if k == 0 {
        return Err(CoreError::invalid("cannot project onto the zero subspace"));
    }
    let inner_cfg = OptimizerConfig {
        restarts: cfg.restarts.min(8),
        ..cfg.clone()
    };

    let build = |w: &DMatrix<f64>| -> Option<(Projection, f64)> {
        let a = w.transpose() * sub.basis();
        let x = a.lu().solve(&w.transpose())?;
        let e = sub.basis() * x;
        if e.iter().any(|v| !v.is_finite()) || e.norm() > 1e6 {
            return None;
        }
        let map = LinearMap::new(ambient.clone(), ambient.clone(), e).ok()?;
        let proj = Projection::new(map, sub.clone()).ok()?;
        let norm = proj.operator_norm(&inner_cfg).ok()?;
        Some((proj, norm))
    };

    let mut best = build(sub.basis()).ok_or_else(|| {
        CoreError::invalid("orthogonal start failed; subspace basis is degenerate")
    })?;

    let starts = 1 + cfg.restarts / 8;
    let mut rng = cfg.rng(23);
    for start in 0..starts {
        let mut w = if start == 0 {
            sub.basis().clone()
        } else {
            let g = DMatrix::from_fn(n, k, |_, _| {
                use rand::Rng;
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            sub.basis() + g
        };
        let mut current = match build(&w) {
            Some(c) => c,
            None => continue,
        };
        // Adaptive random search: grow the step on success, shrink on failure.
        let mut sigma = 0.3;
        let mut stale = 0;
        while stale < 40 && sigma > 1e-6 {
            if current.1 <= 1.0 + 1e-9 {
                break; // a nonzero projection can do no better
            }
            let g = DMatrix::from_fn(n, k, |_, _| {
                use rand::Rng;
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            let cand_w = &w + g * sigma;
            if let Some(cand) = build(&cand_w) {
                if cand.1 < current.1 - 1e-12 {
                    current = cand;
                    w = cand_w;
                    sigma *= 1.3;
                    stale = 0;
                    continue;
                }
            }
            sigma *= 0.8;
            stale += 1;
        }
        if current.1 < best.1 {
            best = current;
        }
    }

    Ok(MinNormProjection {
        projection: best.0,
        norm: best.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lp(dim: usize, p: f64) -> NormedSpace {
        NormedSpace::lp(dim, PExp::new(p).unwrap()).unwrap()
    }

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::from_vec(vec![a, b])
    }

    #[test]
    fn lp_norms_match_hand_values() {
        let v = vec2(3.0, 4.0);
        assert_eq!(lp(2, 2.0).norm(&v).unwrap(), 5.0);
        assert_eq!(lp(2, 1.0).norm(&vec2(1.0, -1.0)).unwrap(), 2.0);
        assert_eq!(
            lp(2, f64::INFINITY).norm(&vec2(0.5, -2.0)).unwrap(),
            2.0
        );
    }

    #[test]
    fn general_p_norm_is_scale_robust() {
        let space = lp(2, 3.0);
        let v = vec2(1e200, 1e200);
        let n = space.norm(&v).unwrap();
        assert!(n.is_finite());
        assert_abs_diff_eq!(n / 1e200, 2.0f64.powf(1.0 / 3.0), epsilon = 1e-12);
    }

    #[test]
    fn dual_norms_swap_exponents() {
        assert_eq!(lp(2, 1.0).dual_norm(&vec2(1.0, -1.0)).unwrap(), 1.0);
        assert_eq!(lp(2, 2.0).dual_norm(&vec2(3.0, 4.0)).unwrap(), 5.0);
        assert_eq!(
            lp(2, f64::INFINITY).dual_norm(&vec2(1.0, 1.0)).unwrap(),
            2.0
        );
    }

    #[test]
    fn norm_rejects_wrong_dimension() {
        let err = lp(2, 2.0).norm(&Vector::from_vec(vec![1.0])).unwrap_err();
        assert!(matches!(err, CoreError::DimensionMismatch { .. }));
    }

    #[test]
    fn spanning_set_is_orthonormalized_with_canonical_signs() {
        let space = lp(2, 2.0);
        let sub = Subspace::from_spanning(&space, &[vec2(0.0, 2.0)]).unwrap();
        assert_eq!(sub.dim(), 1);
        assert_eq!(sub.basis()[(0, 0)], 0.0);
        assert_eq!(sub.basis()[(1, 0)], 1.0);
    }

    #[test]
    fn orthonormal_spanning_sets_are_adopted_verbatim() {
        // A stored basis fed back through from_spanning must come out
        // bit-identical — no sign canonicalization, no SVD jitter — or
        // coefficients recorded against the original frame change meaning.
        let space = lp(3, 2.0);
        let c = 0.3f64.cos();
        let s = 0.3f64.sin();
        let v1 = Vector::from_vec(vec![c, -s, 0.0]);
        let v2 = Vector::from_vec(vec![s, c, 0.0]);
        let sub = Subspace::from_spanning(&space, &[v1.clone(), v2.clone()]).unwrap();
        assert_eq!(sub.dim(), 2);
        for i in 0..3 {
            assert_eq!(sub.basis()[(i, 0)], v1[i]);
            assert_eq!(sub.basis()[(i, 1)], v2[i]);
        }
        // A dominant negative entry stays negative; the canonical-sign path
        // would have flipped it.
        let flipped = Subspace::from_spanning(&lp(2, 2.0), &[vec2(-1.0, 0.0)]).unwrap();
        assert_eq!(flipped.basis()[(0, 0)], -1.0);
    }

    #[test]
    fn dependent_spanning_vectors_collapse() {
        let space = lp(3, 2.0);
        let v1 = Vector::from_vec(vec![1.0, 0.0, 0.0]);
        let v2 = Vector::from_vec(vec![2.0, 0.0, 0.0]);
        let sub = Subspace::from_spanning(&space, &[v1, v2]).unwrap();
        assert_eq!(sub.dim(), 1);
        assert_eq!(sub.basis()[(0, 0)], 1.0);
    }

    #[test]
    fn zero_spanning_set_is_rejected() {
        let space = lp(2, 2.0);
        let err = Subspace::from_spanning(&space, &[vec2(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, CoreError::InvalidInput(_)));
    }

    #[test]
    fn coords_round_trip_and_reject_outsiders() {
        let space = lp(2, 2.0);
        let sub = Subspace::from_spanning(&space, &[vec2(1.0, 1.0)]).unwrap();
        let v = vec2(3.0, 3.0);
        let c = sub.coords(&v).unwrap();
        assert_abs_diff_eq!((sub.embed(&c).unwrap() - v).norm(), 0.0, epsilon = 1e-12);
        assert!(sub.coords(&vec2(1.0, 0.0)).is_err());
    }

    #[test]
    fn orthogonal_projection_of_axis_is_coordinate_projection() {
        let space = lp(2, 2.0);
        let sub = Subspace::from_spanning(&space, &[vec2(0.0, 1.0)]).unwrap();
        let proj = sub.orthogonal_projection().unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        assert_abs_diff_eq!((proj.matrix() - expected).amax(), 0.0, epsilon = 1e-14);
        let norm = proj.operator_norm(&OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn orthogonal_projection_requires_l2() {
        let space = lp(2, 1.0);
        let sub = Subspace::from_spanning(&space, &[vec2(0.0, 1.0)]).unwrap();
        assert!(matches!(
            sub.orthogonal_projection().unwrap_err(),
            CoreError::Unsupported(_)
        ));
    }

    #[test]
    fn oblique_projection_matches_hand_formula() {
        // Range span{(0,1)}, kernel span{(1,−1)}: E(x₁,x₂) = (0, x₁ + x₂).
        let space = lp(2, 2.0);
        let range = Subspace::from_spanning(&space, &[vec2(0.0, 1.0)]).unwrap();
        let kernel = Subspace::from_spanning(&space, &[vec2(1.0, -1.0)]).unwrap();
        let proj = Projection::onto_along(&range, &kernel).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 1.0]);
        assert_abs_diff_eq!((proj.matrix() - expected).amax(), 0.0, epsilon = 1e-10);
        let norm = proj.operator_norm(&OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(norm, 2.0f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn non_complementary_pair_is_rejected() {
        let space = lp(2, 2.0);
        let range = Subspace::from_spanning(&space, &[vec2(1.0, 0.0)]).unwrap();
        let same = Subspace::from_spanning(&space, &[vec2(1.0, 0.0)]).unwrap();
        assert!(Projection::onto_along(&range, &same).is_err());
    }

    #[test]
    fn whole_space_projection_is_identity() {
        let space = lp(3, 2.0);
        let sub = Subspace::whole(&space);
        let proj = sub.orthogonal_projection().unwrap();
        assert!(proj.matrix().is_identity(1e-14));
    }

    #[test]
    fn projection_validation_rejects_non_idempotent_matrices() {
        let space = lp(2, 2.0);
        let sub = Subspace::from_spanning(&space, &[vec2(1.0, 0.0)]).unwrap();
        let bogus = LinearMap::new(
            space.clone(),
            space.clone(),
            DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]),
        )
        .unwrap();
        assert!(Projection::new(bogus, sub).is_err());
    }

    #[test]
    fn identity_operator_norm_is_one() {
        for p in [1.0, 2.0, f64::INFINITY] {
            let space = lp(3, p);
            let id = LinearMap::identity(space);
            let norm = id.operator_norm(&OptimizerConfig::default()).unwrap();
            assert_eq!(norm, 1.0);
        }
        let space = lp(3, 1.5);
        let id = LinearMap::identity(space);
        let norm = id.operator_norm(&OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn min_norm_projection_is_orthogonal_in_l2() {
        let space = lp(2, 2.0);
        let sub = Subspace::from_spanning(&space, &[vec2(0.0, 1.0)]).unwrap();
        let found = min_norm_projection(&sub, &OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(found.norm, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn coordinate_subspace_in_linf_keeps_norm_one() {
        let space = lp(2, f64::INFINITY);
        let sub = Subspace::from_spanning(&space, &[vec2(1.0, 0.0)]).unwrap();
        let found = min_norm_projection(&sub, &OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(found.norm, 1.0, epsilon = 1e-9);
    }
}
