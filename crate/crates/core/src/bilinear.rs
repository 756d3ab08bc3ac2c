//! Bilinear maps between normed spaces and their norms.
//!
//! A bilinear map φ: X × Y → Z is stored through its coefficient tensor in
//! the standard bases: `coeffs[k][(i, j)]` is the k-th output coordinate of
//! φ(eᵢ, eⱼ). The norm is
//!
//! ```text
//! ‖φ‖ = sup { ‖φ(x, y)‖_Z : ‖x‖_X ≤ 1, ‖y‖_Y ≤ 1 },
//! ```
//!
//! equivalently the supremum of Σ_k ω_k xᵀ C_k y over the two unit balls and
//! the dual ball of Z. The computation walks those three blocks with exact
//! support steps; when Z is one-dimensional it reduces to a two-block form
//! supremum, and whenever one of the three balls is a polytope with an
//! enumerable vertex set the whole supremum is resolved exactly by solving a
//! two-block problem per vertex.
//!
//! [`BilinearMap::curry`] turns φ into the linear map x ↦ φ(x, ·) from X
//! into operators Y → Z; the correspondence is isometric, and
//! [`CurriedMap::operator_norm`] recomputes the norm through that route
//! (an outer ascent over the X ball around a fully converged inner operator
//! norm) rather than reusing the three-block walk.

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::optim::{self, BallOracle, OptimizerConfig};
use crate::space::{LinearMap, NormedSpace, Vector};

/// A bilinear map φ: X × Y → Z with dense coefficients.
#[derive(Debug, Clone)]
pub struct BilinearMap {
    x: NormedSpace,
    y: NormedSpace,
    z: NormedSpace,
    /// One X-dim × Y-dim matrix per output coordinate.
    coeffs: Vec<DMatrix<f64>>,
}

/// Best value found for ‖φ‖ together with a witness pair attaining it.
#[derive(Debug, Clone)]
pub struct BilinearNormReport {
    /// Certified lower bound for the norm (exact when `exact` is set).
    pub value: f64,
    /// Witness x on the unit ball of X with ‖φ(x, y)‖ = `value`.
    pub x: Vector,
    /// Witness y on the unit ball of Y.
    pub y: Vector,
    /// Whether an exhaustive route settled the supremum.
    pub exact: bool,
}

impl BilinearMap {
    pub fn new(
        x: NormedSpace,
        y: NormedSpace,
        z: NormedSpace,
        coeffs: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        if coeffs.len() != z.dim() {
            return Err(CoreError::dim(
                "coefficient matrices per output coordinate",
                z.dim(),
                coeffs.len(),
            ));
        }
        for c in &coeffs {
            if c.nrows() != x.dim() {
                return Err(CoreError::dim("coefficient rows", x.dim(), c.nrows()));
            }
            if c.ncols() != y.dim() {
                return Err(CoreError::dim("coefficient columns", y.dim(), c.ncols()));
            }
        }
        Ok(BilinearMap { x, y, z, coeffs })
    }

    /// Scalar-valued form φ(x, y) = xᵀ A y into the one-dimensional space.
    pub fn scalar_form(x: NormedSpace, y: NormedSpace, a: DMatrix<f64>) -> Result<Self> {
        BilinearMap::new(x, y, NormedSpace::l2(1), vec![a])
    }

    /// The map φ(u, v) = ⟨f, u⟩ ⟨g, v⟩ · target.
    pub fn rank_one(
        x: NormedSpace,
        y: NormedSpace,
        z: NormedSpace,
        f: &Vector,
        g: &Vector,
        target: &Vector,
    ) -> Result<Self> {
        if f.len() != x.dim() {
            return Err(CoreError::dim("rank-one left functional", x.dim(), f.len()));
        }
        if g.len() != y.dim() {
            return Err(CoreError::dim("rank-one right functional", y.dim(), g.len()));
        }
        if target.len() != z.dim() {
            return Err(CoreError::dim("rank-one target", z.dim(), target.len()));
        }
        let outer = f * g.transpose();
        let coeffs = (0..z.dim()).map(|k| &outer * target[k]).collect();
        BilinearMap::new(x, y, z, coeffs)
    }

    pub fn x(&self) -> &NormedSpace {
        &self.x
    }

    pub fn y(&self) -> &NormedSpace {
        &self.y
    }

    pub fn z(&self) -> &NormedSpace {
        &self.z
    }

    pub fn coeffs(&self) -> &[DMatrix<f64>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.amax() == 0.0)
    }

    pub fn eval(&self, xv: &Vector, yv: &Vector) -> Result<Vector> {
        if xv.len() != self.x.dim() {
            return Err(CoreError::dim("left argument", self.x.dim(), xv.len()));
        }
        if yv.len() != self.y.dim() {
            return Err(CoreError::dim("right argument", self.y.dim(), yv.len()));
        }
        Ok(self.eval_unchecked(xv, yv))
    }

    fn eval_unchecked(&self, xv: &Vector, yv: &Vector) -> Vector {
        DVector::from_iterator(
            self.coeffs.len(),
            self.coeffs.iter().map(|c| xv.dot(&(c * yv))),
        )
    }

    fn output_norm(&self, xv: &Vector, yv: &Vector) -> f64 {
        self.z
            .norm(&self.eval_unchecked(xv, yv))
            .expect("output dimension is consistent by construction")
    }

    /// Matrix of the partial map y ↦ φ(x, y), with one row per output
    /// coordinate.
    fn section_x_matrix(&self, xv: &Vector) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.z.dim(), self.y.dim());
        for (k, c) in self.coeffs.iter().enumerate() {
            m.set_row(k, &(c.transpose() * xv).transpose());
        }
        m
    }

    /// Matrix of the partial map x ↦ φ(x, y).
    fn section_y_matrix(&self, yv: &Vector) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.z.dim(), self.x.dim());
        for (k, c) in self.coeffs.iter().enumerate() {
            m.set_row(k, &(c * yv).transpose());
        }
        m
    }

    /// The linear map y ↦ φ(x, y).
    pub fn section_x(&self, xv: &Vector) -> Result<LinearMap> {
        if xv.len() != self.x.dim() {
            return Err(CoreError::dim("section point", self.x.dim(), xv.len()));
        }
        LinearMap::new(self.y.clone(), self.z.clone(), self.section_x_matrix(xv))
    }

    /// The linear map x ↦ φ(x, y).
    pub fn section_y(&self, yv: &Vector) -> Result<LinearMap> {
        if yv.len() != self.y.dim() {
            return Err(CoreError::dim("section point", self.y.dim(), yv.len()));
        }
        LinearMap::new(self.x.clone(), self.z.clone(), self.section_y_matrix(yv))
    }

    /// The pullback φ(A_x ·, A_y ·) as a bilinear map on new spaces; used for
    /// restriction to subspaces and for extension along projections.
    pub(crate) fn precompose(
        &self,
        new_x: NormedSpace,
        new_y: NormedSpace,
        a_x: &DMatrix<f64>,
        a_y: &DMatrix<f64>,
    ) -> Result<BilinearMap> {
        if a_x.nrows() != self.x.dim() || a_x.ncols() != new_x.dim() {
            return Err(CoreError::dim("left pullback rows", self.x.dim(), a_x.nrows()));
        }
        if a_y.nrows() != self.y.dim() || a_y.ncols() != new_y.dim() {
            return Err(CoreError::dim("right pullback rows", self.y.dim(), a_y.nrows()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| a_x.transpose() * c * a_y)
            .collect();
        BilinearMap::new(new_x, new_y, self.z.clone(), coeffs)
    }

    /// ‖φ‖ as a plain number; see [`BilinearMap::norm_report`].
    pub fn norm(&self, cfg: &OptimizerConfig) -> Result<f64> {
        self.norm_report(cfg).map(|r| r.value)
    }

    /// Computes ‖φ‖ with a maximizing pair.
    pub fn norm_report(&self, cfg: &OptimizerConfig) -> Result<BilinearNormReport> {
        self.norm_seeded(cfg, 31, &[])
    }

    /// As [`BilinearMap::norm_report`], with extra ascent starts. Each seed
    /// pair is normalized onto the unit balls and evaluated outright before
    /// any iteration, so the result is never below the seed's own value.
    pub(crate) fn norm_seeded(
        &self,
        cfg: &OptimizerConfig,
        salt: u64,
        seeds: &[(Vector, Vector)],
    ) -> Result<BilinearNormReport> {
        cfg.validate()?;
        let (nx, ny) = (self.x.dim(), self.y.dim());
        let mut best = BilinearNormReport {
            value: 0.0,
            x: DVector::zeros(nx),
            y: DVector::zeros(ny),
            exact: false,
        };
        if self.is_zero() {
            best.exact = true;
            return Ok(best);
        }

        fn improve(best: &mut BilinearNormReport, value: f64, x: &Vector, y: &Vector) {
            if value > best.value {
                best.value = value;
                best.x = x.clone();
                best.y = y.clone();
            }
        }

        // Feasible seed pairs give unconditional floors for the result.
        let mut ascent_seeds: Vec<(Vector, Vector)> = Vec::new();
        for (sx, sy) in seeds {
            if sx.len() != nx || sy.len() != ny {
                continue;
            }
            let (snx, sny) = (self.x.norm(sx)?, self.y.norm(sy)?);
            if snx <= 0.0 || sny <= 0.0 {
                continue;
            }
            let (ux, uy) = (sx / snx, sy / sny);
            improve(&mut best, self.output_norm(&ux, &uy), &ux, &uy);
            ascent_seeds.push((ux, uy));
        }

        // One-dimensional codomain: the norm is a two-block form supremum.
        if self.z.dim() == 1 {
            let unit = self.z.norm(&DVector::from_element(1, 1.0))?;
            let x_ball = BallOracle::for_space(&self.x);
            let y_ball = BallOracle::for_space(&self.y);
            let y_seeds: Vec<Vector> = ascent_seeds.iter().map(|(_, y)| y.clone()).collect();
            let r = optim::form_sup(&self.coeffs[0], &x_ball, &y_ball, cfg, salt, &y_seeds)?;
            improve(&mut best, r.value * unit, &r.u, &r.v);
            best.exact = r.exact;
            return Ok(best);
        }

        let x_ball = BallOracle::for_space(&self.x);
        let y_ball = BallOracle::for_space(&self.y);
        let w_ball = BallOracle::for_dual(&self.z);

        // The objective is convex in each block, so fixing any block at its
        // ball's vertices and solving the remaining two-block problem exactly
        // resolves the supremum. Enumerate the cheapest such block.
        #[derive(Clone, Copy)]
        enum Side {
            X,
            Y,
            W,
        }
        let mut enumerable: Option<(Side, usize)> = None;
        for (side, oracle) in [(Side::X, &x_ball), (Side::Y, &y_ball), (Side::W, &w_ball)] {
            if let Some(reps) = oracle.vertex_reps() {
                if enumerable.map_or(true, |(_, n)| reps.len() < n) {
                    enumerable = Some((side, reps.len()));
                }
            }
        }
        let mut any_trust = false;
        if let Some((side, _)) = enumerable {
            let mut all_exact = true;
            let reps = match side {
                Side::X => x_ball.vertex_reps().unwrap(),
                Side::Y => y_ball.vertex_reps().unwrap(),
                Side::W => w_ball.vertex_reps().unwrap(),
            };
            for (i, rep) in reps.iter().enumerate() {
                let inner_salt = optim::mix_seed(salt, 1_000 + i as u64);
                let inner = match side {
                    Side::X => {
                        let m = self.section_x_matrix(rep);
                        optim::form_sup(&m, &w_ball, &y_ball, cfg, inner_salt, &[])
                    }
                    Side::Y => {
                        let m = self.section_y_matrix(rep);
                        optim::form_sup(&m, &w_ball, &x_ball, cfg, inner_salt, &[])
                    }
                    Side::W => {
                        let mut a = DMatrix::zeros(nx, ny);
                        for (k, c) in self.coeffs.iter().enumerate() {
                            a += c * rep[k];
                        }
                        optim::form_sup(&a, &x_ball, &y_ball, cfg, inner_salt, &[])
                    }
                };
                match inner {
                    Ok(r) => {
                        all_exact &= r.exact;
                        any_trust = true;
                        match side {
                            Side::X => improve(&mut best, r.value, rep, &r.v),
                            Side::Y => improve(&mut best, r.value, &r.v, rep),
                            Side::W => improve(&mut best, r.value, &r.u, &r.v),
                        }
                    }
                    Err(CoreError::NonConvergence { .. }) => all_exact = false,
                    Err(e) => return Err(e),
                }
            }
            if all_exact {
                best.exact = true;
                return Ok(best);
            }
        }

        // Three-block ascent: dual-of-Z step, then X, then Y, each an exact
        // (or safeguarded) support query; the recorded value is always the
        // true output norm at the current feasible pair.
        let mut rng = cfg.rng(salt);
        for start in 0..cfg.restarts.max(ascent_seeds.len()) {
            let (mut xv, mut yv) = if start < ascent_seeds.len() {
                ascent_seeds[start].clone()
            } else {
                (
                    x_ball.random_point(&mut rng),
                    y_ball.random_point(&mut rng),
                )
            };
            if xv.amax() == 0.0 || yv.amax() == 0.0 {
                continue;
            }
            let mut value = self.output_norm(&xv, &yv);
            improve(&mut best, value, &xv, &yv);
            for _ in 0..cfg.max_iters {
                let w = self.eval_unchecked(&xv, &yv);
                let (_, omega) = w_ball.support(&w);
                let mut a = DMatrix::zeros(nx, ny);
                for (k, c) in self.coeffs.iter().enumerate() {
                    a += c * omega[k];
                }
                let (_, x_new) = x_ball.support(&(&a * &yv));
                let (_, y_new) = y_ball.support(&(a.transpose() * &x_new));
                let cand = self.output_norm(&x_new, &y_new);
                let prev = value;
                if cand >= value {
                    value = cand;
                    xv = x_new;
                    yv = y_new;
                    improve(&mut best, value, &xv, &yv);
                }
                if value - prev <= cfg.tol * value.abs().max(1.0) {
                    any_trust = true;
                    break;
                }
            }
        }

        if !any_trust {
            return Err(CoreError::NonConvergence { best: best.value });
        }
        Ok(best)
    }

    /// The linear map x ↦ φ(x, ·) into operators Y → Z.
    pub fn curry(&self) -> CurriedMap {
        let images = (0..self.x.dim())
            .map(|i| {
                DMatrix::from_fn(self.z.dim(), self.y.dim(), |k, j| self.coeffs[k][(i, j)])
            })
            .collect();
        CurriedMap {
            x: self.x.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
            images,
        }
    }
}

/// A linear map from X into the operators Y → Z, stored through the images
/// of the standard basis vectors of X.
#[derive(Debug, Clone)]
pub struct CurriedMap {
    x: NormedSpace,
    y: NormedSpace,
    z: NormedSpace,
    /// `images[i]` is the matrix of the operator assigned to eᵢ.
    images: Vec<DMatrix<f64>>,
}

impl CurriedMap {
    pub fn x(&self) -> &NormedSpace {
        &self.x
    }

    pub fn y(&self) -> &NormedSpace {
        &self.y
    }

    pub fn z(&self) -> &NormedSpace {
        &self.z
    }

    pub fn basis_image(&self, i: usize) -> &DMatrix<f64> {
        &self.images[i]
    }

    fn matrix_at(&self, xv: &Vector) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.z.dim(), self.y.dim());
        for (i, img) in self.images.iter().enumerate() {
            m += img * xv[i];
        }
        m
    }

    /// The operator Y → Z assigned to the point x.
    pub fn apply(&self, xv: &Vector) -> Result<LinearMap> {
        if xv.len() != self.x.dim() {
            return Err(CoreError::dim("curried argument", self.x.dim(), xv.len()));
        }
        LinearMap::new(self.y.clone(), self.z.clone(), self.matrix_at(xv))
    }

    /// Reassembles the bilinear map φ(x, y) = (apply x)(y).
    pub fn uncurry(&self) -> BilinearMap {
        let coeffs = (0..self.z.dim())
            .map(|k| {
                DMatrix::from_fn(self.x.dim(), self.y.dim(), |i, j| self.images[i][(k, j)])
            })
            .collect();
        BilinearMap {
            x: self.x.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
            coeffs,
        }
    }

    /// `sup { ‖apply(x)‖_{Y→Z} : ‖x‖_X ≤ 1 }`.
    ///
    /// Computed as an outer ascent over the X ball with the inner operator
    /// norm fully converged at every step; when the X ball has an enumerable
    /// vertex set the outer supremum is resolved exactly.
    pub fn operator_norm(&self, cfg: &OptimizerConfig) -> Result<f64> {
        cfg.validate()?;
        if self.images.iter().all(|m| m.amax() == 0.0) {
            return Ok(0.0);
        }
        let salt = 41;
        let x_ball = BallOracle::for_space(&self.x);
        let w_ball = BallOracle::for_dual(&self.z);
        let y_ball = BallOracle::for_space(&self.y);
        let inner = |xv: &Vector, seeds: &[Vector], inner_salt: u64| {
            optim::form_sup(&self.matrix_at(xv), &w_ball, &y_ball, cfg, inner_salt, seeds)
        };

        let mut best = 0.0f64;

        if let Some(reps) = x_ball.vertex_reps() {
            let mut all_exact = true;
            for (i, rep) in reps.iter().enumerate() {
                match inner(rep, &[], optim::mix_seed(salt, 1_000 + i as u64)) {
                    Ok(r) => {
                        all_exact &= r.exact;
                        best = best.max(r.value);
                    }
                    Err(CoreError::NonConvergence { .. }) => all_exact = false,
                    Err(e) => return Err(e),
                }
            }
            if all_exact {
                return Ok(best);
            }
        }

        let mut rng = cfg.rng(salt);
        let mut any_trust = false;
        'starts: for start in 0..cfg.restarts {
            let xv = x_ball.random_point(&mut rng);
            if xv.amax() == 0.0 {
                continue;
            }
            let start_salt = (start as u64) << 32;
            let mut state = match inner(&xv, &[], optim::mix_seed(salt, start_salt)) {
                Ok(r) => (xv, r),
                Err(CoreError::NonConvergence { .. }) => continue,
                Err(e) => return Err(e),
            };
            best = best.max(state.1.value);
            for it in 0..cfg.max_iters {
                // Subgradient of x ↦ ‖apply(x)‖ at the inner maximizer.
                let g = DVector::from_fn(self.x.dim(), |i, _| {
                    state.1.u.dot(&(&self.images[i] * &state.1.v))
                });
                let (_, x_new) = x_ball.support(&g);
                let r_new = match inner(
                    &x_new,
                    &[state.1.v.clone()],
                    optim::mix_seed(salt, start_salt | (it as u64 + 1)),
                ) {
                    Ok(r) => r,
                    Err(CoreError::NonConvergence { .. }) => continue 'starts,
                    Err(e) => return Err(e),
                };
                let prev = state.1.value;
                if r_new.value >= state.1.value {
                    state = (x_new, r_new);
                    best = best.max(state.1.value);
                }
                if state.1.value - prev <= cfg.tol * state.1.value.abs().max(1.0) {
                    any_trust = true;
                    break;
                }
            }
        }
        if !any_trust {
            return Err(CoreError::NonConvergence { best });
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::PExp;
    use approx::assert_abs_diff_eq;

    fn lp(dim: usize, p: f64) -> NormedSpace {
        NormedSpace::lp(dim, PExp::new(p).unwrap()).unwrap()
    }

    fn v(entries: &[f64]) -> Vector {
        Vector::from_column_slice(entries)
    }

    /// φ(x, y) = (x₁y₁, x₂y₂) as a map into the given two-dimensional space.
    fn diagonal_pairing(px: f64, py: f64, pz: f64) -> BilinearMap {
        let c0 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let c1 = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        BilinearMap::new(lp(2, px), lp(2, py), lp(2, pz), vec![c0, c1]).unwrap()
    }

    #[test]
    fn eval_matches_rank_one_product() {
        let f = v(&[1.0, 2.0]);
        let g = v(&[3.0, -1.0, 0.5]);
        let target = v(&[2.0, -4.0]);
        let phi =
            BilinearMap::rank_one(lp(2, 2.0), lp(3, 2.0), lp(2, 2.0), &f, &g, &target).unwrap();
        let xv = v(&[0.5, -1.5]);
        let yv = v(&[1.0, 1.0, 2.0]);
        let expected = &target * (f.dot(&xv) * g.dot(&yv));
        assert_abs_diff_eq!((phi.eval(&xv, &yv).unwrap() - expected).amax(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn dot_form_on_l2_pair_has_norm_one() {
        let phi = BilinearMap::scalar_form(lp(2, 2.0), lp(2, 2.0), DMatrix::identity(2, 2)).unwrap();
        let r = phi.norm_report(&OptimizerConfig::default()).unwrap();
        assert!(r.exact);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
        // The witness pair reproduces the reported value.
        let out = phi.eval(&r.x, &r.y).unwrap();
        assert_abs_diff_eq!(out[0].abs(), r.value, epsilon = 1e-12);
    }

    #[test]
    fn dot_form_on_linf_pair_has_norm_two() {
        let phi = BilinearMap::scalar_form(
            lp(2, f64::INFINITY),
            lp(2, f64::INFINITY),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        let r = phi.norm_report(&OptimizerConfig::default()).unwrap();
        assert!(r.exact);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn scalar_form_on_l1_pair_is_largest_entry() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -3.0, 2.0, 0.5]);
        let phi = BilinearMap::scalar_form(lp(2, 1.0), lp(2, 1.0), a).unwrap();
        let r = phi.norm_report(&OptimizerConfig::default()).unwrap();
        assert!(r.exact);
        assert_abs_diff_eq!(r.value, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_pairing_on_euclidean_spaces_has_norm_one() {
        let phi = diagonal_pairing(2.0, 2.0, 2.0);
        let norm = phi.norm(&OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn diagonal_pairing_into_l1_on_linf_doubles() {
        let phi = diagonal_pairing(f64::INFINITY, f64::INFINITY, 1.0);
        let r = phi.norm_report(&OptimizerConfig::default()).unwrap();
        assert!(r.exact);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_pairing_into_linf_on_linf_stays_one() {
        let phi = diagonal_pairing(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let r = phi.norm_report(&OptimizerConfig::default()).unwrap();
        assert!(r.exact);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_map_has_exact_zero_norm() {
        let phi = BilinearMap::new(
            lp(2, 1.0),
            lp(2, 3.0),
            lp(2, 2.0),
            vec![DMatrix::zeros(2, 2), DMatrix::zeros(2, 2)],
        )
        .unwrap();
        let r = phi.norm_report(&OptimizerConfig::default()).unwrap();
        assert!(r.exact);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn seed_pairs_floor_the_reported_value() {
        let phi = diagonal_pairing(2.0, 2.0, 2.0);
        let tight = OptimizerConfig {
            restarts: 1,
            max_iters: 1,
            ..OptimizerConfig::default()
        };
        let seed = (v(&[5.0, 0.0]), v(&[3.0, 0.0])); // normalizes to (e₁, e₁)
        let r = phi.norm_seeded(&tight, 7, &[seed]).unwrap();
        assert!(r.value >= 1.0 - 1e-12);
    }

    #[test]
    fn eval_rejects_wrong_dimensions() {
        let phi = diagonal_pairing(2.0, 2.0, 2.0);
        assert!(phi.eval(&v(&[1.0]), &v(&[1.0, 0.0])).is_err());
        assert!(phi.eval(&v(&[1.0, 0.0]), &v(&[1.0])).is_err());
    }

    #[test]
    fn coefficient_count_must_match_output_dimension() {
        let err = BilinearMap::new(
            lp(2, 2.0),
            lp(2, 2.0),
            lp(2, 2.0),
            vec![DMatrix::zeros(2, 2)],
        )
        .unwrap_err();
        assert!(matches!(err, CoreError::DimensionMismatch { .. }));
    }

    #[test]
    fn sections_agree_with_eval() {
        let phi = diagonal_pairing(2.0, 2.0, 2.0);
        let xv = v(&[2.0, -1.0]);
        let yv = v(&[0.5, 3.0]);
        let through_x = phi.section_x(&xv).unwrap().apply(&yv).unwrap();
        let through_y = phi.section_y(&yv).unwrap().apply(&xv).unwrap();
        let direct = phi.eval(&xv, &yv).unwrap();
        assert_abs_diff_eq!((&through_x - &direct).amax(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((&through_y - &direct).amax(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn curry_apply_matches_partial_evaluation() {
        let phi = diagonal_pairing(2.0, 1.0, f64::INFINITY);
        let xv = v(&[0.3, -0.8]);
        let yv = v(&[1.2, 0.7]);
        let op = phi.curry().apply(&xv).unwrap();
        let direct = phi.eval(&xv, &yv).unwrap();
        assert_abs_diff_eq!(
            (op.apply(&yv).unwrap() - direct).amax(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn curry_uncurry_round_trip_is_bit_exact() {
        let c0 = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let c1 = DMatrix::from_row_slice(2, 3, &[-1.0, 0.5, 0.0, 7.0, -2.0, 1.5]);
        let phi = BilinearMap::new(lp(2, 1.0), lp(3, 2.0), lp(2, f64::INFINITY), vec![c0, c1])
            .unwrap();
        let back = phi.curry().uncurry();
        for (a, b) in phi.coeffs().iter().zip(back.coeffs()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn curried_norm_matches_three_block_norm_on_polytope_example() {
        let phi = diagonal_pairing(f64::INFINITY, f64::INFINITY, 1.0);
        let direct = phi.norm(&OptimizerConfig::default()).unwrap();
        let curried = phi.curry().operator_norm(&OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(direct, curried, epsilon = 1e-12);
    }

    #[test]
    fn curried_norm_matches_on_euclidean_example() {
        let phi = diagonal_pairing(2.0, 2.0, 2.0);
        let direct = phi.norm(&OptimizerConfig::default()).unwrap();
        let curried = phi.curry().operator_norm(&OptimizerConfig::default()).unwrap();
        assert_abs_diff_eq!(direct, curried, epsilon = 1e-8);
    }

    #[test]
    fn precompose_threads_coefficients_through_both_arguments() {
        let phi = diagonal_pairing(2.0, 2.0, 2.0);
        let a_x = DMatrix::from_row_slice(2, 1, &[0.0, 1.0]);
        let a_y = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let pulled = phi
            .precompose(lp(1, 2.0), lp(2, 2.0), &a_x, &a_y)
            .unwrap();
        let u = v(&[2.0]);
        let w = v(&[3.0, 4.0]);
        let expected = phi.eval(&(&a_x * &u), &(&a_y * &w)).unwrap();
        assert_abs_diff_eq!(
            (pulled.eval(&u, &w).unwrap() - expected).amax(),
            0.0,
            epsilon = 1e-12
        );
    }
}
