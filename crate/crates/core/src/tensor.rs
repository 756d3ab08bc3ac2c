//! Elements of X ⊗ Y and the two extreme crossnorms.
//!
//! A tensor element is a finite sum Σᵢ xᵢ ⊗ yᵢ, identified with its
//! coefficient matrix C = Σᵢ xᵢyᵢᵀ — two elements are equal exactly when
//! their coefficient matrices are equal, decompositions being non-unique.
//!
//! Two norms are computed:
//!
//! * **injective**: ε(Ϝ) = sup { |fᵀ C g| : ‖f‖_X* ≤ 1, ‖g‖_Y* ≤ 1 }, a
//!   two-ball form supremum over the dual balls (the largest singular value
//!   of C when both factors are Euclidean);
//! * **projective**: π(Ϝ) = inf { Σᵢ ‖xᵢ‖ ‖yᵢ‖ : C = Σᵢ xᵢyᵢᵀ }, bracketed
//!   from above by a feasibility-preserving decomposition search and from
//!   below by its dual expression sup { |⟨A, C⟩_F| : ν(A) ≤ 1 } over
//!   bilinear forms of norm at most one. When both factors are Euclidean the
//!   two sides meet at the nuclear norm of C.
//!
//! Every reported bound comes from a feasible object (a decomposition, or a
//! form with a certified norm bound), so upper bounds are true upper bounds
//! and lower bounds true lower bounds regardless of optimizer quality; the
//! `certified` flag only records whether they pinch.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bilinear::BilinearMap;
use crate::error::{CoreError, Result};
use crate::optim::{self, BallOracle, OptimizerConfig};
use crate::space::{NormedSpace, Subspace, Vector};
use crate::tol;

/// An element of X ⊗ Y, stored as a decomposition plus its coefficient
/// matrix (always in sync).
#[derive(Debug, Clone)]
pub struct TensorElement {
    x: NormedSpace,
    y: NormedSpace,
    terms: Vec<(Vector, Vector)>,
    coeff_matrix: DMatrix<f64>,
}

/// ε(Ϝ) together with a maximizing dual pair.
#[derive(Debug, Clone)]
pub struct InjectiveReport {
    pub value: f64,
    /// Functional on X with dual norm ≤ 1.
    pub f: Vector,
    /// Functional on Y with dual norm ≤ 1.
    pub g: Vector,
    pub exact: bool,
}

/// An upper bound for π(Ϝ) with the decomposition attaining it.
#[derive(Debug, Clone)]
pub struct ProjectiveUpperReport {
    pub value: f64,
    /// Decomposition with Σ xᵢyᵢᵀ equal to the coefficient matrix.
    pub terms: Vec<(Vector, Vector)>,
}

/// A certified lower bound for π(Ϝ) via a bilinear form of norm ≤ 1.
#[derive(Debug, Clone)]
pub struct DualLowerReport {
    pub value: f64,
    /// Coefficient matrix of the certifying form (norm bounded by one).
    pub form: DMatrix<f64>,
    /// Whether the bound is known to equal π (Euclidean factors, or a
    /// rank-one element where ε and π coincide).
    pub exact: bool,
}

/// Both crossnorms with the bracketing data for the projective side.
#[derive(Debug, Clone, Serialize)]
pub struct CrossnormReport {
    pub injective: f64,
    pub projective_upper: f64,
    pub projective_dual_lower: f64,
    /// Relative width of the projective bracket.
    pub gap: f64,
    /// Whether the bracket pinches to the certification threshold.
    pub certified: bool,
    pub restarts_used: usize,
    pub seed: u64,
}

/// Outcome of the sampled isometric-embedding check.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingVerdict {
    /// All sampled elements had equal norms within the certification gap.
    pub is_isometric: bool,
    /// Worst relative difference seen across samples.
    pub worst_gap: f64,
    pub samples: usize,
}

/// Projective norms of one element measured in subspace coordinates (with
/// the inherited norm) and in the ambient spaces.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddedProjectivePair {
    pub subspace: f64,
    pub ambient: f64,
}

impl TensorElement {
    pub fn new(x: NormedSpace, y: NormedSpace, terms: Vec<(Vector, Vector)>) -> Result<Self> {
        for (xv, yv) in &terms {
            if xv.len() != x.dim() {
                return Err(CoreError::dim("tensor term, left factor", x.dim(), xv.len()));
            }
            if yv.len() != y.dim() {
                return Err(CoreError::dim("tensor term, right factor", y.dim(), yv.len()));
            }
        }
        let mut coeff = DMatrix::zeros(x.dim(), y.dim());
        for (xv, yv) in &terms {
            coeff += xv * yv.transpose();
        }
        Ok(TensorElement {
            x,
            y,
            terms,
            coeff_matrix: coeff,
        })
    }

    /// The single tensor x ⊗ y.
    pub fn single(x: NormedSpace, y: NormedSpace, xv: Vector, yv: Vector) -> Result<Self> {
        TensorElement::new(x, y, vec![(xv, yv)])
    }

    /// The element with the given coefficient matrix, decomposed along the
    /// standard basis of Y.
    pub fn from_coefficients(x: NormedSpace, y: NormedSpace, coeff: DMatrix<f64>) -> Result<Self> {
        if coeff.nrows() != x.dim() {
            return Err(CoreError::dim("coefficient rows", x.dim(), coeff.nrows()));
        }
        if coeff.ncols() != y.dim() {
            return Err(CoreError::dim("coefficient columns", y.dim(), coeff.ncols()));
        }
        let terms = (0..y.dim())
            .map(|j| {
                let mut e = DVector::zeros(y.dim());
                e[j] = 1.0;
                (coeff.column(j).into_owned(), e)
            })
            .collect();
        Ok(TensorElement {
            x,
            y,
            terms,
            coeff_matrix: coeff,
        })
    }

    pub fn x(&self) -> &NormedSpace {
        &self.x
    }

    pub fn y(&self) -> &NormedSpace {
        &self.y
    }

    pub fn terms(&self) -> &[(Vector, Vector)] {
        &self.terms
    }

    pub fn coeff_matrix(&self) -> &DMatrix<f64> {
        &self.coeff_matrix
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_matrix.amax() == 0.0
    }

    /// Equality of tensor elements: equal coefficient matrices (the
    /// decompositions themselves are non-unique and not compared).
    pub fn same_element(&self, other: &TensorElement) -> bool {
        self.x.dim() == other.x.dim()
            && self.y.dim() == other.y.dim()
            && {
                let scale = 1.0 + self.coeff_matrix.amax().max(other.coeff_matrix.amax());
                (&self.coeff_matrix - &other.coeff_matrix).amax() <= tol::ALGEBRAIC * scale
            }
    }

    pub fn rank(&self) -> usize {
        matrix_rank(&self.coeff_matrix)
    }

    // --- injective norm ---

    pub fn injective_norm(&self, cfg: &OptimizerConfig) -> Result<f64> {
        self.injective_report(cfg).map(|r| r.value)
    }

    /// ε(Ϝ) with a maximizing pair of dual-ball functionals.
    pub fn injective_report(&self, cfg: &OptimizerConfig) -> Result<InjectiveReport> {
        let f_ball = BallOracle::for_dual(&self.x);
        let g_ball = BallOracle::for_dual(&self.y);
        let r = optim::form_sup(&self.coeff_matrix, &f_ball, &g_ball, cfg, 61, &[])?;
        Ok(InjectiveReport {
            value: r.value,
            f: r.u,
            g: r.v,
            exact: r.exact,
        })
    }

    // --- projective norm, upper side ---

    /// Best Σ ‖xᵢ‖‖yᵢ‖ over length-`k` decompositions found by local search;
    /// an upper bound on π(Ϝ) for any outcome since every iterate is a true
    /// decomposition.
    pub fn projective_norm_upper(&self, k: usize, cfg: &OptimizerConfig) -> Result<f64> {
        self.projective_upper_report(k, cfg).map(|r| r.value)
    }

    pub fn projective_upper_report(
        &self,
        k: usize,
        cfg: &OptimizerConfig,
    ) -> Result<ProjectiveUpperReport> {
        self.projective_upper_seeded(k, cfg, &[])
    }

    /// As [`TensorElement::projective_upper_report`], with extra starting
    /// decompositions (each must reproduce the coefficient matrix; infeasible
    /// or oversized seeds are skipped).
    pub(crate) fn projective_upper_seeded(
        &self,
        k: usize,
        cfg: &OptimizerConfig,
        seeds: &[Vec<(Vector, Vector)>],
    ) -> Result<ProjectiveUpperReport> {
        cfg.validate()?;
        let c = &self.coeff_matrix;
        let (n, m) = (c.nrows(), c.ncols());
        if c.amax() == 0.0 {
            return Ok(ProjectiveUpperReport {
                value: 0.0,
                terms: Vec::new(),
            });
        }
        let rank = matrix_rank(c);
        if k < rank {
            return Err(CoreError::invalid(format!(
                "decomposition length {k} is below the coefficient rank {rank}; no exact decomposition exists"
            )));
        }
        let feas_tol = tol::FEASIBILITY * (1.0 + c.norm());

        // Factor-pair initializations, all exactly feasible.
        let mut inits: Vec<(DMatrix<f64>, DMatrix<f64>)> = Vec::new();

        // Balanced singular-value split: exactly optimal for Euclidean
        // factors and for rank-one elements under any norms.
        let svd = c.clone().svd(true, true);
        let (w, qt) = (svd.u.as_ref().unwrap(), svd.v_t.as_ref().unwrap());
        let top = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let mut u0 = DMatrix::zeros(n, k);
        let mut v0 = DMatrix::zeros(m, k);
        let mut col = 0;
        for i in 0..svd.singular_values.len() {
            let s = svd.singular_values[i];
            if s > 1e-14 * top && col < k {
                let root = s.sqrt();
                u0.set_column(col, &(w.column(i) * root));
                v0.set_column(col, &(qt.row(i).transpose() * root));
                col += 1;
            }
        }
        inits.push((u0.clone(), v0.clone()));

        // The element's own terms.
        if !self.terms.is_empty() && self.terms.len() <= k {
            let mut u = DMatrix::zeros(n, k);
            let mut v = DMatrix::zeros(m, k);
            for (t, (xv, yv)) in self.terms.iter().enumerate() {
                u.set_column(t, xv);
                v.set_column(t, yv);
            }
            inits.push((u, v));
        }

        // Caller-provided decompositions.
        for seed in seeds {
            if seed.len() > k {
                continue;
            }
            let mut u = DMatrix::zeros(n, k);
            let mut v = DMatrix::zeros(m, k);
            let mut ok = true;
            for (t, (xv, yv)) in seed.iter().enumerate() {
                if xv.len() != n || yv.len() != m {
                    ok = false;
                    break;
                }
                u.set_column(t, xv);
                v.set_column(t, yv);
            }
            if ok && (&u * v.transpose() - c).norm() <= feas_tol {
                inits.push((u, v));
            }
        }

        // Random full-width gauges of the singular-value split: an orthogonal
        // mix across all k columns activates the spare ones, giving the local
        // search room beyond the rank.
        let gauge_count = 2 + (cfg.restarts / 16).min(4);
        let mut rng = cfg.rng(71);
        for _ in 0..gauge_count {
            let g = DMatrix::from_fn(k, k, |_, _| {
                use rand::Rng;
                rng.sample::<f64, _>(rand_distr::StandardNormal)
            });
            let q = g.qr().q();
            inits.push((&u0 * &q, &v0 * &q));
        }

        let mut best: Option<(f64, DMatrix<f64>, DMatrix<f64>)> = None;
        for (u, v) in inits {
            if (&u * v.transpose() - c).norm() > feas_tol {
                continue;
            }
            let (value, u, v) = self.gauge_descent(u, v, cfg);
            if (&u * v.transpose() - c).norm() > feas_tol {
                continue;
            }
            if best.as_ref().map_or(true, |(b, _, _)| value < *b) {
                best = Some((value, u, v));
            }
        }
        let (value, u, v) = best.ok_or_else(|| {
            CoreError::unsupported("no feasible decomposition survived the search")
        })?;

        let mut terms = Vec::new();
        for t in 0..k {
            let (ut, vt) = (u.column(t).into_owned(), v.column(t).into_owned());
            if ut.amax() > 0.0 && vt.amax() > 0.0 {
                terms.push((ut, vt));
            }
        }
        Ok(ProjectiveUpperReport { value, terms })
    }

    /// Pairwise gauge moves on a feasible factorization C = UVᵀ: rotations
    /// (U, V) ← (UR, VR) and shears (U, V) ← (Ug, Vg⁻ᵀ) applied to column
    /// pairs leave UVᵀ unchanged exactly, so every iterate stays a
    /// decomposition; the objective Σ ‖uₜ‖_X ‖vₜ‖_Y is minimized by
    /// line-searched hill descent over those moves.
    fn gauge_descent(
        &self,
        mut u: DMatrix<f64>,
        mut v: DMatrix<f64>,
        cfg: &OptimizerConfig,
    ) -> (f64, DMatrix<f64>, DMatrix<f64>) {
        let k = u.ncols();
        let nx = |w: &DVector<f64>| self.x.norm(w).expect("column dimension fixed");
        let ny = |w: &DVector<f64>| self.y.norm(w).expect("column dimension fixed");
        let mut xn: Vec<f64> = (0..k).map(|t| nx(&u.column(t).into_owned())).collect();
        let mut yn: Vec<f64> = (0..k).map(|t| ny(&v.column(t).into_owned())).collect();
        let mut total: f64 = (0..k).map(|t| xn[t] * yn[t]).sum();

        let max_passes = 60usize;
        for _ in 0..max_passes {
            let mut improved = false;
            for s in 0..k {
                for t in s + 1..k {
                    let dead_s = xn[s] == 0.0 && yn[s] == 0.0;
                    let dead_t = xn[t] == 0.0 && yn[t] == 0.0;
                    if dead_s && dead_t {
                        continue;
                    }
                    let us = u.column(s).into_owned();
                    let ut = u.column(t).into_owned();
                    let vs = v.column(s).into_owned();
                    let vt = v.column(t).into_owned();
                    let current = xn[s] * yn[s] + xn[t] * yn[t];

                    // Candidate contribution after a 2×2 gauge move; the
                    // rotation acts identically on both factors, the shears
                    // inversely-transposed.
                    let rot = |theta: f64| {
                        let (cs, sn) = (theta.cos(), theta.sin());
                        let nus = &us * cs + &ut * sn;
                        let nut = &ut * cs - &us * sn;
                        let nvs = &vs * cs + &vt * sn;
                        let nvt = &vt * cs - &vs * sn;
                        (nx(&nus) * ny(&nvs) + nx(&nut) * ny(&nvt), nus, nut, nvs, nvt)
                    };
                    let shear_st = |alpha: f64| {
                        let nut = &ut + &us * alpha;
                        let nvs = &vs - &vt * alpha;
                        (
                            xn[s] * ny(&nvs) + nx(&nut) * yn[t],
                            us.clone(),
                            nut,
                            nvs,
                            vt.clone(),
                        )
                    };
                    let shear_ts = |beta: f64| {
                        let nus = &us + &ut * beta;
                        let nvt = &vt - &vs * beta;
                        (
                            nx(&nus) * yn[s] + xn[t] * ny(&nvt),
                            nus,
                            ut.clone(),
                            vs.clone(),
                            nvt,
                        )
                    };

                    let mut cand = (current, us.clone(), ut.clone(), vs.clone(), vt.clone());
                    // Rotations: coarse angular grid, then interval shrinking
                    // around the best angle (the objective can have kinks, so
                    // plenty of shrink steps).
                    let mut best_theta = None;
                    for j in 0..8 {
                        let theta =
                            -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * (j as f64 + 0.5) / 8.0;
                        let val = rot(theta).0;
                        if val < cand.0 && best_theta.map_or(true, |(_, bv)| val < bv) {
                            best_theta = Some((theta, val));
                        }
                    }
                    if let Some((theta0, _)) = best_theta {
                        let step = std::f64::consts::PI / 8.0;
                        let (theta, _) = shrink_search(theta0 - step, theta0 + step, |t| rot(t).0, 40);
                        let r = rot(theta);
                        if r.0 < cand.0 {
                            cand = r;
                        }
                    }
                    // Shears in both directions on a geometric grid.
                    for dir in 0..2 {
                        let eval = |a: f64| if dir == 0 { shear_st(a).0 } else { shear_ts(a).0 };
                        let mut best_a = None;
                        for mag in [0.125, 0.5, 2.0, 8.0] {
                            for sign in [-1.0, 1.0] {
                                let a = sign * mag;
                                let val = eval(a);
                                if val < cand.0 && best_a.map_or(true, |(_, bv)| val < bv) {
                                    best_a = Some((a, val));
                                }
                            }
                        }
                        if let Some((a0, _)) = best_a {
                            let (a, _) = shrink_search(a0 * 0.25, a0 * 4.0, eval, 30);
                            let r = if dir == 0 { shear_st(a) } else { shear_ts(a) };
                            if r.0 < cand.0 {
                                cand = r;
                            }
                        }
                    }

                    if cand.0 < current - 1e-12 * (1.0 + total) {
                        total += cand.0 - current;
                        let (_, nus, nut, nvs, nvt) = cand;
                        xn[s] = nx(&nus);
                        xn[t] = nx(&nut);
                        yn[s] = ny(&nvs);
                        yn[t] = ny(&nvt);
                        u.set_column(s, &nus);
                        u.set_column(t, &nut);
                        v.set_column(s, &nvs);
                        v.set_column(t, &nvt);
                        improved = true;
                    }
                }
            }
            // Undo accumulated increment drift before deciding to stop.
            total = (0..k).map(|t| xn[t] * yn[t]).sum();
            if !improved {
                break;
            }
            let _ = cfg; // budget is governed by the pass cap and grids above
        }
        (total, u, v)
    }

    // --- projective norm, dual lower side ---

    /// Certified lower bound for π(Ϝ): sup |⟨A, C⟩_F| over bilinear forms A
    /// with norm at most one.
    pub fn projective_norm_dual_lower(&self, cfg: &OptimizerConfig) -> Result<f64> {
        self.dual_lower_report(cfg).map(|r| r.value)
    }

    pub fn dual_lower_report(&self, cfg: &OptimizerConfig) -> Result<DualLowerReport> {
        cfg.validate()?;
        let c = &self.coeff_matrix;
        let (n, m) = (c.nrows(), c.ncols());
        if c.amax() == 0.0 {
            return Ok(DualLowerReport {
                value: 0.0,
                form: DMatrix::zeros(n, m),
                exact: true,
            });
        }

        let euclidean_pair = self.x.p().value() == 2.0
            && self.y.p().value() == 2.0
            && self.x.embedding().is_none()
            && self.y.embedding().is_none();

        // Euclidean factors: A = WQᵀ from the singular vectors has largest
        // singular value one, hence form norm one, and pairs to the nuclear
        // norm — the exact projective value.
        if euclidean_pair {
            let svd = c.clone().svd(true, true);
            let a = svd.u.as_ref().unwrap() * svd.v_t.as_ref().unwrap();
            let value: f64 = svd.singular_values.iter().sum();
            return Ok(DualLowerReport {
                value,
                form: a,
                exact: true,
            });
        }

        // A rank-one form built from the injective maximizers is always
        // feasible: ν(fgᵀ) = ‖f‖_X*‖g‖_Y* ≤ 1 and ⟨fgᵀ, C⟩ = fᵀCg = ε.
        let inj = self.injective_report(cfg)?;
        let mut best = DualLowerReport {
            value: inj.value,
            form: &inj.f * inj.g.transpose(),
            exact: matrix_rank(c) <= 1 && inj.exact,
        };
        if best.exact {
            return Ok(best);
        }

        // Gradient ascent on ⟨A, C⟩ with certified renormalization: divide by
        // the exactly computed form norm when available, otherwise by the
        // Euclidean relaxation σ_max(A)·r_X·r_Y ≥ ν(A). Division by an upper
        // bound keeps every iterate feasible, so its pairing certifies.
        let certified_value = |a: &DMatrix<f64>| -> Result<(f64, DMatrix<f64>)> {
            let norm_report =
                BilinearMap::scalar_form(self.x.clone(), self.y.clone(), a.clone())?
                    .norm_report(cfg)?;
            let bound = if norm_report.exact {
                norm_report.value
            } else {
                let sigma = a.clone().svd(false, false).singular_values.max();
                sigma * self.x.euclidean_radius() * self.y.euclidean_radius()
            };
            if bound <= 0.0 {
                return Ok((0.0, a.clone()));
            }
            let scaled = a / bound;
            Ok((c.dot(&scaled).abs(), scaled))
        };

        let (v0, a0) = certified_value(c)?;
        if v0 > best.value {
            best.value = v0;
            best.form = a0;
        }

        let mut a = best.form.clone();
        let mut eta = 1.0f64;
        for _ in 0..12 {
            let step = &a + &(c * (eta / c.norm().max(1e-300)));
            let (val, scaled) = certified_value(&step)?;
            if val > best.value + 1e-12 * (1.0 + best.value) {
                best.value = val;
                best.form = scaled.clone();
                a = scaled;
                eta *= 1.5;
            } else {
                eta *= 0.5;
                if eta < 1e-4 {
                    break;
                }
            }
        }
        Ok(best)
    }

    // --- combined report ---

    /// Brackets π(Ϝ) between the decomposition search (length X.dim·Y.dim)
    /// and the dual lower bound, and reports ε(Ϝ) alongside.
    pub fn projective_norm(&self, cfg: &OptimizerConfig) -> Result<CrossnormReport> {
        let injective = self.injective_norm(cfg)?;
        let k = self.x.dim() * self.y.dim();
        let upper = self.projective_upper_report(k, cfg)?;
        let lower = self.dual_lower_report(cfg)?;
        let gap = if upper.value > 0.0 {
            (upper.value - lower.value).max(0.0) / upper.value
        } else {
            0.0
        };
        Ok(CrossnormReport {
            injective,
            projective_upper: upper.value,
            projective_dual_lower: lower.value,
            gap,
            certified: gap <= tol::CERTIFICATION,
            restarts_used: cfg.restarts,
            seed: cfg.seed,
        })
    }

    // --- subspace embedding comparisons ---

    /// π of this element computed in subspace coordinates (inherited norm)
    /// and in the ambient spaces. Every term must lie in M × N.
    ///
    /// The ambient search is seeded with the embedded subspace decomposition,
    /// whose objective is identical under the inherited norm, so the ambient
    /// value never exceeds the subspace value (the containment direction of
    /// the comparison holds by construction).
    pub fn embedded_projective_norms(
        &self,
        m: &Subspace,
        n: &Subspace,
        cfg: &OptimizerConfig,
    ) -> Result<EmbeddedProjectivePair> {
        if m.ambient().dim() != self.x.dim() {
            return Err(CoreError::dim(
                "left subspace ambient",
                self.x.dim(),
                m.ambient().dim(),
            ));
        }
        if n.ambient().dim() != self.y.dim() {
            return Err(CoreError::dim(
                "right subspace ambient",
                self.y.dim(),
                n.ambient().dim(),
            ));
        }
        let mx = m.coordinate_space();
        let ny = n.coordinate_space();
        let mut sub_terms = Vec::with_capacity(self.terms.len());
        for (xv, yv) in &self.terms {
            sub_terms.push((m.coords(xv)?, n.coords(yv)?));
        }
        let sub_tensor = TensorElement::new(mx.clone(), ny.clone(), sub_terms)?;
        let sub = sub_tensor.projective_upper_report(mx.dim() * ny.dim(), cfg)?;

        let embedded: Vec<(Vector, Vector)> = sub
            .terms
            .iter()
            .map(|(u, v)| (m.embed(u).expect("dims fixed"), n.embed(v).expect("dims fixed")))
            .collect();
        let ambient = self.projective_upper_seeded(
            self.x.dim() * self.y.dim(),
            cfg,
            std::slice::from_ref(&embedded),
        )?;
        Ok(EmbeddedProjectivePair {
            subspace: sub.value,
            ambient: ambient.value.min(sub.value),
        })
    }
}

/// Samples random elements of M ⊗ N and checks whether the subspace and
/// ambient projective norms agree — a sampled necessary condition for the
/// embedding to be isometric, not a proof.
pub fn is_subspace_embedding(
    m: &Subspace,
    n: &Subspace,
    samples: usize,
    cfg: &OptimizerConfig,
) -> Result<EmbeddingVerdict> {
    cfg.validate()?;
    if samples == 0 {
        return Err(CoreError::invalid("embedding check needs at least one sample"));
    }
    let x = m.ambient().clone();
    let y = n.ambient().clone();
    let terms_per_sample = (m.dim() * n.dim()).clamp(2, 4);
    let mut rng = cfg.rng(97);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let terms: Vec<(Vector, Vector)> = (0..terms_per_sample)
            .map(|_| {
                let cu = optim::gaussian_vector(&mut rng, m.dim());
                let cv = optim::gaussian_vector(&mut rng, n.dim());
                (
                    m.embed(&cu).expect("dims fixed"),
                    n.embed(&cv).expect("dims fixed"),
                )
            })
            .collect();
        let element = TensorElement::new(x.clone(), y.clone(), terms)?;
        let pair = element.embedded_projective_norms(m, n, cfg)?;
        let gap = (pair.subspace - pair.ambient).abs() / pair.subspace.max(1e-12);
        worst = worst.max(gap);
    }
    Ok(EmbeddingVerdict {
        is_isometric: worst <= tol::CERTIFICATION,
        worst_gap: worst,
        samples,
    })
}

/// Row-major index of the (i, j) coefficient in linearized coordinates.
pub fn pair_index(i: usize, j: usize, y_dim: usize) -> usize {
    i * y_dim + j
}

/// The linear map Φ on X ⊗ Y induced by a bilinear map via Φ(x⊗y) = φ(x, y),
/// acting on row-major coefficient coordinates, with the domain carrying the
/// projective norm.
#[derive(Debug, Clone)]
pub struct TensorLinearMap {
    x: NormedSpace,
    y: NormedSpace,
    z: NormedSpace,
    /// Z.dim × (X.dim·Y.dim); column `pair_index(i, j)` is φ(eᵢ, eⱼ).
    matrix: DMatrix<f64>,
}

/// The linearization of φ through the tensor product.
pub fn linearize(phi: &BilinearMap) -> TensorLinearMap {
    let (n, m, l) = (phi.x().dim(), phi.y().dim(), phi.z().dim());
    let mut matrix = DMatrix::zeros(l, n * m);
    for k in 0..l {
        for i in 0..n {
            for j in 0..m {
                matrix[(k, pair_index(i, j, m))] = phi.coeffs()[k][(i, j)];
            }
        }
    }
    TensorLinearMap {
        x: phi.x().clone(),
        y: phi.y().clone(),
        z: phi.z().clone(),
        matrix,
    }
}

impl TensorLinearMap {
    pub fn x(&self) -> &NormedSpace {
        &self.x
    }

    pub fn y(&self) -> &NormedSpace {
        &self.y
    }

    pub fn z(&self) -> &NormedSpace {
        &self.z
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Value of Φ on a tensor element (its coefficient matrix, linearized).
    pub fn apply_to(&self, element: &TensorElement) -> Result<Vector> {
        if element.x().dim() != self.x.dim() || element.y().dim() != self.y.dim() {
            return Err(CoreError::dim(
                "tensor element shape",
                self.x.dim() * self.y.dim(),
                element.x().dim() * element.y().dim(),
            ));
        }
        let c = element.coeff_matrix();
        let m = self.y.dim();
        let flat = DVector::from_fn(self.x.dim() * m, |idx, _| c[(idx / m, idx % m)]);
        Ok(&self.matrix * flat)
    }

    /// Reassembles the bilinear map with φ(x, y) = Φ(x ⊗ y).
    pub fn as_bilinear(&self) -> Result<BilinearMap> {
        let m = self.y.dim();
        let coeffs = (0..self.z.dim())
            .map(|k| {
                DMatrix::from_fn(self.x.dim(), m, |i, j| self.matrix[(k, pair_index(i, j, m))])
            })
            .collect();
        BilinearMap::new(self.x.clone(), self.y.clone(), self.z.clone(), coeffs)
    }

    /// `sup { ‖Φ(w)‖_Z : π(w) ≤ 1 }`.
    ///
    /// The extreme points of the projective unit ball are the single tensors
    /// x ⊗ y with ‖x‖‖y‖ = 1, so the supremum equals the norm of the
    /// associated bilinear map. For scalar Z it is computed as the norm of
    /// the bilinear form read off the matrix (a two-ball supremum over the
    /// primal balls — the dual norm of π); otherwise through the curried
    /// operator route.
    pub fn operator_norm(&self, cfg: &OptimizerConfig) -> Result<f64> {
        let phi = self.as_bilinear()?;
        if self.z.dim() == 1 {
            phi.norm(cfg)
        } else {
            phi.curry().operator_norm(cfg)
        }
    }
}

fn matrix_rank(c: &DMatrix<f64>) -> usize {
    let svd = c.clone().svd(false, false);
    let top = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|s| **s > tol::RANK * top)
        .count()
}

/// Interval-shrinking minimization of a 1-D function around a seed point;
/// tolerant of kinks (no smoothness assumed, just a decent bracket).
fn shrink_search(lo: f64, hi: f64, eval: impl Fn(f64) -> f64, iters: usize) -> (f64, f64) {
    let mut lo = lo;
    let mut hi = hi;
    let mut best_t = 0.5 * (lo + hi);
    let mut best_v = eval(best_t);
    for _ in 0..iters {
        let t1 = 0.5 * (lo + best_t);
        let t2 = 0.5 * (best_t + hi);
        let v1 = eval(t1);
        let v2 = eval(t2);
        if v1 < best_v && v1 <= v2 {
            hi = best_t;
            best_t = t1;
            best_v = v1;
        } else if v2 < best_v {
            lo = best_t;
            best_t = t2;
            best_v = v2;
        } else {
            lo = 0.5 * (lo + best_t);
            hi = 0.5 * (best_t + hi);
        }
    }
    (best_t, best_v)
}
