//! Deterministic random instances for the verification suites.
//!
//! Every generator draws from a caller-supplied ChaCha stream; suites derive
//! one stream per trial via [`trial_rng`] so that reports are reproducible
//! from `(seed, trial)` alone and trials are order-independent. Matrix and
//! vector entries are i.i.d. standard normal; subspace dimensions are drawn
//! uniformly from `[1, ambient − 1]`.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
/// Re-exported so downstream code can name the stream type without its own
/// dependency on the RNG crate.
pub use rand_chacha::ChaCha8Rng;

use crate::bilinear::BilinearMap;
use crate::error::{CoreError, Result};
use crate::optim;
use crate::space::{NormedSpace, PExp, Projection, Subspace, Vector};
use crate::tensor::TensorElement;

/// The random stream for one trial of a suite.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(optim::mix_seed(seed, trial))
}

pub fn standard_normal_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::from_fn(dim, |_, _| rng.sample(rand_distr::StandardNormal))
}

pub fn standard_normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(rand_distr::StandardNormal))
}

/// Uniform choice from the allowed norm exponents.
pub fn pick_p(rng: &mut ChaCha8Rng, p_values: &[f64]) -> Result<PExp> {
    if p_values.is_empty() {
        return Err(CoreError::invalid("at least one norm exponent is required"));
    }
    PExp::new(p_values[rng.gen_range(0..p_values.len())])
}

/// Uniform dimension in `lo..=hi`.
pub fn pick_dim(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Result<usize> {
    if lo == 0 || hi < lo {
        return Err(CoreError::invalid(format!(
            "dimension range [{lo}, {hi}] is empty or starts at zero"
        )));
    }
    Ok(rng.gen_range(lo..=hi))
}

pub fn random_space(
    rng: &mut ChaCha8Rng,
    dims: (usize, usize),
    p_values: &[f64],
) -> Result<NormedSpace> {
    let dim = pick_dim(rng, dims.0, dims.1)?;
    let p = pick_p(rng, p_values)?;
    NormedSpace::lp(dim, p)
}

/// Bilinear map with standard normal coefficients on the given spaces.
pub fn random_bilinear(
    rng: &mut ChaCha8Rng,
    x: NormedSpace,
    y: NormedSpace,
    z: NormedSpace,
) -> Result<BilinearMap> {
    let coeffs = (0..z.dim())
        .map(|_| standard_normal_matrix(rng, x.dim(), y.dim()))
        .collect();
    BilinearMap::new(x, y, z, coeffs)
}

/// Proper subspace with Gaussian spanning vectors and dimension uniform in
/// `[1, ambient − 1]` (capped by `max_dim` when given).
pub fn random_subspace(
    rng: &mut ChaCha8Rng,
    ambient: &NormedSpace,
    max_dim: Option<usize>,
) -> Result<Subspace> {
    if ambient.dim() < 2 {
        return Err(CoreError::invalid(
            "a proper subspace needs an ambient dimension of at least two",
        ));
    }
    let hi = max_dim
        .unwrap_or(ambient.dim() - 1)
        .min(ambient.dim() - 1);
    let dim = pick_dim(rng, 1, hi)?;
    let spanning: Vec<Vector> = (0..dim)
        .map(|_| standard_normal_vector(rng, ambient.dim()))
        .collect();
    Subspace::from_spanning(ambient, &spanning)
}

/// A projection onto the subspace along a random complement — generally
/// oblique. Gaussian complements are complementary with probability one;
/// the retry loop covers the numerical edge.
pub fn random_projection(rng: &mut ChaCha8Rng, sub: &Subspace) -> Result<Projection> {
    let ambient = sub.ambient();
    let codim = ambient.dim() - sub.dim();
    if codim == 0 {
        return Projection::new(
            crate::space::LinearMap::identity(ambient.clone()),
            sub.clone(),
        );
    }
    let mut last = None;
    for _ in 0..8 {
        let spanning: Vec<Vector> = (0..codim)
            .map(|_| standard_normal_vector(rng, ambient.dim()))
            .collect();
        match Subspace::from_spanning(ambient, &spanning)
            .and_then(|complement| Projection::onto_along(sub, &complement))
        {
            Ok(proj) => return Ok(proj),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| CoreError::invalid("projection sampling failed")))
}

/// Tensor element with the prescribed number of Gaussian terms.
pub fn random_tensor(
    rng: &mut ChaCha8Rng,
    x: NormedSpace,
    y: NormedSpace,
    terms: usize,
) -> Result<TensorElement> {
    let pairs = (0..terms)
        .map(|_| {
            (
                standard_normal_vector(rng, x.dim()),
                standard_normal_vector(rng, y.dim()),
            )
        })
        .collect();
    TensorElement::new(x, y, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let a = standard_normal_vector(&mut trial_rng(7, 0), 4);
        let b = standard_normal_vector(&mut trial_rng(7, 0), 4);
        let c = standard_normal_vector(&mut trial_rng(7, 1), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_projection_fixes_its_subspace() {
        let mut rng = trial_rng(3, 5);
        let ambient = NormedSpace::l2(4);
        let sub = random_subspace(&mut rng, &ambient, None).unwrap();
        let proj = random_projection(&mut rng, &sub).unwrap();
        let point = sub.embed(&standard_normal_vector(&mut rng, sub.dim())).unwrap();
        let mapped = proj.map().apply(&point).unwrap();
        assert!((mapped - point).amax() <= 1e-9);
    }

    #[test]
    fn subspace_dimension_stays_proper() {
        let ambient = NormedSpace::l2(5);
        for trial in 0..20 {
            let mut rng = trial_rng(11, trial);
            let sub = random_subspace(&mut rng, &ambient, None).unwrap();
            assert!(sub.dim() >= 1 && sub.dim() < 5);
        }
    }

    #[test]
    fn degenerate_requests_are_rejected() {
        let mut rng = trial_rng(0, 0);
        assert!(pick_p(&mut rng, &[]).is_err());
        assert!(pick_dim(&mut rng, 0, 3).is_err());
        assert!(random_subspace(&mut rng, &NormedSpace::l2(1), None).is_err());
    }
}
