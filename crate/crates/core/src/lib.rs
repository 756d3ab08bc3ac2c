//! Finite-dimensional normed spaces, bilinear maps, tensor crossnorms, and
//! norm-controlled extensions of bilinear maps from subspaces.
//!
//! The crate works over ℝⁿ with ℓp norms (1 ≤ p ≤ ∞). The main layers:
//!
//! * [`space`] — normed spaces, subspaces with inherited norms, linear maps,
//!   projections, and minimal-norm projections.
//! * [`bilinear`] — bilinear maps into a third space, their norms, and the
//!   curry/uncurry correspondence with operator-valued linear maps.
//! * [`tensor`] — elements of X ⊗ Y, the injective and projective
//!   crossnorms, and linearization of bilinear maps through the tensor
//!   product.
//! * [`extend`] — extension of a bilinear map from a pair of subspaces to
//!   the ambient spaces along projections, with norm control.
//!
//! Every norm that cannot be written in closed form is computed by seeded,
//! deterministic optimization and reported as a certified lower bound or a
//! bracketing pair; nothing is ever reported as exact unless an exact route
//! (singular values, polytope vertex enumeration, or duality) settled it.

pub mod bilinear;
pub mod descriptor;
pub mod error;
pub mod extend;
pub mod gen;
pub mod optim;
pub mod oracle;
pub mod space;
pub mod tensor;
pub mod tol;

pub use bilinear::{BilinearMap, BilinearNormReport, CurriedMap};
pub use error::{CoreError, Result};
pub use extend::{
    extend_bilinear, extend_bilinear_hilbert, extend_linear_on_tensor,
    oblique_projection_counterexample, restrict_bilinear, CounterexampleRecord, ExtensionResult,
    LinearExtensionResult,
};
pub use optim::OptimizerConfig;
pub use space::{
    min_norm_projection, LinearMap, MinNormProjection, NormedSpace, PExp, Projection, Subspace,
    Vector,
};
pub use tensor::{
    is_subspace_embedding, linearize, pair_index, CrossnormReport, DualLowerReport,
    EmbeddedProjectivePair, EmbeddingVerdict, InjectiveReport, ProjectiveUpperReport,
    TensorElement, TensorLinearMap,
};
