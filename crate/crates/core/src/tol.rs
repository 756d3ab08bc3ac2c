//! Central numerical tolerances.
//!
//! Every routine that needs a cutoff pulls it from here so that the whole
//! workspace agrees on what "numerically zero" means at a given task.

/// Orthonormality defect allowed in a stored subspace basis (`‖BᵀB − I‖_max`).
pub const ORTHONORMALITY: f64 = 1e-12;

/// Relative singular-value cutoff used for rank decisions.
pub const RANK: f64 = 1e-10;

/// Idempotency defect allowed in a projection (`‖E² − E‖_F`).
pub const IDEMPOTENCY: f64 = 1e-10;

/// Residual allowed when checking that a vector lies in a subspace,
/// or that a map restricts to another on a basis grid.
pub const RESTRICTION: f64 = 1e-10;

/// Residual allowed in an exact decomposition constraint (`‖UVᵀ − C‖_F`,
/// relative to the coefficient scale).
pub const FEASIBILITY: f64 = 1e-9;

/// Relative upper/lower gap under which a two-sided norm bracket counts
/// as certified.
pub const CERTIFICATION: f64 = 1e-4;

/// Probe tolerance for algebraic identities checked pointwise
/// (bilinearity, section consistency).
pub const ALGEBRAIC: f64 = 1e-12;
