//! The named verification suites: seeded random instances checked against
//! the library's norm identities and inequalities.
//!
//! Every suite draws its instances from a deterministic per-trial stream
//! (`hash(seed, trial)`), so a report is reproducible bit-for-bit apart from
//! its timing fields, and every failure can be replayed in isolation through
//! `compute` with the recorded instance JSON and seed.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bilinext_core::descriptor::{
    matrix_to_rows, BilinearDescriptor, ExtendInputDescriptor, PDescriptor, SpaceDescriptor,
    SubspaceDescriptor, TensorDescriptor,
};
use bilinext_core::gen::ChaCha8Rng;
use bilinext_core::{
    extend_bilinear, extend_linear_on_tensor, gen, linearize, oblique_projection_counterexample,
    oracle, BilinearMap, CoreError, NormedSpace, OptimizerConfig, Projection, Subspace,
    TensorElement,
};
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use crate::report::{emit, to_json_pretty, FailureEntry, SuiteReport, SCHEMA_VERSION};
use crate::CliError;

#[derive(Args)]
pub struct SuiteArgs {
    /// Suite to run.
    #[arg(long = "id", value_enum)]
    pub id: SuiteId,
    /// Number of random trials (each suite has its own default).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Upper bound on generated dimensions, within [1, 8].
    #[arg(long)]
    pub dims: Option<usize>,
    /// Norm exponents to draw from (comma-separated; `inf` is accepted).
    #[arg(long = "p", value_delimiter = ',')]
    pub p: Vec<String>,
    /// Base seed; per-trial seeds are derived from it and the trial index.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override `KEY=VALUE` (repeatable; keys are suite-specific).
    #[arg(long = "tol")]
    pub tol: Vec<String>,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit a flat CSV row instead of the JSON report.
    #[arg(long)]
    pub csv: bool,
}

/// Suite identifiers; each one exercises a specific norm identity or
/// inequality from the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteId {
    /// Curried operator norm equals the bilinear norm.
    Prop42,
    /// Linearization through the projective tensor square is isometric.
    Prop44,
    /// Projective upper bound, dual lower bound, and the singular-value sum
    /// agree on Euclidean factors.
    Prop45,
    /// Extension norm chain ‖φ‖ ≤ ‖φ̂‖ ≤ ‖φ‖·‖E‖·‖P‖ for arbitrary
    /// projections.
    Thm52,
    /// Norm-preserving extension under orthogonal projections on Euclidean
    /// spaces.
    Cor53,
    /// The oblique-projection fixture: a norm-preserving extension whose
    /// projection has norm √2.
    Counterexample,
    /// Extension of linear maps on the projective tensor square preserves
    /// the operator norm in the Euclidean norm-one-projection setting.
    Cor61,
    /// Embedded projective norms: equality on Euclidean subspaces, and the
    /// ambient norm never exceeds the subspace norm for any exponent.
    Cor62,
    /// Injective ≤ projective on random tensors; both collapse to ‖x‖·‖y‖
    /// on single tensors.
    Crossnorms,
}

impl SuiteId {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

/// Resolved run parameters: defaults overridden by the command line.
struct SuitePlan {
    trials: u64,
    dims: usize,
    p_values: Vec<f64>,
    tolerances: BTreeMap<String, f64>,
}

impl SuitePlan {
    fn tol(&self, key: &str) -> f64 {
        *self
            .tolerances
            .get(key)
            .unwrap_or_else(|| panic!("suite consulted undeclared tolerance key {key}"))
    }
}

/// Per-suite defaults: trial count, dimension bound, exponent pool, and the
/// named tolerances a run may override with `--tol`.
fn defaults(id: SuiteId) -> (u64, usize, Vec<f64>, &'static [(&'static str, f64)]) {
    const INF: f64 = f64::INFINITY;
    match id {
        SuiteId::Prop42 => (100, 4, vec![1.0, 2.0, INF], &[("equality", 1e-6)]),
        SuiteId::Prop44 => (50, 4, vec![2.0], &[("equality", 1e-4)]),
        SuiteId::Prop45 => (50, 5, vec![2.0], &[("agreement", 1e-4)]),
        SuiteId::Thm52 => (
            200,
            4,
            vec![1.0, 2.0, INF],
            &[("chain", 1e-6), ("restriction", 1e-10)],
        ),
        SuiteId::Cor53 => (
            100,
            5,
            vec![2.0],
            &[("equality", 1e-6), ("restriction", 1e-10)],
        ),
        SuiteId::Counterexample => (1, 2, vec![2.0], &[("equality", 1e-8)]),
        SuiteId::Cor61 => (
            25,
            4,
            vec![2.0],
            &[("equality", 1e-4), ("restriction", 1e-8)],
        ),
        SuiteId::Cor62 => (
            50,
            4,
            vec![1.0, 2.0, INF],
            &[("equality", 1e-4), ("ordering", 1e-6)],
        ),
        SuiteId::Crossnorms => (
            500,
            4,
            vec![1.0, 2.0, INF],
            &[("ordering", 1e-6), ("collapse", 1e-6)],
        ),
    }
}

/// Suites whose statement is Euclidean-only; they reject other exponents.
fn euclidean_only(id: SuiteId) -> bool {
    matches!(
        id,
        SuiteId::Prop44 | SuiteId::Prop45 | SuiteId::Cor53 | SuiteId::Cor61
    )
}

/// Suites that build proper subspaces and so need ambient dimension ≥ 2.
fn needs_subspaces(id: SuiteId) -> bool {
    matches!(
        id,
        SuiteId::Thm52 | SuiteId::Cor53 | SuiteId::Cor61 | SuiteId::Cor62
    )
}

fn resolve(args: &SuiteArgs) -> Result<SuitePlan, CliError> {
    let (default_trials, default_dims, default_p, tol_defaults) = defaults(args.id);

    let trials = args.trials.unwrap_or(default_trials);
    if trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }

    let dims = args.dims.unwrap_or(default_dims);
    if !(1..=8).contains(&dims) {
        return Err(CliError::usage("--dims must lie in [1, 8]"));
    }
    if needs_subspaces(args.id) && dims < 2 {
        return Err(CliError::usage(format!(
            "suite {} builds proper subspaces and needs --dims of at least 2",
            args.id.name()
        )));
    }

    let p_values = if args.p.is_empty() {
        default_p
    } else {
        let parsed = args
            .p
            .iter()
            .map(|tok| parse_p(tok))
            .collect::<Result<Vec<f64>, CliError>>()?;
        if euclidean_only(args.id) {
            if parsed.iter().any(|&p| p != 2.0) {
                return Err(CliError::usage(format!(
                    "suite {} is a Euclidean statement; only --p 2 is accepted",
                    args.id.name()
                )));
            }
        }
        parsed
    };

    let mut tolerances: BTreeMap<String, f64> = tol_defaults
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for spec in &args.tol {
        let (key, value) = spec.split_once('=').ok_or_else(|| {
            CliError::usage(format!("--tol expects KEY=VALUE, got \"{spec}\""))
        })?;
        if !tolerances.contains_key(key) {
            let known: Vec<&str> = tol_defaults.iter().map(|(k, _)| *k).collect();
            return Err(CliError::usage(format!(
                "unknown tolerance \"{key}\" for suite {}; valid keys: {}",
                args.id.name(),
                known.join(", ")
            )));
        }
        let value: f64 = value.parse().map_err(|_| {
            CliError::usage(format!("tolerance value \"{value}\" is not a number"))
        })?;
        if !(value > 0.0) {
            return Err(CliError::usage("tolerance values must be positive"));
        }
        tolerances.insert(key.to_string(), value);
    }

    Ok(SuitePlan {
        trials,
        dims,
        p_values,
        tolerances,
    })
}

fn parse_p(tok: &str) -> Result<f64, CliError> {
    let tok = tok.trim();
    if tok.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    let p: f64 = tok
        .parse()
        .map_err(|_| CliError::usage(format!("norm exponent \"{tok}\" is not a number")))?;
    if !(p >= 1.0) {
        return Err(CliError::usage(format!(
            "norm exponent {p} is out of range; need p ≥ 1"
        )));
    }
    Ok(p)
}

/// One violated (or errored) check inside a trial.
struct Violation {
    invariant: String,
    gap: Option<f64>,
    detail: Option<String>,
    instance: Value,
}

/// Result of a completed trial: its worst measured gap, any violations, and
/// optional suite-level details for the report.
struct TrialOutcome {
    gap: f64,
    violations: Vec<Violation>,
    details: Option<Value>,
}

impl TrialOutcome {
    fn new() -> TrialOutcome {
        TrialOutcome {
            gap: 0.0,
            violations: Vec::new(),
            details: None,
        }
    }

    /// Records a measured gap and, when it exceeds `tol`, a violation.
    fn check(&mut self, invariant: &str, gap: f64, tol: f64, instance: &Value) {
        self.gap = self.gap.max(gap);
        if gap > tol {
            self.violations.push(Violation {
                invariant: invariant.to_string(),
                gap: Some(gap),
                detail: None,
                instance: instance.clone(),
            });
        }
    }
}

/// A trial error bundled with whatever instance context already existed.
struct TrialError {
    error: CoreError,
    instance: Value,
}

/// Maps a core error into a `TrialError` carrying the instance descriptor.
fn ctx(instance: &Value) -> impl Fn(CoreError) -> TrialError + '_ {
    move |error| TrialError {
        error,
        instance: instance.clone(),
    }
}

pub fn run(args: SuiteArgs) -> Result<ExitCode, CliError> {
    let plan = resolve(&args)?;
    let started = Instant::now();

    let mut failures: Vec<FailureEntry> = Vec::new();
    let mut worst_gap = 0.0f64;
    let mut details: Option<Value> = None;

    for trial in 0..plan.trials {
        let trial_seed = bilinext_core::optim::mix_seed(args.seed, trial);
        let mut rng = gen::trial_rng(args.seed, trial);
        let cfg = OptimizerConfig::with_seed(trial_seed);
        match run_trial(args.id, &plan, &mut rng, &cfg) {
            Ok(outcome) => {
                worst_gap = worst_gap.max(outcome.gap);
                if details.is_none() {
                    details = outcome.details;
                }
                for v in outcome.violations {
                    failures.push(FailureEntry {
                        trial,
                        seed: trial_seed,
                        invariant: v.invariant,
                        gap: v.gap,
                        detail: v.detail,
                        instance: v.instance,
                    });
                }
            }
            Err(te) => failures.push(FailureEntry {
                trial,
                seed: trial_seed,
                invariant: "execution".to_string(),
                gap: None,
                detail: Some(te.error.to_string()),
                instance: te.instance,
            }),
        }
    }

    let runtime_ms = started.elapsed().as_millis();
    let report = SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite_id: args.id.name(),
        seed: args.seed,
        trials: plan.trials,
        trials_run: plan.trials,
        dims: plan.dims,
        p_values: plan.p_values.iter().map(|&p| PDescriptor(p)).collect(),
        tolerances: plan.tolerances.clone(),
        pass: failures.is_empty(),
        worst_gap,
        failures,
        details,
        runtime_ms,
        mean_trial_ms: runtime_ms as f64 / plan.trials as f64,
    };

    eprintln!(
        "suite {}: {} ({} trials, worst gap {:.3e})",
        report.suite_id,
        if report.pass { "pass" } else { "FAIL" },
        report.trials_run,
        report.worst_gap
    );

    let body = if args.csv {
        let mut row = report.csv_row();
        row.push('\n');
        row
    } else {
        to_json_pretty(&report)
    };
    emit(&body, args.out.as_ref())?;

    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_trial(
    id: SuiteId,
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    match id {
        SuiteId::Prop42 => trial_prop42(plan, rng, cfg),
        SuiteId::Prop44 => trial_prop44(plan, rng, cfg),
        SuiteId::Prop45 => trial_prop45(plan, rng, cfg),
        SuiteId::Thm52 => trial_thm52(plan, rng, cfg),
        SuiteId::Cor53 => trial_cor53(plan, rng, cfg),
        SuiteId::Counterexample => trial_counterexample(plan),
        SuiteId::Cor61 => trial_cor61(plan, rng, cfg),
        SuiteId::Cor62 => trial_cor62(plan, rng, cfg),
        SuiteId::Crossnorms => trial_crossnorms(plan, rng, cfg),
    }
}

fn no_ctx(error: CoreError) -> TrialError {
    TrialError {
        error,
        instance: Value::Null,
    }
}

fn bilinear_instance(phi: &BilinearMap) -> Result<Value, TrialError> {
    let d = BilinearDescriptor::from_bilinear(phi).map_err(no_ctx)?;
    Ok(serde_json::to_value(d).expect("descriptor serialization cannot fail"))
}

fn tensor_instance(t: &TensorElement) -> Result<Value, TrialError> {
    let d = TensorDescriptor::from_tensor(t).map_err(no_ctx)?;
    Ok(serde_json::to_value(d).expect("descriptor serialization cannot fail"))
}

fn extend_instance(
    phi: &BilinearMap,
    m: &Subspace,
    n: &Subspace,
    e: Option<&Projection>,
    p: Option<&Projection>,
) -> Result<Value, TrialError> {
    // φ is given by its coefficients on M × N coordinates; the descriptor
    // carries nominal ℓp spaces of the matching dimensions, since the
    // extension rebuilds the map on the subspaces' coordinate spaces anyway.
    let phi_desc = BilinearDescriptor {
        x: SpaceDescriptor {
            dim: m.dim(),
            p: PDescriptor(m.ambient().p().value()),
        },
        y: SpaceDescriptor {
            dim: n.dim(),
            p: PDescriptor(n.ambient().p().value()),
        },
        z: SpaceDescriptor::from_space(phi.z()).map_err(no_ctx)?,
        coeffs: phi.coeffs().iter().map(matrix_to_rows).collect(),
    };
    let d = ExtendInputDescriptor {
        phi: phi_desc,
        m: SubspaceDescriptor::from_subspace(m).map_err(no_ctx)?,
        n: SubspaceDescriptor::from_subspace(n).map_err(no_ctx)?,
        e: e.map(|pr| matrix_to_rows(pr.matrix())),
        p: p.map(|pr| matrix_to_rows(pr.matrix())),
    };
    Ok(serde_json::to_value(d).expect("descriptor serialization cannot fail"))
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-12)
}

/// Curried operator norm against the direct bilinear norm.
fn trial_prop42(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let x = gen::random_space(rng, (1, plan.dims), &plan.p_values).map_err(no_ctx)?;
    let y = gen::random_space(rng, (1, plan.dims), &plan.p_values).map_err(no_ctx)?;
    let z = gen::random_space(rng, (1, plan.dims.min(3)), &plan.p_values).map_err(no_ctx)?;
    let phi = gen::random_bilinear(rng, x, y, z).map_err(no_ctx)?;
    let instance = bilinear_instance(&phi)?;

    let direct = phi.norm(cfg).map_err(ctx(&instance))?;
    let curried = phi.curry().operator_norm(cfg).map_err(ctx(&instance))?;

    let mut out = TrialOutcome::new();
    out.check(
        "equality",
        rel_gap(direct, curried),
        plan.tol("equality"),
        &instance,
    );
    Ok(out)
}

/// Linearized operator norm on the projective tensor square against the
/// bilinear norm, on Euclidean factors.
fn trial_prop44(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let nx = gen::pick_dim(rng, 1, plan.dims).map_err(no_ctx)?;
    let ny = gen::pick_dim(rng, 1, plan.dims).map_err(no_ctx)?;
    let nz = gen::pick_dim(rng, 1, plan.dims.min(3)).map_err(no_ctx)?;
    let phi = gen::random_bilinear(
        rng,
        NormedSpace::l2(nx),
        NormedSpace::l2(ny),
        NormedSpace::l2(nz),
    )
    .map_err(no_ctx)?;
    let instance = bilinear_instance(&phi)?;

    let direct = phi.norm(cfg).map_err(ctx(&instance))?;
    let lifted = linearize(&phi).operator_norm(cfg).map_err(ctx(&instance))?;

    let mut out = TrialOutcome::new();
    out.check(
        "equality",
        rel_gap(direct, lifted),
        plan.tol("equality"),
        &instance,
    );
    Ok(out)
}

/// Three-way agreement of the projective bounds with the singular-value sum
/// on Euclidean factors.
fn trial_prop45(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let nx = gen::pick_dim(rng, 1, plan.dims).map_err(no_ctx)?;
    let ny = gen::pick_dim(rng, 1, plan.dims).map_err(no_ctx)?;
    let terms = gen::pick_dim(rng, 1, 3).map_err(no_ctx)?;
    let t = gen::random_tensor(rng, NormedSpace::l2(nx), NormedSpace::l2(ny), terms)
        .map_err(no_ctx)?;
    let instance = tensor_instance(&t)?;

    let report = t.projective_norm(cfg).map_err(ctx(&instance))?;
    let reference = oracle::nuclear_norm(t.coeff_matrix());

    let worst = rel_gap(report.projective_upper, reference)
        .max(rel_gap(report.projective_dual_lower, reference))
        .max(rel_gap(report.projective_upper, report.projective_dual_lower));

    let mut out = TrialOutcome::new();
    out.check("agreement", worst, plan.tol("agreement"), &instance);
    Ok(out)
}

/// Extension chain ‖φ‖ ≤ ‖φ̂‖ ≤ ‖φ‖·‖E‖·‖P‖ with arbitrary projections.
fn trial_thm52(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let x = gen::random_space(rng, (2, plan.dims), &plan.p_values).map_err(no_ctx)?;
    let y = gen::random_space(rng, (2, plan.dims), &plan.p_values).map_err(no_ctx)?;
    let m = gen::random_subspace(rng, &x, None).map_err(no_ctx)?;
    let n = gen::random_subspace(rng, &y, None).map_err(no_ctx)?;
    let e = gen::random_projection(rng, &m).map_err(no_ctx)?;
    let p = gen::random_projection(rng, &n).map_err(no_ctx)?;
    let z = gen::random_space(rng, (1, plan.dims.min(3)), &plan.p_values).map_err(no_ctx)?;
    let phi =
        gen::random_bilinear(rng, m.coordinate_space(), n.coordinate_space(), z).map_err(no_ctx)?;
    let instance = extend_instance(&phi, &m, &n, Some(&e), Some(&p))?;

    let res = extend_bilinear(&phi, &m, &n, &e, &p, cfg).map_err(ctx(&instance))?;

    let mut out = TrialOutcome::new();
    let lower_violation = (res.phi_norm - res.phi_hat_norm).max(0.0);
    let upper_violation =
        (res.phi_hat_norm - res.phi_norm * res.e_norm * res.p_norm).max(0.0);
    out.check(
        "chain",
        lower_violation.max(upper_violation),
        plan.tol("chain"),
        &instance,
    );
    out.check(
        "restriction",
        res.restriction_residual,
        plan.tol("restriction"),
        &instance,
    );
    Ok(out)
}

/// Norm preservation under orthogonal projections on Euclidean ambients.
fn trial_cor53(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let nx = gen::pick_dim(rng, 2, plan.dims).map_err(no_ctx)?;
    let ny = gen::pick_dim(rng, 2, plan.dims).map_err(no_ctx)?;
    let x = NormedSpace::l2(nx);
    let y = NormedSpace::l2(ny);
    let m = gen::random_subspace(rng, &x, None).map_err(no_ctx)?;
    let n = gen::random_subspace(rng, &y, None).map_err(no_ctx)?;
    let nz = gen::pick_dim(rng, 1, plan.dims.min(3)).map_err(no_ctx)?;
    let phi = gen::random_bilinear(
        rng,
        m.coordinate_space(),
        n.coordinate_space(),
        NormedSpace::l2(nz),
    )
    .map_err(no_ctx)?;
    let e = m.orthogonal_projection().map_err(no_ctx)?;
    let p = n.orthogonal_projection().map_err(no_ctx)?;
    let instance = extend_instance(&phi, &m, &n, Some(&e), Some(&p))?;

    let res = extend_bilinear(&phi, &m, &n, &e, &p, cfg).map_err(ctx(&instance))?;

    let mut out = TrialOutcome::new();
    out.check(
        "equality",
        (res.phi_hat_norm - res.phi_norm).abs(),
        plan.tol("equality"),
        &instance,
    );
    out.check(
        "restriction",
        res.restriction_residual,
        plan.tol("restriction"),
        &instance,
    );
    Ok(out)
}

/// The oblique-projection fixture; deterministic, so trials are identical.
fn trial_counterexample(plan: &SuitePlan) -> Result<TrialOutcome, TrialError> {
    let record = oblique_projection_counterexample().map_err(no_ctx)?;
    let r = &record.result;
    let instance = Value::Null;

    let mut out = TrialOutcome::new();
    let tol = plan.tol("equality");
    out.check("equality", (r.e_norm - 2f64.sqrt()).abs(), tol, &instance);
    out.check("equality", (r.phi_norm - 1.0).abs(), tol, &instance);
    out.check("equality", (r.phi_hat_norm - 1.0).abs(), tol, &instance);
    out.details = Some(json!({
        "e_norm": r.e_norm,
        "p_norm": r.p_norm,
        "phi_norm": r.phi_norm,
        "phi_hat_norm": r.phi_hat_norm,
        "restriction_residual": r.restriction_residual,
        "narrative": record.narrative,
    }));
    Ok(out)
}

/// Operator-norm preservation for extensions of linear maps on the
/// projective tensor square (Euclidean, orthogonal projections).
fn trial_cor61(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let nx = gen::pick_dim(rng, 2, plan.dims).map_err(no_ctx)?;
    let ny = gen::pick_dim(rng, 2, plan.dims).map_err(no_ctx)?;
    let x = NormedSpace::l2(nx);
    let y = NormedSpace::l2(ny);
    let m = gen::random_subspace(rng, &x, None).map_err(no_ctx)?;
    let n = gen::random_subspace(rng, &y, None).map_err(no_ctx)?;
    let nz = gen::pick_dim(rng, 1, 2).map_err(no_ctx)?;
    let phi = gen::random_bilinear(
        rng,
        m.coordinate_space(),
        n.coordinate_space(),
        NormedSpace::l2(nz),
    )
    .map_err(no_ctx)?;
    let e = m.orthogonal_projection().map_err(no_ctx)?;
    let p = n.orthogonal_projection().map_err(no_ctx)?;
    let instance = extend_instance(&phi, &m, &n, Some(&e), Some(&p))?;

    let t = linearize(&phi);
    let res = extend_linear_on_tensor(&t, &m, &n, &e, &p, cfg).map_err(ctx(&instance))?;
    let t_norm = t.operator_norm(cfg).map_err(ctx(&instance))?;
    let ext_norm = res.map.operator_norm(cfg).map_err(ctx(&instance))?;

    let mut out = TrialOutcome::new();
    out.check(
        "restriction",
        res.linear_restriction_residual,
        plan.tol("restriction"),
        &instance,
    );
    out.check(
        "equality",
        rel_gap(t_norm, ext_norm),
        plan.tol("equality"),
        &instance,
    );
    Ok(out)
}

/// Embedded projective norms: ambient ≤ subspace for every exponent, with
/// equality on Euclidean ambients.
fn trial_cor62(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let p_exp = gen::pick_p(rng, &plan.p_values).map_err(no_ctx)?;
    let nx = gen::pick_dim(rng, 2, plan.dims).map_err(no_ctx)?;
    let ny = gen::pick_dim(rng, 2, plan.dims).map_err(no_ctx)?;
    let x = NormedSpace::lp(nx, p_exp).map_err(no_ctx)?;
    let y = NormedSpace::lp(ny, p_exp).map_err(no_ctx)?;
    let m = gen::random_subspace(rng, &x, None).map_err(no_ctx)?;
    let n = gen::random_subspace(rng, &y, None).map_err(no_ctx)?;
    let terms: Vec<_> = (0..2)
        .map(|_| {
            let cu = gen::standard_normal_vector(rng, m.dim());
            let cv = gen::standard_normal_vector(rng, n.dim());
            Ok((m.embed(&cu)?, n.embed(&cv)?))
        })
        .collect::<Result<_, CoreError>>()
        .map_err(no_ctx)?;
    let t = TensorElement::new(x, y, terms).map_err(no_ctx)?;

    let instance = json!({
        "tensor": serde_json::to_value(TensorDescriptor::from_tensor(&t).map_err(no_ctx)?)
            .expect("descriptor serialization cannot fail"),
        "M": serde_json::to_value(SubspaceDescriptor::from_subspace(&m).map_err(no_ctx)?)
            .expect("descriptor serialization cannot fail"),
        "N": serde_json::to_value(SubspaceDescriptor::from_subspace(&n).map_err(no_ctx)?)
            .expect("descriptor serialization cannot fail"),
    });

    let pair = t
        .embedded_projective_norms(&m, &n, cfg)
        .map_err(ctx(&instance))?;

    let mut out = TrialOutcome::new();
    out.check(
        "ordering",
        (pair.ambient - pair.subspace).max(0.0),
        plan.tol("ordering"),
        &instance,
    );
    if p_exp.value() == 2.0 {
        out.check(
            "equality",
            rel_gap(pair.subspace, pair.ambient),
            plan.tol("equality"),
            &instance,
        );
    }
    Ok(out)
}

/// Injective ≤ projective on random tensors, and both crossnorms collapse
/// to the norm product on single tensors.
fn trial_crossnorms(
    plan: &SuitePlan,
    rng: &mut ChaCha8Rng,
    cfg: &OptimizerConfig,
) -> Result<TrialOutcome, TrialError> {
    let x = gen::random_space(rng, (1, plan.dims), &plan.p_values).map_err(no_ctx)?;
    let y = gen::random_space(rng, (1, plan.dims), &plan.p_values).map_err(no_ctx)?;
    let terms = gen::pick_dim(rng, 1, 3).map_err(no_ctx)?;
    let t = gen::random_tensor(rng, x.clone(), y.clone(), terms).map_err(no_ctx)?;
    let instance = tensor_instance(&t)?;

    let report = t.projective_norm(cfg).map_err(ctx(&instance))?;
    let mut out = TrialOutcome::new();
    out.check(
        "ordering",
        (report.injective - report.projective_upper).max(0.0),
        plan.tol("ordering"),
        &instance,
    );

    let xv = gen::standard_normal_vector(rng, x.dim());
    let yv = gen::standard_normal_vector(rng, y.dim());
    let single =
        TensorElement::single(x.clone(), y.clone(), xv.clone(), yv.clone()).map_err(no_ctx)?;
    let single_instance = tensor_instance(&single)?;
    let product = x.norm(&xv).map_err(no_ctx)? * y.norm(&yv).map_err(no_ctx)?;
    let s = single.projective_norm(cfg).map_err(ctx(&single_instance))?;
    out.check(
        "collapse",
        (s.injective - product).abs(),
        plan.tol("collapse"),
        &single_instance,
    );
    out.check(
        "collapse",
        (s.projective_upper - product).abs(),
        plan.tol("collapse"),
        &single_instance,
    );
    Ok(out)
}
