//! One-off computations on JSON instance files: operator norms, bilinear
//! norms, tensor crossnorm reports, and extensions. These are the replay
//! path for suite failures — feed the recorded instance JSON and seed back
//! in to reproduce a single trial's numbers.

use std::path::PathBuf;

use bilinext_core::descriptor::{
    matrix_to_rows, rows_to_matrix, BilinearDescriptor, ExtendInputDescriptor, MapDescriptor,
    SubspaceDescriptor, TensorDescriptor,
};
use bilinext_core::{
    extend_bilinear, CoreError, CrossnormReport, EmbeddedProjectivePair, LinearMap,
    OptimizerConfig, Projection, Subspace, TensorElement,
};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use std::process::ExitCode;

use crate::report::{emit, to_json_pretty, SCHEMA_VERSION};
use crate::CliError;

#[derive(Args)]
pub struct ComputeArgs {
    /// Computation to run on the input file.
    #[arg(value_enum)]
    pub command: ComputeCommand,
    /// Input JSON instance file.
    pub input: PathBuf,
    /// Optimizer seed (use a failure entry's seed to replay it).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the result to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit a flat CSV row instead of JSON.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ComputeCommand {
    /// Operator norm of a linear map between ℓp spaces.
    OpNorm,
    /// Norm of a bilinear map (with exactness flag).
    BilinearNorm,
    /// Injective/projective crossnorm report for a tensor element; with
    /// subspaces present, also the embedded norm comparison.
    TensorNorm,
    /// Extension of a bilinear map off a subspace pair along projections.
    Extend,
}

#[derive(Serialize)]
struct OpNormOutput {
    schema_version: &'static str,
    command: &'static str,
    input: String,
    seed: u64,
    op_norm: f64,
}

#[derive(Serialize)]
struct BilinearNormOutput {
    schema_version: &'static str,
    command: &'static str,
    input: String,
    seed: u64,
    bilinear_norm: f64,
    exact: bool,
}

#[derive(Serialize)]
struct TensorNormOutput {
    schema_version: &'static str,
    command: &'static str,
    input: String,
    seed: u64,
    report: CrossnormReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    embedded: Option<EmbeddedProjectivePair>,
}

#[derive(Serialize)]
struct ExtendOutput {
    schema_version: &'static str,
    command: &'static str,
    input: String,
    seed: u64,
    phi_norm: f64,
    phi_hat_norm: f64,
    e_norm: f64,
    p_norm: f64,
    restriction_residual: f64,
    phi_hat: BilinearDescriptor,
    #[serde(rename = "E")]
    e: Vec<Vec<f64>>,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
}

/// Tensor-norm input: either a bare tensor descriptor or a wrapped object
/// carrying the subspace pair for the embedded comparison (the shape used
/// by embedded-norm suite failure entries).
#[derive(Deserialize)]
struct WrappedTensorInput {
    tensor: TensorDescriptor,
    #[serde(rename = "M", default)]
    m: Option<SubspaceDescriptor>,
    #[serde(rename = "N", default)]
    n: Option<SubspaceDescriptor>,
}

pub fn run(args: ComputeArgs) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let input_name = args.input.display().to_string();
    let cfg = OptimizerConfig::with_seed(args.seed);

    let (json_body, csv_row) = match args.command {
        ComputeCommand::OpNorm => op_norm(&text, &input_name, &cfg, args.seed)?,
        ComputeCommand::BilinearNorm => bilinear_norm(&text, &input_name, &cfg, args.seed)?,
        ComputeCommand::TensorNorm => tensor_norm(&text, &input_name, &cfg, args.seed)?,
        ComputeCommand::Extend => extend(&text, &input_name, &cfg, args.seed)?,
    };

    let body = if args.csv {
        let mut row = csv_row;
        row.push('\n');
        row
    } else {
        json_body
    };
    emit(&body, args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::usage(format!("input is not a valid {what}: {e}")))
}

fn core(err: CoreError) -> CliError {
    CliError::usage(err.to_string())
}

fn op_norm(
    text: &str,
    input: &str,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<(String, String), CliError> {
    let desc: MapDescriptor = parse(text, "linear map descriptor")?;
    let map = desc.to_map().map_err(core)?;
    let value = map.operator_norm(cfg).map_err(core)?;
    let out = OpNormOutput {
        schema_version: SCHEMA_VERSION,
        command: "op-norm",
        input: input.to_string(),
        seed,
        op_norm: value,
    };
    Ok((
        to_json_pretty(&out),
        format!("op-norm,{input},{value}"),
    ))
}

fn bilinear_norm(
    text: &str,
    input: &str,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<(String, String), CliError> {
    let desc: BilinearDescriptor = parse(text, "bilinear map descriptor")?;
    let phi = desc.to_bilinear().map_err(core)?;
    let report = phi.norm_report(cfg).map_err(core)?;
    let out = BilinearNormOutput {
        schema_version: SCHEMA_VERSION,
        command: "bilinear-norm",
        input: input.to_string(),
        seed,
        bilinear_norm: report.value,
        exact: report.exact,
    };
    Ok((
        to_json_pretty(&out),
        format!("bilinear-norm,{input},{},{}", report.value, report.exact),
    ))
}

fn tensor_norm(
    text: &str,
    input: &str,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<(String, String), CliError> {
    // Accept either a bare tensor descriptor or the wrapped form with
    // subspaces; the raw value tells the two apart by the "tensor" key.
    let raw: serde_json::Value = parse(text, "JSON document")?;
    let (tensor, subs): (TensorElement, Option<(Subspace, Subspace)>) =
        if raw.get("tensor").is_some() {
            let wrapped: WrappedTensorInput = parse(text, "tensor instance")?;
            let t = wrapped.tensor.to_tensor().map_err(core)?;
            let subs = match (wrapped.m, wrapped.n) {
                (Some(md), Some(nd)) => Some((
                    md.to_subspace().map_err(core)?,
                    nd.to_subspace().map_err(core)?,
                )),
                (None, None) => None,
                _ => {
                    return Err(CliError::usage(
                        "embedded comparison needs both subspaces M and N",
                    ))
                }
            };
            (t, subs)
        } else {
            let desc: TensorDescriptor = parse(text, "tensor descriptor")?;
            (desc.to_tensor().map_err(core)?, None)
        };

    let report = tensor.projective_norm(cfg).map_err(core)?;
    let embedded = match &subs {
        Some((m, n)) => Some(
            tensor
                .embedded_projective_norms(m, n, cfg)
                .map_err(core)?,
        ),
        None => None,
    };

    let mut row = format!(
        "tensor-norm,{input},{},{},{},{},{}",
        report.injective,
        report.projective_upper,
        report.projective_dual_lower,
        report.gap,
        report.certified
    );
    if let Some(pair) = &embedded {
        row.push_str(&format!(",{},{}", pair.subspace, pair.ambient));
    }
    let out = TensorNormOutput {
        schema_version: SCHEMA_VERSION,
        command: "tensor-norm",
        input: input.to_string(),
        seed,
        report,
        embedded,
    };
    Ok((to_json_pretty(&out), row))
}

fn extend(
    text: &str,
    input: &str,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<(String, String), CliError> {
    let desc: ExtendInputDescriptor = parse(text, "extension instance descriptor")?;
    let phi = desc.phi.to_bilinear().map_err(core)?;
    let m = desc.m.to_subspace().map_err(core)?;
    let n = desc.n.to_subspace().map_err(core)?;
    let e = projection_from(desc.e.as_deref(), &m).map_err(core)?;
    let p = projection_from(desc.p.as_deref(), &n).map_err(core)?;

    let res = extend_bilinear(&phi, &m, &n, &e, &p, cfg).map_err(core)?;
    let out = ExtendOutput {
        schema_version: SCHEMA_VERSION,
        command: "extend",
        input: input.to_string(),
        seed,
        phi_norm: res.phi_norm,
        phi_hat_norm: res.phi_hat_norm,
        e_norm: res.e_norm,
        p_norm: res.p_norm,
        restriction_residual: res.restriction_residual,
        phi_hat: BilinearDescriptor::from_bilinear(&res.phi_hat).map_err(core)?,
        e: matrix_to_rows(e.matrix()),
        p: matrix_to_rows(p.matrix()),
    };
    let row = format!(
        "extend,{input},{},{},{},{},{}",
        res.phi_norm, res.phi_hat_norm, res.e_norm, res.p_norm, res.restriction_residual
    );
    Ok((to_json_pretty(&out), row))
}

/// Builds the projection from explicit matrix rows, falling back to the
/// orthogonal projection onto the subspace when none are given.
fn projection_from(
    rows: Option<&[Vec<f64>]>,
    sub: &Subspace,
) -> Result<Projection, CoreError> {
    match rows {
        Some(rows) => {
            let matrix = rows_to_matrix(rows)?;
            let ambient = sub.ambient().clone();
            let map = LinearMap::new(ambient.clone(), ambient, matrix)?;
            Projection::new(map, sub.clone())
        }
        None => sub.orthogonal_projection(),
    }
}
