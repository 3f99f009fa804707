use std::path::{Path, PathBuf};

use cantor_core::cantor::{ConstructionError, Family, FamilySpec, SpecError};
use cantor_core::difference::DiffError;
use clap::ValueEnum;
use serde::Serialize;
use thiserror::Error;

use crate::verify::Theorem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Everything that stops a command from producing a report. All of these map to
/// exit code 2; failed assertions are reported, not raised.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}: {error}")]
    Spec { source_name: String, error: SpecError },
    #[error("--spec {0:?} is neither a readable file nor a preset (presets: {1})")]
    UnknownSpec(String, String),
    #[error("{path}: {error}")]
    Io { path: PathBuf, error: std::io::Error },
    #[error("{0}")]
    Incompatible(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: &Path, error: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            error,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: FamilySpec,
    pub max_stage: usize,
    pub budget: usize,
    pub theorem: Option<Theorem>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub emit_plot_data: bool,
}

/// `arg` is a path to a JSON spec or the name of a preset. A file wins if both exist.
pub fn load_spec(arg: &str) -> Result<FamilySpec, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return FamilySpec::from_json(&text).map_err(|error| CliError::Spec {
            source_name: arg.to_string(),
            error,
        });
    }
    FamilySpec::preset(arg)
        .ok_or_else(|| CliError::UnknownSpec(arg.to_string(), FamilySpec::preset_names().join(", ")))
}

/// Binary-tree families hold `2^n` components at stage `n`; if the budget cannot
/// take that, the stage is lowered to fit and a warning is returned.
pub fn clamp_stage(spec: &FamilySpec, max_stage: usize, budget: usize) -> (usize, Option<String>) {
    if !matches!(spec.family(), Family::Central | Family::Perturbed) {
        return (max_stage, None);
    }
    let fits = |n: usize| n < usize::BITS as usize && (1usize << n) <= budget;
    if fits(max_stage) {
        return (max_stage, None);
    }
    let clamped = (0..max_stage).rev().find(|&n| fits(n)).unwrap_or(0);
    let warning = format!(
        "warning: budget {budget} < 2^{max_stage}; max stage clamped to {clamped}"
    );
    (clamped, Some(warning))
}

impl RunConfig {
    pub fn new(
        spec: FamilySpec,
        max_stage: usize,
        budget: usize,
        theorem: Option<Theorem>,
        out: Option<PathBuf>,
        format: Format,
        emit_plot_data: bool,
    ) -> (Self, Option<String>) {
        let (max_stage, warning) = clamp_stage(&spec, max_stage, budget);
        let config = RunConfig {
            spec,
            max_stage,
            budget,
            theorem,
            out,
            format,
            emit_plot_data,
        };
        (config, warning)
    }
}
