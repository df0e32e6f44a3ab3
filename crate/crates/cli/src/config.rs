use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use staggered::lattice::{LatticeSpec, SymmetryOp};
use staggered::spectral::Method;
use staggered::spinor::MassTerm;
use staggered::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Scalar,
    #[default]
    Staggered,
    DiracGauge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MassKind {
    #[default]
    None,
    Susskind,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MassConfig {
    #[serde(default)]
    pub kind: MassKind,
    #[serde(default)]
    pub mu: f64,
}

impl MassConfig {
    pub fn term(&self) -> MassTerm {
        match self.kind {
            MassKind::None => MassTerm::None,
            MassKind::Susskind => MassTerm::Susskind(self.mu),
            MassKind::Alternating => MassTerm::Alternating(self.mu),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spectrum,
    Bands,
    Evolve,
    VerifySymmetry,
    Classify,
    GaugeFix,
    Staticity,
    SpinorCheck,
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Experiment parameters; each experiment reads the ones it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    /// Symmetry operation such as `"Rz"`, `"T(1,0,0)"` or `"Rx*Tz"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Scramble the field with a seeded random gauge before gauge fixing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scramble: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: [usize; 3],
    #[serde(default)]
    pub model: Model,
    #[serde(default)]
    pub mass: MassConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice: [4, 4, 4],
            model: Model::default(),
            mass: MassConfig::default(),
            experiment: None,
            params: Params::default(),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn lattice(&self) -> Result<LatticeSpec> {
        LatticeSpec::new(self.lattice)
    }

    pub fn seed(&self) -> u64 {
        self.params.seed.unwrap_or(0)
    }
}

/// Parses `"Rx"`, `"Rz"`, `"Tx"`, `"Ty"`, `"Tz"`, `"T(a,b,c)"` and products
/// written `A*B` (apply `B` first).
pub fn parse_symmetry(text: &str) -> Result<SymmetryOp> {
    let factor = |f: &str| -> Result<SymmetryOp> {
        let f = f.trim();
        match f {
            "Rx" => Ok(SymmetryOp::rx()),
            "Rz" => Ok(SymmetryOp::rz()),
            "Tx" => Ok(SymmetryOp::translation([1, 0, 0])),
            "Ty" => Ok(SymmetryOp::translation([0, 1, 0])),
            "Tz" => Ok(SymmetryOp::translation([0, 0, 1])),
            _ => {
                let inner = f
                    .strip_prefix("T(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Format(format!("unknown symmetry {f:?}")))?;
                let parts: Vec<i64> = inner
                    .split(',')
                    .map(|p| p.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Format(format!("bad translation {f:?}")))?;
                let a: [i64; 3] = parts
                    .try_into()
                    .map_err(|_| Error::Format(format!("translation {f:?} needs three components")))?;
                Ok(SymmetryOp::translation(a))
            }
        }
    };
    text.split('*')
        .map(factor)
        .try_fold(SymmetryOp::identity(), |acc, op| Ok(acc.compose(&op?)))
}
