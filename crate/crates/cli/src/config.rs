//! Case configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use qcbound::beltrami::CoefficientField;
use qcbound::fem::FemOptions;
use qcbound::geometry::{Domain, QcMap};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Names accepted in `bounds_requested`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    PayneWeinberger,
    RayleighFaberKrahn,
    MakaiHayman,
    Monotonicity,
    /// Both sides of the volume-preserving sandwich.
    Sandwich,
    JacobianUpper,
    StabilityGap,
    QuasidiscUpper,
}

impl BoundName {
    pub const ALL: [BoundName; 8] = [
        BoundName::PayneWeinberger,
        BoundName::RayleighFaberKrahn,
        BoundName::MakaiHayman,
        BoundName::Monotonicity,
        BoundName::Sandwich,
        BoundName::JacobianUpper,
        BoundName::StabilityGap,
        BoundName::QuasidiscUpper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::PayneWeinberger => "payne_weinberger",
            BoundName::RayleighFaberKrahn => "rayleigh_faber_krahn",
            BoundName::MakaiHayman => "makai_hayman",
            BoundName::Monotonicity => "monotonicity",
            BoundName::Sandwich => "sandwich",
            BoundName::JacobianUpper => "jacobian_upper",
            BoundName::StabilityGap => "stability_gap",
            BoundName::QuasidiscUpper => "quasidisc_upper",
        }
    }

    /// Bounds stated for the Laplacian only.
    pub fn laplacian_only(self) -> bool {
        matches!(
            self,
            BoundName::PayneWeinberger | BoundName::RayleighFaberKrahn | BoundName::MakaiHayman | BoundName::Monotonicity
        )
    }

    /// Bounds that need an explicit map agreed with the coefficient.
    pub fn needs_map(self) -> bool {
        !self.laplacian_only()
    }

    pub fn needs_beta(self) -> bool {
        matches!(self, BoundName::JacobianUpper | BoundName::StabilityGap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FemConfig {
    #[serde(default = "default_refinements")]
    pub refinements: usize,
    #[serde(default = "default_h")]
    pub target_h: f64,
    #[serde(default = "default_count")]
    pub eigen_count: usize,
}

fn default_refinements() -> usize {
    FemOptions::default().refinements
}

fn default_h() -> f64 {
    FemOptions::default().target_h
}

fn default_count() -> usize {
    FemOptions::default().eigen_count
}

impl Default for FemConfig {
    fn default() -> Self {
        Self { refinements: default_refinements(), target_h: default_h(), eigen_count: default_count() }
    }
}

impl From<FemConfig> for FemOptions {
    fn from(c: FemConfig) -> Self {
        FemOptions { target_h: c.target_h, refinements: c.refinements, eigen_count: c.eigen_count }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    #[serde(default)]
    pub case_id: Option<String>,
    pub domain: Domain,
    pub coefficient: CoefficientField,
    #[serde(default)]
    pub bounds_requested: Vec<BoundName>,
    #[serde(default)]
    pub fem: Option<FemConfig>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub alpha_makai: Option<f64>,
    #[serde(default)]
    pub output: Option<OutputConfig>,
}

impl CaseConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: CaseConfig = serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn case_id(&self) -> String {
        self.case_id
            .clone()
            .unwrap_or_else(|| format!("{}_{}", self.domain.name(), self.coefficient.name()))
    }

    /// The built-in map agreed with the coefficient, when its source is the configured domain.
    pub fn agreed_map(&self) -> Option<QcMap> {
        let map = match self.coefficient {
            CoefficientField::Identity => QcMap::Identity,
            CoefficientField::Spiral => QcMap::Spiral,
            CoefficientField::EllipseAffine { a } => QcMap::EllipseAffine { a },
            CoefficientField::Petal => QcMap::Petal,
            CoefficientField::FromDilatation { .. } => return None,
        };
        (map.source_domain() == self.domain).then_some(map)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.domain.validate()?;
        self.coefficient.validate()?;
        if let Some(id) = &self.case_id {
            if id.is_empty() {
                return Err(CliError::config("case_id must not be empty"));
            }
        }
        for (i, b) in self.bounds_requested.iter().enumerate() {
            if self.bounds_requested[..i].contains(b) {
                return Err(CliError::config(format!("bound {} requested twice", b.as_str())));
            }
            if b.laplacian_only() && self.coefficient != CoefficientField::Identity {
                return Err(CliError::config(format!(
                    "bound {} holds for the Laplacian only; coefficient is {}",
                    b.as_str(),
                    self.coefficient.name()
                )));
            }
            if b.needs_map() && self.agreed_map().is_none() {
                return Err(CliError::config(format!(
                    "bound {} needs a built-in coefficient whose map is defined on the configured {} domain",
                    b.as_str(),
                    self.domain.name()
                )));
            }
        }
        if let Some(beta) = self.beta {
            if !(beta.is_finite() && beta > 1.0) {
                return Err(CliError::config(format!("beta = {beta} must be > 1")));
            }
        } else if let Some(b) = self.bounds_requested.iter().find(|b| b.needs_beta()) {
            return Err(CliError::config(format!("bound {} needs beta > 1", b.as_str())));
        }
        let makai = self.bounds_requested.contains(&BoundName::MakaiHayman);
        match (makai, self.alpha_makai) {
            (true, None) => return Err(CliError::config("makai_hayman needs alpha_makai")),
            (false, Some(_)) => return Err(CliError::config("alpha_makai given without requesting makai_hayman")),
            (true, Some(a)) if !(a.is_finite() && a > 0.0) => {
                return Err(CliError::config(format!("alpha_makai = {a} must be positive")))
            }
            _ => {}
        }
        if let Some(f) = self.fem {
            if f.refinements < 2 {
                return Err(CliError::config("fem.refinements must be at least 2"));
            }
            if !(f.target_h.is_finite() && f.target_h > 0.0) {
                return Err(CliError::config("fem.target_h must be positive"));
            }
            if f.eigen_count == 0 {
                return Err(CliError::config("fem.eigen_count must be at least 1"));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, ignoring where output goes.
    pub fn hash(&self) -> String {
        let mut canon = self.clone();
        canon.output = None;
        let text = serde_json::to_string(&canon).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
