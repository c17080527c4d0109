//! Experiment configuration (TOML, schema version 1).

use std::path::{Path, PathBuf};

use gaplabel::jacobi::CoefficientSpec;
use gaplabel::schwartzman::Character;
use gaplabel::solenoid::{DEFAULT_DEPTH, DEFAULT_LAMBDA, DEFAULT_WIDTH};
use gaplabel::systems::{
    CircleDoublingSystem, DynamicalSystem, FiniteCyclicSystem, Shift, SolenoidSystem, TorusAffineSystem,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub system: SystemConfig,
    #[serde(default)]
    pub coefficients: Option<CoefficientSpec>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub estimate: Option<EstimateConfig>,
    #[serde(default)]
    pub solenoid: SolenoidCheckConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemConfig {
    TorusAffine {
        matrix: Vec<Vec<i64>>,
        shift: Vec<ShiftConfig>,
    },
    FiniteCyclic {
        modulus: u64,
        multiplier: u64,
        #[serde(default)]
        offset: u64,
        /// the supporting orbit; defaults to the orbit of `base`
        #[serde(default)]
        support: Option<Vec<u64>>,
        #[serde(default)]
        base: Option<u64>,
    },
    CircleDoubling {},
    Solenoid {
        #[serde(default)]
        width: Option<u32>,
    },
}

/// A translation coordinate: a real number, or an exact fraction `"p/q"`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ShiftConfig {
    Real(f64),
    Exact(String),
}

impl ShiftConfig {
    fn to_shift(&self) -> Result<Shift, CliError> {
        match self {
            ShiftConfig::Real(x) => Ok(Shift::Real(*x)),
            ShiftConfig::Exact(s) => {
                let bad = || CliError::Config(format!("shift {s:?} is not a fraction p/q"));
                let (p, q) = s.split_once('/').map_or((s.as_str(), "1"), |(p, q)| (p, q));
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ok(Shift::rational(p, q))
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// `None` uses 20 · hull width / N
    pub min_width: Option<f64>,
    /// `None` uses the label tolerance 5/N
    pub membership_tol: Option<f64>,
    pub coeff_bound: u32,
    pub energy_points: usize,
    /// sizes for the connectedness scan; empty skips it
    pub schedule: Vec<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: 2000,
            samples: 1,
            seed: 1,
            min_width: None,
            membership_tol: None,
            coeff_bound: 10,
            energy_points: 1001,
            schedule: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub character: Character,
    pub beta: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

fn default_t_max() -> f64 {
    gaplabel::schwartzman::DEFAULT_T_MAX
}

fn default_dt() -> f64 {
    gaplabel::schwartzman::DEFAULT_DT
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolenoidCheckConfig {
    pub samples: usize,
    pub steps: usize,
    pub width: u32,
    pub depth: usize,
    pub lambda: f64,
}

impl Default for SolenoidCheckConfig {
    fn default() -> Self {
        Self { samples: 100, steps: 100, width: DEFAULT_WIDTH, depth: DEFAULT_DEPTH, lambda: DEFAULT_LAMBDA }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        if cfg.solver.n < 2 || cfg.solver.samples == 0 || cfg.solver.coeff_bound == 0 {
            return Err(CliError::Config("solver needs n ≥ 2, samples ≥ 1 and coeff_bound ≥ 1".into()));
        }
        Ok(cfg)
    }

    pub fn build_system(&self) -> Result<DynamicalSystem, CliError> {
        Ok(match &self.system {
            SystemConfig::TorusAffine { matrix, shift } => {
                let shift = shift.iter().map(ShiftConfig::to_shift).collect::<Result<Vec<_>, _>>()?;
                TorusAffineSystem::from_i64(matrix, shift)?.into()
            }
            SystemConfig::FiniteCyclic { modulus, multiplier, offset, support, base } => match (support, base) {
                (Some(s), None) => FiniteCyclicSystem::new(*modulus, *multiplier, *offset, s)?.into(),
                (None, b) => FiniteCyclicSystem::from_orbit(*modulus, *multiplier, *offset, b.unwrap_or(0))?.into(),
                (Some(_), Some(_)) => {
                    return Err(CliError::Config("give either support or base, not both".into()))
                }
            },
            SystemConfig::CircleDoubling {} => CircleDoublingSystem.into(),
            SystemConfig::Solenoid { width } => SolenoidSystem { width: width.unwrap_or(DEFAULT_WIDTH) }.into(),
        })
    }

    pub fn coefficients(&self) -> Result<&CoefficientSpec, CliError> {
        self.coefficients.as_ref().ok_or_else(|| CliError::Config("missing [coefficients] section".into()))
    }

    pub fn estimate(&self) -> Result<&EstimateConfig, CliError> {
        self.estimate.as_ref().ok_or_else(|| CliError::Config("missing [estimate] section".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let cfg = ExperimentConfig::parse(
            r#"
            schema_version = 1
            [system]
            kind = "torus-affine"
            matrix = [[1]]
            shift = ["1/3"]
            "#,
        )
        .unwrap();
        let sys = cfg.build_system().unwrap();
        assert_eq!(sys.torus().unwrap().shift(), &[Shift::rational(1, 3)]);
        assert_eq!(cfg.solver.n, 2000);
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        let base = "schema_version = 1\n[system]\nkind = \"circle-doubling\"\n";
        assert!(ExperimentConfig::parse(base).is_ok());
        assert!(ExperimentConfig::parse(&format!("{base}colour = 1\n")).is_err());
        assert!(ExperimentConfig::parse(&base.replace("= 1", "= 2")).is_err());
        assert!(ExperimentConfig::parse("schema_version = 1\n[system]\nkind = \"circle-doubling\"\nwidth = 3\n").is_err());
        assert!(ExperimentConfig::parse(&format!("{base}[solver]\nnn = 3\n")).is_err());
    }

    #[test]
    fn bad_fractions_are_config_errors() {
        let cfg = ExperimentConfig::parse(
            "schema_version = 1\n[system]\nkind = \"torus-affine\"\nmatrix = [[1]]\nshift = [\"1/0\"]\n",
        )
        .unwrap();
        assert!(matches!(cfg.build_system(), Err(CliError::Config(_))));
    }
}
