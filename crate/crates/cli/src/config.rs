//! Run configuration: the JSON document read by every subcommand.
//!
//! The accepted layout is published as a JSON schema in
//! `schema/run-config.schema.json` (also printed by `casimir schema`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use casimir_core::geometries::{AtomMode, CylinderPlateMode, SpherePlateMode};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = include_str!("../schema/run-config.schema.json");

/// Material names that are always defined.
pub const BUILTIN_MATERIALS: [&str; 2] = ["vacuum", "pec"];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Unit in which every length (and inverse wave number) is given.
    pub length_unit: LengthUnit,
    #[serde(default)]
    pub materials: BTreeMap<String, MaterialConfig>,
    /// Name of the material filling the space between the bodies.
    #[serde(default)]
    pub medium: Option<String>,
    pub geometry: GeometryConfig,
    /// Inverse temperature ħc/(k_B T) in length units; absent means T = 0.
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub quantity: Quantity,
    /// Finite-difference step for forces, as a fraction of the gap.
    #[serde(default = "default_force_step")]
    pub force_step: f64,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub truncation: TruncationConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_force_step() -> f64 {
    0.02
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthUnit {
    Nm,
    Um,
    Mm,
    M,
    /// Dimensionless lengths.
    Natural,
}

impl LengthUnit {
    pub fn symbol(self) -> &'static str {
        match self {
            LengthUnit::Nm => "nm",
            LengthUnit::Um => "um",
            LengthUnit::Mm => "mm",
            LengthUnit::M => "m",
            LengthUnit::Natural => "natural",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MaterialConfig {
    Vacuum,
    PerfectConductor,
    Constant {
        eps: f64,
        #[serde(default = "one")]
        mu: f64,
    },
    TwoLevelAtom { alpha0: f64, d10: f64 },
    /// CSV file with columns `kappa,eps[,mu]`, relative to the config file.
    Tabulated { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometryConfig {
    TwoAtoms {
        separation: f64,
        atom: String,
        #[serde(default)]
        mode: AtomModeConfig,
    },
    ParallelPlates {
        separation: f64,
        a: String,
        b: String,
    },
    /// Perfectly conducting cylinders; `separation` is the axis distance.
    TwoCylinders {
        separation: f64,
        radius_a: f64,
        radius_b: f64,
        #[serde(default)]
        arrangement: CylinderArrangement,
    },
    /// `separation` runs from the sphere centre to the plate.
    SpherePlate {
        separation: f64,
        radius: f64,
        sphere: String,
        plate: String,
        #[serde(default)]
        mode: SpherePlateModeConfig,
    },
    /// `separation` runs from the cylinder axis to the plate.
    CylinderPlate {
        separation: f64,
        radius: f64,
        cylinder: String,
        plate: String,
        #[serde(default)]
        mode: CylinderPlateModeConfig,
    },
}

impl GeometryConfig {
    pub fn name(&self) -> &'static str {
        match self {
            GeometryConfig::TwoAtoms { .. } => "two_atoms",
            GeometryConfig::ParallelPlates { .. } => "parallel_plates",
            GeometryConfig::TwoCylinders { .. } => "two_cylinders",
            GeometryConfig::SpherePlate { .. } => "sphere_plate",
            GeometryConfig::CylinderPlate { .. } => "cylinder_plate",
        }
    }

    /// (field, material name) pairs referenced by the geometry.
    pub fn material_refs(&self) -> Vec<(&'static str, &str)> {
        match self {
            GeometryConfig::TwoAtoms { atom, .. } => vec![("atom", atom)],
            GeometryConfig::ParallelPlates { a, b, .. } => vec![("a", a), ("b", b)],
            GeometryConfig::TwoCylinders { .. } => vec![],
            GeometryConfig::SpherePlate { sphere, plate, .. } => vec![("sphere", sphere), ("plate", plate)],
            GeometryConfig::CylinderPlate { cylinder, plate, .. } => vec![("cylinder", cylinder), ("plate", plate)],
        }
    }

    /// (field, value) pairs of the lengths that must be positive.
    fn lengths(&self) -> Vec<(&'static str, f64)> {
        match self {
            GeometryConfig::TwoAtoms { separation, .. } | GeometryConfig::ParallelPlates { separation, .. } => {
                vec![("separation", *separation)]
            }
            GeometryConfig::TwoCylinders { separation, radius_a, radius_b, .. } => {
                vec![("separation", *separation), ("radius_a", *radius_a), ("radius_b", *radius_b)]
            }
            GeometryConfig::SpherePlate { separation, radius, .. } | GeometryConfig::CylinderPlate { separation, radius, .. } => {
                vec![("separation", *separation), ("radius", *radius)]
            }
        }
    }

    fn accepts(&self, p: SweepParameter) -> bool {
        match p {
            SweepParameter::Separation | SweepParameter::Beta => true,
            SweepParameter::Radius => {
                matches!(self, GeometryConfig::SpherePlate { .. } | GeometryConfig::CylinderPlate { .. })
            }
            SweepParameter::RadiusA | SweepParameter::RadiusB => matches!(self, GeometryConfig::TwoCylinders { .. }),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomModeConfig {
    #[default]
    FullLog,
    Quadratic,
}

impl From<AtomModeConfig> for AtomMode {
    fn from(m: AtomModeConfig) -> Self {
        match m {
            AtomModeConfig::FullLog => AtomMode::FullLog,
            AtomModeConfig::Quadratic => AtomMode::Quadratic,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CylinderArrangement {
    #[default]
    Outside,
    /// Cylinder a inside cylinder b.
    Nested,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpherePlateModeConfig {
    #[default]
    Full,
    Asymptotic,
}

impl From<SpherePlateModeConfig> for SpherePlateMode {
    fn from(m: SpherePlateModeConfig) -> Self {
        match m {
            SpherePlateModeConfig::Full => SpherePlateMode::Full,
            SpherePlateModeConfig::Asymptotic => SpherePlateMode::Asymptotic,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CylinderPlateModeConfig {
    #[default]
    FullSmallRadius,
    AsymptoticDielectric,
    AsymptoticPecPlate,
    AsymptoticPecCylinder,
}

impl From<CylinderPlateModeConfig> for CylinderPlateMode {
    fn from(m: CylinderPlateModeConfig) -> Self {
        match m {
            CylinderPlateModeConfig::FullSmallRadius => CylinderPlateMode::FullSmallRadius,
            CylinderPlateModeConfig::AsymptoticDielectric => CylinderPlateMode::AsymptoticDielectric,
            CylinderPlateModeConfig::AsymptoticPecPlate => CylinderPlateMode::AsymptoticPecPlate,
            CylinderPlateModeConfig::AsymptoticPecCylinder => CylinderPlateMode::AsymptoticPecCylinder,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    #[default]
    Energy,
    /// −∂E/∂d by central differences.
    Force,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rtol: Option<f64>,
    pub initial_nodes: Option<usize>,
    pub max_refinements: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    pub rtol: Option<f64>,
    pub lmax_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Separation,
    Radius,
    RadiusA,
    RadiusB,
    Beta,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Separation => "separation",
            SweepParameter::Radius => "radius",
            SweepParameter::RadiusA => "radius_a",
            SweepParameter::RadiusB => "radius_b",
            SweepParameter::Beta => "beta",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    /// Explicit values, or `range` below; exactly one must be given.
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
    #[serde(default)]
    pub range: Option<RangeConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl SweepConfig {
    /// The grid values in the order given.
    pub fn values(&self) -> CliResult<Vec<f64>> {
        match (&self.grid, &self.range) {
            (Some(g), None) => Ok(g.clone()),
            (None, Some(r)) => {
                if r.points < 2 {
                    return Err(CliError::config("sweep.range.points", "need at least 2 points"));
                }
                let n = (r.points - 1) as f64;
                let interior: Box<dyn Fn(f64) -> f64> = match r.spacing {
                    Spacing::Linear => Box::new(|t| r.start + (r.stop - r.start) * t),
                    Spacing::Log => {
                        if !(r.start > 0.0 && r.stop > 0.0) {
                            return Err(CliError::config("sweep.range", "log spacing needs positive start and stop"));
                        }
                        let (a, b) = (r.start.ln(), r.stop.ln());
                        Box::new(move |t| (a + (b - a) * t).exp())
                    }
                };
                // endpoints are taken verbatim so they never pick up rounding
                Ok((0..r.points)
                    .map(|i| match i {
                        0 => r.start,
                        i if i + 1 == r.points => r.stop,
                        i => interior(i as f64 / n),
                    })
                    .collect())
            }
            (Some(_), Some(_)) => Err(CliError::config("sweep", "give either grid or range, not both")),
            (None, None) => Err(CliError::config("sweep", "missing grid or range")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

fn positive(path: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(path, format!("must be positive and finite, got {v}")))
    }
}

/// Checks that a grid is non-empty, finite and strictly monotone in either
/// direction.
pub fn check_grid(path: &str, grid: &[f64]) -> CliResult<()> {
    if grid.is_empty() {
        return Err(CliError::config(path, "grid is empty"));
    }
    if let Some(i) = grid.iter().position(|v| !v.is_finite()) {
        return Err(CliError::config(format!("{path}[{i}]"), "not a finite number"));
    }
    if grid.len() > 1 {
        let up = grid[1] > grid[0];
        for (i, w) in grid.windows(2).enumerate() {
            let ok = if up { w[1] > w[0] } else { w[1] < w[0] };
            if !ok {
                return Err(CliError::config(format!("{path}[{}]", i + 1), "grid is not strictly monotone"));
            }
        }
    }
    Ok(())
}

impl RunConfig {
    /// Parses and validates a configuration; errors carry the JSON path of the
    /// offending field.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = match e.path().to_string() {
                p if p == "." => "<root>".to_string(),
                p => p,
            };
            CliError::config(path, e.inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    fn defined(&self, name: &str) -> bool {
        self.materials.contains_key(name) || BUILTIN_MATERIALS.contains(&name)
    }

    pub fn validate(&self) -> CliResult<()> {
        for (name, m) in &self.materials {
            let at = format!("materials.{name}");
            if BUILTIN_MATERIALS.contains(&name.as_str()) {
                return Err(CliError::config(at, "built-in material names cannot be redefined"));
            }
            match m {
                MaterialConfig::Constant { eps, mu } => {
                    positive(&format!("{at}.eps"), *eps)?;
                    if !(*mu >= 0.0 && mu.is_finite()) {
                        return Err(CliError::config(format!("{at}.mu"), "must be finite and non-negative"));
                    }
                }
                MaterialConfig::TwoLevelAtom { alpha0, d10 } => {
                    positive(&format!("{at}.alpha0"), *alpha0)?;
                    positive(&format!("{at}.d10"), *d10)?;
                }
                _ => {}
            }
        }
        for (field, name) in self.geometry.material_refs() {
            if !self.defined(name) {
                return Err(CliError::config(format!("geometry.{field}"), format!("material {name:?} is not defined")));
            }
        }
        if let Some(name) = &self.medium {
            if !self.defined(name) {
                return Err(CliError::config("medium", format!("material {name:?} is not defined")));
            }
        }
        for (field, v) in self.geometry.lengths() {
            positive(&format!("geometry.{field}"), v)?;
        }
        if let Some(b) = self.beta {
            positive("beta", b)?;
        }
        if !(self.force_step > 0.0 && self.force_step < 0.5) {
            return Err(CliError::config("force_step", "must lie in (0, 0.5)"));
        }
        if let Some(r) = self.quadrature.rtol {
            positive("quadrature.rtol", r)?;
        }
        if self.quadrature.initial_nodes == Some(0) {
            return Err(CliError::config("quadrature.initial_nodes", "must be positive"));
        }
        if let Some(r) = self.truncation.rtol {
            positive("truncation.rtol", r)?;
        }
        if self.truncation.lmax_cap == Some(0) {
            return Err(CliError::config("truncation.lmax_cap", "must be positive"));
        }
        if let Some(s) = &self.sweep {
            if !self.geometry.accepts(s.parameter) {
                return Err(CliError::config(
                    "sweep.parameter",
                    format!("{} cannot be swept for {}", s.parameter.name(), self.geometry.name()),
                ));
            }
            let path = if s.grid.is_some() { "sweep.grid" } else { "sweep.range" };
            let values = s.values()?;
            check_grid(path, &values)?;
            if let Some(i) = values.iter().position(|v| *v <= 0.0) {
                return Err(CliError::config(format!("{path}[{i}]"), "sweep values must be positive"));
            }
        }
        Ok(())
    }
}
