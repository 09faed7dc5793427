//! Turning a configuration into energies, forces and integrand tables.

use std::collections::BTreeMap;
use std::path::Path;

use casimir_core::energy::{EnergyResult, Executor, Measure};
use casimir_core::geometries::{CylinderPlate, Geometry, Plates, Settings, SpherePlate, TwoAtoms, TwoCylinders};
use casimir_core::materials::{MaterialModel, Medium};
use casimir_core::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CylinderArrangement, GeometryConfig, Quantity, RunConfig, SweepParameter};
use crate::error::{CliError, CliResult};
use crate::exec::PoolExecutor;
use crate::materials::resolve;

/// Command-line values that take precedence over the configuration file.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub rtol: Option<f64>,
    pub lmax_cap: Option<usize>,
}

/// A validated configuration with its materials loaded.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: RunConfig,
    materials: BTreeMap<String, MaterialModel>,
    medium: Medium,
    pub settings: Settings,
}

/// Values of the parameters a sweep may change.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub separation: f64,
    pub radius: f64,
    pub radius_b: f64,
    pub beta: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    /// A quadrature, truncation or Richardson limit was reached.
    CapReached,
    Failed,
}

/// One output row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub sweep_param: &'static str,
    pub value: f64,
    pub status: Status,
    pub energy: Option<f64>,
    pub quad_err: Option<f64>,
    pub trunc_err: Option<f64>,
    pub lmax_used: Option<usize>,
    pub nodes_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Record {
    fn from_result(sweep_param: &'static str, value: f64, r: casimir_core::Result<EnergyResult>) -> Self {
        let base = Record {
            sweep_param,
            value,
            status: Status::Converged,
            energy: None,
            quad_err: None,
            trunc_err: None,
            lmax_used: None,
            nodes_used: None,
            message: None,
        };
        match r {
            Ok(e) => Record {
                energy: Some(e.value),
                quad_err: Some(e.quad_err),
                trunc_err: Some(e.trunc_err),
                lmax_used: e.order,
                nodes_used: Some(e.nodes),
                ..base
            },
            Err(e) => match e {
                Error::NoConvergence { order, nodes, .. } => Record {
                    status: Status::CapReached,
                    lmax_used: (order > 0).then_some(order),
                    nodes_used: Some(nodes),
                    message: Some(e.to_string()),
                    ..base
                },
                Error::OrderTooLarge { .. } => Record { status: Status::CapReached, message: Some(e.to_string()), ..base },
                e => Record { status: Status::Failed, message: Some(e.to_string()), ..base },
            },
        }
    }
}

/// 0 when every record converged, 2 when some hit a cap, 1 on any failure.
pub fn exit_code(records: &[Record]) -> i32 {
    if records.iter().any(|r| r.status == Status::Failed) {
        1
    } else if records.iter().any(|r| r.status == Status::CapReached) {
        2
    } else {
        0
    }
}

/// Relative Richardson error above which a force is reported as unconverged.
pub const FORCE_RTOL: f64 = 1e-3;

impl Scenario {
    /// `base` is the directory that relative table paths are resolved
    /// against.
    pub fn new(config: RunConfig, base: &Path, overrides: Overrides) -> CliResult<Self> {
        let materials = resolve(&config, base)?;
        let medium = match &config.medium {
            Some(name) => Medium::new(materials[name].clone()).map_err(|e| CliError::config("medium", e.to_string()))?,
            None => Medium::vacuum(),
        };
        let mut settings = Settings::default();
        let q = &config.quadrature;
        if let Some(n) = q.initial_nodes {
            settings.quadrature.initial_nodes = n;
        }
        if let Some(n) = q.max_refinements {
            settings.quadrature.max_refinements = n;
        }
        if let Some(r) = overrides.rtol.or(q.rtol) {
            settings.quadrature.rtol = r;
        }
        if let Some(r) = overrides.rtol.or(config.truncation.rtol) {
            settings.truncation_rtol = r;
        }
        if let Some(c) = overrides.lmax_cap.or(config.truncation.lmax_cap) {
            settings.order_cap = c;
        }
        if let Some(r) = overrides.rtol {
            if !(r > 0.0 && r.is_finite()) {
                return Err(CliError::Usage(format!("--rtol must be positive, got {r}")));
            }
        }
        let s = Scenario { config, materials, medium, settings };
        // the configuration itself must describe a valid body arrangement
        s.geometry(&s.base_point()).map_err(|e| match e {
            CliError::Core(e) => CliError::config("geometry", e.to_string()),
            e => e,
        })?;
        Ok(s)
    }

    pub fn from_file(path: &Path, overrides: Overrides) -> CliResult<Self> {
        let cfg = RunConfig::load(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::new(cfg, base, overrides)
    }

    pub fn base_point(&self) -> Point {
        let beta = self.config.beta;
        match &self.config.geometry {
            GeometryConfig::TwoAtoms { separation, .. } | GeometryConfig::ParallelPlates { separation, .. } => {
                Point { separation: *separation, radius: 0.0, radius_b: 0.0, beta }
            }
            GeometryConfig::TwoCylinders { separation, radius_a, radius_b, .. } => {
                Point { separation: *separation, radius: *radius_a, radius_b: *radius_b, beta }
            }
            GeometryConfig::SpherePlate { separation, radius, .. } | GeometryConfig::CylinderPlate { separation, radius, .. } => {
                Point { separation: *separation, radius: *radius, radius_b: 0.0, beta }
            }
        }
    }

    pub fn point(&self, parameter: SweepParameter, value: f64) -> Point {
        let mut p = self.base_point();
        match parameter {
            SweepParameter::Separation => p.separation = value,
            SweepParameter::Radius | SweepParameter::RadiusA => p.radius = value,
            SweepParameter::RadiusB => p.radius_b = value,
            SweepParameter::Beta => p.beta = Some(value),
        }
        p
    }

    fn material(&self, field: &str, name: &str) -> CliResult<MaterialModel> {
        self.materials
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::config(format!("geometry.{field}"), format!("material {name:?} is not defined")))
    }

    pub fn geometry(&self, p: &Point) -> CliResult<Geometry> {
        let g = match &self.config.geometry {
            GeometryConfig::TwoAtoms { atom, mode, .. } => match self.material("atom", atom)? {
                MaterialModel::TwoLevelAtom { alpha0, d10 } => {
                    Geometry::TwoAtoms(TwoAtoms::new(p.separation, alpha0, d10, (*mode).into())?)
                }
                _ => return Err(CliError::config("geometry.atom", "material must be a two_level_atom")),
            },
            GeometryConfig::ParallelPlates { a, b, .. } => {
                Geometry::ParallelPlates(Plates::new(p.separation, self.material("a", a)?, self.material("b", b)?)?)
            }
            GeometryConfig::TwoCylinders { arrangement, .. } => Geometry::TwoCylinders(match arrangement {
                CylinderArrangement::Outside => TwoCylinders::outer(p.radius, p.radius_b, p.separation)?,
                CylinderArrangement::Nested => TwoCylinders::nested(p.radius, p.radius_b, p.separation)?,
            }),
            GeometryConfig::SpherePlate { sphere, plate, mode, .. } => Geometry::SpherePlate(
                SpherePlate::new(p.radius, p.separation, self.material("sphere", sphere)?, self.material("plate", plate)?)?,
                (*mode).into(),
            ),
            GeometryConfig::CylinderPlate { cylinder, plate, mode, .. } => Geometry::CylinderPlate(
                CylinderPlate::new(p.radius, p.separation, self.material("cylinder", cylinder)?, self.material("plate", plate)?)?,
                (*mode).into(),
            ),
        };
        if self.medium.is_vacuum() {
            Ok(g)
        } else {
            Ok(g.with_medium(self.medium.clone())?)
        }
    }

    fn energy_of(&self, g: &Geometry, beta: Option<f64>, exec: &dyn Executor) -> casimir_core::Result<EnergyResult> {
        match beta {
            Some(b) => g.free_energy(b, &self.settings, exec),
            None => g.energy(&self.settings, exec),
        }
    }

    /// Energy, or −∂E/∂d when the configuration asks for forces.
    pub fn evaluate(&self, parameter: &'static str, value: f64, p: &Point, exec: &dyn Executor) -> Record {
        let g = match self.geometry(p) {
            Ok(g) => g,
            Err(e) => return Record::from_result(parameter, value, Err(core_error(e))),
        };
        match self.config.quantity {
            Quantity::Energy => Record::from_result(parameter, value, self.energy_of(&g, p.beta, exec)),
            Quantity::Force => self.force(parameter, value, &g, p.beta, exec),
        }
    }

    // Central differences at steps h and h/2 combined by Richardson
    // extrapolation; |D(h/2) − D(h)|/3 is reported as the difference error.
    fn force(&self, parameter: &'static str, value: f64, g: &Geometry, beta: Option<f64>, exec: &dyn Executor) -> Record {
        let d = g.separation();
        let h = self.config.force_step * g.gap();
        let mut energies = Vec::with_capacity(4);
        for offset in [h, -h, 0.5 * h, -0.5 * h] {
            let r = g.with_separation(d + offset).and_then(|gi| self.energy_of(&gi, beta, exec));
            match r {
                Ok(e) => energies.push(e),
                Err(e) => return Record::from_result(parameter, value, Err(e)),
            }
        }
        let d1 = (energies[0].value - energies[1].value) / (2.0 * h);
        let d2 = (energies[2].value - energies[3].value) / h;
        let deriv = d2 + (d2 - d1) / 3.0;
        let fd_err = (d2 - d1).abs() / 3.0;
        // R = (4 D(h/2) − D(h))/3 propagated from the energy error estimates
        let propagate = |f: fn(&EnergyResult) -> f64| {
            (4.0 / 3.0) * (f(&energies[2]) + f(&energies[3])) / h + (f(&energies[0]) + f(&energies[1])) / (6.0 * h)
        };
        let quad_err = fd_err + propagate(|e| e.quad_err);
        let trunc_err = propagate(|e| e.trunc_err);
        let force = -deriv;
        let converged = fd_err <= FORCE_RTOL * force.abs();
        Record {
            sweep_param: parameter,
            value,
            status: if converged { Status::Converged } else { Status::CapReached },
            energy: Some(force),
            quad_err: Some(quad_err),
            trunc_err: Some(trunc_err),
            lmax_used: energies.iter().filter_map(|e| e.order).max(),
            nodes_used: Some(energies.iter().map(|e| e.nodes).sum()),
            message: (!converged).then(|| format!("Richardson difference {fd_err:e} exceeds {FORCE_RTOL:e} of the force")),
        }
    }

    /// The configuration as given, labelled by its separation.
    pub fn run_single(&self, exec: &PoolExecutor) -> Record {
        let p = self.base_point();
        exec.install(|| self.evaluate("separation", p.separation, &p, exec))
    }

    /// All sweep points, evaluated concurrently and returned in grid order.
    pub fn run_sweep(&self, exec: &PoolExecutor) -> CliResult<Vec<Record>> {
        let sweep = self
            .config
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::config("sweep", "the sweep subcommand needs a sweep section"))?;
        let values = sweep.values()?;
        let name = sweep.parameter.name();
        Ok(exec.install(|| {
            values
                .par_iter()
                .map(|&v| self.evaluate(name, v, &self.point(sweep.parameter, v), exec))
                .collect()
        }))
    }

    /// ln det at `points` log-spaced values of κ (or p for polar integrands)
    /// between 10⁻³ and 30 inverse length scales.
    pub fn integrand_table(&self, points: usize, order: Option<usize>, exec: &PoolExecutor) -> CliResult<IntegrandTable> {
        let g = self.geometry(&self.base_point())?;
        let f = g.integrand().ok_or_else(|| CliError::Usage("closed-form modes have no integrand".into()))?;
        if points < 2 {
            return Err(CliError::Usage("need at least 2 integrand points".into()));
        }
        let order = match (order, f.initial_order()) {
            (Some(o), _) => o,
            (None, Some(_)) => g.policy(&self.settings)?.initial,
            (None, None) => 0,
        };
        let scale = f.length_scale();
        let (lo, hi) = ((1e-3f64).ln(), 30f64.ln());
        let s: Vec<f64> =
            (0..points).map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp() / scale).collect();
        let values = exec.map(&s, &|x| f.log_det(x, order));
        let mut rows = Vec::with_capacity(points);
        for (x, v) in s.iter().zip(values) {
            let v = v?;
            rows.push(IntegrandRow { s: *x, log_det: v.value, residue: v.residue });
        }
        let variable = match f.measure() {
            Measure::Frequency => "kappa",
            Measure::Polar => "p",
        };
        Ok(IntegrandTable { variable, order: f.initial_order().map(|_| order), rows })
    }
}

fn core_error(e: CliError) -> Error {
    match e {
        CliError::Core(e) => e,
        _ => Error::Geometry("invalid configuration at this point"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrandRow {
    pub s: f64,
    pub log_det: f64,
    pub residue: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrandTable {
    /// "kappa" or "p".
    pub variable: &'static str,
    pub order: Option<usize>,
    pub rows: Vec<IntegrandRow>,
}
