//! Ready-made configurations: two atoms, two half-spaces, two cylinders, and
//! a sphere or a thin cylinder facing a plate.

mod asymptotics;
mod atoms;
mod cylinder_plate;
mod cylinders;
mod plates;
mod sphere_plate;

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub use asymptotics::{
    cylinder_plate_dielectric, cylinder_plate_pec_cylinder, cylinder_plate_pec_plate, phi_integral, sphere_plate_asymptotic,
    sphere_polarizabilities, PhiTarget,
};
pub use atoms::{two_atoms_energy, AtomMode, TwoAtoms};
pub use cylinder_plate::{cylinder_plate_energy, CylinderPlate, CylinderPlateMode};
pub use cylinders::{two_cylinders_energy, CylinderPipeline, TwoCylinders};
pub use plates::{lifshitz_energy, PlatePipeline, Plates};
pub use sphere_plate::{sphere_plate_energy, SpherePlate, SpherePlateMode};

use crate::energy::{
    apply_medium, integrate_energy, matsubara_free_energy, EnergyResult, Executor, Integrand, MatsubaraSpec, MediumDependent,
    TruncationPolicy,
};
use crate::materials::Medium;
use crate::quadrature::{gauss_legendre_on, QuadratureSpec};
use crate::translation::Arrangement;
use crate::{Error, Result};

/// Accuracy targets and caps shared by all configurations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub quadrature: QuadratureSpec,
    /// Largest partial-wave order (l_max or n_max) before giving up.
    pub order_cap: usize,
    pub truncation_rtol: f64,
    pub matsubara: MatsubaraSpec,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            quadrature: QuadratureSpec::default(),
            order_cap: 60,
            truncation_rtol: 1e-4,
            matsubara: MatsubaraSpec::default(),
        }
    }
}

const RADIAL_PANEL_NODES: usize = 16;

/// Nodes and weights for ∫₀^∞ k⊥ dk⊥ f(k⊥) when f decays like
/// e^{−2d√(k² + k⊥²)}. With k⊥ = k sinh τ the integrand is smooth on the
/// scale of k as well as of 1/d, so panels of unit width in τ cover both.
pub(crate) fn radial_rule(k: f64, d: f64) -> (Vec<f64>, Vec<f64>) {
    let (mut nodes, mut weights) = (Vec::new(), Vec::new());
    if k > 0.0 {
        let tau_max = (1.0 + 25.0 / (k * d)).acosh();
        // near τ = 0 the exponential narrows to a width of about 1/√(kd)
        let width = (1.5 / (2.0 * k * d).sqrt()).min(1.0);
        let panels = (tau_max / width).ceil().max(1.0) as usize;
        let width = tau_max / panels as f64;
        for i in 0..panels {
            let (t, w) = gauss_legendre_on(RADIAL_PANEL_NODES, i as f64 * width, (i + 1) as f64 * width);
            for (t, w) in t.iter().zip(&w) {
                nodes.push(k * t.sinh());
                weights.push(w * k * k * t.sinh() * t.cosh());
            }
        }
    } else {
        let q_max = 25.0 / d;
        let panels = 25;
        let width = q_max / panels as f64;
        for i in 0..panels {
            let (q, w) = gauss_legendre_on(RADIAL_PANEL_NODES, i as f64 * width, (i + 1) as f64 * width);
            for (q, w) in q.iter().zip(&w) {
                nodes.push(*q);
                weights.push(w * q);
            }
        }
    }
    (nodes, weights)
}

/// A configuration with everything needed to evaluate its energy.
#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    TwoAtoms(TwoAtoms),
    ParallelPlates(Plates),
    TwoCylinders(TwoCylinders),
    SpherePlate(SpherePlate, SpherePlateMode),
    CylinderPlate(CylinderPlate, CylinderPlateMode),
}

impl Geometry {
    /// The same bodies embedded in a uniform medium.
    pub fn with_medium(self, medium: Medium) -> Result<Self> {
        Ok(match self {
            Geometry::TwoAtoms(g) => Geometry::TwoAtoms(apply_medium(g, medium)?),
            Geometry::ParallelPlates(g) => Geometry::ParallelPlates(apply_medium(g, medium)?),
            Geometry::TwoCylinders(g) => Geometry::TwoCylinders(apply_medium(g, medium)?),
            Geometry::SpherePlate(g, m) => Geometry::SpherePlate(apply_medium(g, medium)?, m),
            Geometry::CylinderPlate(g, m) => Geometry::CylinderPlate(apply_medium(g, medium)?, m),
        })
    }

    pub fn medium(&self) -> &Medium {
        match self {
            Geometry::TwoAtoms(g) => g.medium(),
            Geometry::ParallelPlates(g) => g.medium(),
            Geometry::TwoCylinders(g) => g.medium(),
            Geometry::SpherePlate(g, _) => g.medium(),
            Geometry::CylinderPlate(g, _) => g.medium(),
        }
    }

    /// The separation parameter d of the configuration.
    pub fn separation(&self) -> f64 {
        match self {
            Geometry::TwoAtoms(g) => g.d,
            Geometry::ParallelPlates(g) => g.d,
            Geometry::TwoCylinders(g) => g.d,
            Geometry::SpherePlate(g, _) => g.d,
            Geometry::CylinderPlate(g, _) => g.d,
        }
    }

    /// Narrowest surface-to-surface distance.
    pub fn gap(&self) -> f64 {
        match self {
            Geometry::TwoAtoms(g) => g.d,
            Geometry::ParallelPlates(g) => g.d,
            Geometry::TwoCylinders(g) => g.gap(),
            Geometry::SpherePlate(g, _) => g.gap(),
            Geometry::CylinderPlate(g, _) => g.d - g.r,
        }
    }

    /// A copy at a different separation, validated like a new configuration.
    pub fn with_separation(&self, d: f64) -> Result<Self> {
        let medium = self.medium().clone();
        let g = match self {
            Geometry::TwoAtoms(g) => Geometry::TwoAtoms(TwoAtoms::new(d, g.alpha0, g.d10, g.mode)?),
            Geometry::ParallelPlates(g) => Geometry::ParallelPlates(Plates::new(d, g.a.clone(), g.b.clone())?),
            Geometry::TwoCylinders(g) => Geometry::TwoCylinders(match g.arrangement {
                Arrangement::Outside => TwoCylinders::outer(g.r_a, g.r_b, d)?,
                _ => TwoCylinders::nested(g.r_a, g.r_b, d)?,
            }),
            Geometry::SpherePlate(g, m) => Geometry::SpherePlate(SpherePlate::new(g.r, d, g.sphere.clone(), g.plate.clone())?, *m),
            Geometry::CylinderPlate(g, m) => {
                let mut c = CylinderPlate::new(g.r, d, g.cylinder.clone(), g.plate.clone())?;
                c.axial_nodes = g.axial_nodes;
                Geometry::CylinderPlate(c, *m)
            }
        };
        if medium.is_vacuum() {
            Ok(g)
        } else {
            g.with_medium(medium)
        }
    }

    /// The log-determinant integrand, or `None` for closed-form modes.
    pub fn integrand(&self) -> Option<&dyn Integrand> {
        match self {
            Geometry::TwoAtoms(g) => Some(g),
            Geometry::ParallelPlates(g) => Some(g),
            Geometry::TwoCylinders(g) => Some(g),
            Geometry::SpherePlate(g, SpherePlateMode::Full) => Some(g),
            Geometry::CylinderPlate(g, CylinderPlateMode::FullSmallRadius) => Some(g),
            _ => None,
        }
    }

    pub fn policy(&self, settings: &Settings) -> Result<TruncationPolicy> {
        match self {
            Geometry::TwoCylinders(g) => g.policy(settings),
            Geometry::SpherePlate(g, _) => g.policy(settings),
            _ => Ok(TruncationPolicy::default()),
        }
    }

    /// Zero-temperature energy (per area for plates, per length for
    /// cylinders).
    pub fn energy(&self, settings: &Settings, exec: &dyn Executor) -> Result<EnergyResult> {
        match self {
            Geometry::SpherePlate(g, m) => sphere_plate_energy(g, *m, settings, exec),
            Geometry::CylinderPlate(g, m) => cylinder_plate_energy(g, *m, settings, exec),
            _ => {
                let integrand = self.integrand().ok_or(Error::Unsupported("no integrand"))?;
                integrate_energy(integrand, &settings.quadrature, &self.policy(settings)?, exec)
            }
        }
    }

    /// Free energy at inverse temperature β = ħc/(k_B T), in length units.
    /// Partial-wave orders are those that converge the zero-temperature
    /// energy.
    pub fn free_energy(&self, beta: f64, settings: &Settings, exec: &dyn Executor) -> Result<EnergyResult> {
        let integrand = self
            .integrand()
            .ok_or(Error::Unsupported("closed-form modes have no finite-temperature version"))?;
        if let Geometry::TwoCylinders(g) = self {
            if !g.medium().is_vacuum() {
                return Err(Error::Unsupported("cylinders at finite temperature need vacuum"));
            }
        }
        let order = match integrand.initial_order() {
            Some(_) => self.energy(settings, exec)?.order,
            None => None,
        };
        matsubara_free_energy(integrand, beta, order, &settings.matsubara, exec)
    }
}

#[cfg(test)]
mod tests;
