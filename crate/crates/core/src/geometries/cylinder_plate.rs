//! A thin cylinder parallel to a plate.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::asymptotics::{cylinder_plate_dielectric, cylinder_plate_pec_cylinder, cylinder_plate_pec_plate};
use super::Settings;
use crate::conversion::plane_to_cylindrical;
use crate::energy::{in_medium, integrate_energy, log_det_real, EnergyResult, Executor, Integrand, LogDet, MediumDependent, TruncationPolicy};
use crate::linalg::CMatrix;
use crate::materials::{fresnel, MaterialModel, Medium, Response};
use crate::quadrature::{gauss_legendre_on, semi_infinite_rule};
use crate::scattering::{dielectric_cylinder_block, Channel};
use crate::{Error, Polarization, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CylinderPlateMode {
    /// Full determinant with the |n| ≤ 1 thin-cylinder amplitudes.
    FullSmallRadius,
    AsymptoticDielectric,
    AsymptoticPecPlate,
    AsymptoticPecCylinder,
}

/// Cylinder of radius `r` whose axis sits a distance `d` above a plate.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderPlate {
    pub r: f64,
    pub d: f64,
    pub cylinder: MaterialModel,
    pub plate: MaterialModel,
    /// Gauss–Legendre nodes per side of the axial momentum integral.
    pub axial_nodes: usize,
    medium: Medium,
}

const PANEL_NODES: usize = 12;

impl CylinderPlate {
    pub fn new(r: f64, d: f64, cylinder: MaterialModel, plate: MaterialModel) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Geometry("cylinder radius must be positive"));
        }
        if !(d > r) || !d.is_finite() {
            return Err(Error::Geometry("the cylinder must not touch the plate (d > R)"));
        }
        for m in [&cylinder, &plate] {
            if matches!(m, MaterialModel::TwoLevelAtom { .. }) {
                return Err(Error::Material("cylinder and plate need bulk materials"));
            }
        }
        Ok(CylinderPlate { r, d, cylinder, plate, axial_nodes: 48, medium: Medium::vacuum() })
    }

    /// ln det(I − N) at frequency κ and axial momentum k_z.
    pub fn log_det_at(&self, kappa: f64, k_z: f64) -> Result<LogDet> {
        let c = in_medium(&self.medium, &self.cylinder, kappa)?;
        let pl = in_medium(&self.medium, &self.plate, kappa)?;
        if c.eps == Response::Infinite {
            return Err(Error::Unsupported("the thin-cylinder amplitudes need a finite permittivity"));
        }
        let k = c.kappa;
        let f = dielectric_cylinder_block(c.eps, c.mu, self.r, k, k_z)?;
        let channels: Vec<(i32, Polarization)> = f
            .basis
            .channels()
            .iter()
            .map(|ch| match *ch {
                Channel::Cylindrical { n, p } => (n, p),
                _ => unreachable!(),
            })
            .collect();
        let dim = channels.len();
        // k_y = p′ sinh t turns ∫dk_y e^{−2qd}/(2q) into ½∫dt e^{−2p′d cosh t}
        let pp = (k * k + k_z * k_z).sqrt();
        let t_max = (1.0 + 25.0 / (pp * self.d)).acosh();
        let panels = (2.0 * t_max).ceil().max(2.0) as usize;
        let panels = panels + panels % 2;
        let width = 2.0 * t_max / panels as f64;
        let mut ba = CMatrix::zeros(dim, dim);
        let mut dmat = CMatrix::zeros(dim, 2);
        for i in 0..panels {
            let a = -t_max + i as f64 * width;
            let (ts, ws) = gauss_legendre_on(PANEL_NODES, a, a + width);
            for (t, w) in ts.iter().zip(&ws) {
                let k_y = pp * t.sinh();
                let q = pp * t.cosh();
                let weight = 0.5 * w * (-2.0 * q * self.d).exp();
                let (rm, re) = fresnel(pl.eps, pl.mu, k / q)?;
                for (row, &(n, p)) in channels.iter().enumerate() {
                    for (col, q_pol) in Polarization::BOTH.iter().enumerate() {
                        dmat[(row, col)] = plane_to_cylindrical(k, k_y, k_z, n, p, *q_pol)?;
                    }
                }
                for (row, _) in channels.iter().enumerate() {
                    for (col, &(_, p2)) in channels.iter().enumerate() {
                        let mut acc = C64::new(0.0, 0.0);
                        for (iq, (q_pol, r)) in Polarization::BOTH.iter().zip([rm, re]).enumerate() {
                            let s = if *q_pol == p2 { -1.0 } else { 1.0 };
                            acc += dmat[(row, iq)] * dmat[(col, iq)].conj() * (r * s);
                        }
                        ba[(row, col)] += acc * weight;
                    }
                }
            }
        }
        let n = f.apply_left(&ba)?;
        log_det_real(&CMatrix::identity(dim).sub(&n)?)
    }
}

impl Integrand for CylinderPlate {
    fn length_scale(&self) -> f64 {
        self.d
    }

    /// (1/2π) ∫dk_z ln det(I − N).
    fn log_det(&self, kappa: f64, _order: usize) -> Result<LogDet> {
        let (nodes, weights) = semi_infinite_rule(self.axial_nodes, 1.0 / (2.0 * self.d));
        let mut acc = LogDet::default();
        for (kz, w) in nodes.iter().zip(&weights) {
            for sign in [1.0, -1.0] {
                acc = acc.add(self.log_det_at(kappa, sign * kz)?.scaled(w / (2.0 * PI)));
            }
        }
        Ok(acc)
    }
}

impl MediumDependent for CylinderPlate {
    fn medium(&self) -> &Medium {
        &self.medium
    }

    fn replace_medium(mut self, medium: Medium) -> Result<Self> {
        self.medium = medium;
        Ok(self)
    }
}

/// Energy per length in the requested mode. The closed forms hold in vacuum
/// only.
pub fn cylinder_plate_energy(config: &CylinderPlate, mode: CylinderPlateMode, settings: &Settings, exec: &dyn Executor) -> Result<EnergyResult> {
    if mode != CylinderPlateMode::FullSmallRadius && !config.medium.is_vacuum() {
        return Err(Error::Unsupported("the large-distance cylinder-plate formulas assume vacuum"));
    }
    let (r, d, cyl, plate) = (config.r, config.d, &config.cylinder, &config.plate);
    let v = match mode {
        CylinderPlateMode::FullSmallRadius => {
            return integrate_energy(config, &settings.quadrature, &TruncationPolicy::default(), exec);
        }
        CylinderPlateMode::AsymptoticDielectric => cylinder_plate_dielectric(r, d, cyl, plate)?,
        CylinderPlateMode::AsymptoticPecPlate => cylinder_plate_pec_plate(r, d, cyl, plate)?,
        CylinderPlateMode::AsymptoticPecCylinder => cylinder_plate_pec_cylinder(r, d, cyl, plate)?,
    };
    Ok(EnergyResult::closed_form(v))
}
