//! Leading large-separation energies of a small sphere or thin cylinder in
//! front of a plate, from zero-frequency responses only.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::materials::{fresnel, MaterialModel, Response};
use crate::quadrature::integrate_fixed;
use crate::{Error, Result};

const PHI_NODES: usize = 200;

/// Which zero-frequency plate integral to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiTarget {
    /// ∫₀¹ [(1 − x²/2) r^E − (x²/2) r^M] dx, weighting the electric
    /// polarizability of a sphere.
    SphereE,
    /// ∫₀¹ [(1 − x²/2) r^M − (x²/2) r^E] dx.
    SphereM,
    /// ∫₀¹ [r^E − x r^M]/(1 + x) dx, for a perfectly conducting cylinder.
    CylinderE,
}

fn static_response(m: &MaterialModel) -> Result<(Response, f64)> {
    Ok((m.permittivity(0.0)?, m.permeability(0.0)?))
}

/// Integral of the plate's static Fresnel coefficients for the target.
pub fn phi_integral(plate: &MaterialModel, target: PhiTarget) -> Result<f64> {
    let (eps, mu) = static_response(plate)?;
    let mut err = None;
    let v = integrate_fixed(PHI_NODES, 0.0, 1.0, |x| {
        let (rm, re) = match fresnel(eps, mu, x) {
            Ok(r) => r,
            Err(e) => {
                err = Some(e);
                return 0.0;
            }
        };
        let h = 0.5 * x * x;
        match target {
            PhiTarget::SphereE => (1.0 - h) * re - h * rm,
            PhiTarget::SphereM => (1.0 - h) * rm - h * re,
            PhiTarget::CylinderE => (re - x * rm) / (1.0 + x),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Static (α^M, α^E) of a sphere of radius R; a perfect conductor has
/// α^E = R³ and α^M = −R³/2.
pub fn sphere_polarizabilities(sphere: &MaterialModel, radius: f64) -> Result<(f64, f64)> {
    let r3 = radius.powi(3);
    let (eps, mu) = static_response(sphere)?;
    let am = (mu - 1.0) / (mu + 2.0) * r3;
    Ok(match eps {
        Response::Infinite => (-0.5 * r3, r3),
        Response::Finite(e) => (am, (e - 1.0) / (e + 2.0) * r3),
    })
}

fn check(radius: f64, d: f64) -> Result<()> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Geometry("radius must be positive"));
    }
    if !(d > radius) || !d.is_finite() {
        return Err(Error::Geometry("the center must lie farther than one radius from the plate"));
    }
    Ok(())
}

/// −(3/8πd⁴)(α^M φ^M + α^E φ^E) for a sphere of radius R whose center is a
/// distance d from the plate.
pub fn sphere_plate_asymptotic(radius: f64, d: f64, sphere: &MaterialModel, plate: &MaterialModel) -> Result<f64> {
    check(radius, d)?;
    let (am, ae) = sphere_polarizabilities(sphere, radius)?;
    let pm = phi_integral(plate, PhiTarget::SphereM)?;
    let pe = phi_integral(plate, PhiTarget::SphereE)?;
    Ok(-3.0 / (8.0 * PI * d.powi(4)) * (am * pm + ae * pe))
}

/// Energy per length of a thin non-magnetic dielectric cylinder, to order R².
pub fn cylinder_plate_dielectric(radius: f64, d: f64, cylinder: &MaterialModel, plate: &MaterialModel) -> Result<f64> {
    check(radius, d)?;
    let (eps_b, mu_b) = static_response(cylinder)?;
    let eb = eps_b.finite().ok_or(Error::Unsupported("the dielectric cylinder asymptote needs a finite permittivity"))?;
    if mu_b != 1.0 {
        return Err(Error::Unsupported("the dielectric cylinder asymptote needs a non-magnetic cylinder"));
    }
    let (eps, mu) = static_response(plate)?;
    let mut err = None;
    let integral = integrate_fixed(PHI_NODES, 0.0, 1.0, |x| match fresnel(eps, mu, x) {
        Ok((rm, re)) => (7.0 + eb - 4.0 * x * x) * re - (3.0 + eb) * x * x * rm,
        Err(e) => {
            err = Some(e);
            0.0
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(-3.0 * radius * radius / (128.0 * PI * d.powi(4)) * (eb - 1.0) / (eb + 1.0) * integral)
}

/// Energy per length of a thin cylinder with finite ε, μ in front of a
/// perfectly conducting plate, to order R².
pub fn cylinder_plate_pec_plate(radius: f64, d: f64, cylinder: &MaterialModel, plate: &MaterialModel) -> Result<f64> {
    check(radius, d)?;
    if static_response(plate)?.0 != Response::Infinite {
        return Err(Error::Unsupported("this asymptote needs a perfectly conducting plate"));
    }
    let (eps_b, mu) = static_response(cylinder)?;
    let eps = eps_b.finite().ok_or(Error::Unsupported("this asymptote needs a cylinder with finite permittivity"))?;
    let num = (eps - mu) * (9.0 + eps + mu + eps * mu);
    Ok(-radius * radius / (32.0 * PI * d.powi(4)) * num / ((1.0 + eps) * (1.0 + mu)))
}

/// Energy per length of a thin perfectly conducting cylinder, to leading
/// order in 1/log(R/d).
pub fn cylinder_plate_pec_cylinder(radius: f64, d: f64, cylinder: &MaterialModel, plate: &MaterialModel) -> Result<f64> {
    check(radius, d)?;
    if static_response(cylinder)?.0 != Response::Infinite {
        return Err(Error::Unsupported("this asymptote needs a perfectly conducting cylinder"));
    }
    let phi = phi_integral(plate, PhiTarget::CylinderE)?;
    Ok(phi / (16.0 * PI * d * d * (radius / d).ln()))
}
