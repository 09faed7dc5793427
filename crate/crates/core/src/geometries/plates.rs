//! Two parallel half-spaces: the closed Lifshitz form and the same energy
//! assembled from plane-wave amplitudes and translations.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::radial_rule;
use crate::energy::{in_medium, integrate_energy, logdet_two_body, EnergyResult, Executor, Integrand, LogDet, MediumDependent, TruncationPolicy};
use crate::materials::{fresnel, MaterialModel, Medium};
use crate::quadrature::QuadratureSpec;
use crate::scattering::{plate_block, ChannelBasis, Part};
use crate::translation::{assemble_x, Arrangement, Displacement};
use crate::{Error, Result};

/// Upper half-space `a` and lower half-space `b` with a gap `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Plates {
    pub d: f64,
    pub a: MaterialModel,
    pub b: MaterialModel,
    medium: Medium,
}

impl Plates {
    pub fn new(d: f64, a: MaterialModel, b: MaterialModel) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Geometry("plate separation must be positive"));
        }
        for m in [&a, &b] {
            if matches!(m, MaterialModel::TwoLevelAtom { .. }) {
                return Err(Error::Material("a plate needs a bulk material"));
            }
        }
        Ok(Plates { d, a, b, medium: Medium::vacuum() })
    }
}

impl Integrand for Plates {
    fn length_scale(&self) -> f64 {
        self.d
    }

    /// (1/2π) ∫ k⊥ dk⊥ Σ_P ln(1 − r_a^P r_b^P e^{−2qd}).
    fn log_det(&self, kappa: f64, _order: usize) -> Result<LogDet> {
        let a = in_medium(&self.medium, &self.a, kappa)?;
        let b = in_medium(&self.medium, &self.b, kappa)?;
        let k = a.kappa;
        let (nodes, weights) = radial_rule(k, self.d);
        let mut acc = 0.0;
        for (kp, w) in nodes.iter().zip(&weights) {
            let q = (k * k + kp * kp).sqrt();
            let x = if q > 0.0 { k / q } else { 0.0 };
            let (ram, rae) = fresnel(a.eps, a.mu, x)?;
            let (rbm, rbe) = fresnel(b.eps, b.mu, x)?;
            let e = (-2.0 * q * self.d).exp();
            let t = (-ram * rbm * e).ln_1p() + (-rae * rbe * e).ln_1p();
            if !t.is_finite() {
                return Err(Error::Singular);
            }
            acc += w * t;
        }
        Ok(LogDet::new(acc / (2.0 * PI)))
    }
}

impl MediumDependent for Plates {
    fn medium(&self) -> &Medium {
        &self.medium
    }

    fn replace_medium(mut self, medium: Medium) -> Result<Self> {
        self.medium = medium;
        Ok(self)
    }
}

/// Energy per area of two half-spaces at separation `d`.
pub fn lifshitz_energy(d: f64, a: MaterialModel, b: MaterialModel, spec: &QuadratureSpec, exec: &dyn Executor) -> Result<EnergyResult> {
    integrate_energy(&Plates::new(d, a, b)?, spec, &TruncationPolicy::default(), exec)
}

/// The two half-spaces as a scattering problem: per in-plane momentum, an
/// upper plate (interior part) over a lower plate (exterior part) joined by
/// plane-wave V and W, averaged over a few directions of k⊥ and with the
/// lower plate shifted sideways.
#[derive(Clone, Debug, PartialEq)]
pub struct PlatePipeline {
    plates: Plates,
    azimuths: usize,
    offset: [f64; 2],
}

impl PlatePipeline {
    pub fn new(plates: Plates) -> Self {
        let d = plates.d;
        PlatePipeline { plates, azimuths: 3, offset: [0.3 * d, -0.2 * d] }
    }

    /// log det at one transverse momentum.
    pub fn log_det_at(&self, kappa: f64, k_perp: [f64; 2]) -> Result<LogDet> {
        let p = &self.plates;
        let a = in_medium(&p.medium, &p.a, kappa)?;
        let b = in_medium(&p.medium, &p.b, kappa)?;
        let k = a.kappa;
        let basis = ChannelBasis::plane(&[k_perp]);
        let fa = plate_block(basis.clone(), Part::Ii, k, |x, pol| {
            let (m, e) = fresnel(a.eps, a.mu, x)?;
            Ok(if pol == crate::Polarization::M { m } else { e })
        })?;
        let fb = plate_block(basis.clone(), Part::Ee, k, |x, pol| {
            let (m, e) = fresnel(b.eps, b.mu, x)?;
            Ok(if pol == crate::Polarization::M { m } else { e })
        })?;
        let x_ab = Displacement::new([self.offset[0], self.offset[1], -p.d])?;
        let (xab, xba) = assemble_x(Arrangement::BInsideA, &basis, k, &x_ab)?;
        logdet_two_body(&fa, &xab, &fb, &xba)
    }
}

impl Integrand for PlatePipeline {
    fn length_scale(&self) -> f64 {
        self.plates.d
    }

    fn log_det(&self, kappa: f64, _order: usize) -> Result<LogDet> {
        let k = self.plates.medium.index(kappa)? * kappa;
        let (nodes, weights) = radial_rule(k, self.plates.d);
        let phis: Vec<f64> = (0..self.azimuths).map(|j| 0.1 + 2.0 * PI * j as f64 / self.azimuths as f64).collect();
        let mut acc = LogDet::default();
        for (kp, w) in nodes.iter().zip(&weights) {
            for phi in &phis {
                let v = self.log_det_at(kappa, [kp * phi.cos(), kp * phi.sin()])?;
                acc = acc.add(v.scaled(w / (2.0 * PI * self.azimuths as f64)));
            }
        }
        Ok(acc)
    }
}

impl MediumDependent for PlatePipeline {
    fn medium(&self) -> &Medium {
        &self.plates.medium
    }

    fn replace_medium(mut self, medium: Medium) -> Result<Self> {
        self.plates.medium = medium;
        Ok(self)
    }
}
