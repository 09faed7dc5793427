//! A sphere above a plate: the full partial-wave determinant, block by
//! block in the azimuthal number m, and its large-distance limit.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::asymptotics::sphere_plate_asymptotic;
use super::Settings;
use crate::energy::{in_medium, integrate_energy, log_det_real, EnergyResult, Executor, Integrand, LogDet, MediumDependent, TruncationPolicy};
use crate::linalg::CMatrix;
use crate::materials::{fresnel, MaterialModel, Medium};
use crate::quadrature::gauss_laguerre;
use crate::scattering::mie_amplitude_scaled;
use crate::specfun::legendre_derivatives_scaled;
use crate::{Error, Polarization, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpherePlateMode {
    Full,
    Asymptotic,
}

/// Sphere of radius `r` whose center sits a distance `d` above a plate.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePlate {
    pub r: f64,
    pub d: f64,
    pub sphere: MaterialModel,
    pub plate: MaterialModel,
    medium: Medium,
}

// ln √(4π(2l+1)(l−m)!/(l(l+1)(l+m)!)) for m ≥ 0
fn ln_prefactor(l: usize, m: usize) -> f64 {
    let mut ln_ratio = 0.0;
    for k in (l - m + 1)..=(l + m) {
        ln_ratio += (k as f64).ln();
    }
    0.5 * ((4.0 * PI * (2 * l + 1) as f64 / (l * (l + 1)) as f64).ln() - ln_ratio)
}

// +1 for M, −1 for E: the sign of C_{kP} on the plane-wave side
fn c_sign(p: Polarization) -> f64 {
    match p {
        Polarization::M => 1.0,
        Polarization::E => -1.0,
    }
}

impl SpherePlate {
    pub fn new(r: f64, d: f64, sphere: MaterialModel, plate: MaterialModel) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Geometry("sphere radius must be positive"));
        }
        if !(d > r) || !d.is_finite() {
            return Err(Error::Geometry("the sphere must not touch the plate (d > R)"));
        }
        for m in [&sphere, &plate] {
            if matches!(m, MaterialModel::TwoLevelAtom { .. }) {
                return Err(Error::Material("sphere and plate need bulk materials"));
            }
        }
        Ok(SpherePlate { r, d, sphere, plate, medium: Medium::vacuum() })
    }

    pub fn gap(&self) -> f64 {
        self.d - self.r
    }

    pub fn policy(&self, settings: &Settings) -> Result<TruncationPolicy> {
        let mut p = TruncationPolicy::for_gap(self.r, self.gap(), settings.order_cap)?;
        p.rtol = settings.truncation_rtol;
        Ok(p)
    }

    /// Radial nodes used at truncation `l_max`; the integrand is a
    /// polynomial in q/κ of degree about 2 l_max for a perfect mirror.
    pub fn radial_nodes(l_max: usize) -> usize {
        2 * l_max + 40
    }

    /// The m-block of N at frequency κ over channels (l, P), l from
    /// max(1, m) to l_max with M before E, conjugated by |F|^½ so that
    /// entries stay finite at high orders. Its determinant and trace are
    /// those of the plain block.
    pub fn m_block(&self, kappa: f64, m: usize, l_max: usize) -> Result<CMatrix> {
        let rule = gauss_laguerre(Self::radial_nodes(l_max));
        self.m_block_with(kappa, m, l_max, &rule)
    }

    fn m_block_with(&self, kappa: f64, m: usize, l_max: usize, rule: &(Vec<f64>, Vec<f64>)) -> Result<CMatrix> {
        let s = in_medium(&self.medium, &self.sphere, kappa)?;
        let pl = in_medium(&self.medium, &self.plate, kappa)?;
        let k = s.kappa;
        if !(k > 0.0) {
            return Err(Error::Domain("sphere-plate N needs kappa > 0"));
        }
        let l_min = m.max(1);
        if l_min > l_max {
            return Ok(CMatrix::zeros(0, 0));
        }
        let nl = l_max - l_min + 1;
        // (ln|F|, sign) per channel, channel index 2(l − l_min) + (0 M, 1 E)
        let mut amp = Vec::with_capacity(2 * nl);
        for l in l_min..=l_max {
            for p in Polarization::BOTH {
                let (v, ln_scale) = mie_amplitude_scaled(s.eps, s.mu, self.r, k, l, p)?;
                amp.push((v.abs().ln() + ln_scale, v.signum()));
            }
        }
        if amp.iter().all(|a| a.0 == f64::NEG_INFINITY) {
            return Ok(CMatrix::zeros(2 * nl, 2 * nl));
        }
        let kd = k * self.d;
        let (nodes, weights) = rule;
        let nj = nodes.len();
        let mut g = CMatrix::zeros(2 * nl, 2 * nj);
        let mut refl = vec![0.0; 2 * nj];
        let ln_pref: Vec<f64> = (l_min..=l_max).map(|l| ln_prefactor(l, m)).collect();
        for (j, (t, w)) in nodes.iter().zip(weights).enumerate() {
            // x = q/κ = 1 + t/(2κd); ∫₁^∞ dx e^{−2κdx} f/(4π) → Σ_j ω_j f(x_j)
            let xm1 = t / (2.0 * kd);
            let x = 1.0 + xm1;
            let sx = (xm1 * (2.0 + xm1)).sqrt();
            let ln_w = w.ln() - 2.0 * kd - (8.0 * PI * kd).ln();
            let (rm, re) = fresnel(pl.eps, pl.mu, 1.0 / x)?;
            refl[2 * j] = rm * c_sign(Polarization::M);
            refl[2 * j + 1] = re * c_sign(Polarization::E);
            let q = legendre_derivatives_scaled(l_max, m, x);
            let q1 = legendre_derivatives_scaled(l_max, m + 1, x);
            for (il, l) in (l_min..=l_max).enumerate() {
                // D ∝ x^{l−m} sx^{m−1} × (same, mixed) cores, common e^{−imπ/2} dropped
                let (ln_common, same, mixed) = if m == 0 {
                    (l as f64 * x.ln(), sx * q1[l] / x, 0.0)
                } else {
                    let mf = m as f64;
                    ((l - m) as f64 * x.ln() + (mf - 1.0) * sx.ln(), mf * x * q[l] + sx * sx * q1[l] / x, mf * q[l])
                };
                for (ip, _) in Polarization::BOTH.iter().enumerate() {
                    let a = 2 * il + ip;
                    let scale = (0.5 * amp[a].0 + ln_common + ln_pref[il] + 0.5 * ln_w).exp();
                    // columns (j, M) and (j, E); (E, M) mixes with +i, (M, E) with −i
                    let (to_m, to_e) = if ip == 0 {
                        (C64::new(same, 0.0), C64::new(0.0, -mixed))
                    } else {
                        (C64::new(0.0, mixed), C64::new(same, 0.0))
                    };
                    g[(a, 2 * j)] = to_m * scale;
                    g[(a, 2 * j + 1)] = to_e * scale;
                }
            }
        }
        let gr = CMatrix::from_fn(2 * nl, 2 * nj, |a, c| g[(a, c)] * refl[c]);
        let k_mat = gr.mul(&g.adjoint())?;
        Ok(CMatrix::from_fn(2 * nl, 2 * nl, |a, b| {
            let sb = if b % 2 == 0 { c_sign(Polarization::M) } else { c_sign(Polarization::E) };
            k_mat[(a, b)] * (amp[a].1 * sb)
        }))
    }

    /// Σ_m ln det(I − N_m) over |m| ≤ l_max; ±m blocks are equal.
    pub fn log_det_blocked(&self, kappa: f64, l_max: usize) -> Result<LogDet> {
        let rule = gauss_laguerre(Self::radial_nodes(l_max));
        let mut acc = LogDet::default();
        for m in 0..=l_max {
            let n = self.m_block_with(kappa, m, l_max, &rule)?;
            if n.rows() == 0 {
                continue;
            }
            let v = log_det_real(&CMatrix::identity(n.rows()).sub(&n)?)?;
            acc = acc.add(v.scaled(if m == 0 { 1.0 } else { 2.0 }));
        }
        Ok(acc)
    }
}

impl Integrand for SpherePlate {
    fn length_scale(&self) -> f64 {
        self.gap()
    }

    fn initial_order(&self) -> Option<usize> {
        Some(1)
    }

    fn log_det(&self, kappa: f64, order: usize) -> Result<LogDet> {
        self.log_det_blocked(kappa, order)
    }
}

impl MediumDependent for SpherePlate {
    fn medium(&self) -> &Medium {
        &self.medium
    }

    fn replace_medium(mut self, medium: Medium) -> Result<Self> {
        self.medium = medium;
        Ok(self)
    }
}

/// Sphere–plate energy in the requested mode. The asymptotic form holds
/// in vacuum only.
pub fn sphere_plate_energy(config: &SpherePlate, mode: SpherePlateMode, settings: &Settings, exec: &dyn Executor) -> Result<EnergyResult> {
    match mode {
        SpherePlateMode::Full => integrate_energy(config, &settings.quadrature, &config.policy(settings)?, exec),
        SpherePlateMode::Asymptotic => {
            if !config.medium.is_vacuum() {
                return Err(Error::Unsupported("the large-distance sphere-plate formula assumes vacuum"));
            }
            let v = sphere_plate_asymptotic(config.r, config.d, &config.sphere, &config.plate)?;
            Ok(EnergyResult::closed_form(v))
        }
    }
}
