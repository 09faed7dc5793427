//! Change of basis from vector plane waves to spherical or cylindrical vector
//! waves, and the re-expression of a compact body's amplitude in the plane
//! basis of a facing plate.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::scattering::{AmplitudeBlock, BasisKind, Channel, ChannelBasis, Storage};
use crate::specfun::assoc_legendre_ge1;
use crate::{Error, Polarization, Result, C64};

/// Real P_l^m(x) and dP_l^m/dx for x ≥ 1 and any |m| ≤ l, with
/// P_l^{−m} = (l−m)!/(l+m)! P_l^m.
fn legendre_signed(l: usize, m: i32, x: f64) -> Result<(f64, f64)> {
    let ma = m.unsigned_abs() as usize;
    let (v, d) = assoc_legendre_ge1(l, ma, x)?;
    if m >= 0 {
        return Ok((v, d));
    }
    let mut ratio = 1.0;
    for k in (l - ma + 1)..=(l + ma) {
        ratio /= k as f64;
    }
    Ok((v * ratio, d * ratio))
}

// √(4π(2l+1)(l−m)!/(l(l+1)(l+m)!))
fn sphere_prefactor(l: usize, m: i32) -> f64 {
    let mut ratio = 1.0;
    let ma = m.unsigned_abs() as usize;
    for k in (l - ma + 1)..=(l + ma) {
        ratio *= k as f64;
    }
    // (l−m)!/(l+m)! is 1/ratio for m ≥ 0 and ratio for m < 0
    let fact = if m >= 0 { 1.0 / ratio } else { ratio };
    (4.0 * PI * (2 * l + 1) as f64 * fact / (l * (l + 1)) as f64).sqrt()
}

/// D_{lmP, k⊥P'}: coefficient of the spherical wave (l, m, P) in the regular
/// plane wave (k⊥, P'), for k⊥ ≠ 0.
///
/// The Legendre function at q/κ > 1 is the continuation of the
/// Condon–Shortley P_l^m(cos θ) to cos θ = q/κ, sin θ = i k⊥/κ, which is
/// (−i)^m times the real function; the M–M entry uses its x-derivative.
pub fn plane_to_spherical(kappa: f64, k_perp: [f64; 2], l: usize, m: i32, p: Polarization, p2: Polarization) -> Result<C64> {
    if l == 0 || m.unsigned_abs() as usize > l {
        return Err(Error::Selection("plane-to-spherical conversion needs l >= 1 and |m| <= l"));
    }
    if !(kappa > 0.0) {
        return Err(Error::Domain("conversion needs kappa > 0"));
    }
    let k = k_perp[0].hypot(k_perp[1]);
    if !(k > 0.0) {
        return Err(Error::Domain("conversion needs a nonzero transverse momentum"));
    }
    let phi = k_perp[1].atan2(k_perp[0]);
    let x = (k * k + kappa * kappa).sqrt() / kappa;
    let (pv, pd) = legendre_signed(l, m, x)?;
    let phase = C64::from_polar(sphere_prefactor(l, m), -(m as f64) * (phi + 0.5 * PI));
    let same = phase * (k / kappa * pd);
    let mixed = phase * C64::new(0.0, m as f64 * kappa / k * pv);
    Ok(match (p, p2) {
        (Polarization::M, Polarization::M) | (Polarization::E, Polarization::E) => same,
        (Polarization::E, Polarization::M) => mixed,
        (Polarization::M, Polarization::E) => -mixed,
    })
}

/// D_{k_z n P, k⊥P'} for a plane wave decaying along −x̂ with k⊥ = (k_y, k_z),
/// converted to cylindrical waves about ẑ at the same k_z.
pub fn plane_to_cylindrical(kappa: f64, k_y: f64, k_z: f64, n: i32, p: Polarization, p2: Polarization) -> Result<C64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain("conversion needs kappa > 0"));
    }
    let k = k_y.hypot(k_z);
    if !(k > 0.0) {
        return Err(Error::Domain("conversion needs a nonzero transverse momentum"));
    }
    let xi = k_y / (kappa * kappa + k_z * k_z).sqrt();
    let root = (1.0 + xi * xi).sqrt();
    let growth = (root + xi).powi(n);
    let same = C64::new(0.0, -k_z / k * root * growth);
    let mixed = C64::new(0.0, kappa / k * xi * growth);
    Ok(match (p, p2) {
        (Polarization::M, Polarization::M) | (Polarization::E, Polarization::E) => same,
        (Polarization::E, Polarization::M) => mixed,
        (Polarization::M, Polarization::E) => -mixed,
    })
}

/// D between a plane-wave basis and a spherical or cylindrical basis at one
/// κ, with the ratios C_{kP}/C_α that carry an amplitude from one basis to
/// the other.
#[derive(Clone, Debug, PartialEq)]
pub struct ConversionBlock {
    pub plane: ChannelBasis,
    pub compact: ChannelBasis,
    pub kappa: f64,
    /// D_{α, kP}: compact channels as rows, plane channels as columns.
    pub matrix: CMatrix,
    /// C_{kP}/C_α, plane channels as rows; ±1 times a positive magnitude,
    /// negative across polarizations.
    ratio: Vec<f64>,
}

impl ConversionBlock {
    /// Plane waves with k⊥ = (k_x, k_y) about ẑ into spherical waves with l ≤ l_max.
    pub fn spherical(kappa: f64, plane: &ChannelBasis, l_max: usize) -> Result<Self> {
        let compact = ChannelBasis::spherical(l_max);
        Self::build(kappa, plane, compact, |k, c, p2| {
            let Channel::Spherical { l, m, p } = *c else { unreachable!() };
            plane_to_spherical(kappa, k, l, m, p, p2)
        })
    }

    /// Plane waves with k⊥ = (k_y, k_z) about x̂ into cylindrical waves about
    /// ẑ with |n| ≤ n_max; every plane channel must carry the same k_z.
    pub fn cylindrical(kappa: f64, plane: &ChannelBasis, n_max: usize) -> Result<Self> {
        let BasisKind::Plane { k_perp } = plane.kind() else {
            return Err(Error::Dimension("conversion needs a plane-wave source basis"));
        };
        let k_z = k_perp.first().map(|k| k[1]).ok_or(Error::Dimension("empty plane-wave basis"))?;
        if k_perp.iter().any(|k| k[1] != k_z) {
            return Err(Error::Dimension("cylindrical conversion is diagonal in k_z; the plane grid mixes k_z values"));
        }
        let compact = ChannelBasis::cylindrical(k_z, n_max);
        Self::build(kappa, plane, compact, |k, c, p2| {
            let Channel::Cylindrical { n, p } = *c else { unreachable!() };
            plane_to_cylindrical(kappa, k[0], k[1], n, p, p2)
        })
    }

    fn build<F>(kappa: f64, plane: &ChannelBasis, compact: ChannelBasis, mut entry: F) -> Result<Self>
    where
        F: FnMut([f64; 2], &Channel, Polarization) -> Result<C64>,
    {
        if !matches!(plane.kind(), BasisKind::Plane { .. }) {
            return Err(Error::Dimension("conversion needs a plane-wave source basis"));
        }
        let (rows, cols) = (compact.len(), plane.len());
        let mut matrix = CMatrix::zeros(rows, cols);
        let mut ratio = Vec::with_capacity(rows * cols);
        for (j, pc) in plane.channels().iter().enumerate() {
            let k = plane.k_perp(pc).ok_or(Error::Dimension("plane channel outside its grid"))?;
            let cp = plane.normalization(j, kappa);
            for (i, cc) in compact.channels().iter().enumerate() {
                matrix[(i, j)] = entry(k, cc, pc.polarization())?;
                ratio.push(cp / compact.normalization(i, kappa));
            }
        }
        Ok(ConversionBlock { plane: plane.clone(), compact, kappa, matrix, ratio })
    }

    /// C_{kP}/C_α for plane channel `j` and compact channel `i`.
    pub fn c_ratio(&self, j: usize, i: usize) -> f64 {
        self.ratio[j * self.compact.len() + i]
    }

    /// Re-expresses a compact-basis amplitude in the plane basis:
    /// F_{kP,k′P′} = Σ (C_{kP}/C_α) D*_{α,kP} F_{αβ} D_{β,k′P′}.
    pub fn conjugate(&self, amplitude: &AmplitudeBlock) -> Result<AmplitudeBlock> {
        if amplitude.basis != self.compact {
            return Err(Error::Dimension("amplitude basis differs from the conversion target"));
        }
        if amplitude.kappa != self.kappa {
            return Err(Error::Dimension("amplitude and conversion evaluated at different kappa"));
        }
        let fd = amplitude.apply_left(&self.matrix)?;
        let (rows, cols) = (self.plane.len(), self.compact.len());
        let left = CMatrix::from_fn(rows, cols, |j, i| self.matrix[(i, j)].conj() * self.c_ratio(j, i));
        Ok(AmplitudeBlock {
            basis: self.plane.clone(),
            part: amplitude.part,
            storage: Storage::Dense(left.mul(&fd)?),
            kappa: self.kappa,
        })
    }
}

/// The compact-basis amplitude carried into the plane basis of `block`.
pub fn conjugate_by_d(amplitude: &AmplitudeBlock, block: &ConversionBlock) -> Result<AmplitudeBlock> {
    block.conjugate(amplitude)
}
