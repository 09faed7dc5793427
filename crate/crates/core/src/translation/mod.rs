//! Translation matrices U, V and W that re-expand vector waves about a
//! displaced origin, and their assembly into the two-body 𝕏 blocks.
//!
//! Conventions: `X_ij` points from origin i to origin j. Builders take X_ji
//! for U^{ji} and W^{ji} and X_ij for V^{ij}, and satisfy
//!
//! - outside each other: G0 = Σ C_β E^reg_α(x_i) U^{ji}_{αβ} E^reg*_β(x'_j)
//! - i inside j (or below it): G0 = Σ C_β E^reg_α(x_i) V^{ij}_{αβ} E^in*_β(x'_j)
//! - j inside i (or below it): G0 = Σ C_β E^out_α(x_i) W^{ji}_{αβ} E^reg*_β(x'_j)
//!
//! where E^in* is the complex conjugate of E^out. The U series (Bessel K or
//! k times harmonics) are evaluated at the reversed vector X_ij; with these
//! wave functions that is the orientation for which the identities hold.
//!
//! Continuum δ-functions in k_z or k⊥ are stripped, as for amplitudes.

mod sphere;

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::scattering::{BasisKind, Channel, ChannelBasis, Part};
use crate::specfun::{bessel_i_scaled, bessel_k_scaled};
use crate::{Error, Result, C64};

pub use sphere::{sph_block, sph_u, sph_v, sph_w, SphereTranslation};

/// Which re-expansion a block performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslationKind {
    /// Outgoing waves about one origin in regular waves about another.
    U,
    /// Regular waves in regular waves.
    V,
    /// Adjoint partner of V, used when the roles of the two origins swap.
    W,
}

/// Vector between two origins with its derived cylindrical and spherical
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Displacement {
    pub x: [f64; 3],
}

impl Displacement {
    pub fn new(x: [f64; 3]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Displacement { x })
    }

    pub fn reversed(&self) -> Self {
        Displacement { x: [-self.x[0], -self.x[1], -self.x[2]] }
    }

    /// Distance from the z axis.
    pub fn perp(&self) -> f64 {
        self.x[0].hypot(self.x[1])
    }

    /// Azimuth of the transverse part.
    pub fn azimuth(&self) -> f64 {
        self.x[1].atan2(self.x[0])
    }

    pub fn z(&self) -> f64 {
        self.x[2]
    }

    pub fn norm(&self) -> f64 {
        (self.x[0] * self.x[0] + self.x[1] * self.x[1] + self.x[2] * self.x[2]).sqrt()
    }
}

/// A dense translation matrix on one channel basis at fixed κ.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationBlock {
    pub kind: TranslationKind,
    pub basis: ChannelBasis,
    pub kappa: f64,
    pub matrix: CMatrix,
}

/// Plane-wave V^{ij} for transverse momentum k⊥, with X_ij pointing up.
pub fn plane_v(kappa: f64, k_perp: [f64; 2], x_ij: &Displacement) -> Result<C64> {
    if !(x_ij.z() > 0.0) {
        return Err(Error::Geometry("plane-wave V needs a positive vertical separation"));
    }
    let q = (k_perp[0] * k_perp[0] + k_perp[1] * k_perp[1] + kappa * kappa).sqrt();
    let phase = -(k_perp[0] * x_ij.x[0] + k_perp[1] * x_ij.x[1]);
    Ok(C64::from_polar((-q * x_ij.z()).exp(), phase))
}

/// Plane-wave W^{ji}, with X_ji pointing up.
pub fn plane_w(kappa: f64, k_perp: [f64; 2], x_ji: &Displacement) -> Result<C64> {
    Ok(plane_v(kappa, k_perp, x_ji)?.conj())
}

fn scaled_to_value(s: crate::specfun::ScaledPair) -> Result<f64> {
    Ok(s.unscale()?.value)
}

fn cyl_pattern(kappa: f64, k_z: f64, dn: i32, x: &Displacement, regular: bool) -> Result<f64> {
    let p = (k_z * k_z + kappa * kappa).sqrt();
    let arg = x.perp() * p;
    let order = dn.unsigned_abs() as usize;
    if regular {
        if arg == 0.0 {
            return Ok(if order == 0 { 1.0 } else { 0.0 });
        }
        scaled_to_value(bessel_i_scaled(order, arg)?)
    } else {
        if !(arg > 0.0) {
            return Err(Error::Geometry("cylindrical U needs a nonzero lateral displacement"));
        }
        scaled_to_value(bessel_k_scaled(order, arg)?)
    }
}

fn parity(n: i32) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Cylindrical U^{ji}_{n n'} for X_ji (same polarization on both sides):
/// K_{n−n'}(|X⊥|p) e^{−ik_z X_z − i(n−n')θ} (−1)^{n'} at X = X_ij.
pub fn cyl_u(kappa: f64, k_z: f64, n: i32, n2: i32, x_ji: &Displacement) -> Result<C64> {
    let x = x_ji.reversed();
    let k = cyl_pattern(kappa, k_z, n - n2, &x, false)?;
    let phase = -k_z * x.z() - (n - n2) as f64 * x.azimuth();
    Ok(C64::from_polar(k * parity(n2), phase))
}

/// Cylindrical V^{ij}_{n n'} at X_ij.
pub fn cyl_v(kappa: f64, k_z: f64, n: i32, n2: i32, x_ij: &Displacement) -> Result<C64> {
    let i = cyl_pattern(kappa, k_z, n - n2, x_ij, true)?;
    let phase = -k_z * x_ij.z() - (n - n2) as f64 * x_ij.azimuth();
    Ok(C64::from_polar(i * parity(n + n2), phase))
}

/// Cylindrical W^{ji}_{n n'} at X_ji.
pub fn cyl_w(kappa: f64, k_z: f64, n: i32, n2: i32, x_ji: &Displacement) -> Result<C64> {
    Ok(cyl_v(kappa, k_z, n2, n, x_ji)?.conj())
}

/// Translation matrix of the given kind on a cylindrical or plane basis.
/// `x` is X_ji for U and W, X_ij for V.
pub fn block(kind: TranslationKind, basis: &ChannelBasis, kappa: f64, x: &Displacement) -> Result<TranslationBlock> {
    let ch = basis.channels();
    let n = ch.len();
    let matrix = match basis.kind() {
        BasisKind::Cylindrical { k_z, n_max } => {
            let (k_z, top) = (*k_z, 2 * *n_max as i32);
            // entries depend on n − n' only through one Bessel value
            let table = (-top..=top)
                .map(|dn| match kind {
                    TranslationKind::U => cyl_u(kappa, k_z, dn, 0, x),
                    TranslationKind::V => cyl_v(kappa, k_z, dn, 0, x),
                    TranslationKind::W => cyl_w(kappa, k_z, dn, 0, x),
                })
                .collect::<Result<Vec<_>>>()?;
            let mut m = CMatrix::zeros(n, n);
            for (a, ca) in ch.iter().enumerate() {
                for (b, cb) in ch.iter().enumerate() {
                    let (Channel::Cylindrical { n: na, p: pa }, Channel::Cylindrical { n: nb, p: pb }) = (*ca, *cb) else {
                        unreachable!()
                    };
                    if pa != pb {
                        continue;
                    }
                    // U carries (−1)^{n'}; the (−1)^{n+n'} of V and W equals (−1)^{n−n'}
                    let sign = if kind == TranslationKind::U { parity(nb) } else { 1.0 };
                    m[(a, b)] = table[(na - nb + top) as usize] * sign;
                }
            }
            m
        }
        BasisKind::Plane { .. } => {
            let mut d = Vec::with_capacity(n);
            for c in ch {
                let k = basis.k_perp(c).ok_or(Error::Dimension("plane channel outside its grid"))?;
                d.push(match kind {
                    TranslationKind::V => plane_v(kappa, k, x)?,
                    TranslationKind::W => plane_w(kappa, k, x)?,
                    TranslationKind::U => {
                        return Err(Error::Unsupported("plane waves have no outgoing-to-regular translation"));
                    }
                });
            }
            CMatrix::diagonal(&d)
        }
        BasisKind::Spherical { l_max } => return sph_block(kind, *l_max, kappa, x),
    };
    Ok(TranslationBlock { kind, basis: basis.clone(), kappa, matrix })
}

/// How two bodies sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrangement {
    /// Each body lies outside a separating surface around the other.
    Outside,
    /// Body a lies inside body b, or below it for planes.
    AInsideB,
    /// Body b lies inside body a, or below it for planes.
    BInsideA,
}

/// One nonzero submatrix of 𝕏, already negated, and the (row, column)
/// position it occupies in the (regular, outgoing) × (regular, incoming)
/// block layout.
#[derive(Clone, Debug, PartialEq)]
pub struct XBlock {
    pub row: usize,
    pub col: usize,
    pub matrix: CMatrix,
}

/// Amplitude part F^{xy} with row slot `row` and column slot `col`
/// (0 = exterior, 1 = interior).
pub fn part_of(row: usize, col: usize) -> Part {
    match (row, col) {
        (0, 0) => Part::Ee,
        (0, _) => Part::Ei,
        (_, 0) => Part::Ie,
        _ => Part::Ii,
    }
}

/// Builds (𝕏^{ab}, 𝕏^{ba}) for the arrangement, given X_ab pointing from the
/// origin of a to the origin of b.
pub fn assemble_x(arrangement: Arrangement, basis: &ChannelBasis, kappa: f64, x_ab: &Displacement) -> Result<(XBlock, XBlock)> {
    let x_ba = x_ab.reversed();
    let neg = |t: TranslationBlock| t.matrix.scaled(C64::new(-1.0, 0.0));
    Ok(match arrangement {
        Arrangement::Outside => (
            XBlock { row: 0, col: 0, matrix: neg(block(TranslationKind::U, basis, kappa, &x_ba)?) },
            XBlock { row: 0, col: 0, matrix: neg(block(TranslationKind::U, basis, kappa, &x_ab)?) },
        ),
        Arrangement::AInsideB => (
            XBlock { row: 0, col: 1, matrix: neg(block(TranslationKind::V, basis, kappa, &x_ab)?) },
            XBlock { row: 1, col: 0, matrix: neg(block(TranslationKind::W, basis, kappa, &x_ab)?) },
        ),
        Arrangement::BInsideA => (
            XBlock { row: 1, col: 0, matrix: neg(block(TranslationKind::W, basis, kappa, &x_ba)?) },
            XBlock { row: 0, col: 1, matrix: neg(block(TranslationKind::V, basis, kappa, &x_ba)?) },
        ),
    })
}

/// Arrangement of two round bodies (spheres, or cylinders in the transverse
/// plane) whose centers are `distance` apart; errors when they overlap.
pub fn arrangement_of(radius_a: f64, radius_b: f64, distance: f64) -> Result<Arrangement> {
    if !(radius_a > 0.0 && radius_b > 0.0 && distance >= 0.0) {
        return Err(Error::Geometry("radii must be positive and the distance non-negative"));
    }
    if distance > radius_a + radius_b {
        Ok(Arrangement::Outside)
    } else if distance + radius_a < radius_b {
        Ok(Arrangement::AInsideB)
    } else if distance + radius_b < radius_a {
        Ok(Arrangement::BInsideA)
    } else {
        Err(Error::Geometry("bodies overlap"))
    }
}

#[cfg(test)]
mod tests;
