//! On-shell scattering amplitudes of single bodies at imaginary frequency,
//! in plane, cylindrical or spherical partial waves.
//!
//! Continuum δ-functions and the accompanying 2π/L or (2π)²/L² factors are
//! stripped; pipelines reinstate the measure when they discretize k_z or k⊥.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::materials::{MaterialModel, Response};
use crate::specfun::{bessel_i_scaled, bessel_k_scaled, sph_bessel_i_scaled, sph_bessel_k_scaled};
use crate::{Error, Polarization, Result, C64};

/// One partial wave.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Channel {
    /// Plane wave with transverse momentum `k_perp` (an index into the basis grid).
    Plane { k: usize, p: Polarization },
    Cylindrical { n: i32, p: Polarization },
    Spherical { l: usize, m: i32, p: Polarization },
}

impl Channel {
    pub fn polarization(&self) -> Polarization {
        match *self {
            Channel::Plane { p, .. } | Channel::Cylindrical { p, .. } | Channel::Spherical { p, .. } => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasisKind {
    /// Transverse momenta (k_x, k_y) of the retained plane waves.
    Plane { k_perp: Vec<[f64; 2]> },
    /// Fixed k_z, orders |n| ≤ n_max.
    Cylindrical { k_z: f64, n_max: usize },
    /// Orders 1 ≤ l ≤ l_max, all m.
    Spherical { l_max: usize },
}

/// Truncated set of partial waves, each with its normalization constant C_α.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelBasis {
    kind: BasisKind,
    channels: Vec<Channel>,
}

impl ChannelBasis {
    /// Channels ordered by l, then m from −l to l, then M before E.
    pub fn spherical(l_max: usize) -> Self {
        let mut channels = Vec::new();
        for l in 1..=l_max {
            for m in -(l as i32)..=(l as i32) {
                for p in Polarization::BOTH {
                    channels.push(Channel::Spherical { l, m, p });
                }
            }
        }
        ChannelBasis { kind: BasisKind::Spherical { l_max }, channels }
    }

    /// Channels ordered by n from −n_max to n_max, then M before E.
    pub fn cylindrical(k_z: f64, n_max: usize) -> Self {
        let mut channels = Vec::new();
        for n in -(n_max as i32)..=(n_max as i32) {
            for p in Polarization::BOTH {
                channels.push(Channel::Cylindrical { n, p });
            }
        }
        ChannelBasis { kind: BasisKind::Cylindrical { k_z, n_max }, channels }
    }

    /// Channels ordered by grid point, then M before E. Duplicate momenta are
    /// dropped.
    pub fn plane(k_perp: &[[f64; 2]]) -> Self {
        let mut grid: Vec<[f64; 2]> = Vec::with_capacity(k_perp.len());
        for k in k_perp {
            if !grid.contains(k) {
                grid.push(*k);
            }
        }
        let mut channels = Vec::new();
        for k in 0..grid.len() {
            for p in Polarization::BOTH {
                channels.push(Channel::Plane { k, p });
            }
        }
        ChannelBasis { kind: BasisKind::Plane { k_perp: grid }, channels }
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn index_of(&self, c: &Channel) -> Option<usize> {
        self.channels.iter().position(|x| x == c)
    }

    /// Transverse momentum of a plane-wave channel.
    pub fn k_perp(&self, c: &Channel) -> Option<[f64; 2]> {
        match (&self.kind, c) {
            (BasisKind::Plane { k_perp }, Channel::Plane { k, .. }) => k_perp.get(*k).copied(),
            _ => None,
        }
    }

    /// C_α(κ) of channel `i`: 1/(2√(k⊥²+κ²)) for plane M (negated for E),
    /// 1/2π for cylindrical E (negated for M), κ for spherical M (negated for E).
    pub fn normalization(&self, i: usize, kappa: f64) -> f64 {
        let c = self.channels[i];
        match (&self.kind, c) {
            (BasisKind::Plane { k_perp }, Channel::Plane { k, p }) => {
                let [kx, ky] = k_perp[k];
                let v = 0.5 / (kx * kx + ky * ky + kappa * kappa).sqrt();
                if p == Polarization::M {
                    v
                } else {
                    -v
                }
            }
            (_, Channel::Cylindrical { p, .. }) => {
                let v = 0.5 / core::f64::consts::PI;
                if p == Polarization::E {
                    v
                } else {
                    -v
                }
            }
            (_, Channel::Spherical { p, .. }) => {
                if p == Polarization::M {
                    kappa
                } else {
                    -kappa
                }
            }
            _ => unreachable!("channel does not belong to this basis"),
        }
    }
}

/// Which pair of wave types an amplitude block connects: the first letter is
/// the scattered side and the second the incident side (e = exterior, i =
/// interior).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Ee,
    Ei,
    Ie,
    Ii,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Storage {
    Diagonal(Vec<C64>),
    Dense(CMatrix),
}

/// Amplitude matrix 𝔽 restricted to one part, at fixed κ.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeBlock {
    pub basis: ChannelBasis,
    pub part: Part,
    pub storage: Storage,
    pub kappa: f64,
}

impl AmplitudeBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        let zero = C64::new(0.0, 0.0);
        match &self.storage {
            Storage::Diagonal(d) => d.iter().all(|v| *v == zero),
            Storage::Dense(m) => m.as_slice().iter().all(|v| *v == zero),
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        match &self.storage {
            Storage::Diagonal(d) => CMatrix::diagonal(d),
            Storage::Dense(m) => m.clone(),
        }
    }

    /// 𝔽·A without forming 𝔽 when it is diagonal.
    pub fn apply_left(&self, a: &CMatrix) -> Result<CMatrix> {
        match &self.storage {
            Storage::Diagonal(d) => a.scale_rows(d),
            Storage::Dense(m) => m.mul(a),
        }
    }
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

fn positive(v: f64, what: &'static str) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Domain(what));
    }
    Ok(())
}

/// Plate reflection r^P(iκ, 1/√(1+k⊥²/κ²)); the same value serves as the ii
/// amplitude of an upper plate and the ee amplitude of a lower one.
pub fn plate_amplitude(material: &MaterialModel, kappa: f64, k_perp: f64, p: Polarization) -> Result<f64> {
    positive(kappa, "plate amplitude needs kappa > 0")?;
    let x = 1.0 / (1.0 + (k_perp / kappa).powi(2)).sqrt();
    material.reflection(kappa, x, p)
}

/// Diagonal plate block over a plane-wave basis, from Fresnel values r(x)
/// supplied by the caller (so medium-relative responses can be used).
pub fn plate_block<F>(basis: ChannelBasis, part: Part, kappa: f64, mut reflection: F) -> Result<AmplitudeBlock>
where
    F: FnMut(f64, Polarization) -> Result<f64>,
{
    let mut d = Vec::with_capacity(basis.len());
    for c in basis.channels() {
        let [kx, ky] = basis.k_perp(c).ok_or(Error::Dimension("plate needs a plane-wave basis"))?;
        let x = kappa / (kx * kx + ky * ky + kappa * kappa).sqrt();
        d.push(real(reflection(x, c.polarization())?));
    }
    Ok(AmplitudeBlock { basis, part, storage: Storage::Diagonal(d), kappa })
}

/// Exterior amplitude of a perfectly conducting cylinder (δ-prefactor
/// stripped): −I_n'(pR)/K_n'(pR) for M, −I_n(pR)/K_n(pR) for E.
pub fn pec_cylinder_exterior(radius: f64, p: f64, n: i32, pol: Polarization) -> Result<f64> {
    positive(radius, "cylinder radius must be positive")?;
    positive(p, "cylinder amplitude needs p > 0")?;
    let x = radius * p;
    let order = n.unsigned_abs() as usize;
    let i = bessel_i_scaled(order, x)?;
    let k = bessel_k_scaled(order, x)?;
    let scale = (i.ln_scale - k.ln_scale).exp();
    Ok(match pol {
        Polarization::M => -(i.derivative / k.derivative) * scale,
        Polarization::E => -(i.value / k.value) * scale,
    })
}

/// Interior amplitude of a perfectly conducting cylindrical cavity:
/// −K_n'/I_n' for M, −K_n/I_n for E.
pub fn pec_cylinder_interior(radius: f64, p: f64, n: i32, pol: Polarization) -> Result<f64> {
    positive(radius, "cylinder radius must be positive")?;
    positive(p, "cylinder amplitude needs p > 0")?;
    let x = radius * p;
    let order = n.unsigned_abs() as usize;
    let i = bessel_i_scaled(order, x)?;
    let k = bessel_k_scaled(order, x)?;
    let scale = (k.ln_scale - i.ln_scale).exp();
    Ok(match pol {
        Polarization::M => -(k.derivative / i.derivative) * scale,
        Polarization::E => -(k.value / i.value) * scale,
    })
}

/// Diagonal block of a perfectly conducting cylinder at p = √(κ² + k_z²):
/// exterior amplitudes for `Part::Ee`, interior ones for `Part::Ii`.
pub fn pec_cylinder_block(radius: f64, kappa: f64, k_z: f64, n_max: usize, part: Part) -> Result<AmplitudeBlock> {
    let p = (kappa * kappa + k_z * k_z).sqrt();
    let basis = ChannelBasis::cylindrical(k_z, n_max);
    let mut d = Vec::with_capacity(basis.len());
    for c in basis.channels() {
        let Channel::Cylindrical { n, p: pol } = *c else { unreachable!() };
        let v = match part {
            Part::Ee => pec_cylinder_exterior(radius, p, n, pol)?,
            Part::Ii => pec_cylinder_interior(radius, p, n, pol)?,
            _ => return Err(Error::Unsupported("a homogeneous cylinder has no ei/ie amplitudes")),
        };
        d.push(real(v));
    }
    Ok(AmplitudeBlock { basis, part, storage: Storage::Diagonal(d), kappa })
}

/// Mie amplitude F_{lP} of a homogeneous sphere from its ε and μ (relative to
/// the surrounding medium), for l ≥ 1; independent of m.
pub fn mie_amplitude(eps: Response, mu: f64, radius: f64, kappa: f64, l: usize, pol: Polarization) -> Result<f64> {
    let (v, ln_scale) = mie_amplitude_scaled(eps, mu, radius, kappa, l, pol)?;
    Ok(v * ln_scale.exp())
}

/// The Mie amplitude as a mantissa and the natural log of its scale, for
/// orders where the value itself leaves the `f64` range.
pub fn mie_amplitude_scaled(eps: Response, mu: f64, radius: f64, kappa: f64, l: usize, pol: Polarization) -> Result<(f64, f64)> {
    if l == 0 {
        return Err(Error::Domain("Mie amplitudes start at l = 1"));
    }
    positive(radius, "sphere radius must be positive")?;
    positive(kappa, "Mie amplitude needs kappa > 0")?;
    let z = kappa * radius;
    let iz = sph_bessel_i_scaled(l, z)?;
    let kz = sph_bessel_k_scaled(l, z)?;
    // ∂_R (R f(κR)) = f + z f'
    let di = iz.value + z * iz.derivative;
    let dk = kz.value + z * kz.derivative;
    let scale = iz.ln_scale - kz.ln_scale;
    let eps = match eps {
        Response::Infinite => {
            return Ok(match pol {
                Polarization::M => (-(iz.value / kz.value), scale),
                Polarization::E => (-(di / dk), scale),
            });
        }
        Response::Finite(e) => e,
    };
    if eps == 1.0 && mu == 1.0 {
        return Ok((0.0, 0.0));
    }
    let w = (eps * mu).sqrt() * z;
    let weight = match pol {
        Polarization::M => mu,
        Polarization::E => eps,
    };
    if w == 0.0 {
        // zero refractive index: i_l(w) ∝ w^l, so only the ratio (w i_l)'/i_l = l+1 survives
        let lp1 = (l + 1) as f64;
        let num = iz.value * lp1 - weight * di;
        let den = kz.value * lp1 - weight * dk;
        return Ok((-(num / den), scale));
    }
    let iw = sph_bessel_i_scaled(l, w)?;
    let dw = iw.value + w * iw.derivative;
    let num = iz.value * dw - weight * di * iw.value;
    let den = kz.value * dw - weight * dk * iw.value;
    Ok((-(num / den), scale))
}

/// Mie amplitude of a sphere made of `material`, surrounded by vacuum.
pub fn mie_sphere_exterior(material: &MaterialModel, radius: f64, kappa: f64, l: usize, pol: Polarization) -> Result<f64> {
    mie_amplitude(material.permittivity(kappa)?, material.permeability(kappa)?, radius, kappa, l, pol)
}

/// Diagonal sphere block over l ≤ l_max from per-(l, P) amplitudes.
pub fn sphere_block<F>(l_max: usize, kappa: f64, mut amplitude: F) -> Result<AmplitudeBlock>
where
    F: FnMut(usize, Polarization) -> Result<f64>,
{
    let basis = ChannelBasis::spherical(l_max);
    let mut per_l = Vec::with_capacity(2 * l_max);
    for l in 1..=l_max {
        per_l.push((amplitude(l, Polarization::M)?, amplitude(l, Polarization::E)?));
    }
    let d = basis
        .channels()
        .iter()
        .map(|c| {
            let Channel::Spherical { l, p, .. } = *c else { unreachable!() };
            let (m, e) = per_l[l - 1];
            real(if p == Polarization::M { m } else { e })
        })
        .collect();
    Ok(AmplitudeBlock { basis, part: Part::Ee, storage: Storage::Diagonal(d), kappa })
}

/// Small-radius amplitude f_{k_z n P P′} of a dielectric cylinder, |n| ≤ 1
/// (zero for higher orders), with E–M mixing for |n| = 1.
pub fn dielectric_cylinder_small_radius(
    eps: Response,
    mu: f64,
    radius: f64,
    kappa: f64,
    k_z: f64,
    n: i32,
    p: Polarization,
    p2: Polarization,
) -> Result<f64> {
    use Polarization::{E, M};
    let eps = eps
        .finite()
        .ok_or(Error::Unsupported("the small-radius cylinder expansion needs a finite permittivity"))?;
    let r2 = radius * radius;
    let den = 2.0 * (1.0 + eps) * (1.0 + mu);
    Ok(match (n, p, p2) {
        (0, M, M) => 0.5 * (kappa * kappa + k_z * k_z) * r2 * (1.0 - mu),
        (0, E, E) => 0.5 * (kappa * kappa + k_z * k_z) * r2 * (1.0 - eps),
        (0, _, _) => 0.0,
        (1 | -1, M, M) => {
            (k_z * k_z * (1.0 + eps) * (1.0 - mu) - kappa * kappa * (1.0 - eps) * (1.0 + mu)) / den * r2
        }
        (1 | -1, E, E) => {
            (k_z * k_z * (1.0 - eps) * (1.0 + mu) - kappa * kappa * (1.0 + eps) * (1.0 - mu)) / den * r2
        }
        (1, M, E) | (-1, E, M) => 2.0 * kappa * k_z * (eps * mu - 1.0) / den * r2,
        (1, E, M) | (-1, M, E) => -2.0 * kappa * k_z * (eps * mu - 1.0) / den * r2,
        _ => 0.0,
    })
}

/// Dense block of a thin dielectric cylinder over n ∈ {−1, 0, 1}.
pub fn dielectric_cylinder_block(eps: Response, mu: f64, radius: f64, kappa: f64, k_z: f64) -> Result<AmplitudeBlock> {
    let basis = ChannelBasis::cylindrical(k_z, 1);
    let ch = basis.channels().to_vec();
    let mut m = CMatrix::zeros(ch.len(), ch.len());
    for (i, a) in ch.iter().enumerate() {
        for (j, b) in ch.iter().enumerate() {
            let (Channel::Cylindrical { n, p }, Channel::Cylindrical { n: n2, p: p2 }) = (*a, *b) else {
                unreachable!()
            };
            if n == n2 {
                m[(i, j)] = real(dielectric_cylinder_small_radius(eps, mu, radius, kappa, k_z, n, p, p2)?);
            }
        }
    }
    Ok(AmplitudeBlock { basis, part: Part::Ee, storage: Storage::Dense(m), kappa })
}

/// Leading n = 0 E-mode amplitude 1/log(R/d) of a thin perfectly conducting
/// cylinder at distance d from the other body; independent of κ and k_z.
pub fn pec_cylinder_logmode(radius: f64, d: f64) -> Result<f64> {
    positive(radius, "cylinder radius must be positive")?;
    if !(d > radius) {
        return Err(Error::Geometry("the log-mode amplitude needs d > R"));
    }
    Ok(1.0 / (radius / d).ln())
}

/// Electric dipole amplitude (2/3) α(κ) κ³ of a two-level atom in its l = 1,
/// E channels; all other channels vanish.
pub fn atom_amplitude(alpha0: f64, d10: f64, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) {
        return Err(Error::Domain("atom amplitude needs kappa >= 0"));
    }
    Ok(2.0 / 3.0 * crate::materials::atom_alpha_at(alpha0, d10, kappa) * kappa.powi(3))
}

/// Diagonal atom block over l ≤ l_max.
pub fn atom_block(alpha0: f64, d10: f64, kappa: f64, l_max: usize) -> Result<AmplitudeBlock> {
    let a = atom_amplitude(alpha0, d10, kappa)?;
    sphere_block(l_max, kappa, |l, p| Ok(if l == 1 && p == Polarization::E { a } else { 0.0 }))
}
