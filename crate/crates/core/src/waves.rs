//! Modified vector wave functions M and N at imaginary frequency in plane,
//! cylindrical and spherical coordinates, and the free dyadic Green's
//! function in closed form. Used to check translation and conversion
//! matrices against the fields they are supposed to reproduce.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::specfun::{bessel_i, bessel_k, sph_bessel_i, sph_bessel_k, spherical_harmonic, spherical_harmonic_dtheta};
use crate::{Polarization, Result, C64};

/// Cartesian complex vector.
pub type CVec3 = [C64; 3];

/// Regular (i_l, I_n, growing exponential) or outgoing (k_l, K_n, decaying)
/// radial dependence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radial {
    Regular,
    Outgoing,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn combine(a: C64, u: [f64; 3], b: C64, v: [f64; 3], d: C64, w: [f64; 3]) -> CVec3 {
    [
        a * u[0] + b * v[0] + d * w[0],
        a * u[1] + b * v[1] + d * w[1],
        a * u[2] + b * v[2] + d * w[2],
    ]
}

pub fn conj3(v: CVec3) -> CVec3 {
    [v[0].conj(), v[1].conj(), v[2].conj()]
}

/// Spherical vector wave M_lm or N_lm at the point x (not on the z axis).
pub fn spherical_wave(kind: Radial, pol: Polarization, l: usize, m: i32, kappa: f64, x: [f64; 3]) -> Result<CVec3> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let theta = (x[2] / r).acos();
    let phi = x[1].atan2(x[0]);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let rhat = [st * cp, st * sp, ct];
    let that = [ct * cp, ct * sp, -st];
    let phat = [-sp, cp, 0.0];
    let z = kappa * r;
    let f = match kind {
        Radial::Regular => sph_bessel_i(l, z)?,
        Radial::Outgoing => sph_bessel_k(l, z)?,
    };
    let y = spherical_harmonic(l, m, theta, phi);
    let dy = spherical_harmonic_dtheta(l, m, theta, phi);
    let im_y = C64::new(0.0, m as f64) * y / st;
    let ll = (l * (l + 1)) as f64;
    let norm = 1.0 / ll.sqrt();
    Ok(match pol {
        Polarization::M => combine(c(0.0), rhat, im_y * (f.value * norm), that, -dy * (f.value * norm), phat),
        Polarization::E => {
            // (r f(κr))' / r = f + z f'
            let radial = f.value + z * f.derivative;
            let n = norm / kappa;
            combine(y * (ll * f.value / r * n), rhat, dy * (radial / r * n), that, im_y * (radial / r * n), phat)
        }
    })
}

/// Cylindrical vector wave M_{k_z n} or N_{k_z n} at x (off the z axis).
pub fn cylindrical_wave(kind: Radial, pol: Polarization, k_z: f64, n: i32, kappa: f64, x: [f64; 3]) -> Result<CVec3> {
    let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
    let theta = x[1].atan2(x[0]);
    let (s, co) = theta.sin_cos();
    let rhat = [co, s, 0.0];
    let that = [-s, co, 0.0];
    let zhat = [0.0, 0.0, 1.0];
    let p = (k_z * k_z + kappa * kappa).sqrt();
    let order = n.unsigned_abs() as usize;
    let b = match kind {
        Radial::Regular => bessel_i(order, p * rho)?,
        Radial::Outgoing => bessel_k(order, p * rho)?,
    };
    let phase = C64::from_polar(1.0, k_z * x[2] + n as f64 * theta);
    let val = phase * b.value;
    let drho = phase * (p * b.derivative);
    let i = C64::new(0.0, 1.0);
    Ok(match pol {
        Polarization::M => combine(i * (n as f64 / rho) * val / p, rhat, -drho / p, that, c(0.0), zhat),
        Polarization::E => {
            let f = 1.0 / (kappa * p);
            combine(i * k_z * drho * f, rhat, -val * (k_z * n as f64 / rho * f), that, -val * (p * p * f), zhat)
        }
    })
}

/// Plane vector wave built on the unit `axis` a with transverse momentum k ⊥ a:
/// φ = e^{±q a·x + i k·x}, q = √(k² + κ²), M = ∇×(φa)/|k|,
/// N = ∇×∇×(φa)/(κ|k|). Regular waves grow along a, outgoing ones decay.
pub fn plane_wave_on_axis(
    kind: Radial,
    pol: Polarization,
    axis: [f64; 3],
    k: [f64; 3],
    kappa: f64,
    x: [f64; 3],
) -> CVec3 {
    let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let q = (kk * kk + kappa * kappa).sqrt();
    let q = if kind == Radial::Regular { q } else { -q };
    let ax = axis[0] * x[0] + axis[1] * x[1] + axis[2] * x[2];
    let kx = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
    let phi = C64::from_polar((q * ax).exp(), kx);
    let i = C64::new(0.0, 1.0);
    match pol {
        Polarization::M => {
            // i φ (k × a) / |k|
            let cr = [k[1] * axis[2] - k[2] * axis[1], k[2] * axis[0] - k[0] * axis[2], k[0] * axis[1] - k[1] * axis[0]];
            let f = i * phi / kk;
            [f * cr[0], f * cr[1], f * cr[2]]
        }
        Polarization::E => {
            // φ (|k|² a + i q k) / (κ|k|)
            let f = phi / (kappa * kk);
            [
                f * C64::new(kk * kk * axis[0], q * k[0]),
                f * C64::new(kk * kk * axis[1], q * k[1]),
                f * C64::new(kk * kk * axis[2], q * k[2]),
            ]
        }
    }
}

/// Plane vector wave along ẑ with transverse momentum k⊥ = (k_x, k_y).
pub fn plane_wave(kind: Radial, pol: Polarization, k_perp: [f64; 2], kappa: f64, x: [f64; 3]) -> CVec3 {
    plane_wave_on_axis(kind, pol, [0.0, 0.0, 1.0], [k_perp[0], k_perp[1], 0.0], kappa, x)
}

/// Free dyadic Green's function (I − ∇∇/κ²) e^{−κr}/(4πr) at imaginary
/// frequency, for x ≠ x'.
pub fn free_green(kappa: f64, x: [f64; 3], xp: [f64; 3]) -> [[f64; 3]; 3] {
    let d = [x[0] - xp[0], x[1] - xp[1], x[2] - xp[2]];
    let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    let g = (-kappa * r).exp() / (4.0 * PI * r);
    let a = kappa + 1.0 / r;
    let g1 = -a * g;
    let g2 = (a * a + 1.0 / (r * r)) * g;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            let hess = g2 * d[i] * d[j] / (r * r) + g1 * (delta / r - d[i] * d[j] / (r * r * r));
            out[i][j] = delta * g - hess / (kappa * kappa);
        }
    }
    out
}
