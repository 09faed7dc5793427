use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

/// Fully normalized P̄_l^m(cos θ) for fixed m ≥ 0 and l = m..=lmax, including
/// the Condon–Shortley phase (−1)^m.
fn normalized_column(lmax: usize, m: usize, cos_t: f64, sin_t: f64) -> Vec<f64> {
    let mut p = vec![0.0; lmax + 1];
    if m > lmax {
        return p;
    }
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for k in 1..=m {
        pmm *= -sin_t * ((2 * k + 1) as f64 / (2 * k) as f64).sqrt();
    }
    p[m] = pmm;
    if m < lmax {
        p[m + 1] = ((2 * m + 3) as f64).sqrt() * cos_t * pmm;
    }
    let mf = m as f64;
    for l in (m + 2)..=lmax {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let lp = lf - 1.0;
        let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
        p[l] = a * (cos_t * p[l - 1] - p[l - 2] / a_prev);
    }
    p
}

/// Spherical harmonic Y_lm(θ, φ) with the Condon–Shortley phase, orthonormal
/// on the unit sphere; Y_{l,−m} = (−1)^m Y_lm*.
pub fn spherical_harmonic(l: usize, m: i32, theta: f64, phi: f64) -> C64 {
    let ma = m.unsigned_abs() as usize;
    if ma > l {
        return C64::new(0.0, 0.0);
    }
    let p = normalized_column(l, ma, theta.cos(), theta.sin())[l];
    let y = C64::from_polar(p, ma as f64 * phi);
    if m >= 0 {
        y
    } else if ma % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

/// ∂Y_lm/∂θ = m cot θ Y_lm + √((l−m)(l+m+1)) e^{−iφ} Y_{l,m+1}.
pub fn spherical_harmonic_dtheta(l: usize, m: i32, theta: f64, phi: f64) -> C64 {
    let lf = l as f64;
    let mf = m as f64;
    let first = spherical_harmonic(l, m, theta, phi) * (mf * theta.cos() / theta.sin());
    let c = ((lf - mf) * (lf + mf + 1.0)).max(0.0).sqrt();
    if c == 0.0 {
        return first;
    }
    first + C64::from_polar(c, -phi) * spherical_harmonic(l, m + 1, theta, phi)
}

/// All Y_lm(θ, φ) for l ≤ lmax at one direction.
#[derive(Clone, Debug)]
pub struct YlmTable {
    lmax: usize,
    data: Vec<C64>,
}

impl YlmTable {
    pub fn new(lmax: usize, theta: f64, phi: f64) -> Self {
        let (sin_t, cos_t) = theta.sin_cos();
        Self::from_cos_sin(lmax, cos_t, sin_t, phi)
    }

    /// Same table from cos θ and sin θ directly, so that directions along
    /// ±ẑ give exactly vanishing m ≠ 0 entries.
    pub fn from_cos_sin(lmax: usize, cos_t: f64, sin_t: f64, phi: f64) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); (lmax + 1) * (lmax + 1)];
        for m in 0..=lmax {
            let col = normalized_column(lmax, m, cos_t, sin_t);
            let phase = C64::from_polar(1.0, m as f64 * phi);
            for l in m..=lmax {
                let y = phase * col[l];
                data[l * l + l + m] = y;
                if m > 0 {
                    let c = y.conj();
                    data[l * l + l - m] = if m % 2 == 0 { c } else { -c };
                }
            }
        }
        YlmTable { lmax, data }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// Y_lm, or zero when |m| > l or l > lmax.
    pub fn get(&self, l: usize, m: i32) -> C64 {
        if l > self.lmax || m.unsigned_abs() as usize > l {
            return C64::new(0.0, 0.0);
        }
        self.data[((l * l + l) as i64 + m as i64) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let y = spherical_harmonic(0, 0, 0.4, 1.1);
        assert!((y.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15 && y.im == 0.0);
        let y = spherical_harmonic(1, 0, 0.0, 0.0);
        assert!((y.re - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
        let (t, p) = (0.7, -0.4);
        let y = spherical_harmonic(1, 1, t, p);
        let e = C64::from_polar(-(3.0 / (8.0 * PI)).sqrt() * t.sin(), p);
        assert!((y - e).norm() < 1e-15);
        let y = spherical_harmonic(2, -2, t, p);
        let e = C64::from_polar((15.0 / (32.0 * PI)).sqrt() * t.sin().powi(2), -2.0 * p);
        assert!((y - e).norm() < 1e-15);
    }

    #[test]
    fn orthonormal_by_quadrature() {
        // Gauss–Legendre in cos θ, uniform in φ
        let n = 40;
        let (xs, ws) = crate::quadrature::gauss_legendre(n);
        let nphi = 48;
        let pairs = [(3usize, 1i32), (3, -2), (5, 1), (4, 0), (7, 7)];
        for &(l1, m1) in &pairs {
            for &(l2, m2) in &pairs {
                let mut s = C64::new(0.0, 0.0);
                for (x, w) in xs.iter().zip(&ws) {
                    let t = x.acos();
                    for k in 0..nphi {
                        let p = 2.0 * PI * k as f64 / nphi as f64;
                        s += spherical_harmonic(l1, m1, t, p).conj()
                            * spherical_harmonic(l2, m2, t, p)
                            * (w * 2.0 * PI / nphi as f64);
                    }
                }
                let e = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
                assert!((s - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn table_matches_direct() {
        let t = YlmTable::new(30, 1.234, -2.5);
        for l in 0..=30 {
            for m in -(l as i32)..=(l as i32) {
                let d = spherical_harmonic(l, m, 1.234, -2.5);
                assert!((t.get(l, m) - d).norm() < 1e-14);
            }
        }
        assert_eq!(t.get(3, 4), C64::new(0.0, 0.0));
    }

    #[test]
    fn dtheta_matches_finite_difference() {
        let (t, p, h) = (0.9, 0.3, 1e-6);
        for l in 0..8usize {
            for m in -(l as i32)..=(l as i32) {
                let fd = (spherical_harmonic(l, m, t + h, p) - spherical_harmonic(l, m, t - h, p))
                    / (2.0 * h);
                assert!((spherical_harmonic_dtheta(l, m, t, p) - fd).norm() < 1e-8);
            }
        }
    }
}
