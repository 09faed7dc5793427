//! Spherical-wave translation matrices from sums of Wigner 3j symbols,
//! spherical Bessel functions and spherical harmonics over the internal
//! order l″ ≤ l + l′.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use super::{Displacement, TranslationBlock, TranslationKind};
use crate::linalg::CMatrix;
use crate::scattering::{Channel, ChannelBasis};
use crate::specfun::{sph_bessel_i_seq, sph_bessel_k_seq, wigner3j_series, wigner3j_zero_series, YlmTable};
use crate::{Error, Polarization, Result, C64};

/// Precomputed radial functions and harmonics for one displacement, from
/// which individual U or V elements are assembled.
#[derive(Clone, Debug)]
pub struct SphereTranslation {
    outgoing: bool,
    kappa: f64,
    x: Displacement,
    /// k_{l″}(κ|X|) for U, (−1)^{l″} i_{l″}(κ|X|) for V
    radial: Vec<f64>,
    ylm: YlmTable,
    l_max: usize,
}

impl SphereTranslation {
    /// Set up U (`outgoing = true`, needs |X| > 0) or V elements for
    /// channels with l ≤ l_max. For U, `x` is X_ji; the l″ series itself
    /// runs over the opposite vector X_ij, which is the orientation that
    /// reproduces the free Green's function with these wave functions.
    pub fn new(outgoing: bool, kappa: f64, x: &Displacement, l_max: usize) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::Domain("spherical translations need kappa > 0"));
        }
        let x = &if outgoing { x.reversed() } else { *x };
        let r = x.norm();
        let top = 2 * l_max + 1;
        let z = kappa * r;
        let radial = if outgoing {
            if !(r > 0.0) {
                return Err(Error::Geometry("spherical U needs a nonzero displacement"));
            }
            sph_bessel_k_seq(top, z)?.iter().map(|s| s.unscale().map(|p| p.value)).collect::<Result<Vec<_>>>()?
        } else if z == 0.0 {
            let mut v = vec![0.0; top + 1];
            v[0] = 1.0;
            v
        } else {
            sph_bessel_i_seq(top, z)?
                .iter()
                .enumerate()
                .map(|(l, s)| s.unscale().map(|p| if l % 2 == 0 { p.value } else { -p.value }))
                .collect::<Result<Vec<_>>>()?
        };
        let ylm = if r > 0.0 {
            YlmTable::from_cos_sin(top, x.z() / r, x.perp() / r, x.azimuth())
        } else {
            YlmTable::from_cos_sin(top, 1.0, 0.0, 0.0)
        };
        Ok(SphereTranslation { outgoing, kappa, x: *x, radial, ylm, l_max })
    }

    // Σ_{l″} √(4π(2l+1)(2l′+1)(2l″+1)) (l l′ l″; 0 0 0)(l l′ l″; m −m′ m′−m) R_{l″} Y_{l″,m−m′}
    // with the overall (−1)^{m+l} (U) or (−1)^m (V) sign; returns the plain sum
    // and the one weighted by [l(l+1) + l′(l′+1) − l″(l″+1)]/(2√(l(l+1)l′(l′+1)))
    fn sums(&self, zero: &(i32, Vec<f64>), l2: usize, m2: i32, l: usize, m: i32) -> (C64, C64) {
        let nil = C64::new(0.0, 0.0);
        if m.unsigned_abs() as usize > l || m2.unsigned_abs() as usize > l2 {
            return (nil, nil);
        }
        let (li, l2i) = (l as i32, l2 as i32);
        let (zmin, zero) = (zero.0, &zero.1);
        let (jmin, w3) = wigner3j_series(li, l2i, m, -m2);
        let mm = m - m2;
        let base = 4.0 * PI * ((2 * l + 1) * (2 * l2 + 1)) as f64;
        let a = (l * (l + 1)) as f64;
        let b = (l2 * (l2 + 1)) as f64;
        let norm = 0.5 / (a * b).sqrt();
        let (mut plain, mut weighted) = (nil, nil);
        for (k, w) in w3.iter().enumerate() {
            let j = jmin + k as i32;
            let z0 = zero[(j - zmin) as usize];
            if z0 == 0.0 || *w == 0.0 {
                continue;
            }
            let c = (base * (2 * j + 1) as f64).sqrt() * z0 * w * self.radial[j as usize];
            let t = self.ylm.get(j as usize, mm) * c;
            plain += t;
            weighted += t * ((a + b - (j * (j + 1)) as f64) * norm);
        }
        let sign_exp = if self.outgoing { m + li } else { m };
        if sign_exp.rem_euclid(2) == 0 {
            (plain, weighted)
        } else {
            (-plain, -weighted)
        }
    }

    fn zero_series(l2: usize, l: usize) -> (i32, Vec<f64>) {
        wigner3j_zero_series(l as i32, l2 as i32)
    }

    // mixing element from the plain sums at m − 1, m, m + 1
    fn combine_mixed(&self, l2: usize, l: usize, m: i32, lower: C64, mid: C64, upper: C64) -> C64 {
        let lf = l as f64;
        let mf = m as f64;
        let lp = ((lf - mf) * (lf + mf + 1.0)).max(0.0).sqrt();
        let lm = ((lf + mf) * (lf - mf + 1.0)).max(0.0).sqrt();
        let ap = upper * lp;
        let am = lower * lm;
        let [x, y, z] = self.x.x;
        let i = C64::new(0.0, 1.0);
        let bracket = (ap + am) * (0.5 * x) + (ap - am) / (2.0 * i) * y + mid * (mf * z);
        let pre = -i * self.kappa / ((l * (l + 1) * l2 * (l2 + 1)) as f64).sqrt();
        pre * bracket
    }

    /// The A (for U) or B (for V) auxiliary sum for channels (l′ m′), (l m).
    pub fn auxiliary(&self, l2: usize, m2: i32, l: usize, m: i32) -> C64 {
        self.sums(&Self::zero_series(l2, l), l2, m2, l, m).0
    }

    /// Polarization-preserving element (MM = EE) at row (l′ m′), column (l m).
    pub fn same(&self, l2: usize, m2: i32, l: usize, m: i32) -> C64 {
        self.sums(&Self::zero_series(l2, l), l2, m2, l, m).1
    }

    /// Mixing element with row polarization E and column polarization M;
    /// the (M, E) element is its negative.
    pub fn mixed(&self, l2: usize, m2: i32, l: usize, m: i32) -> C64 {
        let z = Self::zero_series(l2, l);
        let lower = self.sums(&z, l2, m2, l, m - 1).0;
        let mid = self.sums(&z, l2, m2, l, m).0;
        let upper = self.sums(&z, l2, m2, l, m + 1).0;
        self.combine_mixed(l2, l, m, lower, mid, upper)
    }

    /// Element between two spherical channels (row, column).
    pub fn element(&self, row: &Channel, col: &Channel) -> Result<C64> {
        let (Channel::Spherical { l: l2, m: m2, p: p2 }, Channel::Spherical { l, m, p }) = (*row, *col) else {
            return Err(Error::Dimension("spherical translation needs spherical channels"));
        };
        if l == 0 || l2 == 0 {
            return Err(Error::Selection("spherical vector waves start at l = 1"));
        }
        if l > self.l_max || l2 > self.l_max {
            return Err(Error::OrderTooLarge { order: l.max(l2), max: self.l_max });
        }
        Ok(match (p2, p) {
            (Polarization::M, Polarization::M) | (Polarization::E, Polarization::E) => self.same(l2, m2, l, m),
            (Polarization::E, Polarization::M) => self.mixed(l2, m2, l, m),
            (Polarization::M, Polarization::E) => -self.mixed(l2, m2, l, m),
        })
    }
}

fn single(kind: TranslationKind, kappa: f64, row: &Channel, col: &Channel, x: &Displacement) -> Result<C64> {
    let l_max = match (*row, *col) {
        (Channel::Spherical { l: a, .. }, Channel::Spherical { l: b, .. }) => a.max(b),
        _ => return Err(Error::Dimension("spherical translation needs spherical channels")),
    };
    match kind {
        TranslationKind::W => {
            let t = SphereTranslation::new(false, kappa, x, l_max)?;
            Ok(t.element(col, row)?.conj() * adjoint_sign(row, col))
        }
        _ => SphereTranslation::new(kind == TranslationKind::U, kappa, x, l_max)?.element(row, col),
    }
}

/// C_row/C_col for spherical channels: −1 across polarizations.
fn adjoint_sign(row: &Channel, col: &Channel) -> f64 {
    if row.polarization() == col.polarization() {
        1.0
    } else {
        -1.0
    }
}

/// Spherical U^{ji} element at X_ji.
pub fn sph_u(kappa: f64, row: &Channel, col: &Channel, x_ji: &Displacement) -> Result<C64> {
    single(TranslationKind::U, kappa, row, col, x_ji)
}

/// Spherical V^{ij} element at X_ij.
pub fn sph_v(kappa: f64, row: &Channel, col: &Channel, x_ij: &Displacement) -> Result<C64> {
    single(TranslationKind::V, kappa, row, col, x_ij)
}

/// Spherical W^{ji} element at X_ji.
pub fn sph_w(kappa: f64, row: &Channel, col: &Channel, x_ji: &Displacement) -> Result<C64> {
    single(TranslationKind::W, kappa, row, col, x_ji)
}

/// Full spherical translation block over l ≤ l_max. `x` is X_ji for U and W,
/// X_ij for V.
pub fn sph_block(kind: TranslationKind, l_max: usize, kappa: f64, x: &Displacement) -> Result<TranslationBlock> {
    let basis = ChannelBasis::spherical(l_max);
    let t = SphereTranslation::new(kind == TranslationKind::U, kappa, x, l_max)?;
    let ch = basis.channels();
    let n = ch.len();
    // fill by (l′m′, lm) pairs, each giving a 2×2 polarization block; the
    // plain sums for m = −l−1..=l+1 are shared by neighbouring columns
    let mut m = CMatrix::zeros(n, n);
    let index = |l: usize, mm: i32| 2 * ((l * l - 1) as i64 + (mm + l as i32) as i64) as usize;
    for l2 in 1..=l_max {
        for l in 1..=l_max {
            let z = SphereTranslation::zero_series(l2, l);
            let li = l as i32;
            for m2 in -(l2 as i32)..=(l2 as i32) {
                let sums: Vec<(C64, C64)> = (-li - 1..=li + 1).map(|mm| t.sums(&z, l2, m2, l, mm)).collect();
                let a = index(l2, m2);
                for mm in -li..=li {
                    let k = (mm + li + 1) as usize;
                    let s = sums[k].1;
                    let x = t.combine_mixed(l2, l, mm, sums[k - 1].0, sums[k].0, sums[k + 1].0);
                    let b = index(l, mm);
                    m[(a, b)] = s;
                    m[(a + 1, b + 1)] = s;
                    m[(a + 1, b)] = x;
                    m[(a, b + 1)] = -x;
                }
            }
        }
    }
    if kind == TranslationKind::W {
        // W_{αβ} = V*_{βα} C_α/C_β
        let v = m;
        m = CMatrix::from_fn(n, n, |a, b| v[(b, a)].conj() * adjoint_sign(&ch[a], &ch[b]));
    }
    Ok(TranslationBlock { kind, basis, kappa, matrix: m })
}
