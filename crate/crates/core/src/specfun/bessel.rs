use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Largest order accepted by the Bessel kernels.
pub const MAX_ORDER: usize = 600;

const BIG: f64 = 1e250;
const SMALL: f64 = 1e-250;
const LN_BIG: f64 = 575.646_273_248_511_4;
const LN_EXP_MAX: f64 = 709.0;

/// Function value and derivative with respect to the argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselPair {
    pub value: f64,
    pub derivative: f64,
}

/// Value and derivative that share an exponential scale: the true value is
/// `value * exp(ln_scale)` and likewise for the derivative.
///
/// The mantissas are normalized so that the larger of the two has magnitude
/// one, which keeps products and ratios of many of these finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledPair {
    pub value: f64,
    pub derivative: f64,
    pub ln_scale: f64,
}

impl ScaledPair {
    fn normalized(value: f64, derivative: f64, ln_scale: f64) -> Self {
        let m = value.abs().max(derivative.abs());
        if m == 0.0 || !m.is_finite() || (1e-150..=1e150).contains(&m) {
            return ScaledPair { value, derivative, ln_scale };
        }
        ScaledPair { value: value / m, derivative: derivative / m, ln_scale: ln_scale + m.ln() }
    }

    // (value·norm, derivative·norm) at scale e^{ln_scale}, multiplying directly
    // when that stays representable so no logarithm round-off enters
    fn with_norm(value: f64, derivative: f64, norm: f64, ln_scale: f64) -> Self {
        let v = value * norm;
        let d = derivative * norm;
        if v.is_normal() && d.is_finite() {
            Self::normalized(v, d, ln_scale)
        } else {
            Self::normalized(value, derivative, ln_scale + norm.ln())
        }
    }

    /// Natural log of |value|.
    pub fn ln_abs(&self) -> f64 {
        self.value.abs().ln() + self.ln_scale
    }

    pub fn sign(&self) -> f64 {
        if self.value < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// f'/f, free of any scale.
    pub fn log_derivative(&self) -> f64 {
        self.derivative / self.value
    }

    /// Plain value and derivative; fails when the magnitude overflows `f64`.
    pub fn unscale(&self) -> Result<BesselPair> {
        let peak = self.value.abs().max(self.derivative.abs());
        if peak > 0.0 && peak.ln() + self.ln_scale > LN_EXP_MAX {
            return Err(Error::Overflow("Bessel function value"));
        }
        let f = self.ln_scale.exp();
        if f.is_infinite() {
            // mantissa is below one, so split the factor
            let h = (0.5 * self.ln_scale).exp();
            return Ok(BesselPair { value: self.value * h * h, derivative: self.derivative * h * h });
        }
        Ok(BesselPair { value: self.value * f, derivative: self.derivative * f })
    }

    /// `self / other` for the values.
    pub fn ratio(&self, other: &ScaledPair) -> f64 {
        self.value / other.value * (self.ln_scale - other.ln_scale).exp()
    }
}

fn check_args(order: usize, x: f64) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge { order, max: MAX_ORDER });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain("Bessel argument must be finite and non-negative"));
    }
    Ok(())
}

fn miller_start(order: usize, x: f64) -> usize {
    order + 20 + (100.0 * (x + 1.0)).sqrt().ceil() as usize
}

/// I_n(x) and I_n'(x) for n = 0..=nmax, each with its own exponential scale.
///
/// Downward (Miller) recurrence, normalized with e^x = I_0 + 2 Σ I_k.
pub fn bessel_i_seq(nmax: usize, x: f64) -> Result<Vec<ScaledPair>> {
    check_args(nmax, x)?;
    if x == 0.0 {
        return Ok((0..=nmax)
            .map(|n| {
                let v = if n == 0 { 1.0 } else { 0.0 };
                let d = if n == 1 { 0.5 } else { 0.0 };
                ScaledPair { value: v, derivative: d, ln_scale: 0.0 }
            })
            .collect());
    }
    let start = miller_start(nmax, x);
    // (y_k, y_{k+1}, number of rescalings when y_k was produced)
    let mut store = vec![(0.0, 0.0, 0i64); nmax + 1];
    let mut upper = 0.0;
    let mut y = 1.0;
    let mut rescales = 0i64;
    let mut sum = 0.0;
    for k in (1..=start).rev() {
        if k <= nmax {
            store[k] = (y, upper, rescales);
        }
        sum += 2.0 * y;
        let lower = upper + (2.0 * k as f64 / x) * y;
        upper = y;
        y = lower;
        if y.abs() > BIG {
            y *= SMALL;
            upper *= SMALL;
            sum *= SMALL;
            rescales += 1;
        }
    }
    store[0] = (y, upper, rescales);
    sum += y;
    Ok(store
        .iter()
        .enumerate()
        .map(|(k, &(yk, yk1, ck))| {
            let d = yk1 + (k as f64 / x) * yk;
            ScaledPair::with_norm(yk, d, 1.0 / sum, (ck - rescales) as f64 * LN_BIG + x)
        })
        .collect())
}

/// K_n(x) and K_n'(x) for n = 0..=nmax, each with its own exponential scale.
///
/// K_0 and K_1 come from trapezoidal quadrature of
/// e^x K_ν(x) = ∫₀^∞ exp(−2x sinh²(t/2)) cosh(νt) dt, which converges
/// geometrically because the integrand is entire; higher orders follow by
/// upward recurrence.
pub fn bessel_k_seq(nmax: usize, x: f64) -> Result<Vec<ScaledPair>> {
    check_args(nmax, x)?;
    if x == 0.0 {
        return Err(Error::Domain("K_n is singular at x = 0"));
    }
    let (k0, k1) = k01_scaled(x);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(ScaledPair::normalized(k0, -k1, -x));
    let mut lower = k0;
    let mut cur = k1;
    let mut rescales = 0i64;
    for n in 1..=nmax {
        let d = -(lower + (n as f64 / x) * cur);
        out.push(ScaledPair::normalized(cur, d, rescales as f64 * LN_BIG - x));
        let next = lower + (2.0 * n as f64 / x) * cur;
        lower = cur;
        cur = next;
        if cur > BIG {
            cur *= SMALL;
            lower *= SMALL;
            rescales += 1;
        }
    }
    Ok(out)
}

fn k01_scaled(x: f64) -> (f64, f64) {
    let h = (0.5 / x.sqrt()).min(0.1);
    let mut s0 = 0.5;
    let mut s1 = 0.5;
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        let sh = (0.5 * t).sinh();
        let e = (-2.0 * x * sh * sh).exp();
        let a1 = e * t.cosh();
        s0 += e;
        s1 += a1;
        if a1 < 1e-18 * s1 || k > 100_000 {
            break;
        }
        k += 1;
    }
    (h * s0, h * s1)
}

/// Modified spherical Bessel functions of the first kind,
/// i_l(z) = √(π/2z) I_{l+1/2}(z), for l = 0..=lmax.
///
/// Downward recurrence normalized by i_0(z) = sinh z / z.
pub fn sph_bessel_i_seq(lmax: usize, z: f64) -> Result<Vec<ScaledPair>> {
    check_args(lmax, z)?;
    if z == 0.0 {
        return Ok((0..=lmax)
            .map(|l| {
                let v = if l == 0 { 1.0 } else { 0.0 };
                let d = if l == 1 { 1.0 / 3.0 } else { 0.0 };
                ScaledPair { value: v, derivative: d, ln_scale: 0.0 }
            })
            .collect());
    }
    let start = miller_start(lmax, z);
    let mut store = vec![(0.0, 0.0, 0i64); lmax + 1];
    let mut upper = 0.0;
    let mut y = 1.0;
    let mut rescales = 0i64;
    for k in (1..=start).rev() {
        if k <= lmax {
            store[k] = (y, upper, rescales);
        }
        let lower = upper + ((2 * k + 1) as f64 / z) * y;
        upper = y;
        y = lower;
        if y.abs() > BIG {
            y *= SMALL;
            upper *= SMALL;
            rescales += 1;
        }
    }
    store[0] = (y, upper, rescales);
    // e^{-z} sinh(z)/z without cancellation
    let i0_scaled = -(-2.0 * z).exp_m1() / (2.0 * z);
    let norm = i0_scaled / y;
    Ok(store
        .iter()
        .enumerate()
        .map(|(k, &(yk, yk1, ck))| {
            let d = yk1 + (k as f64 / z) * yk;
            ScaledPair::with_norm(yk, d, norm, (ck - rescales) as f64 * LN_BIG + z)
        })
        .collect())
}

/// Modified spherical Bessel functions of the third kind,
/// k_l(z) = √(2/πz) K_{l+1/2}(z) (so k_0(z) = e^{−z}/z), for l = 0..=lmax.
pub fn sph_bessel_k_seq(lmax: usize, z: f64) -> Result<Vec<ScaledPair>> {
    check_args(lmax, z)?;
    if z == 0.0 {
        return Err(Error::Domain("k_l is singular at z = 0"));
    }
    // e^z k_0 = 1/z, e^z k_1 = (1+z)/z²; the common 1/z goes into the shift
    let base = -z - z.ln();
    let mut rescales = 0i64;
    let mut lower = 1.0;
    let mut cur = (1.0 + z) / z;
    let mut out = Vec::with_capacity(lmax + 1);
    out.push(ScaledPair::normalized(lower, -cur, base));
    for l in 1..=lmax {
        let d = -(lower + ((l + 1) as f64 / z) * cur);
        out.push(ScaledPair::normalized(cur, d, base + rescales as f64 * LN_BIG));
        let next = lower + ((2 * l + 1) as f64 / z) * cur;
        lower = cur;
        cur = next;
        if cur > BIG {
            cur *= SMALL;
            lower *= SMALL;
            rescales += 1;
        }
    }
    Ok(out)
}

fn pick(mut v: Vec<ScaledPair>, n: usize) -> ScaledPair {
    v.swap_remove(n)
}

pub fn bessel_i_scaled(n: usize, x: f64) -> Result<ScaledPair> {
    bessel_i_seq(n, x).map(|v| pick(v, n))
}

pub fn bessel_k_scaled(n: usize, x: f64) -> Result<ScaledPair> {
    bessel_k_seq(n, x).map(|v| pick(v, n))
}

pub fn sph_bessel_i_scaled(l: usize, z: f64) -> Result<ScaledPair> {
    sph_bessel_i_seq(l, z).map(|v| pick(v, l))
}

pub fn sph_bessel_k_scaled(l: usize, z: f64) -> Result<ScaledPair> {
    sph_bessel_k_seq(l, z).map(|v| pick(v, l))
}

/// I_n(x) and I_n'(x).
pub fn bessel_i(n: usize, x: f64) -> Result<BesselPair> {
    bessel_i_scaled(n, x)?.unscale()
}

/// K_n(x) and K_n'(x).
pub fn bessel_k(n: usize, x: f64) -> Result<BesselPair> {
    bessel_k_scaled(n, x)?.unscale()
}

/// i_l(z) and i_l'(z).
pub fn sph_bessel_i(l: usize, z: f64) -> Result<BesselPair> {
    sph_bessel_i_scaled(l, z)?.unscale()
}

/// k_l(z) and k_l'(z).
pub fn sph_bessel_k(l: usize, z: f64) -> Result<BesselPair> {
    sph_bessel_k_scaled(l, z)?.unscale()
}
