//! Two parallel perfectly conducting cylinders, side by side or one inside
//! the other.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::energy::{integrate_energy, log_det_real, logdet_two_body, EnergyResult, Executor, Integrand, LogDet, Measure, MediumDependent, TruncationPolicy};
use crate::linalg::CMatrix;
use crate::materials::{MaterialModel, Medium};
use crate::scattering::{pec_cylinder_block, ChannelBasis, Part};
use crate::specfun::{bessel_i_seq, bessel_k_seq, ScaledPair, MAX_ORDER};
use crate::translation::{arrangement_of, assemble_x, Arrangement, Displacement};
use crate::{Error, Result, C64};

use super::Settings;

/// Cylinders of radii `r_a`, `r_b` with axes a distance `d` apart. In the
/// nested case `a` is the inner cylinder.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoCylinders {
    pub r_a: f64,
    pub r_b: f64,
    pub d: f64,
    pub arrangement: Arrangement,
    medium: Medium,
}

impl TwoCylinders {
    pub fn outer(r_a: f64, r_b: f64, d: f64) -> Result<Self> {
        match arrangement_of(r_a, r_b, d)? {
            Arrangement::Outside => Ok(TwoCylinders { r_a, r_b, d, arrangement: Arrangement::Outside, medium: Medium::vacuum() }),
            _ => Err(Error::Geometry("side-by-side cylinders need d > r_a + r_b")),
        }
    }

    pub fn nested(r_a: f64, r_b: f64, d: f64) -> Result<Self> {
        match arrangement_of(r_a, r_b, d)? {
            Arrangement::AInsideB => Ok(TwoCylinders { r_a, r_b, d, arrangement: Arrangement::AInsideB, medium: Medium::vacuum() }),
            _ => Err(Error::Geometry("nested cylinders need d + r_a < r_b")),
        }
    }

    /// Narrowest surface-to-surface distance.
    pub fn gap(&self) -> f64 {
        match self.arrangement {
            Arrangement::Outside => self.d - self.r_a - self.r_b,
            _ => self.r_b - self.r_a - self.d,
        }
    }

    pub fn policy(&self, settings: &Settings) -> Result<TruncationPolicy> {
        let mut p = TruncationPolicy::for_gap(self.r_a.max(self.r_b), self.gap(), settings.order_cap)?;
        p.rtol = settings.truncation_rtol;
        Ok(p)
    }

    // constant-index media only rescale frequency; E_med = E_vac / n
    fn index(&self) -> Result<f64> {
        match self.medium.model() {
            MaterialModel::Vacuum | MaterialModel::Constant { .. } => self.medium.index(0.0),
            _ => Err(Error::Unsupported("cylinders only support a frequency-independent medium")),
        }
    }

    /// ln det N^M + ln det N^E at p with |n| ≤ n_max.
    pub fn mode_log_det(&self, p: f64, n_max: usize) -> Result<LogDet> {
        if 2 * n_max > MAX_ORDER {
            return Err(Error::OrderTooLarge { order: n_max, max: MAX_ORDER / 2 });
        }
        if !(p > 0.0) {
            return Err(Error::Domain("cylinder modes need p > 0"));
        }
        let coupling = |x: f64, regular: bool| -> Result<Vec<f64>> {
            if x == 0.0 {
                let mut v = vec![f64::NEG_INFINITY; 2 * n_max + 1];
                v[0] = 0.0;
                return Ok(v);
            }
            let s = if regular { bessel_i_seq(2 * n_max, x)? } else { bessel_k_seq(2 * n_max, x)? };
            Ok(s.iter().map(ScaledPair::ln_abs).collect())
        };
        let i_a = bessel_i_seq(n_max, p * self.r_a)?;
        let k_a = bessel_k_seq(n_max, p * self.r_a)?;
        let i_b = bessel_i_seq(n_max, p * self.r_b)?;
        let k_b = bessel_k_seq(n_max, p * self.r_b)?;
        let (row, col, c) = match self.arrangement {
            Arrangement::Outside => ((&i_a, &k_a), (&i_b, &k_b), coupling(p * self.d, false)?),
            _ => ((&k_b, &i_b), (&i_a, &k_a), coupling(p * self.d, true)?),
        };
        let mut total = LogDet::default();
        for derivative in [true, false] {
            let ratio = |(num, den): (&Vec<ScaledPair>, &Vec<ScaledPair>), n: usize| -> (f64, f64) {
                let (x, y) = if derivative { (num[n].derivative, den[n].derivative) } else { (num[n].value, den[n].value) };
                ((x / y).abs().ln() + num[n].ln_scale - den[n].ln_scale, (x / y).signum())
            };
            total = total.add(symmetric_mode(n_max, |n| ratio(row, n), |n| ratio(col, n), &c)?);
        }
        Ok(total.scaled(1.0 / self.index()?))
    }
}

// ln det(I − D_A C D_B C) with C_{nn'} = exp(c[|n+n'|]), taken in the
// symmetric form I − σ G Gᵀ, G = |D_A|^½ C |D_B|^½, so that the huge and tiny
// factors of D_A, C and D_B meet inside one exponential
fn symmetric_mode<A, B>(n_max: usize, a: A, b: B, c: &[f64]) -> Result<LogDet>
where
    A: Fn(usize) -> (f64, f64),
    B: Fn(usize) -> (f64, f64),
{
    let dim = 2 * n_max + 1;
    let order = |i: usize| (i as i64 - n_max as i64).unsigned_abs() as usize;
    let la: Vec<(f64, f64)> = (0..dim).map(|i| a(order(i))).collect();
    let lb: Vec<(f64, f64)> = (0..dim).map(|i| b(order(i))).collect();
    let sigma = la[0].1 * lb[0].1;
    let g = CMatrix::from_fn(dim, dim, |i, j| {
        let k = (i + j) as i64 - 2 * n_max as i64;
        let e = 0.5 * la[i].0 + c[k.unsigned_abs() as usize] + 0.5 * lb[j].0;
        C64::new(e.exp(), 0.0)
    });
    let m = CMatrix::identity(dim).sub(&g.mul(&g.transpose())?.scaled(C64::new(sigma, 0.0)))?;
    log_det_real(&m)
}

impl Integrand for TwoCylinders {
    fn length_scale(&self) -> f64 {
        self.gap()
    }

    fn measure(&self) -> Measure {
        Measure::Polar
    }

    fn initial_order(&self) -> Option<usize> {
        Some(1)
    }

    fn log_det(&self, p: f64, order: usize) -> Result<LogDet> {
        self.mode_log_det(p, order)
    }
}

impl MediumDependent for TwoCylinders {
    fn medium(&self) -> &Medium {
        &self.medium
    }

    fn replace_medium(mut self, medium: Medium) -> Result<Self> {
        self.medium = medium;
        self.index()?;
        Ok(self)
    }
}

/// The same cylinders through the general amplitude and translation blocks,
/// at κ = p and k_z = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderPipeline {
    pub cylinders: TwoCylinders,
}

impl Integrand for CylinderPipeline {
    fn length_scale(&self) -> f64 {
        self.cylinders.gap()
    }

    fn measure(&self) -> Measure {
        Measure::Polar
    }

    fn initial_order(&self) -> Option<usize> {
        Some(1)
    }

    fn log_det(&self, p: f64, order: usize) -> Result<LogDet> {
        let c = &self.cylinders;
        // beyond this the log-det is below e^{−80} while single amplitudes
        // already overflow
        if p * c.gap() > 40.0 {
            return Ok(LogDet::default());
        }
        let basis = ChannelBasis::cylindrical(0.0, order);
        let x_ab = Displacement::new([c.d, 0.0, 0.0])?;
        let (xab, xba) = assemble_x(c.arrangement, &basis, p, &x_ab)?;
        let fa = pec_cylinder_block(c.r_a, p, 0.0, order, Part::Ee)?;
        let part_b = if c.arrangement == Arrangement::Outside { Part::Ee } else { Part::Ii };
        let fb = pec_cylinder_block(c.r_b, p, 0.0, order, part_b)?;
        Ok(logdet_two_body(&fa, &xab, &fb, &xba)?.scaled(1.0 / c.index()?))
    }
}

/// Energy per length of two perfectly conducting cylinders.
pub fn two_cylinders_energy(cylinders: &TwoCylinders, settings: &Settings, exec: &dyn Executor) -> Result<EnergyResult> {
    integrate_energy(cylinders, &settings.quadrature, &cylinders.policy(settings)?, exec)
}
