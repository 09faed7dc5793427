//! Electromagnetic response at imaginary frequency ω = iκ, Fresnel
//! coefficients and the two-level atomic polarizability.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Polarization, Result};

/// Permittivity value; a perfect conductor is kept symbolic so that amplitude
/// code can take its limit analytically.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Response {
    Finite(f64),
    Infinite,
}

impl Response {
    pub fn finite(self) -> Option<f64> {
        match self {
            Response::Finite(v) => Some(v),
            Response::Infinite => None,
        }
    }
}

/// Samples of ε and μ against κ, interpolated linearly in log–log.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    kappa: Vec<f64>,
    eps: Vec<f64>,
    mu: Vec<f64>,
}

impl Table {
    /// `kappa` must be strictly increasing and non-negative, ε positive and μ
    /// non-negative.
    pub fn new(kappa: Vec<f64>, eps: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        if kappa.len() < 2 || eps.len() != kappa.len() || mu.len() != kappa.len() {
            return Err(Error::Material("table needs at least two rows of equal length"));
        }
        if kappa.windows(2).any(|w| !(w[1] > w[0])) || !(kappa[0] >= 0.0) {
            return Err(Error::Material("table kappa values must be non-negative and strictly increasing"));
        }
        if kappa.iter().chain(&eps).chain(&mu).any(|v| !v.is_finite()) {
            return Err(Error::Material("table contains non-finite values"));
        }
        if eps.iter().any(|&e| e <= 0.0) || mu.iter().any(|&m| m < 0.0) {
            return Err(Error::Material("table needs eps > 0 and mu >= 0"));
        }
        Ok(Table { kappa, eps, mu })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.kappa[0], self.kappa[self.kappa.len() - 1])
    }

    fn lookup(&self, kappa: f64, column: &[f64]) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(kappa >= lo && kappa <= hi) {
            return Err(Error::Extrapolation { kappa, min: lo, max: hi });
        }
        let i = match self.kappa.partition_point(|&k| k <= kappa) {
            0 => 0,
            p if p >= self.kappa.len() => self.kappa.len() - 2,
            p => p - 1,
        };
        let (k0, k1) = (self.kappa[i], self.kappa[i + 1]);
        let (v0, v1) = (column[i], column[i + 1]);
        if kappa == k0 {
            return Ok(v0);
        }
        if k0 > 0.0 && v0 > 0.0 && v1 > 0.0 {
            let t = (kappa / k0).ln() / (k1 / k0).ln();
            Ok((v0.ln() + t * (v1 / v0).ln()).exp())
        } else {
            // a zero κ node or a vanishing μ has no logarithm
            let t = (kappa - k0) / (k1 - k0);
            Ok(v0 + t * (v1 - v0))
        }
    }
}

/// Response model of a body or an embedding medium.
#[derive(Clone, Debug, PartialEq)]
pub enum MaterialModel {
    Vacuum,
    PerfectConductor,
    /// Frequency-independent ε and μ; μ = 0 is allowed as a degenerate limit.
    Constant { eps: f64, mu: f64 },
    /// Point dipole with static polarizability `alpha0` and transition length
    /// `d10` = c/ω₁₀.
    TwoLevelAtom { alpha0: f64, d10: f64 },
    Tabulated(Table),
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Domain("kappa must be finite and non-negative"));
    }
    Ok(())
}

impl MaterialModel {
    pub fn constant(eps: f64, mu: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() || !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::Material("constant model needs finite eps > 0 and mu >= 0"));
        }
        Ok(MaterialModel::Constant { eps, mu })
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, MaterialModel::Vacuum) || *self == MaterialModel::Constant { eps: 1.0, mu: 1.0 }
    }

    /// ε(iκ).
    pub fn permittivity(&self, kappa: f64) -> Result<Response> {
        check_kappa(kappa)?;
        match self {
            MaterialModel::Vacuum => Ok(Response::Finite(1.0)),
            MaterialModel::PerfectConductor => Ok(Response::Infinite),
            MaterialModel::Constant { eps, .. } => Ok(Response::Finite(*eps)),
            MaterialModel::TwoLevelAtom { .. } => {
                Err(Error::Material("a two-level atom has a polarizability, not a permittivity"))
            }
            MaterialModel::Tabulated(t) => t.lookup(kappa, &t.eps).map(Response::Finite),
        }
    }

    /// μ(iκ); a perfect conductor reports 1.
    pub fn permeability(&self, kappa: f64) -> Result<f64> {
        check_kappa(kappa)?;
        match self {
            MaterialModel::Vacuum | MaterialModel::PerfectConductor => Ok(1.0),
            MaterialModel::Constant { mu, .. } => Ok(*mu),
            MaterialModel::TwoLevelAtom { .. } => {
                Err(Error::Material("a two-level atom has a polarizability, not a permeability"))
            }
            MaterialModel::Tabulated(t) => t.lookup(kappa, &t.mu),
        }
    }

    /// Fresnel coefficients (r^M, r^E) at x = 1/√(1 + k⊥²/κ²).
    pub fn fresnel(&self, kappa: f64, x: f64) -> Result<(f64, f64)> {
        let eps = self.permittivity(kappa)?;
        let mu = self.permeability(kappa)?;
        fresnel(eps, mu, x)
    }

    /// Fresnel coefficient for one polarization.
    pub fn reflection(&self, kappa: f64, x: f64, p: Polarization) -> Result<f64> {
        let (rm, re) = self.fresnel(kappa, x)?;
        Ok(match p {
            Polarization::M => rm,
            Polarization::E => re,
        })
    }
}

/// Fresnel coefficients (r^M, r^E) of a half-space with the given ε, μ for the
/// direction cosine x ∈ (0, 1].
pub fn fresnel(eps: Response, mu: f64, x: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0 && x <= 1.0) {
        return Err(Error::Domain("Fresnel argument must lie in [0, 1]"));
    }
    let eps = match eps {
        Response::Infinite => return Ok((-1.0, 1.0)),
        Response::Finite(e) => e,
    };
    let s = (1.0 + (eps * mu - 1.0) * x * x).max(0.0).sqrt();
    let ratio = |a: f64| if a + s == 0.0 { -1.0 } else { (a - s) / (a + s) };
    Ok((ratio(mu), ratio(eps)))
}

/// Polarizability α(u) of a two-level atom at rescaled frequency u = κd.
pub fn atom_alpha(model: &MaterialModel, u: f64, d: f64) -> Result<f64> {
    let (alpha0, d10) = match model {
        MaterialModel::TwoLevelAtom { alpha0, d10 } => (*alpha0, *d10),
        _ => return Err(Error::Material("polarizability needs a two-level atom")),
    };
    if !(u >= 0.0) || !(d > 0.0) {
        return Err(Error::Domain("atom polarizability needs u >= 0 and d > 0"));
    }
    let r2 = (d / d10) * (d / d10);
    if r2.is_infinite() {
        return Ok(alpha0);
    }
    Ok(r2 * alpha0 / (r2 + u * u))
}

/// Polarizability of a two-level atom at imaginary wave number κ,
/// α0 / (1 + κ²d10²).
pub fn atom_alpha_at(alpha0: f64, d10: f64, kappa: f64) -> f64 {
    let t = kappa * d10;
    alpha0 / (1.0 + t * t)
}

/// Uniform medium filling the space between the bodies.
#[derive(Clone, Debug, PartialEq)]
pub struct Medium {
    model: MaterialModel,
}

impl Medium {
    pub fn new(model: MaterialModel) -> Result<Self> {
        match model {
            MaterialModel::PerfectConductor => Err(Error::Medium("a perfect conductor cannot fill the gap")),
            MaterialModel::TwoLevelAtom { .. } => Err(Error::Medium("an atom cannot fill the gap")),
            _ => Ok(Medium { model }),
        }
    }

    pub fn vacuum() -> Self {
        Medium { model: MaterialModel::Vacuum }
    }

    pub fn model(&self) -> &MaterialModel {
        &self.model
    }

    pub fn is_vacuum(&self) -> bool {
        self.model.is_vacuum()
    }

    /// (ε_m, μ_m) at iκ.
    pub fn responses(&self, kappa: f64) -> Result<(f64, f64)> {
        let eps = self.model.permittivity(kappa)?.finite().ok_or(Error::Medium("infinite permittivity"))?;
        Ok((eps, self.model.permeability(kappa)?))
    }

    /// Refractive index n_m = √(ε_m μ_m); must be positive.
    pub fn index(&self, kappa: f64) -> Result<f64> {
        let (e, m) = self.responses(kappa)?;
        let n = (e * m).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Medium("refractive index must be positive"));
        }
        Ok(n)
    }

    /// The body's responses relative to the medium, (ε/ε_m, μ/μ_m).
    pub fn relative(&self, body: &MaterialModel, kappa: f64) -> Result<(Response, f64)> {
        let (em, mm) = self.responses(kappa)?;
        if mm <= 0.0 {
            return Err(Error::Medium("medium permeability must be positive"));
        }
        let eps = match body.permittivity(kappa)? {
            Response::Finite(e) => Response::Finite(e / em),
            Response::Infinite => Response::Infinite,
        };
        Ok((eps, body.permeability(kappa)? / mm))
    }
}
