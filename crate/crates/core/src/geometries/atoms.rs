//! Two identical two-level atoms.

#[allow(unused_imports)]
use num_traits::Float;

use crate::energy::{integrate_energy, EnergyResult, Executor, Integrand, LogDet, MediumDependent, TruncationPolicy};
use crate::materials::{atom_alpha_at, Medium};
use crate::quadrature::QuadratureSpec;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomMode {
    /// The dipole–dipole log-determinant to all orders in α.
    FullLog,
    /// Its expansion to second order in α.
    Quadratic,
}

/// Two atoms a distance `d` apart with static polarizability `alpha0` and
/// transition length `d10`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoAtoms {
    pub d: f64,
    pub alpha0: f64,
    pub d10: f64,
    pub mode: AtomMode,
    medium: Medium,
}

impl TwoAtoms {
    pub fn new(d: f64, alpha0: f64, d10: f64, mode: AtomMode) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Geometry("atom separation must be positive"));
        }
        if !(alpha0 >= 0.0) || !alpha0.is_finite() || !(d10 >= 0.0) || !d10.is_finite() {
            return Err(Error::Material("atom needs finite alpha0 >= 0 and d10 >= 0"));
        }
        Ok(TwoAtoms { d, alpha0, d10, mode, medium: Medium::vacuum() })
    }

    /// The parallel and perpendicular dipole couplings (α/d³)² g(u) e^{−2u}
    /// at u = κd.
    pub fn couplings(&self, kappa: f64) -> (f64, f64) {
        let u = kappa * self.d;
        let a = atom_alpha_at(self.alpha0, self.d10, kappa) / self.d.powi(3);
        let e = (-2.0 * u).exp() * a * a;
        let par = 4.0 * (1.0 + u).powi(2) * e;
        let perp = (1.0 + u + u * u).powi(2) * e;
        (par, perp)
    }
}

impl Integrand for TwoAtoms {
    // the polarizability varies on 1/d10 and the coupling on 1/d
    fn length_scale(&self) -> f64 {
        self.d.max(self.d10)
    }

    fn log_det(&self, kappa: f64, _order: usize) -> Result<LogDet> {
        let u = kappa * self.d;
        Ok(LogDet::new(match self.mode {
            AtomMode::FullLog => {
                let (par, perp) = self.couplings(kappa);
                if par >= 1.0 || perp >= 1.0 {
                    return Err(Error::Singular);
                }
                // m = 0 couples along the axis, m = ±1 transversally
                (-par).ln_1p() + 2.0 * (-perp).ln_1p()
            }
            AtomMode::Quadratic => {
                let a = atom_alpha_at(self.alpha0, self.d10, kappa) / self.d.powi(3);
                let poly = 3.0 + u * (6.0 + u * (5.0 + u * (2.0 + u)));
                -2.0 * a * a * poly * (-2.0 * u).exp()
            }
        }))
    }
}

impl MediumDependent for TwoAtoms {
    fn medium(&self) -> &Medium {
        &self.medium
    }

    fn replace_medium(self, medium: Medium) -> Result<Self> {
        if !medium.is_vacuum() {
            return Err(Error::Medium("atom polarizabilities are only defined in vacuum"));
        }
        Ok(self)
    }
}

/// Interaction energy of two atoms, in ħc per length unit.
pub fn two_atoms_energy(d: f64, alpha0: f64, d10: f64, mode: AtomMode, spec: &QuadratureSpec, exec: &dyn Executor) -> Result<EnergyResult> {
    let atoms = TwoAtoms::new(d, alpha0, d10, mode)?;
    integrate_energy(&atoms, spec, &TruncationPolicy::default(), exec)
}
