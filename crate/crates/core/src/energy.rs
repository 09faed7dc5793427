//! The two-body log-determinant, its integral over imaginary frequency with
//! truncation control, Matsubara sums at finite temperature, and the
//! uniform-medium transformation.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::CMatrix;
use crate::materials::{Medium, Response};
use crate::quadrature::{semi_infinite_rule, QuadratureSpec};
use crate::scattering::AmplitudeBlock;
use crate::translation::{part_of, XBlock};
use crate::{Error, Result};

/// Relative tolerance on the imaginary part of a log-determinant.
pub const REALNESS_RTOL: f64 = 1e-8;
/// Absolute floor of the realness test, for determinants close to one.
pub const REALNESS_FLOOR: f64 = 1e-12;

/// Real part of a log-determinant together with the size of the imaginary
/// part that was discarded.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LogDet {
    pub value: f64,
    pub residue: f64,
}

impl LogDet {
    pub fn new(value: f64) -> Self {
        LogDet { value, residue: 0.0 }
    }

    /// Sum of two log-determinants; residues combine by maximum.
    pub fn add(self, other: LogDet) -> LogDet {
        LogDet { value: self.value + other.value, residue: self.residue.max(other.residue) }
    }

    pub fn scaled(self, s: f64) -> LogDet {
        LogDet { value: self.value * s, residue: self.residue }
    }
}

/// ln det of `m`, failing when the determinant is not a positive real number
/// within tolerance.
pub fn log_det_real(m: &CMatrix) -> Result<LogDet> {
    let (ln_abs, phase) = m.log_det()?;
    if !ln_abs.is_finite() {
        return Err(Error::NonFinite);
    }
    if phase.re <= 0.0 {
        return Err(Error::Singular);
    }
    let imag = phase.im.atan2(phase.re);
    if imag.abs() > REALNESS_RTOL * ln_abs.abs() + REALNESS_FLOOR {
        return Err(Error::NotReal { real: ln_abs, imag });
    }
    Ok(LogDet { value: ln_abs, residue: imag.abs() })
}

/// log det(I − 𝔽_a 𝕏^{ab} 𝔽_b 𝕏^{ba}).
///
/// Each 𝕏 has a single nonzero submatrix, so only one part of each amplitude
/// enters: 𝔽_a must be the part that maps the column slot of 𝕏^{ba} onto the
/// row slot of 𝕏^{ab}, and likewise for 𝔽_b.
pub fn logdet_two_body(f_a: &AmplitudeBlock, x_ab: &XBlock, f_b: &AmplitudeBlock, x_ba: &XBlock) -> Result<LogDet> {
    if f_a.part != part_of(x_ba.col, x_ab.row) || f_b.part != part_of(x_ab.col, x_ba.row) {
        return Err(Error::Dimension("amplitude parts do not match the translation slots"));
    }
    if f_a.kappa != f_b.kappa {
        return Err(Error::Dimension("amplitudes evaluated at different kappa"));
    }
    let n = f_a.dim();
    let dims = [f_b.dim(), x_ab.matrix.rows(), x_ab.matrix.cols(), x_ba.matrix.rows(), x_ba.matrix.cols()];
    if dims.iter().any(|&d| d != n) {
        return Err(Error::Dimension("amplitude and translation blocks are not conformable"));
    }
    if f_a.is_zero() || f_b.is_zero() {
        return Ok(LogDet::new(0.0));
    }
    let right = f_b.apply_left(&x_ba.matrix)?;
    let k = f_a.apply_left(&x_ab.matrix.mul(&right)?)?;
    let m = CMatrix::identity(n).sub(&k)?;
    log_det_real(&m)
}

/// How the integration variable of an integrand relates to frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// E = (1/2π) ∫₀^∞ dκ L(κ).
    Frequency,
    /// L depends on κ and a continuous axial k_z only through
    /// p = √(κ² + k_z²), and E = (1/4π) ∫₀^∞ p dp L(p) per unit length.
    Polar,
}

/// A configuration reduced to its log-determinant as a function of one
/// variable, with any transverse momenta already integrated out.
pub trait Integrand: Sync {
    /// Characteristic surface-to-surface distance, used to map the
    /// frequency axis.
    fn length_scale(&self) -> f64;

    fn measure(&self) -> Measure {
        Measure::Frequency
    }

    /// Starting truncation order, or `None` when the integrand has no
    /// partial-wave cutoff.
    fn initial_order(&self) -> Option<usize> {
        None
    }

    /// L at `s` (κ or p) with partial waves up to `order`.
    fn log_det(&self, s: f64, order: usize) -> Result<LogDet>;
}

/// Evaluates integrand values at a batch of points. Implementations may run
/// them concurrently but must return results in input order.
pub trait Executor {
    fn map(&self, points: &[f64], f: &(dyn Fn(f64) -> Result<LogDet> + Sync)) -> Vec<Result<LogDet>>;
}

/// Evaluates points one after another.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, points: &[f64], f: &(dyn Fn(f64) -> Result<LogDet> + Sync)) -> Vec<Result<LogDet>> {
        points.iter().map(|&s| f(s)).collect()
    }
}

/// Partial-wave cutoff schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub initial: usize,
    pub increment: usize,
    /// Stop once raising the order changes the energy by less than this
    /// relative amount.
    pub rtol: f64,
    pub cap: usize,
}

impl TruncationPolicy {
    pub fn new(initial: usize, increment: usize, rtol: f64, cap: usize) -> Result<Self> {
        if increment == 0 || cap < initial || initial == 0 {
            return Err(Error::Domain("truncation needs initial >= 1, increment >= 1 and cap >= initial"));
        }
        if !(rtol > 0.0) {
            return Err(Error::Domain("truncation tolerance must be positive"));
        }
        Ok(TruncationPolicy { initial, increment, rtol, cap })
    }

    /// Default schedule for bodies of largest radius `r_max` at gap `gap`:
    /// start at max(8, ⌈6 r_max / gap⌉), step 4, stop at 1e-4.
    pub fn for_gap(r_max: f64, gap: f64, cap: usize) -> Result<Self> {
        if !(gap > 0.0) || !(r_max >= 0.0) {
            return Err(Error::Geometry("truncation needs a positive gap"));
        }
        let start = ((6.0 * r_max / gap).ceil() as usize).max(8);
        TruncationPolicy::new(start.min(cap), 4, 1e-4, cap)
    }

    /// Overrides the cap, keeping the start below it.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.max(1);
        self.initial = self.initial.min(self.cap);
        self
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { initial: 8, increment: 4, rtol: 1e-4, cap: 60 }
    }
}

/// An energy with its error budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyResult {
    pub value: f64,
    /// Change between the two finest quadrature levels (or the last
    /// retained Matsubara term).
    pub quad_err: f64,
    /// Change caused by the last order increment.
    pub trunc_err: f64,
    pub order: Option<usize>,
    /// Integrand evaluations at the finest level, or Matsubara terms summed.
    pub nodes: usize,
    /// Largest discarded imaginary part of any log-determinant.
    pub max_residue: f64,
}

impl EnergyResult {
    /// A value from a closed formula, with no quadrature or truncation.
    pub fn closed_form(value: f64) -> Self {
        EnergyResult { value, quad_err: 0.0, trunc_err: 0.0, order: None, nodes: 0, max_residue: 0.0 }
    }
}

fn gather(values: Vec<Result<LogDet>>) -> Result<Vec<LogDet>> {
    values.into_iter().collect()
}

// one quadrature level at a fixed order
fn level_sum(integrand: &dyn Integrand, exec: &dyn Executor, n: usize, order: usize) -> Result<LogDet> {
    let (nodes, weights) = semi_infinite_rule(n, 1.0 / integrand.length_scale());
    let f = |s: f64| integrand.log_det(s, order);
    let values = gather(exec.map(&nodes, &f))?;
    let mut acc = LogDet::default();
    for ((s, w), v) in nodes.iter().zip(&weights).zip(values) {
        let jac = match integrand.measure() {
            Measure::Frequency => w / (2.0 * PI),
            Measure::Polar => w * s / (4.0 * PI),
        };
        acc = acc.add(v.scaled(jac));
    }
    if !acc.value.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(acc)
}

fn check_length(integrand: &dyn Integrand) -> Result<()> {
    let l = integrand.length_scale();
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::Geometry("length scale must be positive"));
    }
    Ok(())
}

/// E = (1/2π) ∫₀^∞ dκ L(κ) (or its polar form), with κ = (u/(1−u))/d on
/// Gauss–Legendre nodes in u. The order is first raised at the coarsest
/// level until it stops mattering, then nodes are doubled at that order.
pub fn integrate_energy(
    integrand: &dyn Integrand,
    spec: &QuadratureSpec,
    policy: &TruncationPolicy,
    exec: &dyn Executor,
) -> Result<EnergyResult> {
    check_length(integrand)?;
    let mut order = integrand.initial_order().map(|o| o.max(policy.initial).min(policy.cap));
    let n0 = spec.nodes_at(0);
    let mut current = level_sum(integrand, exec, n0, order.unwrap_or(0))?;
    let mut trunc_err = 0.0;
    let mut residue = current.residue;
    if let Some(o) = order.as_mut() {
        loop {
            let next = *o + policy.increment;
            if next > policy.cap {
                return Err(Error::NoConvergence {
                    stage: "truncation",
                    achieved: trunc_err / current.value.abs(),
                    target: policy.rtol,
                    order: *o,
                    nodes: n0,
                });
            }
            let raised = level_sum(integrand, exec, n0, next)?;
            residue = residue.max(raised.residue);
            trunc_err = (raised.value - current.value).abs();
            *o = next;
            current = raised;
            if trunc_err <= policy.rtol * current.value.abs() {
                break;
            }
        }
    }
    let o = order.unwrap_or(0);
    let mut prev = current.value;
    for level in 1..=spec.max_refinements {
        let n = spec.nodes_at(level);
        let v = level_sum(integrand, exec, n, o)?;
        residue = residue.max(v.residue);
        let quad_err = (v.value - prev).abs();
        if quad_err <= spec.rtol * v.value.abs() + spec.atol {
            return Ok(EnergyResult { value: v.value, quad_err, trunc_err, order, nodes: n, max_residue: residue });
        }
        prev = v.value;
        if level == spec.max_refinements {
            return Err(Error::NoConvergence {
                stage: "quadrature",
                achieved: quad_err / v.value.abs(),
                target: spec.rtol,
                order: o,
                nodes: n,
            });
        }
    }
    Err(Error::NoConvergence { stage: "quadrature", achieved: f64::INFINITY, target: spec.rtol, order: o, nodes: n0 })
}

/// Settings for a Matsubara sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatsubaraSpec {
    /// Stop once a term falls below this fraction of the running sum.
    pub rtol: f64,
    pub max_terms: usize,
    /// Gauss–Legendre nodes per unit of decay for the axial integral of
    /// polar integrands.
    pub axial_nodes: usize,
}

impl Default for MatsubaraSpec {
    fn default() -> Self {
        MatsubaraSpec { rtol: 1e-10, max_terms: 200_000, axial_nodes: 64 }
    }
}

// L at frequency κ for either measure; polar integrands are integrated over
// k_z, (1/2π)∫dk_z L(√(κ²+k_z²))
fn frequency_value(integrand: &dyn Integrand, kappa: f64, order: usize, axial_nodes: usize) -> Result<LogDet> {
    match integrand.measure() {
        Measure::Frequency => integrand.log_det(kappa, order),
        Measure::Polar => {
            let (x, w) = semi_infinite_rule(axial_nodes, kappa.max(1.0 / integrand.length_scale()));
            let mut acc = LogDet::default();
            for (kz, wt) in x.iter().zip(&w) {
                let v = integrand.log_det((kappa * kappa + kz * kz).sqrt(), order)?;
                acc = acc.add(v.scaled(wt / PI));
            }
            Ok(acc)
        }
    }
}

/// L(κ → 0⁺), extrapolated linearly from κ = h and 2h with h = 1e-6/d; the
/// two samples must agree to 1e-4.
pub fn static_limit(integrand: &dyn Integrand, order: usize, axial_nodes: usize) -> Result<LogDet> {
    check_length(integrand)?;
    let h = 1e-6 / integrand.length_scale();
    let a = frequency_value(integrand, h, order, axial_nodes)?;
    let b = frequency_value(integrand, 2.0 * h, order, axial_nodes)?;
    let spread = (a.value - b.value).abs();
    if spread > 1e-4 * a.value.abs().max(b.value.abs()) + 1e-300 {
        return Err(Error::NoConvergence {
            stage: "zero-frequency limit",
            achieved: spread / a.value.abs(),
            target: 1e-4,
            order,
            nodes: 2,
        });
    }
    Ok(LogDet { value: 2.0 * a.value - b.value, residue: a.residue.max(b.residue) })
}

/// F = (1/β) [½ L(0⁺) + Σ_{n≥1} L(2πn/β)], with β = ħc/kT in length units.
pub fn matsubara_free_energy(integrand: &dyn Integrand, beta: f64, order: Option<usize>, spec: &MatsubaraSpec, exec: &dyn Executor) -> Result<EnergyResult> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain("inverse temperature must be positive"));
    }
    let order = order.or(integrand.initial_order());
    let o = order.unwrap_or(0);
    let zero = static_limit(integrand, o, spec.axial_nodes)?;
    let mut sum = 0.5 * zero.value;
    let mut residue = zero.residue;
    let step = 2.0 * PI / beta;
    let f = |k: f64| frequency_value(integrand, k, o, spec.axial_nodes);
    // terms are evaluated in batches so an executor can spread them out
    let batch = 64;
    let mut n = 1usize;
    let mut last = f64::INFINITY;
    loop {
        let points: Vec<f64> = (n..n + batch).map(|k| step * k as f64).collect();
        let values = gather(exec.map(&points, &f))?;
        for v in values {
            residue = residue.max(v.residue);
            sum += v.value;
            last = v.value.abs();
            n += 1;
            if last <= spec.rtol * sum.abs() || v.value == 0.0 {
                return Ok(EnergyResult { value: sum / beta, quad_err: last / beta, trunc_err: 0.0, order, nodes: n, max_residue: residue });
            }
        }
        if n > spec.max_terms {
            return Err(Error::NoConvergence {
                stage: "Matsubara sum",
                achieved: last / sum.abs(),
                target: spec.rtol,
                order: o,
                nodes: n,
            });
        }
    }
}

/// Responses of a body and the wave number seen by it, at one frequency in a
/// uniform medium.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InMedium {
    /// n_m κ, the wave number entering every wave function and translation.
    pub kappa: f64,
    pub eps: Response,
    pub mu: f64,
}

/// Pipelines that can be re-evaluated inside a uniform medium.
pub trait MediumDependent: Sized {
    fn medium(&self) -> &Medium;
    fn replace_medium(self, medium: Medium) -> Result<Self>;
}

/// The same configuration embedded in `medium`: translations at n_m κ and
/// body responses relative to ε_m, μ_m.
pub fn apply_medium<P: MediumDependent>(pipeline: P, medium: Medium) -> Result<P> {
    // n_m must be a positive number at least at one frequency
    medium.index(0.0).or_else(|_| medium.index(1.0))?;
    pipeline.replace_medium(medium)
}

/// Body responses relative to `medium` and the scaled wave number at κ.
pub fn in_medium(medium: &Medium, body: &crate::materials::MaterialModel, kappa: f64) -> Result<InMedium> {
    let n = medium.index(kappa)?;
    let (eps, mu) = medium.relative(body, kappa)?;
    Ok(InMedium { kappa: n * kappa, eps, mu })
}

#[cfg(test)]
mod tests;
