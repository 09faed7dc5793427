//! Gauss–Legendre rules and a node-doubling integrator for semi-infinite
//! ranges.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| v * h).collect())
}

/// Nodes and weights for ∫₀^∞ f(κ) dκ with κ = scale·u/(1−u), u ∈ (0, 1).
pub fn semi_infinite_rule(n: usize, scale: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (t, wt) in x.iter().zip(&w) {
        let u = 0.5 * (t + 1.0);
        let one_minus = 1.0 - u;
        nodes.push(scale * u / one_minus);
        weights.push(0.5 * wt * scale / (one_minus * one_minus));
    }
    (nodes, weights)
}

/// Nodes and weights of the n-point Gauss–Laguerre rule for ∫₀^∞ e^{−x} f(x) dx.
/// Weights underflow beyond n ≈ 180.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        for _ in 0..200 {
            let (p1, p2) = laguerre_pair(n, z);
            let dz = p1 / (nf * (p1 - p2) / z);
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs() {
                break;
            }
        }
        let (p1, p2) = laguerre_pair(n, z);
        let pp = nf * (p1 - p2) / z;
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
    }
    (x, w)
}

// (L_n(z), L_{n−1}(z))
fn laguerre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = (((2 * j - 1) as f64 - z) * p2 - (j - 1) as f64 * p3) / j as f64;
    }
    (p1, p2)
}

/// Settings for node-doubling refinement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Nodes at the first level.
    pub initial_nodes: usize,
    /// Number of doublings allowed after the first level.
    pub max_refinements: usize,
    /// Target relative accuracy (difference between successive levels).
    pub rtol: f64,
    /// Absolute floor added to the tolerance.
    pub atol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { initial_nodes: 24, max_refinements: 6, rtol: 1e-6, atol: 0.0 }
    }
}

impl QuadratureSpec {
    pub fn with_rtol(mut self, rtol: f64) -> Self {
        self.rtol = rtol;
        self
    }

    /// Node count at refinement level `k` (0-based); strictly increasing.
    pub fn nodes_at(&self, level: usize) -> usize {
        self.initial_nodes << level
    }
}

/// Outcome of a refined quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// |I_n − I_{n/2}| at the final level.
    pub error: f64,
    pub nodes: usize,
    pub converged: bool,
}

/// Integrates over (0, ∞) by doubling the Gauss–Legendre node count until two
/// successive levels agree. `eval` receives all nodes of one level at once,
/// so callers can evaluate them in parallel; values are summed in node order.
pub fn integrate_semi_infinite<F>(scale: f64, spec: &QuadratureSpec, mut eval: F) -> Result<Quadrature>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain("quadrature scale must be positive"));
    }
    let mut prev: Option<f64> = None;
    let mut last = Quadrature { value: 0.0, error: f64::INFINITY, nodes: 0, converged: false };
    for level in 0..=spec.max_refinements {
        let n = spec.nodes_at(level);
        let (x, w) = semi_infinite_rule(n, scale);
        let f = eval(&x)?;
        if f.len() != n {
            return Err(Error::Dimension("integrand returned the wrong number of values"));
        }
        let value: f64 = f.iter().zip(&w).map(|(a, b)| a * b).sum();
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        if let Some(p) = prev {
            let error = (value - p).abs();
            last = Quadrature { value, error, nodes: n, converged: false };
            if error <= spec.rtol * value.abs() + spec.atol {
                last.converged = true;
                return Ok(last);
            }
        } else {
            last = Quadrature { value, error: f64::INFINITY, nodes: n, converged: false };
        }
        prev = Some(value);
    }
    Ok(last)
}

/// Fixed-rule integration of a scalar function over [a, b] with an n-point rule.
pub fn integrate_fixed<F: FnMut(f64) -> f64>(n: usize, a: f64, b: f64, mut f: F) -> f64 {
    let (x, w) = gauss_legendre_on(n, a, b);
    x.iter().zip(&w).map(|(t, wt)| wt * f(*t)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        for n in [1usize, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let s: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.powi(deg as i32)).sum();
                let e = if deg % 2 == 0 { 2.0 / (deg + 1) as f64 } else { 0.0 };
                assert!((s - e).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn large_rule_weights_sum_to_two() {
        let (_, w) = gauss_legendre(1024);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_exponential() {
        let spec = QuadratureSpec::default().with_rtol(1e-12);
        let q = integrate_semi_infinite(1.0, &spec, |x| Ok(x.iter().map(|k| (-2.0 * k).exp() * k * k).collect()))
            .unwrap();
        assert!(q.converged);
        assert!((q.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn laguerre_moments() {
        for n in [1usize, 4, 20, 60, 120] {
            let (x, w) = gauss_laguerre(n);
            let mut fact = 1.0;
            for k in 0..(2 * n).min(80) {
                if k > 0 {
                    fact *= k as f64;
                }
                let s: f64 = x.iter().zip(&w).map(|(t, wt)| wt * t.powi(k as i32)).sum();
                assert!((s - fact).abs() < 1e-11 * fact, "n={n} k={k} {s} {fact}");
            }
        }
    }

    #[test]
    fn node_counts_increase() {
        let s = QuadratureSpec::default();
        for l in 0..5 {
            assert!(s.nodes_at(l + 1) > s.nodes_at(l));
        }
    }
}
