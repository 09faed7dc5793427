use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// d^m P_l / dx^m for l = 0..=lmax (zero for l < m).
///
/// These are the polynomial parts of the associated functions; the
/// three-term recurrence is the same as for P_l^m.
pub fn legendre_derivatives(lmax: usize, m: usize, x: f64) -> Vec<f64> {
    let mut q = vec![0.0; lmax + 1];
    if m > lmax {
        return q;
    }
    let mut start = 1.0;
    for k in 1..=m {
        start *= (2 * k - 1) as f64;
    }
    q[m] = start;
    if m < lmax {
        q[m + 1] = (2 * m + 1) as f64 * x * start;
    }
    for l in (m + 2)..=lmax {
        q[l] = ((2 * l - 1) as f64 * x * q[l - 1] - (l + m - 1) as f64 * q[l - 2]) / (l - m) as f64;
    }
    q
}

/// d^m P_l / dx^m divided by x^{l−m}, for l = 0..=lmax; bounded for x ≥ 1,
/// which lets callers carry the x^l growth as a logarithm.
pub fn legendre_derivatives_scaled(lmax: usize, m: usize, x: f64) -> Vec<f64> {
    let mut q = vec![0.0; lmax + 1];
    if m > lmax {
        return q;
    }
    let inv_x2 = 1.0 / (x * x);
    let mut start = 1.0;
    for k in 1..=m {
        start *= (2 * k - 1) as f64;
    }
    q[m] = start;
    if m < lmax {
        q[m + 1] = (2 * m + 1) as f64 * start;
    }
    for l in (m + 2)..=lmax {
        q[l] = ((2 * l - 1) as f64 * q[l - 1] - (l + m - 1) as f64 * q[l - 2] * inv_x2) / (l - m) as f64;
    }
    q
}

/// Associated Legendre function P_l^m(x) = (x²−1)^{m/2} d^m P_l/dx^m for
/// x ≥ 1 (no Condon–Shortley phase) and its x-derivative.
pub fn assoc_legendre_ge1(l: usize, m: usize, x: f64) -> Result<(f64, f64)> {
    if m > l {
        return Err(Error::Selection("associated Legendre function needs m <= l"));
    }
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain("associated Legendre argument must be >= 1"));
    }
    let q = legendre_derivatives(l, m, x);
    let q1 = if m < l { legendre_derivatives(l, m + 1, x)[l] } else { 0.0 };
    let s2 = x * x - 1.0;
    let s = s2.sqrt();
    let value = s.powi(m as i32) * q[l];
    let derivative = if m == 0 {
        q1
    } else if s2 == 0.0 {
        match m {
            1 => return Err(Error::Domain("d/dx P_l^1 diverges at x = 1")),
            2 => 2.0 * q[l],
            _ => 0.0,
        }
    } else {
        m as f64 * x * s.powi(m as i32 - 2) * q[l] + s.powi(m as i32) * q1
    };
    Ok((value, derivative))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Rodrigues: P_l(x) = 1/(2^l l!) d^l/dx^l (x²−1)^l, expanded by the binomial theorem
    fn rodrigues(l: usize, x: f64) -> f64 {
        let mut sum = 0.0;
        let mut fact_l = 1.0;
        for i in 1..=l {
            fact_l *= i as f64;
        }
        for k in 0..=l {
            // (x²−1)^l = Σ C(l,k) (−1)^{l−k} x^{2k}; l-th derivative of x^{2k}
            if 2 * k < l {
                continue;
            }
            let mut binom = 1.0;
            for i in 0..k {
                binom *= (l - i) as f64 / (i + 1) as f64;
            }
            let mut falling = 1.0;
            for i in 0..l {
                falling *= (2 * k - i) as f64;
            }
            let sign = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * falling * x.powi((2 * k - l) as i32);
        }
        sum / (2f64.powi(l as i32) * fact_l)
    }

    #[test]
    fn examples() {
        let (v, d) = assoc_legendre_ge1(1, 0, 3.5).unwrap();
        assert_eq!((v, d), (3.5, 1.0));
        let (v, _) = assoc_legendre_ge1(1, 1, 2.0).unwrap();
        assert!((v - 3f64.sqrt()).abs() < 1e-15);
        let (v, _) = assoc_legendre_ge1(2, 0, 1.0).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(matches!(assoc_legendre_ge1(2, 3, 1.5), Err(Error::Selection(_))));
    }

    #[test]
    fn m_zero_matches_rodrigues() {
        for l in 0..=8 {
            for &x in &[1.0, 1.3, 2.0, 5.5] {
                let (v, _) = assoc_legendre_ge1(l, 0, x).unwrap();
                let r = rodrigues(l, x);
                assert!((v - r).abs() <= 1e-12 * r.abs().max(1.0), "l={l} x={x}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for l in 1..=10 {
            for m in 0..=l {
                let x = 1.7;
                let h = 1e-5;
                let (_, d) = assoc_legendre_ge1(l, m, x).unwrap();
                let fp = assoc_legendre_ge1(l, m, x + h).unwrap().0;
                let fm = assoc_legendre_ge1(l, m, x - h).unwrap().0;
                let fd = (fp - fm) / (2.0 * h);
                assert!((d - fd).abs() < 1e-7 * d.abs().max(1.0), "l={l} m={m} {d} {fd}");
            }
        }
    }

    #[test]
    fn scaled_table_matches_plain() {
        let x = 3.2;
        for m in 0..5 {
            let a = legendre_derivatives(20, m, x);
            let b = legendre_derivatives_scaled(20, m, x);
            for l in m..=20 {
                let r = b[l] * x.powi((l - m) as i32);
                assert!((a[l] - r).abs() < 1e-13 * a[l].abs());
            }
        }
    }
}
