//! Wigner 3j symbols for integer angular momenta.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint, Sign};
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};

/// Largest j evaluated with exact rational arithmetic; above it the Racah sum
/// is evaluated in floating point with logarithmic factorials.
const EXACT_LIMIT: i32 = 20;

fn selection_ok(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> bool {
    j1 >= 0
        && j2 >= 0
        && j3 >= 0
        && m1.abs() <= j1
        && m2.abs() <= j2
        && m3.abs() <= j3
        && m1 + m2 + m3 == 0
        && j3 >= (j1 - j2).abs()
        && j3 <= j1 + j2
}

fn parity_zero(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> bool {
    m1 == 0 && m2 == 0 && m3 == 0 && (j1 + j2 + j3) % 2 == 1
}

/// (j1 j2 j3; m1 m2 m3). Anything violating the selection rules returns 0.
pub fn wigner3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if !selection_ok(j1, j2, j3, m1, m2, m3) || parity_zero(j1, j2, j3, m1, m2, m3) {
        return 0.0;
    }
    if j1.max(j2).max(j3) <= EXACT_LIMIT {
        exact(j1, j2, j3, m1, m2, m3)
    } else {
        log_factorial_racah(j1, j2, j3, m1, m2, m3)
    }
}

/// Same as [`wigner3j`] but always through exact arithmetic, whatever the size.
pub fn wigner3j_exact(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if !selection_ok(j1, j2, j3, m1, m2, m3) || parity_zero(j1, j2, j3, m1, m2, m3) {
        return 0.0;
    }
    exact(j1, j2, j3, m1, m2, m3)
}

struct Racah {
    sign: i32,
    kmin: i32,
    kmax: i32,
    // factorial arguments in the square-rooted prefactor (numerator / denominator)
    root_num: [i32; 9],
    root_den: i32,
}

fn racah(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> Racah {
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let sign = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1 } else { -1 };
    Racah {
        sign,
        kmin,
        kmax,
        root_num: [
            j1 + j2 - j3,
            j1 - j2 + j3,
            -j1 + j2 + j3,
            j1 + m1,
            j1 - m1,
            j2 + m2,
            j2 - m2,
            j3 + m3,
            j3 - m3,
        ],
        root_den: j1 + j2 + j3 + 1,
    }
}

fn term_args(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, k: i32) -> [i32; 6] {
    [k, j3 - j2 + k + m1, j3 - j1 + k - m2, j1 + j2 - j3 - k, j1 - k - m1, j2 - k + m2]
}

fn primes_upto(n: usize) -> Vec<u32> {
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn add_factorial(exps: &mut [i64], primes: &[u32], n: i32, weight: i64) {
    let n = n as u64;
    for (e, &p) in exps.iter_mut().zip(primes) {
        let p = p as u64;
        if p > n {
            break;
        }
        let mut q = n / p;
        while q > 0 {
            *e += weight * q as i64;
            q /= p;
        }
    }
}

fn pow_product(primes: &[u32], exps: &[i64], positive: bool) -> BigUint {
    let mut out = BigUint::one();
    for (&p, &e) in primes.iter().zip(exps) {
        let e = if positive { e } else { -e };
        if e > 0 {
            out *= BigUint::from(p).pow(e as u32);
        }
    }
    out
}

fn exact(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    let r = racah(j1, j2, j3, m1, m2, m3);
    let primes = primes_upto((j1 + j2 + j3 + 1) as usize);
    let np = primes.len();

    let mut root = vec![0i64; np];
    for &a in &r.root_num {
        add_factorial(&mut root, &primes, a, 1);
    }
    add_factorial(&mut root, &primes, r.root_den, -1);

    let terms: Vec<Vec<i64>> = (r.kmin..=r.kmax)
        .map(|k| {
            let mut e = vec![0i64; np];
            for a in term_args(j1, j2, j3, m1, m2, k) {
                add_factorial(&mut e, &primes, a, -1);
            }
            e
        })
        .collect();
    let mut common = terms[0].clone();
    for t in &terms[1..] {
        for (c, &e) in common.iter_mut().zip(t) {
            *c = (*c).min(e);
        }
    }
    let mut sum = BigInt::zero();
    for (i, t) in terms.iter().enumerate() {
        let rel: Vec<i64> = t.iter().zip(&common).map(|(a, b)| a - b).collect();
        let v = BigInt::from_biguint(Sign::Plus, pow_product(&primes, &rel, true));
        if (r.kmin + i as i32) % 2 == 0 {
            sum += v;
        } else {
            sum -= v;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }
    let negative = sum.sign() == Sign::Minus;
    let s = sum.magnitude().clone();
    // result² = root · common² · sum²
    let total: Vec<i64> = root.iter().zip(&common).map(|(a, c)| a + 2 * c).collect();
    let num = &s * &s * pow_product(&primes, &total, true);
    let den = pow_product(&primes, &total, false);
    let mag = sqrt_ratio(&num, &den);
    let sign = r.sign * if negative { -1 } else { 1 };
    sign as f64 * mag
}

/// √(num/den) correctly rounded to a few ulps, for arbitrarily large operands.
fn sqrt_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    // keep the shift even so the square root splits cleanly
    let shift = if shift % 2 == 0 { shift } else { shift + 1 };
    let q = if shift >= 0 { (num << shift as usize) / den } else { num / (den << (-shift) as usize) };
    let qf = q.to_f64().unwrap_or(f64::INFINITY);
    qf.sqrt() * 2f64.powi(-(shift / 2) as i32)
}

fn log_factorial_racah(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    let r = racah(j1, j2, j3, m1, m2, m3);
    let n = (j1 + j2 + j3 + 1) as usize;
    let mut lf = vec![0.0f64; n + 1];
    for i in 1..=n {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    let half_root: f64 = 0.5 * (r.root_num.iter().map(|&a| lf[a as usize]).sum::<f64>() - lf[r.root_den as usize]);
    let logs: Vec<f64> = (r.kmin..=r.kmax)
        .map(|k| -term_args(j1, j2, j3, m1, m2, k).iter().map(|&a| lf[a as usize]).sum::<f64>())
        .collect();
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (i, l) in logs.iter().enumerate() {
        let t = (l - peak).exp();
        if (r.kmin + i as i32) % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    r.sign as f64 * sum * (half_root + peak).exp()
}

/// (j1 j2 j3; 0 0 0) for j3 = |j1−j2|..=j1+j2, from the closed form
/// (−1)^g √Δ g!/((g−j1)!(g−j2)!(g−j3)!) with 2g = j1+j2+j3.
pub fn wigner3j_zero_series(j1: i32, j2: i32) -> (i32, Vec<f64>) {
    let jmin = (j1 - j2).abs();
    let jmax = j1 + j2;
    let n = (2 * jmax + 2) as usize;
    let mut lf = vec![0.0f64; n + 1];
    for i in 1..=n {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    let vals = (jmin..=jmax)
        .map(|j3| {
            let big_j = j1 + j2 + j3;
            if big_j % 2 == 1 {
                return 0.0;
            }
            let g = big_j / 2;
            let ln_delta = lf[(j1 + j2 - j3) as usize] + lf[(j1 - j2 + j3) as usize]
                + lf[(-j1 + j2 + j3) as usize]
                - lf[(big_j + 1) as usize];
            let ln = 0.5 * ln_delta + lf[g as usize]
                - lf[(g - j1) as usize]
                - lf[(g - j2) as usize]
                - lf[(g - j3) as usize];
            let s = if g % 2 == 0 { 1.0 } else { -1.0 };
            s * ln.exp()
        })
        .collect();
    (jmin, vals)
}

/// (j1 j2 j; m1 m2 −m1−m2) for every allowed j, starting at the returned
/// minimum j. Three-term recurrence in j, run forward through the lower
/// classically forbidden region and backward through the upper one, matched
/// in the oscillatory region and normalized by Σ(2j+1)f² = 1.
pub fn wigner3j_series(j1: i32, j2: i32, m1: i32, m2: i32) -> (i32, Vec<f64>) {
    let m3 = -m1 - m2;
    if j1 < 0 || j2 < 0 || m1.abs() > j1 || m2.abs() > j2 {
        return (0, Vec::new());
    }
    let jmin = (j1 - j2).abs().max(m3.abs());
    let jmax = j1 + j2;
    if jmin > jmax {
        return (jmin, Vec::new());
    }
    let n = (jmax - jmin + 1) as usize;
    let end_sign = if (j1 - j2 - m3).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    if n == 1 {
        return (jmin, vec![end_sign / ((2 * jmin + 1) as f64).sqrt()]);
    }
    if m1 == 0 && m2 == 0 {
        return wigner3j_zero_series(j1, j2);
    }

    let (a1, a2, mm) = (j1 as f64, j2 as f64, m3 as f64);
    let a = |j: f64| -> f64 {
        let v = (j * j - (a1 - a2) * (a1 - a2)) * ((a1 + a2 + 1.0) * (a1 + a2 + 1.0) - j * j) * (j * j - mm * mm);
        v.max(0.0).sqrt()
    };
    let b = |j: f64| -> f64 {
        -(2.0 * j + 1.0) * (a1 * (a1 + 1.0) * mm - a2 * (a2 + 1.0) * mm - j * (j + 1.0) * (m2 - m1) as f64)
    };
    let jf = |i: usize| (jmin as usize + i) as f64;

    let mut f = vec![0.0f64; n];
    // forward part
    let mut stop = 0usize;
    if jmin > 0 {
        f[0] = 1.0;
        let j = jf(0);
        f[1] = -b(j) * f[0] / (j * a(j + 1.0));
        stop = 1;
        while stop + 1 < n {
            let j = jf(stop);
            let next = -(b(j) * f[stop] + (j + 1.0) * a(j) * f[stop - 1]) / (j * a(j + 1.0));
            if next.abs() < f[stop].abs() {
                break;
            }
            f[stop + 1] = next;
            stop += 1;
            let scale = f[stop].abs();
            if scale > 1e200 {
                for v in &mut f[..=stop] {
                    *v /= scale;
                }
            }
        }
    }
    // backward part from the top down to `stop`
    let mut g = vec![0.0f64; n];
    g[n - 1] = 1.0;
    if n >= 2 {
        let j = jf(n - 1);
        g[n - 2] = -b(j) * g[n - 1] / ((j + 1.0) * a(j));
    }
    let lo = stop.saturating_sub(1);
    let mut i = n - 2;
    while i > lo {
        let j = jf(i);
        g[i - 1] = -(j * a(j + 1.0) * g[i + 1] + b(j) * g[i]) / ((j + 1.0) * a(j));
        i -= 1;
        let scale = g[i].abs();
        if scale > 1e200 {
            for v in &mut g[i..] {
                *v /= scale;
            }
        }
    }
    if jmin == 0 {
        // the forward start is degenerate at j = 0; the backward pass covers all
        f = g;
    } else {
        // least-squares match over the overlap points stop-1..=stop
        let (mut num, mut den) = (0.0, 0.0);
        for k in lo..=stop {
            num += f[k] * g[k];
            den += g[k] * g[k];
        }
        let c = num / den;
        for k in (stop + 1)..n {
            f[k] = c * g[k];
        }
    }
    let norm: f64 = f.iter().enumerate().map(|(i, v)| (2.0 * jf(i) + 1.0) * v * v).sum();
    let mut s = 1.0 / norm.sqrt();
    if f[n - 1] * end_sign < 0.0 {
        s = -s;
    }
    for v in &mut f {
        *v *= s;
    }
    (jmin, f)
}
