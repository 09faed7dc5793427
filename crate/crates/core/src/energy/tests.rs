use super::*;
use crate::materials::MaterialModel;
use crate::scattering::{ChannelBasis, Part, Storage};
use crate::translation::XBlock;
use crate::C64;
use alloc::vec;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// L(κ) = −A e^{−2κd}, optionally polar, optionally converging in the order
struct Exponential {
    d: f64,
    amp: f64,
    polar: bool,
    ordered: bool,
}

impl Integrand for Exponential {
    fn length_scale(&self) -> f64 {
        self.d
    }

    fn measure(&self) -> Measure {
        if self.polar {
            Measure::Polar
        } else {
            Measure::Frequency
        }
    }

    fn initial_order(&self) -> Option<usize> {
        self.ordered.then_some(1)
    }

    fn log_det(&self, s: f64, order: usize) -> Result<LogDet> {
        let tail = if self.ordered { 1.0 - 0.5f64.powi(order as i32) } else { 1.0 };
        Ok(LogDet::new(-self.amp * (-2.0 * s * self.d).exp() * tail))
    }
}

fn one_channel(value: f64, part: Part) -> AmplitudeBlock {
    AmplitudeBlock { basis: ChannelBasis::spherical(1), part, storage: Storage::Diagonal(vec![c(value, 0.0); 6]), kappa: 1.0 }
}

fn x_block(row: usize, col: usize, v: f64) -> XBlock {
    XBlock { row, col, matrix: CMatrix::diagonal(&[c(v, 0.0); 6]) }
}

#[test]
fn log_det_of_identity_is_zero() {
    let v = log_det_real(&CMatrix::identity(4)).unwrap();
    assert_eq!(v, LogDet::new(0.0));
}

#[test]
fn log_det_rejects_negative_and_complex_determinants() {
    let neg = CMatrix::diagonal(&[c(-1.0, 0.0), c(2.0, 0.0)]);
    assert!(matches!(log_det_real(&neg), Err(Error::Singular)));
    let rot = CMatrix::diagonal(&[c(1.0, 0.1), c(2.0, 0.0)]);
    assert!(matches!(log_det_real(&rot), Err(Error::NotReal { .. })));
    let zero = CMatrix::zeros(2, 2);
    assert!(log_det_real(&zero).is_err());
}

#[test]
fn log_det_keeps_small_residues() {
    let m = CMatrix::diagonal(&[c(2.0, 1e-13), c(3.0, 0.0)]);
    let v = log_det_real(&m).unwrap();
    assert!((v.value - 6f64.ln()).abs() < 1e-15);
    assert!(v.residue > 0.0 && v.residue < 1e-12);
}

#[test]
fn two_body_reduces_to_scalar_product() {
    // six identical channels: 6 ln(1 − f_a x f_b x)
    let fa = one_channel(0.3, Part::Ee);
    let fb = one_channel(-0.5, Part::Ee);
    let v = logdet_two_body(&fa, &x_block(0, 0, 0.7), &fb, &x_block(0, 0, 0.9)).unwrap();
    let exact = 6.0 * (1.0f64 - 0.3 * 0.7 * -0.5 * 0.9).ln();
    assert!((v.value - exact).abs() < 1e-14);
}

#[test]
fn zero_amplitude_gives_zero() {
    let fa = one_channel(0.0, Part::Ee);
    let fb = one_channel(0.5, Part::Ee);
    assert_eq!(logdet_two_body(&fa, &x_block(0, 0, 1.0), &fb, &x_block(0, 0, 1.0)).unwrap().value, 0.0);
}

#[test]
fn two_body_checks_parts_and_sizes() {
    let fa = one_channel(0.1, Part::Ii);
    let fb = one_channel(0.1, Part::Ee);
    assert!(matches!(logdet_two_body(&fa, &x_block(0, 0, 1.0), &fb, &x_block(0, 0, 1.0)), Err(Error::Dimension(_))));
    // a below b: F_a exterior, F_b interior
    assert!(logdet_two_body(&fb, &x_block(0, 1, 0.5), &fa, &x_block(1, 0, 0.5)).is_ok());
    let small = XBlock { row: 0, col: 0, matrix: CMatrix::identity(2) };
    let fb2 = one_channel(0.1, Part::Ee);
    assert!(matches!(logdet_two_body(&fb, &small, &fb2, &x_block(0, 0, 1.0)), Err(Error::Dimension(_))));
}

#[test]
fn truncation_policy_validates() {
    assert!(TruncationPolicy::new(0, 4, 1e-4, 10).is_err());
    assert!(TruncationPolicy::new(8, 0, 1e-4, 10).is_err());
    assert!(TruncationPolicy::new(8, 4, 1e-4, 4).is_err());
    assert!(TruncationPolicy::new(8, 4, 0.0, 10).is_err());
    assert_eq!(TruncationPolicy::for_gap(1.0, 0.1, 100).unwrap().initial, 60);
    assert_eq!(TruncationPolicy::for_gap(1.0, 10.0, 100).unwrap().initial, 8);
    assert!(TruncationPolicy::for_gap(1.0, 0.0, 100).is_err());
    assert_eq!(TruncationPolicy::default().with_cap(5).initial, 5);
}

#[test]
fn frequency_integral_of_exponential() {
    let f = Exponential { d: 0.7, amp: 2.0, polar: false, ordered: false };
    let r = integrate_energy(&f, &QuadratureSpec::default().with_rtol(1e-10), &TruncationPolicy::default(), &Sequential).unwrap();
    let exact = -2.0 / (2.0 * PI * 2.0 * 0.7);
    assert!((r.value - exact).abs() < 1e-10 * exact.abs());
    assert_eq!(r.order, None);
}

#[test]
fn polar_integral_of_exponential() {
    let f = Exponential { d: 1.3, amp: 1.0, polar: true, ordered: false };
    let r = integrate_energy(&f, &QuadratureSpec::default().with_rtol(1e-10), &TruncationPolicy::default(), &Sequential).unwrap();
    let exact = -1.0 / (16.0 * PI * 1.3 * 1.3);
    assert!((r.value - exact).abs() < 1e-10 * exact.abs());
}

#[test]
fn truncation_raises_order_until_stable() {
    let f = Exponential { d: 1.0, amp: 1.0, polar: false, ordered: true };
    let policy = TruncationPolicy::new(2, 2, 1e-3, 40).unwrap();
    let r = integrate_energy(&f, &QuadratureSpec::default(), &policy, &Sequential).unwrap();
    // 2^{−o} changes by 2^{−o}(1 − 1/4) between o and o + 2
    let o = r.order.unwrap();
    assert!(0.75 * 0.5f64.powi(o as i32 - 2) <= 1.1e-3 || o == 2);
    assert!(r.trunc_err > 0.0);
}

#[test]
fn truncation_cap_reports_no_convergence() {
    let f = Exponential { d: 1.0, amp: 1.0, polar: false, ordered: true };
    let policy = TruncationPolicy::new(2, 2, 1e-12, 8).unwrap();
    let err = integrate_energy(&f, &QuadratureSpec::default(), &policy, &Sequential).unwrap_err();
    assert!(matches!(err, Error::NoConvergence { stage: "truncation", order: 8, .. }));
}

#[test]
fn quadrature_cap_reports_no_convergence() {
    let f = Exponential { d: 1.0, amp: 1.0, polar: false, ordered: false };
    let spec = QuadratureSpec { initial_nodes: 2, max_refinements: 1, rtol: 1e-15, atol: 0.0 };
    let err = integrate_energy(&f, &spec, &TruncationPolicy::default(), &Sequential).unwrap_err();
    assert!(matches!(err, Error::NoConvergence { stage: "quadrature", .. }));
}

#[test]
fn matsubara_sum_is_geometric() {
    // L(κ) = −e^{−2κd}: F = −(1/β)[½ + q/(1 − q)], q = e^{−4πd/β}
    let f = Exponential { d: 1.0, amp: 1.0, polar: false, ordered: false };
    for beta in [0.5, 3.0, 40.0] {
        let r = matsubara_free_energy(&f, beta, None, &MatsubaraSpec::default(), &Sequential).unwrap();
        let q = (-4.0 * PI / beta).exp();
        let exact = -(0.5 + q / (1.0 - q)) / beta;
        assert!((r.value - exact).abs() < 1e-8 * exact.abs(), "beta={beta}: {} vs {exact}", r.value);
    }
}

#[test]
fn matsubara_approaches_zero_temperature() {
    let f = Exponential { d: 1.0, amp: 1.0, polar: true, ordered: false };
    let e0 = integrate_energy(&f, &QuadratureSpec::default().with_rtol(1e-10), &TruncationPolicy::default(), &Sequential).unwrap();
    let r = matsubara_free_energy(&f, 2000.0, None, &MatsubaraSpec::default(), &Sequential).unwrap();
    assert!((r.value - e0.value).abs() < 1e-3 * e0.value.abs(), "{} vs {}", r.value, e0.value);
}

#[test]
fn matsubara_high_temperature_keeps_static_term() {
    let f = Exponential { d: 1.0, amp: 1.0, polar: false, ordered: false };
    let r = matsubara_free_energy(&f, 1e-3, None, &MatsubaraSpec::default(), &Sequential).unwrap();
    assert!((r.value * 1e-3 + 0.5).abs() < 1e-10);
}

#[test]
fn matsubara_rejects_bad_temperature() {
    let f = Exponential { d: 1.0, amp: 1.0, polar: false, ordered: false };
    for beta in [0.0, -1.0, f64::INFINITY] {
        assert!(matsubara_free_energy(&f, beta, None, &MatsubaraSpec::default(), &Sequential).is_err());
    }
}

#[test]
fn medium_scales_wave_number() {
    let m = Medium::new(MaterialModel::constant(4.0, 1.0).unwrap()).unwrap();
    let v = in_medium(&m, &MaterialModel::constant(8.0, 2.0).unwrap(), 0.5).unwrap();
    assert_eq!(v.kappa, 1.0);
    assert_eq!(v.eps, Response::Finite(2.0));
    assert_eq!(v.mu, 2.0);
    let pec = in_medium(&m, &MaterialModel::PerfectConductor, 0.5).unwrap();
    assert_eq!(pec.eps, Response::Infinite);
}

#[test]
fn log_det_sums_track_largest_residue() {
    let a = LogDet { value: 1.0, residue: 1e-14 };
    let b = LogDet { value: -3.0, residue: 1e-13 };
    assert_eq!(a.add(b), LogDet { value: -2.0, residue: 1e-13 });
    assert_eq!(b.scaled(2.0).residue, 1e-13);
}

#[test]
fn closed_form_results_carry_no_error() {
    let r = EnergyResult::closed_form(-1.5);
    assert_eq!((r.value, r.quad_err, r.trunc_err, r.order, r.nodes), (-1.5, 0.0, 0.0, None, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn node_doubling_converges_to_exact(d in 0.05f64..20.0, amp in 0.01f64..5.0) {
        let f = Exponential { d, amp, polar: false, ordered: false };
        let r = integrate_energy(&f, &QuadratureSpec::default().with_rtol(1e-9), &TruncationPolicy::default(), &Sequential).unwrap();
        let exact = -amp / (4.0 * PI * d);
        prop_assert!((r.value - exact).abs() < 1e-8 * exact.abs());
        prop_assert!(r.quad_err <= 1e-9 * r.value.abs());
    }

    #[test]
    fn energy_scales_inversely_with_length(d in 0.1f64..10.0, s in 0.2f64..5.0) {
        let spec = QuadratureSpec::default().with_rtol(1e-10);
        let a = integrate_energy(&Exponential { d, amp: 1.0, polar: false, ordered: false }, &spec, &TruncationPolicy::default(), &Sequential).unwrap();
        let b = integrate_energy(&Exponential { d: d * s, amp: 1.0, polar: false, ordered: false }, &spec, &TruncationPolicy::default(), &Sequential).unwrap();
        prop_assert!((a.value - b.value * s).abs() < 1e-9 * a.value.abs());
    }
}
