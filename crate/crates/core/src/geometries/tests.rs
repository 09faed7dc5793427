use super::*;
use crate::energy::{logdet_two_body, Sequential};
use crate::materials::MaterialModel;
use crate::scattering::{atom_block, mie_amplitude, sphere_block};
use crate::translation::{assemble_x, Displacement};
use crate::conversion::ConversionBlock;
use crate::linalg::CMatrix;
use crate::quadrature::gauss_laguerre;
use crate::scattering::ChannelBasis;
use core::f64::consts::PI;
use proptest::prelude::*;

fn pec() -> MaterialModel {
    MaterialModel::PerfectConductor
}

fn diel(eps: f64) -> MaterialModel {
    MaterialModel::constant(eps, 1.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn radial_rule_integrates_exponential() {
    // ∫ k⊥ dk⊥ e^{−2d√(k²+k⊥²)} = e^{−2dk}(2dk + 1)/(4d²)
    for (k, d) in [(0.0, 1.0), (1e-7, 1.0), (0.3, 2.0), (50.0, 1.0)] {
        let (x, w) = radial_rule(k, d);
        let v: f64 = x.iter().zip(&w).map(|(kp, w)| w * (-2.0 * d * (k * k + kp * kp).sqrt()).exp()).sum();
        let exact = (-2.0 * d * k).exp() * (2.0 * d * k + 1.0) / (4.0 * d * d);
        assert!(rel(v, exact) < 1e-12, "k={k}: {v} vs {exact}");
    }
}

#[test]
fn perfect_plates_give_casimir_result() {
    let d = 1.3;
    let e = lifshitz_energy(d, pec(), pec(), &QuadratureSpec::default().with_rtol(1e-9), &Sequential).unwrap();
    let exact = -PI.powi(2) / (720.0 * d.powi(3));
    assert!(rel(e.value, exact) < 1e-8, "{} vs {exact}", e.value);
}

#[test]
fn plate_pipeline_matches_lifshitz_integrand() {
    let plates = Plates::new(0.8, diel(4.0), MaterialModel::constant(2.0, 1.5).unwrap()).unwrap();
    let pipe = PlatePipeline::new(plates.clone());
    for kappa in [1e-3, 0.2, 1.0, 7.0] {
        let a = plates.log_det(kappa, 0).unwrap().value;
        let b = pipe.log_det(kappa, 0).unwrap().value;
        // ln det of a near-identity matrix loses what ln_1p keeps
        assert!(rel(b, a) < 1e-9, "kappa={kappa}: {b} vs {a}");
    }
}

#[test]
fn vacuum_plate_gives_zero() {
    let e = lifshitz_energy(1.0, MaterialModel::Vacuum, pec(), &QuadratureSpec::default(), &Sequential).unwrap();
    assert_eq!(e.value, 0.0);
}

#[test]
fn matched_medium_removes_dielectric_contrast() {
    let g = Geometry::ParallelPlates(Plates::new(1.0, diel(3.0), diel(3.0)).unwrap());
    let g = g.with_medium(Medium::new(diel(3.0)).unwrap()).unwrap();
    assert_eq!(g.energy(&Settings::default(), &Sequential).unwrap().value, 0.0);
}

#[test]
fn perfect_plates_in_medium_scale_with_index() {
    let settings = Settings { quadrature: QuadratureSpec::default().with_rtol(1e-9), ..Settings::default() };
    let g = Geometry::ParallelPlates(Plates::new(1.0, pec(), pec()).unwrap());
    let vac = g.energy(&settings, &Sequential).unwrap().value;
    let med = g.with_medium(Medium::new(diel(4.0)).unwrap()).unwrap().energy(&settings, &Sequential).unwrap().value;
    assert!(rel(med, vac / 2.0) < 1e-9);
}

#[test]
fn atom_closed_form_matches_dipole_pipeline() {
    let x = [0.4, -1.0, 1.7];
    let dist = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let atoms = TwoAtoms::new(dist, 0.9, 0.5, AtomMode::FullLog).unwrap();
    let basis = ChannelBasis::spherical(1);
    for kappa in [1e-3, 0.3, 1.5] {
        let f = atom_block(atoms.alpha0, atoms.d10, kappa, 1).unwrap();
        let (xab, xba) = assemble_x(Arrangement::Outside, &basis, kappa, &Displacement::new(x).unwrap()).unwrap();
        let pipe = logdet_two_body(&f, &xab, &f, &xba).unwrap().value;
        let closed = atoms.log_det(kappa, 0).unwrap().value;
        assert!(rel(pipe, closed) < 1e-10, "kappa={kappa}: {pipe} vs {closed}");
    }
}

#[test]
fn atom_modes_agree_for_weak_polarizability() {
    let full = TwoAtoms::new(3.0, 1e-3, 0.2, AtomMode::FullLog).unwrap();
    let quad = TwoAtoms::new(3.0, 1e-3, 0.2, AtomMode::Quadratic).unwrap();
    for kappa in [0.0, 0.1, 1.0] {
        let (a, b) = (full.log_det(kappa, 0).unwrap().value, quad.log_det(kappa, 0).unwrap().value);
        assert!(rel(a, b) < 1e-6);
    }
}

#[test]
fn atoms_reject_media() {
    let g = Geometry::TwoAtoms(TwoAtoms::new(1.0, 1.0, 0.1, AtomMode::FullLog).unwrap());
    assert!(matches!(g.with_medium(Medium::new(diel(2.0)).unwrap()), Err(Error::Medium(_))));
}

#[test]
fn outer_cylinders_match_general_pipeline() {
    let c = TwoCylinders::outer(1.0, 0.6, 2.1).unwrap();
    let pipe = CylinderPipeline { cylinders: c.clone() };
    for p in [0.05, 0.7, 3.0] {
        let a = c.log_det(p, 8).unwrap().value;
        let b = pipe.log_det(p, 8).unwrap().value;
        assert!(rel(b, a) < 1e-10, "p={p}: {b} vs {a}");
    }
}

#[test]
fn nested_cylinders_match_general_pipeline() {
    for d in [0.0, 0.25] {
        let c = TwoCylinders::nested(1.0, 2.0, d).unwrap();
        let pipe = CylinderPipeline { cylinders: c.clone() };
        for p in [0.1, 0.9, 2.5] {
            let a = c.log_det(p, 10).unwrap().value;
            let b = pipe.log_det(p, 10).unwrap().value;
            assert!(rel(b, a) < 1e-10, "d={d} p={p}: {b} vs {a}");
        }
    }
}

#[test]
fn concentric_energy_matches_general_pipeline() {
    let c = TwoCylinders::nested(1.0, 1.5, 0.0).unwrap();
    let spec = QuadratureSpec::default().with_rtol(1e-8);
    // unscaled amplitudes overflow at small p and high order, so both paths
    // stop at n_max = 7
    let policy = TruncationPolicy::new(6, 1, 1.0, 7).unwrap();
    let a = integrate_energy(&c, &spec, &policy, &Sequential).unwrap();
    let b = integrate_energy(&CylinderPipeline { cylinders: c.clone() }, &spec, &policy, &Sequential).unwrap();
    assert_eq!((a.order, b.order), (Some(7), Some(7)));
    assert!(a.value < 0.0);
    assert!(rel(b.value, a.value) < 1e-6);
}

#[test]
fn outer_cylinders_are_symmetric() {
    let s = Settings::default();
    let a = two_cylinders_energy(&TwoCylinders::outer(1.0, 0.5, 2.0).unwrap(), &s, &Sequential).unwrap();
    let b = two_cylinders_energy(&TwoCylinders::outer(0.5, 1.0, 2.0).unwrap(), &s, &Sequential).unwrap();
    assert!(a.value < 0.0);
    assert!(rel(a.value, b.value) < 1e-12);
}

#[test]
fn cylinder_energy_decays_with_distance() {
    let s = Settings::default();
    let mut last = f64::NEG_INFINITY;
    for d in [2.5, 4.0, 8.0] {
        let e = two_cylinders_energy(&TwoCylinders::outer(1.0, 1.0, d).unwrap(), &s, &Sequential).unwrap().value;
        assert!(e < 0.0 && e > last);
        last = e;
    }
}

#[test]
fn cylinder_constructors_reject_wrong_arrangements() {
    assert!(TwoCylinders::outer(1.0, 1.0, 1.5).is_err());
    assert!(TwoCylinders::nested(1.0, 2.0, 1.5).is_err());
    assert!(TwoCylinders::nested(2.0, 1.0, 0.1).is_err());
}

// N for one m built the long way: full spherical and plane-wave bases, the
// Mie block unscaled, and a discrete azimuthal grid
fn unblocked_log_det(sp: &SpherePlate, kappa: f64, l_max: usize) -> f64 {
    let n_r = SpherePlate::radial_nodes(l_max);
    let n_phi = 4 * l_max + 3;
    let (s, w) = gauss_laguerre(n_r);
    let kd = kappa * sp.d;
    let mut k_perp = Vec::new();
    let mut weight = Vec::new();
    for (t, wt) in s.iter().zip(&w) {
        let x = 1.0 + t / (2.0 * kd);
        let k = kappa * (x * x - 1.0).sqrt();
        for j in 0..n_phi {
            let phi = 0.3 + 2.0 * PI * j as f64 / n_phi as f64;
            k_perp.push([k * phi.cos(), k * phi.sin()]);
            // d²k/(2π)² with k dk = κ² x dx and the e^{−2κdx} kernel in the rule
            weight.push(kappa * kappa * x * wt * (-2.0 * kd).exp() / (2.0 * kd) / (2.0 * PI * n_phi as f64));
        }
    }
    let plane = ChannelBasis::plane(&k_perp);
    let conv = ConversionBlock::spherical(kappa, &plane, l_max).unwrap();
    let eps = sp.sphere.permittivity(kappa).unwrap();
    let f = sphere_block(l_max, kappa, |l, p| mie_amplitude(eps, 1.0, sp.r, kappa, l, p)).unwrap();
    let dim = conv.compact.len();
    let mut ba = CMatrix::zeros(dim, dim);
    for (j, c) in plane.channels().iter().enumerate() {
        let kp = k_perp[j / 2];
        let x = kappa / (kp[0].hypot(kp[1]).powi(2) + kappa * kappa).sqrt();
        let r = sp.plate.reflection(kappa, x, c.polarization()).unwrap();
        for a in 0..dim {
            for b in 0..dim {
                ba[(a, b)] += conv.matrix[(a, j)] * conv.matrix[(b, j)].conj() * (r * weight[j / 2] * conv.c_ratio(j, b));
            }
        }
    }
    let n = f.apply_left(&ba).unwrap();
    crate::energy::log_det_real(&CMatrix::identity(dim).sub(&n).unwrap()).unwrap().value
}

#[test]
fn sphere_plate_blocks_match_unblocked_matrix() {
    for (sphere, plate) in [(pec(), pec()), (diel(3.0), diel(2.0))] {
        let sp = SpherePlate::new(1.0, 1.6, sphere, plate).unwrap();
        for kappa in [0.2, 1.1] {
            let blocked = sp.log_det_blocked(kappa, 4).unwrap().value;
            let full = unblocked_log_det(&sp, kappa, 4);
            assert!((blocked - full).abs() < 1e-12 * full.abs().max(1.0), "kappa={kappa}: {blocked} vs {full}");
        }
    }
}

#[test]
fn sphere_plate_high_orders_stay_finite() {
    let sp = SpherePlate::new(1.0, 1.05, pec(), pec()).unwrap();
    let v = sp.log_det_blocked(0.5, 120).unwrap();
    assert!(v.value.is_finite() && v.value < 0.0);
}

#[test]
fn sphere_plate_asymptote_matches_full_energy() {
    let sp = SpherePlate::new(1.0, 50.0, diel(1.1), pec()).unwrap();
    let s = Settings::default();
    let full = sphere_plate_energy(&sp, SpherePlateMode::Full, &s, &Sequential).unwrap().value;
    let asym = sphere_plate_energy(&sp, SpherePlateMode::Asymptotic, &s, &Sequential).unwrap().value;
    assert!(full < 0.0 && rel(full, asym) < 0.04, "{full} vs {asym}");
}

#[test]
fn vacuum_sphere_gives_zero() {
    let sp = SpherePlate::new(1.0, 2.0, MaterialModel::Vacuum, pec()).unwrap();
    assert_eq!(sphere_plate_energy(&sp, SpherePlateMode::Full, &Settings::default(), &Sequential).unwrap().value, 0.0);
}

#[test]
fn sphere_plate_rejects_touching() {
    assert!(SpherePlate::new(1.0, 1.0, pec(), pec()).is_err());
    assert!(CylinderPlate::new(1.0, 0.5, pec(), pec()).is_err());
}

#[test]
fn phi_integrals_of_perfect_plate() {
    assert!((phi_integral(&pec(), PhiTarget::SphereE).unwrap() - 1.0).abs() < 1e-13);
    assert!((phi_integral(&pec(), PhiTarget::SphereM).unwrap() + 1.0).abs() < 1e-13);
    assert!((phi_integral(&pec(), PhiTarget::CylinderE).unwrap() - 1.0).abs() < 1e-13);
    for t in [PhiTarget::SphereE, PhiTarget::SphereM, PhiTarget::CylinderE] {
        assert_eq!(phi_integral(&MaterialModel::Vacuum, t).unwrap(), 0.0);
    }
}

#[test]
fn cylinder_phi_turns_negative_for_magnetic_plates() {
    let v = phi_integral(&MaterialModel::constant(10.0, 30.0).unwrap(), PhiTarget::CylinderE).unwrap();
    assert!(v < 0.0);
    let v = phi_integral(&MaterialModel::constant(10.0, 10.0).unwrap(), PhiTarget::CylinderE).unwrap();
    assert!(v > 0.0);
}

#[test]
fn impedance_matched_cylinder_has_no_pec_plate_asymptote() {
    let v = cylinder_plate_pec_plate(0.1, 5.0, &MaterialModel::constant(3.0, 3.0).unwrap(), &pec()).unwrap();
    assert_eq!(v, 0.0);
}

#[test]
fn cylinder_plate_modes_check_materials() {
    let c = CylinderPlate::new(0.1, 2.0, pec(), diel(2.0)).unwrap();
    let s = Settings::default();
    for m in [CylinderPlateMode::FullSmallRadius, CylinderPlateMode::AsymptoticDielectric, CylinderPlateMode::AsymptoticPecPlate] {
        assert!(matches!(cylinder_plate_energy(&c, m, &s, &Sequential), Err(Error::Unsupported(_))));
    }
    let c = CylinderPlate::new(0.1, 2.0, MaterialModel::constant(2.0, 2.0).unwrap(), pec()).unwrap();
    assert!(matches!(
        cylinder_plate_energy(&c, CylinderPlateMode::AsymptoticDielectric, &s, &Sequential),
        Err(Error::Unsupported(_))
    ));
    assert!(cylinder_plate_energy(&c, CylinderPlateMode::AsymptoticPecPlate, &s, &Sequential).is_ok());
    assert!(cylinder_plate_energy(&c, CylinderPlateMode::AsymptoticPecCylinder, &s, &Sequential).is_err());
    let c = CylinderPlate::new(0.1, 2.0, pec(), diel(2.0)).unwrap();
    assert!(cylinder_plate_energy(&c, CylinderPlateMode::AsymptoticPecCylinder, &s, &Sequential).unwrap().value < 0.0);
}

#[test]
fn thin_cylinder_full_matches_asymptote() {
    let c = CylinderPlate::new(1.0, 60.0, diel(1.05), pec()).unwrap();
    let s = Settings::default();
    let full = cylinder_plate_energy(&c, CylinderPlateMode::FullSmallRadius, &s, &Sequential).unwrap().value;
    let asym = cylinder_plate_energy(&c, CylinderPlateMode::AsymptoticDielectric, &s, &Sequential).unwrap().value;
    assert!(rel(full, asym) < 0.02, "{full} vs {asym}");
}

#[test]
fn separation_sweep_keeps_medium() {
    let g = Geometry::ParallelPlates(Plates::new(1.0, pec(), pec()).unwrap()).with_medium(Medium::new(diel(2.0)).unwrap()).unwrap();
    let h = g.with_separation(2.0).unwrap();
    assert_eq!(h.separation(), 2.0);
    assert_eq!(h.medium(), g.medium());
}

#[test]
fn closed_forms_have_no_temperature() {
    let g = Geometry::SpherePlate(SpherePlate::new(1.0, 3.0, pec(), pec()).unwrap(), SpherePlateMode::Asymptotic);
    assert!(matches!(g.free_energy(10.0, &Settings::default(), &Sequential), Err(Error::Unsupported(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dielectric_plates_attract(eps_a in 1.01f64..50.0, eps_b in 1.01f64..50.0, d in 0.2f64..5.0) {
        let p = Plates::new(d, diel(eps_a), diel(eps_b)).unwrap();
        for kappa in [0.01 / d, 1.0 / d] {
            prop_assert!(p.log_det(kappa, 0).unwrap().value < 0.0);
        }
    }

    #[test]
    fn sphere_plate_blocks_have_real_determinants(eps in 1.1f64..20.0, d in 1.2f64..4.0, kappa in 0.05f64..3.0) {
        let sp = SpherePlate::new(1.0, d, diel(eps), pec()).unwrap();
        let v = sp.log_det_blocked(kappa, 6).unwrap();
        prop_assert!(v.value < 0.0);
    }
}
