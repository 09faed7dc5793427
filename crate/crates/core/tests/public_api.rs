use std::f64::consts::PI;

use casimir_core::energy::Sequential;
use casimir_core::geometries::{lifshitz_energy, sphere_plate_asymptotic, Geometry, Plates, Settings, SpherePlate, SpherePlateMode};
use casimir_core::materials::MaterialModel;
use casimir_core::quadrature::QuadratureSpec;
use proptest::prelude::*;

fn pec() -> MaterialModel {
    MaterialModel::PerfectConductor
}

fn glass() -> MaterialModel {
    MaterialModel::constant(2.25, 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn perfect_plates_scale_as_inverse_cube(d in 0.05f64..20.0) {
        let e = lifshitz_energy(d, pec(), pec(), &QuadratureSpec::default(), &Sequential).unwrap();
        let exact = -PI * PI / (720.0 * d.powi(3));
        prop_assert!(((e.value - exact) / exact).abs() < 1e-6);
    }

    #[test]
    fn dielectric_plates_attract_less_than_mirrors(eps in 1.1f64..50.0, d in 0.1f64..10.0) {
        let spec = QuadratureSpec::default();
        let diel = MaterialModel::constant(eps, 1.0).unwrap();
        let e = lifshitz_energy(d, diel.clone(), diel, &spec, &Sequential).unwrap().value;
        let mirror = lifshitz_energy(d, pec(), pec(), &spec, &Sequential).unwrap().value;
        prop_assert!(e < 0.0 && e > mirror);
    }
}

#[test]
fn sphere_plate_approaches_its_large_distance_form() {
    let settings = Settings::default();
    let ratio = |d: f64| {
        let g = Geometry::SpherePlate(SpherePlate::new(1.0, d, glass(), pec()).unwrap(), SpherePlateMode::Full);
        let full = g.energy(&settings, &Sequential).unwrap().value;
        full / sphere_plate_asymptotic(1.0, d, &glass(), &pec()).unwrap()
    };
    let (near, far) = (ratio(4.0), ratio(40.0));
    assert!((far - 1.0).abs() < (near - 1.0).abs(), "{near} {far}");
    assert!((far - 1.0).abs() < 0.02, "{far}");
}

#[test]
fn geometry_keeps_materials_when_moved() {
    let g = Geometry::ParallelPlates(Plates::new(1.0, glass(), pec()).unwrap());
    let h = g.with_separation(2.5).unwrap();
    assert_eq!(h.separation(), 2.5);
    assert_eq!(h.gap(), 2.5);
    match h {
        Geometry::ParallelPlates(p) => assert_eq!((p.a, p.b), (glass(), pec())),
        _ => unreachable!(),
    }
    let s = Geometry::SpherePlate(SpherePlate::new(1.0, 3.0, glass(), pec()).unwrap(), SpherePlateMode::Full);
    assert_eq!(s.gap(), 2.0);
    assert!(s.with_separation(0.5).is_err());
}
