use super::*;
use crate::waves::{conj3, cylindrical_wave, free_green, spherical_wave, CVec3, Radial};

type Dyad = [[C64; 3]; 3];

fn zero() -> Dyad {
    [[C64::new(0.0, 0.0); 3]; 3]
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn rel_err(sum: &Dyad, exact: &[[f64; 3]; 3]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            num += (sum[i][j] - exact[i][j]).norm_sqr();
            den += exact[i][j] * exact[i][j];
        }
    }
    (num / den).sqrt()
}

// Σ_{αβ} C_β a_α T_{αβ} b_β
fn bilinear(t: &CMatrix, a: &[CVec3], b: &[CVec3], c: &[f64], acc: &mut Dyad, weight: f64) {
    for (al, va) in a.iter().enumerate() {
        for (be, vb) in b.iter().enumerate() {
            let w = t[(al, be)] * (c[be] * weight);
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..3 {
                for j in 0..3 {
                    acc[i][j] += w * va[i] * vb[j];
                }
            }
        }
    }
}

fn sph_waves(basis: &ChannelBasis, kind: Radial, kappa: f64, x: [f64; 3], conj: bool) -> Vec<CVec3> {
    basis
        .channels()
        .iter()
        .map(|c| {
            let Channel::Spherical { l, m, p } = *c else { unreachable!() };
            let v = spherical_wave(kind, p, l, m, kappa, x).unwrap();
            if conj {
                conj3(v)
            } else {
                v
            }
        })
        .collect()
}

fn cyl_waves(basis: &ChannelBasis, kind: Radial, k_z: f64, kappa: f64, x: [f64; 3], conj: bool) -> Vec<CVec3> {
    basis
        .channels()
        .iter()
        .map(|c| {
            let Channel::Cylindrical { n, p } = *c else { unreachable!() };
            let v = cylindrical_wave(kind, p, k_z, n, kappa, x).unwrap();
            if conj {
                conj3(v)
            } else {
                v
            }
        })
        .collect()
}

fn disp(x: [f64; 3]) -> Displacement {
    Displacement::new(x).unwrap()
}

// Ten pseudo-random point pairs near the two origins: x within `ri` of O_i and
// x' within `rj` of O_j.
fn point_pairs(ri: f64, rj: f64) -> Vec<([f64; 3], [f64; 3])> {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    (0..10)
        .map(|_| {
            let mut a = [next(), next(), next()];
            let mut b = [next(), next(), next()];
            let na = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
            for k in 0..3 {
                a[k] *= ri * (0.5 + 0.5 * next().abs()) / na;
                b[k] *= rj * (0.5 + 0.5 * next().abs()) / nb;
            }
            (a, b)
        })
        .collect()
}

fn normalizations(basis: &ChannelBasis, kappa: f64) -> Vec<f64> {
    (0..basis.len()).map(|i| basis.normalization(i, kappa)).collect()
}

#[test]
fn spherical_u_reproduces_green_function() {
    let kappa = 0.9;
    let (oi, oj) = ([0.3, -0.2, 0.1], [1.6, 1.1, 2.0]);
    let basis = ChannelBasis::spherical(25);
    let c = normalizations(&basis, kappa);
    let u = sph_block(TranslationKind::U, 25, kappa, &disp(sub3(oi, oj))).unwrap();
    for (xi, xj) in point_pairs(0.45, 0.45) {
        let x = [oi[0] + xi[0], oi[1] + xi[1], oi[2] + xi[2]];
        let xp = [oj[0] + xj[0], oj[1] + xj[1], oj[2] + xj[2]];
        let a = sph_waves(&basis, Radial::Regular, kappa, xi, false);
        let b = sph_waves(&basis, Radial::Regular, kappa, xj, true);
        let mut sum = zero();
        bilinear(&u.matrix, &a, &b, &c, &mut sum, 1.0);
        let e = rel_err(&sum, &free_green(kappa, x, xp));
        assert!(e < 1e-6, "{e}");
    }
}


fn shift(o: [f64; 3], x: [f64; 3]) -> [f64; 3] {
    [o[0] + x[0], o[1] + x[1], o[2] + x[2]]
}

// i inside j: x near O_i, x' far from O_j
#[test]
fn spherical_v_and_w_reproduce_green_function() {
    let kappa = 0.9;
    let l_max = 25;
    let (oi, oj) = ([0.2, 0.1, -0.15], [0.0, 0.0, 0.0]);
    let basis = ChannelBasis::spherical(l_max);
    let c = normalizations(&basis, kappa);
    let v = sph_block(TranslationKind::V, l_max, kappa, &disp(sub3(oj, oi))).unwrap();
    // roles swapped for W: the enclosing body is now "i" at oj
    let w = sph_block(TranslationKind::W, l_max, kappa, &disp(sub3(oj, oi))).unwrap();
    for (xi, xj) in point_pairs(0.35, 2.2) {
        let (x, xp) = (shift(oi, xi), shift(oj, xj));
        let exact = free_green(kappa, x, xp);
        let a = sph_waves(&basis, Radial::Regular, kappa, xi, false);
        let b = sph_waves(&basis, Radial::Outgoing, kappa, xj, true);
        let mut sum = zero();
        bilinear(&v.matrix, &a, &b, &c, &mut sum, 1.0);
        let e = rel_err(&sum, &exact);
        assert!(e < 1e-6, "V {e}");

        let a = sph_waves(&basis, Radial::Outgoing, kappa, xj, false);
        let b = sph_waves(&basis, Radial::Regular, kappa, xi, true);
        let mut sum = zero();
        bilinear(&w.matrix, &a, &b, &c, &mut sum, 1.0);
        let e = rel_err(&sum, &free_green(kappa, xp, x));
        assert!(e < 1e-6, "W {e}");
    }
}

fn kz_rule() -> (Vec<f64>, Vec<f64>) {
    crate::quadrature::gauss_legendre_on(500, -45.0, 45.0)
}

fn cyl_sum(kind: TranslationKind, d: [f64; 3], waves: (Radial, [f64; 3], Radial, [f64; 3]), kappa: f64, n_max: usize) -> Dyad {
    let (nodes, weights) = kz_rule();
    let mut sum = zero();
    for (kz, w) in nodes.iter().zip(&weights) {
        let basis = ChannelBasis::cylindrical(*kz, n_max);
        let c = normalizations(&basis, kappa);
        let t = block(kind, &basis, kappa, &disp(d)).unwrap();
        let a = cyl_waves(&basis, waves.0, *kz, kappa, waves.1, false);
        let b = cyl_waves(&basis, waves.2, *kz, kappa, waves.3, true);
        bilinear(&t.matrix, &a, &b, &c, &mut sum, w / (2.0 * core::f64::consts::PI));
    }
    sum
}

#[test]
fn cylindrical_u_reproduces_green_function() {
    let kappa = 0.7;
    let (oi, oj) = ([0.3, -0.2, 0.1], [1.9, 1.3, -0.4]);
    for (xi, xj) in point_pairs(0.5, 0.5) {
        let (x, xp) = (shift(oi, xi), shift(oj, xj));
        let sum = cyl_sum(TranslationKind::U, sub3(oi, oj), (Radial::Regular, xi, Radial::Regular, xj), kappa, 25);
        let e = rel_err(&sum, &free_green(kappa, x, xp));
        assert!(e < 1e-6, "{e}");
    }
}

#[test]
fn cylindrical_v_and_w_reproduce_green_function() {
    let kappa = 0.7;
    let (oi, oj) = ([0.2, -0.1, 0.3], [0.0, 0.0, 0.0]);
    for (xi, xj) in point_pairs(0.3, 1.0) {
        // push x' radially outward so it lies well outside the inner region
        let rho = xj[0].hypot(xj[1]);
        let xj = [xj[0] * 2.0 / rho, xj[1] * 2.0 / rho, xj[2]];
        let (x, xp) = (shift(oi, xi), shift(oj, xj));
        let v = cyl_sum(TranslationKind::V, sub3(oj, oi), (Radial::Regular, xi, Radial::Outgoing, xj), kappa, 25);
        let e = rel_err(&v, &free_green(kappa, x, xp));
        assert!(e < 1e-6, "V {e}");
        let w = cyl_sum(TranslationKind::W, sub3(oj, oi), (Radial::Outgoing, xj, Radial::Regular, xi), kappa, 25);
        let e = rel_err(&w, &free_green(kappa, xp, x));
        assert!(e < 1e-6, "W {e}");
    }
}

// 2-D k⊥ quadrature in polar coordinates; x below x'
fn plane_sum(kind: TranslationKind, d: [f64; 3], lo: (Radial, [f64; 3]), hi: (Radial, [f64; 3]), kappa: f64) -> Dyad {
    use crate::waves::plane_wave;
    let (kr, wr) = crate::quadrature::gauss_legendre_on(240, 0.0, 30.0);
    let nphi = 96;
    let mut sum = zero();
    for (k, w) in kr.iter().zip(&wr) {
        for j in 0..nphi {
            let phi = 2.0 * core::f64::consts::PI * (j as f64 + 0.5) / nphi as f64;
            let kp = [k * phi.cos(), k * phi.sin()];
            let weight = w * k * 2.0 * core::f64::consts::PI / nphi as f64 / (4.0 * core::f64::consts::PI.powi(2));
            let basis = ChannelBasis::plane(&[kp]);
            let c = normalizations(&basis, kappa);
            let t = block(kind, &basis, kappa, &disp(d)).unwrap();
            let a: Vec<CVec3> = basis.channels().iter().map(|ch| plane_wave(lo.0, ch.polarization(), kp, kappa, lo.1)).collect();
            let b: Vec<CVec3> =
                basis.channels().iter().map(|ch| conj3(plane_wave(hi.0, ch.polarization(), kp, kappa, hi.1))).collect();
            bilinear(&t.matrix, &a, &b, &c, &mut sum, weight);
        }
    }
    sum
}

#[test]
fn plane_v_and_w_reproduce_green_function() {
    let kappa = 0.8;
    let (lower, upper) = ([0.0, 0.0, 0.0], [0.3, -0.2, 2.0]);
    for (xl, xu) in point_pairs(0.4, 0.4).into_iter().take(3) {
        let (x, xp) = (shift(lower, xl), shift(upper, xu));
        // i = lower body: regular waves about O_i, incoming about O_j
        let v = plane_sum(TranslationKind::V, sub3(upper, lower), (Radial::Regular, xl), (Radial::Outgoing, xu), kappa);
        let e = rel_err(&v, &free_green(kappa, x, xp));
        assert!(e < 1e-4, "V {e}");
        // i = upper body, j below it
        let w = plane_sum(TranslationKind::W, sub3(upper, lower), (Radial::Outgoing, xu), (Radial::Regular, xl), kappa);
        let e = rel_err(&w, &free_green(kappa, xp, x));
        assert!(e < 1e-4, "W {e}");
    }
}

fn max_rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm()
}

// U^{ij}_{βα} = U^{ji*}_{αβ} C_β/C_α: the plain adjoint on polarization-preserving
// entries, with a sign flip on the mixing ones since C_E = −C_M
fn c_weighted_adjoint(u: &TranslationBlock) -> CMatrix {
    let c = normalizations(&u.basis, u.kappa);
    let a = u.matrix.adjoint();
    CMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * (c[i] / c[j]))
}

fn same_polarization(u: &TranslationBlock) -> CMatrix {
    let ch = u.basis.channels();
    CMatrix::from_fn(ch.len(), ch.len(), |i, j| {
        if ch[i].polarization() == ch[j].polarization() {
            u.matrix[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[test]
fn u_is_hermitian_under_exchange() {
    // κ|X| = 1.3
    let x = [0.4, -0.7, 0.9];
    let r = (0.16f64 + 0.49 + 0.81).sqrt();
    let kappa = 1.3 / r;
    let d = disp(x);
    let u_ji = sph_block(TranslationKind::U, 6, kappa, &d).unwrap();
    let u_ij = sph_block(TranslationKind::U, 6, kappa, &d.reversed()).unwrap();
    assert!(max_rel_diff(&u_ij.matrix, &c_weighted_adjoint(&u_ji)) < 1e-10);
    assert!(max_rel_diff(&same_polarization(&u_ij), &same_polarization(&u_ji).adjoint()) < 1e-10);

    let basis = ChannelBasis::cylindrical(0.35, 10);
    let u_ji = block(TranslationKind::U, &basis, kappa, &d).unwrap().matrix;
    let u_ij = block(TranslationKind::U, &basis, kappa, &d.reversed()).unwrap().matrix;
    assert!(max_rel_diff(&u_ij, &u_ji.adjoint()) < 1e-10);
}

#[test]
fn v_at_zero_displacement_is_identity() {
    let d = disp([0.0, 0.0, 0.0]);
    let v = sph_block(TranslationKind::V, 8, 1.1, &d).unwrap().matrix;
    let id = CMatrix::identity(v.rows());
    assert!(v.sub(&id).unwrap().frobenius_norm() < 1e-12);
    let basis = ChannelBasis::cylindrical(0.0, 8);
    let v = block(TranslationKind::V, &basis, 1.1, &d).unwrap().matrix;
    assert!(v.sub(&CMatrix::identity(v.rows())).unwrap().frobenius_norm() < 1e-12);
    // and in the small-displacement limit
    let v = sph_block(TranslationKind::V, 5, 1.0, &disp([1e-9, 2e-9, -1e-9])).unwrap().matrix;
    assert!(v.sub(&CMatrix::identity(v.rows())).unwrap().frobenius_norm() < 1e-7);
}

#[test]
fn w_elements_follow_conjugate_relations() {
    use crate::Polarization::{E, M};
    let kappa = 0.8;
    let x = disp([0.3, 0.5, -0.4]);
    let w = sph_block(TranslationKind::W, 4, kappa, &x).unwrap();
    let v = sph_block(TranslationKind::V, 4, kappa, &x).unwrap();
    let ch = w.basis.channels();
    for (a, ca) in ch.iter().enumerate() {
        for (b, cb) in ch.iter().enumerate() {
            let sign = match (ca.polarization(), cb.polarization()) {
                (M, M) | (E, E) => 1.0,
                _ => -1.0,
            };
            let expect = v.matrix[(b, a)].conj() * sign;
            assert!((w.matrix[(a, b)] - expect).norm() < 1e-14);
            assert!((sph_w(kappa, ca, cb, &x).unwrap() - expect).norm() < 1e-12);
        }
    }
    // V_{ME} = −V_{EM} per (l m) pair
    for a in (0..ch.len()).step_by(2) {
        for b in (0..ch.len()).step_by(2) {
            assert_eq!(v.matrix[(a, b + 1)], -v.matrix[(a + 1, b)]);
            assert_eq!(v.matrix[(a, b)], v.matrix[(a + 1, b + 1)]);
        }
    }
    // cylinder W against its explicit form
    let basis = ChannelBasis::cylindrical(0.4, 3);
    let wc = block(TranslationKind::W, &basis, kappa, &x).unwrap().matrix;
    let vc = block(TranslationKind::V, &basis, kappa, &x).unwrap().matrix;
    assert!(max_rel_diff(&wc, &vc.adjoint()) < 1e-15);
    let p = (0.16f64 + kappa * kappa).sqrt();
    let explicit = crate::specfun::bessel_i(2, x.perp() * p).unwrap().value
        * C64::from_polar(1.0, 0.4 * x.z() - 2.0 * x.azimuth());
    // n = 1, n' = −1 lives at row index 2·(1+3), column 2·(−1+3)
    assert!((wc[(8, 4)] - explicit).norm() < 1e-14);
}

#[test]
fn axial_displacement_conserves_m() {
    let u = sph_block(TranslationKind::U, 5, 0.9, &disp([0.0, 0.0, 1.7])).unwrap();
    let ch = u.basis.channels();
    for (a, ca) in ch.iter().enumerate() {
        for (b, cb) in ch.iter().enumerate() {
            let (Channel::Spherical { m: ma, .. }, Channel::Spherical { m: mb, .. }) = (*ca, *cb) else { unreachable!() };
            if ma != mb {
                assert!(u.matrix[(a, b)].norm() < 1e-14, "{ca:?} {cb:?} {}", u.matrix[(a, b)]);
            }
        }
    }
    let ch_row = Channel::Spherical { l: 3, m: 1, p: crate::Polarization::M };
    let ch_col = Channel::Spherical { l: 2, m: 1, p: crate::Polarization::M };
    assert!(sph_u(0.9, &ch_row, &ch_col, &disp([0.0, 0.0, 1.7])).unwrap().norm() > 1e-6);
}

#[test]
fn coaxial_v_composes() {
    let kappa = 0.6;
    let (x, y) = (disp([0.3, 0.1, 0.0]), disp([0.45, 0.15, 0.0]));
    let xy = disp([0.75, 0.25, 0.0]);
    let big = ChannelBasis::cylindrical(0.2, 40);
    let prod = block(TranslationKind::V, &big, kappa, &x)
        .unwrap()
        .matrix
        .mul(&block(TranslationKind::V, &big, kappa, &y).unwrap().matrix)
        .unwrap();
    let small = ChannelBasis::cylindrical(0.2, 20);
    let direct = block(TranslationKind::V, &small, kappa, &xy).unwrap().matrix;
    // the central |n| ≤ 20 window of the n_max = 40 product
    let off = 2 * 20;
    let mut worst: f64 = 0.0;
    for a in 0..direct.rows() {
        for b in 0..direct.cols() {
            worst = worst.max((prod[(a + off, b + off)] - direct[(a, b)]).norm());
        }
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn element_examples() {
    let kappa = 0.5;
    let d = 3.0;
    let v = plane_v(kappa, [0.0, 0.0], &disp([0.0, 0.0, d])).unwrap();
    assert!((v - C64::new((-kappa * d).exp(), 0.0)).norm() < 1e-16);
    let shifted = plane_v(kappa, [0.4, 0.2], &disp([1.0, -2.0, d])).unwrap();
    let plain = plane_v(kappa, [0.4, 0.2], &disp([0.0, 0.0, d])).unwrap();
    assert!((shifted.norm() - plain.norm()).abs() < 1e-16);
    assert!(matches!(plane_v(kappa, [0.0, 0.0], &disp([0.0, 0.0, -1.0])), Err(Error::Geometry(_))));
    let w = plane_w(kappa, [0.4, 0.2], &disp([1.0, -2.0, d])).unwrap();
    let q = (0.2f64 + kappa * kappa).sqrt();
    assert!((w - C64::from_polar((-q * d).exp(), 0.4 * 1.0 - 0.2 * 2.0)).norm() < 1e-16);

    // n = n', θ = 0, X_z = 0: K_0(|X⊥|p)(−1)^n
    let u = cyl_u(1.0, 0.0, 3, 3, &disp([-1.0, 0.0, 0.0])).unwrap();
    assert!((u - C64::new(-0.421_024_438_240_708_3, 0.0)).norm() < 1e-13);
    assert!(matches!(cyl_u(1.0, 0.0, 0, 0, &disp([0.0, 0.0, 1.0])), Err(Error::Geometry(_))));
    // decay like e^{−|X⊥|p}
    let far = cyl_u(1.0, 0.0, 0, 0, &disp([40.0, 0.0, 0.0])).unwrap().norm();
    assert!((far * (40.0f64).exp() * (2.0 * 40.0 / core::f64::consts::PI).sqrt() - 1.0).abs() < 0.01);
    let v = cyl_v(1.0, 0.0, 2, -1, &disp([0.8, 0.0, 0.0])).unwrap();
    assert_eq!(v.im, 0.0);
}

#[test]
fn assembly_places_negated_blocks() {
    let basis = ChannelBasis::cylindrical(0.1, 2);
    let x_ab = disp([2.5, 0.0, 0.0]);
    let (ab, ba) = assemble_x(Arrangement::Outside, &basis, 0.7, &x_ab).unwrap();
    assert_eq!((ab.row, ab.col, ba.row, ba.col), (0, 0, 0, 0));
    let u_ba = block(TranslationKind::U, &basis, 0.7, &x_ab.reversed()).unwrap().matrix;
    assert!(max_rel_diff(&ab.matrix, &u_ba.scaled(C64::new(-1.0, 0.0))) < 1e-15);

    let (ab, ba) = assemble_x(Arrangement::AInsideB, &basis, 0.7, &disp([0.3, 0.0, 0.0])).unwrap();
    assert_eq!((ab.row, ab.col, ba.row, ba.col), (0, 1, 1, 0));
    let (ab, ba) = assemble_x(Arrangement::BInsideA, &basis, 0.7, &disp([0.3, 0.0, 0.0])).unwrap();
    assert_eq!((ab.row, ab.col, ba.row, ba.col), (1, 0, 0, 1));

    let planes = ChannelBasis::plane(&[[0.1, 0.2]]);
    let (ab, _) = assemble_x(Arrangement::AInsideB, &planes, 0.7, &disp([0.0, 0.0, 1.0])).unwrap();
    let expect = -plane_v(0.7, [0.1, 0.2], &disp([0.0, 0.0, 1.0])).unwrap();
    assert!((ab.matrix[(0, 0)] - expect).norm() < 1e-16);
    assert!(matches!(assemble_x(Arrangement::Outside, &planes, 0.7, &disp([0.0, 0.0, 1.0])), Err(Error::Unsupported(_))));

    assert_eq!(arrangement_of(1.0, 1.0, 3.0).unwrap(), Arrangement::Outside);
    assert_eq!(arrangement_of(0.5, 2.0, 1.0).unwrap(), Arrangement::AInsideB);
    assert_eq!(arrangement_of(2.0, 0.5, 1.0).unwrap(), Arrangement::BInsideA);
    assert!(matches!(arrangement_of(1.0, 1.0, 1.5), Err(Error::Geometry(_))));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn spherical_u_hermitian(x in -2.0f64..2.0, y in -2.0f64..2.0, z in 0.3f64..2.0, kappa in 0.2f64..2.5) {
            let d = disp([x, y, z]);
            let a = sph_block(TranslationKind::U, 3, kappa, &d).unwrap();
            let b = sph_block(TranslationKind::U, 3, kappa, &d.reversed()).unwrap();
            prop_assert!(max_rel_diff(&b.matrix, &c_weighted_adjoint(&a)) < 1e-10);
        }

        #[test]
        fn cylindrical_u_hermitian(x in 0.3f64..3.0, y in -2.0f64..2.0, z in -2.0f64..2.0, kz in -2.0f64..2.0) {
            let basis = ChannelBasis::cylindrical(kz, 6);
            let d = disp([x, y, z]);
            let a = block(TranslationKind::U, &basis, 0.8, &d).unwrap().matrix;
            let b = block(TranslationKind::U, &basis, 0.8, &d.reversed()).unwrap().matrix;
            prop_assert!(max_rel_diff(&b, &a.adjoint()) < 1e-12);
        }

        #[test]
        fn plane_v_magnitude_ignores_lateral_shift(kx in -3.0f64..3.0, ky in -3.0f64..3.0, sx in -5.0f64..5.0, sy in -5.0f64..5.0) {
            let a = plane_v(0.9, [kx, ky], &disp([sx, sy, 1.2])).unwrap();
            let b = plane_v(0.9, [kx, ky], &disp([0.0, 0.0, 1.2])).unwrap();
            prop_assert!((a.norm() - b.norm()).abs() <= 1e-15 * b.norm());
        }
    }
}
