use faer::Mat;
use gsmkit::components::{
    mie_dielectric_sphere, mie_pec_sphere, passivity_report, read_gsm, rotate_gs, write_gsm, GsMatrix,
};
use gsmkit::observables::{plane_wave_coefficients, PlaneWaveSpec};
use gsmkit::rototranslation::{rotation_matrix, translate_outgoing, translate_regular, TranslationMode};
use gsmkit::wavefunctions::{index_count, wigner3j, VswfBasis};
use gsmkit::{CMat, Complex64};
use proptest::prelude::*;

fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            m = m.max((a[(i, k)] - b[(i, k)]).norm());
        }
    }
    m
}

fn angle() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

fn vector(r: f64) -> impl Strategy<Value = [f64; 3]> {
    [-r..r, -r..r, -r..r]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn basis_positions_round_trip(l in 1u32..12) {
        let b = VswfBasis::new(l).unwrap();
        prop_assert_eq!(b.len(), index_count(l).unwrap());
        for (i, n) in b.iter().enumerate() {
            prop_assert_eq!(b.position(n), Some(i));
        }
        let smaller = VswfBasis::new(l - 1 + u32::from(l == 1)).unwrap();
        prop_assert!(smaller.modes().iter().zip(b.modes()).all(|(x, y)| x == y));
    }

    #[test]
    fn wigner3j_column_swap_symmetry(l1 in 0i32..8, l2 in 0i32..8, l3 in 0i32..14, m1 in -7i32..8, m2 in -7i32..8) {
        let m3 = -m1 - m2;
        let a = wigner3j(l1, l2, l3, m1, m2, m3);
        let b = wigner3j(l2, l1, l3, m2, m1, m3);
        let sign = if (l1 + l2 + l3) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() < 1e-12);
    }

    #[test]
    fn rotations_are_orthogonal(l in 1u32..7, a in angle(), b in 0.0..std::f64::consts::PI, g in angle()) {
        let basis = VswfBasis::new(l).unwrap();
        let d = rotation_matrix(&basis, a, b, g).into_entries();
        let n = basis.len();
        prop_assert!((&d * d.transpose() - Mat::<Complex64>::identity(n, n)).norm_l2() < 1e-12);
    }

    #[test]
    fn regular_translation_inverts_with_margin(d in vector(1.0)) {
        let big = VswfBasis::new(18).unwrap();
        let j = VswfBasis::new(4).unwrap().len();
        let fwd = translate_regular(&big, 1.0, d).unwrap().into_entries();
        let back = translate_regular(&big, 1.0, d.map(|x| -x)).unwrap().into_entries();
        let prod = (&fwd * &back).submatrix(0, 0, j, j).to_owned();
        prop_assert!(max_abs_diff(&prod, &Mat::identity(j, j)) < 1e-9);
    }

    #[test]
    fn outgoing_translation_reversal_is_transpose(d in vector(6.0)) {
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        prop_assume!(n > 0.5);
        let basis = VswfBasis::new(4).unwrap();
        let g = translate_outgoing(&basis, 1.0, d, TranslationMode::Analytic).unwrap().into_entries();
        let r = translate_outgoing(&basis, 1.0, d.map(|x| -x), TranslationMode::Analytic).unwrap().into_entries();
        prop_assert!(max_abs_diff(&g.transpose().to_owned(), &r) < 1e-10 * (1.0 + g.norm_l2()));
    }

    #[test]
    fn spheres_are_rotation_invariant(ka in 0.1f64..4.0, a in angle(), b in 0.0..std::f64::consts::PI, g in angle()) {
        let basis = VswfBasis::new(5).unwrap();
        let gs = mie_pec_sphere(&basis, ka).unwrap();
        let rotated = rotate_gs(&gs, a, b, g);
        prop_assert!(max_abs_diff(gs.s(), rotated.s()) < 1e-12);
    }

    #[test]
    fn lossy_spheres_are_passive(ka in 0.1f64..3.0, re in 1.0f64..10.0, im in 0.0f64..5.0) {
        let basis = VswfBasis::new(6).unwrap();
        let gs = mie_dielectric_sphere(&basis, ka, Complex64::new(re, -im)).unwrap();
        prop_assert!(passivity_report(&gs).max_singular_value <= 1.0 + 1e-12);
    }

    #[test]
    fn gsm_text_round_trip_is_exact(l in 1u32..3, ports in 0usize..3, seed in any::<u64>()) {
        let basis = VswfBasis::new(l).unwrap();
        let j = basis.len();
        let mut state = seed | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            f64::from_bits((state >> 2) | 0x3000_0000_0000_0000) * if state & 1 == 0 { 1.0 } else { -1.0 }
        };
        let mut value = || Complex64::new(next(), next());
        let gamma = Mat::from_fn(ports, ports, |_, _| value());
        let r = Mat::from_fn(ports, j, |_, _| value());
        let t = Mat::from_fn(j, ports, |_, _| value());
        let s = Mat::from_fn(j, j, |_, _| value());
        let gs = GsMatrix::new(basis, gamma, r, t, s).unwrap();
        let mut buf = Vec::new();
        write_gsm(&gs, &mut buf).unwrap();
        prop_assert_eq!(read_gsm(buf.as_slice()).unwrap(), gs);
    }

    #[test]
    fn plane_wave_coefficients_are_linear_in_amplitude(re in -5.0f64..5.0, im in -5.0f64..5.0, dir in vector(1.0)) {
        let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        prop_assume!(n > 0.1);
        let d = dir.map(|x| x / n);
        let helper = if d[2].abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
        let pol = [
            d[1] * helper[2] - d[2] * helper[1],
            d[2] * helper[0] - d[0] * helper[2],
            d[0] * helper[1] - d[1] * helper[0],
        ];
        let basis = VswfBasis::new(4).unwrap();
        let unit = PlaneWaveSpec::linear(d, pol, 1.0).unwrap();
        let amp = Complex64::new(re, im);
        let a1 = plane_wave_coefficients(&basis, 1.3, &unit).unwrap().coefficients;
        let a2 = plane_wave_coefficients(&basis, 1.3, &unit.with_amplitude(amp)).unwrap().coefficients;
        for (x, y) in a1.iter().zip(&a2) {
            prop_assert!((x * amp - y).norm() < 1e-12 * (1.0 + y.norm()));
        }
    }
}
