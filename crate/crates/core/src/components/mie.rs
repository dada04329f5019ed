use faer::Mat;
use num_complex::Complex64;

use super::gsmatrix::GsMatrix;
use crate::error::{invalid, Result};
use crate::wavefunctions::{
    riccati_bessel_log_derivative, spherical_bessel_j_seq, spherical_bessel_y_seq, Polarization, VswfBasis,
};

/// Diagonal S entries (TE, TM) of a PEC sphere for l = 1..=l_max, index `l − 1`.
///
/// S_TE = −h_l^(1)(x)/h_l^(2)(x) and S_TM = −[x h_l^(1)]'/[x h_l^(2)]' at x = ka.
pub fn mie_pec_coefficients(l_max: u32, ka: f64) -> Result<Vec<(Complex64, Complex64)>> {
    if !(ka > 0.0) || !ka.is_finite() {
        return invalid(format!("ka must be positive, got {ka}"));
    }
    let j = spherical_bessel_j_seq(l_max, ka);
    let y = spherical_bessel_y_seq(l_max, ka)?;
    Ok((1..=l_max as usize)
        .map(|l| {
            let h1 = Complex64::new(j[l], y[l]);
            let h2 = Complex64::new(j[l], -y[l]);
            let h1m = Complex64::new(j[l - 1], y[l - 1]);
            let h2m = Complex64::new(j[l - 1], -y[l - 1]);
            let lf = l as f64;
            let dh1 = h1m * ka - h1 * lf;
            let dh2 = h2m * ka - h2 * lf;
            (-h1 / h2, -dh1 / dh2)
        })
        .collect())
}

/// Diagonal S entries (TE, TM) of a homogeneous dielectric sphere.
///
/// Matches tangential fields at r = a; `eps_r` follows the e^{+jωt}
/// convention, so losses have Im(ε_r) < 0.
pub fn mie_dielectric_coefficients(l_max: u32, ka: f64, eps_r: Complex64) -> Result<Vec<(Complex64, Complex64)>> {
    if !(ka > 0.0) || !ka.is_finite() {
        return invalid(format!("ka must be positive, got {ka}"));
    }
    if eps_r.im > 0.0 || !eps_r.is_finite() {
        return invalid(format!("relative permittivity must have Im <= 0, got {eps_r}"));
    }
    if eps_r.norm() == 0.0 {
        return invalid("relative permittivity must be nonzero");
    }
    let m = eps_r.sqrt();
    let x = ka;
    let dlog = riccati_bessel_log_derivative(l_max, m * x);
    let j = spherical_bessel_j_seq(l_max, x);
    let y = spherical_bessel_y_seq(l_max, x)?;
    Ok((1..=l_max as usize)
        .map(|l| {
            let lf = l as f64;
            let jl = Complex64::new(j[l], 0.0);
            let hl = Complex64::new(j[l], -y[l]);
            let dpsi = Complex64::new(x * j[l - 1] - lf * j[l], 0.0);
            let dxi = Complex64::new(x * j[l - 1] - lf * j[l], -(x * y[l - 1] - lf * y[l]));
            let ratio = |lv: Complex64| (lv * jl - dpsi) / (dxi - lv * hl);
            let te = ratio(m * x * dlog[l]);
            let tm = ratio(x * dlog[l] / m);
            (1.0 + 2.0 * te, 1.0 + 2.0 * tm)
        })
        .collect())
}

fn diagonal_scatterer(basis: &VswfBasis, coeffs: &[(Complex64, Complex64)]) -> Result<GsMatrix> {
    let n = basis.len();
    let mut s = Mat::<Complex64>::zeros(n, n);
    for (i, mode) in basis.iter().enumerate() {
        let (te, tm) = coeffs[(mode.l - 1) as usize];
        s[(i, i)] = match mode.tau {
            Polarization::Te => te,
            Polarization::Tm => tm,
        };
    }
    GsMatrix::scatterer(basis.clone(), s)
}

/// GS-matrix of a perfectly conducting sphere of electrical radius `ka`.
pub fn mie_pec_sphere(basis: &VswfBasis, ka: f64) -> Result<GsMatrix> {
    diagonal_scatterer(basis, &mie_pec_coefficients(basis.l_max(), ka)?)
}

/// GS-matrix of a homogeneous dielectric sphere.
pub fn mie_dielectric_sphere(basis: &VswfBasis, ka: f64, eps_r: Complex64) -> Result<GsMatrix> {
    diagonal_scatterer(basis, &mie_dielectric_coefficients(basis.l_max(), ka, eps_r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::passivity_report;
    use crate::wavefunctions::canonical_basis;
    use std::f64::consts::PI;

    // Textbook (Bohren–Huffman, e^{−iωt}) coefficients a_n, b_n built from
    // Riccati–Bessel functions evaluated by power series and upward recurrence.
    fn bh_coefficients(n_max: usize, x: f64, m: Complex64) -> Vec<(Complex64, Complex64)> {
        fn cj(l: usize, z: Complex64) -> Complex64 {
            // power series j_l(z) = z^l Σ (−z²/2)^k / (k! (2l+2k+1)!!)
            let mut dfact = 1.0;
            for i in (1..=2 * l + 1).step_by(2) {
                dfact *= i as f64;
            }
            let mut term = z.powu(l as u32) / dfact;
            let mut sum = term;
            for k in 1..200 {
                term *= -z * z / 2.0 / k as f64 / (2 * l + 2 * k + 1) as f64;
                sum += term;
                if term.norm() < 1e-18 * sum.norm() {
                    break;
                }
            }
            sum
        }
        let psi = |l: usize, z: Complex64| z * cj(l, z);
        let dpsi = |l: usize, z: Complex64| z * cj(l - 1, z) - l as f64 * cj(l, z);
        let yr = |l: usize| -> f64 {
            let (s, c) = x.sin_cos();
            let mut y0 = -c / x;
            let mut y1 = -c / (x * x) - s / x;
            if l == 0 {
                return y0;
            }
            for k in 1..l {
                let y2 = (2 * k + 1) as f64 / x * y1 - y0;
                y0 = y1;
                y1 = y2;
            }
            y1
        };
        let xc = Complex64::new(x, 0.0);
        (1..=n_max)
            .map(|n| {
                let xi = xc * (cj(n, xc) + Complex64::i() * yr(n));
                let dxi = xc * (cj(n - 1, xc) + Complex64::i() * yr(n - 1)) - n as f64 * (cj(n, xc) + Complex64::i() * yr(n));
                let mx = m * x;
                let a = (m * psi(n, mx) * dpsi(n, xc) - psi(n, xc) * dpsi(n, mx))
                    / (m * psi(n, mx) * dxi - xi * dpsi(n, mx));
                let b = (psi(n, mx) * dpsi(n, xc) - m * psi(n, xc) * dpsi(n, mx))
                    / (psi(n, mx) * dxi - m * xi * dpsi(n, mx));
                (a, b)
            })
            .collect()
    }

    #[test]
    fn pec_unit_modulus_and_degeneracy() {
        let b = canonical_basis(10).unwrap();
        let gs = mie_pec_sphere(&b, 2.0 * PI).unwrap();
        for (i, n) in b.iter().enumerate() {
            assert!((gs.s()[(i, i)].norm() - 1.0).abs() < 1e-13);
            for (k, np) in b.iter().enumerate() {
                if i != k {
                    assert_eq!(gs.s()[(i, k)], Complex64::new(0.0, 0.0));
                }
                if n.tau == np.tau && n.l == np.l {
                    assert_eq!(gs.s()[(i, i)], gs.s()[(k, k)]);
                }
            }
        }
        assert!(mie_pec_sphere(&b, 0.0).is_err());
    }

    #[test]
    fn pec_te_regression_value() {
        // −h1(x)/h2(x) at x = 2π for l = 1, from an independent scalar evaluation
        let x = 2.0 * PI;
        let (s, c) = x.sin_cos();
        let j1 = s / (x * x) - c / x;
        let y1 = -c / (x * x) - s / x;
        let want = -Complex64::new(j1, y1) / Complex64::new(j1, -y1);
        let got = mie_pec_coefficients(1, x).unwrap()[0].0;
        assert!((got - want).norm() < 1e-13);
        assert!((got - Complex64::new(-0.950_590_953_936_285_1, -0.310_446_192_269_294_8)).norm() < 1e-12);
    }

    #[test]
    fn dielectric_matches_textbook_coefficients() {
        for &eps in &[Complex64::new(8.0, 0.0), Complex64::new(4.4, -8.8), Complex64::new(2.25, -0.1)] {
            let x = 1.7;
            let ours = mie_dielectric_coefficients(8, x, eps).unwrap();
            // e^{+jωt} with ε ↔ e^{−iωt} with conj(ε)
            let bh = bh_coefficients(8, x, eps.conj().sqrt());
            for (l, ((te, tm), (a, b))) in ours.iter().zip(&bh).enumerate() {
                let t_tm = (tm - 1.0) / 2.0;
                let t_te = (te - 1.0) / 2.0;
                assert!((t_tm + a.conj()).norm() < 1e-10, "eps={eps} l={} TM", l + 1);
                assert!((t_te + b.conj()).norm() < 1e-10, "eps={eps} l={} TE", l + 1);
            }
        }
    }

    #[test]
    fn pec_matches_textbook_limit() {
        // PEC: a_n = ψ'/ξ', b_n = ψ/ξ
        let x = 2.0 * PI;
        let ours = mie_pec_coefficients(6, x).unwrap();
        let j = spherical_bessel_j_seq(6, x);
        let y = spherical_bessel_y_seq(6, x).unwrap();
        for l in 1..=6usize {
            let psi = x * j[l];
            let dpsi = x * j[l - 1] - l as f64 * j[l];
            let xi = Complex64::new(x * j[l], x * y[l]);
            let dxi = Complex64::new(dpsi, x * y[l - 1] - l as f64 * y[l]);
            let a = dpsi / dxi;
            let b = psi / xi;
            assert!(((ours[l - 1].1 - 1.0) / 2.0 + a.conj()).norm() < 1e-13);
            assert!(((ours[l - 1].0 - 1.0) / 2.0 + b.conj()).norm() < 1e-13);
        }
    }

    #[test]
    fn dielectric_limits() {
        let b = canonical_basis(8).unwrap();
        let vac = mie_dielectric_sphere(&b, 1.3, Complex64::new(1.0, 0.0)).unwrap();
        for i in 0..b.len() {
            assert!((vac.s()[(i, i)] - 1.0).norm() < 1e-12);
        }
        let lossless = mie_dielectric_sphere(&b, 1.3, Complex64::new(8.0, 0.0)).unwrap();
        for i in 0..b.len() {
            assert!((lossless.s()[(i, i)].norm() - 1.0).abs() < 1e-12);
        }
        let lossy = mie_dielectric_sphere(&b, 1.3, Complex64::new(4.4, -8.8)).unwrap();
        for i in 0..b.len() {
            assert!(lossy.s()[(i, i)].norm() < 1.0);
        }
        assert!(passivity_report(&lossy).max_singular_value < 1.0);
        assert!(mie_dielectric_sphere(&b, 1.3, Complex64::new(2.0, 0.5)).is_err());
    }
}
