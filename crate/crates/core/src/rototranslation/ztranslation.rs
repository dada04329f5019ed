use faer::Mat;
use num_complex::Complex64;

use super::operator::{ModeOperator, OperatorKind};
use crate::error::{invalid, GsmError, Result};
use crate::wavefunctions::{spherical_bessel_j_seq, spherical_hankel2_seq, wigner3j_family, VswfBasis};
use crate::CMat;

/// C_{l l' m} and D_{l l' m} for one radial function family z_λ(kd).
fn coupling_coefficients(l: u32, lp: u32, m: u32, kd: f64, z: &[Complex64]) -> (Complex64, Complex64) {
    let (li, lpi, mi) = (l as i32, lp as i32, m as i32);
    let (lo, w0) = wigner3j_family(li, lpi, 0, 0);
    let (lo_m, wm) = wigner3j_family(li, lpi, mi, -mi);
    debug_assert_eq!(lo, lo_m);
    let (lf, lpf) = (l as f64, lp as f64);
    let norm = ((2.0 * lf + 1.0) * (2.0 * lpf + 1.0) / (lf * (lf + 1.0) * lpf * (lpf + 1.0))).sqrt();
    let mut c = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for (i, (&a, &b)) in w0.iter().zip(&wm).enumerate() {
        let lam = lo + i as i32;
        if (lpi - li + lam) % 2 != 0 {
            continue;
        }
        let phase = if ((lpi - li + lam) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let lamf = lam as f64;
        let common = phase * (2.0 * lamf + 1.0) * norm * a * b;
        let zl = z[lam as usize];
        c += zl * (common * (lf * (lf + 1.0) + lpf * (lpf + 1.0) - lamf * (lamf + 1.0)));
        d += zl * (common * kd);
    }
    let eps = if m == 0 { 1.0 } else { 2.0 };
    (c * (eps / 4.0), d * (-(m as f64)))
}

/// z-axis translation operator built from the radial family `z`.
pub(crate) fn z_operator(basis: &VswfBasis, kd: f64, z: &[Complex64]) -> CMat {
    let n = basis.len();
    let l_max = basis.l_max();
    let mut out = Mat::<Complex64>::zeros(n, n);
    let modes = basis.modes();
    for m in 0..=l_max {
        let idx: Vec<usize> = (0..n).filter(|&i| modes[i].m == m).collect();
        let lmin = m.max(1);
        let nl = (l_max - lmin + 1) as usize;
        let mut table = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); nl * nl];
        for l in lmin..=l_max {
            for lp in lmin..=l_max {
                table[(l - lmin) as usize * nl + (lp - lmin) as usize] = coupling_coefficients(l, lp, m, kd, z);
            }
        }
        let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
        for &a in &idx {
            let na = modes[a];
            for &b in &idx {
                let nb = modes[b];
                let (c, d) = table[(na.l - lmin) as usize * nl + (nb.l - lmin) as usize];
                let sigma = na.sigma.number();
                let value = if na.tau == nb.tau && na.sigma == nb.sigma {
                    let delta = if m == 0 {
                        if sigma == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    } else {
                        0.0
                    };
                    c * (sign_m + delta)
                } else if na.tau != nb.tau && na.sigma != nb.sigma {
                    let s = if (sigma + m) % 2 == 0 { 1.0 } else { -1.0 };
                    d * s
                } else {
                    continue;
                };
                out[(a, b)] = value;
            }
        }
    }
    out
}

/// Regular-to-regular translation 𝓡^z(kd) along +z.
pub fn translation_z_regular(basis: &VswfBasis, kd: f64) -> Result<ModeOperator> {
    if !(kd >= 0.0) || !kd.is_finite() {
        return invalid(format!("kd must be finite and non-negative, got {kd}"));
    }
    let z: Vec<Complex64> = spherical_bessel_j_seq(2 * basis.l_max(), kd)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    ModeOperator::new(basis.clone(), OperatorKind::RegularTranslation, z_operator(basis, kd, &z))
}

/// Outgoing-to-regular translation 𝓨^z(kd) along +z (Hankel radial functions).
///
/// Valid only when the evaluation point lies inside the sphere of radius d
/// about the new origin.
pub fn translation_z_outgoing_analytic(basis: &VswfBasis, kd: f64) -> Result<ModeOperator> {
    if !(kd > 0.0) || !kd.is_finite() {
        return invalid(format!("outgoing translation requires kd > 0, got {kd}"));
    }
    let z = spherical_hankel2_seq(2 * basis.l_max(), kd)?;
    let entries = z_operator(basis, kd, &z);
    let finite = (0..entries.ncols()).all(|j| (0..entries.nrows()).all(|i| entries[(i, j)].is_finite()));
    if !finite {
        return Err(GsmError::InvalidArgument(format!(
            "Hankel functions overflow at kd = {kd} for l_max = {}",
            basis.l_max()
        )));
    }
    ModeOperator::new(basis.clone(), OperatorKind::OutgoingTranslation, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunctions::canonical_basis;

    fn sub(a: &CMat, n: usize) -> CMat {
        a.submatrix(0, 0, n, n).to_owned()
    }

    #[test]
    fn identity_at_zero() {
        let b = canonical_basis(10).unwrap();
        let r = translation_z_regular(&b, 0.0).unwrap();
        let id = Mat::<Complex64>::identity(b.len(), b.len());
        assert!((r.entries() - &id).norm_l2() < 1e-13);
    }

    #[test]
    fn m_selection_and_real() {
        let b = canonical_basis(5).unwrap();
        let r = translation_z_regular(&b, 2.3).unwrap();
        for (i, n) in b.iter().enumerate() {
            for (j, np) in b.iter().enumerate() {
                let v = r.get(i, j);
                assert_eq!(v.im, 0.0);
                if n.m != np.m {
                    assert_eq!(v.re, 0.0);
                }
            }
        }
    }

    #[test]
    fn group_law() {
        let big = canonical_basis(16).unwrap();
        let a = translation_z_regular(&big, 1.0).unwrap();
        let c = translation_z_regular(&big, 2.0).unwrap();
        let prod = a.entries() * a.entries();
        let n = canonical_basis(8).unwrap().len();
        let err = (sub(&prod, n) - sub(c.entries(), n)).norm_l2() / sub(c.entries(), n).norm_l2();
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn outgoing_real_part_and_symmetry() {
        let b = canonical_basis(8).unwrap();
        let kd = 4.0;
        let y = translation_z_outgoing_analytic(&b, kd).unwrap();
        let r = translation_z_regular(&b, kd).unwrap();
        for (i, n) in b.iter().enumerate() {
            for (j, np) in b.iter().enumerate() {
                assert!((y.get(i, j).re - r.get(i, j).re).abs() < 1e-13);
                if r.get(i, j) == Complex64::new(0.0, 0.0) {
                    assert_eq!(y.get(i, j), Complex64::new(0.0, 0.0));
                }
                let e = n.tau.number() + np.tau.number() + n.l + np.l;
                let s = if e % 2 == 0 { 1.0 } else { -1.0 };
                let diff = (y.get(j, i) - y.get(i, j) * s).norm();
                assert!(diff < 1e-12 * y.get(i, j).norm().max(1.0));
            }
        }
        assert!(translation_z_outgoing_analytic(&b, 0.0).is_err());
    }
}
