use std::f64::consts::PI;

use num_complex::Complex64;

use super::index::{Parity, VswfBasis};
use crate::error::{invalid, Result};

/// Reduced functions Q_l^m(u) = P̃_l^m(u) / (1−u²)^(m/2) and their
/// u-derivatives for l = m..=l_max, indexed by `l − m`.
///
/// P̃ is orthonormal on [−1, 1] without the Condon–Shortley phase. Working
/// with Q keeps the poles and complex arguments free of divisions by s.
fn reduced_legendre(l_max: u32, m: u32, u: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = (l_max - m + 1) as usize;
    let mut q = vec![Complex64::new(0.0, 0.0); n];
    let mut dq = vec![Complex64::new(0.0, 0.0); n];

    let mut qmm = 0.5f64.sqrt();
    for k in 1..=m {
        qmm *= ((2 * k + 1) as f64 / (2 * k) as f64).sqrt();
    }
    q[0] = Complex64::new(qmm, 0.0);
    if n > 1 {
        let c = ((2 * m + 3) as f64).sqrt();
        q[1] = c * u * q[0];
        dq[1] = c * q[0];
    }
    let mf = m as f64;
    for i in 2..n {
        let l = (m as usize + i) as f64;
        let a = ((4.0 * l * l - 1.0) / (l * l - mf * mf)).sqrt();
        let lm1 = l - 1.0;
        let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
        q[i] = a * (u * q[i - 1] - b * q[i - 2]);
        dq[i] = a * (q[i - 1] + u * dq[i - 1] - b * dq[i - 2]);
    }
    (q, dq)
}

/// Normalized associated Legendre function P̃_l^m(u), orthonormal on [−1, 1],
/// without the Condon–Shortley phase.
pub fn normalized_legendre(l: u32, m: u32, u: f64) -> Result<f64> {
    if m > l {
        return invalid(format!("order m = {m} exceeds degree l = {l}"));
    }
    if !(u.abs() <= 1.0) {
        return invalid(format!("Legendre argument must lie in [-1, 1], got {u}"));
    }
    let (q, _) = reduced_legendre(l, m, Complex64::new(u, 0.0));
    let s = (1.0 - u * u).max(0.0).sqrt();
    Ok(s.powi(m as i32) * q[(l - m) as usize].re)
}

/// Δ_l^m and π_l^m for l = 0..=l_max (entries with l < max(m, 1) are zero),
/// at a possibly complex argument `u` with caller-chosen branch `s = sqrt(1 − u²)`.
pub fn delta_pi_seq(l_max: u32, m: u32, u: Complex64, s: Complex64) -> Vec<(Complex64, Complex64)> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![(zero, zero); l_max as usize + 1];
    if m > l_max {
        return out;
    }
    let (q, dq) = reduced_legendre(l_max, m, u);
    let mf = m as f64;
    let sm1 = if m >= 1 { s.powu(m - 1) } else { zero };
    let sm = s.powu(m);
    let sp1 = sm * s;
    for l in m.max(1)..=l_max {
        let i = (l - m) as usize;
        let norm = ((l * (l + 1)) as f64).sqrt();
        let (delta, pi) = if m == 0 {
            (-(sp1 * dq[i]) / norm, zero)
        } else {
            (
                -(sp1 * dq[i] - mf * u * sm1 * q[i]) / norm,
                -mf * sm1 * q[i] / norm,
            )
        };
        out[l as usize] = (delta, pi);
    }
    out
}

/// Δ_l^m(u) and π_l^m(u) at a complex argument with branch `s = sqrt(1 − u²)`.
pub fn delta_pi_complex(l: u32, m: u32, u: Complex64, s: Complex64) -> (Complex64, Complex64) {
    delta_pi_seq(l, m, u, s)[l as usize]
}

/// Δ_l^m(u) = −sqrt(1−u²)/sqrt(l(l+1))·dP̃/du and
/// π_l^m(u) = −m·P̃/(sqrt(l(l+1))·sqrt(1−u²)), finite on the closed interval.
pub fn delta_pi(l: u32, m: u32, u: f64) -> Result<(f64, f64)> {
    if l < 1 || m > l {
        return invalid(format!("delta_pi requires 1 <= l and m <= l, got l={l}, m={m}"));
    }
    if !(u.abs() <= 1.0) {
        return invalid(format!("argument must lie in [-1, 1], got {u}"));
    }
    let s = (1.0 - u * u).max(0.0).sqrt();
    let (d, p) = delta_pi_complex(l, m, Complex64::new(u, 0.0), Complex64::new(s, 0.0));
    Ok((d.re, p.re))
}

/// Angular parts of one VSWF at a direction: A1 and A2 as (θ̂, φ̂)
/// components and the scalar harmonic Y (A3 = r̂·Y).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VectorHarmonics {
    pub a1: [f64; 2],
    pub a2: [f64; 2],
    pub y: f64,
}

/// Vector spherical harmonics of every mode in `basis` at (θ, φ).
pub fn vector_harmonics(basis: &VswfBasis, theta: f64, phi: f64) -> Vec<VectorHarmonics> {
    let l_max = basis.l_max();
    let (s, u) = theta.sin_cos();
    let (uc, sc) = (Complex64::new(u, 0.0), Complex64::new(s.abs(), 0.0));
    let mut out = vec![VectorHarmonics::default(); basis.len()];
    for m in 0..=l_max {
        let dp = delta_pi_seq(l_max, m, uc, sc);
        let (q, _) = reduced_legendre(l_max, m, uc);
        let sm = s.abs().powi(m as i32);
        let eps = if m == 0 { 1.0 } else { 2.0 };
        let c = (eps / (2.0 * PI)).sqrt();
        let (sin_m, cos_m) = (m as f64 * phi).sin_cos();
        for (i, n) in basis.iter().enumerate() {
            if n.m != m {
                continue;
            }
            let (trig, dtrig) = match n.sigma {
                Parity::Even => (cos_m, sin_m),
                Parity::Odd => (sin_m, -cos_m),
            };
            let (delta, pi) = dp[n.l as usize];
            let (delta, pi) = (delta.re, pi.re);
            out[i] = VectorHarmonics {
                a1: [c * pi * dtrig, -c * delta * trig],
                a2: [c * delta * trig, c * pi * dtrig],
                y: c * sm * q[(n.l - m) as usize].re * trig,
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavefunctions::gauss_legendre;

    #[test]
    fn closed_forms() {
        for &u in &[-0.7, 0.0, 0.2, 1.0] {
            let want = (1.5f64).sqrt() * u;
            assert!((normalized_legendre(1, 0, u).unwrap() - want).abs() < 1e-15);
        }
        assert!((normalized_legendre(2, 0, 0.5).unwrap() + 0.197_642_353_760_524).abs() < 1e-12);
        // P_2^1 = 3u·sqrt(1−u²), P_3^1 = 1.5(5u²−1)sqrt(1−u²), P_2^2 = 3(1−u²)
        let u: f64 = 0.35;
        let s = (1.0 - u * u).sqrt();
        let n21 = (5.0f64 / 2.0 / 6.0).sqrt();
        let n31 = (7.0f64 / 2.0 * 2.0 / 24.0).sqrt();
        let n22 = (5.0f64 / 2.0 / 24.0).sqrt();
        assert!((normalized_legendre(2, 1, u).unwrap() - n21 * 3.0 * u * s).abs() < 1e-14);
        assert!((normalized_legendre(3, 1, u).unwrap() - n31 * 1.5 * (5.0 * u * u - 1.0) * s).abs() < 1e-14);
        assert!((normalized_legendre(2, 2, u).unwrap() - n22 * 3.0 * s * s).abs() < 1e-14);
        assert!(normalized_legendre(2, 0, 1.2).is_err());
        assert!(normalized_legendre(1, 2, 0.1).is_err());
    }

    #[test]
    fn orthonormality() {
        let (x, w) = gauss_legendre(64);
        for m in 0..=12u32 {
            for l in m.max(0)..=12 {
                for lp in m..=12 {
                    let s: f64 = x
                        .iter()
                        .zip(&w)
                        .map(|(&u, &wt)| {
                            wt * normalized_legendre(l, m, u).unwrap()
                                * normalized_legendre(lp, m, u).unwrap()
                        })
                        .sum();
                    let want = if l == lp { 1.0 } else { 0.0 };
                    assert!((s - want).abs() < 1e-10, "l={l} l'={lp} m={m}: {s}");
                }
            }
        }
    }

    #[test]
    fn delta_pi_values() {
        let (d, p) = delta_pi(1, 0, 0.0).unwrap();
        assert!((d + 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(p, 0.0);
        for l in 1..6 {
            assert_eq!(delta_pi(l, 0, 0.3).unwrap().1, 0.0);
        }
        // m = 1 at the poles is finite
        let (d, p) = delta_pi(1, 1, 1.0).unwrap();
        assert!(d.is_finite() && p.is_finite() && p != 0.0);
    }

    #[test]
    fn delta_matches_finite_difference() {
        let (l, m, u) = (5u32, 2u32, 0.41);
        let h = 1e-6;
        let dp = (normalized_legendre(l, m, u + h).unwrap() - normalized_legendre(l, m, u - h).unwrap()) / (2.0 * h);
        let s = (1.0 - u * u).sqrt();
        let norm = ((l * (l + 1)) as f64).sqrt();
        let (d, p) = delta_pi(l, m, u).unwrap();
        assert!((d - (-s / norm * dp)).abs() < 1e-8);
        assert!((p - (-(m as f64) * normalized_legendre(l, m, u).unwrap() / (norm * s))).abs() < 1e-13);
    }

    #[test]
    fn delta_pi_orthogonality_constant() {
        // ∫ (Δ_l Δ_l' + π_l π_l') du = δ_ll' with constant 1
        let (x, w) = gauss_legendre(64);
        for m in 0..=6u32 {
            for l in m.max(1)..=10 {
                for lp in m.max(1)..=10 {
                    let s: f64 = x
                        .iter()
                        .zip(&w)
                        .map(|(&u, &wt)| {
                            let (d1, p1) = delta_pi(l, m, u).unwrap();
                            let (d2, p2) = delta_pi(lp, m, u).unwrap();
                            wt * (d1 * d2 + p1 * p2)
                        })
                        .sum();
                    let want = if l == lp { 1.0 } else { 0.0 };
                    assert!((s - want).abs() < 1e-10, "l={l} l'={lp} m={m}: {s}");
                }
            }
        }
    }

    #[test]
    fn complex_argument_agrees_on_real_axis() {
        let u = 0.6;
        let s = 0.8;
        for l in 1..8 {
            for m in 0..=l {
                let (d, p) = delta_pi(l, m, u).unwrap();
                let (dc, pc) = delta_pi_complex(l, m, Complex64::new(u, 0.0), Complex64::new(s, 0.0));
                assert!((dc.re - d).abs() < 1e-14 && dc.im == 0.0);
                assert!((pc.re - p).abs() < 1e-14 && pc.im == 0.0);
            }
        }
    }

    #[test]
    fn harmonics_unit_norm_on_sphere() {
        // ∫ |A1|² dΩ = 1 for every mode
        let basis = VswfBasis::new(4).unwrap();
        let (x, w) = gauss_legendre(24);
        let nphi = 32;
        let mut acc = vec![0.0; basis.len()];
        for (&u, &wt) in x.iter().zip(&w) {
            for k in 0..nphi {
                let phi = 2.0 * PI * k as f64 / nphi as f64;
                let h = vector_harmonics(&basis, u.acos(), phi);
                for (a, v) in acc.iter_mut().zip(&h) {
                    *a += wt * 2.0 * PI / nphi as f64 * (v.a1[0].powi(2) + v.a1[1].powi(2));
                }
            }
        }
        for v in acc {
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
    }
}
