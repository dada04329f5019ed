//! Minimal VSWF field evaluator used only by tests.

use num_complex::Complex64;

use super::{
    spherical_bessel_j_seq, spherical_hankel2_seq, vector_harmonics, Polarization, VswfBasis,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radial {
    Regular,
    Outgoing,
}

/// Cartesian unit vectors (r̂, θ̂, φ̂) at (θ, φ).
pub fn unit_vectors(theta: f64, phi: f64) -> [[f64; 3]; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [
        [st * cp, st * sp, ct],
        [ct * cp, ct * sp, -st],
        [-sp, cp, 0.0],
    ]
}

pub fn to_spherical(r: [f64; 3]) -> (f64, f64, f64) {
    let rr = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let theta = (r[2] / rr).clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    (rr, theta, phi)
}

/// Cartesian field of every basis wave at point `r` (not at the origin).
pub fn waves(basis: &VswfBasis, k: f64, r: [f64; 3], radial: Radial) -> Vec<[Complex64; 3]> {
    let (rr, theta, phi) = to_spherical(r);
    let x = k * rr;
    let l_max = basis.l_max();
    let z: Vec<Complex64> = match radial {
        Radial::Regular => spherical_bessel_j_seq(l_max, x)
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect(),
        Radial::Outgoing => spherical_hankel2_seq(l_max, x).expect("x > 0"),
    };
    let [rh, th, ph] = unit_vectors(theta, phi);
    let harm = vector_harmonics(basis, theta, phi);
    basis
        .iter()
        .zip(&harm)
        .map(|(n, h)| {
            let l = n.l as usize;
            let mut e = [Complex64::new(0.0, 0.0); 3];
            match n.tau {
                Polarization::Te => {
                    for c in 0..3 {
                        e[c] = z[l] * (h.a1[0] * th[c] + h.a1[1] * ph[c]);
                    }
                }
                Polarization::Tm => {
                    // (x z_l)'/x = z_{l−1} − l z_l / x
                    let dz = z[l - 1] - z[l] * (l as f64 / x);
                    let rad = z[l] * (((l * (l + 1)) as f64).sqrt() / x);
                    for c in 0..3 {
                        e[c] = dz * (h.a2[0] * th[c] + h.a2[1] * ph[c]) + rad * h.y * rh[c];
                    }
                }
            }
            e
        })
        .collect()
}

/// Σ c_n · wave_n(r).
pub fn field(basis: &VswfBasis, k: f64, coeffs: &[Complex64], r: [f64; 3], radial: Radial) -> [Complex64; 3] {
    let w = waves(basis, k, r, radial);
    let mut e = [Complex64::new(0.0, 0.0); 3];
    for (c, v) in coeffs.iter().zip(&w) {
        for i in 0..3 {
            e[i] += c * v[i];
        }
    }
    e
}

pub fn norm3(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
