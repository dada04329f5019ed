use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;

use super::operator::{ModeOperator, OperatorKind};
use crate::error::{invalid, Result};
use crate::wavefunctions::{delta_pi_seq, gauss_legendre, Polarization, VswfBasis};
use crate::CMat;

struct Contour {
    u: Vec<Complex64>,
    s: Vec<Complex64>,
    du: Vec<Complex64>,
}

/// Piecewise contour u_m = −j·sqrt(κ²−1) → 0 → 1 with `n_quad` Gauss–Legendre
/// nodes per segment. On the imaginary segment sqrt(1−u²) = sqrt(1+s²) > 0.
fn contour(kappa: f64, n_quad: usize) -> Contour {
    let (x, w) = gauss_legendre(n_quad);
    let smax = (kappa * kappa - 1.0).sqrt();
    let mut c = Contour {
        u: Vec::with_capacity(2 * n_quad),
        s: Vec::with_capacity(2 * n_quad),
        du: Vec::with_capacity(2 * n_quad),
    };
    for (&xi, &wi) in x.iter().zip(&w) {
        let s = 0.5 * (xi + 1.0) * smax;
        c.u.push(Complex64::new(0.0, -s));
        c.s.push(Complex64::new((1.0 + s * s).sqrt(), 0.0));
        // traversed from s = smax down to 0 with du = −j ds
        c.du.push(Complex64::new(0.0, 0.5 * wi * smax));
    }
    for (&xi, &wi) in x.iter().zip(&w) {
        let u = 0.5 * (xi + 1.0);
        c.u.push(Complex64::new(u, 0.0));
        c.s.push(Complex64::new((1.0 - u * u).sqrt(), 0.0));
        c.du.push(Complex64::new(0.5 * wi, 0.0));
    }
    c
}

/// I^i_{τσ,τ'σ'} of the azimuthal integral.
fn azimuthal_weight(i: u32, tau: u32, sigma: u32, taup: u32, sigmap: u32, m: u32) -> f64 {
    let d0 = if m == 0 { 1.0 } else { 0.0 };
    let sgn = if (i + tau + sigma) % 2 == 0 { 1.0 } else { -1.0 };
    if tau == taup && sigma == sigmap {
        PI * (1.0 + sgn * d0)
    } else if tau != taup && sigma != sigmap {
        PI * (sgn + d0)
    } else {
        0.0
    }
}

fn jpow(l: i64) -> Complex64 {
    match l.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Outgoing-to-regular z-translation 𝓨^z(kd) from its single-integral
/// plane-wave representation.
///
/// The spectral integral over u = cos β runs on the piecewise contour
/// u_m → 0 → 1 with u_m = −j·sqrt(κ²−1); κ > 1 truncates the evanescent
/// spectrum. Unlike the analytic form it remains valid whenever the two
/// structures are separable by a plane normal to the translation axis.
pub fn translation_z_outgoing_integral(basis: &VswfBasis, kd: f64, kappa: f64, n_quad: usize) -> Result<ModeOperator> {
    if !(kd > 0.0) || !kd.is_finite() {
        return invalid(format!("outgoing translation requires kd > 0, got {kd}"));
    }
    if !(kappa > 1.0) || !kappa.is_finite() {
        return invalid(format!("kappa must exceed 1, got {kappa}"));
    }
    if n_quad < 1 {
        return invalid("n_quad must be at least 1");
    }
    let c = contour(kappa, n_quad);
    let weight: Vec<Complex64> = c
        .u
        .iter()
        .zip(&c.du)
        .map(|(&u, &du)| (Complex64::new(0.0, -kd) * u).exp() * du)
        .collect();

    let n = basis.len();
    let l_max = basis.l_max();
    let modes = basis.modes();
    let mut out = Mat::<Complex64>::zeros(n, n);
    let j = Complex64::new(0.0, 1.0);

    for m in 0..=l_max {
        let lmin = m.max(1);
        let nl = (l_max + 1) as usize;
        // Δ and π of every degree at every node
        let dp: Vec<Vec<(Complex64, Complex64)>> = c
            .u
            .iter()
            .zip(&c.s)
            .map(|(&u, &s)| delta_pi_seq(l_max, m, u, s))
            .collect();
        // moments ∫ f_l e^{−jkdu} g_l' du for f, g ∈ {Δ, π}
        let mut mom = vec![[Complex64::new(0.0, 0.0); 4]; nl * nl];
        for l in lmin..=l_max {
            for lp in lmin..=l_max {
                let mut acc = [Complex64::new(0.0, 0.0); 4];
                for (node, w) in dp.iter().zip(&weight) {
                    let (d1, p1) = node[l as usize];
                    let (d2, p2) = node[lp as usize];
                    acc[0] += d1 * d2 * w;
                    acc[1] += d1 * p2 * w;
                    acc[2] += p1 * d2 * w;
                    acc[3] += p1 * p2 * w;
                }
                mom[l as usize * nl + lp as usize] = acc;
            }
        }
        let eps = if m == 0 { 1.0 } else { 2.0 };
        let pref = 2.0 * eps / (2.0 * PI);
        let idx: Vec<usize> = (0..n).filter(|&i| modes[i].m == m).collect();
        for &a in &idx {
            let na = modes[a];
            for &b in &idx {
                let nb = modes[b];
                let mo = mom[na.l as usize * nl + nb.l as usize];
                let mut total = Complex64::new(0.0, 0.0);
                for i in [Polarization::Te, Polarization::Tm] {
                    let iw = azimuthal_weight(
                        i.number(),
                        na.tau.number(),
                        na.sigma.number(),
                        nb.tau.number(),
                        nb.sigma.number(),
                        m,
                    );
                    if iw == 0.0 {
                        continue;
                    }
                    // B† = −(−j)^{−l}·{−jΔ | −π}, B = −j^{−l'}·{jΔ | −π}
                    let (cf, f_is_delta) = if na.tau == i { (-j, true) } else { (Complex64::new(-1.0, 0.0), false) };
                    let (cg, g_is_delta) = if nb.tau == i { (j, true) } else { (Complex64::new(-1.0, 0.0), false) };
                    let moment = match (f_is_delta, g_is_delta) {
                        (true, true) => mo[0],
                        (true, false) => mo[1],
                        (false, true) => mo[2],
                        (false, false) => mo[3],
                    };
                    // (−j)^{−l}·j^{−l'} = j^{l−l'}
                    let phase = jpow(na.l as i64 - nb.l as i64);
                    total += iw * cf * cg * phase * moment;
                }
                out[(a, b)] = total * pref;
            }
        }
    }
    ModeOperator::new(basis.clone(), OperatorKind::OutgoingTranslation, out)
}

/// Largest entry change, relative to the largest entry, when the number of
/// quadrature nodes per segment is doubled.
pub fn quadrature_change(basis: &VswfBasis, kd: f64, kappa: f64, n_quad: usize) -> Result<f64> {
    let a = translation_z_outgoing_integral(basis, kd, kappa, n_quad)?;
    let b = translation_z_outgoing_integral(basis, kd, kappa, 2 * n_quad)?;
    Ok(max_abs(&(a.entries() - b.entries())) / max_abs(b.entries()).max(f64::MIN_POSITIVE))
}

pub(crate) fn max_abs(a: &CMat) -> f64 {
    let mut m = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            m = m.max(a[(i, j)].norm());
        }
    }
    m
}
