use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Spherical Bessel function j_l(x).
pub fn spherical_bessel_j(l: u32, x: f64) -> f64 {
    spherical_bessel_j_seq(l, x)[l as usize]
}

/// j_0(x), …, j_{l_max}(x) by Miller's downward recurrence.
///
/// Negative arguments use the parity relation j_l(−x) = (−1)^l j_l(x).
pub fn spherical_bessel_j_seq(l_max: u32, x: f64) -> Vec<f64> {
    let n_out = l_max as usize + 1;
    if x < 0.0 {
        let mut v = spherical_bessel_j_seq(l_max, -x);
        for (l, val) in v.iter_mut().enumerate() {
            if l % 2 == 1 {
                *val = -*val;
            }
        }
        return v;
    }
    if x == 0.0 {
        let mut v = vec![0.0; n_out];
        v[0] = 1.0;
        return v;
    }
    let (j0, j1) = low_order_j(x);
    if l_max == 0 {
        return vec![j0];
    }

    let start = l_max.max(x.ceil() as u32) as usize + 20 + (4.0 * x.sqrt()).ceil() as usize;
    let mut f = vec![0.0; start + 2];
    f[start] = 1e-30;
    for l in (1..=start).rev() {
        f[l - 1] = (2 * l + 1) as f64 / x * f[l] - f[l + 1];
        if f[l - 1].abs() > 1e250 {
            for v in &mut f[l - 1..=start] {
                *v *= 1e-250;
            }
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / f[0] } else { j1 / f[1] };
    f.truncate(n_out);
    for v in &mut f {
        *v *= scale;
    }
    f
}

fn low_order_j(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = if x < 0.1 {
        // series avoids the cancellation in (sin x / x − cos x) / x
        let x2 = x * x;
        x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)))
    } else {
        (s / x - c) / x
    };
    (j0, j1)
}

/// Spherical Neumann function y_l(x), x > 0.
pub fn spherical_bessel_y(l: u32, x: f64) -> Result<f64> {
    Ok(spherical_bessel_y_seq(l, x)?[l as usize])
}

/// y_0(x), …, y_{l_max}(x) by upward recurrence.
pub fn spherical_bessel_y_seq(l_max: u32, x: f64) -> Result<Vec<f64>> {
    if !(x > 0.0) {
        return invalid(format!("spherical Neumann function requires x > 0, got {x}"));
    }
    let (s, c) = x.sin_cos();
    let mut y = Vec::with_capacity(l_max as usize + 1);
    y.push(-c / x);
    if l_max >= 1 {
        y.push(-c / (x * x) - s / x);
    }
    for l in 1..l_max as usize {
        let next = (2 * l + 1) as f64 / x * y[l] - y[l - 1];
        y.push(next);
    }
    Ok(y)
}

/// Outgoing spherical Hankel function h_l^(2)(x) = j_l(x) − i·y_l(x).
pub fn spherical_hankel2(l: u32, x: f64) -> Result<Complex64> {
    Ok(spherical_hankel2_seq(l, x)?[l as usize])
}

pub fn spherical_hankel2_seq(l_max: u32, x: f64) -> Result<Vec<Complex64>> {
    let y = spherical_bessel_y_seq(l_max, x)?;
    let j = spherical_bessel_j_seq(l_max, x);
    Ok(j.iter().zip(&y).map(|(&a, &b)| Complex64::new(a, -b)).collect())
}

/// Logarithmic derivative ψ_l'(z)/ψ_l(z) of the Riccati–Bessel function
/// ψ_l(z) = z·j_l(z), for l = 0..=l_max, by downward recurrence.
pub fn riccati_bessel_log_derivative(l_max: u32, z: Complex64) -> Vec<Complex64> {
    let start = (l_max as f64).max(z.norm()) as usize + 40 + (4.0 * z.norm().sqrt()) as usize;
    let mut d = vec![Complex64::new(0.0, 0.0); start + 1];
    for l in (1..=start).rev() {
        let ratio = l as f64 / z;
        d[l - 1] = ratio - 1.0 / (d[l] + ratio);
    }
    d.truncate(l_max as usize + 1);
    d
}
