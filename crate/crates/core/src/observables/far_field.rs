use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, GsmError, Result};
use crate::wavefunctions::{vector_harmonics, Polarization, VswfBasis};

use super::plane_wave::field_normalization;

/// Far-field pattern (E_θ, E_φ) with the factor exp(−jkr)/r removed.
///
/// Uses h_l⁽²⁾(x) → j^{l+1}·exp(−jx)/x, giving
/// `F = (C/k)·Σ f_n·(j^{l+1}·A1_n or j^l·A2_n)`.
pub fn far_field(basis: &VswfBasis, f: &[Complex64], k: f64, theta: f64, phi: f64) -> Result<[Complex64; 2]> {
    if f.len() != basis.len() {
        return invalid(format!("expected {} coefficients, got {}", basis.len(), f.len()));
    }
    if !(k > 0.0) {
        return invalid(format!("wavenumber must be positive, got {k}"));
    }
    let harm = vector_harmonics(basis, theta, phi);
    let j = Complex64::new(0.0, 1.0);
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for ((n, h), c) in basis.iter().zip(&harm).zip(f) {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let jl = j.powu(n.l);
        let (w, vec) = match n.tau {
            Polarization::Te => (jl * j * c, h.a1),
            Polarization::Tm => (jl * c, h.a2),
        };
        out[0] += w * vec[0];
        out[1] += w * vec[1];
    }
    let scale = field_normalization(k) / k;
    Ok(out.map(|x| x * scale))
}

/// Principal-plane cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutPlane {
    Xoz,
    Yoz,
    Xoy,
}

impl CutPlane {
    /// (θ, φ) of cut angle ψ ∈ [−π, π]. Vertical cuts run through +z at ψ = 0
    /// with ψ > 0 on the positive-axis half-plane.
    pub fn direction(self, psi: f64) -> (f64, f64) {
        let (half, other) = match self {
            CutPlane::Xoz => (0.0, PI),
            CutPlane::Yoz => (PI / 2.0, 3.0 * PI / 2.0),
            CutPlane::Xoy => return (PI / 2.0, psi),
        };
        if psi >= 0.0 {
            (psi, half)
        } else {
            (-psi, other)
        }
    }
}

impl fmt::Display for CutPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutPlane::Xoz => "xoz",
            CutPlane::Yoz => "yoz",
            CutPlane::Xoy => "xoy",
        })
    }
}

impl FromStr for CutPlane {
    type Err = GsmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xoz" | "xz" => Ok(CutPlane::Xoz),
            "yoz" | "yz" => Ok(CutPlane::Yoz),
            "xoy" | "xy" => Ok(CutPlane::Xoy),
            other => invalid(format!("unknown cut plane '{other}' (expected xoz, yoz or xoy)")),
        }
    }
}

/// Far field sampled along a full cut.
#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldCut {
    pub plane: CutPlane,
    /// Strictly increasing cut angles ψ in radians, from −π to π.
    pub angles: Vec<f64>,
    /// (E_θ, E_φ) at each angle.
    pub values: Vec<[Complex64; 2]>,
}

impl FarFieldCut {
    /// Cut angles −180°, −180° + step, …, 180°.
    pub fn angles_for_step(step_deg: f64) -> Result<Vec<f64>> {
        if !(step_deg > 0.0) || step_deg > 180.0 {
            return invalid(format!("cut step must be in (0, 180] degrees, got {step_deg}"));
        }
        let n = 360.0 / step_deg;
        if (n - n.round()).abs() > 1e-9 {
            return invalid(format!("cut step {step_deg} does not divide 360 degrees"));
        }
        let n = n.round() as usize;
        Ok((0..=n).map(|i| (-180.0 + i as f64 * step_deg).to_radians()).collect())
    }

    pub fn angles_deg(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.to_degrees()).collect()
    }
}

/// Far field of outgoing coefficients `f` along a cut with `step_deg` spacing.
pub fn far_field_cut(basis: &VswfBasis, f: &[Complex64], k: f64, plane: CutPlane, step_deg: f64) -> Result<FarFieldCut> {
    let angles = FarFieldCut::angles_for_step(step_deg)?;
    let values = angles
        .par_iter()
        .map(|&psi| {
            let (theta, phi) = plane.direction(psi);
            far_field(basis, f, k, theta, phi)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FarFieldCut { plane, angles, values })
}
