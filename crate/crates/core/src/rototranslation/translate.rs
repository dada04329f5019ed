use std::f64::consts::PI;

use log::warn;

use super::integral::translation_z_outgoing_integral;
use super::operator::{ModeOperator, OperatorKind};
use super::rotation::Rotation;
use super::ztranslation::{translation_z_outgoing_analytic, translation_z_regular};
use crate::error::{invalid, Result};
use crate::wavefunctions::VswfBasis;

/// How the outgoing-to-regular translation is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TranslationMode {
    /// Hankel-function addition theorem; needs non-overlapping circumscribing spheres.
    Analytic,
    /// Single-integral spectral form; needs plane separability only.
    Integral { kappa: f64, n_quad: usize },
}

/// Translation request: wavenumber, displacement and evaluation mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationSpec {
    pub k: f64,
    pub d_vec: [f64; 3],
    pub mode: TranslationMode,
}

impl TranslationSpec {
    pub fn new(k: f64, d_vec: [f64; 3], mode: TranslationMode) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return invalid(format!("wavenumber must be positive, got {k}"));
        }
        if d_vec.iter().any(|v| !v.is_finite()) {
            return invalid("displacement must be finite");
        }
        if let TranslationMode::Integral { kappa, n_quad } = mode {
            if !(kappa > 1.0) {
                return invalid(format!("kappa must exceed 1, got {kappa}"));
            }
            if n_quad < 1 {
                return invalid("n_quad must be at least 1");
            }
        }
        Ok(Self { k, d_vec, mode })
    }

    /// (d, θ_d, φ_d)
    pub fn spherical(&self) -> (f64, f64, f64) {
        spherical_components(self.d_vec)
    }

    pub fn outgoing(&self, basis: &VswfBasis) -> Result<ModeOperator> {
        translate_outgoing(basis, self.k, self.d_vec, self.mode)
    }

    pub fn regular(&self, basis: &VswfBasis) -> Result<ModeOperator> {
        translate_regular(basis, self.k, self.d_vec)
    }
}

/// Spherical form (d, θ, φ) of a vector with θ ∈ [0, π] and φ ∈ [0, 2π).
pub fn spherical_components(v: [f64; 3]) -> (f64, f64, f64) {
    let d = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if d == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let theta = (v[2] / d).clamp(-1.0, 1.0).acos();
    let mut phi = v[1].atan2(v[0]);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    (d, theta, phi)
}

fn rotate_axis(op: ModeOperator, theta: f64, phi: f64, scale: f64) -> Result<ModeOperator> {
    let basis = op.basis().clone();
    let kind = op.kind();
    let mut entries = op.into_entries();
    if theta != 0.0 || phi != 0.0 {
        let rot = Rotation::new(basis.l_max(), phi, theta, 0.0);
        entries = rot.congruence(&entries);
    }
    if scale != 1.0 {
        entries = entries * faer::Scale(num_complex::Complex64::new(scale, 0.0));
    }
    ModeOperator::new(basis, kind, entries)
}

/// Regular-to-regular translation 𝓡(k·d) = 𝓓_dᵗ·𝓡^z(kd)·𝓓_d.
///
/// Satisfies v_n(r + d) = Σ_n' 𝓡_nn' v_n'(r): a regular field with
/// coefficients `a` about the origin has coefficients 𝓡ᵗ·a about the point d.
pub fn translate_regular(basis: &VswfBasis, k: f64, d_vec: [f64; 3]) -> Result<ModeOperator> {
    if !(k >= 0.0) || !k.is_finite() {
        return invalid(format!("wavenumber must be non-negative, got {k}"));
    }
    let (d, theta, phi) = spherical_components(d_vec);
    if d == 0.0 {
        return Ok(ModeOperator::identity(basis.clone(), OperatorKind::RegularTranslation));
    }
    rotate_axis(translation_z_regular(basis, k * d)?, theta, phi, 1.0)
}

/// Outgoing-to-regular translation 𝓖(k·d) = ½·𝓓_dᵗ·𝓨^z(kd)·𝓓_d.
///
/// Satisfies u_n(r + d) = 2 Σ_n' 𝓖_nn' v_n'(r) for |r| small enough.
pub fn translate_outgoing(basis: &VswfBasis, k: f64, d_vec: [f64; 3], mode: TranslationMode) -> Result<ModeOperator> {
    if !(k > 0.0) || !k.is_finite() {
        return invalid(format!("wavenumber must be positive, got {k}"));
    }
    let (d, theta, phi) = spherical_components(d_vec);
    if d == 0.0 {
        return invalid("outgoing translation requires a nonzero displacement");
    }
    let yz = match mode {
        TranslationMode::Analytic => translation_z_outgoing_analytic(basis, k * d)?,
        TranslationMode::Integral { kappa, n_quad } => translation_z_outgoing_integral(basis, k * d, kappa, n_quad)?,
    };
    rotate_axis(yz, theta, phi, 0.5)
}

/// Empirical truncation parameter κ̃_m = (0.38·L + 1)/kR + 0.03·kR.
///
/// The fit is stated for 0.5 ≤ kR ≤ 10 and L ≤ 20; outside that range the
/// value is extrapolated with a warning.
pub fn kappa_truncation(l_max: u32, kr_min: f64) -> Result<f64> {
    if !(kr_min > 0.0) || !kr_min.is_finite() {
        return invalid(format!("kR_min must be positive, got {kr_min}"));
    }
    if !(0.5..=10.0).contains(&kr_min) || l_max > 20 {
        warn!("kappa fit extrapolated outside its range (l_max = {l_max}, kR_min = {kr_min})");
    }
    Ok((0.38 * l_max as f64 + 1.0) / kr_min + 0.03 * kr_min)
}

/// Gap between the two structures along the line joining their origins.
///
/// `extent_a` and `extent_b` are each structure's projection bounds relative
/// to its own origin onto the unit vector pointing from a towards b; `d` is
/// the distance between the origins. A positive result means a separating
/// plane normal to that line exists.
pub fn separability_margin(extent_a: (f64, f64), extent_b: (f64, f64), d: f64) -> f64 {
    d + extent_b.0 - extent_a.1
}
