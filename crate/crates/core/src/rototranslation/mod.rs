//! Rotation and translation operators acting on VSWF expansion coefficients.
//!
//! Translations along an arbitrary vector are built as rotate–translate–rotate:
//! `𝓡(kd) = 𝓓_dᵗ 𝓡^z(kd) 𝓓_d` with `𝓓_d = 𝓓(φ_d, θ_d, 0)`.

mod integral;
mod operator;
mod rotation;
mod translate;
mod ztranslation;

pub use integral::{quadrature_change, translation_z_outgoing_integral};
pub use operator::{ModeOperator, OperatorKind};
pub use rotation::{rotation_matrix, wigner_d_small, Rotation};
pub use translate::{
    kappa_truncation, separability_margin, spherical_components, translate_outgoing,
    translate_regular, TranslationMode, TranslationSpec,
};
pub use ztranslation::{translation_z_outgoing_analytic, translation_z_regular};
