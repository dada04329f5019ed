//! Assembly of the stacked multi-structure system and the system GS-matrix.
//!
//! Stacked quantities (hatted in the usual notation) concatenate per-structure
//! blocks in scene order, antennas first. With `Ĝ` the pairwise coupling
//! operator and `M = 1 − (Ŝ − 1)·Ĝ`, the local system blocks are
//!
//! ```text
//! Γ_G     = Γ̂ + R̂·Ĝ^A·M_L·T̂
//! R_G     = [R̂ 0] + R̂·Ĝ^A·M⁻¹·(Ŝ − 1)
//! T_G     = M_L·T̂
//! S_G − 1 = M⁻¹·(Ŝ − 1)
//! ```
//!
//! where `M_L` is the antenna column block of `M⁻¹`, obtained from the Schur
//! complement of `M_SS`.

mod assembly;
mod scene;
mod solve;

pub use assembly::{
    coupling_operator, decompose_local, global_truncation, globalize, synthesize_local, system_matrix,
    system_response, Assembly, LocalDecomposition, Response, SystemBlocks,
};
pub use scene::{QuadratureSettings, Scene, TranslationPolicy};
pub use solve::{neumann_apply, schur_left_column, NeumannOutcome, Solver};
