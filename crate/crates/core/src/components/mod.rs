//! Per-structure GS-matrices: data model, analytic generators, rotation and
//! the text file format.

mod antenna;
mod gsmatrix;
mod io;
mod mie;
mod structure;

pub use antenna::canonical_dipole_antenna;
pub use gsmatrix::{passivity_report, rotate_gs, ExpansionKind, ExpansionVector, GsMatrix, PassivityReport};
pub use io::{load_gsm, read_gsm, read_operator, save_gsm, write_gsm, write_operator};
pub use mie::{mie_dielectric_coefficients, mie_dielectric_sphere, mie_pec_coefficients, mie_pec_sphere};
pub use structure::{euler_matrix, Extent, StructureInstance};
