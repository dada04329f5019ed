//! Physical quantities from expansion coefficients: plane-wave excitation,
//! far fields, bistatic RCS, gain and port S-parameters.
//!
//! Fields carry the unit-power normalisation `E = C·Σ (2a·v + f·u)` with
//! `C = k·√(2η₀)`, so Σ|f|² is the radiated power in watts.

mod far_field;
mod output;
mod plane_wave;
mod quantities;

pub use far_field::{far_field, far_field_cut, CutPlane, FarFieldCut};
pub use output::{format_sig9, port_sparams_table, write_gain_csv, write_rcs_csv};
pub use plane_wave::{field_normalization, plane_wave_coefficients, PlaneWaveSpec};
pub use quantities::{bistatic_rcs, gain_pattern, port_sparams, GainPattern, PortParameter, RcsCurve};
