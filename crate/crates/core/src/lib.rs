//! Generalized scattering matrix (GS-matrix) synthesis for systems of
//! antennas and scatterers.
//!
//! Each component is characterised by a precomputed GS-matrix over a basis of
//! real vector spherical wavefunctions. The crate translates and rotates those
//! matrices, couples the components through the outgoing-to-regular addition
//! theorem and assembles the GS-matrix of the whole system.
//!
//! Conventions used throughout:
//!
//! * time dependence `exp(+jωt)`; outgoing waves use `h_l^(2)`;
//! * the field outside a component is
//!   `E = C Σ_n [ 2 a_n v_n(kr) + f_n u_n(kr) ]` with `v_n` regular and
//!   `u_n` outgoing waves and `C = k sqrt(2 η0)`, so that incoming and
//!   outgoing amplitudes are power normalised (`f = (S - 1) a`);
//! * modes are ordered canonically by `(l, τ, m, σ)`.

pub mod components;
pub mod error;
pub mod observables;
pub mod rototranslation;
pub mod synthesis;
pub mod wavefunctions;

pub use error::{GsmError, Result};
pub use num_complex::Complex64;

/// Dense complex matrix used for every operator and GS-matrix block.
pub type CMat = faer::Mat<Complex64>;

/// Free-space wave impedance in ohms.
pub const ETA0: f64 = 376.730313668;
