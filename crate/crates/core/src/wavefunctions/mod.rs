//! Special functions and vector spherical wavefunction (VSWF) index bookkeeping.

mod bessel;
mod index;
mod jacobi;
mod legendre;
mod quadrature;
mod wigner;

#[cfg(test)]
pub(crate) mod field;

pub use bessel::{
    riccati_bessel_log_derivative, spherical_bessel_j, spherical_bessel_j_seq, spherical_bessel_y,
    spherical_bessel_y_seq, spherical_hankel2, spherical_hankel2_seq,
};
pub use index::{
    canonical_basis, index_count, truncation_degree, Parity, Polarization, VswfBasis, VswfIndex,
};
pub use jacobi::jacobi_polynomial;
pub use legendre::{
    delta_pi, delta_pi_complex, delta_pi_seq, normalized_legendre, vector_harmonics,
    VectorHarmonics,
};
pub use quadrature::gauss_legendre;
pub use wigner::{wigner3j, wigner3j_family};
