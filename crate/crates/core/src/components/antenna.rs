use faer::Mat;
use num_complex::Complex64;

use super::gsmatrix::GsMatrix;
use crate::error::{invalid, Result};
use crate::wavefunctions::{VswfBasis, VswfIndex};

/// Matched, lossless, single-port minimum-scattering antenna coupled to one
/// spherical mode (by default the electric dipole (τ=2, even, m=0, l=1)).
///
/// Γ = 0, T and R carry e^{j·phase} on `mode`, S is the identity except
/// S_mode,mode = 0; the full block matrix is unitary.
pub fn canonical_dipole_antenna(basis: &VswfBasis, mode: Option<VswfIndex>, phase: f64) -> Result<GsMatrix> {
    let mode = mode.unwrap_or_else(VswfIndex::dipole);
    let Some(p) = basis.position(&mode) else {
        return invalid(format!("mode {mode} is not part of the degree-{} basis", basis.l_max()));
    };
    let j = basis.len();
    let c = Complex64::from_polar(1.0, phase);
    let zero = Complex64::new(0.0, 0.0);
    let gamma = Mat::zeros(1, 1);
    let r = Mat::from_fn(1, j, |_, k| if k == p { c } else { zero });
    let t = Mat::from_fn(j, 1, |i, _| if i == p { c } else { zero });
    let s = Mat::from_fn(j, j, |i, k| if i == k && i != p { Complex64::new(1.0, 0.0) } else { zero });
    GsMatrix::new(basis.clone(), gamma, r, t, s)
}
