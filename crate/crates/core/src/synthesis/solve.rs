use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use log::debug;

use crate::error::{invalid, GsmError, Result};
use crate::CMat;

use super::assembly::Assembly;

/// Strategy for applying M⁻¹.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Solver {
    /// Dense LU of the full system matrix.
    Direct,
    /// Block-wise Neumann series, falling back to `Direct` when it does not
    /// reach `tol` within `max_iter` terms.
    Neumann { tol: f64, max_iter: usize },
}

impl Default for Solver {
    fn default() -> Self {
        Solver::Direct
    }
}

/// Result of a Neumann-series solve.
#[derive(Clone, Debug)]
pub struct NeumannOutcome {
    pub solution: CMat,
    /// Number of series terms added after the right-hand side itself.
    pub iterations: usize,
    /// ‖M·x − rhs‖_F / ‖rhs‖_F.
    pub residual: f64,
    /// Relative increment after each term.
    pub history: Vec<f64>,
}

/// Inverse through partial-pivoting LU, rejecting numerically singular input.
pub(crate) fn checked_inverse(m: &CMat, what: &str) -> Result<CMat> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    let inv = m.partial_piv_lu().inverse();
    let scale = m.norm_l2() * inv.norm_l2();
    if !scale.is_finite() || scale > 1e15 * (n as f64) {
        return Err(GsmError::Singular(format!(
            "{what} is singular or too ill-conditioned to invert (norm product {scale:.3e})"
        )));
    }
    Ok(inv)
}

/// Antenna column block of M⁻¹ through the Schur complement of `M_SS`:
/// `M_L = [1; −M_SS⁻¹·M_SA]·M̃⁻¹` with `M̃ = M_AA − M_AS·M_SS⁻¹·M_SA`.
pub fn schur_left_column(m: &CMat, antenna_dim: usize) -> Result<CMat> {
    let n = m.nrows();
    if m.ncols() != n {
        return invalid("system matrix must be square");
    }
    if antenna_dim > n {
        return invalid(format!("antenna span {antenna_dim} exceeds system dimension {n}"));
    }
    let ns = n - antenna_dim;
    let m_aa = m.submatrix(0, 0, antenna_dim, antenna_dim);
    let m_as = m.submatrix(0, antenna_dim, antenna_dim, ns);
    let m_sa = m.submatrix(antenna_dim, 0, ns, antenna_dim);
    let m_ss = m.submatrix(antenna_dim, antenna_dim, ns, ns).to_owned();

    let (schur, coupling) = if ns == 0 {
        (m_aa.to_owned(), Mat::zeros(0, antenna_dim))
    } else {
        let m_ss_inv = checked_inverse(&m_ss, "M_SS").map_err(|e| match e {
            GsmError::Singular(msg) => GsmError::Singular(format!("{msg}; use a direct inverse of the full M instead")),
            other => other,
        })?;
        let x = &m_ss_inv * m_sa;
        (m_aa - m_as * &x, x)
    };
    let schur_inv = checked_inverse(&schur, "Schur complement of M_SS")?;
    let lower = -(&coupling * &schur_inv);
    Ok(Mat::from_fn(n, antenna_dim, |i, k| {
        if i < antenna_dim {
            schur_inv[(i, k)]
        } else {
            lower[(i - antenna_dim, k)]
        }
    }))
}

/// x ≈ M⁻¹·rhs as the truncated series Σ_k [(Ŝ − 1)·Ĝ]^k·rhs, applied block-wise.
///
/// Stops when the relative increment drops below `tol`; reaching `max_iter`
/// or a growing, non-finite iterate yields [`GsmError::Divergence`].
pub fn neumann_apply(assembly: &Assembly<'_>, rhs: &CMat, tol: f64, max_iter: usize) -> Result<NeumannOutcome> {
    if rhs.nrows() != assembly.dim() {
        return invalid(format!(
            "right-hand side has {} rows, system dimension is {}",
            rhs.nrows(),
            assembly.dim()
        ));
    }
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be positive, got {tol}"));
    }
    let rhs_norm = rhs.norm_l2();
    if rhs_norm == 0.0 {
        return Ok(NeumannOutcome {
            solution: rhs.clone(),
            iterations: 0,
            residual: 0.0,
            history: Vec::new(),
        });
    }
    let mut x = rhs.clone();
    let mut term = rhs.clone();
    let mut history = Vec::new();
    for it in 1..=max_iter {
        term = assembly.apply_coupled(&term);
        x += &term;
        let rel = term.norm_l2() / x.norm_l2();
        history.push(rel);
        debug!("neumann term {it}: relative increment {rel:.3e}");
        if !rel.is_finite() || (it > 3 && rel > 1e3 * history[0].max(1.0)) {
            break;
        }
        if rel < tol {
            let residual = (&x - assembly.apply_coupled(&x) - rhs).norm_l2() / rhs_norm;
            return Ok(NeumannOutcome {
                solution: x,
                iterations: it,
                residual,
                history,
            });
        }
    }
    Err(GsmError::Divergence {
        iterations: history.len(),
        last: history.last().copied().unwrap_or(f64::NAN),
        history,
    })
}
