use faer::Mat;
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::rototranslation::Rotation;
use crate::wavefunctions::VswfBasis;
use crate::CMat;

/// Generalized scattering matrix of one structure or of a whole system.
///
/// With port amplitudes `v` (incident) and `w` (reflected), regular-wave
/// coefficients `a` and outgoing coefficients `b`:
///
/// ```text
/// w = Γ v + R a
/// b = T v + S a        (scattered part f = T v + (S − 1) a)
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct GsMatrix {
    basis: VswfBasis,
    n_ports: usize,
    gamma: CMat,
    r: CMat,
    t: CMat,
    s: CMat,
}

fn check_dims(name: &str, m: &CMat, rows: usize, cols: usize) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return invalid(format!(
            "{name} block must be {rows}x{cols}, got {}x{}",
            m.nrows(),
            m.ncols()
        ));
    }
    Ok(())
}

impl GsMatrix {
    pub fn new(basis: VswfBasis, gamma: CMat, r: CMat, t: CMat, s: CMat) -> Result<Self> {
        let e = gamma.nrows();
        let j = basis.len();
        check_dims("GAMMA", &gamma, e, e)?;
        check_dims("R", &r, e, j)?;
        check_dims("T", &t, j, e)?;
        check_dims("S", &s, j, j)?;
        Ok(Self {
            basis,
            n_ports: e,
            gamma,
            r,
            t,
            s,
        })
    }

    /// Pure scatterer (no ports).
    pub fn scatterer(basis: VswfBasis, s: CMat) -> Result<Self> {
        let j = basis.len();
        Self::new(basis, Mat::zeros(0, 0), Mat::zeros(0, j), Mat::zeros(j, 0), s)
    }

    pub fn basis(&self) -> &VswfBasis {
        &self.basis
    }

    pub fn n_ports(&self) -> usize {
        self.n_ports
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn gamma(&self) -> &CMat {
        &self.gamma
    }

    pub fn r(&self) -> &CMat {
        &self.r
    }

    pub fn t(&self) -> &CMat {
        &self.t
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    /// S − 1, the incident-to-scattered map.
    pub fn s_minus_one(&self) -> CMat {
        let mut m = self.s.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= Complex64::new(1.0, 0.0);
        }
        m
    }

    /// The full block matrix [[Γ, R], [T, S]].
    pub fn full_matrix(&self) -> CMat {
        let e = self.n_ports;
        let j = self.dim();
        Mat::from_fn(e + j, e + j, |i, k| match (i < e, k < e) {
            (true, true) => self.gamma[(i, k)],
            (true, false) => self.r[(i, k - e)],
            (false, true) => self.t[(i - e, k)],
            (false, false) => self.s[(i - e, k - e)],
        })
    }

    /// Zero-pads the matrix into a basis of degree `l_max` ≥ the current one.
    /// Modes the component was never characterised on are left uncoupled.
    pub fn embed(&self, l_max: u32) -> Result<Self> {
        if l_max < self.basis.l_max() {
            return invalid(format!(
                "cannot embed a degree-{} GS-matrix into degree {l_max}",
                self.basis.l_max()
            ));
        }
        if l_max == self.basis.l_max() {
            return Ok(self.clone());
        }
        let basis = VswfBasis::new(l_max)?;
        let (j0, j, e) = (self.dim(), basis.len(), self.n_ports);
        let r = Mat::from_fn(e, j, |i, k| if k < j0 { self.r[(i, k)] } else { Complex64::new(0.0, 0.0) });
        let t = Mat::from_fn(j, e, |i, k| if i < j0 { self.t[(i, k)] } else { Complex64::new(0.0, 0.0) });
        let s = Mat::from_fn(j, j, |i, k| {
            if i < j0 && k < j0 {
                self.s[(i, k)]
            } else if i == k {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(basis, self.gamma.clone(), r, t, s)
    }

    /// (w, f) for port excitation `v` and incident coefficients `a`.
    pub fn apply(&self, v: &[Complex64], a: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        if v.len() != self.n_ports || a.len() != self.dim() {
            return invalid("excitation dimensions do not match the GS-matrix");
        }
        let w = (0..self.n_ports)
            .map(|i| {
                (0..self.n_ports).map(|k| self.gamma[(i, k)] * v[k]).sum::<Complex64>()
                    + (0..self.dim()).map(|k| self.r[(i, k)] * a[k]).sum::<Complex64>()
            })
            .collect();
        let f = (0..self.dim())
            .map(|i| {
                (0..self.n_ports).map(|k| self.t[(i, k)] * v[k]).sum::<Complex64>()
                    + (0..self.dim()).map(|k| self.s[(i, k)] * a[k]).sum::<Complex64>()
                    - a[i]
            })
            .collect();
        Ok((w, f))
    }
}

/// Which physical quantity an expansion vector holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    IncidentA,
    OutgoingB,
    ScatteredF,
    PortInV,
    PortOutW,
}

/// Coefficients over VSWF modes or port modes.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionVector {
    pub kind: ExpansionKind,
    pub coefficients: Vec<Complex64>,
}

impl ExpansionVector {
    /// Checks the length against the basis (wave kinds) or port count (port kinds).
    pub fn new(kind: ExpansionKind, coefficients: Vec<Complex64>, basis: &VswfBasis, n_ports: usize) -> Result<Self> {
        let want = match kind {
            ExpansionKind::PortInV | ExpansionKind::PortOutW => n_ports,
            _ => basis.len(),
        };
        if coefficients.len() != want {
            return invalid(format!("{kind:?} vector needs {want} entries, got {}", coefficients.len()));
        }
        Ok(Self { kind, coefficients })
    }

    pub fn zeros(kind: ExpansionKind, len: usize) -> Self {
        Self {
            kind,
            coefficients: vec![Complex64::new(0.0, 0.0); len],
        }
    }
}

/// GS-matrix of the structure after a rigid rotation Q = R_z(α)R_y(β)R_z(γ):
/// Γ' = Γ, R' = R·𝓓, T' = 𝓓ᵗ·T, S' = 𝓓ᵗ·S·𝓓.
pub fn rotate_gs(gs: &GsMatrix, alpha: f64, beta: f64, gamma: f64) -> GsMatrix {
    if alpha == 0.0 && beta == 0.0 && gamma == 0.0 {
        return gs.clone();
    }
    let rot = Rotation::new(gs.basis.l_max(), alpha, beta, gamma);
    let mut s = rot.congruence(&gs.s_minus_one());
    for i in 0..s.nrows() {
        s[(i, i)] += Complex64::new(1.0, 0.0);
    }
    let r = if gs.n_ports > 0 { rot.apply_right(&gs.r) } else { gs.r.clone() };
    let t = if gs.n_ports > 0 { rot.apply_left_transposed(&gs.t) } else { gs.t.clone() };
    GsMatrix {
        basis: gs.basis.clone(),
        n_ports: gs.n_ports,
        gamma: gs.gamma.clone(),
        r,
        t,
        s,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassivityReport {
    /// Largest singular value of the full block matrix.
    pub max_singular_value: f64,
    /// ‖S̃ᴴS̃ − 1‖_F of the full block matrix S̃.
    pub unitarity_defect: f64,
}

pub fn passivity_report(gs: &GsMatrix) -> PassivityReport {
    let full = gs.full_matrix();
    let n = full.nrows();
    let mut g = full.adjoint() * &full;
    for i in 0..n {
        g[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    let sv = full.singular_values().unwrap_or_default();
    PassivityReport {
        max_singular_value: sv.iter().copied().fold(0.0, f64::max),
        unitarity_defect: g.norm_l2(),
    }
}
