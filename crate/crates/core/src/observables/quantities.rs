use std::f64::consts::PI;

use num_complex::Complex64;

use crate::components::GsMatrix;
use crate::error::{invalid, Result};
use crate::synthesis::{global_truncation, Assembly, Scene, Solver};
use crate::wavefunctions::VswfBasis;
use crate::ETA0;

use super::far_field::{far_field_cut, CutPlane, FarFieldCut};
use super::plane_wave::{plane_wave_coefficients, PlaneWaveSpec};

fn global_basis(scene: &Scene, global_l_max: Option<u32>) -> Result<VswfBasis> {
    let l = match global_l_max {
        Some(l) => l,
        None => global_truncation(scene)?,
    };
    VswfBasis::new(l)
}

/// Bistatic RCS along a cut.
#[derive(Clone, Debug)]
pub struct RcsCurve {
    pub cut: FarFieldCut,
    /// σ in m² (scene lengths in metres).
    pub sigma: Vec<f64>,
}

impl RcsCurve {
    pub fn sigma_dbsm(&self) -> Vec<f64> {
        self.sigma.iter().map(|s| 10.0 * s.max(1e-300).log10()).collect()
    }
}

/// σ(θ, φ) = 4π·|F|²/|E₀|² of the scene under plane-wave illumination with
/// all ports terminated (v̂ = 0).
pub fn bistatic_rcs(
    scene: &Scene,
    spec: &PlaneWaveSpec,
    plane: CutPlane,
    step_deg: f64,
    solver: Solver,
    global_l_max: Option<u32>,
) -> Result<RcsCurve> {
    let e0 = spec.amplitude().norm();
    if e0 == 0.0 {
        return invalid("RCS needs a nonzero incident amplitude");
    }
    let basis = global_basis(scene, global_l_max)?;
    let a = plane_wave_coefficients(&basis, scene.k(), spec)?;
    let v = vec![Complex64::new(0.0, 0.0); scene.n_ports()];
    let resp = Assembly::new(scene)?.response(&v, &a.coefficients, &basis, solver)?;
    let cut = far_field_cut(&basis, &resp.f_global, scene.k(), plane, step_deg)?;
    let sigma = cut
        .values
        .iter()
        .map(|e| 4.0 * PI * (e[0].norm_sqr() + e[1].norm_sqr()) / (e0 * e0))
        .collect();
    Ok(RcsCurve { cut, sigma })
}

/// Gain along a cut for a given port excitation.
#[derive(Clone, Debug)]
pub struct GainPattern {
    pub cut: FarFieldCut,
    /// Linear gain 4πU/P_acc.
    pub gain: Vec<f64>,
    /// P_acc = Σ|v|² − Σ|w|².
    pub accepted_power: f64,
    /// Σ|f|² of the global scattered coefficients.
    pub radiated_power: f64,
}

impl GainPattern {
    pub fn gain_dbi(&self) -> Vec<f64> {
        self.gain.iter().map(|g| 10.0 * g.max(1e-300).log10()).collect()
    }

    /// Phase in degrees of the far-field component that dominates the cut.
    pub fn phase_deg(&self) -> Vec<f64> {
        let power = |c: usize| self.cut.values.iter().map(|e| e[c].norm_sqr()).sum::<f64>();
        let c = if power(0) >= power(1) { 0 } else { 1 };
        self.cut.values.iter().map(|e| e[c].arg().to_degrees()).collect()
    }
}

/// Gain pattern G = 4π·U/P_acc with U = |F|²/(2η₀), no incident field.
pub fn gain_pattern(
    scene: &Scene,
    v: &[Complex64],
    plane: CutPlane,
    step_deg: f64,
    solver: Solver,
    global_l_max: Option<u32>,
) -> Result<GainPattern> {
    if scene.n_ports() == 0 {
        return invalid("gain pattern needs at least one antenna port");
    }
    let basis = global_basis(scene, global_l_max)?;
    let a = vec![Complex64::new(0.0, 0.0); basis.len()];
    let resp = Assembly::new(scene)?.response(v, &a, &basis, solver)?;
    let incident: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let accepted = incident - resp.w.iter().map(|x| x.norm_sqr()).sum::<f64>();
    if !(accepted > 1e-12 * incident.max(f64::MIN_POSITIVE)) {
        return invalid(format!("accepted power is zero or negative ({accepted:.3e} W)"));
    }
    let cut = far_field_cut(&basis, &resp.f_global, scene.k(), plane, step_deg)?;
    let gain = cut
        .values
        .iter()
        .map(|e| 4.0 * PI * (e[0].norm_sqr() + e[1].norm_sqr()) / (2.0 * ETA0) / accepted)
        .collect();
    Ok(GainPattern {
        cut,
        gain,
        accepted_power: accepted,
        radiated_power: resp.f_global.iter().map(|x| x.norm_sqr()).sum(),
    })
}

/// One port-to-port scattering parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PortParameter {
    pub value: Complex64,
    pub db: f64,
    pub phase_deg: f64,
}

impl From<Complex64> for PortParameter {
    fn from(value: Complex64) -> Self {
        Self {
            value,
            db: 20.0 * value.norm().max(1e-300).log10(),
            phase_deg: value.arg().to_degrees(),
        }
    }
}

/// Γ of a system GS-matrix as magnitudes in dB and phases in degrees.
pub fn port_sparams(gs: &GsMatrix) -> Vec<Vec<PortParameter>> {
    let g = gs.gamma();
    (0..gs.n_ports())
        .map(|i| (0..gs.n_ports()).map(|k| g[(i, k)].into()).collect())
        .collect()
}
