use num_complex::Complex64;

use crate::components::{ExpansionKind, ExpansionVector};
use crate::error::{invalid, Result};
use crate::rototranslation::spherical_components;
use crate::wavefunctions::{vector_harmonics, Polarization, VswfBasis};
use crate::ETA0;

/// Field scale `C = k·√(2η₀)` of the unit-power normalisation.
pub fn field_normalization(k: f64) -> f64 {
    k * (2.0 * ETA0).sqrt()
}

/// Plane wave `E₀·p̂·exp(−j k k̂·r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWaveSpec {
    direction: [f64; 3],
    polarization: [Complex64; 3],
    amplitude: Complex64,
}

impl PlaneWaveSpec {
    /// Validates a unit propagation direction and a unit polarization
    /// orthogonal to it (both to 1e−9).
    pub fn new(direction: [f64; 3], polarization: [Complex64; 3], amplitude: Complex64) -> Result<Self> {
        let dn = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (dn - 1.0).abs() > 1e-9 {
            return invalid(format!("propagation direction must be a unit vector, |k̂| = {dn}"));
        }
        let pn = polarization.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if (pn - 1.0).abs() > 1e-9 {
            return invalid(format!("polarization must be a unit vector, |p̂| = {pn}"));
        }
        let dot: Complex64 = polarization.iter().zip(&direction).map(|(p, d)| p * d).sum();
        if dot.norm() > 1e-9 {
            return invalid(format!("polarization is not orthogonal to the direction (p̂·k̂ = {dot})"));
        }
        if !amplitude.is_finite() {
            return invalid("amplitude must be finite");
        }
        Ok(Self {
            direction,
            polarization,
            amplitude,
        })
    }

    /// Real-vector convenience constructor that normalises both vectors.
    pub fn linear(direction: [f64; 3], polarization: [f64; 3], amplitude: f64) -> Result<Self> {
        let unit = |v: [f64; 3]| -> Result<[f64; 3]> {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(n > 0.0) || !n.is_finite() {
                return invalid("direction and polarization must be nonzero");
            }
            Ok([v[0] / n, v[1] / n, v[2] / n])
        };
        let d = unit(direction)?;
        let p = unit(polarization)?;
        Self::new(d, p.map(|x| Complex64::new(x, 0.0)), Complex64::new(amplitude, 0.0))
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }

    pub fn polarization(&self) -> [Complex64; 3] {
        self.polarization
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    /// Scaled copy with amplitude `amplitude`.
    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }
}

/// Incident regular-wave coefficients `a` of a plane wave.
pub fn plane_wave_coefficients(basis: &VswfBasis, k: f64, spec: &PlaneWaveSpec) -> Result<ExpansionVector> {
    if !(k > 0.0) || !k.is_finite() {
        return invalid(format!("wavenumber must be positive, got {k}"));
    }
    let (_, theta, phi) = spherical_components(spec.direction);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let th = [ct * cp, ct * sp, -st];
    let ph = [-sp, cp, 0.0];
    let p = spec.polarization;
    let p_th: Complex64 = (0..3).map(|i| p[i] * th[i]).sum();
    let p_ph: Complex64 = (0..3).map(|i| p[i] * ph[i]).sum();
    let harm = vector_harmonics(basis, theta, phi);
    let scale = spec.amplitude * (4.0 * std::f64::consts::PI) / (2.0 * field_normalization(k));
    let j = Complex64::new(0.0, 1.0);
    let coefficients = basis
        .iter()
        .zip(&harm)
        .map(|(n, h)| {
            let phase = (-j).powu(n.l);
            match n.tau {
                Polarization::Te => scale * phase * (p_th * h.a1[0] + p_ph * h.a1[1]),
                Polarization::Tm => scale * j * phase * (p_th * h.a2[0] + p_ph * h.a2[1]),
            }
        })
        .collect();
    ExpansionVector::new(ExpansionKind::IncidentA, coefficients, basis, 0)
}
