use log::warn;

use crate::components::{GsMatrix, StructureInstance};
use crate::error::{invalid, GsmError, Result};
use crate::rototranslation::{kappa_truncation, separability_margin, TranslationMode};
use crate::wavefunctions::VswfBasis;

/// Choice of outgoing-translation form for each structure pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TranslationPolicy {
    /// Analytic where circumscribing spheres are disjoint, otherwise integral
    /// where the pair is plane-separable.
    #[default]
    Auto,
    ForceAnalytic,
    ForceIntegral,
}

/// Settings of the integral-form translation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings {
    /// Explicit κ̃_m; `None` uses the empirical fit at `kr_min`.
    pub kappa: Option<f64>,
    /// Electrical radius fed to the κ̃_m fit.
    pub kr_min: f64,
    /// Gauss–Legendre nodes per contour segment.
    pub n_quad: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            kappa: None,
            kr_min: 0.5,
            n_quad: 200,
        }
    }
}

impl QuadratureSettings {
    /// κ̃_m for a basis of degree `l_max`, kept strictly above 1.
    pub fn kappa_for(&self, l_max: u32) -> Result<f64> {
        if let Some(k) = self.kappa {
            if !(k > 1.0) {
                return invalid(format!("kappa must exceed 1, got {k}"));
            }
            return Ok(k);
        }
        let k = kappa_truncation(l_max, self.kr_min)?;
        if k <= 1.0 {
            let clamped = 1.0 + 1e-3;
            warn!("kappa fit gives {k:.4} <= 1 (l_max = {l_max}, kR_min = {}); using {clamped}", self.kr_min);
            return Ok(clamped);
        }
        Ok(k)
    }
}

/// Structures placed in one frame, ready for synthesis.
///
/// Construction applies each structure's Euler rotation to its GS-matrix,
/// zero-pads every matrix into the largest basis, orders antennas before
/// scatterers (stably) and checks every pair for the convergence condition
/// of the translation form selected by the policy.
#[derive(Clone, Debug)]
pub struct Scene {
    structures: Vec<StructureInstance>,
    matrices: Vec<GsMatrix>,
    k: f64,
    basis: VswfBasis,
    policy: TranslationPolicy,
    quadrature: QuadratureSettings,
    pair_modes: Vec<Vec<Option<TranslationMode>>>,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

impl Scene {
    pub fn new(
        structures: Vec<StructureInstance>,
        k: f64,
        policy: TranslationPolicy,
        quadrature: QuadratureSettings,
    ) -> Result<Self> {
        if structures.is_empty() {
            return invalid("a scene needs at least one structure");
        }
        if !(k > 0.0) || !k.is_finite() {
            return invalid(format!("wavenumber must be positive, got {k}"));
        }
        if quadrature.n_quad < 1 {
            return invalid("n_quad must be at least 1");
        }
        let (mut antennas, scatterers): (Vec<_>, Vec<_>) = structures.into_iter().partition(|s| s.is_antenna());
        antennas.extend(scatterers);
        let structures = antennas;

        let l_max = structures.iter().map(|s| s.gs.basis().l_max()).max().expect("non-empty");
        let basis = VswfBasis::new(l_max)?;
        let matrices = structures
            .iter()
            .map(|s| s.oriented_gs().embed(l_max))
            .collect::<Result<Vec<_>>>()?;

        let n = structures.len();
        let mut pair_modes = vec![vec![None; n]; n];
        for p in 0..n {
            for q in p + 1..n {
                let mode = pair_mode(&structures[p], &structures[q], policy, &quadrature, l_max)?;
                pair_modes[p][q] = Some(mode);
                pair_modes[q][p] = Some(mode);
            }
        }
        Ok(Self {
            structures,
            matrices,
            k,
            basis,
            policy,
            quadrature,
            pair_modes,
        })
    }

    pub fn structures(&self) -> &[StructureInstance] {
        &self.structures
    }

    /// Oriented, basis-embedded GS-matrix of structure `p`.
    pub fn matrix(&self, p: usize) -> &GsMatrix {
        &self.matrices[p]
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn basis(&self) -> &VswfBasis {
        &self.basis
    }

    pub fn policy(&self) -> TranslationPolicy {
        self.policy
    }

    pub fn quadrature(&self) -> QuadratureSettings {
        self.quadrature
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn n_antennas(&self) -> usize {
        self.structures.iter().take_while(|s| s.is_antenna()).count()
    }

    pub fn n_ports(&self) -> usize {
        self.matrices.iter().map(|m| m.n_ports()).sum()
    }

    /// First port index of each structure in the stacked port vector.
    pub fn port_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.matrices
            .iter()
            .map(|m| {
                let o = acc;
                acc += m.n_ports();
                o
            })
            .collect()
    }

    /// Dimension of the stacked mode vector.
    pub fn stacked_dim(&self) -> usize {
        self.len() * self.basis.len()
    }

    /// Translation form used between structures `p` and `q` (p ≠ q).
    pub fn pair_mode(&self, p: usize, q: usize) -> Option<TranslationMode> {
        self.pair_modes[p][q]
    }

    /// Radius about the global origin enclosing every structure.
    pub fn circumscribing_radius(&self) -> f64 {
        self.structures
            .iter()
            .map(|s| norm(s.position) + s.bounding_radius())
            .fold(0.0, f64::max)
    }
}

fn pair_mode(
    a: &StructureInstance,
    b: &StructureInstance,
    policy: TranslationPolicy,
    quadrature: &QuadratureSettings,
    l_max: u32,
) -> Result<TranslationMode> {
    let dv = sub(b.position, a.position);
    let d = norm(dv);
    if d == 0.0 {
        return Err(GsmError::Separability {
            first: a.name.clone(),
            second: b.name.clone(),
            margin: -(a.bounding_radius() + b.bounding_radius()),
            required: "distinct expansion origins",
        });
    }
    let dir = [dv[0] / d, dv[1] / d, dv[2] / d];
    let sphere_gap = d - a.bounding_radius() - b.bounding_radius();
    let plane_gap = separability_margin(a.projection(dir), b.projection(dir), d);
    let integral = || -> Result<TranslationMode> {
        Ok(TranslationMode::Integral {
            kappa: quadrature.kappa_for(l_max)?,
            n_quad: quadrature.n_quad,
        })
    };
    let fail = |margin: f64, required: &'static str| GsmError::Separability {
        first: a.name.clone(),
        second: b.name.clone(),
        margin,
        required,
    };
    match policy {
        TranslationPolicy::ForceAnalytic if sphere_gap > 0.0 => Ok(TranslationMode::Analytic),
        TranslationPolicy::ForceAnalytic => Err(fail(sphere_gap, "disjoint circumscribing spheres (margin > 0)")),
        TranslationPolicy::ForceIntegral if plane_gap > 0.0 => integral(),
        TranslationPolicy::ForceIntegral => Err(fail(plane_gap, "a separating plane (margin > 0)")),
        TranslationPolicy::Auto if sphere_gap > 0.0 => Ok(TranslationMode::Analytic),
        TranslationPolicy::Auto if plane_gap > 0.0 => integral(),
        TranslationPolicy::Auto => Err(fail(plane_gap, "a separating plane (margin > 0)")),
    }
}
