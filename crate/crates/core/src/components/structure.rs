use super::gsmatrix::{rotate_gs, GsMatrix};
use crate::error::{invalid, Result};

/// Conservative geometric bound of a structure in its own frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extent {
    Sphere { radius: f64 },
    Box { min: [f64; 3], max: [f64; 3] },
}

impl Extent {
    /// Radius of the smallest origin-centred sphere containing the extent.
    pub fn bounding_radius(&self) -> f64 {
        match *self {
            Extent::Sphere { radius } => radius,
            Extent::Box { min, max } => {
                let mut r2 = 0.0;
                for i in 0..3 {
                    r2 += min[i].abs().max(max[i].abs()).powi(2);
                }
                r2.sqrt()
            }
        }
    }

    /// Bounds of the projection onto the unit vector `dir`.
    pub fn projection(&self, dir: [f64; 3]) -> (f64, f64) {
        match *self {
            Extent::Sphere { radius } => (-radius, radius),
            Extent::Box { min, max } => {
                let (mut lo, mut hi) = (0.0, 0.0);
                for i in 0..3 {
                    let a = dir[i] * min[i];
                    let b = dir[i] * max[i];
                    lo += a.min(b);
                    hi += a.max(b);
                }
                (lo, hi)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Extent::Sphere { radius } if !(radius > 0.0) || !radius.is_finite() => {
                invalid(format!("bounding radius must be positive, got {radius}"))
            }
            Extent::Box { min, max } if (0..3).any(|i| !(min[i] <= max[i]) || !(min[i].is_finite() && max[i].is_finite())) => {
                invalid("box extent needs finite min <= max on every axis")
            }
            Extent::Box { .. } if self.bounding_radius() == 0.0 => invalid("box extent is degenerate"),
            _ => Ok(()),
        }
    }
}

/// Q = R_z(α)·R_y(β)·R_z(γ).
pub fn euler_matrix(alpha: f64, beta: f64, gamma: f64) -> [[f64; 3]; 3] {
    let rz = |t: f64| {
        let (s, c) = t.sin_cos();
        [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    };
    let (s, c) = beta.sin_cos();
    let ry = [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]];
    let mul = |a: [[f64; 3]; 3], b: [[f64; 3]; 3]| {
        let mut o = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                o[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        o
    };
    mul(mul(rz(alpha), ry), rz(gamma))
}

/// A GS-matrix placed in the global frame.
///
/// `euler` rotates the stored structure rigidly about its own origin before
/// it is translated to `position`; synthesis works with the rotated matrix
/// so that all local frames differ from the global one by translation only.
#[derive(Clone, Debug)]
pub struct StructureInstance {
    pub name: String,
    pub gs: GsMatrix,
    pub position: [f64; 3],
    pub euler: [f64; 3],
    pub extent: Extent,
}

impl StructureInstance {
    pub fn new(name: impl Into<String>, gs: GsMatrix, position: [f64; 3], extent: Extent) -> Result<Self> {
        extent.validate()?;
        if position.iter().any(|v| !v.is_finite()) {
            return invalid("position must be finite");
        }
        Ok(Self {
            name: name.into(),
            gs,
            position,
            euler: [0.0; 3],
            extent,
        })
    }

    pub fn with_euler(mut self, alpha: f64, beta: f64, gamma: f64) -> Self {
        self.euler = [alpha, beta, gamma];
        self
    }

    pub fn is_antenna(&self) -> bool {
        self.gs.n_ports() > 0
    }

    pub fn bounding_radius(&self) -> f64 {
        self.extent.bounding_radius()
    }

    /// Projection bounds (relative to the structure origin) onto a global unit vector.
    pub fn projection(&self, dir: [f64; 3]) -> (f64, f64) {
        let q = euler_matrix(self.euler[0], self.euler[1], self.euler[2]);
        // local direction Qᵗ·dir
        let local = [0, 1, 2].map(|i| (0..3).map(|k| q[k][i] * dir[k]).sum());
        self.extent.projection(local)
    }

    /// The stored GS-matrix after the rigid rotation by `euler`.
    pub fn oriented_gs(&self) -> GsMatrix {
        let [a, b, g] = self.euler;
        rotate_gs(&self.gs, a, b, g)
    }
}
