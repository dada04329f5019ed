use faer::Mat;
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::wavefunctions::VswfBasis;
use crate::CMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    Rotation,
    RegularTranslation,
    OutgoingTranslation,
}

/// Dense operator on VSWF coefficients; rows are destination modes and
/// columns are source modes.
#[derive(Clone, Debug)]
pub struct ModeOperator {
    basis: VswfBasis,
    kind: OperatorKind,
    entries: CMat,
}

impl ModeOperator {
    pub fn new(basis: VswfBasis, kind: OperatorKind, entries: CMat) -> Result<Self> {
        let n = basis.len();
        if entries.nrows() != n || entries.ncols() != n {
            return invalid(format!(
                "operator must be {n}x{n}, got {}x{}",
                entries.nrows(),
                entries.ncols()
            ));
        }
        Ok(Self { basis, kind, entries })
    }

    pub fn identity(basis: VswfBasis, kind: OperatorKind) -> Self {
        let n = basis.len();
        Self {
            basis,
            kind,
            entries: Mat::identity(n, n),
        }
    }

    pub fn basis(&self) -> &VswfBasis {
        &self.basis
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Operator applied to a coefficient vector.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "coefficient vector length mismatch");
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[(i, j)] * x[j]).sum())
            .collect()
    }
}
