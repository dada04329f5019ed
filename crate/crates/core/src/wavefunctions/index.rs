use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Result};

/// Polarization index τ: 1 is TE, 2 is TM.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    Te = 1,
    Tm = 2,
}

impl Polarization {
    pub fn number(self) -> u32 {
        self as u32
    }

    /// The other polarization, τ̄.
    pub fn dual(self) -> Self {
        match self {
            Polarization::Te => Polarization::Tm,
            Polarization::Tm => Polarization::Te,
        }
    }
}

/// Parity index σ; even is encoded as 0 and odd as 1 in sign exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even = 0,
    Odd = 1,
}

impl Parity {
    pub fn number(self) -> u32 {
        self as u32
    }
}

/// Compound VSWF index n = (τ, σ, m, l).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VswfIndex {
    pub tau: Polarization,
    pub sigma: Parity,
    pub m: u32,
    pub l: u32,
}

impl VswfIndex {
    pub fn new(tau: Polarization, sigma: Parity, m: u32, l: u32) -> Result<Self> {
        if l < 1 {
            return invalid(format!("degree l must be at least 1, got {l}"));
        }
        if m > l {
            return invalid(format!("order m = {m} exceeds degree l = {l}"));
        }
        if m == 0 && sigma == Parity::Odd {
            return invalid("odd functions vanish identically at m = 0");
        }
        Ok(Self { tau, sigma, m, l })
    }

    /// Sort key of the canonical ordering.
    pub fn key(&self) -> (u32, Polarization, u32, Parity) {
        (self.l, self.tau, self.m, self.sigma)
    }

    /// The electric dipole mode (τ=2, even, m=0, l=1).
    pub fn dipole() -> Self {
        Self {
            tau: Polarization::Tm,
            sigma: Parity::Even,
            m: 0,
            l: 1,
        }
    }
}

impl PartialOrd for VswfIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VswfIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for VswfIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sigma {
            Parity::Even => 'e',
            Parity::Odd => 'o',
        };
        write!(f, "(τ={}, σ={}, m={}, l={})", self.tau.number(), s, self.m, self.l)
    }
}

/// Number of VSWFs up to degree `l_max`: 2·L(L+2).
pub fn index_count(l_max: u32) -> Result<usize> {
    if l_max < 1 {
        return invalid("l_max must be at least 1");
    }
    let l = l_max as usize;
    Ok(2 * l * (l + 2))
}

/// Empirical truncation degree ⌈kR + 7·(kR)^(1/3) + 3⌉.
pub fn truncation_degree(kr_min: f64) -> Result<u32> {
    if !(kr_min > 0.0) || !kr_min.is_finite() {
        return invalid(format!("kR_min must be positive and finite, got {kr_min}"));
    }
    Ok((kr_min + 7.0 * kr_min.cbrt() + 3.0).ceil() as u32)
}

/// Canonically ordered set of VSWF indices up to `l_max`.
///
/// Ordering is by `(l, τ, m, σ)`, so a basis of lower degree is always a
/// prefix of a basis of higher degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VswfBasis {
    l_max: u32,
    modes: Vec<VswfIndex>,
}

pub fn canonical_basis(l_max: u32) -> Result<VswfBasis> {
    VswfBasis::new(l_max)
}

impl VswfBasis {
    pub fn new(l_max: u32) -> Result<Self> {
        let n = index_count(l_max)?;
        let mut modes = Vec::with_capacity(n);
        for l in 1..=l_max {
            for tau in [Polarization::Te, Polarization::Tm] {
                for m in 0..=l {
                    for sigma in [Parity::Even, Parity::Odd] {
                        if m == 0 && sigma == Parity::Odd {
                            continue;
                        }
                        modes.push(VswfIndex { tau, sigma, m, l });
                    }
                }
            }
        }
        debug_assert_eq!(modes.len(), n);
        Ok(Self { l_max, modes })
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[VswfIndex] {
        &self.modes
    }

    pub fn iter(&self) -> impl Iterator<Item = &VswfIndex> {
        self.modes.iter()
    }

    pub fn get(&self, i: usize) -> Option<VswfIndex> {
        self.modes.get(i).copied()
    }

    /// Position of `n` in this basis, computed in O(1).
    pub fn position(&self, n: &VswfIndex) -> Option<usize> {
        if n.l < 1 || n.l > self.l_max || n.m > n.l || (n.m == 0 && n.sigma == Parity::Odd) {
            return None;
        }
        let l = n.l as usize;
        let degree_offset = 2 * (l * l - 1);
        let tau_offset = (n.tau.number() as usize - 1) * (2 * l + 1);
        let within = if n.m == 0 {
            0
        } else {
            2 * n.m as usize - 1 + n.sigma.number() as usize
        };
        Some(degree_offset + tau_offset + within)
    }

    pub fn contains(&self, n: &VswfIndex) -> bool {
        self.position(n).is_some()
    }
}
