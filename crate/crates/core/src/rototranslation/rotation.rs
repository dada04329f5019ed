use faer::Mat;
use num_complex::Complex64;

use super::operator::{ModeOperator, OperatorKind};
use crate::wavefunctions::{jacobi_polynomial, Parity, VswfBasis};
use crate::CMat;


/// Paper-convention d^l_{mm'}(β) (the standard Wigner d with its indices
/// swapped), evaluated through Jacobi polynomials.
///
/// Negative orders are mapped onto m ≥ |m'| with the symmetries
/// d_{mm'} = (−1)^{m−m'} d_{m'm} = d_{−m',−m}.
pub fn wigner_d_small(l: u32, m: i32, mp: i32, beta: f64) -> f64 {
    let l = l as i32;
    if m.abs() > l || mp.abs() > l {
        return 0.0;
    }
    let flip = |a: i32, b: i32| if (a - b).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    if m >= mp.abs() {
        d_principal(l, m, mp, beta)
    } else if mp >= m.abs() {
        flip(m, mp) * d_principal(l, mp, m, beta)
    } else if -m >= mp.abs() {
        flip(m, mp) * d_principal(l, -m, -mp, beta)
    } else {
        d_principal(l, -mp, -m, beta)
    }
}

// Valid for m ≥ |m'|, where both Jacobi parameters are non-negative.
fn d_principal(l: i32, m: i32, mp: i32, beta: f64) -> f64 {
    // (l+m)!(l−m)! / ((l+m')!(l−m')!) as a ratio of short products
    let up: f64 = (l + mp + 1..=l + m).map(|k| k as f64).product();
    let down: f64 = (l - m + 1..=l - mp).map(|k| k as f64).product();
    let (s, c) = (0.5 * beta).sin_cos();
    (up / down).sqrt()
        * c.powi(m + mp)
        * s.powi(m - mp)
        * jacobi_polynomial((l - m) as u32, m - mp, m + mp, beta.cos())
}

/// Block-diagonal VSWF rotation 𝓓(α, β, γ).
///
/// The operator is independent of τ, so one (2l+1)-square block per degree
/// is stored; in canonical order it acts on the contiguous (τ, l) slices.
#[derive(Clone, Debug)]
pub struct Rotation {
    l_max: u32,
    blocks: Vec<Mat<f64>>,
}

impl Rotation {
    pub fn new(l_max: u32, alpha: f64, beta: f64, gamma: f64) -> Self {
        let blocks = (1..=l_max).map(|l| degree_block(l, alpha, beta, gamma)).collect();
        Self { l_max, blocks }
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    /// Rotation block of degree `l`, indexed by position within the τ slice.
    pub fn block(&self, l: u32) -> &Mat<f64> {
        &self.blocks[(l - 1) as usize]
    }

    fn slices(&self, l_max: u32) -> impl Iterator<Item = (usize, usize, &Mat<f64>)> + '_ {
        (1..=l_max).flat_map(move |l| {
            let size = (2 * l + 1) as usize;
            let base = 2 * ((l * l) as usize - 1);
            let blk = &self.blocks[(l - 1) as usize];
            [(base, size, blk), (base + size, size, blk)]
        })
    }

    fn dim_l_max(&self, n: usize) -> u32 {
        let l = (1..=self.l_max)
            .find(|&l| 2 * (l * (l + 2)) as usize == n)
            .unwrap_or_else(|| panic!("dimension {n} is not a basis size up to l_max {}", self.l_max));
        l
    }

    /// Dense operator on the basis of degree `l_max` (≤ stored degree).
    pub fn dense(&self, l_max: u32) -> CMat {
        let n = 2 * (l_max * (l_max + 2)) as usize;
        let mut d = Mat::<Complex64>::zeros(n, n);
        for (off, size, blk) in self.slices(l_max) {
            for i in 0..size {
                for j in 0..size {
                    d[(off + i, off + j)] = Complex64::new(blk[(i, j)], 0.0);
                }
            }
        }
        d
    }

    fn left(&self, x: &CMat, transpose: bool) -> CMat {
        let l_max = self.dim_l_max(x.nrows());
        let mut out = Mat::<Complex64>::zeros(x.nrows(), x.ncols());
        for (off, size, blk) in self.slices(l_max) {
            for c in 0..x.ncols() {
                for i in 0..size {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..size {
                        let w = if transpose { blk[(k, i)] } else { blk[(i, k)] };
                        acc += x[(off + k, c)] * w;
                    }
                    out[(off + i, c)] = acc;
                }
            }
        }
        out
    }

    fn right(&self, x: &CMat, transpose: bool) -> CMat {
        let l_max = self.dim_l_max(x.ncols());
        let mut out = Mat::<Complex64>::zeros(x.nrows(), x.ncols());
        for (off, size, blk) in self.slices(l_max) {
            for j in 0..size {
                for k in 0..size {
                    let w = if transpose { blk[(j, k)] } else { blk[(k, j)] };
                    if w == 0.0 {
                        continue;
                    }
                    for r in 0..x.nrows() {
                        out[(r, off + j)] += x[(r, off + k)] * w;
                    }
                }
            }
        }
        out
    }

    /// 𝓓·X
    pub fn apply_left(&self, x: &CMat) -> CMat {
        self.left(x, false)
    }

    /// 𝓓ᵗ·X
    pub fn apply_left_transposed(&self, x: &CMat) -> CMat {
        self.left(x, true)
    }

    /// X·𝓓
    pub fn apply_right(&self, x: &CMat) -> CMat {
        self.right(x, false)
    }

    /// X·𝓓ᵗ
    pub fn apply_right_transposed(&self, x: &CMat) -> CMat {
        self.right(x, true)
    }

    /// 𝓓ᵗ·X·𝓓
    pub fn congruence(&self, x: &CMat) -> CMat {
        self.apply_right(&self.apply_left_transposed(x))
    }

    /// 𝓓·v
    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = Mat::from_fn(v.len(), 1, |i, _| v[i]);
        let y = self.apply_left(&x);
        (0..v.len()).map(|i| y[(i, 0)]).collect()
    }
}

fn degree_block(l: u32, alpha: f64, beta: f64, gamma: f64) -> Mat<f64> {
    let size = (2 * l + 1) as usize;
    let li = l as i32;
    // d[m][m' + l] for m ∈ 0..=l, m' ∈ −l..=l
    let d: Vec<Vec<f64>> = (0..=li)
        .map(|m| (-li..=li).map(|mp| wigner_d_small(l, m, mp, beta)).collect())
        .collect();
    let pos = |m: u32, sigma: Parity| -> usize {
        if m == 0 {
            0
        } else {
            (2 * m - 1 + sigma.number()) as usize
        }
    };
    let mut blk = Mat::<f64>::zeros(size, size);
    for m in 0..=l {
        for mp in 0..=l {
            let dm = d[m as usize][(mp + l) as usize];
            let dn = d[m as usize][(l - mp) as usize];
            let sgn_mp = if mp % 2 == 0 { 1.0 } else { -1.0 };
            let a = dm + sgn_mp * dn;
            let b = dm - sgn_mp * dn;
            let eps = |m: u32| if m == 0 { 1.0f64 } else { 2.0 };
            let sgn = if (m + mp) % 2 == 0 { 1.0 } else { -1.0 };
            let pref = (eps(m) * eps(mp) / 4.0).sqrt() * sgn;
            let (sg, cg) = (m as f64 * gamma).sin_cos();
            let (sa, ca) = (mp as f64 * alpha).sin_cos();
            let g = [[cg, sg], [-sg, cg]];
            let f = [[ca, sa], [-sa, ca]];
            for (si, sigma) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
                if m == 0 && sigma == Parity::Odd {
                    continue;
                }
                for (sj, sigma_p) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
                    if mp == 0 && sigma_p == Parity::Odd {
                        continue;
                    }
                    let v = pref * (g[si][0] * a * f[0][sj] + g[si][1] * b * f[1][sj]);
                    blk[(pos(m, sigma), pos(mp, sigma_p))] = v;
                }
            }
        }
    }
    blk
}

/// Rotation operator 𝓓(α, β, γ) as a dense real operator.
///
/// With Q = R_z(α)·R_y(β)·R_z(γ), a field expanded as Σ a_n v_n(r) and
/// rotated rigidly by Q has coefficients 𝓓ᵗ·a.
pub fn rotation_matrix(basis: &VswfBasis, alpha: f64, beta: f64, gamma: f64) -> ModeOperator {
    let rot = Rotation::new(basis.l_max(), alpha, beta, gamma);
    ModeOperator::new(basis.clone(), OperatorKind::Rotation, rot.dense(basis.l_max()))
        .expect("dense rotation has basis dimension")
}
