use std::ops::Range;

use faer::linalg::solvers::Solve;
use faer::Mat;
use log::{info, warn};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::components::GsMatrix;
use crate::error::{invalid, GsmError, Result};
use crate::rototranslation::translate_outgoing;
use crate::rototranslation::translate_regular;
use crate::wavefunctions::{truncation_degree, VswfBasis};
use crate::CMat;

use super::scene::Scene;
use super::solve::{checked_inverse, neumann_apply, schur_left_column, Solver};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Local system GS-matrix blocks in stacked coordinates.
#[derive(Clone, Debug)]
pub struct SystemBlocks {
    pub gamma_g: CMat,
    pub r_g: CMat,
    pub t_g: CMat,
    pub s_g_minus_1: CMat,
    /// Port range of each structure in the stacked port vector.
    pub port_spans: Vec<Range<usize>>,
    /// Mode range of each structure in the stacked mode vector.
    pub mode_spans: Vec<Range<usize>>,
}

impl SystemBlocks {
    fn zeros_like(&self) -> Self {
        Self {
            gamma_g: Mat::zeros(self.gamma_g.nrows(), self.gamma_g.ncols()),
            r_g: Mat::zeros(self.r_g.nrows(), self.r_g.ncols()),
            t_g: Mat::zeros(self.t_g.nrows(), self.t_g.ncols()),
            s_g_minus_1: Mat::zeros(self.s_g_minus_1.nrows(), self.s_g_minus_1.ncols()),
            port_spans: self.port_spans.clone(),
            mode_spans: self.mode_spans.clone(),
        }
    }
}

/// Intrinsic (isolated-component) and coupling contributions to the local
/// system blocks; their sum equals [`synthesize_local`].
#[derive(Clone, Debug)]
pub struct LocalDecomposition {
    pub intrinsic: SystemBlocks,
    pub coupling: SystemBlocks,
}

/// Block-wise response of a scene to one excitation.
#[derive(Clone, Debug)]
pub struct Response {
    /// Reflected port amplitudes ŵ.
    pub w: Vec<Complex64>,
    /// Scattered coefficients of each structure about its own origin.
    pub f_local: Vec<Vec<Complex64>>,
    /// Scattered coefficients about the global origin.
    pub f_global: Vec<Complex64>,
    /// Neumann terms used, when the series was used and converged.
    pub neumann_iterations: Option<usize>,
}

/// Pairwise coupling blocks and stacked component data of a scene.
pub struct Assembly<'a> {
    scene: &'a Scene,
    /// `pairs[p][q - p - 1]` = 𝓖(k·(r_p − r_q)) for p < q.
    pairs: Vec<Vec<CMat>>,
    s_minus_one: Vec<CMat>,
}

impl<'a> Assembly<'a> {
    pub fn new(scene: &'a Scene) -> Result<Self> {
        let n = scene.len();
        let basis = scene.basis();
        let k = scene.k();
        let pairs = (0..n)
            .into_par_iter()
            .map(|p| {
                (p + 1..n)
                    .map(|q| {
                        let d = sub(scene.structures()[p].position, scene.structures()[q].position);
                        let mode = scene.pair_mode(p, q).expect("pair mode is set for p != q");
                        Ok(translate_outgoing(basis, k, d, mode)?.into_entries())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let s_minus_one = (0..n).map(|p| scene.matrix(p).s_minus_one()).collect();
        Ok(Self {
            scene,
            pairs,
            s_minus_one,
        })
    }

    pub fn scene(&self) -> &Scene {
        self.scene
    }

    /// Stacked mode dimension.
    pub fn dim(&self) -> usize {
        self.scene.stacked_dim()
    }

    fn j(&self) -> usize {
        self.scene.basis().len()
    }

    fn mode_spans(&self) -> Vec<Range<usize>> {
        let j = self.j();
        (0..self.scene.len()).map(|p| p * j..(p + 1) * j).collect()
    }

    fn port_spans(&self) -> Vec<Range<usize>> {
        self.scene
            .port_offsets()
            .into_iter()
            .enumerate()
            .map(|(p, o)| o..o + self.scene.matrix(p).n_ports())
            .collect()
    }

    /// Block (p, q) of Ĝ; `None` on the diagonal.
    pub fn coupling_block(&self, p: usize, q: usize) -> Option<CMat> {
        match p.cmp(&q) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(self.pairs[p][q - p - 1].transpose().to_owned()),
            std::cmp::Ordering::Greater => Some(self.pairs[q][p - q - 1].clone()),
        }
    }

    /// Dense Ĝ.
    pub fn coupling_dense(&self) -> CMat {
        let j = self.j();
        let n = self.scene.len();
        let mut g = Mat::zeros(n * j, n * j);
        for p in 0..n {
            for q in p + 1..n {
                let blk = &self.pairs[p][q - p - 1];
                g.submatrix_mut(p * j, q * j, j, j).copy_from(blk.transpose());
                g.submatrix_mut(q * j, p * j, j, j).copy_from(blk);
            }
        }
        g
    }

    /// Block-diagonal Ŝ − 1.
    pub fn s_minus_one_dense(&self) -> CMat {
        let j = self.j();
        let n = self.scene.len();
        let mut s = Mat::zeros(n * j, n * j);
        for (p, blk) in self.s_minus_one.iter().enumerate() {
            s.submatrix_mut(p * j, p * j, j, j).copy_from(blk);
        }
        s
    }

    /// M = 1 − (Ŝ − 1)·Ĝ.
    pub fn system_matrix(&self) -> CMat {
        let n = self.dim();
        let k = self.apply_coupled(&Mat::identity(n, n));
        Mat::<Complex64>::identity(n, n) - k
    }

    /// (Ŝ − 1)·Ĝ·x without forming Ĝ.
    pub fn apply_coupled(&self, x: &CMat) -> CMat {
        let j = self.j();
        let n = self.scene.len();
        let cols = x.ncols();
        let parts: Vec<CMat> = (0..n)
            .into_par_iter()
            .map(|p| {
                let mut acc: CMat = Mat::zeros(j, cols);
                for q in 0..n {
                    if q == p {
                        continue;
                    }
                    let xq = x.submatrix(q * j, 0, j, cols);
                    if p < q {
                        acc += self.pairs[p][q - p - 1].transpose() * xq;
                    } else {
                        acc += &self.pairs[q][p - q - 1] * xq;
                    }
                }
                &self.s_minus_one[p] * &acc
            })
            .collect();
        Mat::from_fn(n * j, cols, |i, c| parts[i / j][(i % j, c)])
    }

    fn stacked_gamma(&self) -> CMat {
        let e = self.scene.n_ports();
        let mut g = Mat::zeros(e, e);
        for (p, span) in self.port_spans().into_iter().enumerate() {
            g.submatrix_mut(span.start, span.start, span.len(), span.len())
                .copy_from(self.scene.matrix(p).gamma());
        }
        g
    }

    /// Block-diagonal R̂ (ports × stacked modes).
    fn stacked_r(&self) -> CMat {
        let e = self.scene.n_ports();
        let j = self.j();
        let mut r = Mat::zeros(e, self.dim());
        for (p, span) in self.port_spans().into_iter().enumerate() {
            r.submatrix_mut(span.start, p * j, span.len(), j)
                .copy_from(self.scene.matrix(p).r());
        }
        r
    }

    /// Block-diagonal T̂ (stacked modes × ports).
    fn stacked_t(&self) -> CMat {
        let e = self.scene.n_ports();
        let j = self.j();
        let mut t = Mat::zeros(self.dim(), e);
        for (p, span) in self.port_spans().into_iter().enumerate() {
            t.submatrix_mut(p * j, span.start, j, span.len())
                .copy_from(self.scene.matrix(p).t());
        }
        t
    }

    /// M⁻¹·T̂ (antenna columns) and M⁻¹·(Ŝ − 1).
    fn solve_blocks(&self, solver: Solver) -> Result<(CMat, CMat)> {
        let t_hat = self.stacked_t();
        let s1 = self.s_minus_one_dense();
        if let Solver::Neumann { tol, max_iter } = solver {
            let attempt = neumann_apply(self, &t_hat, tol, max_iter)
                .and_then(|x| Ok((x, neumann_apply(self, &s1, tol, max_iter)?)));
            match attempt {
                Ok((x, y)) => {
                    info!(
                        "neumann series converged in {} / {} terms",
                        x.iterations, y.iterations
                    );
                    return Ok((x.solution, y.solution));
                }
                Err(GsmError::Divergence { iterations, last, .. }) => {
                    warn!("neumann series stalled after {iterations} terms (last increment {last:.3e}); solving directly");
                }
                Err(e) => return Err(e),
            }
        }
        let m = self.system_matrix();
        let x = if self.scene.n_ports() == 0 {
            Mat::zeros(self.dim(), 0)
        } else {
            let a_dim = self.antenna_dim();
            self.left_column_of(&m)? * t_hat.submatrix(0, 0, a_dim, t_hat.ncols())
        };
        let lu = m.partial_piv_lu();
        let y = lu.solve(&s1);
        if !y.norm_l2().is_finite() {
            return Err(GsmError::Singular("system matrix M is singular".into()));
        }
        Ok((x, y))
    }

    fn antenna_dim(&self) -> usize {
        self.scene.n_antennas() * self.j()
    }

    fn left_column_of(&self, m: &CMat) -> Result<CMat> {
        let a_dim = self.antenna_dim();
        if a_dim == self.dim() {
            checked_inverse(m, "M")
        } else {
            schur_left_column(m, a_dim)
        }
    }

    /// Antenna column block M_L of M⁻¹; for scenes without scatterers this
    /// is M⁻¹ itself, inverted directly.
    pub fn left_column(&self) -> Result<CMat> {
        self.left_column_of(&self.system_matrix())
    }

    /// Local system blocks.
    pub fn synthesize(&self, solver: Solver) -> Result<SystemBlocks> {
        let (x, y) = self.solve_blocks(solver)?;
        let r_hat = self.stacked_r();
        let rg = &r_hat * self.coupling_dense();
        Ok(SystemBlocks {
            gamma_g: self.stacked_gamma() + &rg * &x,
            r_g: r_hat + &rg * &y,
            t_g: x,
            s_g_minus_1: y,
            port_spans: self.port_spans(),
            mode_spans: self.mode_spans(),
        })
    }

    /// Intrinsic/coupling split of the local blocks.
    pub fn decompose(&self, solver: Solver) -> Result<LocalDecomposition> {
        let (x, y) = self.solve_blocks(solver)?;
        let g = self.coupling_dense();
        let r_hat = self.stacked_r();
        let t_hat = self.stacked_t();
        let s1 = self.s_minus_one_dense();
        let rg = &r_hat * &g;
        let sg = &s1 * &g;
        let intrinsic = SystemBlocks {
            gamma_g: self.stacked_gamma(),
            r_g: r_hat,
            t_g: t_hat,
            s_g_minus_1: s1,
            port_spans: self.port_spans(),
            mode_spans: self.mode_spans(),
        };
        let mut coupling = intrinsic.zeros_like();
        coupling.gamma_g = &rg * &x;
        coupling.r_g = &rg * &y;
        coupling.t_g = &sg * &x;
        coupling.s_g_minus_1 = &sg * &y;
        Ok(LocalDecomposition { intrinsic, coupling })
    }

    /// 𝓡(k·r_p) restricted to `global` rows and scene-basis columns.
    pub fn global_translations(&self, global: &VswfBasis) -> Result<Vec<CMat>> {
        let j = self.j();
        if global.l_max() < self.scene.basis().l_max() {
            return invalid(format!(
                "global l_max {} is below the component l_max {}",
                global.l_max(),
                self.scene.basis().l_max()
            ));
        }
        let jg = global.len();
        self.scene
            .structures()
            .par_iter()
            .map(|s| {
                let full = translate_regular(global, self.scene.k(), s.position)?;
                Ok(full.entries().submatrix(0, 0, jg, j).to_owned())
            })
            .collect()
    }

    /// Matrix-free response (ŵ, f) to port excitation `v` and global incident
    /// coefficients `a` over `global`.
    pub fn response(&self, v: &[Complex64], a: &[Complex64], global: &VswfBasis, solver: Solver) -> Result<Response> {
        let e = self.scene.n_ports();
        if v.len() != e {
            return invalid(format!("expected {e} port amplitudes, got {}", v.len()));
        }
        if a.len() != global.len() {
            return invalid(format!("expected {} incident coefficients, got {}", global.len(), a.len()));
        }
        let j = self.j();
        let n = self.scene.len();
        let trans = self.global_translations(global)?;
        let a_col = Mat::from_fn(a.len(), 1, |i, _| a[i]);
        let v_col = Mat::from_fn(e, 1, |i, _| v[i]);
        let a_d: Vec<CMat> = trans.iter().map(|rp| rp.transpose() * &a_col).collect();
        let a_hat = Mat::from_fn(n * j, 1, |i, _| a_d[i / j][(i % j, 0)]);

        let offsets = self.scene.port_offsets();
        let mut rhs: CMat = Mat::zeros(n * j, 1);
        for p in 0..n {
            let gs = self.scene.matrix(p);
            let vp = v_col.submatrix(offsets[p], 0, gs.n_ports(), 1);
            let part = gs.t() * vp + &self.s_minus_one[p] * a_hat.submatrix(p * j, 0, j, 1);
            rhs.submatrix_mut(p * j, 0, j, 1).copy_from(&part);
        }

        let mut neumann_iterations = None;
        let f_hat = match solver {
            Solver::Neumann { tol, max_iter } => match neumann_apply(self, &rhs, tol, max_iter) {
                Ok(out) => {
                    neumann_iterations = Some(out.iterations);
                    out.solution
                }
                Err(GsmError::Divergence { iterations, last, .. }) => {
                    warn!("neumann series stalled after {iterations} terms (last increment {last:.3e}); solving directly");
                    self.direct_solve(&rhs)?
                }
                Err(err) => return Err(err),
            },
            Solver::Direct => self.direct_solve(&rhs)?,
        };

        let mut w = vec![zero(); e];
        let mut f_local = Vec::with_capacity(n);
        let mut f_global: CMat = Mat::zeros(global.len(), 1);
        for p in 0..n {
            let gs = self.scene.matrix(p);
            let fp = f_hat.submatrix(p * j, 0, j, 1);
            f_global += &trans[p] * fp;
            f_local.push((0..j).map(|i| fp[(i, 0)]).collect());
            if gs.n_ports() == 0 {
                continue;
            }
            let mut incident = a_hat.submatrix(p * j, 0, j, 1).to_owned();
            for q in (0..n).filter(|&q| q != p) {
                let blk = self.coupling_block(p, q).expect("off-diagonal");
                incident += blk * f_hat.submatrix(q * j, 0, j, 1);
            }
            let vp = v_col.submatrix(offsets[p], 0, gs.n_ports(), 1);
            let wp = gs.gamma() * vp + gs.r() * &incident;
            for i in 0..gs.n_ports() {
                w[offsets[p] + i] = wp[(i, 0)];
            }
        }
        Ok(Response {
            w,
            f_local,
            f_global: (0..global.len()).map(|i| f_global[(i, 0)]).collect(),
            neumann_iterations,
        })
    }

    fn direct_solve(&self, rhs: &CMat) -> Result<CMat> {
        let x = self.system_matrix().partial_piv_lu().solve(rhs);
        if !x.norm_l2().is_finite() {
            return Err(GsmError::Singular("system matrix M is singular".into()));
        }
        Ok(x)
    }
}

/// Dense stacked coupling operator Ĝ.
pub fn coupling_operator(scene: &Scene) -> Result<CMat> {
    Ok(Assembly::new(scene)?.coupling_dense())
}

/// Dense M = 1 − (Ŝ − 1)·Ĝ.
pub fn system_matrix(scene: &Scene) -> Result<CMat> {
    Ok(Assembly::new(scene)?.system_matrix())
}

/// Local system blocks of a scene.
pub fn synthesize_local(scene: &Scene, solver: Solver) -> Result<SystemBlocks> {
    Assembly::new(scene)?.synthesize(solver)
}

/// Intrinsic and coupling parts of the local system blocks.
pub fn decompose_local(scene: &Scene, solver: Solver) -> Result<LocalDecomposition> {
    Assembly::new(scene)?.decompose(solver)
}

/// Global truncation degree for the sphere about the origin enclosing every
/// structure, never below the scene basis.
pub fn global_truncation(scene: &Scene) -> Result<u32> {
    let l = truncation_degree(scene.k() * scene.circumscribing_radius())?;
    Ok(l.max(scene.basis().l_max()))
}

/// System GS-matrix about the global origin over `global`.
pub fn globalize(blocks: &SystemBlocks, scene: &Scene, global: &VswfBasis) -> Result<GsMatrix> {
    let assembly = Assembly::new_without_coupling(scene);
    let trans = assembly.global_translations(global)?;
    let j = scene.basis().len();
    let jg = global.len();
    if blocks.s_g_minus_1.nrows() != scene.len() * j {
        return invalid("system blocks do not belong to this scene");
    }
    let mut r_hat = Mat::zeros(jg, scene.len() * j);
    for (p, rp) in trans.iter().enumerate() {
        r_hat.submatrix_mut(0, p * j, jg, j).copy_from(rp);
    }
    let r = &blocks.r_g * r_hat.transpose();
    let t = &r_hat * &blocks.t_g;
    let s = Mat::<Complex64>::identity(jg, jg) + &r_hat * &blocks.s_g_minus_1 * r_hat.transpose();
    GsMatrix::new(global.clone(), blocks.gamma_g.clone(), r, t, s)
}

/// Response of a scene to (v̂, a) computed block-wise.
pub fn system_response(
    scene: &Scene,
    v: &[Complex64],
    a_global: &[Complex64],
    global: &VswfBasis,
    solver: Solver,
) -> Result<Response> {
    Assembly::new(scene)?.response(v, a_global, global, solver)
}

impl<'a> Assembly<'a> {
    fn new_without_coupling(scene: &'a Scene) -> Self {
        Self {
            scene,
            pairs: Vec::new(),
            s_minus_one: Vec::new(),
        }
    }
}
