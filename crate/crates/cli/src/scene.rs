//! Line-oriented scene files.
//!
//! ```text
//! version = 1
//! frequency = 2000          # MHz (or `k = ...` in rad/m)
//!
//! [solver]
//! method = direct           # direct | neumann
//! translation = auto        # auto | analytic | integral
//!
//! [structure]
//! name = S1
//! type = mie-dielectric     # mie-pec | mie-dielectric | dipole | file
//! radius = 24               # mm
//! eps_re = 8
//! position = 0, 0, 0        # mm
//! euler = 0, 0, 0           # degrees
//! ```

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use gsmkit::components::{
    canonical_dipole_antenna, load_gsm, mie_dielectric_sphere, mie_pec_sphere, Extent, StructureInstance,
};
use gsmkit::synthesis::{QuadratureSettings, Scene, Solver, TranslationPolicy};
use gsmkit::wavefunctions::{truncation_degree, VswfBasis};
use gsmkit::{Complex64, GsmError, Result};

const MM: f64 = 1e-3;
const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StructureKind {
    MiePec,
    MieDielectric,
    Dipole,
    File,
}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
}

#[derive(Clone, Debug, Default)]
struct Section {
    line: usize,
    entries: HashMap<String, Entry>,
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(GsmError::Parse {
        line,
        message: message.into(),
    })
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => match e.value.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => parse_err(e.line, format!("`{key}` must be a finite number, got `{}`", e.value)),
            },
        }
    }

    fn positive(&mut self, key: &str) -> Result<Option<f64>> {
        let line = self.entries.get(key).map(|e| e.line).unwrap_or(self.line);
        match self.number(key)? {
            Some(v) if v <= 0.0 => parse_err(line, format!("`{key}` must be positive, got {v}")),
            other => Ok(other),
        }
    }

    fn integer(&mut self, key: &str) -> Result<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<u64>()
                .map(Some)
                .or_else(|_| parse_err(e.line, format!("`{key}` must be a non-negative integer, got `{}`", e.value))),
        }
    }

    fn triple(&mut self, key: &str) -> Result<Option<[f64; 3]>> {
        let Some(e) = self.take(key) else {
            return Ok(None);
        };
        let parts: Vec<&str> = e.value.split(',').map(str::trim).collect();
        let values: Vec<f64> = parts.iter().filter_map(|p| p.parse::<f64>().ok()).filter(|v| v.is_finite()).collect();
        if parts.len() != 3 || values.len() != 3 {
            return parse_err(e.line, format!("`{key}` must be three comma-separated numbers, got `{}`", e.value));
        }
        Ok(Some([values[0], values[1], values[2]]))
    }

    fn finish(self, what: &str) -> Result<()> {
        if let Some((key, e)) = self.entries.into_iter().min_by_key(|(_, e)| e.line) {
            return parse_err(e.line, format!("unknown key `{key}` in {what}"));
        }
        Ok(())
    }
}

/// A parsed scene together with the solver settings from its file.
pub struct SceneSpec {
    pub scene: Scene,
    pub solver: Solver,
    pub global_l_max: Option<u32>,
}

fn split_sections(text: &str) -> Result<(Section, Option<Section>, Vec<Section>)> {
    let mut global = Section::default();
    let mut solver: Option<Section> = None;
    let mut structures: Vec<Section> = Vec::new();
    #[derive(PartialEq)]
    enum Target {
        Global,
        Solver,
        Structure,
    }
    let mut target = Target::Global;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            match content {
                "[solver]" => {
                    if solver.is_some() {
                        return parse_err(line, "duplicate [solver] section");
                    }
                    solver = Some(Section {
                        line,
                        ..Section::default()
                    });
                    target = Target::Solver;
                }
                "[structure]" => {
                    structures.push(Section {
                        line,
                        ..Section::default()
                    });
                    target = Target::Structure;
                }
                other => return parse_err(line, format!("unknown section `{other}`")),
            }
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return parse_err(line, format!("expected `key = value`, got `{content}`"));
        };
        let (key, value) = (key.trim().to_ascii_lowercase(), value.trim().to_string());
        if key.is_empty() || value.is_empty() {
            return parse_err(line, "empty key or value");
        }
        let section = match target {
            Target::Global => &mut global,
            Target::Solver => solver.as_mut().expect("solver section exists"),
            Target::Structure => structures.last_mut().expect("structure section exists"),
        };
        if section.entries.insert(key.clone(), Entry { value, line }).is_some() {
            return parse_err(line, format!("duplicate key `{key}`"));
        }
    }
    Ok((global, solver, structures))
}

fn parse_solver(section: Option<Section>) -> Result<(Solver, TranslationPolicy, QuadratureSettings, Option<u32>)> {
    let mut quad = QuadratureSettings::default();
    let Some(mut s) = section else {
        return Ok((Solver::Direct, TranslationPolicy::Auto, quad, None));
    };
    let method = s.take("method");
    let tol = s.positive("tol")?.unwrap_or(1e-10);
    let max_iter = s.integer("max_iter")?.unwrap_or(100) as usize;
    let solver = match method {
        None => Solver::Direct,
        Some(e) => match e.value.as_str() {
            "direct" => Solver::Direct,
            "neumann" => Solver::Neumann { tol, max_iter },
            other => return parse_err(e.line, format!("unknown solver method `{other}` (direct, neumann)")),
        },
    };
    let policy = match s.take("translation") {
        None => TranslationPolicy::Auto,
        Some(e) => match e.value.as_str() {
            "auto" => TranslationPolicy::Auto,
            "analytic" => TranslationPolicy::ForceAnalytic,
            "integral" => TranslationPolicy::ForceIntegral,
            other => return parse_err(e.line, format!("unknown translation mode `{other}` (auto, analytic, integral)")),
        },
    };
    if let Some(e) = s.entries.get("kappa").cloned() {
        let k = s.number("kappa")?.expect("present");
        if k <= 1.0 {
            return Err(GsmError::InvalidArgument(format!("kappa must exceed 1, got {k} (line {})", e.line)));
        }
        quad.kappa = Some(k);
    }
    if let Some(n) = s.integer("n_quad")? {
        if n == 0 {
            return parse_err(s.line, "`n_quad` must be at least 1");
        }
        quad.n_quad = n as usize;
    }
    if let Some(kr) = s.positive("kr_min")? {
        quad.kr_min = kr;
    }
    let global = s.integer("global_lmax")?.map(|l| l as u32);
    s.finish("[solver]")?;
    Ok((solver, policy, quad, global))
}

fn parse_structure(mut s: Section, index: usize, k: f64, base: &Path) -> Result<StructureInstance> {
    let line = s.line;
    let name = s.take("name").map(|e| e.value).unwrap_or_else(|| format!("structure{}", index + 1));
    let kind = match s.take("type") {
        None => return parse_err(line, format!("structure `{name}` has no `type`")),
        Some(e) => match e.value.as_str() {
            "mie-pec" => StructureKind::MiePec,
            "mie-dielectric" => StructureKind::MieDielectric,
            "dipole" => StructureKind::Dipole,
            "file" => StructureKind::File,
            other => return parse_err(e.line, format!("unknown structure type `{other}`")),
        },
    };
    let radius = s.positive("radius")?.map(|r| r * MM);
    let eps_re = s.number("eps_re")?;
    let eps_im = s.number("eps_im")?;
    let path = s.take("path");
    let position = s.triple("position")?.unwrap_or([0.0; 3]).map(|x| x * MM);
    let euler = s.triple("euler")?.unwrap_or([0.0; 3]).map(f64::to_radians);
    let phase = s.number("phase")?.unwrap_or(0.0).to_radians();
    let box_min = s.triple("box_min")?;
    let box_max = s.triple("box_max")?;
    let lmax = s.integer("lmax")?.map(|l| l as u32);
    s.finish(&format!("structure `{name}`"))?;

    let need_radius = || match radius {
        Some(r) => Ok(r),
        None => parse_err(line, format!("structure `{name}` needs a `radius` (mm)")),
    };
    let lmax_for = |r: f64| -> Result<u32> {
        match lmax {
            Some(l) => Ok(l),
            None => truncation_degree(k * r),
        }
    };
    let extent = match (box_min, box_max) {
        (Some(lo), Some(hi)) => Extent::Box {
            min: lo.map(|x| x * MM),
            max: hi.map(|x| x * MM),
        },
        (None, None) => Extent::Sphere { radius: need_radius()? },
        _ => return parse_err(line, format!("structure `{name}` needs both `box_min` and `box_max`")),
    };
    if kind != StructureKind::MieDielectric && (eps_re.is_some() || eps_im.is_some()) {
        return parse_err(line, format!("`eps_re`/`eps_im` only apply to mie-dielectric (structure `{name}`)"));
    }
    if kind != StructureKind::File && path.is_some() {
        return parse_err(line, format!("`path` only applies to file structures (structure `{name}`)"));
    }
    if kind != StructureKind::Dipole && phase != 0.0 {
        return parse_err(line, format!("`phase` only applies to dipoles (structure `{name}`)"));
    }
    let gs = match kind {
        StructureKind::MiePec => {
            let r = need_radius()?;
            mie_pec_sphere(&VswfBasis::new(lmax_for(r)?)?, k * r)?
        }
        StructureKind::MieDielectric => {
            let r = need_radius()?;
            let Some(re) = eps_re else {
                return parse_err(line, format!("structure `{name}` needs `eps_re`"));
            };
            let im = eps_im.unwrap_or(0.0);
            if im > 0.0 {
                return parse_err(line, format!("`eps_im` must be <= 0 for a passive material, got {im}"));
            }
            mie_dielectric_sphere(&VswfBasis::new(lmax_for(r)?)?, k * r, Complex64::new(re, im))?
        }
        StructureKind::Dipole => canonical_dipole_antenna(&VswfBasis::new(lmax.unwrap_or(1))?, None, phase)?,
        StructureKind::File => {
            let Some(e) = path else {
                return parse_err(line, format!("structure `{name}` needs a `path`"));
            };
            let p = PathBuf::from(&e.value);
            let p = if p.is_absolute() { p } else { base.join(p) };
            let gs = load_gsm(&p)?;
            match lmax {
                Some(l) => gs.embed(l)?,
                None => gs,
            }
        }
    };
    Ok(StructureInstance::new(name, gs, position, extent)?.with_euler(euler[0], euler[1], euler[2]))
}

/// Parses scene text; relative `path` entries resolve against `base`.
pub fn parse_scene(text: &str, base: &Path) -> Result<SceneSpec> {
    let (mut global, solver, structures) = split_sections(text)?;
    match global.take("version") {
        None => return parse_err(1, "missing `version = 1`"),
        Some(e) if e.value != "1" => return parse_err(e.line, format!("unsupported scene version `{}`", e.value)),
        Some(_) => {}
    }
    let freq_line = global.entries.get("frequency").map(|e| e.line);
    let frequency = global.positive("frequency")?;
    let k_direct = global.positive("k")?;
    let k = match (frequency, k_direct) {
        (Some(f), None) => 2.0 * std::f64::consts::PI * f * 1e6 / SPEED_OF_LIGHT,
        (None, Some(k)) => k,
        (Some(_), Some(_)) => return parse_err(freq_line.unwrap_or(1), "give either `frequency` or `k`, not both"),
        (None, None) => return parse_err(1, "missing `frequency` (MHz) or `k` (rad/m)"),
    };
    global.finish("the global section")?;
    if structures.is_empty() {
        return parse_err(text.lines().count().max(1), "scene has no [structure] sections");
    }
    let (solver, policy, quad, global_l_max) = parse_solver(solver)?;
    let items = structures
        .into_iter()
        .enumerate()
        .map(|(i, s)| parse_structure(s, i, k, base))
        .collect::<Result<Vec<_>>>()?;
    Ok(SceneSpec {
        scene: Scene::new(items, k, policy, quad)?,
        solver,
        global_l_max,
    })
}

pub fn load_scene(path: &Path) -> Result<SceneSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_scene(&text, path.parent().unwrap_or(Path::new(".")))
}
