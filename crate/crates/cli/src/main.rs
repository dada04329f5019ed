//! `gsmkit` command-line front end.

mod scene;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gsmkit::components::{load_gsm, passivity_report, save_gsm, write_gsm, write_operator};
use gsmkit::observables::{
    bistatic_rcs, gain_pattern, port_sparams, port_sparams_table, write_gain_csv, write_rcs_csv, CutPlane,
    PlaneWaveSpec,
};
use gsmkit::rototranslation::{
    kappa_truncation, translation_z_outgoing_analytic, translation_z_outgoing_integral, translation_z_regular,
};
use gsmkit::synthesis::{global_truncation, globalize, synthesize_local, Scene};
use gsmkit::wavefunctions::VswfBasis;
use gsmkit::{Complex64, GsmError};
use log::info;

use scene::{load_scene, SceneSpec};

#[derive(Parser)]
#[command(name = "gsmkit", version, about = "Generalized scattering matrix synthesis of antenna-scatterer systems")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TranslateMode {
    /// Regular-to-regular operator 𝓡^z.
    Regular,
    /// Outgoing-to-regular operator 𝓨^z from the closed form.
    Analytic,
    /// Outgoing-to-regular operator 𝓨^z from the contour integral.
    Integral,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Plane {
    Xoz,
    Yoz,
    Xoy,
}

impl From<Plane> for CutPlane {
    fn from(p: Plane) -> Self {
        match p {
            Plane::Xoz => CutPlane::Xoz,
            Plane::Yoz => CutPlane::Yoz,
            Plane::Xoy => CutPlane::Xoy,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the z-axis translation operator of a basis.
    Translate {
        #[arg(long)]
        lmax: u32,
        /// Electrical distance k·d.
        #[arg(long)]
        kd: f64,
        #[arg(long, value_enum)]
        mode: TranslateMode,
        /// Contour truncation κ̃ (integral mode); defaults to the empirical fit.
        #[arg(long)]
        kappa: Option<f64>,
        /// Gauss–Legendre nodes per contour segment.
        #[arg(long, default_value_t = 200)]
        nquad: usize,
        /// Electrical radius used by the κ̃ fit.
        #[arg(long, default_value_t = 0.5)]
        kr_min: f64,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize the system GS-matrix of a scene.
    Synthesize {
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Global expansion degree (default: from the circumscribing sphere).
        #[arg(long)]
        global_lmax: Option<u32>,
    },
    /// Bistatic RCS of a scene along a principal-plane cut.
    Rcs {
        scene: PathBuf,
        /// Propagation direction, `x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        incidence: String,
        /// Electric-field polarization, `x,y,z`.
        #[arg(long, allow_hyphen_values = true)]
        polarization: String,
        #[arg(long, value_enum, default_value_t = Plane::Xoz)]
        cut: Plane,
        /// Angular step in degrees (must divide 360).
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gain pattern for a port excitation.
    Pattern {
        scene: PathBuf,
        /// `port=N[,amp=A][,phase=DEG]`, repeatable; ports are numbered from 1.
        #[arg(long, required = true)]
        excite: Vec<String>,
        #[arg(long, value_enum, default_value_t = Plane::Xoz)]
        cut: Plane,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Port S-parameters (magnitude in dB, phase in degrees).
    Sparams {
        scene: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a GS-matrix file for unitarity and passivity.
    Validate { path: PathBuf },
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<GsmError> for Failure {
    fn from(e: GsmError) -> Self {
        let code = match &e {
            GsmError::Parse { .. } | GsmError::Io(_) => 2,
            GsmError::InvalidArgument(_) | GsmError::Separability { .. } => 3,
            GsmError::Singular(_) | GsmError::Divergence { .. } | GsmError::Quadrature { .. } => 4,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        GsmError::from(e).into()
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_vector(name: &str, text: &str) -> CliResult<[f64; 3]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::usage(format!("--{name} expects three comma-separated numbers, got `{text}`")))?;
    match parts.as_slice() {
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err(Failure::usage(format!("--{name} expects three comma-separated numbers, got `{text}`"))),
    }
}

fn parse_excitation(items: &[String], n_ports: usize) -> CliResult<Vec<Complex64>> {
    let mut v = vec![Complex64::new(0.0, 0.0); n_ports];
    for item in items {
        let (mut port, mut amp, mut phase) = (None, 1.0, 0.0);
        for field in item.split(',') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("--excite expects key=value pairs, got `{item}`")))?;
            let bad = || Failure::usage(format!("invalid value in --excite `{item}`"));
            match key.trim() {
                "port" => port = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                "amp" => amp = value.trim().parse::<f64>().map_err(|_| bad())?,
                "phase" => phase = value.trim().parse::<f64>().map_err(|_| bad())?,
                other => return Err(Failure::usage(format!("unknown --excite key `{other}`"))),
            }
        }
        let port = port.ok_or_else(|| Failure::usage(format!("--excite `{item}` names no port")))?;
        if port == 0 || port > n_ports {
            return Err(Failure::usage(format!("port {port} does not exist (scene has {n_ports} ports)")));
        }
        v[port - 1] += Complex64::from_polar(amp, phase.to_radians());
    }
    Ok(v)
}

fn global_basis(scene: &Scene, requested: Option<u32>) -> CliResult<VswfBasis> {
    let l = match requested {
        Some(l) => l,
        None => global_truncation(scene)?,
    };
    info!("global expansion degree {l}");
    Ok(VswfBasis::new(l)?)
}

fn synthesize(spec: &SceneSpec, requested: Option<u32>) -> CliResult<gsmkit::components::GsMatrix> {
    let blocks = synthesize_local(&spec.scene, spec.solver)?;
    let global = global_basis(&spec.scene, requested.or(spec.global_l_max))?;
    Ok(globalize(&blocks, &spec.scene, &global)?)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Translate {
            lmax,
            kd,
            mode,
            kappa,
            nquad,
            kr_min,
            out,
        } => {
            let basis = VswfBasis::new(lmax)?;
            let op = match mode {
                TranslateMode::Regular => translation_z_regular(&basis, kd)?,
                TranslateMode::Analytic => translation_z_outgoing_analytic(&basis, kd)?,
                TranslateMode::Integral => {
                    let kappa = match kappa {
                        Some(k) => k,
                        None => kappa_truncation(lmax, kr_min)?,
                    };
                    translation_z_outgoing_integral(&basis, kd, kappa, nquad)?
                }
            };
            write_operator(&op, output(&out)?)?;
        }
        Command::Synthesize { scene, out, global_lmax } => {
            let spec = load_scene(&scene)?;
            let gs = synthesize(&spec, global_lmax)?;
            match out {
                Some(p) => save_gsm(&gs, p)?,
                None => write_gsm(&gs, output(&None)?)?,
            }
        }
        Command::Rcs {
            scene,
            incidence,
            polarization,
            cut,
            step,
            out,
        } => {
            let dir = parse_vector("incidence", &incidence)?;
            let pol = parse_vector("polarization", &polarization)?;
            let spec = load_scene(&scene)?;
            let wave = PlaneWaveSpec::linear(dir, pol, 1.0)?;
            let curve = bistatic_rcs(&spec.scene, &wave, cut.into(), step, spec.solver, spec.global_l_max)?;
            write_rcs_csv(&curve, output(&out)?)?;
        }
        Command::Pattern {
            scene,
            excite,
            cut,
            step,
            out,
        } => {
            let spec = load_scene(&scene)?;
            let v = parse_excitation(&excite, spec.scene.n_ports())?;
            let pattern = gain_pattern(&spec.scene, &v, cut.into(), step, spec.solver, spec.global_l_max)?;
            info!("accepted power {:.6e} W", pattern.accepted_power);
            write_gain_csv(&pattern, output(&out)?)?;
        }
        Command::Sparams { scene, out } => {
            let spec = load_scene(&scene)?;
            // Γ does not depend on the global basis.
            let blocks = synthesize_local(&spec.scene, spec.solver)?;
            let gs = globalize(&blocks, &spec.scene, spec.scene.basis())?;
            if gs.n_ports() == 0 {
                return Err(Failure::usage("scene has no antenna ports"));
            }
            port_sparams_table(&port_sparams(&gs), output(&out)?)?;
        }
        Command::Validate { path } => validate(&path)?,
    }
    Ok(())
}

fn validate(path: &Path) -> CliResult<()> {
    let gs = load_gsm(path)?;
    let report = passivity_report(&gs);
    let mut out = io::stdout().lock();
    writeln!(out, "{}: lmax {}, {} ports, {} modes", path.display(), gs.basis().l_max(), gs.n_ports(), gs.dim())?;
    if report.unitarity_defect < 1e-13 {
        writeln!(out, "unitary within 1e-13")?;
    } else {
        writeln!(out, "unitarity defect {:.3e}", report.unitarity_defect)?;
    }
    let verdict = if report.max_singular_value <= 1.0 + 1e-9 { "passive" } else { "ACTIVE" };
    writeln!(out, "passivity margin: max singular value {:.12} ({verdict})", report.max_singular_value)?;
    Ok(())
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("GSMKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("GSMKIT_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot configure {n} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match configure_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
