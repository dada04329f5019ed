use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gsmkit::components::{canonical_dipole_antenna, load_gsm, mie_dielectric_sphere, mie_pec_sphere, read_operator, save_gsm};
use gsmkit::wavefunctions::{truncation_degree, VswfBasis};
use gsmkit::Complex64;
use tempfile::TempDir;

fn gsmkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsmkit"))
        .args(args)
        .env("GSMKIT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

fn wavenumber(mhz: f64) -> f64 {
    2.0 * PI * mhz * 1e6 / SPEED_OF_LIGHT
}

/// E-plane RCS of a PEC sphere from the textbook Mie series.
fn mie_pec_eplane_rcs(k: f64, a: f64, theta: f64) -> f64 {
    let x = k * a;
    let n_max = (x + 4.0 * x.cbrt() + 20.0) as usize;
    let start = n_max + 40;
    let mut psi = vec![0.0; start + 2];
    psi[start] = 1e-30;
    for n in (1..=start).rev() {
        psi[n - 1] = (2 * n + 1) as f64 / x * psi[n] - psi[n + 1];
    }
    let (p0, p1) = (x.sin(), x.sin() / x - x.cos());
    let norm = if p0.abs() > p1.abs() { p0 / psi[0] } else { p1 / psi[1] };
    psi.iter_mut().for_each(|v| *v *= norm);
    let mut chi = vec![x.cos(), x.cos() / x + x.sin()];
    for n in 1..n_max {
        let next = (2 * n + 1) as f64 / x * chi[n] - chi[n - 1];
        chi.push(next);
    }
    let xi = |n: usize| Complex64::new(psi[n], -chi[n]);
    let mu = theta.cos();
    let (mut pi_prev, mut pi_cur) = (0.0, 1.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let nf = n as f64;
        if n > 1 {
            let next = ((2.0 * nf - 1.0) / (nf - 1.0)) * mu * pi_cur - nf / (nf - 1.0) * pi_prev;
            pi_prev = pi_cur;
            pi_cur = next;
        }
        let tau = nf * mu * pi_cur - (nf + 1.0) * pi_prev;
        let an = Complex64::new(psi[n - 1] - nf * psi[n] / x, 0.0) / (xi(n - 1) - xi(n) * (nf / x));
        let bn = Complex64::new(psi[n], 0.0) / xi(n);
        s2 += (an * tau + bn * pi_cur) * ((2.0 * nf + 1.0) / (nf * (nf + 1.0)));
    }
    4.0 * PI * s2.norm_sqr() / (k * k)
}

#[test]
fn regular_translation_at_zero_distance_is_identity() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.gsop");
    let res = gsmkit(&["translate", "--lmax", "4", "--kd", "0", "--mode", "regular", "--out", s(&out)]);
    assert!(res.status.success(), "{}", stderr(&res));
    let op = read_operator(fs::read(&out).unwrap().as_slice()).unwrap();
    for i in 0..op.dim() {
        for k in 0..op.dim() {
            let expected = if i == k { 1.0 } else { 0.0 };
            assert!((op.get(i, k) - Complex64::new(expected, 0.0)).norm() < 1e-14);
        }
    }
}

#[test]
fn integral_and_analytic_operator_files_agree() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.gsop");
    let b = dir.path().join("b.gsop");
    assert!(gsmkit(&["translate", "--lmax", "8", "--kd", "10", "--mode", "analytic", "--out", s(&a)]).status.success());
    let res = gsmkit(&["translate", "--lmax", "8", "--kd", "10", "--mode", "integral", "--nquad", "200", "--out", s(&b)]);
    assert!(res.status.success(), "{}", stderr(&res));
    let oa = read_operator(fs::read(&a).unwrap().as_slice()).unwrap();
    let ob = read_operator(fs::read(&b).unwrap().as_slice()).unwrap();
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for i in 0..oa.dim() {
        for k in 0..oa.dim() {
            worst = worst.max((oa.get(i, k) - ob.get(i, k)).norm());
            peak = peak.max(oa.get(i, k).norm());
        }
    }
    assert!(worst < 1e-6 * peak, "{worst}");
}

#[test]
fn small_kappa_is_a_precondition_error() {
    let res = gsmkit(&["translate", "--lmax", "4", "--kd", "5", "--mode", "integral", "--kappa", "0.5"]);
    assert_eq!(res.status.code(), Some(3));
    assert!(stderr(&res).contains("kappa must exceed 1"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(gsmkit(&["translate", "--lmax", "4", "--kd", "0", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(gsmkit(&["translate", "--kd", "0", "--mode", "regular"]).status.code(), Some(2));
}

#[test]
fn single_sphere_synthesis_reproduces_the_component() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "s.scene", "version = 1\nfrequency = 3000\n[structure]\nname = ball\ntype = mie-pec\nradius = 20\n");
    let out = dir.path().join("sys.gsm");
    let res = gsmkit(&["synthesize", s(&scene), "--out", s(&out)]);
    assert!(res.status.success(), "{}", stderr(&res));
    let sys = load_gsm(&out).unwrap();
    let ka = wavenumber(3000.0) * 0.02;
    let comp = mie_pec_sphere(&VswfBasis::new(truncation_degree(ka).unwrap()).unwrap(), ka).unwrap();
    assert_eq!(sys.dim(), comp.dim());
    for i in 0..comp.dim() {
        for k in 0..comp.dim() {
            assert!((sys.s()[(i, k)] - comp.s()[(i, k)]).norm() < 1e-15);
        }
    }
}

const TWO_DIPOLES: &str = "version = 1\nfrequency = 300\n\
    [structure]\nname = d1\ntype = dipole\nradius = 250\n\
    [structure]\nname = d2\ntype = dipole\nradius = 250\nposition = 3000, 0, 0\n";

#[test]
fn two_dipole_scene_has_two_ports_and_reciprocal_sparams() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "d.scene", TWO_DIPOLES);
    let out = dir.path().join("sys.gsm");
    let res = gsmkit(&["synthesize", s(&scene), "--out", s(&out)]);
    assert!(res.status.success(), "{}", stderr(&res));
    assert_eq!(load_gsm(&out).unwrap().n_ports(), 2);

    let res = gsmkit(&["sparams", s(&scene)]);
    assert!(res.status.success(), "{}", stderr(&res));
    let text = String::from_utf8(res.stdout).unwrap();
    let row = |prefix: &str| -> String {
        let line = text.lines().find(|l| l.starts_with(prefix)).unwrap();
        line.splitn(3, ',').nth(2).unwrap().to_string()
    };
    assert_eq!(row("1,2,"), row("2,1,"));
}

#[test]
fn overlapping_spheres_exit_with_geometry_error() {
    let dir = TempDir::new().unwrap();
    let scene = write(
        &dir,
        "o.scene",
        "version = 1\nfrequency = 1000\n[structure]\nname = a\ntype = mie-pec\nradius = 20\n\
         [structure]\nname = b\ntype = mie-pec\nradius = 20\nposition = 30, 0, 0\n",
    );
    let res = gsmkit(&["synthesize", s(&scene)]);
    assert_eq!(res.status.code(), Some(3));
    let err = stderr(&res);
    assert!(err.contains("`a`") && err.contains("`b`") && err.contains("margin"), "{err}");
}

#[test]
fn scene_parse_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "bad.scene", "version = 1\nfrequency = 1000\n[structure]\ntype = mie-pec\nradius = 5\nshape = cube\n");
    let res = gsmkit(&["synthesize", s(&scene)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(stderr(&res).contains("line 6"));
}

#[test]
fn sphere_rcs_matches_mie_series() {
    let dir = TempDir::new().unwrap();
    let scene = write(
        &dir,
        "s.scene",
        "version = 1\nfrequency = 2500\n[structure]\nname = ball\ntype = mie-pec\nradius = 50\nposition = 10, -5, 20\n",
    );
    let out = dir.path().join("rcs.csv");
    let res = gsmkit(&[
        "rcs", s(&scene), "--incidence", "0,0,1", "--polarization", "1,0,0", "--cut", "xoz", "--step", "1", "--out", s(&out),
    ]);
    assert!(res.status.success(), "{}", stderr(&res));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 361);
    let k = wavenumber(2500.0);
    for row in rows.iter().filter(|r| r[0] >= 0.0) {
        let oracle = 10.0 * mie_pec_eplane_rcs(k, 0.05, row[0].to_radians()).log10();
        assert!((row[1] - oracle).abs() < 1e-6, "{} deg: {} vs {oracle}", row[0], row[1]);
    }
    // Reruns are byte-identical.
    let again = dir.path().join("rcs2.csv");
    gsmkit(&["rcs", s(&scene), "--incidence", "0,0,1", "--polarization", "1,0,0", "--out", s(&again)]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn rcs_without_polarization_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "s.scene", "version = 1\nk = 1\n[structure]\ntype = mie-pec\nradius = 1000\n");
    let res = gsmkit(&["rcs", s(&scene), "--incidence", "0,0,1"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn dipole_pattern_peaks_at_its_directivity() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "d.scene", "version = 1\nfrequency = 300\n[structure]\ntype = dipole\nradius = 250\n");
    let out = dir.path().join("g.csv");
    let res = gsmkit(&["pattern", s(&scene), "--excite", "port=1", "--out", s(&out)]);
    assert!(res.status.success(), "{}", stderr(&res));
    let peak = csv_rows(&out).iter().map(|r| r[1]).fold(f64::MIN, f64::max);
    assert!((peak - 1.76).abs() < 0.01, "{peak}");
}

#[test]
fn exciting_a_missing_port_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let scene = write(&dir, "d.scene", TWO_DIPOLES);
    let res = gsmkit(&["pattern", s(&scene), "--excite", "port=3"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(stderr(&res).contains("port 3"));
}

#[test]
fn validate_reports_unitarity_passivity_and_parse_errors() {
    let dir = TempDir::new().unwrap();
    let b = VswfBasis::new(2).unwrap();
    let dip = dir.path().join("dipole.gsm");
    save_gsm(&canonical_dipole_antenna(&b, None, 0.0).unwrap(), &dip).unwrap();
    let res = gsmkit(&["validate", s(&dip)]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).contains("unitary within 1e-13"));

    let lossy = dir.path().join("lossy.gsm");
    save_gsm(&mie_dielectric_sphere(&b, 1.0, Complex64::new(4.4, -8.8)).unwrap(), &lossy).unwrap();
    let res = gsmkit(&["validate", s(&lossy)]);
    let text = String::from_utf8_lossy(&res.stdout).into_owned();
    let sigma: f64 = text
        .split("max singular value ")
        .nth(1)
        .and_then(|t| t.split_whitespace().next())
        .and_then(|t| t.parse().ok())
        .unwrap();
    assert!(sigma < 1.0, "{text}");

    let mut lines: Vec<String> = fs::read_to_string(&dip).unwrap().lines().map(String::from).collect();
    let idx = lines.iter().position(|l| l.starts_with("BLOCK S")).unwrap() + 2;
    lines[idx] = "1.0 not-a-number".into();
    let broken = write(&dir, "broken.gsm", &(lines.join("\n") + "\n"));
    let res = gsmkit(&["validate", s(&broken)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(stderr(&res).contains(&format!("line {}", idx + 1)), "{}", stderr(&res));
}

#[test]
fn file_structures_load_relative_paths() {
    let dir = TempDir::new().unwrap();
    let b = VswfBasis::new(3).unwrap();
    save_gsm(&mie_pec_sphere(&b, 0.5).unwrap(), dir.path().join("ball.gsm")).unwrap();
    let scene = write(
        &dir,
        "f.scene",
        "version = 1\nk = 1\n[solver]\nmethod = neumann\n[structure]\ntype = file\npath = ball.gsm\nradius = 500\n\
         [structure]\ntype = file\npath = ball.gsm\nradius = 500\nposition = 0, 0, 3000\neuler = 10, 20, 30\n",
    );
    let res = gsmkit(&["synthesize", s(&scene), "--global-lmax", "8"]);
    assert!(res.status.success(), "{}", stderr(&res));
    assert!(String::from_utf8_lossy(&res.stdout).starts_with("GSMAT v1"));
}
