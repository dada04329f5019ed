use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use faer::Mat;
use log::warn;
use num_complex::Complex64;

use super::gsmatrix::{passivity_report, GsMatrix};
use crate::error::{GsmError, Result};
use crate::rototranslation::{ModeOperator, OperatorKind};
use crate::wavefunctions::VswfBasis;
use crate::CMat;

const MAGIC: &str = "GSMAT";
const OP_MAGIC: &str = "GSOP";
const VERSION: &str = "v1";
const CONVENTION: &str = "regular-in/h2-out";
const TIME_CONVENTION: &str = "+jwt";

fn write_block<W: Write>(w: &mut W, name: &str, m: &CMat) -> std::io::Result<()> {
    writeln!(w, "BLOCK {name} {} {}", m.nrows(), m.ncols())?;
    for i in 0..m.nrows() {
        let mut line = String::with_capacity(m.ncols() * 50);
        for k in 0..m.ncols() {
            let v = m[(i, k)];
            if k > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{:.16e} {:.16e}", v.re, v.im));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes `gs` in the line-oriented `GSMAT v1` text format.
pub fn write_gsm<W: Write>(gs: &GsMatrix, mut w: W) -> Result<()> {
    writeln!(w, "{MAGIC} {VERSION}")?;
    writeln!(
        w,
        "lmax {} ports {} convention {CONVENTION} time-convention {TIME_CONVENTION}",
        gs.basis().l_max(),
        gs.n_ports()
    )?;
    writeln!(w, "# rows and columns follow the canonical (l, tau, m, sigma) mode order")?;
    write_block(&mut w, "GAMMA", gs.gamma())?;
    write_block(&mut w, "R", gs.r())?;
    write_block(&mut w, "T", gs.t())?;
    write_block(&mut w, "S", gs.s())?;
    w.flush()?;
    Ok(())
}

pub fn save_gsm(gs: &GsMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_gsm(gs, BufWriter::new(File::create(path)?))
}

/// Line source that skips blank and `#` comment lines and tracks numbering.
struct Lines<R: BufRead> {
    inner: std::io::Lines<R>,
    line_no: usize,
    peeked: Option<(usize, String)>,
}

impl<R: BufRead> Lines<R> {
    fn new(r: R) -> Self {
        Self {
            inner: r.lines(),
            line_no: 0,
            peeked: None,
        }
    }

    fn next(&mut self) -> Result<Option<(usize, String)>> {
        if let Some(p) = self.peeked.take() {
            return Ok(Some(p));
        }
        for line in self.inner.by_ref() {
            let line = line?;
            self.line_no += 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Ok(Some((self.line_no, t.to_string())));
        }
        Ok(None)
    }

    fn peek(&mut self) -> Result<Option<&(usize, String)>> {
        if self.peeked.is_none() {
            self.peeked = self.next()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn eof_line(&self) -> usize {
        self.line_no + 1
    }
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(GsmError::Parse {
        line,
        message: message.into(),
    })
}

fn read_header<R: BufRead>(lines: &mut Lines<R>, magic: &str) -> Result<()> {
    let Some((ln, text)) = lines.next()? else {
        return parse_err(1, "empty file");
    };
    let mut it = text.split_whitespace();
    if it.next() != Some(magic) {
        return parse_err(ln, format!("malformed header: expected `{magic} {VERSION}`"));
    }
    match it.next() {
        Some(VERSION) => Ok(()),
        Some(v) => parse_err(ln, format!("unknown format version `{v}`")),
        None => parse_err(ln, "malformed header: missing version"),
    }
}

fn key_values(ln: usize, text: &str) -> Result<Vec<(String, String)>> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() % 2 != 0 {
        return parse_err(ln, "expected `key value` pairs");
    }
    Ok(tokens.chunks(2).map(|c| (c[0].to_string(), c[1].to_string())).collect())
}

fn parse_uint(ln: usize, key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .or_else(|_| parse_err(ln, format!("`{key}` must be a non-negative integer, got `{v}`")))
}

fn read_block<R: BufRead>(lines: &mut Lines<R>, name: &str, rows: usize, cols: usize) -> Result<CMat> {
    let Some((ln, text)) = lines.next()? else {
        return parse_err(lines.eof_line(), format!("missing BLOCK {name}"));
    };
    let t: Vec<&str> = text.split_whitespace().collect();
    if t.len() != 4 || t[0] != "BLOCK" || t[1] != name {
        return parse_err(ln, format!("expected `BLOCK {name} {rows} {cols}`, found `{text}`"));
    }
    let r = parse_uint(ln, "rows", t[2])?;
    let c = parse_uint(ln, "cols", t[3])?;
    if r != rows || c != cols {
        return parse_err(ln, format!("{name} block: dimension mismatch, expected {rows}x{cols}, header says {r}x{c}"));
    }
    let mut m = Mat::<Complex64>::zeros(rows, cols);
    if cols == 0 {
        return Ok(m);
    }
    for i in 0..rows {
        let next_is_data = match lines.peek()? {
            Some((_, s)) => !s.starts_with("BLOCK"),
            None => false,
        };
        if !next_is_data {
            let at = lines.peek()?.map(|p| p.0).unwrap_or_else(|| lines.eof_line());
            return parse_err(
                at,
                format!("{name} block: expected {rows}·{cols} entries, found {}", i * cols),
            );
        }
        let (ln, text) = lines.next()?.expect("peeked");
        let nums: Vec<&str> = text.split_whitespace().collect();
        if nums.len() != 2 * cols {
            return parse_err(
                ln,
                format!("{name} block row {}: expected {} numbers (re im pairs), found {}", i + 1, 2 * cols, nums.len()),
            );
        }
        for k in 0..cols {
            let parse = |s: &str| {
                s.parse::<f64>()
                    .or_else(|_| parse_err(ln, format!("{name} block: invalid number `{s}`")))
            };
            m[(i, k)] = Complex64::new(parse(nums[2 * k])?, parse(nums[2 * k + 1])?);
        }
    }
    Ok(m)
}

/// Reads a `GSMAT v1` stream.
pub fn read_gsm<R: BufRead>(r: R) -> Result<GsMatrix> {
    let mut lines = Lines::new(r);
    read_header(&mut lines, MAGIC)?;
    let Some((ln, text)) = lines.next()? else {
        return parse_err(lines.eof_line(), "missing `lmax ... ports ...` line");
    };
    let (mut l_max, mut ports) = (None, None);
    for (k, v) in key_values(ln, &text)? {
        match k.as_str() {
            "lmax" => l_max = Some(parse_uint(ln, "lmax", &v)?),
            "ports" => ports = Some(parse_uint(ln, "ports", &v)?),
            "convention" if v == CONVENTION => {}
            "time-convention" if v == TIME_CONVENTION => {}
            "convention" | "time-convention" => {
                return parse_err(ln, format!("unsupported {k} `{v}`"));
            }
            _ => return parse_err(ln, format!("unknown header key `{k}`")),
        }
    }
    let (Some(l_max), Some(e)) = (l_max, ports) else {
        return parse_err(ln, "header must give `lmax` and `ports`");
    };
    if l_max < 1 || l_max > 200 {
        return parse_err(ln, format!("lmax {l_max} out of range"));
    }
    let basis = VswfBasis::new(l_max as u32)?;
    let j = basis.len();
    let gamma = read_block(&mut lines, "GAMMA", e, e)?;
    let rb = read_block(&mut lines, "R", e, j)?;
    let t = read_block(&mut lines, "T", j, e)?;
    let s = read_block(&mut lines, "S", j, j)?;
    if let Some((ln, text)) = lines.next()? {
        return parse_err(ln, format!("unexpected content after S block: `{text}`"));
    }
    GsMatrix::new(basis, gamma, rb, t, s)
}

/// Loads a GS-matrix file and warns when it is not passive.
pub fn load_gsm(path: impl AsRef<Path>) -> Result<GsMatrix> {
    let gs = read_gsm(BufReader::new(File::open(path.as_ref())?))?;
    let rep = passivity_report(&gs);
    if rep.max_singular_value > 1.0 + 1e-6 {
        warn!(
            "{}: largest singular value {:.9} exceeds 1 (not passive)",
            path.as_ref().display(),
            rep.max_singular_value
        );
    }
    Ok(gs)
}

fn kind_name(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::Rotation => "rotation",
        OperatorKind::RegularTranslation => "regular-translation",
        OperatorKind::OutgoingTranslation => "outgoing-translation",
    }
}

/// Writes an operator in the shared text matrix format (`GSOP v1`).
pub fn write_operator<W: Write>(op: &ModeOperator, mut w: W) -> Result<()> {
    writeln!(w, "{OP_MAGIC} {VERSION}")?;
    writeln!(w, "lmax {} kind {}", op.basis().l_max(), kind_name(op.kind()))?;
    write_block(&mut w, "OPERATOR", op.entries())?;
    w.flush()?;
    Ok(())
}

pub fn read_operator<R: BufRead>(r: R) -> Result<ModeOperator> {
    let mut lines = Lines::new(r);
    read_header(&mut lines, OP_MAGIC)?;
    let Some((ln, text)) = lines.next()? else {
        return parse_err(lines.eof_line(), "missing `lmax ... kind ...` line");
    };
    let (mut l_max, mut kind) = (None, None);
    for (k, v) in key_values(ln, &text)? {
        match k.as_str() {
            "lmax" => l_max = Some(parse_uint(ln, "lmax", &v)?),
            "kind" => {
                kind = Some(match v.as_str() {
                    "rotation" => OperatorKind::Rotation,
                    "regular-translation" => OperatorKind::RegularTranslation,
                    "outgoing-translation" => OperatorKind::OutgoingTranslation,
                    _ => return parse_err(ln, format!("unknown operator kind `{v}`")),
                })
            }
            _ => return parse_err(ln, format!("unknown header key `{k}`")),
        }
    }
    let (Some(l_max), Some(kind)) = (l_max, kind) else {
        return parse_err(ln, "header must give `lmax` and `kind`");
    };
    if l_max < 1 || l_max > 200 {
        return parse_err(ln, format!("lmax {l_max} out of range"));
    }
    let basis = VswfBasis::new(l_max as u32)?;
    let j = basis.len();
    let m = read_block(&mut lines, "OPERATOR", j, j)?;
    ModeOperator::new(basis, kind, m)
}
