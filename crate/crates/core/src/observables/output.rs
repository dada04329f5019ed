use std::io::Write;

use crate::error::Result;

use super::quantities::{GainPattern, PortParameter, RcsCurve};

/// `x` with nine significant digits, fixed-point where that stays compact.
pub fn format_sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new digit (9.99…→10.0); that keeps 9 digits.
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.8e}")
    }
}

/// `angle_deg,sigma_dbsm` rows.
pub fn write_rcs_csv<W: Write>(curve: &RcsCurve, mut w: W) -> Result<()> {
    write!(w, "angle_deg,sigma_dbsm\n")?;
    for (a, s) in curve.cut.angles_deg().iter().zip(curve.sigma_dbsm()) {
        write!(w, "{},{}\n", format_sig9(*a), format_sig9(s))?;
    }
    Ok(())
}

/// `angle_deg,gain_dbi,phase_deg` rows.
pub fn write_gain_csv<W: Write>(pattern: &GainPattern, mut w: W) -> Result<()> {
    write!(w, "angle_deg,gain_dbi,phase_deg\n")?;
    let phase = pattern.phase_deg();
    for ((a, g), p) in pattern.cut.angles_deg().iter().zip(pattern.gain_dbi()).zip(phase) {
        write!(w, "{},{},{}\n", format_sig9(*a), format_sig9(g), format_sig9(p))?;
    }
    Ok(())
}

/// `port_i,port_j,magnitude_db,phase_deg` rows, ports numbered from 1.
pub fn port_sparams_table<W: Write>(params: &[Vec<PortParameter>], mut w: W) -> Result<()> {
    write!(w, "port_i,port_j,magnitude_db,phase_deg\n")?;
    for (i, row) in params.iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            write!(w, "{},{},{},{}\n", i + 1, k + 1, format_sig9(p.db), format_sig9(p.phase_deg))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(-180.0), "-180");
        assert_eq!(format_sig9(1.234567891234), "1.23456789");
        assert_eq!(format_sig9(-12.3456789123), "-12.3456789");
        assert_eq!(format_sig9(1.5e-7), "1.50000000e-7");
        assert_eq!(format_sig9(0.0), "0");
    }
}
