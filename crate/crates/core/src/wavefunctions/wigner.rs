/// Wigner 3-j symbols (l1 l2 l3; m1 m2 m3) for every allowed l3 with
/// m3 = −m1 − m2.
///
/// Returns `(l3_min, values)` where `values[i]` belongs to `l3 = l3_min + i`.
/// The family is empty when |m1| > l1 or |m2| > l2.
///
/// Uses the Schulten–Gordon three-term recurrence in l3, run forward from
/// the lower end and backward from the upper end, matched in the middle and
/// normalised by Σ (2 l3 + 1) f² = 1.
pub fn wigner3j_family(l1: i32, l2: i32, m1: i32, m2: i32) -> (i32, Vec<f64>) {
    let m3 = -m1 - m2;
    if l1 < 0 || l2 < 0 || m1.abs() > l1 || m2.abs() > l2 {
        return (0, Vec::new());
    }
    let lo = (l1 - l2).abs().max(m3.abs());
    let hi = l1 + l2;
    if lo > hi {
        return (lo, Vec::new());
    }
    let n = (hi - lo + 1) as usize;

    let (fl1, fl2, fm1, fm2, fm3) = (l1 as f64, l2 as f64, m1 as f64, m2 as f64, m3 as f64);
    let a = |l3: i32| -> f64 {
        let x = l3 as f64;
        ((x * x - (fl1 - fl2).powi(2)) * ((fl1 + fl2 + 1.0).powi(2) - x * x) * (x * x - fm3 * fm3))
            .max(0.0)
            .sqrt()
    };
    let b = |l3: i32| -> f64 {
        let x = l3 as f64;
        -(2.0 * x + 1.0)
            * (fl1 * (fl1 + 1.0) * fm3 - fl2 * (fl2 + 1.0) * fm3 - x * (x + 1.0) * (fm2 - fm1))
    };

    let mut f = vec![0.0; n];
    if n == 1 {
        f[0] = 1.0;
    } else {
        // the forward step divides by l3, so a family starting at l3 = 0 runs backward only
        let mid = if lo == 0 { 0 } else { n / 2 };

        // forward: indices 0..=min(mid + 1, n − 1)
        let fwd_end = if mid == 0 { 0 } else { (mid + 1).min(n - 1) };
        let mut fw = vec![0.0; fwd_end + 1];
        fw[0] = 1.0;
        for i in 0..fwd_end {
            let l3 = lo + i as i32;
            let prev = if i == 0 { 0.0 } else { fw[i - 1] };
            let denom = l3 as f64 * a(l3 + 1);
            fw[i + 1] = -(b(l3) * fw[i] + (l3 + 1) as f64 * a(l3) * prev) / denom;
            if fw[i + 1].abs() > 1e100 {
                for v in &mut fw[..=i + 1] {
                    *v *= 1e-100;
                }
            }
        }

        // backward: indices max(mid, 1) − 1 ..= n − 1
        let bwd_start = mid.saturating_sub(1);
        let mut bw = vec![0.0; n];
        bw[n - 1] = 1.0;
        for i in (bwd_start + 1..n).rev() {
            let l3 = lo + i as i32;
            let next = if i + 1 < n { bw[i + 1] } else { 0.0 };
            let denom = (l3 + 1) as f64 * a(l3);
            bw[i - 1] = -(b(l3) * bw[i] + l3 as f64 * a(l3 + 1) * next) / denom;
            if bw[i - 1].abs() > 1e100 {
                for v in &mut bw[i - 1..n] {
                    *v *= 1e-100;
                }
            }
        }

        // match on the overlap [bwd_start, fwd_end]
        let (mut num, mut den) = (0.0, 0.0);
        for i in bwd_start..=fwd_end {
            num += fw[i] * bw[i];
            den += bw[i] * bw[i];
        }
        let scale = num / den;
        f[..mid].copy_from_slice(&fw[..mid]);
        for i in mid..n {
            f[i] = bw[i] * scale;
        }
    }

    let norm: f64 = f
        .iter()
        .enumerate()
        .map(|(i, v)| (2 * (lo + i as i32) + 1) as f64 * v * v)
        .sum::<f64>()
        .sqrt();
    let parity = (l1 - l2 - m3).rem_euclid(2);
    let sign = if parity == 0 { 1.0 } else { -1.0 };
    let s = if f[n - 1].signum() == sign { 1.0 } else { -1.0 };
    for v in &mut f {
        *v *= s / norm;
    }
    (lo, f)
}

/// Wigner 3-j symbol; selection-rule violations return 0.
pub fn wigner3j(l1: i32, l2: i32, l3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 || l1 < 0 || l2 < 0 || l3 < 0 {
        return 0.0;
    }
    if m1.abs() > l1 || m2.abs() > l2 || m3.abs() > l3 {
        return 0.0;
    }
    if l3 < (l1 - l2).abs() || l3 > l1 + l2 {
        return 0.0;
    }
    if m1 == 0 && m2 == 0 && (l1 + l2 + l3) % 2 == 1 {
        return 0.0;
    }
    let (lo, vals) = wigner3j_family(l1, l2, m1, m2);
    vals.get((l3 - lo) as usize).copied().unwrap_or(0.0)
}
