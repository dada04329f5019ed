/// Jacobi polynomial P_n^(a,b)(x).
///
/// Uses the three-term recurrence for a, b ≥ 0 and the explicit binomial sum
/// when a negative parameter would make the recurrence degenerate.
pub fn jacobi_polynomial(n: u32, a: i32, b: i32, x: f64) -> f64 {
    if a < 0 || b < 0 {
        return jacobi_explicit(n, a as f64, b as f64, x);
    }
    let (a, b) = (a as f64, b as f64);
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let lhs = 2.0 * k * (k + a + b) * (c - 2.0);
        let p2 = ((c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p1
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0)
            / lhs;
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn binomial(r: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (r - i as f64) / (i + 1) as f64)
}

fn jacobi_explicit(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let nf = n as f64;
    let lo = 0.5 * (x - 1.0);
    let hi = 0.5 * (x + 1.0);
    (0..=n)
        .map(|s| {
            binomial(nf + a, n - s) * binomial(nf + b, s) * lo.powi(s as i32) * hi.powi((n - s) as i32)
        })
        .sum()
}
