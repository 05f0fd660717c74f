#![allow(dead_code)]

use num_complex::Complex64;

/// 𝔉 by direct enumeration of all sets of disjoint adjacent pairs.
pub fn f_brute(x: &[Complex64]) -> Complex64 {
    fn rec(x: &[Complex64], start: usize) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for k in start..x.len().saturating_sub(1) {
            let pair = x[k] * x[k + 1];
            total += -pair * (Complex64::new(1.0, 0.0) + rec(x, k + 2));
        }
        total
    }
    Complex64::new(1.0, 0.0) + rec(x, 0)
}

/// `Γ(ν+1) (2/x)^ν J_ν(x) = Σ_k (-x²/4)^k / (k! (ν+1)_k)`.
pub fn bessel_scaled(nu: f64, x: f64) -> f64 {
    let q = -x * x / 4.0;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0.0f64;
    while term.abs() > 1e-20 * sum.abs().max(1e-300) || k < x.abs() {
        term *= q / ((k + 1.0) * (nu + k + 1.0));
        sum += term;
        k += 1.0;
    }
    sum
}

/// `J_{ν+n}(x)` divided by `(x/2)^ν / Γ(ν+1)`, for integer `n ≥ -1`.
pub fn bessel_rel(nu: f64, n: i32, x: f64) -> f64 {
    let h = x / 2.0;
    if n == -1 {
        return nu / h * bessel_scaled(nu - 1.0, x);
    }
    let mut poch = 1.0;
    for j in 0..n {
        poch *= nu + 1.0 + j as f64;
    }
    h.powi(n) / poch * bessel_scaled(nu + n as f64, x)
}

/// Eigenvalue count below `x` from sign changes of the leading principal minors.
pub fn sign_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let (mut p0, mut p1) = (1.0f64, diag[0] - x);
    let mut count = usize::from(p1 < 0.0);
    for i in 1..diag.len() {
        let p2 = (diag[i] - x) * p1 - off[i - 1] * off[i - 1] * p0;
        if (p2 < 0.0) != (p1 < 0.0) {
            count += 1;
        }
        let s = p2.abs().max(p1.abs()).max(1e-300);
        p0 = p1 / s;
        p1 = p2 / s;
    }
    count
}

/// Smallest Cholesky pivot of a symmetric matrix; negative when not positive definite.
pub fn min_cholesky_pivot(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut min = f64::INFINITY;
    for j in 0..n {
        let d = a[j][j] - (0..j).map(|k| l[j][k] * l[j][k]).sum::<f64>();
        min = min.min(d);
        if d <= 0.0 {
            return d;
        }
        l[j][j] = d.sqrt();
        for i in j + 1..n {
            l[i][j] = (a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>()) / l[j][j];
        }
    }
    min
}
