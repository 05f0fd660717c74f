//! Orthogonal polynomials of Jacobi operators.
//!
//! First- and second-kind solutions of
//! `x P_n = w_{n-1} P_{n-1} + λ_n P_n + w_n P_{n+1}`, Lommel polynomials,
//! and the Coulomb family `P_n^{(L)}(η; z)` built on `J_L`, with explicit
//! coefficients, identity checks and the discrete orthogonality measure.

use crate::coulomb::{
    self, bessel_j, coulomb_sequences, coulomb_sequences_tilde, f_and_df, ln_c_l, weight_coulomb, CoulombParams,
};
use crate::error::{check_finite, Error, Result};
use crate::gamma::{ln_gamma_abs, ln_gamma_complex};
use crate::jacobi::{gamma_at, JacobiOperator, ZeroOptions};
use crate::seqkernel::{eval_f, ComplexSeqWindow};
use num_complex::Complex64;
use rayon::prelude::*;

/// Polynomial `Σ_k c_k z^{n-k}` stored highest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    coeffs: Vec<f64>,
}

impl PolyCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial needs at least one coefficient"));
        }
        if coeffs[0] == 0.0 {
            return Err(Error::invalid("leading coefficient must be nonzero"));
        }
        Ok(PolyCoeffs { coeffs })
    }

    /// `c_0, ..., c_n`; `c_k` multiplies `z^{n-k}`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * z + c)
    }

    /// `Σ |c_k| |z|^{n-k}`, an upper bound for `|P(z)|`.
    pub fn abs_bound(&self, z: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * z.abs() + c.abs())
    }
}

/// `P_0(z), ..., P_n(z)` by forward recurrence.
pub fn op_first_kind_all(op: &JacobiOperator, n: usize, z: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let (mut prev, mut cur) = (0.0, 1.0);
    out.push(cur);
    for k in 0..n {
        let back = if k == 0 { 0.0 } else { op.weight(k - 1) * prev };
        let next = ((z - op.lambda(k)) * cur - back) / op.weight(k);
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `P_n(z)` with `P_0 = 1`, `P_1 = (z - λ_0)/w_0`.
pub fn op_first_kind(op: &JacobiOperator, n: usize, z: f64) -> f64 {
    op_first_kind_all(op, n, z)[n]
}

/// `Q_n(z)` with `Q_0 = 0`, `Q_1 = 1/w_0`.
pub fn op_second_kind(op: &JacobiOperator, n: usize, z: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0 / op.weight(0));
    for k in 1..n {
        let next = ((z - op.lambda(k)) * cur - op.weight(k - 1) * prev) / op.weight(k);
        prev = cur;
        cur = next;
    }
    cur
}

fn f_product_form(op: &JacobiOperator, start: usize, len: usize, z: f64) -> Result<f64> {
    let mut scale = 1.0;
    let mut entries = Vec::with_capacity(len);
    for k in start..start + len {
        let d = op.lambda(k) - z;
        if d == 0.0 {
            return Err(Error::invalid(format!("z = {z} coincides with a diagonal entry")));
        }
        scale *= -d / op.weight(k);
        let g = gamma_at(op, k);
        entries.push(Complex64::new(g * g / d, 0.0));
    }
    let w = ComplexSeqWindow::finite(entries)?;
    Ok(scale * eval_f(&w).re)
}

/// `P_n(z) = Π_{k<n} ((z-λ_k)/w_k) · 𝔉({γ_k²/(λ_k - z)}_{k<n})`.
pub fn op_first_kind_f(op: &JacobiOperator, n: usize, z: f64) -> Result<f64> {
    check_finite("z", z)?;
    f_product_form(op, 0, n, z)
}

/// `Q_n(z) = (1/w_0) Π_{1≤k<n} ((z-λ_k)/w_k) · 𝔉({γ_{k+1}²/(λ_{k+1} - z)}_{k≤n-2})`.
pub fn op_second_kind_f(op: &JacobiOperator, n: usize, z: f64) -> Result<f64> {
    check_finite("z", z)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(f_product_form(op, 1, n - 1, z)? / op.weight(0))
}

fn check_lommel(nu: f64, x: f64) -> Result<()> {
    check_finite("nu", nu)?;
    check_finite("x", x)?;
    if nu <= 0.0 && nu == nu.round() {
        return Err(Error::ParameterDomain(format!("Lommel polynomial undefined at nu = {nu}")));
    }
    if x == 0.0 {
        return Err(Error::invalid("Lommel polynomial requires x != 0"));
    }
    Ok(())
}

/// Lommel polynomial `R_{n,ν}(x)`; `n = -1` gives 0.
pub fn lommel_r(n: i64, nu: f64, x: f64) -> Result<f64> {
    check_lommel(nu, x)?;
    if n < -1 {
        return Err(Error::invalid(format!("degree {n} below -1")));
    }
    if n == -1 {
        return Ok(0.0);
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * (k as f64 + nu) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `R_{n,ν}(x) = Σ_k (-1)^k C(n-k,k) Γ(ν+n-k)/Γ(ν+k) (2/x)^{n-2k}`.
pub fn lommel_r_explicit(n: usize, nu: f64, x: f64) -> Result<f64> {
    check_lommel(nu, x)?;
    let t = 2.0 / x;
    let mut sum = 0.0;
    for k in 0..=n / 2 {
        let mut binom = 1.0;
        for j in 0..k {
            binom *= (n - k - j) as f64 / (j + 1) as f64;
        }
        let poch: f64 = (k..n - k).map(|j| nu + j as f64).product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * poch * t.powi((n - 2 * k) as i32);
    }
    Ok(sum)
}

/// `R_{n,ν}(x) = (2/x)^n Γ(ν+n)/Γ(ν) 𝔉({x/(2(ν+k))}_{k<n})`.
pub fn lommel_r_f(n: usize, nu: f64, x: f64) -> Result<f64> {
    check_lommel(nu, x)?;
    let entries = (0..n).map(|k| Complex64::new(x / (2.0 * (nu + k as f64)), 0.0)).collect();
    let poch: f64 = (0..n).map(|k| 2.0 * (nu + k as f64) / x).product();
    Ok(poch * eval_f(&ComplexSeqWindow::finite(entries)?).re)
}

/// `Q_n(u; ν)` from `u Q_{n-1} - n Q_n + u Q_{n+1} = ν Q_n`, `Q_{-1} = 0`, `Q_0 = 1`.
pub fn lommel_q(n: usize, u: f64, nu: f64) -> Result<f64> {
    check_finite("u", u)?;
    check_finite("nu", nu)?;
    if u == 0.0 {
        return Err(Error::invalid("Q_n(u; nu) requires u != 0"));
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = ((nu + k as f64) * cur - u * prev) / u;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Residual of `J_{ν+n}(x) = R_{n,ν}(x) J_ν(x) - R_{n-1,ν+1}(x) J_{ν-1}(x)`.
pub fn lommel_bessel_residual(n: usize, nu: f64, x: f64, tol: f64) -> Result<f64> {
    let lhs = bessel_j(nu + n as f64, x, tol)?;
    let t1 = lommel_r(n as i64, nu, x)? * bessel_j(nu, x, tol)?;
    let t2 = lommel_r(n as i64 - 1, nu + 1.0, x)? * bessel_j(nu - 1.0, x, tol)?;
    Ok(rel(t1 - t2, lhs, t1.abs().max(t2.abs())))
}

/// Residual of `𝔉({ρ/(ν+k)}_{k≥1}) = Γ(ν+1) ρ^{-ν} J_ν(2ρ)` for `ν > -1`, `ρ > 0`.
pub fn bessel_f_residual(nu: f64, rho: f64, tol: f64) -> Result<f64> {
    check_finite("nu", nu)?;
    if !(nu > -1.0) || !(rho > 0.0) {
        return Err(Error::ParameterDomain(format!("identity requires nu > -1 and rho > 0, got nu = {nu}, rho = {rho}")));
    }
    // Split after n terms; each tail is exp(-pair sum) up to O(ρ⁴/n³).
    let n = 100_000usize;
    let x = |k: usize| rho / (nu + k as f64);
    let head = |m: usize| -> Result<f64> {
        Ok(eval_f(&ComplexSeqWindow::finite((1..=m).map(|k| Complex64::new(x(k), 0.0)).collect())?).re)
    };
    let tail = |j: usize| (-rho * rho / (nu + j as f64 + 1.0)).exp();
    let lhs = head(n)? * tail(n) - x(n) * x(n + 1) * head(n - 1)? * tail(n + 1);
    let rhs = (ln_gamma_abs(nu + 1.0) - nu * rho.ln()).exp() * bessel_j(nu, 2.0 * rho, tol)?;
    Ok(rel(lhs, rhs, 0.0))
}

/// `P_n^{(L)}(η; z)`; `n = -1` gives 0.
pub fn coulomb_p(p: &CoulombParams, n: i64, z: f64) -> Result<f64> {
    check_finite("z", z)?;
    if n < -1 {
        return Err(Error::invalid(format!("degree {n} below -1")));
    }
    let (op, _) = coulomb_sequences(p)?;
    Ok(if n < 0 { 0.0 } else { op_first_kind(&op, n as usize, z) })
}

/// `R_n^{(L)}(η; ρ) = P_n^{(L)}(η; 1/ρ)`.
pub fn coulomb_r(p: &CoulombParams, n: i64, rho: f64) -> Result<f64> {
    check_finite("rho", rho)?;
    if rho == 0.0 {
        return Err(Error::invalid("R_n requires rho != 0"));
    }
    coulomb_p(p, n, 1.0 / rho)
}

/// `h_k(n,L) = k(2L+k+1)(2n-k+2)(2L+2n-k+3) / (4(2n-2k+1)(2n-2k+3))`.
pub fn h_coeff(k: usize, n: usize, l: f64) -> f64 {
    let (k, n) = (k as f64, n as f64);
    k * (2.0 * l + k + 1.0) * (2.0 * n - k + 2.0) * (2.0 * l + 2.0 * n - k + 3.0)
        / (4.0 * (2.0 * n - 2.0 * k + 1.0) * (2.0 * n - 2.0 * k + 3.0))
}

/// `Q_0(n,L;η), ..., Q_{k_max}(n,L;η)` from `Q_{k+1} = η Q_k - h_k Q_{k-1}`.
pub fn q_table(n: usize, l: f64, eta: f64, k_max: usize) -> Vec<f64> {
    let mut q = Vec::with_capacity(k_max + 1);
    let (mut prev, mut cur) = (0.0, 1.0);
    q.push(cur);
    for k in 0..k_max {
        let next = eta * cur - h_coeff(k, n, l) * prev;
        prev = cur;
        cur = next;
        q.push(cur);
    }
    q
}

/// `(α_k(n,L), β_k(n,L))` of the two-term shift relation in `n`.
pub fn shift_coeffs(k: usize, n: usize, l: f64) -> (f64, f64) {
    let (k, n) = (k as f64, n as f64);
    let den = (2.0 * n - k + 1.0) * (2.0 * l + 2.0 * n - k + 2.0);
    let alpha = 2.0 * (2.0 * n - 2.0 * k + 1.0) * (l + n + 1.0) / den;
    let beta = k * (2.0 * l + k + 1.0) / den;
    (alpha, beta)
}

/// Largest relative residual of `Q_k(n) = α_k Q_k(n-1) + β_k η Q_{k-1}(n-1)`
/// over `1 ≤ n ≤ n_max`, `0 ≤ k ≤ min(n, k_max)`.
pub fn shift_relation_residual(l: f64, eta: f64, k_max: usize, n_max: usize) -> f64 {
    let mut worst = 0.0f64;
    for n in 1..=n_max {
        let kk = n.min(k_max);
        let qn = q_table(n, l, eta, kk);
        let qm = q_table(n - 1, l, eta, kk);
        for k in 0..=kk {
            let (a, b) = shift_coeffs(k, n, l);
            let t1 = a * qm[k];
            let t2 = if k == 0 { 0.0 } else { b * eta * qm[k - 1] };
            let scale = qn[k].abs().max(t1.abs()).max(t2.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max((qn[k] - t1 - t2).abs() / scale);
        }
    }
    worst
}

/// Coefficients of `P_n^{(L)}(η; z)` from the closed `Q_k`/Γ expression (`L > -1`).
pub fn coulomb_p_coeffs(p: &CoulombParams, n: usize) -> Result<PolyCoeffs> {
    let p = CoulombParams::new(p.l, p.eta)?;
    let l = p.l;
    if l <= -1.0 {
        return Err(Error::ParameterDomain(format!("explicit coefficients require L > -1, got {l}")));
    }
    let q = q_table(n, l, p.eta, n);
    let nf = n as f64;
    let ln_gamma_ratio = ln_gamma_complex(Complex64::new(l + 2.0, p.eta)).re
        - ln_gamma_complex(Complex64::new(l + nf + 2.0, p.eta)).re;
    let ln_pref = 0.5 * (2.0 * l + 2.0 * nf + 3.0).ln() - (l + 1.0).ln() - 0.5 * (2.0 * l + 3.0).ln() + ln_gamma_ratio;
    let coeffs = (0..=n)
        .map(|k| {
            let kf = k as f64;
            let ln = ln_pref + ln_gamma_abs(2.0 * nf - kf + 2.0) + ln_gamma_abs(2.0 * l + 2.0 * nf - kf + 3.0)
                - ln_gamma_abs(2.0 * nf - 2.0 * kf + 2.0)
                - ln_gamma_abs(2.0 * l + kf + 2.0)
                + (kf - nf - 1.0) * std::f64::consts::LN_2
                - ln_gamma_abs(kf + 1.0);
            ln.exp() * q[k]
        })
        .collect();
    PolyCoeffs::new(coeffs)
}

/// Maximum relative residuals of the two Coulomb polynomial identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// `R_n^{(L-1)} F_L - κ R_{n-1}^{(L)} F_{L-1} = √((2L+2n+1)/(2L+1)) F_{L+n}`.
    pub lincomb_f: f64,
    /// `P_n^{(L-1)} P_{n+s}^{(L)} - P_{n+s+1}^{(L-1)} P_{n-1}^{(L)} = (w_L/w_{L+n}) P_s^{(L+n)}`.
    pub wronskian_p: f64,
}

fn rel(lhs: f64, rhs: f64, scale: f64) -> f64 {
    (lhs - rhs).abs() / scale.max(lhs.abs()).max(rhs.abs()).max(f64::MIN_POSITIVE)
}

/// Residual of the `F_L` linear-combination identity at one point (`0 ≠ L > -1/2`).
pub fn lincomb_f_residual(p: &CoulombParams, n: usize, rho: f64, tol: f64) -> Result<f64> {
    let l = p.l;
    if !(l > -0.5) || l == 0.0 {
        return Err(Error::ParameterDomain(format!("identity requires 0 != L > -1/2, got {l}")));
    }
    let lower = p.raised(-1.0)?;
    let eta2 = p.eta * p.eta;
    let kappa = (l + 1.0) / l * ((2.0 * l + 3.0) / (2.0 * l + 1.0)).sqrt() * (eta2 + l * l).sqrt()
        / (eta2 + (l + 1.0) * (l + 1.0)).sqrt();
    let f_l = f_and_df(p, rho, tol)?.f;
    let f_lm = f_and_df(&lower, rho, tol)?.f;
    let f_ln = f_and_df(&p.raised(n as f64)?, rho, tol)?.f;
    let t1 = coulomb_r(&lower, n as i64, rho)? * f_l;
    let t2 = kappa * coulomb_r(p, n as i64 - 1, rho)? * f_lm;
    let rhs = ((2.0 * l + 2.0 * n as f64 + 1.0) / (2.0 * l + 1.0)).sqrt() * f_ln;
    Ok(rel(t1 - t2, rhs, t1.abs().max(t2.abs())))
}

/// Residual of the polynomial Wronskian-type identity at one point.
pub fn wronskian_p_residual(p: &CoulombParams, n: usize, s: usize, z: f64) -> Result<f64> {
    let lower = p.raised(-1.0)?;
    let (n, s) = (n as i64, s as i64);
    let t1 = coulomb_p(&lower, n, z)? * coulomb_p(p, n + s, z)?;
    let t2 = coulomb_p(&lower, n + s + 1, z)? * coulomb_p(p, n - 1, z)?;
    let ratio = weight_coulomb(p.l, p.eta) / weight_coulomb(p.l + n as f64, p.eta);
    let rhs = ratio * coulomb_p(&p.raised(n as f64)?, s, z)?;
    Ok(rel(t1 - t2, rhs, t1.abs().max(t2.abs())))
}

/// Both identities over `n ≤ n_max`, `s ≤ s_max` and the given `ρ` grid
/// (`z = 1/ρ` for the polynomial identity).
pub fn identity_suite(p: &CoulombParams, n_max: usize, s_max: usize, rhos: &[f64], tol: f64) -> Result<IdentityReport> {
    let mut lincomb = 0.0f64;
    let mut wronsk = 0.0f64;
    for &rho in rhos {
        check_finite("rho", rho)?;
        for n in 0..=n_max {
            lincomb = lincomb.max(lincomb_f_residual(p, n, rho, tol)?);
            for s in 0..=s_max {
                wronsk = wronsk.max(wronskian_p_residual(p, n, s, 1.0 / rho)?);
            }
        }
    }
    Ok(IdentityReport { lincomb_f: lincomb, wronskian_p: wronsk })
}

/// `√((2L+3)(2L+2n+1)) C_{L+n}(η) ρ^{L+n} R_{n-1}^{(L)}(η;ρ)`, which tends to
/// `√(1+η²/(L+1)²) F_L(η,ρ)` as `n → ∞` (`ρ > 0`).
pub fn hurwitz_term(p: &CoulombParams, n: usize, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::invalid("limit term evaluated for rho > 0 only"));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let (sign, ln_c) = ln_c_l(&p.raised(nf)?)?;
    let r = coulomb_r(p, n as i64 - 1, rho)?;
    let ln = 0.5 * ((2.0 * p.l + 3.0) * (2.0 * p.l + 2.0 * nf + 1.0)).ln() + ln_c + (p.l + nf) * rho.ln();
    Ok(sign * ln.exp() * r)
}

/// Discrete orthogonality measure supported on reciprocal zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    /// `(x_k, Λ_k)` with `x_k = 1/ρ_k`, by nondecreasing `|ρ_k|`.
    pub atoms: Vec<(f64, f64)>,
    /// Mass at 0; asserted 0 for `J_L`, reported with sign for `J̃_L`.
    pub mass_at_zero: f64,
    /// Mass not carried by the listed atoms.
    pub tail_defect: f64,
    /// Zero-spacing majorant for the omitted masses.
    pub tail_majorant: f64,
    /// Per-zero error bounds from the zero finder.
    pub zero_error_bounds: Vec<f64>,
    pub truncation_order: usize,
}

impl DiscreteMeasure {
    pub fn total_atom_mass(&self) -> f64 {
        let mut v: Vec<f64> = self.atoms.iter().map(|a| a.1).collect();
        v.sort_by(f64::total_cmp);
        v.iter().sum()
    }

    /// Largest `|x|` over omitted atoms.
    pub fn tail_radius(&self) -> f64 {
        self.atoms.last().map_or(f64::INFINITY, |a| a.0.abs())
    }

    /// `Σ_k Λ_k f(x_k)` summed smallest-mass first.
    pub fn integrate<F: Fn(f64) -> f64 + Sync>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self.atoms.par_iter().rev().map(|&(x, m)| m * f(x)).collect();
        terms.iter().sum()
    }
}

/// Upper bound on `Σ |ρ|^{-power}` over the zeros beyond those listed, from a
/// conservative linear spacing fit `ρ_{last+j} ≥ r + 0.9 b j` on each sign,
/// with `b` the smallest spacing among the last quarter of listed zeros
/// (capped at the asymptotic spacing π).
pub fn tail_power_bound(zeros: &[f64], power: u32) -> f64 {
    if power < 2 {
        return f64::INFINITY;
    }
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let mut z: Vec<f64> = zeros.iter().filter(|x| x.signum() == sign).map(|x| x.abs()).collect();
        z.sort_by(f64::total_cmp);
        if z.len() < 4 {
            return f64::INFINITY;
        }
        let tail = &z[z.len() - z.len() / 4 - 1..];
        let b = 0.9 * tail.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min).min(std::f64::consts::PI);
        let r = z[z.len() - 1];
        // Σ_{j≥1} (r+bj)^{-p} ≤ ∫_0^∞ (r+bt)^{-p} dt
        let p = power as f64;
        total += r.powf(1.0 - p) / (b * (p - 1.0));
    }
    total
}

/// Orthogonality measure of `P_n^{(L)}` (or of the derivative family when
/// `tilde`) from the first `k` zeros and the closed-form jumps.
pub fn orthogonality_measure(p: &CoulombParams, k: usize, tol: f64, tilde: bool) -> Result<DiscreteMeasure> {
    orthogonality_measure_with(p, &ZeroOptions::new(k, tol), tilde)
}

pub fn orthogonality_measure_with(p: &CoulombParams, opts: &ZeroOptions, tilde: bool) -> Result<DiscreteMeasure> {
    let p = CoulombParams::new(p.l, p.eta)?;
    let (l, eta) = (p.l, p.eta);
    let l1 = l + 1.0;
    if tilde {
        let r = coulomb::zeros_df_with(&p, opts)?;
        let atoms: Vec<(f64, f64)> =
            r.zeros.iter().map(|&z| (1.0 / z, l1 / (z * z - 2.0 * eta * z - l * l1))).collect();
        let rmax = r.zeros.last().map_or(0.0, |z| z.abs());
        let shrink = 1.0 - 2.0 * eta.abs() / rmax - (l * l1).abs() / (rmax * rmax);
        let majorant = if shrink > 0.0 { l1 / shrink * tail_power_bound(&r.zeros, 2) } else { f64::INFINITY };
        let mut m = DiscreteMeasure {
            atoms,
            mass_at_zero: 0.0,
            tail_defect: majorant,
            tail_majorant: majorant,
            zero_error_bounds: r.error_bounds,
            truncation_order: r.truncation_order,
        };
        m.mass_at_zero = 1.0 - m.total_atom_mass() - majorant;
        return Ok(m);
    }
    let r = coulomb::zeros_f_with(&p, opts)?;
    let c = (2.0 * l + 3.0) * l1 * l1 / (l1 * l1 + eta * eta);
    let atoms: Vec<(f64, f64)> = r.zeros.iter().map(|&z| (1.0 / z, c / (z * z))).collect();
    let majorant = c * tail_power_bound(&r.zeros, 2);
    let mut m = DiscreteMeasure {
        atoms,
        mass_at_zero: 0.0,
        tail_defect: 0.0,
        tail_majorant: majorant,
        zero_error_bounds: r.error_bounds,
        truncation_order: r.truncation_order,
    };
    m.tail_defect = 1.0 - m.total_atom_mass();
    Ok(m)
}

/// Gram matrix residuals `|∫ P_m P_n dμ - δ_mn|` and per-entry bounds
/// `tail_defect · sup_{|x| ≤ tail_radius} |P_m P_n|` for the omitted atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    pub residuals: Vec<Vec<f64>>,
    pub tail_bounds: Vec<Vec<f64>>,
    /// Residuals with the tail defect placed as one atom at `x = 0`.
    pub lumped_residuals: Vec<Vec<f64>>,
    /// `Σ_k ρ_k^{-2} R_n(ρ_k)²` for each `n`.
    pub norms: Vec<f64>,
    /// `((L+1)² + η²)/((2L+3)(L+1)²)`.
    pub norm_constant: f64,
}

pub fn orthogonality_check(p: &CoulombParams, measure: &DiscreteMeasure, n_max: usize) -> Result<OrthogonalityReport> {
    let (op, _) = coulomb_sequences(p)?;
    let l1 = p.l + 1.0;
    let norm_constant = (l1 * l1 + p.eta * p.eta) / ((2.0 * p.l + 3.0) * l1 * l1);
    let values: Vec<Vec<f64>> = measure.atoms.par_iter().map(|&(x, _)| op_first_kind_all(&op, n_max, x)).collect();
    let r = measure.tail_radius();
    let sup: Vec<f64> = if p.l > -1.0 {
        (0..=n_max).map(|n| coulomb_p_coeffs(p, n).map(|c| c.abs_bound(r))).collect::<Result<_>>()?
    } else {
        (0..=n_max)
            .map(|n| (0..=256).map(|i| op_first_kind(&op, n, r * (i as f64 / 128.0 - 1.0)).abs()).fold(0.0, f64::max) * 1.01)
            .collect()
    };
    let mut residuals = vec![vec![0.0; n_max + 1]; n_max + 1];
    let mut tail_bounds = residuals.clone();
    let mut lumped_residuals = residuals.clone();
    let mut norms = vec![0.0; n_max + 1];
    let at_zero = op_first_kind_all(&op, n_max, 0.0);
    for m in 0..=n_max {
        for n in 0..=n_max {
            let mut terms: Vec<f64> = measure.atoms.iter().zip(&values).map(|(a, v)| a.1 * v[m] * v[n]).collect();
            terms.reverse();
            let s: f64 = terms.iter().sum();
            let delta = if m == n { 1.0 } else { 0.0 };
            residuals[m][n] = (s - delta).abs();
            lumped_residuals[m][n] = (s + measure.tail_defect * at_zero[m] * at_zero[n] - delta).abs();
            if m == n {
                norms[n] = s * norm_constant;
            }
            tail_bounds[m][n] = measure.tail_defect.abs() * sup[m] * sup[n];
        }
    }
    Ok(OrthogonalityReport { residuals, tail_bounds, lumped_residuals, norms, norm_constant })
}

/// Sign changes of `P_{n+1}` between consecutive zeros of `P_n`, the zeros of
/// `P_n` being the eigenvalues of the `n × n` truncation.
pub fn zeros_interlace(op: &JacobiOperator, n: usize, tol: f64) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    let zn = crate::jacobi::eigenvalues_sym_tridiag(&op.truncate(n)?, tol)?;
    let zn1 = crate::jacobi::eigenvalues_sym_tridiag(&op.truncate(n + 1)?, tol)?;
    for i in 0..n {
        if !(zn1[i] < zn[i] && zn[i] < zn1[i + 1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The derivative-family operator `J̃_L`, re-exported for polynomial use.
pub fn tilde_operator(p: &CoulombParams) -> Result<JacobiOperator> {
    Ok(coulomb_sequences_tilde(p)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coulomb_op(l: f64, eta: f64) -> JacobiOperator {
        coulomb_sequences(&CoulombParams::new(l, eta).unwrap()).unwrap().0
    }

    #[test]
    fn initial_values() {
        let op = coulomb_op(0.3, 0.7);
        assert_eq!(op_first_kind(&op, 0, 0.4), 1.0);
        assert!(op_first_kind(&op, 1, op.lambda(0)).abs() < 1e-16);
        assert_eq!(op_second_kind(&op, 0, 0.4), 0.0);
        assert_eq!(op_second_kind(&op, 1, 0.4), 1.0 / op.weight(0));
    }

    #[test]
    fn wronskian_is_constant() {
        let op = coulomb_op(0.3, 0.7);
        let z = 0.37;
        for n in 0..=20 {
            let a = op_first_kind(&op, n + 1, z) * op_second_kind(&op, n, z);
            let b = op_first_kind(&op, n, z) * op_second_kind(&op, n + 1, z);
            let w = op.weight(n) * (a - b);
            let scale = op.weight(n) * (a.abs() + b.abs());
            assert!((w + 1.0).abs() < 1e-12 * scale, "n = {n}: {w}");
        }
    }

    #[test]
    fn lommel_low_degrees() {
        assert_eq!(lommel_r(-1, 1.3, 2.0).unwrap(), 0.0);
        assert_eq!(lommel_r(0, 1.3, 2.0).unwrap(), 1.0);
        assert!((lommel_r(1, 1.3, 2.0).unwrap() - 1.3).abs() < 1e-15);
        assert!(lommel_r(2, 0.0, 1.0).is_err());
        assert!(lommel_r(2, -2.0, 1.0).is_err());
        assert!(lommel_r(2, 1.0, 0.0).is_err());
    }

    #[test]
    fn h_and_q_start() {
        let q = q_table(5, 0.3, 0.7, 3);
        assert_eq!(q[0], 1.0);
        assert_eq!(q[1], 0.7);
        assert!((q[2] - (0.49 - h_coeff(1, 5, 0.3))).abs() < 1e-15);
        assert_eq!(h_coeff(0, 5, 0.3), 0.0);
    }

    #[test]
    fn shift_coeffs_sum_to_one() {
        for k in 0..8 {
            let (a, b) = shift_coeffs(k, 9, 0.3);
            assert!((a + b - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn degree_one_coefficients() {
        let p = CoulombParams::new(0.3, 0.7).unwrap();
        let c = coulomb_p_coeffs(&p, 1).unwrap();
        let op = coulomb_op(0.3, 0.7);
        assert!((c.coeffs()[0] - 1.0 / op.weight(0)).abs() < 1e-13);
        assert!((c.coeffs()[1] + op.lambda(0) / op.weight(0)).abs() < 1e-13);
    }

    #[test]
    fn abs_bound_dominates() {
        let c = PolyCoeffs::new(vec![2.0, -3.0, 1.0]).unwrap();
        assert_eq!(c.eval(1.0), 0.0);
        assert_eq!(c.abs_bound(-1.0), 6.0);
        assert!(PolyCoeffs::new(vec![0.0, 1.0]).is_err());
    }
}
