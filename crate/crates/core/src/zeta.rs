//! Spectral zeta function `ζ_L(k) = Σ_n ρ_{L,n}^{-k}` of the Coulomb zeros.
//!
//! Values come from the convolution recurrence
//!
//! ```text
//! ζ_L(2)   = (1 + η²/(L+1)²) / (2L+3)
//! ζ_L(k+1) = ( -(2η/(L+1)) ζ_L(k) + Σ_{l=1}^{k-2} ζ_L(l+1) ζ_L(k-l) ) / (2L+k+2)
//! ```
//!
//! and feed Euler-type bounds on the smallest zero, the moments of the
//! orthogonality measure and several independent consistency checks.

use crate::coulomb::{phi_l, phi_taylor_coeffs, CoulombParams};
use crate::error::{check_finite, Error, Result};
use crate::gamma::ln_gamma_complex;
use num_complex::Complex64;

/// Pairwise summation.
fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 8 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `ζ_L(2), ..., ζ_L(k_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaTable {
    pub params: CoulombParams,
    pub values: Vec<f64>,
}

impl ZetaTable {
    /// `ζ_L(k)` for `2 ≤ k ≤ k_max`.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(2).and_then(|i| self.values.get(i).copied())
    }

    pub fn k_max(&self) -> usize {
        self.values.len() + 1
    }
}

/// `η/(L+1)`, taken as 0 when `η = 0` (covers `L = -1`).
fn eta_ratio(p: &CoulombParams) -> f64 {
    if p.eta == 0.0 {
        0.0
    } else {
        p.eta / (p.l + 1.0)
    }
}

/// `ζ_L(2) = (1 + η²/(L+1)²) / (2L+3)`.
pub fn zeta_two(p: &CoulombParams) -> Result<f64> {
    let p = CoulombParams::new(p.l, p.eta)?;
    let r = eta_ratio(&p);
    Ok((1.0 + r * r) / (2.0 * p.l + 3.0))
}

pub fn zeta_table(p: &CoulombParams, k_max: usize) -> Result<ZetaTable> {
    if k_max < 2 {
        return Err(Error::invalid(format!("k_max must be at least 2, got {k_max}")));
    }
    let p = CoulombParams::new(p.l, p.eta)?;
    let c = 2.0 * eta_ratio(&p);
    // z[i] = ζ(i + 2)
    let mut z = vec![zeta_two(&p)?];
    let mut conv = Vec::with_capacity(k_max);
    for k in 2..k_max {
        conv.clear();
        conv.extend((1..=k.saturating_sub(2)).map(|l| z[l - 1] * z[k - l - 2]));
        z.push((-c * z[k - 2] + pairwise_sum(&conv)) / (2.0 * p.l + k as f64 + 2.0));
    }
    Ok(ZetaTable { params: p, values: z })
}

/// Rayleigh sums `σ_2(ν), σ_4(ν), ..., σ_{2 n_max}(ν)` of `Σ_k j_{ν,k}^{-2n}`.
pub fn rayleigh_sigma(nu: f64, n_max: usize) -> Result<Vec<f64>> {
    check_finite("nu", nu)?;
    if nu <= -1.0 {
        return Err(Error::ParameterDomain(format!("nu must exceed -1, got {nu}")));
    }
    if n_max == 0 {
        return Ok(Vec::new());
    }
    let mut s = vec![0.25 / (nu + 1.0)];
    let mut conv = Vec::with_capacity(n_max);
    for n in 2..=n_max {
        conv.clear();
        conv.extend((1..n).map(|k| s[k - 1] * s[n - k - 1]));
        s.push(pairwise_sum(&conv) / (n as f64 + nu));
    }
    Ok(s)
}

/// Bounds `ζ(2s)^{-1/s} < ρ_{L,1}² < ζ(2s)/ζ(2s+2)` for `s = 1..s_max`.
pub fn euler_bounds(p: &CoulombParams, s_max: usize) -> Result<Vec<(f64, f64)>> {
    if s_max == 0 {
        return Err(Error::invalid("s_max must be at least 1"));
    }
    let t = zeta_table(p, 2 * s_max + 2)?;
    Ok((1..=s_max)
        .map(|s| {
            let a = t.get(2 * s).unwrap();
            let b = t.get(2 * s + 2).unwrap();
            (a.powf(-1.0 / s as f64), a / b)
        })
        .collect())
}

/// The `s = 1` bounds in closed form as implied by the recurrence:
/// `(2L+3)(L+1)²/((L+1)²+η²)` and
/// `(2L+3)(2L+5)(L+2)(L+1)²/((5L+8)η² + (L+2)(L+1)²)`.
pub fn euler_bounds_s1_closed(p: &CoulombParams) -> Result<(f64, f64)> {
    let p = CoulombParams::new(p.l, p.eta)?;
    let (l, e2) = (p.l, p.eta * p.eta);
    let l1 = (l + 1.0) * (l + 1.0);
    let lower = (2.0 * l + 3.0) * l1 / (l1 + e2);
    let upper = (2.0 * l + 3.0) * (2.0 * l + 5.0) * (l + 2.0) * l1 / ((5.0 * l + 8.0) * e2 + (l + 2.0) * l1);
    Ok((lower, upper))
}

/// Moments `m_n = ζ_L(n+2)/ζ_L(2)` of the orthogonality measure, `n = 0..=n_max`.
pub fn measure_moments(p: &CoulombParams, n_max: usize) -> Result<Vec<f64>> {
    let t = zeta_table(p, n_max + 2)?;
    let z2 = t.values[0];
    Ok(t.values.iter().map(|z| z / z2).collect())
}

/// Largest relative residual over `k = 0..=k_max` of the linear relation
///
/// ```text
/// 2[(L+1)²+η²]/((L+1)(L+1-iη)) · Γ(L+2-iη+k)/(Γ(2L+4+k) k!)
///     = Σ_{l=0}^{k} Γ(L+1-iη+k-l) (2i)^{-l} / (Γ(2L+2+k-l) (k-l)!) · ζ_L(l+2)
/// ```
pub fn gamma_identity_check(p: &CoulombParams, k_max: usize) -> Result<f64> {
    let p = CoulombParams::new(p.l, p.eta)?;
    if p.l <= -1.0 {
        return Err(Error::ParameterDomain(format!("identity requires L > -1, got {}", p.l)));
    }
    let t = zeta_table(&p, k_max + 2)?;
    let (l, eta) = (p.l, p.eta);
    let lg = |z: Complex64| ln_gamma_complex(z);
    let lgr = |x: f64| ln_gamma_complex(Complex64::new(x, 0.0));
    let pre = Complex64::new(2.0 * ((l + 1.0).powi(2) + eta * eta), 0.0) / ((l + 1.0) * Complex64::new(l + 1.0, -eta));
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let kf = k as f64;
        let lhs = pre * (lg(Complex64::new(l + 2.0 + kf, -eta)) - lgr(2.0 * l + 4.0 + kf) - lgr(kf + 1.0)).exp();
        let mut rhs = Complex64::new(0.0, 0.0);
        let mut scale = lhs.norm();
        for j in 0..=k {
            let m = (k - j) as f64;
            let term = (lg(Complex64::new(l + 1.0 + m, -eta)) - lgr(2.0 * l + 2.0 + m) - lgr(m + 1.0)).exp()
                * Complex64::new(0.0, 2.0).powi(-(j as i32))
                * t.get(j + 2).unwrap();
            scale = scale.max(term.norm());
            rhs += term;
        }
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(worst)
}

/// `ln φ_L(ρ) + Σ_{k=2}^{k_max} ζ_L(k) ρ^k / k - ηρ/(L+1)` for `|ρ| < |ρ_{L,1}|`.
pub fn hadamard_residual(p: &CoulombParams, rho: f64, k_max: usize, tol: f64) -> Result<f64> {
    let t = zeta_table(p, k_max)?;
    let phi = phi_l(p, rho, tol)?.phi;
    if !(phi > 0.0) {
        return Err(Error::OutOfRange(format!("rho = {rho} is beyond the first zero")));
    }
    let terms: Vec<f64> = (2..=k_max).map(|k| t.get(k).unwrap() * rho.powi(k as i32) / k as f64).collect();
    Ok(phi.ln() + pairwise_sum(&terms) - eta_ratio(p) * rho)
}

/// Taylor coefficients of `ζ_L(2) φ_{L+1}/φ_L` at 0, by series division;
/// entry `k` should equal `ζ_L(k+2)`.
pub fn ratio_taylor_coeffs(p: &CoulombParams, n: usize) -> Result<Vec<f64>> {
    let a = phi_taylor_coeffs(p, n)?;
    let b = phi_taylor_coeffs(&p.raised(1.0)?, n)?;
    let z2 = zeta_two(p)?;
    let mut q = vec![0.0; n + 1];
    for k in 0..=n {
        let s: f64 = (1..=k).map(|j| a[j] * q[k - j]).sum();
        q[k] = (b[k] - s) / a[0];
    }
    Ok(q.into_iter().map(|x| z2 * x).collect())
}

/// Direct power sums `Σ ρ̃^{-2s}`, `s = 1..=s_max`, over the first `count`
/// zeros of `∂_ρF_L`, each with a tail majorant.
pub fn tilde_zero_sums(p: &CoulombParams, count: usize, s_max: usize, tol: f64) -> Result<Vec<(f64, f64)>> {
    let r = crate::coulomb::zeros_df(p, count, tol)?;
    Ok((1..=s_max as u32)
        .map(|s| {
            let mut terms: Vec<f64> = r.zeros.iter().map(|z| z.powi(-2 * s as i32)).collect();
            terms.reverse();
            (terms.iter().sum(), crate::opoly::tail_power_bound(&r.zeros, 2 * s))
        })
        .collect())
}
