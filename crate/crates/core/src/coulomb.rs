//! Regular Coulomb wave functions through their Jacobi operators.
//!
//! `F_L(η,ρ) = C_L(η) ρ^{L+1} φ_L(η,ρ)` where `φ_L` is entire and equals the
//! regularized characteristic function of the Jacobi operator `J_L` with
//!
//! ```text
//! λ_n = -η / (n(n+1)),   w_n = √((n+1)² + η²) / ((n+1) √((2n+1)(2n+3))),
//! ```
//!
//! taken from `n = L+1` onwards. The zeros of `φ_L` are the reciprocals of
//! the nonzero eigenvalues of `J_L`; the zeros of `∂_ρ F_L` come the same way
//! from the operator `J̃_L` with one extra leading row.
//!
//! `φ_L` itself is summed from its Kummer series in double-double complex
//! arithmetic, which keeps full double precision up to `|ρ| ≈ 20`.

use crate::error::{check_finite, check_tol, Error, Result};
use crate::gamma::{gamma_sign, is_gamma_pole, ln_gamma_abs, ln_gamma_complex};
use crate::jacobi::{
    self, DecayDescriptor, JacobiOperator, SpectrumResult, TailModel, ZeroOptions,
};
use crate::dd::{CDd, Dd};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Coulomb parameters `(L, η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    pub l: f64,
    pub eta: f64,
}

impl CoulombParams {
    /// Parameters admissible for `J_L`: `L > -3/2`, and `L ≠ -1` unless `η = 0`.
    pub fn new(l: f64, eta: f64) -> Result<Self> {
        check_finite("L", l)?;
        check_finite("eta", eta)?;
        if l <= -1.5 {
            return Err(Error::ParameterDomain(format!("L must exceed -3/2, got {l}")));
        }
        if l == -1.0 && eta != 0.0 {
            return Err(Error::ParameterDomain("L = -1 requires eta = 0".into()));
        }
        Ok(CoulombParams { l, eta })
    }

    /// Additional requirement `L > -1/2` of the derivative operator `J̃_L`.
    pub fn check_tilde(&self) -> Result<()> {
        if self.l > -0.5 {
            Ok(())
        } else {
            Err(Error::ParameterDomain(format!("derivative operator requires L > -1/2, got {}", self.l)))
        }
    }

    /// Same `η`, `L` raised by `k`.
    pub fn raised(&self, k: f64) -> Result<Self> {
        CoulombParams::new(self.l + k, self.eta)
    }

    fn is_integer_l(&self) -> bool {
        self.l == self.l.round()
    }
}

/// `λ_m = -η / (m(m+1))`, with `λ = 0` whenever `η = 0`.
pub fn lambda_coulomb(m: f64, eta: f64) -> f64 {
    if eta == 0.0 {
        0.0
    } else {
        -eta / (m * (m + 1.0))
    }
}

/// `w_m = √((m+1)² + η²) / ((m+1) √((2m+1)(2m+3)))`.
pub fn weight_coulomb(m: f64, eta: f64) -> f64 {
    let x = m + 1.0;
    (x * x + eta * eta).sqrt() / (x * ((2.0 * m + 1.0) * (2.0 * m + 3.0)).sqrt())
}

/// `Σ_{k≥0} 1/(x_k²(4x_k²-1))` with `x_k = x0 + k`, `x0 > 1/2`.
fn t_sum(x0: f64) -> f64 {
    let mut x = x0;
    let mut acc = 0.0;
    while x < 16.0 {
        acc += 1.0 / (x * x * (4.0 * x * x - 1.0));
        x += 1.0;
    }
    // 2/(2x-1) - ψ'(x) expanded in 1/x; the leading two orders cancel.
    let r = 1.0 / x;
    let geo = |k: i32| 0.5f64.powi(k - 1);
    let bern = [0.0, 0.0, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0, 0.0, -691.0 / 2730.0, 0.0, 7.0 / 6.0];
    let mut s = 0.0;
    for k in (3..=15).rev() {
        s = s * r + (geo(k) - bern[k as usize - 1]);
    }
    let rest = r.powi(16) * 0.5f64.powi(15) / (1.0 - 0.5 * r);
    acc + s * r.powi(3) + rest
}

/// Closed-form tails of the Coulomb sequences starting at `m > -1/2`.
#[derive(Debug, Clone, Copy)]
struct Tails {
    eta: f64,
}

impl Tails {
    fn lambda_abs_sum(&self, m: f64) -> f64 {
        if self.eta == 0.0 {
            0.0
        } else if m > 0.0 {
            self.eta.abs() / m
        } else {
            lambda_coulomb(m, self.eta).abs() + self.lambda_abs_sum(m + 1.0)
        }
    }

    fn lambda_sum(&self, m: f64) -> f64 {
        if self.eta == 0.0 {
            0.0
        } else if m > 0.0 {
            -self.eta / m
        } else {
            lambda_coulomb(m, self.eta) + self.lambda_sum(m + 1.0)
        }
    }

    fn lambda_sup(&self, m: f64) -> f64 {
        if self.eta == 0.0 {
            0.0
        } else if m > 0.0 {
            lambda_coulomb(m, self.eta).abs()
        } else {
            lambda_coulomb(m, self.eta).abs().max(self.lambda_sup(m + 1.0))
        }
    }

    fn weight_sq_sum(&self, m: f64) -> f64 {
        0.5 / (2.0 * m + 1.0) + self.eta * self.eta * t_sum(m + 1.0)
    }

    fn weight_sup(&self, m: f64) -> f64 {
        weight_coulomb(m, self.eta)
    }
}

fn decay_from(tails: Tails, index_to_m: Arc<dyn Fn(usize) -> f64 + Send + Sync>, head: Option<(f64, f64)>) -> DecayDescriptor {
    // `head` is an extra leading entry (λ, w) at index 0, shifting the rest by one.
    let (hl, hw) = head.unwrap_or((0.0, 0.0));
    let shift = usize::from(head.is_some());
    let m: Arc<dyn Fn(usize) -> f64 + Send + Sync> = Arc::new(move |n: usize| index_to_m(n - shift));
    let has_head = head.is_some();
    macro_rules! rule {
        ($f:expr, $h:expr) => {{
            let m = m.clone();
            move |n: usize| {
                if has_head && n == 0 {
                    $h(m(1))
                } else {
                    $f(m(n))
                }
            }
        }};
    }
    let lam_abs = rule!(|x| tails.lambda_abs_sum(x), |x| hl.abs() + tails.lambda_abs_sum(x));
    let w2 = rule!(|x| tails.weight_sq_sum(x), |x| hw * hw + tails.weight_sq_sum(x));
    let lam_sum = rule!(|x| tails.lambda_sum(x), |x| hl + tails.lambda_sum(x));
    let lam_sup = rule!(|x| tails.lambda_sup(x), |x| hl.abs().max(tails.lambda_sup(x)));
    let w_sup = rule!(|x| tails.weight_sup(x), |x| hw.max(tails.weight_sup(x)));
    let w2_model = w2.clone();
    DecayDescriptor::new(lam_abs, w2).with_model(TailModel {
        lambda_sum: Arc::new(lam_sum),
        weight_sq_sum: Arc::new(w2_model),
        lambda_sup: Arc::new(lam_sup),
        weight_sup: Arc::new(w_sup),
    })
}

/// The operator `J_L` (entries `λ_{L+1+j}`, `w_{L+1+j}`) and its decay data.
pub fn coulomb_sequences(p: &CoulombParams) -> Result<(JacobiOperator, DecayDescriptor)> {
    let p = CoulombParams::new(p.l, p.eta)?;
    let (l, eta) = (p.l, p.eta);
    let op = JacobiOperator::new(
        move |j| lambda_coulomb(l + 1.0 + j as f64, eta),
        move |j| weight_coulomb(l + 1.0 + j as f64, eta),
    );
    let decay = decay_from(Tails { eta }, Arc::new(move |j| l + 1.0 + j as f64), None);
    Ok((op, decay))
}

/// Leading entries `(λ̃_L, w̃_L)` of `J̃_L`.
pub fn tilde_head(p: &CoulombParams) -> (f64, f64) {
    let l1 = p.l + 1.0;
    let lam = if p.eta == 0.0 { 0.0 } else { -p.eta / (l1 * l1) };
    let w = ((2.0 * p.l + 1.0) / l1).sqrt() * weight_coulomb(p.l, p.eta);
    (lam, w)
}

/// The operator `J̃_L`: `(λ̃_L, w̃_L)` followed by the entries of `J_L`.
pub fn coulomb_sequences_tilde(p: &CoulombParams) -> Result<(JacobiOperator, DecayDescriptor)> {
    let p = CoulombParams::new(p.l, p.eta)?;
    p.check_tilde()?;
    let (l, eta) = (p.l, p.eta);
    let (hl, hw) = tilde_head(&p);
    let op = JacobiOperator::new(
        move |j| if j == 0 { hl } else { lambda_coulomb(l + j as f64, eta) },
        move |j| if j == 0 { hw } else { weight_coulomb(l + j as f64, eta) },
    );
    let decay = decay_from(Tails { eta }, Arc::new(move |j| l + 1.0 + j as f64), Some((hl, hw)));
    Ok((op, decay))
}

/// Jacobi operator whose characteristic function is `Γ(ν+1) z^{-ν} J_ν(2z)`:
/// `λ_k = 0`, `w_k = 1/√((ν+k+1)(ν+k+2))`.
pub fn bessel_sequences(nu: f64) -> Result<(JacobiOperator, DecayDescriptor)> {
    check_finite("nu", nu)?;
    if nu <= -1.0 {
        return Err(Error::ParameterDomain(format!("nu must exceed -1, got {nu}")));
    }
    let w = move |k: usize| 1.0 / ((nu + k as f64 + 1.0) * (nu + k as f64 + 2.0)).sqrt();
    let op = JacobiOperator::new(|_| 0.0, w);
    let tail = move |n: usize| 1.0 / (nu + n as f64 + 1.0);
    let decay = DecayDescriptor::new(|_| 0.0, tail).with_model(TailModel {
        lambda_sum: Arc::new(|_| 0.0),
        weight_sq_sum: Arc::new(tail),
        lambda_sup: Arc::new(|_| 0.0),
        weight_sup: Arc::new(w),
    });
    Ok((op, decay))
}

/// `φ_L`, its ρ-derivative and Kummer-series diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiEval {
    pub phi: f64,
    pub dphi: f64,
    /// Magnitude of the discarded imaginary part.
    pub imag_residue: f64,
    /// Estimated absolute error of `phi`.
    pub error_estimate: f64,
    pub series_terms: usize,
}

/// `F_L`, `∂_ρF_L` together with the underlying `φ_L` data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombEval {
    pub phi: f64,
    pub dphi: f64,
    pub f: f64,
    pub df: f64,
    pub imag_residue: f64,
    pub series_terms: usize,
}

const MAX_TERMS: usize = 100_000;

fn dd(x: f64) -> Dd {
    Dd::new(x)
}

struct KummerSum {
    value: Complex64,
    max_term: f64,
    terms: usize,
}

/// `₁F₁(L+1-iη; 2L+2; 2iρ)` summed in double-double.
fn kummer(l: f64, eta: f64, rho: f64) -> Result<KummerSum> {
    let a_re = dd(l) + 1.0;
    let b = dd(l) * 2.0 + 2.0;
    let two_rho = dd(rho) * 2.0;
    let mut term = CDd::new(dd(1.0), dd(0.0));
    let mut sum = term;
    let mut max_term = 1.0f64;
    let mut small_run = 0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let num = CDd::new(a_re + kf, dd(-eta));
        // multiply by (a+k) · 2iρ / ((b+k)(k+1))
        let den = (b + kf) * (kf + 1.0);
        term = (term * num).mul_i(two_rho).div_real(den);
        sum = sum + term;
        k += 1;
        let mag = term.norm_f64();
        max_term = max_term.max(mag);
        if mag <= 1e-34 * max_term {
            small_run += 1;
            if small_run >= 10 {
                break;
            }
        } else {
            small_run = 0;
        }
        if k >= MAX_TERMS {
            return Err(Error::Convergence { what: "Kummer series".into(), best_bound: mag });
        }
    }
    Ok(KummerSum { value: Complex64::new(sum.re.to_f64(), sum.im.to_f64()), max_term, terms: k + 1 })
}

fn phi_only(l: f64, eta: f64, rho: f64) -> Result<(f64, f64, f64, usize)> {
    if rho == 0.0 {
        return Ok((1.0, 0.0, 0.0, 0));
    }
    if l == -1.0 {
        // b = 0: the limiting function is cos ρ (η = 0 is enforced upstream).
        return Ok((rho.cos(), 0.0, f64::EPSILON, 1));
    }
    let s = kummer(l, eta, rho)?;
    let phase = Complex64::new(rho.cos(), -rho.sin());
    let v = phase * s.value;
    let err = s.max_term * 4e-32 * s.terms as f64 + 4.0 * f64::EPSILON * s.value.norm();
    Ok((v.re, v.im.abs(), err, s.terms))
}

fn check_residue(phi: f64, imag: f64) -> Result<()> {
    if imag > 1e-10 * (1.0 + phi.abs()) {
        Err(Error::PrecisionLoss(format!("imaginary residue {imag:e} exceeds tolerance for |phi| = {:e}", phi.abs())))
    } else {
        Ok(())
    }
}

/// `φ_L(η,ρ) = Re e^{-iρ} ₁F₁(L+1-iη; 2L+2; 2iρ)` and `∂_ρφ_L`.
///
/// The derivative uses `∂φ_L = (η/(L+1)) φ_L - (ρ/(2L+3))(1 + η²/(L+1)²) φ_{L+1}`.
pub fn phi_l(p: &CoulombParams, rho: f64, tol: f64) -> Result<PhiEval> {
    let p = CoulombParams::new(p.l, p.eta)?;
    check_finite("rho", rho)?;
    check_tol(tol)?;
    let (phi, imag, err, terms) = phi_only(p.l, p.eta, rho)?;
    check_residue(phi, imag)?;
    let (phi1, imag1, err1, terms1) = phi_only(p.l + 1.0, p.eta, rho)?;
    check_residue(phi1, imag1)?;
    let l1 = p.l + 1.0;
    let (c0, c1) = if p.eta == 0.0 {
        (0.0, rho / (2.0 * p.l + 3.0))
    } else {
        (p.eta / l1, rho / (2.0 * p.l + 3.0) * (1.0 + p.eta * p.eta / (l1 * l1)))
    };
    let dphi = c0 * phi - c1 * phi1;
    let error_estimate = err + c0.abs() * err + c1.abs() * err1;
    if error_estimate > tol.max(1e-12 * (1.0 + phi.abs())) {
        return Err(Error::PrecisionLoss(format!(
            "series cancellation leaves error {error_estimate:e} at rho = {rho}"
        )));
    }
    Ok(PhiEval { phi, dphi, imag_residue: imag.max(imag1), error_estimate, series_terms: terms + terms1 })
}

/// `𝒢_{J̃_L}(ρ) = φ_L + (ρ/(L+1)) ∂_ρφ_L`.
pub fn phi_tilde(p: &CoulombParams, rho: f64, tol: f64) -> Result<f64> {
    p.check_tilde()?;
    let e = phi_l(p, rho, tol)?;
    Ok(e.phi + rho / (p.l + 1.0) * e.dphi)
}

/// Sign and `ln|C_L(η)|` with `C_L(η) = 2^L e^{-πη/2} |Γ(L+1+iη)| / Γ(2L+2)`.
pub fn ln_c_l(p: &CoulombParams) -> Result<(f64, f64)> {
    check_finite("L", p.l)?;
    check_finite("eta", p.eta)?;
    if p.l <= -1.5 || is_gamma_pole(2.0 * p.l + 2.0) {
        return Err(Error::ParameterDomain(format!("C_L undefined at L = {}", p.l)));
    }
    if is_gamma_pole(p.l + 1.0) && p.eta == 0.0 {
        return Err(Error::ParameterDomain(format!("C_L undefined at L = {}, eta = 0", p.l)));
    }
    let lg = ln_gamma_complex(Complex64::new(p.l + 1.0, p.eta)).re;
    let ln = p.l * std::f64::consts::LN_2 - PI * p.eta / 2.0 + lg - ln_gamma_abs(2.0 * p.l + 2.0);
    let mut sign = gamma_sign(2.0 * p.l + 2.0);
    if p.eta == 0.0 {
        sign *= gamma_sign(p.l + 1.0);
    }
    Ok((sign, ln))
}

/// Normalization constant `C_L(η)`; negative for some `L ∈ (-3/2, -1)`.
pub fn c_l(p: &CoulombParams) -> Result<f64> {
    let (s, ln) = ln_c_l(p)?;
    Ok(s * ln.exp())
}

fn rho_power(p: &CoulombParams, rho: f64, e: f64) -> Result<f64> {
    if rho > 0.0 {
        Ok(rho.powf(e))
    } else if p.is_integer_l() {
        Ok(rho.powi(e as i32))
    } else {
        Err(Error::ParameterDomain("F_L at negative rho requires integer L".into()))
    }
}

/// `F_L(η,ρ) = C_L ρ^{L+1} φ_L` and `∂_ρF_L = C_L((L+1)ρ^L φ_L + ρ^{L+1} ∂_ρφ_L)`.
pub fn f_and_df(p: &CoulombParams, rho: f64, tol: f64) -> Result<CoulombEval> {
    check_finite("rho", rho)?;
    if rho == 0.0 {
        return Err(Error::InvalidInput("F_L evaluation requires rho != 0".into()));
    }
    let e = phi_l(p, rho, tol)?;
    let c = c_l(p)?;
    let pl1 = rho_power(p, rho, p.l + 1.0)?;
    let pl = pl1 / rho;
    Ok(CoulombEval {
        phi: e.phi,
        dphi: e.dphi,
        f: c * pl1 * e.phi,
        df: c * ((p.l + 1.0) * pl * e.phi + pl1 * e.dphi),
        imag_residue: e.imag_residue,
        series_terms: e.series_terms,
    })
}

/// Zeros of `φ_L` (the nonzero zeros of `F_L`), both signs, by nondecreasing modulus.
pub fn zeros_f(p: &CoulombParams, count: usize, tol: f64) -> Result<SpectrumResult> {
    zeros_f_with(p, &ZeroOptions::new(count, tol))
}

pub fn zeros_f_with(p: &CoulombParams, opts: &ZeroOptions) -> Result<SpectrumResult> {
    let (op, decay) = coulomb_sequences(p)?;
    jacobi::zeros_of_g_with(&op, &decay, opts)
}

/// Zeros of `𝒢_{J̃_L}`, i.e. the nonzero zeros of `∂_ρF_L`.
pub fn zeros_df(p: &CoulombParams, count: usize, tol: f64) -> Result<SpectrumResult> {
    zeros_df_with(p, &ZeroOptions::new(count, tol))
}

pub fn zeros_df_with(p: &CoulombParams, opts: &ZeroOptions) -> Result<SpectrumResult> {
    let (op, decay) = coulomb_sequences_tilde(p)?;
    jacobi::zeros_of_g_with(&op, &decay, opts)
}

/// `J_ν(x)` from its power series in double-double arithmetic, `|x| ≤ 40`.
pub fn bessel_j(nu: f64, x: f64, tol: f64) -> Result<f64> {
    check_finite("nu", nu)?;
    check_finite("x", x)?;
    check_tol(tol)?;
    if x.abs() > 40.0 {
        return Err(Error::OutOfRange(format!("|x| = {} exceeds 40", x.abs())));
    }
    if is_gamma_pole(nu + 1.0) {
        return Err(Error::ParameterDomain(format!("negative integer order {nu} is not supported")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else if nu > 0.0 { 0.0 } else { f64::INFINITY });
    }
    if x < 0.0 && nu != nu.round() {
        return Err(Error::ParameterDomain("non-integer order at negative argument".into()));
    }
    let q = -(Dd::mul_exact(x, x) * 0.25);
    let nu1 = dd(nu) + 1.0;
    let mut term = dd(1.0);
    let mut sum = term;
    let mut max_term = 1.0f64;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        term = term * q / ((nu1 + kf) * (kf + 1.0));
        sum += term;
        k += 1;
        let mag = term.to_f64().abs();
        max_term = max_term.max(mag);
        if mag <= 1e-33 * max_term && kf > x.abs() {
            break;
        }
        if k >= MAX_TERMS {
            return Err(Error::Convergence { what: "Bessel series".into(), best_bound: mag });
        }
    }
    let half = x.abs() / 2.0;
    let pref = (nu * half.ln() - ln_gamma_abs(nu + 1.0)).exp() * gamma_sign(nu + 1.0);
    let sign = if x < 0.0 && (nu.round() as i64).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    Ok(sign * pref * sum.to_f64())
}

/// First `count` positive zeros `j_{ν,k}` of `J_ν`, from the Bessel Jacobi operator.
pub fn bessel_zeros(nu: f64, count: usize, tol: f64, truncation_cap: Option<usize>) -> Result<Vec<f64>> {
    let (op, decay) = bessel_sequences(nu)?;
    let opts = ZeroOptions { count: 2 * count, tol: 0.5 * tol, truncation_cap };
    let r = jacobi::zeros_of_g_with(&op, &decay, &opts)?;
    let mut pos: Vec<f64> = r.zeros.iter().filter(|&&z| z > 0.0).map(|z| 2.0 * z).collect();
    pos.sort_by(f64::total_cmp);
    pos.truncate(count);
    Ok(pos)
}

/// First `count` positive zeros of `J_ν` located by bisection on the power
/// series, with the final bracket half-widths. Limited to `x ≤ 40`.
pub fn bessel_zeros_series(nu: f64, count: usize, tol: f64) -> Result<Vec<(f64, f64)>> {
    check_finite("nu", nu)?;
    if nu <= -1.0 {
        return Err(Error::ParameterDomain(format!("nu must exceed -1, got {nu}")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let f = |x: f64| bessel_j(nu, x, 1e-16);
    let step = 0.05;
    let mut out = Vec::with_capacity(count);
    let mut a = step;
    let mut fa = f(a)?;
    while out.len() < count {
        let b = a + step;
        if b > 40.0 {
            return Err(Error::OutOfRange(format!("only {} zeros below x = 40", out.len())));
        }
        let fb = f(b)?;
        if fa == 0.0 || fa.signum() != fb.signum() {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > 2.0 * tol {
                let m = 0.5 * (lo + hi);
                if m <= lo || m >= hi {
                    break;
                }
                let fm = f(m)?;
                if fm.signum() == flo.signum() && fm != 0.0 {
                    lo = m;
                    flo = fm;
                } else {
                    hi = m;
                }
            }
            out.push((0.5 * (lo + hi), 0.5 * (hi - lo)));
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

/// Real Taylor coefficients `a_0..a_n` of `φ_L(η,ρ)` in `ρ`, from the Cauchy
/// product of the Kummer and exponential series.
pub fn phi_taylor_coeffs(p: &CoulombParams, n: usize) -> Result<Vec<f64>> {
    let p = CoulombParams::new(p.l, p.eta)?;
    if p.l == -1.0 {
        return Ok((0..=n)
            .map(|k| if k % 2 == 1 { 0.0 } else { (-1f64).powi(k as i32 / 2) / crate::gamma::gamma(k as f64 + 1.0) })
            .collect());
    }
    let a = Complex64::new(p.l + 1.0, -p.eta);
    let b = 2.0 * p.l + 2.0;
    let two_i = Complex64::new(0.0, 2.0);
    let mut kum = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n {
        let kf = k as f64;
        let next = kum[k] * (a + kf) * two_i / ((b + kf) * (kf + 1.0));
        kum.push(next);
    }
    let mut ex = vec![Complex64::new(1.0, 0.0)];
    for k in 0..n {
        ex.push(ex[k] * Complex64::new(0.0, -1.0) / (k as f64 + 1.0));
    }
    Ok((0..=n).map(|k| (0..=k).map(|j| kum[j] * ex[k - j]).sum::<Complex64>().re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_domain() {
        assert!(CoulombParams::new(-1.5, 0.0).is_err());
        assert!(CoulombParams::new(-1.0, 0.5).is_err());
        assert!(CoulombParams::new(-1.0, 0.0).is_ok());
        assert!(CoulombParams::new(f64::NAN, 0.0).is_err());
        assert!(CoulombParams::new(-0.7, 0.0).unwrap().check_tilde().is_err());
    }

    #[test]
    fn sequence_values() {
        assert_eq!(lambda_coulomb(1.0, 0.0), 0.0);
        assert!((weight_coulomb(1.0, 0.0) - 1.0 / 15f64.sqrt()).abs() < 1e-16);
        assert!((lambda_coulomb(2.0, 1.0) + 1.0 / 6.0).abs() < 1e-16);
        let (op, _) = coulomb_sequences(&CoulombParams::new(0.0, 0.0).unwrap()).unwrap();
        let m = op.truncate(2).unwrap();
        assert_eq!(m.diag(), &[0.0, 0.0]);
        assert!((m.off_diag()[0] - 1.0 / 15f64.sqrt()).abs() < 1e-16);
    }

    #[test]
    fn tail_sums_match_direct_summation() {
        for &(m0, eta) in &[(1.0, 1.0), (0.3, -0.7), (-0.4, 2.0), (5.5, 0.0)] {
            let t = Tails { eta };
            let mut lam = 0.0;
            let mut lam_abs = 0.0;
            let mut w2 = 0.0;
            let n = 200_000;
            for k in 0..n {
                let m = m0 + k as f64;
                lam += lambda_coulomb(m, eta);
                lam_abs += lambda_coulomb(m, eta).abs();
                w2 += weight_coulomb(m, eta).powi(2);
            }
            let m_end = m0 + n as f64;
            assert!((t.lambda_sum(m0) - t.lambda_sum(m_end) - lam).abs() < 1e-12);
            assert!((t.lambda_abs_sum(m0) - t.lambda_abs_sum(m_end) - lam_abs).abs() < 1e-12);
            assert!((t.weight_sq_sum(m0) - t.weight_sq_sum(m_end) - w2).abs() < 1e-12, "{m0} {eta}");
        }
    }

    #[test]
    fn t_sum_asymptotic_branch() {
        // Σ_{k≥0} 1/(x²(4x²-1)), x = 20.5 + k, to 30 digits
        assert!((t_sum(20.5) - 1.040_757_003_900_720_1e-5).abs() < 1e-19);
        assert!((t_sum(3.5) - t_sum(4.5) - 1.0 / (3.5f64.powi(2) * (4.0 * 3.5f64.powi(2) - 1.0))).abs() < 1e-17);
    }

    #[test]
    fn phi_at_zero_and_bessel_case() {
        let p = CoulombParams::new(0.3, 0.7).unwrap();
        assert_eq!(phi_l(&p, 0.0, 1e-12).unwrap().phi, 1.0);
        let p = CoulombParams::new(-0.5, 0.0).unwrap();
        let v = phi_l(&p, 1.0, 1e-12).unwrap();
        assert!((v.phi - 0.765_197_686_557_966_6).abs() < 1e-14);
        let p = CoulombParams::new(-1.0, 0.0).unwrap();
        assert!((phi_l(&p, 0.4, 1e-12).unwrap().dphi + 0.4f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn normalization_values() {
        assert!((c_l(&CoulombParams::new(0.0, 0.0).unwrap()).unwrap() - 1.0).abs() < 1e-14);
        assert!(c_l(&CoulombParams { l: -1.0, eta: 0.0 }).is_err());
        // C_{-5/4}(0) = 2^{-5/4} Γ(-1/4)/Γ(-1/2) > 0, C_{-3/4}(1) > 0, C_{-5/4}(1) < 0
        let c = c_l(&CoulombParams { l: -1.25, eta: 1.0 }).unwrap();
        assert!(c < 0.0);
    }

    #[test]
    fn sine_reduction() {
        let p = CoulombParams::new(0.0, 0.0).unwrap();
        let e = f_and_df(&p, 1.0, 1e-12).unwrap();
        assert!((e.f - 1f64.sin()).abs() < 1e-14);
        assert!((e.df - 1f64.cos()).abs() < 1e-14);
        let q = CoulombParams::new(0.5, 0.0).unwrap();
        assert!(f_and_df(&q, -1.0, 1e-12).is_err());
    }

    #[test]
    fn bessel_series_values() {
        assert_eq!(bessel_j(0.0, 0.0, 1e-15).unwrap(), 1.0);
        assert!((bessel_j(0.0, 1.0, 1e-15).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1.0, -1.0, 1e-15).unwrap() + 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((bessel_j(0.5, 2.0, 1e-15).unwrap() - (2.0 / (PI * 2.0)).sqrt() * 2f64.sin()).abs() < 1e-15);
        assert!(bessel_j(0.0, 41.0, 1e-15).is_err());
        // large argument keeps full precision: J_0(30) = -0.0863679835810403...
        assert!((bessel_j(0.0, 30.0, 1e-15).unwrap() + 0.086_367_983_581_040_21).abs() < 1e-14);
    }

    #[test]
    fn taylor_coefficients_low_order() {
        let p = CoulombParams::new(0.0, 1.0).unwrap();
        let a = phi_taylor_coeffs(&p, 3).unwrap();
        assert!((a[0] - 1.0).abs() < 1e-15);
        assert!((a[1] - 1.0).abs() < 1e-15);
    }
}
