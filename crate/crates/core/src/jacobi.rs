//! Semi-infinite symmetric Jacobi operators.
//!
//! A [`JacobiOperator`] is given by rules `n ↦ λ_n` (diagonal) and
//! `n ↦ w_n > 0` (off-diagonal) together with a shift `k`, so that the same
//! value also represents the truncated operators `J^{(k)}` obtained by
//! deleting the first `k` rows and columns.
//!
//! For compact operators with `λ ∈ ℓ¹`, `w ∈ ℓ²` the regularized
//! characteristic function
//!
//! ```text
//! 𝒢_J(z) = Π_n (1 - zλ_n) · 𝔉({γ_n² / (λ_n - 1/z)})
//! ```
//!
//! is entire and its zeros are the reciprocals of the nonzero eigenvalues of
//! `J`. It is evaluated here by the division-free backward recurrence
//!
//! ```text
//! G_k = (1 - zλ_k) G_{k+1} - w_k² z² G_{k+2},     G_k = 𝒢_{J^{(k)}}(z),
//! ```
//!
//! started at a cut `N` from an asymptotic model of the tail supplied by a
//! [`DecayDescriptor`]. The error bound combines a rigorous bound on the tail
//! model with a first-order rounding estimate.

use crate::dd::{CDd, Dd};
use crate::error::{check_finite, check_tol, Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Rule mapping an index to a real number.
pub type IndexRule = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// Environment variable capping the matrix truncation order.
pub const TRUNCATION_ENV: &str = "COULOMB_OPOLY_MAX_TRUNC";
/// Default cap on the truncation order used for seeding zeros.
pub const DEFAULT_SEED_CAP: usize = 2048;
/// Cap on the recurrence depth used when evaluating `𝒢_J`.
pub const EVAL_CAP: usize = 1 << 21;

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Truncation cap from an explicit request, else the environment, else `default`.
pub fn resolve_cap(explicit: Option<usize>, default: usize) -> usize {
    if let Some(c) = explicit {
        return c.max(2);
    }
    std::env::var(TRUNCATION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map(|c| c.max(2))
        .unwrap_or(default)
}

/// Symmetric Jacobi operator defined by index rules and a shift.
#[derive(Clone)]
pub struct JacobiOperator {
    lambda: IndexRule,
    weight: IndexRule,
    shift: usize,
}

impl fmt::Debug for JacobiOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JacobiOperator")
            .field("shift", &self.shift)
            .field("lambda_0", &self.lambda(0))
            .field("w_0", &self.weight(0))
            .finish()
    }
}

impl JacobiOperator {
    pub fn new<F, G>(lambda_at: F, weight_at: G) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
        G: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        JacobiOperator { lambda: Arc::new(lambda_at), weight: Arc::new(weight_at), shift: 0 }
    }

    /// The operator `J^{(k)}` relative to this one.
    pub fn shifted(&self, k: usize) -> Self {
        JacobiOperator { lambda: self.lambda.clone(), weight: self.weight.clone(), shift: self.shift + k }
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Diagonal entry `n` of the (shifted) operator.
    #[inline]
    pub fn lambda(&self, n: usize) -> f64 {
        (self.lambda)(self.shift + n)
    }

    /// Off-diagonal entry `n` of the (shifted) operator.
    #[inline]
    pub fn weight(&self, n: usize) -> f64 {
        (self.weight)(self.shift + n)
    }

    /// Top-left `n × n` block.
    pub fn truncate(&self, n: usize) -> Result<TridiagonalMatrix> {
        if n == 0 {
            return Err(Error::invalid("truncation order must be at least 1"));
        }
        let diag: Vec<f64> = (0..n).map(|k| self.lambda(k)).collect();
        let off: Vec<f64> = (0..n - 1).map(|k| self.weight(k)).collect();
        TridiagonalMatrix::new(diag, off)
    }
}

/// `γ_n` with `γ_0 = 1`, `γ_{k+1} = w_k / γ_k`.
pub fn gamma_at(op: &JacobiOperator, n: usize) -> f64 {
    let mut g = 1.0;
    for k in 0..n {
        g = op.weight(k) / g;
    }
    g
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::invalid("need n >= 1 diagonal and n - 1 off-diagonal entries"));
        }
        if diag.iter().chain(off.iter()).any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(TridiagonalMatrix { diag, off })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.off[i.min(j)],
            _ => 0.0,
        }
    }

    /// Squared Frobenius norm, which equals the sum of squared eigenvalues.
    pub fn frobenius_sq(&self) -> f64 {
        self.diag.iter().map(|d| d * d).sum::<f64>() + 2.0 * self.off.iter().map(|e| e * e).sum::<f64>()
    }

    /// Number of eigenvalues strictly below `x` (Sturm count).
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        let tiny = f64::MIN_POSITIVE.sqrt();
        for i in 0..self.diag.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        (lo - pad, hi + pad)
    }

    fn kth_eigenvalue(&self, k: usize, tol: f64, bounds: (f64, f64)) -> f64 {
        let (mut lo, mut hi) = bounds;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= tol {
                return mid;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
}

/// All eigenvalues in ascending order, each to absolute accuracy `tol`.
pub fn eigenvalues_sym_tridiag(m: &TridiagonalMatrix, tol: f64) -> Result<Vec<f64>> {
    check_tol(tol)?;
    Ok(eigen_range(m, 0..m.size(), tol))
}

/// Eigenvalues with ascending indices in `range`.
pub fn eigenvalues_by_index(m: &TridiagonalMatrix, range: std::ops::Range<usize>, tol: f64) -> Result<Vec<f64>> {
    check_tol(tol)?;
    if range.end > m.size() {
        return Err(Error::invalid("eigenvalue index out of range"));
    }
    Ok(eigen_range(m, range, tol))
}

fn eigen_range(m: &TridiagonalMatrix, range: std::ops::Range<usize>, tol: f64) -> Vec<f64> {
    let bounds = m.gershgorin();
    range.into_par_iter().map(|k| m.kth_eigenvalue(k, tol, bounds)).collect()
}

/// Decay information certifying `λ ∈ ℓ¹`, `w ∈ ℓ²` for the unshifted operator.
#[derive(Clone)]
pub struct DecayDescriptor {
    lambda_tail: IndexRule,
    weight_tail: IndexRule,
    model: Option<TailModel>,
}

/// Closed-form tail data sharpening the evaluation of `𝒢_J`.
///
/// All rules take an absolute index `N` and describe `{n ≥ N}`.
#[derive(Clone)]
pub struct TailModel {
    /// Exact `Σ_{n≥N} λ_n`.
    pub lambda_sum: IndexRule,
    /// Exact `Σ_{n≥N} w_n²`.
    pub weight_sq_sum: IndexRule,
    /// Upper bound on `sup_{n≥N} |λ_n|`.
    pub lambda_sup: IndexRule,
    /// Upper bound on `sup_{n≥N} w_n`.
    pub weight_sup: IndexRule,
}

impl fmt::Debug for DecayDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecayDescriptor").field("has_model", &self.model.is_some()).finish()
    }
}

impl DecayDescriptor {
    /// `lambda_tail(N) ≥ Σ_{n≥N}|λ_n|` and `weight_tail(N) ≥ Σ_{n≥N} w_n²`.
    pub fn new<F, G>(lambda_tail: F, weight_tail: G) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
        G: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        DecayDescriptor { lambda_tail: Arc::new(lambda_tail), weight_tail: Arc::new(weight_tail), model: None }
    }

    pub fn with_model(mut self, model: TailModel) -> Self {
        self.model = Some(model);
        self
    }

    pub fn lambda_tail(&self, n: usize) -> f64 {
        (self.lambda_tail)(n)
    }

    pub fn weight_tail(&self, n: usize) -> f64 {
        (self.weight_tail)(n)
    }

    pub fn model(&self) -> Option<&TailModel> {
        self.model.as_ref()
    }
}

/// Scalar field used by the recurrences (real or complex).
pub trait Scalar:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn from_real(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn exp(self) -> Self;
    fn is_zero(self) -> bool;
    /// Double-double counterpart used by the backward recurrence.
    type Wide: Copy;
    fn widen(self) -> Self::Wide;
    fn narrow(w: Self::Wide) -> Self;
    /// `g1 - c g1 - b g2` in double-double arithmetic.
    fn step(g1: Self::Wide, g2: Self::Wide, c: Self, b: Self) -> Self::Wide;
    /// Relative error of a coefficient `zλ` or `z²w²` formed in binary64.
    const COEF_ROUNDING: f64;
    /// Relative rounding of one double-double step.
    const WIDE_ROUNDING: f64;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn is_zero(self) -> bool {
        self == 0.0
    }
    type Wide = Dd;
    fn widen(self) -> Dd {
        Dd::new(self)
    }
    fn narrow(w: Dd) -> f64 {
        w.to_f64()
    }
    fn step(g1: Dd, g2: Dd, c: f64, b: f64) -> Dd {
        g1 - (g1 * c + g2 * b)
    }
    const COEF_ROUNDING: f64 = 3.0 * UNIT_ROUNDOFF;
    const WIDE_ROUNDING: f64 = 16.0 * UNIT_ROUNDOFF * UNIT_ROUNDOFF;
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    type Wide = CDd;
    fn widen(self) -> CDd {
        CDd::new(Dd::new(self.re), Dd::new(self.im))
    }
    fn narrow(w: CDd) -> Complex64 {
        Complex64::new(w.re.to_f64(), w.im.to_f64())
    }
    fn step(g1: CDd, g2: CDd, c: Complex64, b: Complex64) -> CDd {
        g1 - (g1.mul_parts(c.re, c.im) + g2.mul_parts(b.re, b.im))
    }
    const COEF_ROUNDING: f64 = 8.0 * UNIT_ROUNDOFF;
    const WIDE_ROUNDING: f64 = 64.0 * UNIT_ROUNDOFF * UNIT_ROUNDOFF;
}

/// Model value of `G_j` and a bound `ε` with `|log G_j - log Ĝ_j| ≤ ε`.
struct TailEstimate<T> {
    value: T,
    log_err: f64,
}

fn tail_estimate<T: Scalar>(decay: &DecayDescriptor, j: usize, z: T) -> Option<TailEstimate<T>> {
    let az = z.modulus();
    let lam = decay.lambda_tail(j);
    let wsq = decay.weight_tail(j);
    let (lsup, wsup) = match &decay.model {
        Some(m) => ((m.lambda_sup)(j).min(lam), (m.weight_sup)(j).min(wsq.sqrt())),
        None => (lam, wsq.sqrt()),
    };
    if !(lam.is_finite() && wsq.is_finite()) {
        return None;
    }
    let q = az * lsup;
    if q > 0.5 {
        return None;
    }
    let one_q = 1.0 - q;
    let delta = az * az * wsup * wsup / (one_q * one_q);
    if delta > 0.25 {
        return None;
    }
    let e0 = 0.5 * (1.0 - (1.0 - 4.0 * delta).sqrt());
    let kappa = 1.0 / (1.0 - e0);
    match &decay.model {
        Some(m) => {
            let s1 = (m.lambda_sum)(j);
            let s2 = (m.weight_sq_sum)(j);
            let value = (-(z * T::from_real(s1)) - z * z * T::from_real(s2)).exp();
            let e_prod = az * az * lsup * lam / (2.0 * one_q);
            let e_pair = az.powi(3) * wsup * wsup * lam * (2.0 + q) / (one_q * one_q);
            let a2 = az * az / (one_q * one_q);
            let e_quad = kappa * kappa * (1.0 + 0.5 / (1.0 - kappa * delta)) * a2 * a2 * wsup * wsup * wsq;
            Some(TailEstimate { value, log_err: e_prod + e_pair + e_quad })
        }
        None => {
            let e_prod = az * lam / one_q;
            let e_pair = kappa * az * az * wsq / (one_q * one_q * (1.0 - kappa * delta));
            Some(TailEstimate { value: T::from_real(1.0), log_err: e_prod + e_pair })
        }
    }
}

/// Ratio `û ≈ G_j / G_{j+1}` from a finite continued fraction, with a bound on
/// `|û - G_j/G_{j+1}| / |û|`.
fn ratio_estimate<T: Scalar>(op: &JacobiOperator, decay: &DecayDescriptor, n: usize, z: T) -> Option<(T, f64)> {
    let j = op.shift() + n;
    let az = z.modulus();
    let (lsup, wsup) = match &decay.model {
        Some(m) => ((m.lambda_sup)(j).min(decay.lambda_tail(j)), (m.weight_sup)(j).min(decay.weight_tail(j).sqrt())),
        None => (decay.lambda_tail(j), decay.weight_tail(j).sqrt()),
    };
    if !(lsup.is_finite() && wsup.is_finite()) {
        return None;
    }
    // Every ratio G_k/G_{k+1}, k ≥ j, lies in the disk |u - 1| ≤ e.
    let q = az * lsup;
    let d = az * az * wsup * wsup;
    let disc = (1.0 - q) * (1.0 - q) - 4.0 * d;
    if q >= 1.0 || disc < 0.0 {
        return None;
    }
    let e = 0.5 * ((1.0 + q) - disc.sqrt());
    if e >= 0.5 {
        return None;
    }
    let contraction = 1.0 / ((1.0 - e) * (1.0 - e));
    let mut levels = 0;
    let mut err = e;
    while err > 1e-18 * (1.0 - e) && levels < 64 {
        let w = op.weight(n + levels);
        err *= az * az * w * w * contraction;
        levels += 1;
    }
    let one = T::from_real(1.0);
    let z2 = z * z;
    let mut u = one;
    for k in (n..n + levels).rev() {
        let w = op.weight(k);
        u = one - z * T::from_real(op.lambda(k)) - z2 * T::from_real(w * w) * (one / u);
    }
    let um = u.modulus();
    if !(um > 0.0) {
        return None;
    }
    let rounding = 8.0 * (levels + 1) as f64 * UNIT_ROUNDOFF;
    Some((u, err / um + rounding))
}

/// Result of one backward sweep at cut `n`.
struct Sweep<T> {
    n: usize,
    /// `G_0 ..= G_{n+1}`; `G_{n+1}` from the tail model, `G_n` from the ratio.
    g: Vec<T>,
    /// Sensitivities of `G_k` to `G_n`.
    alpha: Vec<T>,
    /// Log-error of the model value `G_{n+1}`.
    eps_scale: f64,
    /// Relative error of the ratio `G_n / G_{n+1}`.
    eps_ratio: f64,
    rounding0: f64,
    drift: Vec<f64>,
}

impl<T: Scalar> Sweep<T> {
    /// Error of the computed `G_k` caused by the starting values `G_n, G_{n+1}`.
    fn truncation_bound(&self, k: usize) -> f64 {
        self.eps_scale.exp_m1() * self.g[k].modulus() + self.ratio_part(k)
    }

    fn ratio_part(&self, k: usize) -> f64 {
        self.eps_scale.exp() * self.alpha[k].modulus() * self.g[self.n].modulus() * self.eps_ratio
    }

    fn rounding(&self, k: usize) -> f64 {
        if k == 0 {
            self.rounding0
        } else {
            self.drift[k] * self.g[k].modulus()
        }
    }

    fn bound(&self, k: usize) -> f64 {
        self.truncation_bound(k) + self.rounding(k)
    }

    /// Bound deciding the sign of a real `G_0`; the common positive scale drops out.
    fn sign_bound(&self) -> f64 {
        if self.eps_scale > 1.0 {
            return f64::INFINITY;
        }
        self.eps_scale.exp() * self.ratio_part(0) + self.rounding0
    }
}

/// Backward sweep from cut `n`. Without `scaled` the start is `G_{n+1} = 1`,
/// which for real `z` differs from the true value by a positive factor.
fn sweep<T: Scalar>(op: &JacobiOperator, decay: &DecayDescriptor, z: T, n: usize, scaled: bool) -> Option<Sweep<T>> {
    let (start, eps_scale) = if scaled {
        let t = tail_estimate(decay, op.shift() + n + 1, z)?;
        (t.value, t.log_err + 4.0 * UNIT_ROUNDOFF)
    } else {
        (T::from_real(1.0), 0.0)
    };
    let (ratio, eps_ratio) = ratio_estimate(op, decay, n, z)?;
    let z2 = z * z;
    let zero = T::from_real(0.0);
    let one = T::from_real(1.0);
    let mut coef_c = Vec::with_capacity(n);
    let mut coef_a = Vec::with_capacity(n);
    let mut coef_b = Vec::with_capacity(n);
    for k in 0..n {
        let w = op.weight(k);
        let c = z * T::from_real(op.lambda(k));
        coef_c.push(c);
        coef_a.push(one - c);
        coef_b.push(z2 * T::from_real(w * w));
    }
    let mut g = vec![zero; n + 2];
    let mut alpha = vec![zero; n + 2];
    // Relative rounding accumulated in G_k, for k ≥ 1.
    let mut drift = vec![0.0; n + 2];
    g[n + 1] = start;
    g[n] = start * ratio;
    alpha[n] = one;
    let (mut w1, mut w2) = (g[n].widen(), start.widen());
    let mut coef_sum = 0.0;
    for k in (0..n).rev() {
        let w0 = T::step(w1, w2, coef_c[k], coef_b[k]);
        g[k] = T::narrow(w0);
        (w1, w2) = (w0, w1);
        alpha[k] = coef_a[k] * alpha[k + 1] - coef_b[k] * alpha[k + 2];
        coef_sum += coef_c[k].modulus() + coef_b[k].modulus();
        drift[k] = T::WIDE_ROUNDING * (n - k + 1) as f64 + T::COEF_ROUNDING * coef_sum + 2.0 * UNIT_ROUNDOFF;
    }
    // Forward adjoint d_k = ∂G_0/∂G_k propagates local rounding to G_0.
    // `d` is kept as `d_scaled · e^{log_scale}` to avoid overflow.
    let mut rounding0 = 0.0;
    let mut d_prev = zero;
    let mut d = one;
    let mut log_scale = 0.0f64;
    for k in 0..n {
        let (p, q) = ((coef_c[k] * g[k + 1]).modulus(), (coef_b[k] * g[k + 2]).modulus());
        let local = T::COEF_ROUNDING * (p + q) + T::WIDE_ROUNDING * (g[k + 1].modulus() + p + q);
        if local > 0.0 {
            let dm = d.modulus();
            rounding0 += if log_scale == 0.0 { dm * local } else { (dm.ln() + local.ln() + log_scale).exp() };
        }
        let d_next = coef_a[k] * d - if k > 0 { coef_b[k - 1] * d_prev } else { zero };
        d_prev = d;
        d = d_next;
        let m = d.modulus();
        if m > 1e150 {
            let f = T::from_real(1.0 / m);
            d = d * f;
            d_prev = d_prev * f;
            log_scale += m.ln();
        }
    }
    rounding0 += 2.0 * UNIT_ROUNDOFF * g[0].modulus();
    rounding0 += 4.0 * UNIT_ROUNDOFF * alpha[0].modulus() * g[n].modulus();
    if !rounding0.is_finite() || !g[0].modulus().is_finite() {
        return None;
    }
    Some(Sweep { n, g, alpha, eps_scale, eps_ratio, rounding0, drift })
}

/// Smallest power-of-two-spaced cut `N ≥ min_n` where the tail model applies
/// with log-error at most `target`.
fn initial_cut<T: Scalar>(decay: &DecayDescriptor, shift: usize, z: T, min_n: usize, target: f64, cap: usize) -> usize {
    let mut n = min_n.max(16);
    while n < cap {
        if let Some(t) = tail_estimate(decay, shift + n, z) {
            if t.log_err <= target {
                break;
            }
        }
        n *= 2;
    }
    n.min(cap)
}

/// Smallest power-of-two-spaced cut `N ≥ min_n` whose starting ratio has
/// relative error at most `target`.
fn ratio_cut<T: Scalar>(op: &JacobiOperator, decay: &DecayDescriptor, z: T, min_n: usize, target: f64, cap: usize) -> usize {
    let mut n = min_n.max(16);
    while n < cap {
        if let Some((_, e)) = ratio_estimate(op, decay, n, z) {
            if e <= target {
                break;
            }
        }
        n *= 2;
    }
    n.min(cap)
}

/// Value of `𝒢_J` with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GValue<T> {
    pub value: T,
    pub error_bound: f64,
    /// Cut index `N` of the backward recurrence.
    pub truncation_order: usize,
}

fn eval_g<T: Scalar>(op: &JacobiOperator, decay: &DecayDescriptor, z: T, tol: f64, cap: usize) -> Result<GValue<T>> {
    if z.is_zero() {
        return Ok(GValue { value: T::from_real(1.0), error_bound: 0.0, truncation_order: 0 });
    }
    let mut n = initial_cut(decay, op.shift(), z, 32, tol, cap);
    let mut best = f64::INFINITY;
    loop {
        if let Some(s) = sweep(op, decay, z, n, true) {
            let b = s.bound(0);
            if b <= tol {
                return Ok(GValue { value: s.g[0], error_bound: b, truncation_order: n });
            }
            best = best.min(b);
            if s.truncation_bound(0) < s.rounding0 {
                break;
            }
        }
        if n >= cap {
            break;
        }
        n = (2 * n).min(cap);
    }
    Err(Error::Convergence { what: "characteristic function evaluation".into(), best_bound: best })
}

/// `𝒢_J(ρ)` for real `ρ`, with absolute error at most `tol`.
///
/// The recurrence runs in double-double arithmetic; an unreachable `tol`
/// ends in a convergence error carrying the best bound reached.
pub fn char_function_g(op: &JacobiOperator, decay: &DecayDescriptor, rho: f64, tol: f64) -> Result<GValue<f64>> {
    check_finite("rho", rho)?;
    check_tol(tol)?;
    eval_g(op, decay, rho, tol, EVAL_CAP)
}

/// `𝒢_J(ρ)` for complex `ρ`, with absolute error at most `tol`.
pub fn char_function_g_complex(
    op: &JacobiOperator,
    decay: &DecayDescriptor,
    rho: Complex64,
    tol: f64,
) -> Result<GValue<Complex64>> {
    check_finite("Re rho", rho.re)?;
    check_finite("Im rho", rho.im)?;
    check_tol(tol)?;
    eval_g(op, decay, rho, tol, EVAL_CAP)
}

/// Central-difference step used for derivatives of `𝒢_J`.
pub fn derivative_step(rho: f64) -> f64 {
    1e-6f64.max(1e-6 * rho.abs())
}

/// `∂_ρ 𝒢_J(ρ)` by central differences of two sweeps sharing the cut that
/// certifies `𝒢_J(ρ)` to `tol`.
pub fn char_function_g_derivative(op: &JacobiOperator, decay: &DecayDescriptor, rho: f64, tol: f64) -> Result<f64> {
    check_finite("rho", rho)?;
    check_tol(tol)?;
    let h = derivative_step(rho);
    let base = eval_g(op, decay, if rho == 0.0 { h } else { rho }, tol, EVAL_CAP)?;
    let n = base.truncation_order.max(32);
    match (sweep(op, decay, rho + h, n, true), sweep(op, decay, rho - h, n, true)) {
        (Some(p), Some(m)) => Ok((p.g[0] - m.g[0]) / (2.0 * h)),
        _ => Err(Error::Convergence { what: "characteristic function derivative".into(), best_bound: f64::INFINITY }),
    }
}

/// Sign of `𝒢_J(ρ)` when certified by the error bound.
///
/// `hint` carries the cut index between calls.
fn certified_sign(op: &JacobiOperator, decay: &DecayDescriptor, rho: f64, hint: &mut usize) -> Option<f64> {
    let mut n = (*hint).max(ratio_cut(op, decay, rho, 32, 1e-13, EVAL_CAP));
    loop {
        if let Some(s) = sweep(op, decay, rho, n, false) {
            let b = s.sign_bound();
            let v = s.g[0];
            if b < v.abs() {
                *hint = n;
                return Some(v.signum());
            }
            if s.ratio_part(0) < s.rounding0 {
                *hint = n;
                return None;
            }
        }
        if n >= EVAL_CAP {
            return None;
        }
        n *= 2;
    }
}

/// `𝒢_J(ρ)` up to a positive factor that varies smoothly in `ρ`.
fn value_at(op: &JacobiOperator, decay: &DecayDescriptor, rho: f64, hint: usize) -> f64 {
    let n = hint.max(ratio_cut(op, decay, rho, 32, 1e-13, EVAL_CAP));
    sweep(op, decay, rho, n, false).map(|s| s.g[0]).unwrap_or(f64::NAN)
}

/// Zeros of `𝒢_J` with the truncated-matrix data used to seed them.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Extreme eigenvalues of the final truncation, by decreasing modulus.
    pub eigenvalues: Vec<f64>,
    /// Reciprocals of `eigenvalues`.
    pub seeds: Vec<f64>,
    /// Refined zeros, sorted by nondecreasing modulus.
    pub zeros: Vec<f64>,
    /// Half-width of the certified sign-change bracket around each zero.
    pub error_bounds: Vec<f64>,
    /// Final matrix truncation order.
    pub truncation_order: usize,
    /// Largest seed movement between the last two truncation orders.
    pub seed_movement: f64,
}

/// Options for [`zeros_of_g_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroOptions {
    pub count: usize,
    pub tol: f64,
    /// Cap on the matrix truncation order; `None` uses the environment or the default.
    pub truncation_cap: Option<usize>,
}

impl ZeroOptions {
    pub fn new(count: usize, tol: f64) -> Self {
        ZeroOptions { count, tol, truncation_cap: None }
    }
}

/// Reciprocals of the `count` largest-modulus eigenvalues of the `n`-truncation,
/// sorted by increasing modulus.
fn seeds_at(op: &JacobiOperator, n: usize, count: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = op.truncate(n)?;
    let k = count.min(n);
    let mut idx: Vec<usize> = (0..k).chain(n - k..n).collect();
    idx.sort_unstable();
    idx.dedup();
    let bounds = m.gershgorin();
    let mut mu: Vec<f64> = idx.par_iter().map(|&i| m.kth_eigenvalue(i, 0.0, bounds)).collect();
    let floor = 1e-14 * mu.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    mu.retain(|x| x.abs() > floor);
    mu.sort_by(|a, b| b.abs().total_cmp(&a.abs()).then(b.total_cmp(a)));
    mu.truncate(count);
    let seeds = mu.iter().map(|x| 1.0 / x).collect();
    Ok((mu, seeds))
}

/// The `count` smallest-modulus zeros of `𝒢_J`.
pub fn zeros_of_g(op: &JacobiOperator, decay: &DecayDescriptor, count: usize, tol: f64) -> Result<SpectrumResult> {
    zeros_of_g_with(op, decay, &ZeroOptions::new(count, tol))
}

pub fn zeros_of_g_with(op: &JacobiOperator, decay: &DecayDescriptor, opts: &ZeroOptions) -> Result<SpectrumResult> {
    check_tol(opts.tol)?;
    if opts.count == 0 {
        return Err(Error::invalid("count must be at least 1"));
    }
    let cap = resolve_cap(opts.truncation_cap, DEFAULT_SEED_CAP);
    let mut n = 64usize.max((2 * opts.count).next_power_of_two());
    if n > cap {
        n = cap;
    }
    let (_, mut seeds) = seeds_at(op, n, opts.count)?;
    let (mu, movement) = loop {
        let n2 = 2 * n;
        if n2 > cap {
            return Err(Error::Convergence {
                what: format!("zero seeds up to truncation order {n}"),
                best_bound: f64::INFINITY,
            });
        }
        let (mu2, seeds2) = seeds_at(op, n2, opts.count)?;
        n = n2;
        let converged = seeds2.len() == opts.count && seeds.len() == seeds2.len();
        // Reciprocals cannot resolve better than ρ² times the eigenvalue rounding.
        let unit = 8.0 * f64::EPSILON * mu2.first().map_or(0.0, |m| m.abs());
        let (mv, settled) = if converged {
            seeds.iter().zip(&seeds2).fold((0.0f64, true), |(mv, ok), (a, b)| {
                let d = (a - b).abs();
                (mv.max(d), ok && d < 10.0 * opts.tol + unit * b * b)
            })
        } else {
            (f64::INFINITY, false)
        };
        seeds = seeds2;
        if settled {
            break (mu2, mv);
        }
    };
    let mut sorted = seeds.clone();
    sorted.sort_by(f64::total_cmp);
    let refined: Vec<Result<(f64, f64)>> =
        seeds.par_iter().map(|&s| refine_zero(op, decay, s, &sorted, opts.tol)).collect();
    let mut pairs = Vec::with_capacity(refined.len());
    for r in refined {
        pairs.push(r?);
    }
    pairs.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()).then(b.0.total_cmp(&a.0)));
    Ok(SpectrumResult {
        eigenvalues: mu,
        seeds,
        zeros: pairs.iter().map(|p| p.0).collect(),
        error_bounds: pairs.iter().map(|p| p.1).collect(),
        truncation_order: n,
        seed_movement: movement,
    })
}

fn refine_zero(op: &JacobiOperator, decay: &DecayDescriptor, seed: f64, sorted: &[f64], tol: f64) -> Result<(f64, f64)> {
    let pos = sorted.partition_point(|&x| x < seed);
    let mut gap = seed.abs();
    if pos > 0 {
        gap = gap.min(seed - sorted[pos - 1]);
    }
    if let Some(&next) = sorted[pos..].iter().find(|&&x| x > seed) {
        gap = gap.min(next - seed);
    }
    let limit = 0.5 * gap;
    let mut hint = 0usize;
    let mut h = (2.0 * tol).max(1e-12 * seed.abs());
    let (mut a, mut b, mut sa) = loop {
        if h > limit {
            return Err(Error::Seeding { seed, reason: "no certified sign change within half the seed spacing".into() });
        }
        let sa = certified_sign(op, decay, seed - h, &mut hint);
        let sb = certified_sign(op, decay, seed + h, &mut hint);
        match (sa, sb) {
            (Some(x), Some(y)) if x != y => break (seed - h, seed + h, x),
            _ => h = (8.0 * h).min(limit.max(h * 1.0001)),
        }
        if h >= limit && h > 0.0 {
            let sa = certified_sign(op, decay, seed - limit, &mut hint);
            let sb = certified_sign(op, decay, seed + limit, &mut hint);
            match (sa, sb) {
                (Some(x), Some(y)) if x != y => break (seed - limit, seed + limit, x),
                _ => {
                    return Err(Error::Seeding {
                        seed,
                        reason: "no certified sign change within half the seed spacing".into(),
                    })
                }
            }
        }
    };
    while 0.5 * (b - a) > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        match certified_sign(op, decay, m, &mut hint) {
            Some(s) if s == sa => {
                a = m;
                sa = s;
            }
            Some(_) => b = m,
            None => break,
        }
    }
    let zero = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    // Simplicity: derivative well away from zero relative to the local scale.
    let h = derivative_step(zero);
    let d = (0.25 * gap).max(4.0 * h);
    let deriv = (value_at(op, decay, zero + h, hint) - value_at(op, decay, zero - h, hint)) / (2.0 * h);
    let scale = value_at(op, decay, zero + d, hint).abs().max(value_at(op, decay, zero - d, hint).abs()) / d;
    if !(deriv.abs() > 1e-8 * scale) {
        return Err(Error::Seeding { seed, reason: format!("zero at {zero} fails the simplicity test") });
    }
    Ok((zero, half))
}

/// Ratio `|𝒢'_J(ρ)|` to the local scale of `𝒢_J` (simplicity diagnostic).
pub fn simplicity_ratio(op: &JacobiOperator, decay: &DecayDescriptor, zero: f64, spacing: f64) -> f64 {
    let h = derivative_step(zero);
    let d = (0.25 * spacing).max(4.0 * h);
    let deriv = (value_at(op, decay, zero + h, 0) - value_at(op, decay, zero - h, 0)) / (2.0 * h);
    let scale = value_at(op, decay, zero + d, 0).abs().max(value_at(op, decay, zero - d, 0).abs()) / d;
    deriv.abs() / scale
}

/// True when same-sign zeros of the two lists strictly alternate on the
/// range covered by both.
pub fn interlaces(a: &[f64], b: &[f64]) -> bool {
    for sign in [1.0, -1.0] {
        let mut xa: Vec<f64> = a.iter().filter(|x| x.signum() == sign).map(|x| x.abs()).collect();
        let mut xb: Vec<f64> = b.iter().filter(|x| x.signum() == sign).map(|x| x.abs()).collect();
        if xa.is_empty() || xb.is_empty() {
            continue;
        }
        xa.sort_by(f64::total_cmp);
        xb.sort_by(f64::total_cmp);
        let limit = xa[xa.len() - 1].min(xb[xb.len() - 1]);
        let mut merged: Vec<(f64, u8)> = xa
            .iter()
            .map(|&x| (x, 0u8))
            .chain(xb.iter().map(|&x| (x, 1u8)))
            .filter(|p| p.0 <= limit)
            .collect();
        merged.sort_by(|p, q| p.0.total_cmp(&q.0));
        for w in merged.windows(2) {
            if w[0].1 == w[1].1 || w[0].0 == w[1].0 {
                return false;
            }
        }
    }
    true
}

/// Weyl function `m(z) = ⟨e_0, (J - z)^{-1} e_0⟩` for real `z ≠ 0` off the spectrum.
pub fn weyl_m(op: &JacobiOperator, decay: &DecayDescriptor, z: f64, tol: f64) -> Result<f64> {
    check_finite("z", z)?;
    check_tol(tol)?;
    if z == 0.0 {
        return Err(Error::invalid("z = 0 lies in the spectrum of a compact operator"));
    }
    let zeta = 1.0 / z;
    let g0 = eval_g(op, decay, zeta, tol, EVAL_CAP)?;
    let g1 = eval_g(&op.shifted(1), decay, zeta, tol, EVAL_CAP)?;
    if g0.value.abs() <= 1e3 * g0.error_bound.max(f64::EPSILON) {
        return Err(Error::PoleProximity { z, distance: g0.value.abs() });
    }
    Ok(-zeta * g1.value / g0.value)
}

/// Jump of the spectral measure at `x`, `μ({x}) = -x 𝒢_{J^{(1)}}(1/x) / 𝒢'_J(1/x)`.
pub fn jump_mass(op: &JacobiOperator, decay: &DecayDescriptor, x: f64, tol: f64) -> Result<f64> {
    check_finite("x", x)?;
    check_tol(tol)?;
    if x == 0.0 {
        return Err(Error::invalid("jump formula requires x != 0"));
    }
    let rho = 1.0 / x;
    let g1 = char_function_g(&op.shifted(1), decay, rho, tol)?;
    let dg = char_function_g_derivative(op, decay, rho, tol)?;
    Ok(-x * g1.value / dg)
}

/// The vector `ξ(z)`: `ξ_{-1} = 𝒢_J(z)`, `ξ_k = (Π_{l<k} w_l) z^{k+1} 𝒢_{J^{(k+1)}}(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiVector {
    pub xi_minus_one: f64,
    /// `ξ_0 ..= ξ_K`.
    pub xi: Vec<f64>,
    /// Error bounds for `ξ_{-1}, ξ_0, ..., ξ_K`.
    pub error_bounds: Vec<f64>,
    pub truncation_order: usize,
}

pub fn xi_vector(op: &JacobiOperator, decay: &DecayDescriptor, z: f64, k_max: usize, tol: f64) -> Result<XiVector> {
    check_finite("z", z)?;
    check_tol(tol)?;
    if z == 0.0 {
        return Err(Error::invalid("xi vector requires z != 0"));
    }
    let mut n = initial_cut(decay, op.shift(), z, (k_max + 2).next_power_of_two().max(32), tol, EVAL_CAP);
    let mut best = f64::INFINITY;
    loop {
        if let Some(s) = sweep(op, decay, z, n, true) {
            let mut prefactor = z;
            let mut xi = Vec::with_capacity(k_max + 1);
            let mut bounds = vec![s.bound(0)];
            for k in 0..=k_max {
                if k > 0 {
                    prefactor *= op.weight(k - 1) * z;
                }
                xi.push(prefactor * s.g[k + 1]);
                bounds.push(prefactor.abs() * s.bound(k + 1));
            }
            let worst = bounds.iter().cloned().fold(0.0, f64::max);
            if worst <= tol {
                return Ok(XiVector { xi_minus_one: s.g[0], xi, error_bounds: bounds, truncation_order: n });
            }
            best = best.min(worst);
        }
        if n >= EVAL_CAP {
            return Err(Error::Convergence { what: "xi vector".into(), best_bound: best });
        }
        n *= 2;
    }
}
