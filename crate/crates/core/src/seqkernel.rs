//! The alternating pair-product functional 𝔉 on complex sequences.
//!
//! For a sequence `x = (x_1, x_2, ...)` with `Σ|x_k x_{k+1}| < ∞`,
//!
//! ```text
//! 𝔉(x) = 1 + Σ_{m≥1} (-1)^m Σ_{k_1 < k_2 - 1 < ...} x_{k_1}x_{k_1+1} ... x_{k_m}x_{k_m+1}
//! ```
//!
//! Evaluation never touches the multi-sum. It runs the two-term backward
//! recurrence `F_k = F_{k+1} - x_k x_{k+1} F_{k+2}` with compensated updates.
//! Infinite sequences are represented by a finite window plus a bound on the
//! discarded pair sum, from which a truncation error bound follows.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Leading entries of a sequence together with a bound on the discarded tail.
///
/// `tail_bound` majorizes `Σ_{k≥n}|x_k x_{k+1}|` where `n` is the window
/// length, i.e. it also covers the pair straddling the cut.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeqWindow {
    entries: Vec<Complex64>,
    tail_bound: f64,
}

impl ComplexSeqWindow {
    pub fn new(entries: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid(format!("entry {k} is not finite")));
        }
        if !(tail_bound >= 0.0) || !tail_bound.is_finite() {
            return Err(Error::invalid(format!("tail bound must be finite and nonnegative, got {tail_bound}")));
        }
        Ok(ComplexSeqWindow { entries, tail_bound })
    }

    /// A finitely supported sequence (zero tail).
    pub fn finite(entries: Vec<Complex64>) -> Result<Self> {
        Self::new(entries, 0.0)
    }

    pub fn from_real(entries: &[f64], tail_bound: f64) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(), tail_bound)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ|x_k x_{k+1}|` over pairs inside the window.
    pub fn pair_sum(&self) -> f64 {
        self.entries.windows(2).map(|p| (p[0] * p[1]).norm()).sum()
    }

    fn sub(&self, range: std::ops::Range<usize>) -> Vec<Complex64> {
        let lo = range.start.min(self.entries.len());
        let hi = range.end.min(self.entries.len()).max(lo);
        self.entries[lo..hi].to_vec()
    }
}

/// Value of 𝔉 on a window together with its truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FValue {
    pub value: Complex64,
    /// Bound on `|𝔉(x) - 𝔉(window)|` implied by the tail bound.
    pub truncation_bound: f64,
    /// Set when `truncation_bound` exceeds the caller's budget.
    pub stale: bool,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// 𝔉 of the sequence whose consecutive pair products are `pairs[k] = x_k x_{k+1}`.
///
/// Many callers (Jacobi characteristic functions, orthogonal polynomials)
/// naturally produce the pair products rather than the entries.
pub fn eval_f_pairs(pairs: &[Complex64]) -> Complex64 {
    let mut hi1 = Complex64::new(1.0, 0.0); // F_{k+1}
    let mut lo1 = Complex64::new(0.0, 0.0);
    let mut hi2 = Complex64::new(1.0, 0.0); // F_{k+2}
    let mut lo2 = Complex64::new(0.0, 0.0);
    for &a in pairs.iter().rev() {
        let t = a * hi2;
        let (s_re, e_re) = two_sum(hi1.re, -t.re);
        let (s_im, e_im) = two_sum(hi1.im, -t.im);
        let lo = lo1 - a * lo2 + Complex64::new(e_re, e_im);
        hi2 = hi1;
        lo2 = lo1;
        hi1 = Complex64::new(s_re, s_im);
        lo1 = lo;
    }
    hi1 + lo1
}

fn pairs_of(entries: &[Complex64]) -> Vec<Complex64> {
    entries.windows(2).map(|p| p[0] * p[1]).collect()
}

/// 𝔉 of the window entries (the sequence padded with zeros).
pub fn eval_f(window: &ComplexSeqWindow) -> Complex64 {
    eval_f_pairs(&pairs_of(&window.entries))
}

/// 𝔉 of the window with the truncation error bound
/// `exp(S) (exp(tail_bound) - 1)`, where `S` is the in-window pair sum.
pub fn eval_f_with_budget(window: &ComplexSeqWindow, budget: f64) -> FValue {
    let value = eval_f(window);
    let truncation_bound = if window.tail_bound == 0.0 {
        0.0
    } else {
        window.pair_sum().exp() * window.tail_bound.exp_m1()
    };
    FValue { value, truncation_bound, stale: truncation_bound > budget }
}

/// Upper bound `exp(Σ|x_k x_{k+1}| + tail_bound)` on `|𝔉(x)|`.
pub fn eval_f_bound(window: &ComplexSeqWindow) -> f64 {
    (window.pair_sum() + window.tail_bound).exp()
}

fn f_of(v: Vec<Complex64>) -> Complex64 {
    eval_f_pairs(&pairs_of(&v))
}

/// Self-test of the Wronskian-type identities of 𝔉 on a finite window.
///
/// Checks, for the given `d` and all `1 ≤ s ≤ n - d`,
/// `𝔉(x_1..x_d)𝔉(x_2..x_{d+s}) - 𝔉(x_1..x_{d+s})𝔉(x_2..x_d)
///   = (Π_{j≤d} x_j x_{j+1}) 𝔉(x_{d+2}..x_{d+s})`,
/// and the limiting form with `x` the whole window. Returns the largest
/// residual, each scaled by `max(1, |lhs terms|)`.
pub fn check_shift_identity(window: &ComplexSeqWindow, d: usize) -> Result<f64> {
    let n = window.len();
    if d == 0 || d + 2 > n {
        return Err(Error::invalid(format!("need 1 <= d and d + 2 <= window length, got d = {d}, length {n}")));
    }
    let x = &window.entries;
    let prod: Complex64 = (0..d).map(|j| x[j] * x[j + 1]).product();
    let f_1d = f_of(window.sub(0..d));
    let f_2d = f_of(window.sub(1..d));
    let mut worst = 0.0f64;
    for s in 1..=(n - d) {
        let t1 = f_1d * f_of(window.sub(1..d + s));
        let t2 = f_of(window.sub(0..d + s)) * f_2d;
        let rhs = prod * f_of(window.sub(d + 1..d + s));
        let scale = 1.0f64.max(t1.norm() + t2.norm());
        worst = worst.max((t1 - t2 - rhs).norm() / scale);
    }
    let t1 = f_1d * f_of(window.sub(1..n));
    let t2 = f_2d * eval_f(window);
    let rhs = prod * f_of(window.sub(d + 1..n));
    let scale = 1.0f64.max(t1.norm() + t2.norm());
    worst = worst.max((t1 - t2 - rhs).norm() / scale);
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn small_windows() {
        assert_eq!(eval_f(&ComplexSeqWindow::finite(vec![]).unwrap()), c(1.0));
        assert_eq!(eval_f(&ComplexSeqWindow::finite(vec![c(7.5)]).unwrap()), c(1.0));
        let v = eval_f(&ComplexSeqWindow::finite(vec![c(0.5), c(0.2)]).unwrap());
        assert!((v - c(0.9)).norm() < 1e-16);
        assert_eq!(eval_f(&ComplexSeqWindow::finite(vec![c(1.0); 3]).unwrap()), c(-1.0));
    }

    #[test]
    fn rejects_nonfinite() {
        assert!(ComplexSeqWindow::finite(vec![c(f64::NAN)]).is_err());
        assert!(ComplexSeqWindow::new(vec![c(1.0)], -1.0).is_err());
        assert!(ComplexSeqWindow::new(vec![c(1.0)], f64::INFINITY).is_err());
    }

    #[test]
    fn bound_values() {
        let w = ComplexSeqWindow::finite(vec![c(0.0); 5]).unwrap();
        assert_eq!(eval_f_bound(&w), 1.0);
        let w = ComplexSeqWindow::finite(vec![c(0.5), c(0.2)]).unwrap();
        assert!((eval_f_bound(&w) - 0.1f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn leading_zero_decouples() {
        let w = ComplexSeqWindow::finite(vec![c(0.0), c(0.3), c(-1.2), c(0.8)]).unwrap();
        let tail = ComplexSeqWindow::finite(vec![c(0.3), c(-1.2), c(0.8)]).unwrap();
        assert_eq!(eval_f(&w), eval_f(&tail));
        assert_eq!(check_shift_identity(&w, 1).unwrap(), 0.0);
    }

    #[test]
    fn all_ones_identity() {
        let w = ComplexSeqWindow::finite(vec![c(1.0); 4]).unwrap();
        assert_eq!(check_shift_identity(&w, 1).unwrap(), 0.0);
        assert!(check_shift_identity(&w, 3).is_err());
    }

    #[test]
    fn stale_flag() {
        let w = ComplexSeqWindow::new(vec![c(0.1), c(0.1)], 0.5).unwrap();
        let v = eval_f_with_budget(&w, 1e-3);
        assert!(v.stale);
        assert!((v.truncation_bound - 0.01f64.exp() * 0.5f64.exp_m1()).abs() < 1e-15);
        let w = ComplexSeqWindow::new(vec![c(0.1), c(0.1)], 1e-6).unwrap();
        assert!(!eval_f_with_budget(&w, 1e-3).stale);
    }
}
