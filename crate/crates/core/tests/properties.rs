mod common;

use common::{f_brute, sign_count};
use coulomb_opoly::coulomb::coulomb_sequences;
use coulomb_opoly::jacobi::{eigenvalues_sym_tridiag, gamma_at, xi_vector, TridiagonalMatrix};
use coulomb_opoly::opoly::{
    coulomb_p, coulomb_p_coeffs, lommel_q, lommel_r, op_first_kind, op_first_kind_f, wronskian_p_residual,
    zeros_interlace,
};
use coulomb_opoly::seqkernel::{check_shift_identity, eval_f, eval_f_bound};
use coulomb_opoly::{ComplexSeqWindow, CoulombParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_vec(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| Complex64::new(a, b)), 0..=max_len)
}

fn window(x: &[Complex64]) -> ComplexSeqWindow {
    ComplexSeqWindow::finite(x.to_vec()).unwrap()
}

fn params() -> impl Strategy<Value = CoulombParams> {
    (-0.4f64..3.0, -2.0f64..2.0).prop_map(|(l, eta)| CoulombParams::new(l, eta).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_matches_pair_enumeration(x in complex_vec(10)) {
        let w = window(&x);
        let bound = eval_f_bound(&w);
        prop_assert!((eval_f(&w) - f_brute(&x)).norm() <= 1e-13 * bound);
    }

    #[test]
    fn f_is_bounded(x in complex_vec(24)) {
        let w = window(&x);
        prop_assert!(eval_f(&w).norm() <= eval_f_bound(&w) * (1.0 + 1e-13));
    }

    #[test]
    fn f_recurrence_and_split(x in complex_vec(16), k in 1usize..15) {
        prop_assume!(x.len() >= 3 && k + 1 < x.len());
        let f = |s: &[Complex64]| eval_f(&window(s));
        let n = x.len();
        let scale = eval_f_bound(&window(&x));
        let rec = f(&x[..n - 1]) - x[n - 2] * x[n - 1] * f(&x[..n - 2]);
        prop_assert!((f(&x) - rec).norm() <= 1e-12 * scale);
        // Split between positions k and k + 1 (one-based).
        let split = f(&x[..k]) * f(&x[k..]) - x[k - 1] * x[k] * f(&x[..k - 1]) * f(&x[k + 1..]);
        prop_assert!((f(&x) - split).norm() <= 1e-12 * scale);
    }

    #[test]
    fn shift_identity(x in complex_vec(12), d in 1usize..8) {
        prop_assume!(d + 2 <= x.len());
        let w = window(&x);
        let r = check_shift_identity(&w, d).unwrap();
        prop_assert!(r <= 1e-12 * eval_f_bound(&w).powi(2));
    }

    #[test]
    fn gamma_products_are_weights(p in params(), n in 0usize..30) {
        let (op, _) = coulomb_sequences(&p).unwrap();
        let g = gamma_at(&op, n) * gamma_at(&op, n + 1);
        prop_assert!((g - op.weight(n)).abs() <= 1e-14 * op.weight(n));
    }

    #[test]
    fn eigenvalues_agree_with_sign_counts(
        diag in prop::collection::vec(-3.0f64..3.0, 1..20),
        seed in prop::collection::vec(0.1f64..2.0, 19),
    ) {
        let n = diag.len();
        let off: Vec<f64> = seed[..n - 1].to_vec();
        let m = TridiagonalMatrix::new(diag.clone(), off.clone()).unwrap();
        let eig = eigenvalues_sym_tridiag(&m, 1e-14).unwrap();
        prop_assert_eq!(eig.len(), n);
        let delta = 1e-9;
        for (i, &e) in eig.iter().enumerate() {
            prop_assert!(sign_count(&diag, &off, e - delta) <= i);
            prop_assert!(sign_count(&diag, &off, e + delta) > i);
        }
        let trace: f64 = diag.iter().sum();
        prop_assert!((eig.iter().sum::<f64>() - trace).abs() < 1e-11 * (1.0 + trace.abs()));
    }

    #[test]
    fn polynomial_routes_agree(p in params(), n in 0usize..=12, z in -1.5f64..1.5) {
        let (op, _) = coulomb_sequences(&p).unwrap();
        let a = op_first_kind(&op, n, z);
        let c = coulomb_p_coeffs(&p, n).unwrap();
        let scale = c.abs_bound(z);
        prop_assert!((a - c.eval(z)).abs() <= 1e-12 * scale);
        prop_assume!((0..n).all(|k| (op.lambda(k) - z).abs() > 1e-3));
        let b = op_first_kind_f(&op, n, z).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * scale);
    }

    #[test]
    fn wronskian_identity(l in 0.6f64..3.0, eta in -2.0f64..2.0, n in 0usize..=6, s in 0usize..=6, z in -1.0f64..1.0) {
        let p = CoulombParams::new(l, eta).unwrap();
        prop_assert!(wronskian_p_residual(&p, n, s, z).unwrap() < 1e-9);
    }

    #[test]
    fn polynomial_zeros_interlace(p in params(), n in 1usize..=6) {
        let (op, _) = coulomb_sequences(&p).unwrap();
        prop_assert!(zeros_interlace(&op, n, 1e-14).unwrap());
    }

    #[test]
    fn zero_charge_parity(l in -0.4f64..3.0, n in 0i64..=12, z in -2.0f64..2.0) {
        let p = CoulombParams::new(l, 0.0).unwrap();
        let a = coulomb_p(&p, n, z).unwrap();
        let b = coulomb_p(&p, n, -z).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((a - sign * b).abs() <= 1e-13 * a.abs().max(1.0));
    }

    #[test]
    fn xi_solves_eigenrelation(p in params(), z in prop_oneof![-4.0f64..-0.2, 0.2f64..4.0]) {
        let (op, decay) = coulomb_sequences(&p).unwrap();
        let v = xi_vector(&op, &decay, z, 12, 1e-13).unwrap();
        let scale = v.xi.iter().fold(v.xi_minus_one.abs(), |m, x| m.max(x.abs()));
        let xi = |k: i64| if k < 0 { v.xi_minus_one } else { v.xi[k as usize] };
        for k in 0..11i64 {
            let back = if k == 0 { 1.0 } else { op.weight(k as usize - 1) };
            let r = back * xi(k - 1) + (op.lambda(k as usize) - 1.0 / z) * xi(k) + op.weight(k as usize) * xi(k + 1);
            prop_assert!(r.abs() <= 1e-9 * scale.max(1.0) / z.abs().min(1.0), "k {}: {}", k, r);
        }
    }

    #[test]
    fn lommel_order_variable_form(n in 0usize..=10, u in 0.2f64..3.0, nu in 0.1f64..4.0) {
        let q = lommel_q(n, u, nu).unwrap();
        let r = lommel_r(n as i64, nu, 2.0 * u).unwrap();
        prop_assert!((q - r).abs() <= 1e-11 * q.abs().max(r.abs()).max(1.0));
    }
}
