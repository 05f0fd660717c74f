use crate::report::{Bound, Report, Sci};
use crate::{Cli, Command};
use coulomb_opoly::coulomb::{self, CoulombParams};
use coulomb_opoly::jacobi::ZeroOptions;
use coulomb_opoly::{opoly, zeta, Error, Result};

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn dispatch(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    if !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {}", c.tol)));
    }
    let p = CoulombParams::new(c.l, c.eta)?;
    let opts = |count: usize| -> Result<ZeroOptions> {
        if count == 0 {
            return Err(Error::InvalidInput("count must be at least 1".into()));
        }
        Ok(ZeroOptions { count, tol: c.tol, truncation_cap: c.truncation_cap })
    };
    let name = match &cli.command {
        Command::Zeros { .. } => "zeros",
        Command::Dzeros { .. } => "dzeros",
        Command::Poly { .. } => "poly",
        Command::Coeffs { .. } => "coeffs",
        Command::Zeta { .. } => "zeta",
        Command::Bounds { .. } => "bounds",
        Command::Moments { .. } => "moments",
        Command::OrthoCheck { .. } => "ortho-check",
        Command::IdentitySuite { .. } => "identity-suite",
        Command::BesselOracle { .. } => "bessel-oracle",
    };
    let mut rep = Report::new(name, p.l, p.eta, c.tol);
    match &cli.command {
        Command::Zeros { count } | Command::Dzeros { count } => {
            let o = opts(*count)?;
            let r = if name == "zeros" { coulomb::zeros_f_with(&p, &o)? } else { coulomb::zeros_df_with(&p, &o)? };
            for (k, (z, b)) in r.zeros.iter().zip(&r.error_bounds).enumerate() {
                rep.push((k + 1).to_string(), *z, Bound::Value(Sci(*b)));
            }
            rep.provenance.truncation_order = Some(r.truncation_order);
        }
        Command::Poly { n, z } => {
            let (op, _) = coulomb::coulomb_sequences(&p)?;
            for (k, v) in opoly::op_first_kind_all(&op, *n, *z).into_iter().enumerate() {
                rep.push(k.to_string(), v, Bound::RECURRENCE);
            }
        }
        Command::Coeffs { n } => {
            let pc = opoly::coulomb_p_coeffs(&p, *n)?;
            for (k, v) in pc.coeffs().iter().enumerate() {
                rep.push(k.to_string(), *v, Bound::RECURRENCE);
            }
        }
        Command::Zeta { k_max } => {
            let t = zeta::zeta_table(&p, *k_max)?;
            for k in 2..=t.k_max() {
                rep.push(k.to_string(), t.get(k).unwrap(), Bound::RECURRENCE);
            }
        }
        Command::Bounds { s_max } => {
            for (s, (lo, hi)) in zeta::euler_bounds(&p, *s_max)?.into_iter().enumerate() {
                rep.push(format!("{}:lower", s + 1), lo, Bound::RECURRENCE);
                rep.push(format!("{}:upper", s + 1), hi, Bound::RECURRENCE);
            }
        }
        Command::Moments { n } => {
            for (k, m) in zeta::measure_moments(&p, *n)?.into_iter().enumerate() {
                rep.push(k.to_string(), m, Bound::RECURRENCE);
            }
        }
        Command::OrthoCheck { count, n, tilde } => {
            let m = opoly::orthogonality_measure_with(&p, &opts(*count)?, *tilde)?;
            let r = opoly::orthogonality_check(&p, &m, *n)?;
            for i in 0..=*n {
                for j in 0..=*n {
                    rep.push(format!("{i}:{j}"), r.residuals[i][j], Bound::Value(Sci(r.tail_bounds[i][j])));
                }
            }
            rep.push("tail_defect", m.tail_defect, Bound::Value(Sci(m.tail_majorant)));
            rep.push("mass_at_zero", m.mass_at_zero, Bound::Value(Sci(m.tail_majorant)));
            rep.provenance.truncation_order = Some(m.truncation_order);
        }
        Command::IdentitySuite { n, s_max, rho } => identity_suite(&p, *n, *s_max, rho, c.tol, &mut rep)?,
        Command::BesselOracle { count } => {
            if p.eta != 0.0 {
                return Err(Error::ParameterDomain("bessel-oracle requires eta = 0".into()));
            }
            if *count == 0 {
                return Err(Error::InvalidInput("count must be at least 1".into()));
            }
            for (k, (z, b)) in coulomb::bessel_zeros_series(p.l + 0.5, *count, c.tol)?.into_iter().enumerate() {
                rep.push((k + 1).to_string(), z, Bound::Value(Sci(b)));
            }
        }
    }
    Ok(rep)
}

fn identity_suite(p: &CoulombParams, n: usize, s_max: usize, rhos: &[f64], tol: f64, rep: &mut Report) -> Result<()> {
    let ev = tol.min(1e-15);
    let id = opoly::identity_suite(p, n, s_max, rhos, ev)?;
    rep.push("lincomb_f", id.lincomb_f, Bound::RESIDUAL);
    rep.push("wronskian_p", id.wronskian_p, Bound::RESIDUAL);
    rep.push("shift_relation", opoly::shift_relation_residual(p.l, p.eta, 10, 10), Bound::RESIDUAL);
    let nu = p.l + 0.5;
    let mut lommel = 0.0f64;
    let mut routes = 0.0f64;
    let mut bessel_f = 0.0f64;
    for &x in rhos {
        bessel_f = bessel_f.max(opoly::bessel_f_residual(nu, 0.5 * x, ev)?);
        for k in 0..=n {
            lommel = lommel.max(opoly::lommel_bessel_residual(k, nu, x, ev)?);
            let r = opoly::lommel_r(k as i64, nu, x)?;
            routes = routes.max(rel_gap(r, opoly::lommel_r_explicit(k, nu, x)?));
            routes = routes.max(rel_gap(r, opoly::lommel_r_f(k, nu, x)?));
            routes = routes.max(rel_gap(opoly::lommel_q(k, 0.5 * x, nu)?, r));
        }
    }
    rep.push("lommel_routes", routes, Bound::RESIDUAL);
    rep.push("lommel_bessel", lommel, Bound::RESIDUAL);
    rep.push("bessel_f", bessel_f, Bound::RESIDUAL);
    rep.push("gamma_identity", zeta::gamma_identity_check(p, 8)?, Bound::RESIDUAL);
    let first = coulomb::zeros_f(p, 1, 1e-12)?;
    let r1 = first.zeros[0].abs();
    let mut had = 0.0f64;
    for f in [0.1, 0.2, 0.3, 0.4, 0.5] {
        had = had.max(zeta::hadamard_residual(p, f * r1, 40, ev)?.abs());
        had = had.max(zeta::hadamard_residual(p, -f * r1, 40, ev)?.abs());
    }
    rep.push("hadamard", had, Bound::RESIDUAL);
    let t = zeta::zeta_table(p, 10)?;
    let q = zeta::ratio_taylor_coeffs(p, 8)?;
    let gap = |a: f64, b: f64| if b == 0.0 { a.abs() } else { rel_gap(a, b) };
    let taylor = (0..=8).map(|k| gap(q[k], t.get(k + 2).unwrap())).fold(0.0, f64::max);
    rep.push("taylor", taylor, Bound::RESIDUAL);
    rep.provenance.truncation_order = Some(first.truncation_order);
    Ok(())
}
