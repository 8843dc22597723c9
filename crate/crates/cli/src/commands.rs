use std::f64::consts::PI;

use weakbea::expansion::{a_operators, ExpansionConfig, OperatorExpansion, SdeModel};
use weakbea::fit::loglog_slope;
use weakbea::kernel::{
    discrete_decay_table, grid_expectation, kernel_expectation, one_step_expectation,
    weak_error_curve, GaussHermite, TransitionKernel,
};
use weakbea::kolmo::{
    average, decay_table, fit_decay_rate, spectral_gap, stationary_density, SpectralConfig,
};
use weakbea::mc::{check_with_rerun, ergodic_average, weak_estimate, McConfig, SigmaCheck};
use weakbea::measures::{expectation_under, modified_density, mu_hierarchy};
use weakbea::opalg::node;
use weakbea::{DiffOp, Execution, Result, TrigPoly};

use crate::config::Config;
use crate::report::{Check, Panel, Report};

/// Number of grid points used for exported densities.
const EXPORT_POINTS: usize = 256;

fn io_err(e: std::io::Error) -> weakbea::Error {
    weakbea::Error::InvalidArgument(format!("cannot write output: {e}"))
}

fn error_header(order: usize) -> Vec<String> {
    let mut h = vec!["tau".to_string()];
    h.extend((0..=order).map(|n| format!("error_N{n}")));
    h
}

/// Slope check over a sweep of errors, flagged as floor-limited when every
/// error is below `floor`.
fn slope_check(
    name: String,
    taus: &[f64],
    errs: &[f64],
    window: (f64, f64),
    upper: bool,
    floor: f64,
    oracle: &str,
) -> Check {
    let slope = loglog_slope(taus, errs);
    let c = if upper {
        Check::within(name, slope, window, oracle)
    } else {
        Check::at_least(name, slope, window.0, oracle)
    };
    if errs.iter().all(|&e| e <= floor) {
        c.floor(floor)
    } else {
        c
    }
}

fn density_rows(p: &TrigPoly) -> Vec<Vec<f64>> {
    (0..EXPORT_POINTS)
        .map(|i| {
            let x = node(i, EXPORT_POINTS);
            vec![x, p.eval(x)]
        })
        .collect()
}

fn density_panel(title: &str, file: &str) -> Panel {
    Panel {
        title: title.into(),
        file: file.into(),
        columns: 2,
        logx: false,
        logy: false,
        xlabel: "x".into(),
        ylabel: "density".into(),
    }
}

fn sweep_panel(title: &str, file: &str, order: usize) -> Panel {
    Panel {
        title: title.into(),
        file: file.into(),
        columns: order + 2,
        logx: true,
        logy: true,
        xlabel: "tau".into(),
        ylabel: "error".into(),
    }
}

/// `sum_j f^j a^{n-j} / (j! (n-j)!) d^{2n-j}`.
fn a_closed_form(model: &SdeModel, n: usize) -> Result<DiffOp> {
    let mut f_pow = vec![TrigPoly::one()];
    let mut a_pow = vec![TrigPoly::one()];
    for j in 1..=n {
        f_pow.push(f_pow[j - 1].try_mul(model.f())?);
        a_pow.push(a_pow[j - 1].try_mul(model.a())?);
    }
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let mut op = DiffOp::zero();
    for j in 0..=n {
        let c = f_pow[j]
            .try_mul(&a_pow[n - j])?
            .scale(1.0 / (fact(j) * fact(n - j)));
        op = op.add_scaled(&DiffOp::term(2 * n - j, c), 1.0);
    }
    Ok(op)
}

pub fn expand(cfg: &Config, rep: &mut Report) -> Result<()> {
    let model = cfg.model().map_err(weakbea::Error::InvalidArgument)?;
    let tol = &cfg.tolerances;
    let exp = OperatorExpansion::build(&model, cfg.order)?;

    let mut rows = Vec::new();
    let mut dump = |kind: &str, ops: &[DiffOp]| {
        for (n, op) in ops.iter().enumerate() {
            for (k, c) in op.terms().iter().enumerate() {
                for h in 0..=c.bandwidth() {
                    let (a, b) = c.harmonic(h);
                    if a != 0.0 || b != 0.0 {
                        rows.push((
                            vec![
                                kind.to_string(),
                                n.to_string(),
                                k.to_string(),
                                h.to_string(),
                            ],
                            vec![a, b],
                        ));
                    }
                }
            }
        }
    };
    dump("A", exp.a_ops());
    dump("L", exp.l_ops());
    rep.csv_labelled(
        "operators.csv",
        &["operator", "n", "derivative", "harmonic", "cos", "sin"],
        &rows,
    )
    .map_err(io_err)?;

    let orders: Vec<usize> = exp.l_ops().iter().map(DiffOp::max_order).collect();
    let bands: Vec<usize> = exp.l_ops().iter().map(DiffOp::coeff_bandwidth).collect();
    rep.value("l_derivative_orders", orders);
    rep.value("l_coefficient_bandwidths", bands);

    let closed = (1..=cfg.order + 1)
        .map(|n| {
            Ok(a_closed_form(&model, n)?
                .add_scaled(&exp.a_ops()[n], -1.0)
                .max_abs_coeff())
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = closed.iter().copied().fold(0.0, f64::max);
    rep.check(Check::at_most(
        "a_closed_form",
        worst,
        tol.inverse,
        "sum_j f^j a^(n-j) / (j!(n-j)!) d^(2n-j)",
    ));

    let inv = exp.verify_inverse_relation()?;
    rep.value(
        "inverse_residuals",
        inv.residuals.iter().map(|r| r.1).collect::<Vec<_>>(),
    );
    rep.check(Check::at_most(
        "inverse_relation",
        inv.max_residual(),
        tol.inverse,
        "A_n rebuilt from products of L_m over compositions",
    ));

    let ann = exp.constant_annihilation()?;
    rep.check(Check::at_most(
        "constant_annihilation",
        ann.iter().copied().fold(0.0, f64::max),
        tol.annihilation,
        "L_n 1 = 0",
    ));

    if cfg.constant_coefficients() {
        let max_l = exp.l_ops()[1..]
            .iter()
            .map(DiffOp::max_abs_coeff)
            .fold(0.0, f64::max);
        rep.check(Check::at_most(
            "constant_coefficient_exactness",
            max_l,
            tol.annihilation,
            "L_n = 0 for n >= 1 with constant coefficients",
        ));
    }
    Ok(())
}

/// Normalized `exp(F / a)` with `F' = f`, when `a` is constant and `f` has
/// zero mean.
fn gibbs_density(model: &SdeModel) -> Option<impl Fn(f64) -> f64> {
    if model.sigma().bandwidth() != 0 || model.f().mean().abs() > 1e-14 {
        return None;
    }
    let a = model.a().mean();
    let potential = model.f().antiderivative();
    let w = move |x: f64| (potential.eval(x) / a).exp();
    let m = 1024;
    let z = (0..m).map(|i| w(node(i, m))).sum::<f64>() * 2.0 * PI / m as f64;
    Some(move |x: f64| w(x) / z)
}

pub fn invariant(cfg: &Config, rep: &mut Report, exec: Execution) -> Result<()> {
    let model = cfg.model().map_err(weakbea::Error::InvalidArgument)?;
    let phi = cfg.observable().map_err(weakbea::Error::InvalidArgument)?;
    let tol = &cfg.tolerances;
    let scfg = cfg.spectral();
    let exp = OperatorExpansion::build(&model, cfg.order)?;
    let rho = stationary_density(exp.generator(), &scfg)?;
    let me = mu_hierarchy(exp.l_ops(), &rho, &scfg)?;

    rep.csv(
        "rho.csv",
        &["x".into(), "value".into()],
        &density_rows(&rho),
    )
    .map_err(io_err)?;
    rep.panel(density_panel("stationary density", "rho.csv"));
    for n in 1..=cfg.order {
        let name = format!("mu_{n}.csv");
        rep.csv(
            &name,
            &["x".into(), "value".into()],
            &density_rows(me.mu(n)),
        )
        .map_err(io_err)?;
    }
    rep.value("phi_mean_rho", average(&phi, &rho));
    rep.value(
        "phi_mu_coefficients",
        (0..=cfg.order)
            .map(|n| expectation_under(&phi, me.mu(n)))
            .collect::<Vec<_>>(),
    );

    if let Some(gibbs) = gibbs_density(&model) {
        let m = 4 * scfg.bandwidth;
        let dev = (0..m)
            .map(|i| {
                let x = node(i, m);
                (rho.eval(x) - gibbs(x)).abs()
            })
            .fold(0.0, f64::max);
        rep.check(Check::at_most(
            "gibbs_density",
            dev,
            tol.density,
            "exp(F/a) / Z with F' = f",
        ));
    }

    let mass = cfg
        .tau
        .iter()
        .map(|&t| Ok((modified_density(&me, t, cfg.order)?.integral() - 1.0).abs()))
        .collect::<Result<Vec<f64>>>()?;
    rep.check(Check::at_most(
        "modified_density_mass",
        mass.iter().copied().fold(0.0, f64::max),
        tol.density,
        "integral of mu^(N)(tau) = 1",
    ));

    let fine = SpectralConfig {
        bandwidth: 2 * scfg.bandwidth,
        ..scfg
    };
    let rho2 = stationary_density(exp.generator(), &fine)?;
    let me2 = mu_hierarchy(exp.l_ops(), &rho2, &fine)?;
    let change = (0..=cfg.order)
        .map(|n| (me.mu(n) - me2.mu(n)).max_abs_coeff())
        .fold(0.0, f64::max);
    rep.check(Check::at_most(
        "bandwidth_doubling",
        change,
        tol.refinement,
        "rho and mu_n recomputed with bandwidth 2K",
    ));

    let kcfg = cfg.kernel();
    let mut rows = Vec::new();
    for &tau in &cfg.tau {
        let kernel = TransitionKernel::build(&model, tau, kcfg.grid_size, kcfg.quad_points, exec)?;
        let pi = kernel.numerical_invariant()?;
        let grid: Vec<Vec<f64>> = pi
            .nodes()
            .zip(pi.values())
            .map(|(x, &v)| vec![x, v])
            .collect();
        let xv = ["x".to_string(), "value".to_string()];
        rep.csv(&format!("kernel_invariant_tau{tau}.csv"), &xv, &grid)
            .map_err(io_err)?;
        let modified = modified_density(&me, tau, cfg.order)?;
        rep.csv(
            &format!("mu_modified_tau{tau}.csv"),
            &xv,
            &density_rows(&modified),
        )
        .map_err(io_err)?;
        let mut row = vec![tau];
        for n in 0..=cfg.order {
            let mu = modified_density(&me, tau, n)?;
            let d = pi
                .values()
                .iter()
                .zip(pi.nodes())
                .map(|(p, x)| (p - mu.eval(x)).abs())
                .fold(0.0, f64::max);
            row.push(d);
        }
        rows.push(row);
    }
    rep.csv(
        "kernel_invariant_errors.csv",
        &error_header(cfg.order),
        &rows,
    )
    .map_err(io_err)?;
    rep.panel(sweep_panel(
        "kernel invariant vs mu^(N)",
        "kernel_invariant_errors.csv",
        cfg.order,
    ));
    let taus: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    for n in 0..=cfg.order {
        let errs: Vec<f64> = rows.iter().map(|r| r[n + 1]).collect();
        let c = slope_check(
            format!("kernel_invariant_slope_N{n}"),
            &taus,
            &errs,
            tol.slope_window(n),
            false,
            tol.floor,
            "order of |pi_tau - mu^(N)(tau)|",
        );
        rep.check(if n >= cfg.converge.soft_from {
            c.soft()
        } else {
            c
        });
    }
    Ok(())
}

pub fn converge(cfg: &Config, rep: &mut Report, exec: Execution) -> Result<()> {
    let model = cfg.model().map_err(weakbea::Error::InvalidArgument)?;
    let phi = cfg.observable().map_err(weakbea::Error::InvalidArgument)?;
    let tol = &cfg.tolerances;
    let a = a_operators(&model, cfg.order, &ExpansionConfig::default())?;
    let a_phi: Vec<TrigPoly> = a.iter().map(|op| op.apply(&phi)).collect::<Result<_>>()?;
    let gh = GaussHermite::new(cfg.resolution.q)?;
    let points: Vec<f64> = (0..8).map(|i| (2 * i + 1) as f64 * PI / 8.0).collect();
    let taus = &cfg.tau;

    // errs[n][point][tau]
    let errs = exec.map_slice(&points, |&x| -> Result<Vec<Vec<f64>>> {
        let mut out = vec![Vec::with_capacity(taus.len()); cfg.order + 1];
        for &tau in taus {
            let exact = one_step_expectation(&model, &phi, tau, x, &gh)?;
            let mut series = 0.0;
            for (n, e) in out.iter_mut().enumerate() {
                series += tau.powi(n as i32) * a_phi[n].eval(x);
                e.push((exact - series).abs());
            }
        }
        Ok(out)
    });
    let errs: Vec<Vec<Vec<f64>>> = errs.into_iter().collect::<Result<_>>()?;

    let rows: Vec<Vec<f64>> = taus
        .iter()
        .enumerate()
        .map(|(j, &tau)| {
            let mut r = vec![tau];
            r.extend((0..=cfg.order).map(|n| errs.iter().map(|p| p[n][j]).fold(0.0, f64::max)));
            r
        })
        .collect();
    rep.csv("one_step.csv", &error_header(cfg.order), &rows)
        .map_err(io_err)?;
    rep.panel(sweep_panel(
        "one-step error (max over points)",
        "one_step.csv",
        cfg.order,
    ));

    for n in 0..=cfg.order {
        let window = tol.slope_window(n);
        let per_point: Vec<Check> = errs
            .iter()
            .map(|p| slope_check(String::new(), taus, &p[n], window, true, tol.floor, ""))
            .collect();
        let slopes: Vec<f64> = per_point
            .iter()
            .map(|c| c.value.unwrap_or(f64::NAN))
            .collect();
        let floored = per_point.iter().filter(|c| c.note.is_some()).count();
        let (lo, hi) = slopes
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &s| {
                (l.min(s), h.max(s))
            });
        let offender = per_point.iter().find(|c| !c.pass).and_then(|c| c.value);
        rep.value(&format!("one_step_slopes_N{n}"), slopes);
        let mut c = Check::within(
            format!("one_step_slope_N{n}"),
            offender.unwrap_or(lo),
            window,
            "E phi(x + tau f + sigma sqrt(tau) xi) by Gauss-Hermite against sum tau^m A_m phi",
        );
        c.pass = offender.is_none();
        let mut note = format!("slopes at 8 points in [{lo:.3}, {hi:.3}]");
        if floored > 0 {
            note.push_str(&format!(
                "; {floored} point(s) at the floor {:e}",
                tol.floor
            ));
        }
        rep.check(c.note(note));
    }

    let scfg = cfg.spectral();
    let kcfg = cfg.kernel();
    let lt = &cfg.converge.long_time_tau;
    let horizon = long_time_horizon(&model, &phi, cfg)?;
    rep.value("long_time_horizon", horizon);
    let mut table: Vec<Vec<f64>> = lt.iter().map(|&t| vec![t]).collect();
    for n in 0..=cfg.order {
        let curve = weak_error_curve(&model, &phi, lt, n, horizon, &kcfg, &scfg, exec)?;
        let e: Vec<f64> = curve.rows.iter().map(|r| r.error).collect();
        for (row, err) in table.iter_mut().zip(&e) {
            row.push(*err);
        }
        rep.value(&format!("long_time_transient_N{n}"), curve.transient);
        let mut c = slope_check(
            format!("long_time_slope_N{n}"),
            lt,
            &e,
            tol.slope_window(n),
            true,
            tol.floor,
            "E phi(X_p) from the transition kernel against the integral of phi mu^(N)(tau)",
        );
        let smallest = e.iter().copied().fold(f64::INFINITY, f64::min);
        let transient = curve.transient * phi.sup_norm();
        if c.note.is_none() && transient > 0.1 * smallest {
            c.pass = false;
            c = c.note(format!(
                "transient {transient:e} is not small against the errors; lengthen converge.horizon"
            ));
        }
        rep.check(if n >= cfg.converge.soft_from {
            c.soft()
        } else {
            c
        });
    }
    rep.csv("long_time.csv", &error_header(cfg.order), &table)
        .map_err(io_err)?;
    rep.panel(sweep_panel(
        "long-time weak error",
        "long_time.csv",
        cfg.order,
    ));
    Ok(())
}

/// `converge.horizon`, lengthened until `exp(-lambda T) ||phi||` is below the
/// floor (at most a hundredfold).
fn long_time_horizon(model: &SdeModel, phi: &TrigPoly, cfg: &Config) -> Result<f64> {
    let gen = OperatorExpansion::build(model, 0)?;
    let gap = spectral_gap(gen.generator(), &cfg.spectral())?;
    let base = cfg.converge.horizon;
    let amp = phi.sup_norm();
    if !(amp > cfg.tolerances.floor) || !(gap > 0.0) {
        return Ok(base);
    }
    let needed = (amp / cfg.tolerances.floor).ln() / gap;
    Ok(base.max(needed.min(100.0 * base).ceil()))
}

fn sigma_row(name: &str, c: &SigmaCheck) -> (Vec<String>, Vec<f64>) {
    let e = c.estimate;
    (
        vec![
            name.to_string(),
            if c.reran { "yes" } else { "no" }.to_string(),
        ],
        vec![e.mean, e.std_error, c.target, e.z_score(c.target)],
    )
}

fn sigma_check(name: &str, c: &SigmaCheck, k: f64, oracle: &str, paths: usize) -> Check {
    let e = c.estimate;
    if paths < 2 {
        return Check {
            name: name.into(),
            value: Some((e.mean - c.target).abs()),
            threshold: "n/a".into(),
            comparison: "<=",
            oracle: oracle.into(),
            pass: false,
            enforced: false,
            note: Some("a single path has no standard error; std_error is n/a".into()),
        };
    }
    let mut check = Check::at_most(name, e.z_score(c.target), k, oracle);
    check.pass = c.pass;
    if c.reran {
        check = check.note("first seed missed; rerun with seed + 1");
    }
    check
}

pub fn simulate(cfg: &Config, rep: &mut Report, exec: Execution) -> Result<()> {
    let model = cfg.model().map_err(weakbea::Error::InvalidArgument)?;
    let phi = cfg.observable().map_err(weakbea::Error::InvalidArgument)?;
    let s = &cfg.simulate;
    let k = cfg.tolerances.sigma;
    let gh = GaussHermite::new(cfg.resolution.q)?;
    let kcfg = cfg.kernel();

    let target = one_step_expectation(&model, &phi, s.tau, s.x_start, &gh)?;
    let one = check_with_rerun(cfg.seed, target, k, |seed| {
        let mut c = McConfig::new(model.clone(), s.tau, 1, s.paths, seed);
        c.x0 = s.x_start;
        weak_estimate(&c, &phi, exec)
    })?;

    let kernel = TransitionKernel::build(&model, s.tau, kcfg.grid_size, kcfg.quad_points, exec)?;
    let target = kernel_expectation(&kernel, &phi, s.steps);
    let long = check_with_rerun(cfg.seed, target, k, |seed| {
        weak_estimate(
            &McConfig::new(model.clone(), s.tau, s.steps, s.paths, seed),
            &phi,
            exec,
        )
    })?;

    let kernel = TransitionKernel::build(
        &model,
        s.ergodic_tau,
        kcfg.grid_size,
        kcfg.quad_points,
        exec,
    )?;
    let target = grid_expectation(&phi, &kernel.numerical_invariant()?);
    let erg = check_with_rerun(cfg.seed, target, k, |seed| {
        let mut c = McConfig::new(model.clone(), s.ergodic_tau, s.ergodic_steps, 1, seed);
        c.burn_in = s.burn_in;
        ergodic_average(&c, &phi)
    })?;

    let exp = OperatorExpansion::build(&model, cfg.order)?;
    let scfg = cfg.spectral();
    let rho = stationary_density(exp.generator(), &scfg)?;
    let me = mu_hierarchy(exp.l_ops(), &rho, &scfg)?;
    let modified = expectation_under(&phi, &modified_density(&me, s.ergodic_tau, cfg.order)?);
    rep.value("ergodic_modified_expectation", modified);
    rep.value("ergodic_continuous_expectation", average(&phi, &rho));

    let std_error = |c: &SigmaCheck, paths: usize| -> serde_json::Value {
        if paths < 2 {
            "n/a".into()
        } else {
            c.estimate.std_error.into()
        }
    };
    for (name, c, paths) in [
        ("one_step", &one, s.paths),
        ("p_step", &long, s.paths),
        ("ergodic", &erg, 2),
    ] {
        rep.value(&format!("{name}_mean"), c.estimate.mean);
        rep.value(&format!("{name}_std_error"), std_error(c, paths));
        rep.value(&format!("{name}_target"), c.target);
    }
    rep.csv_labelled(
        "estimates.csv",
        &["estimate", "rerun", "mean", "std_error", "target", "z"],
        &[
            sigma_row("one_step", &one),
            sigma_row("p_step", &long),
            sigma_row("ergodic", &erg),
        ],
    )
    .map_err(io_err)?;

    rep.check(sigma_check(
        "mc_one_step",
        &one,
        k,
        "Gauss-Hermite one-step expectation",
        s.paths,
    ));
    rep.check(sigma_check(
        "mc_p_step",
        &long,
        k,
        "transition kernel P^p phi at x = 0",
        s.paths,
    ));
    rep.check(sigma_check(
        "mc_ergodic",
        &erg,
        k,
        "phi integrated against the kernel invariant density",
        2,
    ));
    Ok(())
}

pub fn mixing(cfg: &Config, rep: &mut Report, exec: Execution) -> Result<()> {
    let model = cfg.model().map_err(weakbea::Error::InvalidArgument)?;
    let phi = cfg.observable().map_err(weakbea::Error::InvalidArgument)?;
    let tol = &cfg.tolerances;
    let scfg = cfg.spectral();
    let kcfg = cfg.kernel();
    let m = &cfg.mixing;
    let exp = OperatorExpansion::build(&model, 0)?;
    let l = exp.generator();
    let rho = stationary_density(l, &scfg)?;
    let gap = spectral_gap(l, &scfg)?;
    rep.value("spectral_gap", gap);

    let (initial, cont) = decay_table(l, &phi, &rho, m.horizon, &scfg)?;
    let rows: Vec<Vec<f64>> = cont.iter().map(|d| vec![d.0, d.1]).collect();
    rep.csv(
        "decay_continuous.csv",
        &["t".into(), "deviation".into()],
        &rows,
    )
    .map_err(io_err)?;

    let kernel = TransitionKernel::build(&model, m.tau, kcfg.grid_size, kcfg.quad_points, exec)?;
    let (d_initial, disc) = discrete_decay_table(&kernel, &phi, m.horizon)?;
    let rows: Vec<Vec<f64>> = disc.iter().map(|d| vec![d.0, d.1]).collect();
    rep.csv(
        "decay_discrete.csv",
        &["t".into(), "deviation".into()],
        &rows,
    )
    .map_err(io_err)?;
    for (title, file) in [
        ("continuous decay", "decay_continuous.csv"),
        ("discrete decay", "decay_discrete.csv"),
    ] {
        rep.panel(Panel {
            title: title.into(),
            file: file.into(),
            columns: 2,
            logx: false,
            logy: true,
            xlabel: "t".into(),
            ylabel: "sup |P_t phi - <phi>|".into(),
        });
    }

    let modulus = kernel.second_eigenvalue_modulus();
    let eig_rate = -modulus.ln() / m.tau;
    rep.value("second_eigenvalue_modulus", modulus);
    rep.value("second_eigenvalue_rate", eig_rate);
    rep.check(Check::at_most(
        "second_eigenvalue_rate",
        (eig_rate - gap).abs() / gap,
        tol.rate,
        "-ln|lambda_2(P)| / tau against the spectral gap of L",
    ));

    let fit_oracle = "log-linear fit over the tail half of the decay table";
    let cont_rate = match fit_decay_rate(initial, &cont) {
        Ok((rate, n)) => {
            rep.value("continuous_rate", rate);
            rep.value("continuous_fitted_samples", n);
            rep.check(Check::at_least(
                "continuous_rate_vs_gap",
                rate,
                gap * (1.0 - tol.rate),
                "decay no slower than the spectral gap",
            ));
            Some(rate)
        }
        Err(e) => {
            rep.check(Check::failed("continuous_rate", fit_oracle, e.to_string()));
            None
        }
    };
    match fit_decay_rate(d_initial, &disc) {
        Ok((rate, n)) => {
            rep.value("discrete_rate", rate);
            rep.value("discrete_fitted_samples", n);
            if let Some(c) = cont_rate {
                rep.check(Check::at_most(
                    "discrete_vs_continuous_rate",
                    (rate - c).abs() / c,
                    tol.rate,
                    "continuous decay rate of P_t",
                ));
            }
        }
        Err(e) => rep.check(Check::failed("discrete_rate", fit_oracle, e.to_string())),
    }
    Ok(())
}
