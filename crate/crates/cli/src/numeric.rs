use diracflow::algebra::Generator;
use diracflow::lab::{
    commutator, convergence_sweep, eriksen_t, evaluate_symbolic, exact_z, exp_anti_hermitian,
    hermitian_eigen, hermitian_function, loglog_slope, nw_exact, omega_u_unitary_check,
    riccati_order, riccati_residual, sign_operator, special_class_z0, CMat, MatrixModel, SPoint,
    C64,
};
use diracflow::series::{hnw_series, omega_u_at_infinity};
use serde_json::Value;

use crate::report::{Check, Report};
use crate::RunConfig;

const ALGEBRAIC: f64 = 1e-10;
const LIMIT: f64 = 1e-6;
const SLOPE: f64 = 0.5;
const SAMPLE_S: [f64; 5] = [0.0, 0.1, 0.5, 1.0, 2.0];
const LIMIT_S: f64 = 8.0;
const FD_STEP: f64 = 1e-4;
/// Below this the finite-difference residual is rounding noise and has no order.
const FD_FLOOR: f64 = 1e-13;

fn sqrtm(m: &CMat) -> CMat {
    hermitian_function(m, |x| C64::new(x.max(0.0).sqrt(), 0.0))
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn closed_form_checks(cfg: &RunConfig, m: &MatrixModel) -> anyhow::Result<Vec<Check>> {
    let k = Some(m.kappa);
    let id = CMat::identity(m.dim, m.dim);
    let h = m.hamiltonian();
    let mut z_sq = Vec::new();
    let mut z_herm = Vec::new();
    for s in SAMPLE_S.iter().copied().chain([LIMIT_S]) {
        let z = exact_z(m, s)?;
        z_sq.push((&z * &z - &id).norm());
        z_herm.push((&z - z.adjoint()).norm());
    }
    let lambda = sign_operator(&h)?;
    let t = eriksen_t(m)?;
    let nw = nw_exact(m)?;
    let (eh, _) = hermitian_eigen(&h);
    let (enw, _) = hermitian_eigen(&nw);
    let half = m.dim / 2;
    let (upper, _) = hermitian_eigen(&nw.view((0, 0), (half, half)).into_owned());
    let (lower, _) = hermitian_eigen(&nw.view((half, half), (half, half)).into_owned());
    let ric = riccati_residual(m, 1.0, FD_STEP)?;
    let mut order = Check::numeric("riccati_order", cfg, k, 0.1);
    order = if ric < FD_FLOOR {
        order.value("order", Value::Null).value("residual", ric)
    } else {
        order.near("order", riccati_order(m, 1.0, FD_STEP)?, 2.0)
    };
    Ok(vec![
        Check::numeric("z_involution", cfg, k, ALGEBRAIC)
            .bounded("z_squared_minus_identity", max_of(z_sq))
            .bounded("z_minus_adjoint", max_of(z_herm)),
        Check::numeric("z_limit", cfg, k, LIMIT)
            .bounded("z8_minus_sign", (exact_z(m, LIMIT_S)? - &lambda).norm()),
        Check::numeric("nw_even", cfg, k, ALGEBRAIC)
            .bounded("commutator_with_beta", commutator(&m.beta, &nw).norm()),
        Check::numeric("energy_separation", cfg, k, ALGEBRAIC).bounded(
            "nw_minus_beta_sqrt_square",
            (&nw - &m.beta * sqrtm(&(&nw * &nw))).norm(),
        ),
        Check::numeric("eriksen", cfg, k, ALGEBRAIC)
            .bounded("t_minus_u_e", (&t.t - &t.u_e).norm())
            .bounded("t_unitarity", (&t.t * t.t.adjoint() - &id).norm()),
        Check::numeric("isospectral", cfg, k, ALGEBRAIC).bounded(
            "eigenvalue_drift",
            max_of(eh.iter().zip(&enw).map(|(a, b)| (a - b).abs())),
        ),
        Check::numeric("block_signs", cfg, k, 0.0)
            .bounded("minus_upper_min", -upper[0])
            .bounded("lower_max", lower[half - 1]),
        Check::numeric("riccati_residual", cfg, k, LIMIT)
            .bounded("residual", ric)
            .value("h", FD_STEP),
        order,
    ])
}

fn special_checks(cfg: &RunConfig, m: &MatrixModel) -> anyhow::Result<Vec<Check>> {
    let k = Some(m.kappa);
    let h = m.hamiltonian();
    let mut agreement = Vec::new();
    for s in SAMPLE_S {
        agreement.push((special_class_z0(m, s)? - exact_z(m, s)?).norm());
    }
    Ok(vec![
        Check::numeric("special_class_z0", cfg, k, 1e-8)
            .bounded(
                "max_difference_to_exact_z",
                max_of(agreement.iter().copied()),
            )
            .value("s", SAMPLE_S.to_vec())
            .value("differences", agreement),
        Check::numeric("special_class_limit", cfg, k, LIMIT).bounded(
            "z0_8_minus_sign",
            (special_class_z0(m, LIMIT_S)? - sign_operator(&h)?).norm(),
        ),
        Check::numeric("special_class_nw", cfg, k, ALGEBRAIC).bounded(
            "nw_minus_beta_sqrt_square",
            (nw_exact(m)? - &m.beta * sqrtm(&(&h * &h))).norm(),
        ),
    ])
}

fn sweep_checks(cfg: &RunConfig) -> anyhow::Result<Vec<Check>> {
    let kappas = &cfg.kappa_list;
    let h = hnw_series(Generator::E, 6)?;
    let mut out = Vec::new();
    for (truncation, target) in [(2, 4.0), (4, 6.0), (6, 8.0)] {
        let r = convergence_sweep(cfg.dim, cfg.seed, kappas, &h, truncation)?;
        out.push(
            Check::numeric(format!("convergence_order_{truncation}"), cfg, None, SLOPE)
                .near("slope", r.slope, target)
                .value("kappas", r.kappas)
                .value("errors", r.errors),
        );
    }
    let omega = omega_u_at_infinity(Generator::E, 5)?;
    let mut errors = Vec::new();
    let mut unitarity: f64 = 0.0;
    for &kappa in kappas {
        let m = MatrixModel::build(cfg.dim, cfg.seed, kappa)?;
        errors.push(omega_u_unitary_check(&m, &omega)?);
        let mut w = CMat::zeros(m.dim, m.dim);
        for (_, x) in omega.iter() {
            w += evaluate_symbolic(x, &m, SPoint::Infinity)?;
        }
        let u = exp_anti_hermitian(&w);
        unitarity = unitarity.max((&u * u.adjoint() - CMat::identity(m.dim, m.dim)).norm());
    }
    let mut c = Check::numeric("omega_u_exponentiation", cfg, None, SLOPE)
        .near("slope", loglog_slope(kappas, &errors), 7.0)
        .value("kappas", kappas.clone())
        .value("off_block_norms", errors)
        .value("exp_unitarity", unitarity);
    c.pass &= unitarity <= 1e-12;
    out.push(c);
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<bool> {
    let checks = if cfg.special_class {
        let m = MatrixModel::build_special_class(cfg.dim, cfg.seed, cfg.kappa)?;
        let mut c = closed_form_checks(cfg, &m)?;
        c.extend(special_checks(cfg, &m)?);
        c
    } else {
        let m = MatrixModel::build(cfg.dim, cfg.seed, cfg.kappa)?;
        let mut c = closed_form_checks(cfg, &m)?;
        c.extend(sweep_checks(cfg)?);
        c
    };
    Report::new("verify-numeric", checks).emit(cfg)
}
