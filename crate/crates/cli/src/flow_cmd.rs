use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use diracflow::lab::{
    double_bracket_flow, hermitian_eigen, representation_at, representation_residuals,
    FlowTrajectory, MatrixModel,
};

use crate::report::{Check, Report};
use crate::{OutputFormat, RunConfig};

const PHI_SLACK: f64 = 1e-12;
const SPECTRUM: f64 = 1e-8;
const LIMIT: f64 = 1e-6;
/// Points where the closed-form unitary is compared with the flow.
const PROBES: [f64; 3] = [0.5, 1.0, 2.0];

pub fn csv(trajectory: &FlowTrajectory, residuals: &[f64]) -> String {
    let mut out = String::from("s,phi,off_block,representation_residual\n");
    for (x, r) in trajectory.samples.iter().zip(residuals) {
        writeln!(out, "{},{},{},{}", x.s, x.phi, x.off_block, r).expect("string write");
    }
    out
}

fn checks(
    cfg: &RunConfig,
    m: &MatrixModel,
    t: &FlowTrajectory,
    residuals: &[f64],
) -> anyhow::Result<Vec<Check>> {
    let k = Some(m.kappa);
    let increase = t
        .samples
        .windows(2)
        .map(|w| w[1].phi - w[0].phi)
        .fold(f64::NEG_INFINITY, f64::max);
    let (start, _) = hermitian_eigen(&t.samples[0].h);
    let mut drift: f64 = 0.0;
    for x in &t.samples {
        let (e, _) = hermitian_eigen(&x.h);
        drift = start
            .iter()
            .zip(&e)
            .map(|(a, b)| (a - b).abs())
            .fold(drift, f64::max);
    }
    let mut polar = Vec::new();
    let mut gauge: f64 = 0.0;
    let mut square: f64 = 0.0;
    for s in PROBES.into_iter().filter(|s| *s <= cfg.s_max) {
        let sample = t
            .samples
            .iter()
            .min_by(|a, b| (a.s - s).abs().total_cmp(&(b.s - s).abs()))
            .expect("nonempty");
        let r = representation_at(m, sample.s, &sample.h, cfg.step)?;
        polar.push(serde_json::json!({"s": sample.s, "residual": r.polar_residual}));
        gauge = gauge.max(r.even_gauge);
        square = square.max(r.v_square_residual);
    }
    let mut phi =
        Check::numeric("phi_monotone", cfg, k, PHI_SLACK).value("samples", t.samples.len());
    phi = if t.samples.len() > 1 {
        phi.bounded("max_increase", increase)
    } else {
        phi
    };
    Ok(vec![
        phi.value("halvings", t.halvings),
        Check::numeric("isospectral_flow", cfg, k, SPECTRUM).bounded("eigenvalue_drift", drift),
        Check::numeric("final_off_block", cfg, k, LIMIT)
            .bounded("off_block", t.last().off_block)
            .value("s", t.last().s),
        Check::numeric("representation", cfg, k, LIMIT)
            .bounded(
                "max_residual",
                residuals.iter().copied().fold(0.0, f64::max),
            )
            .bounded("v_square_minus_z_beta", square)
            .bounded("even_gauge", gauge)
            .value("closed_form_unitary_residuals", polar),
    ])
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<bool> {
    let m = if cfg.special_class {
        MatrixModel::build_special_class(cfg.dim, cfg.seed, cfg.kappa)?
    } else {
        MatrixModel::build(cfg.dim, cfg.seed, cfg.kappa)?
    };
    let trajectory = double_bracket_flow(&m, cfg.s_max, cfg.step)?;
    let residuals = representation_residuals(&m, &trajectory)?;
    let report = Report::new("flow", checks(cfg, &m, &trajectory, &residuals)?);
    let dir = cfg
        .output_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv_path = dir.join("flow.csv");
    fs::write(&csv_path, csv(&trajectory, &residuals))
        .with_context(|| format!("writing {}", csv_path.display()))?;
    let (name, body) = match cfg.output_format {
        OutputFormat::Json => ("flow.json", report.to_json()),
        OutputFormat::Text => ("flow.txt", report.to_text()),
    };
    fs::write(dir.join(name), body).with_context(|| format!("writing {name}"))?;
    print!("{}", report.to_text());
    Ok(report.pass)
}
