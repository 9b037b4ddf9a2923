//! Bridge from exact series to matrices, and convergence-order measurements.

use num_traits::ToPrimitive;

use crate::algebra::{Generator, OperatorExpr};
use crate::series::SeriesTable;

use super::closed_forms::nw_exact;
use super::funcs::{commutator, hermitian_function};
use super::{CMat, LabError, MatrixModel, C64};

/// Where coefficients are evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SPoint {
    At(f64),
    Infinity,
}

/// Substitutes `b -> beta`, `O -> o_mat`, `E -> e_mat` and weights each word by `kappa^weight`.
pub fn evaluate_symbolic(
    expr: &OperatorExpr,
    model: &MatrixModel,
    at: SPoint,
) -> Result<CMat, LabError> {
    let n = model.dim;
    let mut out = CMat::zeros(n, n);
    for (word, coeff) in expr.terms() {
        let value = match at {
            SPoint::At(s) => coeff.eval(s),
            SPoint::Infinity => coeff
                .limit()
                .map_err(|_| LabError::NonConvergent)?
                .to_f64()
                .unwrap_or(f64::NAN),
        };
        let mut m = if word.beta {
            model.beta.clone()
        } else {
            CMat::identity(n, n)
        };
        for g in &word.factors {
            m = match g {
                Generator::O => m * &model.o_mat,
                Generator::E => m * &model.e_mat,
                Generator::F => return Err(LabError::FGeneratorPresent),
            };
        }
        let scale = value * model.kappa.powi(word.kappa_weight() as i32);
        out += m * C64::new(scale, 0.0);
    }
    Ok(out)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub kappas: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
}

/// `|T H T^dagger - (b + sum_{n <= truncation} h^(n))|` over `kappas`, and its log-log slope.
pub fn convergence_sweep(
    dim: usize,
    seed: u64,
    kappas: &[f64],
    h: &SeriesTable,
    truncation: u32,
) -> Result<SweepResult, LabError> {
    let mut errors = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let model = MatrixModel::build(dim, seed, kappa)?;
        let mut approx = model.beta.clone();
        for (_, x) in h.iter().filter(|&(n, _)| n <= truncation) {
            approx += evaluate_symbolic(x, &model, SPoint::Infinity)?;
        }
        errors.push((nw_exact(&model)? - approx).norm());
    }
    let slope = loglog_slope(kappas, &errors);
    Ok(SweepResult {
        kappas: kappas.to_vec(),
        errors,
        slope,
    })
}

/// `exp(X)` for anti-hermitian `X`, through the hermitian matrix `i X`.
pub fn exp_anti_hermitian(x: &CMat) -> CMat {
    let ix = x * C64::new(0.0, 1.0);
    let ix = (&ix + ix.adjoint()).scale(0.5);
    hermitian_function(&ix, |l| C64::new(0.0, -l).exp())
}

/// `|[b, e^{-W} H e^{W}]|` with `W` the evaluated generator series at infinity.
pub fn omega_u_unitary_check(model: &MatrixModel, omega: &SeriesTable) -> Result<f64, LabError> {
    let mut w = CMat::zeros(model.dim, model.dim);
    for (_, x) in omega.iter() {
        w += evaluate_symbolic(x, model, SPoint::Infinity)?;
    }
    let u = exp_anti_hermitian(&w);
    let transformed = u.adjoint() * model.hamiltonian() * &u;
    Ok(commutator(&model.beta, &transformed).norm())
}
