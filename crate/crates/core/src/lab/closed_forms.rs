//! Closed-form solutions of the beta flow and the block-diagonalizing transform.

use nalgebra::DVector;

use super::funcs::{hermitian_eigen, hermitian_function, spectral_norm};
use super::{CMat, LabError, MatrixModel, C64};

const SINGULAR_TOL: f64 = 1e-10;
const SOLVE_TOL: f64 = 1e-8;
const MINUS_ONE_TOL: f64 = 1e-8;
const OVERFLOW_GUARD: f64 = 40.0;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `H / sqrt(H^2)`: the sign of every eigenvalue in the eigenbasis of `H`.
pub fn sign_operator(h: &CMat) -> Result<CMat, LabError> {
    let (values, _) = hermitian_eigen(h);
    let smallest = values.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    if smallest < SINGULAR_TOL {
        return Err(LabError::SingularSpectrum(smallest));
    }
    Ok(hermitian_function(h, |x| real(x.signum())))
}

/// Solves `X a = b` for `X` through `a^T X^T = b^T`.
fn right_divide(b: &CMat, a: &CMat) -> Result<CMat, LabError> {
    let xt = a
        .transpose()
        .lu()
        .solve(&b.transpose())
        .ok_or(LabError::IllConditioned(f64::INFINITY))?;
    let x = xt.transpose();
    let residual = (&x * a - b).norm() / b.norm().max(1.0);
    if residual > SOLVE_TOL {
        return Err(LabError::IllConditioned(residual));
    }
    Ok(x)
}

/// `Z(s) = W b W^{-1}` with `W = cosh(2sH) b + sinh(2sH)`.
pub fn exact_z(model: &MatrixModel, s: f64) -> Result<CMat, LabError> {
    let h = model.hamiltonian();
    let guard = 2.0 * s * spectral_norm(&h);
    if guard > OVERFLOW_GUARD {
        return Err(LabError::OverflowGuard(guard));
    }
    let cosh = hermitian_function(&h, |x| real((2.0 * s * x).cosh()));
    let sinh = hermitian_function(&h, |x| real((2.0 * s * x).sinh()));
    let w = cosh * &model.beta + sinh;
    right_divide(&(&w * &model.beta), &w)
}

/// `| (Z(s+h) - Z(s-h)) / (4h) - (H - Z H Z) |`, the defect of `Z' / 2 = H - Z H Z`.
pub fn riccati_residual(model: &MatrixModel, s: f64, h: f64) -> Result<f64, LabError> {
    let ham = model.hamiltonian();
    let z = exact_z(model, s)?;
    let derivative = (exact_z(model, s + h)? - exact_z(model, s - h)?).unscale(4.0 * h);
    Ok((derivative - (&ham - &z * &ham * &z)).norm())
}

/// Observed order `log2(r(h) / r(h/2))` of the centered stencil.
pub fn riccati_order(model: &MatrixModel, s: f64, h: f64) -> Result<f64, LabError> {
    Ok((riccati_residual(model, s, h)? / riccati_residual(model, s, h / 2.0)?).log2())
}

/// Transform `T = b (b + L) / sqrt((b + L)^2)` with `L = sign(H)`, and the independent
/// square-root form `U_E = 1/2 (1 + b L) / sqrt(1 + 1/4 (b L + L b - 2))`.
#[derive(Clone, Debug)]
pub struct EriksenT {
    pub lambda: CMat,
    pub t: CMat,
    pub u_e: CMat,
}

pub fn eriksen_t(model: &MatrixModel) -> Result<EriksenT, LabError> {
    let beta = &model.beta;
    let lambda = sign_operator(&model.hamiltonian())?;
    let sum = beta + &lambda;
    // b + L = b (1 + b L), so |eigenvalues of b + L| = |1 + mu| over eigenvalues mu of b L
    let (values, _) = hermitian_eigen(&sum);
    let gap = values.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    if gap < MINUS_ONE_TOL {
        return Err(LabError::EigenvalueMinusOne(gap));
    }
    let inv_sqrt = |m: &CMat| hermitian_function(m, |x| real(1.0 / x.sqrt()));
    let t = beta * &sum * inv_sqrt(&(&sum * &sum));
    let id = CMat::identity(model.dim, model.dim);
    let bl = beta * &lambda;
    let lb = &lambda * beta;
    let inner = &id + (&bl + &lb - id.scale(2.0)).scale(0.25);
    let inner = (&inner + inner.adjoint()).scale(0.5);
    let u_e = (&id + &bl).scale(0.5) * inv_sqrt(&inner);
    Ok(EriksenT { lambda, t, u_e })
}

/// `T H T^dagger`.
pub fn nw_exact(model: &MatrixModel) -> Result<CMat, LabError> {
    let t = eriksen_t(model)?.t;
    Ok(&t * model.hamiltonian() * t.adjoint())
}

/// `V(s) = (b + Z) / sqrt((b + Z)^2) b`, the unitary with `H(s) = V^dagger H V`.
pub fn flow_unitary(model: &MatrixModel, s: f64) -> Result<(CMat, CMat), LabError> {
    let z = exact_z(model, s)?;
    let sum = &model.beta + &z;
    let square = &sum * &sum;
    let square = (&square + square.adjoint()).scale(0.5);
    let (values, _) = hermitian_eigen(&square);
    if values[0] < MINUS_ONE_TOL {
        return Err(LabError::EigenvalueMinusOne(values[0]));
    }
    let inv_sqrt = hermitian_function(&square, |x| real(1.0 / x.sqrt()));
    Ok((sum * inv_sqrt * &model.beta, z))
}

/// Special class `E = 0`: `Z0(s) = tanh(2s sqrt(H^2) + artanh(b L)) L`.
///
/// `sqrt(H^2)`, the hermitian and anti-hermitian parts of the normal matrix `b L` commute,
/// so a generic real combination of them shares their eigenbasis.
pub fn special_class_z0(model: &MatrixModel, s: f64) -> Result<CMat, LabError> {
    if !model.is_special_class() {
        return Err(LabError::NotSpecialClass);
    }
    let h = model.hamiltonian();
    let lambda = sign_operator(&h)?;
    let abs_h = hermitian_function(&h, |x| real(x.abs()));
    let bl = &model.beta * &lambda;
    let re = (&bl + bl.adjoint()).scale(0.5);
    let im = (&bl - bl.adjoint()) * C64::new(0.0, -0.5);
    let probe = &abs_h + re.scale(0.7390851332151607) + im.scale(0.5772156649015329);
    let probe = (&probe + probe.adjoint()).scale(0.5);
    let (_, u) = hermitian_eigen(&probe);
    let d_abs = u.adjoint() * &abs_h * &u;
    let d_bl = u.adjoint() * &bl * &u;
    let off = |m: &CMat| {
        let mut m = m.clone();
        m.fill_diagonal(C64::new(0.0, 0.0));
        m.norm()
    };
    let drift = off(&d_abs) + off(&d_bl);
    if drift > SOLVE_TOL {
        return Err(LabError::IllConditioned(drift));
    }
    let mut diag = Vec::with_capacity(model.dim);
    for i in 0..model.dim {
        let mu = d_bl[(i, i)];
        let near_cut = mu.im.abs() < 1e-12 && mu.re.abs() >= 1.0;
        if near_cut
            || (mu - real(1.0)).norm() < MINUS_ONE_TOL
            || (mu + real(1.0)).norm() < MINUS_ONE_TOL
        {
            return Err(LabError::BranchFailure {
                re: mu.re,
                im: mu.im,
            });
        }
        diag.push((real(2.0 * s * d_abs[(i, i)].re) + mu.atanh()).tanh());
    }
    let t0 = &u * CMat::from_diagonal(&DVector::from_vec(diag)) * u.adjoint();
    Ok(t0 * lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> MatrixModel {
        MatrixModel::build(8, 1, 0.2).unwrap()
    }

    #[test]
    fn sign_of_beta() {
        let m = model();
        assert!((sign_operator(&m.beta).unwrap() - &m.beta).norm() < 1e-15);
    }

    #[test]
    fn sign_is_commuting_involution() {
        let m = model();
        let h = m.hamiltonian();
        let l = sign_operator(&h).unwrap();
        assert!((&l * &l - CMat::identity(8, 8)).norm() < 1e-12);
        assert!((&h * &l - &l * &h).norm() < 1e-12);
    }

    #[test]
    fn z_starts_at_beta_and_is_involution() {
        let m = model();
        assert!((exact_z(&m, 0.0).unwrap() - &m.beta).norm() < 1e-14);
        for s in [0.3, 1.0, 4.0] {
            let z = exact_z(&m, s).unwrap();
            assert!((&z * &z - CMat::identity(8, 8)).norm() < 1e-10);
            assert!((&z - z.adjoint()).norm() < 1e-10);
        }
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(
            exact_z(&model(), 100.0),
            Err(LabError::OverflowGuard(_))
        ));
    }

    #[test]
    fn zero_coupling_transform_is_identity() {
        let m = MatrixModel::build(4, 2, 0.0).unwrap();
        let t = eriksen_t(&m).unwrap();
        assert!((t.t - CMat::identity(4, 4)).norm() < 1e-14);
        assert!(riccati_residual(&m, 1.0, 1e-3).unwrap() < 1e-12);
    }

    #[test]
    fn transform_intertwines() {
        let m = model();
        let t = eriksen_t(&m).unwrap();
        assert!((&t.t * t.t.adjoint() - CMat::identity(8, 8)).norm() < 1e-12);
        assert!((&m.beta * &t.t - &t.t * &t.lambda).norm() < 1e-10);
        assert!((&t.t - &t.u_e).norm() < 1e-10);
    }

    #[test]
    fn flow_unitary_squares_to_z_beta() {
        let m = model();
        let (v, z) = flow_unitary(&m, 1.0).unwrap();
        assert!((&v * &v - &z * &m.beta).norm() < 1e-10);
    }

    #[test]
    fn special_class_matches_general_form() {
        let m = MatrixModel::build_special_class(8, 1, 0.2).unwrap();
        for s in [0.0, 0.1, 0.5, 1.0, 2.0] {
            let a = special_class_z0(&m, s).unwrap();
            let b = exact_z(&m, s).unwrap();
            assert!((a - b).norm() < 1e-8, "s = {s}");
        }
        assert!(matches!(
            special_class_z0(&model(), 1.0),
            Err(LabError::NotSpecialClass)
        ));
    }
}
