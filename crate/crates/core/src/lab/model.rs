use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::funcs::{hermitian_eigen, spectral_norm};
use super::{CMat, LabError, C64};

const MAX_REDRAWS: usize = 8;
const MIN_ABS_EIGENVALUE: f64 = 1e-6;

/// `H = beta + kappa O + kappa^2 E` with `beta = diag(1, .., 1, -1, .., -1)`, `O` hermitian and
/// block off-diagonal, `E` hermitian and block diagonal, `|O| = |E| = 1` in spectral norm
/// (or `E = 0` for the special class).
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub dim: usize,
    pub seed: u64,
    pub kappa: f64,
    pub beta: CMat,
    pub o_mat: CMat,
    pub e_mat: CMat,
}

fn uniform_block(rng: &mut ChaCha8Rng, m: usize) -> CMat {
    CMat::from_fn(m, m, |_, _| {
        C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    })
}

fn normalized(m: CMat) -> CMat {
    let n = spectral_norm(&m);
    if n == 0.0 {
        m
    } else {
        m.unscale(n)
    }
}

impl MatrixModel {
    /// Deterministic random model; redraws while `H` has an eigenvalue below `1e-6` in magnitude.
    pub fn build(dim: usize, seed: u64, kappa: f64) -> Result<Self, LabError> {
        Self::build_with(dim, seed, kappa, false)
    }

    /// Same odd part as [`MatrixModel::build`] with the field part set to zero.
    pub fn build_special_class(dim: usize, seed: u64, kappa: f64) -> Result<Self, LabError> {
        Self::build_with(dim, seed, kappa, true)
    }

    fn build_with(dim: usize, seed: u64, kappa: f64, special: bool) -> Result<Self, LabError> {
        if dim < 4 || !dim.is_multiple_of(2) {
            return Err(LabError::BadDimension(dim));
        }
        let m = dim / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let beta = CMat::from_diagonal(&DVector::from_fn(dim, |i, _| {
            C64::new(if i < m { 1.0 } else { -1.0 }, 0.0)
        }));
        let mut smallest = 0.0;
        for _ in 0..=MAX_REDRAWS {
            let b = uniform_block(&mut rng, m);
            let a1 = uniform_block(&mut rng, m);
            let a2 = uniform_block(&mut rng, m);
            let mut o_mat = CMat::zeros(dim, dim);
            o_mat.view_mut((0, m), (m, m)).copy_from(&b);
            o_mat.view_mut((m, 0), (m, m)).copy_from(&b.adjoint());
            let mut e_mat = CMat::zeros(dim, dim);
            if !special {
                e_mat
                    .view_mut((0, 0), (m, m))
                    .copy_from(&(&a1 + a1.adjoint()));
                e_mat
                    .view_mut((m, m), (m, m))
                    .copy_from(&(&a2 + a2.adjoint()));
            }
            let model = Self {
                dim,
                seed,
                kappa,
                beta: beta.clone(),
                o_mat: normalized(o_mat),
                e_mat: normalized(e_mat),
            };
            let (values, _) = hermitian_eigen(&model.hamiltonian());
            smallest = values.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
            if smallest >= MIN_ABS_EIGENVALUE {
                return Ok(model);
            }
        }
        Err(LabError::Degenerate {
            redraws: MAX_REDRAWS,
            smallest,
        })
    }

    /// Same matrices at a different coupling.
    pub fn with_kappa(&self, kappa: f64) -> Self {
        Self {
            kappa,
            ..self.clone()
        }
    }

    pub fn hamiltonian(&self) -> CMat {
        &self.beta + self.o_mat.scale(self.kappa) + self.e_mat.scale(self.kappa * self.kappa)
    }

    pub fn is_special_class(&self) -> bool {
        self.e_mat.iter().all(|z| *z == C64::new(0.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::funcs::commutator;

    #[test]
    fn structure_is_exact() {
        let m = MatrixModel::build(8, 1, 0.1).unwrap();
        let anti = &m.beta * &m.o_mat + &m.o_mat * &m.beta;
        assert_eq!(anti.norm(), 0.0);
        assert_eq!(commutator(&m.beta, &m.e_mat).norm(), 0.0);
        assert_eq!((&m.beta * &m.beta - CMat::identity(8, 8)).norm(), 0.0);
        let h = m.hamiltonian();
        assert_eq!((&h - h.adjoint()).norm(), 0.0);
        assert!((spectral_norm(&m.o_mat) - 1.0).abs() < 1e-12);
        assert!((spectral_norm(&m.e_mat) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic() {
        let a = MatrixModel::build(8, 7, 0.2).unwrap();
        let b = MatrixModel::build(8, 7, 0.2).unwrap();
        assert_eq!(a.o_mat, b.o_mat);
        assert_eq!(a.e_mat, b.e_mat);
        let c = MatrixModel::build(8, 8, 0.2).unwrap();
        assert_ne!(a.o_mat, c.o_mat);
    }

    #[test]
    fn zero_coupling_is_beta() {
        let m = MatrixModel::build(4, 3, 0.0).unwrap();
        assert_eq!(m.hamiltonian(), m.beta);
    }

    #[test]
    fn special_class_spectrum_is_symmetric() {
        let m = MatrixModel::build_special_class(8, 1, 0.1).unwrap();
        let (values, _) = hermitian_eigen(&m.hamiltonian());
        let n = values.len();
        for i in 0..n {
            assert!((values[i] + values[n - 1 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_odd_dimension() {
        assert!(matches!(
            MatrixModel::build(5, 1, 0.1),
            Err(LabError::BadDimension(5))
        ));
    }
}
