//! Matrix functions through hermitian eigendecomposition.

use nalgebra::{DVector, SymmetricEigen};

use super::{CMat, C64};

/// Eigenvalues (ascending) and the unitary whose columns are the matching eigenvectors.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `U f(D) U^dagger` for hermitian `m = U D U^dagger`.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (values, u) = hermitian_eigen(m);
    let d = DVector::from_iterator(values.len(), values.iter().map(|&x| f(x)));
    &u * CMat::from_diagonal(&d) * u.adjoint()
}

pub fn spectral_norm(m: &CMat) -> f64 {
    m.clone().singular_values().max()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    (m - m.adjoint()).norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_of_diagonal() {
        let m = CMat::from_diagonal(&DVector::from_vec(vec![
            C64::new(4.0, 0.0),
            C64::new(9.0, 0.0),
        ]));
        let r = hermitian_function(&m, |x| C64::new(x.sqrt(), 0.0));
        assert!((r[(0, 0)].re - 2.0).abs() < 1e-14 && (r[(1, 1)].re - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_sorted() {
        let m = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        );
        let (v, u) = hermitian_eigen(&m);
        assert!((v[0] + 1.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
        let back =
            &u * CMat::from_diagonal(&DVector::from_iterator(
                2,
                v.iter().map(|&x| C64::new(x, 0.0)),
            )) * u.adjoint();
        assert!((back - m).norm() < 1e-14);
    }
}
