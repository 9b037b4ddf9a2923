use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{rat, Rational};

/// Coefficients `c_m` of `z^{2m}` in `2z / sinh(2z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSeries {
    pub coefficients: Vec<Rational>,
}

fn factorial(n: u32) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

/// `1 / sum_m a_m w^m` through `w^max` (requires `a_0 = 1`).
fn reciprocal(a: &[Rational], max: usize) -> Vec<Rational> {
    let mut c = vec![Rational::one()];
    for m in 1..=max {
        let acc: Rational = (1..=m.min(a.len() - 1)).map(|j| &a[j] * &c[m - j]).sum();
        c.push(-acc);
    }
    c
}

/// Exact series division of `2z` by `sinh(2z)` through `z^{2 max_power}`.
pub fn kernel_coefficients(max_power: usize) -> KernelSeries {
    // sinh(2z)/(2z) = sum_m 4^m / (2m+1)! z^{2m}
    let a: Vec<Rational> = (0..=max_power)
        .map(|m| {
            Rational::from_integer(BigInt::from(4).pow(m as u32)) / factorial(2 * m as u32 + 1)
        })
        .collect();
    KernelSeries {
        coefficients: reciprocal(&a, max_power),
    }
}

/// Bernoulli numbers `B_0..=B_n` from the standard recurrence `sum_{j<m+1} C(m+1,j) B_j = 0`.
fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        let mut binom = Rational::one();
        for (j, bj) in b.iter().enumerate() {
            acc += &binom * bj;
            binom *= rat((m + 1 - j) as i64, (j + 1) as i64);
        }
        b.push(-acc / rat(m as i64 + 1, 1));
    }
    b
}

/// Closed form `c_m = (2 - 2^{2m}) B_{2m} 4^m / (2m)!`, independent of the series division.
pub fn bernoulli_kernel_coefficients(max_power: usize) -> Vec<Rational> {
    let b = bernoulli(2 * max_power);
    (0..=max_power)
        .map(|m| {
            let four_m = Rational::from_integer(BigInt::from(4).pow(m as u32));
            (Rational::from_integer(BigInt::from(2)) - &four_m) * &b[2 * m] * four_m
                / factorial(2 * m as u32)
        })
        .collect()
}

/// Taylor coefficients of `cosh(x)` by power, through `x^max`.
pub fn cosh_coefficients(max: usize) -> Vec<Rational> {
    (0..=max)
        .map(|j| {
            if j % 2 == 0 {
                Rational::one() / factorial(j as u32)
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Taylor coefficients of `sinh(x)` by power, through `x^max`.
pub fn sinh_coefficients(max: usize) -> Vec<Rational> {
    (0..=max)
        .map(|j| {
            if j % 2 == 1 {
                Rational::one() / factorial(j as u32)
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Taylor coefficients of `tanh(x)` by power, through `x^max`, as `sinh * (1/cosh)`.
pub fn tanh_coefficients(max: usize) -> Vec<Rational> {
    let cosh_w: Vec<Rational> = (0..=max / 2)
        .map(|m| Rational::one() / factorial(2 * m as u32))
        .collect();
    let sech_w = reciprocal(&cosh_w, max / 2);
    let sinh = sinh_coefficients(max);
    (0..=max)
        .map(|j| {
            (0..=j)
                .filter(|i| (j - i) % 2 == 0)
                .map(|i| &sinh[i] * &sech_w[(j - i) / 2])
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_kernel_values() {
        let k = kernel_coefficients(3).coefficients;
        assert_eq!(k, vec![rat(1, 1), rat(-2, 3), rat(14, 45), rat(-124, 945)]);
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(8);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[8], rat(-1, 30));
        assert_eq!(b[3], rat(0, 1));
    }

    #[test]
    fn tanh_values() {
        let t = tanh_coefficients(7);
        assert_eq!(t[1], rat(1, 1));
        assert_eq!(t[3], rat(-1, 3));
        assert_eq!(t[5], rat(2, 15));
        assert_eq!(t[7], rat(-17, 315));
        assert!(t.iter().step_by(2).all(Zero::is_zero));
    }
}
