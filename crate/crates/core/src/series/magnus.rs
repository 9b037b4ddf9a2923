//! Odd exponent `Omega_u(s)` of the flow unitary, from the integral equation
//! `Omega_u(s) = int_0^s sum_m c_m ad_{Omega_u}^{2m} omega_u`, solved by Picard iteration.

use num_traits::Zero;

use crate::algebra::{Generator, OperatorExpr, Rational};

use super::{
    kernel_coefficients, omega_series, tanh_coefficients, SeriesError, SeriesTable, Verdict,
};

/// Kernel coefficients placed by ad-power: entry `2m` is `c_m`, odd entries vanish.
fn kernel_by_ad_power(cap: u32) -> Vec<Rational> {
    let half = (cap as usize).div_ceil(2);
    let c = kernel_coefficients(half).coefficients;
    let mut out = vec![Rational::zero(); 2 * half + 1];
    for (m, cm) in c.into_iter().enumerate() {
        out[2 * m] = cm;
    }
    out
}

/// Sum of the odd orders `<= cap` of the beta-flow generator.
fn omega_u_total(field: Generator, cap: u32) -> OperatorExpr {
    let (_, odd) = omega_series(field, cap).total().parity_split();
    odd
}

fn split_by_order(x: &OperatorExpr, max_order: u32) -> SeriesTable {
    let mut t = SeriesTable::new(max_order);
    for n in 1..=max_order {
        t.set(n, x.kappa_slice(n));
    }
    t
}

/// `Omega^(n)(s)` for `n <= max_order`; even orders are zero.
///
/// Iterates `ceil(max_order / 2)` times, then asserts one further iteration is a fixed point.
pub fn omega_u_series(field: Generator, max_order: u32) -> Result<SeriesTable, SeriesError> {
    if max_order == 0 {
        return Err(SeriesError::BadOrder {
            order: 0,
            reason: "needs at least order 1",
        });
    }
    let source = omega_u_total(field, max_order);
    let kernel = kernel_by_ad_power(max_order);
    let step = |omega: &OperatorExpr| {
        OperatorExpr::ad_series(omega, &source, &kernel, max_order).integrate_s()
    };
    let mut omega = OperatorExpr::zero();
    for _ in 0..max_order.div_ceil(2) {
        omega = step(&omega);
    }
    assert_eq!(step(&omega), omega, "Picard iteration did not stabilize");
    Ok(split_by_order(&omega, max_order))
}

/// `Omega^(n)(infinity)`; fails if any coefficient grows.
pub fn omega_u_at_infinity(field: Generator, max_order: u32) -> Result<SeriesTable, SeriesError> {
    Ok(omega_u_series(field, max_order)?.try_map(OperatorExpr::limit_s_infinity)?)
}

/// `[Omega^(1)(s), omega^(1)(s)] = 0`.
pub fn commutator_first_order_vanishes() -> Verdict {
    let omega = omega_u_series(Generator::E, 1).expect("order 1");
    let w = omega_series(Generator::E, 1);
    Verdict::zero(&omega[1].commutator(&w[1]))
}

/// The order `2n+1` slice of `ad_{Omega_u}^{2n} omega_u` vanishes (its lowest possible order).
pub fn nested_ad_smallness(n: u32) -> Verdict {
    if n == 0 {
        return Verdict::NotComputed("n must be at least 1".into());
    }
    let cap = 2 * n + 1;
    let omega = match omega_u_series(Generator::E, cap) {
        Ok(t) => t.total(),
        Err(e) => return Verdict::NotComputed(e.to_string()),
    };
    let source = omega_u_total(Generator::E, cap);
    let mut nested = source;
    for _ in 0..2 * n {
        nested = omega.commutator_capped(&nested, Some(cap));
    }
    Verdict::zero(&nested.kappa_slice(cap))
}

/// `omega_g = tanh(ad_{Omega_u}) omega_u` for every order `<= max_order`, at finite `s`.
pub fn tanh_relation(max_order: u32) -> Verdict {
    let omega = match omega_u_series(Generator::E, max_order.max(1)) {
        Ok(t) => t.total(),
        Err(e) => return Verdict::NotComputed(e.to_string()),
    };
    let (even, odd) = omega_series(Generator::E, max_order).total().parity_split();
    let rhs = OperatorExpr::ad_series(
        &omega,
        &odd,
        &tanh_coefficients(max_order as usize),
        max_order,
    );
    Verdict::compare(&even, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse, rat};
    use Generator::E;

    #[test]
    fn first_order_closed_form() {
        let t = omega_u_series(E, 1).unwrap();
        assert_eq!(t[1], parse("(-1/2 + 1/2*exp[-4s])*b*O").unwrap());
    }

    #[test]
    fn vanishes_at_zero_and_is_odd_anti_self_adjoint() {
        let t = omega_u_series(E, 5).unwrap();
        for (n, x) in t.iter() {
            assert!(x.at_zero().is_zero(), "order {n}");
            assert!(x.is_odd(), "order {n}");
            assert_eq!(x.dagger(), -x, "order {n}");
            if n % 2 == 0 {
                assert!(x.is_zero());
            }
        }
    }

    #[test]
    fn kernel_spread() {
        let k = kernel_by_ad_power(5);
        assert_eq!(k[2], rat(-2, 3));
        assert!(k[1].is_zero() && k[3].is_zero());
    }
}
