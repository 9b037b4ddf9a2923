//! Even Hamiltonian `e^{-Omega} H e^{Omega}` with `Omega = Omega_u(infinity)`, written as
//! `cosh(ad_Omega)(b + field) - sinh(ad_Omega) O` so every order is manifestly even.

use num_traits::Zero;

use crate::algebra::{parse, rat, ExpPoly, Generator, OperatorExpr, Rational, Word};

use super::{
    cosh_coefficients, omega_u_at_infinity, sinh_coefficients, SeriesError, SeriesTable, Verdict,
};

fn split_by_order(x: &OperatorExpr, max_order: u32) -> SeriesTable {
    let mut t = SeriesTable::new(max_order);
    for n in 1..=max_order {
        t.set(n, x.kappa_slice(n));
    }
    t
}

/// Orders `1..=max_order` of the transformed Hamiltonian for a given generator `omega`.
pub fn hnw_from_generator(omega: &OperatorExpr, field: Generator, max_order: u32) -> SeriesTable {
    let n = max_order as usize;
    let even = &OperatorExpr::beta() + &OperatorExpr::gen(field);
    let odd = OperatorExpr::gen(Generator::O);
    let h = &OperatorExpr::ad_series(omega, &even, &cosh_coefficients(n), max_order)
        - &OperatorExpr::ad_series(omega, &odd, &sinh_coefficients(n), max_order);
    split_by_order(&h, max_order)
}

fn generator_for(field: Generator, max_order: u32) -> Result<OperatorExpr, SeriesError> {
    if max_order < 2 {
        return Err(SeriesError::BadOrder {
            order: max_order,
            reason: "needs at least order 2",
        });
    }
    Ok(omega_u_at_infinity(field, max_order - 1)?.total())
}

/// `h^(n)` for `n = 1..=max_order`; odd orders come out zero.
pub fn hnw_series(field: Generator, max_order: u32) -> Result<SeriesTable, SeriesError> {
    Ok(hnw_from_generator(
        &generator_for(field, max_order)?,
        field,
        max_order,
    ))
}

/// Odd part `cosh(ad) O - sinh(ad)(b + field)` through `max_order`; zero when the generator is right.
pub fn hnw_odd_remainder(field: Generator, max_order: u32) -> Result<OperatorExpr, SeriesError> {
    let omega = generator_for(field, max_order)?;
    let n = max_order as usize;
    let even = &OperatorExpr::beta() + &OperatorExpr::gen(field);
    let odd = OperatorExpr::gen(Generator::O);
    Ok(
        &OperatorExpr::ad_series(&omega, &odd, &cosh_coefficients(n), max_order)
            - &OperatorExpr::ad_series(&omega, &even, &sinh_coefficients(n), max_order),
    )
}

/// Recomputing with the highest generator order set to zero leaves every `h^(n)` unchanged.
pub fn order_economy(max_order: u32) -> Verdict {
    if max_order < 4 {
        return Verdict::NotComputed("needs at least order 4".into());
    }
    let full = match hnw_series(Generator::E, max_order) {
        Ok(t) => t,
        Err(e) => return Verdict::NotComputed(e.to_string()),
    };
    let omega = match omega_u_at_infinity(Generator::E, max_order - 1) {
        Ok(t) => t,
        Err(e) => return Verdict::NotComputed(e.to_string()),
    };
    // highest odd order present
    let top = if max_order.is_multiple_of(2) {
        max_order - 1
    } else {
        max_order - 2
    };
    let reduced = omega
        .iter()
        .filter(|&(n, _)| n < top)
        .fold(OperatorExpr::zero(), |acc, (_, x)| &acc + x);
    let truncated = hnw_from_generator(&reduced, Generator::E, max_order);
    Verdict::compare(&full.total(), &truncated.total())
}

/// `1/2 [W1, [X, b]] + 1/2 [X, [W1, b]] = [X, O]` for odd `X`, with `W1 = -1/2 b O`.
pub fn cancellation_identity_for(x: &OperatorExpr) -> Verdict {
    let b = OperatorExpr::beta();
    let w1 = parse("(-1/2)*b*O").expect("literal");
    let half = rat(1, 2);
    let lhs = &w1.commutator(&x.commutator(&b)).scale(&half)
        + &x.commutator(&w1.commutator(&b)).scale(&half);
    Verdict::compare(&lhs, &x.commutator(&OperatorExpr::gen(Generator::O)))
}

/// The identity above with `X = Omega^(2n-1)(infinity)`.
pub fn cancellation_identity(n: u32) -> Verdict {
    if n < 2 {
        return Verdict::NotComputed("n must be at least 2".into());
    }
    match omega_u_at_infinity(Generator::E, 2 * n - 1) {
        Ok(t) => cancellation_identity_for(&t[2 * n - 1]),
        Err(e) => Verdict::NotComputed(e.to_string()),
    }
}

/// Monomial decomposition of a sixth-order even term by powers of the field generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialTable {
    pub full: OperatorExpr,
    pub field_free: OperatorExpr,
    pub field_linear: OperatorExpr,
    pub field_quadratic: OperatorExpr,
    /// Weight `a` of `b [O,E]^2` in `field_quadratic = a b [O,E]^2 + c b (O[[O,E],E] + [[O,E],E]O)`.
    pub bracket_square_weight: Rational,
    /// Weight `c` of `b (O[[O,E],E] + [[O,E],E]O)`.
    pub nested_weight: Rational,
    /// `field_quadratic` minus the two-element fit; zero iff the fit is exact.
    pub fit_residual: OperatorExpr,
}

impl MonomialTable {
    pub fn coefficient(&self, word: &Word) -> ExpPoly {
        self.full.coefficient(word)
    }
}

fn constant_coefficient(x: &OperatorExpr, word: &Word) -> Rational {
    x.coefficient(word)
        .as_constant()
        .unwrap_or_else(Rational::zero)
}

/// Expands `h6` (already monomial in canonical form) and fits its field-quadratic part.
pub fn monomial_table(h6: &OperatorExpr, field: Generator) -> MonomialTable {
    use Generator::O;
    let sym = field.symbol();
    let square = parse(&format!("b*[O,{sym}]*[O,{sym}]")).expect("literal");
    let nested = parse(&format!("b*(O*[[O,{sym}],{sym}] + [[O,{sym}],{sym}]*O)")).expect("literal");
    let quadratic = h6.degree_part(field, 2);
    // b E O^2 E occurs only in the square; b O^2 E^2 only in the nested form
    let a = -constant_coefficient(&quadratic, &Word::new(true, vec![field, O, O, field]));
    let c = constant_coefficient(&quadratic, &Word::new(true, vec![O, O, field, field]));
    let fit_residual = &(&quadratic - &square.scale(&a)) - &nested.scale(&c);
    MonomialTable {
        full: h6.clone(),
        field_free: h6.degree_part(field, 0),
        field_linear: h6.degree_part(field, 1),
        field_quadratic: quadratic,
        bracket_square_weight: a,
        nested_weight: c,
        fit_residual,
    }
}
