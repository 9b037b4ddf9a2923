//! Order-by-order solution of the beta flow: `Q(s)` and the generator `omega(s) = Q^dagger - Q`.

use crate::algebra::{rat, ExpPoly, Generator, OperatorExpr, Rational, Word};

use super::SeriesTable;

fn decay(k: u32) -> ExpPoly {
    ExpPoly::monomial(k, 0, Rational::from_integer(1.into()))
}

/// Slices of `H^2` for `H = b + O + field`: order 2 is `2 b field + O^2`, 3 is
/// `field O + O field`, 4 is `field^2`, every other order vanishes.
pub fn r_table(field: Generator, max_order: u32) -> SeriesTable {
    let mut table = SeriesTable::new(max_order);
    let o = OperatorExpr::gen(Generator::O);
    let f = OperatorExpr::gen(field);
    let b = OperatorExpr::beta();
    let entries = [
        (2, &(&b * &f).scale(&rat(2, 1)) + &(&o * &o)),
        (3, o.anticommutator(&f)),
        (4, &f * &f),
    ];
    for (n, x) in entries {
        if n <= max_order {
            table.set(n, x);
        }
    }
    table
}

/// `Q^(n)(s)` for `n = 1..=max_order`.
///
/// `Q^(1) = exp(-4s) b O`, and for `n >= 2`
/// `Q^(n) = exp(-4s) Q^(n)(0) + 2 conv4(R^(n) - sum_j Q^(j) Q^(n-j))`
/// with `Q^(2)(0) = b field` and zero initial data above order 2.
pub fn q_series(field: Generator, max_order: u32) -> SeriesTable {
    let r = r_table(field, max_order);
    let mut q = SeriesTable::new(max_order);
    if max_order == 0 {
        return q;
    }
    q.set(
        1,
        OperatorExpr::term(Word::new(true, vec![Generator::O]), decay(1)),
    );
    for n in 2..=max_order {
        let mut source = r[n].clone();
        for j in 1..n {
            source = &source - &(&q[j] * &q[n - j]);
        }
        let mut qn = source.convolve_decay4().scale(&rat(2, 1));
        if n == 2 {
            qn = &qn + &OperatorExpr::term(Word::new(true, vec![field]), decay(1));
        }
        q.set(n, qn);
    }
    q
}

/// `omega^(n) = dagger(Q^(n)) - Q^(n)`.
pub fn omega_series(field: Generator, max_order: u32) -> SeriesTable {
    q_series(field, max_order).map(|q| &q.dagger() - q)
}
