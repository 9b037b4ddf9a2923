//! Hamiltonian flow `dK/ds = [[b, K], K]` for a time-dependent field, solved order by order
//! in generators `{b, O, F}` where `F` stands for the field minus `i d/dt`.
//!
//! With `K = b + sum_j K^(j)`, `K^(1)(0) = O`, `K^(2)(0) = F` and zero initial data above:
//! `K^(2n)(s) = K^(2n)(0) + 4 b sum_j int_0^s K^(2j+1) K^(2n-2j-1)` and
//! `K^(2n+1)(s) = exp(-4s) K^(2n+1)(0) + 2 b sum_j conv4([K^(2j+1), K^(2n-2j)])`.

use crate::algebra::{parse, rat, ExpPoly, Generator, OperatorExpr, Word};

use super::{hnw_series, SeriesError, SeriesTable, Verdict};

/// `K^(j)(s)` for `j = 1..=max_order`.
pub fn bp_flow_series_s(max_order: u32) -> SeriesTable {
    use Generator::{F, O};
    let b = OperatorExpr::beta();
    let mut k = SeriesTable::new(max_order);
    if max_order == 0 {
        return k;
    }
    k.set(
        1,
        OperatorExpr::term(
            Word::new(false, vec![O]),
            ExpPoly::monomial(1, 0, rat(1, 1)),
        ),
    );
    for j in 2..=max_order {
        let n = j / 2;
        let kj = if j % 2 == 0 {
            let mut source = OperatorExpr::zero();
            for i in 0..n {
                source = &source + &(&k[2 * i + 1] * &k[2 * n - 2 * i - 1]);
            }
            let mut kj = (&b * &source.integrate_s()).scale(&rat(4, 1));
            if j == 2 {
                kj = &kj + &OperatorExpr::gen(F);
            }
            kj
        } else {
            let mut source = OperatorExpr::zero();
            for i in 0..n {
                source = &source + &k[2 * i + 1].commutator(&k[2 * n - 2 * i]);
            }
            (&b * &source.convolve_decay4()).scale(&rat(2, 1))
        };
        k.set(j, kj);
    }
    k
}

/// `K^(j)(infinity)`; odd orders are checked to vanish and left as zero.
pub fn bp_flow_series(max_order: u32) -> Result<SeriesTable, SeriesError> {
    if max_order < 2 {
        return Err(SeriesError::BadOrder {
            order: max_order,
            reason: "needs at least order 2",
        });
    }
    let limits = bp_flow_series_s(max_order).try_map(OperatorExpr::limit_s_infinity)?;
    for (n, x) in limits.iter() {
        if n % 2 == 1 && !x.is_zero() {
            return Err(SeriesError::OddRemainder { order: n });
        }
    }
    Ok(limits)
}

/// The two closed forms of `hU6|_{F->E} - h6`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyForms {
    pub difference: OperatorExpr,
    /// `-1/32 b [E,[E,O^2]] + 1/64 [O^2,[O^2,E]]`
    pub nested_form: OperatorExpr,
    /// `1/32 [b [E,O^2], h2]`
    pub bracket_form: OperatorExpr,
}

/// Builds the difference from given sixth-order terms and the two reference forms.
pub fn discrepancy_forms(
    h2: &OperatorExpr,
    h6: &OperatorExpr,
    hu6: &OperatorExpr,
) -> Result<DiscrepancyForms, SeriesError> {
    let substituted = hu6.substitute_generator(Generator::F, Generator::E)?;
    let nested_form = parse("(-1/32)*b*[E,[E,O^2]] + (1/64)*[O^2,[O^2,E]]").expect("literal");
    let bracket_form = parse("b*[E,O^2]")
        .expect("literal")
        .commutator(h2)
        .scale(&rat(1, 32));
    Ok(DiscrepancyForms {
        difference: &substituted - h6,
        nested_form,
        bracket_form,
    })
}

/// Checks both closed forms against the given terms; also requires the difference to be
/// nonzero, even and self-adjoint.
pub fn discrepancy_check_with(h2: &OperatorExpr, h6: &OperatorExpr, hu6: &OperatorExpr) -> Verdict {
    let forms = match discrepancy_forms(h2, h6, hu6) {
        Ok(f) => f,
        Err(e) => return Verdict::NotComputed(e.to_string()),
    };
    let d = &forms.difference;
    if d.is_zero() {
        return Verdict::Fails(forms.nested_form);
    }
    Verdict::all([
        Verdict::compare(d, &forms.nested_form),
        Verdict::compare(d, &forms.bracket_form),
        Verdict::zero(&d.parity_split().1),
        Verdict::compare(&d.dagger(), d),
    ])
}

/// [`discrepancy_check_with`] on freshly computed static and time-dependent series.
pub fn discrepancy_check() -> Verdict {
    let run =
        || -> Result<_, SeriesError> { Ok((hnw_series(Generator::E, 6)?, bp_flow_series(6)?)) };
    match run() {
        Ok((h, hu)) => discrepancy_check_with(&h[2], &h[6], &hu[6]),
        Err(e) => Verdict::NotComputed(e.to_string()),
    }
}

/// Static even series with `E` renamed to `F`; asserts it equals a direct run with `F`.
pub fn hnw_time_dependent(max_order: u32) -> Result<SeriesTable, SeriesError> {
    let renamed = hnw_series(Generator::E, max_order)?
        .try_map(|x| x.substitute_generator(Generator::E, Generator::F))?;
    let direct = hnw_series(Generator::F, max_order)?;
    assert_eq!(renamed, direct, "renaming and direct evaluation disagree");
    Ok(renamed)
}
