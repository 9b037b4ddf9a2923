use crate::algebra::{parse, Generator, OperatorExpr};

use super::{q_series, r_table, Verdict};

/// Five commutator identities in `O`, `E`, each as `(lhs, rhs)` text.
const COMMUTATOR_IDENTITIES: [(&str, &str); 5] = [
    ("O^2*[O,E] + O*[O,E]*O + [O,E]*O^2", "[O^3,E]"),
    ("O^2*[O,E] + [O,E]*O^2", "[O, E*O^2 + O^2*E]"),
    ("[O,[O,[O,E]]]", "O^2*[O,E] + [O,E]*O^2 - 2*O*[O,E]*O"),
    ("O*[O,E]*O", "(1/3)*[O^3,E] - (1/3)*[O,[O,[O,E]]]"),
    (
        "O^2*[O,E] + [O,E]*O^2",
        "(2/3)*[O^3,E] + (1/3)*[O,[O,[O,E]]]",
    ),
];

/// Each identity with its verdict; the third also checks its second equality `= [O^3,E] - 3 O[O,E]O`.
pub fn commutator_identities() -> Vec<(String, Verdict)> {
    let mut out: Vec<(String, Verdict)> = COMMUTATOR_IDENTITIES
        .iter()
        .map(|(l, r)| {
            let v = Verdict::compare(&parse(l).expect("literal"), &parse(r).expect("literal"));
            (format!("{l} = {r}"), v)
        })
        .collect();
    let l = "[O,[O,[O,E]]]";
    let r = "[O^3,E] - 3*O*[O,E]*O";
    out.push((
        format!("{l} = {r}"),
        Verdict::compare(&parse(l).expect("literal"), &parse(r).expect("literal")),
    ));
    out
}

/// `dagger(Q^(n)) + Q^(n) = R^(n) - sum_j dagger(Q^(j)) Q^(n-j)` for `n = 2..=max_order`,
/// and `dagger(Q^(1)) = -Q^(1)`.
pub fn q_constraint_chain(max_order: u32) -> Verdict {
    let q = q_series(Generator::E, max_order);
    let r = r_table(Generator::E, max_order);
    let mut verdicts = vec![Verdict::compare(&q[1].dagger(), &-&q[1])];
    for n in 2..=max_order {
        verdicts.push(Verdict::compare(
            &(&q[n].dagger() + &q[n]),
            &constraint_rhs(&q, &r, n),
        ));
    }
    Verdict::all(verdicts)
}

fn constraint_rhs(q: &super::SeriesTable, r: &super::SeriesTable, n: u32) -> OperatorExpr {
    let mut rhs = r[n].clone();
    for j in 1..n {
        rhs = &rhs - &(&q[j].dagger() * &q[n - j]);
    }
    rhs
}

/// `Q(0) = 1 + b O + b E` order by order, and the order-2 constraint at `s = 0` is `2 b E`.
pub fn q_initial_data() -> Verdict {
    let q = q_series(Generator::E, 4);
    let r = r_table(Generator::E, 4);
    let at_zero = constraint_rhs(&q, &r, 2).at_zero();
    Verdict::all([
        Verdict::compare(&q[1].at_zero(), &parse("b*O").expect("literal")),
        Verdict::compare(&q[2].at_zero(), &parse("b*E").expect("literal")),
        Verdict::zero(&q[3].at_zero()),
        Verdict::zero(&q[4].at_zero()),
        Verdict::compare(&at_zero, &parse("2*b*E").expect("literal")),
    ])
}
