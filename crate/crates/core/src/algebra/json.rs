//! JSON term schema: `{"terms":[{"beta":0|1,"word":["O","E"],"coeff":{"<k>":["<rational>",...]}}]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, ExpPoly, Generator, OperatorExpr, Rational, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub beta: u8,
    pub word: Vec<String>,
    /// Decay index to coefficients of `s^0, s^1, ...`.
    pub coeff: BTreeMap<u32, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprJson {
    pub terms: Vec<TermJson>,
}

fn rational_text(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn bad(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Json(msg.into())
}

impl From<&OperatorExpr> for ExprJson {
    fn from(x: &OperatorExpr) -> Self {
        let terms = x
            .terms()
            .map(|(w, c)| TermJson {
                beta: u8::from(w.beta),
                word: w.factors.iter().map(|g| g.symbol().to_string()).collect(),
                coeff: c
                    .parts()
                    .iter()
                    .map(|(&k, p)| (k, p.iter().map(rational_text).collect()))
                    .collect(),
            })
            .collect();
        ExprJson { terms }
    }
}

impl TryFrom<&ExprJson> for OperatorExpr {
    type Error = AlgebraError;

    fn try_from(j: &ExprJson) -> Result<Self, AlgebraError> {
        let mut out = OperatorExpr::zero();
        for t in &j.terms {
            let beta = match t.beta {
                0 => false,
                1 => true,
                b => return Err(bad(format!("beta must be 0 or 1, got {b}"))),
            };
            let factors = t
                .word
                .iter()
                .map(|s| {
                    let mut chars = s.chars();
                    match (chars.next().and_then(Generator::from_symbol), chars.next()) {
                        (Some(g), None) => Ok(g),
                        _ => Err(bad(format!("unknown generator {s:?}"))),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut parts = Vec::new();
            for (&k, poly) in &t.coeff {
                let coeffs = poly
                    .iter()
                    .map(|s| {
                        s.parse::<Rational>()
                            .map_err(|e| bad(format!("{s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                parts.push((k, coeffs));
            }
            out.add_term(Word::new(beta, factors), &ExpPoly::from_parts(parts));
        }
        Ok(out)
    }
}

pub fn to_json(x: &OperatorExpr) -> String {
    serde_json::to_string(&ExprJson::from(x)).expect("serializable")
}

pub fn from_json(text: &str) -> Result<OperatorExpr, AlgebraError> {
    let j: ExprJson = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    OperatorExpr::try_from(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse;

    #[test]
    fn round_trip() {
        let x = parse("(1/4 - 1/4*exp[-4s] - s*exp[-4s])*[O,E] + (-1/6)*b*O^3").unwrap();
        let text = to_json(&x);
        assert_eq!(from_json(&text).unwrap(), x);
    }

    #[test]
    fn layout() {
        let x = parse("(-1/2 + 1/2*exp[-4s])*b*O").unwrap();
        assert_eq!(
            to_json(&x),
            r#"{"terms":[{"beta":1,"word":["O"],"coeff":{"0":["-1/2"],"1":["1/2"]}}]}"#
        );
    }

    #[test]
    fn rejects_unknown_generator() {
        assert!(from_json(r#"{"terms":[{"beta":0,"word":["X"],"coeff":{"0":["1"]}}]}"#).is_err());
    }
}
