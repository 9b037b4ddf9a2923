//! Recursive-descent parser for the canonical text form.
//!
//! Accepts everything the renderer emits plus a few conveniences used for writing
//! reference expressions by hand: parenthesized sub-expressions, `[x, y]` commutators,
//! `{x, y}` anticommutators, and `^` on any atom.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExpPoly, Generator, OperatorExpr, ParseError, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Sym(char),
    Exp,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Exp => "'exp'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            let n = digits.parse::<BigInt>().expect("ascii digits");
            out.push(Spanned {
                tok: Tok::Int(n),
                line: l0,
                column: c0,
            });
            continue;
        }
        if chars[i..].starts_with(&['e', 'x', 'p']) {
            i += 3;
            column += 3;
            out.push(Spanned {
                tok: Tok::Exp,
                line: l0,
                column: c0,
            });
            continue;
        }
        if "+-*/^()[]{},bsOEF".contains(c) {
            i += 1;
            column += 1;
            out.push(Spanned {
                tok: Tok::Sym(c),
                line: l0,
                column: c0,
            });
            continue;
        }
        return Err(ParseError {
            line: l0,
            column: c0,
            found: format!("'{c}'"),
            expected: vec!["term".into()],
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const ATOM_START: &[&str] = &[
    "integer", "'b'", "'O'", "'E'", "'F'", "'s'", "'exp'", "'('", "'['", "'{'",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            found: here.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{c}'")]))
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    fn small_uint(&mut self) -> Result<u32, ParseError> {
        let at = self.pos;
        let n = self.uint()?;
        u32::try_from(&n).map_err(|_| {
            self.pos = at;
            self.error(&["integer below 2^32"])
        })
    }

    fn sum(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut negate = self.eat('-');
        if !negate {
            self.eat('+');
        }
        let mut acc = OperatorExpr::zero();
        loop {
            let term = self.product()?;
            acc = if negate { &acc - &term } else { &acc + &term };
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<OperatorExpr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let n = self.small_uint()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<OperatorExpr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                let mut value = Rational::from_integer(n);
                if self.eat('/') {
                    let at = self.pos;
                    let d = self.uint()?;
                    if d.is_zero() {
                        self.pos = at;
                        return Err(self.error(&["nonzero denominator"]));
                    }
                    value /= Rational::from_integer(d);
                }
                Ok(OperatorExpr::scalar(ExpPoly::constant(value)))
            }
            Tok::Exp => {
                self.pos += 1;
                self.expect('[')?;
                self.expect('-')?;
                let at = self.pos;
                let rate = self.small_uint()?;
                if rate % 4 != 0 {
                    self.pos = at;
                    return Err(self.error(&["multiple of 4"]));
                }
                self.expect('s')?;
                self.expect(']')?;
                Ok(OperatorExpr::scalar(ExpPoly::monomial(
                    rate / 4,
                    0,
                    Rational::one(),
                )))
            }
            Tok::Sym('s') => {
                self.pos += 1;
                Ok(OperatorExpr::scalar(ExpPoly::monomial(
                    0,
                    1,
                    Rational::one(),
                )))
            }
            Tok::Sym('b') => {
                self.pos += 1;
                Ok(OperatorExpr::beta())
            }
            Tok::Sym(c @ ('O' | 'E' | 'F')) => {
                self.pos += 1;
                Ok(OperatorExpr::gen(
                    Generator::from_symbol(c).expect("generator symbol"),
                ))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Sym(open @ ('[' | '{')) => {
                self.pos += 1;
                let a = self.sum()?;
                self.expect(',')?;
                let b = self.sum()?;
                if open == '[' {
                    self.expect(']')?;
                    Ok(a.commutator(&b))
                } else {
                    self.expect('}')?;
                    Ok(a.anticommutator(&b))
                }
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

/// Parses text in the expression grammar into canonical form.
pub fn parse(text: &str) -> Result<OperatorExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let out = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["'+'", "'-'", "'*'", "end of input"]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Word};
    use Generator::*;

    #[test]
    fn simple_forms() {
        let x = parse("(-1/2)*b*O").unwrap();
        assert_eq!(
            x,
            OperatorExpr::term(Word::new(true, vec![O]), ExpPoly::constant(rat(-1, 2)))
        );
        let y = parse("exp[-4s]*(s)*b*O^3").unwrap();
        assert_eq!(
            y,
            OperatorExpr::term(
                Word::new(true, vec![O, O, O]),
                ExpPoly::monomial(1, 1, rat(1, 1))
            )
        );
    }

    #[test]
    fn whitespace_and_lines() {
        let x = parse("E +\n  (1/2) * b * O ^ 2").unwrap();
        assert_eq!(x.to_string(), "E + (1/2)*b*O^2");
    }

    #[test]
    fn rejects_bad_rate() {
        let err = parse("exp[-6s]*O").unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));
        assert!(err.expected.contains(&"multiple of 4".to_string()));
    }

    #[test]
    fn error_position_and_expected_set() {
        let err = parse("E +\n (1/2)*").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 8);
        assert!(err.expected.contains(&"'b'".to_string()));
        let err = parse("O O").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
        let err = parse("O # E").unwrap_err();
        assert_eq!(err.column, 3);
    }

    #[test]
    fn brackets() {
        let c = parse("[O, E]").unwrap();
        assert_eq!(c, parse("O*E - E*O").unwrap());
        let a = parse("{O, E}").unwrap();
        assert_eq!(a, parse("O*E + E*O").unwrap());
    }
}
