use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{AlgebraError, ExpPoly, Generator, Rational, Word};

/// Exact element of the beta-graded free algebra: a finite map from words to coefficients.
///
/// Invariant: no stored coefficient is zero. Equality is structural and therefore exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<Word, ExpPoly>,
}

/// One factor of an unnormalized product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawFactor {
    Beta,
    Gen(Generator),
}

/// Canonical form of a list of raw products; beta may sit anywhere and repeat.
pub fn normalize(raw: &[(ExpPoly, Vec<RawFactor>)]) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for (coeff, factors) in raw {
        let mut word = Word::identity();
        let mut negate = false;
        for f in factors {
            let next = match f {
                RawFactor::Beta => Word::beta(),
                RawFactor::Gen(g) => Word::new(false, vec![*g]),
            };
            let (w, flip) = word.mul(&next);
            word = w;
            negate ^= flip;
        }
        let c = if negate { -coeff } else { coeff.clone() };
        out.add_term(word, &c);
    }
    out
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(Word::identity(), ExpPoly::one())
    }

    pub fn beta() -> Self {
        Self::term(Word::beta(), ExpPoly::one())
    }

    pub fn gen(g: Generator) -> Self {
        Self::term(Word::new(false, vec![g]), ExpPoly::one())
    }

    pub fn term(word: Word, coeff: ExpPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(word, &coeff);
        out
    }

    pub fn scalar(coeff: ExpPoly) -> Self {
        Self::term(Word::identity(), coeff)
    }

    pub fn add_term(&mut self, word: Word, coeff: &ExpPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(c) => {
                *c = &*c + coeff;
                if c.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coeff.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ExpPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, word: &Word) -> ExpPoly {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    fn map_terms(&self, f: impl Fn(&Word, &ExpPoly) -> Option<(Word, ExpPoly)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            if let Some((w2, c2)) = f(w, c) {
                out.add_term(w2, &c2);
            }
        }
        out
    }

    fn filter(&self, keep: impl Fn(&Word) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_terms(|w, x| Some((w.clone(), x.scale(c))))
    }

    pub fn scale_by(&self, c: &ExpPoly) -> Self {
        self.map_terms(|w, x| Some((w.clone(), x * c)))
    }

    /// Product keeping only words of kappa weight at most `cap`.
    pub fn mul_capped(&self, rhs: &Self, cap: Option<u32>) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            let weight_a = wa.kappa_weight();
            for (wb, cb) in &rhs.terms {
                if cap.is_some_and(|cap| weight_a + wb.kappa_weight() > cap) {
                    continue;
                }
                let (w, negate) = wa.mul(wb);
                let c = ca * cb;
                out.add_term(w, &if negate { -c } else { c });
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.commutator_capped(rhs, None)
    }

    pub fn commutator_capped(&self, rhs: &Self, cap: Option<u32>) -> Self {
        &self.mul_capped(rhs, cap) - &rhs.mul_capped(self, cap)
    }

    pub fn anticommutator(&self, rhs: &Self) -> Self {
        &(self * rhs) + &(rhs * self)
    }

    pub fn dagger(&self) -> Self {
        self.map_terms(|w, c| {
            let (wd, negate) = w.dagger();
            Some((wd, if negate { -c } else { c.clone() }))
        })
    }

    /// `(even, odd)` by O-count parity.
    pub fn parity_split(&self) -> (Self, Self) {
        (self.filter(|w| !w.is_odd()), self.filter(Word::is_odd))
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|w| !w.is_odd())
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(Word::is_odd)
    }

    pub fn kappa_slice(&self, n: u32) -> Self {
        self.filter(|w| w.kappa_weight() == n)
    }

    pub fn truncate(&self, cap: u32) -> Self {
        self.filter(|w| w.kappa_weight() <= cap)
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Word::kappa_weight).max()
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.terms.keys().any(|w| w.factors.contains(&g))
    }

    /// Terms with exactly `n` factors of `g`.
    pub fn degree_part(&self, g: Generator, n: usize) -> Self {
        self.filter(|w| w.count(g) == n)
    }

    pub fn integrate_s(&self) -> Self {
        self.map_terms(|w, c| Some((w.clone(), c.integrate())))
    }

    pub fn convolve_decay4(&self) -> Self {
        self.map_terms(|w, c| Some((w.clone(), c.convolve_decay4())))
    }

    pub fn derivative_s(&self) -> Self {
        self.map_terms(|w, c| Some((w.clone(), c.derivative())))
    }

    pub fn at_zero(&self) -> Self {
        self.map_terms(|w, c| Some((w.clone(), ExpPoly::constant(c.at_zero()))))
    }

    pub fn limit_s_infinity(&self) -> Result<Self, AlgebraError> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let value = c.limit().map_err(|e| match e {
                AlgebraError::NonConvergent { degree } => AlgebraError::NonConvergentTerm {
                    word: w.to_string(),
                    degree,
                },
                other => other,
            })?;
            out.add_term(w.clone(), &ExpPoly::constant(value));
        }
        Ok(out)
    }

    pub fn substitute_generator(
        &self,
        from: Generator,
        to: Generator,
    ) -> Result<Self, AlgebraError> {
        if from.is_odd() != to.is_odd() {
            return Err(AlgebraError::ParityMismatch { from, to });
        }
        Ok(self.map_terms(|w, c| Some((w.substitute(from, to), c.clone()))))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `sum_j coeffs[j] * ad_x^j (target)`, keeping weights at most `cap`.
    pub fn ad_series(x: &Self, target: &Self, coeffs: &[Rational], cap: u32) -> Self {
        let mut out = Self::zero();
        let mut nested = target.truncate(cap);
        for (j, c) in coeffs.iter().enumerate() {
            if j > 0 {
                nested = x.commutator_capped(&nested, Some(cap));
            }
            if nested.is_zero() {
                break;
            }
            if !c.is_zero() {
                out = &out + &nested.scale(c);
            }
        }
        out
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.map_terms(|w, c| Some((w.clone(), -c)))
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.mul_capped(rhs, None)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for OperatorExpr {
            type Output = OperatorExpr;
            fn $m(self, rhs: OperatorExpr) -> OperatorExpr {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text form; the inverse of [`super::parse`].
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (word, coeff)) in self.terms.iter().enumerate() {
            let word_text = word.to_string();
            let (negative, body) = match coeff.as_constant() {
                Some(c) => {
                    let negative = i > 0 && c.is_negative();
                    let c = if negative { -c } else { c };
                    let body = if c.is_one() {
                        None
                    } else {
                        Some(format!("({})", fmt_rational(&c)))
                    };
                    (negative, body)
                }
                None => (false, Some(format!("({coeff})"))),
            };
            if i > 0 {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            match (body, word_text.is_empty()) {
                (None, true) => write!(f, "1")?,
                (None, false) => write!(f, "{word_text}")?,
                (Some(b), true) => write!(f, "{b}")?,
                (Some(b), false) => write!(f, "{b}*{word_text}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::Generator::*;
    use super::*;
    use crate::algebra::rat;

    fn o() -> OperatorExpr {
        OperatorExpr::gen(O)
    }
    fn e() -> OperatorExpr {
        OperatorExpr::gen(E)
    }
    fn b() -> OperatorExpr {
        OperatorExpr::beta()
    }

    #[test]
    fn normalize_examples() {
        let one = ExpPoly::one();
        let ob = normalize(&[(one.clone(), vec![RawFactor::Gen(O), RawFactor::Beta])]);
        assert_eq!(ob, -(&b() * &o()));
        let bb = normalize(&[(one.clone(), vec![RawFactor::Beta, RawFactor::Beta])]);
        assert_eq!(bb, OperatorExpr::one());
        let ebob = normalize(&[(
            one,
            vec![
                RawFactor::Gen(E),
                RawFactor::Beta,
                RawFactor::Gen(O),
                RawFactor::Beta,
            ],
        )]);
        assert_eq!(ebob, -(&e() * &o()));
    }

    #[test]
    fn beta_o_squared() {
        let bo = &b() * &o();
        assert_eq!(&bo * &bo, -(&o() * &o()));
        let bo3 = &b() * &o().pow(3);
        assert_eq!(&bo3 * &bo, -o().pow(4));
        assert!(bo3.commutator(&bo).is_zero());
    }

    #[test]
    fn first_order_generator_against_beta() {
        let omega1 = (&b() * &o()).scale(&rat(-1, 2));
        assert_eq!(omega1.commutator(&b()), o());
    }

    #[test]
    fn dagger_examples() {
        let bo = &b() * &o();
        assert_eq!(bo.dagger(), -&bo);
        assert_eq!((&e() * &o()).dagger(), &o() * &e());
    }

    #[test]
    fn parity_split_example() {
        let x = &(&b() + &e()) + &o();
        let (even, odd) = x.parity_split();
        assert_eq!(even, &b() + &e());
        assert_eq!(odd, o());
        let (even, odd) = o().commutator(&e()).parity_split();
        assert!(even.is_zero());
        assert_eq!(odd, o().commutator(&e()));
    }

    #[test]
    fn kappa_slices_of_square() {
        let h = &(&b() + &o()) + &e();
        let h2 = &h * &h;
        assert_eq!(h.kappa_slice(1), o());
        assert_eq!(
            h2.kappa_slice(2),
            &(&b() * &e()).scale(&rat(2, 1)) + &(&o() * &o())
        );
        assert!(h2.kappa_slice(5).is_zero());
    }

    #[test]
    fn secular_limit_fails() {
        let x = OperatorExpr::term(Word::new(true, vec![O]), ExpPoly::monomial(0, 1, rat(1, 1)));
        assert!(matches!(
            x.limit_s_infinity(),
            Err(AlgebraError::NonConvergentTerm { .. })
        ));
    }

    #[test]
    fn substitution_parity() {
        assert!(e().substitute_generator(E, O).is_err());
        assert_eq!(o().substitute_generator(O, O).unwrap(), o());
    }

    #[test]
    fn render_forms() {
        let h2 = &e() + &(&b() * &o().pow(2)).scale(&rat(1, 2));
        assert_eq!(h2.to_string(), "E + (1/2)*b*O^2");
        let x = &(&b() * &o()).scale(&rat(-1, 2)) - &e();
        assert_eq!(x.to_string(), "(-1)*E - (1/2)*b*O");
        assert_eq!(OperatorExpr::zero().to_string(), "0");
        assert_eq!((&OperatorExpr::one() - &o()).to_string(), "1 - O");
    }
}
