//! Exponential polynomials `sum_k exp(-4 k s) * P_k(s)` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgebraError, Rational};

/// Element of the coefficient ring.
///
/// `parts[k]` holds the polynomial multiplying `exp(-4 k s)`, lowest power first.
/// Invariant: no empty polynomial is stored and no polynomial has a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExpPoly {
    parts: BTreeMap<u32, Vec<Rational>>,
}

fn trim(poly: &mut Vec<Rational>) {
    while poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
}

fn add_into(dst: &mut Vec<Rational>, src: &[Rational]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), Rational::zero());
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Signed-rate accumulator used by integration: key `r` means `exp(-4 r s)`.
type RateMap = BTreeMap<i64, Vec<Rational>>;

fn accumulate(map: &mut RateMap, rate: i64, power: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let poly = map.entry(rate).or_default();
    if poly.len() <= power {
        poly.resize(power + 1, Rational::zero());
    }
    poly[power] += c;
}

/// `int_0^s t^p exp(-4 r t) dt` for every monomial of `input`, exactly.
fn integrate_rates(input: &RateMap) -> RateMap {
    let mut out = RateMap::new();
    for (&rate, poly) in input {
        for (p, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if rate == 0 {
                let denom = Rational::from_integer(BigInt::from(p + 1));
                accumulate(&mut out, 0, p + 1, c / denom);
                continue;
            }
            // p!/a^{p+1} - exp(-a s) sum_j p!/(j! a^{p+1-j}) s^j with a = 4 r
            let a = Rational::from_integer(BigInt::from(4 * rate));
            let pf = Rational::from_integer(factorial(p as u32));
            let head = c * &pf / pow(&a, p as u32 + 1);
            accumulate(&mut out, 0, 0, head);
            for j in 0..=p {
                let jf = Rational::from_integer(factorial(j as u32));
                let term = c * &pf / (jf * pow(&a, (p - j) as u32 + 1));
                accumulate(&mut out, rate, j, -term);
            }
        }
    }
    for poly in out.values_mut() {
        trim(poly);
    }
    out.retain(|_, p| !p.is_empty());
    out
}

fn pow(base: &Rational, exp: u32) -> Rational {
    (0..exp).fold(Rational::one(), |acc, _| acc * base)
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c * s^power * exp(-4 k s)`.
    pub fn monomial(k: u32, power: usize, c: Rational) -> Self {
        let mut out = Self::zero();
        if !c.is_zero() {
            let mut poly = vec![Rational::zero(); power + 1];
            poly[power] = c;
            out.parts.insert(k, poly);
        }
        out
    }

    /// Builds from raw parts, restoring the invariants.
    pub fn from_parts(parts: impl IntoIterator<Item = (u32, Vec<Rational>)>) -> Self {
        let mut out = Self::zero();
        for (k, poly) in parts {
            out.add_part(k, &poly);
        }
        out
    }

    fn add_part(&mut self, k: u32, poly: &[Rational]) {
        let entry = self.parts.entry(k).or_default();
        add_into(entry, poly);
        trim(entry);
        if entry.is_empty() {
            self.parts.remove(&k);
        }
    }

    pub fn parts(&self) -> &BTreeMap<u32, Vec<Rational>> {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The value if the coefficient is a plain rational (no `s`, no decay).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.parts.len() {
            0 => Some(Rational::zero()),
            1 => match self.parts.get(&0) {
                Some(p) if p.len() == 1 => Some(p[0].clone()),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            parts: self
                .parts
                .iter()
                .map(|(&k, p)| (k, p.iter().map(|x| x * c).collect()))
                .collect(),
        }
    }

    /// Value at `s = 0`.
    pub fn at_zero(&self) -> Rational {
        self.parts.values().map(|p| p[0].clone()).sum()
    }

    /// Limit at `s -> infinity`; fails on a growing (secular) part.
    pub fn limit(&self) -> Result<Rational, AlgebraError> {
        match self.parts.get(&0) {
            None => Ok(Rational::zero()),
            Some(p) if p.len() == 1 => Ok(p[0].clone()),
            Some(p) => Err(AlgebraError::NonConvergent {
                degree: p.len() - 1,
            }),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.parts
            .iter()
            .map(|(&k, poly)| {
                let decay = (-4.0 * f64::from(k) * s).exp();
                let value = poly
                    .iter()
                    .rev()
                    .fold(0.0, |acc, c| acc * s + c.to_f64().unwrap_or(f64::NAN));
                decay * value
            })
            .sum()
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (&k, poly) in &self.parts {
            let mut d = vec![Rational::zero(); poly.len()];
            let rate = Rational::from_integer(BigInt::from(4 * k));
            for (p, c) in poly.iter().enumerate() {
                d[p] -= c * &rate;
                if p > 0 {
                    d[p - 1] += c * Rational::from_integer(BigInt::from(p));
                }
            }
            out.add_part(k, &d);
        }
        out
    }

    /// `int_0^s f(t) dt`.
    pub fn integrate(&self) -> Self {
        let rates: RateMap = self
            .parts
            .iter()
            .map(|(&k, p)| (i64::from(k), p.clone()))
            .collect();
        Self::from_rates(integrate_rates(&rates), 0)
    }

    /// `int_0^s exp(-4 (s - t)) f(t) dt`.
    pub fn convolve_decay4(&self) -> Self {
        let shifted: RateMap = self
            .parts
            .iter()
            .map(|(&k, p)| (i64::from(k) - 1, p.clone()))
            .collect();
        Self::from_rates(integrate_rates(&shifted), 1)
    }

    fn from_rates(rates: RateMap, shift: i64) -> Self {
        Self::from_parts(rates.into_iter().map(|(r, p)| {
            let k = u32::try_from(r + shift).expect("decay index stays non-negative");
            (k, p)
        }))
    }

    /// Largest decay index and largest power of `s`, used by generators in tests.
    pub fn shape(&self) -> (u32, usize) {
        let k = self.parts.keys().next_back().copied().unwrap_or(0);
        let d = self.parts.values().map(Vec::len).max().unwrap_or(0);
        (k, d.saturating_sub(1))
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (&k, p) in &rhs.parts {
            out.add_part(k, p);
        }
        out
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            parts: self
                .parts
                .iter()
                .map(|(&k, p)| (k, p.iter().map(|c| -c).collect()))
                .collect(),
        }
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (&ka, pa) in &self.parts {
            for (&kb, pb) in &rhs.parts {
                let mut prod = vec![Rational::zero(); pa.len() + pb.len() - 1];
                for (i, a) in pa.iter().enumerate() {
                    for (j, b) in pb.iter().enumerate() {
                        prod[i + j] += a * b;
                    }
                }
                out.add_part(ka + kb, &prod);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExpPoly {
            type Output = ExpPoly;
            fn $m(self, rhs: ExpPoly) -> ExpPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl From<Rational> for ExpPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

fn fmt_rational(c: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Renders the body of a coefficient in the `epoly` grammar (no surrounding parentheses).
impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, poly) in &self.parts {
            for (p, c) in poly.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if first {
                    fmt_rational(c, f)?;
                } else if c.is_negative() {
                    write!(f, " - ")?;
                    fmt_rational(&-c, f)?;
                } else {
                    write!(f, " + ")?;
                    fmt_rational(c, f)?;
                }
                first = false;
                match p {
                    0 => {}
                    1 => write!(f, "*s")?,
                    _ => write!(f, "*s^{p}")?,
                }
                if k > 0 {
                    write!(f, "*exp[-{}s]", 4 * k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn e(k: u32, p: usize, n: i64, d: i64) -> ExpPoly {
        ExpPoly::monomial(k, p, rat(n, d))
    }

    #[test]
    fn integrate_decay() {
        // int_0^s exp(-4t) = 1/4 - exp(-4s)/4
        assert_eq!(e(1, 0, 1, 1).integrate(), e(0, 0, 1, 4) + e(1, 0, -1, 4));
    }

    #[test]
    fn convolve_resonant() {
        assert_eq!(e(1, 0, 1, 1).convolve_decay4(), e(1, 1, 1, 1));
    }

    #[test]
    fn convolve_constant() {
        // int_0^s exp(-4(s-t)) dt = (1 - exp(-4s))/4
        assert_eq!(
            e(0, 0, 1, 1).convolve_decay4(),
            e(0, 0, 1, 4) + e(1, 0, -1, 4)
        );
    }

    #[test]
    fn limit_rejects_growth() {
        assert!(e(0, 1, 1, 1).limit().is_err());
        assert_eq!(e(1, 3, 5, 1).limit().unwrap(), rat(0, 1));
    }

    #[test]
    fn integrate_then_differentiate() {
        let f = e(0, 2, 3, 7) + e(2, 1, -1, 3) + e(1, 0, 5, 2) + e(3, 3, 1, 1);
        let g = f.integrate();
        assert_eq!(g.derivative(), f);
        assert_eq!(g.at_zero(), rat(0, 1));
    }

    #[test]
    fn convolution_solves_linear_ode() {
        // y = conv(f) solves y' = -4 y + f, y(0) = 0
        let f = e(0, 1, 2, 1) + e(1, 2, -3, 5) + e(2, 0, 1, 9);
        let y = f.convolve_decay4();
        assert_eq!(y.derivative(), &y.scale(&rat(-4, 1)) + &f);
        assert_eq!(y.at_zero(), rat(0, 1));
    }

    #[test]
    fn numeric_eval_matches_quadrature() {
        let f = e(1, 1, 1, 1) + e(0, 0, 1, 2);
        let g = f.integrate();
        let n = 20_000;
        let s = 0.7;
        let h = s / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) * h;
            acc += f.eval(t) * h;
        }
        assert!((acc - g.eval(s)).abs() < 1e-8);
    }

    #[test]
    fn display() {
        let f = e(0, 0, -1, 2) + e(1, 0, 1, 2);
        assert_eq!(f.to_string(), "-1/2 + 1/2*exp[-4s]");
        let g = e(1, 1, 4, 1) + e(3, 0, -1, 8);
        assert_eq!(g.to_string(), "4*s*exp[-4s] - 1/8*exp[-12s]");
    }
}
