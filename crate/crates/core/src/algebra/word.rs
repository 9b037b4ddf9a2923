use std::cmp::Ordering;
use std::fmt;

/// Non-beta generator. Declaration order is the rendering order `O < E < F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    O,
    E,
    F,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::O, Generator::E, Generator::F];

    pub fn is_odd(self) -> bool {
        self == Generator::O
    }

    pub fn kappa_weight(self) -> u32 {
        if self.is_odd() {
            1
        } else {
            2
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Generator::O => 'O',
            Generator::E => 'E',
            Generator::F => 'F',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'O' => Some(Generator::O),
            'E' => Some(Generator::E),
            'F' => Some(Generator::F),
            _ => None,
        }
    }
}

/// `beta^{beta} * factors[0] * factors[1] * ...` with beta moved to the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub beta: bool,
    pub factors: Vec<Generator>,
}

impl Word {
    pub fn new(beta: bool, factors: Vec<Generator>) -> Self {
        Self { beta, factors }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn beta() -> Self {
        Self::new(true, Vec::new())
    }

    pub fn odd_count(&self) -> usize {
        self.factors.iter().filter(|g| g.is_odd()).count()
    }

    pub fn is_odd(&self) -> bool {
        self.odd_count() % 2 == 1
    }

    pub fn kappa_weight(&self) -> u32 {
        self.factors.iter().map(|g| g.kappa_weight()).sum()
    }

    pub fn count(&self, g: Generator) -> usize {
        self.factors.iter().filter(|&&x| x == g).count()
    }

    /// Product in normal form; the flag is true when the coefficient flips sign.
    pub fn mul(&self, rhs: &Word) -> (Word, bool) {
        // beta^a w1 beta^b w2 = beta^{a+b} w1 w2 * (-1)^{b * #O(w1)}
        let negate = rhs.beta && self.is_odd();
        let mut factors = Vec::with_capacity(self.factors.len() + rhs.factors.len());
        factors.extend_from_slice(&self.factors);
        factors.extend_from_slice(&rhs.factors);
        (Word::new(self.beta ^ rhs.beta, factors), negate)
    }

    /// Adjoint: reversed factors, beta renormalized to the left.
    pub fn dagger(&self) -> (Word, bool) {
        let mut factors = self.factors.clone();
        factors.reverse();
        (Word::new(self.beta, factors), self.beta && self.is_odd())
    }

    pub fn substitute(&self, from: Generator, to: Generator) -> Word {
        Word::new(
            self.beta,
            self.factors
                .iter()
                .map(|&g| if g == from { to } else { g })
                .collect(),
        )
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.beta
            .cmp(&other.beta)
            .then(self.factors.len().cmp(&other.factors.len()))
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Grammar form, e.g. `b*O^2*E`; the identity renders as the empty string.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.beta {
            parts.push("b".into());
        }
        let mut i = 0;
        while i < self.factors.len() {
            let g = self.factors[i];
            let run = self.factors[i..].iter().take_while(|&&x| x == g).count();
            if run == 1 {
                parts.push(g.symbol().to_string());
            } else {
                parts.push(format!("{}^{}", g.symbol(), run));
            }
            i += run;
        }
        write!(f, "{}", parts.join("*"))
    }
}
