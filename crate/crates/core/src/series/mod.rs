//! Perturbation recursions in powers of the bookkeeping parameter `k`.
//!
//! Every table is indexed by `k`-order and every product is capped at the largest
//! order requested, so higher words are discarded as soon as they appear.

mod beta_flow;
mod identities;
mod kernel;
mod magnus;
mod newton_wigner;
mod time_dependent;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;

use thiserror::Error;

use crate::algebra::{AlgebraError, OperatorExpr};

pub use beta_flow::{omega_series, q_series, r_table};
pub use identities::{commutator_identities, q_constraint_chain, q_initial_data};
pub use kernel::{
    bernoulli_kernel_coefficients, cosh_coefficients, kernel_coefficients, sinh_coefficients,
    tanh_coefficients, KernelSeries,
};
pub use magnus::{
    commutator_first_order_vanishes, nested_ad_smallness, omega_u_at_infinity, omega_u_series,
    tanh_relation,
};
pub use newton_wigner::{
    cancellation_identity, cancellation_identity_for, hnw_from_generator, hnw_odd_remainder,
    hnw_series, monomial_table, order_economy, MonomialTable,
};
pub use time_dependent::{
    bp_flow_series, bp_flow_series_s, discrepancy_check, discrepancy_check_with, discrepancy_forms,
    hnw_time_dependent, DiscrepancyForms,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("order {order} is outside the supported range: {reason}")]
    BadOrder { order: u32, reason: &'static str },
    #[error("order {order} of the odd flow component does not vanish at infinity")]
    OddRemainder { order: u32 },
}

/// Map from `k`-order to operator, with every order in `1..=max_order` present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTable {
    by_order: BTreeMap<u32, OperatorExpr>,
    max_order: u32,
}

impl SeriesTable {
    pub fn new(max_order: u32) -> Self {
        Self {
            by_order: (1..=max_order).map(|n| (n, OperatorExpr::zero())).collect(),
            max_order,
        }
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn set(&mut self, n: u32, x: OperatorExpr) {
        assert!((1..=self.max_order).contains(&n), "order {n} outside table");
        self.by_order.insert(n, x);
    }

    pub fn get(&self, n: u32) -> Option<&OperatorExpr> {
        self.by_order.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &OperatorExpr)> {
        self.by_order.iter().map(|(&n, x)| (n, x))
    }

    /// Sum of all orders, each word carrying its own weight.
    pub fn total(&self) -> OperatorExpr {
        self.by_order
            .values()
            .fold(OperatorExpr::zero(), |acc, x| &acc + x)
    }

    pub fn map(&self, f: impl Fn(&OperatorExpr) -> OperatorExpr) -> Self {
        Self {
            by_order: self.by_order.iter().map(|(&n, x)| (n, f(x))).collect(),
            max_order: self.max_order,
        }
    }

    pub fn try_map<E>(
        &self,
        f: impl Fn(&OperatorExpr) -> Result<OperatorExpr, E>,
    ) -> Result<Self, E> {
        let mut by_order = BTreeMap::new();
        for (&n, x) in &self.by_order {
            by_order.insert(n, f(x)?);
        }
        Ok(Self {
            by_order,
            max_order: self.max_order,
        })
    }
}

impl Index<u32> for SeriesTable {
    type Output = OperatorExpr;
    fn index(&self, n: u32) -> &OperatorExpr {
        self.by_order
            .get(&n)
            .unwrap_or_else(|| panic!("order {n} not in table of max order {}", self.max_order))
    }
}

/// Outcome of an exact identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The nonzero residual `lhs - rhs`.
    Fails(OperatorExpr),
    NotComputed(String),
}

impl Verdict {
    /// `Holds` iff `lhs == rhs`.
    pub fn compare(lhs: &OperatorExpr, rhs: &OperatorExpr) -> Self {
        Self::zero(&(lhs - rhs))
    }

    pub fn zero(residual: &OperatorExpr) -> Self {
        if residual.is_zero() {
            Verdict::Holds
        } else {
            Verdict::Fails(residual.clone())
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    /// First failing verdict wins; `NotComputed` only if nothing failed.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Self {
        let mut pending = None;
        for v in verdicts {
            match v {
                Verdict::Holds => {}
                Verdict::Fails(_) => return v,
                Verdict::NotComputed(_) => pending = pending.or(Some(v)),
            }
        }
        pending.unwrap_or(Verdict::Holds)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails(r) => write!(f, "fails: residual {r}"),
            Verdict::NotComputed(why) => write!(f, "not computed: {why}"),
        }
    }
}
