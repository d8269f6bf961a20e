//! Shapley attribution of a coalition value function over sensors.
//!
//! `phi_i = sum_{S ⊆ N \ {i}} w_|S| [v(S ∪ {i}) - v(S)]`, where
//! `w_s = s! (p-s-1)! / p!`. The exact path evaluates `v` once per coalition
//! into a [`ValueTable`](crate::metrics::ValueTable) and then forms every
//! marginal sum from it.

mod axioms;
mod exact;
mod oracle;
mod sampled;
mod weights;

pub use axioms::{
    check_proposition1, verify_axioms, AxiomReport, DummyCheck, EfficiencyCheck, Proposition1Report,
    SymmetryCheck, AXIOM_EXHAUSTIVE_LIMIT, AXIOM_SAMPLE_SIZE,
};
pub use exact::{shapley_exact, shapley_exact_with_cap, shapley_from_table};
pub use oracle::{shapley_permutation_oracle, PERMUTATION_ORACLE_MAX_SENSORS};
pub use sampled::{shapley_sampled, SAMPLING_ALGORITHM};
pub use weights::{shapley_weight, ShapleyWeights};

use crate::metrics::ValueFunctionKind;
use crate::scalar::Scalar;

/// How an attribution was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    /// Monte-Carlo average over random sensor orderings.
    Sampled { num_permutations: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorAttribution<T> {
    pub name: String,
    /// `v({i})`.
    pub standalone: T,
    /// `phi_i`.
    pub shapley: T,
    /// Standard error of `phi_i`; only set for sampled results.
    pub standard_error: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributionResult<T> {
    pub sensors: Vec<SensorAttribution<T>>,
    /// `v(N)`.
    pub grand_value: T,
    /// `|sum_i phi_i - v(N)|`.
    pub efficiency_residual: T,
    pub metric: ValueFunctionKind,
    pub horizon_samples: usize,
    pub method: Method,
}

impl<T: Scalar> AttributionResult<T> {
    pub fn shapley_values(&self) -> Vec<T> {
        self.sensors.iter().map(|s| s.shapley).collect()
    }

    pub fn standalone_values(&self) -> Vec<T> {
        self.sensors.iter().map(|s| s.standalone).collect()
    }

    pub fn shapley_sum(&self) -> T {
        self.sensors.iter().map(|s| s.shapley).sum()
    }

    /// `phi_i / v(N)` per sensor, or `None` when `v(N)` is not positive.
    pub fn shares(&self) -> Option<Vec<T>> {
        (self.grand_value > T::zero())
            .then(|| self.sensors.iter().map(|s| s.shapley / self.grand_value).collect())
    }
}
