//! Value functions mapping a coalition Gramian to a degree of observability.
//!
//! Only the trace and the minimum eigenvalue ship. The log-determinant is
//! deliberately absent: any coalition that does not observe the full state
//! has a singular Gramian, so its value would be `-inf` and Shapley sums over
//! such coalitions are undefined.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{CoreError, Result};
use crate::gramian::{per_sensor_gramians, Gramian, GramianBank};
use crate::linalg::symmetric_eigenvalues;
use crate::model::{check_cap, Coalition, LtiModel, DEFAULT_ENUMERATION_CAP};
use crate::scalar::Scalar;

/// Maps a Gramian to a scalar payout. Implementations must return zero for
/// the zero Gramian so that `v(∅) = 0`.
pub trait ValueFunction<T: Scalar>: Sync {
    fn evaluate(&self, g: &Gramian<T>) -> Result<T>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueFunctionKind {
    Trace,
    MinEigenvalue,
}

impl ValueFunctionKind {
    pub const ALL: [ValueFunctionKind; 2] = [ValueFunctionKind::Trace, ValueFunctionKind::MinEigenvalue];

    /// Short machine name, as used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ValueFunctionKind::Trace => "trace",
            ValueFunctionKind::MinEigenvalue => "min-eig",
        }
    }

    /// Human-readable label for tables.
    pub fn label(self) -> &'static str {
        match self {
            ValueFunctionKind::Trace => "Trace",
            ValueFunctionKind::MinEigenvalue => "Min Eigenvalue",
        }
    }
}

impl fmt::Display for ValueFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValueFunctionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "trace" => Ok(ValueFunctionKind::Trace),
            "min-eig" | "min-eigenvalue" => Ok(ValueFunctionKind::MinEigenvalue),
            other => Err(format!("unknown metric `{other}` (expected trace or min-eig)")),
        }
    }
}

impl<T: Scalar> ValueFunction<T> for ValueFunctionKind {
    fn evaluate(&self, g: &Gramian<T>) -> Result<T> {
        evaluate(*self, g)
    }
}

/// Value of a Gramian under the chosen metric.
///
/// The minimum eigenvalue is clamped to exactly zero when it lies within
/// `1e-9` times the spectral radius below zero, so rank-deficient Gramians
/// read as unobservable rather than as rounding noise.
pub fn evaluate<T: Scalar>(kind: ValueFunctionKind, g: &Gramian<T>) -> Result<T> {
    let m = g.entries();
    if !m.is_finite() {
        return Err(CoreError::NonFinite);
    }
    match kind {
        ValueFunctionKind::Trace => Ok(m.trace()),
        ValueFunctionKind::MinEigenvalue => {
            if g.dim() == 0 {
                return Ok(T::zero());
            }
            let e = symmetric_eigenvalues(m)?;
            Ok(clamp_min_eigenvalue(e[0], e[e.len() - 1]))
        }
    }
}

fn clamp_min_eigenvalue<T: Scalar>(min: T, max: T) -> T {
    let radius = min.abs().max(max.abs());
    if min < T::zero() && min >= -(T::lit(1e-9) * radius) {
        T::zero()
    } else {
        min
    }
}

/// A coalition together with its payout `v(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalitionValue<T> {
    pub coalition: Coalition,
    pub value: T,
}

/// `v(S)` for every `S ⊆ N`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable<T> {
    sensors: usize,
    values: Vec<T>,
}

impl<T: Scalar> ValueTable<T> {
    /// Table over `sensors` players filled by `f(mask)`. `f(0)` is forced to
    /// zero.
    pub fn from_fn(sensors: usize, cap: usize, f: impl Fn(u64) -> T + Sync) -> Result<Self> {
        check_cap(sensors, cap)?;
        let values = (0..1u64 << sensors)
            .into_par_iter()
            .map(|mask| if mask == 0 { T::zero() } else { f(mask) })
            .collect();
        Ok(Self { sensors, values })
    }

    /// Evaluates `vf` on every coalition Gramian summed from `bank`.
    pub fn build(bank: &GramianBank<T>, vf: &dyn ValueFunction<T>, cap: usize) -> Result<Self> {
        let p = bank.sensor_count();
        check_cap(p, cap)?;
        let values = (0..1u64 << p)
            .into_par_iter()
            .map(|mask| {
                if mask == 0 {
                    return Ok(T::zero());
                }
                let g = Gramian::from_matrix(bank.mask_gramian(mask), Coalition::from_mask(mask))?;
                vf.evaluate(&g)
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(Self { sensors: p, values })
    }

    pub fn sensor_count(&self) -> usize {
        self.sensors
    }

    pub fn by_mask(&self, mask: u64) -> T {
        self.values[mask as usize]
    }

    /// `v(S)`; panics if `S` has a member outside the table.
    pub fn get(&self, coalition: &Coalition) -> T {
        let mask = coalition.to_mask().expect("coalition within table");
        self.by_mask(mask)
    }

    pub fn grand_value(&self) -> T {
        self.by_mask((1u64 << self.sensors) - 1)
    }

    pub fn standalone(&self, i: usize) -> T {
        self.by_mask(1u64 << i)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = CoalitionValue<T>> + '_ {
        self.values.iter().enumerate().map(|(m, &value)| CoalitionValue {
            coalition: Coalition::from_mask(m as u64),
            value,
        })
    }

    /// Entrywise sum of two tables over the same players.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.sensors != other.sensors {
            return Err(CoreError::DimensionMismatch {
                expected: self.sensors,
                found: other.sensors,
            });
        }
        Ok(Self {
            sensors: self.sensors,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect(),
        })
    }
}

/// Every coalition value of `model` under `kind`, using the default
/// enumeration cap.
pub fn value_table<T: Scalar>(model: &LtiModel<T>, kind: ValueFunctionKind) -> Result<ValueTable<T>> {
    check_cap(model.sensor_count(), DEFAULT_ENUMERATION_CAP)?;
    let bank = per_sensor_gramians(model)?;
    ValueTable::build(&bank, &kind, DEFAULT_ENUMERATION_CAP)
}
