//! LTI models, sensors and coalitions.

use std::collections::HashSet;
use std::fmt;

use crate::error::{CoreError, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Default cap on the sensor count for exact `2^p` enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Largest cap accepted at all; `2^30` coalition values already need 8 GiB.
pub const MAX_ENUMERATION_CAP: usize = 30;

/// One measurement channel: a named row of the output matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Sensor<T> {
    pub name: String,
    pub row: Vec<T>,
}

impl<T: Scalar> Sensor<T> {
    pub fn new(name: impl Into<String>, row: Vec<T>) -> Self {
        Self {
            name: name.into(),
            row,
        }
    }
}

/// Autonomous discrete-time system `x[k+1] = A x[k]`, `y[k] = C x[k]`,
/// observed over `horizon_samples` samples (`k = 0..horizon_samples`).
#[derive(Debug, Clone, PartialEq)]
pub struct LtiModel<T> {
    state_matrix: Matrix<T>,
    sensors: Vec<Sensor<T>>,
    horizon_samples: usize,
}

impl<T: Scalar> LtiModel<T> {
    /// Builds a model and rejects it unless every invariant holds.
    pub fn new(state_matrix: Matrix<T>, sensors: Vec<Sensor<T>>, horizon_samples: usize) -> Result<Self> {
        let model = Self::new_unchecked(state_matrix, sensors, horizon_samples);
        model.ensure_valid()?;
        Ok(model)
    }

    /// Builds a model without validation. Operations on an invalid model
    /// fail with [`CoreError::InvalidModel`].
    pub fn new_unchecked(state_matrix: Matrix<T>, sensors: Vec<Sensor<T>>, horizon_samples: usize) -> Self {
        Self {
            state_matrix,
            sensors,
            horizon_samples,
        }
    }

    pub fn state_matrix(&self) -> &Matrix<T> {
        &self.state_matrix
    }

    pub fn sensors(&self) -> &[Sensor<T>] {
        &self.sensors
    }

    pub fn sensor_names(&self) -> impl Iterator<Item = &str> {
        self.sensors.iter().map(|s| s.name.as_str())
    }

    pub fn horizon_samples(&self) -> usize {
        self.horizon_samples
    }

    /// State dimension `n`.
    pub fn state_dim(&self) -> usize {
        self.state_matrix.nrows()
    }

    /// Sensor count `p`.
    pub fn sensor_count(&self) -> usize {
        self.sensors.len()
    }

    /// Same model observed over a different number of samples.
    pub fn with_horizon(&self, horizon_samples: usize) -> Result<Self> {
        Self::new(self.state_matrix.clone(), self.sensors.clone(), horizon_samples)
    }

    /// Same model with one more sensor appended.
    pub fn with_sensor(&self, sensor: Sensor<T>) -> Result<Self> {
        let mut sensors = self.sensors.clone();
        sensors.push(sensor);
        Self::new(self.state_matrix.clone(), sensors, self.horizon_samples)
    }

    pub fn validate(&self) -> ValidationResult {
        validate_model(self)
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        match validate_model(self) {
            ValidationResult::Ok => Ok(()),
            ValidationResult::Invalid(v) => Err(CoreError::InvalidModel(v)),
        }
    }

    /// Converts the model to another scalar type.
    pub fn cast<U: Scalar>(&self) -> LtiModel<U> {
        LtiModel {
            state_matrix: self.state_matrix.cast(),
            sensors: self
                .sensors
                .iter()
                .map(|s| Sensor::new(s.name.clone(), s.row.iter().map(|x| U::lit(x.as_f64())).collect()))
                .collect(),
            horizon_samples: self.horizon_samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    NotSquare { rows: usize, cols: usize },
    EmptyStateMatrix,
    NoSensors,
    RowLengthMismatch { expected: usize, found: usize },
    NonFinite,
    EmptyName,
    DuplicateName,
    ZeroHorizon,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::NotSquare { rows, cols } => write!(f, "matrix not square ({rows}x{cols})"),
            Problem::EmptyStateMatrix => f.write_str("state matrix is empty"),
            Problem::NoSensors => f.write_str("at least one sensor is required"),
            Problem::RowLengthMismatch { expected, found } => {
                write!(f, "row length mismatch (expected {expected}, found {found})")
            }
            Problem::NonFinite => f.write_str("non-finite entry"),
            Problem::EmptyName => f.write_str("sensor name is empty"),
            Problem::DuplicateName => f.write_str("duplicate sensor name"),
            Problem::ZeroHorizon => f.write_str("horizon must be at least one sample"),
        }
    }
}

/// A broken model invariant, tagged with the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub problem: Problem,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.problem)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationResult {
    Ok,
    Invalid(Vec<Violation>),
}

impl ValidationResult {
    pub fn is_ok(&self) -> bool {
        matches!(self, ValidationResult::Ok)
    }

    pub fn violations(&self) -> &[Violation] {
        match self {
            ValidationResult::Ok => &[],
            ValidationResult::Invalid(v) => v,
        }
    }
}

/// Checks every model invariant and reports all violations found.
pub fn validate_model<T: Scalar>(model: &LtiModel<T>) -> ValidationResult {
    let mut out = Vec::new();
    let mut push = |field: String, problem| out.push(Violation { field, problem });

    let a = &model.state_matrix;
    if a.nrows() == 0 {
        push("state_matrix".into(), Problem::EmptyStateMatrix);
    } else if !a.is_square() {
        push(
            "state_matrix".into(),
            Problem::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            },
        );
    }
    if !a.is_finite() {
        push("state_matrix".into(), Problem::NonFinite);
    }
    if model.horizon_samples == 0 {
        push("horizon_samples".into(), Problem::ZeroHorizon);
    }
    if model.sensors.is_empty() {
        push("sensors".into(), Problem::NoSensors);
    }

    let n = a.nrows();
    let mut seen = HashSet::new();
    for (i, s) in model.sensors.iter().enumerate() {
        if s.name.is_empty() {
            push(format!("sensors[{i}].name"), Problem::EmptyName);
        } else if !seen.insert(s.name.as_str()) {
            push(format!("sensors[{i}].name"), Problem::DuplicateName);
        }
        if s.row.len() != n {
            push(
                format!("sensors[{i}].row"),
                Problem::RowLengthMismatch {
                    expected: n,
                    found: s.row.len(),
                },
            );
        }
        if s.row.iter().any(|x| !x.is_finite()) {
            push(format!("sensors[{i}].row"), Problem::NonFinite);
        }
    }

    if out.is_empty() {
        ValidationResult::Ok
    } else {
        ValidationResult::Invalid(out)
    }
}

/// A set of sensor indices, stored sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(Vec<usize>);

impl Coalition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        Self(vec![i])
    }

    /// `{0, ..., p-1}`.
    pub fn full(p: usize) -> Self {
        Self((0..p).collect())
    }

    /// Members are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    /// Bitmask form; `None` if a member does not fit in 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(0u64, |m, &i| (i < 64).then(|| m | 1 << i))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// This coalition with `i` added.
    pub fn with(&self, i: usize) -> Self {
        let mut c = self.clone();
        if let Err(pos) = c.0.binary_search(&i) {
            c.0.insert(pos, i);
        }
        c
    }

    pub fn max_member(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// The grand coalition `N = {0, ..., p-1}` of a model.
pub fn full_coalition<T: Scalar>(model: &LtiModel<T>) -> Coalition {
    Coalition::full(model.sensor_count())
}

pub(crate) fn check_cap(p: usize, cap: usize) -> Result<()> {
    if cap > MAX_ENUMERATION_CAP {
        return Err(CoreError::EnumerationCapTooLarge {
            cap,
            max: MAX_ENUMERATION_CAP,
        });
    }
    if p > cap {
        return Err(CoreError::EnumerationCapExceeded { sensors: p, cap });
    }
    Ok(())
}

/// Bitmasks of every subset of `{0..p} \ {excluded}`, in ascending order.
pub(crate) fn subcoalition_masks(p: usize, excluded: usize) -> impl Iterator<Item = u64> {
    let low = (1u64 << excluded) - 1;
    (0..1u64 << (p - 1)).map(move |c| (c & low) | ((c & !low) << 1))
}

/// All `2^(p-1)` coalitions not containing `excluded`, in ascending bitmask
/// order. Fails when `p` exceeds `cap`.
pub fn enumerate_subcoalitions(
    p: usize,
    excluded: usize,
    cap: usize,
) -> Result<impl Iterator<Item = Coalition>> {
    if excluded >= p {
        return Err(CoreError::SensorOutOfRange {
            index: excluded,
            sensors: p,
        });
    }
    check_cap(p, cap)?;
    Ok(subcoalition_masks(p, excluded).map(Coalition::from_mask))
}
