//! Fair attribution of a linear system's degree of observability to its
//! individual sensors.
//!
//! A discrete-time autonomous system `x[k+1] = A x[k]`, `y[k] = C x[k]` is
//! observed through `p` sensors, one per row of `C`. The observability
//! Gramian over a finite horizon decomposes exactly into per-sensor terms,
//! so the Gramian of any sensor coalition is a sum of cached matrices. A
//! scalar metric of that Gramian (its trace or its minimum eigenvalue) turns
//! sensor selection into a cooperative game, and the Shapley value splits the
//! full system's observability among the sensors.
//!
//! The numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below cover the common double-precision case.
//!
//! ```
//! use obshap::{scenarios, shapley_exact, ValueFunctionKind};
//!
//! let model = scenarios::scenario_one::<f64>();
//! let result = shapley_exact(&model, ValueFunctionKind::MinEigenvalue).unwrap();
//! // neither sensor observes the state alone; they split the payout evenly
//! assert!((result.sensors[0].shapley - 10.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod gramian;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod random;
pub mod scalar;
pub mod scenarios;
pub mod shapley;

pub use error::{CoreError, Result};
pub use gramian::{
    coalition_gramian, gramian_direct, is_observable, observability_matrix, per_sensor_gramians, Gramian,
    GramianBank, ObservabilityMatrix,
};
pub use linalg::{symmetric_eigenvalues, Matrix};
pub use metrics::{evaluate, value_table, CoalitionValue, ValueFunction, ValueFunctionKind, ValueTable};
pub use model::{
    enumerate_subcoalitions, full_coalition, validate_model, Coalition, LtiModel, Sensor, ValidationResult,
    Violation, DEFAULT_ENUMERATION_CAP, MAX_ENUMERATION_CAP,
};
pub use scalar::Scalar;
pub use shapley::{
    check_proposition1, shapley_exact, shapley_exact_with_cap, shapley_from_table, shapley_permutation_oracle,
    shapley_sampled, shapley_weight, verify_axioms, AttributionResult, AxiomReport, Method, SensorAttribution,
    ShapleyWeights,
};

pub type Matrix64 = Matrix<f64>;
pub type Model64 = LtiModel<f64>;
pub type Sensor64 = Sensor<f64>;
pub type Gramian64 = Gramian<f64>;
pub type GramianBank64 = GramianBank<f64>;
pub type Attribution64 = AttributionResult<f64>;

pub type Matrix32 = Matrix<f32>;
pub type Model32 = LtiModel<f32>;
pub type Gramian32 = Gramian<f32>;
pub type Attribution32 = AttributionResult<f32>;
