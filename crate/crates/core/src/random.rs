//! Seeded random models for property tests and benchmarks.

use rand::Rng;

use crate::linalg::Matrix;
use crate::model::{LtiModel, Sensor};
use crate::scalar::Scalar;

/// Ranges for [`random_model`]. Dimensions are drawn uniformly from
/// `1..=max_*`, entries uniformly from `[-bound, bound]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModelConfig {
    pub max_states: usize,
    pub max_sensors: usize,
    pub max_horizon: usize,
    pub state_bound: f64,
    pub sensor_bound: f64,
}

impl Default for RandomModelConfig {
    fn default() -> Self {
        Self {
            max_states: 5,
            max_sensors: 6,
            max_horizon: 12,
            state_bound: 2.0,
            sensor_bound: 2.0,
        }
    }
}

pub fn random_model<T: Scalar, R: Rng + ?Sized>(rng: &mut R, cfg: &RandomModelConfig) -> LtiModel<T> {
    let n = rng.gen_range(1..=cfg.max_states);
    let p = rng.gen_range(1..=cfg.max_sensors);
    let horizon = rng.gen_range(1..=cfg.max_horizon);
    let mut entry = |b: f64| T::lit(rng.gen_range(-b..=b));
    let a: Vec<T> = (0..n * n).map(|_| entry(cfg.state_bound)).collect();
    let sensors = (0..p)
        .map(|i| Sensor::new(format!("s{i}"), (0..n).map(|_| entry(cfg.sensor_bound)).collect()))
        .collect();
    LtiModel::new(
        Matrix::from_row_major(n, n, a).expect("n*n entries"),
        sensors,
        horizon,
    )
    .expect("random model is valid")
}
