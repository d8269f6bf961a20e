//! The two reference systems used throughout the tests and the CLI.

use crate::linalg::Matrix;
use crate::model::{LtiModel, Sensor};
use crate::scalar::Scalar;

pub const SCENARIO_HORIZON_SAMPLES: usize = 10;

fn build<T: Scalar>(a: &[&[f64]], c: &[&[f64]]) -> LtiModel<T> {
    let conv = |r: &[f64]| r.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
    let a: Vec<Vec<T>> = a.iter().map(|r| conv(r)).collect();
    let sensors = c
        .iter()
        .enumerate()
        .map(|(i, r)| Sensor::new(format!("C{}", i + 1), conv(r)))
        .collect();
    LtiModel::new(
        Matrix::from_rows(&a).expect("rectangular"),
        sensors,
        SCENARIO_HORIZON_SAMPLES,
    )
    .expect("valid scenario")
}

/// Two complementary sensors on a static two-state system: neither sensor
/// observes the state alone, both together do.
pub fn scenario_one<T: Scalar>() -> LtiModel<T> {
    build(&[&[1.0, 0.0], &[0.0, 1.0]], &[&[1.0, 1.0], &[1.0, -1.0]])
}

/// Three-state chain of integrators with four sensors: one that observes the
/// whole state alone, one redundant combination and two partial sensors.
pub fn scenario_two<T: Scalar>() -> LtiModel<T> {
    build(
        &[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 0.0, 1.0]],
        &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]],
    )
}

/// Scenario by its number (1 or 2).
pub fn scenario<T: Scalar>(id: u8) -> Option<LtiModel<T>> {
    match id {
        1 => Some(scenario_one()),
        2 => Some(scenario_two()),
        _ => None,
    }
}
