use rayon::prelude::*;

use super::weights::ShapleyWeights;
use super::{AttributionResult, Method, SensorAttribution};
use crate::error::Result;
use crate::gramian::per_sensor_gramians;
use crate::metrics::{ValueFunctionKind, ValueTable};
use crate::model::{check_cap, subcoalition_masks, LtiModel, DEFAULT_ENUMERATION_CAP};
use crate::scalar::Scalar;

/// Exact Shapley values of every player of a precomputed game.
///
/// Marginals are first summed per coalition size (ascending mask order) and
/// only then weighted, so each player's value takes `p` weight products and
/// the result is bitwise reproducible.
pub fn shapley_from_table<T: Scalar>(table: &ValueTable<T>) -> Result<Vec<T>> {
    let p = table.sensor_count();
    let weights = ShapleyWeights::<T>::new(p)?;
    Ok((0..p)
        .into_par_iter()
        .map(|i| {
            let bit = 1u64 << i;
            let mut by_size = vec![T::zero(); p];
            for s in subcoalition_masks(p, i) {
                let k = s.count_ones() as usize;
                by_size[k] = by_size[k] + (table.by_mask(s | bit) - table.by_mask(s));
            }
            by_size
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (k, &d)| acc + weights.get(k) * d)
        })
        .collect())
}

/// Exact attribution with the default enumeration cap.
pub fn shapley_exact<T: Scalar>(model: &LtiModel<T>, kind: ValueFunctionKind) -> Result<AttributionResult<T>> {
    shapley_exact_with_cap(model, kind, DEFAULT_ENUMERATION_CAP)
}

/// Exact attribution; fails with
/// [`CoreError::EnumerationCapExceeded`](crate::CoreError::EnumerationCapExceeded)
/// when the model has more than `cap` sensors.
pub fn shapley_exact_with_cap<T: Scalar>(
    model: &LtiModel<T>,
    kind: ValueFunctionKind,
    cap: usize,
) -> Result<AttributionResult<T>> {
    check_cap(model.sensor_count(), cap)?;
    let bank = per_sensor_gramians(model)?;
    let table = ValueTable::build(&bank, &kind, cap)?;
    let phi = shapley_from_table(&table)?;

    let grand_value = table.grand_value();
    let total: T = phi.iter().copied().sum();
    let sensors = model
        .sensors()
        .iter()
        .zip(&phi)
        .enumerate()
        .map(|(i, (s, &shapley))| SensorAttribution {
            name: s.name.clone(),
            standalone: table.standalone(i),
            shapley,
            standard_error: None,
        })
        .collect();
    Ok(AttributionResult {
        sensors,
        grand_value,
        efficiency_residual: (total - grand_value).abs(),
        metric: kind,
        horizon_samples: model.horizon_samples(),
        method: Method::Exact,
    })
}
