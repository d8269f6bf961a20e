use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{CoreError, Result};
use crate::gramian::{gramian_direct, Gramian};
use crate::metrics::{evaluate, ValueFunctionKind};
use crate::model::{Coalition, LtiModel};
use crate::scalar::Scalar;

pub const PERMUTATION_ORACLE_MAX_SENSORS: usize = 8;

/// Shapley values by brute force over all `p!` orderings: the average of
/// `v(predecessors ∪ {i}) - v(predecessors)`.
///
/// Coalition values come from [`gramian_direct`] rather than the summed
/// per-sensor bank, and no size weights are involved, so this shares no
/// code path with [`shapley_exact`](super::shapley_exact). Intended as a
/// test oracle.
pub fn shapley_permutation_oracle<T: Scalar>(model: &LtiModel<T>, kind: ValueFunctionKind) -> Result<Vec<T>> {
    model.ensure_valid()?;
    let p = model.sensor_count();
    if p > PERMUTATION_ORACLE_MAX_SENSORS {
        return Err(CoreError::OracleTooLarge {
            sensors: p,
            max: PERMUTATION_ORACLE_MAX_SENSORS,
        });
    }

    let mut memo: HashMap<Coalition, T> = HashMap::new();
    let mut value = |c: &Coalition| -> Result<T> {
        if let Some(&v) = memo.get(c) {
            return Ok(v);
        }
        let g = if c.is_empty() {
            Gramian::zero(model.state_dim())
        } else {
            gramian_direct(model, c)?
        };
        let v = evaluate(kind, &g)?;
        memo.insert(c.clone(), v);
        Ok(v)
    };

    let mut totals = vec![T::zero(); p];
    let mut orderings = 0u64;
    for order in (0..p).permutations(p) {
        let mut before = Coalition::empty();
        let mut v_before = T::zero();
        for i in order {
            let after = before.with(i);
            let v_after = value(&after)?;
            totals[i] = totals[i] + (v_after - v_before);
            before = after;
            v_before = v_after;
        }
        orderings += 1;
    }
    let count = T::lit(orderings as f64);
    Ok(totals.into_iter().map(|t| t / count).collect())
}
