use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{AttributionResult, Method, SensorAttribution};
use crate::error::{CoreError, Result};
use crate::gramian::{per_sensor_gramians, Gramian, GramianBank};
use crate::linalg::Matrix;
use crate::metrics::{evaluate, ValueFunctionKind, ValueTable};
use crate::model::{Coalition, LtiModel, MAX_ENUMERATION_CAP};
use crate::scalar::Scalar;

/// Name recorded for the estimator in reports.
pub const SAMPLING_ALGORITHM: &str = "permutation-sampling";

/// Permutations per work unit. Chunk `c` draws from stream `c` of the seeded
/// generator, so results do not depend on the number of worker threads.
const CHUNK: u64 = 512;

/// Below this sensor count the sampler looks values up in a full table
/// instead of re-evaluating prefix Gramians.
const TABLE_LIMIT: usize = 16;

enum Values<'a, T> {
    Table(ValueTable<T>),
    Incremental(&'a GramianBank<T>, ValueFunctionKind),
}

#[derive(Clone)]
struct Moments<T> {
    sum: Vec<T>,
    sum_sq: Vec<T>,
}

impl<T: Scalar> Moments<T> {
    fn new(p: usize) -> Self {
        Self {
            sum: vec![T::zero(); p],
            sum_sq: vec![T::zero(); p],
        }
    }

    fn add(&mut self, i: usize, x: T) {
        self.sum[i] = self.sum[i] + x;
        self.sum_sq[i] = self.sum_sq[i] + x * x;
    }

    fn merge(mut self, other: &Self) -> Self {
        for i in 0..self.sum.len() {
            self.sum[i] = self.sum[i] + other.sum[i];
            self.sum_sq[i] = self.sum_sq[i] + other.sum_sq[i];
        }
        self
    }
}

fn marginals<T: Scalar>(values: &Values<'_, T>, order: &[usize], out: &mut Moments<T>) -> Result<()> {
    match values {
        Values::Table(table) => {
            let mut mask = 0u64;
            let mut prev = T::zero();
            for &i in order {
                mask |= 1 << i;
                let v = table.by_mask(mask);
                out.add(i, v - prev);
                prev = v;
            }
        }
        Values::Incremental(bank, kind) => {
            let n = bank.state_dim();
            let mut sum = Matrix::zeros(n, n);
            let mut prev = T::zero();
            for &i in order {
                sum.add_assign(bank.per_sensor()[i].entries());
                let v = evaluate(*kind, &Gramian::from_matrix(sum.clone(), Coalition::empty())?)?;
                out.add(i, v - prev);
                prev = v;
            }
        }
    }
    Ok(())
}

/// Monte-Carlo Shapley estimate from `num_permutations` uniformly random
/// sensor orderings drawn from a ChaCha8 generator seeded with `seed`.
///
/// Every ordering distributes exactly `v(N)`, so the estimates sum to the
/// grand value up to rounding. Identical `(seed, num_permutations)` give
/// bit-identical results.
pub fn shapley_sampled<T: Scalar>(
    model: &LtiModel<T>,
    kind: ValueFunctionKind,
    num_permutations: u64,
    seed: u64,
) -> Result<AttributionResult<T>> {
    if num_permutations == 0 {
        return Err(CoreError::ZeroPermutations);
    }
    let bank = per_sensor_gramians(model)?;
    let p = bank.sensor_count();
    let values = if p <= TABLE_LIMIT {
        Values::Table(ValueTable::build(&bank, &kind, MAX_ENUMERATION_CAP)?)
    } else {
        Values::Incremental(&bank, kind)
    };

    let chunks = num_permutations.div_ceil(CHUNK);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(num_permutations - c * CHUNK);
            let mut order: Vec<usize> = (0..p).collect();
            let mut m = Moments::new(p);
            for _ in 0..count {
                order.shuffle(&mut rng);
                marginals(&values, &order, &mut m)?;
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let moments = partial.iter().fold(Moments::new(p), Moments::merge);

    let n = T::lit(num_permutations as f64);
    let phi: Vec<T> = moments.sum.iter().map(|&s| s / n).collect();
    let standard_errors: Vec<T> = phi
        .iter()
        .zip(&moments.sum_sq)
        .map(|(&mean, &sq)| {
            if num_permutations < 2 {
                return T::zero();
            }
            let var = ((sq / n - mean * mean) * n / (n - T::one())).max(T::zero());
            (var / n).sqrt()
        })
        .collect();

    let (standalone, grand_value) = match &values {
        Values::Table(t) => ((0..p).map(|i| t.standalone(i)).collect(), t.grand_value()),
        Values::Incremental(bank, kind) => {
            let standalone = bank
                .per_sensor()
                .iter()
                .map(|g| evaluate(*kind, g))
                .collect::<Result<Vec<T>>>()?;
            let full = bank.coalition_gramian(&Coalition::full(p))?;
            (standalone, evaluate(*kind, &full)?)
        }
    };

    let total: T = phi.iter().copied().sum();
    let sensors = model
        .sensors()
        .iter()
        .enumerate()
        .map(|(i, s)| SensorAttribution {
            name: s.name.clone(),
            standalone: standalone[i],
            shapley: phi[i],
            standard_error: Some(standard_errors[i]),
        })
        .collect();
    Ok(AttributionResult {
        sensors,
        grand_value,
        efficiency_residual: (total - grand_value).abs(),
        metric: kind,
        horizon_samples: model.horizon_samples(),
        method: Method::Sampled { num_permutations, seed },
    })
}
