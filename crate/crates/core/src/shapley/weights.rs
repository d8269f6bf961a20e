use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

/// `s! (p-s-1)! / p!`, the probability that exactly the `s` members of a
/// given coalition precede a player in a uniformly random ordering of `p`.
///
/// Evaluated as `(1/p) * prod_{i=1..s} i / (p-1-s+i)`, i.e. `1 / (p * C(p-1, s))`,
/// which never forms a factorial and stays accurate for any `p`.
pub fn shapley_weight<T: Scalar>(s: usize, p: usize) -> Result<T> {
    if p == 0 {
        return Err(CoreError::NoSensors);
    }
    if s >= p {
        return Err(CoreError::InvalidCoalitionSize { size: s, sensors: p });
    }
    let base = p - 1 - s;
    let ratio = (1..=s).fold(T::one(), |acc, i| {
        acc * T::lit(i as f64) / T::lit((base + i) as f64)
    });
    Ok(ratio / T::lit(p as f64))
}

/// Weights for every coalition size `0..p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyWeights<T> {
    p: usize,
    weights: Vec<T>,
}

impl<T: Scalar> ShapleyWeights<T> {
    pub fn new(p: usize) -> Result<Self> {
        let weights = (0..p).map(|s| shapley_weight(s, p)).collect::<Result<_>>()?;
        Ok(Self { p, weights })
    }

    pub fn sensor_count(&self) -> usize {
        self.p
    }

    /// Weight of a coalition with `size` members.
    pub fn get(&self, size: usize) -> T {
        self.weights[size]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }

    /// `sum_s C(p-1, s) w_s`, which is one for a well-formed weight set.
    pub fn total_mass(&self) -> T {
        let mut binom = T::one();
        let mut total = T::zero();
        for (s, &w) in self.weights.iter().enumerate() {
            total = total + binom * w;
            // C(p-1, s+1) = C(p-1, s) * (p-1-s) / (s+1)
            binom = binom * T::lit((self.p - 1 - s) as f64) / T::lit((s + 1) as f64);
        }
        total
    }
}
