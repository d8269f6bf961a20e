use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::shapley_exact;
use super::AttributionResult;
use crate::error::Result;
use crate::gramian::per_sensor_gramians;
use crate::metrics::{ValueFunctionKind, ValueTable};
use crate::model::{check_cap, LtiModel, DEFAULT_ENUMERATION_CAP};
use crate::scalar::{approx_eq, Scalar};

/// Up to this many sensors the symmetry and dummy preconditions are checked
/// on every coalition; above it on a seeded random sample.
pub const AXIOM_EXHAUSTIVE_LIMIT: usize = 12;
pub const AXIOM_SAMPLE_SIZE: usize = 4096;
const AXIOM_SAMPLE_SEED: u64 = 0x0b5e_7ab1_e5ee_d000;

const VALUE_TOL: f64 = 1e-9;
const PAYOUT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyCheck<T> {
    pub shapley_sum: T,
    pub grand_value: T,
    pub residual: T,
    pub tolerance: T,
    pub passed: bool,
}

/// Two interchangeable sensors and how far apart their payouts are.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryCheck<T> {
    pub first: usize,
    pub second: usize,
    pub difference: T,
    pub passed: bool,
}

/// A sensor that never changes any coalition's value.
#[derive(Debug, Clone, PartialEq)]
pub struct DummyCheck<T> {
    pub sensor: usize,
    pub shapley: T,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport<T> {
    pub efficiency: EfficiencyCheck<T>,
    pub symmetric_pairs: Vec<SymmetryCheck<T>>,
    pub dummies: Vec<DummyCheck<T>>,
    /// Whether the symmetry/dummy preconditions were checked on every
    /// coalition rather than a sample.
    pub exhaustive: bool,
}

impl<T: Scalar> AxiomReport<T> {
    pub fn all_passed(&self) -> bool {
        self.efficiency.passed
            && self.symmetric_pairs.iter().all(|c| c.passed)
            && self.dummies.iter().all(|c| c.passed)
    }
}

/// Coalition masks over which a universally quantified precondition is
/// tested: all subsets of `N \ excluded` or a seeded sample of them.
fn test_masks(p: usize, excluded: u64, exhaustive: bool) -> Vec<u64> {
    let allowed = ((1u64 << p) - 1) & !excluded;
    if exhaustive {
        // submasks of `allowed` in ascending order
        let mut out = Vec::new();
        let mut s = 0u64;
        loop {
            out.push(s);
            if s == allowed {
                break;
            }
            s = (s.wrapping_sub(allowed)) & allowed;
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SAMPLE_SEED ^ excluded);
        (0..AXIOM_SAMPLE_SIZE).map(|_| rng.gen::<u64>() & allowed).collect()
    }
}

/// Checks efficiency, symmetry and the dummy property of an exact
/// attribution against the model's value table.
pub fn verify_axioms<T: Scalar>(
    model: &LtiModel<T>,
    kind: ValueFunctionKind,
    result: &AttributionResult<T>,
) -> Result<AxiomReport<T>> {
    check_cap(model.sensor_count(), DEFAULT_ENUMERATION_CAP)?;
    let bank = per_sensor_gramians(model)?;
    let table = ValueTable::build(&bank, &kind, DEFAULT_ENUMERATION_CAP)?;
    Ok(axioms_from_table(&table, &result.shapley_values()))
}

pub(crate) fn axioms_from_table<T: Scalar>(table: &ValueTable<T>, phi: &[T]) -> AxiomReport<T> {
    let p = table.sensor_count();
    let exhaustive = p <= AXIOM_EXHAUSTIVE_LIMIT;
    let value_tol = T::rel_tol(VALUE_TOL);
    let payout_tol = T::lit(PAYOUT_TOL);

    let grand_value = table.grand_value();
    let shapley_sum: T = phi.iter().copied().sum();
    let residual = (shapley_sum - grand_value).abs();
    let tolerance = payout_tol * T::one().max(grand_value.abs());
    let efficiency = EfficiencyCheck {
        shapley_sum,
        grand_value,
        residual,
        tolerance,
        passed: residual <= tolerance,
    };

    let mut symmetric_pairs = Vec::new();
    for j in 0..p {
        for k in (j + 1)..p {
            let (bj, bk) = (1u64 << j, 1u64 << k);
            let interchangeable = test_masks(p, bj | bk, exhaustive)
                .into_iter()
                .all(|s| approx_eq(table.by_mask(s | bj), table.by_mask(s | bk), value_tol));
            if interchangeable {
                let difference = (phi[j] - phi[k]).abs();
                symmetric_pairs.push(SymmetryCheck {
                    first: j,
                    second: k,
                    difference,
                    passed: difference <= payout_tol,
                });
            }
        }
    }

    let mut dummies = Vec::new();
    for j in 0..p {
        let bj = 1u64 << j;
        let is_dummy = test_masks(p, bj, exhaustive)
            .into_iter()
            .all(|s| approx_eq(table.by_mask(s | bj), table.by_mask(s), value_tol));
        if is_dummy {
            dummies.push(DummyCheck {
                sensor: j,
                shapley: phi[j],
                passed: phi[j].abs() <= payout_tol,
            });
        }
    }

    AxiomReport {
        efficiency,
        symmetric_pairs,
        dummies,
        exhaustive,
    }
}

/// Per-sensor `|phi_i - v({i})|`. For a modular value function such as the
/// trace the Shapley value equals the standalone value, so `holds` is
/// asserted there; for the minimum eigenvalue the deviations measure
/// interaction effects and are only reported.
#[derive(Debug, Clone, PartialEq)]
pub struct Proposition1Report<T> {
    pub deviations: Vec<T>,
    /// Whether the metric is modular, making `holds` meaningful.
    pub asserted: bool,
    /// Every deviation is within `1e-6 * max(1, v({i}))`.
    pub holds: bool,
}

pub fn check_proposition1<T: Scalar>(model: &LtiModel<T>, kind: ValueFunctionKind) -> Result<Proposition1Report<T>> {
    let r = shapley_exact(model, kind)?;
    let tol = T::lit(PAYOUT_TOL);
    let deviations: Vec<T> = r.sensors.iter().map(|s| (s.shapley - s.standalone).abs()).collect();
    let holds = r
        .sensors
        .iter()
        .zip(&deviations)
        .all(|(s, &d)| d <= tol * T::one().max(s.standalone.abs()));
    Ok(Proposition1Report {
        deviations,
        asserted: kind == ValueFunctionKind::Trace,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scenarios::{scenario_one, scenario_two};
    use crate::Sensor;
    use approx::assert_abs_diff_eq;

    #[test]
    fn submask_enumeration() {
        assert_eq!(test_masks(3, 0b010, true), vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(test_masks(2, 0b11, true), vec![0]);
        let sampled = test_masks(20, 0b1, false);
        assert_eq!(sampled.len(), AXIOM_SAMPLE_SIZE);
        assert!(sampled.iter().all(|m| m & 1 == 0 && *m < 1 << 20));
    }

    #[test]
    fn scenario_one_sensors_are_symmetric() {
        let m = scenario_one::<f64>();
        let r = shapley_exact(&m, ValueFunctionKind::MinEigenvalue).unwrap();
        let report = verify_axioms(&m, ValueFunctionKind::MinEigenvalue, &r).unwrap();
        assert_eq!(report.symmetric_pairs.len(), 1);
        assert_eq!((report.symmetric_pairs[0].first, report.symmetric_pairs[0].second), (0, 1));
        assert!(report.all_passed());
        assert!(report.exhaustive);
    }

    #[test]
    fn zero_row_is_dummy() {
        let m = scenario_two::<f64>().with_sensor(Sensor::new("dead", vec![0.0; 3])).unwrap();
        for kind in ValueFunctionKind::ALL {
            let r = shapley_exact(&m, kind).unwrap();
            let report = verify_axioms(&m, kind, &r).unwrap();
            assert_eq!(report.dummies.len(), 1);
            assert_eq!(report.dummies[0].sensor, 4);
            assert_eq!(report.dummies[0].shapley, 0.0);
            assert!(report.all_passed());
        }
    }

    #[test]
    fn scenario_two_efficiency() {
        let m = scenario_two::<f64>();
        let r = shapley_exact(&m, ValueFunctionKind::MinEigenvalue).unwrap();
        let report = verify_axioms(&m, ValueFunctionKind::MinEigenvalue, &r).unwrap();
        assert_abs_diff_eq!(report.efficiency.shapley_sum, 2.477, epsilon = 1e-3);
        assert!(report.efficiency.passed);
    }

    #[test]
    fn efficiency_failure_is_reported() {
        let m = scenario_one::<f64>();
        let mut r = shapley_exact(&m, ValueFunctionKind::Trace).unwrap();
        r.sensors[0].shapley += 1.0;
        let report = verify_axioms(&m, ValueFunctionKind::Trace, &r).unwrap();
        assert!(!report.efficiency.passed);
        assert!(!report.all_passed());
    }

    #[test]
    fn proposition1_trace_and_min_eig() {
        let m = scenario_two::<f64>();
        let t = check_proposition1(&m, ValueFunctionKind::Trace).unwrap();
        assert!(t.asserted && t.holds);
        assert!(t.deviations.iter().all(|&d| d <= 1e-9));

        let e = check_proposition1(&m, ValueFunctionKind::MinEigenvalue).unwrap();
        assert!(!e.asserted);
        for (got, want) in e.deviations.iter().zip([0.1209, 0.2306, 0.0684, 0.0243]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-3);
        }
    }

    #[test]
    fn proposition1_single_sensor() {
        let m = LtiModel::new(
            Matrix::from_rows(&[[0.9, 0.2], [0.0, 0.7]]).unwrap(),
            vec![Sensor::new("y", vec![1.0, 0.5])],
            6,
        )
        .unwrap();
        for kind in ValueFunctionKind::ALL {
            let r = check_proposition1(&m, kind).unwrap();
            assert_eq!(r.deviations, vec![0.0]);
        }
    }
}
