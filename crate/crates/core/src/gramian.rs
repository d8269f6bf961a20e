//! Observability matrices and Gramians, with the per-sensor decomposition
//! used to build coalition Gramians by summation.

use crate::error::{CoreError, Result};
use crate::linalg::{symmetric_eigenvalues, Matrix};
use crate::model::{Coalition, LtiModel};
use crate::scalar::Scalar;

/// Stacked blocks `[C_S; C_S A; ...; C_S A^K]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservabilityMatrix<T> {
    entries: Matrix<T>,
    coalition: Coalition,
}

impl<T: Scalar> ObservabilityMatrix<T> {
    pub fn entries(&self) -> &Matrix<T> {
        &self.entries
    }

    pub fn coalition(&self) -> &Coalition {
        &self.coalition
    }

    /// `Oᵀ O`, which equals the Gramian of the same coalition.
    pub fn gram(&self) -> Matrix<T> {
        let t = self.entries.transpose();
        t.matmul(&self.entries).expect("conformable")
    }
}

/// Symmetric positive semidefinite observability Gramian of a coalition.
#[derive(Debug, Clone, PartialEq)]
pub struct Gramian<T> {
    entries: Matrix<T>,
    coalition: Coalition,
}

impl<T: Scalar> Gramian<T> {
    /// Wraps a square finite matrix, symmetrizing it as `(M + Mᵀ)/2`.
    pub fn from_matrix(mut entries: Matrix<T>, coalition: Coalition) -> Result<Self> {
        if !entries.is_square() {
            return Err(CoreError::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if !entries.is_finite() {
            return Err(CoreError::NonFinite);
        }
        entries.symmetrize();
        Ok(Self { entries, coalition })
    }

    /// The Gramian of the empty coalition.
    pub fn zero(n: usize) -> Self {
        Self {
            entries: Matrix::zeros(n, n),
            coalition: Coalition::empty(),
        }
    }

    pub fn entries(&self) -> &Matrix<T> {
        &self.entries
    }

    pub fn coalition(&self) -> &Coalition {
        &self.coalition
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> T {
        self.entries.trace()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        symmetric_eigenvalues(&self.entries)
    }

    /// Whether every eigenvalue is at least `-psd_tolerance(max eigenvalue)`.
    pub fn is_psd(&self) -> Result<bool> {
        let e = self.eigenvalues()?;
        let (lo, hi) = (e[0], e[e.len() - 1]);
        Ok(lo >= -psd_tolerance(hi))
    }
}

/// Slack allowed below zero for a PSD matrix with largest eigenvalue `max_eig`.
pub fn psd_tolerance<T: Scalar>(max_eig: T) -> T {
    (T::lit(1e-9) * max_eig.abs()).max(T::rel_tol(1e-12))
}

fn coalition_rows<'a, T: Scalar>(model: &'a LtiModel<T>, coalition: &Coalition) -> Result<Vec<&'a [T]>> {
    model.ensure_valid()?;
    if coalition.is_empty() {
        return Err(CoreError::EmptyCoalition);
    }
    let p = model.sensor_count();
    coalition
        .iter()
        .map(|i| {
            model
                .sensors()
                .get(i)
                .map(|s| s.row.as_slice())
                .ok_or(CoreError::SensorOutOfRange { index: i, sensors: p })
        })
        .collect()
}

/// Observability matrix of a non-empty coalition: for each `k` in
/// `0..horizon_samples` the block `C_S A^k`, with the coalition's sensor rows in
/// ascending index order.
pub fn observability_matrix<T: Scalar>(
    model: &LtiModel<T>,
    coalition: &Coalition,
) -> Result<ObservabilityMatrix<T>> {
    let rows = coalition_rows(model, coalition)?;
    let n = model.state_dim();
    let a = model.state_matrix();
    let mut current: Vec<Vec<T>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut data = Vec::with_capacity(model.horizon_samples() * rows.len() * n);
    for k in 0..model.horizon_samples() {
        if k > 0 {
            for r in current.iter_mut() {
                *r = a.left_mul_row(r);
            }
        }
        for r in &current {
            data.extend_from_slice(r);
        }
    }
    let entries = Matrix::from_row_major(model.horizon_samples() * rows.len(), n, data)?;
    Ok(ObservabilityMatrix {
        entries,
        coalition: coalition.clone(),
    })
}

/// `sum_k (A^k)ᵀ C_Sᵀ C_S A^k` over the model horizon, with `A^k` built by
/// repeated multiplication so defective state matrices need no special case.
pub fn gramian_direct<T: Scalar>(model: &LtiModel<T>, coalition: &Coalition) -> Result<Gramian<T>> {
    let rows = coalition_rows(model, coalition)?;
    let n = model.state_dim();
    let a = model.state_matrix();

    let mut ctc = Matrix::zeros(n, n);
    for r in &rows {
        ctc.add_outer(r);
    }

    let mut power = Matrix::identity(n);
    let mut w = Matrix::zeros(n, n);
    for k in 0..model.horizon_samples() {
        if k > 0 {
            power = power.matmul(a)?;
        }
        let term = power.transpose().matmul(&ctc)?.matmul(&power)?;
        w.add_assign(&term);
    }
    Gramian::from_matrix(w, coalition.clone())
}

/// Per-sensor Gramians, computed once and summed to form any coalition's
/// Gramian.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianBank<T> {
    per_sensor: Vec<Gramian<T>>,
    horizon_samples: usize,
    dim: usize,
}

impl<T: Scalar> GramianBank<T> {
    pub fn per_sensor(&self) -> &[Gramian<T>] {
        &self.per_sensor
    }

    pub fn sensor_count(&self) -> usize {
        self.per_sensor.len()
    }

    pub fn horizon_samples(&self) -> usize {
        self.horizon_samples
    }

    pub fn state_dim(&self) -> usize {
        self.dim
    }

    /// Sum of the member Gramians in ascending index order; the zero matrix
    /// for the empty coalition.
    pub fn coalition_gramian(&self, coalition: &Coalition) -> Result<Gramian<T>> {
        let p = self.per_sensor.len();
        if let Some(i) = coalition.max_member().filter(|&i| i >= p) {
            return Err(CoreError::SensorOutOfRange { index: i, sensors: p });
        }
        let mut sum = Matrix::zeros(self.dim, self.dim);
        for i in coalition.iter() {
            sum.add_assign(self.per_sensor[i].entries());
        }
        Ok(Gramian {
            entries: sum,
            coalition: coalition.clone(),
        })
    }

    /// Coalition Gramian keyed by bitmask. Bits at or above the sensor count
    /// are ignored.
    pub(crate) fn mask_gramian(&self, mask: u64) -> Matrix<T> {
        let mut sum = Matrix::zeros(self.dim, self.dim);
        for (i, g) in self.per_sensor.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum.add_assign(g.entries());
            }
        }
        sum
    }
}

/// Builds the bank of single-sensor Gramians `W_i`.
pub fn per_sensor_gramians<T: Scalar>(model: &LtiModel<T>) -> Result<GramianBank<T>> {
    model.ensure_valid()?;
    let per_sensor = (0..model.sensor_count())
        .map(|i| gramian_direct(model, &Coalition::singleton(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GramianBank {
        per_sensor,
        horizon_samples: model.horizon_samples(),
        dim: model.state_dim(),
    })
}

pub fn coalition_gramian<T: Scalar>(bank: &GramianBank<T>, coalition: &Coalition) -> Result<Gramian<T>> {
    bank.coalition_gramian(coalition)
}

/// Default observability threshold: `1e-9 * max(1, max eigenvalue)`.
pub fn default_observability_tolerance<T: Scalar>(max_eig: T) -> T {
    T::lit(1e-9) * T::one().max(max_eig)
}

/// True iff the Gramian's smallest eigenvalue exceeds `tol` (or the default
/// threshold when `tol` is `None`).
pub fn is_observable<T: Scalar>(g: &Gramian<T>, tol: Option<T>) -> Result<bool> {
    if g.dim() == 0 {
        return Ok(false);
    }
    let e = g.eigenvalues()?;
    let tol = tol.unwrap_or_else(|| default_observability_tolerance(e[e.len() - 1]));
    Ok(e[0] > tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{scenario_one, scenario_two};

    fn set(v: &[usize]) -> Coalition {
        v.iter().copied().collect()
    }

    #[test]
    fn scenario_one_observability_matrix_repeats() {
        let m = scenario_one::<f64>().with_horizon(2).unwrap();
        let o = observability_matrix(&m, &set(&[0, 1])).unwrap();
        assert_eq!(
            o.entries().to_rows(),
            vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0], vec![1.0, -1.0]]
        );
    }

    #[test]
    fn scenario_two_observability_matrix_first_sensor() {
        let m = scenario_two::<f64>().with_horizon(3).unwrap();
        let o = observability_matrix(&m, &set(&[0])).unwrap();
        assert_eq!(
            o.entries().to_rows(),
            vec![vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0], vec![1.0, 2.0, 1.0]]
        );
    }

    #[test]
    fn single_sample_is_sensor_row() {
        let m = scenario_two::<f64>().with_horizon(1).unwrap();
        for i in 0..4 {
            let o = observability_matrix(&m, &Coalition::singleton(i)).unwrap();
            assert_eq!(o.entries().to_rows(), vec![m.sensors()[i].row.clone()]);
        }
    }

    #[test]
    fn empty_coalition_rejected() {
        let m = scenario_one::<f64>();
        assert_eq!(
            observability_matrix(&m, &Coalition::empty()),
            Err(CoreError::EmptyCoalition)
        );
        assert_eq!(
            gramian_direct(&m, &Coalition::empty()),
            Err(CoreError::EmptyCoalition)
        );
        assert!(matches!(
            gramian_direct(&m, &set(&[5])),
            Err(CoreError::SensorOutOfRange { index: 5, sensors: 2 })
        ));
    }

    #[test]
    fn scenario_one_gramians() {
        let m = scenario_one::<f64>();
        let g = gramian_direct(&m, &set(&[0])).unwrap();
        assert_eq!(g.entries().to_rows(), vec![vec![10.0, 10.0], vec![10.0, 10.0]]);
        let bank = per_sensor_gramians(&m).unwrap();
        assert_eq!(bank.per_sensor()[0].trace(), 20.0);
        assert_eq!(bank.per_sensor()[1].trace(), 20.0);
        let full = bank.coalition_gramian(&set(&[0, 1])).unwrap();
        assert_eq!(full.entries().to_rows(), vec![vec![20.0, 0.0], vec![0.0, 20.0]]);
        assert_eq!(
            bank.coalition_gramian(&Coalition::empty()).unwrap().entries(),
            &Matrix::zeros(2, 2)
        );
        assert_eq!(
            bank.coalition_gramian(&set(&[1])).unwrap().entries(),
            bank.per_sensor()[1].entries()
        );
    }

    #[test]
    fn scenario_two_traces() {
        let bank = per_sensor_gramians(&scenario_two::<f64>()).unwrap();
        let traces: Vec<f64> = bank.per_sensor().iter().map(Gramian::trace).collect();
        assert_eq!(traces, vec![3187.0, 295.0, 5312.0, 10.0]);
        assert_eq!(
            bank.per_sensor()[3].entries().to_rows(),
            vec![vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 10.0]]
        );
    }

    #[test]
    fn single_sample_gramian_is_ctc() {
        let m = scenario_two::<f64>().with_horizon(1).unwrap();
        let g = gramian_direct(&m, &set(&[0, 2])).unwrap();
        assert_eq!(
            g.entries().to_rows(),
            vec![vec![2.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]]
        );
    }

    #[test]
    fn single_sensor_bank_matches_full() {
        let m = LtiModel::new(
            Matrix::from_rows(&[[0.5, 1.0], [0.0, 0.9]]).unwrap(),
            vec![crate::Sensor::new("y", vec![1.0, 0.0])],
            5,
        )
        .unwrap();
        let bank = per_sensor_gramians(&m).unwrap();
        assert_eq!(bank.sensor_count(), 1);
        assert_eq!(bank.per_sensor()[0], gramian_direct(&m, &set(&[0])).unwrap());
    }

    #[test]
    fn observability_verdicts() {
        let bank = per_sensor_gramians(&scenario_one::<f64>()).unwrap();
        assert!(is_observable(&bank.coalition_gramian(&set(&[0, 1])).unwrap(), None).unwrap());
        assert!(!is_observable(&bank.per_sensor()[0], None).unwrap());
        assert!(!is_observable(&Gramian::<f64>::zero(3), None).unwrap());

        let bank = per_sensor_gramians(&scenario_two::<f64>()).unwrap();
        let verdicts: Vec<bool> = bank
            .per_sensor()
            .iter()
            .map(|g| is_observable(g, None).unwrap())
            .collect();
        assert_eq!(verdicts, vec![true, false, true, false]);
    }

    #[test]
    fn explicit_tolerance_is_respected() {
        let g = Gramian::from_matrix(Matrix::diagonal(&[0.5, 4.0]), Coalition::full(1)).unwrap();
        assert!(is_observable(&g, Some(0.1)).unwrap());
        assert!(!is_observable(&g, Some(1.0)).unwrap());
    }

    #[test]
    fn works_in_single_precision() {
        let bank = per_sensor_gramians(&scenario_two::<f32>()).unwrap();
        let traces: Vec<f32> = bank.per_sensor().iter().map(Gramian::trace).collect();
        assert_eq!(traces, vec![3187.0, 295.0, 5312.0, 10.0]);
    }
}
