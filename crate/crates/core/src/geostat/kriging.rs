use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::variogram::VariogramModel;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KrigingMode {
    /// Unknown mean; weights constrained to sum to one via a Lagrange
    /// multiplier.
    #[default]
    Ordinary,
    /// Known mean `m`; estimate is `m + sum(w_i * (z_i - m))`.
    Simple,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KrigingResult {
    pub weights: Vec<f64>,
    pub estimate: f64,
    /// Estimation variance, clamped at zero.
    pub variance: f64,
    /// The mode actually solved. Ordinary kriging with no data has no
    /// feasible weights and degrades to simple kriging.
    pub mode: KrigingMode,
}

/// Krige `target` from point data.
pub fn krige(
    model: &VariogramModel,
    conditioning: &[([f64; 3], f64)],
    target: [f64; 3],
    mode: KrigingMode,
) -> Result<KrigingResult> {
    model.validate()?;
    let n = conditioning.len();
    for i in 0..n {
        for j in 0..i {
            if conditioning[i].0 == conditioning[j].0 {
                return Err(Error::SingularKriging(format!(
                    "conditioning points {j} and {i} coincide at {:?}",
                    conditioning[i].0
                )));
            }
        }
    }
    let pos = |i: usize| conditioning[i].0;
    let mut system = KrigingSystem::default();
    system.solve(
        model,
        n,
        |i, j| dist(pos(i), pos(j)),
        |i| dist(pos(i), target),
        |i| conditioning[i].1,
        mode,
        0.0,
    )
}

#[inline]
pub(crate) fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Reusable buffers for repeated small solves.
#[derive(Default)]
pub(crate) struct KrigingSystem {
    cov_i0: Vec<f64>,
}

impl KrigingSystem {
    /// Solve one kriging system given pairwise and target lags.
    ///
    /// `jitter` is added to the diagonal of the data covariance, relative to
    /// the sill; it keeps smooth models solvable at tiny lags.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn solve(
        &mut self,
        model: &VariogramModel,
        n: usize,
        lag: impl Fn(usize, usize) -> f64,
        target_lag: impl Fn(usize) -> f64,
        value: impl Fn(usize) -> f64,
        mode: KrigingMode,
        jitter: f64,
    ) -> Result<KrigingResult> {
        let c0 = model.sill;
        if n == 0 {
            return Ok(KrigingResult {
                weights: Vec::new(),
                estimate: model.mean,
                variance: c0,
                mode: KrigingMode::Simple,
            });
        }
        if let Some(hit) = (0..n).find(|&i| target_lag(i) == 0.0) {
            let mut weights = vec![0.0; n];
            weights[hit] = 1.0;
            return Ok(KrigingResult {
                weights,
                estimate: value(hit),
                variance: 0.0,
                mode,
            });
        }

        self.cov_i0.clear();
        self.cov_i0.extend((0..n).map(|i| model.cov(target_lag(i))));
        let size = match mode {
            KrigingMode::Ordinary => n + 1,
            KrigingMode::Simple => n,
        };
        let mut a = DMatrix::<f64>::zeros(size, size);
        for i in 0..n {
            a[(i, i)] = c0 * (1.0 + jitter);
            for j in 0..i {
                let c = model.cov(lag(i, j));
                a[(i, j)] = c;
                a[(j, i)] = c;
            }
        }
        let mut b = DVector::<f64>::zeros(size);
        b.rows_mut(0, n).copy_from_slice(&self.cov_i0);
        if mode == KrigingMode::Ordinary {
            for i in 0..n {
                a[(i, n)] = 1.0;
                a[(n, i)] = 1.0;
            }
            b[n] = 1.0;
        }

        let x = a
            .clone()
            .lu()
            .solve(&b)
            .filter(|x| x.iter().all(|v| v.is_finite()))
            .ok_or_else(|| {
                Error::SingularKriging(format!(
                    "degenerate covariance among {n} conditioning points"
                ))
            })?;
        let weights: Vec<f64> = x.rows(0, n).iter().copied().collect();

        // sigma^2 = C(0) - 2 sum w_i C_i0 + sum_ij w_i w_j C_ij
        let mut quad = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += a[(i, j)] * weights[j];
            }
            quad += weights[i] * row;
        }
        let cross: f64 = weights.iter().zip(&self.cov_i0).map(|(w, c)| w * c).sum();
        let variance = (c0 - 2.0 * cross + quad).max(0.0);

        let estimate = match mode {
            KrigingMode::Ordinary => (0..n).map(|i| weights[i] * value(i)).sum(),
            KrigingMode::Simple => {
                model.mean
                    + (0..n)
                        .map(|i| weights[i] * (value(i) - model.mean))
                        .sum::<f64>()
            }
        };
        Ok(KrigingResult {
            weights,
            estimate,
            variance,
            mode,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geostat::VariogramKind;

    fn exp_model(range: f64) -> VariogramModel {
        VariogramModel::exponential(range).unwrap()
    }

    #[test]
    fn no_data_returns_mean_and_sill() {
        let m = VariogramModel::new(VariogramKind::Exponential, 10.0, 2.5, 0.7).unwrap();
        let r = krige(&m, &[], [0.0; 3], KrigingMode::Simple).unwrap();
        assert_eq!(r.estimate, 0.7);
        assert_eq!(r.variance, 2.5);
        assert!(r.weights.is_empty());
    }

    #[test]
    fn coincident_target_interpolates_exactly() {
        let data = [([0.0, 0.0, 0.0], 3.0), ([1.0, 2.0, 0.0], -1.25)];
        for mode in [KrigingMode::Ordinary, KrigingMode::Simple] {
            let r = krige(&exp_model(4.0), &data, [1.0, 2.0, 0.0], mode).unwrap();
            assert_eq!(r.estimate, -1.25);
            assert_eq!(r.variance, 0.0);
            assert_eq!(r.weights, vec![0.0, 1.0]);
        }
    }

    // Reference values from an independent 30-digit Cramer's-rule solve of
    // the 2-point system: exponential, R = 2, sill 1, points at x = 0 and
    // x = 2 with values 1 and 3, target x = 0.5.
    #[test]
    fn two_point_system_matches_hand_solution() {
        let data = [([0.0, 0.0, 0.0], 1.0), ([2.0, 0.0, 0.0], 3.0)];
        let target = [0.5, 0.0, 0.0];

        let ord = krige(&exp_model(2.0), &data, target, KrigingMode::Ordinary).unwrap();
        assert!((ord.weights[0] - 0.742_385_907_285_053_6).abs() < 1e-12);
        assert!((ord.weights[1] - 0.257_614_092_714_946_4).abs() < 1e-12);
        assert!((ord.estimate - 1.515_228_185_429_892_7).abs() < 1e-12);
        assert!((ord.variance - 0.358_497_045_831_472_9).abs() < 1e-12);

        let simple = krige(&exp_model(2.0), &data, target, KrigingMode::Simple).unwrap();
        assert!((simple.weights[0] - 0.699_724_214_358_712_4).abs() < 1e-12);
        assert!((simple.weights[1] - 0.214_952_399_788_605_1).abs() < 1e-12);
        assert!((simple.estimate - 1.344_581_413_724_527_6).abs() < 1e-12);
        assert!((simple.variance - 0.353_517_909_831_859_4).abs() < 1e-12);
    }

    #[test]
    fn duplicate_points_are_named() {
        let data = [
            ([0.0, 0.0, 0.0], 1.0),
            ([1.0, 0.0, 0.0], 2.0),
            ([0.0, 0.0, 0.0], 3.0),
        ];
        let err = krige(
            &exp_model(1.0),
            &data,
            [0.5, 0.5, 0.0],
            KrigingMode::Ordinary,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("points 0 and 2"), "{err}");
    }
}
