use crate::error::{Error, Result};
use crate::grid::{CellSet, ScalarField, ValueKind};

/// Default spacing of the threshold grid.
pub const DEFAULT_STEP: f64 = 0.01;

/// Nested excursion sets of an alpha field at increasing thresholds.
///
/// A cell enters at the first threshold that is at least its value; cells
/// above the last threshold never enter.
#[derive(Clone, Debug)]
pub struct Filtration<'a> {
    field: &'a ScalarField,
    thresholds: Vec<f64>,
}

impl<'a> Filtration<'a> {
    pub fn new(field: &'a ScalarField, thresholds: Vec<f64>) -> Result<Self> {
        if field.kind() != ValueKind::Alpha {
            return Err(Error::WrongValueKind {
                expected: ValueKind::Alpha,
                found: field.kind(),
            });
        }
        if thresholds.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidConfig("thresholds must be finite".into()));
        }
        if thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "thresholds must be strictly increasing".into(),
            ));
        }
        Ok(Filtration { field, thresholds })
    }

    /// Thresholds `0, step, 2 step, ...` up to 1.
    pub fn uniform(field: &'a ScalarField, step: f64) -> Result<Self> {
        Self::new(field, uniform_grid(step)?)
    }

    /// One threshold per distinct field value.
    pub fn distinct_values(field: &'a ScalarField) -> Result<Self> {
        let mut t: Vec<f64> = field.values().to_vec();
        t.sort_by(f64::total_cmp);
        t.dedup();
        Self::new(field, t)
    }

    pub fn field(&self) -> &ScalarField {
        self.field
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Index of the first threshold not below `value`.
    pub fn stage_of(&self, value: f64) -> Option<usize> {
        let i = self.thresholds.partition_point(|&t| t < value);
        (i < self.thresholds.len()).then_some(i)
    }

    /// Entry stage of every cell.
    pub fn cell_stages(&self) -> Vec<Option<usize>> {
        self.field
            .values()
            .iter()
            .map(|&v| self.stage_of(v))
            .collect()
    }

    /// The excursion set at threshold number `stage`.
    pub fn set_at(&self, stage: usize) -> CellSet {
        let t = self.thresholds[stage];
        let members = self.field.values().iter().map(|&v| v <= t).collect();
        CellSet::new(*self.field.geometry(), members).expect("sizes agree")
    }
}

/// `k * step` for `k = 0, 1, ...` while not above 1, computed as `k / n`
/// when `1 / step` is a whole number so the grid values are exact decimals.
pub fn uniform_grid(step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "filtration step must lie in (0, 1], got {step}"
        )));
    }
    let inv = 1.0 / step;
    let n = inv.round();
    if (inv - n).abs() < 1e-9 {
        let n = n as usize;
        return Ok((0..=n).map(|k| k as f64 / n as f64).collect());
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let t = k as f64 * step;
        if t > 1.0 + 1e-12 {
            break;
        }
        out.push(t.min(1.0));
        k += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridGeometry;

    #[test]
    fn grid_has_101_exact_steps() {
        let g = uniform_grid(0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[3], 0.03);
        assert_eq!(g[30], 0.3);
        assert_eq!(g[100], 1.0);
        assert_eq!(uniform_grid(0.1).unwrap()[3], 0.3);
        assert_eq!(uniform_grid(0.3).unwrap().len(), 4);
        assert!(uniform_grid(0.0).is_err());
    }

    #[test]
    fn stages_and_sets_nest() {
        let g = GridGeometry::unit([3, 1, 1]).unwrap();
        let f = ScalarField::new(g, vec![0.105, 0.9, 0.2], ValueKind::Alpha).unwrap();
        let filt = Filtration::uniform(&f, 0.01).unwrap();
        assert_eq!(filt.cell_stages(), vec![Some(11), Some(90), Some(20)]);
        for s in 1..filt.thresholds().len() {
            assert!(filt.set_at(s - 1).is_subset(&filt.set_at(s)));
        }
    }

    #[test]
    fn rejects_unsorted_thresholds() {
        let g = GridGeometry::unit([1, 1, 1]).unwrap();
        let f = ScalarField::new(g, vec![0.5], ValueKind::Alpha).unwrap();
        assert!(Filtration::new(&f, vec![0.1, 0.1]).is_err());
        assert!(Filtration::new(&f, vec![0.2, 0.1]).is_err());
        let z = f.clone().with_kind(ValueKind::ZValue);
        assert!(Filtration::new(&z, vec![0.1]).is_err());
    }
}
