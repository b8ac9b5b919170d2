use crate::error::{Error, Result};

/// Per-feature `(min, max)` learned from training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxScaler {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl MinMaxScaler {
    pub fn dim(&self) -> usize {
        self.mins.len()
    }

    /// `(x - min) / (max - min)`; constant features map to 0. Values outside
    /// the training range are not clamped.
    pub fn transform_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: row.len() });
        }
        Ok(row
            .iter()
            .zip(self.mins.iter().zip(&self.maxs))
            .map(|(&x, (&lo, &hi))| if hi > lo { (x - lo) / (hi - lo) } else { 0.0 })
            .collect())
    }

    pub fn inverse_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: row.len() });
        }
        Ok(row
            .iter()
            .zip(self.mins.iter().zip(&self.maxs))
            .map(|(&x, (&lo, &hi))| x * (hi - lo) + lo)
            .collect())
    }
}

pub fn fit_minmax<R: AsRef<[f64]>>(train_rows: &[R]) -> Result<MinMaxScaler> {
    let first = train_rows.first().ok_or(Error::EmptyTrainingSet)?.as_ref();
    let mut mins = first.to_vec();
    let mut maxs = first.to_vec();
    for row in &train_rows[1..] {
        let row = row.as_ref();
        if row.len() != mins.len() {
            return Err(Error::DimensionMismatch { expected: mins.len(), got: row.len() });
        }
        for (j, &x) in row.iter().enumerate() {
            mins[j] = mins[j].min(x);
            maxs[j] = maxs[j].max(x);
        }
    }
    Ok(MinMaxScaler { mins, maxs })
}

pub fn apply_minmax<R: AsRef<[f64]>>(scaler: &MinMaxScaler, rows: &[R]) -> Result<Vec<Vec<f64>>> {
    rows.iter().map(|r| scaler.transform_row(r.as_ref())).collect()
}
