//! Gaussian linear discriminant with a pooled covariance.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Added to the pooled covariance diagonal before factorization.
pub const LDA_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct LdaModel {
    n_classes: usize,
    /// Per-class `Sigma^-1 mu_c`, `None` for classes without training rows.
    weights: Vec<Option<DVector<f64>>>,
    intercepts: Vec<f64>,
}

impl LdaModel {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn dim(&self) -> usize {
        self.weights.iter().flatten().next().map_or(0, |w| w.len())
    }

    /// Linear discriminants `x' W mu_c - mu_c' W mu_c / 2 + ln pi_c`.
    pub fn discriminants(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: row.len() });
        }
        let x = DVector::from_column_slice(row);
        Ok(self
            .weights
            .iter()
            .zip(&self.intercepts)
            .map(|(w, b)| w.as_ref().map_or(f64::NEG_INFINITY, |w| w.dot(&x) + b))
            .collect())
    }
}

pub fn lda_fit<R: AsRef<[f64]>>(rows: &[R], labels: &[usize], n_classes: usize) -> Result<LdaModel> {
    if rows.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if rows.len() != labels.len() {
        return Err(Error::LengthMismatch(format!("{} rows, {} labels", rows.len(), labels.len())));
    }
    let dim = rows[0].as_ref().len();
    let mut sums = vec![DVector::<f64>::zeros(dim); n_classes];
    let mut counts = vec![0usize; n_classes];
    for (row, &l) in rows.iter().zip(labels) {
        let row = row.as_ref();
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
        }
        if l >= n_classes {
            return Err(Error::InvalidConfig(format!("label index {l} outside {n_classes} classes")));
        }
        sums[l] += DVector::from_column_slice(row);
        counts[l] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count();
    if present < 2 {
        return Err(Error::ClassTooSmall(format!("{present} class(es) in training data, need at least 2")));
    }
    let means: Vec<DVector<f64>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { s })
        .collect();

    let mut centered = DMatrix::<f64>::zeros(rows.len(), dim);
    for (i, (row, &l)) in rows.iter().zip(labels).enumerate() {
        for (j, &x) in row.as_ref().iter().enumerate() {
            centered[(i, j)] = x - means[l][j];
        }
    }
    let dof = if rows.len() > present { rows.len() - present } else { rows.len() };
    let mut cov = centered.tr_mul(&centered) / dof as f64;
    for j in 0..dim {
        cov[(j, j)] += LDA_RIDGE;
    }
    let chol = cov.cholesky().ok_or(Error::SingularCovariance)?;

    let n = rows.len() as f64;
    let mut weights = Vec::with_capacity(n_classes);
    let mut intercepts = Vec::with_capacity(n_classes);
    for (mean, &count) in means.iter().zip(&counts) {
        if count == 0 {
            weights.push(None);
            intercepts.push(f64::NEG_INFINITY);
            continue;
        }
        let w = chol.solve(mean);
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularCovariance);
        }
        intercepts.push(-0.5 * mean.dot(&w) + (count as f64 / n).ln());
        weights.push(Some(w));
    }
    Ok(LdaModel { n_classes, weights, intercepts })
}

/// Predicted class per row and posterior class probabilities.
pub fn lda_predict<R: AsRef<[f64]>>(model: &LdaModel, rows: &[R]) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
    let mut labels = Vec::with_capacity(rows.len());
    let mut scores = Vec::with_capacity(rows.len());
    for row in rows {
        let disc = model.discriminants(row.as_ref())?;
        let best = argmax(&disc);
        let top = disc[best];
        let exp: Vec<f64> = disc.iter().map(|&d| (d - top).exp()).collect();
        let z: f64 = exp.iter().sum();
        labels.push(best);
        scores.push(exp.into_iter().map(|e| e / z).collect());
    }
    Ok((labels, scores))
}

/// First index of the maximum.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}
