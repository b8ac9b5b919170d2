//! Fold loop: fit scaler on fold-train rows, fit the classifier, score the
//! fold-test rows, then merge fold reports in fold order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::knn::{knn_predict, knn_scores};
use super::lda::{lda_fit, lda_predict};
use super::metrics::{evaluate, EvalReport};
use super::scaler::{apply_minmax, fit_minmax, MinMaxScaler};
use super::split::SplitPlan;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    Lda,
    Knn { k: usize },
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classifier::Lda => f.write_str("lda"),
            Classifier::Knn { k } => write!(f, "knn:{k}"),
        }
    }
}

impl FromStr for Classifier {
    type Err = Error;

    /// `lda`, `knn` (k = 5) or `knn:K`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.split_once(':') {
            None if lower == "lda" => Ok(Classifier::Lda),
            None if lower == "knn" => Ok(Classifier::Knn { k: 5 }),
            Some(("knn", k)) => k
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .map(|k| Classifier::Knn { k })
                .ok_or_else(|| Error::InvalidConfig(format!("bad k in {s:?}"))),
            _ => Err(Error::InvalidConfig(format!("unknown classifier {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FoldResult {
    pub fold: usize,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub scaler: MinMaxScaler,
    pub predictions: Vec<usize>,
    pub scores: Vec<Vec<f64>>,
    pub report: EvalReport,
}

#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    pub folds: Vec<FoldResult>,
    /// Mean fold accuracy, its population SD, mean fold AUC and summed confusion.
    pub report: EvalReport,
}

fn run_fold<R: AsRef<[f64]> + Sync>(
    fold: usize,
    rows: &[R],
    labels: &[usize],
    n_classes: usize,
    train: Vec<usize>,
    test: Vec<usize>,
    classifier: Classifier,
) -> Result<FoldResult> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::ClassTooSmall(format!("fold {fold} has an empty partition")));
    }
    let pick = |idx: &[usize]| -> Vec<&[f64]> { idx.iter().map(|&i| rows[i].as_ref()).collect() };
    let train_raw = pick(&train);
    let scaler = fit_minmax(&train_raw)?;
    let train_x = apply_minmax(&scaler, &train_raw)?;
    let test_x = apply_minmax(&scaler, &pick(&test))?;
    let train_y: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
    let test_y: Vec<usize> = test.iter().map(|&i| labels[i]).collect();
    let (predictions, scores) = match classifier {
        Classifier::Lda => {
            let model = lda_fit(&train_x, &train_y, n_classes)?;
            lda_predict(&model, &test_x)?
        }
        Classifier::Knn { k } => {
            let k = k.min(train_x.len());
            (
                knn_predict(&train_x, &train_y, k, &test_x)?,
                knn_scores(&train_x, &train_y, k, n_classes, &test_x)?,
            )
        }
    };
    let report = evaluate(&predictions, &scores, &test_y, n_classes)?;
    Ok(FoldResult { fold, train, test, scaler, predictions, scores, report })
}

/// Run every fold of `plan`. Folds run concurrently; results are in fold order.
pub fn run_protocol<R: AsRef<[f64]> + Sync>(
    rows: &[R],
    labels: &[usize],
    n_classes: usize,
    plan: &SplitPlan,
    classifier: Classifier,
) -> Result<ProtocolOutcome> {
    if rows.len() != labels.len() || plan.assignments.len() != labels.len() {
        return Err(Error::LengthMismatch(format!(
            "{} rows, {} labels, {} split assignments",
            rows.len(),
            labels.len(),
            plan.assignments.len()
        )));
    }
    let folds: Vec<FoldResult> = plan
        .folds()
        .into_par_iter()
        .enumerate()
        .map(|(fold, (train, test))| run_fold(fold, rows, labels, n_classes, train, test, classifier))
        .collect::<Result<_>>()?;

    let accs: Vec<f64> = folds.iter().map(|f| f.report.accuracy).collect();
    let k = accs.len() as f64;
    let accuracy = accs.iter().sum::<f64>() / k;
    let accuracy_sd = (accs.iter().map(|a| (a - accuracy).powi(2)).sum::<f64>() / k).sqrt();
    let auc = folds.iter().map(|f| f.report.auc).sum::<f64>() / k;
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for f in &folds {
        for (row, frow) in confusion.iter_mut().zip(&f.report.confusion) {
            for (c, v) in row.iter_mut().zip(frow) {
                *c += v;
            }
        }
    }
    Ok(ProtocolOutcome { folds, report: EvalReport { accuracy, accuracy_sd, auc, confusion } })
}
