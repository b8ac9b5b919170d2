use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    /// Spread of accuracy across folds; 0 for a single partition.
    pub accuracy_sd: f64,
    /// One-vs-rest macro AUC.
    pub auc: f64,
    /// `confusion[truth][predicted]`.
    pub confusion: Vec<Vec<usize>>,
}

impl EvalReport {
    pub fn total(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }
}

/// Area under the ROC curve, trapezoidal over all thresholds (ties count
/// one half). `None` if either side is empty.
pub fn binary_auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Mann-Whitney: sum of average ranks of positives.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += avg_rank * order[i..=j].iter().filter(|&&k| positive[k]).count() as f64;
        i = j + 1;
    }
    let (p, n) = (n_pos as f64, n_neg as f64);
    Some((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// Accuracy, macro AUC and confusion counts for one partition.
/// `scores[i][c]` is the score of sample `i` for class `c`.
pub fn evaluate(predictions: &[usize], scores: &[Vec<f64>], truth: &[usize], n_classes: usize) -> Result<EvalReport> {
    if predictions.len() != truth.len() || scores.len() != truth.len() {
        return Err(Error::LengthMismatch(format!(
            "{} predictions, {} score rows, {} truth labels",
            predictions.len(),
            scores.len(),
            truth.len()
        )));
    }
    if let Some(row) = scores.iter().find(|s| s.len() != n_classes) {
        return Err(Error::DimensionMismatch { expected: n_classes, got: row.len() });
    }
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&t, &p) in truth.iter().zip(predictions) {
        if t >= n_classes || p >= n_classes {
            return Err(Error::InvalidConfig(format!("label outside {n_classes} classes")));
        }
        confusion[t][p] += 1;
    }
    let correct: usize = (0..n_classes).map(|c| confusion[c][c]).sum();
    let accuracy = if truth.is_empty() { 0.0 } else { correct as f64 / truth.len() as f64 };

    let per_class: Vec<f64> = (0..n_classes)
        .filter_map(|c| {
            let s: Vec<f64> = scores.iter().map(|row| row[c]).collect();
            let pos: Vec<bool> = truth.iter().map(|&t| t == c).collect();
            binary_auc(&s, &pos)
        })
        .collect();
    if per_class.is_empty() {
        return Err(Error::SingleClassAucUndefined);
    }
    let auc = per_class.iter().sum::<f64>() / per_class.len() as f64;
    Ok(EvalReport { accuracy, accuracy_sd: 0.0, auc, confusion })
}
