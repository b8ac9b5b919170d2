use crate::error::{Error, Result};

fn check(train_rows: usize, train_labels: usize, k: usize) -> Result<()> {
    if train_rows == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if train_rows != train_labels {
        return Err(Error::LengthMismatch(format!("{train_rows} rows, {train_labels} labels")));
    }
    if k == 0 || k > train_rows {
        return Err(Error::InvalidConfig(format!("k = {k} with {train_rows} training rows")));
    }
    Ok(())
}

/// Indices and distances of the `k` nearest rows, ties broken by index.
fn neighbours<R: AsRef<[f64]>>(train: &[R], query: &[f64], k: usize) -> Result<Vec<(f64, usize)>> {
    let mut dists = Vec::with_capacity(train.len());
    for (i, row) in train.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != query.len() {
            return Err(Error::DimensionMismatch { expected: row.len(), got: query.len() });
        }
        let d2: f64 = row.iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
        dists.push((d2.sqrt(), i));
    }
    dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    dists.truncate(k);
    Ok(dists)
}

/// Majority vote over Euclidean nearest neighbours. Ties go to the label with
/// the smaller mean neighbour distance, then to the smaller label index.
pub fn knn_predict<R: AsRef<[f64]>, Q: AsRef<[f64]>>(
    train_rows: &[R],
    train_labels: &[usize],
    k: usize,
    query_rows: &[Q],
) -> Result<Vec<usize>> {
    check(train_rows.len(), train_labels.len(), k)?;
    query_rows
        .iter()
        .map(|q| {
            let nn = neighbours(train_rows, q.as_ref(), k)?;
            let mut tally: Vec<(usize, usize, f64)> = Vec::new();
            for (d, i) in nn {
                let label = train_labels[i];
                match tally.iter_mut().find(|t| t.0 == label) {
                    Some(t) => {
                        t.1 += 1;
                        t.2 += d;
                    }
                    None => tally.push((label, 1, d)),
                }
            }
            let best = tally
                .into_iter()
                .min_by(|a, b| {
                    b.1.cmp(&a.1)
                        .then((a.2 / a.1 as f64).total_cmp(&(b.2 / b.1 as f64)))
                        .then(a.0.cmp(&b.0))
                })
                .expect("k >= 1");
            Ok(best.0)
        })
        .collect()
}

/// Fraction of the `k` neighbours voting for each class.
pub fn knn_scores<R: AsRef<[f64]>, Q: AsRef<[f64]>>(
    train_rows: &[R],
    train_labels: &[usize],
    k: usize,
    n_classes: usize,
    query_rows: &[Q],
) -> Result<Vec<Vec<f64>>> {
    check(train_rows.len(), train_labels.len(), k)?;
    query_rows
        .iter()
        .map(|q| {
            let mut votes = vec![0.0; n_classes];
            for (_, i) in neighbours(train_rows, q.as_ref(), k)? {
                votes[train_labels[i]] += 1.0 / k as f64;
            }
            Ok(votes)
        })
        .collect()
}
