use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitMode {
    /// Single stratified train/test partition.
    Holdout { train_fraction: f64 },
    /// Stratified k-fold.
    KFold { k: usize },
}

/// Partition assignment per sample. For holdout, 0 = train and 1 = test;
/// for k-fold, the fold id.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPlan {
    pub mode: SplitMode,
    pub seed: u64,
    pub assignments: Vec<usize>,
}

impl SplitPlan {
    /// `(train, test)` index sets, one pair per fold; a holdout gives one pair.
    pub fn folds(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let parts = match self.mode {
            SplitMode::Holdout { .. } => 1,
            SplitMode::KFold { k } => k,
        };
        (0..parts)
            .map(|fold| {
                let test_id = match self.mode {
                    SplitMode::Holdout { .. } => 1,
                    SplitMode::KFold { .. } => fold,
                };
                let (test, train): (Vec<usize>, Vec<usize>) =
                    (0..self.assignments.len()).partition(|&i| self.assignments[i] == test_id);
                (train, test)
            })
            .collect()
    }
}

fn members_by_class(labels: &[usize], n_classes: usize) -> Result<Vec<Vec<usize>>> {
    let mut members = vec![Vec::new(); n_classes];
    for (i, &l) in labels.iter().enumerate() {
        members
            .get_mut(l)
            .ok_or_else(|| Error::InvalidConfig(format!("label index {l} outside {n_classes} classes")))?
            .push(i);
    }
    let present = members.iter().filter(|m| !m.is_empty()).count();
    if present < 2 {
        return Err(Error::ClassTooSmall(format!("{present} class(es) present, need at least 2")));
    }
    if let Some((c, m)) = members.iter().enumerate().find(|(_, m)| m.len() == 1) {
        return Err(Error::ClassTooSmall(format!("class {c} has {} sample, need at least 2", m.len())));
    }
    Ok(members)
}

/// Stratified, seeded split over class indices `labels[i] < n_classes`.
///
/// Holdout keeps `round(f * n_c)` samples of each class for training (at
/// least one on each side). K-fold deals shuffled class members round-robin
/// with a counter that carries over between classes, so folds differ in size
/// by at most one and per-class counts by at most one.
pub fn make_splits(labels: &[usize], n_classes: usize, mode: SplitMode, seed: u64) -> Result<SplitPlan> {
    match mode {
        SplitMode::Holdout { train_fraction } if !(train_fraction > 0.0 && train_fraction < 1.0) => {
            return Err(Error::InvalidConfig(format!("holdout fraction {train_fraction} not in (0, 1)")));
        }
        SplitMode::KFold { k } if k < 2 => {
            return Err(Error::InvalidConfig(format!("k = {k} folds, need at least 2")));
        }
        _ => {}
    }
    let members = members_by_class(labels, n_classes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0; labels.len()];
    let mut counter = 0usize;
    for mut class in members {
        class.shuffle(&mut rng);
        match mode {
            SplitMode::Holdout { train_fraction } => {
                let n = class.len();
                let n_train = ((train_fraction * n as f64).round() as usize).clamp(1, n - 1);
                for (pos, &i) in class.iter().enumerate() {
                    assignments[i] = usize::from(pos >= n_train);
                }
            }
            SplitMode::KFold { k } => {
                for &i in &class {
                    assignments[i] = counter % k;
                    counter += 1;
                }
            }
        }
    }
    Ok(SplitPlan { mode, seed, assignments })
}

/// K-fold over groups: every sample of a group lands in the same fold.
/// Groups are shuffled with `seed` and dealt to the currently smallest fold.
pub fn make_group_splits<G: AsRef<str>>(groups: &[G], k: usize, seed: u64) -> Result<SplitPlan> {
    if k < 2 {
        return Err(Error::InvalidConfig(format!("k = {k} folds, need at least 2")));
    }
    let mut names: Vec<&str> = groups.iter().map(AsRef::as_ref).collect();
    names.sort_unstable();
    names.dedup();
    if names.len() < k {
        return Err(Error::ClassTooSmall(format!("{} groups for {k} folds", names.len())));
    }
    let mut sizes = std::collections::HashMap::new();
    for g in groups {
        *sizes.entry(g.as_ref()).or_insert(0usize) += 1;
    }
    names.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_sizes = vec![0usize; k];
    let mut fold_of = std::collections::HashMap::new();
    for name in names {
        let fold = (0..k).min_by_key(|&f| (fold_sizes[f], f)).expect("k >= 2");
        fold_sizes[fold] += sizes[name];
        fold_of.insert(name, fold);
    }
    let assignments = groups.iter().map(|g| fold_of[g.as_ref()]).collect();
    Ok(SplitPlan { mode: SplitMode::KFold { k }, seed, assignments })
}
