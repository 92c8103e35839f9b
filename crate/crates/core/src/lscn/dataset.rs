use crate::error::{Error, Result};
use crate::estimation::{LinkState, Snapshot};

/// Raw (unnormalised) classifier rows of width `3K` with their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub k: usize,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<LinkState>,
}

impl Dataset {
    pub fn new(k: usize, features: Vec<Vec<f64>>, labels: Vec<LinkState>) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::ShapeMismatch {
                expected: features.len(),
                got: labels.len(),
            });
        }
        if let Some(bad) = features.iter().find(|r| r.len() != 3 * k) {
            return Err(Error::ShapeMismatch {
                expected: 3 * k,
                got: bad.len(),
            });
        }
        Ok(Dataset { k, features, labels })
    }

    pub fn empty(k: usize) -> Self {
        Dataset {
            k,
            features: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn from_snapshots(snapshots: &[Snapshot]) -> Result<Self> {
        let k = snapshots.first().ok_or(Error::EmptyDataset)?.k();
        Dataset::new(
            k,
            snapshots.iter().map(Snapshot::features).collect(),
            snapshots.iter().map(|s| s.true_link_state).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Same rows restricted to the `k` strongest paths.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.k {
            return Err(Error::InvalidConfig(format!("cannot truncate K={} to K={k}", self.k)));
        }
        Ok(Dataset {
            k,
            features: self.features.iter().map(|r| r[..3 * k].to_vec()).collect(),
            labels: self.labels.clone(),
        })
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Dataset {
            k: self.k,
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn class_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for l in &self.labels {
            c[l.index()] += 1;
        }
        c
    }

    /// Accuracy of always predicting the most frequent class.
    pub fn majority_baseline(&self) -> f64 {
        let c = self.class_counts();
        *c.iter().max().unwrap_or(&0) as f64 / self.len().max(1) as f64
    }
}
