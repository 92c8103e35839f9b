use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{argmax_state, loss, Architecture, Dataset, Gradients, LscnModel};
use crate::error::{Error, Result};
use crate::estimation::{FeatureScaler, LinkState};
use crate::rng::{rng_for, stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.001,
            batch_size: 1000,
            epochs: 100,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            rng_seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidConfig("learning_rate must be finite and >= 0".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Adam with bias-corrected moments over a flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    epsilon: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(parameters: usize, cfg: &TrainConfig) -> Self {
        Adam {
            lr: cfg.learning_rate,
            beta1: cfg.beta1,
            beta2: cfg.beta2,
            epsilon: cfg.epsilon,
            m: vec![0.0; parameters],
            v: vec![0.0; parameters],
            t: 0,
        }
    }

    pub fn step(&mut self, model: &mut LscnModel, grads: &Gradients) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        let g = grads.layers.iter().flat_map(|l| l.weights.iter().chain(&l.bias));
        for (((p, g), m), v) in model.parameters_mut().zip(g).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= self.lr * (*m / c1) / ((*v / c2).sqrt() + self.epsilon);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_accuracy: f64,
    pub val_loss: f64,
    pub val_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub loss: f64,
    pub accuracy: f64,
    /// `confusion[true][predicted]`
    pub confusion: [[usize; 3]; 3],
}

impl Evaluation {
    /// Recall per true class; NaN for classes absent from the set.
    pub fn recall(&self) -> [f64; 3] {
        let mut r = [f64::NAN; 3];
        for (i, row) in self.confusion.iter().enumerate() {
            let total: usize = row.iter().sum();
            if total > 0 {
                r[i] = row[i] as f64 / total as f64;
            }
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainHistory {
    pub epochs: Vec<EpochStats>,
    pub train_size: usize,
    pub val_size: usize,
    pub final_train: Evaluation,
    pub final_val: Evaluation,
}

impl TrainHistory {
    pub fn last(&self) -> Option<&EpochStats> {
        self.epochs.last()
    }
}

/// Loss, accuracy and confusion on a raw (unnormalised) dataset.
pub fn evaluate(model: &LscnModel, data: &Dataset) -> Result<Evaluation> {
    let mut total = 0.0;
    let mut correct = 0;
    let mut confusion = [[0; 3]; 3];
    for (x, &label) in data.features.iter().zip(&data.labels) {
        let p = model.forward(&model.scaler.transform(x)?)?;
        total += loss(&p, label);
        let pred = argmax_state(&p);
        confusion[label.index()][pred.index()] += 1;
        if pred == label {
            correct += 1;
        }
    }
    let n = data.len() as f64;
    Ok(Evaluation {
        loss: if data.is_empty() { f64::NAN } else { total / n },
        accuracy: if data.is_empty() { f64::NAN } else { correct as f64 / n },
        confusion,
    })
}

/// Stratified 2/3 : 1/3 split, seeded.
fn stratified_split(labels: &[LinkState], seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = rng_for(seed, stream::SPLIT, 0);
    let mut train = Vec::new();
    let mut val = Vec::new();
    for class in LinkState::ALL {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut rng);
        let cut = (idx.len() * 2).div_ceil(3);
        train.extend_from_slice(&idx[..cut]);
        val.extend_from_slice(&idx[cut..]);
    }
    train.sort_unstable();
    val.sort_unstable();
    (train, val)
}

/// Trains a fresh model with mini-batch Adam.
///
/// Without an explicit validation set the data is split 2/3 : 1/3 per class.
/// The feature scaler is fitted on the training part only. Everything is
/// deterministic for a fixed seed.
pub fn train(
    data: &Dataset,
    cfg: &TrainConfig,
    architecture: &Architecture,
    validation: Option<&Dataset>,
) -> Result<(LscnModel, TrainHistory)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    cfg.validate()?;
    let (train_set, val_set) = match validation {
        Some(v) => {
            if v.k != data.k {
                return Err(Error::ShapeMismatch {
                    expected: data.k,
                    got: v.k,
                });
            }
            (data.clone(), v.clone())
        }
        None => {
            let (tr, va) = stratified_split(&data.labels, cfg.rng_seed);
            (data.subset(&tr), data.subset(&va))
        }
    };
    let scaler = FeatureScaler::fit(&train_set.features)?;
    let inputs: Vec<Vec<f64>> = train_set
        .features
        .iter()
        .map(|r| scaler.transform(r))
        .collect::<Result<_>>()?;

    let mut init_rng = rng_for(cfg.rng_seed, stream::INIT, 0);
    let mut model = LscnModel::new(data.k, architecture.clone(), scaler, &mut init_rng)?;
    let mut adam = Adam::new(model.parameter_count(), cfg);
    let mut grads = Gradients::zeros_like(&model);
    let mut shuffle_rng = rng_for(cfg.rng_seed, stream::SHUFFLE, 0);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut epochs = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        order.shuffle(&mut shuffle_rng);
        for batch in order.chunks(cfg.batch_size) {
            grads.clear();
            for &i in batch {
                model.accumulate_gradients(&inputs[i], train_set.labels[i], &mut grads)?;
            }
            grads.scale(1.0 / batch.len() as f64);
            adam.step(&mut model, &grads);
        }
        let tr = evaluate(&model, &train_set)?;
        let va = evaluate(&model, &val_set)?;
        epochs.push(EpochStats {
            epoch: epoch + 1,
            train_loss: tr.loss,
            train_accuracy: tr.accuracy,
            val_loss: va.loss,
            val_accuracy: va.accuracy,
        });
    }
    let final_train = evaluate(&model, &train_set)?;
    let final_val = evaluate(&model, &val_set)?;
    let history = TrainHistory {
        epochs,
        train_size: train_set.len(),
        val_size: val_set.len(),
        final_train,
        final_val,
    };
    Ok((model, history))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSweepRow {
    pub k: usize,
    pub train_accuracy: f64,
    pub val_accuracy: f64,
}

/// Trains one model per K on the same rows truncated to the K strongest
/// paths, with identical seeds and split.
pub fn k_sweep(data: &Dataset, ks: &[usize], cfg: &TrainConfig, architecture: &Architecture) -> Result<Vec<KSweepRow>> {
    ks.iter()
        .map(|&k| {
            let (_, h) = train(&data.truncated(k)?, cfg, architecture, None)?;
            Ok(KSweepRow {
                k,
                train_accuracy: h.final_train.accuracy,
                val_accuracy: h.final_val.accuracy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Three well separated blobs; only the strongest-path triplet carries signal.
    fn separable(n: usize, k: usize, seed: u64) -> Dataset {
        let mut rng = rng_for(seed, 99, 0);
        let centers = [[-2.0, 0.0, 1.0], [2.0, 1.0, -1.0], [0.0, -2.0, 0.0]];
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let c = i % 3;
            let mut row: Vec<f64> = centers[c].iter().map(|m| m + rng.random_range(-0.4..0.4)).collect();
            row.extend((3..3 * k).map(|_| rng.random_range(-1.0..1.0)));
            features.push(row);
            labels.push(LinkState::from_index(c).unwrap());
        }
        Dataset::new(k, features, labels).unwrap()
    }

    fn small_cfg() -> TrainConfig {
        TrainConfig {
            learning_rate: 0.01,
            batch_size: 32,
            epochs: 200,
            rng_seed: 4,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn learns_separable_set() {
        let data = separable(300, 2, 1);
        let cfg = small_cfg();
        let (_, h) = train(&data, &cfg, &Architecture::default(), Some(&data)).unwrap();
        assert!(h.final_train.accuracy >= 0.99, "{}", h.final_train.accuracy);
    }

    #[test]
    fn zero_learning_rate_freezes_parameters() {
        let data = separable(60, 2, 2);
        let cfg = TrainConfig {
            learning_rate: 0.0,
            epochs: 3,
            batch_size: 16,
            ..TrainConfig::default()
        };
        let (model, h) = train(&data, &cfg, &Architecture::default(), None).unwrap();
        let mut init_rng = rng_for(cfg.rng_seed, stream::INIT, 0);
        let fresh = LscnModel::new(2, Architecture::default(), model.scaler.clone(), &mut init_rng).unwrap();
        assert_eq!(model.stage1, fresh.stage1);
        assert_eq!(model.stage2, fresh.stage2);
        let losses: Vec<f64> = h.epochs.iter().map(|e| e.train_loss).collect();
        assert!(losses.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn training_is_reproducible() {
        let data = separable(90, 3, 3);
        let cfg = TrainConfig { epochs: 5, batch_size: 8, ..small_cfg() };
        let (a, ha) = train(&data, &cfg, &Architecture::default(), None).unwrap();
        let (b, hb) = train(&data, &cfg, &Architecture::default(), None).unwrap();
        assert_eq!(a, b);
        assert_eq!(ha, hb);
    }

    #[test]
    fn empty_dataset_rejected() {
        let r = train(&Dataset::empty(2), &TrainConfig::default(), &Architecture::default(), None);
        assert!(matches!(r, Err(Error::EmptyDataset)));
    }

    #[test]
    fn split_is_stratified() {
        let labels: Vec<LinkState> = (0..90).map(|i| LinkState::from_index(i % 3).unwrap()).collect();
        let (tr, va) = stratified_split(&labels, 7);
        assert_eq!(tr.len(), 60);
        assert_eq!(va.len(), 30);
        for class in LinkState::ALL {
            assert_eq!(tr.iter().filter(|&&i| labels[i] == class).count(), 20);
        }
    }

    #[test]
    fn sweep_rows() {
        let data = separable(60, 3, 5);
        let cfg = TrainConfig { epochs: 2, batch_size: 16, ..small_cfg() };
        let rows = k_sweep(&data, &[1, 2, 3], &cfg, &Architecture::default()).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![1, 2, 3]);
        let single = k_sweep(&data, &[3], &cfg, &Architecture::default()).unwrap();
        let (_, h) = train(&data, &cfg, &Architecture::default(), None).unwrap();
        assert_eq!(single[0].val_accuracy, h.final_val.accuracy);
    }
}
