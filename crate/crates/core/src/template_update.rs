//! Event-driven replacement of the active target model.
//!
//! Models captured at bandwidth-change events are collected; once `d_limit`
//! of them have accumulated, the one most similar to the current key model
//! replaces it if its similarity to the initial model has dropped to the
//! adaptive threshold `theta` or below.

use std::collections::VecDeque;

use crate::error::{Result, TrackError};
use crate::histograms::{bhattacharyya, WeightedHistogram};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemplateConfig {
    pub theta0: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub d_limit: usize,
}

impl Default for TemplateConfig {
    fn default() -> Self {
        Self {
            theta0: 0.8,
            theta_min: 0.5,
            theta_max: 0.95,
            d_limit: 3,
        }
    }
}

impl TemplateConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.theta_min.is_finite()
            && self.theta_max.is_finite()
            && 0.0 < self.theta_min
            && self.theta_min <= self.theta_max
            && self.theta_max < 1.0
            && (self.theta_min..=self.theta_max).contains(&self.theta0);
        if !ok {
            return Err(TrackError::Config(format!(
                "need 0 < theta_min <= theta0 <= theta_max < 1, got {} / {} / {}",
                self.theta_min, self.theta0, self.theta_max
            )));
        }
        if self.d_limit == 0 {
            return Err(TrackError::Config("d_limit must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sum of squared elementwise differences between two histograms.
pub fn matching_error_l2(a: &WeightedHistogram, b: &WeightedHistogram) -> Result<f64> {
    if a.len() != b.len() {
        return Err(TrackError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.weights()
        .iter()
        .zip(b.weights())
        .map(|(x, y)| (x - y) * (x - y))
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredModel {
    pub model: WeightedHistogram,
    pub frame: usize,
}

/// Outcome of [`TemplateStore::maybe_replace`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplaceOutcome {
    pub replaced: bool,
    /// Similarity of the previous key model to the initial model.
    pub rho_old: f64,
    /// Similarity of the selected candidate to the initial model.
    pub rho_candidate: f64,
    pub theta: f64,
}

#[derive(Debug, Clone)]
pub struct TemplateStore {
    key: WeightedHistogram,
    initial: WeightedHistogram,
    stored: VecDeque<StoredModel>,
    d: usize,
    theta: f64,
    config: TemplateConfig,
}

impl TemplateStore {
    pub fn new(initial: WeightedHistogram, config: TemplateConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            key: initial.clone(),
            initial,
            stored: VecDeque::with_capacity(config.d_limit),
            d: 0,
            theta: config.theta0,
            config,
        })
    }

    /// The active target model.
    pub fn key_model(&self) -> &WeightedHistogram {
        &self.key
    }

    pub fn initial_model(&self) -> &WeightedHistogram {
        &self.initial
    }

    pub fn stored(&self) -> impl Iterator<Item = &StoredModel> {
        self.stored.iter()
    }

    pub fn stored_len(&self) -> usize {
        self.stored.len()
    }

    /// Number of recorded change events since the last evaluation.
    pub fn change_count(&self) -> usize {
        self.d
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn config(&self) -> &TemplateConfig {
        &self.config
    }

    pub fn is_due(&self) -> bool {
        self.d >= self.config.d_limit
    }

    /// Stores a model captured at a bandwidth-change event and counts the event.
    pub fn record_candidate(&mut self, model: WeightedHistogram, frame: usize) {
        if self.stored.len() == self.config.d_limit {
            self.stored.pop_front();
        }
        self.stored.push_back(StoredModel { model, frame });
        self.d += 1;
    }

    /// Picks the stored model most similar to the key model and promotes it
    /// when its similarity to the initial model is at or below `theta`; the
    /// threshold then moves by the drop in similarity to the initial model.
    /// Clears the store and resets the event count either way.
    pub fn maybe_replace(&mut self) -> Result<ReplaceOutcome> {
        if self.stored.is_empty() {
            return Err(TrackError::EmptyStore);
        }
        let rho_old = bhattacharyya(&self.key, &self.initial)?;
        let mut best: Option<(f64, usize)> = None;
        for (i, s) in self.stored.iter().enumerate() {
            let rho = bhattacharyya(&s.model, &self.key)?;
            if best.is_none_or(|(b, _)| rho > b) {
                best = Some((rho, i));
            }
        }
        let (_, idx) = best.expect("store is non-empty");
        let rho_candidate = bhattacharyya(&self.stored[idx].model, &self.initial)?;
        let replaced = rho_candidate <= self.theta;
        if replaced {
            let chosen = self.stored.remove(idx).expect("index in range");
            self.key = chosen.model;
            self.theta = (self.theta - (rho_old - rho_candidate))
                .clamp(self.config.theta_min, self.config.theta_max);
        }
        self.stored.clear();
        self.d = 0;
        Ok(ReplaceOutcome {
            replaced,
            rho_old,
            rho_candidate,
            theta: self.theta,
        })
    }
}
