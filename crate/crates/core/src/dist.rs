//! Finite probability distributions with exact rational weights.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::{one, Ratio};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dist<T: Ord> {
    weights: BTreeMap<T, Ratio>,
}

impl<T: Ord + Clone> Dist<T> {
    /// Checks that weights are nonnegative and sum to exactly one. Repeated
    /// outcomes are merged and zero weights dropped.
    pub fn new(entries: impl IntoIterator<Item = (T, Ratio)>) -> Result<Self> {
        let mut builder = DistBuilder::new();
        for (outcome, w) in entries {
            if w.is_negative() {
                return Err(Error::InvalidDist("negative weight".into()));
            }
            builder.add(outcome, w);
        }
        builder.finish()
    }

    pub fn point(outcome: T) -> Self {
        Dist { weights: BTreeMap::from([(outcome, one())]) }
    }

    pub fn uniform(outcomes: impl IntoIterator<Item = T>) -> Result<Self> {
        let items: Vec<T> = outcomes.into_iter().collect();
        if items.is_empty() {
            return Err(Error::InvalidDist("uniform over an empty set".into()));
        }
        let w = Ratio::new(1.into(), (items.len() as u64).into());
        Self::new(items.into_iter().map(|x| (x, w.clone())))
    }

    pub fn weight(&self, outcome: &T) -> Ratio {
        self.weights.get(outcome).cloned().unwrap_or_else(Ratio::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Ratio)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.weights.keys()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> Ratio {
        self.weights.values().fold(Ratio::zero(), |acc, w| acc + w)
    }

    /// Pushes the distribution forward through `f`, merging collisions.
    pub fn project<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> Dist<U> {
        let mut b = DistBuilder::new();
        for (x, w) in &self.weights {
            b.add(f(x), w.clone());
        }
        Dist { weights: b.weights }
    }

    /// Probability of the event `pred`.
    pub fn prob(&self, pred: impl Fn(&T) -> bool) -> Ratio {
        self.weights
            .iter()
            .filter(|(x, _)| pred(x))
            .fold(Ratio::zero(), |acc, (_, w)| acc + w)
    }

    /// The distribution conditioned on `pred`; `None` if the event is null.
    pub fn condition(&self, pred: impl Fn(&T) -> bool) -> Option<Dist<T>> {
        let mass = self.prob(&pred);
        if mass.is_zero() {
            return None;
        }
        let weights = self
            .weights
            .iter()
            .filter(|(x, _)| pred(x))
            .map(|(x, w)| (x.clone(), w / &mass))
            .collect();
        Some(Dist { weights })
    }
}

/// Accumulates unnormalized mass; [`DistBuilder::finish`] checks the total.
#[derive(Debug, Clone)]
pub struct DistBuilder<T: Ord> {
    weights: BTreeMap<T, Ratio>,
}

impl<T: Ord + Clone> Default for DistBuilder<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Ord + Clone> DistBuilder<T> {
    pub fn new() -> Self {
        DistBuilder { weights: BTreeMap::new() }
    }

    pub fn add(&mut self, outcome: T, w: Ratio) {
        if w.is_zero() {
            return;
        }
        let slot = self.weights.entry(outcome).or_insert_with(Ratio::zero);
        *slot += w;
    }

    pub fn finish(self) -> Result<Dist<T>> {
        let total = self.weights.values().fold(Ratio::zero(), |acc, w| acc + w);
        if total != one() {
            return Err(Error::InvalidDist(format!("weights sum to {total}, not 1")));
        }
        Ok(Dist { weights: self.weights })
    }
}

/// Total-variation distance, 1/2 * sum |p - q| over the union of supports.
pub fn total_variation<T: Ord + Clone>(p: &Dist<T>, q: &Dist<T>) -> Ratio {
    let mut sum = Ratio::zero();
    for (x, w) in p.iter() {
        sum += (w - q.weight(x)).abs();
    }
    for (x, w) in q.iter() {
        if !p.weights.contains_key(x) {
            sum += w;
        }
    }
    sum / Ratio::from_integer(2.into())
}
