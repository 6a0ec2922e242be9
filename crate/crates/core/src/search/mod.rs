//! Desk-scale certification of the maximizer claim: exhaustive enumeration,
//! exchange ascent and uniqueness up to common translations.

mod ascent;
mod exhaustive;
mod space;
mod uniqueness;

pub use ascent::{exchange_ascent, exchange_ascent_with, AscentOutcome};
pub use exhaustive::{exhaustive_max, exhaustive_max_with};
pub use space::SearchSpace;
pub use uniqueness::{uniqueness_check, UniquenessReport};

use crate::grid::GridFunction;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// `FullPairs` when it fits the budget, else `Knapsack`.
    #[default]
    Auto,
    /// Every `(f, g)` pair.
    FullPairs,
    /// Every `f`, with an exact knapsack maximization over `g`.
    Knapsack,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions<T> {
    /// Maximum number of evaluations.
    pub budget: u128,
    pub strategy: Strategy,
    /// Relative tie band.
    pub tie: T,
    /// Transfer sizes `k/2, k/4, ...` used by the ascent.
    pub schedule_depth: usize,
}

impl<T: Scalar> Default for SearchOptions<T> {
    fn default() -> Self {
        Self {
            budget: 10_000_000,
            strategy: Strategy::Auto,
            tie: lit(1e-12),
            schedule_depth: 4,
        }
    }
}

pub type Pair<T> = (GridFunction<T>, GridFunction<T>);

#[derive(Debug, Clone, PartialEq)]
pub struct MaximizerCertificate<T> {
    pub best_value: T,
    /// Pairs within the tie band of `best_value`.
    pub argmax_list: Vec<Pair<T>>,
    pub ball_pair: Pair<T>,
    pub ball_value: T,
    pub ball_is_max: bool,
    /// Indices into `argmax_list`, grouped by common in-box translation.
    pub translation_classes: Vec<Vec<usize>>,
    /// Largest value outside the tie band, if any pair lies outside it.
    pub runner_up: Option<T>,
    pub evaluations: u128,
    pub strategy: Strategy,
}

impl<T: Scalar> MaximizerCertificate<T> {
    /// `best_value - runner_up`.
    pub fn margin(&self) -> Option<T> {
        self.runner_up.map(|r| self.best_value - r)
    }
}

/// Lattice shift moving the first nonzero cell of `from` onto that of `to`.
pub(crate) fn support_shift<T: Scalar>(from: &GridFunction<T>, to: &GridFunction<T>) -> Option<[isize; 2]> {
    let first = |u: &GridFunction<T>| u.values().iter().position(|&v| v != T::zero());
    let (a, b) = (first(from)?, first(to)?);
    let d = from.domain();
    let (p, q) = (d.multi_index(a), d.multi_index(b));
    Some([
        q[0] as isize - p[0] as isize,
        q[1] as isize - p[1] as isize,
    ])
}

/// Shift of the pair that puts its joint support against the low corner.
fn corner_shift<T: Scalar>(pair: &Pair<T>) -> [isize; 2] {
    let d = pair.0.domain();
    let mut low = [usize::MAX; 2];
    for u in [&pair.0, &pair.1] {
        for (cell, &v) in u.values().iter().enumerate() {
            if v != T::zero() {
                let idx = d.multi_index(cell);
                low = [low[0].min(idx[0]), low[1].min(idx[1])];
            }
        }
    }
    if low[0] == usize::MAX {
        return [0, 0];
    }
    [-(low[0] as isize), -(low[1] as isize)]
}

pub(crate) fn canonical_classes<T: Scalar>(pairs: &[Pair<T>]) -> Vec<Vec<usize>> {
    let mut keys: Vec<Pair<T>> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        let s = corner_shift(pair);
        let key = (
            pair.0.shifted(s).expect("corner shift stays in the box"),
            pair.1.shifted(s).expect("corner shift stays in the box"),
        );
        match keys.iter().position(|k| *k == key) {
            Some(c) => classes[c].push(i),
            None => {
                keys.push(key);
                classes.push(vec![i]);
            }
        }
    }
    classes
}
