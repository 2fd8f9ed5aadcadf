//! Levenshtein distance and the normalized similarity built on it.

use serde::{Deserialize, Serialize};

use crate::scalar::Score;

/// Unit-cost Levenshtein distance over Unicode scalar values.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    edit_distance_chars(&a, &b)
}

pub fn edit_distance_chars<C: PartialEq>(a: &[C], b: &[C]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitution = prev[j] + usize::from(ca != cb);
            curr[j + 1] = substitution.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// A similarity score in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Similarity<T>(T);

impl<T: Score> Similarity<T> {
    pub fn new(value: T) -> Option<Self> {
        (value >= T::zero() && value <= T::one()).then_some(Self(value))
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn one() -> Self {
        Self(T::one())
    }

    /// `1 - distance / longest`, computed as `(longest - distance) / longest`
    /// so that the result is the correctly rounded ratio.
    pub fn from_distance(distance: usize, longest: usize) -> Self {
        if longest == 0 {
            return Self::one();
        }
        debug_assert!(distance <= longest);
        Self(T::ratio(longest - distance, longest))
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// `S = 1 - D(a, b) / max(|a|, |b|)`, with `S("", "") = 1`.
pub fn similarity<T: Score>(a: &str, b: &str) -> Similarity<T> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    Similarity::from_distance(edit_distance_chars(&a, &b), a.len().max(b.len()))
}
