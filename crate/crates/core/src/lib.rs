//! Automatic grading of free-text Arabic answers.
//!
//! An answer and its model answer are cleaned, tokenized and stemmed (light or
//! heavy), each model stem is given an equal weight, student stems are matched
//! to model stems by Levenshtein similarity, and the credited weights add up to
//! a mark in `[0, 1]` that is then classified.
//!
//! ```
//! use tashih_core::{grade, Classification, GradingPolicy, StemMode, StemmerConfig};
//!
//! let result = grade(
//!     "يقر بعيني ان سهيل بدا",
//!     "يقر بعيني أن سهيل بدا ليا",
//!     StemMode::Heavy,
//!     &StemmerConfig::default(),
//!     &GradingPolicy::default(),
//! )
//! .unwrap();
//! assert_eq!(result.mark_sum, 0.8);
//! assert_eq!(result.classification, Classification::NeedsReview);
//! ```
//!
//! The numeric core is generic over [`Score`] (`f32` or `f64`); the aliases at
//! the crate root fix it to `f64`, with `*F32` variants alongside.

pub mod error;
pub mod scalar;
pub mod scoring;
pub mod similarity;
pub mod stemmer;
pub mod text;

use serde::{Deserialize, Serialize};

pub use error::{ConfigError, GradeError};
pub use scalar::Score;
pub use scoring::{classify, grade, match_words, word_weight, Classification, Tier};
pub use similarity::{edit_distance, similarity};
pub use stemmer::{stem_answer, trace_answer, Stem, StemMode, StemTrace, StemmerConfig};
pub use text::{StopList, Token};

pub type Similarity = similarity::Similarity<f64>;
pub type GradingPolicy = scoring::GradingPolicy<f64>;
pub type WordMatch = scoring::WordMatch<f64>;
pub type GradeResult = scoring::GradeResult<f64>;
pub type GradingConfig = GradingSettings<f64>;

pub type SimilarityF32 = similarity::Similarity<f32>;
pub type GradingPolicyF32 = scoring::GradingPolicy<f32>;
pub type WordMatchF32 = scoring::WordMatch<f32>;
pub type GradeResultF32 = scoring::GradeResult<f32>;

/// Stemmer lists and grading thresholds in one document, as read from a
/// configuration file. Missing sections take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound(deserialize = "T: Score + Deserialize<'de>"))]
pub struct GradingSettings<T> {
    pub stemmer: StemmerConfig,
    pub policy: scoring::GradingPolicy<T>,
}

impl<T: Score> Default for GradingSettings<T> {
    fn default() -> Self {
        Self {
            stemmer: StemmerConfig::default(),
            policy: scoring::GradingPolicy::default(),
        }
    }
}

impl<T: Score> GradingSettings<T> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.stemmer.validate()?;
        self.policy.validate()
    }
}
