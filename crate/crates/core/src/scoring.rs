//! Word weighting, student-to-model matching, credit accumulation and final
//! classification.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, GradeError};
use crate::scalar::Score;
use crate::similarity::{similarity, Similarity};
use crate::stemmer::{stem_answer, Stem, StemMode, StemmerConfig};

/// Instructor-editable thresholds.
///
/// `full_credit_threshold`, `partial_credit_threshold` and
/// `partial_credit_factor` act on single words; the `class_*` bands act on the
/// accumulated mark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Score + Deserialize<'de>"))]
pub struct GradingPolicy<T> {
    pub full_credit_threshold: T,
    pub partial_credit_threshold: T,
    pub partial_credit_factor: T,
    pub class_full: T,
    pub class_correct: T,
    pub class_review: T,
}

impl<T: Score> Default for GradingPolicy<T> {
    fn default() -> Self {
        Self {
            full_credit_threshold: T::lit(0.96),
            partial_credit_threshold: T::lit(0.80),
            partial_credit_factor: T::lit(0.5),
            class_full: T::one(),
            class_correct: T::lit(0.96),
            class_review: T::lit(0.75),
        }
    }
}

impl<T: Score> GradingPolicy<T> {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fields = [
            self.full_credit_threshold,
            self.partial_credit_threshold,
            self.partial_credit_factor,
            self.class_full,
            self.class_correct,
            self.class_review,
        ];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(ConfigError::Policy("all thresholds must be finite".into()));
        }
        let (zero, one) = (T::zero(), T::one());
        if !(zero < self.partial_credit_threshold
            && self.partial_credit_threshold < self.full_credit_threshold
            && self.full_credit_threshold <= one)
        {
            return Err(ConfigError::Policy(
                "need 0 < partial_credit_threshold < full_credit_threshold <= 1".into(),
            ));
        }
        if !(zero <= self.partial_credit_factor && self.partial_credit_factor <= one) {
            return Err(ConfigError::Policy("need 0 <= partial_credit_factor <= 1".into()));
        }
        if !(zero < self.class_review
            && self.class_review < self.class_correct
            && self.class_correct <= self.class_full
            && self.class_full <= one)
        {
            return Err(ConfigError::Policy(
                "need 0 < class_review < class_correct <= class_full <= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn tier(&self, similarity: Similarity<T>) -> Tier {
        let s = similarity.value();
        let tol = T::tolerance();
        if s == T::one() {
            Tier::Exact
        } else if s + tol >= self.full_credit_threshold {
            Tier::NearExact
        } else if s + tol >= self.partial_credit_threshold {
            Tier::Partial
        } else {
            Tier::None
        }
    }

    pub fn credit(&self, tier: Tier, weight: T) -> T {
        match tier {
            Tier::Exact | Tier::NearExact => weight,
            Tier::Partial => weight * self.partial_credit_factor,
            Tier::None | Tier::Unmatched => T::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    /// Identical stems.
    Exact,
    /// At or above the full-credit threshold but not identical.
    NearExact,
    Partial,
    /// Below the partial-credit threshold.
    None,
    /// No student word was bound to this model word.
    Unmatched,
}

/// Final verdict on a mark, ordered from worst to best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Wrong,
    NeedsReview,
    Correct,
    FullMark,
}

/// The outcome for one model-answer stem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Score + Deserialize<'de>"))]
pub struct WordMatch<T> {
    pub correct_stem: Stem,
    pub student_stem: Option<Stem>,
    pub similarity: Similarity<T>,
    pub tier: Tier,
    pub credit: T,
}

/// A complete grade with its per-word audit trail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Score + Deserialize<'de>"))]
pub struct GradeResult<T> {
    pub mode: StemMode,
    pub word_weight: T,
    pub mark_sum: T,
    pub classification: Classification,
    /// One entry per model-answer stem, in model order.
    pub matches: Vec<WordMatch<T>>,
    /// Student stems that were not bound to any model stem.
    pub dropped_student_stems: Vec<Stem>,
}

/// Weight of a single model-answer stem.
pub fn word_weight<T: Score>(n_correct_stems: usize) -> Result<T, GradeError> {
    if n_correct_stems == 0 {
        return Err(GradeError::EmptyModelAnswer);
    }
    Ok(T::ratio(1, n_correct_stems))
}

struct Alignment<T> {
    matches: Vec<WordMatch<T>>,
    dropped: Vec<Stem>,
}

/// Greedy one-to-one assignment of student stems to model stems.
///
/// Candidate pairs are those that would earn credit (similarity at or above the
/// partial-credit threshold). The best remaining pair is bound first; ties go to
/// the earlier model word, then the earlier student word.
fn align<T: Score>(student: &[Stem], correct: &[Stem], policy: &GradingPolicy<T>) -> Alignment<T> {
    let weight = if correct.is_empty() {
        T::zero()
    } else {
        T::ratio(1, correct.len())
    };

    let mut candidates: Vec<(Similarity<T>, usize, usize)> = Vec::new();
    for (ci, c) in correct.iter().enumerate() {
        for (si, s) in student.iter().enumerate() {
            let sim = similarity::<T>(&s.content, &c.content);
            if policy.tier(sim) != Tier::None {
                candidates.push((sim, ci, si));
            }
        }
    }
    let tie_key = |ci: usize, si: usize| {
        (correct[ci].origin_index(), ci, student[si].origin_index(), si)
    };
    candidates.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| tie_key(a.1, a.2).cmp(&tie_key(b.1, b.2)))
    });

    let mut bound_correct: Vec<Option<(usize, Similarity<T>)>> = vec![None; correct.len()];
    let mut student_used = vec![false; student.len()];
    for (sim, ci, si) in candidates {
        if bound_correct[ci].is_none() && !student_used[si] {
            bound_correct[ci] = Some((si, sim));
            student_used[si] = true;
        }
    }

    let matches = correct
        .iter()
        .zip(bound_correct)
        .map(|(c, bound)| match bound {
            Some((si, sim)) => {
                let tier = policy.tier(sim);
                WordMatch {
                    correct_stem: c.clone(),
                    student_stem: Some(student[si].clone()),
                    similarity: sim,
                    tier,
                    credit: policy.credit(tier, weight),
                }
            }
            None => WordMatch {
                correct_stem: c.clone(),
                student_stem: None,
                similarity: Similarity::zero(),
                tier: Tier::Unmatched,
                credit: T::zero(),
            },
        })
        .collect();
    let dropped = student
        .iter()
        .zip(student_used)
        .filter(|(_, used)| !used)
        .map(|(s, _)| s.clone())
        .collect();
    Alignment { matches, dropped }
}

/// Produces exactly one [`WordMatch`] per model-answer stem.
pub fn match_words<T: Score>(
    student: &[Stem],
    correct: &[Stem],
    policy: &GradingPolicy<T>,
) -> Vec<WordMatch<T>> {
    align(student, correct, policy).matches
}

pub fn classify<T: Score>(mark_sum: T, policy: &GradingPolicy<T>) -> Classification {
    let m = mark_sum + T::tolerance();
    if m >= policy.class_full {
        Classification::FullMark
    } else if m >= policy.class_correct {
        Classification::Correct
    } else if m >= policy.class_review {
        Classification::NeedsReview
    } else {
        Classification::Wrong
    }
}

/// Sum of credits, computed as `(full + factor * partial) / n` so that whole
/// answers land exactly on 1 and simple fractions on their decimal value.
fn mark_sum<T: Score>(matches: &[WordMatch<T>], policy: &GradingPolicy<T>) -> T {
    let full = matches
        .iter()
        .filter(|m| matches!(m.tier, Tier::Exact | Tier::NearExact))
        .count();
    let partial = matches.iter().filter(|m| m.tier == Tier::Partial).count();
    let n = T::from_usize(matches.len()).expect("count fits the float type");
    let full = T::from_usize(full).expect("count fits the float type");
    let partial = T::from_usize(partial).expect("count fits the float type");
    (full + policy.partial_credit_factor * partial) / n
}

/// Grades a student answer against a model answer.
pub fn grade<T: Score>(
    student_answer: &str,
    model_answer: &str,
    mode: StemMode,
    config: &StemmerConfig,
    policy: &GradingPolicy<T>,
) -> Result<GradeResult<T>, GradeError> {
    config.validate()?;
    policy.validate()?;
    let correct = stem_answer(model_answer, mode, config);
    let word_weight = word_weight::<T>(correct.len())?;
    let student = stem_answer(student_answer, mode, config);
    let Alignment { matches, dropped } = align(&student, &correct, policy);
    let mark_sum = mark_sum(&matches, policy);
    Ok(GradeResult {
        mode,
        word_weight,
        mark_sum,
        classification: classify(mark_sum, policy),
        matches,
        dropped_student_stems: dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Token;

    fn stems(words: &[&str]) -> Vec<Stem> {
        words
            .iter()
            .enumerate()
            .map(|(i, w)| Stem {
                content: w.to_string(),
                source: Token::new(*w, i),
            })
            .collect()
    }

    fn defaults() -> (StemmerConfig, GradingPolicy<f64>) {
        (StemmerConfig::default(), GradingPolicy::default())
    }

    #[test]
    fn weights() {
        assert_eq!(word_weight::<f64>(5).unwrap(), 0.2);
        assert_eq!(word_weight::<f64>(4).unwrap(), 0.25);
        assert_eq!(word_weight::<f64>(1).unwrap(), 1.0);
        assert_eq!(word_weight::<f64>(0), Err(GradeError::EmptyModelAnswer));
    }

    #[test]
    fn example_one_matching() {
        let p = GradingPolicy::<f64>::default();
        let m = match_words(
            &stems(&["يقر", "عين", "هيل", "بدا"]),
            &stems(&["يقر", "عين", "هيل", "بدا", "ليا"]),
            &p,
        );
        let tiers: Vec<_> = m.iter().map(|m| m.tier).collect();
        assert_eq!(
            tiers,
            [Tier::Exact, Tier::Exact, Tier::Exact, Tier::Exact, Tier::Unmatched]
        );
        assert!(m[..4].iter().all(|m| m.credit == 0.2));
        assert_eq!(m[4].credit, 0.0);
    }

    #[test]
    fn example_two_matching_drops_extras() {
        let p = GradingPolicy::<f64>::default();
        let student = stems(&["دائما", "ايم", "يوجب", "عمل"]);
        let correct = stems(&["ايم", "لا", "يوجب", "عمل"]);
        let a = align(&student, &correct, &p);
        let tiers: Vec<_> = a.matches.iter().map(|m| m.tier).collect();
        assert_eq!(tiers, [Tier::Exact, Tier::Unmatched, Tier::Exact, Tier::Exact]);
        assert_eq!(a.dropped.len(), 1);
        assert_eq!(a.dropped[0].content, "دائما");
    }

    #[test]
    fn empty_student() {
        let p = GradingPolicy::<f64>::default();
        let m = match_words(&[], &stems(&["كتب"]), &p);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].tier, Tier::Unmatched);
        assert_eq!(m[0].credit, 0.0);
    }

    #[test]
    fn partial_and_near_exact_tiers() {
        let p = GradingPolicy::<f64>::default();
        // 1 edit in 5 letters: similarity exactly 0.8.
        let m = match_words(&stems(&["abcdx"]), &stems(&["abcde"]), &p);
        assert_eq!(m[0].tier, Tier::Partial);
        assert_eq!(m[0].credit, 0.5);
        // 1 edit in 25 letters: similarity exactly 0.96.
        let long = "abcdefghijklmnopqrstuvwxy";
        let near = "abcdefghijklmnopqrstuvwxz";
        let m = match_words(&stems(&[near]), &stems(&[long]), &p);
        assert_eq!(m[0].tier, Tier::NearExact);
        assert_eq!(m[0].credit, 1.0);
        // 1 edit in 4 letters: 0.75, below the partial threshold, so not bound.
        let m = match_words(&stems(&["abcx"]), &stems(&["abcd"]), &p);
        assert_eq!(m[0].tier, Tier::Unmatched);
    }

    #[test]
    fn exact_pairs_bind_before_partial_ones() {
        let p = GradingPolicy::<f64>::default();
        // "abcdx" is a partial candidate for "abcde", but the exact copy wins.
        let m = match_words(&stems(&["abcdx", "abcde"]), &stems(&["abcde"]), &p);
        assert_eq!(m[0].tier, Tier::Exact);
        assert_eq!(m[0].student_stem.as_ref().unwrap().content, "abcde");
    }

    #[test]
    fn ties_prefer_earlier_words() {
        let p = GradingPolicy::<f64>::default();
        let m = match_words(&stems(&["كتب", "كتب"]), &stems(&["كتب"]), &p);
        assert_eq!(m[0].student_stem.as_ref().unwrap().origin_index(), 0);
        let m = match_words(&stems(&["كتب"]), &stems(&["كتب", "كتب"]), &p);
        assert_eq!(m[0].tier, Tier::Exact);
        assert_eq!(m[1].tier, Tier::Unmatched);
    }

    #[test]
    fn classify_bands() {
        let p = GradingPolicy::<f64>::default();
        assert_eq!(classify(0.8, &p), Classification::NeedsReview);
        assert_eq!(classify(0.75, &p), Classification::NeedsReview);
        assert_eq!(classify(0.96, &p), Classification::Correct);
        assert_eq!(classify(1.0, &p), Classification::FullMark);
        assert_eq!(classify(0.7499, &p), Classification::Wrong);
        assert_eq!(classify(0.0, &p), Classification::Wrong);
        assert_eq!(classify(0.99, &p), Classification::Correct);
    }

    #[test]
    fn grade_examples() {
        let (c, p) = defaults();
        let r = grade("يقر بعيني ان سهيل بدا", "يقر بعيني أن سهيل بدا ليا", StemMode::Heavy, &c, &p).unwrap();
        assert_eq!(r.word_weight, 0.2);
        assert_eq!(r.mark_sum, 0.8);
        assert_eq!(r.classification, Classification::NeedsReview);

        let r = grade("دائما الإيمان يوجب العمل", "الإيمان لا يوجب العمل", StemMode::Heavy, &c, &p).unwrap();
        assert_eq!(r.word_weight, 0.25);
        assert_eq!(r.mark_sum, 0.75);
        assert_eq!(r.classification, Classification::NeedsReview);

        let model = "الإيمان لا يوجب العمل";
        let r = grade(model, model, StemMode::Light, &c, &p).unwrap();
        assert_eq!(r.mark_sum, 1.0);
        assert_eq!(r.classification, Classification::FullMark);
    }

    #[test]
    fn grade_in_f32() {
        let c = StemmerConfig::default();
        let p = GradingPolicy::<f32>::default();
        let r = grade("يقر بعيني ان سهيل بدا", "يقر بعيني أن سهيل بدا ليا", StemMode::Heavy, &c, &p).unwrap();
        assert_eq!(r.mark_sum, 0.8f32);
        assert_eq!(r.classification, Classification::NeedsReview);
    }

    #[test]
    fn grade_errors() {
        let (c, p) = defaults();
        assert_eq!(
            grade::<f64>("كتب", "في و 12", StemMode::Heavy, &c, &p).unwrap_err(),
            GradeError::EmptyModelAnswer
        );
        let r = grade("", "كتب الطالب", StemMode::Heavy, &c, &p).unwrap();
        assert_eq!(r.mark_sum, 0.0);
        assert_eq!(r.classification, Classification::Wrong);

        let bad = GradingPolicy { class_review: 0.99, ..p };
        assert!(matches!(
            grade("كتب", "كتب", StemMode::Heavy, &c, &bad),
            Err(GradeError::Config(ConfigError::Policy(_)))
        ));
    }

    #[test]
    fn policy_validation() {
        let p = GradingPolicy::<f64>::default();
        p.validate().unwrap();
        for bad in [
            GradingPolicy { partial_credit_threshold: 0.0, ..p },
            GradingPolicy { partial_credit_threshold: 0.97, ..p },
            GradingPolicy { full_credit_threshold: 1.1, ..p },
            GradingPolicy { partial_credit_factor: 1.5, ..p },
            GradingPolicy { class_correct: 1.0, class_full: 0.99, ..p },
            GradingPolicy { class_review: f64::NAN, ..p },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn policy_document_defaults_missing_fields() {
        let p: GradingPolicy<f64> = serde_json::from_str(r#"{"class_review": 0.5}"#).unwrap();
        assert_eq!(p.class_review, 0.5);
        assert_eq!(p.full_credit_threshold, 0.96);
    }

    #[test]
    fn result_serializes_with_snake_case_tags() {
        let (c, p) = defaults();
        let r = grade("يقر", "يقر ليا", StemMode::Heavy, &c, &p).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["classification"], "wrong");
        assert_eq!(v["mode"], "heavy");
        assert_eq!(v["matches"][0]["tier"], "exact");
        assert_eq!(v["matches"][1]["tier"], "unmatched");
        let back: GradeResult<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
