use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use tashih_core::{grade, GradeError, GradeResult, GradingPolicy, StemMode, StemmerConfig};

use crate::error::StoreError;

fn default_true() -> bool {
    true
}

fn default_version() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exam {
    #[serde(default)]
    pub exam_id: String,
    pub title: String,
    pub mode: StemMode,
    #[serde(default)]
    pub policy: GradingPolicy,
    #[serde(default)]
    pub config: StemmerConfig,
    pub questions: Vec<Question>,
    /// When false, students get no points or classification back until an
    /// instructor has reviewed the answer.
    #[serde(default = "default_true")]
    pub reveal_marks: bool,
    /// Bumped on every policy or stemmer-list edit.
    #[serde(default = "default_version")]
    pub policy_version: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Question {
    #[serde(default)]
    pub question_id: String,
    pub prompt: String,
    pub model_answer: String,
    pub max_points: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewDecision {
    pub reviewer_id: String,
    pub final_points: f64,
    #[serde(default)]
    pub note: String,
    pub decided_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Submission {
    #[serde(default)]
    pub submission_id: String,
    pub exam_id: String,
    pub question_id: String,
    pub student_id: String,
    /// Verbatim, never normalized at rest.
    pub answer_text: String,
    pub submitted_at: DateTime<Utc>,
    pub grade: GradeResult,
    /// Starts at 1; each regrade that changes anything writes the next one.
    #[serde(default = "default_version")]
    pub grade_version: u32,
    /// Exam policy version the grade was computed under.
    #[serde(default = "default_version")]
    pub policy_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub review: Option<ReviewDecision>,
}

impl Exam {
    pub fn question(&self, question_id: &str) -> Option<&Question> {
        self.questions.iter().find(|q| q.question_id == question_id)
    }

    pub fn question_position(&self, question_id: &str) -> Option<usize> {
        self.questions.iter().position(|q| q.question_id == question_id)
    }

    /// Grades `answer` against the model answer of `question_id` with this
    /// exam's mode, lists and thresholds.
    pub fn grade(&self, question_id: &str, answer: &str) -> Result<GradeResult, StoreError> {
        let question = self
            .question(question_id)
            .ok_or_else(|| StoreError::not_found("question", question_id))?;
        Ok(grade(answer, &question.model_answer, self.mode, &self.config, &self.policy)?)
    }

    /// Fills in missing ids and checks every invariant, including that each
    /// model answer stems to at least one word.
    pub(crate) fn prepare(&mut self) -> Result<(), StoreError> {
        if self.exam_id.trim().is_empty() {
            self.exam_id = uuid::Uuid::new_v4().simple().to_string();
        }
        for (i, q) in self.questions.iter_mut().enumerate() {
            if q.question_id.trim().is_empty() {
                q.question_id = format!("q{}", i + 1);
            }
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), StoreError> {
        if self.questions.is_empty() {
            return Err(StoreError::invalid("no_questions", "an exam needs at least one question"));
        }
        let mut seen = std::collections::HashSet::new();
        for q in &self.questions {
            if !seen.insert(q.question_id.as_str()) {
                return Err(StoreError::invalid(
                    "duplicate_question_id",
                    format!("question id `{}` used twice", q.question_id),
                ));
            }
            if !(q.max_points.is_finite() && q.max_points > 0.0) {
                return Err(StoreError::invalid(
                    "invalid_max_points",
                    format!("question `{}` needs positive max_points", q.question_id),
                ));
            }
        }
        self.config.validate().map_err(GradeError::from)?;
        self.policy.validate().map_err(GradeError::from)?;
        for q in &self.questions {
            match grade::<f64>(&q.model_answer, &q.model_answer, self.mode, &self.config, &self.policy) {
                Ok(_) => {}
                Err(GradeError::EmptyModelAnswer) => {
                    return Err(StoreError::invalid(
                        "empty_model_answer",
                        format!("model answer of question `{}` reduces to no stems", q.question_id),
                    ))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(())
    }
}

impl Submission {
    /// Points awarded: the reviewer's decision if there is one, otherwise the
    /// automatic mark scaled to the question.
    pub fn points(&self, max_points: f64) -> f64 {
        match &self.review {
            Some(r) => r.final_points,
            None => self.grade.mark_sum * max_points,
        }
    }
}
