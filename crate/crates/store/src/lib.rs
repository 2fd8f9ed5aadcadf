//! Persistence for exams, submissions and instructor reviews.
//!
//! A store is a directory holding one UTF-8 JSON-lines file per collection
//! (`exams.jsonl`, `submissions.jsonl`, `reviews.jsonl`). Every line is a
//! self-describing record with `schema_version` and `record_type` keys. Files
//! are append-only: a changed exam or a regraded submission is written again in
//! full and the last record for an id wins. The whole store is replayed into
//! memory on open.
//!
//! Writes are serialized behind one lock and are visible to readers only after
//! the line has been flushed to disk, so readers never see a torn record. A
//! partial trailing line left by a crash is cut off when the store is reopened.

mod error;
mod model;

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, MutexGuard, PoisonError, RwLock, RwLockReadGuard, RwLockWriteGuard};

use chrono::Utc;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tashih_core::{Classification, GradingPolicy, StemmerConfig};

pub use error::StoreError;
pub use model::{Exam, Question, ReviewDecision, Submission};

pub const SCHEMA_VERSION: u32 = 1;

const EXAMS_FILE: &str = "exams.jsonl";
const SUBMISSIONS_FILE: &str = "submissions.jsonl";
const REVIEWS_FILE: &str = "reviews.jsonl";

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema_version: u32,
    record_type: &'static str,
    #[serde(flatten)]
    record: &'a T,
}

#[derive(Deserialize)]
struct Header {
    schema_version: u32,
    record_type: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ReviewRecord {
    submission_id: String,
    #[serde(flatten)]
    decision: ReviewDecision,
}

/// What a regrade did to one submission.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegradeOutcome {
    pub submission_id: String,
    pub previous_mark: f64,
    pub previous_classification: Classification,
    pub mark_sum: f64,
    pub classification: Classification,
    pub grade_version: u32,
    /// False when the stored grade was already current and nothing was written.
    pub rewritten: bool,
}

#[derive(Default)]
struct State {
    exams: HashMap<String, Exam>,
    exam_order: Vec<String>,
    submissions: HashMap<String, Submission>,
    /// Submission ids in first-write order.
    submission_order: Vec<String>,
}

impl State {
    fn put_exam(&mut self, exam: Exam) {
        if !self.exams.contains_key(&exam.exam_id) {
            self.exam_order.push(exam.exam_id.clone());
        }
        self.exams.insert(exam.exam_id.clone(), exam);
    }

    fn put_submission(&mut self, submission: Submission) {
        if !self.submissions.contains_key(&submission.submission_id) {
            self.submission_order.push(submission.submission_id.clone());
        }
        self.submissions
            .insert(submission.submission_id.clone(), submission);
    }

    fn ordered_submissions(&self) -> impl Iterator<Item = &Submission> {
        self.submission_order
            .iter()
            .filter_map(|id| self.submissions.get(id))
    }
}

struct Files {
    exams: File,
    submissions: File,
    reviews: File,
}

pub struct ExamStore {
    dir: PathBuf,
    state: RwLock<State>,
    files: Mutex<Files>,
}

impl std::fmt::Debug for ExamStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExamStore").field("dir", &self.dir).finish()
    }
}

fn append<T: Serialize>(file: &mut File, record_type: &'static str, record: &T) -> Result<(), StoreError> {
    let mut line = serde_json::to_string(&Envelope {
        schema_version: SCHEMA_VERSION,
        record_type,
        record,
    })?;
    line.push('\n');
    file.write_all(line.as_bytes())?;
    file.sync_data()?;
    Ok(())
}

/// Reads every complete record of a collection, truncating a torn final line.
fn replay<T: DeserializeOwned>(path: &Path, record_type: &str) -> Result<Vec<T>, StoreError> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut records = Vec::new();
    let mut offset = 0;
    let mut line_no = 0;
    while offset < bytes.len() {
        line_no += 1;
        let (line, next, complete) = match bytes[offset..].iter().position(|&b| b == b'\n') {
            Some(end) => (&bytes[offset..offset + end], offset + end + 1, true),
            None => (&bytes[offset..], bytes.len(), false),
        };
        let corrupt = |message: String| StoreError::Corrupt {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let parsed = std::str::from_utf8(line)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_record::<T>(text, record_type));
        match parsed {
            Ok(record) => {
                records.extend(record);
                if !complete {
                    // Edited by hand, most likely; terminate it before appending more.
                    OpenOptions::new().append(true).open(path)?.write_all(b"\n")?;
                }
            }
            Err(_) if !complete => {
                // A crash mid-append; drop the fragment so later appends start clean.
                OpenOptions::new().write(true).open(path)?.set_len(offset as u64)?;
                break;
            }
            Err(message) => return Err(corrupt(message)),
        }
        offset = next;
    }
    Ok(records)
}

fn parse_record<T: DeserializeOwned>(text: &str, record_type: &str) -> Result<Option<T>, String> {
    if text.trim().is_empty() {
        return Ok(None);
    }
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let header: Header = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
    if header.schema_version > SCHEMA_VERSION {
        return Err(format!("unsupported schema_version {}", header.schema_version));
    }
    if header.record_type != record_type {
        return Err(format!(
            "expected record_type `{record_type}`, found `{}`",
            header.record_type
        ));
    }
    serde_json::from_value(value).map(Some).map_err(|e| e.to_string())
}

fn open_append(path: &Path) -> Result<File, StoreError> {
    Ok(OpenOptions::new().create(true).append(true).open(path)?)
}

impl ExamStore {
    /// Opens the store in `dir`, creating the directory if needed.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let mut state = State::default();
        for exam in replay::<Exam>(&dir.join(EXAMS_FILE), "exam")? {
            state.put_exam(exam);
        }
        for submission in replay::<Submission>(&dir.join(SUBMISSIONS_FILE), "submission")? {
            state.put_submission(submission);
        }
        for review in replay::<ReviewRecord>(&dir.join(REVIEWS_FILE), "review")? {
            if let Some(s) = state.submissions.get_mut(&review.submission_id) {
                s.review = Some(review.decision);
            }
        }
        let files = Files {
            exams: open_append(&dir.join(EXAMS_FILE))?,
            submissions: open_append(&dir.join(SUBMISSIONS_FILE))?,
            reviews: open_append(&dir.join(REVIEWS_FILE))?,
        };
        Ok(Self {
            dir,
            state: RwLock::new(state),
            files: Mutex::new(files),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn read(&self) -> RwLockReadGuard<'_, State> {
        self.state.read().unwrap_or_else(PoisonError::into_inner)
    }

    fn write_state(&self) -> RwLockWriteGuard<'_, State> {
        self.state.write().unwrap_or_else(PoisonError::into_inner)
    }

    fn writer(&self) -> MutexGuard<'_, Files> {
        self.files.lock().unwrap_or_else(PoisonError::into_inner)
    }

    /// Validates and persists a new exam, returning its id.
    pub fn save_exam(&self, mut exam: Exam) -> Result<String, StoreError> {
        exam.prepare()?;
        exam.policy_version = exam.policy_version.max(1);
        let mut files = self.writer();
        if self.read().exams.contains_key(&exam.exam_id) {
            return Err(StoreError::Conflict(format!("exam `{}` already exists", exam.exam_id)));
        }
        append(&mut files.exams, "exam", &exam)?;
        let id = exam.exam_id.clone();
        self.write_state().put_exam(exam);
        Ok(id)
    }

    pub fn load_exam(&self, exam_id: &str) -> Result<Exam, StoreError> {
        self.read()
            .exams
            .get(exam_id)
            .cloned()
            .ok_or_else(|| StoreError::not_found("exam", exam_id))
    }

    pub fn list_exams(&self) -> Vec<Exam> {
        let state = self.read();
        state
            .exam_order
            .iter()
            .filter_map(|id| state.exams.get(id).cloned())
            .collect()
    }

    /// Replaces an exam's thresholds, stemmer lists and reveal flag, bumping its
    /// policy version. Existing grades are left alone; see [`ExamStore::regrade`].
    pub fn update_policy(
        &self,
        exam_id: &str,
        policy: GradingPolicy,
        config: StemmerConfig,
        reveal_marks: Option<bool>,
    ) -> Result<Exam, StoreError> {
        let mut files = self.writer();
        let mut exam = self.load_exam(exam_id)?;
        exam.policy = policy;
        exam.config = config;
        if let Some(reveal) = reveal_marks {
            exam.reveal_marks = reveal;
        }
        exam.policy_version += 1;
        exam.validate()?;
        append(&mut files.exams, "exam", &exam)?;
        self.write_state().put_exam(exam.clone());
        Ok(exam)
    }

    /// Persists a graded submission.
    ///
    /// Retrying with the same `submission_id` and the same content returns the
    /// id without writing anything. A second, different submission for the same
    /// (exam, question, student) is rejected.
    pub fn record_submission(&self, mut submission: Submission) -> Result<String, StoreError> {
        if submission.submission_id.trim().is_empty() {
            submission.submission_id = uuid::Uuid::new_v4().simple().to_string();
        }
        submission.review = None;
        let mut files = self.writer();
        {
            let state = self.read();
            let exam = state
                .exams
                .get(&submission.exam_id)
                .ok_or_else(|| StoreError::not_found("exam", &submission.exam_id))?;
            if exam.question(&submission.question_id).is_none() {
                return Err(StoreError::not_found("question", &submission.question_id));
            }
            if let Some(existing) = state.submissions.get(&submission.submission_id) {
                let same = existing.exam_id == submission.exam_id
                    && existing.question_id == submission.question_id
                    && existing.student_id == submission.student_id
                    && existing.answer_text == submission.answer_text;
                return if same {
                    Ok(existing.submission_id.clone())
                } else {
                    Err(StoreError::Conflict(format!(
                        "submission id `{}` already used for different content",
                        submission.submission_id
                    )))
                };
            }
            let duplicate = state.submissions.values().any(|s| {
                s.exam_id == submission.exam_id
                    && s.question_id == submission.question_id
                    && s.student_id == submission.student_id
            });
            if duplicate {
                return Err(StoreError::DuplicateAnswer);
            }
        }
        append(&mut files.submissions, "submission", &submission)?;
        let id = submission.submission_id.clone();
        self.write_state().put_submission(submission);
        Ok(id)
    }

    pub fn submission(&self, submission_id: &str) -> Result<Submission, StoreError> {
        self.read()
            .submissions
            .get(submission_id)
            .cloned()
            .ok_or_else(|| StoreError::not_found("submission", submission_id))
    }

    /// All submissions for an exam in the order they were first recorded.
    pub fn submissions(&self, exam_id: &str) -> Vec<Submission> {
        self.read()
            .ordered_submissions()
            .filter(|s| s.exam_id == exam_id)
            .cloned()
            .collect()
    }

    /// Unreviewed submissions classified as needing review, oldest first.
    pub fn pending_reviews(&self, exam_id: &str) -> Vec<Submission> {
        self.pending(Some(exam_id))
    }

    pub fn all_pending_reviews(&self) -> Vec<Submission> {
        self.pending(None)
    }

    fn pending(&self, exam_id: Option<&str>) -> Vec<Submission> {
        let mut pending: Vec<Submission> = self
            .read()
            .ordered_submissions()
            .filter(|s| exam_id.is_none_or(|id| s.exam_id == id))
            .filter(|s| s.review.is_none() && s.grade.classification == Classification::NeedsReview)
            .cloned()
            .collect();
        // Stable: equal timestamps keep recording order.
        pending.sort_by_key(|s| s.submitted_at);
        pending
    }

    pub fn record_review(&self, submission_id: &str, decision: ReviewDecision) -> Result<Submission, StoreError> {
        let mut files = self.writer();
        let mut submission = self.submission(submission_id)?;
        if submission.review.is_some() {
            return Err(StoreError::AlreadyReviewed(submission_id.to_string()));
        }
        let exam = self.load_exam(&submission.exam_id)?;
        let max_points = exam
            .question(&submission.question_id)
            .map_or(0.0, |q| q.max_points);
        if !(decision.final_points.is_finite()
            && decision.final_points >= 0.0
            && decision.final_points <= max_points)
        {
            return Err(StoreError::invalid(
                "invalid_final_points",
                format!("final_points must lie in [0, {max_points}]"),
            ));
        }
        let record = ReviewRecord {
            submission_id: submission_id.to_string(),
            decision,
        };
        append(&mut files.reviews, "review", &record)?;
        submission.review = Some(record.decision);
        self.write_state().put_submission(submission.clone());
        Ok(submission)
    }

    /// Re-grades every submission of an exam under its current policy.
    ///
    /// A submission whose grade or policy version changes is written again with
    /// the next `grade_version`. Review decisions are kept.
    pub fn regrade(&self, exam_id: &str) -> Result<Vec<RegradeOutcome>, StoreError> {
        let mut files = self.writer();
        let exam = self.load_exam(exam_id)?;
        let mut outcomes = Vec::new();
        for mut submission in self.submissions(exam_id) {
            let grade = exam.grade(&submission.question_id, &submission.answer_text)?;
            let previous_mark = submission.grade.mark_sum;
            let previous_classification = submission.grade.classification;
            let rewritten = grade != submission.grade || submission.policy_version != exam.policy_version;
            if rewritten {
                submission.grade = grade;
                submission.grade_version += 1;
                submission.policy_version = exam.policy_version;
                let review = submission.review.take();
                append(&mut files.submissions, "submission", &submission)?;
                submission.review = review;
                self.write_state().put_submission(submission.clone());
            }
            outcomes.push(RegradeOutcome {
                submission_id: submission.submission_id.clone(),
                previous_mark,
                previous_classification,
                mark_sum: submission.grade.mark_sum,
                classification: submission.grade.classification,
                grade_version: submission.grade_version,
                rewritten,
            });
        }
        Ok(outcomes)
    }
}

/// Builds a graded submission for `answer` stamped with the current time.
pub fn grade_submission(
    exam: &Exam,
    question_id: &str,
    student_id: &str,
    answer: &str,
    submission_id: Option<String>,
) -> Result<Submission, StoreError> {
    let grade = exam.grade(question_id, answer)?;
    Ok(Submission {
        submission_id: submission_id.unwrap_or_default(),
        exam_id: exam.exam_id.clone(),
        question_id: question_id.to_string(),
        student_id: student_id.to_string(),
        answer_text: answer.to_string(),
        submitted_at: Utc::now(),
        grade,
        grade_version: 1,
        policy_version: exam.policy_version,
        review: None,
    })
}
