use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::Json;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use tashih_core::{Classification, GradeResult, GradingPolicy, StemmerConfig};
use tashih_store::{grade_submission, Exam, ReviewDecision, StoreError, Submission};

use crate::error::ApiError;
use crate::AppState;

type ApiResult<T> = Result<T, ApiError>;

fn bearer(headers: &HeaderMap) -> Option<&str> {
    headers
        .get(header::AUTHORIZATION)?
        .to_str()
        .ok()?
        .strip_prefix("Bearer ")
        .map(str::trim)
}

fn require(headers: &HeaderMap, expected: &str) -> ApiResult<()> {
    match bearer(headers) {
        Some(token) if token == expected => Ok(()),
        _ => Err(ApiError::unauthorized()),
    }
}

/// Runs a store call off the async worker threads.
async fn blocking<T, F>(state: &AppState, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&tashih_store::ExamStore) -> Result<T, StoreError> + Send + 'static,
{
    let store = state.store.clone();
    tokio::task::spawn_blocking(move || f(&store))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(ApiError::from)
}

pub async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

#[derive(Serialize)]
pub struct Created {
    exam_id: String,
    question_ids: Vec<String>,
    policy_version: u32,
}

pub async fn create_exam(
    State(state): State<AppState>,
    headers: HeaderMap,
    body: Result<Json<Exam>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Created>)> {
    require(&headers, &state.instructor_token)?;
    let Json(mut exam) = body?;
    exam.policy_version = 1;
    let exam = blocking(&state, move |store| {
        let id = store.save_exam(exam)?;
        store.load_exam(&id)
    })
    .await?;
    Ok((
        StatusCode::CREATED,
        Json(Created {
            exam_id: exam.exam_id,
            question_ids: exam.questions.into_iter().map(|q| q.question_id).collect(),
            policy_version: exam.policy_version,
        }),
    ))
}

/// What a student may see of a question.
#[derive(Serialize)]
pub struct QuestionView {
    exam_id: String,
    number: usize,
    total: usize,
    question_id: String,
    prompt: String,
    max_points: f64,
}

fn question_view(exam: &Exam, index: usize) -> Option<QuestionView> {
    let q = exam.questions.get(index)?;
    Some(QuestionView {
        exam_id: exam.exam_id.clone(),
        number: index + 1,
        total: exam.questions.len(),
        question_id: q.question_id.clone(),
        prompt: q.prompt.clone(),
        max_points: q.max_points,
    })
}

pub async fn get_question(
    State(state): State<AppState>,
    Path((exam_id, number)): Path<(String, usize)>,
) -> ApiResult<Json<QuestionView>> {
    let exam = state.store.load_exam(&exam_id)?;
    number
        .checked_sub(1)
        .and_then(|i| question_view(&exam, i))
        .map(Json)
        .ok_or_else(|| ApiError::not_found(format!("exam `{exam_id}` has no question {number}")))
}

#[derive(Deserialize)]
pub struct OpenSession {
    student_id: String,
    exam_id: String,
}

#[derive(Serialize)]
pub struct SessionOpened {
    token: String,
    student_id: String,
    exam_id: String,
    expires_at: DateTime<Utc>,
    first_question: QuestionView,
}

pub async fn open_session(
    State(state): State<AppState>,
    headers: HeaderMap,
    body: Result<Json<OpenSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionOpened>)> {
    require(&headers, &state.student_token)?;
    let Json(req) = body?;
    if req.student_id.trim().is_empty() {
        return Err(ApiError::bad_request("invalid_student_id", "student_id must not be empty"));
    }
    let exam = state.store.load_exam(&req.exam_id)?;
    let first_question = question_view(&exam, 0).expect("stored exams have questions");
    let session = state.sessions.open(&req.student_id, &exam.exam_id);
    Ok((
        StatusCode::CREATED,
        Json(SessionOpened {
            token: session.token,
            student_id: session.student_id,
            exam_id: session.exam_id,
            expires_at: session.expires_at,
            first_question,
        }),
    ))
}

#[derive(Deserialize)]
pub struct SubmitAnswer {
    question_id: String,
    answer_text: String,
    /// Client-chosen id; retrying with it never creates a second submission.
    #[serde(default)]
    submission_id: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AnswerReceipt {
    pub submission_id: String,
    pub question_id: String,
    /// `mark_sum * max_points`; absent while marks are withheld.
    pub points: Option<f64>,
    pub max_points: f64,
    pub classification: Option<Classification>,
    pub marks_withheld: bool,
    pub next_question_id: Option<String>,
}

fn receipt(exam: &Exam, submission: &Submission) -> AnswerReceipt {
    let position = exam.question_position(&submission.question_id).unwrap_or(0);
    let max_points = exam.questions[position].max_points;
    let visible = exam.reveal_marks || submission.review.is_some();
    AnswerReceipt {
        submission_id: submission.submission_id.clone(),
        question_id: submission.question_id.clone(),
        points: visible.then(|| submission.points(max_points)),
        max_points,
        classification: visible.then_some(submission.grade.classification),
        marks_withheld: !visible,
        next_question_id: exam.questions.get(position + 1).map(|q| q.question_id.clone()),
    }
}

pub async fn submit_answer(
    State(state): State<AppState>,
    Path(token): Path<String>,
    body: Result<Json<SubmitAnswer>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<AnswerReceipt>)> {
    let session = state.sessions.get(&token).ok_or_else(ApiError::invalid_session)?;
    let Json(req) = body?;
    let (status, exam, submission) = blocking(&state, move |store| {
        let exam = store.load_exam(&session.exam_id)?;
        if let Some(id) = req.submission_id.as_deref().filter(|id| !id.is_empty()) {
            if let Ok(existing) = store.submission(id) {
                if existing.student_id == session.student_id
                    && existing.exam_id == session.exam_id
                    && existing.question_id == req.question_id
                    && existing.answer_text == req.answer_text
                {
                    return Ok((StatusCode::OK, exam, existing));
                }
            }
        }
        let submission = grade_submission(
            &exam,
            &req.question_id,
            &session.student_id,
            &req.answer_text,
            req.submission_id,
        )?;
        let id = store.record_submission(submission)?;
        Ok((StatusCode::CREATED, exam, store.submission(&id)?))
    })
    .await?;
    tracing::info!(
        exam_id = %exam.exam_id,
        question_id = %submission.question_id,
        classification = ?submission.grade.classification,
        "graded answer"
    );
    Ok((status, Json(receipt(&exam, &submission))))
}

#[derive(Deserialize)]
pub struct QueueFilter {
    exam_id: Option<String>,
}

#[derive(Serialize)]
pub struct ReviewItem {
    submission_id: String,
    exam_id: String,
    question_id: String,
    student_id: String,
    submitted_at: DateTime<Utc>,
    answer_text: String,
    prompt: String,
    model_answer: String,
    max_points: f64,
    automatic_points: f64,
    grade_version: u32,
    policy_version: u32,
    grade: GradeResult,
}

#[derive(Serialize)]
pub struct ReviewQueue {
    items: Vec<ReviewItem>,
}

pub async fn review_queue(
    State(state): State<AppState>,
    headers: HeaderMap,
    Query(filter): Query<QueueFilter>,
) -> ApiResult<Json<ReviewQueue>> {
    require(&headers, &state.instructor_token)?;
    let pending = match &filter.exam_id {
        Some(id) => {
            state.store.load_exam(id)?;
            state.store.pending_reviews(id)
        }
        None => state.store.all_pending_reviews(),
    };
    let mut items = Vec::with_capacity(pending.len());
    for s in pending {
        let exam = state.store.load_exam(&s.exam_id)?;
        let Some(q) = exam.question(&s.question_id) else {
            continue;
        };
        items.push(ReviewItem {
            automatic_points: s.grade.mark_sum * q.max_points,
            prompt: q.prompt.clone(),
            model_answer: q.model_answer.clone(),
            max_points: q.max_points,
            submission_id: s.submission_id,
            exam_id: s.exam_id,
            question_id: s.question_id,
            student_id: s.student_id,
            submitted_at: s.submitted_at,
            answer_text: s.answer_text,
            grade_version: s.grade_version,
            policy_version: s.policy_version,
            grade: s.grade,
        });
    }
    Ok(Json(ReviewQueue { items }))
}

#[derive(Deserialize)]
pub struct ReviewBody {
    reviewer_id: String,
    final_points: f64,
    #[serde(default)]
    note: String,
}

#[derive(Serialize)]
pub struct ReviewRecorded {
    submission_id: String,
    reviewer_id: String,
    final_points: f64,
    note: String,
    decided_at: DateTime<Utc>,
}

pub async fn record_review(
    State(state): State<AppState>,
    headers: HeaderMap,
    Path(submission_id): Path<String>,
    body: Result<Json<ReviewBody>, JsonRejection>,
) -> ApiResult<Json<ReviewRecorded>> {
    require(&headers, &state.instructor_token)?;
    let Json(body) = body?;
    let decision = ReviewDecision {
        reviewer_id: body.reviewer_id,
        final_points: body.final_points,
        note: body.note,
        decided_at: Utc::now(),
    };
    let id = submission_id.clone();
    let submission = blocking(&state, move |store| store.record_review(&id, decision)).await?;
    let review = submission.review.expect("review just recorded");
    Ok(Json(ReviewRecorded {
        submission_id,
        reviewer_id: review.reviewer_id,
        final_points: review.final_points,
        note: review.note,
        decided_at: review.decided_at,
    }))
}

#[derive(Serialize)]
pub struct PolicyDoc {
    exam_id: String,
    policy_version: u32,
    reveal_marks: bool,
    policy: GradingPolicy,
    config: StemmerConfig,
}

fn policy_doc(exam: Exam) -> PolicyDoc {
    PolicyDoc {
        exam_id: exam.exam_id,
        policy_version: exam.policy_version,
        reveal_marks: exam.reveal_marks,
        policy: exam.policy,
        config: exam.config,
    }
}

pub async fn get_policy(
    State(state): State<AppState>,
    headers: HeaderMap,
    Path(exam_id): Path<String>,
) -> ApiResult<Json<PolicyDoc>> {
    require(&headers, &state.instructor_token)?;
    Ok(Json(policy_doc(state.store.load_exam(&exam_id)?)))
}

/// Omitted sections keep their current values.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyUpdate {
    policy: Option<GradingPolicy>,
    config: Option<StemmerConfig>,
    reveal_marks: Option<bool>,
}

pub async fn put_policy(
    State(state): State<AppState>,
    headers: HeaderMap,
    Path(exam_id): Path<String>,
    body: Result<Json<PolicyUpdate>, JsonRejection>,
) -> ApiResult<Json<PolicyDoc>> {
    require(&headers, &state.instructor_token)?;
    let Json(update) = body?;
    let exam = blocking(&state, move |store| {
        let current = store.load_exam(&exam_id)?;
        store.update_policy(
            &exam_id,
            update.policy.unwrap_or(current.policy),
            update.config.unwrap_or(current.config),
            update.reveal_marks,
        )
    })
    .await?;
    Ok(Json(policy_doc(exam)))
}
