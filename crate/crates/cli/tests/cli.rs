use std::path::Path;
use std::process::{Command, Output};

use tashih_core::{grade, GradingPolicy, StemMode, StemmerConfig};

fn tashih(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tashih")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn grade_prints_the_library_result() {
    let dir = tempfile::tempdir().unwrap();
    let student = write(dir.path(), "student.txt", "\u{feff}يقر بعيني ان سهيل بدا\n");
    let model = write(dir.path(), "model.txt", "يقر بعيني أن سهيل بدا ليا\n");
    let out = tashih(&["grade", "--student", &student, "--model", &model, "--mode", "heavy"]);
    assert!(out.status.success(), "{out:?}");
    let expected = grade(
        "يقر بعيني ان سهيل بدا\n",
        "يقر بعيني أن سهيل بدا ليا\n",
        StemMode::Heavy,
        &StemmerConfig::default(),
        &GradingPolicy::default(),
    )
    .unwrap();
    assert_eq!(stdout(&out), serde_json::to_string_pretty(&expected).unwrap() + "\n");
}

#[test]
fn grade_rejects_empty_model() {
    let dir = tempfile::tempdir().unwrap();
    let student = write(dir.path(), "s.txt", "كتاب");
    let model = write(dir.path(), "m.txt", "في هو 42");
    let out = tashih(&["grade", "--student", &student, "--model", &model, "--mode", "light"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stem_trace_ends_with_the_stem() {
    let out = tashih(&["stem", "--word", "الإيمان", "--mode", "heavy"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().last(), Some("suffix: ايم"), "{text}");
    assert!(text.contains("al: إيمان"), "{text}");
    assert!(text.contains("normalize: ايمان"), "{text}");
}

#[test]
fn stem_marks_stop_words() {
    let out = tashih(&["stem", "--word", "في", "--mode", "light"]);
    assert!(stdout(&out).contains("stop-word: removed"));
}

#[test]
fn distance() {
    assert_eq!(stdout(&tashih(&["distance", "يقر", "يقر"])), "D=0 S=1\n");
    assert_eq!(stdout(&tashih(&["distance", "كتب", "كتاب"])), "D=1 S=0.75\n");
}

#[test]
fn batch_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.jsonl", "");
    let out = tashih(&["batch", "--input", &empty, "--mode", "heavy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let mixed = write(
        dir.path(),
        "mixed.csv",
        "id,student_answer,model_answer\n1,يقر بعيني ان سهيل بدا,يقر بعيني أن سهيل بدا ليا\n2,broken\n",
    );
    let out = tashih(&["batch", "--input", &mixed, "--mode", "heavy"]);
    assert_eq!(out.status.code(), Some(1));
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["mark_sum"], 0.8);
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "c.json", r#"{"policy": {"class_review": 2.0}}"#);
    let out = tashih(&["distance", "a", "b"]);
    assert!(out.status.success());
    let out = tashih(&["stem", "--word", "كتاب", "--mode", "heavy", "--config", &config]);
    assert_eq!(out.status.code(), Some(2));
    let unknown = write(dir.path(), "u.json", r#"{"stemer": {}}"#);
    let out = tashih(&["stem", "--word", "كتاب", "--mode", "heavy", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    let out = tashih(&["stem", "--word", "كتاب", "--mode", "medium"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn regrade_reports_each_submission() {
    let dir = tempfile::tempdir().unwrap();
    let store = tashih_store::ExamStore::open(dir.path()).unwrap();
    let exam: tashih_store::Exam = serde_json::from_value(serde_json::json!({
        "exam_id": "e1",
        "title": "t",
        "mode": "heavy",
        "questions": [{"question_id": "q1", "prompt": "p", "model_answer": "الإيمان لا يوجب العمل", "max_points": 4.0}]
    }))
    .unwrap();
    store.save_exam(exam.clone()).unwrap();
    let submission =
        tashih_store::grade_submission(&exam, "q1", "s1", "دائما الإيمان يوجب العمل", None).unwrap();
    store.record_submission(submission).unwrap();
    drop(store);

    let out = tashih(&["regrade", "--exam", "e1", "--store", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{out:?}");
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["mark_sum"], 0.75);

    let out = tashih(&["regrade", "--exam", "missing", "--store", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
