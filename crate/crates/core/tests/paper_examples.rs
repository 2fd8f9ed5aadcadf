use tashih_core::{grade, Classification, GradingPolicy, StemMode, StemmerConfig, Tier};

const EX1_MODEL: &str = "يقر بعيني أن سهيل بدا ليا";
const EX1_STUDENT: &str = "يقر بعيني ان سهيل بدا";
const EX2_MODEL: &str = "الإيمان لا يوجب العمل";
const EX2_STUDENT: &str = "دائما الإيمان يوجب العمل";

fn run(student: &str, model: &str, mode: StemMode) -> tashih_core::GradeResult {
    grade(student, model, mode, &StemmerConfig::default(), &GradingPolicy::default()).unwrap()
}

#[test]
fn example_one_heavy() {
    let r = run(EX1_STUDENT, EX1_MODEL, StemMode::Heavy);
    assert_eq!(r.word_weight, 0.2);
    assert!((r.mark_sum - 0.8).abs() < 1e-9);
    assert_eq!(r.classification, Classification::NeedsReview);
    let correct: Vec<_> = r.matches.iter().map(|m| m.correct_stem.content.as_str()).collect();
    assert_eq!(correct, ["يقر", "عين", "هيل", "بدا", "ليا"]);
    let unmatched: Vec<_> = r
        .matches
        .iter()
        .filter(|m| m.tier == Tier::Unmatched)
        .map(|m| m.correct_stem.content.as_str())
        .collect();
    assert_eq!(unmatched, ["ليا"]);
    assert_eq!(r.matches.iter().filter(|m| m.tier == Tier::Exact).count(), 4);
}

#[test]
fn example_two_heavy() {
    let r = run(EX2_STUDENT, EX2_MODEL, StemMode::Heavy);
    assert_eq!(r.word_weight, 0.25);
    assert!((r.mark_sum - 0.75).abs() < 1e-9);
    assert_eq!(r.classification, Classification::NeedsReview);
    let la = r.matches.iter().find(|m| m.correct_stem.content == "لا").unwrap();
    assert_eq!(la.tier, Tier::Unmatched);
    assert_eq!(r.dropped_student_stems.len(), 1);
    assert_eq!(r.dropped_student_stems[0].content, "دائما");
}

#[test]
fn light_and_heavy_agree_on_both_examples() {
    for (student, model) in [(EX1_STUDENT, EX1_MODEL), (EX2_STUDENT, EX2_MODEL)] {
        let heavy = run(student, model, StemMode::Heavy);
        let light = run(student, model, StemMode::Light);
        assert_eq!(heavy.mark_sum, light.mark_sum);
        assert_eq!(heavy.classification, light.classification);
    }
}

#[test]
fn diacritized_and_numbered_answers_grade_the_same_in_heavy_mode() {
    let noisy = "يَقِرُّ بِعَيْنِي 1 أنّ سُهَيْل بدا Latin";
    let r = run(noisy, EX1_MODEL, StemMode::Heavy);
    assert_eq!(r.mark_sum, 0.8);
}
