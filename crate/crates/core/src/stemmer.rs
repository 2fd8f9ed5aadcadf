//! Light and heavy affix stripping.
//!
//! Both modes share the cleanup, tokenization, stop-word removal, AL removal
//! and normalization front end. Heavy mode then strips one prefix and one
//! suffix from its own (larger) lists; light mode strips one suffix only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::text::{self, StopList, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StemMode {
    Light,
    Heavy,
}

impl fmt::Display for StemMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StemMode::Light => "light",
            StemMode::Heavy => "heavy",
        })
    }
}

impl FromStr for StemMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "light" => Ok(StemMode::Light),
            "heavy" => Ok(StemMode::Heavy),
            other => Err(ConfigError::UnknownMode(other.to_string())),
        }
    }
}

fn owned(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

pub const DEFAULT_STOP_WORDS: &[&str] = &["في", "و", "ان", "اذا", "هو", "هي", "هما"];

pub const DEFAULT_AL_FORMS: &[&str] = &[
    "بال", "لل", "ال", "فال", "لبال", "وبال", "فبال", "تال", "وال", "كال",
];

pub const DEFAULT_LIGHT_SUFFIXES: &[&str] = &["ها", "ان", "ات", "ون", "ين", "يه", "ية", "ه", "ي", "ة"];

pub const DEFAULT_HEAVY_PREFIXES: &[&str] = &["و", "ف", "ب", "ك", "ل", "س"];

/// Suffixes heavy mode adds on top of the light list.
pub const HEAVY_ONLY_SUFFIXES: &[&str] = &["هما", "كما", "نا", "كم", "هم", "هن", "تم", "وا", "تا", "ت"];

/// Stop words, affix lists and length guards for both stemming modes.
///
/// Affix lists must be ordered longest-first; [`StemmerConfig::sorted`] puts
/// them in that order and deserialization does it automatically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StemmerConfigDoc")]
pub struct StemmerConfig {
    pub stoplist: StopList,
    pub al_list: Vec<String>,
    pub heavy_prefixes: Vec<String>,
    pub heavy_suffixes: Vec<String>,
    pub light_suffixes: Vec<String>,
    /// Affixes are only stripped from words strictly longer than this.
    pub min_strip_length: usize,
    /// Fewest letters a stripping step may leave behind.
    pub min_remainder: usize,
    pub strip_diacritics_in_light: bool,
}

impl Default for StemmerConfig {
    fn default() -> Self {
        let mut heavy_suffixes = owned(HEAVY_ONLY_SUFFIXES);
        heavy_suffixes.extend(owned(DEFAULT_LIGHT_SUFFIXES));
        Self {
            stoplist: StopList::new(DEFAULT_STOP_WORDS),
            al_list: owned(DEFAULT_AL_FORMS),
            heavy_prefixes: owned(DEFAULT_HEAVY_PREFIXES),
            heavy_suffixes,
            light_suffixes: owned(DEFAULT_LIGHT_SUFFIXES),
            min_strip_length: 3,
            min_remainder: 2,
            strip_diacritics_in_light: false,
        }
        .sorted()
    }
}

fn sort_longest_first(list: &mut Vec<String>) {
    list.retain(|s| !s.is_empty());
    // Stable, so equal-length entries keep their configured order.
    list.sort_by_key(|s| std::cmp::Reverse(s.chars().count()));
    let mut seen = std::collections::HashSet::new();
    list.retain(|s| seen.insert(s.clone()));
}

fn is_longest_first(list: &[String]) -> bool {
    list.windows(2)
        .all(|w| w[0].chars().count() >= w[1].chars().count())
}

impl StemmerConfig {
    pub fn sorted(mut self) -> Self {
        for list in [
            &mut self.al_list,
            &mut self.heavy_prefixes,
            &mut self.heavy_suffixes,
            &mut self.light_suffixes,
        ] {
            sort_longest_first(list);
        }
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.min_strip_length < 1 {
            return Err(ConfigError::Invalid("min_strip_length must be at least 1".into()));
        }
        if self.min_remainder < 1 {
            return Err(ConfigError::Invalid("min_remainder must be at least 1".into()));
        }
        for (name, list) in [
            ("al_list", &self.al_list),
            ("heavy_prefixes", &self.heavy_prefixes),
            ("heavy_suffixes", &self.heavy_suffixes),
            ("light_suffixes", &self.light_suffixes),
        ] {
            if !is_longest_first(list) {
                return Err(ConfigError::Invalid(format!("{name} is not ordered longest-first")));
            }
        }
        if !self.light_suffixes.is_empty() && self.light_suffixes == self.heavy_suffixes {
            return Err(ConfigError::Invalid(
                "light_suffixes and heavy_suffixes must be different lists".into(),
            ));
        }
        Ok(())
    }
}

/// Wire form of [`StemmerConfig`]; every field falls back to the default.
#[derive(Deserialize)]
#[serde(default, deny_unknown_fields)]
struct StemmerConfigDoc {
    stoplist: Vec<String>,
    al_list: Vec<String>,
    heavy_prefixes: Vec<String>,
    heavy_suffixes: Vec<String>,
    light_suffixes: Vec<String>,
    min_strip_length: usize,
    min_remainder: usize,
    strip_diacritics_in_light: bool,
}

impl Default for StemmerConfigDoc {
    fn default() -> Self {
        let d = StemmerConfig::default();
        Self {
            stoplist: d.stoplist.iter().map(str::to_string).collect(),
            al_list: d.al_list,
            heavy_prefixes: d.heavy_prefixes,
            heavy_suffixes: d.heavy_suffixes,
            light_suffixes: d.light_suffixes,
            min_strip_length: d.min_strip_length,
            min_remainder: d.min_remainder,
            strip_diacritics_in_light: d.strip_diacritics_in_light,
        }
    }
}

impl TryFrom<StemmerConfigDoc> for StemmerConfig {
    type Error = ConfigError;

    fn try_from(doc: StemmerConfigDoc) -> Result<Self, Self::Error> {
        let config = StemmerConfig {
            stoplist: StopList::new(doc.stoplist),
            al_list: doc.al_list,
            heavy_prefixes: doc.heavy_prefixes,
            heavy_suffixes: doc.heavy_suffixes,
            light_suffixes: doc.light_suffixes,
            min_strip_length: doc.min_strip_length,
            min_remainder: doc.min_remainder,
            strip_diacritics_in_light: doc.strip_diacritics_in_light,
        }
        .sorted();
        config.validate()?;
        Ok(config)
    }
}

/// A word after affix stripping, with the token it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stem {
    pub content: String,
    pub source: Token,
}

impl Stem {
    pub fn origin_index(&self) -> usize {
        self.source.origin_index
    }

    pub fn char_len(&self) -> usize {
        self.content.chars().count()
    }
}

pub fn strip_prefix(token: &Token, prefixes: &[String], config: &StemmerConfig) -> Token {
    if token.char_len() <= config.min_strip_length {
        return token.clone();
    }
    match text::strip_leading(&token.content, prefixes, config.min_remainder) {
        Some(rest) => Token::new(rest, token.origin_index),
        None => token.clone(),
    }
}

pub fn strip_suffix(token: &Token, suffixes: &[String], config: &StemmerConfig) -> Token {
    if token.char_len() <= config.min_strip_length {
        return token.clone();
    }
    let word = token.content.as_str();
    let Some(matched) = suffixes
        .iter()
        .find(|s| !s.is_empty() && word.ends_with(s.as_str()))
    else {
        return token.clone();
    };
    let rest = &word[..word.len() - matched.len()];
    if rest.chars().count() >= config.min_remainder {
        Token::new(rest, token.origin_index)
    } else {
        token.clone()
    }
}

/// Character-level cleanup for the given mode, before tokenization.
pub fn clean(text: &str, mode: StemMode, config: &StemmerConfig) -> String {
    let text = text::strip_numbers(text);
    let text = match mode {
        StemMode::Heavy => text::strip_diacritics(&text),
        StemMode::Light if config.strip_diacritics_in_light => text::strip_diacritics(&text),
        StemMode::Light => text,
    };
    text::strip_foreign_letters(&text)
}

/// Every intermediate form a single token passes through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordTrace {
    pub token: Token,
    pub stop_word: bool,
    pub after_al: Option<String>,
    pub normalized: Option<String>,
    /// Absent in light mode, which has no prefix step.
    pub after_prefix: Option<String>,
    pub after_suffix: Option<String>,
    /// Final stem, unless the word was a stop word or came out shorter than
    /// `min_remainder`.
    pub stem: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StemTrace {
    pub mode: StemMode,
    pub cleaned: String,
    pub words: Vec<WordTrace>,
}

impl StemTrace {
    pub fn stems(&self) -> Vec<Stem> {
        self.words
            .iter()
            .filter_map(|w| {
                w.stem.as_ref().map(|content| Stem {
                    content: content.clone(),
                    source: w.token.clone(),
                })
            })
            .collect()
    }
}

fn trace_token(token: Token, mode: StemMode, config: &StemmerConfig) -> WordTrace {
    if config.stoplist.contains(&token.content) {
        return WordTrace {
            token,
            stop_word: true,
            after_al: None,
            normalized: None,
            after_prefix: None,
            after_suffix: None,
            stem: None,
        };
    }
    let after_al = text::strip_al_prefix(&token, &config.al_list, config.min_remainder);
    let normalized = text::normalize_token(&after_al);
    let (after_prefix, after_suffix) = match mode {
        StemMode::Heavy => {
            let p = strip_prefix(&normalized, &config.heavy_prefixes, config);
            let s = strip_suffix(&p, &config.heavy_suffixes, config);
            (Some(p.content), s)
        }
        StemMode::Light => (None, strip_suffix(&normalized, &config.light_suffixes, config)),
    };
    let stem = (after_suffix.char_len() >= config.min_remainder).then(|| after_suffix.content.clone());
    WordTrace {
        token,
        stop_word: false,
        after_al: Some(after_al.content),
        normalized: Some(normalized.content),
        after_prefix,
        after_suffix: Some(after_suffix.content),
        stem,
    }
}

/// Runs the whole pipeline and keeps every stage for inspection.
pub fn trace_answer(text: &str, mode: StemMode, config: &StemmerConfig) -> StemTrace {
    let cleaned = clean(text, mode, config);
    let words = text::tokenize(&cleaned)
        .into_iter()
        .map(|t| trace_token(t, mode, config))
        .collect();
    StemTrace { mode, cleaned, words }
}

/// Stems an answer, keeping source order.
pub fn stem_answer(text: &str, mode: StemMode, config: &StemmerConfig) -> Vec<Stem> {
    trace_answer(text, mode, config).stems()
}
