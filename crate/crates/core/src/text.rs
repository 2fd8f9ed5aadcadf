//! Character-level cleanup and tokenization of Arabic answers.
//!
//! Every function here is total and pure. The three cleanup passes remove
//! disjoint character classes, so they are idempotent and commute with each
//! other.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

const TATWEEL: char = '\u{0640}';

/// A word cut out of an answer, remembering where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub content: String,
    /// 0-based position among the tokens of the source answer.
    pub origin_index: usize,
}

impl Token {
    pub fn new(content: impl Into<String>, origin_index: usize) -> Self {
        Self {
            content: content.into(),
            origin_index,
        }
    }

    /// Length in Unicode scalar values.
    pub fn char_len(&self) -> usize {
        self.content.chars().count()
    }

    fn with_content(&self, content: String) -> Self {
        Self {
            content,
            origin_index: self.origin_index,
        }
    }
}

pub fn is_ascii_or_arabic_digit(c: char) -> bool {
    matches!(c, '0'..='9' | '\u{0660}'..='\u{0669}' | '\u{06F0}'..='\u{06F9}')
}

/// Tashkeel marks U+064B..=U+0652 plus the superscript alef.
pub fn is_diacritic(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{0652}' | '\u{0670}')
}

fn in_arabic_blocks(c: char) -> bool {
    matches!(c,
        '\u{0600}'..='\u{06FF}'
        | '\u{0750}'..='\u{077F}'
        | '\u{0870}'..='\u{08FF}'
        | '\u{FB50}'..='\u{FDFF}'
        | '\u{FE70}'..='\u{FEFF}')
}

/// A letter of the Arabic script. Tatweel is excluded; it is treated as
/// punctuation.
pub fn is_arabic_letter(c: char) -> bool {
    c != TATWEEL && in_arabic_blocks(c) && c.is_alphabetic() && !is_arabic_mark(c)
}

/// Combining marks of the Arabic block (tashkeel, Quranic annotation marks).
fn is_arabic_mark(c: char) -> bool {
    matches!(c, '\u{0610}'..='\u{061A}' | '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{06D6}'..='\u{06ED}')
}

/// Marks that are not tashkeel (maddah, hamza above, Quranic signs). They
/// carry nothing a grader can use and are dropped during tokenization.
fn is_ignorable_mark(c: char) -> bool {
    is_arabic_mark(c) && !is_diacritic(c)
}

/// A letter of any script other than Arabic.
pub fn is_foreign_letter(c: char) -> bool {
    c.is_alphabetic() && !in_arabic_blocks(c)
}

fn is_word_char(c: char) -> bool {
    is_arabic_letter(c) || is_diacritic(c)
}

pub fn strip_numbers(text: &str) -> String {
    text.chars().filter(|&c| !is_ascii_or_arabic_digit(c)).collect()
}

pub fn strip_diacritics(text: &str) -> String {
    text.chars().filter(|&c| !is_diacritic(c)).collect()
}

pub fn strip_foreign_letters(text: &str) -> String {
    text.chars().filter(|&c| !is_foreign_letter(c)).collect()
}

/// Splits cleaned text into tokens.
///
/// Whitespace separates words. Any other character that is neither an Arabic
/// letter nor an Arabic mark (punctuation, stray digits, foreign letters) is
/// also a separator, so no token ever carries punctuation at its edges or in
/// its middle. Tatweel and non-tashkeel marks are dropped in place, so
/// `كتـــاب` stays one word. Tashkeel is kept, for light mode without
/// diacritic removal.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if c == TATWEEL || is_ignorable_mark(c) {
            continue;
        }
        if is_word_char(c) {
            current.push(c);
        } else if !current.is_empty() {
            let index = tokens.len();
            tokens.push(Token::new(std::mem::take(&mut current), index));
        }
    }
    if !current.is_empty() {
        let index = tokens.len();
        tokens.push(Token::new(current, index));
    }
    tokens
}

/// Folds alef variants to bare alef and ta marbuta to ha.
pub fn normalize_str(word: &str) -> String {
    word.chars()
        .map(|c| match c {
            '\u{0622}' | '\u{0623}' | '\u{0625}' => '\u{0627}',
            '\u{0629}' => '\u{0647}',
            other => other,
        })
        .collect()
}

pub fn normalize_token(token: &Token) -> Token {
    token.with_content(normalize_str(&token.content))
}

/// Stop words, stored in normalized form so that `أن` hits the entry `ان`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StopList {
    words: BTreeSet<String>,
}

impl StopList {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words
                .into_iter()
                .map(|w| normalize_str(w.as_ref().trim()))
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(&normalize_str(word))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Serialize for StopList {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.words.iter())
    }
}

impl<'de> Deserialize<'de> for StopList {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let words = Vec::<String>::deserialize(deserializer)?;
        Ok(Self::new(words))
    }
}

pub fn remove_stop_words(tokens: Vec<Token>, stoplist: &StopList) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| !stoplist.contains(&t.content))
        .collect()
}

/// Removes the longest matching prefix when it leaves at least `min_remainder`
/// characters. `prefixes` must be ordered longest-first.
pub(crate) fn strip_leading(word: &str, prefixes: &[String], min_remainder: usize) -> Option<String> {
    let matched = prefixes
        .iter()
        .find(|p| !p.is_empty() && word.starts_with(p.as_str()))?;
    let rest = &word[matched.len()..];
    (rest.chars().count() >= min_remainder).then(|| rest.to_string())
}

/// Removes the definite article or one of its particle-bearing forms.
///
/// `al_list` is ordered longest-first. Only the longest matching entry is
/// considered; if it would leave fewer than `min_remainder` letters the token is
/// returned unchanged.
pub fn strip_al_prefix(token: &Token, al_list: &[String], min_remainder: usize) -> Token {
    match strip_leading(&token.content, al_list, min_remainder) {
        Some(rest) => token.with_content(rest),
        None => token.clone(),
    }
}
