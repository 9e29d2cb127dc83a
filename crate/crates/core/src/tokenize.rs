//! Offset-preserving tokenization, normalization and sentence splitting.
//!
//! All offsets in this crate are character (Unicode scalar value) indices
//! into the original text, half-open. Normalization produces a separate
//! `norm` view per token; the raw text is never rewritten.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::ops::Range;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abbreviations whose trailing period stays attached to the word and never ends a sentence.
pub const ABBREVIATIONS: &[&str] = &[
    "co.", "corp.", "dr.", "e.g.", "etc.", "i.e.", "inc.", "jr.", "ltd.", "mr.", "mrs.", "ms.",
    "no.", "prof.", "sr.", "st.", "u.k.", "u.s.", "vs.",
];

pub const DEFAULT_STOP_WORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "be", "been", "but", "by", "for", "from", "had", "has",
    "have", "he", "her", "his", "in", "into", "is", "it", "its", "of", "on", "or", "our", "she",
    "that", "the", "their", "they", "this", "to", "was", "we", "were", "which", "while", "will",
    "with",
];

/// Words the suffix rules must leave alone, plus irregular plurals.
const DEFAULT_LEMMA_EXCEPTIONS: &[(&str, &str)] = &[
    ("analysis", "analysis"),
    ("diabetes", "diabetes"),
    ("has", "has"),
    ("is", "is"),
    ("its", "its"),
    ("news", "news"),
    ("series", "series"),
    ("species", "species"),
    ("this", "this"),
    ("was", "was"),
    ("children", "child"),
    ("people", "person"),
    ("women", "woman"),
    ("men", "man"),
];

/// Byte offset of every character boundary, for O(1) char-range slicing.
#[derive(Debug, Clone)]
pub struct CharMap {
    bounds: Vec<usize>,
}

impl CharMap {
    pub fn new(text: &str) -> Self {
        let mut bounds: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bounds.push(text.len());
        CharMap { bounds }
    }

    /// Length of the text in characters.
    pub fn len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn byte_range(&self, start: usize, end: usize) -> Option<Range<usize>> {
        if start > end || end > self.len() {
            return None;
        }
        Some(self.bounds[start]..self.bounds[end])
    }

    pub fn slice<'t>(&self, text: &'t str, start: usize, end: usize) -> Option<&'t str> {
        self.byte_range(start, end).map(|r| &text[r])
    }
}

/// Character-indexed substring; `None` when the range is out of bounds.
pub fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start > end {
        return None;
    }
    let mut iter = text
        .char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(text.len()));
    let b_start = iter.nth(start)?;
    let b_end = if end == start {
        b_start
    } else {
        iter.nth(end - start - 1)?
    };
    Some(&text[b_start..b_end])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub norm: String,
    pub is_punct: bool,
    pub is_stop: bool,
}

pub(crate) fn is_punct_char(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}

fn is_abbreviation(word_with_period: &str) -> bool {
    let lower = word_with_period.to_lowercase();
    ABBREVIATIONS.contains(&lower.as_str())
}

/// Suffix-rule lemmatizer with an exceptions table.
#[derive(Debug, Clone)]
pub struct Lemmatizer {
    exceptions: HashMap<String, String>,
}

impl Default for Lemmatizer {
    fn default() -> Self {
        Lemmatizer {
            exceptions: DEFAULT_LEMMA_EXCEPTIONS
                .iter()
                .map(|(s, l)| (s.to_string(), l.to_string()))
                .collect(),
        }
    }
}

impl Lemmatizer {
    /// Default table extended (and overridden) by `surface<TAB>lemma` lines.
    pub fn with_exceptions_tsv(content: &str) -> Result<Self> {
        let mut lem = Lemmatizer::default();
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            match (cols.next(), cols.next(), cols.next()) {
                (Some(s), Some(l), None) if !s.trim().is_empty() && !l.trim().is_empty() => {
                    lem.exceptions
                        .insert(s.trim().to_lowercase(), l.trim().to_lowercase());
                }
                _ => {
                    return Err(Error::MalformedLemma {
                        line: i + 1,
                        content: line.to_string(),
                    })
                }
            }
        }
        Ok(lem)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Lemmatizer::with_exceptions_tsv(&content)
    }

    /// Case-folds, strips trailing periods, then applies the exception table or plural rules.
    pub fn normalize(&self, surface: &str) -> String {
        let lower = surface.to_lowercase();
        let stripped = lower.trim_end_matches('.');
        if stripped.is_empty() {
            return lower;
        }
        if let Some(lemma) = self.exceptions.get(stripped) {
            return lemma.clone();
        }
        lemmatize_word(stripped)
    }
}

fn lemmatize_word(word: &str) -> String {
    if !word.chars().all(char::is_alphabetic) {
        return word.to_string();
    }
    let n = word.chars().count();
    if n > 4 && word.ends_with("ies") {
        return format!("{}y", &word[..word.len() - 3]);
    }
    if word.ends_with("sses") {
        return word[..word.len() - 2].to_string();
    }
    if n > 4
        && ["ches", "shes", "xes", "zes"]
            .iter()
            .any(|s| word.ends_with(s))
    {
        return word[..word.len() - 2].to_string();
    }
    if n > 3 && word.ends_with('s') && !["ss", "us", "is"].iter().any(|s| word.ends_with(s)) {
        return word[..word.len() - 1].to_string();
    }
    word.to_string()
}

fn default_lemmatizer() -> &'static Lemmatizer {
    static LEM: OnceLock<Lemmatizer> = OnceLock::new();
    LEM.get_or_init(Lemmatizer::default)
}

/// Normalized view of a token surface using the default lemma table.
pub fn normalize(surface: &str) -> String {
    default_lemmatizer().normalize(surface)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl Default for StopWords {
    fn default() -> Self {
        StopWords(DEFAULT_STOP_WORDS.iter().map(|s| s.to_string()).collect())
    }
}

impl StopWords {
    pub fn empty() -> Self {
        StopWords(HashSet::new())
    }

    pub fn new<I: IntoIterator<Item = S>, S: AsRef<str>>(words: I) -> Self {
        StopWords(
            words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(StopWords::new(content.lines()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(&word.to_lowercase())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    pub stop_words: StopWords,
    pub lemmatizer: Lemmatizer,
}

impl Tokenizer {
    pub fn new(stop_words: StopWords, lemmatizer: Lemmatizer) -> Self {
        Tokenizer {
            stop_words,
            lemmatizer,
        }
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let chars: Vec<char> = text.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i].is_whitespace() {
                i += 1;
                continue;
            }
            let chunk_start = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            self.split_chunk(&chars, chunk_start, i, &mut tokens);
        }
        tokens
    }

    fn split_chunk(&self, chars: &[char], mut start: usize, end: usize, out: &mut Vec<Token>) {
        while start < end && is_punct_char(chars[start]) {
            out.push(self.make_token(chars, start, start + 1));
            start += 1;
        }
        if start == end {
            return;
        }
        let mut word_end = end;
        while word_end > start && is_punct_char(chars[word_end - 1]) {
            word_end -= 1;
        }
        if word_end < end && chars[word_end] == '.' {
            let candidate: String = chars[start..=word_end].iter().collect();
            if is_abbreviation(&candidate) {
                word_end += 1;
            }
        }
        out.push(self.make_token(chars, start, word_end));
        for k in word_end..end {
            out.push(self.make_token(chars, k, k + 1));
        }
    }

    fn make_token(&self, chars: &[char], start: usize, end: usize) -> Token {
        let text: String = chars[start..end].iter().collect();
        let is_punct = text.chars().all(is_punct_char);
        let norm = if is_punct {
            text.clone()
        } else {
            self.lemmatizer.normalize(&text)
        };
        Token {
            is_stop: !is_punct && self.stop_words.contains(&text),
            norm,
            is_punct,
            start,
            end,
            text,
        }
    }
}

/// Tokenizes with the given stop words and the default lemma table.
pub fn tokenize(text: &str, stop_words: &StopWords) -> Vec<Token> {
    Tokenizer::new(stop_words.clone(), Lemmatizer::default()).tokenize(text)
}

/// Sentence character ranges, trimmed of surrounding whitespace.
///
/// A sentence ends at `.`, `!` or `?` followed by whitespace and then an
/// uppercase letter or digit, unless the word carrying the period is a known
/// abbreviation.
pub fn split_sentences(text: &str) -> Vec<Range<usize>> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut sentences = Vec::new();
    let mut start = match chars.iter().position(|c| !c.is_whitespace()) {
        Some(s) => s,
        None => return sentences,
    };
    let mut i = start;
    while i < n {
        let c = chars[i];
        if matches!(c, '.' | '!' | '?') && i + 1 < n && chars[i + 1].is_whitespace() {
            let mut next = i + 1;
            while next < n && chars[next].is_whitespace() {
                next += 1;
            }
            if next < n
                && (chars[next].is_uppercase() || chars[next].is_ascii_digit())
                && !(c == '.' && ends_with_abbreviation(&chars[start..=i]))
            {
                sentences.push(start..i + 1);
                start = next;
                i = next;
                continue;
            }
        }
        i += 1;
    }
    let mut end = n;
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    if end > start {
        sentences.push(start..end);
    }
    sentences
}

fn ends_with_abbreviation(chars: &[char]) -> bool {
    let word_start = chars
        .iter()
        .rposition(|c| c.is_whitespace())
        .map_or(0, |p| p + 1);
    let word: String = chars[word_start..].iter().collect();
    let word = word.trim_start_matches(|c: char| is_punct_char(c) && c != '.');
    is_abbreviation(word)
}
