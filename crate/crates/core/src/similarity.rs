//! String similarity measures used for gazetteer matching.
//!
//! Both measures work on Unicode scalar values and return a value in `[0, 1]`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    LevenshteinNorm,
    CosineBigram,
    MaxOfBoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub value: f64,
    pub measure: Measure,
}

impl SimilarityScore {
    fn new(value: f64, measure: Measure) -> Self {
        debug_assert!((0.0..=1.0).contains(&value), "score {value} out of range");
        SimilarityScore {
            value: value.clamp(0.0, 1.0),
            measure,
        }
    }
}

/// Classic edit distance (unit-cost insert, delete, substitute), two-row DP.
pub fn levenshtein_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    distance_chars(&a, &b)
}

fn distance_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            curr[j + 1] = (prev[j] + cost).min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

fn lev_value(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        1.0
    } else {
        1.0 - distance_chars(a, b) as f64 / longest as f64
    }
}

/// `1 - distance / max(|a|, |b|)`, and 1.0 for two empty strings.
pub fn levenshtein_similarity(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    SimilarityScore::new(lev_value(&a, &b), Measure::LevenshteinNorm)
}

/// Bigram counts of `^s$`; the empty string has no bigrams.
pub fn padded_bigrams(s: &str) -> HashMap<(char, char), u32> {
    let mut counts = HashMap::new();
    if s.is_empty() {
        return counts;
    }
    let padded: Vec<char> = std::iter::once('^')
        .chain(s.chars())
        .chain(std::iter::once('$'))
        .collect();
    for w in padded.windows(2) {
        *counts.entry((w[0], w[1])).or_insert(0) += 1;
    }
    counts
}

/// Cosine of the padded character-bigram count vectors; 0.0 if either is empty.
pub fn cosine_similarity(a: &str, b: &str) -> SimilarityScore {
    SimilarityScore::new(
        Profile::new(a).cosine(&Profile::new(b)),
        Measure::CosineBigram,
    )
}

/// The larger of the two measures, so either one can clear a threshold on its own.
pub fn match_score(candidate: &str, entry: &str) -> SimilarityScore {
    Profile::new(candidate).match_score(&Profile::new(entry))
}

/// A string's characters and bigram vector, computed once and reused across
/// many comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    chars: Vec<char>,
    bigrams: HashMap<(char, char), u32>,
    norm: f64,
}

impl Profile {
    pub fn new(s: &str) -> Self {
        let bigrams = padded_bigrams(s);
        let norm = (bigrams
            .values()
            .map(|&x| u64::from(x) * u64::from(x))
            .sum::<u64>() as f64)
            .sqrt();
        Profile {
            chars: s.chars().collect(),
            bigrams,
            norm,
        }
    }

    fn cosine(&self, other: &Profile) -> f64 {
        if self.bigrams.is_empty() || other.bigrams.is_empty() {
            return 0.0;
        }
        let (small, large) = if self.bigrams.len() <= other.bigrams.len() {
            (&self.bigrams, &other.bigrams)
        } else {
            (&other.bigrams, &self.bigrams)
        };
        let dot: u64 = small
            .iter()
            .filter_map(|(k, &x)| large.get(k).map(|&y| u64::from(x) * u64::from(y)))
            .sum();
        (dot as f64 / (self.norm * other.norm)).min(1.0)
    }

    /// Same value as [`match_score`].
    pub fn match_score(&self, other: &Profile) -> SimilarityScore {
        let lev = lev_value(&self.chars, &other.chars);
        if lev >= 1.0 {
            return SimilarityScore::new(1.0, Measure::MaxOfBoth);
        }
        SimilarityScore::new(lev.max(self.cosine(other)), Measure::MaxOfBoth)
    }

    /// `match_score` when it reaches `threshold`, else `None`. Skips the edit
    /// distance when the length difference alone keeps it below the threshold.
    pub fn score_at_least(&self, other: &Profile, threshold: f64) -> Option<f64> {
        let (la, lb) = (self.chars.len(), other.chars.len());
        let longest = la.max(lb);
        let lev_bound = if longest == 0 {
            1.0
        } else {
            1.0 - la.abs_diff(lb) as f64 / longest as f64
        };
        let score = if lev_bound >= threshold {
            self.match_score(other).value
        } else {
            self.cosine(other)
        };
        (score >= threshold).then_some(score)
    }
}
