//! Gazetteer-driven labeling engine.
//!
//! A document is labeled in four passes:
//!
//! 1. every gazetteer entry is reduced to its *core name* by dropping
//!    countries, legal forms and domain keywords;
//! 2. windows of text tokens are scored against each core name with
//!    [`match_score`]; every (window, entry) pair at or above the threshold
//!    yields a candidate interval, optionally grown by neighbor extension
//!    toward the rest of the entry (and toward adjacent legal-form or
//!    domain-keyword tokens on the right);
//! 3. overlapping candidates coalesce and are cut at connector tokens, so a
//!    connector is only ever absorbed by the next pass;
//! 4. [`concatenate_consecutive`] joins same-label spans separated by at most
//!    `max_gap_tokens` connectors.
//!
//! Gazetteers are applied in list order and merged with
//! [`merge_with_precedence`], so an earlier label wins any collision.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::ops::Range;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document, Gazetteer, NonEntityCategory, NonEntityList};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::similarity::{match_score, Profile};
use crate::tokenize::{CharMap, StopWords, Token, Tokenizer};

pub const GAZETTEER_SOURCE: &str = "gazetteer";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub label: String,
    pub score: f64,
    pub source: String,
}

impl EntitySpan {
    pub fn overlaps(&self, other: &EntitySpan) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn overlap_len(&self, start: usize, end: usize) -> usize {
        self.end.min(end).saturating_sub(self.start.max(start))
    }
}

/// True when `[a_start, a_end)` and `[b_start, b_end)` share at least one character.
pub fn ranges_overlap(a: Range<usize>, b: Range<usize>) -> bool {
    a.start < b.end && b.start < a.end
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub threshold: f64,
    pub max_gap_tokens: usize,
    pub enable_neighbor_extension: bool,
    /// Lowercased token texts that may sit between concatenated spans.
    pub connectors: Vec<String>,
    /// Also treat any single punctuation token as a connector.
    pub punctuation_connectors: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            threshold: 0.9,
            max_gap_tokens: 1,
            enable_neighbor_extension: true,
            connectors: vec!["&".to_string()],
            punctuation_connectors: false,
        }
    }
}

impl MatchConfig {
    pub fn with_threshold(threshold: f64) -> Self {
        MatchConfig {
            threshold,
            ..MatchConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(Error::InvalidThreshold(self.threshold));
        }
        Ok(())
    }

    fn is_connector(&self, token: &Token) -> bool {
        (self.punctuation_connectors && token.is_punct && token.text.chars().count() == 1)
            || self
                .connectors
                .iter()
                .any(|c| c.eq_ignore_ascii_case(&token.text))
    }
}

/// Words that cannot open or close a core name.
const CORE_EDGE_WORDS: &[&str] = &["&", "and"];

fn core_tokens(
    entry: &str,
    nel: &NonEntityList,
    tokenizer: &Tokenizer,
) -> (Vec<Token>, Vec<usize>) {
    let tokens = tokenizer.tokenize(entry);
    let max_words = nel.max_phrase_words().max(1);
    let mut kept = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut dropped = 0;
        if !tokens[i].is_punct {
            for k in (1..=max_words.min(tokens.len() - i)).rev() {
                if tokens[i..i + k].iter().any(|t| t.is_punct) {
                    continue;
                }
                let phrase = tokens[i..i + k]
                    .iter()
                    .map(|t| t.text.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                if nel.contains(&phrase) {
                    dropped = k;
                    break;
                }
            }
        }
        if dropped > 0 {
            i += dropped;
        } else {
            kept.push(i);
            i += 1;
        }
    }
    let is_edge = |t: &Token| {
        t.is_punct
            || CORE_EDGE_WORDS
                .iter()
                .any(|w| w.eq_ignore_ascii_case(&t.text))
    };
    while kept.first().is_some_and(|&k| is_edge(&tokens[k])) {
        kept.remove(0);
    }
    while kept.last().is_some_and(|&k| is_edge(&tokens[k])) {
        kept.pop();
    }
    (tokens, kept)
}

/// Normalized core name (lemma-folded core tokens joined by spaces); `None` if empty.
pub fn core_key(surface: &str, nel: &NonEntityList, tokenizer: &Tokenizer) -> Option<String> {
    let (tokens, kept) = core_tokens(surface, nel, tokenizer);
    if kept.is_empty() {
        return None;
    }
    Some(
        kept.iter()
            .map(|&k| tokens[k].norm.as_str())
            .collect::<Vec<_>>()
            .join(" "),
    )
}

/// An entry's name with every non-entity token removed, tokens joined by single spaces.
///
/// Returns an empty string when nothing survives the filter.
pub fn core_name(entry: &str, nel: &NonEntityList) -> String {
    let tokenizer = Tokenizer::new(StopWords::empty(), Default::default());
    core_name_with(entry, nel, &tokenizer)
}

pub fn core_name_with(entry: &str, nel: &NonEntityList, tokenizer: &Tokenizer) -> String {
    let (tokens, kept) = core_tokens(entry, nel, tokenizer);
    kept.iter()
        .map(|&k| tokens[k].text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone)]
struct CompiledEntry {
    entry: String,
    tokens: Vec<Token>,
    first_core: usize,
    last_core: usize,
}

#[derive(Debug, Clone)]
struct CoreGroup {
    key: String,
    /// Core name of the group's lexicographically first entry, as written.
    display: String,
    profile: Profile,
    entries: Vec<usize>,
}

/// A gazetteer with core names precomputed and grouped by token count.
#[derive(Debug, Clone)]
pub struct CompiledGazetteer {
    label: String,
    entries: Vec<CompiledEntry>,
    groups_by_len: BTreeMap<usize, Vec<CoreGroup>>,
    skipped: Vec<String>,
}

impl CompiledGazetteer {
    pub fn new(gaz: &Gazetteer, nel: &NonEntityList, tokenizer: &Tokenizer) -> Self {
        let mut entries = Vec::new();
        let mut skipped = Vec::new();
        let mut by_key: BTreeMap<(usize, String), (String, Vec<usize>)> = BTreeMap::new();
        for entry in gaz.entries() {
            let (tokens, kept) = core_tokens(entry, nel, tokenizer);
            let (Some(&first), Some(&last)) = (kept.first(), kept.last()) else {
                skipped.push(entry.to_string());
                continue;
            };
            let key = kept
                .iter()
                .map(|&k| tokens[k].norm.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            let display = kept
                .iter()
                .map(|&k| tokens[k].text.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            by_key
                .entry((kept.len(), key))
                .or_insert_with(|| (display, Vec::new()))
                .1
                .push(entries.len());
            entries.push(CompiledEntry {
                entry: entry.to_string(),
                tokens,
                first_core: first,
                last_core: last,
            });
        }
        let mut groups_by_len: BTreeMap<usize, Vec<CoreGroup>> = BTreeMap::new();
        for ((len, key), (display, idx)) in by_key {
            groups_by_len.entry(len).or_default().push(CoreGroup {
                profile: Profile::new(&key),
                key,
                display,
                entries: idx,
            });
        }
        CompiledGazetteer {
            label: gaz.label().to_string(),
            entries,
            groups_by_len,
            skipped,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Entries whose core name is empty; they can never match.
    pub fn skipped_entries(&self) -> &[String] {
        &self.skipped
    }

    /// Distinct normalized core names.
    pub fn core_keys(&self) -> BTreeSet<&str> {
        self.groups_by_len
            .values()
            .flatten()
            .map(|g| g.key.as_str())
            .collect()
    }

    /// Core name as written for a normalized core key.
    pub fn core_display(&self, key: &str) -> Option<&str> {
        self.groups_by_len
            .values()
            .flatten()
            .find(|g| g.key == key)
            .map(|g| g.display.as_str())
    }

    /// Maps a surface form to the normalized core key of the gazetteer entity it
    /// denotes: exact core-key hit first, otherwise the best-scoring core
    /// (ties to the lexicographically smaller key). `None` when the surface has
    /// an empty core name.
    pub fn resolve(
        &self,
        surface: &str,
        nel: &NonEntityList,
        tokenizer: &Tokenizer,
    ) -> Option<String> {
        let key = core_key(surface, nel, tokenizer)?;
        let mut best: Option<(&str, f64)> = None;
        for g in self.groups_by_len.values().flatten() {
            if g.key == key {
                return Some(key);
            }
            let s = match_score(&key, &g.key).value;
            if best.is_none_or(|(bk, bs)| s > bs || (s == bs && g.key.as_str() < bk)) {
                best = Some((&g.key, s));
            }
        }
        best.map(|(k, _)| k.to_string())
    }

    /// Best-scoring entry for a normalized core candidate, ties broken by longer
    /// entry then lexicographic order.
    pub fn best_entry(&self, candidate_key: &str) -> Option<(&str, f64)> {
        let n = candidate_key.split(' ').count();
        let mut best: Option<(&CompiledEntry, f64)> = None;
        if let Some(groups) = self.groups_by_len.get(&n) {
            for g in groups {
                let score = match_score(candidate_key, &g.key).value;
                for &e in &g.entries {
                    let entry = &self.entries[e];
                    let better = match best {
                        None => true,
                        Some((b, s)) => {
                            score > s
                                || (score == s
                                    && (
                                        entry.entry.chars().count(),
                                        std::cmp::Reverse(&entry.entry),
                                    ) > (b.entry.chars().count(), std::cmp::Reverse(&b.entry)))
                        }
                    };
                    if better {
                        best = Some((entry, score));
                    }
                }
            }
        }
        best.map(|(e, s)| (e.entry.as_str(), s))
    }
}

fn tokens_match(text_tok: &Token, entry_tok: &Token, threshold: f64) -> bool {
    if text_tok.is_punct || entry_tok.is_punct {
        return text_tok.text == entry_tok.text;
    }
    match_score(&text_tok.norm, &entry_tok.norm).value >= threshold
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    start: usize,
    end: usize,
    score: f64,
}

fn extend_left(tokens: &[Token], start: usize, entry: &CompiledEntry, threshold: f64) -> usize {
    let mut p = start;
    for et in entry.tokens[..entry.first_core].iter().rev() {
        if p > 0 && tokens_match(&tokens[p - 1], et, threshold) {
            p -= 1;
        } else {
            break;
        }
    }
    p
}

/// Furthest reachable end when each next text token either matches the next
/// unmatched entry token or is a legal-form / domain-keyword term.
fn extend_right(
    tokens: &[Token],
    end: usize,
    entry: &CompiledEntry,
    nel: &NonEntityList,
    threshold: f64,
) -> usize {
    let remaining = &entry.tokens[entry.last_core + 1..];
    let mut states: BTreeSet<usize> = BTreeSet::from([0]);
    let mut q = end;
    while q < tokens.len() && !states.is_empty() {
        let tok = &tokens[q];
        let nel_word = !tok.is_punct
            && matches!(
                nel.category(&tok.text),
                Some(NonEntityCategory::LegalForm | NonEntityCategory::DomainKeyword)
            );
        let mut next = BTreeSet::new();
        for &ptr in &states {
            if ptr < remaining.len() && tokens_match(tok, &remaining[ptr], threshold) {
                next.insert(ptr + 1);
            }
            if nel_word {
                next.insert(ptr);
            }
        }
        if next.is_empty() {
            break;
        }
        states = next;
        q += 1;
    }
    q
}

/// Reusable labeling engine over a fixed gazetteer list.
#[derive(Debug, Clone)]
pub struct Annotator {
    tokenizer: Tokenizer,
    nel: NonEntityList,
    cfg: MatchConfig,
    gazetteers: Vec<CompiledGazetteer>,
    exec: Execution,
}

impl Annotator {
    pub fn new(gazetteers: &[Gazetteer], nel: NonEntityList, cfg: MatchConfig) -> Result<Self> {
        Annotator::with_tokenizer(gazetteers, nel, cfg, Tokenizer::default())
    }

    pub fn with_tokenizer(
        gazetteers: &[Gazetteer],
        nel: NonEntityList,
        cfg: MatchConfig,
        tokenizer: Tokenizer,
    ) -> Result<Self> {
        cfg.validate()?;
        let mut labels = HashSet::new();
        for g in gazetteers {
            if !labels.insert(g.label()) {
                return Err(Error::DuplicateLabel(g.label().to_string()));
            }
        }
        // Gazetteer entries are names, not prose: stop words must not stop them.
        let entry_tokenizer = Tokenizer::new(StopWords::empty(), tokenizer.lemmatizer.clone());
        let gazetteers = gazetteers
            .iter()
            .map(|g| CompiledGazetteer::new(g, &nel, &entry_tokenizer))
            .collect();
        Ok(Annotator {
            tokenizer,
            nel,
            cfg,
            gazetteers,
            exec: Execution::default(),
        })
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn config(&self) -> &MatchConfig {
        &self.cfg
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tokenizer
    }

    pub fn non_entities(&self) -> &NonEntityList {
        &self.nel
    }

    pub fn gazetteers(&self) -> &[CompiledGazetteer] {
        &self.gazetteers
    }

    /// Spans for one gazetteer before concatenation.
    pub fn match_gazetteer(
        &self,
        doc: &Document,
        tokens: &[Token],
        gaz: &CompiledGazetteer,
    ) -> Vec<EntitySpan> {
        let threshold = self.cfg.threshold;
        let mut memo: HashMap<String, Vec<(usize, f64)>> = HashMap::new();
        let mut candidates = Vec::new();
        let can_bound = |t: &Token| !t.is_punct && !t.is_stop && !self.cfg.is_connector(t);

        for i in 0..tokens.len() {
            if !can_bound(&tokens[i]) {
                continue;
            }
            for (&len, groups) in &gaz.groups_by_len {
                let j = i + len;
                if j > tokens.len() || !can_bound(&tokens[j - 1]) {
                    continue;
                }
                let key = tokens[i..j]
                    .iter()
                    .map(|t| t.norm.as_str())
                    .collect::<Vec<_>>()
                    .join(" ");
                let hits = memo.entry(key).or_insert_with_key(|key| {
                    let window = Profile::new(key);
                    groups
                        .iter()
                        .enumerate()
                        .filter_map(|(gi, g)| {
                            window
                                .score_at_least(&g.profile, threshold)
                                .map(|s| (gi, s))
                        })
                        .collect()
                });
                for &(gi, score) in hits.iter() {
                    for &e in &groups[gi].entries {
                        let entry = &gaz.entries[e];
                        let (start, end) = if self.cfg.enable_neighbor_extension {
                            (
                                extend_left(tokens, i, entry, threshold),
                                extend_right(tokens, j, entry, &self.nel, threshold),
                            )
                        } else {
                            (i, j)
                        };
                        candidates.push(Candidate { start, end, score });
                    }
                }
            }
        }
        self.candidates_to_spans(doc, tokens, candidates, gaz.label())
    }

    fn candidates_to_spans(
        &self,
        doc: &Document,
        tokens: &[Token],
        mut candidates: Vec<Candidate>,
        label: &str,
    ) -> Vec<EntitySpan> {
        candidates.sort_by_key(|c| (c.start, c.end));
        let mut runs: Vec<Candidate> = Vec::new();
        for c in candidates {
            match runs.last_mut() {
                Some(r) if c.start < r.end => {
                    r.end = r.end.max(c.end);
                    r.score = r.score.max(c.score);
                }
                _ => runs.push(c),
            }
        }
        let map = CharMap::new(&doc.text);
        let mut spans = Vec::new();
        for run in runs {
            let mut piece_start = run.start;
            for k in run.start..=run.end {
                if k == run.end || self.cfg.is_connector(&tokens[k]) {
                    let (mut a, mut b) = (piece_start, k);
                    while a < b && tokens[a].is_punct {
                        a += 1;
                    }
                    while b > a && tokens[b - 1].is_punct {
                        b -= 1;
                    }
                    if a < b {
                        spans.push(make_span(
                            doc,
                            &map,
                            tokens[a].start,
                            tokens[b - 1].end,
                            label,
                            run.score,
                        ));
                    }
                    piece_start = k + 1;
                }
            }
        }
        spans
    }

    /// Full per-document pipeline: match, concatenate and merge every gazetteer.
    pub fn annotate(&self, doc: &Document) -> Vec<EntitySpan> {
        let tokens = self.tokenizer.tokenize(&doc.text);
        self.annotate_tokens(doc, &tokens)
    }

    pub fn annotate_tokens(&self, doc: &Document, tokens: &[Token]) -> Vec<EntitySpan> {
        let mut merged = Vec::new();
        for gaz in &self.gazetteers {
            let spans = self.match_gazetteer(doc, tokens, gaz);
            let spans = concatenate_consecutive(doc, spans, tokens, &self.cfg);
            merged = merge_with_precedence(&merged, &spans);
        }
        merged
    }

    pub fn build(&self, corpus: &Corpus) -> (LabeledDataset, AnnotationSummary) {
        let per_doc = exec::map_ordered(corpus.documents(), self.exec, |doc| self.annotate(doc));
        let mut ds = LabeledDataset::new();
        for (doc, spans) in corpus.documents().iter().zip(per_doc) {
            ds.insert(doc.id.clone(), spans);
        }
        let mut summary = AnnotationSummary {
            documents: corpus.len(),
            spans_per_label: ds.spans_per_label(),
            skipped_entries: BTreeMap::new(),
        };
        for g in &self.gazetteers {
            summary.spans_per_label.entry(g.label.clone()).or_insert(0);
            summary
                .skipped_entries
                .insert(g.label.clone(), g.skipped.len());
        }
        (ds, summary)
    }
}

fn make_span(
    doc: &Document,
    map: &CharMap,
    start: usize,
    end: usize,
    label: &str,
    score: f64,
) -> EntitySpan {
    EntitySpan {
        start,
        end,
        surface: map
            .slice(&doc.text, start, end)
            .expect("token offsets lie inside the document")
            .to_string(),
        label: label.to_string(),
        score,
        source: GAZETTEER_SOURCE.to_string(),
    }
}

/// Matches one gazetteer against a tokenized document, with concatenation applied.
pub fn annotate_document(
    doc: &Document,
    tokens: &[Token],
    gaz: &Gazetteer,
    nel: &NonEntityList,
    cfg: &MatchConfig,
) -> Result<Vec<EntitySpan>> {
    let annotator = Annotator::new(std::slice::from_ref(gaz), nel.clone(), cfg.clone())?;
    Ok(annotator.match_gazetteer(doc, tokens, &annotator.gazetteers[0]))
}

/// Joins same-label spans separated only by up to `max_gap_tokens` connector tokens.
///
/// Spans whose boundaries do not fall on token boundaries are passed through unmerged.
pub fn concatenate_consecutive(
    doc: &Document,
    spans: Vec<EntitySpan>,
    tokens: &[Token],
    cfg: &MatchConfig,
) -> Vec<EntitySpan> {
    let start_idx: HashMap<usize, usize> = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| (t.start, i))
        .collect();
    let end_idx: HashMap<usize, usize> =
        tokens.iter().enumerate().map(|(i, t)| (t.end, i)).collect();
    let map = CharMap::new(&doc.text);
    let mut out: Vec<EntitySpan> = Vec::with_capacity(spans.len());
    for span in spans {
        if let Some(prev) = out.last_mut() {
            let joinable = prev.label == span.label
                && prev.end <= span.start
                && match (end_idx.get(&prev.end), start_idx.get(&span.start)) {
                    (Some(&a), Some(&b)) if b > a => {
                        let gap = &tokens[a + 1..b];
                        gap.len() <= cfg.max_gap_tokens && gap.iter().all(|t| cfg.is_connector(t))
                    }
                    _ => false,
                };
            if joinable {
                prev.end = span.end;
                prev.surface = map
                    .slice(&doc.text, prev.start, prev.end)
                    .unwrap_or_default()
                    .to_string();
                prev.score = prev.score.max(span.score);
                if prev.source != span.source {
                    prev.source = format!("{}+{}", prev.source, span.source);
                }
                continue;
            }
        }
        out.push(span);
    }
    out
}

/// Keeps every primary span, plus the secondary spans that overlap none of them.
pub fn merge_with_precedence(primary: &[EntitySpan], secondary: &[EntitySpan]) -> Vec<EntitySpan> {
    let mut out: Vec<EntitySpan> = primary.to_vec();
    out.extend(
        secondary
            .iter()
            .filter(|s| !primary.iter().any(|p| p.overlaps(s)))
            .cloned(),
    );
    out.sort_by_key(|s| (s.start, s.end));
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnnotationSummary {
    pub documents: usize,
    pub spans_per_label: BTreeMap<String, usize>,
    /// Gazetteer entries with an empty core name, per label.
    pub skipped_entries: BTreeMap<String, usize>,
}

/// Builds the labeled dataset for a whole corpus.
pub fn build_labeled_dataset(
    corpus: &Corpus,
    gazetteers: &[Gazetteer],
    nel: &NonEntityList,
    cfg: &MatchConfig,
) -> Result<(LabeledDataset, AnnotationSummary)> {
    Ok(Annotator::new(gazetteers, nel.clone(), cfg.clone())?.build(corpus))
}

#[derive(Debug, Serialize, Deserialize)]
struct DatasetRecord {
    id: String,
    spans: Vec<EntitySpan>,
}

/// Document id to sorted, non-overlapping spans, in corpus order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledDataset {
    docs: IndexMap<String, Vec<EntitySpan>>,
}

impl LabeledDataset {
    pub fn new() -> Self {
        LabeledDataset::default()
    }

    /// Inserts (or replaces) a document's spans, sorting them by start.
    pub fn insert(&mut self, id: impl Into<String>, mut spans: Vec<EntitySpan>) {
        spans.sort_by(|a, b| (a.start, a.end, &a.label).cmp(&(b.start, b.end, &b.label)));
        self.docs.insert(id.into(), spans);
    }

    pub fn get(&self, id: &str) -> Option<&[EntitySpan]> {
        self.docs.get(id).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[EntitySpan])> {
        self.docs.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.docs.keys().map(String::as_str)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.docs.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn total_spans(&self) -> usize {
        self.docs.values().map(Vec::len).sum()
    }

    pub fn spans_per_label(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for span in self.docs.values().flatten() {
            *counts.entry(span.label.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Restricted to the given ids, in this dataset's order.
    pub fn subset<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> LabeledDataset {
        let wanted: HashSet<&str> = ids.into_iter().collect();
        LabeledDataset {
            docs: self
                .docs
                .iter()
                .filter(|(k, _)| wanted.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Checks ordering, non-overlap and surface fidelity against the corpus.
    pub fn validate(&self, corpus: &Corpus) -> Result<()> {
        for (id, spans) in &self.docs {
            let doc = corpus
                .get(id)
                .ok_or_else(|| Error::UnknownDocument(id.clone()))?;
            let map = CharMap::new(&doc.text);
            let mut prev_end = 0;
            for s in spans {
                let bad = || Error::InvalidSpan {
                    doc_id: id.clone(),
                    start: s.start,
                    end: s.end,
                };
                if s.start >= s.end || s.start < prev_end {
                    return Err(bad());
                }
                if map.slice(&doc.text, s.start, s.end) != Some(s.surface.as_str()) {
                    return Err(bad());
                }
                prev_end = s.end;
            }
        }
        Ok(())
    }

    pub fn from_jsonl(content: &str) -> Result<Self> {
        let mut ds = LabeledDataset::new();
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: DatasetRecord = serde_json::from_str(line).map_err(|e| Error::Json {
                line: i + 1,
                message: e.to_string(),
            })?;
            if rec.id.is_empty() {
                return Err(Error::EmptyId { line: i + 1 });
            }
            if ds.contains(&rec.id) {
                return Err(Error::DuplicateId(rec.id));
            }
            ds.insert(rec.id, rec.spans);
        }
        Ok(ds)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (id, spans) in &self.docs {
            let rec = DatasetRecord {
                id: id.clone(),
                spans: spans.clone(),
            };
            out.push_str(&serde_json::to_string(&rec).expect("dataset serializes"));
            out.push('\n');
        }
        out
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        LabeledDataset::from_jsonl(&content)
    }
}

impl FromIterator<(String, Vec<EntitySpan>)> for LabeledDataset {
    fn from_iter<I: IntoIterator<Item = (String, Vec<EntitySpan>)>>(iter: I) -> Self {
        let mut ds = LabeledDataset::new();
        for (id, spans) in iter {
            ds.insert(id, spans);
        }
        ds
    }
}
