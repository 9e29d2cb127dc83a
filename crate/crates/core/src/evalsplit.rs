//! Train/test splitting and exact-span scoring.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::annotate::{CompiledGazetteer, EntitySpan, LabeledDataset};
use crate::corpus::{Corpus, Document, Gazetteer, NonEntityList};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::tokenize::{StopWords, Tokenizer};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub doc_id: String,
    pub old_surface: String,
    pub new_surface: String,
    /// Offsets of the new surface in the rewritten document.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub replaced: Vec<Replacement>,
    pub seed: u64,
}

impl SplitResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("split serializes");
        s.push('\n');
        s
    }
}

/// `round(ratio * n)`, kept within `[1, n - 1]` so neither portion is empty.
pub fn test_size(n: usize, ratio: f64) -> usize {
    ((ratio * n as f64).round() as usize).clamp(1, n.saturating_sub(1).max(1))
}

fn check_split_args(corpus: &Corpus, ratio: f64) -> Result<()> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidRatio(ratio));
    }
    if corpus.len() < 2 {
        return Err(Error::CorpusTooSmall(corpus.len()));
    }
    Ok(())
}

fn ids_in_order(corpus: &Corpus, chosen: &HashSet<usize>, take: bool) -> Vec<String> {
    corpus
        .documents()
        .iter()
        .enumerate()
        .filter(|(i, _)| chosen.contains(i) == take)
        .map(|(_, d)| d.id.clone())
        .collect()
}

/// Seeded document-level split that ignores entity distribution.
pub fn random_split(corpus: &Corpus, ratio: f64, seed: u64) -> Result<SplitResult> {
    check_split_args(corpus, ratio)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    order.shuffle(&mut rng);
    let test: HashSet<usize> = order[..test_size(corpus.len(), ratio)]
        .iter()
        .copied()
        .collect();
    Ok(SplitResult {
        train_ids: ids_in_order(corpus, &test, false),
        test_ids: ids_in_order(corpus, &test, true),
        replaced: Vec::new(),
        seed,
    })
}

/// Output of [`entity_disjoint_split`]: the split plus the rewritten corpus and dataset.
#[derive(Debug, Clone)]
pub struct DisjointSplit {
    pub split: SplitResult,
    pub corpus: Corpus,
    pub dataset: LabeledDataset,
    /// Normalized core names held out for testing.
    pub test_entities: BTreeSet<String>,
    pub train_entities: BTreeSet<String>,
}

/// Entity-disjoint split.
///
/// 1. Entities are the normalized core names of the gazetteer that occur in
///    `ds` under the gazetteer's label; a seeded `ratio` fraction is held out
///    as the test entities.
/// 2. Documents mentioning a test entity are test candidates. While there are
///    fewer candidates than `round(ratio * N)` documents, the next entity in
///    the seeded order joins the test set; documents without any entity of
///    this label fill a remaining shortfall.
/// 3. Surplus candidates are trimmed (seeded) to exactly `round(ratio * N)`
///    and go to training.
/// 4. In training documents every test-entity mention is rewritten to a
///    seeded draw from the training entities; in test documents every
///    training-entity mention is rewritten to a test entity. Draws are
///    consistent within a document and all later offsets shift accordingly.
pub fn entity_disjoint_split(
    corpus: &Corpus,
    ds: &LabeledDataset,
    gaz: &Gazetteer,
    nel: &NonEntityList,
    ratio: f64,
    seed: u64,
) -> Result<DisjointSplit> {
    check_split_args(corpus, ratio)?;
    let label = gaz.label();
    let tokenizer = Tokenizer::new(StopWords::empty(), Default::default());
    let compiled = CompiledGazetteer::new(gaz, nel, &tokenizer);
    let no_replacements = || Error::NoReplacementEntities {
        label: label.to_string(),
    };

    // Entity keys per document, by span position.
    let mut span_keys: Vec<HashMap<usize, String>> = Vec::with_capacity(corpus.len());
    let mut doc_entities: Vec<BTreeSet<String>> = Vec::with_capacity(corpus.len());
    for doc in corpus.documents() {
        let mut keys = HashMap::new();
        let mut set = BTreeSet::new();
        for (i, span) in ds.get(&doc.id).unwrap_or_default().iter().enumerate() {
            if span.label != label {
                continue;
            }
            if let Some(key) = compiled.resolve(&span.surface, nel, &tokenizer) {
                set.insert(key.clone());
                keys.insert(i, key);
            }
        }
        span_keys.push(keys);
        doc_entities.push(set);
    }
    let present: BTreeSet<String> = doc_entities.iter().flatten().cloned().collect();
    if present.len() < 2 {
        return Err(no_replacements());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<String> = present.iter().cloned().collect();
    order.shuffle(&mut rng);

    let n_docs = corpus.len();
    let target = test_size(n_docs, ratio);
    let max_test_entities = order.len() - 1;
    let mut k = test_size(order.len(), ratio).min(max_test_entities);
    let candidates_for = |k: usize| -> Vec<usize> {
        let held: HashSet<&String> = order[..k].iter().collect();
        (0..n_docs)
            .filter(|&d| doc_entities[d].iter().any(|e| held.contains(e)))
            .collect()
    };
    let mut candidates = candidates_for(k);
    while candidates.len() < target && k < max_test_entities {
        k += 1;
        candidates = candidates_for(k);
    }
    let test_entities: BTreeSet<String> = order[..k].iter().cloned().collect();
    let train_entities: BTreeSet<String> = order[k..].iter().cloned().collect();

    let mut test_docs: Vec<usize> = if candidates.len() > target {
        candidates.shuffle(&mut rng);
        candidates.truncate(target);
        candidates
    } else {
        candidates
    };
    if test_docs.len() < target {
        let mut free: Vec<usize> = (0..n_docs)
            .filter(|&d| doc_entities[d].is_empty())
            .collect();
        free.shuffle(&mut rng);
        let need = target - test_docs.len();
        if free.len() < need {
            return Err(Error::InsufficientTestDocuments {
                available: test_docs.len() + free.len(),
                required: target,
            });
        }
        test_docs.extend_from_slice(&free[..need]);
    }
    let test_set: HashSet<usize> = test_docs.into_iter().collect();

    let train_pool: Vec<&String> = train_entities.iter().collect();
    let test_pool: Vec<&String> = test_entities.iter().collect();
    let display = |key: &str| compiled.core_display(key).unwrap_or(key).to_string();

    let mut documents = Vec::with_capacity(n_docs);
    let mut dataset = LabeledDataset::new();
    let mut replaced = Vec::new();
    for (d, doc) in corpus.documents().iter().enumerate() {
        let in_test = test_set.contains(&d);
        let (foreign, pool) = if in_test {
            (&train_entities, &test_pool)
        } else {
            (&test_entities, &train_pool)
        };
        let mut mapping: BTreeMap<&String, String> = BTreeMap::new();
        for key in doc_entities[d].intersection(foreign) {
            let pick = pool[rng.gen_range(0..pool.len())];
            mapping.insert(key, display(pick));
        }
        let spans = ds.get(&doc.id).unwrap_or_default();
        let edits: Vec<(usize, &str)> = span_keys[d]
            .iter()
            .filter_map(|(&i, key)| mapping.get(key).map(|s| (i, s.as_str())))
            .collect();
        let (new_doc, new_spans, records) = rewrite_document(doc, spans, &edits);
        replaced.extend(records);
        if ds.contains(&doc.id) {
            dataset.insert(doc.id.clone(), new_spans);
        }
        documents.push(new_doc);
    }

    Ok(DisjointSplit {
        split: SplitResult {
            train_ids: ids_in_order(corpus, &test_set, false),
            test_ids: ids_in_order(corpus, &test_set, true),
            replaced,
            seed,
        },
        corpus: Corpus::new(documents)?,
        dataset,
        test_entities,
        train_entities,
    })
}

/// Replaces the surfaces of the spans at the given indices and shifts every
/// later offset by the accumulated length change.
pub fn rewrite_document(
    doc: &Document,
    spans: &[EntitySpan],
    edits: &[(usize, &str)],
) -> (Document, Vec<EntitySpan>, Vec<Replacement>) {
    let edits: HashMap<usize, &str> = edits.iter().copied().collect();
    let chars: Vec<char> = doc.text.chars().collect();
    let mut text = String::with_capacity(doc.text.len());
    let mut cursor = 0;
    let mut delta: isize = 0;
    let mut out_spans = Vec::with_capacity(spans.len());
    let mut records = Vec::new();
    for (i, span) in spans.iter().enumerate() {
        text.extend(&chars[cursor..span.start]);
        let new_start = (span.start as isize + delta) as usize;
        let mut s = span.clone();
        match edits.get(&i) {
            Some(&replacement) => {
                text.push_str(replacement);
                let len = replacement.chars().count();
                s.surface = replacement.to_string();
                s.start = new_start;
                s.end = new_start + len;
                delta += len as isize - (span.end - span.start) as isize;
                records.push(Replacement {
                    doc_id: doc.id.clone(),
                    old_surface: span.surface.clone(),
                    new_surface: replacement.to_string(),
                    start: s.start,
                    end: s.end,
                });
            }
            None => {
                text.extend(&chars[span.start..span.end]);
                s.start = new_start;
                s.end = (span.end as isize + delta) as usize;
            }
        }
        cursor = span.end;
        out_spans.push(s);
    }
    text.extend(&chars[cursor..]);
    (
        Document {
            id: doc.id.clone(),
            text,
            source: doc.source.clone(),
        },
        out_spans,
        records,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    /// A prediction counts only if start, end and label all equal a gold span.
    #[default]
    ExactSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl Scores {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Scores {
            precision,
            recall,
            f1,
            tp,
            fp,
            fn_,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_label: BTreeMap<String, Scores>,
    pub micro: Scores,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Fixed-width table, percentages with two decimals.
    pub fn to_table(&self) -> String {
        let width = self
            .per_label
            .keys()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>9}  {:>9}  {:>9}  {:>6}  {:>6}  {:>6}",
            "Label", "Precision", "Recall", "F1", "TP", "FP", "FN"
        );
        let _ = writeln!(out, "{}", "-".repeat(width + 57));
        let mut row = |name: &str, s: &Scores| {
            let _ = writeln!(
                out,
                "{:<width$}  {:>9.2}  {:>9.2}  {:>9.2}  {:>6}  {:>6}  {:>6}",
                name,
                s.precision * 100.0,
                s.recall * 100.0,
                s.f1 * 100.0,
                s.tp,
                s.fp,
                s.fn_
            );
        };
        for (label, s) in &self.per_label {
            row(label, s);
        }
        row("micro", &self.micro);
        out
    }
}

type Tally = BTreeMap<String, (usize, usize, usize)>;

fn tally_document(gold: &[EntitySpan], predicted: &[EntitySpan]) -> Tally {
    let key = |s: &EntitySpan| (s.start, s.end, s.label.clone());
    let gold_set: HashSet<_> = gold.iter().map(key).collect();
    let pred_set: HashSet<_> = predicted.iter().map(key).collect();
    let mut tally = Tally::new();
    for k in &pred_set {
        let e = tally.entry(k.2.clone()).or_default();
        if gold_set.contains(k) {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    for k in gold_set.difference(&pred_set) {
        tally.entry(k.2.clone()).or_default().2 += 1;
    }
    tally
}

pub fn score(
    gold: &LabeledDataset,
    predicted: &LabeledDataset,
    mode: MatchMode,
) -> Result<EvalReport> {
    score_with(gold, predicted, mode, Execution::default())
}

pub fn score_with(
    gold: &LabeledDataset,
    predicted: &LabeledDataset,
    mode: MatchMode,
    exec: Execution,
) -> Result<EvalReport> {
    let MatchMode::ExactSpan = mode;
    let gold_only: Vec<String> = gold
        .ids()
        .filter(|id| !predicted.contains(id))
        .map(String::from)
        .collect();
    let predicted_only: Vec<String> = predicted
        .ids()
        .filter(|id| !gold.contains(id))
        .map(String::from)
        .collect();
    if !gold_only.is_empty() || !predicted_only.is_empty() {
        return Err(Error::DocumentMismatch {
            gold_only,
            predicted_only,
        });
    }
    let pairs: Vec<(&[EntitySpan], &[EntitySpan])> = gold
        .iter()
        .map(|(id, g)| (g, predicted.get(id).unwrap_or_default()))
        .collect();
    let tallies = exec::map_ordered(&pairs, exec, |(g, p)| tally_document(g, p));
    let mut total = Tally::new();
    for t in tallies {
        for (label, (tp, fp, fn_)) in t {
            let e = total.entry(label).or_default();
            e.0 += tp;
            e.1 += fp;
            e.2 += fn_;
        }
    }
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    let per_label = total
        .into_iter()
        .map(|(label, (t, f, n))| {
            tp += t;
            fp += f;
            fn_ += n;
            (label, Scores::from_counts(t, f, n))
        })
        .collect();
    Ok(EvalReport {
        per_label,
        micro: Scores::from_counts(tp, fp, fn_),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(n: usize) -> Corpus {
        Corpus::new(
            (0..n)
                .map(|i| Document::new(format!("d{i:02}"), "x"))
                .collect(),
        )
        .unwrap()
    }

    fn sp(start: usize, end: usize, label: &str) -> EntitySpan {
        EntitySpan {
            start,
            end,
            surface: "x".repeat(end - start),
            label: label.into(),
            score: 1.0,
            source: "t".into(),
        }
    }

    #[test]
    fn test_size_rounding() {
        assert_eq!(test_size(10, 0.3), 3);
        assert_eq!(test_size(50, 0.3), 15);
        assert_eq!(test_size(5, 0.3), 2);
        assert_eq!(test_size(2, 0.1), 1);
        assert_eq!(test_size(3, 0.9), 2);
    }

    #[test]
    fn random_split_basics() {
        let c = corpus(10);
        let r = random_split(&c, 0.3, 42).unwrap();
        assert_eq!(r.test_ids.len(), 3);
        assert_eq!(r.train_ids.len(), 7);
        assert!(r.test_ids.iter().all(|t| !r.train_ids.contains(t)));
        assert!(r.replaced.is_empty());
        assert_eq!(r, random_split(&c, 0.3, 42).unwrap());
        assert!(matches!(
            random_split(&c, 0.0, 1),
            Err(Error::InvalidRatio(_))
        ));
        assert!(matches!(
            random_split(&c, 1.0, 1),
            Err(Error::InvalidRatio(_))
        ));
        assert!(matches!(
            random_split(&corpus(1), 0.3, 1),
            Err(Error::CorpusTooSmall(1))
        ));
    }

    #[test]
    fn rewrite_shifts_offsets() {
        let doc = Document::new("d", "Amgen beat Pfizer and Amgen.");
        let spans = vec![sp(0, 5, "O"), sp(11, 17, "O"), sp(22, 27, "O")];
        let spans: Vec<_> = spans
            .into_iter()
            .map(|mut s| {
                s.surface = crate::tokenize::char_slice(&doc.text, s.start, s.end)
                    .unwrap()
                    .into();
                s
            })
            .collect();
        let (new_doc, new_spans, recs) = rewrite_document(
            &doc,
            &spans,
            &[(0, "GlaxoSmithKline"), (2, "GlaxoSmithKline")],
        );
        assert_eq!(
            new_doc.text,
            "GlaxoSmithKline beat Pfizer and GlaxoSmithKline."
        );
        let got: Vec<_> = new_spans
            .iter()
            .map(|s| (s.start, s.end, s.surface.as_str()))
            .collect();
        assert_eq!(
            got,
            [
                (0, 15, "GlaxoSmithKline"),
                (21, 27, "Pfizer"),
                (32, 47, "GlaxoSmithKline")
            ]
        );
        assert_eq!(recs.len(), 2);
        assert_eq!((recs[1].start, recs[1].end), (32, 47));
    }

    #[test]
    fn metric_examples() {
        let mut gold = LabeledDataset::new();
        gold.insert(
            "a",
            vec![sp(0, 2, "X"), sp(3, 5, "X"), sp(6, 8, "X"), sp(9, 11, "X")],
        );
        let mut pred = LabeledDataset::new();
        pred.insert(
            "a",
            vec![sp(0, 2, "X"), sp(3, 5, "X"), sp(6, 8, "X"), sp(12, 14, "X")],
        );
        let r = score(&gold, &pred, MatchMode::ExactSpan).unwrap();
        assert_eq!(r.micro.precision, 0.75);
        assert_eq!(r.micro.recall, 0.75);
        assert_eq!(r.micro.f1, 0.75);
        assert_eq!((r.micro.tp, r.micro.fp, r.micro.fn_), (3, 1, 1));

        let r = score(&gold, &gold, MatchMode::ExactSpan).unwrap();
        assert_eq!(r.micro.f1, 1.0);
        assert_eq!(r.per_label["X"].precision, 1.0);

        let mut empty = LabeledDataset::new();
        empty.insert("a", vec![]);
        let r = score(&gold, &empty, MatchMode::ExactSpan).unwrap();
        assert_eq!(
            (r.micro.precision, r.micro.recall, r.micro.f1),
            (0.0, 0.0, 0.0)
        );
        assert!(r.to_table().contains("micro"));
    }

    #[test]
    fn label_must_match_too() {
        let mut gold = LabeledDataset::new();
        gold.insert("a", vec![sp(0, 2, "X")]);
        let mut pred = LabeledDataset::new();
        pred.insert("a", vec![sp(0, 2, "Y")]);
        let r = score(&gold, &pred, MatchMode::ExactSpan).unwrap();
        assert_eq!(r.per_label["X"].fn_, 1);
        assert_eq!(r.per_label["Y"].fp, 1);
        assert_eq!(r.micro.tp, 0);
    }

    #[test]
    fn mismatched_documents() {
        let mut gold = LabeledDataset::new();
        gold.insert("a", vec![]);
        let mut pred = LabeledDataset::new();
        pred.insert("b", vec![]);
        match score(&gold, &pred, MatchMode::ExactSpan) {
            Err(Error::DocumentMismatch {
                gold_only,
                predicted_only,
            }) => {
                assert_eq!(gold_only, ["a"]);
                assert_eq!(predicted_only, ["b"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
