//! Training-data writers: sentence spans, BIO, BIOUL and token-tag, plus a
//! CoNLL-style reader that enforces each scheme's tag grammar.

use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::annotate::{EntitySpan, LabeledDataset};
use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::tokenize::{split_sentences, CharMap, Token, Tokenizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "BIO")]
    Bio,
    #[serde(rename = "BIOUL")]
    Bioul,
    #[serde(rename = "TOKEN_TAG")]
    TokenTag,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Bio => "BIO",
            Scheme::Bioul => "BIOUL",
            Scheme::TokenTag => "TOKEN_TAG",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bio" => Ok(Scheme::Bio),
            "bioul" => Ok(Scheme::Bioul),
            "token-tag" | "token_tag" | "tokentag" => Ok(Scheme::TokenTag),
            other => Err(format!("unknown tagging scheme `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedSentence {
    pub tokens: Vec<(String, String)>,
    pub scheme: Scheme,
}

impl TaggedSentence {
    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|(_, t)| t.as_str())
    }
}

/// One sentence with sentence-local character offsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanSentence {
    pub text: String,
    pub entities: Vec<(usize, usize, String)>,
}

struct Sentence<'a> {
    range: Range<usize>,
    spans: Vec<&'a EntitySpan>,
}

fn assign_sentences<'a>(doc: &Document, spans: &'a [EntitySpan]) -> Result<Vec<Sentence<'a>>> {
    let mut sentences: Vec<Sentence<'a>> = split_sentences(&doc.text)
        .into_iter()
        .map(|range| Sentence {
            range,
            spans: Vec::new(),
        })
        .collect();
    for span in spans {
        let home = sentences
            .iter_mut()
            .find(|s| s.range.start <= span.start && span.start < s.range.end);
        match home {
            Some(s) if span.end <= s.range.end => s.spans.push(span),
            Some(_) => {
                return Err(Error::CrossSentenceSpan {
                    doc_id: doc.id.clone(),
                    start: span.start,
                    end: span.end,
                })
            }
            None => {
                return Err(Error::InvalidSpan {
                    doc_id: doc.id.clone(),
                    start: span.start,
                    end: span.end,
                })
            }
        }
    }
    Ok(sentences)
}

fn dataset_documents<'a>(
    ds: &'a LabeledDataset,
    corpus: &'a Corpus,
) -> Result<Vec<(&'a Document, &'a [EntitySpan])>> {
    ds.iter()
        .map(|(id, spans)| {
            corpus
                .get(id)
                .map(|doc| (doc, spans))
                .ok_or_else(|| Error::UnknownDocument(id.to_string()))
        })
        .collect()
}

pub fn to_span_format(ds: &LabeledDataset, corpus: &Corpus) -> Result<Vec<SpanSentence>> {
    to_span_format_with(ds, corpus, Execution::default())
}

pub fn to_span_format_with(
    ds: &LabeledDataset,
    corpus: &Corpus,
    exec: Execution,
) -> Result<Vec<SpanSentence>> {
    let docs = dataset_documents(ds, corpus)?;
    let per_doc = exec::try_map_ordered(&docs, exec, |(doc, spans)| {
        let map = CharMap::new(&doc.text);
        let sentences = assign_sentences(doc, spans)?;
        Ok::<_, Error>(
            sentences
                .into_iter()
                .map(|s| SpanSentence {
                    text: map
                        .slice(&doc.text, s.range.start, s.range.end)
                        .expect("sentence range inside text")
                        .to_string(),
                    entities: s
                        .spans
                        .iter()
                        .map(|e| {
                            (
                                e.start - s.range.start,
                                e.end - s.range.start,
                                e.label.clone(),
                            )
                        })
                        .collect(),
                })
                .collect::<Vec<_>>(),
        )
    })?;
    Ok(per_doc.into_iter().flatten().collect())
}

/// Tags for `n` tokens given entity token ranges (sorted, disjoint).
pub fn tag_tokens(scheme: Scheme, n: usize, entities: &[(Range<usize>, &str)]) -> Vec<String> {
    let mut tags = vec!["O".to_string(); n];
    for (range, label) in entities {
        let len = range.len();
        for (k, idx) in range.clone().enumerate() {
            let prefix = match scheme {
                Scheme::TokenTag => "I",
                Scheme::Bio => {
                    if k == 0 {
                        "B"
                    } else {
                        "I"
                    }
                }
                Scheme::Bioul => match (len, k) {
                    (1, _) => "U",
                    (_, 0) => "B",
                    (_, k) if k + 1 == len => "L",
                    _ => "I",
                },
            };
            tags[idx] = format!("{prefix}-{label}");
        }
    }
    tags
}

fn tag_document(
    doc: &Document,
    spans: &[EntitySpan],
    tokenizer: &Tokenizer,
    scheme: Scheme,
) -> Result<Vec<TaggedSentence>> {
    let sentences = assign_sentences(doc, spans)?;
    let tokens: Vec<Token> = tokenizer.tokenize(&doc.text);
    let mut out = Vec::with_capacity(sentences.len());
    for s in sentences {
        let sent_tokens: Vec<&Token> = tokens
            .iter()
            .filter(|t| t.start >= s.range.start && t.end <= s.range.end)
            .collect();
        if sent_tokens.is_empty() {
            continue;
        }
        let mut entities = Vec::with_capacity(s.spans.len());
        for span in &s.spans {
            let first = sent_tokens.iter().position(|t| t.start == span.start);
            let last = sent_tokens.iter().position(|t| t.end == span.end);
            match (first, last) {
                (Some(a), Some(b)) if a <= b => entities.push((a..b + 1, span.label.as_str())),
                _ => {
                    return Err(Error::Misaligned {
                        doc_id: doc.id.clone(),
                        start: span.start,
                        end: span.end,
                    })
                }
            }
        }
        let tags = tag_tokens(scheme, sent_tokens.len(), &entities);
        out.push(TaggedSentence {
            tokens: sent_tokens
                .iter()
                .map(|t| t.text.clone())
                .zip(tags)
                .collect(),
            scheme,
        });
    }
    Ok(out)
}

/// Token-level tagging of every sentence in the dataset, in dataset order.
pub fn to_tagged(
    ds: &LabeledDataset,
    corpus: &Corpus,
    scheme: Scheme,
) -> Result<Vec<TaggedSentence>> {
    to_tagged_with(
        ds,
        corpus,
        scheme,
        &Tokenizer::default(),
        Execution::default(),
    )
}

pub fn to_tagged_with(
    ds: &LabeledDataset,
    corpus: &Corpus,
    scheme: Scheme,
    tokenizer: &Tokenizer,
    exec: Execution,
) -> Result<Vec<TaggedSentence>> {
    let docs = dataset_documents(ds, corpus)?;
    let per_doc = exec::try_map_ordered(&docs, exec, |(doc, spans)| {
        tag_document(doc, spans, tokenizer, scheme)
    })?;
    Ok(per_doc.into_iter().flatten().collect())
}

pub fn to_bioul(ds: &LabeledDataset, corpus: &Corpus) -> Result<Vec<TaggedSentence>> {
    to_tagged(ds, corpus, Scheme::Bioul)
}

pub fn to_bio(ds: &LabeledDataset, corpus: &Corpus) -> Result<Vec<TaggedSentence>> {
    to_tagged(ds, corpus, Scheme::Bio)
}

pub fn to_token_tag(ds: &LabeledDataset, corpus: &Corpus) -> Result<Vec<TaggedSentence>> {
    to_tagged(ds, corpus, Scheme::TokenTag)
}

/// BIOUL to BIO rewrite: `U-` becomes `B-`, `L-` becomes `I-`.
pub fn bioul_to_bio(sentence: &TaggedSentence) -> TaggedSentence {
    let tokens = sentence
        .tokens
        .iter()
        .map(|(tok, tag)| {
            let tag = if let Some(l) = tag.strip_prefix("U-") {
                format!("B-{l}")
            } else if let Some(l) = tag.strip_prefix("L-") {
                format!("I-{l}")
            } else {
                tag.clone()
            };
            (tok.clone(), tag)
        })
        .collect();
    TaggedSentence {
        tokens,
        scheme: Scheme::Bio,
    }
}

fn split_tag(tag: &str) -> Option<(char, &str)> {
    if tag == "O" {
        return Some(('O', ""));
    }
    let (prefix, label) = tag.split_once('-')?;
    let mut chars = prefix.chars();
    match (chars.next(), chars.next()) {
        (Some(p), None) if !label.is_empty() => Some((p, label)),
        _ => None,
    }
}

/// Checks a tag sequence against the scheme grammar; on failure returns the
/// offending position and a reason.
pub fn check_tags<'a, I>(scheme: Scheme, tags: I) -> std::result::Result<(), (usize, String)>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut open: Option<&str> = None;
    let mut prev: Option<(char, &str)> = None;
    let mut count = 0;
    for (i, tag) in tags.into_iter().enumerate() {
        count = i + 1;
        let (p, label) = split_tag(tag).ok_or_else(|| (i, "not `O` or `X-LABEL`".to_string()))?;
        match scheme {
            Scheme::TokenTag => {
                if p != 'O' && p != 'I' {
                    return Err((i, format!("prefix `{p}` not allowed, only I- and O")));
                }
            }
            Scheme::Bio => match p {
                'O' | 'B' => {}
                'I' => match prev {
                    Some(('B' | 'I', l)) if l == label => {}
                    _ => return Err((i, format!("I-{label} does not continue a {label} entity"))),
                },
                _ => return Err((i, format!("prefix `{p}` not allowed in BIO"))),
            },
            Scheme::Bioul => match p {
                'O' | 'B' | 'U' => {
                    if let Some(l) = open {
                        return Err((i, format!("unterminated B-{l} run")));
                    }
                    if p == 'B' {
                        open = Some(label);
                    }
                }
                'I' | 'L' => {
                    if open != Some(label) {
                        return Err((i, format!("{p}-{label} without a preceding B-{label}")));
                    }
                    if p == 'L' {
                        open = None;
                    }
                }
                _ => return Err((i, format!("prefix `{p}` not allowed in BIOUL"))),
            },
        }
        prev = Some((p, label));
    }
    if let Some(l) = open {
        return Err((count, format!("unterminated B-{l} run at sentence end")));
    }
    Ok(())
}

/// Two-column TAB-separated text, blank line between sentences, trailing newline.
pub fn write_tagged(sentences: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for (i, s) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (tok, tag) in &s.tokens {
            out.push_str(tok);
            out.push('\t');
            out.push_str(tag);
            out.push('\n');
        }
    }
    out
}

pub fn parse_tagged_str(content: &str, scheme: Scheme) -> Result<Vec<TaggedSentence>> {
    let mut sentences = Vec::new();
    let mut current: Vec<(String, String)> = Vec::new();
    let mut first_line = 0;
    let mut flush = |tokens: &mut Vec<(String, String)>, first_line: usize| -> Result<()> {
        if tokens.is_empty() {
            return Ok(());
        }
        if let Err((k, reason)) = check_tags(scheme, tokens.iter().map(|(_, t)| t.as_str())) {
            let k = k.min(tokens.len() - 1);
            return Err(Error::MalformedTag {
                line: first_line + k,
                tag: tokens[k].1.clone(),
                scheme: scheme.name(),
                reason,
            });
        }
        sentences.push(TaggedSentence {
            tokens: std::mem::take(tokens),
            scheme,
        });
        Ok(())
    };
    for (i, line) in content.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            flush(&mut current, first_line)?;
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 || cols[0].is_empty() || cols[1].is_empty() {
            return Err(Error::BadColumns {
                line: line_no,
                found: cols.iter().filter(|c| !c.is_empty()).count(),
            });
        }
        if current.is_empty() {
            first_line = line_no;
        }
        current.push((cols[0].to_string(), cols[1].to_string()));
    }
    flush(&mut current, first_line)?;
    Ok(sentences)
}

pub fn parse_tagged(path: impl AsRef<Path>, scheme: Scheme) -> Result<Vec<TaggedSentence>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_tagged_str(&content, scheme)
}

pub fn span_sentences_to_json(sentences: &[SpanSentence]) -> String {
    let mut s = serde_json::to_string_pretty(sentences).expect("span sentences serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds_one(id: &str, spans: &[(usize, usize, &str, &str)]) -> LabeledDataset {
        let mut ds = LabeledDataset::new();
        ds.insert(
            id,
            spans
                .iter()
                .map(|&(s, e, surf, l)| EntitySpan {
                    start: s,
                    end: e,
                    surface: surf.into(),
                    label: l.into(),
                    score: 1.0,
                    source: "test".into(),
                })
                .collect(),
        );
        ds
    }

    fn corpus(id: &str, text: &str) -> Corpus {
        Corpus::new(vec![Document::new(id, text)]).unwrap()
    }

    fn tags(s: &TaggedSentence) -> Vec<&str> {
        s.tags().collect()
    }

    #[test]
    fn span_format_rebases_offsets() {
        let c = corpus("d", "Sanofi wins. Gilead loses.");
        let ds = ds_one(
            "d",
            &[(0, 6, "Sanofi", "PH_ORG"), (13, 19, "Gilead", "PH_ORG")],
        );
        let out = to_span_format(&ds, &c).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].text, "Sanofi wins.");
        assert_eq!(out[0].entities, vec![(0, 6, "PH_ORG".to_string())]);
        assert_eq!(out[1].text, "Gilead loses.");
        assert_eq!(out[1].entities, vec![(0, 6, "PH_ORG".to_string())]);
        let json = span_sentences_to_json(&out);
        let back: Vec<SpanSentence> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, out);
        assert!(json.contains("\"entities\""));
    }

    #[test]
    fn span_format_no_spans_and_cross_sentence() {
        let c = corpus("d", "Sanofi wins. Gilead loses.");
        let out = to_span_format(&ds_one("d", &[]), &c).unwrap();
        assert!(out.iter().all(|s| s.entities.is_empty()));
        assert_eq!(out.len(), 2);

        let bad = ds_one("d", &[(7, 19, "wins. Gilead", "PH_ORG")]);
        assert!(matches!(
            to_span_format(&bad, &c),
            Err(Error::CrossSentenceSpan {
                start: 7,
                end: 19,
                ..
            })
        ));
    }

    #[test]
    fn jj_in_every_scheme() {
        let c = corpus("d", "J & J");
        let ds = ds_one("d", &[(0, 5, "J & J", "PH_ORG")]);
        assert_eq!(
            tags(&to_bioul(&ds, &c).unwrap()[0]),
            ["B-PH_ORG", "I-PH_ORG", "L-PH_ORG"]
        );
        assert_eq!(
            tags(&to_bio(&ds, &c).unwrap()[0]),
            ["B-PH_ORG", "I-PH_ORG", "I-PH_ORG"]
        );
        assert_eq!(
            tags(&to_token_tag(&ds, &c).unwrap()[0]),
            ["I-PH_ORG", "I-PH_ORG", "I-PH_ORG"]
        );
    }

    #[test]
    fn single_token_entity() {
        let c = corpus("d", "Sanofi wins .");
        let ds = ds_one("d", &[(0, 6, "Sanofi", "PH_ORG")]);
        let s = &to_bioul(&ds, &c).unwrap()[0];
        assert_eq!(
            s.tokens,
            vec![
                ("Sanofi".to_string(), "U-PH_ORG".to_string()),
                ("wins".to_string(), "O".to_string()),
                (".".to_string(), "O".to_string())
            ]
        );
        assert_eq!(tags(&to_bio(&ds, &c).unwrap()[0]), ["B-PH_ORG", "O", "O"]);
        assert_eq!(
            tags(&to_token_tag(&ds, &c).unwrap()[0]),
            ["I-PH_ORG", "O", "O"]
        );
        let empty = ds_one("d", &[]);
        for scheme in [Scheme::Bio, Scheme::Bioul, Scheme::TokenTag] {
            assert!(to_tagged(&empty, &c, scheme).unwrap()[0]
                .tags()
                .all(|t| t == "O"));
        }
    }

    #[test]
    fn misaligned_span_is_an_error() {
        let c = corpus("d", "Sanofi wins.");
        let ds = ds_one("d", &[(0, 3, "San", "PH_ORG")]);
        assert!(matches!(to_bioul(&ds, &c), Err(Error::Misaligned { .. })));
    }

    #[test]
    fn unknown_document() {
        let c = corpus("d", "x");
        assert!(matches!(
            to_bio(&ds_one("zz", &[]), &c),
            Err(Error::UnknownDocument(_))
        ));
    }

    #[test]
    fn grammar_checks() {
        let ok = |s: Scheme, t: &[&str]| check_tags(s, t.iter().copied()).is_ok();
        assert!(ok(Scheme::Bioul, &["B-X", "I-X", "L-X", "O", "U-Y"]));
        assert!(!ok(Scheme::Bioul, &["O", "L-X"]));
        assert!(!ok(Scheme::Bioul, &["B-X", "O"]));
        assert!(!ok(Scheme::Bioul, &["B-X", "I-Y", "L-Y"]));
        assert!(!ok(Scheme::Bioul, &["B-X"]));
        assert!(ok(Scheme::Bio, &["B-X", "I-X", "B-X", "O"]));
        assert!(!ok(Scheme::Bio, &["O", "I-X"]));
        assert!(!ok(Scheme::Bio, &["I-X"]));
        assert!(!ok(Scheme::Bio, &["B-X", "I-Y"]));
        assert!(!ok(Scheme::Bio, &["U-X"]));
        assert!(ok(Scheme::TokenTag, &["I-X", "O", "I-Y"]));
        assert!(!ok(Scheme::TokenTag, &["B-X"]));
        assert!(!ok(Scheme::Bio, &["B-"]));
        assert!(!ok(Scheme::Bio, &["BB-X"]));
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let sents = vec![
            TaggedSentence {
                tokens: vec![
                    ("J".into(), "B-PH_ORG".into()),
                    ("&".into(), "I-PH_ORG".into()),
                    ("J".into(), "L-PH_ORG".into()),
                ],
                scheme: Scheme::Bioul,
            },
            TaggedSentence {
                tokens: vec![("wins".into(), "O".into())],
                scheme: Scheme::Bioul,
            },
        ];
        let text = write_tagged(&sents);
        assert_eq!(text, "J\tB-PH_ORG\n&\tI-PH_ORG\nJ\tL-PH_ORG\n\nwins\tO\n");
        assert_eq!(parse_tagged_str(&text, Scheme::Bioul).unwrap(), sents);

        let err = parse_tagged_str("a\tO\nb\tL-PH_ORG\n", Scheme::Bioul).unwrap_err();
        assert!(
            matches!(err, Error::MalformedTag { line: 2, .. }),
            "{err:?}"
        );

        let bio = "Sanofi\tB-PH_ORG\nwins\tO\n";
        assert!(parse_tagged_str(bio, Scheme::Bio).is_ok());
        let err = parse_tagged_str(bio, Scheme::Bioul).unwrap_err();
        assert!(
            matches!(err, Error::MalformedTag { line: 2, .. }),
            "{err:?}"
        );

        assert!(matches!(
            parse_tagged_str("a\tO\tx\n", Scheme::Bio),
            Err(Error::BadColumns { line: 1, found: 3 })
        ));
        assert!(matches!(
            parse_tagged_str("\n\nlonely\n", Scheme::Bio),
            Err(Error::BadColumns { line: 3, found: 1 })
        ));
    }
}
