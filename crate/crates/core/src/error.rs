use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed JSON: {message}")]
    Json { line: usize, message: String },

    #[error("line {line}: document id is empty")]
    EmptyId { line: usize },

    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    #[error("document `{0}` has empty text")]
    EmptyText(String),

    #[error("gazetteer `{label}`: zero usable entries")]
    EmptyGazetteer { label: String },

    #[error("invalid entity label `{0}` (expected [A-Z][A-Z0-9_]*)")]
    InvalidLabel(String),

    #[error("duplicate gazetteer label `{0}`")]
    DuplicateLabel(String),

    #[error("line {line}: unknown section header `[{section}]`")]
    UnknownSection { line: usize, section: String },

    #[error("line {line}: term `{term}` appears before any section header")]
    TermOutsideSection { line: usize, term: String },

    #[error("non-entity list is empty")]
    EmptyNonEntityList,

    #[error("line {line}: malformed lemma exception `{content}` (expected surface<TAB>lemma)")]
    MalformedLemma { line: usize, content: String },

    #[error("threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),

    #[error("document `{doc_id}`: span {start}..{end} crosses a sentence boundary")]
    CrossSentenceSpan {
        doc_id: String,
        start: usize,
        end: usize,
    },

    #[error("document `{doc_id}`: span {start}..{end} does not align with token boundaries")]
    Misaligned {
        doc_id: String,
        start: usize,
        end: usize,
    },

    #[error(
        "document `{doc_id}`: span {start}..{end} is out of range or inconsistent with the text"
    )]
    InvalidSpan {
        doc_id: String,
        start: usize,
        end: usize,
    },

    #[error("line {line}: expected 2 tab-separated columns, found {found}")]
    BadColumns { line: usize, found: usize },

    #[error("line {line}: tag `{tag}` is malformed for {scheme}: {reason}")]
    MalformedTag {
        line: usize,
        tag: String,
        scheme: &'static str,
        reason: String,
    },

    #[error("split ratio {0} outside (0, 1)")]
    InvalidRatio(f64),

    #[error("corpus has {0} document(s); at least 2 are required to split")]
    CorpusTooSmall(usize),

    #[error("no training entities of label `{label}` are available as replacements")]
    NoReplacementEntities { label: String },

    #[error("only {available} document(s) can form an entity-disjoint test portion, {required} required")]
    InsufficientTestDocuments { available: usize, required: usize },

    #[error("gold and predicted datasets cover different documents (gold only: {gold_only:?}; predicted only: {predicted_only:?})")]
    DocumentMismatch {
        gold_only: Vec<String>,
        predicted_only: Vec<String>,
    },

    #[error("unknown document id `{0}`")]
    UnknownDocument(String),

    #[error("entity-linking response has no `Resources` array")]
    MissingResources,

    #[error("resource {index}: malformed offset `{value}`")]
    MalformedOffset { index: usize, value: String },

    #[error("resource {index}: malformed field `{field}`")]
    MalformedResource { index: usize, field: &'static str },

    #[error("unknown namespace prefix `{0}`")]
    UnknownPrefix(String),

    #[error("base graph is empty; enrichment percentage is undefined")]
    EmptyBaseGraph,

    #[error("enriched graph does not contain every base triple")]
    NotSuperset,

    #[error("enrichment report needs at least one document")]
    EmptyReport,

    #[error("document `{doc_id}`: negative enrichment percentage {value}")]
    NegativePercentage { doc_id: String, value: f64 },

    #[error("http request failed: {0}")]
    Http(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
