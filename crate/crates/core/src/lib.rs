//! Gazetteer-driven weak labeling for custom NER classes.
//!
//! The crate turns a raw corpus plus entity gazetteers into a labeled
//! dataset, writes that dataset in the span, BIO, BIOUL and token-tag layouts
//! NER trainers consume, builds random and entity-disjoint evaluation splits,
//! scores predictions, and enriches entity-linking RDF graphs with
//! domain-specific type triples.

pub mod annotate;
pub mod corpus;
pub mod error;
pub mod evalsplit;
pub mod exec;
pub mod kg;
pub mod serialize;
pub mod similarity;
pub mod synth;
pub mod tokenize;

pub use annotate::{
    annotate_document, build_labeled_dataset, concatenate_consecutive, core_name,
    merge_with_precedence, AnnotationSummary, Annotator, EntitySpan, LabeledDataset, MatchConfig,
};
pub use corpus::{
    load_corpus, load_gazetteer, load_non_entity_list, Corpus, CorpusFormat, Document, Gazetteer,
    NonEntityList,
};
pub use error::{Error, Result};
pub use evalsplit::{
    entity_disjoint_split, random_split, score, DisjointSplit, EvalReport, MatchMode, Scores,
    SplitResult,
};
pub use exec::Execution;
pub use kg::{
    emit_turtle, enrich, enrichment_percentage, enrichment_report, ingest_spotlight, to_turtle,
    EnrichmentReport, LinkedAnnotation, Namespaces, Provenance, Term, Triple, TripleGraph,
};
pub use serialize::{Scheme, SpanSentence, TaggedSentence};
