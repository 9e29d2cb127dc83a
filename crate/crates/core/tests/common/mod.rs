#![allow(dead_code)]

pub mod turtle;

use std::collections::BTreeSet;
use std::path::PathBuf;

use gazelabel::corpus::{
    load_corpus, load_gazetteer, load_non_entity_list, Corpus, CorpusFormat, Gazetteer,
    NonEntityList,
};
use gazelabel::kg::{Term, TripleGraph};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn corpus() -> Corpus {
    load_corpus(fixtures().join("corpus.jsonl"), CorpusFormat::Jsonl).unwrap()
}

pub fn ph_org() -> Gazetteer {
    load_gazetteer(fixtures().join("ph_org.txt"), "PH_ORG").unwrap()
}

pub fn drug() -> Gazetteer {
    load_gazetteer(fixtures().join("drug.txt"), "DRUG").unwrap()
}

pub fn nel() -> NonEntityList {
    load_non_entity_list(fixtures().join("non_entities.txt")).unwrap()
}

/// Graph as the reader's statement set.
pub fn statements(g: &TripleGraph) -> BTreeSet<turtle::Statement> {
    let node = |t: &Term| match t {
        Term::Iri { iri } => turtle::Node::Iri(iri.clone()),
        Term::Blank { id } => turtle::Node::Blank(id.clone()),
        Term::Literal {
            value,
            lang,
            datatype,
        } => turtle::Node::Literal(value.clone(), lang.clone(), datatype.clone()),
    };
    g.iter()
        .map(|(t, _)| (node(&t.subject), t.predicate.clone(), node(&t.object)))
        .collect()
}
