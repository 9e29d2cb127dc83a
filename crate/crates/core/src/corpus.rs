//! Corpus, gazetteer and non-entity list ingestion.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            source: None,
        }
    }
}

/// Ordered collection of documents with unique ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    documents: Vec<Document>,
    index: HashMap<String, usize>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut index = HashMap::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            if doc.id.is_empty() {
                return Err(Error::EmptyId { line: i + 1 });
            }
            if doc.text.is_empty() {
                return Err(Error::EmptyText(doc.id.clone()));
            }
            if index.insert(doc.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(doc.id.clone()));
            }
        }
        Ok(Corpus { documents, index })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.index.get(id).map(|&i| &self.documents[i])
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.documents.iter().map(|d| d.id.as_str())
    }

    /// Keeps the documents whose ids are listed, in corpus order.
    pub fn subset<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<Corpus> {
        let wanted: HashSet<&str> = ids.into_iter().collect();
        for id in &wanted {
            if !self.index.contains_key(*id) {
                return Err(Error::UnknownDocument((*id).to_string()));
            }
        }
        Corpus::new(
            self.documents
                .iter()
                .filter(|d| wanted.contains(d.id.as_str()))
                .cloned()
                .collect(),
        )
    }

    pub fn into_documents(self) -> Vec<Document> {
        self.documents
    }

    /// Parses JSONL text; blank lines are skipped, errors carry 1-based line numbers.
    pub fn from_jsonl(content: &str) -> Result<Self> {
        let mut documents = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in content.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let doc: Document = serde_json::from_str(line).map_err(|e| Error::Json {
                line: line_no,
                message: e.to_string(),
            })?;
            if doc.id.is_empty() {
                return Err(Error::EmptyId { line: line_no });
            }
            if doc.text.is_empty() {
                return Err(Error::EmptyText(doc.id));
            }
            if !seen.insert(doc.id.clone()) {
                return Err(Error::DuplicateId(doc.id));
            }
            documents.push(doc);
        }
        Corpus::new(documents)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for doc in &self.documents {
            out.push_str(&serde_json::to_string(doc).expect("document serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    PlaintextDir,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "dir" | "plaintext" | "plaintext_dir" | "plaintext-dir" => {
                Ok(CorpusFormat::PlaintextDir)
            }
            other => Err(format!("unknown corpus format `{other}`")),
        }
    }
}

pub fn load_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus> {
    let path = path.as_ref();
    match format {
        CorpusFormat::Jsonl => {
            let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Corpus::from_jsonl(&content)
        }
        CorpusFormat::PlaintextDir => load_plaintext_dir(path),
    }
}

fn load_plaintext_dir(dir: &Path) -> Result<Corpus> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() && path.extension().is_some_and(|ext| ext == "txt") {
            files.push(path);
        }
    }
    files.sort();
    let mut documents = Vec::with_capacity(files.len());
    for path in files {
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        documents.push(Document {
            id,
            text,
            source: path.file_name().map(|s| s.to_string_lossy().into_owned()),
        });
    }
    Corpus::new(documents)
}

pub(crate) fn is_valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

/// Closed set of surface names for one entity class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gazetteer {
    label: String,
    entries: BTreeSet<String>,
}

impl Gazetteer {
    pub fn new<I, S>(label: impl Into<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let label = label.into();
        if !is_valid_label(&label) {
            return Err(Error::InvalidLabel(label));
        }
        let entries: BTreeSet<String> = entries
            .into_iter()
            .map(|e| e.as_ref().trim().to_string())
            .filter(|e| !e.is_empty())
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyGazetteer { label });
        }
        Ok(Gazetteer { label, entries })
    }

    pub fn parse(label: impl Into<String>, content: &str) -> Result<Self> {
        Gazetteer::new(label, content.lines())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn contains(&self, entry: &str) -> bool {
        self.entries.contains(entry.trim())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_gazetteer(path: impl AsRef<Path>, label: &str) -> Result<Gazetteer> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Gazetteer::parse(label, &content)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NonEntityCategory {
    Country,
    LegalForm,
    DomainKeyword,
}

impl NonEntityCategory {
    pub fn section(self) -> &'static str {
        match self {
            NonEntityCategory::Country => "countries",
            NonEntityCategory::LegalForm => "legal_forms",
            NonEntityCategory::DomainKeyword => "domain_keywords",
        }
    }
}

impl fmt::Display for NonEntityCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.section())
    }
}

/// Case-folds a term and strips trailing periods, so "Ltd." and "LTD" share a key.
pub fn fold_term(term: &str) -> String {
    let folded: Vec<String> = term.split_whitespace().map(|w| w.to_lowercase()).collect();
    let mut joined = folded.join(" ");
    while joined.ends_with('.') {
        joined.pop();
    }
    joined
}

/// Countries, legal forms and domain keywords that never belong to an entity's core name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NonEntityList {
    terms: HashMap<String, NonEntityCategory>,
    max_phrase_words: usize,
}

impl NonEntityList {
    pub fn new<C, L, K>(countries: C, legal_forms: L, domain_keywords: K) -> Self
    where
        C: IntoIterator,
        C::Item: AsRef<str>,
        L: IntoIterator,
        L::Item: AsRef<str>,
        K: IntoIterator,
        K::Item: AsRef<str>,
    {
        let mut list = NonEntityList::default();
        for t in countries {
            list.insert(t.as_ref(), NonEntityCategory::Country);
        }
        for t in legal_forms {
            list.insert(t.as_ref(), NonEntityCategory::LegalForm);
        }
        for t in domain_keywords {
            list.insert(t.as_ref(), NonEntityCategory::DomainKeyword);
        }
        list
    }

    fn insert(&mut self, term: &str, category: NonEntityCategory) {
        let key = fold_term(term);
        if key.is_empty() {
            return;
        }
        self.max_phrase_words = self.max_phrase_words.max(key.split(' ').count());
        // First section wins when a term is listed twice.
        self.terms.entry(key).or_insert(category);
    }

    pub fn parse(content: &str) -> Result<Self> {
        let mut list = NonEntityList::default();
        let mut section: Option<NonEntityCategory> = None;
        let mut saw_anything = false;
        for (i, raw) in content.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            saw_anything = true;
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match name.trim() {
                    "countries" => NonEntityCategory::Country,
                    "legal_forms" => NonEntityCategory::LegalForm,
                    "domain_keywords" => NonEntityCategory::DomainKeyword,
                    other => {
                        return Err(Error::UnknownSection {
                            line: i + 1,
                            section: other.to_string(),
                        })
                    }
                });
                continue;
            }
            match section {
                Some(cat) => list.insert(line, cat),
                None => {
                    return Err(Error::TermOutsideSection {
                        line: i + 1,
                        term: line.to_string(),
                    })
                }
            }
        }
        if !saw_anything {
            return Err(Error::EmptyNonEntityList);
        }
        Ok(list)
    }

    pub fn category(&self, term: &str) -> Option<NonEntityCategory> {
        self.terms.get(&fold_term(term)).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.category(term).is_some()
    }

    /// Longest listed phrase in words ("United States" counts 2).
    pub fn max_phrase_words(&self) -> usize {
        self.max_phrase_words
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self, category: NonEntityCategory) -> BTreeSet<&str> {
        self.terms
            .iter()
            .filter(|(_, &c)| c == category)
            .map(|(t, _)| t.as_str())
            .collect()
    }
}

pub fn load_non_entity_list(path: impl AsRef<Path>) -> Result<NonEntityList> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    NonEntityList::parse(&content)
}
