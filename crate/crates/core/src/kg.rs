//! RDF graphs built from entity-linking output and enriched with domain types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::annotate::EntitySpan;
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::tokenize::char_slice;

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SCHEMA: &str = "http://schema.org/";
pub const DBPEDIA: &str = "http://dbpedia.org/ontology/";
pub const DBR: &str = "http://dbpedia.org/resource/";
pub const DEFAULT_LOCAL: &str = "http://localhost/gazelabel/entity/";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";

/// Environment variable holding the entity-linking endpoint for the HTTP client.
pub const SPOTLIGHT_ENDPOINT_ENV: &str = "GAZELABEL_SPOTLIGHT_URL";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    Iri {
        iri: String,
    },
    Blank {
        id: String,
    },
    Literal {
        value: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lang: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        datatype: Option<String>,
    },
}

impl Term {
    pub fn iri(iri: impl Into<String>) -> Self {
        Term::Iri { iri: iri.into() }
    }

    pub fn blank(id: impl Into<String>) -> Self {
        Term::Blank { id: id.into() }
    }

    pub fn literal(value: impl Into<String>) -> Self {
        Term::Literal {
            value: value.into(),
            lang: None,
            datatype: None,
        }
    }

    pub fn lang_literal(value: impl Into<String>, lang: impl Into<String>) -> Self {
        Term::Literal {
            value: value.into(),
            lang: Some(lang.into()),
            datatype: None,
        }
    }
}

impl fmt::Display for Term {
    /// N-Triples form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri { iri } => write!(f, "<{}>", escape_iri(iri)),
            Term::Blank { id } => write!(f, "_:{id}"),
            Term::Literal { .. } => f.write_str(&literal_to_turtle(self, &Namespaces::empty())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Base,
    Enriched,
}

/// Subject, predicate, object. Provenance is tracked by the graph, outside
/// the triple's identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Term,
    pub predicate: String,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: impl Into<String>, object: Term) -> Self {
        Triple {
            subject,
            predicate: predicate.into(),
            object,
        }
    }
}

/// Prefix table. Lookups ignore the case of the prefix, since linker output
/// writes curies such as `Schema:Organization` and `DBpedia:Company`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Namespaces {
    map: BTreeMap<String, String>,
}

impl Default for Namespaces {
    fn default() -> Self {
        Namespaces::with_local(DEFAULT_LOCAL)
    }
}

impl Namespaces {
    pub fn empty() -> Self {
        Namespaces {
            map: BTreeMap::new(),
        }
    }

    pub fn with_local(local: &str) -> Self {
        let mut ns = Namespaces::empty();
        for (p, iri) in [
            ("rdf", RDF),
            ("rdfs", RDFS),
            ("xsd", XSD),
            ("schema", SCHEMA),
            ("dbpedia", DBPEDIA),
            ("dbr", DBR),
            ("local", local),
            ("wikidata", "http://www.wikidata.org/entity/"),
            (
                "dul",
                "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#",
            ),
            ("foaf", "http://xmlns.com/foaf/0.1/"),
        ] {
            ns.insert(p, iri);
        }
        ns
    }

    pub fn insert(&mut self, prefix: &str, iri: &str) {
        self.map.insert(prefix.to_lowercase(), iri.to_string());
    }

    pub fn get(&self, prefix: &str) -> Option<&str> {
        self.map.get(&prefix.to_lowercase()).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(p, i)| (p.as_str(), i.as_str()))
    }

    /// Expands a curie or passes an absolute IRI through. The scheme of an
    /// absolute IRI is lowercased (`Http://` occurs in linker output).
    pub fn expand(&self, value: &str) -> Result<String> {
        let value = value.trim();
        if let Some(idx) = value.find("://") {
            let (scheme, rest) = value.split_at(idx);
            return Ok(format!("{}{rest}", scheme.to_lowercase()));
        }
        let (prefix, local) = value
            .split_once(':')
            .ok_or_else(|| Error::UnknownPrefix(value.to_string()))?;
        match self.get(prefix) {
            Some(base) => Ok(format!("{base}{local}")),
            None => Err(Error::UnknownPrefix(prefix.to_string())),
        }
    }

    /// Shortest prefixed name for `iri`, if a namespace covers it and the
    /// remainder is a safe local name.
    pub fn compact(&self, iri: &str) -> Option<String> {
        self.map
            .iter()
            .filter_map(|(p, base)| {
                iri.strip_prefix(base.as_str())
                    .map(|local| (p, base.len(), local))
            })
            .filter(|(_, _, local)| is_safe_local(local))
            .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
            .map(|(p, _, local)| format!("{p}:{local}"))
    }
}

/// Conservative subset of Turtle's PN_LOCAL: no escapes needed, no trailing dot.
fn is_safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    local
        .chars()
        .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleGraph {
    triples: BTreeMap<Triple, Provenance>,
    #[serde(default)]
    namespaces: Namespaces,
}

impl TripleGraph {
    pub fn new(namespaces: Namespaces) -> Self {
        TripleGraph {
            triples: BTreeMap::new(),
            namespaces,
        }
    }

    /// Returns false when the triple was already present; its provenance is kept.
    pub fn insert(&mut self, triple: Triple, provenance: Provenance) -> bool {
        match self.triples.entry(triple) {
            std::collections::btree_map::Entry::Occupied(_) => false,
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(provenance);
                true
            }
        }
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains_key(triple)
    }

    pub fn provenance(&self, triple: &Triple) -> Option<Provenance> {
        self.triples.get(triple).copied()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Triple, Provenance)> {
        self.triples.iter().map(|(t, p)| (t, *p))
    }

    pub fn triples(&self) -> BTreeSet<&Triple> {
        self.triples.keys().collect()
    }

    pub fn count(&self, provenance: Provenance) -> usize {
        self.triples.values().filter(|&&p| p == provenance).count()
    }

    pub fn namespaces(&self) -> &Namespaces {
        &self.namespaces
    }

    pub fn is_superset_of(&self, other: &TripleGraph) -> bool {
        other.triples.keys().all(|t| self.triples.contains_key(t))
    }

    /// Adds every triple of `other`; existing provenance wins.
    pub fn extend(&mut self, other: &TripleGraph) {
        for (t, p) in other.iter() {
            self.insert(t.clone(), p);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkedAnnotation {
    pub surface: String,
    /// Character offset into the document text.
    pub offset: usize,
    pub uri: String,
    pub types: Vec<String>,
    pub confidence: f64,
}

impl LinkedAnnotation {
    pub fn end(&self) -> usize {
        self.offset + self.surface.chars().count()
    }
}

fn field_str(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

/// Parses a linker response: a top-level `Resources` array whose entries
/// carry `@URI`, `@surfaceForm`, `@offset`, `@types` and `@similarityScore`.
pub fn parse_spotlight(
    json: &str,
    namespaces: &Namespaces,
) -> Result<(Vec<LinkedAnnotation>, TripleGraph)> {
    let root: Value = serde_json::from_str(json).map_err(|e| Error::Json {
        line: e.line(),
        message: e.to_string(),
    })?;
    let resources = match root.get("Resources") {
        Some(Value::Array(items)) => items,
        _ => return Err(Error::MissingResources),
    };
    let mut annotations = Vec::with_capacity(resources.len());
    let mut graph = TripleGraph::new(namespaces.clone());
    for (index, res) in resources.iter().enumerate() {
        let get = |field: &'static str| {
            res.get(field)
                .and_then(field_str)
                .ok_or(Error::MalformedResource { index, field })
        };
        let uri = namespaces.expand(&get("@URI")?)?;
        let surface = get("@surfaceForm")?;
        let raw_offset = get("@offset")?;
        let offset = raw_offset
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::MalformedOffset {
                index,
                value: raw_offset.clone(),
            })?;
        let types = match res.get("@types") {
            None | Some(Value::Null) => Vec::new(),
            Some(v) => {
                let raw = field_str(v).ok_or(Error::MalformedResource {
                    index,
                    field: "@types",
                })?;
                raw.split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| namespaces.expand(t))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        let confidence = match res.get("@similarityScore") {
            None | Some(Value::Null) => 0.0,
            Some(v) => field_str(v)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|c| c.is_finite())
                .ok_or(Error::MalformedResource {
                    index,
                    field: "@similarityScore",
                })?,
        };
        for t in &types {
            graph.insert(
                Triple::new(Term::iri(&uri), RDF_TYPE, Term::iri(t)),
                Provenance::Base,
            );
        }
        graph.insert(
            Triple::new(Term::iri(&uri), RDFS_LABEL, Term::literal(&surface)),
            Provenance::Base,
        );
        annotations.push(LinkedAnnotation {
            surface,
            offset,
            uri,
            types,
            confidence,
        });
    }
    Ok((annotations, graph))
}

pub fn ingest_spotlight(path: impl AsRef<Path>) -> Result<(Vec<LinkedAnnotation>, TripleGraph)> {
    ingest_spotlight_with(path, &Namespaces::default())
}

pub fn ingest_spotlight_with(
    path: impl AsRef<Path>,
    namespaces: &Namespaces,
) -> Result<(Vec<LinkedAnnotation>, TripleGraph)> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_spotlight(&content, namespaces)
}

/// Lowercase, alphanumeric runs joined by `-`.
pub fn slug(surface: &str) -> String {
    let mut out = String::new();
    for word in surface
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
    {
        if !out.is_empty() {
            out.push('-');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    if out.is_empty() {
        out.push_str("entity");
    }
    out
}

/// Label to the type IRIs asserted for its spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeMap {
    map: BTreeMap<String, Vec<String>>,
}

impl Default for TypeMap {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        map.insert(
            "PH_ORG".to_string(),
            vec![format!("{SCHEMA}MedicalOrganization")],
        );
        map.insert(
            "DRUG".to_string(),
            vec![format!("{SCHEMA}Drug"), format!("{DBPEDIA}Drug")],
        );
        TypeMap { map }
    }
}

impl TypeMap {
    pub fn new() -> Self {
        TypeMap {
            map: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, label: impl Into<String>, types: Vec<String>) {
        self.map.insert(label.into(), types);
    }

    pub fn types(&self, label: &str) -> &[String] {
        self.map.get(label).map(Vec::as_slice).unwrap_or_default()
    }
}

/// Annotation with the largest character overlap; ties go to higher
/// confidence, then to the smaller URI.
pub fn link_span<'a>(
    span: &EntitySpan,
    annotations: &'a [LinkedAnnotation],
) -> Option<&'a LinkedAnnotation> {
    annotations
        .iter()
        .filter_map(|a| {
            let overlap = span.overlap_len(a.offset, a.end());
            (overlap > 0).then_some((overlap, a))
        })
        .max_by(|(oa, a), (ob, b)| {
            oa.cmp(ob)
                .then_with(|| a.confidence.total_cmp(&b.confidence))
                .then_with(|| b.uri.cmp(&a.uri))
        })
        .map(|(_, a)| a)
}

pub fn enrich(
    base: &TripleGraph,
    annotations: &[LinkedAnnotation],
    spans: &[EntitySpan],
    doc: &Document,
) -> TripleGraph {
    enrich_with(base, annotations, spans, doc, &TypeMap::default())
}

/// Copies `base` and adds type triples for every span whose label has types.
/// Spans without an overlapping annotation get a minted `local:` IRI plus a
/// label triple. Triples already present keep their provenance.
pub fn enrich_with(
    base: &TripleGraph,
    annotations: &[LinkedAnnotation],
    spans: &[EntitySpan],
    doc: &Document,
    types: &TypeMap,
) -> TripleGraph {
    let mut graph = base.clone();
    let local = graph
        .namespaces
        .get("local")
        .unwrap_or(DEFAULT_LOCAL)
        .to_string();
    for span in spans {
        let span_types = types.types(&span.label);
        if span_types.is_empty() {
            continue;
        }
        let surface = char_slice(&doc.text, span.start, span.end).unwrap_or(&span.surface);
        let subject = match link_span(span, annotations) {
            Some(a) => Term::iri(&a.uri),
            None => {
                let s = Term::iri(format!("{local}{}", slug(surface)));
                graph.insert(
                    Triple::new(s.clone(), RDFS_LABEL, Term::literal(surface)),
                    Provenance::Enriched,
                );
                s
            }
        };
        for t in span_types {
            graph.insert(
                Triple::new(subject.clone(), RDF_TYPE, Term::iri(t)),
                Provenance::Enriched,
            );
        }
    }
    graph
}

/// `100 * (|enriched| - |base|) / |base|`.
pub fn enrichment_percentage(base: &TripleGraph, enriched: &TripleGraph) -> Result<f64> {
    if base.is_empty() {
        return Err(Error::EmptyBaseGraph);
    }
    if !enriched.is_superset_of(base) {
        return Err(Error::NotSuperset);
    }
    Ok(100.0 * (enriched.len() - base.len()) as f64 / base.len() as f64)
}

fn escape_iri(iri: &str) -> String {
    let mut out = String::with_capacity(iri.len());
    for c in iri.chars() {
        if c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
            let _ = write!(out, "\\u{:04X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out
}

fn escape_literal(value: &str) -> String {
    let mut out = String::with_capacity(value.len() + 2);
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn iri_to_turtle(iri: &str, ns: &Namespaces) -> String {
    if iri == RDF_TYPE {
        return "a".to_string();
    }
    ns.compact(iri)
        .unwrap_or_else(|| format!("<{}>", escape_iri(iri)))
}

fn literal_to_turtle(term: &Term, ns: &Namespaces) -> String {
    let Term::Literal {
        value,
        lang,
        datatype,
    } = term
    else {
        unreachable!("literal_to_turtle on a non-literal")
    };
    let mut out = format!("\"{}\"", escape_literal(value));
    if let Some(lang) = lang {
        let _ = write!(out, "@{lang}");
    } else if let Some(dt) = datatype {
        let dt = ns
            .compact(dt)
            .unwrap_or_else(|| format!("<{}>", escape_iri(dt)));
        let _ = write!(out, "^^{dt}");
    }
    out
}

fn term_to_turtle(term: &Term, ns: &Namespaces) -> String {
    match term {
        Term::Iri { iri } => ns
            .compact(iri)
            .unwrap_or_else(|| format!("<{}>", escape_iri(iri))),
        Term::Blank { id } => format!("_:{id}"),
        Term::Literal { .. } => literal_to_turtle(term, ns),
    }
}

/// Turtle text: the full prefix block, then one block per subject with `;`
/// between predicates and `,` between objects. Order follows the triples'
/// sort order, so equal graphs give identical bytes.
pub fn to_turtle(graph: &TripleGraph) -> String {
    let ns = &graph.namespaces;
    let mut out = String::new();
    for (p, iri) in ns.iter() {
        let _ = writeln!(out, "@prefix {p}: <{}> .", escape_iri(iri));
    }
    let mut by_subject: BTreeMap<&Term, BTreeMap<&str, Vec<&Term>>> = BTreeMap::new();
    for t in graph.triples.keys() {
        by_subject
            .entry(&t.subject)
            .or_default()
            .entry(t.predicate.as_str())
            .or_default()
            .push(&t.object);
    }
    for (subject, preds) in by_subject {
        out.push('\n');
        out.push_str(&term_to_turtle(subject, ns));
        let n = preds.len();
        for (i, (pred, objects)) in preds.into_iter().enumerate() {
            let objects: Vec<String> = objects.iter().map(|o| term_to_turtle(o, ns)).collect();
            let sep = if i + 1 == n { " ." } else { " ;" };
            let lead = if i == 0 { " " } else { "    " };
            let _ = writeln!(
                out,
                "{lead}{} {}{sep}",
                iri_to_turtle(pred, ns),
                objects.join(", ")
            );
        }
    }
    out
}

pub fn emit_turtle(graph: &TripleGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_turtle(graph)).map_err(|e| Error::io(path, e))
}

pub const DEFAULT_BUCKET_WIDTH: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocPercentage {
    pub id: String,
    pub percentage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnrichmentReport {
    pub per_doc: Vec<DocPercentage>,
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub stddev: f64,
    pub bucket_width: f64,
    pub histogram: Vec<Bucket>,
}

pub fn enrichment_report(per_doc: &[(String, f64)]) -> Result<EnrichmentReport> {
    enrichment_report_with(per_doc, DEFAULT_BUCKET_WIDTH)
}

/// Buckets are `[k*w, (k+1)*w)` for every k between the lowest and highest
/// occupied bucket, so empty buckets inside the range are listed.
pub fn enrichment_report_with(per_doc: &[(String, f64)], width: f64) -> Result<EnrichmentReport> {
    if per_doc.is_empty() {
        return Err(Error::EmptyReport);
    }
    if let Some((id, v)) = per_doc.iter().find(|(_, v)| v.is_nan() || *v < 0.0) {
        return Err(Error::NegativePercentage {
            doc_id: id.clone(),
            value: *v,
        });
    }
    let n = per_doc.len() as f64;
    let mean = per_doc.iter().map(|(_, v)| v).sum::<f64>() / n;
    let mut sorted: Vec<f64> = per_doc.iter().map(|(_, v)| *v).collect();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    let stddev = (per_doc.iter().map(|(_, v)| (v - mean).powi(2)).sum::<f64>() / n).sqrt();

    let index = |v: f64| (v / width).floor() as i64;
    let lo = index(sorted[0]);
    let hi = index(sorted[sorted.len() - 1]);
    let mut histogram: Vec<Bucket> = (lo..=hi)
        .map(|k| Bucket {
            lower: k as f64 * width,
            upper: (k + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for v in &sorted {
        histogram[(index(*v) - lo) as usize].count += 1;
    }
    Ok(EnrichmentReport {
        per_doc: per_doc
            .iter()
            .map(|(id, p)| DocPercentage {
                id: id.clone(),
                percentage: *p,
            })
            .collect(),
        mean,
        median,
        stddev,
        bucket_width: width,
        histogram,
    })
}

impl EnrichmentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "documents  {}", self.per_doc.len());
        let _ = writeln!(out, "mean       {:.2}%", self.mean);
        let _ = writeln!(out, "median     {:.2}%", self.median);
        let _ = writeln!(out, "stddev     {:.2}", self.stddev);
        out.push('\n');
        for b in &self.histogram {
            let range = format!("[{:.0}, {:.0})", b.lower, b.upper);
            let line = format!("{range:>12}  {:>5}  {}", b.count, "#".repeat(b.count));
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }
}

#[cfg(feature = "spotlight-http")]
pub mod http {
    //! Blocking client for a Spotlight-compatible `/annotate` endpoint.

    use super::*;

    /// Endpoint from [`SPOTLIGHT_ENDPOINT_ENV`], if set.
    pub fn endpoint_from_env() -> Option<String> {
        std::env::var(SPOTLIGHT_ENDPOINT_ENV)
            .ok()
            .filter(|s| !s.is_empty())
    }

    pub fn annotate(
        endpoint: &str,
        text: &str,
        confidence: f64,
        namespaces: &Namespaces,
    ) -> Result<(Vec<LinkedAnnotation>, TripleGraph)> {
        let client = reqwest::blocking::Client::new();
        let body = client
            .post(endpoint)
            .header(reqwest::header::ACCEPT, "application/json")
            .form(&[("text", text), ("confidence", &confidence.to_string())])
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.text())
            .map_err(|e| Error::Http(e.to_string()))?;
        parse_spotlight(&body, namespaces)
    }
}
