mod common;

use std::collections::BTreeSet;

use gazelabel::annotate::{build_labeled_dataset, core_name, MatchConfig};
use gazelabel::evalsplit::{entity_disjoint_split, random_split};
use gazelabel::kg::{self, enrich, enrichment_percentage, parse_spotlight, Namespaces, Provenance};
use gazelabel::serialize::{self, parse_tagged_str, to_tagged, write_tagged, Scheme};
use gazelabel::tokenize::char_slice;

const SANOFI_SURFACES: [&str; 7] = [
    "Sanofi",
    "GlaxoSmithKline",
    "Regeneron",
    "Regeneron",
    "Gilead",
    "Sanofi",
    "J & J",
];

#[test]
fn sanofi_article_yields_seven_org_spans() {
    let corpus = common::corpus();
    let (ds, _) = build_labeled_dataset(
        &corpus,
        &[common::ph_org()],
        &common::nel(),
        &MatchConfig::default(),
    )
    .unwrap();
    let spans = ds.get("sanofi").unwrap();
    let surfaces: Vec<&str> = spans.iter().map(|s| s.surface.as_str()).collect();
    assert_eq!(surfaces, SANOFI_SURFACES);
    let text = &corpus.get("sanofi").unwrap().text;
    for s in spans {
        assert_eq!(s.label, "PH_ORG");
        assert_eq!(char_slice(text, s.start, s.end), Some(s.surface.as_str()));
    }
    assert_eq!(&text[..6], "Sanofi");
}

#[test]
fn both_labels_do_not_disturb_each_other() {
    let corpus = common::corpus();
    let (ds, summary) = build_labeled_dataset(
        &corpus,
        &[common::ph_org(), common::drug()],
        &common::nel(),
        &MatchConfig::default(),
    )
    .unwrap();
    let org: Vec<&str> = ds
        .get("sanofi")
        .unwrap()
        .iter()
        .filter(|s| s.label == "PH_ORG")
        .map(|s| s.surface.as_str())
        .collect();
    assert_eq!(org, SANOFI_SURFACES);
    assert_eq!(summary.documents, corpus.len());
    assert!(ds.get("quiet").unwrap().is_empty());
    ds.validate(&corpus).unwrap();
}

#[test]
fn typo_needs_lower_threshold() {
    let corpus = common::corpus();
    let run = |t: f64| {
        let (ds, _) = build_labeled_dataset(
            &corpus,
            &[common::ph_org()],
            &common::nel(),
            &MatchConfig::with_threshold(t),
        )
        .unwrap();
        ds.get("typo")
            .unwrap()
            .iter()
            .map(|s| s.surface.clone())
            .collect::<Vec<_>>()
    };
    assert!(run(0.9).is_empty());
    assert_eq!(run(0.8), ["Sanofy"]);
}

#[test]
fn core_name_of_worked_example() {
    assert_eq!(
        core_name("Sanofi Pharmaceuticals Ltd. Spain", &common::nel()),
        "Sanofi"
    );
    assert_eq!(
        core_name("Teva Pharmaceutical Industries Ltd.", &common::nel()),
        "Teva"
    );
    assert_eq!(core_name("Merck & Co.", &common::nel()), "Merck");
    assert_eq!(
        core_name("Johnson & Johnson", &common::nel()),
        "Johnson & Johnson"
    );
}

#[test]
fn jnj_tags_in_each_scheme() {
    let corpus = common::corpus();
    let (ds, _) = build_labeled_dataset(
        &corpus,
        &[common::ph_org()],
        &common::nel(),
        &MatchConfig::default(),
    )
    .unwrap();
    let jnj = ds.subset(["jnj"]);
    let first = |scheme| to_tagged(&jnj, &corpus, scheme).unwrap()[0].tokens[..3].to_vec();
    let tags = |scheme| {
        first(scheme)
            .into_iter()
            .map(|(_, t)| t)
            .collect::<Vec<_>>()
    };
    assert_eq!(tags(Scheme::Bioul), ["B-PH_ORG", "I-PH_ORG", "L-PH_ORG"]);
    assert_eq!(tags(Scheme::Bio), ["B-PH_ORG", "I-PH_ORG", "I-PH_ORG"]);
    assert_eq!(tags(Scheme::TokenTag), ["I-PH_ORG", "I-PH_ORG", "I-PH_ORG"]);
    let toks: Vec<String> = first(Scheme::Bio).into_iter().map(|(t, _)| t).collect();
    assert_eq!(toks, ["J", "&", "J"]);
}

#[test]
fn tagged_formats_round_trip_over_fixture_corpus() {
    let corpus = common::corpus();
    let (ds, _) = build_labeled_dataset(
        &corpus,
        &[common::ph_org(), common::drug()],
        &common::nel(),
        &MatchConfig::default(),
    )
    .unwrap();
    for scheme in [Scheme::Bio, Scheme::Bioul, Scheme::TokenTag] {
        let sentences = to_tagged(&ds, &corpus, scheme).unwrap();
        let text = write_tagged(&sentences);
        let parsed = parse_tagged_str(&text, scheme).unwrap();
        assert_eq!(parsed, sentences, "{scheme}");
        assert_eq!(write_tagged(&parsed), text);
        assert!(text.ends_with('\n') && !text.ends_with("\n\n"));
    }
    let spans = serialize::to_span_format(&ds, &corpus).unwrap();
    for s in &spans {
        for (start, end, _) in &s.entities {
            assert!(char_slice(&s.text, *start, *end).is_some());
        }
    }
    let back: Vec<serialize::SpanSentence> =
        serde_json::from_str(&serialize::span_sentences_to_json(&spans)).unwrap();
    assert_eq!(back, spans);
}

#[test]
fn bioul_checker_rejects_malformed_files() {
    let bad = [
        "Sanofi\tI-PH_ORG\n",
        "J\tB-PH_ORG\n&\tI-PH_ORG\nJ\tO\n",
        "J\tB-PH_ORG\n&\tI-DRUG\nJ\tL-DRUG\n",
        "Sanofi\tL-PH_ORG\n",
        "J\tB-PH_ORG\n&\tI-PH_ORG\n",
        "Sanofi\tS-PH_ORG\n",
        "Sanofi PH_ORG\n",
    ];
    for b in bad {
        assert!(parse_tagged_str(b, Scheme::Bioul).is_err(), "{b:?}");
    }
    assert!(parse_tagged_str(
        "J\tB-PH_ORG\n&\tI-PH_ORG\nJ\tL-PH_ORG\n\nX\tU-DRUG\n",
        Scheme::Bioul
    )
    .is_ok());
}

#[test]
fn fixture_splits() {
    let corpus = common::corpus();
    let (ds, _) = build_labeled_dataset(
        &corpus,
        &[common::ph_org()],
        &common::nel(),
        &MatchConfig::default(),
    )
    .unwrap();
    let r = random_split(&corpus, 0.3, 42).unwrap();
    assert_eq!(r.test_ids.len() + r.train_ids.len(), corpus.len());
    let d =
        entity_disjoint_split(&corpus, &ds, &common::ph_org(), &common::nel(), 0.3, 42).unwrap();
    assert_eq!(d.split.test_ids.len(), 2);
    d.dataset.validate(&d.corpus).unwrap();
    assert!(d.test_entities.is_disjoint(&d.train_entities));
}

#[test]
fn kg_fixture_reports_fifty_percent() {
    let corpus = common::corpus();
    let (ds, _) = build_labeled_dataset(
        &corpus,
        &[common::ph_org(), common::drug()],
        &common::nel(),
        &MatchConfig::default(),
    )
    .unwrap();
    let doc = corpus.get("kg50").unwrap();
    let (anns, base) =
        kg::ingest_spotlight(common::fixtures().join("spotlight/kg50.json")).unwrap();
    assert_eq!(base.len(), 10);
    let enriched = enrich(&base, &anns, ds.get("kg50").unwrap(), doc);
    assert_eq!(enriched.count(Provenance::Enriched), 5);
    assert_eq!(enrichment_percentage(&base, &enriched).unwrap(), 50.0);
}

#[test]
fn fixture_graphs_round_trip_through_turtle() {
    let corpus = common::corpus();
    let (ds, _) = build_labeled_dataset(
        &corpus,
        &[common::ph_org(), common::drug()],
        &common::nel(),
        &MatchConfig::default(),
    )
    .unwrap();
    let mut seen = BTreeSet::new();
    for entry in std::fs::read_dir(common::fixtures().join("spotlight")).unwrap() {
        let path = entry.unwrap().path();
        let id = path.file_stem().unwrap().to_string_lossy().into_owned();
        let content = std::fs::read_to_string(&path).unwrap();
        let (anns, base) = parse_spotlight(&content, &Namespaces::default()).unwrap();
        let g = enrich(&base, &anns, ds.get(&id).unwrap(), corpus.get(&id).unwrap());
        let ttl = kg::to_turtle(&g);
        assert_eq!(
            common::turtle::parse(&ttl).unwrap(),
            common::statements(&g),
            "{id}"
        );
        assert_eq!(kg::to_turtle(&g.clone()), ttl);
        seen.insert(id);
    }
    assert_eq!(seen.len(), 4);
}
