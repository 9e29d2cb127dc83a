//! Seeded synthetic news corpora for benchmarks and end-to-end checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, Gazetteer, NonEntityList};
use crate::similarity::match_score;

pub const COUNTRIES: &[&str] = &["Spain", "Germany", "France", "Switzerland", "Ireland"];
pub const LEGAL_FORMS: &[&str] = &["Inc.", "Ltd.", "AG", "S.A.", "plc", "GmbH", "Corp."];
pub const DOMAIN_KEYWORDS: &[&str] = &[
    "Pharmaceuticals",
    "Pharma",
    "Biotech",
    "Therapeutics",
    "Laboratories",
];

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "tr", "kl",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ae", "io"];
const CODAS: &[&str] = &["", "", "n", "r", "x", "s", "l"];

const WITH_ONE: &[&str] = &[
    "{0} reported quarterly revenue of {n} million dollars.",
    "Shares of {0} rose {n} percent in early trading.",
    "{0} said the phase {p} trial met its primary endpoint.",
    "Regulators approved a new indication filed by {0}.",
    "Analysts expect {0} to raise its guidance next quarter.",
];

const WITH_TWO: &[&str] = &[
    "{0} agreed to acquire {1} for {n} million dollars.",
    "{0} and {1} announced a licensing deal on Monday.",
    "A court ruled in favour of {0} in its patent dispute with {1}.",
];

const FILLER: &[&str] = &[
    "Markets closed higher on Tuesday.",
    "The central bank left interest rates unchanged.",
    "Hospital admissions fell for the third straight week.",
    "Investors remained cautious ahead of the earnings season.",
];

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub gazetteer: Gazetteer,
    pub non_entities: NonEntityList,
    /// Core names in generation order.
    pub entities: Vec<String>,
}

pub fn non_entity_list() -> NonEntityList {
    NonEntityList::new(COUNTRIES, LEGAL_FORMS, DOMAIN_KEYWORDS)
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Invented company names, pairwise below 0.8 similarity so fuzzy matching
/// never confuses two of them.
pub fn entity_names(count: usize, rng: &mut impl Rng) -> Vec<String> {
    let mut names: Vec<String> = Vec::with_capacity(count);
    while names.len() < count {
        let syllables = rng.gen_range(2..=3);
        let mut name = String::new();
        for _ in 0..syllables {
            name.push_str(ONSETS.choose(rng).unwrap());
            name.push_str(VOWELS.choose(rng).unwrap());
        }
        name.push_str(CODAS.choose(rng).unwrap());
        let name = capitalize(&name);
        let lower = name.to_lowercase();
        if names
            .iter()
            .all(|n| match_score(&n.to_lowercase(), &lower).value < 0.8)
        {
            names.push(name);
        }
    }
    names
}

/// `docs` documents about `entities` companies. Roughly one document in ten
/// mentions no company at all; the rest mention one or two, sometimes with a
/// legal form or country attached.
pub fn generate(docs: usize, entities: usize, seed: u64) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = entity_names(entities.max(2), &mut rng);
    let mut gaz_entries = Vec::new();
    for name in &names {
        gaz_entries.push(name.clone());
        let kw = DOMAIN_KEYWORDS.choose(&mut rng).unwrap();
        let lf = LEGAL_FORMS.choose(&mut rng).unwrap();
        gaz_entries.push(format!("{name} {kw} {lf}"));
        if rng.gen_bool(0.3) {
            gaz_entries.push(format!("{name} {}", COUNTRIES.choose(&mut rng).unwrap()));
        }
    }
    let mention = |rng: &mut ChaCha8Rng, name: &str| -> String {
        match rng.gen_range(0..4) {
            0 => format!("{name} {}", LEGAL_FORMS.choose(rng).unwrap()),
            1 => format!("{name} {}", DOMAIN_KEYWORDS.choose(rng).unwrap()),
            _ => name.to_string(),
        }
    };
    let mut documents = Vec::with_capacity(docs);
    for d in 0..docs {
        let sentences = rng.gen_range(2..=4);
        let has_entities = !rng.gen_bool(0.1);
        let mut text = Vec::with_capacity(sentences);
        for _ in 0..sentences {
            let template = if !has_entities || rng.gen_bool(0.25) {
                FILLER.choose(&mut rng).unwrap().to_string()
            } else if rng.gen_bool(0.3) {
                let pair: Vec<&String> = names.choose_multiple(&mut rng, 2).collect();
                let a = mention(&mut rng, pair[0]);
                let b = mention(&mut rng, pair[1]);
                WITH_TWO
                    .choose(&mut rng)
                    .unwrap()
                    .replace("{0}", &a)
                    .replace("{1}", &b)
            } else {
                let name = names.choose(&mut rng).unwrap();
                let a = mention(&mut rng, name);
                WITH_ONE.choose(&mut rng).unwrap().replace("{0}", &a)
            };
            let n = rng.gen_range(2..900).to_string();
            let p = rng.gen_range(1..=3).to_string();
            text.push(template.replace("{n}", &n).replace("{p}", &p));
        }
        documents.push(Document::new(format!("synth-{d:03}"), text.join(" ")));
    }
    SyntheticCorpus {
        corpus: Corpus::new(documents).expect("generated ids are unique and texts non-empty"),
        gazetteer: Gazetteer::new("PH_ORG", gaz_entries).expect("PH_ORG is a valid label"),
        non_entities: non_entity_list(),
        entities: names,
    }
}
