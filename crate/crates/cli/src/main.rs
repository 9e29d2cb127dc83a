mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gazelabel::annotate::{Annotator, LabeledDataset, MatchConfig};
use gazelabel::corpus::{
    load_corpus, load_gazetteer, load_non_entity_list, Corpus, CorpusFormat, Gazetteer,
    NonEntityList,
};
use gazelabel::evalsplit::{self, MatchMode};
use gazelabel::exec::{self, Execution};
use gazelabel::kg::{self, Namespaces, TripleGraph};
use gazelabel::serialize::{self, Scheme};
use gazelabel::tokenize::{Lemmatizer, StopWords, Tokenizer};

use config::{check_exists, stem, FileConfig, GazetteerRef};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Weak-supervision NER dataset builder.
///
/// Outputs are written to the output directory as `<stem>.<format>.<ext>`,
/// where `<stem>` is the input file name up to its first dot. Re-running a
/// command with the same inputs and seed overwrites its outputs with
/// identical bytes.
#[derive(Debug, Parser)]
#[command(name = "gazelabel", version, about)]
struct Cli {
    /// TOML file with defaults for any flag; flags win over the file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Seed for every random choice [default: 42].
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory, created if missing [default: out].
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Run per-document work on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label a corpus from gazetteers; writes `<stem>.md.jsonl` and `<stem>.summary.json`.
    Annotate(AnnotateArgs),
    /// Write a labeled dataset as span JSON or CoNLL tags; writes `<stem>.<format>.<json|conll>`.
    Serialize(SerializeArgs),
    /// Split corpus and dataset; writes `<stem>.split.json` and per-portion corpus/dataset files.
    Split(SplitArgs),
    /// Score predictions against gold spans; writes `<stem>.eval.json` and `<stem>.eval.txt`.
    Evaluate(EvaluateArgs),
    /// Enrich linker graphs with entity types; writes `<id>.enriched.ttl` and `<stem>.enrichment.{json,txt}`.
    Enrich(EnrichArgs),
    /// Export one analysed document as JSON; writes `<id>.export.json`.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct CorpusArgs {
    /// Corpus: JSONL file of {"id","text"} records, or a directory of .txt files.
    #[arg(long, value_name = "PATH")]
    corpus: PathBuf,

    /// Corpus layout [default: jsonl, or dir when --corpus is a directory].
    #[arg(long, value_name = "FORMAT")]
    corpus_format: Option<String>,
}

#[derive(Debug, Args)]
struct AnnotateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,

    /// Gazetteer as LABEL=PATH; repeat for several labels. Earlier labels win overlaps.
    #[arg(long = "gazetteer", value_name = "LABEL=PATH", value_parser = GazetteerRef::parse)]
    gazetteers: Vec<GazetteerRef>,

    /// Non-entity list with [countries], [legal_forms] and [domain_keywords] sections.
    #[arg(long, value_name = "PATH")]
    non_entities: Option<PathBuf>,

    /// Stop words, one per line [default: built-in English list].
    #[arg(long, value_name = "PATH")]
    stop_words: Option<PathBuf>,

    /// Lemma exceptions, `surface<TAB>lemma` per line [default: built-in table].
    #[arg(long, value_name = "PATH")]
    lemma_exceptions: Option<PathBuf>,

    /// Similarity threshold in (0, 1] [default: 0.9].
    #[arg(long)]
    threshold: Option<f64>,

    /// Largest number of connector tokens joined between two spans [default: 1].
    #[arg(long)]
    max_gap_tokens: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Span,
    Bio,
    Bioul,
    TokenTag,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Span => "span",
            Format::Bio => "bio",
            Format::Bioul => "bioul",
            Format::TokenTag => "token-tag",
        }
    }
}

#[derive(Debug, Args)]
struct SerializeArgs {
    /// Labeled dataset (MD JSONL).
    #[arg(long, value_name = "PATH")]
    md: PathBuf,

    #[command(flatten)]
    corpus: CorpusArgs,

    /// Output layout.
    #[arg(long, value_enum)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SplitMode {
    Random,
    EntityDisjoint,
}

fn parse_ratio(s: &str) -> std::result::Result<f64, String> {
    let r: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if r > 0.0 && r < 1.0 {
        Ok(r)
    } else {
        Err(format!("ratio must lie strictly between 0 and 1, got {r}"))
    }
}

#[derive(Debug, Args)]
struct SplitArgs {
    /// Labeled dataset (MD JSONL).
    #[arg(long, value_name = "PATH")]
    md: PathBuf,

    #[command(flatten)]
    corpus: CorpusArgs,

    #[arg(long, value_enum, default_value = "random")]
    mode: SplitMode,

    /// Test fraction of the documents.
    #[arg(long, default_value = "0.3", value_parser = parse_ratio)]
    ratio: f64,

    /// Gazetteer(s) as LABEL=PATH, needed for entity-disjoint mode.
    #[arg(long = "gazetteer", value_name = "LABEL=PATH", value_parser = GazetteerRef::parse)]
    gazetteers: Vec<GazetteerRef>,

    /// Label whose entities are kept disjoint [default: the only gazetteer's label].
    #[arg(long)]
    label: Option<String>,

    /// Non-entity list used to compute core names.
    #[arg(long, value_name = "PATH")]
    non_entities: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Gold spans (MD JSONL or export JSON lines).
    #[arg(long, value_name = "PATH")]
    gold: PathBuf,

    /// Predicted spans in the same shape.
    #[arg(long, value_name = "PATH")]
    predictions: PathBuf,
}

#[derive(Debug, Args)]
struct EnrichArgs {
    /// Directory of linker responses named `<doc id>.json`.
    #[arg(long, value_name = "DIR")]
    spotlight: PathBuf,

    /// Labeled dataset (MD JSONL).
    #[arg(long, value_name = "PATH")]
    md: PathBuf,

    #[command(flatten)]
    corpus: CorpusArgs,

    /// Namespace for minted entity IRIs [default: http://localhost/gazelabel/entity/].
    #[arg(long, value_name = "IRI")]
    local_namespace: Option<String>,

    /// Histogram bucket width in percentage points.
    #[arg(long, default_value_t = kg::DEFAULT_BUCKET_WIDTH)]
    bucket_width: f64,
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// Labeled dataset (MD JSONL).
    #[arg(long, value_name = "PATH")]
    md: PathBuf,

    #[command(flatten)]
    corpus: CorpusArgs,

    /// Document to export.
    #[arg(long)]
    id: String,

    /// Directory of linker responses; adds graph statistics when given.
    #[arg(long, value_name = "DIR")]
    spotlight: Option<PathBuf>,

    /// Namespace for minted entity IRIs [default: http://localhost/gazelabel/entity/].
    #[arg(long, value_name = "IRI")]
    local_namespace: Option<String>,
}

struct Ctx {
    file: FileConfig,
    seed: u64,
    out: PathBuf,
    exec: Execution,
}

impl Ctx {
    fn write(&self, name: &str, content: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out)
            .with_context(|| format!("creating output directory {}", self.out.display()))?;
        let path = self.out.join(name);
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    fn corpus(&self, args: &CorpusArgs) -> Result<Corpus> {
        check_exists(&args.corpus, "corpus")?;
        let format = match args
            .corpus_format
            .as_ref()
            .or(self.file.corpus_format.as_ref())
        {
            Some(f) => f.parse::<CorpusFormat>().map_err(|e| anyhow!(e))?,
            None if args.corpus.is_dir() => CorpusFormat::PlaintextDir,
            None => CorpusFormat::Jsonl,
        };
        load_corpus(&args.corpus, format)
            .with_context(|| format!("loading corpus {}", args.corpus.display()))
    }

    fn gazetteers(&self, flags: &[GazetteerRef]) -> Result<Vec<Gazetteer>> {
        let refs = if flags.is_empty() {
            &self.file.gazetteer
        } else {
            flags
        };
        refs.iter()
            .map(|g| {
                check_exists(&g.path, "gazetteer")?;
                load_gazetteer(&g.path, &g.label)
                    .with_context(|| format!("loading gazetteer {}", g.path.display()))
            })
            .collect()
    }

    fn non_entities(&self, flag: Option<&PathBuf>) -> Result<NonEntityList> {
        match flag.or(self.file.non_entities.as_ref()) {
            Some(p) => {
                check_exists(p, "non-entity list")?;
                load_non_entity_list(p)
                    .with_context(|| format!("loading non-entity list {}", p.display()))
            }
            None => Ok(NonEntityList::default()),
        }
    }

    fn namespaces(&self, flag: Option<&String>) -> Namespaces {
        match flag.or(self.file.local_namespace.as_ref()) {
            Some(local) => Namespaces::with_local(local),
            None => Namespaces::default(),
        }
    }
}

fn load_md(path: &Path) -> Result<LabeledDataset> {
    check_exists(path, "labeled dataset")?;
    LabeledDataset::load(path)
        .with_context(|| format!("loading labeled dataset {}", path.display()))
}

fn annotate(ctx: &Ctx, args: &AnnotateArgs) -> Result<()> {
    let gazetteers = ctx.gazetteers(&args.gazetteers)?;
    if gazetteers.is_empty() {
        bail!("no gazetteers given; pass --gazetteer LABEL=PATH or list them in the config");
    }
    let nel = ctx.non_entities(args.non_entities.as_ref())?;
    let stop_words = match args.stop_words.as_ref().or(ctx.file.stop_words.as_ref()) {
        Some(p) => {
            check_exists(p, "stop-word list")?;
            StopWords::load(p)?
        }
        None => StopWords::default(),
    };
    let lemmatizer = match args
        .lemma_exceptions
        .as_ref()
        .or(ctx.file.lemma_exceptions.as_ref())
    {
        Some(p) => {
            check_exists(p, "lemma exceptions")?;
            Lemmatizer::load(p)?
        }
        None => Lemmatizer::default(),
    };
    let mut cfg = MatchConfig::default();
    if let Some(t) = args.threshold.or(ctx.file.threshold) {
        cfg.threshold = t;
    }
    if let Some(g) = args.max_gap_tokens.or(ctx.file.max_gap_tokens) {
        cfg.max_gap_tokens = g;
    }
    if let Some(c) = &ctx.file.connectors {
        cfg.connectors = c.clone();
    }
    if let Some(p) = ctx.file.punctuation_connectors {
        cfg.punctuation_connectors = p;
    }
    let corpus = ctx.corpus(&args.corpus)?;
    let annotator = Annotator::with_tokenizer(
        &gazetteers,
        nel,
        cfg,
        Tokenizer::new(stop_words, lemmatizer),
    )?
    .with_execution(ctx.exec);
    let (dataset, summary) = annotator.build(&corpus);
    let stem = stem(&args.corpus.corpus);
    let md = ctx.write(&format!("{stem}.md.jsonl"), &dataset.to_jsonl())?;
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    ctx.write(&format!("{stem}.summary.json"), &json)?;
    println!(
        "{} documents, {} spans -> {}",
        summary.documents,
        dataset.total_spans(),
        md.display()
    );
    for (label, n) in &summary.spans_per_label {
        println!("  {label:<12} {n}");
    }
    for (label, n) in summary.skipped_entries.iter().filter(|(_, &n)| n > 0) {
        eprintln!("note: {n} {label} gazetteer entries have an empty core name and were skipped");
    }
    Ok(())
}

fn serialize_cmd(ctx: &Ctx, args: &SerializeArgs) -> Result<()> {
    let dataset = load_md(&args.md)?;
    let corpus = ctx.corpus(&args.corpus)?;
    let stem = stem(&args.md);
    let tokenizer = Tokenizer::default();
    let (content, ext) = match args.format {
        Format::Span => (
            serialize::span_sentences_to_json(&serialize::to_span_format_with(
                &dataset, &corpus, ctx.exec,
            )?),
            "json",
        ),
        f => {
            let scheme = match f {
                Format::Bio => Scheme::Bio,
                Format::Bioul => Scheme::Bioul,
                _ => Scheme::TokenTag,
            };
            let sentences =
                serialize::to_tagged_with(&dataset, &corpus, scheme, &tokenizer, ctx.exec)?;
            (serialize::write_tagged(&sentences), "conll")
        }
    };
    let path = ctx.write(&format!("{stem}.{}.{ext}", args.format.name()), &content)?;
    println!("{}", path.display());
    Ok(())
}

fn split(ctx: &Ctx, args: &SplitArgs) -> Result<()> {
    let dataset = load_md(&args.md)?;
    let corpus = ctx.corpus(&args.corpus)?;
    dataset.validate(&corpus)?;
    let (result, corpus, dataset) = match args.mode {
        SplitMode::Random => (
            evalsplit::random_split(&corpus, args.ratio, ctx.seed)?,
            corpus,
            dataset,
        ),
        SplitMode::EntityDisjoint => {
            let gazetteers = ctx.gazetteers(&args.gazetteers)?;
            let gaz = match (&args.label, gazetteers.as_slice()) {
                (None, [only]) => only,
                (None, []) => {
                    bail!("entity-disjoint mode needs a gazetteer (--gazetteer LABEL=PATH)")
                }
                (None, _) => bail!("several gazetteers given; choose one with --label"),
                (Some(l), all) => all
                    .iter()
                    .find(|g| g.label() == l)
                    .ok_or_else(|| anyhow!("no gazetteer with label `{l}`"))?,
            };
            let nel = ctx.non_entities(args.non_entities.as_ref())?;
            let d = evalsplit::entity_disjoint_split(
                &corpus, &dataset, gaz, &nel, args.ratio, ctx.seed,
            )?;
            (d.split, d.corpus, d.dataset)
        }
    };
    let stem = stem(&args.md);
    ctx.write(&format!("{stem}.split.json"), &result.to_json())?;
    for (portion, ids) in [("train", &result.train_ids), ("test", &result.test_ids)] {
        let ids = || ids.iter().map(String::as_str);
        ctx.write(
            &format!("{stem}.{portion}.corpus.jsonl"),
            &corpus.subset(ids())?.to_jsonl(),
        )?;
        ctx.write(
            &format!("{stem}.{portion}.md.jsonl"),
            &dataset.subset(ids()).to_jsonl(),
        )?;
    }
    println!(
        "train {} / test {} documents, {} replacements (seed {})",
        result.train_ids.len(),
        result.test_ids.len(),
        result.replaced.len(),
        result.seed
    );
    Ok(())
}

fn evaluate(ctx: &Ctx, args: &EvaluateArgs) -> Result<()> {
    let gold = load_md(&args.gold)?;
    let predicted = load_md(&args.predictions)?;
    let report = evalsplit::score_with(&gold, &predicted, MatchMode::ExactSpan, ctx.exec)?;
    let stem = stem(&args.predictions);
    ctx.write(&format!("{stem}.eval.json"), &report.to_json())?;
    let table = report.to_table();
    ctx.write(&format!("{stem}.eval.txt"), &table)?;
    print!("{table}");
    Ok(())
}

/// Base graph of one document: its linker response, or an empty graph.
fn base_graph(
    dir: &Path,
    id: &str,
    ns: &Namespaces,
) -> Result<(Vec<kg::LinkedAnnotation>, TripleGraph)> {
    let path = dir.join(format!("{id}.json"));
    if !path.exists() {
        return Ok((Vec::new(), TripleGraph::new(ns.clone())));
    }
    let content =
        fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    kg::parse_spotlight(&content, ns)
        .with_context(|| format!("document `{id}`: {}", path.display()))
}

fn enrich(ctx: &Ctx, args: &EnrichArgs) -> Result<()> {
    check_exists(&args.spotlight, "linker response directory")?;
    let dataset = load_md(&args.md)?;
    let corpus = ctx.corpus(&args.corpus)?;
    dataset.validate(&corpus)?;
    let ns = ctx.namespaces(args.local_namespace.as_ref());
    let docs: Vec<_> = corpus
        .documents()
        .iter()
        .filter(|d| dataset.contains(&d.id))
        .collect();
    let results = exec::try_map_ordered(&docs, ctx.exec, |doc| -> Result<_> {
        let (annotations, base) = base_graph(&args.spotlight, &doc.id, &ns)?;
        let spans = dataset.get(&doc.id).unwrap_or_default();
        let enriched = kg::enrich(&base, &annotations, spans, doc);
        let pct = if base.is_empty() {
            None
        } else {
            Some(kg::enrichment_percentage(&base, &enriched)?)
        };
        Ok((kg::to_turtle(&enriched), pct))
    })?;
    let mut per_doc = Vec::new();
    for (doc, (turtle, pct)) in docs.iter().zip(results) {
        ctx.write(&format!("{}.enriched.ttl", doc.id), &turtle)?;
        match pct {
            Some(p) => per_doc.push((doc.id.clone(), p)),
            None => eprintln!(
                "note: document `{}` has no base graph; left out of the report",
                doc.id
            ),
        }
    }
    let report = kg::enrichment_report_with(&per_doc, args.bucket_width)?;
    let stem = stem(&args.md);
    ctx.write(&format!("{stem}.enrichment.json"), &report.to_json())?;
    let text = report.to_text();
    ctx.write(&format!("{stem}.enrichment.txt"), &text)?;
    print!("{text}");
    Ok(())
}

#[derive(Debug, Serialize)]
struct GraphStats {
    base_triples: usize,
    enriched_triples: usize,
    enrichment_percentage: Option<f64>,
}

#[derive(Debug, Serialize)]
struct AnalysisExport<'a> {
    id: &'a str,
    text: &'a str,
    spans: &'a [gazelabel::EntitySpan],
    graph: Option<GraphStats>,
    version: &'a str,
}

fn export(ctx: &Ctx, args: &ExportArgs) -> Result<()> {
    let dataset = load_md(&args.md)?;
    let corpus = ctx.corpus(&args.corpus)?;
    let doc = corpus
        .get(&args.id)
        .ok_or_else(|| anyhow!("unknown document id `{}`", args.id))?;
    let spans = dataset
        .get(&args.id)
        .ok_or_else(|| anyhow!("document `{}` is not in the labeled dataset", args.id))?;
    let graph = match &args.spotlight {
        Some(dir) => {
            let ns = ctx.namespaces(args.local_namespace.as_ref());
            let (annotations, base) = base_graph(dir, &args.id, &ns)?;
            let enriched = kg::enrich(&base, &annotations, spans, doc);
            Some(GraphStats {
                base_triples: base.len(),
                enriched_triples: enriched.len(),
                enrichment_percentage: kg::enrichment_percentage(&base, &enriched).ok(),
            })
        }
        None => None,
    };
    let record = AnalysisExport {
        id: &doc.id,
        text: &doc.text,
        spans,
        graph,
        version: VERSION,
    };
    let mut line = serde_json::to_string(&record)?;
    line.push('\n');
    let path = ctx.write(&format!("{}.export.json", args.id), &line)?;
    println!("{}", path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let ctx = Ctx {
        seed: cli.seed.or(file.seed).unwrap_or(42),
        out: cli
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or_else(|| PathBuf::from("out")),
        exec: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        file,
    };
    match &cli.command {
        Command::Annotate(a) => annotate(&ctx, a),
        Command::Serialize(a) => serialize_cmd(&ctx, a),
        Command::Split(a) => split(&ctx, a),
        Command::Evaluate(a) => evaluate(&ctx, a),
        Command::Enrich(a) => enrich(&ctx, a),
        Command::Export(a) => export(&ctx, a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
