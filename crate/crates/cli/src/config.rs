use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// Contents of the `--config` TOML file. Relative paths resolve against the
/// file's own directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub non_entities: Option<PathBuf>,
    pub stop_words: Option<PathBuf>,
    pub lemma_exceptions: Option<PathBuf>,
    pub corpus_format: Option<String>,
    pub max_gap_tokens: Option<usize>,
    pub connectors: Option<Vec<String>>,
    pub punctuation_connectors: Option<bool>,
    pub local_namespace: Option<String>,
    #[serde(default)]
    pub gazetteer: Vec<GazetteerRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GazetteerRef {
    pub label: String,
    pub path: PathBuf,
}

impl GazetteerRef {
    /// `LABEL=PATH`.
    pub fn parse(arg: &str) -> std::result::Result<Self, String> {
        match arg.split_once('=') {
            Some((label, path)) if !label.is_empty() && !path.is_empty() => Ok(GazetteerRef {
                label: label.to_string(),
                path: PathBuf::from(path),
            }),
            _ => Err(format!("expected LABEL=PATH, got `{arg}`")),
        }
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut cfg.out,
            &mut cfg.non_entities,
            &mut cfg.stop_words,
            &mut cfg.lemma_exceptions,
        ]
        .into_iter()
        .flatten()
        {
            resolve(p);
        }
        for g in &mut cfg.gazetteer {
            resolve(&mut g.path);
        }
        Ok(cfg)
    }
}

pub fn check_exists(path: &Path, what: &str) -> Result<()> {
    if !path.exists() {
        bail!("{what} not found: {}", path.display());
    }
    Ok(())
}

/// File name up to the first dot: `corpus.md.jsonl` gives `corpus`.
pub fn stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string());
    match name.split('.').next() {
        Some(s) if !s.is_empty() => s.to_string(),
        _ => name,
    }
}
