use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fx(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gazelabel"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn annotate(out: &Path, extra: &[&str]) -> Output {
    let (corpus, gaz, nel) = (
        fx("corpus.jsonl"),
        format!("PH_ORG={}", fx("ph_org.txt")),
        fx("non_entities.txt"),
    );
    let mut args = vec![
        "annotate",
        "--corpus",
        &corpus,
        "--gazetteer",
        &gaz,
        "--non-entities",
        &nel,
    ];
    args.extend_from_slice(extra);
    run(out, &args)
}

fn md_spans(path: &Path, id: &str) -> Vec<serde_json::Value> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .find(|v| v["id"] == id)
        .unwrap()["spans"]
        .as_array()
        .unwrap()
        .clone()
}

#[test]
fn annotate_writes_sanofi_spans() {
    let dir = tempfile::tempdir().unwrap();
    let o = annotate(dir.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        md_spans(&dir.path().join("corpus.md.jsonl"), "sanofi").len(),
        7
    );
    assert!(dir.path().join("corpus.summary.json").exists());
}

#[test]
fn threshold_flag_beats_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "threshold = 0.9\n").unwrap();
    let cfg = cfg.display().to_string();
    let o = annotate(dir.path(), &["--config", &cfg, "--threshold", "0.8"]);
    assert!(o.status.success());
    assert_eq!(
        md_spans(&dir.path().join("corpus.md.jsonl"), "typo").len(),
        1
    );
    let o = annotate(dir.path(), &["--config", &cfg]);
    assert!(o.status.success());
    assert!(md_spans(&dir.path().join("corpus.md.jsonl"), "typo").is_empty());
}

#[test]
fn config_supplies_gazetteers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(
        &cfg,
        format!(
            "non_entities = {:?}\n[[gazetteer]]\nlabel = \"PH_ORG\"\npath = {:?}\n",
            fx("non_entities.txt"),
            fx("ph_org.txt")
        ),
    )
    .unwrap();
    let corpus = fx("corpus.jsonl");
    let o = run(
        dir.path(),
        &[
            "--config",
            cfg.to_str().unwrap(),
            "annotate",
            "--corpus",
            &corpus,
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        md_spans(&dir.path().join("corpus.md.jsonl"), "sanofi").len(),
        7
    );
}

#[test]
fn missing_gazetteer_fails() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fx("corpus.jsonl");
    let o = run(
        dir.path(),
        &[
            "annotate",
            "--corpus",
            &corpus,
            "--gazetteer",
            "PH_ORG=/nonexistent/gaz.txt",
        ],
    );
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("gazetteer not found"));
}

#[test]
fn serialize_formats_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert!(annotate(dir.path(), &[]).status.success());
    let md = dir.path().join("corpus.md.jsonl").display().to_string();
    let corpus = fx("corpus.jsonl");
    let o = run(
        dir.path(),
        &[
            "serialize",
            "--md",
            &md,
            "--corpus",
            &corpus,
            "--format",
            "bioul",
        ],
    );
    assert!(o.status.success());
    let conll = std::fs::read_to_string(dir.path().join("corpus.bioul.conll")).unwrap();
    assert!(conll.contains("J\tB-PH_ORG\n&\tI-PH_ORG\nJ\tL-PH_ORG\n"));
    let o = run(
        dir.path(),
        &[
            "serialize",
            "--md",
            &md,
            "--corpus",
            &corpus,
            "--format",
            "token-tag",
        ],
    );
    assert!(o.status.success());
    let conll = std::fs::read_to_string(dir.path().join("corpus.token-tag.conll")).unwrap();
    assert!(conll.contains("J\tI-PH_ORG\n&\tI-PH_ORG\nJ\tI-PH_ORG\n"));
    let o = run(
        dir.path(),
        &[
            "serialize",
            "--md",
            &md,
            "--corpus",
            &corpus,
            "--format",
            "xml",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn split_validates_ratio_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    assert!(annotate(dir.path(), &[]).status.success());
    let md = dir.path().join("corpus.md.jsonl").display().to_string();
    let corpus = fx("corpus.jsonl");
    let o = run(
        dir.path(),
        &["split", "--md", &md, "--corpus", &corpus, "--ratio", "1.5"],
    );
    assert!(!o.status.success());
    let args = [
        "--seed", "42", "split", "--md", &md, "--corpus", &corpus, "--mode", "random", "--ratio",
        "0.3",
    ];
    assert!(run(dir.path(), &args).status.success());
    let first = std::fs::read(dir.path().join("corpus.split.json")).unwrap();
    assert!(run(dir.path(), &args).status.success());
    assert_eq!(
        std::fs::read(dir.path().join("corpus.split.json")).unwrap(),
        first
    );
    let split: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(split["test_ids"].as_array().unwrap().len(), 2);
    assert_eq!(split["train_ids"].as_array().unwrap().len(), 6);
}

#[test]
fn evaluate_identity_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    assert!(annotate(dir.path(), &[]).status.success());
    let md = dir.path().join("corpus.md.jsonl").display().to_string();
    let o = run(
        dir.path(),
        &["evaluate", "--gold", &md, "--predictions", &md],
    );
    assert!(o.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("corpus.eval.json")).unwrap())
            .unwrap();
    assert_eq!(report["micro"]["f1"], 1.0);
    let other = dir.path().join("other.jsonl");
    std::fs::write(&other, "{\"id\":\"nope\",\"spans\":[]}\n").unwrap();
    let o = run(
        dir.path(),
        &[
            "evaluate",
            "--gold",
            &md,
            "--predictions",
            other.to_str().unwrap(),
        ],
    );
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("different documents"));
}

#[test]
fn export_round_trips_as_gold() {
    let dir = tempfile::tempdir().unwrap();
    assert!(annotate(dir.path(), &[]).status.success());
    let md = dir.path().join("corpus.md.jsonl").display().to_string();
    let corpus = fx("corpus.jsonl");
    let spot = fx("spotlight");
    let o = run(
        dir.path(),
        &[
            "export",
            "--md",
            &md,
            "--corpus",
            &corpus,
            "--id",
            "sanofi",
            "--spotlight",
            &spot,
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let path = dir.path().join("sanofi.export.json");
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["spans"].as_array().unwrap().len(), 7);
    assert!(v["graph"]["base_triples"].as_u64().unwrap() > 0);
    let o = run(
        dir.path(),
        &[
            "evaluate",
            "--gold",
            path.to_str().unwrap(),
            "--predictions",
            path.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    let o = run(
        dir.path(),
        &[
            "export", "--md", &md, "--corpus", &corpus, "--id", "missing",
        ],
    );
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown document id"));
}

#[test]
fn enrich_without_overlap_keeps_base() {
    let dir = tempfile::tempdir().unwrap();
    assert!(annotate(dir.path(), &[]).status.success());
    let md = dir.path().join("corpus.md.jsonl").display().to_string();
    let corpus = fx("corpus.jsonl");
    let spot = fx("spotlight");
    let o = run(
        dir.path(),
        &[
            "enrich",
            "--spotlight",
            &spot,
            "--md",
            &md,
            "--corpus",
            &corpus,
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("corpus.enrichment.json")).unwrap())
            .unwrap();
    let quiet = report["per_doc"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["id"] == "quiet")
        .unwrap();
    assert_eq!(quiet["percentage"], 0.0);
    assert!(report["mean"].is_number());
    assert!(!report["histogram"].as_array().unwrap().is_empty());
    let ttl = std::fs::read_to_string(dir.path().join("quiet.enriched.ttl")).unwrap();
    assert!(ttl.contains("dbr:Inflation rdfs:label \"inflation\" ."));
}

#[test]
fn help_lists_flags_with_defaults() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        "annotate",
        "serialize",
        "split",
        "evaluate",
        "enrich",
        "export",
    ] {
        let o = run(dir.path(), &[cmd, "--help"]);
        assert!(o.status.success());
        let help = String::from_utf8_lossy(&o.stdout);
        for flag in ["--config", "--seed", "--out"] {
            assert!(help.contains(flag), "{cmd} help lacks {flag}");
        }
    }
    let help =
        String::from_utf8_lossy(&run(dir.path(), &["annotate", "--help"]).stdout).into_owned();
    assert!(help.contains("default: 0.9"));
    let help = String::from_utf8_lossy(&run(dir.path(), &["split", "--help"]).stdout).into_owned();
    assert!(help.contains("default: 0.3"));
}
