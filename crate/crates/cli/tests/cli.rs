use std::fs::{self, File};
use std::path::Path;
use std::process::{Command, Output};

use bioclaim_core::corpus::{write_raw_dump, write_tweet_corpus, QueryCategory, RawTweet, Topic};
use bioclaim_core::embeddings::write_vec;
use bioclaim_core::synthetic::{synthetic_tweet_corpus, write_synthetic_essays, SyntheticSpec};

fn bioclaim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bioclaim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Tweets, vectors, essays and a config in `dir`; returns the config path.
fn experiment(dir: &Path) -> std::path::PathBuf {
    let spec = SyntheticSpec {
        n_docs: 100,
        ..SyntheticSpec::default()
    };
    let (records, table) = synthetic_tweet_corpus(&spec, 5);
    write_tweet_corpus(File::create(dir.join("tweets.jsonl")).unwrap(), &records).unwrap();
    write_vec(File::create(dir.join("vectors.vec")).unwrap(), &table).unwrap();
    write_synthetic_essays(&dir.join("essays"), [40, 10, 15], 5).unwrap();
    let config = dir.join("experiment.json");
    fs::write(
        &config,
        r#"{
  "tweets": "tweets.jsonl",
  "embeddings": "vectors.vec",
  "essays": "essays",
  "seed": 11,
  "split": {"train": 70, "val": 15, "test": 15},
  "train": {"epochs": 100},
  "output_dir": "out"
}"#,
    )
    .unwrap();
    config
}

#[test]
fn tokenize_prints_one_line_per_input_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "@WHO says #covid19 vaccines work!!\nhello\n").unwrap();
    let out = stdout(&bioclaim(&["tokenize", "--in", input.to_str().unwrap()]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "@username\tsays\t#covid19\tvaccines\twork\t!\t!");
    assert_eq!(lines[1], "hello");

    let raw = stdout(&bioclaim(&[
        "tokenize",
        "--in",
        input.to_str().unwrap(),
        "--keep-mentions",
    ]));
    assert!(raw.starts_with("@WHO\t"));
}

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = experiment(dir.path());
    let table = stdout(&bioclaim(&["run", "--config", config.to_str().unwrap()]));
    assert!(table.starts_with("mode\ttask\tclass\tNB_P"));
    let out = dir.path().join("out");
    assert_eq!(fs::read_to_string(out.join("report.tsv")).unwrap(), table);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["seed"], 11);
    assert_eq!(json["runs"].as_array().unwrap().len(), 6);
    assert!(out.join("predictions_binary_NB.tsv").exists());
}

#[test]
fn cross_domain_prints_six_cells() {
    let dir = tempfile::tempdir().unwrap();
    let config = experiment(dir.path());
    let alt = dir.path().join("alt");
    let table = stdout(&bioclaim(&[
        "cross-domain",
        "--config",
        config.to_str().unwrap(),
        "--out",
        alt.to_str().unwrap(),
    ]));
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("twitter\ttwitter\t"));
    assert!(lines[6].starts_with("combined\tessay\t"));
    assert!(alt.join("cross_domain.json").exists());
}

#[test]
fn stats_and_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let (records, _) = synthetic_tweet_corpus(&SyntheticSpec::default(), 8);
    let corpus = dir.path().join("c.jsonl");
    write_tweet_corpus(File::create(&corpus).unwrap(), &records).unwrap();
    let c = corpus.to_str().unwrap();

    let stats = stdout(&bioclaim(&[
        "stats",
        "--corpus",
        c,
        "--length-threshold",
        "10",
    ]));
    let total = stats.lines().find(|l| l.starts_with("total\t")).unwrap();
    assert!(total.starts_with("total\t200\t100.00\t"));
    assert!(stats.contains("<= 10\t"));

    for level in ["doc2", "doc3", "span"] {
        let out = stdout(&bioclaim(&[
            "agreement",
            "--a",
            c,
            "--b",
            c,
            "--level",
            level,
        ]));
        let row: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
        assert_eq!(row[0], "1", "self-agreement at {level}");
    }
    assert!(
        !bioclaim(&["agreement", "--a", c, "--b", c, "--level", "doc4"])
            .status
            .success()
    );
}

#[test]
fn sample_filters_and_stratifies() {
    let dir = tempfile::tempdir().unwrap();
    let mut raw = Vec::new();
    for topic in Topic::ALL {
        for category in QueryCategory::ALL {
            for i in 0..4 {
                raw.push(RawTweet {
                    id: format!("{topic}-{category}-{i}"),
                    text: if i == 3 {
                        "see https://x.org".into()
                    } else {
                        format!("tweet {i}")
                    },
                    is_retweet: false,
                    topic,
                    query_category: category,
                });
            }
        }
    }
    let path = dir.path().join("raw.jsonl");
    write_raw_dump(File::create(&path).unwrap(), &raw).unwrap();
    let p = path.to_str().unwrap();

    let out = stdout(&bioclaim(&[
        "sample",
        "--raw",
        p,
        "--per-cell",
        "2",
        "--seed",
        "3",
    ]));
    assert_eq!(out.lines().count(), 32);
    assert!(!out.contains("https://"));
    assert_eq!(
        out,
        stdout(&bioclaim(&[
            "sample",
            "--raw",
            p,
            "--per-cell",
            "2",
            "--seed",
            "3"
        ]))
    );

    // three URL-free tweets per cell
    let err = bioclaim(&["sample", "--raw", p, "--per-cell", "4", "--seed", "3"]);
    assert!(!err.status.success());
}

#[test]
fn malformed_corpus_reports_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(
        &path,
        r#"{"id": "1", "text": "x", "topic": "measles", "query_category": "drug", "label": "maybe"}"#,
    )
    .unwrap();
    let o = bioclaim(&["stats", "--corpus", path.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":1:") && err.contains("label"), "{err}");
}
