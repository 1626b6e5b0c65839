//! File-based runs over synthetic corpora.

use std::fs::{self, File};

use bioclaim_core::corpus::{corpus_stats, load_tweet_corpus, write_tweet_corpus};
use bioclaim_core::embeddings::{load_vec, write_vec};
use bioclaim_core::harness::{run_cross_domain, run_grid, ExperimentConfig, Source, SplitSizes};
use bioclaim_core::models::ModelKind;
use bioclaim_core::preprocess::preprocess;
use bioclaim_core::synthetic::{synthetic_tweet_corpus, write_synthetic_essays, SyntheticSpec};
use bioclaim_core::tasks::TaskKind;
use bioclaim_core::TaskLabel;

#[test]
fn corpus_and_vectors_survive_disk() {
    let dir = tempfile::tempdir().unwrap();
    let (records, table) = synthetic_tweet_corpus(&SyntheticSpec::default(), 1);
    let path = dir.path().join("t.jsonl");
    write_tweet_corpus(File::create(&path).unwrap(), &records).unwrap();
    assert_eq!(load_tweet_corpus(&path).unwrap(), records);

    let vpath = dir.path().join("v.vec");
    write_vec(File::create(&vpath).unwrap(), &table).unwrap();
    let loaded = load_vec(&vpath, None).unwrap();
    for r in &records {
        let tokens = preprocess(&r.text);
        assert_eq!(
            loaded.embed_document(&tokens),
            table.embed_document(&tokens)
        );
    }

    let s = corpus_stats(&records, preprocess).unwrap();
    assert_eq!(s.total.count, 200);
}

#[test]
fn grid_and_cross_domain_agree_on_the_twitter_cell() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        n_docs: 300,
        ..SyntheticSpec::default()
    };
    let (records, table) = synthetic_tweet_corpus(&spec, 2);
    let tweets = dir.path().join("t.jsonl");
    let vecs = dir.path().join("v.vec");
    write_tweet_corpus(File::create(&tweets).unwrap(), &records).unwrap();
    write_vec(File::create(&vecs).unwrap(), &table).unwrap();
    write_synthetic_essays(&dir.path().join("essays"), [80, 20, 30], 2).unwrap();

    let mut config = ExperimentConfig::new(&tweets, &vecs, 4);
    config.essays = Some(dir.path().join("essays"));
    config.split = SplitSizes {
        train: 200,
        val: 50,
        test: 50,
    };
    config.train.epochs = 150;

    let grid = run_grid(&config).unwrap();
    let lg_binary = grid
        .cells
        .iter()
        .find(|c| c.task == TaskKind::Binary && c.model == ModelKind::LogisticRegression)
        .unwrap();
    let cross = run_cross_domain(&config).unwrap();
    let tt = cross.cell(Source::Twitter, Source::Twitter).unwrap();
    assert_eq!(&tt.claim, lg_binary.metrics.get(&TaskLabel::Claim).unwrap());

    // the cue words make the synthetic task learnable
    assert!(tt.claim.f1 > 0.5, "T->T F1 {}", tt.claim.f1);

    grid.write_to(dir.path().join("out")).unwrap();
    let table = fs::read_to_string(dir.path().join("out/report.tsv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 6 + 6);
}
