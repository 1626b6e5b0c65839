use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use bioclaim_core::models::{lg_fit, nb_fit, ModelKind, TrainConfig};
use bioclaim_core::preprocess::preprocess;
use bioclaim_core::synthetic::{synthetic_examples, synthetic_tweet_corpus, SyntheticSpec};
use bioclaim_core::tasks::{run_pipeline, TaskConfig};

fn tokenizer(c: &mut Criterion) {
    let (records, table) = synthetic_tweet_corpus(
        &SyntheticSpec {
            n_docs: 1200,
            dim: 50,
            ..SyntheticSpec::default()
        },
        1,
    );
    c.bench_function("preprocess 1200 tweets", |b| {
        b.iter(|| {
            records
                .iter()
                .map(|r| preprocess(black_box(&r.text)).len())
                .sum::<usize>()
        })
    });
    c.bench_function("embed 1200 tweets", |b| {
        b.iter(|| {
            records
                .iter()
                .map(|r| table.embed_document(&preprocess(&r.text)).n_known)
                .sum::<usize>()
        })
    });
}

fn training(c: &mut Criterion) {
    let spec = SyntheticSpec {
        n_docs: 1200,
        dim: 50,
        ..SyntheticSpec::default()
    };
    let examples = synthetic_examples(&spec, 2);
    let x: Vec<&[f64]> = examples.iter().map(|e| &e.features[..]).collect();
    let y: Vec<usize> = examples
        .iter()
        .map(|e| usize::from(e.label.is_claim()))
        .collect();
    let config = TrainConfig::default();

    c.bench_function("nb fit 1200x50", |b| {
        b.iter(|| nb_fit(black_box(&x), &y, 2).unwrap())
    });
    let mut group = c.benchmark_group("lg");
    group.sample_size(10);
    group.bench_function("lg fit 1200x50, 500 epochs", |b| {
        b.iter(|| lg_fit(black_box(&x), &y, 2, &config, 1e-3).unwrap())
    });
    let (train, rest) = examples.split_at(800);
    let (val, test) = rest.split_at(200);
    group.bench_function("pipeline LG 800/200/200", |b| {
        b.iter(|| {
            run_pipeline(
                train,
                val,
                test,
                &TaskConfig::new(ModelKind::LogisticRegression),
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, tokenizer, training);
criterion_main!(benches);
