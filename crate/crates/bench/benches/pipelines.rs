use autolin::autofn::fixtures as ff;
use autolin::compile::compile;
use autolin::crossing::{extract_automatic, DEFAULT_STATE_CAP};
use autolin::families::fixtures as fam;
use autolin::learning::{check_learns, LearnSettings, LearnerSpec, TextKind};
use autolin::symbol::word;
use autolin::tm::{default_budget, run_deterministic};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn evaluate_vs_compiled(c: &mut Criterion) {
    let f = ff::function("exchange").unwrap();
    let m = compile(&f).unwrap();
    let mut g = c.benchmark_group("exchange");
    for len in [8, 64, 256] {
        let x = word(&"012".repeat(len).chars().take(len).collect::<String>());
        g.bench_with_input(BenchmarkId::new("evaluate", len), &x, |b, x| b.iter(|| f.evaluate(x).unwrap()));
        g.bench_with_input(BenchmarkId::new("machine", len), &x, |b, x| {
            b.iter(|| run_deterministic(&m, x, default_budget(x.len())).unwrap())
        });
    }
    g.finish();
}

fn compile_and_extract(c: &mut Criterion) {
    let mut g = c.benchmark_group("round-trip");
    g.sample_size(10);
    for name in ["identity", "exchange", "delete-first-0"] {
        let f = ff::function(name).unwrap();
        g.bench_function(BenchmarkId::new("compile", name), |b| b.iter(|| compile(&f).unwrap()));
        let m = compile(&f).unwrap();
        g.bench_function(BenchmarkId::new("extract", name), |b| {
            b.iter(|| extract_automatic(&m, 4, 2, 5, DEFAULT_STATE_CAP).unwrap())
        });
    }
    g.finish();
}

fn families(c: &mut Criterion) {
    let mut g = c.benchmark_group("families");
    g.sample_size(10);
    for name in ["extensions", "gold"] {
        let f = fam::family_by_name(name).unwrap();
        g.bench_function(BenchmarkId::new("scan", name), |b| b.iter(|| f.learnability_scan(2, 3).unwrap()));
    }
    g.finish();
}

fn learning(c: &mut Criterion) {
    let f = fam::family_by_name("length-excl").unwrap();
    let settings = LearnSettings { text: TextKind::Canonical, cycles: 200, rate: None, slack: None, seed: 0 };
    let mut g = c.benchmark_group("learning");
    g.sample_size(10);
    for spec in ["length-bitmap", "twotape:length-bitmap", "queue:length-bitmap"] {
        let s: LearnerSpec = spec.parse().unwrap();
        g.bench_function(spec, |b| b.iter(|| check_learns(&s, &f, &[word("00")], &settings).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, evaluate_vs_compiled, compile_and_extract, families, learning);
criterion_main!(benches);
