use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use freeha_bench::parsed_cases;
use freeha_core::heyting::{build_heyting_tower_with, HeytingOptions};
use freeha_core::kripke::countermodel_search;
use freeha_core::tower::build_tower;
use freeha_core::{build_heyting_tower, Decider, Variety};

fn heyting_layers(c: &mut Criterion) {
    let mut g = c.benchmark_group("heyting");
    g.bench_function("n1_depth6", |b| {
        b.iter(|| build_heyting_tower(black_box(1), 6).unwrap())
    });
    g.bench_function("n2_depth2", |b| {
        b.iter(|| build_heyting_tower(black_box(2), 2).unwrap())
    });
    g.bench_function("n2_depth2_unfiltered_layer1", |b| {
        let opts = HeytingOptions {
            g_filter: false,
            ..HeytingOptions::default()
        };
        b.iter(|| build_heyting_tower_with(black_box(2), 1, opts).unwrap())
    });
    g.finish();
}

fn rank1_layers(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank1");
    g.bench_function("wha_n1_depth2", |b| {
        b.iter(|| build_tower(Variety::Wha, black_box(1), 2).unwrap())
    });
    g.bench_function("pha_n1_depth2", |b| {
        b.iter(|| build_tower(Variety::Pha, black_box(1), 2).unwrap())
    });
    g.finish();
}

fn decide(c: &mut Criterion) {
    let cases = parsed_cases();
    c.bench_function("decide_cached", |b| {
        let mut d = Decider::default();
        b.iter(|| {
            for (phi, expect) in &cases {
                assert_eq!(d.decide_valid(Variety::Ha, phi).unwrap().holds, *expect);
            }
        })
    });
}

fn kripke(c: &mut Criterion) {
    let mut g = c.benchmark_group("kripke");
    g.sample_size(10);
    for (phi, valid) in parsed_cases() {
        if valid {
            continue;
        }
        g.bench_function(phi.to_string(), |b| {
            b.iter(|| countermodel_search(black_box(&phi), 5).unwrap())
        });
    }
    g.bench_function("x -> x up to 5", |b| {
        let phi = freeha_core::Formula::parse("x -> x").unwrap();
        b.iter(|| countermodel_search(black_box(&phi), 5).unwrap())
    });
    g.finish();
}

criterion_group!(benches, heyting_layers, rank1_layers, decide, kripke);
criterion_main!(benches);
