use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rackhom_core::chains::{build_cubical_complex, homology, s_map, Flavor, SMode};
use rackhom_core::glstable::{verify_matrix_lemmas, RingTag};
use rackhom_core::nerves::{rack_nerve, DEFAULT_CELL_BUDGET};
use rackhom_core::racks::{group_preset, rack_preset};
use rackhom_core::FieldTag;

fn rack_homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("rack_homology");
    g.sample_size(10);
    for (name, top) in [("conj:symmetric:3", 3), ("cyclic:3", 5), ("conj:quaternion:8", 3)] {
        let rack = rack_preset(name).unwrap();
        g.bench_with_input(BenchmarkId::new(name, top), &top, |b, &top| {
            b.iter(|| {
                let nerve = rack_nerve(&rack, top + 1, DEFAULT_CELL_BUDGET).unwrap();
                let cx = build_cubical_complex(Arc::new(nerve), FieldTag::Rationals, Flavor::Normalized).unwrap();
                homology(&cx, top).unwrap()
            })
        });
    }
    g.finish();
}

fn s_map_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("s_map");
    g.sample_size(10);
    let grp = group_preset("symmetric:3").unwrap();
    for (label, mode) in [("rack", SMode::RackFormula), ("cubical", SMode::CubicalToSimplicial)] {
        g.bench_function(label, |b| b.iter(|| s_map(mode, &grp, FieldTag::Rationals, 3, DEFAULT_CELL_BUDGET).unwrap()));
    }
    g.finish();
}

fn matrix_lemmas(c: &mut Criterion) {
    let mut g = c.benchmark_group("gl_lemmas");
    g.sample_size(10);
    for ring in [RingTag::zmod(4).unwrap(), RingTag::prime_field(2).unwrap()] {
        g.bench_function(ring.to_string(), |b| b.iter(|| verify_matrix_lemmas(ring, 3, 20, 1).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, rack_homology, s_map_build, matrix_lemmas);
criterion_main!(benches);
