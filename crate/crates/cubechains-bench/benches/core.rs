use criterion::{criterion_group, criterion_main, Criterion};

use cubechains::cubical::{CubicalComplex, LabelSet};
use cubechains::euclid::{enumerate_critical_routes, EuclideanComplex};
use cubechains::homology::betti;
use cubechains::morse::permutahedron_field;
use cubechains::partitions::{build_pk, partition_poset};
use cubechains::wk::{build_wk, enumerate_critical_sequences};

fn bench_permutahedron(c: &mut Criterion) {
    c.bench_function("permutahedron_field_5", |b| {
        b.iter(|| permutahedron_field(5))
    });
}

fn bench_pk(c: &mut Criterion) {
    let k = CubicalComplex::full(LabelSet::numeric(5)).skeleton(3);
    c.bench_function("build_pk_5_skeleton_3", |b| b.iter(|| build_pk(&k)));
}

fn bench_wk(c: &mut Criterion) {
    let k = CubicalComplex::full(LabelSet::numeric(5)).skeleton(3);
    c.bench_function("build_wk_5_skeleton_3", |b| b.iter(|| build_wk(&k)));
    c.bench_function("critical_sequences_5_skeleton_3", |b| {
        b.iter(|| enumerate_critical_sequences(&k))
    });
}

fn bench_routes(c: &mut Criterion) {
    let complex = EuclideanComplex::full_box(vec![2, 2, 2]).unwrap().skeleton(2);
    c.bench_function("critical_routes_box222_skeleton_2", |b| {
        b.iter(|| enumerate_critical_routes(&complex))
    });
}

fn bench_betti(c: &mut Criterion) {
    let k = CubicalComplex::full(LabelSet::numeric(4)).skeleton(2);
    let poset = partition_poset(build_pk(&k));
    let oc = poset.order_complex(None);
    c.bench_function("betti_4_skeleton_2", |b| b.iter(|| betti(&oc, 100_000)));
}

criterion_group!(
    benches,
    bench_permutahedron,
    bench_pk,
    bench_wk,
    bench_routes,
    bench_betti
);
criterion_main!(benches);
