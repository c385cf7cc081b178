use criterion::{black_box, criterion_group, criterion_main, Criterion};
use wilson_knot::fixtures::worked_examples;
use wilson_knot::kz::DEFAULT_TOL;
use wilson_knot::{build_system, jones, monodromy, normalize, SearchConfig, Singularity};

fn bench_jones(c: &mut Criterion) {
    for f in worked_examples()
        .into_iter()
        .filter(|f| ["fig4a", "fig7a"].contains(&f.name))
    {
        c.bench_function(&format!("jones/{}", f.name), |b| {
            b.iter(|| jones(black_box(&f.diagram)).unwrap())
        });
    }
}

fn bench_normalize(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    for f in worked_examples()
        .into_iter()
        .filter(|f| ["fig1", "fig3b"].contains(&f.name))
    {
        c.bench_function(&format!("encode_normalize/{}", f.name), |b| {
            b.iter(|| {
                let w = f.encode().unwrap();
                normalize(black_box(&w), &cfg).unwrap()
            })
        });
    }
}

fn bench_kz(c: &mut Criterion) {
    let sys = build_system(2, 1).unwrap();
    let mut group = c.benchmark_group("kz");
    group.sample_size(10);
    group.bench_function("monodromy_N2_k1", |b| {
        b.iter(|| monodromy(black_box(&sys), Singularity::Zero, DEFAULT_TOL).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_jones, bench_normalize, bench_kz);
criterion_main!(benches);
