use criterion::{black_box, criterion_group, criterion_main, Criterion};
use invlog::{oracle_max, render_lune, search_class, BodySearch, ClassId, PsiCoeffs, Sign};

fn body_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("body");
    group.sample_size(10);
    let b = PsiCoeffs::real(24.0, 7.0, -8.0).unwrap();
    let coarse = BodySearch::with_grid(48).unwrap();
    let fine = BodySearch::default();
    group.bench_function("psi minus, grid 48", |bench| {
        bench.iter(|| oracle_max(black_box(&b), Sign::Minus, &coarse))
    });
    group.bench_function("psi minus, grid 96", |bench| {
        bench.iter(|| oracle_max(black_box(&b), Sign::Minus, &fine))
    });
    group.bench_function("class search, starlike lune", |bench| {
        bench.iter(|| search_class(black_box(ClassId::StarlikeLune), &coarse))
    });
    group.finish();
}

fn figures(c: &mut Criterion) {
    c.bench_function("render lune 720", |b| b.iter(|| render_lune(black_box(720))));
}

criterion_group!(benches, body_search, figures);
criterion_main!(benches);
