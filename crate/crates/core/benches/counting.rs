use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use reciprocal_curves::search::{search, SearchConfig};
use reciprocal_curves::{Exec, Family, ReciprocalKummer, Tower};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn single_cover(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_points");
    group.sample_size(10);
    for (q, m, f, s) in [(49u64, 10u64, "x^2+3", 0u64), (361, 10, "x^3+2", 2)] {
        let t = Tower::from_q(q).unwrap();
        let curve = ReciprocalKummer::over_x_power(&t, m, s, t.parse_base_poly(f).unwrap()).unwrap();
        for (name, exec) in EXECS {
            group.bench_with_input(BenchmarkId::new(name, q), &exec, |b, &exec| {
                b.iter(|| curve.count_points(&t, exec).unwrap().points)
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let cfg = SearchConfig::new(vec![Family::ReciprocalPlus], vec![13, 17, 19], vec![2]);
    for (name, exec) in EXECS {
        group.bench_function(name, |b| b.iter(|| search(&cfg, None, exec).unwrap().0.len()));
    }
    group.finish();
}

criterion_group!(benches, single_cover, sweep);
criterion_main!(benches);
