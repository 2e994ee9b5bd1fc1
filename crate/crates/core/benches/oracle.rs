use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use vassinc::oracle::{bounded_language_with, OracleBudget};
use vassinc::{Exec, Vass};

/// Three counters fed by `a`, drained by `b` and `c`: many live words.
fn wide() -> Vass {
    Vass::builder("wide", 2)
        .alphabet(&["a", "b", "c"])
        .init("p", &[1, 1])
        .trans("p", "a", &[1, 0], "p")
        .trans("p", "a", &[0, 1], "q")
        .trans("p", "b", &[-1, 0], "p")
        .trans("q", "c", &[0, -1], "p")
        .trans("q", "a", &[1, 1], "q")
        .trans("q", "b", &[0, 0], "p")
        .accept_up("p", &[1, 0])
        .accept_up("q", &[0, 2])
        .build()
        .unwrap()
}

fn oracle(c: &mut Criterion) {
    let v = wide();
    let budget = OracleBudget { max_word_len: 12, ..OracleBudget::default() };
    let mut group = c.benchmark_group("bounded_language");
    group.sample_size(10);
    for len in [8usize, 10] {
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, len), &len, |b, &len| {
                b.iter(|| bounded_language_with(&v, len, &budget, exec).unwrap().len())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, oracle);
criterion_main!(benches);
