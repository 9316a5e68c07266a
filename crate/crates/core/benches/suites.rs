use cascade_kit::cascade::compute_cascade;
use cascade_kit::chevalley::ChevalleyTable;
use cascade_kit::invariants;
use cascade_kit::rootsys::RootSystem;
use cascade_kit::suite::{coadjoint_suite, SuiteConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODE: &str = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };

fn suites(c: &mut Criterion) {
    let cfg = SuiteConfig {
        samples: 10,
        ..SuiteConfig::default()
    };
    let mut group = c.benchmark_group(format!("suites-{MODE}"));
    group.sample_size(10);
    for ty in ["A3", "B3", "G2"] {
        let rs = RootSystem::from_spec_str(ty).unwrap();
        let cascade = compute_cascade(&rs);
        let tbl = ChevalleyTable::new(rs);
        group.bench_with_input(BenchmarkId::new("coadjoint", ty), &ty, |b, _| {
            b.iter(|| coadjoint_suite(&tbl, &cascade, &cfg))
        });
        group.bench_with_input(BenchmarkId::new("invariant-data", ty), &ty, |b, _| {
            b.iter(|| invariants::compute_data(&tbl, &cascade, 6).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
