use criterion::{criterion_group, criterion_main, Criterion};
use freelsd::lsd::{lsd_density, GridSpec};
use freelsd::{InversionConfig, ModelParams};

fn density(c: &mut Criterion) {
    let p = ModelParams::default_experiment();
    let mut group = c.benchmark_group("lsd_density");
    group.sample_size(10);
    for count in [201, 2001] {
        let cfg = InversionConfig::with_grid(GridSpec::new(0.0, 5.5, count).unwrap());
        group.bench_function(format!("{count}_points"), |b| b.iter(|| lsd_density(&p, &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, density);
criterion_main!(benches);
