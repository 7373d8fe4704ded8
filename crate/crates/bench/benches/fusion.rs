use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qbelief::{
    enumerate_hyper_power_set, fuse, q_div_internal, q_mul, ApproxMode, Combiner, Frame,
    FusionConfig, LabelScale, Model, Rule,
};
use qbelief_bench::{four_atom_qualitative, two_source_numeric};

fn label_ops(c: &mut Criterion) {
    let scale = LabelScale::new(5).unwrap();
    let (a, b) = (scale.label(4), scale.label(3));
    c.bench_function("q_mul stepwise", |bench| {
        bench.iter(|| q_mul(black_box(&a), black_box(&b), ApproxMode::Stepwise))
    });
    c.bench_function("q_div_internal deferred", |bench| {
        bench.iter(|| q_div_internal(black_box(&a), black_box(&b), ApproxMode::Deferred))
    });
}

fn enumeration(c: &mut Criterion) {
    let frame = Frame::new(["A", "B", "C", "D"]).unwrap();
    c.bench_function("hyper-power set |Θ|=4 free", |bench| {
        bench.iter(|| enumerate_hyper_power_set(black_box(&frame), &Model::Free))
    });
}

fn fusion(c: &mut Criterion) {
    let (q1, q2) = two_source_numeric();
    let (r1, r2) = four_atom_qualitative();
    for mode in [ApproxMode::Stepwise, ApproxMode::Deferred] {
        let cfg = FusionConfig::new(Rule::Pcr5, mode, Combiner::Min);
        c.bench_function(&format!("pcr5 two atoms {mode:?}"), |bench| {
            bench.iter(|| fuse(black_box(&q1), black_box(&q2), cfg))
        });
        c.bench_function(&format!("pcr5 four atoms {mode:?}"), |bench| {
            bench.iter(|| fuse(black_box(&r1), black_box(&r2), cfg))
        });
    }
}

criterion_group!(benches, label_ops, enumeration, fusion);
criterion_main!(benches);
