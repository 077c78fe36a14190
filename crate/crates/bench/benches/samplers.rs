use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use lowdisc::lattice::lfsr_generator_vector;
use lowdisc::radical::TabledHalton;
use lowdisc::unitfloat::map_u32_to_unifloat;
use lowdisc::{SampleStream, Sampler, SamplerKind, SamplerParams};

const DIMS: usize = 32;
const POINTS: u32 = 4096;

fn stream(kind: SamplerKind) -> SampleStream {
    let params = SamplerParams::new(DIMS)
        .with_generator(lfsr_generator_vector(0xACE1, DIMS).unwrap())
        .with_image(64, 64)
        .with_spp(POINTS);
    let s = Sampler::new(kind, &params).unwrap();
    let pixel = kind.needs_pixel().then_some((17, 40));
    s.stream(pixel).unwrap()
}

fn run_stream(s: &SampleStream, buf: &mut [u32]) -> u32 {
    let mut acc = 0;
    for i in 0..POINTS {
        s.point_bits(black_box(i), buf);
        acc ^= buf.iter().fold(0, |a, &b| a ^ b);
    }
    acc
}

fn points(c: &mut Criterion) {
    let mut g = c.benchmark_group("points");
    g.throughput(Throughput::Elements(POINTS as u64 * DIMS as u64));
    for kind in [
        SamplerKind::Lattice,
        SamplerKind::PixelShiftedLattice,
        SamplerKind::PixelRandomLattice,
        SamplerKind::Sobol,
        SamplerKind::Halton,
        SamplerKind::Random,
    ] {
        let s = stream(kind);
        let mut buf = vec![0u32; DIMS];
        g.bench_function(BenchmarkId::from_parameter(kind.name()), |b| {
            b.iter(|| run_stream(&s, &mut buf))
        });
    }
    let h = TabledHalton::new(DIMS, &[]).unwrap();
    g.bench_function(BenchmarkId::from_parameter("halton_tabled"), |b| {
        b.iter(|| {
            let mut acc = 0;
            for i in 0..POINTS {
                let i = black_box(i);
                for j in 0..DIMS {
                    acc ^= h.component_bits(i, j);
                }
            }
            acc
        })
    });
    g.finish();
}

fn unifloat(c: &mut Criterion) {
    let mut g = c.benchmark_group("unifloat");
    g.throughput(Throughput::Elements(1 << 16));
    g.bench_function("map_u32_to_unifloat", |b| {
        b.iter(|| {
            let mut acc = 0u32;
            for k in 0..1u32 << 16 {
                acc ^= map_u32_to_unifloat(black_box(k.wrapping_mul(0x9E37_79B9))).to_bits();
            }
            acc
        })
    });
    g.finish();
}

criterion_group!(benches, points, unifloat);
criterion_main!(benches);
