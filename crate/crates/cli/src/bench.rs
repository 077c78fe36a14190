use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;

use lowdisc::radical::TabledHalton;
use lowdisc::{Error, Result, SampleStream};

/// Something whose point components can be timed.
#[derive(Debug, Clone)]
pub enum BenchTarget {
    Stream(SampleStream),
    /// Linearly scrambled Halton with multi-digit tables.
    TabledHalton(TabledHalton),
}

pub const TABLED_HALTON: &str = "halton_tabled";

impl BenchTarget {
    pub fn dims(&self) -> usize {
        match self {
            BenchTarget::Stream(s) => s.dims(),
            BenchTarget::TabledHalton(h) => h.dims(),
        }
    }

    fn points(&self) -> u64 {
        match self {
            BenchTarget::Stream(s) => s.len(),
            BenchTarget::TabledHalton(_) => 1 << 32,
        }
    }

    /// XOR of all components of points `0..n`.
    fn run(&self, n: u32) -> u32 {
        let dims = self.dims();
        let mut buf = vec![0u32; dims];
        let mut acc = 0u32;
        match self {
            BenchTarget::Stream(s) => {
                for i in 0..n {
                    s.point_bits(black_box(i), &mut buf);
                    acc ^= buf.iter().fold(0, |a, &b| a ^ b);
                }
            }
            BenchTarget::TabledHalton(h) => {
                for i in 0..n {
                    let i = black_box(i);
                    for (j, b) in buf.iter_mut().enumerate() {
                        *b = h.component_bits(i, j);
                    }
                    acc ^= buf.iter().fold(0, |a, &b| a ^ b);
                }
            }
        }
        acc
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Throughput {
    pub name: String,
    pub components: u64,
    pub seconds: f64,
    pub components_per_second: f64,
    /// XOR of every generated component, for checking determinism.
    pub checksum: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub a: Throughput,
    pub b: Throughput,
    /// Throughput of `a` over throughput of `b`.
    pub ratio: f64,
}

const REPEATS: usize = 5;

fn measure(name: &str, t: &BenchTarget, count: u64) -> Result<Throughput> {
    let points = count.div_ceil(t.dims() as u64);
    if points > t.points() || points > u32::MAX as u64 {
        return Err(Error::Range(format!("{name}: {count} components exceed the stream")));
    }
    let n = points as u32;
    let checksum = t.run(n);
    let mut best = f64::INFINITY;
    for _ in 0..REPEATS {
        let start = Instant::now();
        black_box(t.run(n));
        best = best.min(start.elapsed().as_secs_f64());
    }
    let components = points * t.dims() as u64;
    Ok(Throughput {
        name: name.to_string(),
        components,
        seconds: best,
        components_per_second: components as f64 / best.max(1e-12),
        checksum,
    })
}

/// Times `count` components of each target, best of several runs after a
/// warm-up pass.
pub fn compare(a: (&str, &BenchTarget), b: (&str, &BenchTarget), count: u64) -> Result<BenchReport> {
    if count == 0 {
        return Err(Error::Config("count must be positive".into()));
    }
    let ta = measure(a.0, a.1, count)?;
    let tb = measure(b.0, b.1, count)?;
    let ratio = ta.components_per_second / tb.components_per_second;
    Ok(BenchReport { a: ta, b: tb, ratio })
}
