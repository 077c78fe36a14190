//! Uniformity metrics, test integrands and deterministic accumulation.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::imageplane::stream::PointSource;
use crate::unitfloat::UnitValue;

/// Indices per work item in [`integrate`]. Fixed, so the reduction tree does
/// not depend on the worker count.
pub const CHUNK: u64 = 1024;

fn flatten(points: &[Vec<UnitValue>]) -> Result<(usize, Vec<f64>)> {
    let s = points.first().map_or(0, Vec::len);
    if points.is_empty() || s == 0 {
        return Err(Error::Range("empty point set".into()));
    }
    if points.iter().any(|p| p.len() != s) {
        return Err(Error::Config("points of mixed dimension".into()));
    }
    Ok((s, points.iter().flatten().map(|v| v.to_f64()).collect()))
}

/// L2-star discrepancy by Warnock's formula.
pub fn l2_star_discrepancy(points: &[Vec<UnitValue>]) -> Result<f64> {
    let (s, x) = flatten(points)?;
    let n = points.len();
    let rows: Vec<&[f64]> = x.chunks_exact(s).collect();
    let single: f64 = rows
        .iter()
        .map(|p| p.iter().map(|&v| (1.0 - v * v) / 2.0).product::<f64>())
        .sum();
    let pair_rows: Vec<f64> = rows
        .par_iter()
        .map(|a| {
            rows.iter()
                .map(|b| a.iter().zip(*b).map(|(&u, &v)| 1.0 - u.max(v)).product::<f64>())
                .sum()
        })
        .collect();
    let pairs: f64 = pair_rows.iter().sum();
    let n = n as f64;
    let t2 = 3f64.powi(-(s as i32)) - 2.0 / n * single + pairs / (n * n);
    Ok(t2.max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratification {
    pub ok: bool,
    pub histogram: Vec<u32>,
}

/// Counts the first `2^m` values of dimension `j` in the `2^m` dyadic
/// intervals, on the 32-bit integer stage.
pub fn check_1d_stratification(src: &dyn PointSource, j: usize, m: u32) -> Result<Stratification> {
    if m > 20 {
        return Err(Error::Range(format!("m = {m} exceeds 20")));
    }
    if j >= src.dims() {
        return Err(Error::Dimensions {
            requested: j + 1,
            available: src.dims(),
        });
    }
    let n = 1u64 << m;
    if src.len() < n {
        return Err(Error::Range(format!("source holds fewer than 2^{m} points")));
    }
    let mut histogram = vec![0u32; n as usize];
    for i in 0..n as u32 {
        let bits = src.component_bits(i, j);
        let k = if m == 0 { 0 } else { bits >> (32 - m) };
        histogram[k as usize] += 1;
    }
    Ok(Stratification {
        ok: histogram.iter().all(|&c| c == 1),
        histogram,
    })
}

/// Smallest wrap-around Euclidean distance between two points.
pub fn min_toroidal_distance(points: &[Vec<UnitValue>]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Range("need at least two points".into()));
    }
    let (s, x) = flatten(points)?;
    let rows: Vec<&[f64]> = x.chunks_exact(s).collect();
    let best = (0..rows.len())
        .into_par_iter()
        .map(|a| {
            rows[a + 1..]
                .iter()
                .map(|b| {
                    rows[a]
                        .iter()
                        .zip(*b)
                        .map(|(&u, &v)| {
                            let d = (u - v).abs();
                            let d = d.min(1.0 - d);
                            d * d
                        })
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum IntegrandKind {
    /// `∏ (π/2) sin(π x_j)`
    ProductSine,
    /// `∏ 3 x_j²`
    ProductPoly,
    /// `∏ 1[x_j < c_j]`
    Indicator { corner: Vec<f64> },
    Constant { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestIntegrand {
    pub name: String,
    pub dims: usize,
    pub kind: IntegrandKind,
}

impl TestIntegrand {
    pub fn new(name: &str, dims: usize, kind: IntegrandKind) -> Result<Self> {
        if dims == 0 {
            return Err(Error::Config("integrand needs at least one dimension".into()));
        }
        if let IntegrandKind::Indicator { corner } = &kind {
            if corner.len() != dims || corner.iter().any(|c| !(0.0..=1.0).contains(c)) {
                return Err(Error::Config("indicator corner must lie in [0,1]^s".into()));
            }
        }
        Ok(TestIntegrand {
            name: name.to_string(),
            dims,
            kind,
        })
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let x = &x[..self.dims];
        match &self.kind {
            IntegrandKind::ProductSine => x.iter().map(|&v| PI / 2.0 * (PI * v).sin()).product(),
            IntegrandKind::ProductPoly => x.iter().map(|&v| 3.0 * v * v).product(),
            IntegrandKind::Indicator { corner } => {
                if x.iter().zip(corner).all(|(&v, &c)| v < c) {
                    1.0
                } else {
                    0.0
                }
            }
            IntegrandKind::Constant { value } => *value,
        }
    }

    pub fn exact_integral(&self) -> f64 {
        match &self.kind {
            IntegrandKind::ProductSine | IntegrandKind::ProductPoly => 1.0,
            IntegrandKind::Indicator { corner } => corner.iter().product(),
            IntegrandKind::Constant { value } => *value,
        }
    }
}

/// Product-sine, product-polynomial and an indicator of the box
/// `[0, 0.6)^s`, all in `dims` dimensions.
pub fn builtin_integrands(dims: usize) -> Result<Vec<TestIntegrand>> {
    Ok(vec![
        TestIntegrand::new("product_sine", dims, IntegrandKind::ProductSine)?,
        TestIntegrand::new("product_poly", dims, IntegrandKind::ProductPoly)?,
        TestIntegrand::new(
            "indicator",
            dims,
            IntegrandKind::Indicator {
                corner: vec![0.6; dims],
            },
        )?,
    ])
}

/// Looks up a built-in integrand by name.
pub fn integrand_by_name(name: &str, dims: usize) -> Result<TestIntegrand> {
    builtin_integrands(dims)?
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::Config(format!("unknown integrand '{name}'")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AccumMode {
    /// Compensated floating-point summation.
    #[default]
    Kahan,
    /// 64-bit integer sum of values quantized to `2^-32`.
    Int,
}

impl fmt::Display for AccumMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccumMode::Kahan => "kahan",
            AccumMode::Int => "int",
        })
    }
}

impl FromStr for AccumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kahan" => Ok(AccumMode::Kahan),
            "int" => Ok(AccumMode::Int),
            _ => Err(Error::Config(format!("unknown accumulation mode '{s}'"))),
        }
    }
}

const FIXED_ONE: f64 = 4_294_967_296.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Accumulator {
    Kahan { sum: f64, comp: f64 },
    Int { sum: i64 },
}

impl Accumulator {
    pub fn new(mode: AccumMode) -> Self {
        match mode {
            AccumMode::Kahan => Accumulator::Kahan { sum: 0.0, comp: 0.0 },
            AccumMode::Int => Accumulator::Int { sum: 0 },
        }
    }

    pub fn mode(&self) -> AccumMode {
        match self {
            Accumulator::Kahan { .. } => AccumMode::Kahan,
            Accumulator::Int { .. } => AccumMode::Int,
        }
    }

    /// Quantizes `x` to the fixed-point grid used in integer mode.
    pub fn quantize(x: f64) -> Result<i64> {
        let q = (x * FIXED_ONE).round();
        if !q.is_finite() || q.abs() >= 9.0e18 {
            return Err(Error::AccumulatorOverflow);
        }
        Ok(q as i64)
    }

    #[inline]
    fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    pub fn add(&mut self, x: f64) -> Result<()> {
        match self {
            Accumulator::Kahan { sum, comp } => Self::neumaier(sum, comp, x),
            Accumulator::Int { sum } => {
                *sum = sum
                    .checked_add(Self::quantize(x)?)
                    .ok_or(Error::AccumulatorOverflow)?;
            }
        }
        Ok(())
    }

    /// Adds a partial result. Modes must match.
    pub fn merge(&mut self, other: &Accumulator) -> Result<()> {
        match (self, other) {
            (Accumulator::Kahan { sum, comp }, Accumulator::Kahan { sum: s, comp: c }) => {
                Self::neumaier(sum, comp, *s);
                Self::neumaier(sum, comp, *c);
                Ok(())
            }
            (Accumulator::Int { sum }, Accumulator::Int { sum: s }) => {
                *sum = sum.checked_add(*s).ok_or(Error::AccumulatorOverflow)?;
                Ok(())
            }
            _ => Err(Error::Config("cannot merge accumulators of different modes".into())),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Accumulator::Kahan { sum, comp } => sum + comp,
            Accumulator::Int { sum } => sum as f64 / FIXED_ONE,
        }
    }
}

/// Compensated sum of `values` in the given order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut acc = Accumulator::new(AccumMode::Kahan);
    for &v in values {
        acc.add(v).expect("compensated mode cannot overflow");
    }
    acc.value()
}

/// Combines partial results in rank order, whatever order they arrive in.
pub fn reduce_deterministic(mut partials: Vec<(usize, Accumulator)>) -> Result<Accumulator> {
    partials.sort_by_key(|&(rank, _)| rank);
    if partials.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Config("duplicate partition rank".into()));
    }
    let mut iter = partials.into_iter().map(|(_, a)| a);
    let mut total = iter
        .next()
        .ok_or_else(|| Error::Range("no partial results".into()))?;
    for p in iter {
        total.merge(&p)?;
    }
    Ok(total)
}

/// Sum of `f` over indices `range` of `src`, in index order.
pub fn accumulate_range(
    src: &dyn PointSource,
    f: &TestIntegrand,
    range: impl Iterator<Item = u64>,
    mode: AccumMode,
) -> Result<Accumulator> {
    let mut acc = Accumulator::new(mode);
    let mut x = vec![0.0; f.dims];
    for i in range {
        for (j, v) in x.iter_mut().enumerate() {
            *v = src.component(i as u32, j).to_f64();
        }
        let y = f.evaluate(&x);
        if !y.is_finite() {
            return Err(Error::NonFinite { index: i, value: y });
        }
        acc.add(y)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationRow {
    pub n: u64,
    pub estimate: f64,
    pub exact: f64,
    pub abs_error: f64,
    pub seconds: f64,
}

/// `(1/n) Σ f(x_i)` over the first `n` points, split into [`CHUNK`]-sized
/// work items spread over `workers` threads and reduced in chunk order.
pub fn integrate(
    src: &dyn PointSource,
    f: &TestIntegrand,
    n: u64,
    mode: AccumMode,
    workers: usize,
) -> Result<IntegrationRow> {
    if n == 0 {
        return Err(Error::Range("n must be positive".into()));
    }
    if src.dims() < f.dims {
        return Err(Error::Dimensions {
            requested: f.dims,
            available: src.dims(),
        });
    }
    if n > src.len() {
        return Err(Error::Range(format!("n = {n} exceeds the {} available points", src.len())));
    }
    let start = Instant::now();
    let chunks = n.div_ceil(CHUNK);
    let work = |c: u64| -> Result<(usize, Accumulator)> {
        let lo = c * CHUNK;
        let acc = accumulate_range(src, f, lo..(lo + CHUNK).min(n), mode)?;
        Ok((c as usize, acc))
    };
    let partials: Result<Vec<_>> = if workers <= 1 {
        (0..chunks).map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| (0..chunks).into_par_iter().map(work).collect())
    };
    let estimate = reduce_deterministic(partials?)?.value() / n as f64;
    let exact = f.exact_integral();
    Ok(IntegrationRow {
        n,
        estimate,
        exact,
        abs_error: (estimate - exact).abs(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationReport {
    pub sampler: String,
    pub integrand: String,
    pub dims: usize,
    pub accum: AccumMode,
    pub rows: Vec<IntegrationRow>,
}

impl IntegrationReport {
    /// Integrates at every `n` of `schedule`, which must be strictly
    /// increasing.
    pub fn run(
        sampler: &str,
        src: &dyn PointSource,
        f: &TestIntegrand,
        schedule: &[u64],
        mode: AccumMode,
        workers: usize,
    ) -> Result<Self> {
        if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("N schedule must be non-empty and strictly increasing".into()));
        }
        let rows = schedule
            .iter()
            .map(|&n| integrate(src, f, n, mode, workers))
            .collect::<Result<_>>()?;
        Ok(IntegrationReport {
            sampler: sampler.to_string(),
            integrand: f.name.clone(),
            dims: f.dims,
            accum: mode,
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One header line, then `n,estimate,exact,abs_error,seconds` per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,estimate,exact,abs_error,seconds\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{:.6}\n",
                r.n, r.estimate, r.exact, r.abs_error, r.seconds
            ));
        }
        out
    }
}

/// The first `n` points of `src`.
pub fn collect_points(src: &dyn PointSource, n: u64) -> Result<Vec<Vec<UnitValue>>> {
    if n > src.len() {
        return Err(Error::Range(format!("n = {n} exceeds the {} available points", src.len())));
    }
    Ok((0..n as u32)
        .map(|i| (0..src.dims()).map(|j| src.component(i, j)).collect())
        .collect())
}
