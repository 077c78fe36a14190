use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lowdisc::imageplane::{XorTables, XOR_TILE};
use lowdisc::lattice::{check_admissible, lfsr_generator_vector, parse_generator_vector};
use lowdisc::quality::{integrand_by_name, AccumMode, IntegrationReport};
use lowdisc::radical::{parse_scramble_factors, ScrambleFactor, TabledHalton};
use lowdisc::{
    build_matrices, parse_direction_numbers, GeneratorVector, HaltonMode, Sampler, SamplerKind,
    SamplerParams,
};

use crate::bench::{compare, BenchTarget, TABLED_HALTON};
use crate::render::{render_with_error, sha256_hex, RenderJob};
use crate::CliError;

/// Seed of the LFSR generator vector used when no `--gv` file is given.
pub const DEFAULT_LFSR_SEED: u32 = 0xACE1;

#[derive(Debug, Parser)]
#[command(name = "lowdisc", version, about = "Low discrepancy samplers and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the first N points of a sampler.
    Points(PointsArgs),
    /// Render the test scene with one sample stream per pixel.
    Render(RenderArgs),
    /// Check a generator vector for admissibility.
    Check(CheckArgs),
    /// Compare component throughput of two samplers.
    Bench(BenchArgs),
    /// Integrate a test function over an N schedule.
    Integrate(IntegrateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Bin,
    Pgm,
    Ppm,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HaltonArg {
    Plain,
    Faure,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AccumArg {
    Kahan,
    Int,
}

impl From<AccumArg> for AccumMode {
    fn from(a: AccumArg) -> Self {
        match a {
            AccumArg::Kahan => AccumMode::Kahan,
            AccumArg::Int => AccumMode::Int,
        }
    }
}

fn parse_pair(s: &str, sep: char) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once(sep)
        .ok_or_else(|| format!("expected two numbers separated by '{sep}'"))?;
    let a = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    Ok((a, b))
}

fn parse_size(s: &str) -> Result<(u32, u32), String> {
    let (w, h) = parse_pair(&s.to_ascii_lowercase(), 'x')?;
    if w == 0 || h == 0 {
        return Err("image size must be positive".into());
    }
    Ok((w, h))
}

fn parse_pixel(s: &str) -> Result<(u32, u32), String> {
    parse_pair(s, ',')
}

fn parse_kind(s: &str) -> Result<SamplerKind, String> {
    s.parse().map_err(|e: lowdisc::Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SamplerArgs {
    /// sobol, halton, lattice, random, halton_hilbert, pixel_shifted_lattice,
    /// pixel_random_lattice, image_plane_halton or sobol_xor_table
    #[arg(long, value_parser = parse_kind)]
    pub sampler: SamplerKind,
    /// Generator vector file, one odd component per line.
    #[arg(long)]
    pub gv: Option<PathBuf>,
    /// Direction number file in the Joe-Kuo layout.
    #[arg(long)]
    pub dirnums: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = HaltonArg::Plain)]
    pub halton: HaltonArg,
    /// "base factor" pairs for linear Halton scrambling.
    #[arg(long)]
    pub scramble_factors: Option<PathBuf>,
    /// XOR table file; white-noise tables from --seed otherwise.
    #[arg(long)]
    pub xor_tables: Option<PathBuf>,
    /// Pixel for pixel-dependent samplers.
    #[arg(long, value_parser = parse_pixel, default_value = "0,0")]
    pub pixel: (u32, u32),
}

#[derive(Debug, Args)]
pub struct PointsArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    #[arg(long, value_parser = parse_size)]
    pub size: Option<(u32, u32)>,
    #[arg(long)]
    pub spp: Option<u32>,
    /// csv or bin
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, value_parser = parse_size)]
    pub size: (u32, u32),
    #[arg(long, default_value_t = 16)]
    pub spp: u32,
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = AccumArg::Kahan)]
    pub accum: AccumArg,
    /// pgm, ppm or json (summary only)
    #[arg(long, value_enum, default_value_t = Format::Pgm)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub gv: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub m_max: u32,
    /// text or json
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Sampler to compare against: a sampler name or halton_tabled.
    #[arg(long, default_value = TABLED_HALTON)]
    pub against: String,
    /// Components generated per measurement.
    #[arg(long, default_value_t = 8_000_000)]
    pub count: u64,
    #[arg(long, default_value_t = 32)]
    pub dims: usize,
    #[arg(long, value_parser = parse_size, default_value = "64x64")]
    pub size: (u32, u32),
    /// Exit with status 1 when the ratio is below this value.
    #[arg(long)]
    pub min_ratio: Option<f64>,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// product_sine, product_poly or indicator
    #[arg(long, default_value = "product_sine")]
    pub integrand: String,
    /// Strictly increasing point counts.
    #[arg(long, value_delimiter = ',', default_value = "256,1024,4096")]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    pub dims: usize,
    #[arg(long, value_parser = parse_size)]
    pub size: Option<(u32, u32)>,
    #[arg(long)]
    pub spp: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = AccumArg::Kahan)]
    pub accum: AccumArg,
    /// json or csv
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::io(&path.display().to_string(), e)),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn load_generator(path: &Path) -> Result<GeneratorVector, CliError> {
    Ok(parse_generator_vector(&read_text(path)?)?)
}

fn scramble_factors(a: &SamplerArgs) -> Result<Vec<ScrambleFactor>, CliError> {
    match &a.scramble_factors {
        Some(path) => Ok(parse_scramble_factors(&read_text(path)?)?),
        None => Ok(Vec::new()),
    }
}

/// Builds the sampler described by the flags. `min_points` sizes the point
/// set behind XOR tables.
pub fn build_sampler(
    a: &SamplerArgs,
    dims: usize,
    image: Option<(u32, u32)>,
    spp: Option<u32>,
    min_points: u64,
) -> Result<Sampler, CliError> {
    let kind = a.sampler;
    let mut params = SamplerParams::new(dims).with_seed(a.seed);
    params.image = image;
    params.spp = spp;
    if matches!(kind, SamplerKind::Lattice | SamplerKind::PixelShiftedLattice) {
        let g = match &a.gv {
            Some(path) => {
                let g = load_generator(path)?;
                let m = (64 - min_points.max(2).leading_zeros()).min(20);
                if !check_admissible(&g, m)?.unique() {
                    eprintln!("warning: generator vector has duplicate components mod 2^m for m <= {m}");
                }
                g
            }
            None => lfsr_generator_vector(DEFAULT_LFSR_SEED, dims)?,
        };
        params.generator = Some(g);
    }
    if let Some(path) = &a.dirnums {
        let dns = parse_direction_numbers(&read_text(path)?)?;
        params.matrices = Some(Arc::new(build_matrices(&dns, dims)?));
    }
    params.halton_mode = match a.halton {
        HaltonArg::Plain => HaltonMode::Plain,
        HaltonArg::Faure => HaltonMode::Faure,
        HaltonArg::Linear => HaltonMode::Linear(scramble_factors(a)?),
    };
    if kind == SamplerKind::SobolXorTable {
        let n = min_points.max(1).next_power_of_two() as usize;
        let tables = match &a.xor_tables {
            Some(path) => {
                let bytes = fs::read(path).map_err(|e| CliError::io(&path.display().to_string(), e))?;
                let words = bytes.len().saturating_sub(4) / 4;
                let file_dims = (words / (XOR_TILE * XOR_TILE)).saturating_sub(1).max(1);
                XorTables::from_bytes(&bytes, XorTables::sobol_points(n, file_dims)?)?
            }
            None => XorTables::white_noise(a.seed, dims, XorTables::sobol_points(n, dims)?)?,
        };
        params.xor_tables = Some(Arc::new(tables));
    }
    Ok(Sampler::new(kind, &params)?)
}

fn stream_for(sampler: &Sampler, pixel: (u32, u32)) -> Result<lowdisc::SampleStream, CliError> {
    let px = if sampler.kind().needs_pixel() || sampler.kind() == SamplerKind::Random {
        Some(pixel)
    } else {
        None
    };
    Ok(sampler.stream(px)?)
}

fn image_for(kind: SamplerKind, size: Option<(u32, u32)>, pixel: (u32, u32)) -> Option<(u32, u32)> {
    size.or_else(|| kind.needs_pixel().then_some((pixel.0 + 1, pixel.1 + 1)))
}

pub fn cmd_points(a: &PointsArgs) -> Result<(), CliError> {
    let kind = a.sampler.sampler;
    let spp = a.spp.or_else(|| (kind == SamplerKind::HaltonHilbert).then_some(a.n.max(1) as u32));
    let image = image_for(kind, a.size, a.sampler.pixel);
    let sampler = build_sampler(&a.sampler, a.dims, image, spp, a.n)?;
    let stream = stream_for(&sampler, a.sampler.pixel)?;
    if a.n > stream.len() {
        return Err(CliError::Usage(format!(
            "--n {} exceeds the {} points available",
            a.n,
            stream.len()
        )));
    }
    let mut out = Vec::new();
    match a.format {
        Format::Csv => {
            for i in 0..a.n as u32 {
                let row: Vec<String> = stream.point(i).iter().map(|v| format!("{:.9}", v.get())).collect();
                out.extend_from_slice(row.join(",").as_bytes());
                out.push(b'\n');
            }
        }
        Format::Bin => {
            for i in 0..a.n as u32 {
                for v in stream.point(i) {
                    out.extend_from_slice(&v.get().to_le_bytes());
                }
            }
        }
        f => return Err(CliError::Usage(format!("points cannot be written as {f:?}"))),
    }
    write_output(a.out.as_deref(), &out)
}

#[derive(Debug, Serialize)]
pub struct RenderSummary {
    pub sampler: String,
    pub width: u32,
    pub height: u32,
    pub spp: u32,
    pub accum: AccumMode,
    pub rms_error: f64,
    pub sha256: String,
}

pub fn cmd_render(a: &RenderArgs) -> Result<(), CliError> {
    if !matches!(a.format, Format::Pgm | Format::Ppm | Format::Json) {
        return Err(CliError::Usage(format!("render cannot write {:?}", a.format)));
    }
    if a.format != Format::Json && a.out.is_none() {
        return Err(CliError::Usage("render needs --out for image output".into()));
    }
    let (width, height) = a.size;
    let sampler = build_sampler(&a.sampler, a.dims, Some(a.size), Some(a.spp), a.spp as u64)?;
    let job = RenderJob {
        width,
        height,
        spp: a.spp,
        sampler,
        workers: a.workers,
        accum: a.accum.into(),
    };
    let (img, rms) = render_with_error(&job)?;
    let bytes = if a.format == Format::Ppm {
        img.to_ppm()
    } else {
        img.to_pgm()
    };
    let summary = RenderSummary {
        sampler: a.sampler.sampler.to_string(),
        width,
        height,
        spp: a.spp,
        accum: job.accum,
        rms_error: rms,
        sha256: sha256_hex(&bytes),
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    match a.format {
        Format::Json => write_output(a.out.as_deref(), json.as_bytes()),
        _ => {
            write_output(a.out.as_deref(), &bytes)?;
            print!("{json}");
            Ok(())
        }
    }
}

pub fn cmd_check(a: &CheckArgs) -> Result<(), CliError> {
    let g = load_generator(&a.gv)?;
    let report = check_admissible(&g, a.m_max)?;
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
        Format::Text => {
            println!("{} components, m = 1..={}", g.dims(), a.m_max);
            for l in &report.levels {
                println!(
                    "m={:2} unique={} duplicates={:?} full_duplicates={} symmetric={:?} small={:?}",
                    l.m,
                    if l.unique_mod_ok { "ok" } else { "FAIL" },
                    l.duplicates_half,
                    l.duplicates_full,
                    l.symmetry_collisions,
                    l.small_component_warnings
                );
            }
        }
        f => return Err(CliError::Usage(format!("check cannot write {f:?}"))),
    }
    if report.unique() {
        Ok(())
    } else {
        Err(CliError::Quality("generator vector violates uniqueness".into()))
    }
}

pub fn cmd_bench(a: &BenchArgs) -> Result<(), CliError> {
    let points = a.count.div_ceil(a.dims.max(1) as u64);
    let target = |args: &SamplerArgs| -> Result<BenchTarget, CliError> {
        let spp = (args.sampler == SamplerKind::HaltonHilbert).then_some(points.min(u32::MAX as u64) as u32);
        let sampler = build_sampler(args, a.dims, Some(a.size), spp, points)?;
        Ok(BenchTarget::Stream(stream_for(&sampler, args.pixel)?))
    };
    let ta = target(&a.sampler)?;
    let tb = if a.against == TABLED_HALTON {
        BenchTarget::TabledHalton(TabledHalton::new(a.dims, &scramble_factors(&a.sampler)?)?)
    } else {
        let mut b = a.sampler.clone();
        b.sampler = parse_kind(&a.against).map_err(CliError::Usage)?;
        target(&b)?
    };
    let name_a = a.sampler.sampler.to_string();
    let report = compare((&name_a, &ta), (&a.against, &tb), a.count)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    match a.min_ratio {
        Some(min) if report.ratio < min => Err(CliError::Quality(format!(
            "throughput ratio {:.3} below {min}",
            report.ratio
        ))),
        _ => Ok(()),
    }
}

pub fn cmd_integrate(a: &IntegrateArgs) -> Result<(), CliError> {
    let f = integrand_by_name(&a.integrand, a.dims)?;
    let kind = a.sampler.sampler;
    let max_n = a.n.iter().copied().max().unwrap_or(0);
    let spp = a.spp.or_else(|| (kind == SamplerKind::HaltonHilbert).then_some(max_n.max(1) as u32));
    let image = image_for(kind, a.size, a.sampler.pixel);
    let sampler = build_sampler(&a.sampler, a.dims, image, spp, max_n)?;
    let stream = stream_for(&sampler, a.sampler.pixel)?;
    let report = IntegrationReport::run(&kind.to_string(), &stream, &f, &a.n, a.accum.into(), a.workers)?;
    let text = match a.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        f => return Err(CliError::Usage(format!("integrate cannot write {f:?}"))),
    };
    write_output(a.out.as_deref(), text.as_bytes())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Points(a) => cmd_points(a),
        Command::Render(a) => cmd_render(a),
        Command::Check(a) => cmd_check(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Integrate(a) => cmd_integrate(a),
    }
}
