use rayon::prelude::*;
use sha2::{Digest, Sha256};

use lowdisc::quality::{AccumMode, Accumulator};
use lowdisc::{Result, Sampler};

use crate::scene::{reference_image, scene};

#[derive(Debug, Clone)]
pub struct RenderJob {
    pub width: u32,
    pub height: u32,
    pub spp: u32,
    pub sampler: Sampler,
    pub workers: usize,
    pub accum: AccumMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    pub width: u32,
    pub height: u32,
    /// Row-major pixel values.
    pub values: Vec<f64>,
}

fn to_byte(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

impl ImageBuffer {
    /// Binary PGM (P5), maxval 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.values.iter().map(|&v| to_byte(v)));
        out
    }

    /// Binary PPM (P6), the gray value in all three channels.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        for &v in &self.values {
            out.extend([to_byte(v); 3]);
        }
        out
    }

    /// Root-mean-square difference to `reference`.
    pub fn rms_error(&self, reference: &[f64]) -> f64 {
        let sq: f64 = self
            .values
            .iter()
            .zip(reference)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (sq / self.values.len() as f64).sqrt()
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn render_pixel(job: &RenderJob, x: u32, y: u32) -> Result<f64> {
    let stream = job.sampler.stream(Some((x, y)))?;
    if (job.spp as u64) > stream.len() {
        return Err(lowdisc::Error::Range(format!(
            "pixel ({x}, {y}) has only {} samples",
            stream.len()
        )));
    }
    let (w, h) = (job.width as f64, job.height as f64);
    let mut acc = Accumulator::new(job.accum);
    let mut p = [0u32; 2];
    for i in 0..job.spp {
        stream.point_bits(i, &mut p);
        let u = (x as f64 + lowdisc::map_u32_to_unifloat(p[0]).to_f64()) / w;
        let v = (y as f64 + lowdisc::map_u32_to_unifloat(p[1]).to_f64()) / h;
        acc.add(scene(u, v))?;
    }
    Ok(acc.value() / job.spp as f64)
}

/// Estimates every pixel's average of the scene with its own sample
/// stream. Pixels are independent, so the result does not depend on the
/// worker count.
pub fn render(job: &RenderJob) -> Result<ImageBuffer> {
    if job.width == 0 || job.height == 0 || job.spp == 0 {
        return Err(lowdisc::Error::Config("width, height and spp must be positive".into()));
    }
    if job.sampler.dims() < 2 {
        return Err(lowdisc::Error::Config("rendering needs a 2-dimensional sampler".into()));
    }
    if let Some(image) = job.sampler.image() {
        if image != (job.width, job.height) {
            return Err(lowdisc::Error::Config(format!(
                "sampler configured for {}x{}, job is {}x{}",
                image.0, image.1, job.width, job.height
            )));
        }
    }
    let pixels = job.width as usize * job.height as usize;
    let work = |k: usize| render_pixel(job, (k % job.width as usize) as u32, (k / job.width as usize) as u32);
    let values: Result<Vec<f64>> = if job.workers <= 1 {
        (0..pixels).map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(job.workers)
            .build()
            .map_err(|e| lowdisc::Error::Config(e.to_string()))?;
        pool.install(|| (0..pixels).into_par_iter().map(work).collect())
    };
    Ok(ImageBuffer {
        width: job.width,
        height: job.height,
        values: values?,
    })
}

/// Renders and compares against the exact per-pixel averages.
pub fn render_with_error(job: &RenderJob) -> Result<(ImageBuffer, f64)> {
    let img = render(job)?;
    let rms = img.rms_error(&reference_image(job.width, job.height));
    Ok((img, rms))
}
