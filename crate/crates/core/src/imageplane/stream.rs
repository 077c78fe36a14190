//! A uniform front end over all samplers: a [`Sampler`] is built once from a
//! kind and its parameters, and hands out cheap per-pixel [`SampleStream`]s.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{
    hilbert_index, order_for, pixel_shift_bits, pixel_shifted_lattice_bits, ImagePlaneHalton,
    PixelCoord, XorTables,
};
use crate::digitalnet::{GeneratorMatrixSet, SobolIndex};
use crate::error::{Error, Result};
use crate::lattice::{lattice_component_bits, pixel_hash, random_lattice_bits, GeneratorVector};
use crate::radical::{Base, Halton, HaltonMode};
use crate::unitfloat::{map_u32_to_unifloat, UnitValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplerKind {
    Sobol,
    Halton,
    Lattice,
    Random,
    HaltonHilbert,
    PixelShiftedLattice,
    PixelRandomLattice,
    ImagePlaneHalton,
    SobolXorTable,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 9] = [
        SamplerKind::Sobol,
        SamplerKind::Halton,
        SamplerKind::Lattice,
        SamplerKind::Random,
        SamplerKind::HaltonHilbert,
        SamplerKind::PixelShiftedLattice,
        SamplerKind::PixelRandomLattice,
        SamplerKind::ImagePlaneHalton,
        SamplerKind::SobolXorTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Sobol => "sobol",
            SamplerKind::Halton => "halton",
            SamplerKind::Lattice => "lattice",
            SamplerKind::Random => "random",
            SamplerKind::HaltonHilbert => "halton_hilbert",
            SamplerKind::PixelShiftedLattice => "pixel_shifted_lattice",
            SamplerKind::PixelRandomLattice => "pixel_random_lattice",
            SamplerKind::ImagePlaneHalton => "image_plane_halton",
            SamplerKind::SobolXorTable => "sobol_xor_table",
        }
    }

    /// Kinds whose samples depend on the pixel and which therefore need an
    /// image size and a pixel to build a stream.
    pub fn needs_pixel(self) -> bool {
        !matches!(
            self,
            SamplerKind::Sobol | SamplerKind::Halton | SamplerKind::Lattice | SamplerKind::Random
        )
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown sampler '{s}'")))
    }
}

/// Parameters for [`Sampler::new`]. Each kind reads only the fields it
/// needs; missing required fields are configuration errors.
#[derive(Debug, Clone)]
pub struct SamplerParams {
    pub dims: usize,
    /// Lattice generator vector (`lattice`, `pixel_shifted_lattice`).
    pub generator: Option<GeneratorVector>,
    /// Sobol' matrices; the bundled set when `None`.
    pub matrices: Option<Arc<GeneratorMatrixSet>>,
    /// One XOR word per Sobol' dimension, or empty.
    pub scrambles: Vec<u32>,
    pub halton_mode: HaltonMode,
    /// Samples per pixel (`halton_hilbert`).
    pub spp: Option<u32>,
    /// Image width and height (pixel-dependent kinds).
    pub image: Option<(u32, u32)>,
    pub seed: u64,
    pub xor_tables: Option<Arc<XorTables>>,
}

impl SamplerParams {
    pub fn new(dims: usize) -> Self {
        SamplerParams {
            dims,
            generator: None,
            matrices: None,
            scrambles: Vec::new(),
            halton_mode: HaltonMode::Plain,
            spp: None,
            image: None,
            seed: 0,
            xor_tables: None,
        }
    }

    pub fn with_generator(mut self, g: GeneratorVector) -> Self {
        self.generator = Some(g);
        self
    }

    pub fn with_image(mut self, width: u32, height: u32) -> Self {
        self.image = Some((width, height));
        self
    }

    pub fn with_spp(mut self, spp: u32) -> Self {
        self.spp = Some(spp);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_halton_mode(mut self, mode: HaltonMode) -> Self {
        self.halton_mode = mode;
        self
    }

    pub fn with_xor_tables(mut self, t: Arc<XorTables>) -> Self {
        self.xor_tables = Some(t);
        self
    }
}

/// Anything that yields 32-bit fixed-point point components by index.
pub trait PointSource: Sync {
    fn dims(&self) -> usize;

    /// Number of addressable points.
    fn len(&self) -> u64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Integer stage of component `j` of point `i`; `i < len()`, `j < dims()`.
    fn component_bits(&self, i: u32, j: usize) -> u32;

    fn component(&self, i: u32, j: usize) -> UnitValue {
        map_u32_to_unifloat(self.component_bits(i, j))
    }
}

#[derive(Debug, Clone, Copy)]
struct Image {
    width: u32,
    height: u32,
    order: u32,
}

#[derive(Debug)]
enum Inner {
    Sobol {
        set: Arc<GeneratorMatrixSet>,
        scrambles: Vec<u32>,
    },
    Halton(Halton),
    Lattice(GeneratorVector),
    Random {
        seed: u64,
    },
    HaltonHilbert {
        halton: Halton,
        spp: u32,
        image: Image,
    },
    PixelShiftedLattice {
        g: GeneratorVector,
        image: Image,
    },
    PixelRandomLattice {
        image: Image,
    },
    ImagePlaneHalton {
        halton: Halton,
        grid: ImagePlaneHalton,
        base3: Base,
        image: Image,
    },
    SobolXorTable {
        tables: Arc<XorTables>,
        image: Image,
    },
}

/// A configured sampler, shared read-only between pixels and threads.
#[derive(Debug, Clone)]
pub struct Sampler {
    kind: SamplerKind,
    dims: usize,
    inner: Arc<Inner>,
}

fn need<T>(v: Option<T>, kind: SamplerKind, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("sampler {kind} needs {what}")))
}

fn check_dims(dims: usize, available: usize) -> Result<()> {
    if dims > available {
        return Err(Error::Dimensions {
            requested: dims,
            available,
        });
    }
    Ok(())
}

impl Sampler {
    pub fn new(kind: SamplerKind, params: &SamplerParams) -> Result<Self> {
        let dims = params.dims;
        if dims == 0 {
            return Err(Error::Config("dims must be at least 1".into()));
        }
        let image = || -> Result<Image> {
            let (width, height) = need(params.image, kind, "an image size")?;
            if width == 0 || height == 0 {
                return Err(Error::Config("image must not be empty".into()));
            }
            Ok(Image {
                width,
                height,
                order: order_for(width, height),
            })
        };
        let inner = match kind {
            SamplerKind::Sobol => {
                let set = params
                    .matrices
                    .clone()
                    .unwrap_or_else(|| Arc::new(GeneratorMatrixSet::bundled().clone()));
                check_dims(dims, set.dims())?;
                if !params.scrambles.is_empty() && params.scrambles.len() < dims {
                    return Err(Error::Config(format!(
                        "{} scramble words for {dims} dimensions",
                        params.scrambles.len()
                    )));
                }
                let mut scrambles = params.scrambles.clone();
                scrambles.resize(dims, 0);
                Inner::Sobol { set, scrambles }
            }
            SamplerKind::Halton => Inner::Halton(Halton::new(dims, &params.halton_mode)?),
            SamplerKind::Lattice => {
                let g = need(params.generator.clone(), kind, "a generator vector")?;
                check_dims(dims, g.dims())?;
                Inner::Lattice(g)
            }
            SamplerKind::Random => Inner::Random { seed: params.seed },
            SamplerKind::HaltonHilbert => {
                let spp = need(params.spp, kind, "samples per pixel")?;
                if spp == 0 {
                    return Err(Error::Config("spp must be at least 1".into()));
                }
                let image = image()?;
                let last = (1u64 << (2 * image.order)) * spp as u64 - 1;
                if last > u32::MAX as u64 {
                    return Err(Error::Config(format!(
                        "{}x{} pixels at {spp} spp exceed 32-bit Halton indices",
                        image.width, image.height
                    )));
                }
                Inner::HaltonHilbert {
                    halton: Halton::new(dims, &params.halton_mode)?,
                    spp,
                    image,
                }
            }
            SamplerKind::PixelShiftedLattice => {
                let g = need(params.generator.clone(), kind, "a generator vector")?;
                check_dims(dims, g.dims())?;
                Inner::PixelShiftedLattice { g, image: image()? }
            }
            SamplerKind::PixelRandomLattice => Inner::PixelRandomLattice { image: image()? },
            SamplerKind::ImagePlaneHalton => {
                let image = image()?;
                Inner::ImagePlaneHalton {
                    halton: Halton::new(dims, &params.halton_mode)?,
                    grid: ImagePlaneHalton::new(image.width, image.height)?,
                    base3: Base::new(3)?,
                    image,
                }
            }
            SamplerKind::SobolXorTable => {
                let tables = need(params.xor_tables.clone(), kind, "XOR tables")?;
                check_dims(dims, tables.dims())?;
                let n = tables.len();
                if !n.is_power_of_two() || n > 1 << 32 {
                    return Err(Error::Config(format!(
                        "XOR point set size {n} is not a power of two"
                    )));
                }
                for y in 0..super::XOR_TILE as u32 {
                    for x in 0..super::XOR_TILE as u32 {
                        if tables.reorder_word(x, y) as usize >= n {
                            return Err(Error::Config(format!(
                                "reorder word at ({x}, {y}) not below point count {n}"
                            )));
                        }
                    }
                }
                Inner::SobolXorTable {
                    tables,
                    image: image()?,
                }
            }
        };
        Ok(Sampler {
            kind,
            dims,
            inner: Arc::new(inner),
        })
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Image size for pixel-dependent kinds.
    pub fn image(&self) -> Option<(u32, u32)> {
        match &*self.inner {
            Inner::HaltonHilbert { image, .. }
            | Inner::PixelShiftedLattice { image, .. }
            | Inner::PixelRandomLattice { image }
            | Inner::ImagePlaneHalton { image, .. }
            | Inner::SobolXorTable { image, .. } => Some((image.width, image.height)),
            _ => None,
        }
    }

    /// The stream for one pixel. Pixel-independent kinds accept `None`;
    /// `random` mixes the pixel into its hash when one is given.
    pub fn stream(&self, pixel: Option<(u32, u32)>) -> Result<SampleStream> {
        let at = |image: &Image| -> Result<PixelCoord> {
            let (x, y) = need(pixel, self.kind, "a pixel")?;
            if x >= image.width || y >= image.height {
                return Err(Error::Range(format!(
                    "pixel ({x}, {y}) outside {}x{}",
                    image.width, image.height
                )));
            }
            PixelCoord::new(x, y, image.order)
        };
        let full = 1u64 << 32;
        let (base, shift, len) = match &*self.inner {
            Inner::Sobol { .. } | Inner::Halton(_) | Inner::Lattice(_) => (0, 0, full),
            Inner::Random { .. } => {
                let key = pixel.map_or(0, |(x, y)| ((y as u64) << 32 | x as u64) + 1);
                (key, 0, full)
            }
            Inner::HaltonHilbert { spp, image, .. } => {
                let h = hilbert_index(at(image)?);
                (h * *spp as u64, 0, *spp as u64)
            }
            Inner::PixelShiftedLattice { image, .. } => {
                (0, pixel_shift_bits(hilbert_index(at(image)?)), full)
            }
            Inner::PixelRandomLattice { image } => {
                at(image)?;
                (0, 0, full)
            }
            Inner::ImagePlaneHalton { grid, image, .. } => {
                let p = at(image)?;
                let offset = grid.offset(p.x(), p.y())?;
                let len = if offset > u32::MAX as u64 {
                    0
                } else {
                    (u32::MAX as u64 - offset) / grid.stride() + 1
                };
                (offset, 0, len)
            }
            Inner::SobolXorTable { tables, image } => {
                at(image)?;
                (0, 0, tables.len() as u64)
            }
        };
        Ok(SampleStream {
            sampler: self.clone(),
            pixel: pixel.unwrap_or((0, 0)),
            base,
            shift,
            len,
        })
    }
}

/// Builds a sampler and returns its stream for `pixel`.
pub fn make_stream(
    kind: SamplerKind,
    params: &SamplerParams,
    pixel: Option<(u32, u32)>,
) -> Result<SampleStream> {
    Sampler::new(kind, params)?.stream(pixel)
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stateless uniform bits for the `random` sampler.
#[inline]
pub fn random_bits(seed: u64, pixel_key: u64, i: u32, j: usize) -> u32 {
    let ij = (i as u64) << 32 | j as u64;
    (splitmix64(seed ^ splitmix64(pixel_key ^ splitmix64(ij))) >> 32) as u32
}

/// Samples of one sampler at one pixel.
#[derive(Debug, Clone)]
pub struct SampleStream {
    sampler: Sampler,
    pixel: (u32, u32),
    // first global index, or the pixel key for `random`
    base: u64,
    shift: u32,
    len: u64,
}

impl SampleStream {
    pub fn kind(&self) -> SamplerKind {
        self.sampler.kind
    }

    pub fn dims(&self) -> usize {
        self.sampler.dims
    }

    /// Number of samples this pixel can draw.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn pixel(&self) -> (u32, u32) {
        self.pixel
    }

    /// Integer stage of component `j` of sample `i`.
    ///
    /// # Panics
    ///
    /// Panics if `i >= len()` or `j >= dims()`.
    #[inline]
    pub fn sample_bits(&self, i: u32, j: usize) -> u32 {
        assert!((i as u64) < self.len && j < self.sampler.dims, "sample ({i}, {j}) out of range");
        let (x, y) = self.pixel;
        match &*self.sampler.inner {
            Inner::Sobol { set, scrambles } => {
                set.component_bits(SobolIndex::from(i), j, scrambles[j])
            }
            Inner::Halton(h) => h.component_bits(i, j),
            Inner::Lattice(g) => lattice_component_bits(i, g.get(j)),
            Inner::Random { seed } => random_bits(*seed, self.base, i, j),
            Inner::HaltonHilbert { halton, .. } => halton.component_bits((self.base + i as u64) as u32, j),
            Inner::PixelShiftedLattice { g, .. } => pixel_shifted_lattice_bits(i, self.shift, g.get(j)),
            Inner::PixelRandomLattice { .. } => {
                random_lattice_bits(i, pixel_hash(j as u32, x, y) | 1)
            }
            Inner::ImagePlaneHalton {
                halton, grid, base3, ..
            } => {
                let global = (self.base + i as u64 * grid.stride()) as u32;
                match j {
                    0 => grid.in_pixel_bits(global, *base3).0,
                    1 => grid.in_pixel_bits(global, *base3).1,
                    _ => halton.component_bits(global, j),
                }
            }
            Inner::SobolXorTable { tables, .. } => tables
                .sample_bits(i, x, y, j)
                .expect("reorder words validated at construction"),
        }
    }

    /// Integer stage of the first `out.len()` components of sample `i`.
    ///
    /// # Panics
    ///
    /// As [`sample_bits`](Self::sample_bits).
    #[inline]
    pub fn point_bits(&self, i: u32, out: &mut [u32]) {
        assert!((i as u64) < self.len && out.len() <= self.sampler.dims, "sample {i} out of range");
        match &*self.sampler.inner {
            Inner::Lattice(g) => {
                for (o, &gj) in out.iter_mut().zip(g.components()) {
                    *o = lattice_component_bits(i, gj);
                }
            }
            Inner::PixelShiftedLattice { g, .. } => {
                for (o, &gj) in out.iter_mut().zip(g.components()) {
                    *o = pixel_shifted_lattice_bits(i, self.shift, gj);
                }
            }
            _ => {
                for (j, o) in out.iter_mut().enumerate() {
                    *o = self.sample_bits(i, j);
                }
            }
        }
    }

    #[inline]
    pub fn sample(&self, i: u32, j: usize) -> UnitValue {
        map_u32_to_unifloat(self.sample_bits(i, j))
    }

    /// Checked variant of [`sample`](Self::sample).
    pub fn try_sample(&self, i: u32, j: usize) -> Result<UnitValue> {
        if i as u64 >= self.len {
            return Err(Error::Range(format!(
                "sample {i} not below {} for this pixel",
                self.len
            )));
        }
        if j >= self.dims() {
            return Err(Error::Dimensions {
                requested: j + 1,
                available: self.dims(),
            });
        }
        Ok(self.sample(i, j))
    }

    pub fn point(&self, i: u32) -> Vec<UnitValue> {
        (0..self.dims()).map(|j| self.sample(i, j)).collect()
    }

    /// Global index of local sample `i` for the index-enumerating kinds
    /// (`halton_hilbert`, `image_plane_halton`).
    pub fn global_index(&self, i: u32) -> Option<u64> {
        match &*self.sampler.inner {
            Inner::HaltonHilbert { .. } => Some(self.base + i as u64),
            Inner::ImagePlaneHalton { grid, .. } => Some(self.base + i as u64 * grid.stride()),
            _ => None,
        }
    }
}

impl PointSource for SampleStream {
    fn dims(&self) -> usize {
        SampleStream::dims(self)
    }

    fn len(&self) -> u64 {
        self.len
    }

    fn component_bits(&self, i: u32, j: usize) -> u32 {
        self.sample_bits(i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imageplane::{
        halton_along_hilbert_sample, pixel_shifted_lattice_component, xor_table_sample,
    };
    use crate::lattice::{lattice_component, random_lattice_component};
    use crate::radical::{radical_inverse, ScrambleFactor};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const W: u32 = 13;
    const H: u32 = 7;

    fn gv() -> GeneratorVector {
        GeneratorVector::new(vec![1, 0x4f1b_bcdd, 0x2e3c_0a57, 0x7a2b_1c6f]).unwrap()
    }

    fn params(kind: SamplerKind) -> SamplerParams {
        let mut p = SamplerParams::new(4)
            .with_generator(gv())
            .with_image(W, H)
            .with_spp(16)
            .with_seed(99);
        if kind == SamplerKind::SobolXorTable {
            let pts = XorTables::sobol_points(256, 4).unwrap();
            p = p.with_xor_tables(Arc::new(XorTables::white_noise(1, 4, pts).unwrap()));
        }
        p
    }

    #[test]
    fn kind_names_round_trip() {
        for k in SamplerKind::ALL {
            assert_eq!(k.name().parse::<SamplerKind>().unwrap(), k);
        }
        assert_eq!("Pixel-Shifted-Lattice".parse::<SamplerKind>().unwrap(), SamplerKind::PixelShiftedLattice);
        assert!(matches!("owen".parse::<SamplerKind>(), Err(Error::Config(_))));
    }

    #[test]
    fn streams_reproduce_defining_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let halton = Halton::new(4, &HaltonMode::Plain).unwrap();
        let set = GeneratorMatrixSet::bundled();
        for kind in SamplerKind::ALL {
            let p = params(kind);
            let sampler = Sampler::new(kind, &p).unwrap();
            for _ in 0..1000 {
                let (x, y) = (rng.gen_range(0..W), rng.gen_range(0..H));
                let s = sampler.stream(Some((x, y))).unwrap();
                let i = rng.gen_range(0..s.len().min(1 << 32)) as u32;
                let j = rng.gen_range(0..4usize);
                let order = order_for(W, H);
                let pc = PixelCoord::new(x, y, order).unwrap();
                let want = match kind {
                    SamplerKind::Sobol => set.component(SobolIndex::from(i), j, 0).unwrap(),
                    SamplerKind::Halton => halton.component(i, j),
                    SamplerKind::Lattice => lattice_component(i, gv().get(j)),
                    SamplerKind::Random => {
                        map_u32_to_unifloat(random_bits(99, ((y as u64) << 32 | x as u64) + 1, i, j))
                    }
                    SamplerKind::HaltonHilbert => halton_along_hilbert_sample(i, pc, 16, 4).unwrap()[j],
                    SamplerKind::PixelShiftedLattice => {
                        pixel_shifted_lattice_component(i, j, pc, &gv()).unwrap()
                    }
                    SamplerKind::PixelRandomLattice => random_lattice_component(i, j as u32, x, y),
                    SamplerKind::ImagePlaneHalton => {
                        let grid = ImagePlaneHalton::new(W, H).unwrap();
                        let g = grid.index(x, y, i as u64).unwrap() as u32;
                        let (a, b) = grid.scale_exponents();
                        match j {
                            0 => {
                                let u = radical_inverse(g, 0).unwrap().to_f64() * (1u64 << a) as f64;
                                assert_eq!(u.floor() as u32, x);
                                map_u32_to_unifloat(s.sample_bits(i, 0))
                            }
                            1 => {
                                let v = radical_inverse(g, 1).unwrap().to_f64() * 3f64.powi(b as i32);
                                assert_eq!(v.floor() as u32, y);
                                map_u32_to_unifloat(s.sample_bits(i, 1))
                            }
                            _ => halton.component(g, j),
                        }
                    }
                    SamplerKind::SobolXorTable => {
                        xor_table_sample(i, pc, p.xor_tables.as_ref().unwrap(), j).unwrap()
                    }
                };
                assert_eq!(s.sample(i, j), want, "{kind} i={i} j={j} at ({x},{y})");
                assert_eq!(s.sample(i, j), s.clone().sample(i, j));
            }
        }
    }

    #[test]
    fn point_bits_matches_components() {
        for kind in SamplerKind::ALL {
            let s = make_stream(kind, &params(kind), Some((5, 3))).unwrap();
            let mut out = [0u32; 4];
            for i in [0u32, 1, 7, 15, 200].into_iter().filter(|&i| (i as u64) < s.len()) {
                s.point_bits(i, &mut out);
                for (j, &o) in out.iter().enumerate() {
                    assert_eq!(o, s.sample_bits(i, j), "{kind}");
                }
            }
        }
    }

    #[test]
    fn image_plane_in_pixel_positions_reassemble_the_point() {
        let s = make_stream(SamplerKind::ImagePlaneHalton, &params(SamplerKind::ImagePlaneHalton), Some((9, 4)))
            .unwrap();
        let grid = ImagePlaneHalton::new(W, H).unwrap();
        let (a, b) = grid.scale_exponents();
        for i in 0..50 {
            let g = s.global_index(i).unwrap() as u32;
            let u = (9.0 + s.sample(i, 0).to_f64()) / (1u64 << a) as f64;
            let v = (4.0 + s.sample(i, 1).to_f64()) / 3f64.powi(b as i32);
            assert!((u - radical_inverse(g, 0).unwrap().to_f64()).abs() < 1e-6);
            assert!((v - radical_inverse(g, 1).unwrap().to_f64()).abs() < 1e-6);
        }
    }

    #[test]
    fn pixel_dependent_streams_differ_between_pixels() {
        for kind in SamplerKind::ALL.into_iter().filter(|k| k.needs_pixel()) {
            let sampler = Sampler::new(kind, &params(kind)).unwrap();
            let a = sampler.stream(Some((3, 2))).unwrap();
            let b = sampler.stream(Some((4, 2))).unwrap();
            let differs = (0..16).any(|i| (0..4).any(|j| a.sample_bits(i, j) != b.sample_bits(i, j)));
            assert!(differs, "{kind}");
        }
    }

    #[test]
    fn configuration_errors() {
        let bare = SamplerParams::new(2);
        for kind in SamplerKind::ALL.into_iter().filter(|k| k.needs_pixel()) {
            assert!(matches!(Sampler::new(kind, &bare), Err(Error::Config(_))), "{kind}");
        }
        assert!(Sampler::new(SamplerKind::Lattice, &bare).is_err());
        assert!(Sampler::new(SamplerKind::Sobol, &SamplerParams::new(0)).is_err());
        assert!(Sampler::new(SamplerKind::Sobol, &SamplerParams::new(65)).is_err());
        assert!(Sampler::new(SamplerKind::Lattice, &SamplerParams::new(5).with_generator(gv())).is_err());
        let s = Sampler::new(SamplerKind::PixelShiftedLattice, &params(SamplerKind::PixelShiftedLattice)).unwrap();
        assert!(s.stream(None).is_err());
        assert!(s.stream(Some((W, 0))).is_err());
        let hh = make_stream(SamplerKind::HaltonHilbert, &params(SamplerKind::HaltonHilbert), Some((0, 0))).unwrap();
        assert_eq!(hh.len(), 16);
        assert!(hh.try_sample(16, 0).is_err());
        assert!(hh.try_sample(0, 4).is_err());
        let pts = XorTables::sobol_points(24, 1).unwrap();
        let odd = XorTables::identity(1, pts).unwrap();
        let p = SamplerParams::new(1).with_image(2, 2).with_xor_tables(Arc::new(odd));
        assert!(Sampler::new(SamplerKind::SobolXorTable, &p).is_err());
    }

    #[test]
    fn linear_halton_mode_is_used() {
        let factors = vec![ScrambleFactor::new(3, 2).unwrap()];
        let p = SamplerParams::new(2).with_halton_mode(HaltonMode::Linear(factors.clone()));
        let s = make_stream(SamplerKind::Halton, &p, None).unwrap();
        let h = Halton::new(2, &HaltonMode::Linear(factors)).unwrap();
        for i in 0..200 {
            assert_eq!(s.sample_bits(i, 1), h.component_bits(i, 1));
        }
    }

    #[test]
    fn random_streams_depend_on_seed_and_pixel() {
        let a = make_stream(SamplerKind::Random, &SamplerParams::new(2).with_seed(1), None).unwrap();
        let b = make_stream(SamplerKind::Random, &SamplerParams::new(2).with_seed(2), None).unwrap();
        let c = make_stream(SamplerKind::Random, &SamplerParams::new(2).with_seed(1), Some((0, 0))).unwrap();
        assert_ne!(a.sample_bits(0, 0), b.sample_bits(0, 0));
        assert_ne!(a.sample_bits(0, 0), c.sample_bits(0, 0));
        let mean = (0..10_000).map(|i| a.sample(i, 1).to_f64()).sum::<f64>() / 1e4;
        assert!((mean - 0.5).abs() < 0.02);
    }
}
