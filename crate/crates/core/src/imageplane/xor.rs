//! Per-pixel reordering and scrambling of a stored point set by XOR tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PixelCoord;
use crate::digitalnet::{GeneratorMatrixSet, SobolIndex};
use crate::error::{Error, Result};
use crate::unitfloat::{map_u32_to_unifloat, UnitValue};

/// Tables tile the image with this period in x and y.
pub const XOR_TILE: usize = 128;
pub const XOR_TABLE_MAGIC: &[u8; 4] = b"XQT1";

const CELLS: usize = XOR_TILE * XOR_TILE;

/// Reorder and scramble tables plus the point set they act on.
///
/// The point set holds `n` points of `dims` 32-bit fixed-point components,
/// point-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorTables {
    dims: usize,
    n: usize,
    points: Vec<u32>,
    reorder: Vec<u32>,
    scramble: Vec<u32>,
}

impl XorTables {
    pub fn new(dims: usize, points: Vec<u32>, reorder: Vec<u32>, scramble: Vec<u32>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::Config("XOR tables need at least one dimension".into()));
        }
        if reorder.len() != CELLS || scramble.len() != CELLS * dims {
            return Err(Error::Config(format!(
                "tables must hold {CELLS} reorder and {} scramble words",
                CELLS * dims
            )));
        }
        if points.is_empty() || points.len() % dims != 0 {
            return Err(Error::Config(format!(
                "point set of {} words is not a whole number of {dims}-dimensional points",
                points.len()
            )));
        }
        Ok(XorTables {
            dims,
            n: points.len() / dims,
            points,
            reorder,
            scramble,
        })
    }

    /// Tables with zero reorder and scramble words.
    pub fn identity(dims: usize, points: Vec<u32>) -> Result<Self> {
        Self::new(dims, points, vec![0; CELLS], vec![0; CELLS * dims])
    }

    /// White-noise tables for exercising the mechanics. Reorder words are
    /// drawn below the largest power of two not exceeding the point count,
    /// so `i ^ r` stays in range for every `i` below that power.
    pub fn white_noise(seed: u64, dims: usize, points: Vec<u32>) -> Result<Self> {
        let n = if dims == 0 { 0 } else { points.len() / dims };
        if n == 0 {
            return Err(Error::Config("empty point set".into()));
        }
        let span = 1u64 << (63 - (n as u64).leading_zeros());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reorder = (0..CELLS).map(|_| rng.gen_range(0..span) as u32).collect();
        let scramble = (0..CELLS * dims).map(|_| rng.gen()).collect();
        Self::new(dims, points, reorder, scramble)
    }

    /// The first `n` Sobol' points of the bundled matrices.
    pub fn sobol_points(n: usize, dims: usize) -> Result<Vec<u32>> {
        let set = GeneratorMatrixSet::bundled();
        if dims > set.dims() {
            return Err(Error::Dimensions {
                requested: dims,
                available: set.dims(),
            });
        }
        let mut out = Vec::with_capacity(n * dims);
        for i in 0..n as u64 {
            let i = SobolIndex::new(i)?;
            out.extend((0..dims).map(|j| set.component_bits(i, j, 0)));
        }
        Ok(out)
    }

    /// Reads the binary table file; the dimension count follows from the
    /// file length.
    pub fn from_bytes(bytes: &[u8], points: Vec<u32>) -> Result<Self> {
        let body = bytes
            .strip_prefix(XOR_TABLE_MAGIC.as_slice())
            .ok_or_else(|| Error::Config("missing XQT1 magic".into()))?;
        if body.len() % 4 != 0 {
            return Err(Error::Config("table file length is not a multiple of 4".into()));
        }
        let words: Vec<u32> = body
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        if words.len() < 2 * CELLS || words.len() % CELLS != 0 {
            return Err(Error::Config(format!(
                "table file holds {} words, expected a multiple of {CELLS}",
                words.len()
            )));
        }
        let dims = words.len() / CELLS - 1;
        let (reorder, scramble) = words.split_at(CELLS);
        Self::new(dims, points, reorder.to_vec(), scramble.to_vec())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 4 * (self.reorder.len() + self.scramble.len()));
        out.extend_from_slice(XOR_TABLE_MAGIC);
        for w in self.reorder.iter().chain(&self.scramble) {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Number of stored points.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn cell(x: u32, y: u32) -> usize {
        (y as usize % XOR_TILE) * XOR_TILE + x as usize % XOR_TILE
    }

    pub fn reorder_word(&self, x: u32, y: u32) -> u32 {
        self.reorder[Self::cell(x, y)]
    }

    pub fn scramble_word(&self, x: u32, y: u32, j: usize) -> u32 {
        self.scramble[Self::cell(x, y) * self.dims + j]
    }

    /// Integer stage: `P[i ^ r(x,y)][j] ^ s(x,y)[j]`.
    pub fn sample_bits(&self, i: u32, x: u32, y: u32, j: usize) -> Result<u32> {
        if j >= self.dims {
            return Err(Error::Dimensions {
                requested: j + 1,
                available: self.dims,
            });
        }
        let k = (i ^ self.reorder_word(x, y)) as usize;
        if k >= self.n {
            return Err(Error::Range(format!(
                "reordered index {k} beyond the {} stored points",
                self.n
            )));
        }
        Ok(self.points[k * self.dims + j] ^ self.scramble_word(x, y, j))
    }
}

/// Component `j` of sample `i` at pixel `p`; pixel coordinates wrap modulo
/// [`XOR_TILE`].
pub fn xor_table_sample(i: u32, p: PixelCoord, t: &XorTables, j: usize) -> Result<UnitValue> {
    Ok(map_u32_to_unifloat(t.sample_bits(i, p.x(), p.y(), j)?))
}
