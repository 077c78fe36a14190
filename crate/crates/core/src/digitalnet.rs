//! Base-2 digital sequences: Sobol' points from Joe–Kuo direction numbers.
//!
//! Each dimension stores 52 generator-matrix columns as 32-bit words whose
//! most significant bit is the first output digit. A component is the XOR of
//! the columns selected by the set bits of the index; the low 32 index bits
//! and the next 20 are handled in two passes, four columns per fetch.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::unitfloat::{map_u32_to_unifloat, UnitValue};

/// Columns per dimension, and the index width they cover.
pub const COLUMNS: usize = 52;

const GROUPS: usize = COLUMNS / 4;

/// Direction numbers for the first 64 dimensions, Joe–Kuo file layout.
pub const BUNDLED_DIRECTION_NUMBERS: &str = include_str!("../data/new-joe-kuo-6.64");

/// One line of a direction-number file: the primitive polynomial of degree
/// `degree` with inner coefficients `coeffs`, and the initial `m` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionNumbers {
    pub degree: u32,
    pub coeffs: u32,
    pub m: Vec<u32>,
}

/// Parsed direction numbers. Index 0 is the implicit van der Corput
/// dimension and carries no polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionNumberSet {
    dims: Vec<Option<DirectionNumbers>>,
}

impl DirectionNumberSet {
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, dim: usize) -> Option<&DirectionNumbers> {
        self.dims.get(dim).and_then(Option::as_ref)
    }

    pub fn bundled() -> &'static DirectionNumberSet {
        static SET: OnceLock<DirectionNumberSet> = OnceLock::new();
        SET.get_or_init(|| {
            parse_direction_numbers(BUNDLED_DIRECTION_NUMBERS).expect("bundled file parses")
        })
    }
}

/// Parses the "d s a m_1 .. m_s" layout. The first line is skipped when it
/// is a header; dimension numbers must count up from 2.
pub fn parse_direction_numbers(text: &str) -> Result<DirectionNumberSet> {
    let mut dims = vec![None];
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: std::result::Result<Vec<u64>, _> =
            trimmed.split_whitespace().map(str::parse::<u64>).collect();
        let fields = match fields {
            Ok(f) => f,
            Err(_) if n == 0 => continue, // header
            Err(e) => return Err(err(format!("not an integer field: {e}"))),
        };
        if fields.len() < 3 {
            return Err(err("expected d s a m_1 .. m_s".into()));
        }
        let (d, s, a) = (fields[0], fields[1], fields[2]);
        if d != dims.len() as u64 + 1 {
            return Err(err(format!("expected dimension {}, found {d}", dims.len() + 1)));
        }
        if s == 0 || s > 31 {
            return Err(err(format!("degree {s} out of range")));
        }
        if a >= 1 << (s - 1) {
            return Err(err(format!("coefficients {a} do not fit degree {s}")));
        }
        let m = &fields[3..];
        if m.len() as u64 != s {
            return Err(err(format!("expected {s} direction numbers, found {}", m.len())));
        }
        for (k, &mk) in m.iter().enumerate() {
            if mk % 2 == 0 {
                return Err(err(format!("direction number m_{} = {mk} is even", k + 1)));
            }
            if mk >= 1 << (k + 1) {
                return Err(err(format!("direction number m_{} = {mk} is not below 2^{}", k + 1, k + 1)));
            }
        }
        dims.push(Some(DirectionNumbers {
            degree: s as u32,
            coeffs: a as u32,
            m: m.iter().map(|&v| v as u32).collect(),
        }));
    }
    Ok(DirectionNumberSet { dims })
}

/// The integers `m_1 .. m_52` of one dimension, extended by the
/// primitive-polynomial recurrence.
fn extend_direction_numbers(dn: &DirectionNumbers) -> [u64; COLUMNS] {
    let s = dn.degree as usize;
    let mut m = [0u64; COLUMNS];
    for (k, &v) in dn.m.iter().enumerate().take(COLUMNS) {
        m[k] = v as u64;
    }
    for k in s..COLUMNS {
        let mut v = m[k - s] ^ (m[k - s] << s);
        for t in 1..s {
            if (dn.coeffs >> (s - 1 - t)) & 1 == 1 {
                v ^= m[k - t] << t;
            }
        }
        m[k] = v;
    }
    m
}

/// Generator matrices, four columns per packed group.
#[derive(Debug, Clone)]
pub struct GeneratorMatrixSet {
    dims: Vec<[[u32; 4]; GROUPS]>,
}

/// Builds the first `dims` generator matrices.
pub fn build_matrices(dns: &DirectionNumberSet, dims: usize) -> Result<GeneratorMatrixSet> {
    if dims > dns.len() {
        return Err(Error::Dimensions {
            requested: dims,
            available: dns.len(),
        });
    }
    let dims = (0..dims)
        .map(|j| {
            let m = match dns.get(j) {
                Some(dn) => extend_direction_numbers(dn),
                None => [1u64; COLUMNS],
            };
            let mut groups = [[0u32; 4]; GROUPS];
            for (k, &mk) in m.iter().enumerate() {
                // column k holds m_{k+1} / 2^{k+1} in 32-bit fixed point
                let shift = k as i32 + 1 - 32;
                let word = if shift <= 0 {
                    mk << (-shift)
                } else {
                    mk >> shift
                };
                groups[k / 4][k % 4] = word as u32;
            }
            groups
        })
        .collect();
    Ok(GeneratorMatrixSet { dims })
}

/// An index below `2^52`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SobolIndex(u64);

impl SobolIndex {
    pub const LIMIT: u64 = 1 << COLUMNS;

    pub fn new(i: u64) -> Result<Self> {
        if i >= Self::LIMIT {
            return Err(Error::SobolIndex(i));
        }
        Ok(SobolIndex(i))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl From<u32> for SobolIndex {
    fn from(i: u32) -> Self {
        SobolIndex(i as u64)
    }
}

impl TryFrom<u64> for SobolIndex {
    type Error = Error;

    fn try_from(i: u64) -> Result<Self> {
        SobolIndex::new(i)
    }
}

#[inline]
fn mask(bit: u32) -> u32 {
    0u32.wrapping_sub(bit & 1)
}

impl GeneratorMatrixSet {
    /// Matrices for the bundled 64 dimensions.
    pub fn bundled() -> &'static GeneratorMatrixSet {
        static SET: OnceLock<GeneratorMatrixSet> = OnceLock::new();
        SET.get_or_init(|| {
            let dns = DirectionNumberSet::bundled();
            build_matrices(dns, dns.len()).expect("bundled matrices")
        })
    }

    pub fn dims(&self) -> usize {
        self.dims.len()
    }

    /// Column `k` of dimension `j`.
    pub fn column(&self, j: usize, k: usize) -> u32 {
        self.dims[j][k / 4][k % 4]
    }

    /// Integer stage of a component, processing four columns per step.
    ///
    /// # Panics
    ///
    /// Panics if `j` is not below [`dims`](Self::dims).
    #[inline]
    pub fn component_bits(&self, i: SobolIndex, j: usize, scramble: u32) -> u32 {
        let table = &self.dims[j];
        let mut result = scramble;
        let mut lo = i.0 as u32;
        let mut c = 0;
        while lo != 0 {
            let cols = &table[c];
            result ^= (cols[0] & mask(lo))
                ^ (cols[1] & mask(lo >> 1))
                ^ (cols[2] & mask(lo >> 2))
                ^ (cols[3] & mask(lo >> 3));
            lo >>= 4;
            c += 1;
        }
        let mut hi = (i.0 >> 32) as u32 & 0xF_FFFF;
        let mut c = 8;
        while hi != 0 {
            let cols = &table[c];
            result ^= (cols[0] & mask(hi))
                ^ (cols[1] & mask(hi >> 1))
                ^ (cols[2] & mask(hi >> 2))
                ^ (cols[3] & mask(hi >> 3));
            hi >>= 4;
            c += 1;
        }
        result
    }

    /// Same value as [`component_bits`](Self::component_bits), one column
    /// per set index bit.
    pub fn component_bits_columnwise(&self, i: SobolIndex, j: usize, scramble: u32) -> u32 {
        let mut result = scramble;
        let mut bits = i.0;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            result ^= self.column(j, k);
            bits &= bits - 1;
        }
        result
    }

    fn check_dim(&self, j: usize) -> Result<()> {
        if j >= self.dims() {
            return Err(Error::Dimensions {
                requested: j + 1,
                available: self.dims(),
            });
        }
        Ok(())
    }

    pub fn component(&self, i: SobolIndex, j: usize, scramble: u32) -> Result<UnitValue> {
        self.check_dim(j)?;
        Ok(map_u32_to_unifloat(self.component_bits(i, j, scramble)))
    }

    /// Point `i` with one XOR scramble word per dimension; `scrambles` may be
    /// empty for the unscrambled sequence.
    pub fn point(&self, i: SobolIndex, dims: usize, scrambles: &[u32]) -> Result<Vec<UnitValue>> {
        if dims > 0 {
            self.check_dim(dims - 1)?;
        }
        if !scrambles.is_empty() && scrambles.len() < dims {
            return Err(Error::Config(format!(
                "{} scramble words for {dims} dimensions",
                scrambles.len()
            )));
        }
        Ok((0..dims)
            .map(|j| {
                let s = scrambles.get(j).copied().unwrap_or(0);
                map_u32_to_unifloat(self.component_bits(i, j, s))
            })
            .collect())
    }
}

/// Component `j` of Sobol' point `i` with an XOR scramble word.
pub fn sobol_component(
    set: &GeneratorMatrixSet,
    i: u64,
    j: usize,
    scramble: u32,
) -> Result<UnitValue> {
    set.component(SobolIndex::new(i)?, j, scramble)
}

/// Sobol' point `i`; see [`GeneratorMatrixSet::point`].
pub fn sobol_point(
    set: &GeneratorMatrixSet,
    i: u64,
    dims: usize,
    scrambles: &[u32],
) -> Result<Vec<UnitValue>> {
    set.point(SobolIndex::new(i)?, dims, scrambles)
}
