//! Rank-1 lattice sequences in base 2.
//!
//! Point `i` is `φ₂(i) · g mod 1`. In 32-bit fixed point `φ₂(i)` is the bit
//! reversal of `i`, and the wrapping product with `g_j` drops exactly the
//! integer part, so a component costs a reversal, a multiply and the float
//! conversion.

use crate::error::{Error, Result};
use crate::unitfloat::{bit_reverse32, map_u32_to_unifloat, UnitValue};

/// Odd generator-vector components, the low 32 binary digits of each `g_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorVector(Vec<u32>);

impl GeneratorVector {
    pub fn new(components: Vec<u32>) -> Result<Self> {
        if let Some((index, &value)) = components.iter().enumerate().find(|(_, &g)| g % 2 == 0) {
            return Err(Error::EvenComponent { index, value });
        }
        Ok(GeneratorVector(components))
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// Point `i` of the lattice sequence.
    pub fn point(&self, i: u32) -> Vec<UnitValue> {
        self.0.iter().map(|&g| lattice_component(i, g)).collect()
    }
}

/// Parses one decimal component per line; blank lines and `#` comments are
/// ignored. Even components are rejected.
pub fn parse_generator_vector(text: &str) -> Result<GeneratorVector> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let g: u32 = line.parse().map_err(|e| Error::Parse {
            line: n + 1,
            message: format!("{line:?}: {e}"),
        })?;
        if g % 2 == 0 {
            return Err(Error::Parse {
                line: n + 1,
                message: format!("component {g} is even"),
            });
        }
        out.push(g);
    }
    GeneratorVector::new(out)
}

#[inline]
pub fn lattice_component_bits(i: u32, g: u32) -> u32 {
    bit_reverse32(i).wrapping_mul(g)
}

#[inline]
pub fn lattice_component(i: u32, g: u32) -> UnitValue {
    map_u32_to_unifloat(lattice_component_bits(i, g))
}

pub fn lattice_point(i: u32, g: &GeneratorVector) -> Vec<UnitValue> {
    g.point(i)
}

/// 32-bit avalanche finalizer (Wellons' "lowbias32").
#[inline]
pub fn mix32(mut x: u32) -> u32 {
    x ^= x >> 16;
    x = x.wrapping_mul(0x7feb_352d);
    x ^= x >> 15;
    x = x.wrapping_mul(0x846c_a68b);
    x ^= x >> 16;
    x
}

/// Hash of dimension and pixel position: the pixel row, column and the
/// dimension are folded in one at a time through [`mix32`], starting from
/// the golden-ratio constant so that `(0, 0, 0)` does not hash to zero.
#[inline]
pub fn pixel_hash(j: u32, px: u32, py: u32) -> u32 {
    let h = mix32(py ^ 0x9e37_79b9);
    let h = mix32(h ^ px);
    mix32(h ^ j)
}

/// Integer stage of the per-pixel random lattice; enumerates backwards so
/// the origin is the last point instead of the first.
#[inline]
pub fn random_lattice_bits(i: u32, g: u32) -> u32 {
    bit_reverse32(u32::MAX - i).wrapping_mul(g)
}

/// Component `j` of point `i` of the lattice whose generator component is
/// hashed from `(j, px, py)`.
#[inline]
pub fn random_lattice_component(i: u32, j: u32, px: u32, py: u32) -> UnitValue {
    map_u32_to_unifloat(random_lattice_bits(i, pixel_hash(j, px, py) | 1))
}

/// Galois LFSR over the primitive trinomial x^31 + x^28 + 1.
#[derive(Debug, Clone)]
pub struct Lfsr31 {
    state: u32,
}

impl Lfsr31 {
    pub const TAPS: u32 = 0x4800_0000;
    pub const MASK: u32 = 0x7FFF_FFFF;

    pub fn new(seed: u32) -> Result<Self> {
        let state = seed & Self::MASK;
        if state == 0 {
            return Err(Error::ZeroSeed);
        }
        Ok(Lfsr31 { state })
    }

    #[inline]
    pub fn step(&mut self) -> u32 {
        let lsb = self.state & 1;
        self.state >>= 1;
        if lsb == 1 {
            self.state ^= Self::TAPS;
        }
        self.state
    }

    /// Clocks the register 31 times, giving a fresh 31-bit word.
    pub fn next_word(&mut self) -> u32 {
        for _ in 0..31 {
            self.step();
        }
        self.state
    }

    pub fn state(&self) -> u32 {
        self.state
    }
}

/// Generator vector with `g_0 = 1` and `g_j = 2ξ_j + 1` from successive
/// 31-bit LFSR words. Words never repeat within the register period, so the
/// components are distinct.
pub fn lfsr_generator_vector(seed: u32, dims: usize) -> Result<GeneratorVector> {
    if dims == 0 {
        return Err(Error::Config("generator vector needs at least one dimension".into()));
    }
    let mut lfsr = Lfsr31::new(seed)?;
    let mut g = Vec::with_capacity(dims);
    g.push(1);
    g.extend((1..dims).map(|_| 2 * lfsr.next_word() + 1));
    GeneratorVector::new(g)
}

/// Admissibility findings for `2^m` points.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AdmissibilityLevel {
    pub m: u32,
    /// No two components are equal, and `g_j mod 2^m` are pairwise distinct
    /// for `j < 2^(m-1)`.
    pub unique_mod_ok: bool,
    /// Duplicate pairs among the first `2^(m-1)` components.
    pub duplicates_half: Vec<(usize, usize)>,
    /// Duplicate pair count among the first `2^m` components.
    pub duplicates_full: usize,
    /// Pairs with `g_j ≡ 2^m − g_k (mod 2^m)` among the first `2^(m-1)`.
    pub symmetry_collisions: Vec<(usize, usize)>,
    /// Components with `g_j mod 2^m < 2^m / 64`.
    pub small_component_warnings: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AdmissibilityReport {
    pub levels: Vec<AdmissibilityLevel>,
}

impl AdmissibilityReport {
    pub fn unique(&self) -> bool {
        self.levels.iter().all(|l| l.unique_mod_ok)
    }
}

fn pairs_where(values: &[u64], pred: impl Fn(u64, u64) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (a, &va) in values.iter().enumerate() {
        for (b, &vb) in values.iter().enumerate().skip(a + 1) {
            if pred(va, vb) {
                out.push((a, b));
            }
        }
    }
    out
}

fn duplicate_count(values: &[u64]) -> usize {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    // pairs, not just surplus entries
    let mut count = 0;
    let mut run = 1usize;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            count += run * (run - 1) / 2;
            run = 1;
        }
    }
    count + run * (run - 1) / 2
}

/// Checks the generator vector for `2^m` points, `m = 1 ..= m_max`.
pub fn check_admissible(g: &GeneratorVector, m_max: u32) -> Result<AdmissibilityReport> {
    if m_max > 32 {
        return Err(Error::Range(format!("m_max {m_max} exceeds 32")));
    }
    let identical = duplicate_count(&g.components().iter().map(|&c| c as u64).collect::<Vec<_>>());
    let levels = (1..=m_max)
        .map(|m| {
            let modulus = 1u64 << m;
            let residues: Vec<u64> = g.components().iter().map(|&c| c as u64 % modulus).collect();
            let half = residues.len().min(1usize << (m - 1).min(40));
            let full = residues.len().min(1usize << m.min(40));
            let duplicates_half = pairs_where(&residues[..half], |a, b| a == b);
            let symmetry_collisions =
                pairs_where(&residues[..half], |a, b| (a + b) % modulus == 0);
            let threshold = modulus as f64 / 64.0;
            let small_component_warnings = residues
                .iter()
                .enumerate()
                .filter(|(_, &r)| (r as f64) < threshold)
                .map(|(j, _)| j)
                .collect();
            AdmissibilityLevel {
                m,
                unique_mod_ok: identical == 0 && duplicates_half.is_empty(),
                duplicates_half,
                duplicates_full: duplicate_count(&residues[..full]),
                symmetry_collisions,
                small_component_warnings,
            }
        })
        .collect();
    Ok(AdmissibilityReport { levels })
}

/// Shift between consecutive blocks of `2^m` lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeShift {
    bits: Vec<u32>,
}

impl LatticeShift {
    /// Per-dimension shift in 32-bit fixed point.
    pub fn bits(&self) -> &[u32] {
        &self.bits
    }

    pub fn values(&self) -> Vec<UnitValue> {
        self.bits.iter().map(|&b| map_u32_to_unifloat(b)).collect()
    }
}

/// `Δ_k = φ₂(k·2^m) · g mod 1`, so that point `i + k·2^m` equals point `i`
/// shifted by `Δ_k` for every `i < 2^m`.
pub fn lattice_shift(k: u32, m: u32, g: &GeneratorVector) -> Result<LatticeShift> {
    let offset = if m >= 32 {
        if k != 0 {
            return Err(Error::Range(format!("k·2^{m} overflows 32 bits")));
        }
        0
    } else {
        (k as u64)
            .checked_shl(m)
            .filter(|&v| v <= u32::MAX as u64)
            .ok_or_else(|| Error::Range(format!("{k}·2^{m} overflows 32 bits")))? as u32
    };
    let base = bit_reverse32(offset);
    Ok(LatticeShift {
        bits: g.components().iter().map(|&c| base.wrapping_mul(c)).collect(),
    })
}
