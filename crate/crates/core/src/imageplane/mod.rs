//! Image-plane sampler constructions.
//!
//! * the pixel-shifted rank-1 lattice: one lattice sequence shared by all
//!   pixels, with `φ₃` of the pixel's Hilbert index added to `φ₂(i)` before
//!   the generator multiplication;
//! * Halton points enumerated along the Hilbert curve, one contiguous block
//!   of indices per pixel;
//! * image-plane Halton, where the first two dimensions select the pixel and
//!   each pixel enumerates its own subsequence;
//! * partitioning of a radical-inverse sequence by an extra dimension;
//! * per-pixel XOR reordering and scrambling of a stored point set.

mod hilbert;
pub mod stream;
mod xor;

pub use hilbert::{hilbert_index, hilbert_xy, order_for, PixelCoord, MAX_ORDER};
pub use xor::{xor_table_sample, XorTables, XOR_TABLE_MAGIC, XOR_TILE};

use crate::error::{Error, Result};
use crate::lattice::GeneratorVector;
use crate::radical::{base3_tables, Base, Halton, HaltonMode};
use crate::unitfloat::{bit_reverse32, map_u32_to_unifloat, UnitValue};

/// `φ₃(hilbert_index)` in 32-bit fixed point, four ternary digits per
/// table lookup. Curve indices are reduced modulo `3^20` like any other
/// base-3 index.
#[inline]
pub fn pixel_shift_bits(curve_index: u64) -> u32 {
    let (_, four_digits) = base3_tables();
    let reduced = curve_index % Base::new(3).expect("base 3").max_power() as u64;
    four_digits.inverse_bits(reduced as u32)
}

/// Integer stage of the pixel-shifted lattice: `(φ₂(i) + shift) · g_j mod 1`.
#[inline]
pub fn pixel_shifted_lattice_bits(i: u32, shift: u32, g: u32) -> u32 {
    bit_reverse32(i).wrapping_add(shift).wrapping_mul(g)
}

/// Component `j` of sample `i` of the pixel-shifted lattice at pixel `p`.
pub fn pixel_shifted_lattice_component(
    i: u32,
    j: usize,
    p: PixelCoord,
    g: &GeneratorVector,
) -> Result<UnitValue> {
    if j >= g.dims() {
        return Err(Error::Dimensions {
            requested: j + 1,
            available: g.dims(),
        });
    }
    let shift = pixel_shift_bits(hilbert_index(p));
    Ok(map_u32_to_unifloat(pixel_shifted_lattice_bits(
        i,
        shift,
        g.get(j),
    )))
}

/// Global Halton index of local sample `i` at the pixel with curve index
/// `curve_index`, given `spp` samples per pixel.
pub fn halton_hilbert_index(curve_index: u64, spp: u32, i: u32) -> Result<u32> {
    if i >= spp {
        return Err(Error::Range(format!("sample {i} not below spp {spp}")));
    }
    curve_index
        .checked_mul(spp as u64)
        .and_then(|b| b.checked_add(i as u64))
        .filter(|&g| g <= u32::MAX as u64)
        .map(|g| g as u32)
        .ok_or_else(|| Error::Range("Halton index exceeds 32 bits".into()))
}

/// Sample `i` of pixel `p` for Halton along the Hilbert curve.
pub fn halton_along_hilbert_sample(
    i: u32,
    p: PixelCoord,
    spp: u32,
    dims: usize,
) -> Result<Vec<UnitValue>> {
    let index = halton_hilbert_index(hilbert_index(p), spp, i)?;
    Ok(Halton::new(dims, &HaltonMode::Plain)?.point(index))
}

/// Digits of `v` in base `b`, `count` of them, in reverse order.
fn reverse_digits(mut v: u64, b: u64, count: u32) -> u64 {
    let mut out = 0;
    for _ in 0..count {
        out = out * b + v % b;
        v /= b;
    }
    out
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m)
}

/// Sampling the image plane with the first two Halton dimensions: the image
/// is scaled so that `2^a ≥ width` strata cover x and `3^b ≥ height` cover y,
/// and each pixel owns the indices of one residue class modulo `2^a · 3^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImagePlaneHalton {
    width: u32,
    height: u32,
    a: u32,
    b: u32,
    pow2: u64,
    pow3: u64,
    // (2^a)^-1 mod 3^b
    inv_pow2: u64,
}

impl ImagePlaneHalton {
    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Range("image must not be empty".into()));
        }
        let a = 32 - (width - 1).leading_zeros();
        let mut b = 0;
        let mut pow3 = 1u64;
        while pow3 < height as u64 {
            pow3 *= 3;
            b += 1;
        }
        let pow2 = 1u64 << a;
        if pow2 * pow3 > u32::MAX as u64 {
            return Err(Error::Range(format!("{width}x{height} image too large for 32-bit indices")));
        }
        Ok(ImagePlaneHalton {
            width,
            height,
            a,
            b,
            pow2,
            pow3,
            inv_pow2: mod_inverse(pow2 as i64, pow3 as i64) as u64,
        })
    }

    /// `(a, b)` with `2^a ≥ width` and `3^b ≥ height`.
    pub fn scale_exponents(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    /// Distance between consecutive indices of one pixel.
    pub fn stride(&self) -> u64 {
        self.pow2 * self.pow3
    }

    /// Smallest index landing in pixel `(x, y)`.
    pub fn offset(&self, x: u32, y: u32) -> Result<u64> {
        if x >= self.width || y >= self.height {
            return Err(Error::Range(format!(
                "pixel ({x}, {y}) outside {}x{}",
                self.width, self.height
            )));
        }
        let r2 = reverse_digits(x as u64, 2, self.a);
        let r3 = reverse_digits(y as u64, 3, self.b);
        // i ≡ r2 (mod 2^a), i ≡ r3 (mod 3^b)
        let diff = (r3 + self.pow3 - r2 % self.pow3) % self.pow3;
        let t = diff * self.inv_pow2 % self.pow3;
        Ok(r2 + self.pow2 * t)
    }

    /// The `k`-th index landing in pixel `(x, y)`.
    pub fn index(&self, x: u32, y: u32, k: u64) -> Result<u64> {
        let offset = self.offset(x, y)?;
        k.checked_mul(self.stride())
            .and_then(|v| v.checked_add(offset))
            .ok_or_else(|| Error::Range("pixel enumeration overflows 64 bits".into()))
    }

    /// Position inside the pixel of the sample with Halton index `i`, as
    /// 32-bit fixed point per axis.
    #[inline]
    pub fn in_pixel_bits(&self, i: u32, base3: Base) -> (u32, u32) {
        let x = bit_reverse32(i);
        let fx = if self.a == 0 { x } else { x << self.a };
        (fx, base3.inverse_bits(i).wrapping_mul(self.pow3 as u32))
    }
}

/// The `k`-th Halton index whose first two scaled components fall into
/// pixel `p` of a `width × height` image.
pub fn halton_pixel_enumeration(x: u32, y: u32, width: u32, height: u32, k: u64) -> Result<u64> {
    ImagePlaneHalton::new(width, height)?.index(x, y, k)
}

/// Indices `{ i : i ≡ residue (mod modulus) }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexCongruence {
    pub residue: u64,
    pub modulus: u64,
}

impl IndexCongruence {
    pub fn contains(&self, i: u64) -> bool {
        i % self.modulus == self.residue
    }

    /// Members below `n`, in increasing order.
    pub fn below(&self, n: u64) -> impl Iterator<Item = u64> {
        (self.residue..n).step_by(self.modulus as usize)
    }
}

/// Indices of part `part` out of `parts = base^k`: the points whose radical
/// inverse in `base` lies in `[part/parts, (part+1)/parts)`.
pub fn partition_by_extra_dimension(part: u64, parts: u64, base: u32) -> Result<IndexCongruence> {
    if base < 2 {
        return Err(Error::InvalidBase(base));
    }
    let b = base as u64;
    let mut k = 0;
    let mut modulus = 1u64;
    while modulus < parts {
        modulus = modulus
            .checked_mul(b)
            .ok_or_else(|| Error::Range("part count overflows".into()))?;
        k += 1;
    }
    if modulus != parts {
        return Err(Error::Config(format!("{parts} parts is not a power of {base}")));
    }
    if part >= parts {
        return Err(Error::Range(format!("part {part} not below {parts}")));
    }
    Ok(IndexCongruence {
        residue: reverse_digits(part, b, k),
        modulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_component;
    use crate::radical::radical_inverse;

    fn px(x: u32, y: u32, o: u32) -> PixelCoord {
        PixelCoord::new(x, y, o).unwrap()
    }

    #[test]
    fn shift_at_curve_origin_is_plain_lattice() {
        let g = GeneratorVector::new(vec![1, 0x2d5f_7a2b | 1, 12345]).unwrap();
        for i in [0u32, 1, 77, 4095, u32::MAX] {
            for j in 0..3 {
                assert_eq!(
                    pixel_shifted_lattice_component(i, j, px(0, 0, 4), &g).unwrap(),
                    lattice_component(i, g.get(j))
                );
            }
        }
        assert!(pixel_shifted_lattice_component(0, 3, px(0, 0, 4), &g).is_err());
    }

    #[test]
    fn shift_is_one_third_at_curve_index_one() {
        let g = GeneratorVector::new(vec![1]).unwrap();
        let p = px(0, 1, 1);
        assert_eq!(hilbert_index(p), 1);
        let v = pixel_shifted_lattice_component(0, 0, p, &g).unwrap();
        assert_eq!(v, map_u32_to_unifloat(0x5555_5555));
        assert!((v.to_f64() - 1.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn shift_tables_agree() {
        let (t9, _) = base3_tables();
        let plain = Base::new(3).unwrap();
        for h in (0..200_000u64).chain([3u64.pow(20) - 1, 1 << 30]) {
            let bits = pixel_shift_bits(h);
            assert_eq!(bits, plain.inverse_bits(h as u32));
            assert_eq!(bits, t9.inverse_bits(h as u32));
        }
    }

    #[test]
    fn halton_hilbert_blocks() {
        let p = hilbert_xy(2, 3).unwrap();
        assert_eq!(halton_hilbert_index(2, 4, 1).unwrap(), 9);
        assert_eq!(
            halton_along_hilbert_sample(1, p, 4, 3).unwrap(),
            Halton::new(3, &HaltonMode::Plain).unwrap().point(9)
        );
        assert_eq!(
            halton_along_hilbert_sample(0, px(0, 0, 3), 16, 2).unwrap(),
            vec![UnitValue::ZERO; 2]
        );
        assert!(halton_along_hilbert_sample(4, p, 4, 2).is_err());
        // consecutive pixels on the curve own consecutive blocks
        let spp = 8;
        for d in 0..15u64 {
            let last = halton_hilbert_index(d, spp, spp - 1).unwrap();
            assert_eq!(halton_hilbert_index(d + 1, spp, 0).unwrap(), last + 1);
        }
    }

    #[test]
    fn pixel_enumeration_examples() {
        let e = ImagePlaneHalton::new(2, 3).unwrap();
        assert_eq!(e.scale_exponents(), (1, 1));
        assert_eq!(e.stride(), 6);
        let ks: Vec<u64> = (0..3).map(|k| e.index(0, 0, k).unwrap()).collect();
        assert_eq!(ks, [0, 6, 12]);
        let ks: Vec<u64> = (0..3).map(|k| e.index(1, 0, k).unwrap()).collect();
        assert_eq!(ks, [3, 9, 15]);
        assert!(e.index(2, 0, 0).is_err());
        assert!(e.index(0, 3, 0).is_err());
        assert!(ImagePlaneHalton::new(0, 3).is_err());
    }

    #[test]
    fn enumerated_points_land_in_their_pixel() {
        let (w, h) = (5u32, 7u32);
        let e = ImagePlaneHalton::new(w, h).unwrap();
        let (a, b) = e.scale_exponents();
        for y in 0..h {
            for x in 0..w {
                for k in 0..4 {
                    let i = e.index(x, y, k).unwrap() as u32;
                    let u = radical_inverse(i, 0).unwrap().to_f64();
                    assert_eq!((u * (1u64 << a) as f64).floor() as u32, x);
                    // base 3 checked on exact digits
                    assert_eq!(reverse_digits(i as u64, 3, b), y as u64);
                }
            }
        }
    }

    #[test]
    fn partition_examples() {
        let even = partition_by_extra_dimension(0, 2, 2).unwrap();
        let odd = partition_by_extra_dimension(1, 2, 2).unwrap();
        assert_eq!((even.residue, even.modulus), (0, 2));
        assert_eq!((odd.residue, odd.modulus), (1, 2));
        let p = partition_by_extra_dimension(1, 4, 2).unwrap();
        assert_eq!((p.residue, p.modulus), (2, 4));
        assert!(partition_by_extra_dimension(0, 6, 2).is_err());
        assert!(partition_by_extra_dimension(4, 4, 2).is_err());
        assert_eq!(partition_by_extra_dimension(0, 1, 3).unwrap().modulus, 1);
    }

    #[test]
    fn partitions_cover_prefix() {
        for (base, parts) in [(2u32, 8u64), (3, 9), (5, 25)] {
            let n = 2000u64;
            let mut owner = vec![None; n as usize];
            for part in 0..parts {
                let c = partition_by_extra_dimension(part, parts, base).unwrap();
                for i in c.below(n) {
                    assert!(owner[i as usize].replace(part).is_none());
                    // exact rational φ_b(i) = num / den
                    let (mut num, mut den, mut v) = (0u128, 1u128, i as u128);
                    while v > 0 {
                        num = num * base as u128 + v % base as u128;
                        den *= base as u128;
                        v /= base as u128;
                    }
                    assert_eq!(num * parts as u128 / den, part as u128);
                }
            }
            assert!(owner.iter().all(Option::is_some));
        }
    }
}
