//! Integer to unit-interval conversion and the bit-level helpers shared by
//! every sampler.
//!
//! All samplers in this crate finish with a 32-bit fixed-point value `u`
//! that represents `u * 2^-32`. [`map_u32_to_unifloat`] turns that value into
//! the closest `f32` that is still strictly below one, by assembling the
//! exponent and mantissa bits directly instead of dividing.

use std::fmt;

/// A binary32 value in the right-open unit interval `[0, 1)`.
#[derive(Clone, Copy, PartialEq, PartialOrd, Default)]
#[repr(transparent)]
pub struct UnitValue(f32);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);

    /// Largest binary32 strictly below one.
    pub const MAX: UnitValue = UnitValue(f32::from_bits(0x3F7F_FFFF));

    /// Returns `None` unless `0 <= value < 1`.
    pub fn new(value: f32) -> Option<Self> {
        (0.0..1.0).contains(&value).then_some(UnitValue(value))
    }

    #[inline]
    pub fn get(self) -> f32 {
        self.0
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0 as f64
    }

    #[inline]
    pub fn to_bits(self) -> u32 {
        self.0.to_bits()
    }
}

impl fmt::Debug for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<UnitValue> for f32 {
    fn from(v: UnitValue) -> f32 {
        v.0
    }
}

impl From<UnitValue> for f64 {
    fn from(v: UnitValue) -> f64 {
        v.0 as f64
    }
}

const ONE_BITS: u32 = 0x3F80_0000;

/// Maps `u` to the binary32 value in `[0, 1)` closest to `u * 2^-32`.
///
/// The leading-zero count gives the exponent, the bits below the leading one
/// become the mantissa. The nine bits that do not fit into the mantissa are
/// rounded to nearest with ties toward zero, and the result is clamped to the
/// largest value below one so that `0xFFFF_FFFF` never turns into `1.0`.
#[inline]
pub fn map_u32_to_unifloat(u: u32) -> UnitValue {
    if u == 0 {
        return UnitValue::ZERO;
    }
    if u == 1 {
        // the general path would shift by 32
        return UnitValue(f32::from_bits((126 - 31) << 23));
    }
    let z = u.leading_zeros(); // <= 30 here
    let exponent = 126 - z;
    let aligned = u << (z + 1); // leading one shifted out
    let mantissa = aligned >> 9;
    let mut bits = (exponent << 23) | mantissa;
    // a carry out of the mantissa correctly bumps the exponent
    if aligned & 0x1FF > 0x100 {
        bits += 1;
    }
    if bits >= ONE_BITS {
        bits = ONE_BITS - 1;
    }
    UnitValue(f32::from_bits(bits))
}

/// Mirrors the 32 bits of `v`, i.e. the base-2 radical inverse in fixed point.
#[inline]
pub fn bit_reverse32(v: u32) -> u32 {
    v.reverse_bits()
}

/// Number of leading zero bits; defined as 32 for zero.
#[inline]
pub fn count_leading_zeros32(v: u32) -> u32 {
    v.leading_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The mapping exactly as printed: the nine low bits are dropped.
    fn map_truncating(u: u32) -> f32 {
        if u == 0 {
            return 0.0;
        }
        if u == 1 {
            return f32::from_bits((126 - 31) << 23);
        }
        let z = u.leading_zeros();
        f32::from_bits(((126 - z) << 23) | ((u << (z + 1)) >> 9))
    }

    fn exact(u: u32) -> f64 {
        u as f64 / 4294967296.0
    }

    #[test]
    fn fixed_points() {
        assert_eq!(map_u32_to_unifloat(0).get(), 0.0);
        let one = map_u32_to_unifloat(1);
        assert_eq!(one.to_bits(), 95 << 23);
        assert_eq!(one.to_f64(), 2f64.powi(-32));
        assert_eq!(map_u32_to_unifloat(0x8000_0000).get(), 0.5);
        let three = map_u32_to_unifloat(3);
        assert_eq!(three.to_bits(), (96 << 23) | 0x40_0000);
        assert_eq!(three.to_f64(), 3.0 * 2f64.powi(-32));
        assert_eq!(map_u32_to_unifloat(u32::MAX).get(), 0.99999994);
        assert_eq!(map_u32_to_unifloat(u32::MAX), UnitValue::MAX);
    }

    #[test]
    fn truncation_is_not_nearest() {
        // 2^25 + 3: the next float up is one unit away, truncation is three
        let u = 0x0200_0003;
        let t = exact(u);
        assert!((map_truncating(u) as f64 - t).abs() > (map_u32_to_unifloat(u).to_f64() - t).abs());
        assert_eq!(map_u32_to_unifloat(u).to_f64(), exact(0x0200_0004));
    }

    #[test]
    fn ties_round_toward_zero() {
        // 2^24 + 1 sits exactly between 2^24 and 2^24 + 2
        assert_eq!(map_u32_to_unifloat(0x0100_0001).to_f64(), exact(0x0100_0000));
    }

    #[test]
    fn stratified_optimality() {
        for k in 0..(1u64 << 20) {
            let u = (k * 4099 + (k >> 3)) as u32;
            let f = map_u32_to_unifloat(u);
            let d = (f.to_f64() - exact(u)).abs();
            let up = f32::from_bits(f.to_bits() + 1);
            if up < 1.0 {
                assert!(d <= (up as f64 - exact(u)).abs(), "u = {u:#x}");
            }
            if f.get() > 0.0 {
                let down = f32::from_bits(f.to_bits() - 1);
                assert!(d <= (down as f64 - exact(u)).abs(), "u = {u:#x}");
            }
        }
    }

    #[test]
    fn injective_below_two_pow_24() {
        let mut prev = map_u32_to_unifloat(0);
        for u in 1..(1u32 << 24) {
            let f = map_u32_to_unifloat(u);
            assert!(f > prev, "u = {u}");
            prev = f;
        }
    }

    #[test]
    fn collisions_above_one_256th() {
        let a = map_u32_to_unifloat(1 << 24);
        let b = map_u32_to_unifloat((1 << 24) + 1);
        assert!(a.get() >= 1.0 / 256.0);
        assert_eq!(a, b);
    }

    #[test]
    fn bit_reverse_examples() {
        assert_eq!(bit_reverse32(0), 0);
        assert_eq!(bit_reverse32(1), 0x8000_0000);
        assert_eq!(bit_reverse32(0x0000_F00F), 0xF00F_0000);
    }

    #[test]
    fn clz_examples() {
        assert_eq!(count_leading_zeros32(0x8000_0000), 0);
        assert_eq!(count_leading_zeros32(1), 31);
        assert_eq!(count_leading_zeros32(0), 32);
        for v in [2u32, 3, 17, 0x1234_5678, u32::MAX] {
            let z = count_leading_zeros32(v);
            assert!(1u64 << (31 - z) <= v as u64 && (v as u64) < 1u64 << (32 - z));
        }
    }

    #[test]
    fn unit_value_rejects_one() {
        assert!(UnitValue::new(1.0).is_none());
        assert!(UnitValue::new(-0.1).is_none());
        assert!(UnitValue::new(0.25).is_some());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn monotone(a: u32, b: u32) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                prop_assert!(map_u32_to_unifloat(lo) <= map_u32_to_unifloat(hi));
            }

            #[test]
            fn below_one(u: u32) {
                prop_assert!(map_u32_to_unifloat(u).get() < 1.0);
            }

            #[test]
            fn reverse_is_involution(v: u32) {
                prop_assert_eq!(bit_reverse32(bit_reverse32(v)), v);
            }
        }
    }
}
