//! Hilbert curve over a `2^order × 2^order` pixel grid.
//!
//! Orientation: the curve starts at `(0, 0)`, its first step goes along +y
//! and it ends at `(2^order − 1, 0)`. At order 1 the visit order is
//! `(0,0), (0,1), (1,1), (1,0)`.

use crate::error::{Error, Result};

/// Largest supported order; indices then fill 62 bits.
pub const MAX_ORDER: u32 = 31;

/// A pixel on a Hilbert grid of the given order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelCoord {
    x: u32,
    y: u32,
    order: u32,
}

impl PixelCoord {
    pub fn new(x: u32, y: u32, order: u32) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::Range(format!("Hilbert order {order} exceeds {MAX_ORDER}")));
        }
        let side = 1u64 << order;
        if x as u64 >= side || y as u64 >= side {
            return Err(Error::Range(format!(
                "pixel ({x}, {y}) outside the {side}x{side} Hilbert grid"
            )));
        }
        Ok(PixelCoord { x, y, order })
    }

    pub fn x(self) -> u32 {
        self.x
    }

    pub fn y(self) -> u32 {
        self.y
    }

    pub fn order(self) -> u32 {
        self.order
    }
}

/// Smallest order whose grid covers a `width × height` image.
pub fn order_for(width: u32, height: u32) -> u32 {
    let side = width.max(height).max(1);
    32 - (side - 1).leading_zeros()
}

#[inline]
fn rotate(side: u64, rx: u64, ry: u64, x: &mut u64, y: &mut u64) {
    if ry == 0 {
        if rx == 1 {
            *x = side - 1 - *x;
            *y = side - 1 - *y;
        }
        std::mem::swap(x, y);
    }
}

/// Position of `p` along the curve, in `[0, 4^order)`.
pub fn hilbert_index(p: PixelCoord) -> u64 {
    let side = 1u64 << p.order;
    let (mut x, mut y) = (p.x as u64, p.y as u64);
    let mut d = 0u64;
    let mut s = side >> 1;
    while s > 0 {
        let rx = ((x & s) > 0) as u64;
        let ry = ((y & s) > 0) as u64;
        d += s * s * ((3 * rx) ^ ry);
        rotate(side, rx, ry, &mut x, &mut y);
        s >>= 1;
    }
    d
}

/// Pixel at position `d` along the curve of the given order.
pub fn hilbert_xy(d: u64, order: u32) -> Result<PixelCoord> {
    if order > MAX_ORDER {
        return Err(Error::Range(format!("Hilbert order {order} exceeds {MAX_ORDER}")));
    }
    let side = 1u64 << order;
    if d >= side * side {
        return Err(Error::Range(format!("curve index {d} not below 4^{order}")));
    }
    let (mut x, mut y) = (0u64, 0u64);
    let mut t = d;
    let mut s = 1u64;
    while s < side {
        let rx = 1 & (t >> 1);
        let ry = 1 & (t ^ rx);
        rotate(s, rx, ry, &mut x, &mut y);
        x += s * rx;
        y += s * ry;
        t >>= 2;
        s <<= 1;
    }
    PixelCoord::new(x as u32, y as u32, order)
}
