//! The synthetic test scene and its exact per-pixel averages.

use std::f64::consts::PI;

const FREQ: f64 = 8.0 * PI;
pub const DISK_CENTER: f64 = 0.5;
pub const DISK_RADIUS: f64 = 0.3;

/// Scene value at `(u, v)` in the unit square: a smooth checker of sines
/// in `[0, 0.5]` plus `0.5` inside the disk.
#[inline]
pub fn scene(u: f64, v: f64) -> f64 {
    let smooth = 0.25 * (1.0 + (FREQ * u).sin() * (FREQ * v).sin());
    let (du, dv) = (u - DISK_CENTER, v - DISK_CENTER);
    let disk = if du * du + dv * dv < DISK_RADIUS * DISK_RADIUS {
        0.5
    } else {
        0.0
    };
    smooth + disk
}

fn mean_sin(a: f64, b: f64) -> f64 {
    ((FREQ * a).cos() - (FREQ * b).cos()) / (FREQ * (b - a))
}

// ∫ sqrt(r² - t²) dt
fn half_chord_antiderivative(t: f64, r: f64) -> f64 {
    let t = t.clamp(-r, r);
    0.5 * (t * (r * r - t * t).max(0.0).sqrt() + r * r * (t / r).asin())
}

/// Area of the disk inside `[u0, u1] × [v0, v1]`.
pub fn disk_rect_area(u0: f64, u1: f64, v0: f64, v1: f64) -> f64 {
    let (c, r) = (DISK_CENTER, DISK_RADIUS);
    let mut cuts = vec![u0, u1];
    for t in [c - r, c + r] {
        cuts.push(t);
    }
    for v in [v0, v1] {
        let d = r * r - (v - c) * (v - c);
        if d > 0.0 {
            cuts.push(c - d.sqrt());
            cuts.push(c + d.sqrt());
        }
    }
    cuts.retain(|&t| (u0..=u1).contains(&t));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let h = |u: f64| (r * r - (u - c) * (u - c)).max(0.0).sqrt();
    let mut area = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let m = 0.5 * (a + b);
        if (m - c).abs() >= r {
            continue;
        }
        let hm = h(m);
        if v1.min(c + hm) <= v0.max(c - hm) {
            continue;
        }
        let top_is_edge = c + hm > v1;
        let bottom_is_edge = c - hm < v0;
        let hint = half_chord_antiderivative(b - c, r) - half_chord_antiderivative(a - c, r);
        let width = b - a;
        let top = if top_is_edge { v1 * width } else { c * width + hint };
        let bottom = if bottom_is_edge { v0 * width } else { c * width - hint };
        area += top - bottom;
    }
    area
}

/// Exact average of [`scene`] over the pixel `(x, y)` of a `width × height`
/// image covering the unit square.
pub fn pixel_reference(x: u32, y: u32, width: u32, height: u32) -> f64 {
    let (du, dv) = (1.0 / width as f64, 1.0 / height as f64);
    let (u0, v0) = (x as f64 * du, y as f64 * dv);
    let (u1, v1) = (u0 + du, v0 + dv);
    let smooth = 0.25 * (1.0 + mean_sin(u0, u1) * mean_sin(v0, v1));
    smooth + 0.5 * disk_rect_area(u0, u1, v0, v1) / (du * dv)
}

/// Row-major references for every pixel.
pub fn reference_image(width: u32, height: u32) -> Vec<f64> {
    (0..height)
        .flat_map(|y| (0..width).map(move |x| pixel_reference(x, y, width, height)))
        .collect()
}
