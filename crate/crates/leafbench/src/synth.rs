//! Seeded synthetic leaf-like images for desk-scale runs and timing.
//!
//! Each image is a bright elliptical leaf blade on a darker background:
//! parallel venation of graded prominence (a few strong veins over many
//! moderate ones), a midrib, lesion-like spots, and a little fine texture.

use leafbench_core::rng::NoiseStream;
use leafbench_core::{ColorSpace, Raster};

const SIZE: usize = 256;

/// `count` deterministic 256x256 srgb leaf images.
pub fn leaf_corpus(count: usize, seed: u64) -> Vec<Raster> {
    (0..count)
        .map(|i| leaf_image(&mut NoiseStream::derive(seed, i as u64)))
        .collect()
}

/// One leaf image drawn from `stream`.
pub fn leaf_image(stream: &mut NoiseStream) -> Raster {
    let mut uniform = |lo: f64, hi: f64| lo + (hi - lo) * stream_unit(stream);
    let (w, h) = (SIZE, SIZE);
    let mut rgb = vec![[0.0f64; 3]; w * h];

    // background with a gentle gradient
    let bg = [
        uniform(60.0, 90.0),
        uniform(55.0, 85.0),
        uniform(40.0, 70.0),
    ];
    let gx = uniform(-30.0, 30.0);
    let gy = uniform(-30.0, 30.0);
    for y in 0..h {
        for x in 0..w {
            let fx = x as f64 / w as f64 - 0.5;
            let fy = y as f64 / h as f64 - 0.5;
            let px = &mut rgb[y * w + x];
            px[0] = bg[0] + gx * fx;
            px[1] = bg[1] + gy * fy;
            px[2] = bg[2] + 0.5 * gx * fx;
        }
    }

    // leaf blade: rotated ellipse
    let cx = uniform(0.4, 0.6) * w as f64;
    let cy = uniform(0.4, 0.6) * h as f64;
    let ax = uniform(0.30, 0.42) * w as f64;
    let ay = uniform(0.55, 0.8) * h as f64 / 2.0;
    let angle = uniform(0.0, core::f64::consts::PI);
    let (sin_a, cos_a) = angle.sin_cos();
    let leaf = [
        uniform(95.0, 125.0),
        uniform(125.0, 155.0),
        uniform(60.0, 90.0),
    ];

    // axis coordinates per pixel, reused by every structural element
    let mut across = vec![0.0f64; w * h]; // xr: distance across the blade
    let mut along = vec![0.0f64; w * h]; // yr: distance along the blade
    let mut mask = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            let xr = dx * cos_a + dy * sin_a;
            let yr = -dx * sin_a + dy * cos_a;
            let i = y * w + x;
            across[i] = xr;
            along[i] = yr;
            if (xr / ax) * (xr / ax) + (yr / ay) * (yr / ay) < 1.0 {
                mask[i] = true;
                let shade = 15.0 * (yr / ay);
                rgb[i] = [
                    leaf[0] + shade * 0.5,
                    leaf[1] + shade,
                    leaf[2] + shade * 0.3,
                ];
            }
        }
    }

    // channel mix of every vein/spot darkening
    const VEIN_MIX: [f64; 3] = [0.5, 1.0, 0.4];

    // midrib
    let midrib_amp = uniform(60.0, 80.0);
    for i in 0..w * h {
        if mask[i] {
            let profile = (-(across[i] * across[i]) / (2.0 * 2.0 * 2.0)).exp();
            for c in 0..3 {
                rgb[i][c] -= profile * midrib_amp * VEIN_MIX[c];
            }
        }
    }

    // parallel venation: 6 strong veins among 12 moderate ones, in shuffled
    // positions; rectangular profile with a one-pixel shoulder
    const N_STRONG: usize = 6;
    const N_TOTAL: usize = 18;
    let mut slots: Vec<usize> = (0..N_TOTAL).collect();
    for i in (1..N_TOTAL).rev() {
        let j = (stream.next_u64() % (i as u64 + 1)) as usize;
        slots.swap(i, j);
    }
    for (k, &slot) in slots.iter().enumerate() {
        let offset = (slot as f64 + 1.0 - N_TOTAL as f64 / 2.0) / (N_TOTAL as f64 / 2.0) * ax * 0.85;
        let half_width = stream_uniform(stream, 1.0, 2.0);
        let amp = if k < N_STRONG {
            stream_uniform(stream, 80.0, 130.0)
        } else {
            stream_uniform(stream, 38.0, 65.0)
        };
        for i in 0..w * h {
            if mask[i] {
                let d = (across[i] - offset).abs();
                let profile = (half_width + 0.5 - d).clamp(0.0, 1.0);
                if profile > 0.0 {
                    for c in 0..3 {
                        rgb[i][c] -= profile * amp * VEIN_MIX[c];
                    }
                }
            }
        }
    }

    // lesion spots
    let n_spots = 2 + (stream.next_u64() % 4) as usize;
    for _ in 0..n_spots {
        let sx = stream_uniform(stream, 0.3, 0.7) * w as f64;
        let sy = stream_uniform(stream, 0.3, 0.7) * h as f64;
        let radius = stream_uniform(stream, 4.0, 14.0);
        let amp_r = stream_uniform(stream, 10.0, 40.0);
        let amp_g = stream_uniform(stream, 30.0, 60.0);
        let amp_b = stream_uniform(stream, 5.0, 25.0);
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if mask[i] {
                    let dx = x as f64 - sx;
                    let dy = y as f64 - sy;
                    let spot = (-(dx * dx + dy * dy) / (2.0 * radius * radius)).exp();
                    rgb[i][0] += spot * amp_r;
                    rgb[i][1] -= spot * amp_g;
                    rgb[i][2] -= spot * amp_b;
                }
            }
        }
    }

    // fine texture: half-resolution normal field upsampled bilinearly
    let (tw, th) = (w / 2, h / 2);
    let field: Vec<f64> = (0..tw * th).map(|_| stream.next_gaussian()).collect();
    for y in 0..h {
        for x in 0..w {
            // half-pixel-center bilinear sample of the coarse field
            let fx = ((x as f64 + 0.5) / 2.0 - 0.5).clamp(0.0, (tw - 1) as f64);
            let fy = ((y as f64 + 0.5) / 2.0 - 0.5).clamp(0.0, (th - 1) as f64);
            let (x0, y0) = (fx as usize, fy as usize);
            let (x1, y1) = ((x0 + 1).min(tw - 1), (y0 + 1).min(th - 1));
            let (tx, ty) = (fx - x0 as f64, fy - y0 as f64);
            let top = field[y0 * tw + x0] * (1.0 - tx) + field[y0 * tw + x1] * tx;
            let bottom = field[y1 * tw + x0] * (1.0 - tx) + field[y1 * tw + x1] * tx;
            let t = top * (1.0 - ty) + bottom * ty;
            for c in 0..3 {
                rgb[y * w + x][c] += t;
            }
        }
    }

    let samples: Vec<u8> = rgb
        .iter()
        .flat_map(|px| px.iter().map(|&v| v.round().clamp(0.0, 255.0) as u8))
        .collect();
    Raster::new(w, h, 3, ColorSpace::Srgb, samples).expect("valid dimensions")
}

fn stream_unit(stream: &mut NoiseStream) -> f64 {
    stream.next_unit()
}

fn stream_uniform(stream: &mut NoiseStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * stream.next_unit()
}
