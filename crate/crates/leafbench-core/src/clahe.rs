//! Contrast Limited Adaptive Histogram Equalization and the plain
//! histogram-equalization it reduces to.
//!
//! Color images are equalized on the luma plane only (chroma passes
//! through). The image is padded by reflection to a tile-multiple size,
//! per-tile histograms are clipped and redistributed, and every output
//! pixel blends the lookups of its four nearest tile centers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::raster::{
    from_luma_chroma, quantize_sample, reflect101, to_luma_chroma, ColorSpace, Raster,
};

/// Per-tile lookup table: 256 input levels to 256 output levels.
pub type TileMapping = [u8; 256];

/// CLAHE parameters: relative clip limit and tile grid.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClaheParams {
    pub clip_limit: f64,
    pub grid_x: usize,
    pub grid_y: usize,
}

impl ClaheParams {
    pub fn new(clip_limit: f64, grid_x: usize, grid_y: usize) -> Self {
        ClaheParams {
            clip_limit,
            grid_x,
            grid_y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.clip_limit > 0.0) || !self.clip_limit.is_finite() {
            return Err(Error::InvalidClaheParams("clip_limit must be > 0"));
        }
        if self.grid_x == 0 || self.grid_y == 0 {
            return Err(Error::InvalidClaheParams("grid must be at least 1x1"));
        }
        Ok(())
    }
}

/// Absolute per-bin clip count: `max(1, round(clip_limit * tile_area / 256))`.
pub fn clip_threshold(params: &ClaheParams, tile_area: usize) -> u32 {
    let raw = math::round(params.clip_limit * tile_area as f64 / 256.0);
    if raw < 1.0 {
        1
    } else if raw > u32::MAX as f64 {
        u32::MAX
    } else {
        raw as u32
    }
}

/// Equalization map of a histogram:
/// `v -> round((cdf(v) - cdf_min) / (N - cdf_min) * 255)` where `cdf_min`
/// is the cdf at the lowest occupied bin. A single-bin histogram (constant
/// tile) maps to the identity.
fn equalize_map(hist: &[u32; 256]) -> TileMapping {
    let total: u64 = hist.iter().map(|&c| c as u64).sum();
    let cdf_min = hist
        .iter()
        .find(|&&c| c > 0)
        .map(|&c| c as u64)
        .unwrap_or(0);
    let mut map = [0u8; 256];
    if total == cdf_min || total == 0 {
        for (v, slot) in map.iter_mut().enumerate() {
            *slot = v as u8;
        }
        return map;
    }
    let denom = (total - cdf_min) as f64;
    let mut cdf: u64 = 0;
    for (v, slot) in map.iter_mut().enumerate() {
        cdf += hist[v] as u64;
        let num = cdf as f64 - cdf_min as f64;
        *slot = quantize_sample(num / denom * 255.0);
    }
    map
}

/// Clips a tile histogram, redistributes the excess uniformly (one pass,
/// residual one count per bin from bin 0), and builds its equalization map.
pub fn tile_lookup(hist: &[u32; 256], clip: u32) -> TileMapping {
    let mut clipped = *hist;
    let mut excess: u64 = 0;
    for bin in clipped.iter_mut() {
        if *bin > clip {
            excess += (*bin - clip) as u64;
            *bin = clip;
        }
    }
    let add = (excess / 256) as u32;
    let rem = (excess % 256) as usize;
    for (i, bin) in clipped.iter_mut().enumerate() {
        *bin += add + u32::from(i < rem);
    }
    equalize_map(&clipped)
}

/// Global histogram equalization of a gray image.
pub fn histogram_equalize(img: &Raster) -> Result<Raster> {
    if img.space() != ColorSpace::Gray {
        return Err(Error::WrongColorSpace);
    }
    let mut hist = [0u32; 256];
    for &v in img.samples() {
        hist[v as usize] += 1;
    }
    let map = equalize_map(&hist);
    let samples = img.samples().iter().map(|&v| map[v as usize]).collect();
    Raster::new(img.width(), img.height(), 1, ColorSpace::Gray, samples)
}

/// CLAHE. Color inputs are equalized on luma only.
pub fn clahe(img: &Raster, params: &ClaheParams) -> Result<Raster> {
    params.validate()?;
    let (w, h) = (img.width(), img.height());
    let (gx, gy) = (params.grid_x, params.grid_y);
    let tile_w = w.div_ceil(gx);
    let tile_h = h.div_ceil(gy);
    if tile_w < 2 || tile_h < 2 {
        return Err(Error::GridTooFine {
            tile: (tile_w, tile_h),
        });
    }

    let luma: Vec<u8> = match img.space() {
        ColorSpace::Gray => img.samples().to_vec(),
        ColorSpace::Srgb => to_luma_chroma(img)?.channel_bytes(0),
        ColorSpace::LumaChroma => img.channel_bytes(0),
    };
    let equalized = clahe_plane(&luma, w, h, params, tile_w, tile_h);

    match img.space() {
        ColorSpace::Gray => Raster::new(w, h, 1, ColorSpace::Gray, equalized),
        ColorSpace::Srgb => {
            let ycc = to_luma_chroma(img)?;
            let recomposed = Raster::from_channel_bytes(
                w,
                h,
                ColorSpace::LumaChroma,
                &[equalized, ycc.channel_bytes(1), ycc.channel_bytes(2)],
            )?;
            from_luma_chroma(&recomposed)
        }
        ColorSpace::LumaChroma => Raster::from_channel_bytes(
            w,
            h,
            ColorSpace::LumaChroma,
            &[equalized, img.channel_bytes(1), img.channel_bytes(2)],
        ),
    }
}

fn clahe_plane(
    src: &[u8],
    w: usize,
    h: usize,
    params: &ClaheParams,
    tile_w: usize,
    tile_h: usize,
) -> Vec<u8> {
    let (gx, gy) = (params.grid_x, params.grid_y);
    let clip = clip_threshold(params, tile_w * tile_h);

    // per-tile histograms over the reflect-101 padded plane
    let mut lookups: Vec<TileMapping> = Vec::with_capacity(gx * gy);
    let mut hist = [0u32; 256];
    for ty in 0..gy {
        for tx in 0..gx {
            hist.fill(0);
            for py in ty * tile_h..(ty + 1) * tile_h {
                let sy = reflect101(py as isize, h);
                let row = &src[sy * w..(sy + 1) * w];
                for px in tx * tile_w..(tx + 1) * tile_w {
                    hist[row[reflect101(px as isize, w)] as usize] += 1;
                }
            }
            lookups.push(tile_lookup(&hist, clip));
        }
    }

    // bilinear blend of the four nearest tile-center lookups; border pixels
    // clamp to the available tiles
    let mut x_left = vec![0usize; w];
    let mut x_right = vec![0usize; w];
    let mut x_frac = vec![0.0f64; w];
    for x in 0..w {
        let f = (x as f64 + 0.5) / tile_w as f64 - 0.5;
        let i0 = math::floor(f);
        x_frac[x] = f - i0;
        x_left[x] = clamp_tile(i0, gx);
        x_right[x] = clamp_tile(i0 + 1.0, gx);
    }
    let mut out = vec![0u8; w * h];
    for y in 0..h {
        let f = (y as f64 + 0.5) / tile_h as f64 - 0.5;
        let j0 = math::floor(f);
        let ty_frac = f - j0;
        let top = clamp_tile(j0, gy) * gx;
        let bottom = clamp_tile(j0 + 1.0, gy) * gx;
        let src_row = &src[y * w..(y + 1) * w];
        let out_row = &mut out[y * w..(y + 1) * w];
        for x in 0..w {
            let v = src_row[x] as usize;
            let tl = lookups[top + x_left[x]][v] as f64;
            let tr = lookups[top + x_right[x]][v] as f64;
            let bl = lookups[bottom + x_left[x]][v] as f64;
            let br = lookups[bottom + x_right[x]][v] as f64;
            let fx = x_frac[x];
            let upper = tl + (tr - tl) * fx;
            let lower = bl + (br - bl) * fx;
            out_row[x] = quantize_sample(upper + (lower - upper) * ty_frac);
        }
    }
    out
}

#[inline]
fn clamp_tile(i: f64, n: usize) -> usize {
    if i <= 0.0 {
        0
    } else if i >= (n - 1) as f64 {
        n - 1
    } else {
        i as usize
    }
}
