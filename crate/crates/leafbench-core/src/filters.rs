//! The five denoising filters and the generic 2-D convolution.
//!
//! All filters use reflect-101 border extension and quantize once per
//! output channel. Mean and median run on exact integer arithmetic; the
//! weighted filters (gaussian, bilateral, NLM) accumulate in f64 with
//! weights evaluated through `libm`, so outputs are platform-independent.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::raster::{
    from_luma_chroma, quantize_sample, reflect101, to_luma_chroma, ColorSpace, Plane, Raster,
};

/// Filter tag used for records and report labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FilterKind {
    Mean,
    Gaussian,
    Median,
    Bilateral,
    Nlm,
}

impl FilterKind {
    /// Report label. The NLM filter keeps the study's "bm3d" table label.
    pub fn label(&self) -> &'static str {
        match self {
            FilterKind::Mean => "mean",
            FilterKind::Gaussian => "gaussian",
            FilterKind::Median => "median",
            FilterKind::Bilateral => "bilateral",
            FilterKind::Nlm => "bm3d",
        }
    }
}

/// A denoising filter with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum FilterSpec {
    Mean {
        #[cfg_attr(feature = "serde", serde(default = "default_kernel_size"))]
        kernel_size: usize,
    },
    Gaussian {
        #[cfg_attr(feature = "serde", serde(default = "default_kernel_size"))]
        kernel_size: usize,
        /// `None` selects the kernel-size-derived sigma (see [`auto_sigma`]).
        #[cfg_attr(feature = "serde", serde(default))]
        sigma: Option<f64>,
    },
    Median {
        #[cfg_attr(feature = "serde", serde(default = "default_kernel_size"))]
        kernel_size: usize,
    },
    Bilateral {
        #[cfg_attr(feature = "serde", serde(default = "default_diameter"))]
        diameter: usize,
        #[cfg_attr(feature = "serde", serde(default = "default_bilateral_sigma"))]
        sigma_color: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_bilateral_sigma"))]
        sigma_space: f64,
    },
    #[cfg_attr(feature = "serde", serde(alias = "bm3d"))]
    Nlm {
        #[cfg_attr(feature = "serde", serde(default = "default_nlm_strength"))]
        h: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_nlm_strength"))]
        h_color: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_template_window"))]
        template_window: usize,
        #[cfg_attr(feature = "serde", serde(default = "default_search_window"))]
        search_window: usize,
    },
}

#[cfg(feature = "serde")]
fn default_kernel_size() -> usize {
    5
}
#[cfg(feature = "serde")]
fn default_diameter() -> usize {
    9
}
#[cfg(feature = "serde")]
fn default_bilateral_sigma() -> f64 {
    75.0
}
#[cfg(feature = "serde")]
fn default_nlm_strength() -> f64 {
    10.0
}
#[cfg(feature = "serde")]
fn default_template_window() -> usize {
    7
}
#[cfg(feature = "serde")]
fn default_search_window() -> usize {
    21
}

impl FilterSpec {
    pub fn kind(&self) -> FilterKind {
        match self {
            FilterSpec::Mean { .. } => FilterKind::Mean,
            FilterSpec::Gaussian { .. } => FilterKind::Gaussian,
            FilterSpec::Median { .. } => FilterKind::Median,
            FilterSpec::Bilateral { .. } => FilterKind::Bilateral,
            FilterSpec::Nlm { .. } => FilterKind::Nlm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FilterSpec::Mean { kernel_size } | FilterSpec::Median { kernel_size } => {
                check_odd_min3(kernel_size)
            }
            FilterSpec::Gaussian { kernel_size, sigma } => {
                check_odd_min3(kernel_size)?;
                if let Some(s) = sigma {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::InvalidSigma);
                    }
                }
                Ok(())
            }
            FilterSpec::Bilateral {
                diameter,
                sigma_color,
                sigma_space,
            } => {
                check_odd_min3(diameter)?;
                if !(sigma_color > 0.0 && sigma_space > 0.0)
                    || !sigma_color.is_finite()
                    || !sigma_space.is_finite()
                {
                    return Err(Error::InvalidSigma);
                }
                Ok(())
            }
            FilterSpec::Nlm {
                h,
                h_color,
                template_window,
                search_window,
            } => {
                if template_window % 2 == 0 || search_window % 2 == 0 {
                    return Err(Error::InvalidWindow("windows must be odd"));
                }
                if template_window == 0 || template_window > search_window {
                    return Err(Error::InvalidWindow("requires 1 <= template <= search"));
                }
                if !(h > 0.0 && h_color > 0.0) || !h.is_finite() || !h_color.is_finite() {
                    return Err(Error::InvalidStrength);
                }
                Ok(())
            }
        }
    }

    /// The five filters with the tuned benchmark parameters.
    pub fn standard_set() -> [FilterSpec; 5] {
        [
            FilterSpec::Mean { kernel_size: 5 },
            FilterSpec::Gaussian {
                kernel_size: 5,
                sigma: None,
            },
            FilterSpec::Median { kernel_size: 5 },
            FilterSpec::Bilateral {
                diameter: 9,
                sigma_color: 75.0,
                sigma_space: 75.0,
            },
            FilterSpec::Nlm {
                h: 10.0,
                h_color: 10.0,
                template_window: 7,
                search_window: 21,
            },
        ]
    }
}

fn check_odd_min3(k: usize) -> Result<()> {
    if k < 3 || k % 2 == 0 {
        Err(Error::InvalidKernel("size must be odd and >= 3"))
    } else {
        Ok(())
    }
}

/// Dispatches to the filter named by `spec`.
pub fn apply_filter(img: &Raster, spec: &FilterSpec) -> Result<Raster> {
    spec.validate()?;
    match *spec {
        FilterSpec::Mean { kernel_size } => mean_filter(img, kernel_size),
        FilterSpec::Gaussian { kernel_size, sigma } => gaussian_filter(img, kernel_size, sigma),
        FilterSpec::Median { kernel_size } => median_filter(img, kernel_size),
        FilterSpec::Bilateral {
            diameter,
            sigma_color,
            sigma_space,
        } => bilateral_filter(img, diameter, sigma_color, sigma_space),
        FilterSpec::Nlm {
            h,
            h_color,
            template_window,
            search_window,
        } => nlm_filter(img, h, h_color, template_window, search_window),
    }
}

/// Real-valued convolution kernel with odd dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    coefficients: Vec<f64>,
}

impl Kernel {
    pub fn new(width: usize, height: usize, coefficients: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || width % 2 == 0 || height % 2 == 0 {
            return Err(Error::InvalidKernel("dimensions must be odd"));
        }
        if coefficients.len() != width * height {
            return Err(Error::InvalidKernel("coefficient count mismatch"));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidKernel("coefficients must be finite"));
        }
        Ok(Kernel {
            width,
            height,
            coefficients,
        })
    }

    /// `k x k` averaging kernel (coefficients sum to 1).
    pub fn mean(k: usize) -> Result<Self> {
        check_odd_min3(k)?;
        Kernel::new(k, k, vec![1.0 / (k * k) as f64; k * k])
    }

    /// Separable Gaussian as a full 2-D kernel (outer product of the 1-D taps).
    pub fn gaussian(k: usize, sigma: Option<f64>) -> Result<Self> {
        let taps = gaussian_taps(k, sigma)?;
        let mut coefficients = Vec::with_capacity(k * k);
        for ty in &taps {
            for tx in &taps {
                coefficients.push(ty * tx);
            }
        }
        Kernel::new(k, k, coefficients)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

/// Kernel-size-derived sigma: `0.3 * ((k - 1) * 0.5 - 1) + 0.8`.
pub fn auto_sigma(k: usize) -> f64 {
    0.3 * ((k as f64 - 1.0) * 0.5 - 1.0) + 0.8
}

/// Normalized 1-D Gaussian taps `g(i) ∝ exp(-i^2 / 2σ^2)`.
pub fn gaussian_taps(k: usize, sigma: Option<f64>) -> Result<Vec<f64>> {
    check_odd_min3(k)?;
    let sigma = match sigma {
        Some(s) if s > 0.0 && s.is_finite() => s,
        Some(_) => return Err(Error::InvalidSigma),
        None => auto_sigma(k),
    };
    let r = (k / 2) as isize;
    let mut taps: Vec<f64> = (-r..=r)
        .map(|i| math::exp(-((i * i) as f64) / (2.0 * sigma * sigma)))
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    Ok(taps)
}

/// Convolution (correlation with the flipped kernel) under reflect-101
/// borders. Output dimensions equal input dimensions.
pub fn convolve2d(plane: &Plane, kernel: &Kernel) -> Result<Plane> {
    let (w, h) = (plane.width(), plane.height());
    let (kw, kh) = (kernel.width(), kernel.height());
    if kw > w || kh > h {
        return Err(Error::KernelTooLarge {
            kernel: (kw, kh),
            image: (w, h),
        });
    }
    let padded = pad_plane(plane, kw / 2, kh / 2);
    let pw = w + kw - 1;
    let mut out = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for j in 0..kh {
                let row = &padded[(y + kh - 1 - j) * pw + x..];
                let krow = &kernel.coefficients()[j * kw..(j + 1) * kw];
                for i in 0..kw {
                    acc += krow[i] * row[kw - 1 - i];
                }
            }
            out[y * w + x] = acc;
        }
    }
    Ok(Plane::from_raw(w, h, out))
}

fn pad_plane(plane: &Plane, rx: usize, ry: usize) -> Vec<f64> {
    let (w, h) = (plane.width(), plane.height());
    let (pw, ph) = (w + 2 * rx, h + 2 * ry);
    let mut padded = vec![0.0f64; pw * ph];
    for y in 0..ph {
        let sy = reflect101(y as isize - ry as isize, h);
        for x in 0..pw {
            let sx = reflect101(x as isize - rx as isize, w);
            padded[y * pw + x] = plane.get(sx, sy);
        }
    }
    padded
}

fn pad_bytes(src: &[u8], w: usize, h: usize, rx: usize, ry: usize) -> Vec<u8> {
    let (pw, ph) = (w + 2 * rx, h + 2 * ry);
    let mut padded = vec![0u8; pw * ph];
    for y in 0..ph {
        let sy = reflect101(y as isize - ry as isize, h);
        let src_row = &src[sy * w..(sy + 1) * w];
        let dst_row = &mut padded[y * pw..(y + 1) * pw];
        for x in 0..pw {
            dst_row[x] = src_row[reflect101(x as isize - rx as isize, w)];
        }
    }
    padded
}

fn check_fits(k: usize, img: &Raster) -> Result<()> {
    if k > img.width() || k > img.height() {
        return Err(Error::KernelTooLarge {
            kernel: (k, k),
            image: (img.width(), img.height()),
        });
    }
    Ok(())
}

/// `k x k` box average per channel (exact integer window sums).
pub fn mean_filter(img: &Raster, k: usize) -> Result<Raster> {
    check_odd_min3(k)?;
    check_fits(k, img)?;
    per_channel_bytes(img, |bytes, w, h| mean_channel(bytes, w, h, k))
}

fn mean_channel(src: &[u8], w: usize, h: usize, k: usize) -> Vec<u8> {
    let r = k / 2;
    let padded = pad_bytes(src, w, h, r, r);
    let pw = w + 2 * r;
    let area = (k * k) as f64;
    let mut out = vec![0u8; w * h];
    // column sums over the current k-row band
    let mut col_sums = vec![0u32; pw];
    for row in padded.chunks_exact(pw).take(k) {
        for (cs, &v) in col_sums.iter_mut().zip(row) {
            *cs += v as u32;
        }
    }
    for y in 0..h {
        let mut s: u32 = col_sums[..k].iter().sum();
        let out_row = &mut out[y * w..(y + 1) * w];
        for x in 0..w {
            out_row[x] = quantize_sample(s as f64 / area);
            if x + 1 < w {
                s = s + col_sums[x + k] - col_sums[x];
            }
        }
        if y + 1 < h {
            let drop = &padded[y * pw..(y + 1) * pw];
            let add = &padded[(y + k) * pw..(y + k + 1) * pw];
            for ((cs, &d), &a) in col_sums.iter_mut().zip(drop).zip(add) {
                *cs = *cs + a as u32 - d as u32;
            }
        }
    }
    out
}

/// Separable Gaussian blur of a plane (pre-quantization result).
pub fn gaussian_blur_plane(plane: &Plane, k: usize, sigma: Option<f64>) -> Result<Plane> {
    let taps = gaussian_taps(k, sigma)?;
    let (w, h) = (plane.width(), plane.height());
    if k > w || k > h {
        return Err(Error::KernelTooLarge {
            kernel: (k, k),
            image: (w, h),
        });
    }
    let r = k / 2;
    // horizontal pass
    let mut horiz = vec![0.0f64; w * h];
    let mut row_buf = vec![0.0f64; w + 2 * r];
    for y in 0..h {
        for (x, slot) in row_buf.iter_mut().enumerate() {
            *slot = plane.get(reflect101(x as isize - r as isize, w), y);
        }
        let out_row = &mut horiz[y * w..(y + 1) * w];
        for x in 0..w {
            let window = &row_buf[x..x + k];
            out_row[x] = taps.iter().zip(window).map(|(t, v)| t * v).sum();
        }
    }
    // vertical pass
    let mut out = vec![0.0f64; w * h];
    for y in 0..h {
        let out_row = &mut out[y * w..(y + 1) * w];
        for (j, tap) in taps.iter().enumerate() {
            let sy = reflect101(y as isize + j as isize - r as isize, h);
            let src_row = &horiz[sy * w..(sy + 1) * w];
            for (o, &v) in out_row.iter_mut().zip(src_row) {
                *o += tap * v;
            }
        }
    }
    Ok(Plane::from_raw(w, h, out))
}

/// Separable Gaussian filter per channel; `sigma = None` uses [`auto_sigma`].
pub fn gaussian_filter(img: &Raster, k: usize, sigma: Option<f64>) -> Result<Raster> {
    let mut planes = Vec::with_capacity(img.channels());
    for c in 0..img.channels() {
        planes.push(gaussian_blur_plane(&img.channel_plane(c), k, sigma)?);
    }
    Raster::from_planes(&planes, img.space())
}

/// Exact `k x k` median per channel (sliding histogram, identical to a
/// sort-per-window evaluation).
pub fn median_filter(img: &Raster, k: usize) -> Result<Raster> {
    check_odd_min3(k)?;
    check_fits(k, img)?;
    per_channel_bytes(img, |bytes, w, h| median_channel(bytes, w, h, k))
}

fn median_channel(src: &[u8], w: usize, h: usize, k: usize) -> Vec<u8> {
    let r = k / 2;
    let padded = pad_bytes(src, w, h, r, r);
    let pw = w + 2 * r;
    // 0-based rank of the median among k*k values
    let target = ((k * k) / 2) as u16;
    let mut out = vec![0u8; w * h];
    let mut hist = [0u16; 256];
    for y in 0..h {
        hist.fill(0);
        let rows: Vec<&[u8]> = (0..k)
            .map(|j| &padded[(y + j) * pw..(y + j + 1) * pw])
            .collect();
        for row in &rows {
            for &v in &row[..k] {
                hist[v as usize] += 1;
            }
        }
        // median m with (count below m) <= target < (count below or at m)
        let mut m: usize = 0;
        let mut below: u16 = 0;
        while below + hist[m] <= target {
            below += hist[m];
            m += 1;
        }
        let out_row = &mut out[y * w..(y + 1) * w];
        for x in 0..w {
            out_row[x] = m as u8;
            if x + 1 == w {
                break;
            }
            for row in &rows {
                let gone = row[x] as usize;
                hist[gone] -= 1;
                below -= (gone < m) as u16;
                let come = row[x + k] as usize;
                hist[come] += 1;
                below += (come < m) as u16;
            }
            while below > target {
                m -= 1;
                below -= hist[m];
            }
            while below + hist[m] <= target {
                below += hist[m];
                m += 1;
            }
        }
    }
    out
}

/// Edge-preserving bilateral filter.
///
/// Weights combine a spatial Gaussian over Euclidean pixel distance with a
/// range Gaussian over the L1 intensity distance summed across channels;
/// both are computed on the unfiltered input.
pub fn bilateral_filter(
    img: &Raster,
    diameter: usize,
    sigma_color: f64,
    sigma_space: f64,
) -> Result<Raster> {
    check_odd_min3(diameter)?;
    if !(sigma_color > 0.0 && sigma_space > 0.0)
        || !sigma_color.is_finite()
        || !sigma_space.is_finite()
    {
        return Err(Error::InvalidSigma);
    }
    check_fits(diameter, img)?;
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let r = diameter / 2;
    let pw = w + 2 * r;
    let padded: Vec<Vec<u8>> = (0..ch)
        .map(|c| pad_bytes(&img.channel_bytes(c), w, h, r, r))
        .collect();

    let mut spatial = vec![0.0f64; diameter * diameter];
    for dy in 0..diameter {
        for dx in 0..diameter {
            let ddx = dx as f64 - r as f64;
            let ddy = dy as f64 - r as f64;
            spatial[dy * diameter + dx] =
                math::exp(-(ddx * ddx + ddy * ddy) / (2.0 * sigma_space * sigma_space));
        }
    }
    let mut range = vec![0.0f64; 255 * ch + 1];
    for (d, slot) in range.iter_mut().enumerate() {
        let d = d as f64;
        *slot = math::exp(-(d * d) / (2.0 * sigma_color * sigma_color));
    }

    let mut channels: Vec<Vec<u8>> = vec![vec![0u8; w * h]; ch];
    let mut center = [0i32; 3];
    let mut acc = [0.0f64; 3];
    for y in 0..h {
        for x in 0..w {
            let c_idx = (y + r) * pw + (x + r);
            for c in 0..ch {
                center[c] = padded[c][c_idx] as i32;
            }
            acc[..ch].fill(0.0);
            let mut weight_sum = 0.0f64;
            for dy in 0..diameter {
                let row_base = (y + dy) * pw + x;
                let spatial_row = &spatial[dy * diameter..(dy + 1) * diameter];
                for dx in 0..diameter {
                    let idx = row_base + dx;
                    let mut dist = 0i32;
                    for c in 0..ch {
                        dist += (padded[c][idx] as i32 - center[c]).abs();
                    }
                    let wgt = spatial_row[dx] * range[dist as usize];
                    weight_sum += wgt;
                    for c in 0..ch {
                        acc[c] += wgt * padded[c][idx] as f64;
                    }
                }
            }
            for c in 0..ch {
                channels[c][y * w + x] = quantize_sample(acc[c] / weight_sum);
            }
        }
    }
    Raster::from_channel_bytes(w, h, img.space(), &channels)
}

/// Non-local means on a luma/chroma decomposition.
///
/// Color images are converted with [`to_luma_chroma`]; the luma plane is
/// filtered with strength `h` and each chroma plane with `h_color`, each
/// using its own patch distances. `w(p,q) = exp(-D2/s^2)` where `D2` is the
/// mean squared difference of the two template patches.
pub fn nlm_filter(
    img: &Raster,
    h: f64,
    h_color: f64,
    template_window: usize,
    search_window: usize,
) -> Result<Raster> {
    let spec = FilterSpec::Nlm {
        h,
        h_color,
        template_window,
        search_window,
    };
    spec.validate()?;
    let (w, ht) = (img.width(), img.height());
    match img.space() {
        ColorSpace::Gray => {
            let out = nlm_plane(img.samples(), w, ht, h, template_window, search_window);
            Raster::from_channel_bytes(w, ht, ColorSpace::Gray, &[quantize_vec(&out)])
        }
        ColorSpace::Srgb | ColorSpace::LumaChroma => {
            let ycc = if img.space() == ColorSpace::Srgb {
                to_luma_chroma(img)?
            } else {
                img.clone()
            };
            let mut channels = Vec::with_capacity(3);
            for c in 0..3 {
                let strength = if c == 0 { h } else { h_color };
                let plane = ycc.channel_bytes(c);
                let out = nlm_plane(&plane, w, ht, strength, template_window, search_window);
                channels.push(quantize_vec(&out));
            }
            let filtered =
                Raster::from_channel_bytes(w, ht, ColorSpace::LumaChroma, &channels)?;
            if img.space() == ColorSpace::Srgb {
                from_luma_chroma(&filtered)
            } else {
                Ok(filtered)
            }
        }
    }
}

fn quantize_vec(values: &[f64]) -> Vec<u8> {
    values.iter().map(|&v| quantize_sample(v)).collect()
}

/// NLM on one plane. Patch SSDs are exact integers accumulated by sliding
/// box sums; weights come from `w = q^SSD` with `q = exp(-1/(t^2 s^2))`,
/// evaluated through three 256-entry tables on the SSD bytes.
fn nlm_plane(
    src: &[u8],
    w: usize,
    h: usize,
    strength: f64,
    template_window: usize,
    search_window: usize,
) -> Vec<f64> {
    let tr = template_window / 2;
    let sr = search_window / 2;
    let pad = tr + sr;
    let padded = pad_bytes(src, w, h, pad, pad);
    let pw = w + 2 * pad;

    // w(SSD) = exp(-SSD / (t^2 s^2)), split over the three SSD bytes.
    let denom = (template_window * template_window) as f64 * strength * strength;
    let mut t0 = [0.0f64; 256];
    let mut t1 = [0.0f64; 256];
    let mut t2 = [0.0f64; 256];
    for i in 0..256 {
        t0[i] = math::exp(-(i as f64) / denom);
        t1[i] = math::exp(-(i as f64) * 256.0 / denom);
        t2[i] = math::exp(-(i as f64) * 65536.0 / denom);
    }

    let dw = w + 2 * tr; // width of the squared-difference region
    let dh = h + 2 * tr;
    let mut diff_sq = vec![0u32; dw * dh];
    let mut hsum = vec![0u32; w * dh];
    let mut num = vec![0.0f64; w * h];
    let mut den = vec![0.0f64; w * h];
    let mut vsum = vec![0u32; w];

    let t = template_window;
    for dy in -(sr as isize)..=(sr as isize) {
        for dx in -(sr as isize)..=(sr as isize) {
            // squared differences between the plane and its (dx, dy) shift
            let base = (pad - tr) * pw + (pad - tr);
            let shift = dy * pw as isize + dx;
            for j in 0..dh {
                let a0 = base + j * pw;
                let b0 = (a0 as isize + shift) as usize;
                let a = &padded[a0..a0 + dw];
                let b = &padded[b0..b0 + dw];
                let row = &mut diff_sq[j * dw..(j + 1) * dw];
                for i in 0..dw {
                    let d = a[i] as i32 - b[i] as i32;
                    row[i] = (d * d) as u32;
                }
            }
            // horizontal box sums of width t
            for j in 0..dh {
                let row = &diff_sq[j * dw..(j + 1) * dw];
                let out_row = &mut hsum[j * w..(j + 1) * w];
                let mut s: u32 = row[..t].iter().sum();
                for x in 0..w {
                    out_row[x] = s;
                    if x + 1 < w {
                        s = s + row[x + t] - row[x];
                    }
                }
            }
            // vertical box sums fused with weight accumulation
            vsum.fill(0);
            for j in 0..t {
                for (v, &hv) in vsum.iter_mut().zip(&hsum[j * w..(j + 1) * w]) {
                    *v += hv;
                }
            }
            for y in 0..h {
                let my = ((y + pad) as isize + dy) as usize;
                let mx = (pad as isize + dx) as usize;
                let moved_row = &padded[my * pw + mx..my * pw + mx + w];
                let num_row = &mut num[y * w..(y + 1) * w];
                let den_row = &mut den[y * w..(y + 1) * w];
                for x in 0..w {
                    let ssd = vsum[x];
                    let wgt = t0[(ssd & 255) as usize]
                        * t1[((ssd >> 8) & 255) as usize]
                        * t2[(ssd >> 16) as usize];
                    num_row[x] += wgt * moved_row[x] as f64;
                    den_row[x] += wgt;
                }
                if y + 1 < h {
                    let drop = &hsum[y * w..(y + 1) * w];
                    let add = &hsum[(y + t) * w..(y + t + 1) * w];
                    for ((v, &d), &a) in vsum.iter_mut().zip(drop).zip(add) {
                        *v = *v + a - d;
                    }
                }
            }
        }
    }
    num.iter().zip(&den).map(|(&n, &d)| n / d).collect()
}

fn per_channel_bytes(
    img: &Raster,
    f: impl Fn(&[u8], usize, usize) -> Vec<u8>,
) -> Result<Raster> {
    let (w, h) = (img.width(), img.height());
    let channels: Vec<Vec<u8>> = (0..img.channels())
        .map(|c| f(&img.channel_bytes(c), w, h))
        .collect();
    Raster::from_channel_bytes(w, h, img.space(), &channels)
}
