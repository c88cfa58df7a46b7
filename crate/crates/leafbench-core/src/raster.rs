//! 8-bit raster images and real-valued working planes.
//!
//! A [`Raster`] is the unit of pipeline I/O: row-major interleaved 8-bit
//! samples with a color-space tag. Filtering happens on [`Plane`]s in real
//! precision; [`quantize`] rounds back to 8 bits exactly once per stage.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Color space tag carried by every raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorSpace {
    /// 3-channel gamma-encoded RGB.
    Srgb,
    /// Single intensity channel.
    Gray,
    /// BT.601 full-range Y/Cb/Cr produced by [`to_luma_chroma`].
    LumaChroma,
}

/// Row-major interleaved 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    channels: usize,
    space: ColorSpace,
    samples: Vec<u8>,
}

impl Raster {
    /// Builds a raster, validating the shape invariants: positive dimensions,
    /// 1 or 3 channels matching the color space, and a full sample buffer.
    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        space: ColorSpace,
        samples: Vec<u8>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimension { width, height });
        }
        let space_channels = match space {
            ColorSpace::Gray => 1,
            ColorSpace::Srgb | ColorSpace::LumaChroma => 3,
        };
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidChannelCount(channels));
        }
        if channels != space_channels {
            return Err(Error::WrongColorSpace);
        }
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(Error::BufferSizeMismatch {
                expected,
                actual: samples.len(),
            });
        }
        Ok(Raster {
            width,
            height,
            channels,
            space,
            samples,
        })
    }

    /// Constant-valued raster.
    pub fn filled(width: usize, height: usize, space: ColorSpace, value: u8) -> Result<Self> {
        let channels = match space {
            ColorSpace::Gray => 1,
            _ => 3,
        };
        Raster::new(
            width,
            height,
            channels,
            space,
            vec![value; width * height * channels],
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    /// Sample at `(x, y)` in channel `c`.
    #[inline]
    pub fn sample(&self, x: usize, y: usize, c: usize) -> u8 {
        self.samples[(y * self.width + x) * self.channels + c]
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    /// Extracts channel `c` as a real-valued plane.
    pub fn channel_plane(&self, c: usize) -> Plane {
        let mut samples = Vec::with_capacity(self.width * self.height);
        samples.extend(
            self.samples[c..]
                .iter()
                .step_by(self.channels)
                .map(|&v| v as f64),
        );
        Plane::from_raw(self.width, self.height, samples)
    }

    /// Extracts channel `c` as raw bytes (planar).
    pub(crate) fn channel_bytes(&self, c: usize) -> Vec<u8> {
        self.samples[c..]
            .iter()
            .step_by(self.channels)
            .copied()
            .collect()
    }

    /// Reassembles an interleaved raster from planar channel buffers.
    pub(crate) fn from_channel_bytes(
        width: usize,
        height: usize,
        space: ColorSpace,
        planes: &[Vec<u8>],
    ) -> Result<Self> {
        let channels = planes.len();
        let mut samples = vec![0u8; width * height * channels];
        for (c, plane) in planes.iter().enumerate() {
            for (i, &v) in plane.iter().enumerate() {
                samples[i * channels + c] = v;
            }
        }
        Raster::new(width, height, channels, space, samples)
    }

    /// Quantizes one plane per channel back into an interleaved raster.
    pub fn from_planes(planes: &[Plane], space: ColorSpace) -> Result<Self> {
        let first = planes.first().ok_or(Error::InvalidChannelCount(0))?;
        let (width, height) = (first.width(), first.height());
        let bytes: Vec<Vec<u8>> = planes
            .iter()
            .map(|p| p.samples().iter().map(|&v| quantize_sample(v)).collect())
            .collect();
        Raster::from_channel_bytes(width, height, space, &bytes)
    }
}

/// Real-valued working buffer for filtering before quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl Plane {
    /// Builds a plane, rejecting NaN/infinite samples and shape mismatches.
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimension { width, height });
        }
        if samples.len() != width * height {
            return Err(Error::BufferSizeMismatch {
                expected: width * height,
                actual: samples.len(),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample);
        }
        Ok(Plane {
            width,
            height,
            samples,
        })
    }

    /// Internal constructor for buffers already known to be finite.
    pub(crate) fn from_raw(width: usize, height: usize, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), width * height);
        Plane {
            width,
            height,
            samples,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }
}

/// Rounds to nearest integer (ties away from zero) and clips to `[0, 255]`.
#[inline]
pub fn quantize_sample(v: f64) -> u8 {
    let r = math::round(v);
    if r <= 0.0 {
        0
    } else if r >= 255.0 {
        255
    } else {
        r as u8
    }
}

/// Quantizes a plane into a gray raster.
pub fn quantize(plane: &Plane) -> Raster {
    let samples = plane.samples().iter().map(|&v| quantize_sample(v)).collect();
    Raster::new(
        plane.width(),
        plane.height(),
        1,
        ColorSpace::Gray,
        samples,
    )
    .expect("plane dimensions are valid raster dimensions")
}

/// Bilinear resize with half-pixel-center alignment.
///
/// Output samples are rounded to nearest (ties away from zero) and clipped.
pub fn resize_bilinear(img: &Raster, width: usize, height: usize) -> Result<Raster> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimension { width, height });
    }
    let (sw, sh, ch) = (img.width(), img.height(), img.channels());
    let sx_scale = sw as f64 / width as f64;
    let sy_scale = sh as f64 / height as f64;
    let mut samples = vec![0u8; width * height * ch];
    for dy in 0..height {
        let sy = (dy as f64 + 0.5) * sy_scale - 0.5;
        let y0 = math::floor(sy);
        let ty = sy - y0;
        let y0i = clamp_index(y0, sh);
        let y1i = clamp_index(y0 + 1.0, sh);
        for dx in 0..width {
            let sx = (dx as f64 + 0.5) * sx_scale - 0.5;
            let x0 = math::floor(sx);
            let tx = sx - x0;
            let x0i = clamp_index(x0, sw);
            let x1i = clamp_index(x0 + 1.0, sw);
            for c in 0..ch {
                let v00 = img.sample(x0i, y0i, c) as f64;
                let v10 = img.sample(x1i, y0i, c) as f64;
                let v01 = img.sample(x0i, y1i, c) as f64;
                let v11 = img.sample(x1i, y1i, c) as f64;
                let top = v00 + (v10 - v00) * tx;
                let bottom = v01 + (v11 - v01) * tx;
                samples[(dy * width + dx) * ch + c] = quantize_sample(top + (bottom - top) * ty);
            }
        }
    }
    Raster::new(width, height, ch, img.space(), samples)
}

#[inline]
fn clamp_index(v: f64, n: usize) -> usize {
    if v <= 0.0 {
        0
    } else if v >= (n - 1) as f64 {
        n - 1
    } else {
        v as usize
    }
}

/// BT.601 full-range RGB -> Y/Cb/Cr with chroma offset 128.
///
/// Inverse of [`from_luma_chroma`] up to one intensity level per sample.
pub fn to_luma_chroma(img: &Raster) -> Result<Raster> {
    if img.space() != ColorSpace::Srgb {
        return Err(Error::WrongColorSpace);
    }
    let mut samples = Vec::with_capacity(img.samples().len());
    for px in img.samples().chunks_exact(3) {
        let (r, g, b) = (px[0] as f64, px[1] as f64, px[2] as f64);
        samples.push(quantize_sample(0.299 * r + 0.587 * g + 0.114 * b));
        samples.push(quantize_sample(128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b));
        samples.push(quantize_sample(128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b));
    }
    Raster::new(
        img.width(),
        img.height(),
        3,
        ColorSpace::LumaChroma,
        samples,
    )
}

/// Inverts [`to_luma_chroma`].
pub fn from_luma_chroma(img: &Raster) -> Result<Raster> {
    if img.space() != ColorSpace::LumaChroma {
        return Err(Error::WrongColorSpace);
    }
    let mut samples = Vec::with_capacity(img.samples().len());
    for px in img.samples().chunks_exact(3) {
        let y = px[0] as f64;
        let cb = px[1] as f64 - 128.0;
        let cr = px[2] as f64 - 128.0;
        samples.push(quantize_sample(y + 1.402 * cr));
        samples.push(quantize_sample(y - 0.344136 * cb - 0.714136 * cr));
        samples.push(quantize_sample(y + 1.772 * cb));
    }
    Raster::new(img.width(), img.height(), 3, ColorSpace::Srgb, samples)
}

/// Reflect-101 index fold: `..., p2, p1 | p0, p1, p2, ... | pn-2, ...`
/// (the border pixel itself is not repeated). Total for any `i`.
#[inline]
pub(crate) fn reflect101(i: isize, n: usize) -> usize {
    debug_assert!(n > 0);
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut m = i % period;
    if m < 0 {
        m += period;
    }
    if m >= n as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_rules() {
        assert_eq!(quantize_sample(10.2), 10);
        assert_eq!(quantize_sample(-3.7), 0);
        assert_eq!(quantize_sample(260.0), 255);
        assert_eq!(quantize_sample(127.5), 128);
        assert_eq!(quantize_sample(126.5), 127);
    }

    #[test]
    fn raster_invariants() {
        assert!(Raster::new(0, 4, 1, ColorSpace::Gray, vec![]).is_err());
        assert!(Raster::new(2, 2, 1, ColorSpace::Srgb, vec![0; 4]).is_err());
        assert!(Raster::new(2, 2, 3, ColorSpace::Srgb, vec![0; 4]).is_err());
        assert!(Raster::new(2, 2, 3, ColorSpace::Srgb, vec![0; 12]).is_ok());
    }

    #[test]
    fn plane_rejects_non_finite() {
        assert_eq!(
            Plane::new(2, 1, vec![1.0, f64::NAN]).unwrap_err(),
            Error::NonFiniteSample
        );
    }

    #[test]
    fn resize_constant_stays_constant() {
        let img = Raster::filled(7, 5, ColorSpace::Srgb, 100).unwrap();
        let out = resize_bilinear(&img, 12, 3).unwrap();
        assert!(out.samples().iter().all(|&v| v == 100));
    }

    #[test]
    fn resize_identity_is_exact() {
        let samples: Vec<u8> = (0..60).map(|i| (i * 7 % 256) as u8).collect();
        let img = Raster::new(5, 4, 3, ColorSpace::Srgb, samples).unwrap();
        let out = resize_bilinear(&img, 5, 4).unwrap();
        assert_eq!(img, out);
    }

    #[test]
    fn resize_2x1_to_4x1_matches_hand_weights() {
        // Source centers at x = 0.5, 1.5 (scale 0.5): dst x=0 -> sx = -0.25,
        // dst x=1 -> 0.25, dst x=2 -> 0.75, dst x=3 -> 1.25.
        let img = Raster::new(2, 1, 1, ColorSpace::Gray, vec![0, 255]).unwrap();
        let out = resize_bilinear(&img, 4, 1).unwrap();
        // sx=-0.25 clamps to v0; 0.25 -> 0.25*255 = 63.75 -> 64;
        // 0.75 -> 191.25 -> 191; 1.25 clamps to v1.
        assert_eq!(out.samples(), &[0, 64, 191, 255]);
    }

    #[test]
    fn resize_zero_dims_rejected() {
        let img = Raster::filled(2, 2, ColorSpace::Gray, 0).unwrap();
        assert!(matches!(
            resize_bilinear(&img, 0, 4),
            Err(Error::InvalidDimension { .. })
        ));
    }

    #[test]
    fn luma_chroma_achromatic_fixed_point() {
        for v in [0u8, 1, 77, 128, 254, 255] {
            let img = Raster::filled(2, 2, ColorSpace::Srgb, v).unwrap();
            let ycc = to_luma_chroma(&img).unwrap();
            for px in ycc.samples().chunks_exact(3) {
                assert_eq!(px[0], v);
                assert_eq!(px[1], 128);
                assert_eq!(px[2], 128);
            }
        }
    }

    #[test]
    fn luma_of_pure_red() {
        let img = Raster::new(1, 1, 3, ColorSpace::Srgb, vec![255, 0, 0]).unwrap();
        let ycc = to_luma_chroma(&img).unwrap();
        assert_eq!(ycc.samples()[0], 76); // round(0.299 * 255)
    }

    #[test]
    fn luma_chroma_round_trip_within_one_level() {
        // All achromatic values plus a deterministic spread of RGB triples.
        let mut rgb = Vec::new();
        for v in 0..=255u8 {
            rgb.extend([v, v, v]);
        }
        let mut state = 0x9E3779B97F4A7C15u64;
        for _ in 0..10_000 {
            for _ in 0..3 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                rgb.push((state >> 56) as u8);
            }
        }
        let n = rgb.len() / 3;
        let img = Raster::new(n, 1, 3, ColorSpace::Srgb, rgb.clone()).unwrap();
        let back = from_luma_chroma(&to_luma_chroma(&img).unwrap()).unwrap();
        for (a, b) in rgb.iter().zip(back.samples()) {
            assert!(
                (*a as i16 - *b as i16).abs() <= 1,
                "round trip moved {a} to {b}"
            );
        }
    }

    #[test]
    fn luma_chroma_wrong_space() {
        let gray = Raster::filled(2, 2, ColorSpace::Gray, 9).unwrap();
        assert_eq!(to_luma_chroma(&gray).unwrap_err(), Error::WrongColorSpace);
    }

    #[test]
    fn reflect101_folds() {
        // n = 5: ... 2 1 | 0 1 2 3 4 | 3 2 ...
        assert_eq!(reflect101(-1, 5), 1);
        assert_eq!(reflect101(-2, 5), 2);
        assert_eq!(reflect101(0, 5), 0);
        assert_eq!(reflect101(4, 5), 4);
        assert_eq!(reflect101(5, 5), 3);
        assert_eq!(reflect101(6, 5), 2);
        // long folds stay in range and keep the period
        for i in -40..40 {
            let r = reflect101(i, 5);
            assert!(r < 5);
            assert_eq!(r, reflect101(i + 8, 5));
        }
        assert_eq!(reflect101(-7, 1), 0);
        // n = 2: period 2 -> alternates
        assert_eq!(reflect101(-1, 2), 1);
        assert_eq!(reflect101(2, 2), 0);
    }

    #[test]
    fn resize_preserves_bounds() {
        let samples: Vec<u8> = (0..48).map(|i| 40 + (i * 11 % 150) as u8).collect();
        let img = Raster::new(8, 6, 1, ColorSpace::Gray, samples.clone()).unwrap();
        let lo = *samples.iter().min().unwrap();
        let hi = *samples.iter().max().unwrap();
        let out = resize_bilinear(&img, 13, 9).unwrap();
        for &v in out.samples() {
            assert!(v as i16 >= lo as i16 - 1 && v as i16 <= hi as i16 + 1);
        }
    }
}
