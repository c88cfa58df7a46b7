//! Full-reference quality metrics: MSE, SSIM, PSNR, NRMSE, NMI.
//!
//! All metrics promote 8-bit samples to f64 and are computed from exact
//! integer sums where possible, so results are deterministic and match
//! their definitional oracles to floating-point precision.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::raster::Raster;

/// Metric parameters (window sizes, stabilizers, histogram bins).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct MetricConfig {
    pub data_range: f64,
    pub ssim_window: usize,
    pub ssim_k1: f64,
    pub ssim_k2: f64,
    pub nmi_bins: usize,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            data_range: 255.0,
            ssim_window: 7,
            ssim_k1: 0.01,
            ssim_k2: 0.03,
            nmi_bins: 100,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.data_range > 0.0) {
            return Err(Error::InvalidNoiseParams("data_range must be > 0"));
        }
        if self.ssim_window < 3 || self.ssim_window % 2 == 0 {
            return Err(Error::InvalidWindow("ssim window must be odd and >= 3"));
        }
        if !(self.ssim_k1 > 0.0 && self.ssim_k2 > 0.0) {
            return Err(Error::InvalidNoiseParams("ssim stabilizers must be > 0"));
        }
        if self.nmi_bins < 2 {
            return Err(Error::InvalidNoiseParams("nmi_bins must be >= 2"));
        }
        Ok(())
    }
}

/// The five per-image scores against a reference image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricVector {
    pub mse: f64,
    pub ssim: f64,
    /// Decibels; `+inf` exactly when `mse == 0`.
    pub psnr: f64,
    pub nrmse: f64,
    pub nmi: f64,
}

fn check_shapes(reference: &Raster, test: &Raster) -> Result<()> {
    let left = (reference.width(), reference.height(), reference.channels());
    let right = (test.width(), test.height(), test.channels());
    if left != right {
        return Err(Error::ShapeMismatch { left, right });
    }
    Ok(())
}

/// Mean squared difference over all samples (channels jointly).
pub fn mse(reference: &Raster, test: &Raster) -> Result<f64> {
    check_shapes(reference, test)?;
    let sum: f64 = reference
        .samples()
        .iter()
        .zip(test.samples())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    Ok(sum / reference.samples().len() as f64)
}

/// Peak signal-to-noise ratio in decibels; `+inf` for identical images.
pub fn psnr(reference: &Raster, test: &Raster, cfg: &MetricConfig) -> Result<f64> {
    let err = mse(reference, test)?;
    Ok(psnr_from_mse(err, cfg.data_range))
}

pub fn psnr_from_mse(mse: f64, data_range: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * math::log10(data_range * data_range / mse)
    }
}

/// Mean structural similarity over all fully-contained windows, averaged
/// across channels. Uniform window, unbiased (N-1) variance normalization.
pub fn ssim(reference: &Raster, test: &Raster, cfg: &MetricConfig) -> Result<f64> {
    check_shapes(reference, test)?;
    cfg.validate()?;
    let (w, h) = (reference.width(), reference.height());
    let win = cfg.ssim_window;
    if w < win || h < win {
        return Err(Error::ImageTooSmall {
            window: win,
            image: (w, h),
        });
    }
    let c1 = (cfg.ssim_k1 * cfg.data_range) * (cfg.ssim_k1 * cfg.data_range);
    let c2 = (cfg.ssim_k2 * cfg.data_range) * (cfg.ssim_k2 * cfg.data_range);
    let n = (win * win) as f64;
    let norm = n / (n - 1.0); // unbiased correction applied to mean-of-squares

    let mut total = 0.0;
    for c in 0..reference.channels() {
        let x = reference.channel_bytes(c);
        let y = test.channel_bytes(c);
        // integral images of x, y, x^2, y^2, xy (exact in u64)
        let sat_x = integral(&x, &[], w, h, IntegralKind::Value);
        let sat_y = integral(&y, &[], w, h, IntegralKind::Value);
        let sat_xx = integral(&x, &[], w, h, IntegralKind::Square);
        let sat_yy = integral(&y, &[], w, h, IntegralKind::Square);
        let sat_xy = integral(&x, &y, w, h, IntegralKind::Product);

        let mut acc = 0.0;
        let positions = ((w - win + 1) * (h - win + 1)) as f64;
        for wy in 0..=(h - win) {
            for wx in 0..=(w - win) {
                let sx = window_sum(&sat_x, w, wx, wy, win) as f64;
                let sy = window_sum(&sat_y, w, wx, wy, win) as f64;
                let sxx = window_sum(&sat_xx, w, wx, wy, win) as f64;
                let syy = window_sum(&sat_yy, w, wx, wy, win) as f64;
                let sxy = window_sum(&sat_xy, w, wx, wy, win) as f64;
                let ux = sx / n;
                let uy = sy / n;
                let vx = (sxx / n - ux * ux) * norm;
                let vy = (syy / n - uy * uy) * norm;
                let cov = (sxy / n - ux * uy) * norm;
                let score = ((2.0 * ux * uy + c1) * (2.0 * cov + c2))
                    / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
                acc += score;
            }
        }
        total += acc / positions;
    }
    Ok(total / reference.channels() as f64)
}

enum IntegralKind {
    Value,
    Square,
    Product,
}

/// (w+1) x (h+1) summed-area table; exact for 8-bit inputs.
fn integral(a: &[u8], b: &[u8], w: usize, h: usize, kind: IntegralKind) -> Vec<u64> {
    let stride = w + 1;
    let mut sat = vec![0u64; stride * (h + 1)];
    for y in 0..h {
        let mut row_sum = 0u64;
        for x in 0..w {
            let v = match kind {
                IntegralKind::Value => a[y * w + x] as u64,
                IntegralKind::Square => {
                    let v = a[y * w + x] as u64;
                    v * v
                }
                IntegralKind::Product => a[y * w + x] as u64 * b[y * w + x] as u64,
            };
            row_sum += v;
            sat[(y + 1) * stride + x + 1] = sat[y * stride + x + 1] + row_sum;
        }
    }
    sat
}

#[inline]
fn window_sum(sat: &[u64], w: usize, x: usize, y: usize, win: usize) -> u64 {
    let stride = w + 1;
    let (x1, y1) = (x + win, y + win);
    sat[y1 * stride + x1] + sat[y * stride + x] - sat[y * stride + x1] - sat[y1 * stride + x]
}

/// Root-mean-square error normalized by the reference's root-mean-square
/// intensity (Euclidean normalization). Asymmetric by construction.
pub fn nrmse(reference: &Raster, test: &Raster) -> Result<f64> {
    let err = mse(reference, test)?;
    let ref_power: f64 = reference
        .samples()
        .iter()
        .map(|&v| v as f64 * v as f64)
        .sum::<f64>()
        / reference.samples().len() as f64;
    if ref_power == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(math::sqrt(err) / math::sqrt(ref_power))
}

/// Normalized mutual information `(H(ref) + H(test)) / H(ref, test)` over a
/// joint intensity histogram with equal-width bins spanning [0, 255].
/// 1 for independent images, 2 for identical non-constant images.
pub fn nmi(reference: &Raster, test: &Raster, cfg: &MetricConfig) -> Result<f64> {
    check_shapes(reference, test)?;
    cfg.validate()?;
    let bins = cfg.nmi_bins;
    let mut joint = vec![0u64; bins * bins];
    for (&a, &b) in reference.samples().iter().zip(test.samples()) {
        let ia = a as usize * bins / 256;
        let ib = b as usize * bins / 256;
        joint[ia * bins + ib] += 1;
    }
    let total = reference.samples().len() as f64;
    let mut h_ref = 0.0;
    let mut h_test = 0.0;
    let mut h_joint = 0.0;
    let mut row_sums = vec![0u64; bins];
    let mut col_sums = vec![0u64; bins];
    for ia in 0..bins {
        for ib in 0..bins {
            let c = joint[ia * bins + ib];
            if c > 0 {
                row_sums[ia] += c;
                col_sums[ib] += c;
                let p = c as f64 / total;
                h_joint -= p * math::ln(p);
            }
        }
    }
    for &c in row_sums.iter().filter(|&&c| c > 0) {
        let p = c as f64 / total;
        h_ref -= p * math::ln(p);
    }
    for &c in col_sums.iter().filter(|&&c| c > 0) {
        let p = c as f64 / total;
        h_test -= p * math::ln(p);
    }
    if h_joint == 0.0 {
        // both images constant: no information in either marginal
        return Ok(1.0);
    }
    Ok((h_ref + h_test) / h_joint)
}

/// All five metrics with a single shape check.
pub fn evaluate(reference: &Raster, test: &Raster, cfg: &MetricConfig) -> Result<MetricVector> {
    check_shapes(reference, test)?;
    let mse_v = mse(reference, test)?;
    Ok(MetricVector {
        mse: mse_v,
        ssim: ssim(reference, test, cfg)?,
        psnr: psnr_from_mse(mse_v, cfg.data_range),
        nrmse: nrmse(reference, test)?,
        nmi: nmi(reference, test, cfg)?,
    })
}
