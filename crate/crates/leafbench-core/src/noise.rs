//! Seeded noise injectors: Gaussian, salt-and-pepper, speckle, and uniform.
//!
//! Noise is added in real precision and quantized once; clipping to
//! `[0, 255]` is part of quantization. Identical `(image, spec, index)`
//! inputs produce bit-identical outputs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::raster::{quantize_sample, Raster};
use crate::rng::NoiseStream;

/// Noise model tag, used for records and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NoiseKind {
    Gaussian,
    SaltPepper,
    Speckle,
    Uniform,
}

impl NoiseKind {
    pub fn label(&self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::SaltPepper => "salt_pepper",
            NoiseKind::Speckle => "speckle",
            NoiseKind::Uniform => "uniform",
        }
    }
}

/// Noise model with its parameters.
///
/// Gaussian and speckle variances are on the normalized [0, 1] intensity
/// scale (`var = 0.01` means a 25.5-level sigma); uniform offsets are on the
/// 0-255 scale.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum NoiseModel {
    Gaussian { mean: f64, variance: f64 },
    SaltPepper { amount: f64 },
    Speckle { variance: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl NoiseModel {
    pub fn kind(&self) -> NoiseKind {
        match self {
            NoiseModel::Gaussian { .. } => NoiseKind::Gaussian,
            NoiseModel::SaltPepper { .. } => NoiseKind::SaltPepper,
            NoiseModel::Speckle { .. } => NoiseKind::Speckle,
            NoiseModel::Uniform { .. } => NoiseKind::Uniform,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Gaussian { variance, .. } | NoiseModel::Speckle { variance } => {
                if variance < 0.0 || !variance.is_finite() {
                    return Err(Error::InvalidNoiseParams("variance must be >= 0"));
                }
            }
            NoiseModel::SaltPepper { amount } => {
                if !(0.0..=1.0).contains(&amount) {
                    return Err(Error::InvalidNoiseParams("amount must be in [0, 1]"));
                }
            }
            NoiseModel::Uniform { lo, hi } => {
                if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::InvalidNoiseParams("requires lo <= hi"));
                }
            }
        }
        Ok(())
    }

    /// The four models of the study with their benchmark parameters.
    pub fn standard_set() -> [NoiseModel; 4] {
        [
            NoiseModel::Gaussian {
                mean: 0.0,
                variance: 0.01,
            },
            NoiseModel::SaltPepper { amount: 0.05 },
            NoiseModel::Speckle { variance: 0.01 },
            NoiseModel::Uniform { lo: -20.0, hi: 20.0 },
        ]
    }
}

/// A noise model plus the seed that fully determines its realizations.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseSpec {
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub model: NoiseModel,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(model: NoiseModel, seed: u64) -> Self {
        NoiseSpec { model, seed }
    }

    pub fn kind(&self) -> NoiseKind {
        self.model.kind()
    }

    /// Random stream for one image of a corpus: `SplitMix64(seed XOR index)`
    /// expanded into xoshiro256++.
    pub fn stream_for(&self, image_index: u64) -> NoiseStream {
        NoiseStream::derive(self.seed, image_index)
    }

    /// Injects this noise into `img` using the stream for `image_index`.
    pub fn inject(&self, img: &Raster, image_index: u64) -> Result<Raster> {
        self.model.validate()?;
        let mut stream = self.stream_for(image_index);
        Ok(match *self {
            NoiseSpec {
                model: NoiseModel::Gaussian { mean, variance },
                ..
            } => add_gaussian(img, mean, variance, &mut stream),
            NoiseSpec {
                model: NoiseModel::SaltPepper { amount },
                ..
            } => add_salt_pepper(img, amount, &mut stream),
            NoiseSpec {
                model: NoiseModel::Speckle { variance },
                ..
            } => add_speckle(img, variance, &mut stream),
            NoiseSpec {
                model: NoiseModel::Uniform { lo, hi },
                ..
            } => add_uniform(img, lo, hi, &mut stream),
        })
    }
}

/// Adds `255 * N(mean, sqrt(variance))` to every sample independently.
pub fn add_gaussian(img: &Raster, mean: f64, variance: f64, stream: &mut NoiseStream) -> Raster {
    let sigma = math::sqrt(variance);
    map_samples(img, |v| {
        v + 255.0 * (mean + sigma * stream.next_gaussian())
    })
}

/// Flips each pixel (all channels together) to 0 or 255 with probability
/// `amount`; unselected pixels are untouched.
pub fn add_salt_pepper(img: &Raster, amount: f64, stream: &mut NoiseStream) -> Raster {
    let ch = img.channels();
    let mut samples = img.samples().to_vec();
    for px in samples.chunks_exact_mut(ch) {
        if stream.next_unit() < amount {
            let value = if stream.next_unit() < 0.5 { 255 } else { 0 };
            px.fill(value);
        }
    }
    Raster::new(img.width(), img.height(), ch, img.space(), samples)
        .expect("shape unchanged")
}

/// Multiplicative noise: `out = I + I * N(0, sqrt(variance))` per sample.
pub fn add_speckle(img: &Raster, variance: f64, stream: &mut NoiseStream) -> Raster {
    let sigma = math::sqrt(variance);
    map_samples(img, |v| v + v * sigma * stream.next_gaussian())
}

/// Adds `U[lo, hi]` to every sample independently (0-255 scale offsets).
pub fn add_uniform(img: &Raster, lo: f64, hi: f64, stream: &mut NoiseStream) -> Raster {
    let span = hi - lo;
    map_samples(img, |v| v + lo + span * stream.next_unit())
}

fn map_samples(img: &Raster, mut f: impl FnMut(f64) -> f64) -> Raster {
    let samples: Vec<u8> = img
        .samples()
        .iter()
        .map(|&v| quantize_sample(f(v as f64)))
        .collect();
    Raster::new(
        img.width(),
        img.height(),
        img.channels(),
        img.space(),
        samples,
    )
    .expect("shape unchanged")
}
