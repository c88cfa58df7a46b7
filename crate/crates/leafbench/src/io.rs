//! PNG/JPEG decoding into [`Raster`]s and lossless PNG output.

use std::fs;
use std::path::Path;

use image::DynamicImage;
use leafbench_core::{ColorSpace, Raster};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot decode {path}: {source}")]
    Decode {
        path: String,
        source: image::ImageError,
    },
    #[error("cannot encode {path}: {source}")]
    Encode {
        path: String,
        source: image::ImageError,
    },
    #[error("{0}")]
    Core(#[from] leafbench_core::Error),
    #[error("luma-chroma rasters have no file representation")]
    UnsupportedSpace,
}

/// Decodes a PNG or JPEG file. Grayscale sources become 1-channel gray
/// rasters, everything else 3-channel srgb; an alpha channel is dropped.
pub fn load_image(path: &Path) -> Result<Raster, IoError> {
    let bytes = fs::read(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let decoded = image::load_from_memory(&bytes).map_err(|source| IoError::Decode {
        path: path.display().to_string(),
        source,
    })?;
    Ok(raster_from_dynamic(decoded)?)
}

fn raster_from_dynamic(img: DynamicImage) -> Result<Raster, leafbench_core::Error> {
    match img {
        DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageLumaA16(_) => {
            let gray = img.to_luma8();
            Raster::new(
                gray.width() as usize,
                gray.height() as usize,
                1,
                ColorSpace::Gray,
                gray.into_raw(),
            )
        }
        other => {
            let rgb = other.to_rgb8();
            Raster::new(
                rgb.width() as usize,
                rgb.height() as usize,
                3,
                ColorSpace::Srgb,
                rgb.into_raw(),
            )
        }
    }
}

/// Writes a raster as PNG (lossless, so downstream metric checks are
/// bit-exact) regardless of the path's extension.
pub fn save_image(path: &Path, img: &Raster) -> Result<(), IoError> {
    let color = match img.space() {
        ColorSpace::Gray => image::ExtendedColorType::L8,
        ColorSpace::Srgb => image::ExtendedColorType::Rgb8,
        ColorSpace::LumaChroma => return Err(IoError::UnsupportedSpace),
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| IoError::Write {
                path: path.display().to_string(),
                source,
            })?;
        }
    }
    image::save_buffer_with_format(
        path,
        img.samples(),
        img.width() as u32,
        img.height() as u32,
        color,
        image::ImageFormat::Png,
    )
    .map_err(|source| IoError::Encode {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip_is_sample_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.png");
        let img = Raster::new(
            2,
            2,
            3,
            ColorSpace::Srgb,
            vec![0, 50, 100, 150, 200, 250, 1, 2, 3, 4, 5, 6],
        )
        .unwrap();
        save_image(&path, &img).unwrap();
        assert_eq!(load_image(&path).unwrap(), img);
    }

    #[test]
    fn rgba_alpha_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rgba.png");
        let rgba = image::RgbaImage::from_raw(2, 1, vec![10, 20, 30, 99, 40, 50, 60, 0]).unwrap();
        rgba.save(&path).unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.channels(), 3);
        assert_eq!(img.space(), ColorSpace::Srgb);
        assert_eq!(img.samples(), &[10, 20, 30, 40, 50, 60]);
    }

    #[test]
    fn gray_png_stays_single_channel() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gray.png");
        let img = Raster::new(3, 1, 1, ColorSpace::Gray, vec![7, 8, 9]).unwrap();
        save_image(&path, &img).unwrap();
        let back = load_image(&path).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn truncated_file_is_a_decode_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.png");
        fs::write(&path, [0x89, b'P', b'N', b'G', 0, 1]).unwrap();
        assert!(matches!(
            load_image(&path),
            Err(IoError::Decode { .. })
        ));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            load_image(Path::new("/nonexistent/nec.png")),
            Err(IoError::Read { .. })
        ));
    }
}
