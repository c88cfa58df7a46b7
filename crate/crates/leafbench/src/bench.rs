//! Wall-clock timing of the denoising filters, single-threaded so the
//! per-filter comparisons stay fair.

use std::hint::black_box;
use std::time::Instant;

use leafbench_core::filters::{apply_filter, FilterSpec};
use leafbench_core::noise::NoiseKind;
use leafbench_core::pipeline::TimingRecord;
use leafbench_core::Raster;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("image list is empty")]
    EmptyImageList,
    #[error("repetitions must be at least 3, got {0}")]
    TooFewRepetitions(usize),
    #[error("{0}")]
    Filter(#[from] leafbench_core::Error),
}

/// Times `spec` over the full image list, repeated `repetitions` times;
/// records min and max elapsed seconds. Outputs are checksummed and
/// discarded.
pub fn benchmark_filter(
    spec: &FilterSpec,
    noise: NoiseKind,
    images: &[Raster],
    repetitions: usize,
) -> Result<TimingRecord, BenchError> {
    if images.is_empty() {
        return Err(BenchError::EmptyImageList);
    }
    if repetitions < 3 {
        return Err(BenchError::TooFewRepetitions(repetitions));
    }
    let mut elapsed_min = f64::INFINITY;
    let mut elapsed_max = 0.0f64;
    let mut checksum = 0u64;
    for _ in 0..repetitions {
        let start = Instant::now();
        for img in images {
            let out = apply_filter(img, spec)?;
            checksum = checksum.wrapping_add(
                out.samples()
                    .iter()
                    .fold(0u64, |acc, &v| acc.wrapping_mul(31).wrapping_add(v as u64)),
            );
        }
        let elapsed = start.elapsed().as_secs_f64();
        elapsed_min = elapsed_min.min(elapsed);
        elapsed_max = elapsed_max.max(elapsed);
    }
    black_box(checksum);
    Ok(TimingRecord {
        filter: spec.kind(),
        noise,
        image_count: images.len(),
        repetitions,
        elapsed_min,
        elapsed_max,
    })
}

/// One CSV line per record: filter, noise, counts, min/max seconds.
pub fn format_timing_csv(records: &[TimingRecord]) -> String {
    let mut out = String::from("filter,noise,image_count,repetitions,elapsed_min_s,elapsed_max_s\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{:.4},{:.4}\n",
            r.filter.label(),
            r.noise.label(),
            r.image_count,
            r.repetitions,
            r.elapsed_min,
            r.elapsed_max
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use leafbench_core::ColorSpace;

    #[test]
    fn timing_invariants_hold() {
        let images = vec![Raster::filled(32, 32, ColorSpace::Srgb, 90).unwrap(); 4];
        let record = benchmark_filter(
            &FilterSpec::Mean { kernel_size: 3 },
            NoiseKind::Gaussian,
            &images,
            3,
        )
        .unwrap();
        assert!(record.elapsed_min <= record.elapsed_max);
        assert_eq!(record.image_count, 4);
        assert_eq!(record.repetitions, 3);
    }

    #[test]
    fn bad_inputs_rejected() {
        let images = vec![Raster::filled(16, 16, ColorSpace::Gray, 0).unwrap()];
        assert!(matches!(
            benchmark_filter(
                &FilterSpec::Mean { kernel_size: 3 },
                NoiseKind::Gaussian,
                &[],
                3
            ),
            Err(BenchError::EmptyImageList)
        ));
        assert!(matches!(
            benchmark_filter(
                &FilterSpec::Mean { kernel_size: 3 },
                NoiseKind::Gaussian,
                &images,
                2
            ),
            Err(BenchError::TooFewRepetitions(2))
        ));
    }
}
