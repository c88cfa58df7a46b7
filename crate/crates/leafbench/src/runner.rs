//! Corpus-scale grid execution: load, resize, inject, filter, score,
//! aggregate. Images are independent, so they are processed in parallel;
//! record merging is deterministic regardless of thread count.

use std::path::PathBuf;

use leafbench_core::pipeline::{aggregate, evaluate_image, AggregateRow, RunRecord};
use leafbench_core::raster::resize_bilinear;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::corpus;
use crate::io::load_image;

pub const TARGET_SIZE: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("cannot scan corpus {path}: {source}")]
    Scan {
        path: String,
        source: std::io::Error,
    },
    #[error("corpus {0} contains no images")]
    EmptyCorpus(String),
    #[error("every corpus image failed to process")]
    AllImagesFailed,
    #[error("cannot build thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// One failed image: path and the reason it was skipped.
#[derive(Debug, Clone)]
pub struct ImageFailure {
    pub path: PathBuf,
    pub reason: String,
}

pub struct GridOutput {
    pub records: Vec<RunRecord>,
    pub rows: Vec<AggregateRow>,
    pub failures: Vec<ImageFailure>,
    pub image_count: usize,
}

/// Runs the full (noise x filter x experiment) grid over the corpus.
///
/// Per-image failures are recorded and skipped so a corrupt file cannot
/// void a long run. `threads` caps the worker count (`None` uses the
/// default pool).
pub fn run_grid(
    config: &RunConfig,
    threads: Option<usize>,
    verbose: bool,
) -> Result<GridOutput, RunError> {
    let paths = corpus::discover(&config.corpus_dir).map_err(|source| RunError::Scan {
        path: config.corpus_dir.display().to_string(),
        source,
    })?;
    if paths.is_empty() {
        return Err(RunError::EmptyCorpus(config.corpus_dir.display().to_string()));
    }
    let noises = config.resolved_noises();
    let filters = config.resolved_filters();
    let experiments = config.resolved_experiments();
    let metric_cfg = config.metrics;

    let process = |(index, path): (usize, &PathBuf)| -> Result<Vec<RunRecord>, ImageFailure> {
        let fail = |reason: String| ImageFailure {
            path: path.clone(),
            reason,
        };
        let img = load_image(path).map_err(|e| fail(e.to_string()))?;
        let clean = resize_bilinear(&img, TARGET_SIZE, TARGET_SIZE)
            .map_err(|e| fail(e.to_string()))?;
        let records = evaluate_image(
            &clean,
            &noises,
            &filters,
            &experiments,
            index as u64,
            &metric_cfg,
        )
        .map_err(|e| fail(e.to_string()))?;
        if verbose {
            eprintln!("processed [{index}] {}", path.display());
        }
        Ok(records)
    };

    let indexed: Vec<(usize, &PathBuf)> = paths.iter().enumerate().collect();
    let results: Vec<Result<Vec<RunRecord>, ImageFailure>> = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(|| indexed.par_iter().map(|&item| process(item)).collect())
        }
        None => indexed.par_iter().map(|&item| process(item)).collect(),
    };

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(mut r) => records.append(&mut r),
            Err(f) => {
                if verbose {
                    eprintln!("skipped {}: {}", f.path.display(), f.reason);
                }
                failures.push(f);
            }
        }
    }
    if records.is_empty() {
        return Err(RunError::AllImagesFailed);
    }
    records.sort_by(|a, b| {
        (a.noise.label(), a.filter.label(), a.experiment.label(), a.image_id).cmp(&(
            b.noise.label(),
            b.filter.label(),
            b.experiment.label(),
            b.image_id,
        ))
    });
    let rows = aggregate(&records);
    Ok(GridOutput {
        records,
        rows,
        failures,
        image_count: paths.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::save_image;
    use crate::synth;
    use leafbench_core::pipeline::ExperimentId;
    use std::fs;

    fn small_config(dir: &std::path::Path) -> RunConfig {
        let json = format!(
            r#"{{
                "corpus_dir": "{}",
                "output_dir": "{}",
                "master_seed": 7,
                "noises": [{{"kind": "salt_pepper", "amount": 0.05}}],
                "filters": [{{"kind": "mean", "kernel_size": 3}}, {{"kind": "median", "kernel_size": 3}}],
                "experiments": ["E01", "E06"]
            }}"#,
            dir.join("corpus").display(),
            dir.join("out").display()
        );
        serde_json::from_str(&json).unwrap()
    }

    #[test]
    fn grid_runs_and_isolates_failures() {
        let dir = tempfile::tempdir().unwrap();
        let corpus_dir = dir.path().join("corpus");
        fs::create_dir(&corpus_dir).unwrap();
        let imgs = synth::leaf_corpus(3, 99);
        for (i, img) in imgs.iter().enumerate() {
            save_image(&corpus_dir.join(format!("img_{i:02}.png")), img).unwrap();
        }
        // one corrupt file must be skipped without voiding the run
        fs::write(corpus_dir.join("broken.png"), b"not a png").unwrap();

        let config = small_config(dir.path());
        let out = run_grid(&config, Some(1), false).unwrap();
        assert_eq!(out.failures.len(), 1);
        // 1 noise x 2 filters x 2 experiments x 3 images
        assert_eq!(out.records.len(), 12);
        assert_eq!(out.rows.len(), 4);
        for row in &out.rows {
            assert_eq!(row.n_images, 3);
        }
        // E01 and E06 share the denoised intermediate but differ after CLAHE
        let e01 = out
            .rows
            .iter()
            .find(|r| r.experiment == ExperimentId::E01 && r.filter.label() == "median")
            .unwrap();
        let e06 = out
            .rows
            .iter()
            .find(|r| r.experiment == ExperimentId::E06 && r.filter.label() == "median")
            .unwrap();
        assert!(e01.psnr > e06.psnr);
    }

    #[test]
    fn reruns_are_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let corpus_dir = dir.path().join("corpus");
        fs::create_dir(&corpus_dir).unwrap();
        for (i, img) in synth::leaf_corpus(2, 5).iter().enumerate() {
            save_image(&corpus_dir.join(format!("img_{i:02}.png")), img).unwrap();
        }
        let config = small_config(dir.path());
        let a = run_grid(&config, Some(1), false).unwrap();
        let b = run_grid(&config, None, false).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let corpus_dir = dir.path().join("corpus");
        fs::create_dir(&corpus_dir).unwrap();
        let config = small_config(dir.path());
        assert!(matches!(
            run_grid(&config, Some(1), false),
            Err(RunError::EmptyCorpus(_))
        ));
    }
}
