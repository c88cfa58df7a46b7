//! The nine-experiment grid: stage planning, per-cell execution, and
//! aggregation of per-image metrics.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::clahe::{clahe, ClaheParams};
use crate::error::Result;
use crate::filters::{apply_filter, FilterKind, FilterSpec};
use crate::metrics::{evaluate, MetricConfig, MetricVector};
use crate::noise::{NoiseKind, NoiseSpec};
use crate::raster::Raster;

/// The experiments of the study. E01 denoises only; E02-E05 run CLAHE
/// before denoising; E06-E09 run CLAHE after, with clip/grid parameters
/// (2.0, 8x8), (2.0, 5x5), (1.0, 5x5), (0.5, 5x5) respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ExperimentId {
    E01,
    E02,
    E03,
    E04,
    E05,
    E06,
    E07,
    E08,
    E09,
}

/// Where CLAHE sits relative to denoising.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageOrder {
    DenoiseOnly,
    ClaheThenDenoise,
    DenoiseThenClahe,
}

/// One step of a planned experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stage {
    InjectNoise,
    Clahe(ClaheParams),
    Filter,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 9] = [
        ExperimentId::E01,
        ExperimentId::E02,
        ExperimentId::E03,
        ExperimentId::E04,
        ExperimentId::E05,
        ExperimentId::E06,
        ExperimentId::E07,
        ExperimentId::E08,
        ExperimentId::E09,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ExperimentId::E01 => "E01",
            ExperimentId::E02 => "E02",
            ExperimentId::E03 => "E03",
            ExperimentId::E04 => "E04",
            ExperimentId::E05 => "E05",
            ExperimentId::E06 => "E06",
            ExperimentId::E07 => "E07",
            ExperimentId::E08 => "E08",
            ExperimentId::E09 => "E09",
        }
    }

    /// Column header used by the study's tables.
    pub fn column_label(&self) -> &'static str {
        match self {
            ExperimentId::E01 => "Denoise",
            ExperimentId::E02 => "CD (2.0,8)",
            ExperimentId::E03 => "CD (2.0,5)",
            ExperimentId::E04 => "CD (1.0,5)",
            ExperimentId::E05 => "CD (0.5,5)",
            ExperimentId::E06 => "DC (2.0,8)",
            ExperimentId::E07 => "DC (2.0,5)",
            ExperimentId::E08 => "DC (1.0,5)",
            ExperimentId::E09 => "DC (0.5,5)",
        }
    }

    pub fn from_label(label: &str) -> Option<ExperimentId> {
        ExperimentId::ALL.iter().copied().find(|e| e.label() == label)
    }

    pub fn order(&self) -> StageOrder {
        match self {
            ExperimentId::E01 => StageOrder::DenoiseOnly,
            ExperimentId::E02 | ExperimentId::E03 | ExperimentId::E04 | ExperimentId::E05 => {
                StageOrder::ClaheThenDenoise
            }
            _ => StageOrder::DenoiseThenClahe,
        }
    }

    pub fn clahe_params(&self) -> Option<ClaheParams> {
        match self {
            ExperimentId::E01 => None,
            ExperimentId::E02 | ExperimentId::E06 => Some(ClaheParams::new(2.0, 8, 8)),
            ExperimentId::E03 | ExperimentId::E07 => Some(ClaheParams::new(2.0, 5, 5)),
            ExperimentId::E04 | ExperimentId::E08 => Some(ClaheParams::new(1.0, 5, 5)),
            ExperimentId::E05 | ExperimentId::E09 => Some(ClaheParams::new(0.5, 5, 5)),
        }
    }
}

/// Ordered stage list for an experiment.
pub fn plan_experiment(id: ExperimentId) -> Vec<Stage> {
    let mut stages = Vec::with_capacity(3);
    stages.push(Stage::InjectNoise);
    match (id.order(), id.clahe_params()) {
        (StageOrder::DenoiseOnly, _) => stages.push(Stage::Filter),
        (StageOrder::ClaheThenDenoise, Some(p)) => {
            stages.push(Stage::Clahe(p));
            stages.push(Stage::Filter);
        }
        (StageOrder::DenoiseThenClahe, Some(p)) => {
            stages.push(Stage::Filter);
            stages.push(Stage::Clahe(p));
        }
        _ => unreachable!("experiments with CLAHE always carry parameters"),
    }
    stages
}

/// Metrics of one (image, noise, filter, experiment) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub image_id: u64,
    pub noise: NoiseKind,
    pub filter: FilterKind,
    pub experiment: ExperimentId,
    pub metrics: MetricVector,
}

/// Per-cell aggregate over a corpus: arithmetic means of per-image metrics.
/// Infinite per-image PSNR values are excluded from the PSNR mean and
/// counted in `n_excluded_psnr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregateRow {
    pub noise: NoiseKind,
    pub filter: FilterKind,
    pub experiment: ExperimentId,
    pub mse: f64,
    pub ssim: f64,
    pub psnr: f64,
    pub nrmse: f64,
    pub nmi: f64,
    pub n_images: usize,
    pub n_excluded_psnr: usize,
}

/// Executes the planned stages of one cell and scores the result against
/// the clean image.
pub fn run_cell(
    clean: &Raster,
    noise: &NoiseSpec,
    image_index: u64,
    filter: &FilterSpec,
    experiment: ExperimentId,
    cfg: &MetricConfig,
) -> Result<(Raster, MetricVector)> {
    let mut current = clean.clone();
    for stage in plan_experiment(experiment) {
        current = match stage {
            Stage::InjectNoise => noise.inject(&current, image_index)?,
            Stage::Clahe(params) => clahe(&current, &params)?,
            Stage::Filter => apply_filter(&current, filter)?,
        };
    }
    let metrics = evaluate(clean, &current, cfg)?;
    Ok((current, metrics))
}

/// Evaluates every (noise, filter, experiment) cell for one image.
///
/// Noise is injected once per noise kind and reused across all cells of
/// that kind; the shared `filter(noisy)` intermediate of E01/E06-E09 and
/// the shared `clahe(noisy)` inputs of E02-E05 are each computed once.
/// Results are bit-identical to running [`run_cell`] per cell.
pub fn evaluate_image(
    clean: &Raster,
    noises: &[NoiseSpec],
    filters: &[FilterSpec],
    experiments: &[ExperimentId],
    image_index: u64,
    cfg: &MetricConfig,
) -> Result<Vec<RunRecord>> {
    let mut records = Vec::with_capacity(noises.len() * filters.len() * experiments.len());
    for noise in noises {
        let noisy = noise.inject(clean, image_index)?;
        // CLAHE of the noisy input, one per distinct pre-denoise parameter
        let mut pre_clahe: BTreeMap<&'static str, Raster> = BTreeMap::new();
        for exp in experiments {
            if exp.order() == StageOrder::ClaheThenDenoise {
                let params = exp.clahe_params().expect("CD experiments carry params");
                pre_clahe
                    .entry(exp.label())
                    .or_insert(clahe(&noisy, &params)?);
            }
        }
        for filter in filters {
            let needs_shared = experiments
                .iter()
                .any(|e| e.order() != StageOrder::ClaheThenDenoise);
            let denoised = if needs_shared {
                Some(apply_filter(&noisy, filter)?)
            } else {
                None
            };
            for exp in experiments {
                let enhanced = match exp.order() {
                    StageOrder::DenoiseOnly => denoised.clone().expect("computed above"),
                    StageOrder::DenoiseThenClahe => {
                        let params = exp.clahe_params().expect("DC experiments carry params");
                        clahe(denoised.as_ref().expect("computed above"), &params)?
                    }
                    StageOrder::ClaheThenDenoise => {
                        apply_filter(&pre_clahe[exp.label()], filter)?
                    }
                };
                records.push(RunRecord {
                    image_id: image_index,
                    noise: noise.kind(),
                    filter: filter.kind(),
                    experiment: *exp,
                    metrics: evaluate(clean, &enhanced, cfg)?,
                });
            }
        }
    }
    Ok(records)
}

/// Groups records by (noise, filter, experiment) and averages each metric.
/// Output is sorted by the group labels, independent of record order.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(&'static str, &'static str, &'static str), Vec<&RunRecord>> =
        BTreeMap::new();
    for r in records {
        groups
            .entry((r.noise.label(), r.filter.label(), r.experiment.label()))
            .or_default()
            .push(r);
    }
    groups
        .values()
        .map(|group| {
            let n = group.len();
            let mut row = AggregateRow {
                noise: group[0].noise,
                filter: group[0].filter,
                experiment: group[0].experiment,
                mse: 0.0,
                ssim: 0.0,
                psnr: 0.0,
                nrmse: 0.0,
                nmi: 0.0,
                n_images: n,
                n_excluded_psnr: 0,
            };
            let mut psnr_count = 0usize;
            for r in group {
                row.mse += r.metrics.mse;
                row.ssim += r.metrics.ssim;
                row.nrmse += r.metrics.nrmse;
                row.nmi += r.metrics.nmi;
                if r.metrics.psnr.is_finite() {
                    row.psnr += r.metrics.psnr;
                    psnr_count += 1;
                } else {
                    row.n_excluded_psnr += 1;
                }
            }
            row.mse /= n as f64;
            row.ssim /= n as f64;
            row.nrmse /= n as f64;
            row.nmi /= n as f64;
            row.psnr = if psnr_count > 0 {
                row.psnr / psnr_count as f64
            } else {
                f64::INFINITY
            };
            row
        })
        .collect()
}

/// Wall-clock result of timing one filter over an image list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingRecord {
    pub filter: FilterKind,
    pub noise: NoiseKind,
    pub image_count: usize,
    pub repetitions: usize,
    pub elapsed_min: f64,
    pub elapsed_max: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModel;
    use crate::raster::ColorSpace;

    #[test]
    fn plans_match_experiment_structure() {
        assert_eq!(
            plan_experiment(ExperimentId::E01),
            [Stage::InjectNoise, Stage::Filter]
        );
        assert_eq!(
            plan_experiment(ExperimentId::E05),
            [
                Stage::InjectNoise,
                Stage::Clahe(ClaheParams::new(0.5, 5, 5)),
                Stage::Filter
            ]
        );
        assert_eq!(
            plan_experiment(ExperimentId::E09),
            [
                Stage::InjectNoise,
                Stage::Filter,
                Stage::Clahe(ClaheParams::new(0.5, 5, 5))
            ]
        );
    }

    #[test]
    fn experiment_labels_round_trip() {
        for e in ExperimentId::ALL {
            assert_eq!(ExperimentId::from_label(e.label()), Some(e));
        }
        assert_eq!(ExperimentId::from_label("E10"), None);
    }

    #[test]
    fn zero_noise_constant_mean_cell_is_perfect() {
        let clean = Raster::filled(16, 16, ColorSpace::Gray, 120).unwrap();
        let noise = NoiseSpec::new(
            NoiseModel::Gaussian {
                mean: 0.0,
                variance: 0.0,
            },
            0,
        );
        let (out, metrics) = run_cell(
            &clean,
            &noise,
            0,
            &FilterSpec::Mean { kernel_size: 5 },
            ExperimentId::E01,
            &MetricConfig::default(),
        )
        .unwrap();
        assert_eq!(out, clean);
        assert_eq!(metrics.mse, 0.0);
    }

    #[test]
    fn evaluate_image_matches_run_cell() {
        let samples: Vec<u8> = (0..(24 * 24)).map(|i| (60 + i * 13 % 130) as u8).collect();
        let clean = Raster::new(24, 24, 1, ColorSpace::Gray, samples).unwrap();
        let noises = [NoiseSpec::new(NoiseModel::SaltPepper { amount: 0.05 }, 9)];
        let filters = [
            FilterSpec::Mean { kernel_size: 3 },
            FilterSpec::Median { kernel_size: 3 },
        ];
        let experiments = [ExperimentId::E01, ExperimentId::E02, ExperimentId::E06];
        let cfg = MetricConfig::default();
        let records = evaluate_image(&clean, &noises, &filters, &experiments, 4, &cfg).unwrap();
        assert_eq!(records.len(), 6);
        for r in &records {
            let filter = filters
                .iter()
                .find(|f| f.kind() == r.filter)
                .copied()
                .unwrap();
            let (_, direct) =
                run_cell(&clean, &noises[0], 4, &filter, r.experiment, &cfg).unwrap();
            assert_eq!(r.metrics, direct);
        }
    }

    #[test]
    fn aggregation_is_order_invariant_and_handles_infinite_psnr() {
        let mk = |psnr: f64, image_id: u64| RunRecord {
            image_id,
            noise: NoiseKind::Gaussian,
            filter: FilterKind::Mean,
            experiment: ExperimentId::E01,
            metrics: MetricVector {
                mse: 10.0,
                ssim: 0.5,
                psnr,
                nrmse: 0.1,
                nmi: 1.5,
            },
        };
        let records = [mk(30.0, 0), mk(32.0, 1), mk(f64::INFINITY, 2)];
        let rows = aggregate(&records);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n_images, 3);
        assert_eq!(rows[0].n_excluded_psnr, 1);
        assert_eq!(rows[0].psnr, 31.0);
        let mut shuffled = records;
        shuffled.reverse();
        assert_eq!(aggregate(&shuffled), rows);
    }
}
