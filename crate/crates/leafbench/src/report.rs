//! CSV and Markdown report emission.
//!
//! Two CSVs per run: a 2-decimal display file matching the study's table
//! formatting, and a full-precision companion using shortest round-trip
//! float formatting so reparsing reproduces every value bit-exactly.

use std::collections::BTreeMap;

use leafbench_core::filters::FilterKind;
use leafbench_core::noise::NoiseKind;
use leafbench_core::pipeline::{AggregateRow, ExperimentId};

pub const CSV_HEADER: &str = "noise,filter,experiment,mse,ssim,psnr,nrmse,nmi,n_images,n_excluded_psnr";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("no rows to report")]
    Empty,
    #[error("CSV line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("block ({noise}, {filter}) is missing experiment {missing}")]
    IncompleteBlock {
        noise: String,
        filter: String,
        missing: &'static str,
    },
}

fn sorted(rows: &[AggregateRow]) -> Vec<&AggregateRow> {
    let mut sorted: Vec<&AggregateRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        (a.noise.label(), a.filter.label(), a.experiment.label()).cmp(&(
            b.noise.label(),
            b.filter.label(),
            b.experiment.label(),
        ))
    });
    sorted
}

/// Display CSV: metrics at 2 decimal places, rows sorted by
/// (noise, filter, experiment).
pub fn format_display_csv(rows: &[AggregateRow]) -> Result<String, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted(rows) {
        out.push_str(&format!(
            "{},{},{},{:.2},{:.2},{:.2},{:.2},{:.2},{},{}\n",
            r.noise.label(),
            r.filter.label(),
            r.experiment.label(),
            r.mse,
            r.ssim,
            r.psnr,
            r.nrmse,
            r.nmi,
            r.n_images,
            r.n_excluded_psnr
        ));
    }
    Ok(out)
}

/// Full-precision CSV (shortest round-trip formatting; reparsing yields
/// bit-identical values).
pub fn format_full_csv(rows: &[AggregateRow]) -> Result<String, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted(rows) {
        out.push_str(&format!(
            "{},{},{},{:?},{:?},{:?},{:?},{:?},{},{}\n",
            r.noise.label(),
            r.filter.label(),
            r.experiment.label(),
            r.mse,
            r.ssim,
            r.psnr,
            r.nrmse,
            r.nmi,
            r.n_images,
            r.n_excluded_psnr
        ));
    }
    Ok(out)
}

fn noise_from_label(label: &str) -> Option<NoiseKind> {
    [
        NoiseKind::Gaussian,
        NoiseKind::SaltPepper,
        NoiseKind::Speckle,
        NoiseKind::Uniform,
    ]
    .into_iter()
    .find(|k| k.label() == label)
}

fn filter_from_label(label: &str) -> Option<FilterKind> {
    [
        FilterKind::Mean,
        FilterKind::Gaussian,
        FilterKind::Median,
        FilterKind::Bilateral,
        FilterKind::Nlm,
    ]
    .into_iter()
    .find(|k| k.label() == label)
}

/// Parses a full-precision CSV back into aggregate rows.
pub fn parse_full_csv(text: &str) -> Result<Vec<AggregateRow>, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        _ => {
            return Err(ReportError::Malformed {
                line: 1,
                reason: format!("expected header `{CSV_HEADER}`"),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let err = |reason: &str| ReportError::Malformed {
            line: idx + 1,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(err("expected 10 fields"));
        }
        let parse_f64 = |s: &str| -> Result<f64, ReportError> {
            s.parse::<f64>().map_err(|_| ReportError::Malformed {
                line: idx + 1,
                reason: format!("bad float `{s}`"),
            })
        };
        rows.push(AggregateRow {
            noise: noise_from_label(fields[0]).ok_or_else(|| err("unknown noise label"))?,
            filter: filter_from_label(fields[1]).ok_or_else(|| err("unknown filter label"))?,
            experiment: ExperimentId::from_label(fields[2])
                .ok_or_else(|| err("unknown experiment label"))?,
            mse: parse_f64(fields[3])?,
            ssim: parse_f64(fields[4])?,
            psnr: parse_f64(fields[5])?,
            nrmse: parse_f64(fields[6])?,
            nmi: parse_f64(fields[7])?,
            n_images: fields[8].parse().map_err(|_| err("bad n_images"))?,
            n_excluded_psnr: fields[9].parse().map_err(|_| err("bad n_excluded_psnr"))?,
        });
    }
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    Ok(rows)
}

/// One Markdown table per (noise, filter) pair: metric rows by experiment
/// columns in the study's column order. Every pair present must cover all
/// nine experiments.
pub fn format_markdown_tables(rows: &[AggregateRow]) -> Result<String, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut blocks: BTreeMap<(&'static str, &'static str), BTreeMap<&'static str, &AggregateRow>> =
        BTreeMap::new();
    for r in rows {
        blocks
            .entry((r.noise.label(), r.filter.label()))
            .or_default()
            .insert(r.experiment.label(), r);
    }
    let mut out = String::new();
    for ((noise, filter), cells) in &blocks {
        for exp in ExperimentId::ALL {
            if !cells.contains_key(exp.label()) {
                return Err(ReportError::IncompleteBlock {
                    noise: noise.to_string(),
                    filter: filter.to_string(),
                    missing: exp.label(),
                });
            }
        }
        out.push_str(&format!(
            "### Performance of {filter} filter denoising images with {noise} noise\n\n"
        ));
        out.push_str("| Metric |");
        for exp in ExperimentId::ALL {
            out.push_str(&format!(" {} |", exp.column_label()));
        }
        out.push('\n');
        out.push_str("|---|");
        for _ in ExperimentId::ALL {
            out.push_str("---|");
        }
        out.push('\n');
        let metric_rows: [(&str, fn(&AggregateRow) -> f64); 5] = [
            ("MSE", |r| r.mse),
            ("SSIM", |r| r.ssim),
            ("PSNR", |r| r.psnr),
            ("NRMSE", |r| r.nrmse),
            ("NMI", |r| r.nmi),
        ];
        for (name, get) in metric_rows {
            out.push_str(&format!("| {name} |"));
            for exp in ExperimentId::ALL {
                out.push_str(&format!(" {:.2} |", get(cells[exp.label()])));
            }
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}
