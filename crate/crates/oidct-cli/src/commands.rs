//! Experiment orchestration: kernel training over image corpora, the
//! standard-vs-learned evaluation harness, standalone encode/decode steps
//! and the kernel distance table.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use oidct::codec::{decode, encode, extract_training_pairs};
use oidct::learner::{
    kernel_distance, select_kernel, solve_kernel, stationarity_residual, TrainingAccumulator,
};
use oidct::metrics::quality_report;
use oidct::transform::KernelMatrix;
use oidct::{ImagePlanes64, TrainedKernel64};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::image_io::{read_image, write_image};
use crate::{kernel_file, report, sidecar};

/// Extension used for kernel files written by `train`.
pub const KERNEL_EXT: &str = "oidk";
/// Extension used for encoded-image sidecar files.
pub const SIDECAR_EXT: &str = "oide";

pub type Result<T> = std::result::Result<T, CliError>;

/// One per-quality-factor training result.
#[derive(Debug)]
pub struct TrainOutcome {
    pub qf: u8,
    pub sample_count: u64,
    pub lambda: f64,
    pub residual: f64,
    pub path: PathBuf,
    pub undertrained: bool,
}

/// Trains one kernel per configured quality factor and writes each to
/// `<output_dir>/qf<NNN>.oidk`. Unreadable training images are skipped with
/// a warning on `log`; having no usable training samples at all is an error.
pub fn cmd_train(config: &ExperimentConfig, log: &mut dyn Write) -> Result<Vec<TrainOutcome>> {
    fs::create_dir_all(&config.output_dir)?;
    let mut images: Vec<(&PathBuf, ImagePlanes64)> = Vec::new();
    for path in &config.train_paths {
        match read_image(path) {
            Ok(img) => images.push((path, img)),
            Err(err) => writeln!(log, "warning: skipping {}: {err}", path.display())?,
        }
    }

    let mut outcomes = Vec::with_capacity(config.qf_list.len());
    for &qf in &config.qf_list {
        let mut acc = TrainingAccumulator::<f64>::new();
        for (_, img) in &images {
            for (pixels, coeffs) in extract_training_pairs(img, qf)? {
                acc.accumulate(&pixels, &coeffs);
            }
        }
        if acc.count() == 0 {
            return Err(CliError::NoTrainingSamples);
        }
        let lambda = config.ridge_lambda.unwrap_or_else(|| acc.default_ridge());
        let trained = solve_kernel(&acc, qf, lambda)?;
        let residual = stationarity_residual(&acc, &trained);
        let path = config.output_dir.join(format!("qf{qf:03}.{KERNEL_EXT}"));
        kernel_file::save(&trained, &path)?;
        if trained.undertrained() {
            writeln!(
                log,
                "warning: qf={qf} trained on {} samples, fewer than the recommended 4096",
                acc.count()
            )?;
        }
        writeln!(
            log,
            "trained qf={qf} samples={} lambda={lambda:.6e} residual={residual:.3e} -> {}",
            acc.count(),
            path.display()
        )?;
        outcomes.push(TrainOutcome {
            qf,
            sample_count: acc.count(),
            lambda,
            residual,
            path,
            undertrained: trained.undertrained(),
        });
    }
    Ok(outcomes)
}

/// One evaluation row: a test image decoded at one quality factor with the
/// standard transpose and with the nearest learned kernel.
#[derive(Clone, Debug)]
pub struct EvalRow {
    pub image: String,
    pub qf: u8,
    pub kernel_qf: u8,
    pub psnr_std: f64,
    pub psnr_learned: f64,
    pub ssim_std: f64,
    pub ssim_learned: f64,
}

/// Per-quality-factor means over all evaluated images.
#[derive(Clone, Debug)]
pub struct QfSummary {
    pub qf: u8,
    pub images: usize,
    pub psnr_std_mean: f64,
    pub psnr_learned_mean: f64,
    pub psnr_gain: f64,
    pub ssim_std_mean: f64,
    pub ssim_learned_mean: f64,
    pub ssim_gain: f64,
}

#[derive(Debug)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub summary: Vec<QfSummary>,
    pub rows_csv: PathBuf,
    pub summary_csv: PathBuf,
}

/// Encodes every test image at every configured quality factor, decodes it
/// twice (standard inverse; nearest-QF learned kernel from `bank`), scores
/// both against the original and writes `eval.csv` plus `eval_summary.csv`
/// into the output directory. Inputs are never modified.
pub fn cmd_eval(
    config: &ExperimentConfig,
    bank: &[TrainedKernel64],
    log: &mut dyn Write,
) -> Result<EvalReport> {
    if bank.is_empty() {
        return Err(CliError::Image(oidct::Error::EmptyKernelBank));
    }
    if config.test_paths.is_empty() {
        return Err(CliError::NoTestImages);
    }
    fs::create_dir_all(&config.output_dir)?;
    let standard = KernelMatrix::<f64>::standard_inverse();

    let mut rows: Vec<EvalRow> = Vec::new();
    for path in &config.test_paths {
        let original = read_image(path)?;
        let name = path.display().to_string();
        for &qf in &config.qf_list {
            let encoded = encode(&original, qf)?;
            let learned = select_kernel(bank, qf)?;
            let std_decoded = decode(&encoded, &standard)?;
            let learned_decoded = decode(&encoded, learned.kernel())?;
            let std_report = quality_report(&original, &std_decoded)?;
            let learned_report = quality_report(&original, &learned_decoded)?;
            rows.push(EvalRow {
                image: name.clone(),
                qf,
                kernel_qf: learned.training_qf(),
                psnr_std: std_report.psnr_rgb,
                psnr_learned: learned_report.psnr_rgb,
                ssim_std: std_report.ssim,
                ssim_learned: learned_report.ssim,
            });
        }
        writeln!(log, "evaluated {name}")?;
    }

    let summary: Vec<QfSummary> = config
        .qf_list
        .iter()
        .map(|&qf| {
            let qf_rows: Vec<&EvalRow> = rows.iter().filter(|r| r.qf == qf).collect();
            let n = qf_rows.len() as f64;
            let mean = |f: &dyn Fn(&EvalRow) -> f64| qf_rows.iter().map(|r| f(r)).sum::<f64>() / n;
            let psnr_std_mean = mean(&|r| r.psnr_std);
            let psnr_learned_mean = mean(&|r| r.psnr_learned);
            let ssim_std_mean = mean(&|r| r.ssim_std);
            let ssim_learned_mean = mean(&|r| r.ssim_learned);
            QfSummary {
                qf,
                images: qf_rows.len(),
                psnr_std_mean,
                psnr_learned_mean,
                psnr_gain: mean(&|r| r.psnr_learned - r.psnr_std),
                ssim_std_mean,
                ssim_learned_mean,
                ssim_gain: mean(&|r| r.ssim_learned - r.ssim_std),
            }
        })
        .collect();

    let rows_csv = config.output_dir.join("eval.csv");
    report::write(
        &rows_csv,
        &[
            "image",
            "qf",
            "kernel_qf",
            "psnr_std",
            "psnr_learned",
            "ssim_std",
            "ssim_learned",
        ],
        &rows
            .iter()
            .map(|r| {
                vec![
                    r.image.clone(),
                    r.qf.to_string(),
                    r.kernel_qf.to_string(),
                    report::fmt_metric(r.psnr_std),
                    report::fmt_metric(r.psnr_learned),
                    report::fmt_metric(r.ssim_std),
                    report::fmt_metric(r.ssim_learned),
                ]
            })
            .collect::<Vec<_>>(),
    )?;

    let summary_csv = config.output_dir.join("eval_summary.csv");
    report::write(
        &summary_csv,
        &[
            "qf",
            "images",
            "psnr_std_mean",
            "psnr_learned_mean",
            "psnr_gain_db",
            "ssim_std_mean",
            "ssim_learned_mean",
            "ssim_gain",
        ],
        &summary
            .iter()
            .map(|s| {
                vec![
                    s.qf.to_string(),
                    s.images.to_string(),
                    report::fmt_metric(s.psnr_std_mean),
                    report::fmt_metric(s.psnr_learned_mean),
                    report::fmt_metric(s.psnr_gain),
                    report::fmt_metric(s.ssim_std_mean),
                    report::fmt_metric(s.ssim_learned_mean),
                    report::fmt_metric(s.ssim_gain),
                ]
            })
            .collect::<Vec<_>>(),
    )?;

    Ok(EvalReport {
        rows,
        summary,
        rows_csv,
        summary_csv,
    })
}

/// Loads every `.oidk` file in a directory, ordered by training quality
/// factor (filename as tiebreaker) for deterministic selection.
pub fn load_kernel_bank(dir: &Path) -> Result<Vec<TrainedKernel64>> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .map(|e| e.eq_ignore_ascii_case(KERNEL_EXT))
                .unwrap_or(false)
        })
        .collect();
    entries.sort();
    let mut bank = Vec::with_capacity(entries.len());
    for path in entries {
        bank.push(kernel_file::load(&path)?);
    }
    bank.sort_by_key(|k| k.training_qf());
    Ok(bank)
}

/// Symmetric pairwise kernel distance table, labeled by training QF.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    pub qfs: Vec<u8>,
    pub values: Vec<Vec<f64>>,
}

/// Computes pairwise Frobenius distances between all bank kernels and
/// writes `kernel_dist.csv` into `output_dir`.
pub fn cmd_kernel_dist(bank: &[TrainedKernel64], output_dir: &Path) -> Result<DistanceMatrix> {
    if bank.len() < 2 {
        return Err(CliError::NeedTwoKernels { found: bank.len() });
    }
    fs::create_dir_all(output_dir)?;
    let qfs: Vec<u8> = bank.iter().map(|k| k.training_qf()).collect();
    let values: Vec<Vec<f64>> = bank
        .iter()
        .map(|a| bank.iter().map(|b| kernel_distance(a, b)).collect())
        .collect();

    let mut header: Vec<String> = vec!["qf".to_string()];
    header.extend(qfs.iter().map(|q| q.to_string()));
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let rows: Vec<Vec<String>> = qfs
        .iter()
        .zip(&values)
        .map(|(qf, row)| {
            let mut fields = vec![qf.to_string()];
            fields.extend(row.iter().map(|&d| report::fmt_metric(d)));
            fields
        })
        .collect();
    report::write(&output_dir.join("kernel_dist.csv"), &header_refs, &rows)?;

    Ok(DistanceMatrix { qfs, values })
}

/// Encodes one image to a sidecar file named after the input stem.
pub fn cmd_encode(image: &Path, qf: u8, output_dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(output_dir)?;
    let img = read_image(image)?;
    let encoded = encode(&img, qf)?;
    let stem = image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string());
    let path = output_dir.join(format!("{stem}.{SIDECAR_EXT}"));
    sidecar::save(&encoded, &path)?;
    Ok(path)
}

/// Which inverse kernel `decode` should use.
pub enum KernelChoice {
    /// Transpose of the forward transform.
    Standard,
    /// A single kernel file.
    File(PathBuf),
    /// Nearest-QF member of a kernel bank directory.
    Bank(PathBuf),
}

/// Decodes a sidecar file and writes the reconstruction as
/// `<stem>.ppm` next to the configured output directory.
pub fn cmd_decode(
    sidecar_path: &Path,
    choice: &KernelChoice,
    output_dir: &Path,
) -> Result<PathBuf> {
    fs::create_dir_all(output_dir)?;
    let encoded = sidecar::load(sidecar_path)?;
    let kernel = match choice {
        KernelChoice::Standard => KernelMatrix::<f64>::standard_inverse(),
        KernelChoice::File(path) => kernel_file::load(path)?.kernel().clone(),
        KernelChoice::Bank(dir) => {
            let bank = load_kernel_bank(dir)?;
            select_kernel(&bank, encoded.qf())?.kernel().clone()
        }
    };
    let img = decode(&encoded, &kernel)?;
    let stem = sidecar_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string());
    let path = output_dir.join(format!("{stem}.ppm"));
    write_image(&img, &path)?;
    Ok(path)
}
