use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oidct_cli::commands::{
    cmd_decode, cmd_encode, cmd_eval, cmd_kernel_dist, cmd_train, load_kernel_bank, KernelChoice,
};
use oidct_cli::config::ExperimentConfig;
use oidct_cli::kernel_file;

#[derive(Parser)]
#[command(
    name = "oidct",
    version,
    about = "Block-DCT image codec with a least-squares learned inverse kernel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Learn inverse kernels from training images, one kernel file per QF
    Train {
        /// Training images (PPM or PNG)
        #[arg(required = true)]
        images: Vec<PathBuf>,
        /// Quality factors to train at, e.g. --qf 50,70,90
        #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u8).range(1..=100))]
        qf: Vec<u8>,
        /// Ridge weight; defaults to 1e-6 * trace(D D^T) / 64 per QF
        #[arg(long)]
        lambda: Option<f64>,
        /// Directory for the kernel files
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare standard and learned decoding over test images, emit CSV
    Eval {
        /// Test images
        #[arg(required = true)]
        images: Vec<PathBuf>,
        /// Directory of .oidk kernel files
        #[arg(long)]
        kernel_bank: PathBuf,
        /// Quality factors to evaluate, e.g. --qf 50,70,90
        #[arg(long, value_delimiter = ',', required = true, value_parser = clap::value_parser!(u8).range(1..=100))]
        qf: Vec<u8>,
        /// Training images, if any, to enforce train/test disjointness
        #[arg(long, value_delimiter = ',')]
        train: Vec<PathBuf>,
        /// Directory for eval.csv and eval_summary.csv
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Tabular output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Transform and quantize one image into a .oide sidecar file
    Encode {
        image: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=100))]
        qf: u8,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Reconstruct an image from a .oide sidecar file
    Decode {
        sidecar: PathBuf,
        /// Decode with one specific kernel file
        #[arg(long, conflicts_with = "kernel_bank")]
        kernel: Option<PathBuf>,
        /// Decode with the nearest-QF kernel from a bank directory
        #[arg(long)]
        kernel_bank: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Pairwise Frobenius distances between learned kernels, as CSV
    KernelDist {
        /// Kernel files; may be omitted when --kernel-bank is given
        kernels: Vec<PathBuf>,
        /// Directory of .oidk files to load instead of explicit paths
        #[arg(long)]
        kernel_bank: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn run() -> Result<(), oidct_cli::CliError> {
    let cli = Cli::parse();
    let mut log = std::io::stdout();
    match cli.command {
        Command::Train {
            images,
            qf,
            lambda,
            out,
        } => {
            let config = ExperimentConfig::new(images, Vec::new(), qf, lambda, out)?;
            cmd_train(&config, &mut log)?;
        }
        Command::Eval {
            images,
            kernel_bank,
            qf,
            train,
            out,
            format: OutputFormat::Csv,
        } => {
            let config = ExperimentConfig::new(train, images, qf, None, out)?;
            let bank = load_kernel_bank(&kernel_bank)?;
            let report = cmd_eval(&config, &bank, &mut log)?;
            writeln!(
                log,
                "wrote {} and {}",
                report.rows_csv.display(),
                report.summary_csv.display()
            )?;
        }
        Command::Encode { image, qf, out } => {
            let path = cmd_encode(&image, qf, &out)?;
            writeln!(log, "wrote {}", path.display())?;
        }
        Command::Decode {
            sidecar,
            kernel,
            kernel_bank,
            out,
        } => {
            let choice = match (kernel, kernel_bank) {
                (Some(path), _) => KernelChoice::File(path),
                (None, Some(dir)) => KernelChoice::Bank(dir),
                (None, None) => KernelChoice::Standard,
            };
            let path = cmd_decode(&sidecar, &choice, &out)?;
            writeln!(log, "wrote {}", path.display())?;
        }
        Command::KernelDist {
            kernels,
            kernel_bank,
            out,
        } => {
            let mut bank = Vec::new();
            if let Some(dir) = kernel_bank {
                bank.extend(load_kernel_bank(&dir)?);
            }
            for path in &kernels {
                bank.push(kernel_file::load(path)?);
            }
            bank.sort_by_key(|k| k.training_qf());
            let matrix = cmd_kernel_dist(&bank, &out)?;
            writeln!(
                log,
                "wrote {} ({} kernels)",
                out.join("kernel_dist.csv").display(),
                matrix.qfs.len()
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
