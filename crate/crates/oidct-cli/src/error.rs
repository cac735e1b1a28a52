use crate::config::ConfigError;
use crate::image_io::ImageIoError;
use crate::kernel_file::KernelFileError;
use crate::ppm::PpmError;
use crate::sidecar::SidecarError;

/// Top-level command error; every variant renders as a one-line diagnostic.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    ImageIo(#[from] ImageIoError),

    #[error(transparent)]
    Ppm(#[from] PpmError),

    #[error(transparent)]
    KernelFile(#[from] KernelFileError),

    #[error(transparent)]
    Sidecar(#[from] SidecarError),

    #[error(transparent)]
    Image(#[from] oidct::Error),

    #[error("no readable training images produced any samples")]
    NoTrainingSamples,

    #[error("no test images given")]
    NoTestImages,

    #[error("kernel distance needs at least 2 kernels, found {found}")]
    NeedTwoKernels { found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
