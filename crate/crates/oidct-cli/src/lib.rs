//! Persistence formats and the experiment harness behind the `oidct`
//! binary: PPM/PNG image I/O, the kernel overhead file, the encoded-image
//! sidecar container, CSV reporting, and the train / eval / encode /
//! decode / kernel-dist commands.

pub mod commands;
pub mod config;
mod error;
pub mod image_io;
pub mod kernel_file;
pub mod ppm;
pub mod report;
pub mod sidecar;

pub use error::CliError;
