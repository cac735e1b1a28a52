//! Shared test support for the workspace: independent reference
//! computations ([`oracle`]) and deterministic synthetic image corpora
//! ([`synth`]). Dev-dependency only, never part of the shipped library.

pub mod oracle;
pub mod synth;
