//! Dense numerical toolkit for making noisy quantum channels transparent.
//!
//! The library models quantum channels as Kraus sets over explicit tensor
//! factor structure, provides the generalized Pauli (clock/shift) frame and
//! its twirl, assembles the full transparency pipeline (ancilla preparation,
//! entangling unitary, noise exposure, inverse, correction) for any finite
//! dimension, and certifies the linear-optics and atom-cavity gate
//! decompositions as exact matrix identities.
//!
//! All stochastic operations take an explicit seed; there is no global RNG.

pub mod channel;
pub mod decomp;
pub mod error;
pub mod matrix;
pub mod protocol;
pub mod weyl;

pub use channel::{
    named_channel, negativity, random_cptp, ChoiMatrix, CptpReport, DensityState, KrausChannel,
};
pub use error::{Error, Result};
pub use matrix::{
    embed_on_factors, haar_random_unitary, psd_inverse_sqrt, random_gaussian_matrix, C64,
    ComplexMatrix, Tolerance,
};
pub use protocol::{
    assemble, correction_operation, entangling_unitary, sample_ancilla_noise, AncillaNoiseKind,
    AncillaNoiseSpec, AncillaOrder, CorrectionOp, CorrectionVariant, FactorizationReport,
    ProtocolAssembly,
};
pub use weyl::{PauliCoefficients, WeylFrame};
