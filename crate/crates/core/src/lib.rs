//! Domain wall partition functions for two elliptic face models.

pub mod elliptic;
pub mod error;
pub mod felderhof;
pub mod lattice;
pub mod ps;
pub mod verification;

pub use elliptic::{EllipticContext, HalfBracketArg};
pub use error::{Error, Result};
pub use felderhof::{EdgeLabels, FelderhofVertexKind, SymbolicHeight};
pub use lattice::{
    build_dwbc, dwpf_bruteforce, dwpf_transfer, enumerate_configurations, Configuration, LatticeSpec, ModelKind,
    ModelParams,
};
pub use ps::{HeightVector, OmegaMatrix, PsVertexKind, Sign};
pub use verification::{compare_brute_closed, dwpf_closed, dwpf_felderhof_closed, dwpf_ps_closed, PeriodShift, VerificationReport};
