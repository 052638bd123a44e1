use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("leading coefficient vanishes modulo {0}")]
    LeadingCoefficientVanishes(u64),
    #[error("non-monogenic at {p}: Dedekind criterion fails and one enlargement round does not certify p-maximality")]
    NonMonogenic { p: u64 },
    #[error("possible zero embedding at real place {place} (max precision {bits} bits)")]
    PossibleZeroEmbedding { place: usize, bits: u32 },
    #[error("prime splitting failed at p = {p}: {reason}")]
    SplittingFailed { p: u64, reason: String },
    #[error("use trusted input: residue characteristic of {0} is 2")]
    EvenResidueCharacteristic(String),
    #[error("parity violation: {finite} finite + {real} real ramified places is odd")]
    Parity { finite: usize, real: usize },
    #[error("ramification mismatch: {0}")]
    RamificationMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing splitting data for q = {0}")]
    MissingSplittingData(u64),
    #[error("inconsistent signature data: {0}")]
    InconsistentSignature(String),
    #[error("not a degree-{expected} Hecke matrix: row {row} of T_{label} sums to {got}")]
    RowSum {
        label: String,
        row: usize,
        expected: String,
        got: String,
    },
    #[error("edge list inconsistent with matrix: {0}")]
    EdgeMismatch(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("group order {0} exceeds the enumeration limit")]
    OrderOverflow(String),
    #[error("matrices T_{0} and T_{1} do not commute")]
    NonCommuting(String, String),
    #[error("weighted symmetry fails for T_{label} at ({i}, {j})")]
    Symmetry { label: String, i: usize, j: usize },
    #[error("empty eigenvalue table")]
    EmptyTable,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Unsupported(_)
            | Error::NonMonogenic { .. }
            | Error::EvenResidueCharacteristic(_)
            | Error::OrderOverflow(_)
            | Error::MissingSplittingData(_) => ErrorKind::Unsupported,
            _ => ErrorKind::Validation,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
