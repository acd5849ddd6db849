use thiserror::Error;

use crate::model::{RecordId, RecordPair};
use crate::oracle::OracleError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library. Oracle-side failures live in
/// [`crate::oracle::OracleError`] so the refinement loop can treat them per
/// question.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("record id must be non-empty")]
    EmptyRecordId,
    #[error("pair members must differ (got {0} twice)")]
    SelfPair(RecordId),
    #[error("attribute {name:?} appears twice in record {id}")]
    DuplicateAttribute { id: RecordId, name: String },
    #[error("duplicate record id {0}")]
    DuplicateRecordId(RecordId),
    #[error("record {0} is not in the universe")]
    MemberNotInUniverse(RecordId),
    #[error("pair {0} lies outside the distribution universe")]
    PairOutsideUniverse(RecordPair),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition universes differ")]
    UniverseMismatch,
    #[error("duplicate partition in distribution")]
    DuplicatePartition,
    #[error("distribution has no entries")]
    EmptyDistribution,
    #[error("all partition weights are zero")]
    AllZeroWeights,
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("distribution is not normalized (sum = {0})")]
    Unnormalized(f64),
    #[error("entropy base must be > 1 (got {0})")]
    InvalidLogBase(f64),
    #[error("pruning would remove every entry")]
    PruneEmptied,
    #[error("matcher config has no positive attribute weight")]
    EmptyAttributeWeights,
    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),
    #[error("duplicate score for pair {pair} from source {source_label:?}")]
    DuplicateScore { pair: RecordPair, source_label: String },
    #[error("no score sources supplied")]
    EmptySourceList,
    #[error("blocking component of {size} records exceeds the enumeration cap of {cap}; raise the threshold tau to split it")]
    ComponentTooLarge { size: usize, cap: usize },
    #[error("default pair probability must lie in (0,1) (got {0})")]
    DefaultProbOutOfRange(f64),
    #[error("component universes overlap on record {0}")]
    OverlappingUniverses(RecordId),
    #[error("unknown record id {0}")]
    UnknownRecordId(RecordId),
    #[error("malformed prompt template: {0}")]
    MalformedTemplate(String),
    #[error("candidate {0} is already chosen")]
    DuplicateCandidate(RecordPair),
    #[error("exhaustive selection supports at most {max} candidates (got {got})")]
    TooManyCandidates { got: usize, max: usize },
    #[error("question costs must be positive (pair {0})")]
    NonPositiveCost(RecordPair),
    #[error("theta must lie in (0,1) (got {0}); theta = 1 requires an explicit override")]
    InvalidTheta(f64),
    #[error("pair {0} appears twice in one answer batch")]
    DuplicatePairInBatch(RecordPair),
    #[error("posterior normalizer is zero")]
    ZeroNormalizer,
    #[error("labeled sample is empty")]
    EmptySample,
    #[error("input has no `id` column")]
    MissingIdColumn,
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("{0}")]
    Io(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
