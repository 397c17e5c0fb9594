use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid point identifier {0:?}: must be nonempty and contain no whitespace")]
    InvalidIdentifier(String),
    #[error("basis element mentions point {point:?} which is not in the universe")]
    BasisOutOfUniverse { point: String },
    #[error("points lie in no basis element: {}", .uncovered.join(", "))]
    CoverageViolation { uncovered: Vec<String> },
    #[error("point index {index} is outside a universe of {len} points")]
    PointOutOfUniverse { index: usize, len: usize },
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("oracle enumeration over {basis} basis elements exceeds the limit of {limit}")]
    OracleLimitExceeded { basis: usize, limit: usize },
    #[error("the two universes share points: {}", .shared.join(", "))]
    UniverseOverlap { shared: Vec<String> },
    #[error("bridge point {0:?} already belongs to one of the bridged universes")]
    BridgePointCollision(String),
    #[error("assignment is not total; missing: {}", .missing.join(", "))]
    TotalityError { missing: Vec<String> },
    #[error("coalition is not open")]
    NotOpen,
    #[error("coalition is empty")]
    EmptyCoalition,
    #[error("illegal commit; already committed to the other value: {}", .blocking.join(", "))]
    IllegalCommit { blocking: Vec<String> },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
