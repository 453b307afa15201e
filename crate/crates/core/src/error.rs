use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum of {max}", max = crate::field::MAX_ORDER)]
    OrderTooLarge(u32),
    #[error("geometry would have {points} points, above the cap of {cap}")]
    TooLarge { points: u64, cap: usize },
    #[error("invalid geometry rank {0}")]
    InvalidRank(u32),
    #[error("point index {index} out of range for a geometry of {len} points")]
    PointOutOfRange { index: usize, len: usize },
    #[error("operation requires a {expected} geometry")]
    WrongKind { expected: &'static str },
    #[error("operands live in different geometries")]
    GeometryMismatch,
    #[error("set is not a hyperplane")]
    NotHyperplane,
    #[error("hyperplane families are parallel or coincide")]
    ParallelFamilies,
    #[error("entry {0} of the sequence is not a flat")]
    NotAFlat(usize),
    #[error("sequence is not nested at entry {0}")]
    NotNested(usize),
    #[error("induced restriction has {0} elements, more than the oracle supports")]
    TooLargeForOracle(usize),
    #[error("contraction point {0} is red")]
    RedContraction(usize),
    #[error("basepoint is not an element of the operand")]
    InvalidBasepoint,
    #[error("no forbidden catalog for order {0}")]
    UnsupportedOrder(u32),
    #[error("fast path does not apply to this geometry")]
    WrongRegime,
    #[error("2^{points} colorings exceed the exhaustive budget of {budget}")]
    BudgetExceeded { points: usize, budget: u64 },
    #[error("point {0} is not green")]
    NotGreen(usize),
    #[error("component coloring is not a target")]
    ComponentNotTarget,
    #[error("invalid rank table: {0}")]
    InvalidRankTable(&'static str),
}
