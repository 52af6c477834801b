use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("period mismatch: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("operator is not monic strictly triangular: {0}")]
    NotTriangular(String),
    #[error("expected order {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },
    #[error("period {n} and order {order} are not coprime")]
    NotCoprime { n: usize, order: usize },
    #[error("scaling constant must be nonzero")]
    ZeroScale,
    #[error("leading coefficient a^1 vanishes at index {0}")]
    VanishingLeading(usize),
    #[error("order 1 operators have no a^1 coefficient")]
    UnsupportedOrderOne,
    #[error("truncation order must be at least 1")]
    TruncationTooShort,
    #[error("monodromy is not scalar at the requested eigenvalue")]
    NonScalarMonodromy,
    #[error("operator is not superperiodic")]
    NotSuperperiodic,
    #[error("order {order} must be smaller than the period {n}")]
    OrderTooLarge { order: usize, n: usize },
    #[error("the Gale dual failed its superperiodicity test")]
    DualNotSuperperiodic,
    #[error("left and right quotients differ")]
    QuotientMismatch,
    #[error("operators do not commute")]
    CommutatorNonzero,
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("recovered eigenvalue differs between matrix entries")]
    InconsistentEigenvalue,
    #[error("polynomial Q has nonzero constant term")]
    NonzeroConstantTerm,
    #[error("eigenvalue e is zero")]
    ZeroEigenvalue,
    #[error("exact division left a nonzero remainder")]
    DivisionRemainder,
    #[error("adding a multiple of L (order {order}) would change the partner's order {partner}")]
    ScrambleOrder { order: usize, partner: usize },
    #[error("no real scaling constant exists")]
    NoRealScaling,
    #[error("generator failed: {0}")]
    Generator(String),
    #[error("parse error: {0}")]
    Parse(String),
}
