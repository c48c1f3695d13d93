use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p = 2 is not supported for local fields")]
    PrimeTwoUnsupported,
    #[error("{0} is not prime")]
    NotPrime(i128),
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("p^M does not fit in the machine word range; lower the precision")]
    PrecisionTooLarge,
    #[error("division by an element indistinguishable from zero")]
    DivisionByNearZero,
    #[error("unknown subfield marker")]
    UnknownSubfield,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("level {level} exceeds precision {precision}")]
    LevelExceedsPrecision { level: u32, precision: u32 },
    #[error("discrete logarithm failed: {0}")]
    LogFailure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension {space} of the hermitian space differs from the degree {algebra} of the algebra")]
    DimensionMismatch { space: usize, algebra: usize },
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("epsilon factor of component {component} is not real (imaginary part {imag:e})")]
    NotASign { component: usize, imag: f64 },
    #[error("splitting character does not restrict to the quadratic character of K/F")]
    SplittingCharacterInvalid,
    #[error("characters are given at incompatible levels")]
    LevelMismatch,
    #[error("the theta lift vanishes: sign vectors differ")]
    LiftVanishes,
    #[error("global character is ramified at an even place")]
    EvenPlaceRamifiedCharacter,
    #[error("component {component}: target signs multiply to -1")]
    ParityObstruction { component: usize },
    #[error("no lambda found among primes up to {bound}")]
    SearchExhausted { bound: u64 },
    #[error("good place {place} fails the root number condition")]
    BadSetIncomplete { place: String },
    #[error("no central L-value supplied for component {component}")]
    LValueMissing { component: usize },
    #[error("character is not conjugate-symplectic: {0}")]
    NotSelfDual(String),
    #[error("cutoffs disagree by {diff:e}")]
    ConvergenceFailure { diff: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PrimeTwoUnsupported => "PrimeTwoUnsupported",
            Error::NotPrime(_) => "NotPrime",
            Error::NotEisenstein(_) => "NotEisenstein",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::PrecisionTooLarge => "PrecisionTooLarge",
            Error::DivisionByNearZero => "DivisionByNearZero",
            Error::UnknownSubfield => "UnknownSubfield",
            Error::FieldMismatch => "FieldMismatch",
            Error::LevelExceedsPrecision { .. } => "LevelExceedsPrecision",
            Error::LogFailure(_) => "LogFailure",
            Error::Unsupported(_) => "Unsupported",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidCharacter(_) => "InvalidCharacter",
            Error::NotASign { .. } => "NotASign",
            Error::SplittingCharacterInvalid => "SplittingCharacterInvalid",
            Error::LevelMismatch => "LevelMismatch",
            Error::LiftVanishes => "LiftVanishes",
            Error::EvenPlaceRamifiedCharacter => "EvenPlaceRamifiedCharacter",
            Error::ParityObstruction { .. } => "ParityObstruction",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::BadSetIncomplete { .. } => "BadSetIncomplete",
            Error::LValueMissing { .. } => "LValueMissing",
            Error::NotSelfDual(_) => "NotSelfDual",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// Precision and convergence failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted(_)
                | Error::PrecisionTooLarge
                | Error::DivisionByNearZero
                | Error::LevelExceedsPrecision { .. }
                | Error::LogFailure(_)
                | Error::NotASign { .. }
                | Error::SearchExhausted { .. }
                | Error::ConvergenceFailure { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
