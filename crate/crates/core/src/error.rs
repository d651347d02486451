use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("idyll mismatch: {0} vs {1}")]
    DescriptorMismatch(String, String),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("cannot parse {literal:?} as an element of {idyll}")]
    ParseElement { idyll: String, literal: String },
    #[error("unknown idyll {0:?}")]
    UnknownIdyll(String),
    #[error("morphism {rule} is not defined from {source_idyll}")]
    CarrierMismatch { rule: String, source_idyll: String },
    #[error("Grassmann-Plücker function is identically zero")]
    AllZero,
    #[error("Plücker relation not null at y = {y:?}, x = {x:?}")]
    Gp2Violation { y: Vec<String>, x: Vec<String> },
    #[error("{0} has an infinite carrier")]
    InfiniteCarrier(String),
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not submonomial: {0}")]
    NotSubmonomial(String),
    #[error("minor condition violated: {0}")]
    ConditionViolated(String),
    #[error("map is not F1-linear: {0}")]
    NotF1Linear(String),
    #[error("not a morphism: y = {y:?}, x = {x:?}")]
    NotMorphism { y: Vec<String>, x: Vec<String> },
    #[error("map is not a strong map")]
    NotStrong,
    #[error("arrow {arrow} is not a morphism: y = {y:?}, x = {x:?}")]
    MorphismViolation {
        arrow: String,
        y: Vec<String>,
        x: Vec<String>,
    },
    #[error("not a subrepresentation: {0}")]
    NotSubrepresentation(String),
    #[error("grading is not nice")]
    NotNiceGrading,
    #[error("invalid grading sequence: {0}")]
    InvalidSequence(String),
    #[error("no nice distinguishing sequence found: {0}")]
    NotFound(String),
}

impl Error {
    /// True for errors caused by exhausting an enumeration budget.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
