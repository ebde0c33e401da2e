use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("index out of range in {context}: {index} not in {range}")]
    IndexOutOfRange {
        context: String,
        index: usize,
        range: String,
    },

    #[error("homomorphism {context} does not respect relations: image of relation {relation} is not a relation of the target")]
    IllDefinedHom { context: String, relation: usize },

    #[error("invalid group presentation: {0}")]
    InvalidGroup(String),

    #[error("relation is not a partial order: {0} and {1} are mutually below each other")]
    NotAntisymmetric(String, String),

    #[error("poset is not graded: [{low},{high}] has maximal chains {short:?} and {long:?} of different lengths")]
    NotGraded {
        low: String,
        high: String,
        short: Vec<String>,
        long: Vec<String>,
    },

    #[error("interval poset is not thin: {from} and {to} are joined through {middles} intermediate intervals instead of 2")]
    NotThin {
        from: String,
        to: String,
        middles: usize,
    },

    #[error("no consistent sign assignment exists for the interval covers")]
    NonOrientable,

    #[error("differentials leaving degree {degree} do not compose to zero (entry {row}, {col})")]
    NotAComplex { degree: i64, row: usize, col: usize },

    #[error("missing group for interval {0}")]
    MissingGroup(String),

    #[error("missing map for cover extension {from} -> {to}")]
    MissingMap { from: String, to: String },

    #[error("{from} -> {to} is not an inclusion of intervals")]
    NotAnInclusion { from: String, to: String },

    #[error("inclusion does not preserve interval length at {interval}: {sub} vs {ambient}")]
    NotLengthPreserving {
        interval: String,
        sub: usize,
        ambient: usize,
    },

    #[error("coefficient system does not live on {0}")]
    BaseMismatch(String),

    #[error("cochain in degree {degree} is not a cocycle")]
    NotClosed { degree: i64 },

    #[error("obstruction values for a {0}-cube boundary are nonabelian; declare the coefficients linear to proceed")]
    NonAbelian(usize),

    #[error("{0}")]
    NotFunctorial(String),

    #[error("{0}")]
    InvalidInput(String),
}
