use thiserror::Error;

/// Errors raised by the exact group machinery and the numeric checks built on it.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclotomic order {0} is not supported: it must be a positive multiple of 4 no larger than {max}", max = crate::cyclo::MAX_ORDER)]
    FieldOrder(u32),

    #[error("operands live in different cyclotomic fields (orders {0} and {1}); embed them into a common order first")]
    OrderMismatch(u32, u32),

    #[error("cannot embed Q(zeta_{from}) into Q(zeta_{to}): {from} does not divide {to}")]
    NotEmbeddable { from: u32, to: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("quaternion component is not real (not fixed by complex conjugation)")]
    NotReal,

    #[error("quaternion is not a unit quaternion")]
    NotUnit,

    #[error("element order exceeds the cap of {0}")]
    OrderCap(usize),

    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCap(usize),

    #[error("a group needs at least one generator")]
    NoGenerators,

    #[error("element is not a member of the group")]
    NotInGroup,

    #[error("the given subset is not a subgroup")]
    NotSubgroup,

    #[error("subgroup does not have index 2 in the group")]
    NotIndexTwo,

    #[error("m must be odd and >= 3 (got {0})")]
    InvalidM(u32),

    #[error("{what} is not a non-negative integer: {value}")]
    NonIntegral { what: &'static str, value: String },

    #[error("branch precondition violated: {0}")]
    BranchPrecondition(String),

    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
