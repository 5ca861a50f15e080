use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid element for {group}: {reason}")]
    InvalidElement { group: String, reason: String },

    #[error("64-bit overflow while computing in {0}")]
    Overflow(String),

    #[error("operands belong to different groups ({left} vs {right})")]
    ContextMismatch { left: String, right: String },

    #[error("incompatible families: {0}")]
    IncompatibleFamilies(String),

    #[error("size budget exceeded: more than {limit} elements")]
    BudgetExceeded { limit: usize },

    #[error("set is not symmetric")]
    NotSymmetric,

    #[error("set does not contain the identity")]
    MissingIdentity,

    #[error("set is empty")]
    EmptySet,

    #[error("intersection is empty")]
    EmptyIntersection,

    #[error("generating set does not generate the group ({reached} of {order} elements reached)")]
    NotGenerating { reached: usize, order: u64 },

    #[error("exact Cheeger scan supports at most {limit} vertices, graph has {vertices}")]
    TooLargeForExact { vertices: usize, limit: usize },

    #[error("operation requires a finite group, {0} is infinite")]
    InfiniteGroup(String),

    #[error("operation requires an abelian group, {0} is not abelian")]
    NotAbelian(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
