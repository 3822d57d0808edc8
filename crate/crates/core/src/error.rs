use alloc::string::String;

use crate::term::Position;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("position {0} does not exist in the term")]
    InvalidPosition(Position),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("rule {label}: the left-hand side is a variable")]
    VariableLhs { label: String },
    #[error("symbol {symbol} used with arity {found} but declared with arity {expected}")]
    ArityConflict {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol {symbol} is not part of the signature")]
    UnknownSymbol { symbol: String },
    #[error("duplicate rule label {0}")]
    DuplicateLabel(String),
}

/// Which clause of the syntactic ultra-WLL characterization a rule violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UltraWllClause {
    /// An unconditional rule that is not WLL.
    Unconditional,
    /// `l, t1, ..., t(k-1)` is not linear.
    LinearPrefix,
    /// A variable of the right-hand side occurs more than once in `l, t1, ..., tk`.
    RhsOccurrences,
}

impl core::fmt::Display for UltraWllClause {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            UltraWllClause::Unconditional => "unconditional rule is not WLL",
            UltraWllClause::LinearPrefix => "(a) l, t1, ..., t(k-1) is not linear",
            UltraWllClause::RhsOccurrences => {
                "(b) a right-hand-side variable occurs more than once in l, t1, ..., tk"
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("rule {rule}: condition {condition} is not deterministic")]
    NotDeterministic { rule: String, condition: usize },
    #[error("rule {rule} is not WLL (variable {variable})")]
    NotWll { rule: String, variable: String },
    #[error("rule {rule} is not ultra-WLL: {clause}")]
    NotUltraWll { rule: String, clause: UltraWllClause },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("the system is not an unconditional TRS (rule {rule})")]
    NotTrs { rule: String },
    #[error("rule {rule} is not a deterministic rule of type 3 or lower")]
    NotThreeDctrs { rule: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlacementError {
    #[error("term {0} is not well-placed over the extended signature")]
    IllPlaced(String),
}
