use std::fmt;

use crate::Rational;

/// Two distinct pairings with the same total length.
///
/// Edges are zero-based `(tail, head)` pairs; `Display` prints them one-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieWitness {
    pub first: Vec<(usize, usize)>,
    pub second: Vec<(usize, usize)>,
}

impl fmt::Display for TieWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |edges: &[(usize, usize)]| {
            edges
                .iter()
                .map(|&(x, y)| format!("{}>{}", x + 1, y + 1))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "{{{}}} ties {{{}}}",
            show(&self.first),
            show(&self.second)
        )
    }
}

/// Errors raised by every operation in the crate.
///
/// Point indices are stored zero-based and displayed one-based.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("TooFewPoints: a metric space needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("DimensionMismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("NonZeroDiagonal: entry ({p},{p}) is not zero", p = .0 + 1)]
    NonZeroDiagonal(usize),
    #[error("NotSymmetric: entries ({a},{b}) and ({b},{a}) differ", a = .0 + 1, b = .1 + 1)]
    NotSymmetric(usize, usize),
    #[error("NonPositiveDistance: entry ({a},{b}) is not positive", a = .0 + 1, b = .1 + 1)]
    NonPositiveDistance(usize, usize),
    #[error("TriangleViolation: rho({x},{z}) > rho({x},{y}) + rho({y},{z})", x = .0 + 1, y = .1 + 1, z = .2 + 1)]
    TriangleViolation(usize, usize, usize),
    #[error("EntryOutOfRange: f({a},{b}) = {2} is not strictly between 0 and 1", a = .0 + 1, b = .1 + 1)]
    EntryOutOfRange(usize, usize, Rational),
    #[error("RetryLimitExceeded: no generic metric after {0} attempts")]
    RetryLimitExceeded(usize),
    #[error("SupplyMismatch: supplies sum to {supplied} but there are {sinks} sinks")]
    SupplyMismatch { supplied: usize, sinks: usize },
    #[error("UnknownPoint: point {p} is not in the space", p = .0 + 1)]
    UnknownPoint(usize),
    #[error("SelfLoop: edge ({p},{p})", p = .0 + 1)]
    SelfLoop(usize),
    #[error("NotAdmissible: the edge set supports no 1-Lipschitz tight function")]
    NotAdmissible,
    #[error("NotATree: {0}")]
    NotATree(String),
    #[error("BadOrientation: point {p} has both incoming and outgoing edges", p = .0 + 1)]
    BadOrientation(usize),
    #[error("NotStrict: the metric has a degenerate triangle")]
    NotStrict,
    #[error("NotGeneric: {0}")]
    NotGeneric(TieWitness),
    #[error("BudgetExceeded: {0}")]
    BudgetExceeded(String),
    #[error("ArityMismatch: {0}")]
    ArityMismatch(String),
    #[error("InternalContradiction: {0}")]
    InternalContradiction(String),
    #[error("FormulaMismatch: {0}")]
    FormulaMismatch(String),
    #[error("NotWhite: point {p} has no outgoing edges", p = .0 + 1)]
    NotWhite(usize),
    #[error("SamePoint: vertex measure needs two distinct points, got {p} twice", p = .0 + 1)]
    SamePoint(usize),
    #[error("NotBalanced: coefficients sum to {0}")]
    NotBalanced(Rational),
    #[error("RegularityViolation: pair ({a},{b}) has pairing {2} with the witness", a = .0 + 1, b = .1 + 1)]
    RegularityViolation(usize, usize, Rational),
    #[error("EmptyPart: the bipartition must leave both sides non-empty")]
    EmptyPart,
    #[error("SizeMismatch: {0} points vs {1} points")]
    SizeMismatch(usize, usize),
}

impl Error {
    /// Exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::BudgetExceeded(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
