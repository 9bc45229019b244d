use std::fmt;

use thiserror::Error;

/// One structural problem found while validating a ribbon graph description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateVertexId(String),
    DuplicateEdgeId(String),
    HalfEdgeInMultipleRotations(String),
    HalfEdgeRepeated { half_edge: String, vertex: String },
    HalfEdgeNotInRotation(String),
    HalfEdgeWithoutEdge(String),
    HalfEdgeInMultipleEdges(String),
    EdgeEndsIdentical(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertexId(v) => write!(f, "duplicate vertex id `{v}`"),
            Violation::DuplicateEdgeId(e) => write!(f, "duplicate edge id `{e}`"),
            Violation::HalfEdgeInMultipleRotations(h) => {
                write!(f, "half-edge `{h}` appears in more than one rotation")
            }
            Violation::HalfEdgeRepeated { half_edge, vertex } => {
                write!(f, "half-edge `{half_edge}` repeated in rotation of `{vertex}`")
            }
            Violation::HalfEdgeNotInRotation(h) => {
                write!(f, "half-edge `{h}` is an edge end but not in any rotation")
            }
            Violation::HalfEdgeWithoutEdge(h) => {
                write!(f, "half-edge `{h}` is in a rotation but not an end of any edge")
            }
            Violation::HalfEdgeInMultipleEdges(h) => {
                write!(f, "half-edge `{h}` is an end of more than one edge")
            }
            Violation::EdgeEndsIdentical(e) => write!(f, "edge `{e}` has identical ends"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ribbon graph: {}", join(.0))]
    InvalidGraph(Vec<Violation>),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("edge `{0}` is a loop: loop contraction unsupported (ribbon surfaces out of scope)")]
    LoopContraction(String),
    #[error("gap {gap} out of range at vertex `{vertex}` (degree {degree})")]
    InvalidGap {
        vertex: String,
        gap: usize,
        degree: usize,
    },
    #[error("marked vertices must be distinct, got `{0}` twice")]
    SameEndpoints(String),
    #[error("graph has {edges} edges, over the enumeration budget of {budget}")]
    BudgetExceeded { edges: usize, budget: usize },
    #[error("not planar: {0}")]
    NotPlanar(String),
    #[error("not orientable: {0}")]
    NotOrientable(String),
    #[error("duplicate edge weight `{0}`")]
    DuplicateWeights(String),
    #[error("marked vertices `{0}` and `{1}` lie in different components")]
    Disconnected(String, String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("singular linear system")]
    SingularSystem,
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("weight exponent outside {{0, 1}}: {0}")]
    MapExponent(String),
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
