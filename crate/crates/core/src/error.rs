use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("triples ({a},{b},{c}) and ({b},{a},{c}) are both present")]
    InconsistentTriples { a: usize, b: usize, c: usize },
    #[error("x-coordinates must strictly increase; violated at vertex {index}")]
    NotXMonotone { index: usize },
    #[error("segment {seg} does not exist in a terrain with {vertices} vertices")]
    SegmentOutOfRange { seg: usize, vertices: usize },
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("label `{0}` is used both as a unary and as a binary label")]
    ArityClash(String),
    #[error("addpair needs two different unary labels, got `{0}` twice")]
    SameLabels(String),
    #[error("relabel from `{0}` to itself")]
    TrivialRelabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("point {0} is not a strictly convex hull vertex")]
    NotConvex(usize),
    #[error("need at least {needed} points, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error("points {0:?} of the line set are not collinear")]
    NotCollinear([usize; 3]),
    #[error("outlier {0} lies on the line through the collinear points")]
    OutlierOnLine(usize),
    #[error("point {0} is not strictly inside the hull of the others")]
    NotInterior(usize),
    #[error("the interior point is collinear with hull points {0} and {1}")]
    CollinearWithCenter(usize, usize),
    #[error("index {0} out of range")]
    BadIndex(usize),
    #[error("grid gadget verification failed: {0}")]
    Gadget(String),
    #[error("constructed expression does not reproduce the order type: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsoError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{name}` expects {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("`{0}` is used as both an element and a set")]
    Sort(String),
    #[error("macro `{0}` is defined twice")]
    DuplicateMacro(String),
    #[error("free variable `{0}` has no binding")]
    MissingBinding(String),
    #[error("structure has {0} points; set quantification is capped at {1}")]
    TooLarge(usize, usize),
    #[error("expected exactly one free set variable, found {0}")]
    FreeSets(usize),
    #[error("unknown library formula `{0}`")]
    UnknownFormula(String),
    #[error("annotation: {0}")]
    Annotation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("instance of size {n} exceeds the cap {cap} for method {method}")]
    TooLarge { n: usize, cap: usize, method: &'static str },
    #[error("method {0} is not available for this problem")]
    UnsupportedMethod(&'static str),
    #[error("k = {0} is outside the supported range {1}")]
    BadK(usize, &'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mso(#[from] MsoError),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("expression was not validated against a point set")]
    Unvalidated,
    #[error("state bound exceeded at node {node}: {states} > {bound}")]
    StateBound { node: usize, states: usize, bound: String },
}
