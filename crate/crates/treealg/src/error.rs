use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("vertices do not form an antichain")]
    NotAntichain,
    #[error("vertex {0} is not strictly below the factor root")]
    NotBelow(String),
    #[error("unsupported sort {0}")]
    UnsupportedSort(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("tree is not thin")]
    NotThin,
    #[error("algebra has no omega-power table")]
    NoOmega,
    #[error("undefined table entry {0}")]
    Undefined(String),
    #[error("no split found with at most {0} levels")]
    SplitNotFound(usize),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("root must carry the top split value")]
    BadRootValue,
    #[error("value mismatch: {0}")]
    ValueMismatch(String),
    #[error("stage product undefined at component {0}")]
    StageNotInDomain(String),
    #[error("algebra has no merge table")]
    NoMergeTable,
    #[error("not evaluable: {0}")]
    NotEvaluable(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("bad decomposition: {0}")]
    BadDecomposition(String),
    #[error("no element is accepted")]
    NoValue,
    #[error("several elements are accepted: {0:?}")]
    MultipleValues(Vec<String>),
    #[error("meet undefined: {0}")]
    MeetUndefined(String),
    #[error("join undefined: {0}")]
    JoinUndefined(String),
    #[error("not meet-dense: {0}")]
    NotMeetDense(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
