use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arithmetic overflow evaluating binomial({row}, {col})")]
    BinomialOverflow { row: i64, col: u32 },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),

    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),

    #[error("unbalanced coefficient sequence: C0 has {c0} columns but C1 has {c1}")]
    SideImbalance { c0: i128, c1: i128 },

    #[error("expanded matrices would hold {cells} cells, above the cap of {cap}")]
    TooLarge { cells: u128, cap: u128 },

    #[error("n = {n} exceeds the subset enumeration cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("{0}")]
    Domain(String),

    #[error("malformed codebook: {0}")]
    Codebook(String),

    #[error("malformed PBM data: {0}")]
    Pbm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
