use thiserror::Error;

use crate::network::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(ValidationReport),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("endpoints must be distinct, got `{0}` twice")]
    SameEndpoints(String),

    #[error("`{0}`-`{1}` is not an edge")]
    NotAnEdge(String, String),

    #[error("ordering is not a permutation of the vertex set")]
    BadOrdering,

    #[error("walk is not reversible across edge {{{x}, {y}}}: c(x)p_xy = {forward}, c(y)p_yx = {backward}")]
    NotReversible {
        x: String,
        y: String,
        forward: f64,
        backward: f64,
    },

    #[error("grounded Laplacian is singular; the network is not connected")]
    Singular,

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed network document: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
