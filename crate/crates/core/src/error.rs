use thiserror::Error;

/// Failure modes shared by every layer of the crate.
///
/// Operations never guess: when an answer depends on coefficients outside
/// the represented window or precision, they return one of these instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("modulus is not irreducible over F_{p}")]
    NotIrreducible { p: u32 },
    #[error("elements belong to different fields or towers")]
    FieldMismatch,
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element has positive pi-content")]
    PositivePiContent,
    #[error("torsor datum is trivial to the inspected depth")]
    TrivialLocally,
    #[error("mixed torsors live on different schemes")]
    SchemeMismatch,
    #[error("no torsor designated at node {node}")]
    MissingTorsorAtNode { node: usize },
    #[error("pi-content {content} is not divisible by p (ramification index is not 1)")]
    RamifiedInputContent { content: i64 },
    #[error("a ramified extension of degree {c} is required")]
    ExtensionRequired { c: u32 },
    #[error("n = {n} is outside 0 < n <= v(lambda) = {v_lambda}")]
    BadN { n: i64, v_lambda: i64 },
    #[error("no n with 0 < n < v(lambda) = {v_lambda}; a ramified extension is needed")]
    NeedsRamifiedExtension { v_lambda: i64 },
    #[error("datum is a p-th power to the inspected depth")]
    TrivialDatum,
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Error::BadParameters(_) => "BadParameters",
            Error::NotIrreducible { .. } => "NotIrreducible",
            Error::FieldMismatch => "FieldMismatch",
            Error::ZeroFunction => "ZeroFunction",
            Error::WindowTooSmall(_) => "WindowTooSmall",
            Error::NotAUnit => "NotAUnit",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::PositivePiContent => "PositivePiContent",
            Error::TrivialLocally => "TrivialLocally",
            Error::SchemeMismatch => "SchemeMismatch",
            Error::MissingTorsorAtNode { .. } => "MissingTorsorAtNode",
            Error::RamifiedInputContent { .. } => "RamifiedInputContent",
            Error::ExtensionRequired { .. } => "ExtensionRequired",
            Error::BadN { .. } => "BadN",
            Error::NeedsRamifiedExtension { .. } => "NeedsRamifiedExtension",
            Error::TrivialDatum => "TrivialDatum",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
