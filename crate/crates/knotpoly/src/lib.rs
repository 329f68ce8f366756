//! Exact computation of knot-group invariants from finite presentations:
//! Alexander polynomials via free differential calculus, twisted Alexander
//! polynomials for matrix representations over `Q` and `F_p`, Reidemeister
//! torsion of presentation complexes, and the decision criteria built on
//! them (fiberedness, epimorphism divisibility, deformation obstructions).
//!
//! Everything is computed in exact arithmetic; there is no floating point
//! anywhere in the crate.
//!
//! The companion guide under `book/` walks through the theory with runnable
//! examples; its code blocks are compiled as doc-tests (see the `guide`
//! module at the bottom of this file).

pub mod alexander;
pub mod field;
pub mod fox;
pub mod freegroup;
pub mod laurent;
pub mod presentation;
pub mod report;
pub mod representation;
pub mod torsion;
pub mod twisted;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    /// Syntactically malformed input; carries line and column.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    /// Structurally valid input that violates a mathematical precondition.
    #[error("{0}")]
    Semantic(String),

    /// A resource guard (e.g. search-space size) was exceeded.
    #[error("{0}")]
    Guard(String),

    /// A theorem-backed internal invariant failed; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for I/O and parse failures,
    /// 3 for semantic and guard failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 2,
            Error::Semantic(_) | Error::Guard(_) | Error::Internal(_) => 3,
        }
    }
}

// Compile the guide's code blocks as doc-tests so the book can never
// drift out of sync with the library.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/presentations.md")]
    mod presentations {}
    #[doc = include_str!("../../../book/src/fox-calculus.md")]
    mod fox_calculus {}
    #[doc = include_str!("../../../book/src/alexander.md")]
    mod alexander {}
    #[doc = include_str!("../../../book/src/representations.md")]
    mod representations {}
    #[doc = include_str!("../../../book/src/twisted.md")]
    mod twisted {}
    #[doc = include_str!("../../../book/src/torsion.md")]
    mod torsion {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
}
