//! Error taxonomy shared by the whole engine.
//!
//! Every fallible operation returns one of these variants; the CLI maps
//! them onto its exit-code contract (1 = I/O, 2 = validation-class,
//! 3 = infeasibility-class).

use thiserror::Error;

use crate::dimensioning::FeasibilityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scenario field violated a constraint. The message names both.
    #[error("validation error: {field}: {message}")]
    Validation { field: String, message: String },

    /// A platform or offer id was referenced but never defined.
    #[error("unknown {kind} reference '{id}'")]
    UnknownReference { kind: &'static str, id: String },

    /// A computation needed a parameter the scenario did not supply.
    #[error("missing parameter: {0}")]
    MissingParameter(String),

    /// A requested availability lies above the highest derating anchor.
    #[error("requested availability {requested} exceeds the highest derating anchor {highest}")]
    OutOfRange { requested: String, highest: String },

    /// Demanded wholesale links exceed what the platform can sell.
    #[error("capacity exceeded{}: {demanded} links demanded, {sellable} sellable",
            year.map(|y| format!(" in year {y}")).unwrap_or_default())]
    CapacityExceeded {
        year: Option<u32>,
        demanded: u64,
        sellable: u64,
    },

    /// An architecture cannot serve the scenario as configured.
    #[error("architecture '{architecture}' infeasible: {detail}")]
    Infeasible {
        architecture: String,
        detail: String,
        report: Option<FeasibilityReport>,
    },

    /// IRR is undefined for a series whose flows never change sign.
    #[error("cash-flow series has no sign change; IRR is undefined")]
    NoSignChange,

    /// The cash flows change sign but NPV has no root in the search range.
    #[error("no IRR root in the search range (-0.99, 10.0)")]
    NoRootInRange,

    /// The scenario document could not be parsed at all.
    #[error("scenario parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Exit code for command-line use: 1 = I/O, 2 = bad input, 3 = infeasible.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::Validation { .. }
            | Error::UnknownReference { .. }
            | Error::MissingParameter(_)
            | Error::NoSignChange
            | Error::NoRootInRange
            | Error::Parse(_) => 2,
            Error::OutOfRange { .. } | Error::CapacityExceeded { .. } | Error::Infeasible { .. } => 3,
        }
    }
}
