use serde::Serialize;
use thiserror::Error;

use crate::id::ElementId;

/// A single reason a candidate graph is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<ElementId>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enumeration of {what} exceeds cap {cap}")]
    EnumerationCapExceeded { what: String, cap: u128 },
    #[error("{what} budget of {cap} exceeded")]
    BudgetExceeded { what: &'static str, cap: u128 },
    #[error("malformed functor value: {0}")]
    MalformedValue(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("functor specs differ")]
    SpecMismatch,
    #[error("subgraphs live in different parents")]
    ParentMismatch,
    #[error("not a congruence: edges {0} and {1} are identified but their images differ")]
    NotACongruence(ElementId, ElementId),
    #[error("invalid graph: {}", .0.iter().map(|v| v.message.clone()).collect::<Vec<_>>().join("; "))]
    InvalidGraph(Vec<Violation>),
    #[error("not a homomorphism: square fails at edge {0}")]
    NotAHomomorphism(ElementId),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty color set: {0}")]
    EmptyColorSet(String),
    #[error("not an orientation at edge {0}")]
    NotAnOrientation(ElementId),
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::EnumerationCapExceeded { .. } | Error::BudgetExceeded { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::EnumerationCapExceeded { .. } => "enumeration_cap_exceeded",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::MalformedValue(_) => "malformed_value",
            Error::DomainMismatch(_) => "domain_mismatch",
            Error::SpecMismatch => "spec_mismatch",
            Error::ParentMismatch => "parent_mismatch",
            Error::NotACongruence(..) => "not_a_congruence",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::NotAHomomorphism(_) => "not_a_homomorphism",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::Unsupported(_) => "unsupported",
            Error::EmptyColorSet(_) => "empty_color_set",
            Error::NotAnOrientation(_) => "not_an_orientation",
            Error::Format(_) => "format",
        }
    }
}

/// Search limits shared by every enumerating operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub enumeration: u128,
    pub colorings: u128,
    pub homs: u128,
}

pub const DEFAULT_CAP: u128 = 1_000_000;

impl Default for Caps {
    fn default() -> Self {
        Caps { enumeration: DEFAULT_CAP, colorings: DEFAULT_CAP, homs: DEFAULT_CAP }
    }
}

impl Caps {
    /// Parses `"enum,colorings,homs"`; empty fields keep the default.
    pub fn parse(s: &str) -> Result<Caps, Error> {
        let mut caps = Caps::default();
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() > 3 {
            return Err(Error::Format(format!("expected at most three caps, got {}", parts.len())));
        }
        let slots = [&mut caps.enumeration, &mut caps.colorings, &mut caps.homs];
        for (slot, p) in slots.into_iter().zip(parts) {
            if !p.is_empty() {
                *slot = p.parse().map_err(|_| Error::Format(format!("bad cap {p:?}")))?;
            }
        }
        Ok(caps)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
