//! In-memory scenario: everything the guard needs to adjudicate a request.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::SortError;
use crate::ethics::Hierarchy;
use crate::event::{EcTheory, EventError, Utilities};
use crate::syntax::{Formula, Signature, Sort, Term, ACTION_TYPE, AGENT};

/// The action whose execution is being adjudicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Request {
    pub agent: Term,
    pub atype: Term,
    pub moment: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Scenario {
    pub sig: Signature,
    pub facts: Vec<Formula>,
    pub theory: EcTheory,
    pub hierarchy: Hierarchy,
    pub utilities: Utilities,
    /// C2 threshold: the net utility must exceed it.
    pub gamma: i64,
    pub request: Option<Request>,
    pub guardian: Option<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("fact {index}: {source}")]
    Fact { index: usize, source: SortError },
    #[error("`{0}` must be a declared constant of sort Agent")]
    NotAnAgent(String),
    #[error("`{0}` must be a declared constant of sort ActionType")]
    NotAnActionType(String),
    #[error("request moment {moment} exceeds horizon {horizon}")]
    RequestAfterHorizon { moment: u32, horizon: u32 },
    #[error("scenario has no request")]
    NoRequest,
    #[error("gamma must be non-negative, got {0}")]
    NegativeGamma(i64),
    #[error(transparent)]
    Event(#[from] EventError),
}

impl Scenario {
    fn declared(&self, t: &Term, sort: &str) -> bool {
        match t {
            Term::Const { name, .. } => self
                .sig
                .constants()
                .any(|(c, s)| c == name && self.sig.is_subsort(s, &Sort::new(sort))),
            _ => false,
        }
    }

    pub fn request(&self) -> Result<&Request, ScenarioError> {
        self.request.as_ref().ok_or(ScenarioError::NoRequest)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (index, f) in self.facts.iter().enumerate() {
            self.sig
                .check_closed(f)
                .map_err(|source| ScenarioError::Fact { index, source })?;
        }
        if let Some(r) = &self.request {
            if !self.declared(&r.agent, AGENT) {
                return Err(ScenarioError::NotAnAgent(r.agent.to_string()));
            }
            if !self.declared(&r.atype, ACTION_TYPE) {
                return Err(ScenarioError::NotAnActionType(r.atype.to_string()));
            }
            if r.moment > self.theory.horizon {
                return Err(ScenarioError::RequestAfterHorizon {
                    moment: r.moment,
                    horizon: self.theory.horizon,
                });
            }
        }
        if let Some(g) = &self.guardian {
            if !self.declared(g, AGENT) {
                return Err(ScenarioError::NotAnAgent(g.to_string()));
            }
        }
        if self.gamma < 0 {
            return Err(ScenarioError::NegativeGamma(self.gamma));
        }
        crate::event::project(&self.theory)?;
        Ok(())
    }

    /// The theory with the request's occurrence present, and its index.
    pub fn theory_with_request(&self) -> Result<(EcTheory, usize), ScenarioError> {
        let r = self.request()?;
        let mut th = self.theory.clone();
        let occ = crate::event::Occurrence {
            event: Term::action(r.agent.clone(), r.atype.clone()),
            moment: r.moment,
        };
        let idx = match th.occurrences.iter().position(|o| *o == occ) {
            Some(i) => i,
            None => {
                th.occurrences.push(occ);
                th.occurrences.len() - 1
            }
        };
        Ok((th, idx))
    }
}
