use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Assume,
    NegateGoal,
    /// K(a,t,p) gives p.
    S1,
    /// K(a,t,p) gives B(a,t,p).
    S2,
    /// M(a,t,p -> q) and M(a,t,p) give M(a,t,q), for M in {K, B}.
    S3,
    /// M(a,t,p1 & ... & pn) gives M(a,t,pi).
    S4,
    S1Axiom,
    S2Axiom,
    S3Axiom,
    S4Axiom,
    /// `forall x:S (= x x)`.
    Reflexivity,
    Cnf,
    Resolve,
    Factor,
    /// Drops positive equalities between terms that name distinct
    /// elements under unique names.
    Distinct,
    Contradiction,
}

impl Rule {
    pub const ALL: [Rule; 16] = [
        Rule::Assume,
        Rule::NegateGoal,
        Rule::S1,
        Rule::S2,
        Rule::S3,
        Rule::S4,
        Rule::S1Axiom,
        Rule::S2Axiom,
        Rule::S3Axiom,
        Rule::S4Axiom,
        Rule::Reflexivity,
        Rule::Cnf,
        Rule::Resolve,
        Rule::Factor,
        Rule::Distinct,
        Rule::Contradiction,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Rule::Assume => "assume",
            Rule::NegateGoal => "negate-goal",
            Rule::S1 => "S1",
            Rule::S2 => "S2",
            Rule::S3 => "S3",
            Rule::S4 => "S4",
            Rule::S1Axiom => "S1-ax",
            Rule::S2Axiom => "S2-ax",
            Rule::S3Axiom => "S3-ax",
            Rule::S4Axiom => "S4-ax",
            Rule::Reflexivity => "refl",
            Rule::Cnf => "cnf",
            Rule::Resolve => "resolve",
            Rule::Factor => "factor",
            Rule::Distinct => "distinct",
            Rule::Contradiction => "contradiction",
        }
    }

    pub fn from_label(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.label() == s)
    }

    pub(crate) fn from_axiom_label(s: &str) -> Rule {
        match s {
            "S1-ax" => Rule::S1Axiom,
            "S2-ax" => Rule::S2Axiom,
            "S3-ax" => Rule::S3Axiom,
            _ => Rule::S4Axiom,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One proof line. `premises` are 0-based indices of earlier steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub rule: Rule,
    pub premises: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Proof {
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Numbered text lines, `N. formula [rule premises]`, numbering from 1.
    pub fn lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut line = format!("{}. {} [{}", i + 1, s.formula, s.rule);
                for p in &s.premises {
                    line.push_str(&format!(" {}", p + 1));
                }
                line.push(']');
                line
            })
            .collect()
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.lines() {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}
