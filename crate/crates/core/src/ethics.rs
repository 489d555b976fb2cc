//! Ethical hierarchy and the double-effect clauses C1 to C4.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::event::{
    causal_chain, effects_of, project, Change, EcTheory, Effect, Polarity, Utilities, Valence,
};
use crate::prover::{Proof, ProveOutcome, Prover};
use crate::scenario::{Scenario, ScenarioError};
use crate::syntax::{name, Formula, Name, Term};

pub const FORBIDDEN: &str = "forbidden";
pub const NEUTRAL: &str = "neutral";

/// Totally ordered deontic categories, lowest first, with a
/// classification of action types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hierarchy {
    categories: Vec<Name>,
    neutral: Name,
    classes: BTreeMap<Name, Name>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("the lowest category must be `forbidden`")]
    ForbiddenNotMinimal,
    #[error("category `{0}` listed twice")]
    Duplicate(String),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
}

impl Default for Hierarchy {
    fn default() -> Self {
        Hierarchy::new(
            &[FORBIDDEN, "civil", "tolerated", NEUTRAL, "supererogatory"],
            NEUTRAL,
        )
        .expect("default hierarchy is valid")
    }
}

impl Hierarchy {
    pub fn new(categories: &[&str], neutral: &str) -> Result<Hierarchy, HierarchyError> {
        if categories.first() != Some(&FORBIDDEN) {
            return Err(HierarchyError::ForbiddenNotMinimal);
        }
        let mut cats: Vec<Name> = Vec::new();
        for c in categories {
            if cats.iter().any(|d| &**d == *c) {
                return Err(HierarchyError::Duplicate(c.to_string()));
            }
            cats.push(name(c));
        }
        if !categories.contains(&neutral) {
            return Err(HierarchyError::UnknownCategory(neutral.to_string()));
        }
        Ok(Hierarchy {
            categories: cats,
            neutral: name(neutral),
            classes: BTreeMap::new(),
        })
    }

    pub fn categories(&self) -> &[Name] {
        &self.categories
    }

    pub fn set_class(&mut self, atype: &str, category: &str) -> Result<(), HierarchyError> {
        if !self.categories.iter().any(|c| &**c == category) {
            return Err(HierarchyError::UnknownCategory(category.to_string()));
        }
        self.classes.insert(name(atype), name(category));
        Ok(())
    }

    pub fn classify(&self, atype: &str) -> &str {
        self.classes.get(atype).unwrap_or(&self.neutral)
    }

    fn rank(&self, category: &str) -> usize {
        self.categories
            .iter()
            .position(|c| &**c == category)
            .unwrap_or(0)
    }

    pub fn at_least_neutral(&self, category: &str) -> bool {
        self.rank(category) >= self.rank(&self.neutral)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }

    fn from_bool(b: bool) -> Status {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One clause's outcome with a short explanation and any proofs that
/// support it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseResult {
    pub status: Status,
    pub justification: String,
    pub proofs: Vec<(Formula, Proof)>,
}

impl ClauseResult {
    fn plain(status: Status, justification: String) -> ClauseResult {
        ClauseResult {
            status,
            justification,
            proofs: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdeVerdict {
    pub c1: ClauseResult,
    pub c2: ClauseResult,
    pub c3a: ClauseResult,
    pub c3b: ClauseResult,
    pub c4: ClauseResult,
    pub net: i64,
    pub effects: Vec<Effect>,
}

impl DdeVerdict {
    pub fn clauses(&self) -> [(&'static str, &ClauseResult); 5] {
        [
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c3a", &self.c3a),
            ("c3b", &self.c3b),
            ("c4", &self.c4),
        ]
    }

    /// Compliant iff every clause passes; `unknown` counts against.
    pub fn compliant(&self) -> bool {
        self.clauses().iter().all(|(_, c)| c.status == Status::Pass)
    }

    /// All five clauses `unknown`, for when evaluation could not run.
    pub fn unknown(reason: &str) -> DdeVerdict {
        let u = || ClauseResult::plain(Status::Unknown, reason.to_string());
        DdeVerdict {
            c1: u(),
            c2: u(),
            c3a: u(),
            c3b: u(),
            c4: u(),
            net: 0,
            effects: Vec::new(),
        }
    }
}

pub fn check_c1(atype: &str, h: &Hierarchy) -> ClauseResult {
    let cat = h.classify(atype);
    let ok = h.at_least_neutral(cat);
    ClauseResult::plain(
        Status::from_bool(ok),
        format!(
            "`{atype}` is classified `{cat}`, {} `{}`",
            if ok { "at or above" } else { "below" },
            h.neutral
        ),
    )
}

/// Net utility of the effects and whether it exceeds `gamma`.
pub fn check_c2(effects: &[Effect], gamma: i64) -> (ClauseResult, i64) {
    let net: i64 = effects.iter().map(|e| e.utility).sum();
    let ok = net > gamma;
    (
        ClauseResult::plain(
            Status::from_bool(ok),
            format!(
                "net utility {net} {} gamma {gamma}",
                if ok { ">" } else { "<=" }
            ),
        ),
        net,
    )
}

/// The formula an agent would intend to bring about `change`.
pub fn intention_form(agent: &Term, t: u32, change: &Change) -> Formula {
    Formula::intends(agent.clone(), Term::moment(t), change.as_formula())
}

fn combine(parts: &[Status]) -> Status {
    if parts.contains(&Status::Fail) {
        Status::Fail
    } else if parts.contains(&Status::Unknown) {
        Status::Unknown
    } else {
        Status::Pass
    }
}

/// C3a: every good effect is provably intended and no other effect is.
/// C3b: no bad effect is provably intended. A timeout makes the clause
/// unknown unless another check already failed it.
pub fn check_c3(
    agent: &Term,
    t: u32,
    effects: &[Effect],
    facts: &[Formula],
    prover: &Prover<'_>,
) -> (ClauseResult, ClauseResult) {
    let mut a_parts = Vec::new();
    let mut a_notes = Vec::new();
    let mut a_proofs = Vec::new();
    let mut b_parts = Vec::new();
    let mut b_notes = Vec::new();
    let mut b_proofs = Vec::new();
    for e in effects {
        let goal = intention_form(agent, t, &e.change);
        let out = prover.prove(facts, &goal);
        let intended = match &out {
            ProveOutcome::Proved(_) => Some(true),
            ProveOutcome::NoProof => Some(false),
            ProveOutcome::Timeout => None,
        };
        let what = match intended {
            Some(true) => "intended",
            Some(false) => "not provably intended",
            None => "undecided (timeout)",
        };
        let good = e.valence == Valence::Good;
        let a = match (good, intended) {
            (_, None) => Status::Unknown,
            (true, Some(i)) => Status::from_bool(i),
            (false, Some(i)) => Status::from_bool(!i),
        };
        a_parts.push(a);
        a_notes.push(format!("{} effect {goal}: {what}", e.valence.label()));
        if let ProveOutcome::Proved(p) = &out {
            a_proofs.push((goal.clone(), p.clone()));
        }
        if e.valence == Valence::Bad {
            b_parts.push(match intended {
                None => Status::Unknown,
                Some(i) => Status::from_bool(!i),
            });
            b_notes.push(format!("bad effect {goal}: {what}"));
            if let ProveOutcome::Proved(p) = out {
                b_proofs.push((goal, p));
            }
        }
    }
    let join = |notes: Vec<String>, empty: &str| {
        if notes.is_empty() {
            empty.to_string()
        } else {
            notes.join("; ")
        }
    };
    (
        ClauseResult {
            status: combine(&a_parts),
            justification: join(a_notes, "no effects"),
            proofs: a_proofs,
        },
        ClauseResult {
            status: combine(&b_parts),
            justification: join(b_notes, "no bad effects"),
            proofs: b_proofs,
        },
    )
}

/// C4: no good effect's causal chain passes through a bad effect of the
/// same action.
pub fn check_c4(effects: &[Effect], theory: &EcTheory) -> Result<ClauseResult, ScenarioError> {
    let trace = project(theory)?;
    let bad: Vec<&Change> = effects
        .iter()
        .filter(|e| e.valence == Valence::Bad)
        .map(|e| &e.change)
        .collect();
    let mut notes = Vec::new();
    for g in effects.iter().filter(|e| e.valence == Valence::Good) {
        let chain = causal_chain(theory, &trace, &g.change)?;
        if let Some(l) = chain.iter().find(|l| {
            bad.iter().any(|b| {
                b.fluent == l.change.fluent
                    && b.polarity == l.change.polarity
                    && b.moment == l.change.moment
            })
        }) {
            return Ok(ClauseResult::plain(
                Status::Fail,
                format!(
                    "good effect {} is reached through bad effect {}",
                    g.change.as_formula(),
                    l.change.as_formula()
                ),
            ));
        }
        notes.push(format!(
            "{}: chain of {}",
            g.change.as_formula(),
            chain.len()
        ));
    }
    Ok(ClauseResult::plain(
        Status::Pass,
        if notes.is_empty() {
            "no good effects".to_string()
        } else {
            format!("no bad effect used as a means ({})", notes.join("; "))
        },
    ))
}

/// Evaluates C1 to C4 for `scenario`'s request, adding the requested
/// occurrence to the theory if it is not already there.
pub fn dde_compliant(
    scenario: &Scenario,
    prover: &Prover<'_>,
) -> Result<DdeVerdict, ScenarioError> {
    let r = scenario.request()?;
    let (theory, act) = scenario.theory_with_request()?;
    let effects = effects_of(&theory, act, &scenario.utilities)?;
    let atype = r.atype.to_string();
    let c1 = check_c1(&atype, &scenario.hierarchy);
    let (c2, net) = check_c2(&effects, scenario.gamma);
    let (c3a, c3b) = check_c3(&r.agent, r.moment, &effects, &scenario.facts, prover);
    let c4 = check_c4(&effects, &theory)?;
    Ok(DdeVerdict {
        c1,
        c2,
        c3a,
        c3b,
        c4,
        net,
        effects,
    })
}

/// Utility map from a list of (fluent, polarity, value).
pub fn utilities_from(entries: &[(Term, Polarity, i64)]) -> Utilities {
    Utilities {
        values: entries
            .iter()
            .map(|(f, p, v)| ((f.clone(), *p), *v))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::Cause;
    use crate::syntax::{Sort, FLUENT};
    use alloc::vec;

    fn effect(f: &str, u: i64) -> Effect {
        Effect {
            change: Change {
                fluent: Term::constant(f, Sort::new(FLUENT)),
                polarity: Polarity::Initiates,
                moment: 1,
                causes: vec![Cause {
                    occurrence: 0,
                    axiom: 0,
                }],
            },
            utility: u,
            valence: Valence::of(u),
        }
    }

    #[test]
    fn classification_defaults_to_neutral() {
        let mut h = Hierarchy::default();
        h.set_class("fire", FORBIDDEN).unwrap();
        h.set_class("rescue", "supererogatory").unwrap();
        h.set_class("grumble", "tolerated").unwrap();
        assert_eq!(h.classify("fire"), FORBIDDEN);
        assert_eq!(h.classify("wave"), NEUTRAL);
        assert_eq!(check_c1("fire", &h).status, Status::Fail);
        assert_eq!(check_c1("wave", &h).status, Status::Pass);
        assert_eq!(check_c1("rescue", &h).status, Status::Pass);
        assert_eq!(check_c1("grumble", &h).status, Status::Fail);
    }

    #[test]
    fn hierarchy_validation() {
        assert!(Hierarchy::new(&["civil", FORBIDDEN], "civil").is_err());
        assert!(Hierarchy::new(&[FORBIDDEN, "x", "x"], "x").is_err());
        assert!(Hierarchy::new(&[FORBIDDEN, "x"], "y").is_err());
    }

    #[test]
    fn c2_uses_strict_threshold() {
        assert_eq!(check_c2(&[], 0).0.status, Status::Fail);
        assert_eq!(check_c2(&[effect("a", -1)], 0).0.status, Status::Fail);
        let four_one = [
            effect("s1", 1),
            effect("s2", 1),
            effect("s3", 1),
            effect("s4", 1),
            effect("d", -1),
        ];
        let (r, net) = check_c2(&four_one, 0);
        assert_eq!((r.status, net), (Status::Pass, 3));
        assert_eq!(check_c2(&four_one, 3).0.status, Status::Fail);
    }

    #[test]
    fn unknown_is_not_compliant() {
        assert!(!DdeVerdict::unknown("timeout").compliant());
    }
}
