//! Discrete event calculus: projection, counterfactual effects and causal
//! chains.
//!
//! An occurrence at moment `m` whose axiom guard holds at `m` changes its
//! fluent from `m + 1` on. Effect axioms are ground: the event and fluent
//! are matched by equality.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::syntax::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Initiates,
    Terminates,
}

impl Polarity {
    pub fn keyword(self) -> &'static str {
        match self {
            Polarity::Initiates => "initiates",
            Polarity::Terminates => "terminates",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Polarity> {
        match s {
            "initiates" | "initiated" => Some(Polarity::Initiates),
            "terminates" | "terminated" => Some(Polarity::Terminates),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GuardLiteral {
    pub positive: bool,
    pub fluent: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectAxiom {
    pub event: Term,
    pub polarity: Polarity,
    pub fluent: Term,
    /// Conjunction of fluent literals evaluated at the event's moment.
    pub guard: Vec<GuardLiteral>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub event: Term,
    pub moment: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EcTheory {
    pub initial: Vec<Term>,
    pub axioms: Vec<EffectAxiom>,
    pub occurrences: Vec<Occurrence>,
    pub horizon: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cause {
    pub occurrence: usize,
    pub axiom: usize,
}

/// A fluent changing value. `moment` is the first moment at which the new
/// value holds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Change {
    pub fluent: Term,
    pub polarity: Polarity,
    pub moment: u32,
    pub causes: Vec<Cause>,
}

impl Change {
    fn same_as(&self, other: &Change) -> bool {
        self.fluent == other.fluent
            && self.polarity == other.polarity
            && self.moment == other.moment
    }

    /// `holds(f, m)` for initiations, `not holds(f, m)` for terminations.
    pub fn as_formula(&self) -> Formula {
        let h = Formula::holds(self.fluent.clone(), Term::moment(self.moment));
        match self.polarity {
            Polarity::Initiates => h,
            Polarity::Terminates => Formula::not(h),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub horizon: u32,
    /// Fluents holding at each moment `0..=horizon`.
    pub states: Vec<BTreeSet<Term>>,
    /// Events occurring at each moment.
    pub events: Vec<Vec<Term>>,
    /// Changes in order of moment.
    pub changes: Vec<Change>,
    /// Every fluent the theory mentions.
    pub fluents: BTreeSet<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EventError {
    #[error("occurrence of `{event}` at {moment} lies outside [0, {horizon}]")]
    OutOfRange {
        event: String,
        moment: u32,
        horizon: u32,
    },
    #[error("`{fluent}` is both initiated and terminated at {moment} (by `{initiator}` and `{terminator}`)")]
    Contradictory {
        fluent: String,
        moment: u32,
        initiator: String,
        terminator: String,
    },
    #[error("occurrence {0} is not part of the theory")]
    UnknownOccurrence(usize),
    #[error("`{0}` is not a change in the trace")]
    NotInTrace(String),
}

impl Trace {
    pub fn holds(&self, fluent: &Term, moment: u32) -> bool {
        self.states
            .get(moment as usize)
            .is_some_and(|s| s.contains(fluent))
    }

    /// The change that gave `fluent` its value at `moment`, if any.
    pub fn last_change(&self, fluent: &Term, moment: u32) -> Option<&Change> {
        self.changes
            .iter()
            .rev()
            .find(|c| &c.fluent == fluent && c.moment <= moment)
    }

    /// Ground atoms describing the trace: `holds` and its negation for every
    /// known fluent and moment, `happens` for every occurrence, and the
    /// strict order `prior(i, j)` for `i < j <= horizon`.
    pub fn atoms(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        for m in 0..=self.horizon {
            for f in &self.fluents {
                let h = Formula::holds(f.clone(), Term::moment(m));
                out.push(if self.holds(f, m) { h } else { Formula::not(h) });
            }
        }
        for (m, evs) in self.events.iter().enumerate() {
            for e in evs {
                out.push(Formula::happens(e.clone(), Term::moment(m as u32)));
            }
        }
        for i in 0..=self.horizon {
            for j in i + 1..=self.horizon {
                out.push(Formula::prior(Term::moment(i), Term::moment(j)));
            }
        }
        out
    }
}

fn guard_holds(guard: &[GuardLiteral], state: &BTreeSet<Term>) -> bool {
    guard
        .iter()
        .all(|g| state.contains(&g.fluent) == g.positive)
}

/// Projects the theory through `0..=horizon` under inertia.
pub fn project(theory: &EcTheory) -> Result<Trace, EventError> {
    let h = theory.horizon;
    for o in &theory.occurrences {
        if o.moment > h {
            return Err(EventError::OutOfRange {
                event: o.event.to_string(),
                moment: o.moment,
                horizon: h,
            });
        }
    }
    let mut fluents: BTreeSet<Term> = theory.initial.iter().cloned().collect();
    for a in &theory.axioms {
        fluents.insert(a.fluent.clone());
        fluents.extend(a.guard.iter().map(|g| g.fluent.clone()));
    }
    let mut events: Vec<Vec<Term>> = (0..=h).map(|_| Vec::new()).collect();
    for o in &theory.occurrences {
        events[o.moment as usize].push(o.event.clone());
    }
    for evs in &mut events {
        evs.sort();
        evs.dedup();
    }

    let mut states: Vec<BTreeSet<Term>> = Vec::with_capacity(h as usize + 1);
    states.push(theory.initial.iter().cloned().collect());
    let mut changes: Vec<Change> = Vec::new();
    for m in 0..h {
        let now = &states[m as usize];
        let mut init: BTreeMap<Term, Vec<Cause>> = BTreeMap::new();
        let mut term: BTreeMap<Term, Vec<Cause>> = BTreeMap::new();
        for (oi, o) in theory.occurrences.iter().enumerate() {
            if o.moment != m {
                continue;
            }
            for (ai, a) in theory.axioms.iter().enumerate() {
                if a.event != o.event || !guard_holds(&a.guard, now) {
                    continue;
                }
                let slot = match a.polarity {
                    Polarity::Initiates => &mut init,
                    Polarity::Terminates => &mut term,
                };
                slot.entry(a.fluent.clone()).or_default().push(Cause {
                    occurrence: oi,
                    axiom: ai,
                });
            }
        }
        for (f, ci) in &init {
            if let Some(ct) = term.get(f) {
                let name = |c: &Cause| theory.occurrences[c.occurrence].event.to_string();
                return Err(EventError::Contradictory {
                    fluent: f.to_string(),
                    moment: m,
                    initiator: name(&ci[0]),
                    terminator: name(&ct[0]),
                });
            }
        }
        let mut next = now.clone();
        for (f, causes) in init {
            if next.insert(f.clone()) {
                changes.push(Change {
                    fluent: f,
                    polarity: Polarity::Initiates,
                    moment: m + 1,
                    causes,
                });
            }
        }
        for (f, causes) in term {
            if next.remove(&f) {
                changes.push(Change {
                    fluent: f,
                    polarity: Polarity::Terminates,
                    moment: m + 1,
                    causes,
                });
            }
        }
        states.push(next);
    }
    Ok(Trace {
        horizon: h,
        states,
        events,
        changes,
        fluents,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valence {
    Good,
    Bad,
    Neutral,
}

impl Valence {
    pub fn of(utility: i64) -> Valence {
        match utility {
            u if u > 0 => Valence::Good,
            u if u < 0 => Valence::Bad,
            _ => Valence::Neutral,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Valence::Good => "good",
            Valence::Bad => "bad",
            Valence::Neutral => "neutral",
        }
    }
}

/// Utility of each (fluent, polarity) outcome; anything unlisted is 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Utilities {
    pub values: BTreeMap<(Term, Polarity), i64>,
}

impl Utilities {
    pub fn of(&self, fluent: &Term, polarity: Polarity) -> i64 {
        self.values
            .get(&(fluent.clone(), polarity))
            .copied()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Effect {
    pub change: Change,
    pub utility: i64,
    pub valence: Valence,
}

/// A step of a causal chain: the occurrence that brought the change about.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Link {
    pub occurrence: usize,
    pub event: Term,
    pub at: u32,
    pub change: Change,
}

/// Provenance ancestry of `change`: its causing occurrences, then the
/// changes that made their guards true (or false, for negated guard
/// literals), back to the initial state. Sorted by occurrence moment and
/// then event name.
pub fn causal_chain(
    theory: &EcTheory,
    trace: &Trace,
    change: &Change,
) -> Result<Vec<Link>, EventError> {
    let Some(start) = trace.changes.iter().find(|c| c.same_as(change)) else {
        return Err(EventError::NotInTrace(change.as_formula().to_string()));
    };
    let mut seen: BTreeSet<(usize, Term, Polarity, u32)> = BTreeSet::new();
    let mut out: Vec<Link> = Vec::new();
    let mut stack: Vec<&Change> = alloc::vec![start];
    while let Some(c) = stack.pop() {
        for cause in &c.causes {
            if !seen.insert((cause.occurrence, c.fluent.clone(), c.polarity, c.moment)) {
                continue;
            }
            let occ = &theory.occurrences[cause.occurrence];
            out.push(Link {
                occurrence: cause.occurrence,
                event: occ.event.clone(),
                at: occ.moment,
                change: c.clone(),
            });
            for g in &theory.axioms[cause.axiom].guard {
                let wanted = if g.positive {
                    Polarity::Initiates
                } else {
                    Polarity::Terminates
                };
                if let Some(prev) = trace.last_change(&g.fluent, occ.moment) {
                    if prev.polarity == wanted {
                        stack.push(prev);
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.at, a.event.to_string(), &a.change).cmp(&(b.at, b.event.to_string(), &b.change))
    });
    Ok(out)
}

/// Counterfactual effects of occurrence `act`: changes in the projection
/// whose ancestry includes `act` and that do not also happen when `act` is
/// removed from the theory.
pub fn effects_of(
    theory: &EcTheory,
    act: usize,
    utilities: &Utilities,
) -> Result<Vec<Effect>, EventError> {
    if act >= theory.occurrences.len() {
        return Err(EventError::UnknownOccurrence(act));
    }
    let with = project(theory)?;
    let mut without_theory = theory.clone();
    without_theory.occurrences.remove(act);
    let without = project(&without_theory)?;
    let mut out = Vec::new();
    for c in &with.changes {
        let traced = causal_chain(theory, &with, c)?
            .iter()
            .any(|l| l.occurrence == act);
        if !traced || without.changes.iter().any(|d| d.same_as(c)) {
            continue;
        }
        let utility = utilities.of(&c.fluent, c.polarity);
        out.push(Effect {
            change: c.clone(),
            utility,
            valence: Valence::of(utility),
        });
    }
    Ok(out)
}
