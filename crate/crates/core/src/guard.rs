//! Prevention, the goal-deprivation obligation and LOCK/ALLOW adjudication.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::ethics::{dde_compliant, DdeVerdict};
use crate::event::{project, Trace};
use crate::model::{countermodel, Model, ModelBounds, ModelSearch};
use crate::prover::{verify_proof, Proof, ProveOutcome, Prover};
use crate::scenario::{Scenario, ScenarioError};
use crate::syntax::{
    Formula, Name, Sort, Term, Var, ACTION_TYPE, AGENT, BLOCK, GOAL, INNOCENT, MOMENT,
    SIGMA_DEFAULT, SITUATION,
};

fn var_names(t: &Term, out: &mut BTreeSet<Name>) {
    let mut vs = Vec::new();
    t.collect_vars(&mut vs);
    out.extend(vs.into_iter().map(|v| v.name));
}

fn fresh(base: &str, avoid: &BTreeSet<Name>, sort: &str) -> Var {
    let mut n = String::from(base);
    while avoid.contains(n.as_str()) {
        n.push('\'');
    }
    Var::new(&n, Sort::new(sort))
}

fn block(x: &Term, y: &Term, g: &Term, a: &Term, t: &Term) -> Formula {
    Formula::atom(
        BLOCK,
        vec![x.clone(), y.clone(), g.clone(), a.clone(), t.clone()],
    )
}

/// `x` prevents `y` from reaching goal `g` by doing `a` at `t`:
///
/// ```text
/// exists t1 t2: prior(t,t1) & prior(t1,t2)
///   & K(x,t, D(y,t,holds(g,t2)) & I(y,t,happens(g,t2)))
///   & K(x,t, exists a'. I(y,t1,happens(action(y,a'),t1))
///            & (happens(action(y,a'),t1) & ~Block(x,y,g,a,t) -> happens(g,t2)))
///   & K(x,t, happens(action(x,a),t) -> Block(x,y,g,a,t))
///   & happens(action(x,a),t)
/// ```
pub fn prevents_body(x: &Term, y: &Term, g: &Term, a: &Term, t: &Term) -> Formula {
    let mut avoid = BTreeSet::new();
    for arg in [x, y, g, a, t] {
        var_names(arg, &mut avoid);
    }
    let t1v = fresh("t1", &avoid, MOMENT);
    let t2v = fresh("t2", &avoid, MOMENT);
    let av = fresh("a'", &avoid, ACTION_TYPE);
    let (t1, t2, a2) = (
        Term::Var(t1v.clone()),
        Term::Var(t2v.clone()),
        Term::Var(av.clone()),
    );
    let y_act = Term::action(y.clone(), a2);
    let x_act = Term::action(x.clone(), a.clone());
    let body = Formula::And(vec![
        Formula::prior(t.clone(), t1.clone()),
        Formula::prior(t1.clone(), t2.clone()),
        Formula::knows(
            x.clone(),
            t.clone(),
            Formula::And(vec![
                Formula::desires(y.clone(), t.clone(), Formula::holds(g.clone(), t2.clone())),
                Formula::intends(
                    y.clone(),
                    t.clone(),
                    Formula::happens(g.clone(), t2.clone()),
                ),
            ]),
        ),
        Formula::knows(
            x.clone(),
            t.clone(),
            Formula::exists(
                av,
                Formula::And(vec![
                    Formula::intends(
                        y.clone(),
                        t1.clone(),
                        Formula::happens(y_act.clone(), t1.clone()),
                    ),
                    Formula::implies(
                        Formula::And(vec![
                            Formula::happens(y_act, t1.clone()),
                            Formula::not(block(x, y, g, a, t)),
                        ]),
                        Formula::happens(g.clone(), t2),
                    ),
                ]),
            ),
        ),
        Formula::knows(
            x.clone(),
            t.clone(),
            Formula::implies(
                Formula::happens(x_act.clone(), t.clone()),
                block(x, y, g, a, t),
            ),
        ),
        Formula::happens(x_act, t.clone()),
    ]);
    Formula::exists(t1v, Formula::exists(t2v, body))
}

/// The requested action as an event.
pub fn requested_happens(agent: &Term, atype: &Term, t: u32) -> Formula {
    Formula::happens(Term::action(agent.clone(), atype.clone()), Term::moment(t))
}

/// `O(agent, t, sigma_default, not happens(action(agent, atype), t))`.
pub fn refrain_obligation(agent: &Term, atype: &Term, t: u32) -> Formula {
    Formula::obligated(
        agent.clone(),
        Term::moment(t),
        Term::constant(SIGMA_DEFAULT, Sort::new(SITUATION)),
        Formula::not(requested_happens(agent, atype, t)),
    )
}

/// If the requested action would prevent some innocent from reaching one
/// of their goals, the requester is obligated to refrain from it.
pub fn deprivation_axiom(scenario: &Scenario) -> Result<Formula, ScenarioError> {
    let r = scenario.request()?;
    let mut avoid = BTreeSet::new();
    var_names(&r.agent, &mut avoid);
    var_names(&r.atype, &mut avoid);
    let yv = fresh("y", &avoid, AGENT);
    let gv = fresh("g", &avoid, GOAL);
    let (y, g) = (Term::Var(yv.clone()), Term::Var(gv.clone()));
    let phi = Formula::exists(
        yv,
        Formula::exists(
            gv,
            Formula::And(vec![
                Formula::atom(INNOCENT, vec![y.clone()]),
                prevents_body(&r.agent, &y, &g, &r.atype, &Term::moment(r.moment)),
            ]),
        ),
    );
    Ok(Formula::implies(
        phi,
        refrain_obligation(&r.agent, &r.atype, r.moment),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Lock,
    Allow,
}

impl Decision {
    pub fn label(self) -> &'static str {
        match self {
            Decision::Lock => "LOCK",
            Decision::Allow => "ALLOW",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    pub obligation: Formula,
    pub obligation_proof: Option<Proof>,
    /// The obligation search ran out of budget; the guard fails closed.
    pub timed_out: bool,
    pub dde: Option<DdeVerdict>,
    pub trace: Trace,
    pub elapsed_ms: u64,
}

impl Verdict {
    /// LOCK exactly when a proved obligation is not overridden by a
    /// compliant DDE verdict, or when the obligation search timed out.
    pub fn is_consistent(&self) -> bool {
        let proved_unoverridden =
            self.obligation_proof.is_some() && self.dde.as_ref().is_none_or(|d| !d.compliant());
        let lock = proved_unoverridden || self.timed_out;
        (self.decision == Decision::Lock) == lock
    }
}

/// Facts, trace atoms of the theory with the request's occurrence, and
/// the deprivation axiom.
pub fn obligation_assumptions(scenario: &Scenario) -> Result<(Vec<Formula>, Trace), ScenarioError> {
    let (theory, _) = scenario.theory_with_request()?;
    let trace = project(&theory)?;
    let mut a = scenario.facts.clone();
    a.extend(trace.atoms());
    a.push(deprivation_axiom(scenario)?);
    Ok((a, trace))
}

/// Proves the refrain obligation and, if it holds, lets a compliant DDE
/// verdict override it.
pub fn adjudicate(scenario: &Scenario, prover: &Prover<'_>) -> Result<Verdict, ScenarioError> {
    let start = prover.clock.now_ms();
    scenario.validate()?;
    let r = scenario.request()?;
    let goal = refrain_obligation(&r.agent, &r.atype, r.moment);
    let (assumptions, trace) = obligation_assumptions(scenario)?;
    let outcome = prover.prove(&assumptions, &goal);
    let (decision, proof, timed_out, dde) = match outcome {
        ProveOutcome::Proved(p) => {
            if verify_proof(&p, &assumptions, &goal, &scenario.sig).is_err() {
                // An unverifiable proof still locks; the override is not tried.
                (Decision::Lock, Some(p), false, None)
            } else {
                let d = dde_compliant(scenario, prover)?;
                let decision = if d.compliant() {
                    Decision::Allow
                } else {
                    Decision::Lock
                };
                (decision, Some(p), false, Some(d))
            }
        }
        ProveOutcome::NoProof => (Decision::Allow, None, false, None),
        ProveOutcome::Timeout => (
            Decision::Lock,
            None,
            true,
            Some(DdeVerdict::unknown(
                "obligation search exhausted its budget",
            )),
        ),
    };
    Ok(Verdict {
        decision,
        obligation: goal,
        obligation_proof: proof,
        timed_out,
        dde,
        trace,
        elapsed_ms: prover.clock.now_ms().saturating_sub(start),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreventsAnswer {
    Yes(Proof),
    No(Model),
    Unknown,
}

impl PreventsAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, PreventsAnswer::Yes(_))
    }
}

/// Domain limits for prevention countermodels.
pub fn prevents_bounds() -> ModelBounds {
    ModelBounds {
        max_extra: 1,
        max_domain: vec![
            (Sort::new(AGENT), 3),
            (Sort::new(MOMENT), 4),
            (Sort::new(ACTION_TYPE), 3),
        ],
        ..ModelBounds::default()
    }
}

/// Facts plus the trace atoms of the scenario's own theory.
pub fn prevents_assumptions(scenario: &Scenario) -> Result<Vec<Formula>, ScenarioError> {
    let mut a = scenario.facts.clone();
    a.extend(project(&scenario.theory)?.atoms());
    Ok(a)
}

/// Decides `Prevents(x, y, g, a, t)` from explicit assumptions: a proof
/// gives yes, a bounded countermodel gives no.
pub fn prevents_from(
    assumptions: &[Formula],
    args: [&Term; 5],
    scenario: &Scenario,
    prover: &Prover<'_>,
) -> PreventsAnswer {
    let [x, y, g, a, t] = args;
    let body = prevents_body(x, y, g, a, t);
    match prover.prove(assumptions, &body) {
        ProveOutcome::Proved(p) => PreventsAnswer::Yes(p),
        _ => match countermodel(assumptions, &body, &scenario.sig, &prevents_bounds()) {
            ModelSearch::Found(m) => PreventsAnswer::No(m),
            _ => PreventsAnswer::Unknown,
        },
    }
}

pub fn prevents_holds(
    args: [&Term; 5],
    scenario: &Scenario,
    prover: &Prover<'_>,
) -> Result<PreventsAnswer, ScenarioError> {
    let a = prevents_assumptions(scenario)?;
    Ok(prevents_from(&a, args, scenario, prover))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Intention,
    Forbiddenness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("both `{0}` and its negation are provable")]
    Inconsistent(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Asks whether `I(h, t, phi)` (intention) or `O(h, t, sigma_default, not phi)`
/// (forbiddenness) follows from the scenario, or its negation does.
pub fn epistemic_query(
    scenario: &Scenario,
    kind: QueryKind,
    h: &Term,
    t: u32,
    phi: &Formula,
    prover: &Prover<'_>,
) -> Result<Answer, QueryError> {
    let positive = match kind {
        QueryKind::Intention => Formula::intends(h.clone(), Term::moment(t), phi.clone()),
        QueryKind::Forbiddenness => Formula::obligated(
            h.clone(),
            Term::moment(t),
            Term::constant(SIGMA_DEFAULT, Sort::new(SITUATION)),
            Formula::not(phi.clone()),
        ),
    };
    let assumptions = if scenario.request.is_some() {
        obligation_assumptions(scenario)?.0
    } else {
        prevents_assumptions(scenario)?
    };
    let pos = prover.prove(&assumptions, &positive);
    let neg = prover.prove(&assumptions, &Formula::not(positive.clone()));
    match (pos, neg) {
        (ProveOutcome::Proved(_), ProveOutcome::Proved(_)) => {
            Err(QueryError::Inconsistent(positive.to_string()))
        }
        (ProveOutcome::Proved(_), _) => Ok(Answer::Yes),
        (_, ProveOutcome::Proved(_)) => Ok(Answer::No),
        _ => Ok(Answer::Unknown),
    }
}

/// Text form of a verdict's obligation and decision, for diagnostics.
pub fn summary(v: &Verdict) -> String {
    format!(
        "{} ({}{})",
        v.decision.label(),
        if v.obligation_proof.is_some() {
            "obligation proved"
        } else if v.timed_out {
            "obligation search timed out"
        } else {
            "no obligation"
        },
        match &v.dde {
            Some(d) if d.compliant() => ", DDE compliant".to_string(),
            Some(_) => ", DDE not compliant".to_string(),
            None => String::new(),
        }
    )
}
