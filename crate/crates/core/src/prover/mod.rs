//! Refutation prover for the modal language.
//!
//! Facts are first closed under the modal schemata ([`expand_modal`]),
//! modal subformulas are shadowed into first-order atoms, schema instances
//! are added for every shadow key up to the depth limit, and the resulting
//! first-order problem is saturated with ordered resolution. A refutation
//! is turned back into a [`Proof`] over unshadowed formulas.

mod clause;
mod cnf;
mod expand;
mod proof;
mod search;
mod shadow;
mod verify;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use clause::{Clause, Lit};
pub use cnf::{clausify, skolem_tag, CnfError};
pub use expand::{expand_derivations, expand_modal, Derived};
pub use proof::{Proof, Rule, Step};
pub use shadow::{abstract_modal, schema_instances, ShadowMap};
pub use verify::{verify_proof, VerifyError};

use search::{Origin, Outcome, Search};

use crate::subst::{alpha_eq, alpha_normal};
use crate::syntax::{Formula, Signature, Sort, Term, Var};
use crate::{Clock, FrozenClock};

/// Resource limits for one proof attempt. All limits are strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub timeout_ms: u64,
    /// Bound on chained modal schema applications.
    pub max_depth: u32,
    /// Bound on clauses generated during saturation.
    pub max_clauses: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            timeout_ms: 10_000,
            max_depth: 4,
            max_clauses: 200_000,
        }
    }
}

impl Budget {
    pub fn new(timeout_ms: u64, max_depth: u32, max_clauses: usize) -> Option<Budget> {
        (timeout_ms > 0 && max_depth > 0 && max_clauses > 0).then_some(Budget {
            timeout_ms,
            max_depth,
            max_clauses,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveOutcome {
    Proved(Proof),
    /// The search space was exhausted without a refutation.
    NoProof,
    /// A time, clause or size limit was hit first.
    Timeout,
}

impl ProveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProveOutcome::Proved(_))
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            ProveOutcome::Proved(p) => Some(p),
            _ => None,
        }
    }
}

/// Configured prover. Holds no state between calls, so repeated calls with
/// the same inputs give the same answer and the same proof.
#[derive(Clone, Copy)]
pub struct Prover<'a> {
    pub sig: &'a Signature,
    pub budget: Budget,
    pub clock: &'a dyn Clock,
    pub trace: Option<&'a dyn Fn(&str)>,
}

struct Input {
    formula: Formula,
    rule: Rule,
    premises: Vec<usize>,
}

/// Proves `goal` from `assumptions` with a frozen clock.
pub fn prove(
    assumptions: &[Formula],
    goal: &Formula,
    sig: &Signature,
    budget: Budget,
) -> ProveOutcome {
    Prover::new(sig, budget, &FrozenClock).prove(assumptions, goal)
}

impl<'a> Prover<'a> {
    pub fn new(sig: &'a Signature, budget: Budget, clock: &'a dyn Clock) -> Prover<'a> {
        Prover {
            sig,
            budget,
            clock,
            trace: None,
        }
    }

    pub fn with_trace(mut self, trace: &'a dyn Fn(&str)) -> Prover<'a> {
        self.trace = Some(trace);
        self
    }

    fn emit(&self, msg: &str) {
        if let Some(t) = self.trace {
            t(msg);
        }
    }

    pub fn prove(&self, assumptions: &[Formula], goal: &Formula) -> ProveOutcome {
        let deadline = self.clock.now_ms().saturating_add(self.budget.timeout_ms);
        if assumptions.iter().any(|a| alpha_eq(a, goal)) {
            return ProveOutcome::Proved(Proof {
                steps: vec![Step {
                    formula: goal.clone(),
                    rule: Rule::Assume,
                    premises: Vec::new(),
                }],
            });
        }

        let mut inputs: Vec<Input> = expand_derivations(assumptions, self.budget.max_depth)
            .into_iter()
            .map(|d| Input {
                formula: d.formula,
                rule: d.rule,
                premises: d.premises,
            })
            .collect();
        self.emit(&format!("expanded {} facts", inputs.len()));
        let neg_goal = inputs.len();
        inputs.push(Input {
            formula: Formula::not(goal.clone()),
            rule: Rule::NegateGoal,
            premises: Vec::new(),
        });

        let mut map = ShadowMap::new();
        let mut key_depth: Vec<u32> = Vec::new();
        let mut shadowed: Vec<Formula> = Vec::new();
        for inp in &inputs {
            let mut fresh = Vec::new();
            shadowed.push(map.shadow(&inp.formula, self.sig, &mut fresh));
            key_depth.extend(fresh.iter().map(|_| 0));
        }
        let mut instances: BTreeSet<Formula> = BTreeSet::new();
        let mut k = 0;
        while k < map.len() {
            if self.clock.now_ms() >= deadline {
                return ProveOutcome::Timeout;
            }
            let d = key_depth[k];
            if d < self.budget.max_depth {
                for (label, inst) in schema_instances(&map, k) {
                    if !instances.insert(alpha_normal(&inst)) {
                        continue;
                    }
                    let mut fresh = Vec::new();
                    shadowed.push(map.shadow(&inst, self.sig, &mut fresh));
                    key_depth.extend(fresh.iter().map(|_| d + 1));
                    inputs.push(Input {
                        formula: inst,
                        rule: Rule::from_axiom_label(label),
                        premises: Vec::new(),
                    });
                }
            }
            k += 1;
        }
        self.emit(&format!(
            "{} shadow keys, {} schema instances",
            map.len(),
            instances.len()
        ));

        let render = |c: &Clause| -> String { format!("{}", map.unshadow(&c.to_formula())) };
        let sink = |s: &str| self.emit(s);
        let mut search = Search::new(self.sig, self.clock, deadline, self.budget.max_clauses);
        if self.trace.is_some() {
            search = search.with_trace(&render, &sink);
        }
        let mut clauses = Vec::new();
        for (inp, sh) in inputs.iter().zip(&shadowed) {
            match clausify(sh, &skolem_tag(&inp.formula)) {
                Ok(cs) => clauses.push(cs),
                Err(_) => return ProveOutcome::Timeout,
            }
        }
        // Unique names: every element equals itself and distinct ground
        // terms differ (the latter is applied as a simplification).
        let mut eq_sorts: BTreeSet<Sort> = BTreeSet::new();
        for l in clauses.iter().flatten().flat_map(|c| &c.lits) {
            if &*l.pred == "=" {
                eq_sorts.extend(l.args.iter().map(|a| a.sort().clone()));
            }
        }
        for s in eq_sorts {
            let x = Var::new("x", s);
            let refl = Formula::forall(x.clone(), Formula::Eq(Term::Var(x.clone()), Term::Var(x)));
            clauses.push(clausify(&refl, "").expect("unit clause"));
            inputs.push(Input {
                formula: refl,
                rule: Rule::Reflexivity,
                premises: Vec::new(),
            });
        }
        for (i, cs) in clauses.into_iter().enumerate() {
            cs.into_iter().for_each(|c| search.add(c, Origin::Input(i)));
        }
        let outcome = search.run();
        self.emit(&format!("generated {} clauses", search.generated()));
        match outcome {
            Outcome::Refuted(empty) => ProveOutcome::Proved(reconstruct(
                &inputs,
                &search.records,
                empty,
                neg_goal,
                goal,
                &map,
            )),
            Outcome::Saturated => ProveOutcome::NoProof,
            Outcome::OutOfBudget => ProveOutcome::Timeout,
        }
    }
}

fn reconstruct(
    inputs: &[Input],
    records: &[search::Record],
    empty: usize,
    neg_goal: usize,
    goal: &Formula,
    map: &ShadowMap,
) -> Proof {
    let mut need_clause: BTreeSet<usize> = BTreeSet::new();
    let mut need_input: BTreeSet<usize> = BTreeSet::new();
    let mut stack = vec![empty];
    while let Some(c) = stack.pop() {
        if !need_clause.insert(c) {
            continue;
        }
        match records[c].origin {
            Origin::Input(i) => {
                let mut st = vec![i];
                while let Some(j) = st.pop() {
                    if need_input.insert(j) {
                        st.extend(inputs[j].premises.iter().copied());
                    }
                }
            }
            Origin::Resolve(a, b) => stack.extend([a, b]),
            Origin::Factor(a) | Origin::Distinct(a) => stack.push(a),
        }
    }
    need_input.insert(neg_goal);

    let mut steps: Vec<Step> = Vec::new();
    let mut input_step: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in &need_input {
        input_step.insert(i, steps.len());
        steps.push(Step {
            formula: inputs[i].formula.clone(),
            rule: inputs[i].rule,
            premises: inputs[i].premises.iter().map(|p| input_step[p]).collect(),
        });
    }
    let mut clause_step: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &need_clause {
        let (rule, premises) = match records[c].origin {
            Origin::Input(i) => (Rule::Cnf, vec![input_step[&i]]),
            Origin::Resolve(a, b) => (Rule::Resolve, vec![clause_step[&a], clause_step[&b]]),
            Origin::Factor(a) => (Rule::Factor, vec![clause_step[&a]]),
            Origin::Distinct(a) => (Rule::Distinct, vec![clause_step[&a]]),
        };
        clause_step.insert(c, steps.len());
        steps.push(Step {
            formula: map.unshadow(&records[c].clause.to_formula()),
            rule,
            premises,
        });
    }
    steps.push(Step {
        formula: goal.clone(),
        rule: Rule::Contradiction,
        premises: vec![input_step[&neg_goal], clause_step[&empty]],
    });
    Proof { steps }
}
