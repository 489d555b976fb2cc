//! Forward closure of top-level facts under the modal schemata.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::proof::Rule;
use crate::subst::{alpha_eq, alpha_normal};
use crate::syntax::{Formula, Modality};

/// A formula with the rule that produced it. `premises` index into the
/// same derivation list; `depth` is the length of its longest chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub formula: Formula,
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub depth: u32,
}

struct Closure {
    items: Vec<Derived>,
    seen: BTreeSet<Formula>,
    limit: u32,
}

impl Closure {
    fn push(&mut self, formula: Formula, rule: Rule, premises: Vec<usize>) {
        let depth = premises
            .iter()
            .map(|&p| self.items[p].depth)
            .max()
            .map_or(0, |d| d + 1);
        if depth > self.limit || !self.seen.insert(alpha_normal(&formula)) {
            return;
        }
        self.items.push(Derived {
            formula,
            rule,
            premises,
            depth,
        });
    }

    fn closure_step(&mut self, imp: usize, ant: usize) {
        let (
            Formula::Modal {
                op,
                agent,
                moment,
                situation,
                body,
            },
            Formula::Modal {
                op: op2,
                agent: agent2,
                moment: moment2,
                body: body2,
                ..
            },
        ) = (&self.items[imp].formula, &self.items[ant].formula)
        else {
            return;
        };
        if !matches!(op, Modality::Knows | Modality::Believes)
            || op != op2
            || agent != agent2
            || moment != moment2
        {
            return;
        }
        let Formula::Implies(p, q) = &**body else {
            return;
        };
        if !alpha_eq(p, body2) {
            return;
        }
        let out = Formula::Modal {
            op: *op,
            agent: agent.clone(),
            moment: moment.clone(),
            situation: situation.clone(),
            body: q.clone(),
        };
        self.push(out, Rule::S3, vec![imp, ant]);
    }
}

/// Closes `assumptions` under S1 (K gives its body), S2 (K gives B),
/// S3 (closure of K and B under modus ponens) and S4 (K and B of a
/// conjunction give each conjunct), up to `depth` rule applications per
/// chain. Assumptions come first, in order.
pub fn expand_derivations(assumptions: &[Formula], depth: u32) -> Vec<Derived> {
    let mut c = Closure {
        items: Vec::new(),
        seen: BTreeSet::new(),
        limit: depth,
    };
    for a in assumptions {
        c.push(a.clone(), Rule::Assume, Vec::new());
    }
    let mut i = 0;
    while i < c.items.len() {
        if let Formula::Modal {
            op,
            agent,
            moment,
            situation,
            body,
        } = c.items[i].formula.clone()
        {
            if op == Modality::Knows {
                c.push((*body).clone(), Rule::S1, vec![i]);
                c.push(
                    Formula::Modal {
                        op: Modality::Believes,
                        agent: agent.clone(),
                        moment: moment.clone(),
                        situation: situation.clone(),
                        body: body.clone(),
                    },
                    Rule::S2,
                    vec![i],
                );
            }
            if matches!(op, Modality::Knows | Modality::Believes) {
                if let Formula::And(ps) = &*body {
                    for p in ps {
                        c.push(
                            Formula::Modal {
                                op,
                                agent: agent.clone(),
                                moment: moment.clone(),
                                situation: situation.clone(),
                                body: Box::new(p.clone()),
                            },
                            Rule::S4,
                            vec![i],
                        );
                    }
                }
                for j in 0..=i {
                    c.closure_step(i, j);
                    c.closure_step(j, i);
                }
            }
        }
        i += 1;
    }
    c.items
}

/// The closed set itself: the assumptions plus every derived formula.
pub fn expand_modal(assumptions: &[Formula], depth: u32) -> Vec<Formula> {
    expand_derivations(assumptions, depth)
        .into_iter()
        .map(|d| d.formula)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::syntax::{Signature, AGENT, MOMENT};

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.declare_constant("x", AGENT).unwrap();
        s.declare_constant("t", MOMENT).unwrap();
        s.declare_predicate("P", &[]).unwrap();
        s.declare_predicate("Q", &[]).unwrap();
        s
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    #[test]
    fn knowledge_yields_fact_and_belief() {
        let out = expand_modal(&[f("(knows x t (P))")], 1);
        assert!(out.contains(&f("(P)")));
        assert!(out.contains(&f("(believes x t (P))")));
    }

    #[test]
    fn depth_zero_adds_nothing() {
        let a = [f("(knows x t (P))")];
        assert_eq!(expand_modal(&a, 0), a.to_vec());
    }

    #[test]
    fn closure_under_implication() {
        let out = expand_modal(
            &[f("(knows x t (implies (P) (Q)))"), f("(knows x t (P))")],
            1,
        );
        assert!(out.contains(&f("(knows x t (Q))")));
        assert!(!out.contains(&f("(Q)")));
        let out = expand_modal(
            &[f("(knows x t (implies (P) (Q)))"), f("(knows x t (P))")],
            2,
        );
        assert!(out.contains(&f("(Q)")));
    }

    #[test]
    fn conjunction_splits() {
        let out = expand_modal(&[f("(believes x t (and (P) (Q)))")], 1);
        assert!(out.contains(&f("(believes x t (Q))")));
    }

    #[test]
    fn belief_is_not_veridical() {
        let out = expand_modal(&[f("(believes x t (P))")], 4);
        assert_eq!(out.len(), 1);
    }
}
