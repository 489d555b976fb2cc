//! Shadowing: every maximal modal subformula becomes an opaque first-order
//! atom. The atom's predicate names an abstracted modal key and its
//! arguments are the terms that were lifted out of the modal formula.
//!
//! A key is the modal formula with every maximal term that mentions no
//! locally bound variable replaced by a hole `#i`, and with bound variables
//! renamed to `_b<depth>`. Two modal formulas that differ only in such terms
//! therefore share a predicate and first-order unification sees through
//! their agent, moment and any closed subterm of the body.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::subst::{substitute_unchecked, Binding};
use crate::syntax::{name, Formula, Modality, Name, Signature, Sort, Term, Var};

pub const SHADOW_PREFIX: &str = "#sh";

#[derive(Clone, Debug, Default)]
pub struct ShadowMap {
    keys: Vec<Formula>,
    holes: Vec<Vec<Var>>,
    index: BTreeMap<Formula, usize>,
}

impl ShadowMap {
    pub fn new() -> ShadowMap {
        ShadowMap::default()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, id: usize) -> &Formula {
        &self.keys[id]
    }

    /// Hole variables of a key, in argument order.
    pub fn holes(&self, id: usize) -> &[Var] {
        &self.holes[id]
    }

    pub fn pred_name(id: usize) -> Name {
        name(&format!("{SHADOW_PREFIX}{id}"))
    }

    pub fn id_of_pred(pred: &str) -> Option<usize> {
        pred.strip_prefix(SHADOW_PREFIX)?.parse().ok()
    }

    /// Returns the key id and whether it was new.
    pub fn intern(&mut self, key: Formula, holes: Vec<Var>) -> (usize, bool) {
        if let Some(&id) = self.index.get(&key) {
            return (id, false);
        }
        let id = self.keys.len();
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        self.holes.push(holes);
        (id, true)
    }

    /// Replaces each maximal modal subformula of `f` by its shadow atom.
    /// `fresh` collects ids of keys first seen during this call.
    pub fn shadow(&mut self, f: &Formula, sig: &Signature, fresh: &mut Vec<usize>) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => f.clone(),
            Formula::Not(g) => Formula::not(self.shadow(g, sig, fresh)),
            Formula::And(fs) => {
                Formula::And(fs.iter().map(|g| self.shadow(g, sig, fresh)).collect())
            }
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| self.shadow(g, sig, fresh)).collect()),
            Formula::Implies(a, b) => {
                Formula::implies(self.shadow(a, sig, fresh), self.shadow(b, sig, fresh))
            }
            Formula::Iff(a, b) => {
                Formula::iff(self.shadow(a, sig, fresh), self.shadow(b, sig, fresh))
            }
            Formula::Forall(v, g) => Formula::forall(v.clone(), self.shadow(g, sig, fresh)),
            Formula::Exists(v, g) => Formula::exists(v.clone(), self.shadow(g, sig, fresh)),
            Formula::Modal { .. } => {
                let (key, holes, args) = abstract_modal(f, sig);
                let (id, new) = self.intern(key, holes);
                if new {
                    fresh.push(id);
                }
                Formula::Atom {
                    pred: ShadowMap::pred_name(id),
                    args,
                }
            }
        }
    }

    /// Inverse of [`ShadowMap::shadow`] for atoms this map produced.
    pub fn unshadow(&self, f: &Formula) -> Formula {
        match f {
            Formula::Atom { pred, args } => match ShadowMap::id_of_pred(pred) {
                Some(id) if id < self.keys.len() => self.instantiate(id, args),
                _ => f.clone(),
            },
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Modal { .. } => f.clone(),
            Formula::Not(g) => Formula::not(self.unshadow(g)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| self.unshadow(g)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| self.unshadow(g)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.unshadow(a), self.unshadow(b)),
            Formula::Iff(a, b) => Formula::iff(self.unshadow(a), self.unshadow(b)),
            Formula::Forall(v, g) => Formula::forall(v.clone(), self.unshadow(g)),
            Formula::Exists(v, g) => Formula::exists(v.clone(), self.unshadow(g)),
        }
    }

    /// The modal formula of key `id` with its holes filled by `args`.
    pub fn instantiate(&self, id: usize, args: &[Term]) -> Formula {
        let b: Binding = self.holes[id]
            .iter()
            .cloned()
            .zip(args.iter().cloned())
            .collect();
        substitute_unchecked(&self.keys[id], &b)
    }
}

fn hole(i: usize, sort: Sort) -> Var {
    Var {
        name: name(&format!("#{i}")),
        sort,
    }
}

struct Abstraction<'a> {
    sig: &'a Signature,
    bound: Vec<(Var, Var)>,
    holes: Vec<Var>,
    args: Vec<Term>,
}

impl Abstraction<'_> {
    fn mentions_bound(&self, t: &Term) -> bool {
        self.bound.iter().any(|(v, _)| t.mentions_var(&v.name))
    }

    fn term(&mut self, t: &Term, expected: Option<&Sort>) -> Term {
        if !self.mentions_bound(t) {
            let sort = expected.cloned().unwrap_or_else(|| t.sort().clone());
            let h = hole(self.holes.len(), sort);
            self.holes.push(h.clone());
            self.args.push(t.clone());
            return Term::Var(h);
        }
        match t {
            Term::Var(v) => match self.bound.iter().rev().find(|(b, _)| b.name == v.name) {
                Some((_, to)) => Term::Var(to.clone()),
                None => t.clone(),
            },
            Term::Const { .. } => t.clone(),
            Term::App { func, args, sort } => {
                let expected: Vec<Option<Sort>> = match self.sig.arg_sorts(func) {
                    Some(s) if s.len() == args.len() => s.iter().cloned().map(Some).collect(),
                    _ => args.iter().map(|_| None).collect(),
                };
                Term::App {
                    func: func.clone(),
                    args: args
                        .iter()
                        .zip(&expected)
                        .map(|(a, e)| self.term(a, e.as_ref()))
                        .collect(),
                    sort: sort.clone(),
                }
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Atom { pred, args } => {
                let expected: Vec<Option<Sort>> = match self.sig.arg_sorts(pred) {
                    Some(s) if s.len() == args.len() => s.iter().cloned().map(Some).collect(),
                    _ => args.iter().map(|_| None).collect(),
                };
                Formula::Atom {
                    pred: pred.clone(),
                    args: args
                        .iter()
                        .zip(&expected)
                        .map(|(a, e)| self.term(a, e.as_ref()))
                        .collect(),
                }
            }
            Formula::Eq(a, b) => {
                let a2 = self.term(a, None);
                let b2 = self.term(b, None);
                Formula::Eq(a2, b2)
            }
            Formula::Not(g) => Formula::not(self.formula(g)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| self.formula(g)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| self.formula(g)).collect()),
            Formula::Implies(a, b) => {
                let a2 = self.formula(a);
                Formula::implies(a2, self.formula(b))
            }
            Formula::Iff(a, b) => {
                let a2 = self.formula(a);
                Formula::iff(a2, self.formula(b))
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let to = Var {
                    name: name(&format!("_b{}", self.bound.len())),
                    sort: v.sort.clone(),
                };
                self.bound.push((v.clone(), to.clone()));
                let body = self.formula(g);
                self.bound.pop();
                if matches!(f, Formula::Forall(..)) {
                    Formula::Forall(to, Box::new(body))
                } else {
                    Formula::Exists(to, Box::new(body))
                }
            }
            Formula::Modal {
                op,
                agent,
                moment,
                situation,
                body,
            } => {
                let agent = self.term(agent, Some(&Sort::new(crate::syntax::AGENT)));
                let moment = self.term(moment, Some(&Sort::new(crate::syntax::MOMENT)));
                let situation = situation
                    .as_ref()
                    .map(|s| self.term(s, Some(&Sort::new(crate::syntax::SITUATION))));
                Formula::Modal {
                    op: *op,
                    agent,
                    moment,
                    situation,
                    body: Box::new(self.formula(body)),
                }
            }
        }
    }
}

/// Splits a modal formula into its key, the key's hole variables and the
/// terms that fill them.
pub fn abstract_modal(m: &Formula, sig: &Signature) -> (Formula, Vec<Var>, Vec<Term>) {
    let mut a = Abstraction {
        sig,
        bound: Vec::new(),
        holes: Vec::new(),
        args: Vec::new(),
    };
    let key = a.formula(m);
    (key, a.holes, a.args)
}

/// Schema instances attached to one key, universally closed over the
/// key's holes. Returned with the name of the schema they instantiate.
pub fn schema_instances(map: &ShadowMap, id: usize) -> Vec<(&'static str, Formula)> {
    let holes = map.holes(id);
    let vars: Vec<Var> = (0..holes.len())
        .map(|i| Var {
            name: name(&format!("_h{i}")),
            sort: holes[i].sort.clone(),
        })
        .collect();
    let b: Binding = holes
        .iter()
        .cloned()
        .zip(vars.iter().cloned().map(Term::Var))
        .collect();
    let key = substitute_unchecked(map.key(id), &b);
    let Formula::Modal {
        op,
        agent,
        moment,
        situation,
        body,
    } = &key
    else {
        return Vec::new();
    };
    let close = |f: Formula| {
        vars.iter()
            .rev()
            .fold(f, |acc, v| Formula::forall(v.clone(), acc))
    };
    let with = |o: Modality, b: Formula| Formula::Modal {
        op: o,
        agent: agent.clone(),
        moment: moment.clone(),
        situation: situation.clone(),
        body: Box::new(b),
    };
    let mut out = Vec::new();
    if *op == Modality::Knows {
        out.push((
            "S1-ax",
            close(Formula::implies(key.clone(), (**body).clone())),
        ));
        out.push((
            "S2-ax",
            close(Formula::implies(
                key.clone(),
                with(Modality::Believes, (**body).clone()),
            )),
        ));
    }
    if matches!(op, Modality::Knows | Modality::Believes) {
        match &**body {
            Formula::Implies(p, q) => out.push((
                "S3-ax",
                close(Formula::implies(
                    key.clone(),
                    Formula::implies(with(*op, (**p).clone()), with(*op, (**q).clone())),
                )),
            )),
            Formula::And(ps) if ps.len() > 1 => out.push((
                "S4-ax",
                close(Formula::iff(
                    key.clone(),
                    Formula::And(ps.iter().map(|p| with(*op, p.clone())).collect()),
                )),
            )),
            _ => {}
        }
    }
    out
}
