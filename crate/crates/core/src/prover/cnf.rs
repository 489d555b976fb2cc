//! Clausal normal form for shadowed (modal-free) formulas.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::clause::{Clause, Lit};
use crate::syntax::{name, Formula, Name, Term, Var};

/// Clause-set size beyond which distribution gives up.
pub const MAX_CNF_CLAUSES: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfError {
    ModalLeft,
    TooLarge,
}

enum Nnf {
    True,
    False,
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(Var, Box<Nnf>),
    Exists(Var, Box<Nnf>),
}

fn atom_lit(f: &Formula, positive: bool) -> Lit {
    match f {
        Formula::Atom { pred, args } => Lit {
            positive,
            pred: pred.clone(),
            args: args.clone(),
        },
        Formula::Eq(a, b) => Lit {
            positive,
            pred: name("="),
            args: vec![a.clone(), b.clone()],
        },
        _ => unreachable!(),
    }
}

fn nnf(f: &Formula, pos: bool) -> Result<Nnf, CnfError> {
    Ok(match f {
        Formula::True => {
            if pos {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        Formula::False => {
            if pos {
                Nnf::False
            } else {
                Nnf::True
            }
        }
        Formula::Atom { .. } | Formula::Eq(..) => Nnf::Lit(atom_lit(f, pos)),
        Formula::Not(g) => nnf(g, !pos)?,
        Formula::And(fs) | Formula::Or(fs) => {
            let parts = fs
                .iter()
                .map(|g| nnf(g, pos))
                .collect::<Result<Vec<_>, _>>()?;
            if matches!(f, Formula::And(_)) == pos {
                Nnf::And(parts)
            } else {
                Nnf::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            if pos {
                Nnf::Or(vec![nnf(a, false)?, nnf(b, true)?])
            } else {
                Nnf::And(vec![nnf(a, true)?, nnf(b, false)?])
            }
        }
        Formula::Iff(a, b) => {
            if pos {
                Nnf::And(vec![
                    Nnf::Or(vec![nnf(a, false)?, nnf(b, true)?]),
                    Nnf::Or(vec![nnf(a, true)?, nnf(b, false)?]),
                ])
            } else {
                Nnf::Or(vec![
                    Nnf::And(vec![nnf(a, true)?, nnf(b, false)?]),
                    Nnf::And(vec![nnf(a, false)?, nnf(b, true)?]),
                ])
            }
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let body = Box::new(nnf(g, pos)?);
            if matches!(f, Formula::Forall(..)) == pos {
                Nnf::Forall(v.clone(), body)
            } else {
                Nnf::Exists(v.clone(), body)
            }
        }
        Formula::Modal { .. } => return Err(CnfError::ModalLeft),
    })
}

struct Skolemizer<'a> {
    tag: &'a str,
    next_sk: usize,
    next_var: usize,
}

type Env = Vec<(Name, Term)>;

fn lookup(env: &Env, v: &Var) -> Option<Term> {
    env.iter()
        .rev()
        .find(|(n, _)| *n == v.name)
        .map(|(_, t)| t.clone())
}

fn env_term(t: &Term, env: &Env) -> Term {
    match t {
        Term::Var(v) => lookup(env, v).unwrap_or_else(|| t.clone()),
        Term::Const { .. } => t.clone(),
        Term::App { func, args, sort } => Term::App {
            func: func.clone(),
            args: args.iter().map(|a| env_term(a, env)).collect(),
            sort: sort.clone(),
        },
    }
}

fn nnf_free(n: &Nnf, bound: &mut Vec<Name>, out: &mut Vec<Var>) {
    match n {
        Nnf::True | Nnf::False => {}
        Nnf::Lit(l) => {
            let mut vs = Vec::new();
            for a in &l.args {
                a.collect_vars(&mut vs);
            }
            for v in vs {
                if !bound.contains(&v.name) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        Nnf::And(ps) | Nnf::Or(ps) => ps.iter().for_each(|p| nnf_free(p, bound, out)),
        Nnf::Forall(v, b) | Nnf::Exists(v, b) => {
            bound.push(v.name.clone());
            nnf_free(b, bound, out);
            bound.pop();
        }
    }
}

impl Skolemizer<'_> {
    /// Drops quantifiers: universals become fresh clause variables and
    /// existentials become Skolem terms over the universals they depend on.
    fn run(&mut self, n: Nnf, env: &mut Env) -> Nnf {
        match n {
            Nnf::True | Nnf::False => n,
            Nnf::Lit(l) => Nnf::Lit(Lit {
                positive: l.positive,
                pred: l.pred,
                args: l.args.iter().map(|a| env_term(a, env)).collect(),
            }),
            Nnf::And(ps) => Nnf::And(ps.into_iter().map(|p| self.run(p, env)).collect()),
            Nnf::Or(ps) => Nnf::Or(ps.into_iter().map(|p| self.run(p, env)).collect()),
            Nnf::Forall(v, b) => {
                let fresh = Var {
                    name: name(&format!("_x{}", self.next_var)),
                    sort: v.sort.clone(),
                };
                self.next_var += 1;
                env.push((v.name.clone(), Term::Var(fresh)));
                let out = self.run(*b, env);
                env.pop();
                out
            }
            Nnf::Exists(v, b) => {
                let mut free = Vec::new();
                nnf_free(&b, &mut vec![v.name.clone()], &mut free);
                let mut deps: Vec<Var> = Vec::new();
                for f in &free {
                    if let Some(t) = lookup(env, f) {
                        let mut vs = Vec::new();
                        t.collect_vars(&mut vs);
                        for x in vs {
                            if !deps.contains(&x) {
                                deps.push(x);
                            }
                        }
                    }
                }
                let sk = format!("sk{}_{}", self.tag, self.next_sk);
                self.next_sk += 1;
                let term = if deps.is_empty() {
                    Term::Const {
                        name: name(&sk),
                        sort: v.sort.clone(),
                    }
                } else {
                    Term::App {
                        func: name(&sk),
                        args: deps.into_iter().map(Term::Var).collect(),
                        sort: v.sort.clone(),
                    }
                };
                env.push((v.name.clone(), term));
                let out = self.run(*b, env);
                env.pop();
                out
            }
        }
    }
}

fn distribute(n: &Nnf) -> Result<Vec<Vec<Lit>>, CnfError> {
    Ok(match n {
        Nnf::True => Vec::new(),
        Nnf::False => vec![Vec::new()],
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(ps) => {
            let mut out = Vec::new();
            for p in ps {
                out.extend(distribute(p)?);
                if out.len() > MAX_CNF_CLAUSES {
                    return Err(CnfError::TooLarge);
                }
            }
            out
        }
        Nnf::Or(ps) => {
            let mut acc: Vec<Vec<Lit>> = vec![Vec::new()];
            for p in ps {
                let part = distribute(p)?;
                if part.len().saturating_mul(acc.len()) > MAX_CNF_CLAUSES {
                    return Err(CnfError::TooLarge);
                }
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for c in &part {
                        let mut m = a.clone();
                        m.extend(c.iter().cloned());
                        next.push(m);
                    }
                }
                acc = next;
            }
            acc
        }
        Nnf::Forall(..) | Nnf::Exists(..) => unreachable!(),
    })
}

/// Skolem tag for a premise: a stable hash of its printed form.
pub fn skolem_tag(premise: &Formula) -> String {
    let text = format!("{}", crate::subst::alpha_normal(premise));
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{:08x}", (h ^ (h >> 32)) as u32)
}

/// Clauses of a closed, shadowed formula. Tautologies are dropped and the
/// variables of each clause are renamed to `_v<n>`.
pub fn clausify(f: &Formula, tag: &str) -> Result<Vec<Clause>, CnfError> {
    let n = nnf(f, true)?;
    let mut sk = Skolemizer {
        tag,
        next_sk: 0,
        next_var: 0,
    };
    let n = sk.run(n, &mut Vec::new());
    let mut out: Vec<Clause> = Vec::new();
    for lits in distribute(&n)? {
        let c = Clause::new(lits);
        if c.is_tautology() {
            continue;
        }
        let c = c.normalized();
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}
