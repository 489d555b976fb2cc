//! Capture-avoiding substitution and alpha-normalisation.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::SortError;
use crate::syntax::{name, Formula, Name, Signature, Term, Var};

pub type Binding = BTreeMap<Var, Term>;

/// Substitutes free occurrences of the bound variables. Every replacement
/// term must widen to its variable's sort.
pub fn substitute(f: &Formula, binding: &Binding, sig: &Signature) -> Result<Formula, SortError> {
    for (v, t) in binding {
        if !sig.is_subsort(t.sort(), &v.sort) {
            return Err(SortError::Mismatch {
                context: format!("binding for `{}`", v.name),
                expected: v.sort.to_string(),
                found: t.sort().to_string(),
            });
        }
    }
    Ok(substitute_unchecked(f, binding))
}

pub fn subst_term(t: &Term, binding: &Binding) -> Term {
    match t {
        Term::Var(v) => binding.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const { .. } => t.clone(),
        Term::App { func, args, sort } => Term::App {
            func: func.clone(),
            args: args.iter().map(|a| subst_term(a, binding)).collect(),
            sort: sort.clone(),
        },
    }
}

/// Substitution without the sort precondition check.
pub fn substitute_unchecked(f: &Formula, binding: &Binding) -> Formula {
    if binding.is_empty() {
        return f.clone();
    }
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args.iter().map(|a| subst_term(a, binding)).collect(),
        },
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, binding), subst_term(b, binding)),
        Formula::Not(g) => Formula::not(substitute_unchecked(g, binding)),
        Formula::And(fs) => Formula::And(
            fs.iter()
                .map(|g| substitute_unchecked(g, binding))
                .collect(),
        ),
        Formula::Or(fs) => Formula::Or(
            fs.iter()
                .map(|g| substitute_unchecked(g, binding))
                .collect(),
        ),
        Formula::Implies(a, b) => Formula::implies(
            substitute_unchecked(a, binding),
            substitute_unchecked(b, binding),
        ),
        Formula::Iff(a, b) => Formula::iff(
            substitute_unchecked(a, binding),
            substitute_unchecked(b, binding),
        ),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let (v2, body2) = subst_binder(v, body, binding);
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(v2, Box::new(body2))
            } else {
                Formula::Exists(v2, Box::new(body2))
            }
        }
        Formula::Modal {
            op,
            agent,
            moment,
            situation,
            body,
        } => Formula::Modal {
            op: *op,
            agent: subst_term(agent, binding),
            moment: subst_term(moment, binding),
            situation: situation.as_ref().map(|s| subst_term(s, binding)),
            body: Box::new(substitute_unchecked(body, binding)),
        },
    }
}

fn subst_binder(v: &Var, body: &Formula, binding: &Binding) -> (Var, Formula) {
    // The binder shadows every binding of the same name.
    let inner: Binding = binding
        .iter()
        .filter(|(k, _)| k.name != v.name)
        .map(|(k, t)| (k.clone(), t.clone()))
        .collect();
    let free = body.free_vars();
    let relevant: Vec<&Term> = inner
        .iter()
        .filter(|(k, _)| free.contains(k))
        .map(|(_, t)| t)
        .collect();
    let captures = relevant.iter().any(|t| t.mentions_var(&v.name));
    if !captures {
        return (v.clone(), substitute_unchecked(body, &inner));
    }
    let mut avoid: BTreeSet<Name> = BTreeSet::new();
    body.all_var_names(&mut avoid);
    for t in &relevant {
        let mut vs = Vec::new();
        t.collect_vars(&mut vs);
        avoid.extend(vs.into_iter().map(|x| x.name));
    }
    let mut fresh: String = v.name.to_string();
    while avoid.contains(fresh.as_str()) {
        fresh.push('\'');
    }
    let renamed = Var {
        name: name(&fresh),
        sort: v.sort.clone(),
    };
    let mut inner = inner;
    inner.insert(v.clone(), Term::Var(renamed.clone()));
    (renamed, substitute_unchecked(body, &inner))
}

/// Renames every bound variable to `_b<depth>`, so alpha-equivalent
/// formulas become structurally equal. Free variables are untouched.
pub fn alpha_normal(f: &Formula) -> Formula {
    let mut env: Vec<(Var, Var)> = Vec::new();
    normal(f, &mut env)
}

pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    a == b || alpha_normal(a) == alpha_normal(b)
}

fn normal_term(t: &Term, env: &[(Var, Var)]) -> Term {
    match t {
        Term::Var(v) => match env.iter().rev().find(|(from, _)| from.name == v.name) {
            Some((_, to)) => Term::Var(to.clone()),
            None => t.clone(),
        },
        Term::Const { .. } => t.clone(),
        Term::App { func, args, sort } => Term::App {
            func: func.clone(),
            args: args.iter().map(|a| normal_term(a, env)).collect(),
            sort: sort.clone(),
        },
    }
}

fn normal(f: &Formula, env: &mut Vec<(Var, Var)>) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args.iter().map(|a| normal_term(a, env)).collect(),
        },
        Formula::Eq(a, b) => Formula::Eq(normal_term(a, env), normal_term(b, env)),
        Formula::Not(g) => Formula::not(normal(g, env)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| normal(g, env)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| normal(g, env)).collect()),
        Formula::Implies(a, b) => Formula::implies(normal(a, env), normal(b, env)),
        Formula::Iff(a, b) => Formula::iff(normal(a, env), normal(b, env)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let to = Var {
                name: name(&format!("_b{}", env.len())),
                sort: v.sort.clone(),
            };
            env.push((v.clone(), to.clone()));
            let b = normal(body, env);
            env.pop();
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(to, Box::new(b))
            } else {
                Formula::Exists(to, Box::new(b))
            }
        }
        Formula::Modal {
            op,
            agent,
            moment,
            situation,
            body,
        } => Formula::Modal {
            op: *op,
            agent: normal_term(agent, env),
            moment: normal_term(moment, env),
            situation: situation.as_ref().map(|s| normal_term(s, env)),
            body: Box::new(normal(body, env)),
        },
    }
}
