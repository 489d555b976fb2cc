//! Independent step-by-step proof checking.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::clause::{drop_distinct, is_variant, Clause, Lit, Unifier};
use super::cnf::{clausify, skolem_tag};
use super::proof::{Proof, Rule};
use super::shadow::ShadowMap;
use crate::subst::alpha_eq;
use crate::syntax::{name, Formula, Modality, Name, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("empty proof")]
    Empty,
    #[error("last step does not conclude the goal")]
    WrongConclusion,
    #[error("step {step}: {reason}")]
    Step { step: usize, reason: String },
}

fn fail<T>(i: usize, reason: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError::Step {
        step: i + 1,
        reason: reason.into(),
    })
}

fn modal_parts(f: &Formula) -> Option<(Modality, &Term, &Term, &Option<Term>, &Formula)> {
    match f {
        Formula::Modal {
            op,
            agent,
            moment,
            situation,
            body,
        } => Some((*op, agent, moment, situation, body)),
        _ => None,
    }
}

fn same_frame(a: &Formula, b: &Formula) -> bool {
    match (modal_parts(a), modal_parts(b)) {
        (Some((o1, a1, m1, s1, _)), Some((o2, a2, m2, s2, _))) => {
            o1 == o2 && a1 == a2 && m1 == m2 && s1 == s2
        }
        _ => false,
    }
}

fn body_of(f: &Formula) -> Option<&Formula> {
    modal_parts(f).map(|p| p.4)
}

fn is_kb(f: &Formula) -> bool {
    matches!(
        modal_parts(f),
        Some((Modality::Knows | Modality::Believes, ..))
    )
}

fn check_s1(premise: &Formula, out: &Formula) -> Result<(), &'static str> {
    match modal_parts(premise) {
        Some((Modality::Knows, _, _, _, body)) if alpha_eq(body, out) => Ok(()),
        Some((Modality::Knows, ..)) => Err("S1 conclusion is not the known formula"),
        _ => Err("S1 requires K"),
    }
}

fn check_s2(premise: &Formula, out: &Formula) -> Result<(), &'static str> {
    let (Some((Modality::Knows, a, m, _, body)), Some((Modality::Believes, a2, m2, _, body2))) =
        (modal_parts(premise), modal_parts(out))
    else {
        return Err("S2 requires K premise and B conclusion");
    };
    if a == a2 && m == m2 && alpha_eq(body, body2) {
        Ok(())
    } else {
        Err("S2 conclusion does not match premise")
    }
}

fn check_s3(imp: &Formula, ant: &Formula, out: &Formula) -> Result<(), &'static str> {
    if !is_kb(imp) || !same_frame(imp, ant) || !same_frame(imp, out) {
        return Err("S3 requires K or B premises sharing agent, moment and operator");
    }
    let Some(Formula::Implies(p, q)) = body_of(imp) else {
        return Err("S3 requires an implication under the operator");
    };
    if alpha_eq(p, body_of(ant).unwrap()) && alpha_eq(q, body_of(out).unwrap()) {
        Ok(())
    } else {
        Err("S3 conclusion does not follow")
    }
}

fn check_s4(premise: &Formula, out: &Formula) -> Result<(), &'static str> {
    if !is_kb(premise) || !same_frame(premise, out) {
        return Err("S4 requires K or B of a conjunction");
    }
    let Some(Formula::And(ps)) = body_of(premise) else {
        return Err("S4 requires K or B of a conjunction");
    };
    let b = body_of(out).unwrap();
    if ps.iter().any(|p| alpha_eq(p, b)) {
        Ok(())
    } else {
        Err("S4 conclusion is not a conjunct")
    }
}

fn strip_forall(f: &Formula) -> &Formula {
    match f {
        Formula::Forall(_, g) => strip_forall(g),
        _ => f,
    }
}

fn with_body(frame: &Formula, body: &Formula) -> Formula {
    let (op, agent, moment, situation, _) = modal_parts(frame).unwrap();
    Formula::Modal {
        op,
        agent: agent.clone(),
        moment: moment.clone(),
        situation: situation.clone(),
        body: alloc::boxed::Box::new(body.clone()),
    }
}

/// Checks that `f` is a universally closed instance of the given schema.
fn check_axiom(rule: Rule, f: &Formula) -> Result<(), &'static str> {
    let core = strip_forall(f);
    let bad = Err("not an instance of the schema");
    match rule {
        Rule::S1Axiom => match core {
            Formula::Implies(k, p) => check_s1(k, p),
            _ => bad,
        },
        Rule::S2Axiom => match core {
            Formula::Implies(k, b) => check_s2(k, b),
            _ => bad,
        },
        Rule::S3Axiom => match core {
            Formula::Implies(imp, rest) => match &**rest {
                Formula::Implies(ant, out) => check_s3(imp, ant, out),
                _ => bad,
            },
            _ => bad,
        },
        Rule::S4Axiom => match core {
            Formula::Iff(whole, parts) => {
                if !is_kb(whole) {
                    return Err("S4 requires K or B of a conjunction");
                }
                let (Some(Formula::And(ps)), Formula::And(qs)) = (body_of(whole), &**parts) else {
                    return bad;
                };
                if ps.len() == qs.len()
                    && ps
                        .iter()
                        .zip(qs)
                        .all(|(p, q)| alpha_eq(&with_body(whole, p), q))
                {
                    Ok(())
                } else {
                    bad
                }
            }
            _ => bad,
        },
        _ => bad,
    }
}

fn lit_of(f: &Formula) -> Option<Lit> {
    let (positive, atom) = match f {
        Formula::Not(g) => (false, &**g),
        _ => (true, f),
    };
    match atom {
        Formula::Atom { pred, args } => Some(Lit {
            positive,
            pred: pred.clone(),
            args: args.clone(),
        }),
        Formula::Eq(a, b) => Some(Lit {
            positive,
            pred: name("="),
            args: alloc::vec![a.clone(), b.clone()],
        }),
        _ => None,
    }
}

/// Reads a shadowed clause formula back into a clause.
fn clause_of(f: &Formula) -> Option<Clause> {
    match strip_forall(f) {
        Formula::False => Some(Clause::default()),
        Formula::Or(ls) => Some(Clause::new(
            ls.iter().map(lit_of).collect::<Option<Vec<_>>>()?,
        )),
        other => Some(Clause::new(alloc::vec![lit_of(other)?])),
    }
}

fn resolvents(sig: &Signature, a: &Clause, b: &Clause) -> Vec<Clause> {
    let a = a.renamed("_p");
    let b = b.renamed("_q");
    let mut out = Vec::new();
    for (i, la) in a.lits.iter().enumerate() {
        for (j, lb) in b.lits.iter().enumerate() {
            if la.positive == lb.positive {
                continue;
            }
            let mut u = Unifier::new(sig);
            if !u.unify_lits(la, lb) {
                continue;
            }
            let mut lits = Vec::new();
            lits.extend(
                a.lits
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, l)| l.apply(&u)),
            );
            lits.extend(
                b.lits
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, l)| l.apply(&u)),
            );
            out.push(Clause::new(lits));
        }
    }
    out
}

fn factors(sig: &Signature, c: &Clause) -> Vec<Clause> {
    let mut out = Vec::new();
    for i in 0..c.lits.len() {
        for j in 0..c.lits.len() {
            if i == j || c.lits[i].positive != c.lits[j].positive {
                continue;
            }
            let mut u = Unifier::new(sig);
            if u.unify_lits(&c.lits[i], &c.lits[j]) {
                out.push(Clause::new(
                    c.lits
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, l)| l.apply(&u))
                        .collect(),
                ));
            }
        }
    }
    out
}

fn symbols_term(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(_) => {}
        Term::Const { name, .. } => {
            out.insert(name.clone());
        }
        Term::App { func, args, .. } => {
            out.insert(func.clone());
            args.iter().for_each(|a| symbols_term(a, out));
        }
    }
}

fn symbols(f: &Formula, out: &mut BTreeSet<Name>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom { pred, args } => {
            out.insert(pred.clone());
            args.iter().for_each(|a| symbols_term(a, out));
        }
        Formula::Eq(a, b) => {
            symbols_term(a, out);
            symbols_term(b, out);
        }
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => symbols(g, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| symbols(g, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            symbols(a, out);
            symbols(b, out);
        }
        Formula::Modal {
            agent,
            moment,
            situation,
            body,
            ..
        } => {
            symbols_term(agent, out);
            symbols_term(moment, out);
            if let Some(s) = situation {
                symbols_term(s, out);
            }
            symbols(body, out);
        }
    }
}

/// Re-checks every step of `proof` against `assumptions` and `goal`.
///
/// Assumption steps must be (alpha-equivalent to) an assumption, modal
/// steps must satisfy their schema's side conditions, clause steps are
/// recomputed in a fresh shadow space, Skolem symbols must be fresh, and
/// the last step must conclude the goal.
pub fn verify_proof(
    proof: &Proof,
    assumptions: &[Formula],
    goal: &Formula,
    sig: &Signature,
) -> Result<(), VerifyError> {
    let last = proof.steps.last().ok_or(VerifyError::Empty)?;
    if !alpha_eq(&last.formula, goal) {
        return Err(VerifyError::WrongConclusion);
    }
    let mut used: BTreeSet<Name> = BTreeSet::new();
    for a in assumptions {
        symbols(a, &mut used);
    }
    symbols(goal, &mut used);
    let neg_goal = Formula::not(goal.clone());
    let mut map = ShadowMap::new();
    let mut shadow = |f: &Formula| map.shadow(f, sig, &mut Vec::new());

    for (i, step) in proof.steps.iter().enumerate() {
        if let Some(&p) = step.premises.iter().find(|&&p| p >= i) {
            return fail(i, format!("premise {} is not an earlier step", p + 1));
        }
        let prem: Vec<&Formula> = step
            .premises
            .iter()
            .map(|&p| &proof.steps[p].formula)
            .collect();
        let arity = |n: usize| -> Result<(), VerifyError> {
            if prem.len() == n {
                Ok(())
            } else {
                fail(
                    i,
                    format!("{} takes {n} premise(s), got {}", step.rule, prem.len()),
                )
            }
        };
        let f = &step.formula;
        match step.rule {
            Rule::Assume => {
                arity(0)?;
                if !assumptions.iter().any(|a| alpha_eq(a, f)) {
                    return fail(i, "not an assumption");
                }
            }
            Rule::NegateGoal => {
                arity(0)?;
                if !alpha_eq(f, &neg_goal) {
                    return fail(i, "not the negated goal");
                }
            }
            Rule::S1 => {
                arity(1)?;
                check_s1(prem[0], f).or_else(|e| fail(i, e))?;
            }
            Rule::S2 => {
                arity(1)?;
                check_s2(prem[0], f).or_else(|e| fail(i, e))?;
            }
            Rule::S3 => {
                arity(2)?;
                check_s3(prem[0], prem[1], f)
                    .or_else(|_| check_s3(prem[1], prem[0], f))
                    .or_else(|e| fail(i, e))?;
            }
            Rule::S4 => {
                arity(1)?;
                check_s4(prem[0], f).or_else(|e| fail(i, e))?;
            }
            Rule::S1Axiom | Rule::S2Axiom | Rule::S3Axiom | Rule::S4Axiom => {
                arity(0)?;
                if !f.is_closed() {
                    return fail(i, "schema instance is not closed");
                }
                check_axiom(step.rule, f).or_else(|e| fail(i, e))?;
            }
            Rule::Cnf => {
                arity(1)?;
                let tag = skolem_tag(prem[0]);
                let Ok(clauses) = clausify(&shadow(prem[0]), &tag) else {
                    return fail(i, "premise cannot be clausified");
                };
                let Some(c) = clause_of(&shadow(f)) else {
                    return fail(i, "conclusion is not a clause");
                };
                if !clauses.iter().any(|d| is_variant(sig, d, &c)) {
                    return fail(i, "conclusion is not a clause of the premise");
                }
                let mut syms = BTreeSet::new();
                symbols(f, &mut syms);
                let prefix = format!("sk{tag}_");
                if let Some(s) = syms
                    .iter()
                    .find(|s| s.starts_with(&prefix) && used.contains(*s))
                {
                    return fail(i, format!("Skolem symbol `{s}` is not fresh"));
                }
            }
            Rule::Resolve | Rule::Factor => {
                let parents = prem
                    .iter()
                    .map(|p| clause_of(&shadow(p)))
                    .collect::<Option<Vec<_>>>();
                let (Some(parents), Some(c)) = (parents, clause_of(&shadow(f))) else {
                    return fail(i, "premises and conclusion must be clauses");
                };
                let ok = if step.rule == Rule::Resolve {
                    arity(2)?;
                    resolvents(sig, &parents[0], &parents[1])
                        .iter()
                        .any(|r| is_variant(sig, r, &c))
                } else {
                    arity(1)?;
                    factors(sig, &parents[0])
                        .iter()
                        .any(|r| is_variant(sig, r, &c))
                };
                if !ok {
                    return fail(i, format!("not a valid {} inference", step.rule));
                }
            }
            Rule::Reflexivity => {
                arity(0)?;
                let ok = matches!(f, Formula::Forall(x, body)
                    if matches!(&**body, Formula::Eq(Term::Var(a), Term::Var(b)) if a == x && b == x));
                if !ok {
                    return fail(i, "reflexivity must read (forall x:S (= x x))");
                }
            }
            Rule::Distinct => {
                arity(1)?;
                let (Some(p), Some(c)) = (clause_of(&shadow(prem[0])), clause_of(&shadow(f)))
                else {
                    return fail(i, "premise and conclusion must be clauses");
                };
                if !drop_distinct(&p).is_some_and(|d| is_variant(sig, &d, &c)) {
                    return fail(
                        i,
                        "conclusion does not drop exactly the distinct equalities",
                    );
                }
            }
            Rule::Contradiction => {
                arity(2)?;
                let negs = step
                    .premises
                    .iter()
                    .any(|&p| proof.steps[p].rule == Rule::NegateGoal);
                let empty = prem.iter().any(|p| matches!(p, Formula::False));
                if !negs || !empty {
                    return fail(
                        i,
                        "contradiction needs the negated goal and the empty clause",
                    );
                }
                if !alpha_eq(f, goal) {
                    return fail(i, "contradiction must conclude the goal");
                }
            }
        }
    }
    Ok(())
}
