//! Canonical S-expression printing. `parse_formula(print_formula(f))`
//! reproduces `f` for every well-sorted closed formula.

use alloc::string::{String, ToString};
use core::fmt;

use crate::syntax::{Formula, Term, Var};

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::Const { name, .. } => f.write_str(name),
            Term::App { func, args, .. } => {
                write!(f, "({func}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

fn list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({head}")?;
    for it in items {
        write!(f, " {it}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("(true)"),
            Formula::False => f.write_str("(false)"),
            Formula::Atom { pred, args } => {
                write!(f, "({pred}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(fs) if fs.len() == 1 => write!(f, "{}", fs[0]),
            Formula::Or(fs) if fs.len() == 1 => write!(f, "{}", fs[0]),
            Formula::And(fs) => list(f, "and", fs),
            Formula::Or(fs) => list(f, "or", fs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Modal {
                op,
                agent,
                moment,
                situation,
                body,
            } => {
                write!(f, "({} {agent} {moment}", op.keyword())?;
                if let Some(s) = situation {
                    write!(f, " {s}")?;
                }
                write!(f, " {body})")
            }
        }
    }
}
