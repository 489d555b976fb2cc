//! Formula and term reader over [`SExpr`] trees.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Pos, SyntaxError};
use crate::sexpr::{self, AtomKind, SExpr};
use crate::syntax::{
    name, Formula, Modality, Signature, Sort, Term, Var, AGENT, MOMENT, SIGMA_DEFAULT, SITUATION,
};

/// Parses one formula. Identifiers resolve to bound variables first, then
/// to declared constants; integers are moments.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    Reader::new(sig).formula(&sexpr::read_one(text)?)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    Reader::new(sig).term(&sexpr::read_one(text)?)
}

/// Parses every top-level formula in `text`.
pub fn parse_formulas(text: &str, sig: &Signature) -> Result<Vec<Formula>, SyntaxError> {
    let reader = Reader::new(sig);
    sexpr::read_all(text)?
        .iter()
        .map(|e| reader.formula(e))
        .collect()
}

/// Stateless reader; `free` variables are in scope everywhere.
pub struct Reader<'a> {
    sig: &'a Signature,
    free: Vec<Var>,
}

impl<'a> Reader<'a> {
    pub fn new(sig: &'a Signature) -> Reader<'a> {
        Reader {
            sig,
            free: Vec::new(),
        }
    }

    pub fn with_free_vars(mut self, vars: Vec<Var>) -> Reader<'a> {
        self.free = vars;
        self
    }

    pub fn formula(&self, e: &SExpr) -> Result<Formula, SyntaxError> {
        let mut scope = self.free.clone();
        self.formula_in(e, &mut scope)
    }

    pub fn term(&self, e: &SExpr) -> Result<Term, SyntaxError> {
        let scope = self.free.clone();
        self.term_in(e, &scope)
    }

    fn formula_in(&self, e: &SExpr, scope: &mut Vec<Var>) -> Result<Formula, SyntaxError> {
        let pos = e.pos();
        let items = match e {
            SExpr::Atom { text, kind, .. } => {
                return match (kind, text.as_str()) {
                    (AtomKind::Ident, "true") => Ok(Formula::True),
                    (AtomKind::Ident, "false") => Ok(Formula::False),
                    (AtomKind::Ident, p) => self.atom(p, &[], pos, scope),
                    _ => Err(SyntaxError::Malformed {
                        pos,
                        msg: format!("expected a formula, found `{text}`"),
                    }),
                }
            }
            SExpr::List { items, .. } => items,
        };
        let Some(head) = items.first() else {
            return Err(SyntaxError::Malformed {
                pos,
                msg: "empty formula".to_string(),
            });
        };
        let rest = &items[1..];
        if let SExpr::Atom {
            kind: AtomKind::Equals,
            ..
        } = head
        {
            if rest.len() != 2 {
                return Err(arity("=", "2", rest.len(), pos));
            }
            let a = self.term_in(&rest[0], scope)?;
            let b = self.term_in(&rest[1], scope)?;
            if self.sig.glb(a.sort(), b.sort()).is_none() {
                return Err(SyntaxError::Sort {
                    pos: rest[1].pos(),
                    expected: a.sort().to_string(),
                    found: b.sort().to_string(),
                });
            }
            return Ok(Formula::Eq(a, b));
        }
        let Some(h) = head.as_ident() else {
            return Err(SyntaxError::Malformed {
                pos: head.pos(),
                msg: format!("expected an operator or predicate, found `{head}`"),
            });
        };
        match h {
            "true" | "false" => {
                if !rest.is_empty() {
                    return Err(arity(h, "0", rest.len(), pos));
                }
                Ok(if h == "true" {
                    Formula::True
                } else {
                    Formula::False
                })
            }
            "not" => {
                if rest.len() != 1 {
                    return Err(arity(h, "1", rest.len(), pos));
                }
                Ok(Formula::not(self.formula_in(&rest[0], scope)?))
            }
            "and" | "or" => {
                if rest.is_empty() {
                    return Err(arity(h, "at least 1", 0, pos));
                }
                let fs = rest
                    .iter()
                    .map(|r| self.formula_in(r, scope))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(if h == "and" {
                    Formula::and(fs)
                } else {
                    Formula::or(fs)
                })
            }
            "implies" | "iff" => {
                if rest.len() != 2 {
                    return Err(arity(h, "2", rest.len(), pos));
                }
                let a = self.formula_in(&rest[0], scope)?;
                let b = self.formula_in(&rest[1], scope)?;
                Ok(if h == "implies" {
                    Formula::implies(a, b)
                } else {
                    Formula::iff(a, b)
                })
            }
            "forall" | "exists" => {
                // (forall x : Sort body)
                if rest.len() != 4 || !rest[1].is_colon() {
                    return Err(SyntaxError::Malformed {
                        pos,
                        msg: format!("expected `({h} var : Sort formula)`"),
                    });
                }
                let vname = rest[0].as_ident().ok_or_else(|| SyntaxError::Malformed {
                    pos: rest[0].pos(),
                    msg: "expected a variable name".to_string(),
                })?;
                let sname = rest[2].as_ident().ok_or_else(|| SyntaxError::Malformed {
                    pos: rest[2].pos(),
                    msg: "expected a sort name".to_string(),
                })?;
                if !self.sig.has_sort(sname) {
                    return Err(SyntaxError::UnknownSymbol {
                        pos: rest[2].pos(),
                        name: sname.to_string(),
                    });
                }
                let v = Var::new(vname, Sort::new(sname));
                scope.push(v.clone());
                let body = self.formula_in(&rest[3], scope);
                scope.pop();
                let body = Box::new(body?);
                Ok(if h == "forall" {
                    Formula::Forall(v, body)
                } else {
                    Formula::Exists(v, body)
                })
            }
            "obligated" => {
                if rest.len() != 3 && rest.len() != 4 {
                    return Err(arity(
                        h,
                        "4 (agent, moment, situation, body) or 3 (agent, moment, body)",
                        rest.len(),
                        pos,
                    ));
                }
                let agent = self.sorted_term(&rest[0], scope, AGENT)?;
                let moment = self.sorted_term(&rest[1], scope, MOMENT)?;
                let (situation, body) = if rest.len() == 4 {
                    (self.sorted_term(&rest[2], scope, SITUATION)?, &rest[3])
                } else {
                    (
                        Term::constant(SIGMA_DEFAULT, Sort::new(SITUATION)),
                        &rest[2],
                    )
                };
                let body = self.formula_in(body, scope)?;
                Ok(Formula::obligated(agent, moment, situation, body))
            }
            _ => {
                if let Some(op) = Modality::from_keyword(h) {
                    if rest.len() != 3 {
                        return Err(arity(h, "3 (agent, moment, body)", rest.len(), pos));
                    }
                    let agent = self.sorted_term(&rest[0], scope, AGENT)?;
                    let moment = self.sorted_term(&rest[1], scope, MOMENT)?;
                    let body = self.formula_in(&rest[2], scope)?;
                    return Ok(Formula::modal(op, agent, moment, body));
                }
                self.atom(h, rest, head.pos(), scope)
            }
        }
    }

    fn atom(
        &self,
        pred: &str,
        args: &[SExpr],
        pos: Pos,
        scope: &[Var],
    ) -> Result<Formula, SyntaxError> {
        let decl = match self.sig.symbol(pred) {
            Some(d) if d.is_predicate() => d,
            _ => {
                return Err(SyntaxError::UnknownSymbol {
                    pos,
                    name: pred.to_string(),
                })
            }
        };
        if decl.args.len() != args.len() {
            return Err(arity(pred, &decl.args.len().to_string(), args.len(), pos));
        }
        let mut terms = Vec::with_capacity(args.len());
        for (a, s) in args.iter().zip(&decl.args) {
            terms.push(self.sorted_term(a, scope, s.as_str())?);
        }
        Ok(Formula::Atom {
            pred: name(pred),
            args: terms,
        })
    }

    fn sorted_term(&self, e: &SExpr, scope: &[Var], expected: &str) -> Result<Term, SyntaxError> {
        let t = self.term_in(e, scope)?;
        if self.sig.is_subsort(t.sort(), &Sort::new(expected)) {
            Ok(t)
        } else {
            Err(SyntaxError::Sort {
                pos: e.pos(),
                expected: expected.to_string(),
                found: t.sort().to_string(),
            })
        }
    }

    fn term_in(&self, e: &SExpr, scope: &[Var]) -> Result<Term, SyntaxError> {
        let pos = e.pos();
        match e {
            SExpr::Atom {
                text,
                kind: AtomKind::Ident,
                ..
            } => {
                if let Some(v) = scope.iter().rev().find(|v| &*v.name == text.as_str()) {
                    return Ok(Term::Var(v.clone()));
                }
                match self.sig.constant_sort(text) {
                    Some(sort) => Ok(Term::Const {
                        name: name(text),
                        sort,
                    }),
                    None => Err(SyntaxError::UnknownSymbol {
                        pos,
                        name: text.clone(),
                    }),
                }
            }
            SExpr::Atom {
                text,
                kind: AtomKind::Int,
                ..
            } if !text.starts_with('-') => {
                let digits = text.trim_start_matches('0');
                Ok(Term::Const {
                    name: name(if digits.is_empty() { "0" } else { digits }),
                    sort: Sort::new(MOMENT),
                })
            }
            SExpr::Atom { text, .. } => Err(SyntaxError::Malformed {
                pos,
                msg: format!("expected a term, found `{text}`"),
            }),
            SExpr::List { items, .. } => {
                let Some(f) = items.first().and_then(SExpr::as_ident) else {
                    return Err(SyntaxError::Malformed {
                        pos,
                        msg: "expected a function application".to_string(),
                    });
                };
                let decl = match self.sig.symbol(f) {
                    Some(d) if !d.is_predicate() => d,
                    _ => {
                        return Err(SyntaxError::UnknownSymbol {
                            pos: items[0].pos(),
                            name: f.to_string(),
                        })
                    }
                };
                let args = &items[1..];
                if decl.args.len() != args.len() {
                    return Err(arity(f, &decl.args.len().to_string(), args.len(), pos));
                }
                let mut terms = Vec::with_capacity(args.len());
                for (a, s) in args.iter().zip(&decl.args) {
                    terms.push(self.sorted_term(a, scope, s.as_str())?);
                }
                Ok(Term::App {
                    func: name(f),
                    args: terms,
                    sort: decl.result.clone(),
                })
            }
        }
    }
}

fn arity(symbol: &str, expected: &str, found: usize, pos: Pos) -> SyntaxError {
    SyntaxError::Arity {
        pos,
        symbol: symbol.to_string(),
        expected: expected.to_string(),
        found,
    }
}
