//! Abstract syntax of the sorted modal language and its signatures.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::SortError;

/// Interned-ish identifier. Cheap to clone and shareable across threads.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

pub const AGENT: &str = "Agent";
pub const MOMENT: &str = "Moment";
pub const ACTION_TYPE: &str = "ActionType";
pub const ACTION: &str = "Action";
pub const EVENT: &str = "Event";
pub const FLUENT: &str = "Fluent";
pub const BOOLEAN: &str = "Boolean";
pub const GOAL: &str = "Goal";
pub const SITUATION: &str = "Situation";

pub const HOLDS: &str = "holds";
pub const HAPPENS: &str = "happens";
pub const PRIOR: &str = "prior";
pub const INITIATES: &str = "initiates";
pub const TERMINATES: &str = "terminates";
pub const PREVENTS: &str = "Prevents";
pub const BLOCK: &str = "Block";
pub const INNOCENT: &str = "innocent";
pub const ACTION_FN: &str = "action";
pub const SIGMA_DEFAULT: &str = "sigma_default";

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(pub Name);

impl Sort {
    pub fn new(s: &str) -> Sort {
        Sort(name(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Name,
    pub sort: Sort,
}

impl Var {
    pub fn new(name_: &str, sort: Sort) -> Var {
        Var {
            name: name(name_),
            sort,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Const {
        name: Name,
        sort: Sort,
    },
    App {
        func: Name,
        args: Vec<Term>,
        sort: Sort,
    },
}

impl Term {
    pub fn constant(n: &str, sort: Sort) -> Term {
        Term::Const {
            name: name(n),
            sort,
        }
    }

    pub fn var(n: &str, sort: Sort) -> Term {
        Term::Var(Var::new(n, sort))
    }

    pub fn moment(m: u32) -> Term {
        Term::Const {
            name: name(&m.to_string()),
            sort: Sort::new(MOMENT),
        }
    }

    pub fn app(func: &str, args: Vec<Term>, sort: Sort) -> Term {
        Term::App {
            func: name(func),
            args,
            sort,
        }
    }

    /// `action(agent, atype)`.
    pub fn action(agent: Term, atype: Term) -> Term {
        Term::app(ACTION_FN, vec![agent, atype], Sort::new(ACTION))
    }

    pub fn sort(&self) -> &Sort {
        match self {
            Term::Var(v) => &v.sort,
            Term::Const { sort, .. } | Term::App { sort, .. } => sort,
        }
    }

    /// Integer value of a moment literal.
    pub fn as_moment(&self) -> Option<u32> {
        match self {
            Term::Const { name, sort } if sort.as_str() == MOMENT => name.parse().ok(),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const { .. } => true,
            Term::App { args, .. } => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const { .. } => {}
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn mentions_var(&self, n: &str) -> bool {
        match self {
            Term::Var(v) => &*v.name == n,
            Term::Const { .. } => false,
            Term::App { args, .. } => args.iter().any(|a| a.mentions_var(n)),
        }
    }

    /// Symbol count, used as clause weight.
    pub fn weight(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const { .. } => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::weight).sum::<usize>(),
        }
    }
}

/// Intensional operators. `Perceives` is the `P` operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    Knows,
    Believes,
    Desires,
    Intends,
    Perceives,
    Obligated,
}

impl Modality {
    pub const ALL: [Modality; 6] = [
        Modality::Knows,
        Modality::Believes,
        Modality::Desires,
        Modality::Intends,
        Modality::Perceives,
        Modality::Obligated,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Modality::Knows => "knows",
            Modality::Believes => "believes",
            Modality::Desires => "desires",
            Modality::Intends => "intends",
            Modality::Perceives => "perceives",
            Modality::Obligated => "obligated",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Modality> {
        Modality::ALL.into_iter().find(|m| m.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom {
        pred: Name,
        args: Vec<Term>,
    },
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    /// `situation` is present exactly when `op` is [`Modality::Obligated`].
    Modal {
        op: Modality,
        agent: Term,
        moment: Term,
        situation: Option<Term>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom {
            pred: name(pred),
            args,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; a singleton collapses to its only element.
    pub fn and(mut fs: Vec<Formula>) -> Formula {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::And(fs)
        }
    }

    /// Disjunction; a singleton collapses to its only element.
    pub fn or(mut fs: Vec<Formula>) -> Formula {
        if fs.len() == 1 {
            fs.pop().unwrap()
        } else {
            Formula::Or(fs)
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    /// Non-obligation modal application.
    pub fn modal(op: Modality, agent: Term, moment: Term, body: Formula) -> Formula {
        let situation = if op == Modality::Obligated {
            Some(Term::constant(SIGMA_DEFAULT, Sort::new(SITUATION)))
        } else {
            None
        };
        Formula::Modal {
            op,
            agent,
            moment,
            situation,
            body: Box::new(body),
        }
    }

    pub fn knows(agent: Term, moment: Term, body: Formula) -> Formula {
        Formula::modal(Modality::Knows, agent, moment, body)
    }

    pub fn believes(agent: Term, moment: Term, body: Formula) -> Formula {
        Formula::modal(Modality::Believes, agent, moment, body)
    }

    pub fn desires(agent: Term, moment: Term, body: Formula) -> Formula {
        Formula::modal(Modality::Desires, agent, moment, body)
    }

    pub fn intends(agent: Term, moment: Term, body: Formula) -> Formula {
        Formula::modal(Modality::Intends, agent, moment, body)
    }

    pub fn obligated(agent: Term, moment: Term, situation: Term, body: Formula) -> Formula {
        Formula::Modal {
            op: Modality::Obligated,
            agent,
            moment,
            situation: Some(situation),
            body: Box::new(body),
        }
    }

    pub fn holds(fluent: Term, moment: Term) -> Formula {
        Formula::atom(HOLDS, vec![fluent, moment])
    }

    pub fn happens(event: Term, moment: Term) -> Formula {
        Formula::atom(HAPPENS, vec![event, moment])
    }

    pub fn prior(a: Term, b: Term) -> Formula {
        Formula::atom(PRIOR, vec![a, b])
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Formula::Modal { .. })
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        let push_term = |t: &Term, bound: &Vec<Var>, out: &mut Vec<Var>| {
            let mut vs = Vec::new();
            t.collect_vars(&mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => args.iter().for_each(|t| push_term(t, bound, out)),
            Formula::Eq(a, b) => {
                push_term(a, bound, out);
                push_term(b, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            Formula::Modal {
                agent,
                moment,
                situation,
                body,
                ..
            } => {
                push_term(agent, bound, out);
                push_term(moment, bound, out);
                if let Some(s) = situation {
                    push_term(s, bound, out);
                }
                body.collect_free(bound, out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_var_names(&self, out: &mut BTreeSet<Name>) {
        let term = |t: &Term, out: &mut BTreeSet<Name>| {
            let mut vs = Vec::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().map(|v| v.name));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => args.iter().for_each(|t| term(t, out)),
            Formula::Eq(a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::Not(f) => f.all_var_names(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.all_var_names(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.all_var_names(out);
                b.all_var_names(out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                out.insert(v.name.clone());
                f.all_var_names(out);
            }
            Formula::Modal {
                agent,
                moment,
                situation,
                body,
                ..
            } => {
                term(agent, out);
                term(moment, out);
                if let Some(s) = situation {
                    term(s, out);
                }
                body.all_var_names(out);
            }
        }
    }

    /// Number of nodes; used for generator shrinking and limits.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
            Formula::Modal { body, .. } => 1 + body.size(),
        }
    }
}

/// Argument and result sorts of a function or predicate symbol.
/// Predicates have result sort `Boolean`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSig {
    pub args: Vec<Sort>,
    pub result: Sort,
}

impl SymbolSig {
    pub fn is_predicate(&self) -> bool {
        self.result.as_str() == BOOLEAN
    }
}

/// Declared sorts (with their direct supersorts), symbols and constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeMap<Name, Vec<Sort>>,
    symbols: BTreeMap<Name, SymbolSig>,
    constants: BTreeMap<Name, Sort>,
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new()
    }
}

impl Signature {
    /// A signature holding the built-in sorts, the event-calculus symbols,
    /// `action`, `Prevents`, `Block`, `innocent` and `sigma_default`.
    pub fn new() -> Signature {
        let mut sig = Signature {
            sorts: BTreeMap::new(),
            symbols: BTreeMap::new(),
            constants: BTreeMap::new(),
        };
        for s in [
            AGENT,
            MOMENT,
            ACTION_TYPE,
            EVENT,
            FLUENT,
            BOOLEAN,
            SITUATION,
        ] {
            sig.sorts.insert(name(s), Vec::new());
        }
        sig.sorts.insert(name(ACTION), vec![Sort::new(EVENT)]);
        sig.sorts
            .insert(name(GOAL), vec![Sort::new(FLUENT), Sort::new(EVENT)]);

        let s = Sort::new;
        let preds: [(&str, Vec<Sort>); 8] = [
            (HOLDS, vec![s(FLUENT), s(MOMENT)]),
            (HAPPENS, vec![s(EVENT), s(MOMENT)]),
            (PRIOR, vec![s(MOMENT), s(MOMENT)]),
            (INITIATES, vec![s(EVENT), s(FLUENT), s(MOMENT)]),
            (TERMINATES, vec![s(EVENT), s(FLUENT), s(MOMENT)]),
            (
                PREVENTS,
                vec![s(AGENT), s(AGENT), s(GOAL), s(ACTION_TYPE), s(MOMENT)],
            ),
            (
                BLOCK,
                vec![s(AGENT), s(AGENT), s(GOAL), s(ACTION_TYPE), s(MOMENT)],
            ),
            (INNOCENT, vec![s(AGENT)]),
        ];
        for (p, args) in preds {
            sig.symbols.insert(
                name(p),
                SymbolSig {
                    args,
                    result: s(BOOLEAN),
                },
            );
        }
        sig.symbols.insert(
            name(ACTION_FN),
            SymbolSig {
                args: vec![s(AGENT), s(ACTION_TYPE)],
                result: s(ACTION),
            },
        );
        sig.constants.insert(name(SIGMA_DEFAULT), s(SITUATION));
        sig
    }

    pub fn declare_sort(&mut self, sort: &str, parents: &[&str]) -> Result<(), SortError> {
        if self.sorts.contains_key(sort) {
            return Err(SortError::Duplicate(sort.to_string()));
        }
        let mut ps = Vec::new();
        for p in parents {
            if !self.sorts.contains_key(*p) {
                return Err(SortError::UnknownSort(p.to_string()));
            }
            ps.push(Sort::new(p));
        }
        self.sorts.insert(name(sort), ps);
        Ok(())
    }

    pub fn declare_constant(&mut self, c: &str, sort: &str) -> Result<(), SortError> {
        if !self.sorts.contains_key(sort) {
            return Err(SortError::UnknownSort(sort.to_string()));
        }
        if self.constants.contains_key(c) || self.symbols.contains_key(c) {
            return Err(SortError::Duplicate(c.to_string()));
        }
        self.constants.insert(name(c), Sort::new(sort));
        Ok(())
    }

    pub fn declare_predicate(&mut self, p: &str, args: &[&str]) -> Result<(), SortError> {
        self.declare_symbol(p, args, BOOLEAN)
    }

    pub fn declare_function(
        &mut self,
        f: &str,
        args: &[&str],
        result: &str,
    ) -> Result<(), SortError> {
        if result == BOOLEAN {
            return Err(SortError::Mismatch {
                context: format!("function `{f}`"),
                expected: "a non-Boolean result sort".to_string(),
                found: result.to_string(),
            });
        }
        self.declare_symbol(f, args, result)
    }

    fn declare_symbol(&mut self, f: &str, args: &[&str], result: &str) -> Result<(), SortError> {
        if self.symbols.contains_key(f) || self.constants.contains_key(f) {
            return Err(SortError::Duplicate(f.to_string()));
        }
        for s in args.iter().chain(core::iter::once(&result)) {
            if !self.sorts.contains_key(*s) {
                return Err(SortError::UnknownSort(s.to_string()));
            }
        }
        self.symbols.insert(
            name(f),
            SymbolSig {
                args: args.iter().map(|s| Sort::new(s)).collect(),
                result: Sort::new(result),
            },
        );
        Ok(())
    }

    pub fn has_sort(&self, s: &str) -> bool {
        self.sorts.contains_key(s)
    }

    pub fn sorts(&self) -> impl Iterator<Item = Sort> + '_ {
        self.sorts.keys().map(|k| Sort(k.clone()))
    }

    pub fn symbol(&self, s: &str) -> Option<&SymbolSig> {
        self.symbols.get(s)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Name, &SymbolSig)> {
        self.symbols.iter()
    }

    /// Sort of a declared constant or an integer moment literal.
    pub fn constant_sort(&self, c: &str) -> Option<Sort> {
        if let Some(s) = self.constants.get(c) {
            return Some(s.clone());
        }
        if !c.is_empty() && c.bytes().all(|b| b.is_ascii_digit()) {
            return Some(Sort::new(MOMENT));
        }
        None
    }

    pub fn constants(&self) -> impl Iterator<Item = (&Name, &Sort)> {
        self.constants.iter()
    }

    /// Reflexive-transitive subsort relation.
    pub fn is_subsort(&self, sub: &Sort, sup: &Sort) -> bool {
        if sub == sup {
            return true;
        }
        match self.sorts.get(&sub.0) {
            Some(parents) => parents.iter().any(|p| self.is_subsort(p, sup)),
            None => false,
        }
    }

    /// Greatest common subsort, when it is unique.
    pub fn glb(&self, a: &Sort, b: &Sort) -> Option<Sort> {
        if self.is_subsort(a, b) {
            return Some(a.clone());
        }
        if self.is_subsort(b, a) {
            return Some(b.clone());
        }
        let common: Vec<Sort> = self
            .sorts()
            .filter(|s| self.is_subsort(s, a) && self.is_subsort(s, b))
            .collect();
        let maximal: Vec<&Sort> = common
            .iter()
            .filter(|s| !common.iter().any(|o| o != *s && self.is_subsort(s, o)))
            .collect();
        match maximal.as_slice() {
            [one] => Some((*one).clone()),
            _ => None,
        }
    }

    /// Eagerly checks that a term respects the declared sorts.
    pub fn check_term(&self, t: &Term) -> Result<(), SortError> {
        match t {
            Term::Var(v) => {
                if self.has_sort(v.sort.as_str()) {
                    Ok(())
                } else {
                    Err(SortError::UnknownSort(v.sort.to_string()))
                }
            }
            Term::Const { name, sort } => match self.constant_sort(name) {
                Some(s) if &s == sort => Ok(()),
                Some(s) => Err(SortError::Mismatch {
                    context: format!("constant `{name}`"),
                    expected: s.to_string(),
                    found: sort.to_string(),
                }),
                None => Err(SortError::UnknownSymbol(name.to_string())),
            },
            Term::App { func, args, sort } => {
                let decl = self
                    .symbols
                    .get(func)
                    .ok_or_else(|| SortError::UnknownSymbol(func.to_string()))?;
                if decl.is_predicate() {
                    return Err(SortError::Mismatch {
                        context: format!("term `{func}`"),
                        expected: "a function symbol".to_string(),
                        found: "a predicate".to_string(),
                    });
                }
                if &decl.result != sort {
                    return Err(SortError::Mismatch {
                        context: format!("result of `{func}`"),
                        expected: decl.result.to_string(),
                        found: sort.to_string(),
                    });
                }
                self.check_args(func, &decl.args, args)
            }
        }
    }

    fn check_args(&self, symbol: &str, expected: &[Sort], args: &[Term]) -> Result<(), SortError> {
        if expected.len() != args.len() {
            return Err(SortError::Arity {
                symbol: symbol.to_string(),
                expected: expected.len(),
                found: args.len(),
            });
        }
        for (i, (s, a)) in expected.iter().zip(args).enumerate() {
            self.check_term(a)?;
            self.expect_sort(a, s, || format!("argument {} of `{symbol}`", i + 1))?;
        }
        Ok(())
    }

    fn expect_sort(
        &self,
        t: &Term,
        expected: &Sort,
        context: impl FnOnce() -> String,
    ) -> Result<(), SortError> {
        if self.is_subsort(t.sort(), expected) {
            Ok(())
        } else {
            Err(SortError::Mismatch {
                context: context(),
                expected: expected.to_string(),
                found: t.sort().to_string(),
            })
        }
    }

    /// Eagerly checks that a formula is well-sorted.
    pub fn check_formula(&self, f: &Formula) -> Result<(), SortError> {
        match f {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom { pred, args } => {
                let decl = self
                    .symbols
                    .get(pred)
                    .ok_or_else(|| SortError::UnknownSymbol(pred.to_string()))?;
                if !decl.is_predicate() {
                    return Err(SortError::Mismatch {
                        context: format!("atom `{pred}`"),
                        expected: "a predicate".to_string(),
                        found: "a function symbol".to_string(),
                    });
                }
                self.check_args(pred, &decl.args, args)
            }
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)?;
                if self.glb(a.sort(), b.sort()).is_some() {
                    Ok(())
                } else {
                    Err(SortError::Mismatch {
                        context: "equality".to_string(),
                        expected: a.sort().to_string(),
                        found: b.sort().to_string(),
                    })
                }
            }
            Formula::Not(g) => self.check_formula(g),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|g| self.check_formula(g)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                if !self.has_sort(v.sort.as_str()) {
                    return Err(SortError::UnknownSort(v.sort.to_string()));
                }
                self.check_formula(g)
            }
            Formula::Modal {
                op,
                agent,
                moment,
                situation,
                body,
            } => {
                self.check_term(agent)?;
                self.expect_sort(agent, &Sort::new(AGENT), || {
                    format!("agent of `{}`", op.keyword())
                })?;
                self.check_term(moment)?;
                self.expect_sort(moment, &Sort::new(MOMENT), || {
                    format!("moment of `{}`", op.keyword())
                })?;
                match (op, situation) {
                    (Modality::Obligated, Some(s)) => {
                        self.check_term(s)?;
                        self.expect_sort(s, &Sort::new(SITUATION), || {
                            "situation of `obligated`".to_string()
                        })?;
                    }
                    (Modality::Obligated, None) => {
                        return Err(SortError::Arity {
                            symbol: "obligated".to_string(),
                            expected: 4,
                            found: 3,
                        })
                    }
                    (_, Some(_)) => {
                        return Err(SortError::Arity {
                            symbol: op.keyword().to_string(),
                            expected: 3,
                            found: 4,
                        })
                    }
                    (_, None) => {}
                }
                self.check_formula(body)
            }
        }
    }

    /// Well-sorted and without free variables.
    pub fn check_closed(&self, f: &Formula) -> Result<(), SortError> {
        self.check_formula(f)?;
        match f.free_vars().first() {
            Some(v) => Err(SortError::NotClosed(v.name.to_string())),
            None => Ok(()),
        }
    }

    /// Expected sorts of the argument positions of `symbol`, if declared.
    pub fn arg_sorts(&self, symbol: &str) -> Option<&[Sort]> {
        self.symbols.get(symbol).map(|d| d.args.as_slice())
    }
}
