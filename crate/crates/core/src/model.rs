//! Bounded finite-model finder.
//!
//! Domains are built from the constants the formulas mention, the
//! applications of the function symbols they use (read as free
//! constructors) and a few fresh elements per quantified sort. Function
//! applications are nested one level deeper than the formulas go; for a
//! function whose result feeds back into its own arguments this is a finite
//! window on the term universe, and applications that leave the window
//! still get atoms of their own but are not quantified over. Formulas are
//! grounded over those domains, modal formulas become propositional
//! variables tied together by the instances of the modal schemata that
//! concern them, and the result is handed to a small DPLL solver.
//!
//! Within its window, a model found this way is a genuine model of the input together with
//! every schema instance: modal formulas that never came up are read as
//! false, except that K or B of a conjunction is read as true exactly when
//! K or B holds of every conjunct. Not finding a model says nothing beyond
//! the bounds that were tried.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::subst::{alpha_normal, substitute_unchecked, Binding};
use crate::syntax::{name, Formula, Modality, Name, Signature, Sort, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelBounds {
    /// Fresh elements tried per quantified sort: 0, 1, ..., `max_extra`.
    pub max_extra: usize,
    /// Upper limits on domain sizes, per sort.
    pub max_domain: Vec<(Sort, usize)>,
    /// Give up when grounding creates more propositional atoms than this.
    pub max_atoms: usize,
}

impl Default for ModelBounds {
    fn default() -> Self {
        ModelBounds {
            max_extra: 1,
            max_domain: Vec::new(),
            max_atoms: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSearch {
    Found(Model),
    /// No model within the bounds.
    NotFound,
    Unsupported(String),
}

impl ModelSearch {
    pub fn model(&self) -> Option<&Model> {
        match self {
            ModelSearch::Found(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub domains: BTreeMap<Sort, Vec<Term>>,
    /// True ground atoms.
    pub atoms: BTreeSet<Formula>,
    /// Truth values of the modal formulas that came up, keyed by their
    /// alpha-normal ground form.
    pub modal: BTreeMap<Formula, bool>,
}

impl Model {
    fn domain(&self, s: &Sort) -> &[Term] {
        self.domains.get(s).map_or(&[], |d| d.as_slice())
    }

    /// Evaluates a closed formula.
    pub fn satisfies(&self, f: &Formula) -> bool {
        self.eval(f, &Binding::new())
    }

    fn eval(&self, f: &Formula, env: &Binding) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { pred, args } => self.atoms.contains(&Formula::Atom {
                pred: pred.clone(),
                args: args
                    .iter()
                    .map(|a| crate::subst::subst_term(a, env))
                    .collect(),
            }),
            Formula::Eq(a, b) => {
                crate::subst::subst_term(a, env) == crate::subst::subst_term(b, env)
            }
            Formula::Not(g) => !self.eval(g, env),
            Formula::And(fs) => fs.iter().all(|g| self.eval(g, env)),
            Formula::Or(fs) => fs.iter().any(|g| self.eval(g, env)),
            Formula::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Formula::Iff(a, b) => self.eval(a, env) == self.eval(b, env),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let all = matches!(f, Formula::Forall(..));
                let mut inner = env.clone();
                inner.retain(|k, _| k.name != v.name);
                for e in self.domain(&v.sort) {
                    inner.insert(v.clone(), e.clone());
                    if self.eval(g, &inner) != all {
                        return !all;
                    }
                }
                all
            }
            Formula::Modal { .. } => self.modal_value(&alpha_normal(&substitute_unchecked(f, env))),
        }
    }

    fn modal_value(&self, key: &Formula) -> bool {
        if let Some(&v) = self.modal.get(key) {
            return v;
        }
        match key {
            Formula::Modal {
                op: Modality::Knows | Modality::Believes,
                body,
                ..
            } => match &**body {
                Formula::And(ps) => ps
                    .iter()
                    .all(|p| self.modal_value(&alpha_normal(&reframe(key, p)))),
                _ => false,
            },
            _ => false,
        }
    }
}

fn reframe(frame: &Formula, body: &Formula) -> Formula {
    reframe_op(frame, None, body)
}

fn reframe_op(frame: &Formula, op: Option<Modality>, body: &Formula) -> Formula {
    let Formula::Modal {
        op: o,
        agent,
        moment,
        situation,
        ..
    } = frame
    else {
        unreachable!()
    };
    Formula::Modal {
        op: op.unwrap_or(*o),
        agent: agent.clone(),
        moment: moment.clone(),
        situation: situation.clone(),
        body: Box::new(body.clone()),
    }
}

/// Searches for a model of `assumptions` in which `goal` is false.
pub fn countermodel(
    assumptions: &[Formula],
    goal: &Formula,
    sig: &Signature,
    bounds: &ModelBounds,
) -> ModelSearch {
    let mut fs = assumptions.to_vec();
    fs.push(Formula::not(goal.clone()));
    find_model(&fs, sig, bounds)
}

pub fn find_model(formulas: &[Formula], sig: &Signature, bounds: &ModelBounds) -> ModelSearch {
    let mut consts: BTreeSet<Term> = BTreeSet::new();
    let mut funcs: BTreeSet<Name> = BTreeSet::new();
    let mut qsorts: BTreeSet<Sort> = BTreeSet::new();
    for f in formulas {
        collect(f, &mut consts, &mut funcs, &mut qsorts);
    }
    let depth = formulas.iter().map(formula_depth).max().unwrap_or(0);
    for k in 0..=bounds.max_extra {
        let domains = build_domains(sig, &consts, &funcs, &qsorts, k, depth + 1);
        if bounds
            .max_domain
            .iter()
            .any(|(s, n)| domains.get(s).map_or(0, Vec::len) > *n)
        {
            break;
        }
        let mut g = Grounder {
            domains: &domains,
            atoms: BTreeMap::new(),
            modal: BTreeMap::new(),
            pending: Vec::new(),
            max_atoms: bounds.max_atoms,
            overflow: false,
        };
        let mut props: Vec<P> = formulas
            .iter()
            .map(|f| g.ground(f, &Binding::new()))
            .collect();
        while let Some(key) = g.pending.pop() {
            props.extend(g.schema(&key));
            if g.overflow {
                break;
            }
        }
        if g.overflow {
            return ModelSearch::Unsupported(format!(
                "grounding exceeds {} atoms",
                bounds.max_atoms
            ));
        }
        let mut cnf = Tseitin::new(g.atoms.len() + g.modal.len());
        for p in &props {
            let l = cnf.lit(p);
            cnf.clauses.push(vec![l]);
        }
        if let Some(assign) = solve(cnf.vars, &cnf.clauses) {
            let value = |v: u32| assign[v as usize];
            let atoms = g
                .atoms
                .iter()
                .filter(|(_, &v)| value(v))
                .map(|(a, _)| a.clone())
                .collect();
            let modal = g
                .modal
                .iter()
                .map(|(m, &v)| (m.clone(), value(v)))
                .collect();
            return ModelSearch::Found(Model {
                domains,
                atoms,
                modal,
            });
        }
    }
    ModelSearch::NotFound
}

fn term_depth(t: &Term) -> usize {
    match t {
        Term::App { args, .. } => 1 + args.iter().map(term_depth).max().unwrap_or(0),
        _ => 0,
    }
}

/// Deepest function nesting in a formula.
fn formula_depth(f: &Formula) -> usize {
    match f {
        Formula::True | Formula::False => 0,
        Formula::Atom { args, .. } => args.iter().map(term_depth).max().unwrap_or(0),
        Formula::Eq(a, b) => term_depth(a).max(term_depth(b)),
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => formula_depth(g),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().map(formula_depth).max().unwrap_or(0),
        Formula::Implies(a, b) | Formula::Iff(a, b) => formula_depth(a).max(formula_depth(b)),
        Formula::Modal {
            agent,
            moment,
            situation,
            body,
            ..
        } => [
            term_depth(agent),
            term_depth(moment),
            situation.as_ref().map_or(0, term_depth),
            formula_depth(body),
        ]
        .into_iter()
        .max()
        .unwrap_or(0),
    }
}

fn collect_term(t: &Term, consts: &mut BTreeSet<Term>, funcs: &mut BTreeSet<Name>) {
    match t {
        Term::Var(_) => {}
        Term::Const { .. } => {
            consts.insert(t.clone());
        }
        Term::App { func, args, .. } => {
            funcs.insert(func.clone());
            args.iter().for_each(|a| collect_term(a, consts, funcs));
        }
    }
}

fn collect(
    f: &Formula,
    consts: &mut BTreeSet<Term>,
    funcs: &mut BTreeSet<Name>,
    qsorts: &mut BTreeSet<Sort>,
) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom { args, .. } => args.iter().for_each(|a| collect_term(a, consts, funcs)),
        Formula::Eq(a, b) => {
            collect_term(a, consts, funcs);
            collect_term(b, consts, funcs);
        }
        Formula::Not(g) => collect(g, consts, funcs, qsorts),
        Formula::And(fs) | Formula::Or(fs) => {
            fs.iter().for_each(|g| collect(g, consts, funcs, qsorts))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            collect(a, consts, funcs, qsorts);
            collect(b, consts, funcs, qsorts);
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            qsorts.insert(v.sort.clone());
            collect(g, consts, funcs, qsorts);
        }
        Formula::Modal {
            agent,
            moment,
            situation,
            body,
            ..
        } => {
            collect_term(agent, consts, funcs);
            collect_term(moment, consts, funcs);
            if let Some(s) = situation {
                collect_term(s, consts, funcs);
            }
            collect(body, consts, funcs, qsorts);
        }
    }
}

fn build_domains(
    sig: &Signature,
    consts: &BTreeSet<Term>,
    funcs: &BTreeSet<Name>,
    qsorts: &BTreeSet<Sort>,
    extra: usize,
    rounds: usize,
) -> BTreeMap<Sort, Vec<Term>> {
    // Base elements: mentioned constants and fresh elements.
    let mut base: Vec<Term> = consts.iter().cloned().collect();
    for s in qsorts {
        for i in 0..extra {
            base.push(Term::Const {
                name: name(&format!("@{s}{i}")),
                sort: s.clone(),
            });
        }
    }
    let sorts: Vec<Sort> = sig.sorts().collect();
    // Quantified sorts must not be empty.
    for s in qsorts {
        if !base.iter().any(|t| sig.is_subsort(t.sort(), s)) {
            base.push(Term::Const {
                name: name(&format!("@{s}_")),
                sort: s.clone(),
            });
        }
    }
    let members = |elems: &BTreeSet<Term>, s: &Sort| -> Vec<Term> {
        elems
            .iter()
            .filter(|t| sig.is_subsort(t.sort(), s))
            .cloned()
            .collect()
    };
    let mut elems: BTreeSet<Term> = base.into_iter().collect();
    // Each round applies every function once more; recursive sorts stop
    // growing after the last round.
    for _ in 0..rounds {
        let mut next = elems.clone();
        for f in funcs {
            let Some(fs) = sig.symbol(f) else { continue };
            if fs.is_predicate() {
                continue;
            }
            let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
            for a in &fs.args {
                let da = members(&elems, a);
                combos = combos
                    .iter()
                    .flat_map(|c| {
                        da.iter().map(move |e| {
                            let mut c2 = c.clone();
                            c2.push(e.clone());
                            c2
                        })
                    })
                    .collect();
            }
            next.extend(combos.into_iter().map(|args| Term::App {
                func: f.clone(),
                args,
                sort: fs.result.clone(),
            }));
        }
        if next.len() == elems.len() {
            break;
        }
        elems = next;
    }
    sorts
        .iter()
        .map(|s| (s.clone(), members(&elems, s)))
        .collect()
}

#[derive(Clone, Debug)]
enum P {
    T,
    F,
    V(u32),
    Not(Box<P>),
    And(Vec<P>),
    Or(Vec<P>),
    Iff(Box<P>, Box<P>),
}

fn p_not(p: P) -> P {
    match p {
        P::T => P::F,
        P::F => P::T,
        P::Not(q) => *q,
        q => P::Not(Box::new(q)),
    }
}

fn p_and(ps: Vec<P>) -> P {
    let mut out = Vec::new();
    for p in ps {
        match p {
            P::T => {}
            P::F => return P::F,
            q => out.push(q),
        }
    }
    match out.len() {
        0 => P::T,
        1 => out.pop().unwrap(),
        _ => P::And(out),
    }
}

fn p_or(ps: Vec<P>) -> P {
    let mut out = Vec::new();
    for p in ps {
        match p {
            P::F => {}
            P::T => return P::T,
            q => out.push(q),
        }
    }
    match out.len() {
        0 => P::F,
        1 => out.pop().unwrap(),
        _ => P::Or(out),
    }
}

struct Grounder<'a> {
    domains: &'a BTreeMap<Sort, Vec<Term>>,
    atoms: BTreeMap<Formula, u32>,
    modal: BTreeMap<Formula, u32>,
    pending: Vec<Formula>,
    max_atoms: usize,
    overflow: bool,
}

impl Grounder<'_> {
    fn next_var(&self) -> u32 {
        (self.atoms.len() + self.modal.len()) as u32
    }

    fn atom(&mut self, a: Formula) -> P {
        if let Some(&v) = self.atoms.get(&a) {
            return P::V(v);
        }
        if self.atoms.len() + self.modal.len() >= self.max_atoms {
            self.overflow = true;
            return P::F;
        }
        let v = self.next_var();
        self.atoms.insert(a, v);
        P::V(v)
    }

    fn modal_var(&mut self, key: Formula) -> P {
        if let Some(&v) = self.modal.get(&key) {
            return P::V(v);
        }
        if self.atoms.len() + self.modal.len() >= self.max_atoms {
            self.overflow = true;
            return P::F;
        }
        let v = self.next_var();
        self.modal.insert(key.clone(), v);
        self.pending.push(key);
        P::V(v)
    }

    fn ground(&mut self, f: &Formula, env: &Binding) -> P {
        if self.overflow {
            return P::F;
        }
        match f {
            Formula::True => P::T,
            Formula::False => P::F,
            Formula::Atom { pred, args } => self.atom(Formula::Atom {
                pred: pred.clone(),
                args: args
                    .iter()
                    .map(|a| crate::subst::subst_term(a, env))
                    .collect(),
            }),
            Formula::Eq(a, b) => {
                if crate::subst::subst_term(a, env) == crate::subst::subst_term(b, env) {
                    P::T
                } else {
                    P::F
                }
            }
            Formula::Not(g) => p_not(self.ground(g, env)),
            Formula::And(fs) => {
                let ps = fs.iter().map(|g| self.ground(g, env)).collect();
                p_and(ps)
            }
            Formula::Or(fs) => {
                let ps = fs.iter().map(|g| self.ground(g, env)).collect();
                p_or(ps)
            }
            Formula::Implies(a, b) => {
                let pa = self.ground(a, env);
                let pb = self.ground(b, env);
                p_or(vec![p_not(pa), pb])
            }
            Formula::Iff(a, b) => {
                let pa = self.ground(a, env);
                let pb = self.ground(b, env);
                match (pa, pb) {
                    (P::T, q) | (q, P::T) => q,
                    (P::F, q) | (q, P::F) => p_not(q),
                    (x, y) => P::Iff(Box::new(x), Box::new(y)),
                }
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let dom: Vec<Term> = self.domains.get(&v.sort).cloned().unwrap_or_default();
                let mut inner = env.clone();
                inner.retain(|k, _| k.name != v.name);
                let mut ps = Vec::with_capacity(dom.len());
                for e in dom {
                    inner.insert(v.clone(), e);
                    ps.push(self.ground(g, &inner));
                }
                if matches!(f, Formula::Forall(..)) {
                    p_and(ps)
                } else {
                    p_or(ps)
                }
            }
            Formula::Modal { .. } => {
                let key = alpha_normal(&substitute_unchecked(f, env));
                self.modal_var(key)
            }
        }
    }

    /// Schema instances in which the modal formula `key` occurs as the
    /// premise.
    fn schema(&mut self, key: &Formula) -> Vec<P> {
        let Formula::Modal { op, body, .. } = key else {
            return Vec::new();
        };
        let me = self.modal_var(key.clone());
        let mut out = Vec::new();
        if *op == Modality::Knows {
            let b = self.ground(body, &Binding::new());
            out.push(p_or(vec![p_not(me.clone()), b]));
            let bel = self.modal_var(alpha_normal(&reframe_op(
                key,
                Some(Modality::Believes),
                body,
            )));
            out.push(p_or(vec![p_not(me.clone()), bel]));
        }
        if matches!(op, Modality::Knows | Modality::Believes) {
            match &**body {
                Formula::Implies(p, q) => {
                    let mp = self.modal_var(alpha_normal(&reframe(key, p)));
                    let mq = self.modal_var(alpha_normal(&reframe(key, q)));
                    out.push(p_or(vec![p_not(me.clone()), p_not(mp), mq]));
                }
                Formula::And(ps) => {
                    let parts: Vec<P> = ps
                        .iter()
                        .map(|p| self.modal_var(alpha_normal(&reframe(key, p))))
                        .collect();
                    out.push(P::Iff(Box::new(me.clone()), Box::new(p_and(parts))));
                }
                _ => {}
            }
        }
        out
    }
}

struct Tseitin {
    vars: u32,
    clauses: Vec<Vec<i32>>,
}

impl Tseitin {
    fn new(vars: usize) -> Tseitin {
        Tseitin {
            vars: vars as u32,
            clauses: Vec::new(),
        }
    }

    fn fresh(&mut self) -> i32 {
        self.vars += 1;
        self.vars as i32
    }

    /// Literal equivalent to `p`; variables are 1-based.
    fn lit(&mut self, p: &P) -> i32 {
        match p {
            P::T => {
                let x = self.fresh();
                self.clauses.push(vec![x]);
                x
            }
            P::F => {
                let x = self.fresh();
                self.clauses.push(vec![-x]);
                x
            }
            P::V(v) => *v as i32 + 1,
            P::Not(q) => -self.lit(q),
            P::And(ps) | P::Or(ps) => {
                let ls: Vec<i32> = ps.iter().map(|q| self.lit(q)).collect();
                let x = self.fresh();
                let sign = if matches!(p, P::And(_)) { 1 } else { -1 };
                // For And: x -> l, (all l) -> x. Or is the dual.
                let mut big = vec![sign * x];
                for l in &ls {
                    self.clauses.push(vec![-sign * x, sign * *l]);
                    big.push(-sign * *l);
                }
                self.clauses.push(big);
                x
            }
            P::Iff(a, b) => {
                let la = self.lit(a);
                let lb = self.lit(b);
                let x = self.fresh();
                self.clauses.push(vec![-x, -la, lb]);
                self.clauses.push(vec![-x, la, -lb]);
                self.clauses.push(vec![x, la, lb]);
                self.clauses.push(vec![x, -la, -lb]);
                x
            }
        }
    }
}

/// DPLL with two watched literals and chronological backtracking.
/// Returns a 0-based assignment on success.
fn solve(nvars: u32, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
    let n = nvars as usize + 1;
    let idx = |l: i32| -> usize { (l.unsigned_abs() as usize) * 2 + usize::from(l < 0) };
    let mut value: Vec<i8> = vec![0; n];
    let mut watches: Vec<Vec<usize>> = vec![Vec::new(); n * 2];
    let mut cls: Vec<Vec<i32>> = Vec::new();
    let mut units: Vec<i32> = Vec::new();
    for c in clauses {
        let mut c = c.clone();
        c.sort_unstable();
        c.dedup();
        if c.iter().any(|l| c.contains(&-l)) {
            continue;
        }
        match c.len() {
            0 => return None,
            1 => units.push(c[0]),
            _ => {
                watches[idx(c[0])].push(cls.len());
                watches[idx(c[1])].push(cls.len());
                cls.push(c);
            }
        }
    }
    let lit_val = |value: &[i8], l: i32| -> i8 {
        let v = value[l.unsigned_abs() as usize];
        if l > 0 {
            v
        } else {
            -v
        }
    };
    let mut trail: Vec<i32> = Vec::new();
    // (trail length at decision, decided literal)
    let mut decisions: Vec<(usize, i32)> = Vec::new();
    let mut head = 0usize;

    let assign = |value: &mut Vec<i8>, trail: &mut Vec<i32>, l: i32| {
        value[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
        trail.push(l);
    };

    for u in units {
        match lit_val(&value, u) {
            1 => {}
            -1 => return None,
            _ => assign(&mut value, &mut trail, u),
        }
    }

    let mut next_var = 1usize;
    loop {
        // Propagate.
        let mut conflict = false;
        while head < trail.len() {
            let falsified = -trail[head];
            head += 1;
            let wl = core::mem::take(&mut watches[idx(falsified)]);
            let mut keep = Vec::with_capacity(wl.len());
            let mut k = 0;
            while k < wl.len() {
                let ci = wl[k];
                k += 1;
                if conflict {
                    keep.push(ci);
                    continue;
                }
                let c = &mut cls[ci];
                if c[0] == falsified {
                    c.swap(0, 1);
                }
                if lit_val(&value, c[0]) == 1 {
                    keep.push(ci);
                    continue;
                }
                let mut moved = false;
                for j in 2..c.len() {
                    if lit_val(&value, c[j]) != -1 {
                        c.swap(1, j);
                        watches[idx(c[1])].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                keep.push(ci);
                match lit_val(&value, c[0]) {
                    -1 => conflict = true,
                    0 => {
                        let l = c[0];
                        assign(&mut value, &mut trail, l);
                    }
                    _ => {}
                }
            }
            watches[idx(falsified)] = keep;
            if conflict {
                break;
            }
        }
        if conflict {
            // Backtrack to the latest decision whose flip is untried.
            loop {
                let (len, lit) = decisions.pop()?;
                for l in trail.drain(len..) {
                    value[l.unsigned_abs() as usize] = 0;
                }
                head = len;
                next_var = 1;
                if lit > 0 {
                    // A negative entry marks a decision already flipped.
                    decisions.push((len, -lit));
                    assign(&mut value, &mut trail, -lit);
                    break;
                }
            }
            continue;
        }
        while next_var < n && value[next_var] != 0 {
            next_var += 1;
        }
        if next_var >= n {
            return Some(value[1..].iter().map(|&v| v > 0).collect());
        }
        decisions.push((trail.len(), next_var as i32));
        assign(&mut value, &mut trail, next_var as i32);
    }
}
