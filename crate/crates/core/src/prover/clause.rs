//! First-order clauses over shadowed atoms: sorted unification, matching,
//! subsumption and the Knuth-Bendix order used to restrict resolution.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::subst::Binding;
use crate::syntax::{name, Formula, Name, Signature, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub positive: bool,
    pub pred: Name,
    pub args: Vec<Term>,
}

impl Lit {
    pub fn weight(&self) -> usize {
        1 + self.args.iter().map(Term::weight).sum::<usize>()
    }

    pub fn negated(&self) -> Lit {
        Lit {
            positive: !self.positive,
            ..self.clone()
        }
    }

    pub fn apply(&self, u: &Unifier<'_>) -> Lit {
        Lit {
            positive: self.positive,
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| u.resolve(a)).collect(),
        }
    }

    fn as_term(&self) -> Term {
        Term::App {
            func: self.pred.clone(),
            args: self.args.clone(),
            sort: crate::syntax::Sort::new(crate::syntax::BOOLEAN),
        }
    }

    /// Back to a (shadowed) formula literal.
    pub fn to_formula(&self) -> Formula {
        let atom = if &*self.pred == "=" && self.args.len() == 2 {
            Formula::Eq(self.args[0].clone(), self.args[1].clone())
        } else {
            Formula::Atom {
                pred: self.pred.clone(),
                args: self.args.clone(),
            }
        };
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause {
    pub lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Clause {
        let mut c = Clause { lits };
        c.dedup();
        c
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.lits.iter().map(Lit::weight).sum()
    }

    pub fn dedup(&mut self) {
        let mut out: Vec<Lit> = Vec::with_capacity(self.lits.len());
        for l in self.lits.drain(..) {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        self.lits = out;
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().enumerate().any(|(i, a)| {
            self.lits[i + 1..]
                .iter()
                .any(|b| a.positive != b.positive && a.pred == b.pred && a.args == b.args)
        })
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for l in &self.lits {
            for a in &l.args {
                a.collect_vars(&mut out);
            }
        }
        out
    }

    /// Renames variables to `<prefix><n>` in order of first occurrence.
    pub fn renamed(&self, prefix: &str) -> Clause {
        let mut b = Binding::new();
        for (i, v) in self.vars().into_iter().enumerate() {
            let to = Var {
                name: name(&format!("{prefix}{i}")),
                sort: v.sort.clone(),
            };
            b.insert(v, Term::Var(to));
        }
        Clause {
            lits: self
                .lits
                .iter()
                .map(|l| Lit {
                    positive: l.positive,
                    pred: l.pred.clone(),
                    args: l
                        .args
                        .iter()
                        .map(|a| crate::subst::subst_term(a, &b))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Stable representative for duplicate detection.
    pub fn canonical(&self) -> Clause {
        let mut c = self.renamed("_c");
        c.lits.sort();
        let mut c = c.renamed("_v");
        c.lits.sort();
        c
    }

    pub fn normalized(&self) -> Clause {
        self.renamed("_v")
    }

    /// Back to a (shadowed) universally closed formula.
    pub fn to_formula(&self) -> Formula {
        if self.lits.is_empty() {
            return Formula::False;
        }
        let mut f = Formula::or(self.lits.iter().map(Lit::to_formula).collect());
        for v in self.vars().into_iter().rev() {
            f = Formula::forall(v, f);
        }
        f
    }
}

/// Triangular substitution built by sorted unification.
pub struct Unifier<'a> {
    sig: &'a Signature,
    pub binding: Binding,
    fresh: u32,
}

impl<'a> Unifier<'a> {
    pub fn new(sig: &'a Signature) -> Unifier<'a> {
        Unifier {
            sig,
            binding: Binding::new(),
            fresh: 0,
        }
    }

    pub fn resolve(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.binding.get(v) {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            Term::Const { .. } => t.clone(),
            Term::App { func, args, sort } => Term::App {
                func: func.clone(),
                args: args.iter().map(|a| self.resolve(a)).collect(),
                sort: sort.clone(),
            },
        }
    }

    fn walk(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        while let Term::Var(v) = &cur {
            match self.binding.get(v) {
                Some(b) => cur = b.clone(),
                None => break,
            }
        }
        cur
    }

    fn occurs(&self, v: &Var, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => &w == v,
            Term::Const { .. } => false,
            Term::App { args, .. } => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    pub fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a);
        let b = self.walk(b);
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), Term::Var(y)) => {
                if self.sig.is_subsort(&x.sort, &y.sort) {
                    self.binding.insert(y.clone(), a.clone());
                    true
                } else if self.sig.is_subsort(&y.sort, &x.sort) {
                    self.binding.insert(x.clone(), b.clone());
                    true
                } else if let Some(g) = self.sig.glb(&x.sort, &y.sort) {
                    let z = Term::Var(Var {
                        name: name(&format!("_u{}", self.fresh)),
                        sort: g,
                    });
                    self.fresh += 1;
                    self.binding.insert(x.clone(), z.clone());
                    self.binding.insert(y.clone(), z);
                    true
                } else {
                    false
                }
            }
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(x, t) || !self.sig.is_subsort(t.sort(), &x.sort) {
                    return false;
                }
                self.binding.insert(x.clone(), t.clone());
                true
            }
            (Term::Const { name: m, .. }, Term::Const { name: n, .. }) => m == n,
            (
                Term::App {
                    func: f, args: fa, ..
                },
                Term::App {
                    func: g, args: ga, ..
                },
            ) => f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(x, y)| self.unify(x, y)),
            _ => false,
        }
    }

    pub fn unify_lits(&mut self, a: &Lit, b: &Lit) -> bool {
        a.pred == b.pred
            && a.args.len() == b.args.len()
            && a.args.iter().zip(&b.args).all(|(x, y)| self.unify(x, y))
    }
}

/// One-way matching: binds variables of `pattern` only.
pub fn match_term(sig: &Signature, pattern: &Term, target: &Term, b: &mut Binding) -> bool {
    match (pattern, target) {
        (Term::Var(v), t) => match b.get(v) {
            Some(bound) => bound == t,
            None => {
                if sig.is_subsort(t.sort(), &v.sort) {
                    b.insert(v.clone(), t.clone());
                    true
                } else {
                    false
                }
            }
        },
        (Term::Const { name: m, .. }, Term::Const { name: n, .. }) => m == n,
        (
            Term::App {
                func: f, args: fa, ..
            },
            Term::App {
                func: g, args: ga, ..
            },
        ) => {
            f == g
                && fa.len() == ga.len()
                && fa.iter().zip(ga).all(|(x, y)| match_term(sig, x, y, b))
        }
        _ => false,
    }
}

fn match_lit(sig: &Signature, p: &Lit, t: &Lit, b: &mut Binding) -> bool {
    p.positive == t.positive
        && p.pred == t.pred
        && p.args.len() == t.args.len()
        && p.args
            .iter()
            .zip(&t.args)
            .all(|(x, y)| match_term(sig, x, y, b))
}

/// `c` subsumes `d` when some instance of `c` is a sub-multiset of `d`.
pub fn subsumes(sig: &Signature, c: &Clause, d: &Clause) -> bool {
    if c.lits.len() > d.lits.len() {
        return false;
    }
    let c = c.renamed("_s");
    let mut used = alloc::vec![false; d.lits.len()];
    subsume_rec(sig, &c.lits, d, &mut used, &Binding::new())
}

fn subsume_rec(sig: &Signature, rest: &[Lit], d: &Clause, used: &mut [bool], b: &Binding) -> bool {
    let Some((first, tail)) = rest.split_first() else {
        return true;
    };
    for (i, l) in d.lits.iter().enumerate() {
        if used[i] {
            continue;
        }
        let mut b2 = b.clone();
        if match_lit(sig, first, l, &mut b2) {
            used[i] = true;
            if subsume_rec(sig, tail, d, used, &b2) {
                return true;
            }
            used[i] = false;
        }
    }
    false
}

/// Equal up to a renaming of variables.
pub fn is_variant(sig: &Signature, a: &Clause, b: &Clause) -> bool {
    a.lits.len() == b.lits.len() && subsumes(sig, a, b) && subsumes(sig, b, a)
}

fn var_counts(t: &Term, out: &mut BTreeMap<Var, i64>, delta: i64) {
    match t {
        Term::Var(v) => *out.entry(v.clone()).or_insert(0) += delta,
        Term::Const { .. } => {}
        Term::App { args, .. } => args.iter().for_each(|a| var_counts(a, out, delta)),
    }
}

fn head(t: &Term) -> Option<(usize, &str)> {
    match t {
        Term::Var(_) => None,
        Term::Const { name, .. } => Some((0, name)),
        Term::App { func, args, .. } => Some((args.len(), func)),
    }
}

fn contains(s: &Term, t: &Term) -> bool {
    s == t
        || match s {
            Term::App { args, .. } => args.iter().any(|a| contains(a, t)),
            _ => false,
        }
}

/// Knuth-Bendix order with unit weights and precedence by (arity, name).
pub fn kbo_greater(s: &Term, t: &Term) -> bool {
    if s == t {
        return false;
    }
    let mut counts = BTreeMap::new();
    var_counts(s, &mut counts, 1);
    var_counts(t, &mut counts, -1);
    if counts.values().any(|&c| c < 0) {
        return false;
    }
    let (ws, wt) = (s.weight(), t.weight());
    if ws != wt {
        return ws > wt;
    }
    match (head(s), head(t)) {
        (_, None) => contains(s, t),
        (None, _) => false,
        (Some(hs), Some(ht)) => match hs.cmp(&ht) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let (Term::App { args: sa, .. }, Term::App { args: ta, .. }) = (s, t) else {
                    return false;
                };
                for (x, y) in sa.iter().zip(ta) {
                    if x != y {
                        return kbo_greater(x, y);
                    }
                }
                false
            }
        },
    }
}

/// Literal order: equalities below every other atom, then KBO on atoms.
pub fn lit_greater(a: &Lit, b: &Lit) -> bool {
    let (ea, eb) = (&*a.pred == "=", &*b.pred == "=");
    if ea != eb {
        return eb;
    }
    let (sa, sb) = (a.as_term(), b.as_term());
    if sa == sb {
        // Same atom: the negative literal is the larger one.
        return !a.positive && b.positive;
    }
    kbo_greater(&sa, &sb)
}

/// Literal indices that may take part in inferences: the selected negative
/// literal if there is one, otherwise the maximal positive literals.
pub fn eligible(c: &Clause) -> Vec<usize> {
    let mut selected: Option<usize> = None;
    for (i, l) in c.lits.iter().enumerate() {
        if !l.positive && selected.is_none_or(|s| l.weight() > c.lits[s].weight()) {
            selected = Some(i);
        }
    }
    if let Some(s) = selected {
        return alloc::vec![s];
    }
    (0..c.lits.len())
        .filter(|&i| {
            !c.lits
                .iter()
                .enumerate()
                .any(|(j, o)| j != i && lit_greater(o, &c.lits[i]))
        })
        .collect()
}

/// Skolem symbols are `sk`, eight hex digits, `_` and an index.
pub fn is_skolem(name: &str) -> bool {
    let Some(rest) = name.strip_prefix("sk") else {
        return false;
    };
    let (tag, n) = rest.split_at(rest.len().min(8));
    tag.len() == 8
        && tag.bytes().all(|b| b.is_ascii_hexdigit())
        && n.strip_prefix('_')
            .is_some_and(|i| !i.is_empty() && i.bytes().all(|b| b.is_ascii_digit()))
}

/// Whether `s` and `t` can denote the same element. Distinct constants and
/// distinct function heads are different elements; variables and Skolem
/// terms may be anything.
pub fn may_equal(s: &Term, t: &Term) -> bool {
    match (s, t) {
        (Term::Var(_), _) | (_, Term::Var(_)) => true,
        (Term::Const { name, .. }, _) | (_, Term::Const { name, .. }) if is_skolem(name) => true,
        (Term::App { func, .. }, _) | (_, Term::App { func, .. }) if is_skolem(func) => true,
        (Term::Const { name: a, .. }, Term::Const { name: b, .. }) => a == b,
        (
            Term::App {
                func: f, args: xs, ..
            },
            Term::App {
                func: g, args: ys, ..
            },
        ) => f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| may_equal(x, y)),
        _ => false,
    }
}

/// `c` without its positive equalities between terms that cannot be
/// equal, or `None` if there are none.
pub fn drop_distinct(c: &Clause) -> Option<Clause> {
    let keep: Vec<Lit> = c
        .lits
        .iter()
        .filter(|l| {
            !(l.positive
                && &*l.pred == "="
                && l.args.len() == 2
                && !may_equal(&l.args[0], &l.args[1]))
        })
        .cloned()
        .collect();
    (keep.len() < c.lits.len()).then(|| Clause::new(keep))
}
