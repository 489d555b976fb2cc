//! Given-clause saturation with ordered binary resolution and factoring.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::clause::{drop_distinct, eligible, lit_greater, subsumes, Clause, Lit, Unifier};
use crate::syntax::{Name, Signature};
use crate::Clock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Clause of input formula `n`.
    Input(usize),
    Resolve(usize, usize),
    Factor(usize),
    Distinct(usize),
}

#[derive(Clone, Debug)]
pub struct Record {
    pub clause: Clause,
    pub origin: Origin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Id of the empty clause.
    Refuted(usize),
    Saturated,
    OutOfBudget,
}

pub struct Search<'a> {
    sig: &'a Signature,
    clock: &'a dyn Clock,
    deadline: u64,
    max_clauses: usize,
    trace: Option<&'a dyn Fn(&Clause) -> String>,
    sink: Option<&'a dyn Fn(&str)>,
    pub records: Vec<Record>,
    seen: BTreeSet<Clause>,
    passive: BinaryHeap<Reverse<(usize, usize)>>,
    active: Vec<usize>,
    index: BTreeMap<(Name, bool), Vec<(usize, usize)>>,
    generated: usize,
    found: Option<usize>,
}

impl<'a> Search<'a> {
    pub fn new(
        sig: &'a Signature,
        clock: &'a dyn Clock,
        deadline: u64,
        max_clauses: usize,
    ) -> Search<'a> {
        Search {
            sig,
            clock,
            deadline,
            max_clauses,
            trace: None,
            sink: None,
            records: Vec::new(),
            seen: BTreeSet::new(),
            passive: BinaryHeap::new(),
            active: Vec::new(),
            index: BTreeMap::new(),
            generated: 0,
            found: None,
        }
    }

    pub fn with_trace(
        mut self,
        render: &'a dyn Fn(&Clause) -> String,
        sink: &'a dyn Fn(&str),
    ) -> Self {
        self.trace = Some(render);
        self.sink = Some(sink);
        self
    }

    pub fn generated(&self) -> usize {
        self.generated
    }

    /// Queues a clause unless it is a tautology or a duplicate.
    pub fn add(&mut self, clause: Clause, origin: Origin) {
        if self.found.is_some() || clause.is_tautology() {
            return;
        }
        let clause = clause.normalized();
        if !self.seen.insert(clause.canonical()) {
            return;
        }
        let id = self.records.len();
        if let Some(simpler) = drop_distinct(&clause) {
            self.records.push(Record { clause, origin });
            self.add(simpler, Origin::Distinct(id));
            return;
        }
        let w = clause.weight();
        let empty = clause.is_empty();
        self.records.push(Record { clause, origin });
        if empty {
            self.found = Some(id);
        } else {
            self.passive.push(Reverse((w, id)));
        }
    }

    fn generate(&mut self, clause: Clause, origin: Origin) -> bool {
        self.generated += 1;
        self.add(clause, origin);
        self.generated <= self.max_clauses
    }

    pub fn run(&mut self) -> Outcome {
        loop {
            if let Some(id) = self.found {
                return Outcome::Refuted(id);
            }
            if self.clock.now_ms() >= self.deadline {
                return Outcome::OutOfBudget;
            }
            let Some(Reverse((_, id))) = self.passive.pop() else {
                return Outcome::Saturated;
            };
            let given = self.records[id].clause.clone();
            if self
                .active
                .iter()
                .any(|&a| subsumes(self.sig, &self.records[a].clause, &given))
            {
                continue;
            }
            if let (Some(render), Some(sink)) = (self.trace, self.sink) {
                let mut line = String::from("given ");
                line.push_str(&render(&given));
                sink(&line);
            }
            self.active.push(id);
            let el = eligible(&given);
            for &li in &el {
                let l = &given.lits[li];
                self.index
                    .entry((l.pred.clone(), l.positive))
                    .or_default()
                    .push((id, li));
            }
            for &li in &el {
                let l = &given.lits[li];
                let partners = self
                    .index
                    .get(&(l.pred.clone(), !l.positive))
                    .cloned()
                    .unwrap_or_default();
                for (pid, pli) in partners {
                    if !self.resolve(id, li, pid, pli) {
                        return Outcome::OutOfBudget;
                    }
                    if self.found.is_some() {
                        break;
                    }
                }
            }
            if given.lits.iter().all(|l| l.positive) {
                for &li in &el {
                    for lj in 0..given.lits.len() {
                        if lj != li && !self.factor(id, li, lj) {
                            return Outcome::OutOfBudget;
                        }
                    }
                }
            }
        }
    }

    fn still_maximal(lits: &[Lit], i: usize, u: &Unifier<'_>) -> bool {
        if !lits[i].positive {
            return true;
        }
        let li = lits[i].apply(u);
        !lits
            .iter()
            .enumerate()
            .any(|(j, o)| j != i && lit_greater(&o.apply(u), &li))
    }

    fn resolve(&mut self, a: usize, ai: usize, b: usize, bi: usize) -> bool {
        let ca = self.records[a].clause.clone();
        let cb = self.records[b].clause.renamed("_r");
        let mut u = Unifier::new(self.sig);
        if !u.unify_lits(&ca.lits[ai], &cb.lits[bi]) {
            return true;
        }
        if !Self::still_maximal(&ca.lits, ai, &u) || !Self::still_maximal(&cb.lits, bi, &u) {
            return true;
        }
        let mut lits: Vec<Lit> = Vec::new();
        for (i, l) in ca.lits.iter().enumerate() {
            if i != ai {
                lits.push(l.apply(&u));
            }
        }
        for (i, l) in cb.lits.iter().enumerate() {
            if i != bi {
                lits.push(l.apply(&u));
            }
        }
        // Keep the positive parent on the left for readable proofs.
        let origin = if ca.lits[ai].positive {
            Origin::Resolve(a, b)
        } else {
            Origin::Resolve(b, a)
        };
        self.generate(Clause::new(lits), origin)
    }

    fn factor(&mut self, a: usize, i: usize, j: usize) -> bool {
        let c = self.records[a].clause.clone();
        let mut u = Unifier::new(self.sig);
        if !u.unify_lits(&c.lits[i], &c.lits[j]) || !Self::still_maximal(&c.lits, i, &u) {
            return true;
        }
        let lits: Vec<Lit> = c
            .lits
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, l)| l.apply(&u))
            .collect();
        self.generate(Clause::new(lits), Origin::Factor(a))
    }
}
