use ethguard_core::event::project;
use ethguard_core::guard::{deprivation_axiom, prevents_body};
use ethguard_core::scenario::Scenario;
use ethguard_core::{parse_formula, Formula, Modality, Signature, Sort, Term, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn signature() -> Signature {
    let mut sig = Signature::new();
    sig.declare_sort("Obj", &[]).unwrap();
    for c in ["a", "b", "c"] {
        sig.declare_constant(c, "Obj").unwrap();
    }
    for c in ["alice", "bob"] {
        sig.declare_constant(c, "Agent").unwrap();
    }
    sig.declare_constant("fire", "ActionType").unwrap();
    sig.declare_constant("lit", "Fluent").unwrap();
    sig.declare_predicate("P", &[]).unwrap();
    sig.declare_predicate("R", &["Obj"]).unwrap();
    sig.declare_predicate("L", &["Obj", "Obj"]).unwrap();
    sig.declare_predicate("Q", &["Agent"]).unwrap();
    sig.declare_function("f", &["Obj"], "Obj").unwrap();
    sig.declare_function("g", &["Obj", "Agent"], "Obj").unwrap();
    sig
}

pub struct Gen {
    rng: ChaCha8Rng,
    scope: Vec<Var>,
}

impl Gen {
    fn var_of(&mut self, sort: &str) -> Option<Term> {
        // Only the innermost binder of each name is visible.
        let vs: Vec<_> = self
            .scope
            .iter()
            .enumerate()
            .filter(|(i, v)| {
                v.sort.as_str() == sort && !self.scope[i + 1..].iter().any(|w| w.name == v.name)
            })
            .map(|(_, v)| v.clone())
            .collect();
        if vs.is_empty() || self.rng.gen_bool(0.4) {
            return None;
        }
        vs.choose(&mut self.rng).cloned().map(Term::Var)
    }

    fn term(&mut self, sort: &str, depth: u32) -> Term {
        if let Some(v) = self.var_of(sort) {
            return v;
        }
        let s = Sort::new(sort);
        match sort {
            "Obj" if depth > 0 && self.rng.gen_bool(0.3) => {
                if self.rng.gen_bool(0.5) {
                    Term::app("f", vec![self.term("Obj", depth - 1)], s)
                } else {
                    let x = self.term("Obj", depth - 1);
                    let y = self.term("Agent", depth - 1);
                    Term::app("g", vec![x, y], s)
                }
            }
            "Obj" => Term::constant(["a", "b", "c"].choose(&mut self.rng).unwrap(), s),
            "Agent" => Term::constant(["alice", "bob"].choose(&mut self.rng).unwrap(), s),
            "Moment" => Term::moment(self.rng.gen_range(0..12)),
            "Event" => {
                let agent = self.term("Agent", depth);
                Term::action(agent, Term::constant("fire", Sort::new("ActionType")))
            }
            "Fluent" => Term::constant("lit", s),
            other => panic!("no generator for {other}"),
        }
    }

    fn atom(&mut self) -> Formula {
        match self.rng.gen_range(0..8) {
            0 => Formula::atom("P", vec![]),
            1 => Formula::atom("R", vec![self.term("Obj", 2)]),
            2 => Formula::atom("L", vec![self.term("Obj", 2), self.term("Obj", 2)]),
            3 => Formula::atom("Q", vec![self.term("Agent", 0)]),
            4 => Formula::Eq(self.term("Obj", 2), self.term("Obj", 2)),
            5 => Formula::holds(self.term("Fluent", 0), self.term("Moment", 0)),
            6 => Formula::happens(self.term("Event", 0), self.term("Moment", 0)),
            _ => Formula::prior(self.term("Moment", 0), self.term("Moment", 0)),
        }
    }

    pub fn formula(&mut self, depth: u32) -> Formula {
        if depth == 0 {
            return match self.rng.gen_range(0..12) {
                0 => Formula::True,
                1 => Formula::False,
                _ => self.atom(),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 => self.atom(),
            1 => Formula::not(self.formula(d)),
            2 | 3 => {
                let n = self.rng.gen_range(2..4);
                let fs = (0..n).map(|_| self.formula(d)).collect();
                if self.rng.gen_bool(0.5) {
                    Formula::And(fs)
                } else {
                    Formula::Or(fs)
                }
            }
            4 => Formula::implies(self.formula(d), self.formula(d)),
            5 => Formula::iff(self.formula(d), self.formula(d)),
            6 | 7 => {
                let sort = *["Obj", "Agent", "Moment"].choose(&mut self.rng).unwrap();
                // A small name pool so that shadowed binders occur.
                let v = Var::new(
                    ["x", "y", "z"].choose(&mut self.rng).unwrap(),
                    Sort::new(sort),
                );
                self.scope.push(v.clone());
                let body = self.formula(d);
                self.scope.pop();
                if self.rng.gen_bool(0.5) {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            _ => {
                let op = *Modality::ALL.choose(&mut self.rng).unwrap();
                let agent = self.term("Agent", 0);
                let moment = self.term("Moment", 0);
                Formula::modal(op, agent, moment, self.formula(d))
            }
        }
    }
}

/// `Err` with the printed text when parsing it back does not give `f`.
pub fn round_trip(f: &Formula, sig: &Signature) -> Result<(), String> {
    let text = f.to_string();
    match parse_formula(&text, sig) {
        Ok(back) if &back == f && back.to_string() == text => Ok(()),
        Ok(back) => Err(format!("{text} came back as {back}")),
        Err(e) => Err(format!("{text}: {e}")),
    }
}

impl Gen {
    pub fn seeded(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            scope: Vec::new(),
        }
    }
}

/// Every formula in a bundled scenario: facts, the deprivation axiom, the
/// trace atoms and the prevention formula for the request.
pub fn scenario_formulas(s: &Scenario) -> Vec<Formula> {
    let mut all = s.facts.clone();
    all.push(deprivation_axiom(s).unwrap());
    all.extend(project(&s.theory).unwrap().atoms());
    let req = s.request.as_ref().unwrap();
    let goal_var = Term::var("g", Sort::new("Goal"));
    let victim = Term::var("y", Sort::new("Agent"));
    all.push(Formula::exists(
        Var::new("y", Sort::new("Agent")),
        Formula::exists(
            Var::new("g", Sort::new("Goal")),
            prevents_body(
                &req.agent,
                &victim,
                &goal_var,
                &req.atype,
                &Term::moment(req.moment),
            ),
        ),
    ));
    all
}
