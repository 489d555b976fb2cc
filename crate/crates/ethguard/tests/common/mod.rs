#![allow(dead_code)]

pub mod corrupt;
pub mod dde;
pub mod formulas;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ethguard::scenario_file::{declare, DECLARATIONS};
use ethguard::{load_scenario, LoadError};
use ethguard_core::model::ModelBounds;
use ethguard_core::parse::Reader;
use ethguard_core::scenario::Scenario;
use ethguard_core::sexpr::read_all;
use ethguard_core::{Formula, Signature, Sort, Term};

pub struct Problem {
    pub name: String,
    pub expect_proved: bool,
    pub sig: Signature,
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
}

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn scenario_path(name: &str) -> PathBuf {
    root().join("scenarios").join(format!("{name}.scn"))
}

pub fn load_sim(name: &str) -> Scenario {
    load_scenario(&scenario_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn corpus() -> Vec<Problem> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus.txt");
    let src = std::fs::read_to_string(path).unwrap();
    let mut out = Vec::new();
    for e in read_all(&src).unwrap() {
        let items = e.as_list().unwrap();
        assert_eq!(items[0].as_ident(), Some("problem"));
        let name = items[1].as_ident().unwrap().to_string();
        let mut expect = None;
        let mut sig = Signature::new();
        for kind in DECLARATIONS {
            for it in &items[2..] {
                if it.head() == Some(kind) {
                    declare(kind, &it.as_list().unwrap()[1..], &mut sig)
                        .unwrap_or_else(|err: LoadError| panic!("{name}: {err}"));
                }
            }
        }
        let reader = Reader::new(&sig);
        let mut assumptions = Vec::new();
        let mut goal = None;
        for it in &items[2..] {
            let l = it.as_list().unwrap();
            match it.head() {
                Some("expect") => {
                    expect = Some(match l[1].as_ident().unwrap() {
                        "proved" => true,
                        "unprovable" => false,
                        other => panic!("{name}: bad expectation {other}"),
                    })
                }
                Some("assume") => {
                    for f in &l[1..] {
                        assumptions.push(
                            reader
                                .formula(f)
                                .unwrap_or_else(|err| panic!("{name}: {err}")),
                        );
                    }
                }
                Some("goal") => {
                    goal = Some(
                        reader
                            .formula(&l[1])
                            .unwrap_or_else(|err| panic!("{name}: {err}")),
                    )
                }
                _ => {}
            }
        }
        for f in assumptions.iter().chain(goal.iter()) {
            sig.check_closed(f)
                .unwrap_or_else(|err| panic!("{name}: {err}"));
        }
        out.push(Problem {
            name,
            expect_proved: expect.expect("expectation"),
            sig,
            assumptions,
            goal: goal.expect("goal"),
        });
    }
    out
}

fn term_consts(t: &Term, out: &mut BTreeSet<Term>) {
    match t {
        Term::Var(_) => {}
        Term::Const { .. } => {
            out.insert(t.clone());
        }
        Term::App { args, .. } => args.iter().for_each(|a| term_consts(a, out)),
    }
}

pub fn constants(f: &Formula, out: &mut BTreeSet<Term>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom { args, .. } => args.iter().for_each(|a| term_consts(a, out)),
        Formula::Eq(a, b) => {
            term_consts(a, out);
            term_consts(b, out);
        }
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => constants(g, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| constants(g, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            constants(a, out);
            constants(b, out);
        }
        Formula::Modal {
            agent,
            moment,
            situation,
            body,
            ..
        } => {
            term_consts(agent, out);
            term_consts(moment, out);
            if let Some(s) = situation {
                term_consts(s, out);
            }
            constants(body, out);
        }
    }
}

/// At most three constants of each sort and at most four moments.
pub fn within_oracle_bounds(p: &Problem) -> bool {
    let mut cs = BTreeSet::new();
    for f in p.assumptions.iter().chain([&p.goal]) {
        constants(f, &mut cs);
    }
    let mut per_sort: BTreeMap<Sort, usize> = BTreeMap::new();
    for c in &cs {
        *per_sort.entry(c.sort().clone()).or_default() += 1;
    }
    per_sort
        .iter()
        .all(|(s, n)| *n <= if s.as_str() == "Moment" { 4 } else { 3 })
}

pub fn oracle_bounds() -> ModelBounds {
    ModelBounds {
        max_extra: 2,
        ..ModelBounds::default()
    }
}
