use std::collections::BTreeSet;

use ethguard_core::ethics::{check_c2, Status};
use ethguard_core::event::{
    causal_chain, effects_of, project, EcTheory, Effect, EffectAxiom, GuardLiteral, Occurrence,
    Polarity, Utilities,
};
use ethguard_core::model::{countermodel, ModelBounds, ModelSearch};
use ethguard_core::prover::expand_modal;
use ethguard_core::subst::{alpha_normal, substitute, Binding};
use ethguard_core::syntax::{AGENT, EVENT, FLUENT};
use ethguard_core::{parse_formula, prove, Budget, Formula, Modality, Signature, Sort, Term, Var};
use proptest::prelude::*;

fn sig() -> Signature {
    let mut s = Signature::new();
    s.declare_sort("Obj", &[]).unwrap();
    for c in ["a", "b"] {
        s.declare_constant(c, "Obj").unwrap();
    }
    for c in ["alice", "bob"] {
        s.declare_constant(c, AGENT).unwrap();
    }
    for p in ["P", "Q", "R"] {
        s.declare_predicate(p, &[]).unwrap();
    }
    s.declare_predicate("T", &["Obj"]).unwrap();
    s.declare_function("f", &["Obj"], "Obj").unwrap();
    s
}

fn obj() -> Sort {
    Sort::new("Obj")
}

fn obj_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::constant("a", obj())),
        Just(Term::constant("b", obj())),
        Just(Term::var("x", obj())),
    ];
    leaf.prop_recursive(2, 4, 1, |t| t.prop_map(|t| Term::app("f", vec![t], obj())))
}

/// Formulas over `sig()`; `x` may occur free.
fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("P", vec![])),
        Just(Formula::atom("Q", vec![])),
        Just(Formula::atom("R", vec![])),
        obj_term().prop_map(|t| Formula::atom("T", vec![t])),
        (obj_term(), obj_term()).prop_map(|(a, b)| Formula::Eq(a, b)),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let agent = prop_oneof![Just("alice"), Just("bob")];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            inner
                .clone()
                .prop_map(|g| Formula::forall(Var::new("x", obj()), g)),
            inner
                .clone()
                .prop_map(|g| Formula::exists(Var::new("x", obj()), g)),
            (agent, 0u32..3, inner.clone()).prop_map(|(a, t, g)| {
                Formula::knows(Term::constant(a, Sort::new(AGENT)), Term::moment(t), g)
            }),
            (inner, 0u32..3).prop_map(|(g, t)| {
                Formula::intends(
                    Term::constant("alice", Sort::new(AGENT)),
                    Term::moment(t),
                    g,
                )
            }),
        ]
    })
}

fn closed(f: Formula) -> Formula {
    if f.is_closed() {
        f
    } else {
        Formula::forall(Var::new("x", obj()), f)
    }
}

/// Propositional modal formulas: the fragment the prover decides quickly.
fn modal_prop() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("P", vec![])),
        Just(Formula::atom("Q", vec![])),
        Just(Formula::atom("R", vec![])),
    ];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (
                prop_oneof![Just(Modality::Knows), Just(Modality::Believes)],
                inner
            )
                .prop_map(|(op, g)| {
                    Formula::modal(
                        op,
                        Term::constant("alice", Sort::new(AGENT)),
                        Term::moment(1),
                        g,
                    )
                }),
        ]
    })
}

fn small_budget() -> Budget {
    Budget::new(10_000, 4, 20_000).unwrap()
}

fn normal_set(fs: &[Formula]) -> BTreeSet<Formula> {
    fs.iter().map(alpha_normal).collect()
}

fn term_sorts(f: &Formula, out: &mut Vec<Sort>) {
    fn term(t: &Term, out: &mut Vec<Sort>) {
        out.push(t.sort().clone());
        if let Term::App { args, .. } = t {
            args.iter().for_each(|a| term(a, out));
        }
    }
    match f {
        Formula::True | Formula::False => {}
        Formula::Atom { args, .. } => args.iter().for_each(|a| term(a, out)),
        Formula::Eq(a, b) => {
            term(a, out);
            term(b, out);
        }
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => term_sorts(g, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| term_sorts(g, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            term_sorts(a, out);
            term_sorts(b, out);
        }
        Formula::Modal {
            agent,
            moment,
            body,
            ..
        } => {
            term(agent, out);
            term(moment, out);
            term_sorts(body, out);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_then_parsing_is_the_identity(f in formula()) {
        let s = sig();
        let f = closed(f);
        s.check_closed(&f).unwrap();
        let back = parse_formula(&f.to_string(), &s).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn substitution_keeps_sorts_at_every_position(f in formula(), t in obj_term()) {
        let s = sig();
        let t = if t.is_ground() { t } else { Term::constant("b", obj()) };
        let mut b = Binding::new();
        b.insert(Var::new("x", obj()), t);
        let g = substitute(&f, &b, &s).unwrap();
        s.check_formula(&g).unwrap();
        // Only Obj positions can have changed.
        let (mut before, mut after) = (Vec::new(), Vec::new());
        term_sorts(&f, &mut before);
        term_sorts(&g, &mut after);
        let strip = |v: Vec<Sort>| v.into_iter().filter(|x| *x != obj()).collect::<Vec<_>>();
        prop_assert_eq!(strip(before), strip(after));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn proofs_survive_extra_assumptions(
        a in prop::collection::vec(modal_prop(), 1..4),
        extra in prop::collection::vec(modal_prop(), 1..3),
        g in modal_prop(),
    ) {
        let s = sig();
        if let Some(p) = prove(&a, &g, &s, small_budget()).proof() {
            prop_assert!(!p.is_empty());
            let mut more = a.clone();
            more.extend(extra);
            let bigger = Budget::new(10_000, 4, 200_000).unwrap();
            prop_assert!(prove(&more, &g, &s, bigger).is_proved());
        }
    }

    #[test]
    fn proving_is_deterministic(a in prop::collection::vec(modal_prop(), 1..4), g in modal_prop()) {
        let s = sig();
        prop_assert_eq!(prove(&a, &g, &s, small_budget()), prove(&a, &g, &s, small_budget()));
    }

    #[test]
    fn proved_goals_have_no_small_countermodel(a in prop::collection::vec(modal_prop(), 1..4), g in modal_prop()) {
        let s = sig();
        if prove(&a, &g, &s, small_budget()).is_proved() {
            prop_assert!(matches!(countermodel(&a, &g, &s, &ModelBounds::default()), ModelSearch::NotFound));
        }
    }

    #[test]
    fn modal_expansion_is_a_closure(
        a in prop::collection::vec(modal_prop(), 1..4),
        extra in prop::collection::vec(modal_prop(), 0..2),
    ) {
        let once = expand_modal(&a, 4);
        let set = normal_set(&once);
        prop_assert!(normal_set(&a).is_subset(&set));
        prop_assert_eq!(normal_set(&expand_modal(&once, 4)), set.clone());
        let mut more = a.clone();
        more.extend(extra);
        prop_assert!(set.is_subset(&normal_set(&expand_modal(&more, 4))));
    }
}

const FLUENTS: usize = 4;

fn fluent(i: usize) -> Term {
    Term::constant(&format!("f{i}"), Sort::new(FLUENT))
}

fn event(i: usize) -> Term {
    Term::constant(&format!("e{i}"), Sort::new(EVENT))
}

fn axiom() -> impl Strategy<Value = EffectAxiom> {
    (
        0..3usize,
        any::<bool>(),
        0..FLUENTS,
        prop::collection::vec((any::<bool>(), 0..FLUENTS), 0..2),
    )
        .prop_map(|(e, init, f, guard)| EffectAxiom {
            event: event(e),
            polarity: if init {
                Polarity::Initiates
            } else {
                Polarity::Terminates
            },
            fluent: fluent(f),
            guard: guard
                .into_iter()
                .map(|(positive, g)| GuardLiteral {
                    positive,
                    fluent: fluent(g),
                })
                .collect(),
        })
}

fn theory() -> impl Strategy<Value = EcTheory> {
    (
        prop::collection::btree_set(0..FLUENTS, 0..FLUENTS),
        prop::collection::vec(axiom(), 0..5),
        prop::collection::vec((0..3usize, 0u32..4), 0..4),
        2u32..5,
    )
        .prop_map(|(initial, axioms, occ, horizon)| EcTheory {
            initial: initial.into_iter().map(fluent).collect(),
            axioms,
            occurrences: occ
                .into_iter()
                .filter(|(_, m)| *m <= horizon)
                .map(|(e, moment)| Occurrence {
                    event: event(e),
                    moment,
                })
                .collect(),
            horizon,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn projection_is_deterministic(th in theory()) {
        prop_assert_eq!(project(&th), project(&th));
    }

    #[test]
    fn without_occurrences_nothing_changes(th in theory()) {
        let mut quiet = th.clone();
        quiet.occurrences.clear();
        let trace = project(&quiet).unwrap();
        let initial: BTreeSet<Term> = th.initial.iter().cloned().collect();
        prop_assert!(trace.changes.is_empty());
        for state in &trace.states {
            prop_assert_eq!(state, &initial);
        }
    }

    #[test]
    fn causal_chains_never_look_forward(th in theory()) {
        if let Ok(trace) = project(&th) {
            for c in &trace.changes {
                let chain = causal_chain(&th, &trace, c).unwrap();
                let mut seen = BTreeSet::new();
                for link in &chain {
                    prop_assert!(link.at < c.moment);
                    prop_assert!(link.change.moment <= c.moment);
                    prop_assert!(seen.insert((link.occurrence, link.change.clone())), "link repeated");
                }
            }
        }
    }

    #[test]
    fn every_change_has_a_cause_among_the_occurrences(th in theory()) {
        if let Ok(trace) = project(&th) {
            let mut covered = BTreeSet::new();
            for act in 0..th.occurrences.len() {
                for e in effects_of(&th, act, &Utilities::default()).unwrap() {
                    prop_assert!(trace.changes.iter().any(|c| c.fluent == e.change.fluent
                        && c.polarity == e.change.polarity
                        && c.moment == e.change.moment));
                    covered.insert((e.change.fluent, e.change.polarity, e.change.moment));
                }
            }
            for c in &trace.changes {
                prop_assert!(!c.causes.is_empty());
            }
            prop_assert!(covered.len() <= trace.changes.len());
        }
    }
}

fn effects(us: &[i64]) -> Vec<Effect> {
    let th = EcTheory {
        initial: Vec::new(),
        axioms: (0..us.len())
            .map(|i| EffectAxiom {
                event: event(0),
                polarity: Polarity::Initiates,
                fluent: Term::constant(&format!("g{i}"), Sort::new(FLUENT)),
                guard: Vec::new(),
            })
            .collect(),
        occurrences: vec![Occurrence {
            event: event(0),
            moment: 0,
        }],
        horizon: 1,
    };
    let mut u = Utilities::default();
    for (i, v) in us.iter().enumerate() {
        u.values.insert(
            (
                Term::constant(&format!("g{i}"), Sort::new(FLUENT)),
                Polarity::Initiates,
            ),
            *v,
        );
    }
    effects_of(&th, 0, &u).unwrap()
}

proptest! {
    #[test]
    fn second_clause_is_monotone_in_gamma(us in prop::collection::vec(-3i64..4, 0..5), gamma in 0i64..6) {
        let es = effects(&us);
        let (at, _) = check_c2(&es, gamma);
        for lower in 0..gamma {
            let (r, _) = check_c2(&es, lower);
            prop_assert!(at.status != Status::Pass || r.status == at.status);
        }
    }

    #[test]
    fn second_clause_is_scale_free(us in prop::collection::vec(-3i64..4, 0..5), gamma in 0i64..4, k in 1i64..6) {
        let (r, net) = check_c2(&effects(&us), gamma);
        let scaled: Vec<i64> = us.iter().map(|u| u * k).collect();
        let (s, snet) = check_c2(&effects(&scaled), gamma * k);
        prop_assert_eq!(r.status, s.status);
        prop_assert_eq!(net * k, snet);
    }
}
