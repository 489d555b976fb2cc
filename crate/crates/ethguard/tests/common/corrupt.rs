use ethguard::parse_formula_files;
use ethguard_core::prover::{Rule, Step, VerifyError};
use ethguard_core::{
    parse_formula, prove, verify_proof, Budget, Formula, Proof, ProveOutcome, Signature,
};

const DECLS: &str = "(sorts Obj)
(constants (a Obj) (b Obj) (alice Agent) (bob Agent))
(predicates (P) (Q) (R Agent) (S Obj))";

pub struct Case {
    pub sig: Signature,
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
    pub proof: Proof,
}

impl Case {
    pub fn new(assumptions: &str, goal: &str) -> Case {
        let files = [
            ("decls".to_string(), DECLS.to_string()),
            ("assume".to_string(), assumptions.to_string()),
            ("goal".to_string(), goal.to_string()),
        ];
        let (sig, mut parsed) = parse_formula_files(&files).unwrap();
        let goal = parsed.pop().unwrap().pop().unwrap();
        let assumptions = parsed.pop().unwrap();
        let ProveOutcome::Proved(proof) = prove(&assumptions, &goal, &sig, Budget::default())
        else {
            panic!("no proof of {goal}");
        };
        verify_proof(&proof, &assumptions, &goal, &sig).unwrap();
        Case {
            sig,
            assumptions,
            goal,
            proof,
        }
    }

    pub fn f(&self, text: &str) -> Formula {
        parse_formula(text, &self.sig).unwrap()
    }

    pub fn idx(&self, rule: Rule) -> usize {
        self.proof
            .steps
            .iter()
            .position(|s| s.rule == rule)
            .unwrap_or_else(|| panic!("no {rule} step in\n{}", self.proof))
    }

    pub fn mutate(&self, edit: impl FnOnce(&mut Vec<Step>)) -> Proof {
        let mut p = self.proof.clone();
        edit(&mut p.steps);
        assert_ne!(p, self.proof, "mutation changed nothing");
        p
    }

    pub fn check(&self, proof: &Proof) -> Result<(), VerifyError> {
        verify_proof(proof, &self.assumptions, &self.goal, &self.sig)
    }
}

/// Deliberately broken variants of genuine proofs, each with the verifier's
/// answer.
pub fn corruptions() -> Vec<(&'static str, Result<(), VerifyError>)> {
    let mp = Case::new("(P) (implies (P) (Q))", "(Q)");
    let closure = Case::new(
        "(knows alice 1 (implies (P) (Q))) (knows alice 1 (P))",
        "(knows alice 1 (Q))",
    );
    let conjunct = Case::new("(knows alice 1 (and (P) (Q)))", "(knows alice 1 (Q))");
    let belief = Case::new("(knows alice 1 (P))", "(believes alice 1 (P))");
    let veridical = Case::new("(knows alice 1 (P)) (believes alice 1 (Q))", "(P)");
    let everyone = Case::new(
        "(forall x:Agent (knows x 1 (R x)))",
        "(believes bob 1 (R bob))",
    );
    let witness = Case::new(
        "(exists x:Obj (S x)) (forall y:Obj (implies (S y) (Q)))",
        "(Q)",
    );
    let refl = Case::new("", "(= a a)");
    let names = Case::new("(forall x:Obj (or (= x a) (S x)))", "(S b)");

    let mut out = Vec::new();
    let mut push = |label, r| out.push((label, r));

    let r = mp.idx(Rule::Resolve);
    push(
        "premise refers forward",
        mp.check(&mp.mutate(|s| s[r].premises[0] = r + 1)),
    );
    push(
        "premise refers to itself",
        mp.check(&mp.mutate(|s| s[r].premises[0] = r)),
    );
    push(
        "resolution with one premise",
        mp.check(&mp.mutate(|s| s[r].premises.truncate(1))),
    );
    push(
        "resolution relabelled as factoring",
        mp.check(&mp.mutate(|s| s[r].rule = Rule::Factor)),
    );
    push(
        "resolvent replaced",
        mp.check(&mp.mutate(|s| s[r].formula = mp.f("(implies (Q) (P))"))),
    );
    let a = mp.idx(Rule::Assume);
    push(
        "assumption that was never made",
        mp.check(&mp.mutate(|s| s[a].formula = mp.f("(Q)"))),
    );
    let c = mp.idx(Rule::Cnf);
    push(
        "clausification relabelled as S1",
        mp.check(&mp.mutate(|s| s[c].rule = Rule::S1)),
    );
    let wide = mp
        .proof
        .steps
        .iter()
        .position(|s| s.rule == Rule::Cnf && matches!(s.formula, Formula::Or(_)))
        .expect("a two-literal clause");
    push(
        "literal dropped from a clause",
        mp.check(&mp.mutate(|s| {
            let Formula::Or(ls) = &s[wide].formula else {
                unreachable!()
            };
            s[wide].formula = ls[0].clone();
        })),
    );
    let last = mp.proof.len() - 1;
    push(
        "last step concludes something else",
        mp.check(&mp.mutate(|s| s[last].formula = mp.f("(P)"))),
    );
    push(
        "final step removed",
        mp.check(&mp.mutate(|s| {
            s.pop();
        })),
    );
    push("empty proof", mp.check(&Proof::default()));
    let n = mp.idx(Rule::NegateGoal);
    push(
        "negated goal altered",
        mp.check(&mp.mutate(|s| s[n].formula = mp.f("(not (P))"))),
    );
    push(
        "contradiction without the negated goal",
        mp.check(&mp.mutate(|s| s[last].premises[0] = a)),
    );
    push(
        "an assumption removed from the problem",
        verify_proof(&mp.proof, &mp.assumptions[1..], &mp.goal, &mp.sig),
    );
    push(
        "checked against another goal",
        verify_proof(&mp.proof, &mp.assumptions, &mp.f("(P)"), &mp.sig),
    );

    let s3 = closure.idx(Rule::S3);
    push(
        "S3 conclusion that does not follow",
        closure.check(&closure.mutate(|s| s[s3].formula = closure.f("(knows alice 1 (P))"))),
    );
    push(
        "S3 across different agents",
        closure.check(&closure.mutate(|s| s[s3].formula = closure.f("(knows bob 1 (Q))"))),
    );
    let s4 = conjunct.idx(Rule::S4);
    push(
        "S4 on something that is not a conjunct",
        conjunct
            .check(&conjunct.mutate(|s| s[s4].formula = conjunct.f("(knows alice 1 (not (P)))"))),
    );
    let s2 = belief.idx(Rule::S2);
    push(
        "S2 handing belief to another agent",
        belief.check(&belief.mutate(|s| s[s2].formula = belief.f("(believes bob 1 (P))"))),
    );
    let s1 = veridical.idx(Rule::S1);
    let k = veridical.proof.steps[s1].premises[0];
    push(
        "S1 applied to a belief",
        veridical.check(&veridical.mutate(|s| {
            s[k].formula = veridical.f("(believes alice 1 (Q))");
            s[s1].formula = veridical.f("(Q)");
        })),
    );

    let ax = everyone.idx(Rule::S2Axiom);
    push(
        "schema instance with the wrong shape",
        everyone.check(&everyone.mutate(|s| {
            s[ax].formula = everyone.f(
                "(forall x:Agent (forall t:Moment (implies (believes x t (R x)) (knows x t (R x)))))",
            )
        })),
    );
    push(
        "schema instance left open",
        everyone.check(&everyone.mutate(|s| {
            let mut f = &s[ax].formula;
            while let Formula::Forall(_, g) = f {
                f = g;
            }
            s[ax].formula = f.clone();
        })),
    );

    let cnf = witness
        .proof
        .steps
        .iter()
        .position(|s| s.rule == Rule::Cnf && matches!(s.formula, Formula::Forall(..)))
        .expect("clause of the rule");
    push(
        "clause not entailed by its premise",
        witness.check(
            &witness.mutate(|s| s[cnf].formula = witness.f("(forall y:Obj (or (S y) (Q)))")),
        ),
    );
    let sk = witness.idx(Rule::Cnf);
    let mut clash = witness.assumptions.clone();
    clash.push(witness.proof.steps[sk].formula.clone());
    push(
        "Skolem symbol already in use",
        verify_proof(&witness.proof, &clash, &witness.goal, &witness.sig),
    );

    let rf = refl.idx(Rule::Reflexivity);
    push(
        "reflexivity that equates everything with a",
        refl.check(&refl.mutate(|s| s[rf].formula = refl.f("(forall x:Obj (= x a))"))),
    );
    let d = names.idx(Rule::Distinct);
    let general = names.idx(Rule::Cnf);
    push(
        "distinctness dropping an equality with a variable",
        names.check(&names.mutate(|s| s[d].premises = vec![general])),
    );

    out
}
