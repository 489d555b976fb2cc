//! Random scenarios and a brute-force reimplementation of a brute-force reimplementation of the
//! projection, the counterfactual effects, causal ancestry and the four
//! double-effect clauses. Intention (C3) is decided by the finite-model
//! finder instead of the prover.

use std::collections::BTreeSet;
use std::fmt::Write;

use ethguard::parse_scenario;
use ethguard_core::ethics::{dde_compliant, Status};
use ethguard_core::event::Polarity;
use ethguard_core::model::{countermodel, ModelBounds, ModelSearch};
use ethguard_core::scenario::Scenario;
use ethguard_core::{parse_formula, Budget, FrozenClock, Prover};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CATEGORIES: [&str; 4] = ["civil", "tolerated", "neutral", "supererogatory"];

#[derive(Clone, PartialEq)]
enum Ev {
    Plain(usize),
    Act(&'static str, usize),
}

impl Ev {
    fn text(&self) -> String {
        match self {
            Ev::Plain(i) => format!("e{i}"),
            Ev::Act(who, a) => format!("(action {who} a{a})"),
        }
    }
}

struct Axiom {
    event: Ev,
    initiates: bool,
    fluent: usize,
    guard: Vec<(bool, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
struct Change {
    fluent: usize,
    initiates: bool,
    at: u32,
    /// (occurrence, axiom) pairs that produced it.
    causes: Vec<(usize, usize)>,
}

impl Change {
    fn key(&self) -> (usize, bool, u32) {
        (self.fluent, self.initiates, self.at)
    }
}

struct Gen {
    fluents: usize,
    horizon: u32,
    initial: Vec<usize>,
    axioms: Vec<Axiom>,
    occurrences: Vec<(Ev, u32)>,
    request: (usize, u32),
    utilities: Vec<(usize, bool, i64)>,
    gamma: i64,
    order: Vec<&'static str>,
    classes: Vec<(usize, &'static str)>,
}

fn generate(rng: &mut ChaCha8Rng) -> Gen {
    let fluents = rng.gen_range(3..6);
    let horizon = rng.gen_range(3..6);
    let events: Vec<Ev> = vec![
        Ev::Plain(0),
        Ev::Plain(1),
        Ev::Act("actor", 0),
        Ev::Act("actor", 1),
        Ev::Act("other", 0),
        Ev::Act("other", 2),
    ];
    let initial = (0..fluents).filter(|_| rng.gen_bool(0.4)).collect();
    let mut axioms = Vec::new();
    for _ in 0..rng.gen_range(3..9) {
        let guard = (0..rng.gen_range(0..3))
            .map(|_| (rng.gen_bool(0.6), rng.gen_range(0..fluents)))
            .collect();
        axioms.push(Axiom {
            event: events.choose(rng).unwrap().clone(),
            initiates: rng.gen_bool(0.6),
            fluent: rng.gen_range(0..fluents),
            guard,
        });
    }
    let request = (rng.gen_range(0..2), rng.gen_range(0..horizon));
    // Make the requested action do something most of the time.
    for _ in 0..rng.gen_range(0..4) {
        axioms.push(Axiom {
            event: Ev::Act("actor", request.0),
            initiates: rng.gen_bool(0.7),
            fluent: rng.gen_range(0..fluents),
            guard: Vec::new(),
        });
    }
    let mut occurrences = Vec::new();
    for _ in 0..rng.gen_range(1..5) {
        let e = events.choose(rng).unwrap().clone();
        let m = rng.gen_range(0..horizon);
        if (e == Ev::Act("actor", request.0) && m == request.1)
            || occurrences.contains(&(e.clone(), m))
        {
            continue;
        }
        occurrences.push((e, m));
    }
    let mut utilities = Vec::new();
    for f in 0..fluents {
        for initiates in [true, false] {
            if rng.gen_bool(0.5) {
                let u = rng.gen_range(-2..=3);
                utilities.push((f, initiates, u));
            }
        }
    }
    let mut order = CATEGORIES.to_vec();
    order.shuffle(rng);
    let all: Vec<&str> = std::iter::once("forbidden").chain(CATEGORIES).collect();
    let mut classes = Vec::new();
    for a in 0..3 {
        if rng.gen_bool(0.7) {
            classes.push((a, *all.choose(rng).unwrap()));
        }
    }
    Gen {
        fluents,
        horizon,
        initial,
        axioms,
        occurrences,
        request,
        utilities,
        gamma: rng.gen_range(0..3),
        order,
        classes,
    }
}

impl Gen {
    /// Straight-line simulation. `None` when a fluent is initiated and
    /// terminated at once.
    fn simulate(&self, occs: &[(Ev, u32)]) -> Option<(Vec<BTreeSet<usize>>, Vec<Change>)> {
        let mut states = vec![self.initial.iter().copied().collect::<BTreeSet<_>>()];
        let mut changes = Vec::new();
        for m in 0..self.horizon {
            let now = states.last().unwrap().clone();
            let mut fired: Vec<(usize, bool, (usize, usize))> = Vec::new();
            for (oi, (e, at)) in occs.iter().enumerate() {
                if *at != m {
                    continue;
                }
                for (ai, ax) in self.axioms.iter().enumerate() {
                    if ax.event == *e && ax.guard.iter().all(|&(pos, g)| now.contains(&g) == pos) {
                        fired.push((ax.fluent, ax.initiates, (oi, ai)));
                    }
                }
            }
            let mut next = now.clone();
            for f in 0..self.fluents {
                let on: Vec<_> = fired
                    .iter()
                    .filter(|x| x.0 == f && x.1)
                    .map(|x| x.2)
                    .collect();
                let off: Vec<_> = fired
                    .iter()
                    .filter(|x| x.0 == f && !x.1)
                    .map(|x| x.2)
                    .collect();
                if !on.is_empty() && !off.is_empty() {
                    return None;
                }
                if !on.is_empty() && !now.contains(&f) {
                    next.insert(f);
                    changes.push(Change {
                        fluent: f,
                        initiates: true,
                        at: m + 1,
                        causes: on,
                    });
                } else if !off.is_empty() && now.contains(&f) {
                    next.remove(&f);
                    changes.push(Change {
                        fluent: f,
                        initiates: false,
                        at: m + 1,
                        causes: off,
                    });
                }
            }
            states.push(next);
        }
        Some((states, changes))
    }

    /// Changes that enabled `c`: its own, then those that set the guards
    /// of the axioms that fired for it, recursively.
    fn ancestry(
        &self,
        occs: &[(Ev, u32)],
        changes: &[Change],
        c: &Change,
        out: &mut Vec<(usize, (usize, bool, u32))>,
    ) {
        for &(oi, ai) in &c.causes {
            out.push((oi, c.key()));
            let at = occs[oi].1;
            for &(pos, g) in &self.axioms[ai].guard {
                let prev = changes
                    .iter()
                    .filter(|d| d.fluent == g && d.at <= at)
                    .max_by_key(|d| d.at);
                if let Some(p) = prev.filter(|p| p.initiates == pos) {
                    self.ancestry(occs, changes, p, out);
                }
            }
        }
    }

    fn utility(&self, f: usize, initiates: bool) -> i64 {
        self.utilities
            .iter()
            .find(|u| u.0 == f && u.1 == initiates)
            .map_or(0, |u| u.2)
    }

    fn with_request(&self) -> Vec<(Ev, u32)> {
        let mut occs = self.occurrences.clone();
        occs.push((Ev::Act("actor", self.request.0), self.request.1));
        occs
    }

    /// Effects of the request: (fluent, initiates, moment, utility).
    fn effects(&self) -> Option<Vec<(usize, bool, u32, i64)>> {
        let occs = self.with_request();
        let act = occs.len() - 1;
        let (_, with) = self.simulate(&occs)?;
        let (_, without) = self.simulate(&self.occurrences)?;
        let mut out = Vec::new();
        for c in &with {
            let mut anc = Vec::new();
            self.ancestry(&occs, &with, c, &mut anc);
            let ours = anc.iter().any(|(o, _)| *o == act);
            let also_without = without.iter().any(|d| d.key() == c.key());
            if ours && !also_without {
                out.push((
                    c.fluent,
                    c.initiates,
                    c.at,
                    self.utility(c.fluent, c.initiates),
                ));
            }
        }
        Some(out)
    }

    fn c1(&self) -> bool {
        let cat = self
            .classes
            .iter()
            .rev()
            .find(|c| c.0 == self.request.0)
            .map_or("neutral", |c| c.1);
        let rank = |c: &str| {
            std::iter::once("forbidden")
                .chain(self.order.iter().copied())
                .position(|d| d == c)
        };
        rank(cat) >= rank("neutral")
    }

    fn c4(&self, effects: &[(usize, bool, u32, i64)]) -> bool {
        let occs = self.with_request();
        let (_, with) = self.simulate(&occs).unwrap();
        let bad: Vec<_> = effects
            .iter()
            .filter(|e| e.3 < 0)
            .map(|e| (e.0, e.1, e.2))
            .collect();
        effects.iter().filter(|e| e.3 > 0).all(|g| {
            let c = with.iter().find(|c| c.key() == (g.0, g.1, g.2)).unwrap();
            let mut anc = Vec::new();
            self.ancestry(&occs, &with, c, &mut anc);
            !anc.iter().any(|(_, k)| bad.contains(k))
        })
    }

    fn lit(f: usize, initiates: bool, at: u32) -> String {
        if initiates {
            format!("(holds f{f} {at})")
        } else {
            format!("(not (holds f{f} {at}))")
        }
    }

    fn facts(&self, rng: &mut ChaCha8Rng, effects: &[(usize, bool, u32, i64)]) -> String {
        let t = self.request.1;
        let mut out = String::new();
        // Usually the actor intends exactly the good effects, so that
        // compliant scenarios turn up; otherwise the forms are random.
        let aligned = rng.gen_bool(0.6);
        let mut targets: Vec<(usize, bool, u32, Option<bool>)> = effects
            .iter()
            .map(|e| (e.0, e.1, e.2, aligned.then_some(e.3 > 0)))
            .collect();
        for _ in 0..2 {
            targets.push((
                rng.gen_range(0..self.fluents),
                rng.gen_bool(0.5),
                rng.gen_range(0..=self.horizon),
                None,
            ));
        }
        for (f, i, at, want) in targets {
            let phi = Self::lit(f, i, at);
            let form = match want {
                Some(true) => rng.gen_range(0..4),
                Some(false) => rng.gen_range(4..7),
                None => rng.gen_range(0..7),
            };
            match form {
                0 | 1 => writeln!(out, "  (intends actor {t} {phi})").unwrap(),
                2 => writeln!(out, "  (knows actor {t} (intends actor {t} {phi}))").unwrap(),
                3 => {
                    let p = rng.gen_range(0..2);
                    writeln!(out, "  (implies (P{p}) (intends actor {t} {phi}))").unwrap();
                }
                4 => writeln!(out, "  (intends other {t} {phi})").unwrap(),
                5 => writeln!(out, "  (desires actor {t} {phi})").unwrap(),
                _ => {}
            }
        }
        if rng.gen_bool(0.5) {
            out.push_str("  (P0)\n");
        }
        out
    }

    fn render(&self, facts: &str) -> String {
        let mut s = String::new();
        s.push_str("(constants (actor Agent) (other Agent) (a0 ActionType) (a1 ActionType) (a2 ActionType)\n");
        s.push_str("  (e0 Event) (e1 Event)");
        for f in 0..self.fluents {
            write!(s, " (f{f} Fluent)").unwrap();
        }
        s.push_str(")\n(predicates (P0) (P1))\n");
        writeln!(s, "(facts\n{facts})").unwrap();
        s.push_str("(initial");
        for f in &self.initial {
            write!(s, " f{f}").unwrap();
        }
        s.push_str(")\n(axioms\n");
        for a in &self.axioms {
            let pol = if a.initiates {
                "initiates"
            } else {
                "terminates"
            };
            write!(s, "  ({} {pol} f{}", a.event.text(), a.fluent).unwrap();
            if !a.guard.is_empty() {
                s.push_str(" (guard");
                for (pos, g) in &a.guard {
                    if *pos {
                        write!(s, " f{g}").unwrap();
                    } else {
                        write!(s, " (not f{g})").unwrap();
                    }
                }
                s.push(')');
            }
            s.push_str(")\n");
        }
        s.push_str(")\n(occurrences");
        for (e, m) in &self.occurrences {
            write!(s, " (happens {} {m})", e.text()).unwrap();
        }
        writeln!(s, ")\n(horizon {})", self.horizon).unwrap();
        writeln!(s, "(hierarchy (forbidden {})", self.order.join(" ")).unwrap();
        for (a, c) in &self.classes {
            writeln!(s, "  (classify a{a} {c})").unwrap();
        }
        s.push_str(")\n(utilities");
        for (f, i, u) in &self.utilities {
            let pol = if *i { "initiates" } else { "terminates" };
            write!(s, " (f{f} {pol} {u})").unwrap();
        }
        writeln!(s, " (gamma {}))", self.gamma).unwrap();
        writeln!(s, "(request actor a{} {})", self.request.0, self.request.1).unwrap();
        s
    }
}

fn status(b: bool) -> Status {
    if b {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub struct Tally {
    pub compared: usize,
    pub compliant: usize,
    pub contradictory: usize,
    pub disagreements: Vec<String>,
}

/// Generates scenarios from `seed` until `want` of them have been compared
/// clause by clause with `dde_compliant`.
pub fn compare(seed: u64, want: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally {
        compared: 0,
        compliant: 0,
        contradictory: 0,
        disagreements: Vec::new(),
    };
    let mut attempts = 0;
    while tally.compared < want && attempts < 50 * want {
        attempts += 1;
        let g = generate(&mut rng);
        let base_ok = g.simulate(&g.occurrences).is_some();
        let effects = g.effects();
        let facts = g.facts(&mut rng, effects.as_deref().unwrap_or(&[]));
        let src = g.render(&facts);
        let mut differ = |what: String| tally.disagreements.push(format!("{what}\n{src}"));
        let parsed = parse_scenario(&src);
        if !base_ok {
            if parsed.is_ok() {
                differ("contradictory theory accepted".into());
            }
            tally.contradictory += 1;
            continue;
        }
        let scenario = match parsed {
            Ok(s) => s,
            Err(e) => {
                differ(format!("rejected: {e}"));
                continue;
            }
        };
        let clock = FrozenClock;
        let prover = Prover::new(&scenario.sig, Budget::default(), &clock);
        let verdict = dde_compliant(&scenario, &prover);
        let Some(effects) = effects else {
            if verdict.is_ok() {
                differ("contradiction with the request went unnoticed".into());
            }
            tally.contradictory += 1;
            continue;
        };
        let v = match verdict {
            Ok(v) => v,
            Err(e) => {
                differ(format!("dde_compliant failed: {e}"));
                continue;
            }
        };

        let got: BTreeSet<_> = v
            .effects
            .iter()
            .map(|e| {
                let f: usize = e.change.fluent.to_string()[1..].parse().unwrap();
                (
                    f,
                    e.change.polarity == Polarity::Initiates,
                    e.change.moment,
                    e.utility,
                )
            })
            .collect();
        let want_effects: BTreeSet<_> = effects.iter().copied().collect();
        if got != want_effects {
            differ(format!("effects {got:?} != {want_effects:?}"));
        }

        let c1 = g.c1();
        let net: i64 = effects.iter().map(|e| e.3).sum();
        let c2 = net > g.gamma;
        let t = g.request.1;
        let mut c3a = true;
        let mut c3b = true;
        for &(f, i, at, u) in &effects {
            let goal = parse_formula(
                &format!("(intends actor {t} {})", Gen::lit(f, i, at)),
                &scenario.sig,
            )
            .unwrap();
            let intended = match countermodel(
                &scenario.facts,
                &goal,
                &scenario.sig,
                &ModelBounds::default(),
            ) {
                ModelSearch::Found(_) => false,
                ModelSearch::NotFound => true,
                ModelSearch::Unsupported(why) => {
                    differ(format!("model finder: {why}"));
                    continue;
                }
            };
            if (u > 0) != intended {
                c3a = false;
            }
            if u < 0 && intended {
                c3b = false;
            }
        }
        let c4 = g.c4(&effects);

        if v.net != net {
            differ(format!("net {} != {net}", v.net));
        }
        for (name, got, want) in [
            ("C1", &v.c1, c1),
            ("C2", &v.c2, c2),
            ("C3a", &v.c3a, c3a),
            ("C3b", &v.c3b, c3b),
            ("C4", &v.c4, c4),
        ] {
            if got.status != status(want) {
                differ(format!(
                    "{name}: {:?} != {:?} ({})",
                    got.status,
                    status(want),
                    got.justification
                ));
            }
        }
        if v.compliant() != (c1 && c2 && c3a && c3b && c4) {
            differ("overall verdict differs".into());
        }
        tally.compared += 1;
        tally.compliant += v.compliant() as usize;
    }
    tally
}

/// Generated scenarios whose theory projects cleanly with the request.
pub fn scenarios(seed: u64, want: usize) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < want && attempts < 50 * want {
        attempts += 1;
        let g = generate(&mut rng);
        let Some(effects) = g.effects() else { continue };
        let facts = g.facts(&mut rng, &effects);
        if let Ok(s) = parse_scenario(&g.render(&facts)) {
            out.push(s);
        }
    }
    out
}
