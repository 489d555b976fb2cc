//! Reader for `.scn` scenario files.
//!
//! A file is a sequence of top-level sections, in any order, each at most
//! once. Declarations (`sorts`, `constants`, `predicates`, `functions`)
//! are read first so that the remaining sections may use any declared
//! symbol regardless of where it appears.

use std::collections::BTreeMap;
use std::path::Path;

use ethguard_core::ethics::{Hierarchy, NEUTRAL};
use ethguard_core::event::{EcTheory, EffectAxiom, GuardLiteral, Occurrence, Polarity, Utilities};
use ethguard_core::parse::Reader;
use ethguard_core::scenario::{Request, Scenario, ScenarioError};
use ethguard_core::sexpr::{read_all, SExpr};
use ethguard_core::syntax::{ACTION_TYPE, AGENT, EVENT, FLUENT};
use ethguard_core::{Pos, Signature, Sort, SortError, SyntaxError, Term};

const SECTIONS: &[&str] = &[
    "sorts",
    "constants",
    "predicates",
    "functions",
    "facts",
    "initial",
    "axioms",
    "occurrences",
    "horizon",
    "hierarchy",
    "utilities",
    "request",
    "guardian",
];

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {msg}")]
    At { pos: Pos, msg: String },
    #[error("invalid scenario: {0}")]
    Invalid(#[from] ScenarioError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    InFile {
        path: String,
        source: Box<LoadError>,
    },
}

impl LoadError {
    /// Source position, if the error has one.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            LoadError::Syntax(e) => Some(e.pos()),
            LoadError::At { pos, .. } => Some(*pos),
            LoadError::InFile { source, .. } => source.pos(),
            _ => None,
        }
    }
}

fn at(pos: Pos, msg: impl Into<String>) -> LoadError {
    LoadError::At {
        pos,
        msg: msg.into(),
    }
}

fn sort_err(pos: Pos, e: SortError) -> LoadError {
    at(pos, e.to_string())
}

fn ident(e: &SExpr, what: &str) -> Result<String, LoadError> {
    e.as_ident()
        .map(str::to_string)
        .ok_or_else(|| at(e.pos(), format!("expected {what}, found `{e}`")))
}

fn list<'a>(e: &'a SExpr, what: &str) -> Result<&'a [SExpr], LoadError> {
    e.as_list()
        .ok_or_else(|| at(e.pos(), format!("expected {what}, found `{e}`")))
}

fn moment(e: &SExpr) -> Result<u32, LoadError> {
    e.as_int()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| at(e.pos(), format!("expected a moment, found `{e}`")))
}

fn term_of_sort(
    reader: &Reader<'_>,
    sig: &Signature,
    e: &SExpr,
    sort: &str,
) -> Result<Term, LoadError> {
    let t = reader.term(e)?;
    if !sig.is_subsort(t.sort(), &Sort::new(sort)) {
        return Err(at(
            e.pos(),
            format!(
                "expected a term of sort {sort}, `{t}` has sort {}",
                t.sort()
            ),
        ));
    }
    Ok(t)
}

fn constant_of_sort(
    reader: &Reader<'_>,
    sig: &Signature,
    e: &SExpr,
    sort: &str,
) -> Result<Term, LoadError> {
    if e.as_ident().is_none() {
        return Err(at(
            e.pos(),
            format!("expected a constant of sort {sort}, found `{e}`"),
        ));
    }
    term_of_sort(reader, sig, e, sort)
}

pub const DECLARATIONS: [&str; 4] = ["sorts", "constants", "predicates", "functions"];

/// Adds the entries of one declaration section (`sorts`, `constants`,
/// `predicates` or `functions`) to `sig`.
pub fn declare(kind: &str, items: &[SExpr], sig: &mut Signature) -> Result<(), LoadError> {
    match kind {
        "sorts" => {
            for s in items {
                match s {
                    SExpr::List { items, pos } => {
                        let Some((first, parents)) = items.split_first() else {
                            return Err(at(*pos, "empty sort declaration"));
                        };
                        let n = ident(first, "a sort name")?;
                        let ps = parents
                            .iter()
                            .map(|p| ident(p, "a parent sort"))
                            .collect::<Result<Vec<_>, _>>()?;
                        let ps: Vec<&str> = ps.iter().map(String::as_str).collect();
                        sig.declare_sort(&n, &ps).map_err(|e| sort_err(*pos, e))?;
                    }
                    _ => {
                        let n = ident(s, "a sort name")?;
                        sig.declare_sort(&n, &[])
                            .map_err(|e| sort_err(s.pos(), e))?;
                    }
                }
            }
        }
        "constants" => {
            for c in items {
                let items = list(c, "(name sort)")?;
                let [n, s] = items else {
                    return Err(at(c.pos(), "constant declarations are (name sort)"));
                };
                sig.declare_constant(&ident(n, "a constant name")?, &ident(s, "a sort")?)
                    .map_err(|e| sort_err(c.pos(), e))?;
            }
        }
        "predicates" => {
            for p in items {
                let items = list(p, "(name sort...)")?;
                let Some((n, args)) = items.split_first() else {
                    return Err(at(p.pos(), "empty predicate declaration"));
                };
                let args = args
                    .iter()
                    .map(|a| ident(a, "a sort"))
                    .collect::<Result<Vec<_>, _>>()?;
                let args: Vec<&str> = args.iter().map(String::as_str).collect();
                sig.declare_predicate(&ident(n, "a predicate name")?, &args)
                    .map_err(|e| sort_err(p.pos(), e))?;
            }
        }
        "functions" => {
            for f in items {
                let items = list(f, "(name arg-sort... result-sort)")?;
                if items.len() < 3 {
                    return Err(at(
                    f.pos(),
                    "function declarations are (name arg-sort... result-sort) with at least one argument",
                ));
                }
                let sorts = items[1..]
                    .iter()
                    .map(|a| ident(a, "a sort"))
                    .collect::<Result<Vec<_>, _>>()?;
                let (result, args) = sorts.split_last().expect("length checked");
                let args: Vec<&str> = args.iter().map(String::as_str).collect();
                sig.declare_function(&ident(&items[0], "a function name")?, &args, result)
                    .map_err(|e| sort_err(f.pos(), e))?;
            }
        }
        _ => unreachable!("not a declaration section"),
    }
    Ok(())
}

/// Reads a scenario from source text.
pub fn parse_scenario(src: &str) -> Result<Scenario, LoadError> {
    let top = read_all(src)?;
    let mut sections: BTreeMap<&str, (&[SExpr], Pos)> = BTreeMap::new();
    for e in &top {
        let items = list(e, "a section")?;
        let head = items
            .first()
            .and_then(SExpr::as_ident)
            .ok_or_else(|| at(e.pos(), "section must start with its name"))?;
        let Some(&key) = SECTIONS.iter().find(|s| **s == head) else {
            return Err(at(e.pos(), format!("unknown section `{head}`")));
        };
        if sections.insert(key, (&items[1..], e.pos())).is_some() {
            return Err(at(e.pos(), format!("section `{head}` appears twice")));
        }
    }
    let get = |k: &str| sections.get(k).map(|(items, _)| *items).unwrap_or(&[]);

    let mut sig = Signature::new();
    for kind in DECLARATIONS {
        declare(kind, get(kind), &mut sig)?;
    }

    let reader = Reader::new(&sig);
    let mut facts = Vec::new();
    for f in get("facts") {
        let phi = reader.formula(f)?;
        sig.check_closed(&phi).map_err(|e| sort_err(f.pos(), e))?;
        facts.push(phi);
    }

    let mut theory = EcTheory::default();
    for f in get("initial") {
        theory.initial.push(term_of_sort(&reader, &sig, f, FLUENT)?);
    }
    for a in get("axioms") {
        let items = list(a, "(event initiates|terminates fluent [(guard ...)])")?;
        if !(3..=4).contains(&items.len()) {
            return Err(at(
                a.pos(),
                "axioms are (event initiates|terminates fluent [(guard literal...)])",
            ));
        }
        let event = term_of_sort(&reader, &sig, &items[0], EVENT)?;
        let pol = items[1]
            .as_ident()
            .and_then(Polarity::from_keyword)
            .ok_or_else(|| at(items[1].pos(), "expected `initiates` or `terminates`"))?;
        let fluent = term_of_sort(&reader, &sig, &items[2], FLUENT)?;
        let mut guard = Vec::new();
        if let Some(g) = items.get(3) {
            let lits = list(g, "(guard literal...)")?;
            if g.head() != Some("guard") {
                return Err(at(g.pos(), "expected (guard literal...)"));
            }
            for l in &lits[1..] {
                let (positive, e) = match l.as_list() {
                    Some([not, inner]) if not.as_ident() == Some("not") => (false, inner),
                    _ => (true, l),
                };
                guard.push(GuardLiteral {
                    positive,
                    fluent: term_of_sort(&reader, &sig, e, FLUENT)?,
                });
            }
        }
        theory.axioms.push(EffectAxiom {
            event,
            polarity: pol,
            fluent,
            guard,
        });
    }
    for o in get("occurrences") {
        let items = list(o, "(happens event moment)")?;
        let [h, ev, m] = items else {
            return Err(at(o.pos(), "occurrences are (happens event moment)"));
        };
        if h.as_ident() != Some("happens") {
            return Err(at(h.pos(), "occurrences are (happens event moment)"));
        }
        theory.occurrences.push(Occurrence {
            event: term_of_sort(&reader, &sig, ev, EVENT)?,
            moment: moment(m)?,
        });
    }
    match sections.get("horizon") {
        Some(([n], _)) => theory.horizon = moment(n)?,
        Some((_, pos)) => return Err(at(*pos, "expected (horizon n)")),
        None => return Err(at(Pos { line: 1, col: 1 }, "missing (horizon n) section")),
    }
    for o in &theory.occurrences {
        if o.moment > theory.horizon {
            let pos = sections["occurrences"].1;
            return Err(at(
                pos,
                format!(
                    "occurrence of {} at {} is past the horizon {}",
                    o.event, o.moment, theory.horizon
                ),
            ));
        }
    }

    let mut hierarchy = Hierarchy::default();
    let mut classes = Vec::new();
    for (i, h) in get("hierarchy").iter().enumerate() {
        let items = list(h, "a category list or (classify atype category)")?;
        if h.head() == Some("classify") {
            let [_, a, c] = items else {
                return Err(at(h.pos(), "expected (classify atype category)"));
            };
            constant_of_sort(&reader, &sig, a, ACTION_TYPE)?;
            classes.push((
                ident(a, "an action type")?,
                ident(c, "a category")?,
                h.pos(),
            ));
        } else if i == 0 {
            let cats = items
                .iter()
                .map(|c| ident(c, "a category"))
                .collect::<Result<Vec<_>, _>>()?;
            let cats: Vec<&str> = cats.iter().map(String::as_str).collect();
            hierarchy = Hierarchy::new(&cats, NEUTRAL).map_err(|e| at(h.pos(), e.to_string()))?;
        } else {
            return Err(at(h.pos(), "the category list must come first"));
        }
    }
    for (a, c, pos) in classes {
        hierarchy
            .set_class(&a, &c)
            .map_err(|e| at(pos, e.to_string()))?;
    }

    let mut utilities = Utilities::default();
    let mut gamma = 0;
    for u in get("utilities") {
        let items = list(u, "(fluent polarity value) or (gamma n)")?;
        match items {
            [g, n] if g.as_ident() == Some("gamma") => {
                gamma = n
                    .as_signed()
                    .ok_or_else(|| at(n.pos(), "gamma must be an integer"))?;
                if gamma < 0 {
                    return Err(at(n.pos(), "gamma must be non-negative"));
                }
            }
            [f, p, v] => {
                let fluent = term_of_sort(&reader, &sig, f, FLUENT)?;
                let pol = p
                    .as_ident()
                    .and_then(Polarity::from_keyword)
                    .ok_or_else(|| at(p.pos(), "expected `initiates` or `terminates`"))?;
                let v = v
                    .as_signed()
                    .ok_or_else(|| at(v.pos(), "utility must be an integer"))?;
                if utilities.values.insert((fluent, pol), v).is_some() {
                    return Err(at(u.pos(), "utility given twice"));
                }
            }
            _ => return Err(at(u.pos(), "expected (fluent polarity value) or (gamma n)")),
        }
    }

    let request = match sections.get("request") {
        None => None,
        Some(([agent, atype, m], _)) => {
            let r = Request {
                agent: constant_of_sort(&reader, &sig, agent, AGENT)?,
                atype: constant_of_sort(&reader, &sig, atype, ACTION_TYPE)?,
                moment: moment(m)?,
            };
            if r.moment > theory.horizon {
                return Err(at(
                    m.pos(),
                    format!(
                        "request moment {} is past the horizon {}",
                        r.moment, theory.horizon
                    ),
                ));
            }
            Some(r)
        }
        Some((_, pos)) => return Err(at(*pos, "expected (request agent action-type moment)")),
    };
    let guardian = match sections.get("guardian") {
        None => None,
        Some(([g], _)) => Some(constant_of_sort(&reader, &sig, g, AGENT)?),
        Some((_, pos)) => return Err(at(*pos, "expected (guardian agent)")),
    };

    let scenario = Scenario {
        sig,
        facts,
        theory,
        hierarchy,
        utilities,
        gamma,
        request,
        guardian,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Reads and parses a scenario file; errors carry the path and position.
pub fn load_scenario(path: &Path) -> Result<Scenario, LoadError> {
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_scenario(&src).map_err(|e| LoadError::InFile {
        path: shown,
        source: Box::new(e),
    })
}

/// Reads formula files. Top-level `(sorts ...)`, `(constants ...)`,
/// `(predicates ...)` and `(functions ...)` sections from every file are
/// collected into one signature; every other top-level expression is a
/// closed formula. Returns the signature and each file's formulas.
pub fn parse_formula_files(
    files: &[(String, String)],
) -> Result<(Signature, Vec<Vec<ethguard_core::Formula>>), LoadError> {
    let in_file = |path: &str, e: LoadError| LoadError::InFile {
        path: path.to_string(),
        source: Box::new(e),
    };
    let mut read = Vec::new();
    for (path, src) in files {
        read.push(read_all(src).map_err(|e| in_file(path, e.into()))?);
    }
    let mut sig = Signature::new();
    for kind in DECLARATIONS {
        for ((path, _), top) in files.iter().zip(&read) {
            for e in top {
                if e.head() == Some(kind) {
                    let items = &e.as_list().expect("has a head")[1..];
                    declare(kind, items, &mut sig).map_err(|err| in_file(path, err))?;
                }
            }
        }
    }
    let mut out = Vec::new();
    for ((path, _), top) in files.iter().zip(&read) {
        let reader = Reader::new(&sig);
        let mut fs = Vec::new();
        for e in top {
            if e.head().is_some_and(|h| DECLARATIONS.contains(&h)) {
                continue;
            }
            let f = reader.formula(e).map_err(|err| in_file(path, err.into()))?;
            sig.check_closed(&f)
                .map_err(|err| in_file(path, sort_err(e.pos(), err)))?;
            fs.push(f);
        }
        out.push(fs);
    }
    Ok((sig, out))
}
