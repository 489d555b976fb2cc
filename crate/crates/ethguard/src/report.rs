//! Simulation and DDE reports, rendered as text or JSON with the same
//! fields.

use std::fmt::Write as _;

use ethguard_core::ethics::{ClauseResult, DdeVerdict};
use ethguard_core::event::Trace;
use ethguard_core::guard::{requested_happens, Verdict};
use ethguard_core::scenario::Scenario;
use ethguard_core::Proof;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub goal: String,
    pub steps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub result: String,
    pub justification: String,
    pub proofs: Vec<ProofReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectReport {
    pub effect: String,
    pub valence: String,
    pub utility: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdeReport {
    pub compliant: bool,
    pub net_utility: i64,
    pub effects: Vec<EffectReport>,
    pub c1: ClauseReport,
    pub c2: ClauseReport,
    pub c3a: ClauseReport,
    pub c3b: ClauseReport,
    pub c4: ClauseReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentReport {
    pub moment: u32,
    pub fluents: Vec<String>,
    pub events: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub decision: String,
    pub request: String,
    pub obligation: String,
    pub obligation_proof: Option<Vec<String>>,
    pub timed_out: bool,
    pub dde: Option<DdeReport>,
    pub trace: Vec<MomentReport>,
    pub elapsed_ms: u64,
}

fn proof_report(goal: String, p: &Proof) -> ProofReport {
    ProofReport {
        goal,
        steps: p.lines(),
    }
}

fn clause_report(c: &ClauseResult) -> ClauseReport {
    ClauseReport {
        result: c.status.label().to_string(),
        justification: c.justification.clone(),
        proofs: c
            .proofs
            .iter()
            .map(|(g, p)| proof_report(g.to_string(), p))
            .collect(),
    }
}

impl DdeReport {
    pub fn from_verdict(d: &DdeVerdict) -> DdeReport {
        DdeReport {
            compliant: d.compliant(),
            net_utility: d.net,
            effects: d
                .effects
                .iter()
                .map(|e| EffectReport {
                    effect: e.change.as_formula().to_string(),
                    valence: e.valence.label().to_string(),
                    utility: e.utility,
                })
                .collect(),
            c1: clause_report(&d.c1),
            c2: clause_report(&d.c2),
            c3a: clause_report(&d.c3a),
            c3b: clause_report(&d.c3b),
            c4: clause_report(&d.c4),
        }
    }

    pub fn clauses(&self) -> [(&'static str, &ClauseReport); 5] {
        [
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c3a", &self.c3a),
            ("c3b", &self.c3b),
            ("c4", &self.c4),
        ]
    }

    fn write_text(&self, out: &mut String, indent: &str) {
        let _ = writeln!(out, "{indent}compliant: {}", self.compliant);
        let _ = writeln!(out, "{indent}net_utility: {}", self.net_utility);
        let _ = writeln!(out, "{indent}effects:");
        for e in &self.effects {
            let _ = writeln!(out, "{indent}  {} {} {}", e.effect, e.valence, e.utility);
        }
        for (n, c) in self.clauses() {
            let _ = writeln!(out, "{indent}{n}: {} ({})", c.result, c.justification);
            for p in &c.proofs {
                let _ = writeln!(out, "{indent}  proof of {}:", p.goal);
                for s in &p.steps {
                    let _ = writeln!(out, "{indent}    {s}");
                }
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s, "");
        s
    }
}

pub fn trace_report(t: &Trace) -> Vec<MomentReport> {
    (0..=t.horizon)
        .map(|m| MomentReport {
            moment: m,
            fluents: t.states[m as usize]
                .iter()
                .map(ToString::to_string)
                .collect(),
            events: t.events[m as usize]
                .iter()
                .map(ToString::to_string)
                .collect(),
        })
        .collect()
}

impl Report {
    pub fn from_verdict(scenario: &Scenario, v: &Verdict) -> Report {
        let request = scenario
            .request
            .as_ref()
            .map(|r| requested_happens(&r.agent, &r.atype, r.moment).to_string())
            .unwrap_or_default();
        Report {
            decision: v.decision.label().to_string(),
            request,
            obligation: v.obligation.to_string(),
            obligation_proof: v.obligation_proof.as_ref().map(Proof::lines),
            timed_out: v.timed_out,
            dde: v.dde.as_ref().map(DdeReport::from_verdict),
            trace: trace_report(&v.trace),
            elapsed_ms: v.elapsed_ms,
        }
    }

    /// The report with the elapsed time zeroed, for comparing runs.
    pub fn without_elapsed(&self) -> Report {
        Report {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "decision: {}", self.decision);
        let _ = writeln!(s, "request: {}", self.request);
        let _ = writeln!(s, "obligation: {}", self.obligation);
        match &self.obligation_proof {
            Some(lines) => {
                let _ = writeln!(s, "obligation_proof:");
                for l in lines {
                    let _ = writeln!(s, "  {l}");
                }
            }
            None => {
                let _ = writeln!(s, "obligation_proof: none");
            }
        }
        let _ = writeln!(s, "timed_out: {}", self.timed_out);
        match &self.dde {
            Some(d) => {
                let _ = writeln!(s, "dde:");
                d.write_text(&mut s, "  ");
            }
            None => {
                let _ = writeln!(s, "dde: none");
            }
        }
        let _ = writeln!(s, "trace:");
        for m in &self.trace {
            let _ = writeln!(
                s,
                "  {}: fluents [{}] events [{}]",
                m.moment,
                m.fluents.join(", "),
                m.events.join(", ")
            );
        }
        let _ = writeln!(s, "elapsed_ms: {}", self.elapsed_ms);
        s
    }
}
