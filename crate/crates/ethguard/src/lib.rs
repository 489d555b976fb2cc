//! Scenario files, reports, a wall clock and the simulation driver around
//! `ethguard-core`.

pub mod report;
pub mod scenario_file;

use std::path::Path;
use std::time::Instant;

use ethguard_core::guard::adjudicate;
use ethguard_core::{Budget, Clock, Prover};

pub use report::{DdeReport, Report};
pub use scenario_file::{load_scenario, parse_formula_files, parse_scenario, LoadError};

/// Milliseconds since construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn new() -> WallClock {
        WallClock(Instant::now())
    }
}

impl Default for WallClock {
    fn default() -> Self {
        WallClock::new()
    }
}

impl Clock for WallClock {
    fn now_ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

/// Loads a scenario, adjudicates its request and builds the report.
pub fn run_simulation(
    path: &Path,
    budget: Budget,
    trace: Option<&dyn Fn(&str)>,
) -> Result<Report, LoadError> {
    let scenario = load_scenario(path)?;
    let clock = WallClock::new();
    let mut prover = Prover::new(&scenario.sig, budget, &clock);
    if let Some(t) = trace {
        prover = prover.with_trace(t);
    }
    let verdict = adjudicate(&scenario, &prover)?;
    Ok(Report::from_verdict(&scenario, &verdict))
}
