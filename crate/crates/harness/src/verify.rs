// SPDX-License-Identifier: Apache-2.0

//! Verification campaign: lookup and precompute soundness, every functional
//! model against the oracle, and every netlist against the oracle.

use std::fmt::Write as _;

use nibmul_core::engine::multiply;
use nibmul_core::lut_array::{build_res_string, extract_slice};
use nibmul_core::netlist::build_netlist;
use nibmul_core::nibble::{pl, pl_config_table};
use nibmul_core::{ArchKind, Nibble, Operand8, Product16, VectorJob};
use rayon::prelude::*;

use crate::stimulus::jobs;
use crate::{HarnessError, RunConfig, Stimulus};

pub const DEFAULT_STIMULUS: Stimulus = Stimulus::Exhaustive;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: String,
    /// Distinct cases checked.
    pub checked: u64,
    pub failures: u64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checked > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub stimulus: Stimulus,
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "stimulus {} seed {}", self.stimulus, self.seed);
        for r in &self.suites {
            let _ = writeln!(
                s,
                "{} {}: {}/{} matches",
                if r.passed() { "PASS" } else { "FAIL" },
                r.suite,
                r.checked - r.failures.min(r.checked),
                r.checked
            );
        }
        let failed = self.suites.iter().filter(|r| !r.passed()).count();
        let _ = writeln!(s, "{} suites, {failed} failed", self.suites.len());
        s
    }
}

/// Compares products with the oracle; counts distinct `(a, b)` pairs for
/// exhaustive runs and individual products otherwise.
fn tally(stimulus: Stimulus, jobs: &[VectorJob], got: &[Vec<Product16>]) -> (u64, u64) {
    let mut failures = 0;
    let mut seen = vec![false; 1 << 16];
    let mut products = 0;
    for (job, g) in jobs.iter().zip(got) {
        for ((a, want), got) in job.a_ops().iter().zip(job.oracle()).zip(g) {
            products += 1;
            seen[usize::from(job.b().0) << 8 | usize::from(a.0)] = true;
            if *got != want {
                failures += 1;
            }
        }
    }
    failures += (jobs.len() as u64).saturating_sub(got.len() as u64);
    let checked = match stimulus {
        Stimulus::Exhaustive => seen.iter().filter(|&&s| s).count() as u64,
        Stimulus::Random(_) => products,
    };
    (checked, failures)
}

pub fn lut_suite() -> SuiteResult {
    let mut failures = 0;
    for b in Nibble::all() {
        let s = build_res_string(b);
        for a in Nibble::all() {
            if u32::from(extract_slice(s, a)) != u32::from(a.value()) * u32::from(b.value()) {
                failures += 1;
            }
        }
    }
    SuiteResult {
        suite: "lut slices".into(),
        checked: 256,
        failures,
    }
}

pub fn pl_suite() -> SuiteResult {
    let table = pl_config_table();
    let mut failures = 0;
    for a in 0..=255u8 {
        for n in Nibble::all() {
            let exact = u32::from(pl(Operand8(a), n)) == u32::from(a) * u32::from(n.value());
            if !exact || table[usize::from(n.value())].additions() > 3 {
                failures += 1;
            }
        }
    }
    SuiteResult {
        suite: "precompute logic".into(),
        checked: 4096,
        failures,
    }
}

pub fn run_verify(cfg: &RunConfig) -> Result<VerifyReport, HarnessError> {
    cfg.validate()?;
    let stimulus = cfg.stimulus_or(DEFAULT_STIMULUS);
    let mut ns = cfg.ns.clone();
    if !ns.contains(&1) {
        ns.insert(0, 1);
    }
    let cells: Vec<(bool, ArchKind, usize)> = [false, true]
        .into_iter()
        .flat_map(|netlist| {
            let ns = &ns;
            cfg.archs
                .iter()
                .flat_map(move |&a| ns.iter().map(move |&n| (netlist, a, n)))
        })
        .collect();
    let mut suites = vec![lut_suite(), pl_suite()];
    let results = cells
        .par_iter()
        .map(|&(netlist, arch, n)| {
            let jobs = jobs(stimulus, n, cfg.seed);
            let mode = cfg.mode_for(n);
            let got = if netlist {
                let nibble_mode = (arch == ArchKind::Nibble).then_some(mode);
                build_netlist(arch, n, nibble_mode)?.run_jobs(&jobs)?
            } else {
                jobs.iter()
                    .map(|j| multiply(arch, j, mode).map(|r| r.products))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let (checked, failures) = tally(stimulus, &jobs, &got);
            let kind = if netlist { "netlist" } else { "functional" };
            Ok(SuiteResult {
                suite: format!("{kind} {arch} n={n}"),
                checked,
                failures,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    suites.extend(results);
    Ok(VerifyReport {
        stimulus,
        seed: cfg.seed,
        suites,
    })
}
