// SPDX-License-Identifier: Apache-2.0

//! Cost benchmark: builds each design, drives the shared stimulus through
//! it and reports proxies next to the published figures.
//!
//! Ratios are improvement factors over the shift-add row of the same `n`
//! (baseline ÷ design). They are computed from the rounded values printed in
//! the same CSV row so that they can be recomputed from the file alone.

use std::fmt::Write as _;

use nibmul_core::netlist::build_netlist;
use nibmul_core::reference::PaperReference;
use nibmul_core::ArchKind;
use rayon::prelude::*;

use crate::stimulus::jobs;
use crate::{HarnessError, RunConfig, Stimulus};

pub const CSV_HEADER: &str = "arch,n,cycles,ge,depth,toggles_per_product,paper_area_um2,paper_power_mw,area_ratio_vs_shiftadd,power_proxy_ratio_vs_shiftadd";

pub const DEFAULT_STIMULUS: Stimulus = Stimulus::Random(256);

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub arch: ArchKind,
    pub n: usize,
    pub cycles: u64,
    pub ge: f64,
    pub depth: u32,
    pub toggles_per_product: f64,
    pub paper: PaperReference,
}

impl BenchRow {
    pub fn ge_text(&self) -> String {
        format!("{:.2}", self.ge)
    }

    pub fn toggles_text(&self) -> String {
        format!("{:.4}", self.toggles_per_product)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// `baseline ÷ design` over printed values; empty when undefined.
pub fn ratio_text(baseline: &str, design: &str) -> String {
    match (baseline.parse::<f64>(), design.parse::<f64>()) {
        (Ok(b), Ok(d)) if d != 0.0 => format!("{:.4}", b / d),
        _ => String::new(),
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Shift-add first, then the configured architectures in canonical order.
fn bench_archs(cfg: &RunConfig) -> Vec<ArchKind> {
    ArchKind::ALL
        .into_iter()
        .filter(|&a| a == ArchKind::ShiftAdd || cfg.archs.contains(&a))
        .collect()
}

pub fn run_bench(cfg: &RunConfig) -> Result<BenchReport, HarnessError> {
    cfg.validate()?;
    let stimulus = cfg.stimulus_or(DEFAULT_STIMULUS);
    let cells: Vec<(usize, ArchKind)> = cfg
        .ns
        .iter()
        .flat_map(|&n| bench_archs(cfg).into_iter().map(move |a| (n, a)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(n, arch)| {
            let mode = (arch == ArchKind::Nibble).then(|| cfg.mode_for(n));
            let design = build_netlist(arch, n, mode)?;
            let cost = design.cost(&jobs(stimulus, n, cfg.seed))?;
            Ok(BenchRow {
                arch,
                n,
                cycles: cost.cycles,
                ge: cost.gate_equivalents,
                depth: cost.depth,
                toggles_per_product: cost.toggles_per_product,
                paper: PaperReference::get(arch, n),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(BenchReport { rows })
}

impl BenchReport {
    pub fn baseline(&self, n: usize) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.arch == ArchKind::ShiftAdd)
    }

    pub fn row(&self, arch: ArchKind, n: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.n == n && r.arch == arch)
    }

    fn ratios(&self, r: &BenchRow) -> (String, String) {
        match self.baseline(r.n) {
            Some(b) => (
                ratio_text(&b.ge_text(), &r.ge_text()),
                ratio_text(&b.toggles_text(), &r.toggles_text()),
            ),
            None => (String::new(), String::new()),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let (area, power) = self.ratios(r);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                r.arch,
                r.n,
                r.cycles,
                r.ge_text(),
                r.depth,
                r.toggles_text(),
                opt(r.paper.area_um2),
                opt(r.paper.power_mw),
                area,
                power
            );
        }
        s
    }

    /// Proxy columns beside the published ones, with the published ratios
    /// recomputed the same way.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<9} {:>3} {:>6} {:>10} {:>5} {:>10} | {:>9} {:>7} {:>8} {:>8} | {:>11} {:>9} {:>11} {:>10}",
            "arch", "n", "cycles", "ge", "depth", "tog/prod", "area_um2", "mW",
            "ge_x", "tog_x", "pub_area_x", "pub_mW_x", "stated_area", "stated_mW",
        );
        for r in &self.rows {
            let (area, power) = self.ratios(r);
            let base = self.baseline(r.n).map(|b| b.paper);
            let paper_ratio = |pick: fn(&PaperReference) -> Option<String>| match (
                base.as_ref().and_then(pick),
                pick(&r.paper),
            ) {
                (Some(b), Some(d)) => ratio_text(&b, &d),
                _ => String::new(),
            };
            let _ = writeln!(
                s,
                "{:<9} {:>3} {:>6} {:>10} {:>5} {:>10} | {:>9} {:>7} {:>8} {:>8} | {:>11} {:>9} {:>11} {:>10}",
                r.arch.to_string(),
                r.n,
                r.cycles,
                r.ge_text(),
                r.depth,
                r.toggles_text(),
                opt(r.paper.area_um2),
                opt(r.paper.power_mw),
                area,
                power,
                paper_ratio(|p| p.area_um2.map(|v| v.to_string())),
                paper_ratio(|p| p.power_mw.map(|v| v.to_string())),
                opt(r.paper.area_factor),
                opt(r.paper.power_factor),
            );
        }
        s.push_str(
            "\nge_x, tog_x: shift-add proxy / design proxy. pub_*_x: the same ratio over the\n\
             published figures; stated_*: factors quoted in the published text.\n",
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_formatting() {
        assert_eq!(ratio_text("10.00", "4.00"), "2.5000");
        assert_eq!(ratio_text("1.0", "0.0000"), "");
        assert_eq!(ratio_text("", "1"), "");
    }

    #[test]
    fn small_bench() {
        let cfg = RunConfig {
            archs: vec![ArchKind::Nibble],
            ns: vec![2],
            stimulus: Some(Stimulus::Random(4)),
            ..RunConfig::default()
        };
        let r = run_bench(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0].arch, ArchKind::ShiftAdd);
        assert_eq!(r.row(ArchKind::Nibble, 2).unwrap().cycles, 4);
        let csv = r.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        assert!(csv.lines().nth(1).unwrap().ends_with(",1.0000,1.0000"));
    }
}
