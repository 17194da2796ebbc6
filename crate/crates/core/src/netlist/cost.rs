// SPDX-License-Identifier: Apache-2.0

//! Desk-scale synthesis proxies: gate-equivalent area, logic depth and
//! switching activity.

use super::{Driver, GateKind, Netlist};
use crate::Result;

/// Area of each primitive relative to a 2-input NAND.
pub fn ge_weight(kind: GateKind) -> f64 {
    match kind {
        GateKind::Inv => 0.5,
        GateKind::Nand2 | GateKind::Nor2 => 1.0,
        GateKind::And2 | GateKind::Or2 => 1.25,
        GateKind::Xor2 | GateKind::Mux2 => 2.0,
        GateKind::Ha => 2.5,
        GateKind::Fa => 4.5,
        GateKind::Dff => 4.0,
    }
}

pub fn area_proxy(nl: &Netlist) -> f64 {
    nl.gates.iter().map(|g| ge_weight(g.kind)).sum()
}

fn level_cost(kind: GateKind) -> u32 {
    match kind {
        GateKind::Ha | GateKind::Fa => 2,
        _ => 1,
    }
}

/// Longest combinational path in gate levels, between any pair of sources
/// (inputs, constants, flop outputs) and sinks. Half and full adders count
/// as two levels.
pub fn critical_depth(nl: &Netlist) -> Result<u32> {
    let order = nl.levelize()?;
    let drivers = nl.drivers()?;
    let mut level = vec![0u32; nl.net_count()];
    let mut depth = 0;
    for gi in order {
        let g = &nl.gates[gi];
        let arrival = g
            .inputs
            .iter()
            .filter(|n| matches!(drivers[n.index()], Driver::Gate { .. }))
            .map(|n| level[n.index()])
            .max()
            .unwrap_or(0);
        let l = arrival + level_cost(g.kind);
        for o in &g.outputs {
            level[o.index()] = l;
        }
        depth = depth.max(l);
    }
    Ok(depth)
}

/// Cost figures for one architecture and vector length.
#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub gate_equivalents: f64,
    pub depth: u32,
    pub toggles_total: u64,
    /// `toggles_total / (n × jobs)`.
    pub toggles_per_product: f64,
    pub cycles: u64,
}
