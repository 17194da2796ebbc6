// SPDX-License-Identifier: Apache-2.0

//! Per-cycle event log produced by the cycle engines.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceEvent {
    /// Element selected and registered into the datapath.
    Load,
    /// Low scalar nibble consumed.
    Nibble0,
    /// High scalar nibble consumed.
    Nibble1,
    /// Baseline iteration (shift-add bit or Booth digit).
    Step(u8),
    /// Product written to the output vector.
    WriteOutput,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Load => f.write_str("load"),
            TraceEvent::Nibble0 => f.write_str("nibble0"),
            TraceEvent::Nibble1 => f.write_str("nibble1"),
            TraceEvent::Step(k) => write!(f, "step{k}"),
            TraceEvent::WriteOutput => f.write_str("write_output"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    /// 1-based clock cycle in which the event happens.
    pub cycle: u64,
    pub element_index: usize,
    pub event: TraceEvent,
    /// Operand for `Load`, accumulator for intermediate steps, product for
    /// `WriteOutput`.
    pub value: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleTrace {
    /// Broadcast scalar, constant for the whole job.
    pub b: u8,
    pub records: Vec<TraceRecord>,
}

impl CycleTrace {
    pub fn new(b: u8) -> CycleTrace {
        CycleTrace {
            b,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, cycle: u64, element_index: usize, event: TraceEvent, value: u32) {
        self.records.push(TraceRecord {
            cycle,
            element_index,
            event,
            value,
        });
    }

    /// `(cycle, element_index, product)` for every output write, in order.
    pub fn writes(&self) -> Vec<(u64, usize, u32)> {
        self.records
            .iter()
            .filter(|r| r.event == TraceEvent::WriteOutput)
            .map(|r| (r.cycle, r.element_index, r.value))
            .collect()
    }

    pub fn last_cycle(&self) -> u64 {
        self.records.iter().map(|r| r.cycle).max().unwrap_or(0)
    }
}
