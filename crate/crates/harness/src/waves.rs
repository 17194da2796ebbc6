// SPDX-License-Identifier: Apache-2.0

//! Trace shape checks and CSV/VCD rendering.

use std::fmt::Write as _;

use nibmul_core::nibble::NibbleMode;
use nibmul_core::trace::{CycleTrace, TraceEvent};
use nibmul_core::{ArchKind, VectorJob};

/// Cycle in which element `i` is written out.
pub fn expected_write_cycle(arch: ArchKind, mode: NibbleMode, i: usize) -> u64 {
    match arch {
        ArchKind::Wallace | ArchKind::LutArray => 1,
        ArchKind::ShiftAdd => 8 * (i as u64 + 1),
        ArchKind::Booth => 4 * (i as u64 + 1),
        ArchKind::Nibble => mode.cycles_per_element() * (i / mode.lanes + 1) as u64,
    }
}

/// Every element written exactly once, with its product, at its scheduled
/// cycle; writes appear in cycle order.
pub fn check_shape(
    arch: ArchKind,
    mode: NibbleMode,
    job: &VectorJob,
    trace: &CycleTrace,
) -> Result<(), String> {
    let writes = trace.writes();
    if writes.len() != job.len() {
        return Err(format!(
            "{} writes for {} elements",
            writes.len(),
            job.len()
        ));
    }
    if writes.windows(2).any(|w| w[1].0 < w[0].0) {
        return Err("writes out of cycle order".into());
    }
    let oracle = job.oracle();
    let mut seen = vec![false; job.len()];
    for (cycle, idx, value) in writes {
        if idx >= job.len() || std::mem::replace(&mut seen[idx], true) {
            return Err(format!("element {idx} written twice or out of range"));
        }
        let want = expected_write_cycle(arch, mode, idx);
        if cycle != want {
            return Err(format!(
                "element {idx} written at cycle {cycle}, expected {want}"
            ));
        }
        if value != u32::from(oracle[idx].0) {
            return Err(format!(
                "element {idx} wrote {value}, expected {}",
                oracle[idx]
            ));
        }
    }
    Ok(())
}

pub fn trace_csv(trace: &CycleTrace) -> String {
    let mut s = String::from("cycle,element_index,event,value\n");
    for r in &trace.records {
        let _ = writeln!(s, "{},{},{},{}", r.cycle, r.element_index, r.event, r.value);
    }
    s
}

/// Short printable VCD identifier for signal `k`.
fn vcd_id(mut k: usize) -> String {
    const FIRST: u8 = b'!';
    const RADIX: usize = 94;
    let mut id = String::new();
    loop {
        id.push((FIRST + (k % RADIX) as u8) as char);
        k /= RADIX;
        if k == 0 {
            return id;
        }
        k -= 1;
    }
}

fn bits(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|i| if (value >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Value-change dump with one timestep per cycle. Signals: the scalar `b`,
/// the element and value of the most recent event, a one-cycle `write`
/// strobe, and one register per output element.
pub fn trace_vcd(trace: &CycleTrace, n: usize) -> String {
    let mut s = String::new();
    s.push_str("$version nibmul trace $end\n$timescale 1ns $end\n$scope module nibmul $end\n");
    let (b_id, elem_id, value_id, write_id) = (vcd_id(0), vcd_id(1), vcd_id(2), vcd_id(3));
    let _ = writeln!(s, "$var wire 8 {b_id} b [7:0] $end");
    let _ = writeln!(s, "$var wire 7 {elem_id} element [6:0] $end");
    let _ = writeln!(s, "$var wire 32 {value_id} value [31:0] $end");
    let _ = writeln!(s, "$var wire 1 {write_id} write $end");
    let out_ids: Vec<String> = (0..n).map(|i| vcd_id(4 + i)).collect();
    for (i, id) in out_ids.iter().enumerate() {
        let _ = writeln!(s, "$var reg 16 {id} r{i} [15:0] $end");
    }
    s.push_str("$upscope $end\n$enddefinitions $end\n#0\n$dumpvars\n");
    let _ = writeln!(s, "b{} {b_id}", bits(u64::from(trace.b), 8));
    let _ = writeln!(s, "b{} {elem_id}", bits(0, 7));
    let _ = writeln!(s, "b{} {value_id}", bits(0, 32));
    let _ = writeln!(s, "0{write_id}");
    for id in &out_ids {
        let _ = writeln!(s, "b{} {id}", bits(0, 16));
    }
    s.push_str("$end\n");
    let last = trace.last_cycle();
    let mut strobe = false;
    for cycle in 1..=last {
        let records: Vec<_> = trace.records.iter().filter(|r| r.cycle == cycle).collect();
        let writes = records.iter().any(|r| r.event == TraceEvent::WriteOutput);
        if records.is_empty() && writes == strobe {
            continue;
        }
        let _ = writeln!(s, "#{cycle}");
        if let Some(r) = records.last() {
            let _ = writeln!(s, "b{} {elem_id}", bits(r.element_index as u64, 7));
            let _ = writeln!(s, "b{} {value_id}", bits(u64::from(r.value), 32));
        }
        if writes != strobe {
            let _ = writeln!(s, "{}{write_id}", u8::from(writes));
            strobe = writes;
        }
        for r in records
            .iter()
            .filter(|r| r.event == TraceEvent::WriteOutput)
        {
            if let Some(id) = out_ids.get(r.element_index) {
                let _ = writeln!(s, "b{} {id}", bits(u64::from(r.value), 16));
            }
        }
    }
    let _ = writeln!(s, "#{}", last + 1);
    if strobe {
        let _ = writeln!(s, "0{write_id}");
    }
    s
}
