// SPDX-License-Identifier: Apache-2.0

//! Netlist builders for the five architectures.
//!
//! Port layout is shared by every design:
//!
//! * inputs: `rst` (sequential designs only), `a0 .. a{n-1}` (8 bits each), `b` (8 bits)
//! * outputs: `r0 .. r{n-1}` (16 bits each), `done` (sequential designs only)
//!
//! Sequential designs are driven for one reset cycle and then
//! `compute_cycles` cycles with the operands held; results are read from the
//! output registers after the last edge. Control is one-hot: a step ring of
//! `cycles_per_element` flops and an element ring with one slot per element
//! a lane processes plus a terminal `done` slot.

use std::collections::HashMap;

use super::builder::{Builder, Sig};
use super::cost::{area_proxy, critical_depth, CostReport};
use super::sim::{simulate_netlist, InputVector, Simulator};
use super::Netlist;
use crate::arith::{check_len, ArchKind, Product16, VectorJob};
use crate::baseline::{carry_propagate, partial_product_rows, wallace_reduce};
use crate::nibble::{NibbleMode, NibbleModeKind};
use crate::{Error, Result};

const PRODUCT_BITS: usize = 16;

/// A built netlist plus what is needed to drive it.
#[derive(Clone, Debug)]
pub struct Design {
    pub arch: ArchKind,
    pub n: usize,
    /// Nibble configuration; `None` for the other architectures.
    pub mode: Option<NibbleMode>,
    pub netlist: Netlist,
    /// Clock edges after reset until every output is valid; zero for
    /// combinational designs.
    pub compute_cycles: u64,
}

pub fn build_netlist(arch: ArchKind, n: usize, mode: Option<NibbleMode>) -> Result<Design> {
    check_len(n)?;
    if mode.is_some() && arch != ArchKind::Nibble {
        return Err(Error::Unsupported(format!("nibble mode given for {arch}")));
    }
    let mode = match arch {
        ArchKind::Nibble => {
            let m = mode.unwrap_or_default();
            m.check(n)?;
            Some(m)
        }
        _ => None,
    };
    let mut b = Builder::new();
    let compute_cycles = match arch {
        ArchKind::ShiftAdd => {
            let io = Io::new(&mut b, n, true);
            sequential(&mut b, &io, 1, 8, shift_add_lane(&io))
        }
        ArchKind::Booth => {
            let io = Io::new(&mut b, n, true);
            let ctrl = control(&mut b, 4, n);
            let dec = BoothDecode::new(&mut b, &ctrl.step, &io.b);
            sequential_with(&mut b, &io, 1, ctrl, |b, lane, ctrl, a| {
                booth_lane(b, lane, ctrl, &dec, &io.b, a)
            })
        }
        ArchKind::Nibble => {
            let m = mode.expect("nibble mode set");
            let io = Io::new(&mut b, n, true);
            match m.kind {
                NibbleModeKind::Sequential => {
                    let slots = n.div_ceil(m.lanes);
                    let ctrl = control(&mut b, 2, slots);
                    let phase = ctrl.step[1];
                    // Broadcast nibble selector shared by every lane.
                    let bsel: Vec<Sig> =
                        (0..4).map(|i| b.mux(phase, io.b[i], io.b[i + 4])).collect();
                    sequential_with(&mut b, &io, m.lanes, ctrl, |b, lane, ctrl, a| {
                        nibble_seq_lane(b, lane, ctrl, &bsel, a)
                    })
                }
                NibbleModeKind::UnrolledNibbles => {
                    sequential(&mut b, &io, m.lanes, 1, |b, _, _, a| {
                        nibble_unrolled(b, a, &io.b)
                    })
                }
            }
        }
        ArchKind::Wallace => {
            let io = Io::new(&mut b, n, false);
            for (i, a) in io.a.iter().enumerate() {
                let r = wallace_element(&mut b, a, &io.b);
                b.output(&format!("r{i}"), &r);
            }
            0
        }
        ArchKind::LutArray => {
            let io = Io::new(&mut b, n, false);
            lut_array(&mut b, &io);
            0
        }
    };
    let netlist = b.finish();
    netlist.validate()?;
    Ok(Design {
        arch,
        n,
        mode,
        netlist,
        compute_cycles,
    })
}

struct Io {
    a: Vec<Vec<Sig>>,
    b: Vec<Sig>,
}

impl Io {
    fn new(b: &mut Builder, n: usize, sequential: bool) -> Io {
        if sequential {
            b.reset_input("rst");
        }
        let a = (0..n).map(|i| b.input(&format!("a{i}"), 8)).collect();
        let bv = b.input("b", 8);
        Io { a, b: bv }
    }
}

struct Control {
    /// One-hot step within an element; `[One]` when an element takes one cycle.
    step: Vec<Sig>,
    /// One-hot element slot, excluding the terminal slot.
    slots: Vec<Sig>,
    done: Sig,
    /// High in the last step of an element.
    last: Sig,
}

fn control(b: &mut Builder, steps: usize, slots: usize) -> Control {
    let step = if steps == 1 {
        vec![Sig::One]
    } else {
        let r = b.reg("step", steps, 1);
        let q = r.sigs();
        let d: Vec<Sig> = (0..steps).map(|j| q[(j + steps - 1) % steps]).collect();
        b.connect(&r, &d);
        q
    };
    let last = step[steps - 1];
    let r = b.reg("elem", slots + 1, 1);
    let e = r.sigs();
    let not_last = b.not(last);
    let d: Vec<Sig> = (0..=slots)
        .map(|i| {
            let stay = if i == slots {
                e[i]
            } else {
                b.and(e[i], not_last)
            };
            let enter = if i == 0 {
                Sig::Zero
            } else {
                b.and(e[i - 1], last)
            };
            b.or(stay, enter)
        })
        .collect();
    b.connect(&r, &d);
    Control {
        step,
        slots: e[..slots].to_vec(),
        done: e[slots],
        last,
    }
}

fn sequential(
    b: &mut Builder,
    io: &Io,
    lanes: usize,
    steps: usize,
    datapath: impl FnMut(&mut Builder, usize, &Control, &[Sig]) -> Vec<Sig>,
) -> u64 {
    let ctrl = control(b, steps, io.a.len().div_ceil(lanes));
    sequential_with(b, io, lanes, ctrl, datapath)
}

/// Instantiates `lanes` copies of a datapath, each fed by a one-hot element
/// selector and writing its result into per-element output registers.
fn sequential_with(
    b: &mut Builder,
    io: &Io,
    lanes: usize,
    ctrl: Control,
    mut datapath: impl FnMut(&mut Builder, usize, &Control, &[Sig]) -> Vec<Sig>,
) -> u64 {
    let n = io.a.len();
    let slots = ctrl.slots.len();
    let steps = ctrl.step.len() as u64;
    let mut results: Vec<Option<Vec<Sig>>> = vec![None; n];
    for lane in 0..lanes {
        let elems: Vec<usize> = (0..slots)
            .map(|s| s * lanes + lane)
            .filter(|&e| e < n)
            .collect();
        let a_sel: Vec<Sig> = if elems.len() == 1 {
            io.a[elems[0]].clone()
        } else {
            (0..8)
                .map(|j| {
                    let data: Vec<Sig> = elems.iter().map(|&e| io.a[e][j]).collect();
                    b.one_hot_select(&ctrl.slots[..elems.len()], &data)
                })
                .collect()
        };
        let value = datapath(b, lane, &ctrl, &a_sel);
        for (slot, &e) in elems.iter().enumerate() {
            let we = b.and(ctrl.slots[slot], ctrl.last);
            let r = b.reg(&format!("r{e}_reg"), PRODUCT_BITS, 0);
            let q = r.sigs();
            let d: Vec<Sig> = (0..PRODUCT_BITS)
                .map(|j| b.mux(we, q[j], value.get(j).copied().unwrap_or(Sig::Zero)))
                .collect();
            b.connect(&r, &d);
            results[e] = Some(q);
        }
    }
    for (i, r) in results.into_iter().enumerate() {
        b.output(
            &format!("r{i}"),
            &r.expect("every element assigned to a lane"),
        );
    }
    b.output("done", &[ctrl.done]);
    steps * slots as u64
}

/// Precompute logic for `a * n`: one AND-gated, shifted copy of `a` per
/// nibble bit, summed by the caller.
fn precompute_rows(b: &mut Builder, a: &[Sig], n: &[Sig]) -> Vec<Vec<Sig>> {
    (0..4)
        .map(|i| {
            let mut row = vec![Sig::Zero; i];
            row.extend(a.iter().map(|&x| b.and(x, n[i])));
            row
        })
        .collect()
}

fn shifted(bits: &[Sig], by: usize) -> Vec<Sig> {
    let mut v = vec![Sig::Zero; by];
    v.extend_from_slice(bits);
    v
}

fn nibble_seq_lane(
    b: &mut Builder,
    lane: usize,
    ctrl: &Control,
    bsel: &[Sig],
    a: &[Sig],
) -> Vec<Sig> {
    let phase = ctrl.step[1];
    let acc = b.reg(&format!("acc{lane}"), PRODUCT_BITS, 0);
    let q = acc.sigs();
    // Shift wiring: the multiplicand moves up a nibble for the high step.
    let a_shift: Vec<Sig> = (0..12)
        .map(|p| {
            let lo = a.get(p).copied().unwrap_or(Sig::Zero);
            let hi = p
                .checked_sub(4)
                .and_then(|k| a.get(k).copied())
                .unwrap_or(Sig::Zero);
            b.mux(phase, lo, hi)
        })
        .collect();
    let mut rows = precompute_rows(b, &a_shift, bsel);
    // The low-nibble step starts from zero.
    rows.push(q.iter().map(|&x| b.and(x, phase)).collect());
    let sum = b.csa_sum(&rows, PRODUCT_BITS);
    b.connect(&acc, &sum);
    sum
}

fn nibble_unrolled(b: &mut Builder, a: &[Sig], bv: &[Sig]) -> Vec<Sig> {
    let mut rows = precompute_rows(b, a, &bv[..4]);
    rows.extend(precompute_rows(b, &shifted(a, 4), &bv[4..]));
    b.csa_sum(&rows, PRODUCT_BITS)
}

fn shift_add_lane(io: &Io) -> impl FnMut(&mut Builder, usize, &Control, &[Sig]) -> Vec<Sig> + '_ {
    move |b, lane, ctrl, a| {
        let s0 = ctrl.step[0];
        let not_s0 = b.not(s0);
        let prod = b.reg(&format!("prod{lane}"), PRODUCT_BITS, 0);
        let q = prod.sigs();
        let x_hi: Vec<Sig> = q[8..].iter().map(|&x| b.and(x, not_s0)).collect();
        // The multiplier is loaded into the low half in the first step.
        let x_lo: Vec<Sig> = (0..8).map(|j| b.mux(s0, q[j], io.b[j])).collect();
        let addend: Vec<Sig> = a.iter().map(|&x| b.and(x, x_lo[0])).collect();
        let sum = b.add(&x_hi, &addend, Sig::Zero, 9);
        let mut next: Vec<Sig> = x_lo[1..].to_vec();
        next.push(sum[0]);
        next.extend_from_slice(&sum[1..]);
        b.connect(&prod, &next);
        next
    }
}

/// Radix-4 digit decode of the broadcast multiplier, shared by every lane.
struct BoothDecode {
    one: Sig,
    two: Sig,
    neg: Sig,
}

impl BoothDecode {
    fn new(b: &mut Builder, step: &[Sig], bv: &[Sig]) -> BoothDecode {
        let t2 = b.one_hot_select(step, &[bv[1], bv[3], bv[5], bv[7]]);
        let t1 = b.one_hot_select(step, &[bv[0], bv[2], bv[4], bv[6]]);
        let t0 = b.one_hot_select(step, &[Sig::Zero, bv[1], bv[3], bv[5]]);
        let one = b.xor(t1, t0);
        let (nt2, nt1, nt0) = (b.not(t2), b.not(t1), b.not(t0));
        let minus = b.and(t2, nt1);
        let minus = b.and(minus, nt0);
        let plus = b.and(nt2, t1);
        let plus = b.and(plus, t0);
        let two = b.or(minus, plus);
        BoothDecode { one, two, neg: t2 }
    }
}

fn booth_lane(
    b: &mut Builder,
    lane: usize,
    ctrl: &Control,
    dec: &BoothDecode,
    bv: &[Sig],
    a: &[Sig],
) -> Vec<Sig> {
    const ACC: usize = 18;
    let s0 = ctrl.step[0];
    let acc = b.reg(&format!("acc{lane}"), ACC, 0);
    let q = acc.sigs();
    // Multiplicand aligned to the current digit position.
    let x: Vec<Sig> = (0..15)
        .map(|j: usize| {
            let data: Vec<Sig> = (0..4)
                .map(|k| {
                    j.checked_sub(2 * k)
                        .and_then(|i| a.get(i).copied())
                        .unwrap_or(Sig::Zero)
                })
                .collect();
            b.one_hot_select(&ctrl.step, &data)
        })
        .collect();
    let term: Vec<Sig> = (0..ACC)
        .map(|j| {
            let xj = x.get(j).copied().unwrap_or(Sig::Zero);
            let xm = j
                .checked_sub(1)
                .and_then(|i| x.get(i).copied())
                .unwrap_or(Sig::Zero);
            let m1 = b.and(dec.one, xj);
            let m2 = b.and(dec.two, xm);
            let m = b.or(m1, m2);
            b.xor(m, dec.neg)
        })
        .collect();
    let base: Vec<Sig> = (0..ACC)
        .map(|j| {
            let corr = if (8..16).contains(&j) {
                b.and(bv[7], a[j - 8])
            } else {
                Sig::Zero
            };
            b.mux(s0, q[j], corr)
        })
        .collect();
    let sum = b.add(&base, &term, dec.neg, ACC);
    b.connect(&acc, &sum);
    sum[..PRODUCT_BITS].to_vec()
}

fn wallace_element(b: &mut Builder, a: &[Sig], bv: &[Sig]) -> Vec<Sig> {
    let mut cells = Vec::with_capacity(64);
    for &bi in &bv[..8] {
        for &aj in &a[..8] {
            cells.push(b.and(aj, bi));
        }
    }
    let rows = partial_product_rows(|i, j| cells[i * 8 + j]);
    let (rest, _) = wallace_reduce(b, rows);
    carry_propagate(b, &rest[0], &rest[1])
        .into_iter()
        .map(|s| s.unwrap_or(Sig::Zero))
        .collect()
}

/// Shannon expansion of a truth table over `vars` (LSB first), sharing
/// identical sub-functions.
fn cone(
    b: &mut Builder,
    vars: &[Sig],
    tt: u32,
    k: usize,
    cache: &mut HashMap<(u32, usize), Sig>,
) -> Sig {
    let mask = if k == 5 {
        u32::MAX
    } else {
        (1u32 << (1 << k)) - 1
    };
    let tt = tt & mask;
    if tt == 0 {
        return Sig::Zero;
    }
    if tt == mask {
        return Sig::One;
    }
    if let Some(&s) = cache.get(&(tt, k)) {
        return s;
    }
    let half = 1 << (k - 1);
    let lo = cone(b, vars, tt & ((1u32 << half) - 1), k - 1, cache);
    let hi = cone(b, vars, tt >> half, k - 1, cache);
    let s = b.mux(vars[k - 1], lo, hi);
    cache.insert((tt, k), s);
    s
}

/// Result strings for one scalar nibble as constant-logic cones; entry `a`
/// holds the eight bits of slice `a`, entry 0 is all zero.
fn res_string_logic(b: &mut Builder, nibble: &[Sig]) -> Vec<[Sig; 8]> {
    let mut cache = HashMap::new();
    (0..16u32)
        .map(|a| {
            std::array::from_fn(|t| {
                let tt = (0..16u32).fold(0, |acc, v| acc | ((((a * v) >> t) & 1) << v));
                cone(b, nibble, tt, 4, &mut cache)
            })
        })
        .collect()
}

fn select_slice(b: &mut Builder, strings: &[[Sig; 8]], a: &[Sig]) -> Vec<Sig> {
    (0..8)
        .map(|t| {
            let leaves: Vec<Sig> = strings.iter().map(|s| s[t]).collect();
            b.mux_tree(a, &leaves)
        })
        .collect()
}

fn lut_array(b: &mut Builder, io: &Io) {
    let rs0 = res_string_logic(b, &io.b[..4]);
    let rs1 = res_string_logic(b, &io.b[4..]);
    let compose = |b: &mut Builder, a: &[Sig]| -> Vec<Sig> {
        let p0 = select_slice(b, &rs0, &a[..4]);
        let p2 = select_slice(b, &rs1, &a[..4]);
        let p1 = select_slice(b, &rs0, &a[4..]);
        let p3 = select_slice(b, &rs1, &a[4..]);
        let rows = [p0, shifted(&p2, 4), shifted(&p1, 4), shifted(&p3, 8)];
        b.csa_sum(&rows, PRODUCT_BITS)
    };
    for (k, pair) in io.a.chunks(2).enumerate() {
        let out1 = compose(b, &pair[0]);
        b.output(&format!("r{}", 2 * k), &out1);
        // An odd tail leaves the block's high element unused.
        if let Some(hi) = pair.get(1) {
            let out2 = compose(b, hi);
            b.output(&format!("r{}", 2 * k + 1), &out2);
        }
    }
}

impl Design {
    pub fn is_sequential(&self) -> bool {
        self.compute_cycles > 0
    }

    /// Cycle latency of one job as counted by the cycle model.
    pub fn latency(&self) -> u64 {
        self.compute_cycles.max(1)
    }

    /// Per-cycle input vectors for one job: a reset cycle followed by
    /// `compute_cycles` cycles for sequential designs, a single vector for
    /// combinational ones.
    pub fn job_stimulus(&self, job: &VectorJob) -> Result<Vec<InputVector>> {
        if job.len() != self.n {
            return Err(Error::WidthMismatch(format!(
                "job has {} elements, design has {}",
                job.len(),
                self.n
            )));
        }
        let data: Vec<u64> = job
            .a_ops()
            .iter()
            .map(|a| u64::from(a.0))
            .chain(std::iter::once(u64::from(job.b().0)))
            .collect();
        if !self.is_sequential() {
            return Ok(vec![data]);
        }
        let with_rst = |rst: u64| std::iter::once(rst).chain(data.iter().copied()).collect();
        let mut v = vec![with_rst(1)];
        v.extend((0..self.compute_cycles).map(|_| with_rst(0)));
        Ok(v)
    }

    /// Products from one output sample.
    pub fn products(&self, sample: &[u64]) -> Vec<Product16> {
        sample[..self.n]
            .iter()
            .map(|&v| Product16(v as u16))
            .collect()
    }

    /// Runs one job through the design's own netlist.
    pub fn run_job(&self, job: &VectorJob) -> Result<Vec<Product16>> {
        let out = simulate_netlist(&self.netlist, &self.job_stimulus(job)?)?;
        Ok(self.products(out.outputs.last().expect("non-empty stimulus")))
    }

    /// Runs many jobs through `netlist`, which must share this design's port
    /// layout, 64 jobs per simulation pass.
    pub fn run_jobs_on(
        &self,
        netlist: &Netlist,
        jobs: &[VectorJob],
    ) -> Result<Vec<Vec<Product16>>> {
        if netlist.inputs.len() != self.netlist.inputs.len()
            || netlist.outputs.len() != self.netlist.outputs.len()
        {
            return Err(Error::WidthMismatch(
                "netlist port layout differs from design".into(),
            ));
        }
        let mut sim = Simulator::new(netlist)?;
        let offset = usize::from(self.is_sequential());
        let mut all = Vec::with_capacity(jobs.len());
        for batch in jobs.chunks(64) {
            for j in batch {
                if j.len() != self.n {
                    return Err(Error::WidthMismatch(format!(
                        "job has {} elements, design has {}",
                        j.len(),
                        self.n
                    )));
                }
            }
            for i in 0..self.n {
                let lanes: Vec<u64> = batch.iter().map(|j| u64::from(j.a_ops()[i].0)).collect();
                sim.set_input_lanes(offset + i, &lanes);
            }
            let lanes: Vec<u64> = batch.iter().map(|j| u64::from(j.b().0)).collect();
            sim.set_input_lanes(offset + self.n, &lanes);
            if self.is_sequential() {
                sim.set_input(0, 1);
                sim.settle();
                sim.clock();
                sim.set_input(0, 0);
                for _ in 0..self.compute_cycles {
                    sim.settle();
                    sim.clock();
                }
            }
            sim.settle();
            for lane in 0..batch.len() {
                all.push(
                    (0..self.n)
                        .map(|p| Product16(sim.output_lane(p, lane) as u16))
                        .collect(),
                );
            }
        }
        Ok(all)
    }

    pub fn run_jobs(&self, jobs: &[VectorJob]) -> Result<Vec<Vec<Product16>>> {
        self.run_jobs_on(&self.netlist, jobs)
    }

    /// Area, depth and switching activity over the given jobs, run back to
    /// back through one scalar simulation.
    pub fn cost(&self, jobs: &[VectorJob]) -> Result<CostReport> {
        let mut stimulus = Vec::new();
        for j in jobs {
            stimulus.extend(self.job_stimulus(j)?);
        }
        let toggles_total = if stimulus.is_empty() {
            0
        } else {
            simulate_netlist(&self.netlist, &stimulus)?.toggles_total
        };
        let products = (self.n * jobs.len()).max(1);
        Ok(CostReport {
            gate_equivalents: area_proxy(&self.netlist),
            depth: critical_depth(&self.netlist)?,
            toggles_total,
            toggles_per_product: toggles_total as f64 / products as f64,
            cycles: self.latency(),
        })
    }
}
