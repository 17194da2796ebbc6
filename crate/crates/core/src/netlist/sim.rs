// SPDX-License-Identifier: Apache-2.0

//! Levelized zero-delay two-valued simulation.
//!
//! Every net holds a `u64`: bit `k` is the net's value in lane `k`, so up to
//! 64 independent stimulus streams run at once. Scalar simulation uses lane 0
//! only. A clock cycle is: apply inputs, settle, clock edge, settle. Outputs
//! are sampled after the second settle, so a combinational design shows its
//! result in the same cycle and a sequential one shows the state after the
//! edge.

use super::{GateKind, Netlist};
use crate::{Error, Result};

/// One value per input port, in port order.
pub type InputVector = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimOutcome {
    /// One value per output port, per stimulus vector.
    pub outputs: Vec<Vec<u64>>,
    /// `Σ transitions × (1 + fanout)` over all nets.
    pub toggles_total: u64,
    /// Raw transition count of every net.
    pub net_toggles: Vec<u64>,
}

#[derive(Clone, Copy)]
struct Op {
    kind: GateKind,
    ins: [u32; 3],
    outs: [u32; 2],
}

#[derive(Clone, Copy)]
struct Flop {
    d: u32,
    q: u32,
    init: u64,
}

pub struct Simulator<'a> {
    nl: &'a Netlist,
    ops: Vec<Op>,
    flops: Vec<Flop>,
    values: Vec<u64>,
    reset: Option<u32>,
    lane_mask: u64,
    tracking: Option<Tracking>,
}

struct Tracking {
    prev: Vec<u64>,
    primed: bool,
    counts: Vec<u64>,
}

fn pack(ids: &[super::NetId]) -> [u32; 3] {
    let mut a = [0u32; 3];
    for (slot, id) in a.iter_mut().zip(ids) {
        *slot = id.0;
    }
    a
}

impl<'a> Simulator<'a> {
    pub fn new(nl: &'a Netlist) -> Result<Simulator<'a>> {
        nl.validate()?;
        let order = nl.levelize()?;
        let ops = order
            .iter()
            .map(|&gi| {
                let g = &nl.gates[gi];
                let o = pack(&g.outputs);
                Op {
                    kind: g.kind,
                    ins: pack(&g.inputs),
                    outs: [o[0], o[1]],
                }
            })
            .collect();
        let flops: Vec<Flop> = nl
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Dff)
            .map(|g| Flop {
                d: g.inputs[0].0,
                q: g.outputs[0].0,
                init: if g.init { u64::MAX } else { 0 },
            })
            .collect();
        let mut values = vec![0u64; nl.net_count()];
        for &(net, v) in nl.constants() {
            values[net.index()] = if v { u64::MAX } else { 0 };
        }
        for f in &flops {
            values[f.q as usize] = f.init;
        }
        Ok(Simulator {
            nl,
            ops,
            flops,
            values,
            reset: nl.reset.map(|n| n.0),
            lane_mask: u64::MAX,
            tracking: None,
        })
    }

    /// Restricts toggle counting to lane 0.
    pub fn scalar(mut self) -> Self {
        self.lane_mask = 1;
        self
    }

    pub fn track_toggles(mut self) -> Self {
        self.tracking = Some(Tracking {
            prev: vec![0; self.values.len()],
            primed: false,
            counts: vec![0; self.values.len()],
        });
        self
    }

    pub fn netlist(&self) -> &Netlist {
        self.nl
    }

    /// Drives a port with the same value in every lane.
    pub fn set_input(&mut self, port: usize, value: u64) {
        for (bit, &net) in self.nl.inputs[port].bits.iter().enumerate() {
            self.values[net.index()] = if (value >> bit) & 1 == 1 { u64::MAX } else { 0 };
        }
    }

    /// Drives a port with one value per lane (`values.len() <= 64`).
    pub fn set_input_lanes(&mut self, port: usize, values: &[u64]) {
        for (bit, &net) in self.nl.inputs[port].bits.iter().enumerate() {
            let word = values
                .iter()
                .enumerate()
                .fold(0u64, |w, (lane, v)| w | (((v >> bit) & 1) << lane));
            self.values[net.index()] = word;
        }
    }

    pub fn output(&self, port: usize) -> u64 {
        self.output_lane(port, 0)
    }

    pub fn output_lane(&self, port: usize, lane: usize) -> u64 {
        self.nl.outputs[port]
            .bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (bit, &net)| {
                acc | (((self.values[net.index()] >> lane) & 1) << bit)
            })
    }

    pub fn settle(&mut self) {
        let v = &mut self.values;
        for op in &self.ops {
            let a = v[op.ins[0] as usize];
            let b = v[op.ins[1] as usize];
            let c = v[op.ins[2] as usize];
            match op.kind {
                GateKind::And2 => v[op.outs[0] as usize] = a & b,
                GateKind::Or2 => v[op.outs[0] as usize] = a | b,
                GateKind::Xor2 => v[op.outs[0] as usize] = a ^ b,
                GateKind::Nand2 => v[op.outs[0] as usize] = !(a & b),
                GateKind::Nor2 => v[op.outs[0] as usize] = !(a | b),
                GateKind::Inv => v[op.outs[0] as usize] = !a,
                GateKind::Mux2 => v[op.outs[0] as usize] = (a & c) | (!a & b),
                GateKind::Ha => {
                    v[op.outs[0] as usize] = a ^ b;
                    v[op.outs[1] as usize] = a & b;
                }
                GateKind::Fa => {
                    let t = a ^ b;
                    v[op.outs[0] as usize] = t ^ c;
                    v[op.outs[1] as usize] = (a & b) | (c & t);
                }
                GateKind::Dff => unreachable!("flops are not levelized"),
            }
        }
        if let Some(t) = self.tracking.as_mut() {
            if t.primed {
                for ((c, p), &cur) in t.counts.iter_mut().zip(t.prev.iter()).zip(v.iter()) {
                    *c += u64::from(((p ^ cur) & self.lane_mask).count_ones());
                }
            }
            t.prev.copy_from_slice(v);
            t.primed = true;
        }
    }

    /// Rising clock edge: every flop loads `d`, or its reset value when the
    /// reset input is high.
    pub fn clock(&mut self) {
        let rst = self.reset.map_or(0, |r| self.values[r as usize]);
        let next: Vec<u64> = self
            .flops
            .iter()
            .map(|f| (rst & f.init) | (!rst & self.values[f.d as usize]))
            .collect();
        for (f, q) in self.flops.iter().zip(next) {
            self.values[f.q as usize] = q;
        }
    }

    /// One full cycle with the given scalar inputs.
    pub fn cycle(&mut self, inputs: &[u64]) {
        for (port, &v) in inputs.iter().enumerate() {
            self.set_input(port, v);
        }
        self.settle();
        if !self.flops.is_empty() {
            self.clock();
            self.settle();
        }
    }

    pub fn net_toggles(&self) -> Option<&[u64]> {
        self.tracking.as_ref().map(|t| t.counts.as_slice())
    }

    /// Fanout-weighted toggle total so far.
    pub fn toggles_total(&self) -> u64 {
        let Some(t) = self.tracking.as_ref() else {
            return 0;
        };
        t.counts
            .iter()
            .zip(self.nl.fanout())
            .map(|(&c, f)| c * (1 + u64::from(f)))
            .sum()
    }
}

fn check_vector(nl: &Netlist, index: usize, v: &[u64]) -> Result<()> {
    if v.len() != nl.inputs.len() {
        return Err(Error::WidthMismatch(format!(
            "vector {index} has {} values, netlist has {} input ports",
            v.len(),
            nl.inputs.len()
        )));
    }
    for (p, &value) in nl.inputs.iter().zip(v) {
        if p.width() < 64 && value >> p.width() != 0 {
            return Err(Error::WidthMismatch(format!(
                "vector {index}: value {value:#x} exceeds {}-bit port `{}`",
                p.width(),
                p.name
            )));
        }
    }
    Ok(())
}

/// Runs the stimulus one vector per cycle and records every output sample
/// and the switching activity.
pub fn simulate_netlist(nl: &Netlist, stimulus: &[InputVector]) -> Result<SimOutcome> {
    for (i, v) in stimulus.iter().enumerate() {
        check_vector(nl, i, v)?;
    }
    let mut sim = Simulator::new(nl)?.scalar().track_toggles();
    let mut outputs = Vec::with_capacity(stimulus.len());
    for v in stimulus {
        sim.cycle(v);
        outputs.push((0..nl.outputs.len()).map(|p| sim.output(p)).collect());
    }
    Ok(SimOutcome {
        outputs,
        toggles_total: sim.toggles_total(),
        net_toggles: sim.net_toggles().expect("tracking enabled").to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{Builder, GateKind, Netlist, Sig};
    use super::*;

    fn inverter() -> Netlist {
        let mut nl = Netlist::new();
        let a = nl.add_input("a", 1)[0];
        let y = nl.add_gate(GateKind::Inv, vec![a])[0];
        nl.add_output("y", vec![y]);
        nl
    }

    #[test]
    fn inverter_toggles() {
        let nl = inverter();
        let stim: Vec<InputVector> = [0, 1, 0, 1].iter().map(|&v| vec![v]).collect();
        let out = simulate_netlist(&nl, &stim).unwrap();
        assert_eq!(out.outputs, vec![vec![1], vec![0], vec![1], vec![0]]);
        let y = nl.outputs[0].bits[0];
        assert_eq!(out.net_toggles[y.index()], 3);
        // input: 3 transitions × (1 + 1); output: 3 × (1 + 0)
        assert_eq!(out.toggles_total, 9);
    }

    #[test]
    fn constant_stimulus_has_no_toggles() {
        let mut b = Builder::new();
        let x = b.input("x", 4);
        let y = b.input("y", 4);
        let s = b.add(&x, &y, Sig::Zero, 5);
        b.output("s", &s);
        let nl = b.finish();
        let stim = vec![vec![9, 7]; 10];
        let out = simulate_netlist(&nl, &stim).unwrap();
        assert_eq!(out.toggles_total, 0);
        assert!(out.outputs.iter().all(|o| o[0] == 16));
    }

    #[test]
    fn width_mismatch() {
        let nl = inverter();
        assert!(matches!(
            simulate_netlist(&nl, &[vec![0, 1]]),
            Err(Error::WidthMismatch(_))
        ));
        assert!(matches!(
            simulate_netlist(&nl, &[vec![2]]),
            Err(Error::WidthMismatch(_))
        ));
    }

    #[test]
    fn counter_with_reset() {
        let mut b = Builder::new();
        let rst = b.reset_input("rst");
        let _ = rst;
        let r = b.reg("cnt", 3, 0);
        let q = r.sigs();
        let next = b.add(&q, &[Sig::One], Sig::Zero, 3);
        b.connect(&r, &next);
        b.output("count", &q);
        let nl = b.finish();
        let mut stim = vec![vec![1]];
        stim.extend(std::iter::repeat_n(vec![0], 9));
        let out = simulate_netlist(&nl, &stim).unwrap();
        let counts: Vec<u64> = out.outputs.iter().map(|o| o[0]).collect();
        assert_eq!(counts, vec![0, 1, 2, 3, 4, 5, 6, 7, 0, 1]);
    }
}
