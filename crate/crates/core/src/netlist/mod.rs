// SPDX-License-Identifier: Apache-2.0

//! Gate-level realizations of every architecture.
//!
//! A [`Netlist`] is a flat list of primitive gates over numbered nets. Every
//! net has exactly one driver: a primary-input bit, a constant, or a gate
//! output. D flip-flops share one implicit clock and a synchronous reset
//! driven by a primary input; their outputs are treated as sources when
//! ordering the combinational logic.

mod arch;
mod builder;
mod cost;
mod sim;
mod verilog;

pub use arch::{build_netlist, Design};
pub use builder::{Builder, Sig};
pub use cost::{area_proxy, critical_depth, ge_weight, CostReport};
pub use sim::{simulate_netlist, InputVector, SimOutcome, Simulator};
pub use verilog::{emit_verilog, parse_verilog, PRIMITIVE_LIBRARY};

use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NetId(pub u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    And2,
    Or2,
    Xor2,
    Nand2,
    Nor2,
    Inv,
    /// Inputs `[sel, d0, d1]`; output is `d1` when `sel` is high.
    Mux2,
    /// Inputs `[a, b]`, outputs `[sum, carry]`.
    Ha,
    /// Inputs `[a, b, cin]`, outputs `[sum, cout]`.
    Fa,
    /// Input `[d]`, output `[q]`.
    Dff,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::And2,
        GateKind::Or2,
        GateKind::Xor2,
        GateKind::Nand2,
        GateKind::Nor2,
        GateKind::Inv,
        GateKind::Mux2,
        GateKind::Ha,
        GateKind::Fa,
        GateKind::Dff,
    ];

    /// `(inputs, outputs)`.
    pub fn arity(self) -> (usize, usize) {
        match self {
            GateKind::And2 | GateKind::Or2 | GateKind::Xor2 | GateKind::Nand2 | GateKind::Nor2 => {
                (2, 1)
            }
            GateKind::Inv | GateKind::Dff => (1, 1),
            GateKind::Mux2 => (3, 1),
            GateKind::Ha => (2, 2),
            GateKind::Fa => (3, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And2 => "AND2",
            GateKind::Or2 => "OR2",
            GateKind::Xor2 => "XOR2",
            GateKind::Nand2 => "NAND2",
            GateKind::Nor2 => "NOR2",
            GateKind::Inv => "INV",
            GateKind::Mux2 => "MUX2",
            GateKind::Ha => "HA",
            GateKind::Fa => "FA",
            GateKind::Dff => "DFF",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn is_sequential(self) -> bool {
        self == GateKind::Dff
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub outputs: Vec<NetId>,
    /// Reset value; only meaningful for flip-flops.
    pub init: bool,
}

/// A named bus, least significant bit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub bits: Vec<NetId>,
}

impl Port {
    pub fn width(&self) -> usize {
        self.bits.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Driver {
    Input { port: usize, bit: usize },
    Const(bool),
    Gate { gate: usize, pin: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Netlist {
    names: Vec<Option<String>>,
    constants: Vec<(NetId, bool)>,
    pub gates: Vec<Gate>,
    pub inputs: Vec<Port>,
    pub outputs: Vec<Port>,
    /// Synchronous reset shared by all flip-flops.
    pub reset: Option<NetId>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !verilog::is_keyword(s)
}

/// Names of the form `n<digits>` are reserved for auto-named nets.
pub(crate) fn is_auto_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('n') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

impl Netlist {
    pub fn new() -> Netlist {
        Netlist::default()
    }

    pub fn net_count(&self) -> usize {
        self.names.len()
    }

    pub fn add_net(&mut self, name: Option<String>) -> NetId {
        let id = NetId(self.names.len() as u32);
        self.names.push(name);
        id
    }

    pub fn add_const(&mut self, value: bool) -> NetId {
        let id = self.add_net(None);
        self.constants.push((id, value));
        id
    }

    pub fn constants(&self) -> &[(NetId, bool)] {
        &self.constants
    }

    pub fn add_input(&mut self, name: &str, width: usize) -> Vec<NetId> {
        let bits: Vec<NetId> = (0..width).map(|_| self.add_net(None)).collect();
        self.inputs.push(Port {
            name: name.to_string(),
            bits: bits.clone(),
        });
        bits
    }

    pub fn add_output(&mut self, name: &str, bits: Vec<NetId>) {
        self.outputs.push(Port {
            name: name.to_string(),
            bits,
        });
    }

    /// Adds a gate driving fresh output nets and returns them.
    pub fn add_gate(&mut self, kind: GateKind, inputs: Vec<NetId>) -> Vec<NetId> {
        let outputs: Vec<NetId> = (0..kind.arity().1).map(|_| self.add_net(None)).collect();
        self.gates.push(Gate {
            kind,
            inputs,
            outputs: outputs.clone(),
            init: false,
        });
        outputs
    }

    /// Adds a flip-flop driving an existing (so far undriven) net.
    pub fn add_dff(&mut self, d: NetId, q: NetId, init: bool) {
        self.gates.push(Gate {
            kind: GateKind::Dff,
            inputs: vec![d],
            outputs: vec![q],
            init,
        });
    }

    pub fn push_gate(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn set_name(&mut self, net: NetId, name: impl Into<String>) {
        self.names[net.index()] = Some(name.into());
    }

    pub fn name_of(&self, net: NetId) -> Option<&str> {
        self.names[net.index()].as_deref()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn dff_count(&self) -> usize {
        self.count(GateKind::Dff)
    }

    pub fn is_sequential(&self) -> bool {
        self.gates.iter().any(|g| g.kind.is_sequential())
    }

    pub fn input_port(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|p| p.name == name)
    }

    pub fn output_port(&self, name: &str) -> Option<usize> {
        self.outputs.iter().position(|p| p.name == name)
    }

    /// Driver of every net, checking that each has exactly one.
    pub fn drivers(&self) -> Result<Vec<Driver>> {
        let mut drivers: Vec<Option<Driver>> = vec![None; self.net_count()];
        let mut set = |net: NetId, d: Driver| -> Result<()> {
            let slot = drivers
                .get_mut(net.index())
                .ok_or_else(|| Error::Netlist(format!("net {} out of range", net.0)))?;
            if slot.is_some() {
                return Err(Error::Netlist(format!(
                    "net {} has multiple drivers",
                    net.0
                )));
            }
            *slot = Some(d);
            Ok(())
        };
        for (port, p) in self.inputs.iter().enumerate() {
            for (bit, &net) in p.bits.iter().enumerate() {
                set(net, Driver::Input { port, bit })?;
            }
        }
        for &(net, v) in &self.constants {
            set(net, Driver::Const(v))?;
        }
        for (gate, g) in self.gates.iter().enumerate() {
            for (pin, &net) in g.outputs.iter().enumerate() {
                set(net, Driver::Gate { gate, pin })?;
            }
        }
        drivers
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or_else(|| Error::Netlist(format!("net {i} has no driver"))))
            .collect()
    }

    /// Number of gate input pins each net feeds.
    pub fn fanout(&self) -> Vec<u32> {
        let mut f = vec![0u32; self.net_count()];
        for g in &self.gates {
            for &i in &g.inputs {
                f[i.index()] += 1;
            }
        }
        f
    }

    /// Combinational gates in evaluation order. Flip-flop outputs, inputs and
    /// constants are sources.
    pub fn levelize(&self) -> Result<Vec<usize>> {
        let drivers = self.drivers()?;
        let comb: Vec<usize> = (0..self.gates.len())
            .filter(|&i| !self.gates[i].kind.is_sequential())
            .collect();
        let mut pending = vec![0usize; self.gates.len()];
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); self.net_count()];
        for &gi in &comb {
            for &inp in &self.gates[gi].inputs {
                if let Driver::Gate { gate, .. } = drivers[inp.index()] {
                    if !self.gates[gate].kind.is_sequential() {
                        pending[gi] += 1;
                        readers[inp.index()].push(gi);
                    }
                }
            }
        }
        let mut order: Vec<usize> = comb.iter().copied().filter(|&g| pending[g] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let gi = order[head];
            head += 1;
            for &out in &self.gates[gi].outputs {
                for &r in &readers[out.index()] {
                    pending[r] -= 1;
                    if pending[r] == 0 {
                        order.push(r);
                    }
                }
            }
        }
        if order.len() != comb.len() {
            let stuck = comb.iter().find(|&&g| pending[g] > 0).expect("stuck gate");
            let net = self.gates[*stuck].outputs[0];
            return Err(Error::CombinationalCycle(self.net_label(net)));
        }
        Ok(order)
    }

    /// Checks arity, single drivers, reset presence and acyclicity.
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            let (ni, no) = g.kind.arity();
            if g.inputs.len() != ni || g.outputs.len() != no {
                return Err(Error::Netlist(format!(
                    "gate {i} ({}) has wrong arity",
                    g.kind
                )));
            }
        }
        for p in self.outputs.iter() {
            if let Some(n) = p.bits.iter().find(|n| n.index() >= self.net_count()) {
                return Err(Error::Netlist(format!(
                    "output {} uses unknown net {}",
                    p.name, n.0
                )));
            }
        }
        let drivers = self.drivers()?;
        if self.is_sequential() {
            let reset = self
                .reset
                .ok_or_else(|| Error::Netlist("flip-flops without a reset net".into()))?;
            if !matches!(drivers[reset.index()], Driver::Input { .. }) {
                return Err(Error::Netlist("reset must be a primary input".into()));
            }
        }
        let mut seen = HashMap::new();
        for p in self.inputs.iter().chain(self.outputs.iter()) {
            if !is_identifier(&p.name) || seen.insert(p.name.as_str(), ()).is_some() {
                return Err(Error::InvalidIdentifier(p.name.clone()));
            }
        }
        for name in self.names.iter().flatten() {
            if !is_identifier(name)
                || is_auto_name(name)
                || seen.insert(name.as_str(), ()).is_some()
            {
                return Err(Error::InvalidIdentifier(name.clone()));
            }
        }
        self.levelize()?;
        Ok(())
    }

    /// Name used for a net in reports and emitted text: its own name, or
    /// `n<id>`.
    pub fn net_label(&self, net: NetId) -> String {
        match &self.names[net.index()] {
            Some(n) => n.clone(),
            None => format!("n{}", net.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_double_driver_and_cycles() {
        let mut nl = Netlist::new();
        let a = nl.add_input("a", 1)[0];
        let y = nl.add_gate(GateKind::Inv, vec![a])[0];
        nl.add_output("y", vec![y]);
        assert!(nl.validate().is_ok());

        let mut bad = nl.clone();
        bad.push_gate(Gate {
            kind: GateKind::Inv,
            inputs: vec![a],
            outputs: vec![y],
            init: false,
        });
        assert!(matches!(bad.validate(), Err(Error::Netlist(_))));

        let mut cyc = Netlist::new();
        let x = cyc.add_net(None);
        let z = cyc.add_gate(GateKind::Inv, vec![x])[0];
        cyc.push_gate(Gate {
            kind: GateKind::Inv,
            inputs: vec![z],
            outputs: vec![x],
            init: false,
        });
        assert!(matches!(cyc.validate(), Err(Error::CombinationalCycle(_))));
    }

    #[test]
    fn flop_breaks_loop() {
        let mut nl = Netlist::new();
        let rst = nl.add_input("rst", 1)[0];
        nl.reset = Some(rst);
        let q = nl.add_net(Some("q".into()));
        let d = nl.add_gate(GateKind::Inv, vec![q])[0];
        nl.add_dff(d, q, false);
        nl.add_output("q_out", vec![q]);
        assert!(nl.validate().is_ok());
        assert_eq!(nl.levelize().unwrap().len(), 1);
    }

    #[test]
    fn reserved_and_invalid_names_rejected() {
        let mut nl = Netlist::new();
        let a = nl.add_input("a", 1)[0];
        let y = nl.add_gate(GateKind::Inv, vec![a])[0];
        nl.set_name(y, "n7");
        assert!(matches!(nl.validate(), Err(Error::InvalidIdentifier(_))));
        nl.set_name(y, "module");
        assert!(nl.validate().is_err());
        nl.set_name(y, "inv_out");
        assert!(nl.validate().is_ok());
    }
}
