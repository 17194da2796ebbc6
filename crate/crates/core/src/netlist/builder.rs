// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::ops::Range;

use super::{GateKind, NetId, Netlist};
use crate::baseline::{wallace_reduce, BitAlgebra, Row};

/// A signal during construction: a constant or a net. Constants are folded
/// away wherever a gate would be redundant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sig {
    Zero,
    One,
    Net(NetId),
}

impl Sig {
    pub fn constant(v: bool) -> Sig {
        if v {
            Sig::One
        } else {
            Sig::Zero
        }
    }

    pub fn as_const(self) -> Option<bool> {
        match self {
            Sig::Zero => Some(false),
            Sig::One => Some(true),
            Sig::Net(_) => None,
        }
    }
}

/// Registers declared ahead of their next-state logic.
#[derive(Clone, Debug)]
pub struct Reg {
    pub q: Vec<NetId>,
    init: Vec<bool>,
}

impl Reg {
    pub fn sigs(&self) -> Vec<Sig> {
        self.q.iter().map(|&n| Sig::Net(n)).collect()
    }
}

/// Netlist construction with light constant folding and inverter sharing.
#[derive(Debug, Default)]
pub struct Builder {
    nl: Netlist,
    inverters: HashMap<NetId, NetId>,
    consts: [Option<NetId>; 2],
}

impl Builder {
    pub fn new() -> Builder {
        Builder::default()
    }

    pub fn netlist(&self) -> &Netlist {
        &self.nl
    }

    pub fn finish(self) -> Netlist {
        self.nl
    }

    pub fn input(&mut self, name: &str, width: usize) -> Vec<Sig> {
        self.nl
            .add_input(name, width)
            .into_iter()
            .map(Sig::Net)
            .collect()
    }

    /// Declares the 1-bit reset input.
    pub fn reset_input(&mut self, name: &str) -> Sig {
        let net = self.nl.add_input(name, 1)[0];
        self.nl.reset = Some(net);
        Sig::Net(net)
    }

    pub fn output(&mut self, name: &str, bits: &[Sig]) {
        let nets = bits.iter().map(|&s| self.net(s)).collect();
        self.nl.add_output(name, nets);
    }

    /// Materializes a signal as a net, creating a shared constant if needed.
    pub fn net(&mut self, s: Sig) -> NetId {
        match s {
            Sig::Net(n) => n,
            Sig::Zero | Sig::One => {
                let v = s == Sig::One;
                let slot = usize::from(v);
                match self.consts[slot] {
                    Some(n) => n,
                    None => {
                        let n = self.nl.add_const(v);
                        self.consts[slot] = Some(n);
                        n
                    }
                }
            }
        }
    }

    fn gate1(&mut self, kind: GateKind, inputs: &[NetId]) -> Sig {
        Sig::Net(self.nl.add_gate(kind, inputs.to_vec())[0])
    }

    pub fn not(&mut self, a: Sig) -> Sig {
        match a {
            Sig::Zero => Sig::One,
            Sig::One => Sig::Zero,
            Sig::Net(n) => {
                if let Some(&inv) = self.inverters.get(&n) {
                    return Sig::Net(inv);
                }
                let out = self.nl.add_gate(GateKind::Inv, vec![n])[0];
                self.inverters.insert(n, out);
                self.inverters.insert(out, n);
                Sig::Net(out)
            }
        }
    }

    pub fn and(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Zero, _) | (_, Sig::Zero) => Sig::Zero,
            (Sig::One, x) | (x, Sig::One) => x,
            (Sig::Net(x), Sig::Net(y)) if x == y => a,
            (Sig::Net(x), Sig::Net(y)) => self.gate1(GateKind::And2, &[x, y]),
        }
    }

    pub fn or(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::One, _) | (_, Sig::One) => Sig::One,
            (Sig::Zero, x) | (x, Sig::Zero) => x,
            (Sig::Net(x), Sig::Net(y)) if x == y => a,
            (Sig::Net(x), Sig::Net(y)) => self.gate1(GateKind::Or2, &[x, y]),
        }
    }

    pub fn xor(&mut self, a: Sig, b: Sig) -> Sig {
        match (a, b) {
            (Sig::Zero, x) | (x, Sig::Zero) => x,
            (Sig::One, x) | (x, Sig::One) => self.not(x),
            (Sig::Net(x), Sig::Net(y)) if x == y => Sig::Zero,
            (Sig::Net(x), Sig::Net(y)) => self.gate1(GateKind::Xor2, &[x, y]),
        }
    }

    /// `sel ? d1 : d0`.
    pub fn mux(&mut self, sel: Sig, d0: Sig, d1: Sig) -> Sig {
        if d0 == d1 {
            return d0;
        }
        match (sel, d0, d1) {
            (Sig::Zero, _, _) => d0,
            (Sig::One, _, _) => d1,
            (_, Sig::Zero, Sig::One) => sel,
            (_, Sig::One, Sig::Zero) => self.not(sel),
            (_, Sig::Zero, x) => self.and(sel, x),
            (_, x, Sig::One) => self.or(sel, x),
            (_, x, Sig::Zero) => {
                let ns = self.not(sel);
                self.and(ns, x)
            }
            (_, Sig::One, x) => {
                let ns = self.not(sel);
                self.or(ns, x)
            }
            (Sig::Net(s), Sig::Net(x), Sig::Net(y)) => self.gate1(GateKind::Mux2, &[s, x, y]),
        }
    }

    /// Returns `(sum, carry)`.
    pub fn half_add(&mut self, a: Sig, b: Sig) -> (Sig, Sig) {
        match (a, b) {
            (Sig::Zero, x) | (x, Sig::Zero) => (x, Sig::Zero),
            (Sig::One, x) | (x, Sig::One) => (self.not(x), x),
            (Sig::Net(x), Sig::Net(y)) => {
                let o = self.nl.add_gate(GateKind::Ha, vec![x, y]);
                (Sig::Net(o[0]), Sig::Net(o[1]))
            }
        }
    }

    /// Returns `(sum, carry)`.
    pub fn full_add(&mut self, a: Sig, b: Sig, c: Sig) -> (Sig, Sig) {
        let mut nets = Vec::with_capacity(3);
        let mut ones = 0;
        for s in [a, b, c] {
            match s {
                Sig::Zero => {}
                Sig::One => ones += 1,
                Sig::Net(_) => nets.push(s),
            }
        }
        match (nets.len(), ones) {
            (3, 0) => {
                let ids: Vec<NetId> = nets.iter().map(|&s| self.net(s)).collect();
                let o = self.nl.add_gate(GateKind::Fa, ids);
                (Sig::Net(o[0]), Sig::Net(o[1]))
            }
            (2, 0) => self.half_add(nets[0], nets[1]),
            // x + y + 1: sum = xnor, carry = or.
            (2, 1) => {
                let x = self.xor(nets[0], nets[1]);
                let s = self.not(x);
                let c = self.or(nets[0], nets[1]);
                (s, c)
            }
            (1, 0) => (nets[0], Sig::Zero),
            (1, 1) => self.half_add(nets[0], Sig::One),
            (1, 2) => (nets[0], Sig::One),
            (0, k) => (Sig::constant(k % 2 == 1), Sig::constant(k >= 2)),
            _ => unreachable!("three inputs"),
        }
    }

    /// Ripple-carry `x + y + cin`, truncated to `width` bits. Missing
    /// operand bits are zero.
    pub fn add(&mut self, x: &[Sig], y: &[Sig], cin: Sig, width: usize) -> Vec<Sig> {
        self.ripple(x, y, cin, 0..width).0
    }

    fn ripple(&mut self, x: &[Sig], y: &[Sig], cin: Sig, bits: Range<usize>) -> (Vec<Sig>, Sig) {
        let mut carry = cin;
        let sum = bits
            .map(|i| {
                let xi = x.get(i).copied().unwrap_or(Sig::Zero);
                let yi = y.get(i).copied().unwrap_or(Sig::Zero);
                let (s, c) = self.full_add(xi, yi, carry);
                carry = c;
                s
            })
            .collect();
        (sum, carry)
    }

    /// Carry-select `x + y + cin` in 4-bit ripple blocks, truncated to
    /// `width` bits.
    pub fn add_select(&mut self, x: &[Sig], y: &[Sig], cin: Sig, width: usize) -> Vec<Sig> {
        const BLOCK: usize = 4;
        let mut out = Vec::with_capacity(width);
        let mut carry = cin;
        for lo in (0..width).step_by(BLOCK) {
            let bits = lo..(lo + BLOCK).min(width);
            if carry.as_const().is_some() {
                let (s, c) = self.ripple(x, y, carry, bits);
                out.extend(s);
                carry = c;
                continue;
            }
            let (s0, c0) = self.ripple(x, y, Sig::Zero, bits.clone());
            let (s1, c1) = self.ripple(x, y, Sig::One, bits);
            for (a, b) in s0.into_iter().zip(s1) {
                out.push(self.mux(carry, a, b));
            }
            carry = self.mux(carry, c0, c1);
        }
        out
    }

    /// Sum of several rows: carry-save reduction to two rows, then a
    /// carry-select adder. Result truncated to `width` bits.
    pub fn csa_sum(&mut self, rows: &[Vec<Sig>], width: usize) -> Vec<Sig> {
        let rows: Vec<Row<Sig>> = rows
            .iter()
            .map(|r| {
                (0..width)
                    .map(|i| r.get(i).copied().filter(|&s| s != Sig::Zero))
                    .collect()
            })
            .collect();
        let (rest, _) = wallace_reduce(self, rows);
        let flat = |r: Option<&Row<Sig>>| -> Vec<Sig> {
            r.map_or_else(Vec::new, |r| {
                r.iter().map(|s| s.unwrap_or(Sig::Zero)).collect()
            })
        };
        let (x, y) = (flat(rest.first()), flat(rest.get(1)));
        self.add_select(&x, &y, Sig::Zero, width)
    }

    /// OR of the per-slot ANDs; `sel` is one-hot.
    pub fn one_hot_select(&mut self, sel: &[Sig], data: &[Sig]) -> Sig {
        let terms: Vec<Sig> = sel
            .iter()
            .zip(data)
            .map(|(&s, &d)| self.and(s, d))
            .collect();
        self.or_tree(&terms)
    }

    pub fn or_tree(&mut self, terms: &[Sig]) -> Sig {
        match terms.len() {
            0 => Sig::Zero,
            1 => terms[0],
            n => {
                let (l, r) = terms.split_at(n / 2);
                let l = self.or_tree(l);
                let r = self.or_tree(r);
                self.or(l, r)
            }
        }
    }

    /// Binary mux tree; `sel` is LSB first and `leaves.len() == 1 << sel.len()`.
    pub fn mux_tree(&mut self, sel: &[Sig], leaves: &[Sig]) -> Sig {
        debug_assert_eq!(leaves.len(), 1 << sel.len());
        let mut level = leaves.to_vec();
        for &s in sel {
            level = level
                .chunks(2)
                .map(|pair| self.mux(s, pair[0], pair[1]))
                .collect();
        }
        level[0]
    }

    /// Declares a bank of flip-flops named `name_<bit>`.
    pub fn reg(&mut self, name: &str, width: usize, init: u64) -> Reg {
        let q = (0..width)
            .map(|i| self.nl.add_net(Some(format!("{name}_{i}"))))
            .collect();
        Reg {
            q,
            init: (0..width).map(|i| i < 64 && (init >> i) & 1 == 1).collect(),
        }
    }

    /// Closes a register's loop with its next-state logic.
    pub fn connect(&mut self, reg: &Reg, d: &[Sig]) {
        assert_eq!(reg.q.len(), d.len(), "register width mismatch");
        for ((&q, &init), &d) in reg.q.iter().zip(&reg.init).zip(d) {
            let d = self.net(d);
            self.nl.add_dff(d, q, init);
        }
    }
}

impl BitAlgebra for Builder {
    type Bit = Sig;

    fn full_add(&mut self, a: Sig, b: Sig, c: Sig) -> (Sig, Sig) {
        Builder::full_add(self, a, b, c)
    }

    fn half_add(&mut self, a: Sig, b: Sig) -> (Sig, Sig) {
        Builder::half_add(self, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding() {
        let mut b = Builder::new();
        let x = b.input("x", 1)[0];
        assert_eq!(b.and(x, Sig::One), x);
        assert_eq!(b.and(x, Sig::Zero), Sig::Zero);
        assert_eq!(b.mux(Sig::One, Sig::Zero, x), x);
        assert_eq!(b.mux(x, Sig::Zero, Sig::One), x);
        let nx = b.not(x);
        assert_eq!(b.not(nx), x);
        assert_eq!(b.netlist().count(GateKind::Inv), 1);
        assert_eq!(b.full_add(x, Sig::Zero, Sig::Zero), (x, Sig::Zero));
        assert_eq!(b.netlist().gates.len(), 1);
    }

    #[test]
    fn ripple_adder_uses_full_adders() {
        let mut b = Builder::new();
        let x = b.input("x", 8);
        let y = b.input("y", 8);
        let c = b.input("c", 1)[0];
        let s = b.add(&x, &y, c, 8);
        b.output("s", &s);
        let nl = b.finish();
        assert_eq!(nl.count(GateKind::Fa), 8);
        assert_eq!(nl.gates.len(), 8);
    }

    #[test]
    fn fast_adders_match_ripple() {
        use super::super::simulate_netlist;
        let mut b = Builder::new();
        let x = b.input("x", 6);
        let y = b.input("y", 6);
        let z = b.input("z", 6);
        let c = b.input("c", 1)[0];
        let s = b.add_select(&x, &y, c, 7);
        b.output("s", &s);
        let t = b.csa_sum(&[x.clone(), y.clone(), z], 8);
        b.output("t", &t);
        let nl = b.finish();
        let mut stim = Vec::new();
        for k in 0..4096u64 {
            stim.push(vec![k & 63, k >> 6, (k * 37) & 63, k & 1]);
        }
        let out = simulate_netlist(&nl, &stim).unwrap();
        for (v, o) in stim.iter().zip(&out.outputs) {
            assert_eq!(o[0], v[0] + v[1] + v[3]);
            assert_eq!(o[1], v[0] + v[1] + v[2]);
        }
    }
}
