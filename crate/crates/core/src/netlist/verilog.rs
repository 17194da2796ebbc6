// SPDX-License-Identifier: Apache-2.0

//! Structural Verilog-2001 emission and a parser for the same subset.
//!
//! Emitted text consists of the primitive library below followed by one
//! top module. Gate outputs are `wire`s, flip-flop outputs are `reg`s
//! assigned in a single `always @(posedge clk)` block with synchronous reset.
//! Unnamed nets are labelled `n<id>` and gate instances `g<index>`.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{is_auto_name, is_identifier, Driver, Gate, GateKind, NetId, Netlist};
use crate::{Error, Result};

pub const PRIMITIVE_LIBRARY: &str = "\
module AND2 (input A, input B, output Y);
  assign Y = A & B;
endmodule

module OR2 (input A, input B, output Y);
  assign Y = A | B;
endmodule

module XOR2 (input A, input B, output Y);
  assign Y = A ^ B;
endmodule

module NAND2 (input A, input B, output Y);
  assign Y = ~(A & B);
endmodule

module NOR2 (input A, input B, output Y);
  assign Y = ~(A | B);
endmodule

module INV (input A, output Y);
  assign Y = ~A;
endmodule

module MUX2 (input S, input A, input B, output Y);
  assign Y = S ? B : A;
endmodule

module HA (input A, input B, output S, output CO);
  assign S = A ^ B;
  assign CO = A & B;
endmodule

module FA (input A, input B, input CI, output S, output CO);
  assign S = A ^ B ^ CI;
  assign CO = (A & B) | (CI & (A ^ B));
endmodule
";

const KEYWORDS: &[&str] = &[
    "always",
    "and",
    "assign",
    "begin",
    "buf",
    "case",
    "casex",
    "casez",
    "default",
    "defparam",
    "else",
    "end",
    "endcase",
    "endfunction",
    "endgenerate",
    "endmodule",
    "endtask",
    "for",
    "forever",
    "function",
    "generate",
    "genvar",
    "if",
    "initial",
    "inout",
    "input",
    "integer",
    "localparam",
    "module",
    "nand",
    "negedge",
    "nor",
    "not",
    "or",
    "output",
    "parameter",
    "posedge",
    "real",
    "reg",
    "repeat",
    "signed",
    "supply0",
    "supply1",
    "task",
    "time",
    "tri",
    "wait",
    "while",
    "wire",
    "xnor",
    "xor",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn pins(kind: GateKind) -> (&'static [&'static str], &'static [&'static str]) {
    match kind {
        GateKind::Inv => (&["A"], &["Y"]),
        GateKind::Mux2 => (&["S", "A", "B"], &["Y"]),
        GateKind::Ha => (&["A", "B"], &["S", "CO"]),
        GateKind::Fa => (&["A", "B", "CI"], &["S", "CO"]),
        GateKind::Dff => (&["D"], &["Q"]),
        _ => (&["A", "B"], &["Y"]),
    }
}

fn is_instance_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('g') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

struct Refs<'a> {
    nl: &'a Netlist,
    drivers: Vec<Driver>,
}

impl Refs<'_> {
    fn of(&self, net: NetId) -> String {
        match self.drivers[net.index()] {
            Driver::Input { port, bit } => {
                let p = &self.nl.inputs[port];
                if p.width() == 1 {
                    p.name.clone()
                } else {
                    format!("{}[{bit}]", p.name)
                }
            }
            Driver::Const(v) => format!("1'b{}", u8::from(v)),
            Driver::Gate { .. } => self.nl.net_label(net),
        }
    }
}

fn range(width: usize) -> String {
    if width == 1 {
        String::new()
    } else {
        format!("[{}:0] ", width - 1)
    }
}

pub fn emit_verilog(nl: &Netlist, module_name: &str) -> Result<String> {
    if !is_identifier(module_name) || GateKind::from_name(module_name).is_some() {
        return Err(Error::InvalidIdentifier(module_name.to_string()));
    }
    nl.validate()?;
    let sequential = nl.is_sequential();
    let names = nl.inputs.iter().chain(&nl.outputs).map(|p| p.name.as_str());
    let names = names.chain((0..nl.net_count()).filter_map(|i| nl.name_of(NetId(i as u32))));
    for name in names {
        if is_instance_name(name) || (sequential && name == "clk") {
            return Err(Error::InvalidIdentifier(name.to_string()));
        }
    }
    let refs = Refs {
        nl,
        drivers: nl.drivers()?,
    };

    let mut s = String::from(PRIMITIVE_LIBRARY);
    s.push('\n');
    let mut ports: Vec<&str> = Vec::new();
    if sequential {
        ports.push("clk");
    }
    ports.extend(nl.inputs.iter().chain(&nl.outputs).map(|p| p.name.as_str()));
    let _ = writeln!(s, "module {module_name} ({});", ports.join(", "));
    if sequential {
        s.push_str("  input clk;\n");
    }
    for p in &nl.inputs {
        let _ = writeln!(s, "  input {}{};", range(p.width()), p.name);
    }
    for p in &nl.outputs {
        let _ = writeln!(s, "  output {}{};", range(p.width()), p.name);
    }
    for g in &nl.gates {
        let kw = if g.kind == GateKind::Dff {
            "reg"
        } else {
            "wire"
        };
        for &o in &g.outputs {
            let _ = writeln!(s, "  {kw} {};", nl.net_label(o));
        }
    }
    for (i, g) in nl.gates.iter().enumerate() {
        if g.kind == GateKind::Dff {
            continue;
        }
        let (ins, outs) = pins(g.kind);
        let conns: Vec<String> = ins
            .iter()
            .zip(&g.inputs)
            .chain(outs.iter().zip(&g.outputs))
            .map(|(pin, &net)| format!(".{pin}({})", refs.of(net)))
            .collect();
        let _ = writeln!(s, "  {} g{i} ({});", g.kind.name(), conns.join(", "));
    }
    for p in &nl.outputs {
        for (bit, &net) in p.bits.iter().enumerate() {
            let lhs = if p.width() == 1 {
                p.name.clone()
            } else {
                format!("{}[{bit}]", p.name)
            };
            let _ = writeln!(s, "  assign {lhs} = {};", refs.of(net));
        }
    }
    if sequential {
        let rst = refs.of(nl.reset.expect("validated"));
        let flops: Vec<&Gate> = nl
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Dff)
            .collect();
        s.push_str("  always @(posedge clk) begin\n");
        let _ = writeln!(s, "    if ({rst}) begin");
        for g in &flops {
            let _ = writeln!(
                s,
                "      {} <= 1'b{};",
                nl.net_label(g.outputs[0]),
                u8::from(g.init)
            );
        }
        s.push_str("    end else begin\n");
        for g in &flops {
            let _ = writeln!(
                s,
                "      {} <= {};",
                nl.net_label(g.outputs[0]),
                refs.of(g.inputs[0])
            );
        }
        s.push_str("    end\n  end\n");
    }
    s.push_str("endmodule\n");
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(&'static str),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    const SYMS: &[&str] = &[
        "<=", "(", ")", "[", "]", ":", ";", ",", ".", "=", "@", "&", "|", "^", "~", "?",
    ];
    let b = text.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line) = (0, 1);
    while i < b.len() {
        let c = b[i];
        if c == b'\n' {
            line += 1;
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if text[i..].starts_with("//") {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
        } else if text[i..].starts_with("/*") {
            let end = text[i + 2..].find("*/").ok_or(Error::Parse {
                line,
                msg: "unterminated comment".into(),
            })?;
            line += text[i..i + 2 + end].matches('\n').count();
            i += end + 4;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'$') {
                i += 1;
            }
            out.push((line, Tok::Ident(text[st..i].to_string())));
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'\'') {
                i += 1;
            }
            out.push((line, Tok::Num(text[st..i].to_string())));
        } else if let Some(sym) = SYMS.iter().find(|s| text[i..].starts_with(**s)) {
            out.push((line, Tok::Sym(sym)));
            i += sym.len();
        } else {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected character `{}`", c as char),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ref {
    Net(String, Option<usize>),
    Const(bool),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Input,
    Output,
    Wire,
    Reg,
}

/// `(line, cell, pin connections)`.
type Instance = (usize, GateKind, Vec<(String, Ref)>);

#[derive(Default)]
struct Module {
    name: String,
    ports: Vec<String>,
    decls: Vec<(Dir, usize, String)>,
    insts: Vec<Instance>,
    assigns: Vec<(usize, Ref, Ref)>,
    clock: Option<String>,
    reset: Option<Ref>,
    flop_init: Vec<(String, bool)>,
    flop_next: Vec<(usize, String, Ref)>,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line(),
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> Result<Tok> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.1.clone())
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn sym(&mut self, s: &str) -> Result<()> {
        match self.next()? {
            Tok::Sym(x) if x == s => Ok(()),
            t => {
                self.pos -= 1;
                self.err(format!("expected `{s}`, found {t:?}"))
            }
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        let hit = matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
            || matches!(self.peek(), Some(Tok::Ident(x)) if x == s);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn keyword(&mut self, k: &str) -> Result<()> {
        if self.eat(k) {
            Ok(())
        } else {
            self.err(format!("expected `{k}`"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            t => {
                self.pos -= 1;
                self.err(format!("expected identifier, found {t:?}"))
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        match self.next()? {
            Tok::Num(s) => match s.parse() {
                Ok(v) => Ok(v),
                Err(_) => self.err(format!("bad number `{s}`")),
            },
            t => {
                self.pos -= 1;
                self.err(format!("expected number, found {t:?}"))
            }
        }
    }

    fn reference(&mut self) -> Result<Ref> {
        match self.next()? {
            Tok::Num(s) => match s.as_str() {
                "1'b0" => Ok(Ref::Const(false)),
                "1'b1" => Ok(Ref::Const(true)),
                _ => {
                    self.pos -= 1;
                    self.err(format!("unsupported literal `{s}`"))
                }
            },
            Tok::Ident(name) => {
                let bit = if self.eat("[") {
                    let b = self.number()?;
                    self.sym("]")?;
                    Some(b)
                } else {
                    None
                };
                Ok(Ref::Net(name, bit))
            }
            t => {
                self.pos -= 1;
                self.err(format!("expected net reference, found {t:?}"))
            }
        }
    }

    fn skip_module(&mut self) -> Result<()> {
        loop {
            if let Tok::Ident(s) = self.next()? {
                if s == "endmodule" {
                    return Ok(());
                }
            }
        }
    }

    fn module(&mut self) -> Result<Module> {
        let mut m = Module {
            name: self.ident()?,
            ..Module::default()
        };
        self.sym("(")?;
        if !self.eat(")") {
            loop {
                m.ports.push(self.ident()?);
                if self.eat(")") {
                    break;
                }
                self.sym(",")?;
            }
        }
        self.sym(";")?;
        loop {
            let line = self.line();
            let word = self.ident()?;
            match word.as_str() {
                "endmodule" => return Ok(m),
                "input" | "output" | "wire" | "reg" => {
                    let dir = match word.as_str() {
                        "input" => Dir::Input,
                        "output" => Dir::Output,
                        "wire" => Dir::Wire,
                        _ => Dir::Reg,
                    };
                    let width = if self.eat("[") {
                        let hi = self.number()?;
                        self.sym(":")?;
                        if self.number()? != 0 {
                            return self.err("bus ranges must end at 0");
                        }
                        self.sym("]")?;
                        hi + 1
                    } else {
                        1
                    };
                    loop {
                        m.decls.push((dir, width, self.ident()?));
                        if self.eat(";") {
                            break;
                        }
                        self.sym(",")?;
                    }
                }
                "assign" => {
                    let lhs = self.reference()?;
                    self.sym("=")?;
                    let rhs = self.reference()?;
                    self.sym(";")?;
                    m.assigns.push((line, lhs, rhs));
                }
                "always" => self.always(&mut m)?,
                other => {
                    let Some(kind) = GateKind::from_name(other).filter(|k| *k != GateKind::Dff)
                    else {
                        return Err(Error::Parse {
                            line,
                            msg: format!("unknown statement or cell `{other}`"),
                        });
                    };
                    self.ident()?;
                    self.sym("(")?;
                    let mut conns = Vec::new();
                    loop {
                        self.sym(".")?;
                        let pin = self.ident()?;
                        self.sym("(")?;
                        conns.push((pin, self.reference()?));
                        self.sym(")")?;
                        if self.eat(")") {
                            break;
                        }
                        self.sym(",")?;
                    }
                    self.sym(";")?;
                    m.insts.push((line, kind, conns));
                }
            }
        }
    }

    fn always(&mut self, m: &mut Module) -> Result<()> {
        if m.clock.is_some() {
            return self.err("only one always block is supported");
        }
        self.sym("@")?;
        self.sym("(")?;
        self.keyword("posedge")?;
        m.clock = Some(self.ident()?);
        self.sym(")")?;
        self.keyword("begin")?;
        self.keyword("if")?;
        self.sym("(")?;
        m.reset = Some(self.reference()?);
        self.sym(")")?;
        self.keyword("begin")?;
        while !self.eat("end") {
            let q = self.ident()?;
            self.sym("<=")?;
            let v = match self.reference()? {
                Ref::Const(v) => v,
                Ref::Net(..) => return self.err("reset values must be constants"),
            };
            self.sym(";")?;
            m.flop_init.push((q, v));
        }
        self.keyword("else")?;
        self.keyword("begin")?;
        while !self.eat("end") {
            let line = self.line();
            let q = self.ident()?;
            self.sym("<=")?;
            let d = self.reference()?;
            self.sym(";")?;
            m.flop_next.push((line, q, d));
        }
        self.keyword("end")
    }
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        msg: msg.into(),
    })
}

/// Parses text produced by [`emit_verilog`]: modules named after library
/// primitives are skipped and the last remaining module becomes the netlist.
pub fn parse_verilog(text: &str) -> Result<Netlist> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut top = None;
    while p.peek().is_some() {
        p.keyword("module")?;
        let is_primitive =
            matches!(p.peek(), Some(Tok::Ident(n)) if GateKind::from_name(n).is_some());
        if is_primitive {
            p.skip_module()?;
        } else {
            top = Some(p.module()?);
        }
    }
    match top {
        Some(m) => build(m),
        None => perr(p.line(), "no top module"),
    }
}

fn build(m: Module) -> Result<Netlist> {
    let mut nl = Netlist::new();
    let mut decl: HashMap<&str, (Dir, usize)> = HashMap::new();
    for (dir, width, name) in &m.decls {
        let prev = decl.insert(name.as_str(), (*dir, *width));
        // A port may be redeclared as `wire` or `reg`.
        if let Some(prev) = prev {
            if prev.0 != Dir::Output || !matches!(dir, Dir::Wire | Dir::Reg) {
                return perr(0, format!("`{name}` declared twice"));
            }
        }
    }
    let clock = m.clock.as_deref();
    let mut nets: HashMap<String, Vec<NetId>> = HashMap::new();
    for port in &m.ports {
        match decl.get(port.as_str()) {
            Some((Dir::Input, w)) => {
                if Some(port.as_str()) != clock {
                    nets.insert(port.clone(), nl.add_input(port, *w));
                }
            }
            Some((Dir::Output, _)) => {}
            _ => return perr(0, format!("port `{port}` has no direction")),
        }
    }
    for (dir, width, name) in &m.decls {
        if matches!(dir, Dir::Wire | Dir::Reg) {
            if *width != 1 {
                return perr(0, format!("`{name}`: only scalar wires are supported"));
            }
            let label = (!is_auto_name(name)).then(|| name.clone());
            nets.insert(name.clone(), vec![nl.add_net(label)]);
        }
    }
    let mut consts: [Option<NetId>; 2] = [None, None];
    let mut resolve = |nl: &mut Netlist, r: &Ref, line: usize| -> Result<NetId> {
        match r {
            Ref::Const(v) => {
                let slot = &mut consts[usize::from(*v)];
                Ok(*slot.get_or_insert_with(|| nl.add_const(*v)))
            }
            Ref::Net(name, bit) => {
                let Some(bits) = nets.get(name) else {
                    return perr(line, format!("undeclared net `{name}`"));
                };
                match (bit, bits.len()) {
                    (None, 1) => Ok(bits[0]),
                    (Some(b), w) if *b < w => Ok(bits[*b]),
                    _ => perr(line, format!("bad select on `{name}`")),
                }
            }
        }
    };
    for (line, kind, conns) in &m.insts {
        let (ins, outs) = pins(*kind);
        let find = |pin: &str| conns.iter().find(|c| c.0 == pin).map(|c| &c.1);
        if conns.len() != ins.len() + outs.len() {
            return perr(
                *line,
                format!(
                    "{} needs {} connections",
                    kind.name(),
                    ins.len() + outs.len()
                ),
            );
        }
        let mut collect = |nl: &mut Netlist, names: &[&str]| -> Result<Vec<NetId>> {
            names
                .iter()
                .map(|pin| match find(pin) {
                    Some(r) => resolve(nl, r, *line),
                    None => perr(*line, format!("missing pin {pin}")),
                })
                .collect()
        };
        let inputs = collect(&mut nl, ins)?;
        let outputs = collect(&mut nl, outs)?;
        nl.push_gate(Gate {
            kind: *kind,
            inputs,
            outputs,
            init: false,
        });
    }
    let init: HashMap<&str, bool> = m.flop_init.iter().map(|(q, v)| (q.as_str(), *v)).collect();
    if init.len() != m.flop_next.len() {
        return perr(0, "reset and next-state assignments differ");
    }
    for (line, q, d) in &m.flop_next {
        let Some(&v) = init.get(q.as_str()) else {
            return perr(*line, format!("`{q}` has no reset value"));
        };
        if decl.get(q.as_str()).map(|d| d.0) != Some(Dir::Reg) {
            return perr(*line, format!("`{q}` is not a reg"));
        }
        let q = resolve(&mut nl, &Ref::Net(q.clone(), None), *line)?;
        let d = resolve(&mut nl, d, *line)?;
        nl.add_dff(d, q, v);
    }
    if let Some(r) = &m.reset {
        nl.reset = Some(resolve(&mut nl, r, 0)?);
    }
    let mut out_bits: HashMap<&str, Vec<Option<NetId>>> = HashMap::new();
    for (line, lhs, rhs) in &m.assigns {
        let Ref::Net(name, bit) = lhs else {
            return perr(*line, "cannot assign to a constant");
        };
        let Some(&(Dir::Output, w)) = decl.get(name.as_str()) else {
            return perr(*line, format!("`{name}` is not an output"));
        };
        let slots = out_bits
            .entry(name.as_str())
            .or_insert_with(|| vec![None; w]);
        let b = match (bit, w) {
            (None, 1) => 0,
            (Some(b), w) if *b < w => *b,
            _ => return perr(*line, format!("bad select on `{name}`")),
        };
        let net = resolve(&mut nl, rhs, *line)?;
        if slots[b].replace(net).is_some() {
            return perr(*line, format!("`{name}` bit {b} assigned twice"));
        }
    }
    for port in &m.ports {
        if let Some((Dir::Output, w)) = decl.get(port.as_str()) {
            let bits = out_bits
                .remove(port.as_str())
                .unwrap_or_else(|| vec![None; *w]);
            let bits: Option<Vec<NetId>> = bits.into_iter().collect();
            match bits {
                Some(b) => nl.add_output(port, b),
                None => return perr(0, format!("output `{port}` not fully assigned")),
            }
        }
    }
    let _ = m.name;
    nl.validate()?;
    Ok(nl)
}

#[cfg(test)]
mod tests {
    use super::super::{simulate_netlist, Builder, Sig};
    use super::*;

    #[test]
    fn empty_netlist_is_a_legal_module() {
        let text = emit_verilog(&Netlist::new(), "top").unwrap();
        assert!(text.ends_with("module top ();\nendmodule\n"));
        let back = parse_verilog(&text).unwrap();
        assert_eq!(back, Netlist::new());
    }

    #[test]
    fn rejects_bad_identifiers() {
        let nl = Netlist::new();
        for bad in ["", "1top", "module", "a-b", "FA"] {
            assert!(matches!(
                emit_verilog(&nl, bad),
                Err(Error::InvalidIdentifier(_))
            ));
        }
    }

    #[test]
    fn round_trip_counter() {
        let mut b = Builder::new();
        b.reset_input("rst");
        let en = b.input("en", 1)[0];
        let r = b.reg("cnt", 4, 5);
        let q = r.sigs();
        let next = b.add(&q, &[en], Sig::Zero, 4);
        b.connect(&r, &next);
        b.output("count", &q);
        b.output("zero", &[Sig::Zero]);
        let nl = b.finish();
        let text = emit_verilog(&nl, "counter").unwrap();
        assert!(!text.contains('\r'));
        assert!(text.contains("cnt_0 <= 1'b1;"));
        let back = parse_verilog(&text).unwrap();
        let stim: Vec<Vec<u64>> = (0..20)
            .map(|k| vec![u64::from(k == 0), (k % 3) & 1])
            .collect();
        assert_eq!(
            simulate_netlist(&nl, &stim).unwrap().outputs,
            simulate_netlist(&back, &stim).unwrap().outputs
        );
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_verilog("module top (a);\n  input a;\n  FOO g0 (.A(a));\nendmodule\n")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(parse_verilog("module top (y);\n output y;\nendmodule\n").is_err());
    }
}
