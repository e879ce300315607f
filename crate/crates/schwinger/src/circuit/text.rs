//! Line-oriented text serialization.
//!
//! Grammar (one item per line, tokens separated by single spaces, `#` starts
//! a comment line):
//!
//! ```text
//! circuit   := "qubits" N  register*  gate*
//! register  := "reg" NAME ROLE LIST            ROLE in data|reusable|junk
//! gate      := KIND1 Q                          KIND1 in h|s|sdg|t|tdg|x|y|z
//!            | "cnot" Q Q | "cz" Q Q | "cy" Q Q
//!            | "toffoli" Q Q Q FLAG             FLAG in compute|uncompute
//!            | "ry" Q ANGLE EPS | "rz" Q ANGLE EPS
//!            | "cry" Q Q ANGLE EPS
//!            | "mcx" LIST Q FLAG
//!            | "refl" LIST LIST                  targets, controls
//!            | "begin" NAME COST PEAK LIST  gate*  "end"
//! LIST      := "-" | Q("," Q)*
//! EPS       := "-" | float
//! COST      := "body" | "fixed=" float
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so registers and
//! gates survive a round trip exactly. Ancilla events and peaks are not
//! stored.

use super::{Circuit, Composite, CostAnnotation, Gate, Qubit, Register, Role};
use crate::error::{Error, Result};
use std::fmt::Write;

fn list(qs: &[Qubit]) -> String {
    if qs.is_empty() {
        "-".into()
    } else {
        qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn eps(e: &Option<f64>) -> String {
    match e {
        Some(v) => format!("{v:?}"),
        None => "-".into(),
    }
}

fn flag(uncompute: bool) -> &'static str {
    if uncompute {
        "uncompute"
    } else {
        "compute"
    }
}

fn write_gates(out: &mut String, gates: &[Gate]) {
    for g in gates {
        let _ = match g {
            Gate::H(q) => writeln!(out, "h {q}"),
            Gate::S(q) => writeln!(out, "s {q}"),
            Gate::Sdg(q) => writeln!(out, "sdg {q}"),
            Gate::T(q) => writeln!(out, "t {q}"),
            Gate::Tdg(q) => writeln!(out, "tdg {q}"),
            Gate::X(q) => writeln!(out, "x {q}"),
            Gate::Y(q) => writeln!(out, "y {q}"),
            Gate::Z(q) => writeln!(out, "z {q}"),
            Gate::Cnot { control, target } => writeln!(out, "cnot {control} {target}"),
            Gate::Cz { a, b } => writeln!(out, "cz {a} {b}"),
            Gate::Cy { control, target } => writeln!(out, "cy {control} {target}"),
            Gate::Toffoli { c1, c2, target, uncompute } => {
                writeln!(out, "toffoli {c1} {c2} {target} {}", flag(*uncompute))
            }
            Gate::Ry { q, angle, eps: e } => writeln!(out, "ry {q} {angle:?} {}", eps(e)),
            Gate::Rz { q, angle, eps: e } => writeln!(out, "rz {q} {angle:?} {}", eps(e)),
            Gate::ControlledRy { control, q, angle, eps: e } => {
                writeln!(out, "cry {control} {q} {angle:?} {}", eps(e))
            }
            Gate::Mcx { controls, target, uncompute } => {
                writeln!(out, "mcx {} {target} {}", list(controls), flag(*uncompute))
            }
            Gate::Reflection { qubits, controls } => writeln!(out, "refl {} {}", list(qubits), list(controls)),
            Gate::Composite(c) => {
                let cost = match c.cost {
                    CostAnnotation::Body => "body".to_string(),
                    CostAnnotation::Fixed(v) => format!("fixed={v:?}"),
                };
                let _ = writeln!(out, "begin {} {cost} {} {}", c.name, c.scratch_peak, list(&c.scratch));
                write_gates(out, &c.body);
                writeln!(out, "end")
            }
        };
    }
}

/// Serializes a circuit. Ancilla events and peaks are not stored.
pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", c.n_qubits);
    for r in &c.registers {
        let role = match r.role {
            Role::Data => "data",
            Role::Reusable => "reusable",
            Role::Junk => "junk",
        };
        let _ = writeln!(out, "reg {} {role} {}", r.name, list(&r.qubits));
    }
    write_gates(&mut out, &c.gates);
    out
}

struct Line<'a> {
    no: usize,
    toks: Vec<&'a str>,
}

impl<'a> Line<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.no, msg: msg.into() })
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.toks.len() != n {
            return self.err(format!("`{}` expects {} operands, got {}", self.toks[0], n - 1, self.toks.len() - 1));
        }
        Ok(())
    }

    fn q(&self, i: usize) -> Result<Qubit> {
        self.toks[i].parse().or_else(|_| self.err(format!("bad qubit `{}`", self.toks[i])))
    }

    fn f(&self, i: usize) -> Result<f64> {
        self.toks[i].parse().or_else(|_| self.err(format!("bad number `{}`", self.toks[i])))
    }

    fn eps(&self, i: usize) -> Result<Option<f64>> {
        if self.toks[i] == "-" {
            Ok(None)
        } else {
            self.f(i).map(Some)
        }
    }

    fn list(&self, i: usize) -> Result<Vec<Qubit>> {
        if self.toks[i] == "-" {
            return Ok(Vec::new());
        }
        self.toks[i]
            .split(',')
            .map(|s| s.parse().or_else(|_| self.err(format!("bad qubit list `{}`", self.toks[i]))))
            .collect()
    }

    fn flag(&self, i: usize) -> Result<bool> {
        match self.toks[i] {
            "compute" => Ok(false),
            "uncompute" => Ok(true),
            t => self.err(format!("bad flag `{t}`")),
        }
    }
}

fn parse_gates(lines: &[Line], pos: &mut usize, nested: bool) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    while *pos < lines.len() {
        let l = &lines[*pos];
        *pos += 1;
        let g = match l.toks[0] {
            "end" => {
                if nested {
                    return Ok(gates);
                }
                return l.err("`end` without `begin`");
            }
            k @ ("h" | "s" | "sdg" | "t" | "tdg" | "x" | "y" | "z") => {
                l.arity(2)?;
                let q = l.q(1)?;
                match k {
                    "h" => Gate::H(q),
                    "s" => Gate::S(q),
                    "sdg" => Gate::Sdg(q),
                    "t" => Gate::T(q),
                    "tdg" => Gate::Tdg(q),
                    "x" => Gate::X(q),
                    "y" => Gate::Y(q),
                    _ => Gate::Z(q),
                }
            }
            "cnot" => {
                l.arity(3)?;
                Gate::Cnot { control: l.q(1)?, target: l.q(2)? }
            }
            "cz" => {
                l.arity(3)?;
                Gate::Cz { a: l.q(1)?, b: l.q(2)? }
            }
            "cy" => {
                l.arity(3)?;
                Gate::Cy { control: l.q(1)?, target: l.q(2)? }
            }
            "toffoli" => {
                l.arity(5)?;
                Gate::Toffoli { c1: l.q(1)?, c2: l.q(2)?, target: l.q(3)?, uncompute: l.flag(4)? }
            }
            "ry" => {
                l.arity(4)?;
                Gate::Ry { q: l.q(1)?, angle: l.f(2)?, eps: l.eps(3)? }
            }
            "rz" => {
                l.arity(4)?;
                Gate::Rz { q: l.q(1)?, angle: l.f(2)?, eps: l.eps(3)? }
            }
            "cry" => {
                l.arity(5)?;
                Gate::ControlledRy { control: l.q(1)?, q: l.q(2)?, angle: l.f(3)?, eps: l.eps(4)? }
            }
            "mcx" => {
                l.arity(4)?;
                Gate::Mcx { controls: l.list(1)?, target: l.q(2)?, uncompute: l.flag(3)? }
            }
            "refl" => {
                l.arity(3)?;
                Gate::Reflection { qubits: l.list(1)?, controls: l.list(2)? }
            }
            "begin" => {
                l.arity(5)?;
                let cost = match l.toks[2] {
                    "body" => CostAnnotation::Body,
                    t => match t.strip_prefix("fixed=").and_then(|v| v.parse().ok()) {
                        Some(v) => CostAnnotation::Fixed(v),
                        None => return l.err(format!("bad cost `{t}`")),
                    },
                };
                let peak = l.toks[3].parse().or_else(|_| l.err("bad scratch peak"))?;
                let scratch = l.list(4)?;
                let name = l.toks[1].to_string();
                let body = parse_gates(lines, pos, true)?;
                Gate::Composite(Box::new(Composite { name, cost, body, scratch, scratch_peak: peak }))
            }
            k => return l.err(format!("unknown gate `{k}`")),
        };
        gates.push(g);
    }
    if nested {
        return Err(Error::Parse { line: lines.last().map_or(0, |l| l.no), msg: "unterminated `begin`".into() });
    }
    Ok(gates)
}

/// Parses the format written by [`serialize`].
pub fn parse(src: &str) -> Result<Circuit> {
    let lines: Vec<Line> = src
        .lines()
        .enumerate()
        .map(|(i, s)| Line { no: i + 1, toks: s.split_whitespace().collect() })
        .filter(|l| !l.toks.is_empty() && !l.toks[0].starts_with('#'))
        .collect();
    let first = lines.first().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
    if first.toks[0] != "qubits" {
        return first.err("expected `qubits`");
    }
    first.arity(2)?;
    let n_qubits = first.q(1)?;
    let mut pos = 1;
    let mut registers = Vec::new();
    while pos < lines.len() && lines[pos].toks[0] == "reg" {
        let l = &lines[pos];
        l.arity(4)?;
        let role = match l.toks[2] {
            "data" => Role::Data,
            "reusable" => Role::Reusable,
            "junk" => Role::Junk,
            t => return l.err(format!("bad role `{t}`")),
        };
        registers.push(Register { name: l.toks[1].to_string(), qubits: l.list(3)?, role });
        pos += 1;
    }
    let gates = parse_gates(&lines, &mut pos, false)?;
    let c = Circuit {
        n_qubits,
        registers,
        gates,
        ancilla_log: Vec::new(),
        peak_reusable: 0,
        peak_total: n_qubits,
    };
    c.validate()?;
    Ok(c)
}
