//! Structural Verilog-2001 emission.
//!
//! Output is a pure function of the netlist and module name. Every net gets
//! an HDL-legal name: illegal characters become `_`, leading digits get an
//! `n_` prefix, keywords get a `_w` suffix, and a name already taken gets
//! `_1`, `_2`, ... in first-come order (ports, then nets in declaration
//! order, then instances).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::designs::DesignError;
use crate::netlist::{Cell, CellKind, Netlist, NetlistError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmitError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("`{0}` is not a legal Verilog identifier")]
    Identifier(String),
}

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
    "disable",
    "else",
    "end",
    "endcase",
    "endfunction",
    "endgenerate",
    "endmodule",
    "endtask",
    "event",
    "for",
    "force",
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
    "reg",
    "release",
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

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '$')
        && !KEYWORDS.contains(&name)
}

fn sanitize(raw: &str) -> String {
    let mut s: String = raw.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' }).collect();
    if !s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
        s.insert_str(0, "n_");
    }
    if KEYWORDS.contains(&s.as_str()) {
        s.push_str("_w");
    }
    s
}

#[derive(Default)]
struct Names {
    taken: BTreeSet<String>,
    nets: BTreeMap<String, String>,
}

impl Names {
    fn claim(&mut self, raw: &str) -> String {
        let base = sanitize(raw);
        let mut name = base.clone();
        let mut k = 1;
        while self.taken.contains(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        self.taken.insert(name.clone());
        name
    }

    fn for_netlist(netlist: &Netlist, module_name: &str) -> Self {
        let mut names = Names::default();
        names.taken.insert(module_name.to_string());
        for port in netlist.inputs().iter().chain(netlist.outputs()) {
            let name = names.claim(port);
            names.nets.insert(port.clone(), name);
        }
        for net in netlist.nets() {
            if !names.nets.contains_key(&net.id) {
                let name = names.claim(&net.id);
                names.nets.insert(net.id.clone(), name);
            }
        }
        names
    }

    fn net(&self, net: &str) -> &str {
        &self.nets[net]
    }
}

/// Ids split into text and number runs so `lut2` sorts before `lut10`.
fn natural_key(id: &str) -> Vec<(String, u64)> {
    let mut key = Vec::new();
    let mut rest = id;
    while !rest.is_empty() {
        let text_len = rest.find(|c: char| c.is_ascii_digit()).unwrap_or(rest.len());
        let (text, tail) = rest.split_at(text_len);
        let digits_len = tail.find(|c: char| !c.is_ascii_digit()).unwrap_or(tail.len());
        let (digits, tail) = tail.split_at(digits_len);
        key.push((text.to_string(), digits.parse().unwrap_or(u64::MAX)));
        rest = tail;
    }
    key
}

fn sorted_cells(netlist: &Netlist) -> Vec<&Cell> {
    let mut cells: Vec<&Cell> = netlist.cells().iter().collect();
    cells.sort_by(|a, b| natural_key(&a.id).cmp(&natural_key(&b.id)).then_with(|| a.id.cmp(&b.id)));
    cells
}

fn check(netlist: &Netlist, module_name: &str) -> Result<(), EmitError> {
    if !is_identifier(module_name) {
        return Err(EmitError::Identifier(module_name.to_string()));
    }
    let report = netlist.validate();
    if !report.is_ok() {
        return Err(NetlistError::Invalid(report).into());
    }
    Ok(())
}

pub fn emit_verilog(netlist: &Netlist, module_name: &str) -> Result<String, EmitError> {
    check(netlist, module_name)?;
    let mut names = Names::for_netlist(netlist, module_name);
    let cells = sorted_cells(netlist);
    let resources = netlist.resources();
    let ports: Vec<&String> = netlist.inputs().iter().chain(netlist.outputs()).collect();

    let mut v = String::new();
    writeln!(v, "// fabricmul structural netlist").unwrap();
    writeln!(v, "// LUT6: {}, LUT6_2: {}, CARRY4: {}", resources.lut6, resources.lut6_2, resources.carry4).unwrap();
    writeln!(v, "`timescale 1ns / 1ps").unwrap();
    writeln!(v).unwrap();
    if ports.is_empty() {
        writeln!(v, "module {module_name};").unwrap();
    } else {
        writeln!(v, "module {module_name} (").unwrap();
        for (i, port) in ports.iter().enumerate() {
            let dir = if i < netlist.inputs().len() { "input " } else { "output" };
            let sep = if i + 1 == ports.len() { "" } else { "," };
            writeln!(v, "    {dir} wire {}{sep}", names.net(port)).unwrap();
        }
        writeln!(v, ");").unwrap();
    }

    let internal: Vec<&str> =
        netlist.nets().iter().filter(|n| !ports.contains(&&n.id)).map(|n| names.net(&n.id)).collect();
    if !internal.is_empty() {
        writeln!(v).unwrap();
        for name in &internal {
            writeln!(v, "    wire {name};").unwrap();
        }
    }

    let instance_names: Vec<String> = cells.iter().map(|c| names.claim(&c.id)).collect();
    let mut body = String::new();
    let mut unconnected = Vec::new();
    for (cell, inst) in cells.iter().zip(&instance_names) {
        // open bits of a partly used CARRY4 output bus need placeholder wires
        let mut open_bits = BTreeMap::new();
        if cell.kind == CellKind::Carry4 {
            for prefix in ["CO", "O"] {
                let pins: Vec<String> = (0..4).map(|i| format!("{prefix}{i}")).collect();
                if pins.iter().any(|p| cell.pin(p).is_some()) {
                    for p in pins.into_iter().filter(|p| cell.pin(p).is_none()) {
                        let nc = names.claim(&format!("{inst}_{p}_nc"));
                        unconnected.push(nc.clone());
                        open_bits.insert(p, nc);
                    }
                }
            }
        }
        let pin = |p: &str| cell.pin(p).map(|n| names.net(n).to_string());
        match cell.kind {
            CellKind::Const0 | CellKind::Const1 => {
                let value = if cell.kind == CellKind::Const1 { "1'b1" } else { "1'b0" };
                if let Some(net) = pin("O") {
                    writeln!(body, "    // {inst}").unwrap();
                    writeln!(body, "    assign {net} = {value};").unwrap();
                }
            }
            CellKind::Lut6(init) | CellKind::Lut6_2(init) => {
                let mut conns = Vec::new();
                if cell.kind.name() == "LUT6" {
                    conns.push(format!(".O({})", pin("O").unwrap_or_default()));
                } else {
                    conns.push(format!(".O6({})", pin("O6").unwrap_or_default()));
                    conns.push(format!(".O5({})", pin("O5").unwrap_or_default()));
                }
                for i in 0..6 {
                    conns.push(format!(".I{i}({})", pin(&format!("I{i}")).expect("validated")));
                }
                writeln!(body, "    {} #(.INIT(64'h{})) {inst} (", cell.kind.name(), init.hex_digits()).unwrap();
                writeln!(body, "        {}", conns.join(", ")).unwrap();
                writeln!(body, "    );").unwrap();
            }
            CellKind::Carry4 => {
                let ci = cell.pin("CI").expect("validated");
                // chained units take carry-in on CI; chain heads take it on CYINIT
                let (ci_conn, cyinit_conn) = if netlist.is_dedicated(ci) {
                    (names.net(ci).to_string(), "1'b0".to_string())
                } else {
                    ("1'b0".to_string(), names.net(ci).to_string())
                };
                let input_bus = |prefix: &str| {
                    let bits: Vec<String> =
                        (0..4).rev().map(|i| pin(&format!("{prefix}{i}")).expect("validated")).collect();
                    format!("{{{}}}", bits.join(", "))
                };
                let output_bus = |prefix: &str| {
                    if (0..4).all(|i| cell.pin(&format!("{prefix}{i}")).is_none()) {
                        return String::new();
                    }
                    let bits: Vec<String> = (0..4)
                        .rev()
                        .map(|i| {
                            let p = format!("{prefix}{i}");
                            pin(&p).unwrap_or_else(|| open_bits[&p].clone())
                        })
                        .collect();
                    format!("{{{}}}", bits.join(", "))
                };
                let co = output_bus("CO");
                let o = output_bus("O");
                writeln!(body, "    CARRY4 {inst} (").unwrap();
                writeln!(body, "        .CO({co}), .O({o}),").unwrap();
                writeln!(body, "        .CI({ci_conn}), .CYINIT({cyinit_conn}),").unwrap();
                writeln!(body, "        .DI({}), .S({})", input_bus("DI"), input_bus("S")).unwrap();
                writeln!(body, "    );").unwrap();
            }
        }
    }

    if !unconnected.is_empty() {
        writeln!(v).unwrap();
        for name in &unconnected {
            writeln!(v, "    wire {name};").unwrap();
        }
    }
    if !body.is_empty() {
        writeln!(v).unwrap();
        v.push_str(&body);
    }
    writeln!(v, "endmodule").unwrap();
    Ok(v)
}

/// Self-checking bench sweeping every operand pair against `a * b`.
/// `module_name` is the design under test; the bench is `<module_name>_tb`.
pub fn emit_testbench(netlist: &Netlist, width: usize, module_name: &str) -> Result<String, EmitError> {
    check(netlist, module_name)?;
    crate::designs::port_convention(netlist, width)?;
    let names = Names::for_netlist(netlist, module_name);
    let vectors = 1u64 << (2 * width);
    let mut conns = Vec::new();
    for i in 0..width {
        conns.push(format!(".{}(a[{i}])", names.net(&format!("A{i}"))));
    }
    for i in 0..width {
        conns.push(format!(".{}(b[{i}])", names.net(&format!("B{i}"))));
    }
    for k in 0..2 * width {
        conns.push(format!(".{}(p[{k}])", names.net(&format!("P{k}"))));
    }
    let (w, pw) = (width, 2 * width);

    let mut v = String::new();
    writeln!(v, "`timescale 1ns / 1ps").unwrap();
    writeln!(v).unwrap();
    writeln!(v, "module {module_name}_tb;").unwrap();
    writeln!(v, "    reg  [{}:0] a, b;", w - 1).unwrap();
    writeln!(v, "    wire [{}:0] p;", pw - 1).unwrap();
    writeln!(v, "    reg  [{}:0] expected;", pw - 1).unwrap();
    writeln!(v, "    integer i, errors;").unwrap();
    writeln!(v).unwrap();
    writeln!(v, "    {module_name} dut (").unwrap();
    writeln!(v, "        {}", conns.join(",\n        ")).unwrap();
    writeln!(v, "    );").unwrap();
    writeln!(v).unwrap();
    writeln!(v, "    initial begin").unwrap();
    writeln!(v, "        errors = 0;").unwrap();
    writeln!(v, "        for (i = 0; i < {vectors}; i = i + 1) begin").unwrap();
    writeln!(v, "            {{b, a}} = i;").unwrap();
    writeln!(v, "            expected = a * b;").unwrap();
    writeln!(v, "            #1;").unwrap();
    writeln!(v, "            if (p !== expected) begin").unwrap();
    writeln!(v, "                errors = errors + 1;").unwrap();
    writeln!(v, "                $display(\"MISMATCH a=%0d b=%0d expected=%0d got=%0d\", a, b, expected, p);").unwrap();
    writeln!(v, "            end").unwrap();
    writeln!(v, "        end").unwrap();
    writeln!(v, "        if (errors == 0)").unwrap();
    writeln!(v, "            $display(\"PASS: {vectors} vectors\");").unwrap();
    writeln!(v, "        else").unwrap();
    writeln!(v, "            $display(\"FAIL: %0d errors in {vectors} vectors\", errors);").unwrap();
    writeln!(v, "        $finish;").unwrap();
    writeln!(v, "    end").unwrap();
    writeln!(v, "endmodule").unwrap();
    Ok(v)
}

/// Behavioral models of LUT6, LUT6_2 and CARRY4 for simulators without the
/// vendor primitive library. Port names and INIT indexing follow the vendor
/// primitives.
pub fn primitive_models() -> &'static str {
    include_str!("emit/primitives.v")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::NetlistBuilder;

    #[test]
    fn natural_order() {
        let mut ids = ["lut10", "lut2", "carry_b", "lut1", "carry_a", "x"];
        ids.sort_by_key(|id| natural_key(id));
        assert_eq!(ids, ["carry_a", "carry_b", "lut1", "lut2", "lut10", "x"]);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("mult4"));
        assert!(is_identifier("_x$1"));
        assert!(!is_identifier("4mult"));
        assert!(!is_identifier("wire"));
        assert!(!is_identifier("a-b"));
        assert!(!is_identifier(""));
    }

    #[test]
    fn sanitized_names_avoid_collisions() {
        let mut names = Names::default();
        assert_eq!(names.claim("a.b"), "a_b");
        assert_eq!(names.claim("a_b"), "a_b_1");
        assert_eq!(names.claim("a-b"), "a_b_2");
        assert_eq!(names.claim("3x"), "n_3x");
        assert_eq!(names.claim("module"), "module_w");
    }

    #[test]
    fn ports_only_module_has_no_instances() {
        let mut b = NetlistBuilder::new();
        b.input("x").input("y");
        let text = emit_verilog(&b.build(), "sink").unwrap();
        assert!(text.contains("module sink (\n    input  wire x,\n    input  wire y\n);"));
        assert!(!text.contains(" #("));
        assert!(!text.contains("CARRY4 "));
    }

    #[test]
    fn bad_module_name_is_rejected() {
        let b = NetlistBuilder::new();
        assert!(matches!(emit_verilog(&b.build(), "end"), Err(EmitError::Identifier(_))));
    }
}
