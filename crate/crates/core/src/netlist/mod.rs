//! Single-bit netlists of LUT6 / LUT6_2 / CARRY4 cells.
//!
//! A netlist is built once through [`NetlistBuilder`] and then treated as
//! immutable. Primary ports are nets whose id is the port name. Buses are a
//! naming convention (`P0`..`P7`), not a type.

mod json;
mod sim;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use petgraph::graph::DiGraph;
use serde::Serialize;
use thiserror::Error;

use crate::truthtable::Init64;

pub use json::{load, save, FORMAT_VERSION};
pub(crate) use sim::topological_order;
pub use sim::{evaluate, Simulator};

pub const LUT_INPUT_PINS: [&str; 6] = ["I0", "I1", "I2", "I3", "I4", "I5"];
pub const CARRY4_S_PINS: [&str; 4] = ["S0", "S1", "S2", "S3"];
pub const CARRY4_DI_PINS: [&str; 4] = ["DI0", "DI1", "DI2", "DI3"];
pub const CARRY4_O_PINS: [&str; 4] = ["O0", "O1", "O2", "O3"];
pub const CARRY4_CO_PINS: [&str; 4] = ["CO0", "CO1", "CO2", "CO3"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    Lut6(Init64),
    Lut6_2(Init64),
    Carry4,
    Const0,
    Const1,
}

impl CellKind {
    /// Primitive name as used in JSON and Verilog.
    pub fn name(&self) -> &'static str {
        match self {
            CellKind::Lut6(_) => "LUT6",
            CellKind::Lut6_2(_) => "LUT6_2",
            CellKind::Carry4 => "CARRY4",
            CellKind::Const0 => "CONST0",
            CellKind::Const1 => "CONST1",
        }
    }

    pub fn init(&self) -> Option<Init64> {
        match self {
            CellKind::Lut6(init) | CellKind::Lut6_2(init) => Some(*init),
            _ => None,
        }
    }

    pub fn is_lut(&self) -> bool {
        self.init().is_some()
    }

    pub fn input_pins(&self) -> &'static [&'static str] {
        match self {
            CellKind::Lut6(_) | CellKind::Lut6_2(_) => &LUT_INPUT_PINS,
            CellKind::Carry4 => &["CI", "S0", "S1", "S2", "S3", "DI0", "DI1", "DI2", "DI3"],
            CellKind::Const0 | CellKind::Const1 => &[],
        }
    }

    pub fn output_pins(&self) -> &'static [&'static str] {
        match self {
            CellKind::Lut6(_) => &["O"],
            CellKind::Lut6_2(_) => &["O6", "O5"],
            CellKind::Carry4 => &["O0", "O1", "O2", "O3", "CO0", "CO1", "CO2", "CO3"],
            CellKind::Const0 | CellKind::Const1 => &["O"],
        }
    }

    pub fn is_input_pin(&self, pin: &str) -> bool {
        self.input_pins().contains(&pin)
    }

    pub fn is_output_pin(&self, pin: &str) -> bool {
        self.output_pins().contains(&pin)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub kind: CellKind,
    /// Pin name to net id. Unused outputs are simply absent.
    pub pins: BTreeMap<String, String>,
}

impl Cell {
    pub fn pin(&self, name: &str) -> Option<&str> {
        self.pins.get(name).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    pub id: String,
    /// Hard-wired carry connection (CO3 into the next CARRY4's carry-in).
    pub dedicated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Driver {
    Input(String),
    Cell { cell: String, pin: String },
}

impl fmt::Display for Driver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Driver::Input(name) => write!(f, "input:{name}"),
            Driver::Cell { cell, pin } => write!(f, "{cell}.{pin}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Load {
    Output(String),
    Cell { cell: String, pin: String },
}

impl fmt::Display for Load {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Load::Output(name) => write!(f, "output:{name}"),
            Load::Cell { cell, pin } => write!(f, "{cell}.{pin}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Netlist {
    inputs: Vec<String>,
    outputs: Vec<String>,
    cells: Vec<Cell>,
    nets: Vec<Net>,
}

impl Netlist {
    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn nets(&self) -> &[Net] {
        &self.nets
    }

    pub fn cell(&self, id: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.id == id)
    }

    pub fn net(&self, id: &str) -> Option<&Net> {
        self.nets.iter().find(|n| n.id == id)
    }

    pub fn is_dedicated(&self, net: &str) -> bool {
        self.net(net).is_some_and(|n| n.dedicated)
    }

    pub fn connectivity(&self) -> Connectivity {
        let mut drivers: HashMap<String, Vec<Driver>> = HashMap::new();
        let mut loads: HashMap<String, Vec<Load>> = HashMap::new();
        for input in &self.inputs {
            drivers.entry(input.clone()).or_default().push(Driver::Input(input.clone()));
        }
        for cell in &self.cells {
            for (pin, net) in &cell.pins {
                if cell.kind.is_output_pin(pin) {
                    drivers
                        .entry(net.clone())
                        .or_default()
                        .push(Driver::Cell { cell: cell.id.clone(), pin: pin.clone() });
                } else {
                    loads.entry(net.clone()).or_default().push(Load::Cell { cell: cell.id.clone(), pin: pin.clone() });
                }
            }
        }
        for output in &self.outputs {
            loads.entry(output.clone()).or_default().push(Load::Output(output.clone()));
        }
        Connectivity { drivers, loads }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        let mut seen = HashSet::new();
        for cell in &self.cells {
            if !seen.insert(cell.id.as_str()) {
                violations.push(Violation::DuplicateCell(cell.id.clone()));
            }
        }
        let mut declared = HashSet::new();
        for net in &self.nets {
            if !declared.insert(net.id.as_str()) {
                violations.push(Violation::DuplicateNet(net.id.clone()));
            }
        }
        let mut ports = HashSet::new();
        for port in self.inputs.iter().chain(&self.outputs) {
            if !ports.insert(port.as_str()) {
                violations.push(Violation::DuplicatePort(port.clone()));
            }
            if !declared.contains(port.as_str()) {
                violations.push(Violation::UndeclaredPortNet(port.clone()));
            }
        }

        for cell in &self.cells {
            for (pin, net) in &cell.pins {
                if !cell.kind.is_input_pin(pin) && !cell.kind.is_output_pin(pin) {
                    violations.push(Violation::UnknownPin { cell: cell.id.clone(), pin: pin.clone() });
                } else if !declared.contains(net.as_str()) {
                    violations.push(Violation::UnknownNet {
                        cell: cell.id.clone(),
                        pin: pin.clone(),
                        net: net.clone(),
                    });
                }
            }
            for pin in cell.kind.input_pins() {
                if !cell.pins.contains_key(*pin) {
                    violations.push(Violation::DanglingPin { cell: cell.id.clone(), pin: pin.to_string() });
                }
            }
        }

        let conn = self.connectivity();
        for net in &self.nets {
            match conn.drivers(&net.id) {
                [] => violations.push(Violation::UndrivenNet(net.id.clone())),
                [_] => {}
                many => violations.push(Violation::MultipleDrivers {
                    net: net.id.clone(),
                    drivers: many.iter().map(ToString::to_string).collect(),
                }),
            }
        }

        for cycle in self.cycles() {
            violations.push(Violation::Cycle(cycle));
        }

        ValidationReport { violations }
    }

    /// Cell-level dependency edges `(driver cell index, load cell index)`.
    pub(crate) fn cell_edges(&self) -> Vec<(usize, usize)> {
        let mut driver_of: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, cell) in self.cells.iter().enumerate() {
            for (pin, net) in &cell.pins {
                if cell.kind.is_output_pin(pin) {
                    driver_of.entry(net.as_str()).or_default().push(i);
                }
            }
        }
        let mut edges = Vec::new();
        for (to, cell) in self.cells.iter().enumerate() {
            for (pin, net) in &cell.pins {
                if cell.kind.is_input_pin(pin) {
                    for &from in driver_of.get(net.as_str()).into_iter().flatten() {
                        edges.push((from, to));
                    }
                }
            }
        }
        edges
    }

    /// Strongly connected groups of cells that form combinational loops.
    fn cycles(&self) -> Vec<Vec<String>> {
        let mut graph = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = (0..self.cells.len()).map(|i| graph.add_node(i)).collect();
        let mut self_loops = HashSet::new();
        for (from, to) in self.cell_edges() {
            if from == to {
                self_loops.insert(from);
            }
            graph.add_edge(nodes[from], nodes[to], ());
        }
        let mut cycles: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&graph)
            .into_iter()
            .map(|scc| scc.into_iter().map(|n| graph[n]).collect::<Vec<_>>())
            .filter(|scc| scc.len() > 1 || self_loops.contains(&scc[0]))
            .collect();
        for scc in &mut cycles {
            scc.sort_unstable();
        }
        cycles.sort();
        cycles.into_iter().map(|scc| scc.into_iter().map(|i| self.cells[i].id.clone()).collect()).collect()
    }

    pub fn resources(&self) -> ResourceReport {
        let mut report = ResourceReport::default();
        for cell in &self.cells {
            match cell.kind {
                CellKind::Lut6(_) => report.lut6 += 1,
                CellKind::Lut6_2(_) => report.lut6_2 += 1,
                CellKind::Carry4 => report.carry4 += 1,
                CellKind::Const0 | CellKind::Const1 => {}
            }
        }
        report
    }

    /// Copy with one LUT's constant replaced.
    pub fn with_lut_init(mut self, cell_id: &str, init: Init64) -> Result<Netlist, NetlistError> {
        let cell = self
            .cells
            .iter_mut()
            .find(|c| c.id == cell_id)
            .ok_or_else(|| NetlistError::UnknownCell(cell_id.to_string()))?;
        cell.kind = match cell.kind {
            CellKind::Lut6(_) => CellKind::Lut6(init),
            CellKind::Lut6_2(_) => CellKind::Lut6_2(init),
            _ => return Err(NetlistError::NotALut(cell_id.to_string())),
        };
        Ok(self)
    }

    /// Copy with every internal (non-port) net renamed through `rename`.
    pub fn with_renamed_nets(&self, rename: impl Fn(&str) -> String) -> Netlist {
        let ports: HashSet<&str> = self.inputs.iter().chain(&self.outputs).map(String::as_str).collect();
        let map = |id: &str| if ports.contains(id) { id.to_string() } else { rename(id) };
        Netlist {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            cells: self
                .cells
                .iter()
                .map(|c| Cell {
                    id: c.id.clone(),
                    kind: c.kind,
                    pins: c.pins.iter().map(|(p, n)| (p.clone(), map(n))).collect(),
                })
                .collect(),
            nets: self.nets.iter().map(|n| Net { id: map(&n.id), dedicated: n.dedicated }).collect(),
        }
    }
}

/// Driver and load lists per net id.
#[derive(Debug, Clone, Default)]
pub struct Connectivity {
    drivers: HashMap<String, Vec<Driver>>,
    loads: HashMap<String, Vec<Load>>,
}

impl Connectivity {
    pub fn drivers(&self, net: &str) -> &[Driver] {
        self.drivers.get(net).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn loads(&self, net: &str) -> &[Load] {
        self.loads.get(net).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateCell(String),
    DuplicateNet(String),
    DuplicatePort(String),
    UndeclaredPortNet(String),
    UnknownPin { cell: String, pin: String },
    UnknownNet { cell: String, pin: String, net: String },
    DanglingPin { cell: String, pin: String },
    MultipleDrivers { net: String, drivers: Vec<String> },
    UndrivenNet(String),
    Cycle(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateCell(id) => write!(f, "duplicate cell id `{id}`"),
            Violation::DuplicateNet(id) => write!(f, "duplicate net id `{id}`"),
            Violation::DuplicatePort(id) => write!(f, "duplicate port `{id}`"),
            Violation::UndeclaredPortNet(id) => write!(f, "port `{id}` has no net"),
            Violation::UnknownPin { cell, pin } => write!(f, "cell `{cell}` has no pin `{pin}`"),
            Violation::UnknownNet { cell, pin, net } => write!(f, "{cell}.{pin} references undeclared net `{net}`"),
            Violation::DanglingPin { cell, pin } => write!(f, "{cell}.{pin} is not connected"),
            Violation::MultipleDrivers { net, drivers } => {
                write!(f, "net `{net}` has multiple drivers: {}", drivers.join(", "))
            }
            Violation::UndrivenNet(net) => write!(f, "net `{net}` is undriven"),
            Violation::Cycle(cells) => write!(f, "combinational cycle through {}", cells.join(" -> ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ResourceReport {
    pub lut6: usize,
    pub lut6_2: usize,
    pub carry4: usize,
}

impl ResourceReport {
    /// LUT sites used; a LUT6_2 occupies one site.
    pub fn lut_count(&self) -> usize {
        self.lut6 + self.lut6_2
    }

    pub fn carry4_count(&self) -> usize {
        self.carry4
    }
}

impl Serialize for ResourceReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let breakdown: BTreeMap<&str, usize> =
            [("LUT6", self.lut6), ("LUT6_2", self.lut6_2), ("CARRY4", self.carry4)].into_iter().collect();
        let mut s = serializer.serialize_struct("ResourceReport", 3)?;
        s.serialize_field("lut_count", &self.lut_count())?;
        s.serialize_field("carry4_count", &self.carry4)?;
        s.serialize_field("breakdown", &breakdown)?;
        s.end()
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LUT6+LUT6_2: {}, CARRY4: {}", self.lut_count(), self.carry4)?;
        write!(f, "  LUT6: {}  LUT6_2: {}  CARRY4: {}", self.lut6, self.lut6_2, self.carry4)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetlistError {
    #[error("invalid netlist: {0}")]
    Invalid(ValidationReport),
    #[error("primary input `{0}` has no value")]
    MissingInput(String),
    #[error("`{0}` is not a primary input")]
    UnknownInput(String),
    #[error("no cell `{0}`")]
    UnknownCell(String),
    #[error("cell `{0}` is not a LUT")]
    NotALut(String),
    #[error("expected {expected} input values, got {found}")]
    InputWidth { expected: usize, found: usize },
    #[error("cell order is not topological at `{0}`")]
    NotTopological(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported netlist format version {found} (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },
}

/// Incremental construction of a [`Netlist`]. Nets referenced by cells or
/// ports are declared on first use.
#[derive(Debug, Default)]
pub struct NetlistBuilder {
    netlist: Netlist,
    declared: HashSet<String>,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn net(&mut self, id: &str) -> &mut Self {
        if self.declared.insert(id.to_string()) {
            self.netlist.nets.push(Net { id: id.to_string(), dedicated: false });
        }
        self
    }

    pub fn dedicated_net(&mut self, id: &str) -> &mut Self {
        self.net(id);
        if let Some(net) = self.netlist.nets.iter_mut().find(|n| n.id == id) {
            net.dedicated = true;
        }
        self
    }

    pub fn input(&mut self, name: &str) -> &mut Self {
        self.net(name);
        self.netlist.inputs.push(name.to_string());
        self
    }

    pub fn output(&mut self, name: &str) -> &mut Self {
        self.net(name);
        self.netlist.outputs.push(name.to_string());
        self
    }

    pub fn cell<'a>(
        &mut self,
        id: &str,
        kind: CellKind,
        pins: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> &mut Self {
        let pins: BTreeMap<String, String> = pins.into_iter().map(|(p, n)| (p.to_string(), n.to_string())).collect();
        for net in pins.values() {
            self.net(net);
        }
        self.netlist.cells.push(Cell { id: id.to_string(), kind, pins });
        self
    }

    pub fn lut6(&mut self, id: &str, init: Init64, inputs: [&str; 6], o: &str) -> &mut Self {
        let pins = LUT_INPUT_PINS.into_iter().zip(inputs).chain([("O", o)]);
        self.cell(id, CellKind::Lut6(init), pins)
    }

    pub fn lut6_2(
        &mut self,
        id: &str,
        init: Init64,
        inputs: [&str; 6],
        o6: Option<&str>,
        o5: Option<&str>,
    ) -> &mut Self {
        let outs = [("O6", o6), ("O5", o5)].into_iter().filter_map(|(p, n)| n.map(|n| (p, n)));
        let pins = LUT_INPUT_PINS.into_iter().zip(inputs).chain(outs);
        self.cell(id, CellKind::Lut6_2(init), pins)
    }

    pub fn carry4(
        &mut self,
        id: &str,
        ci: &str,
        s: [&str; 4],
        di: [&str; 4],
        o: [Option<&str>; 4],
        co: [Option<&str>; 4],
    ) -> &mut Self {
        let outs = CARRY4_O_PINS
            .into_iter()
            .zip(o)
            .chain(CARRY4_CO_PINS.into_iter().zip(co))
            .filter_map(|(p, n)| n.map(|n| (p, n)));
        let pins = [("CI", ci)]
            .into_iter()
            .chain(CARRY4_S_PINS.into_iter().zip(s))
            .chain(CARRY4_DI_PINS.into_iter().zip(di))
            .chain(outs);
        self.cell(id, CellKind::Carry4, pins)
    }

    pub fn constant(&mut self, id: &str, value: bool, net: &str) -> &mut Self {
        let kind = if value { CellKind::Const1 } else { CellKind::Const0 };
        self.cell(id, kind, [("O", net)])
    }

    pub fn build(self) -> Netlist {
        self.netlist
    }
}
