//! Abstract delay analysis: LUT levels and weighted critical paths.
//!
//! Arrival times live on nets. Primary inputs arrive at 0. Crossing a net into
//! a cell pin costs the net weight (general or dedicated), then the cell arc
//! costs its primitive weight. Output ports add nothing beyond their net's
//! arrival. Nets reachable only from constants have no arrival.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{CellKind, Netlist, NetlistError};

const TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayModel {
    pub lut6: f64,
    pub lut6_2: f64,
    /// Per CARRY4 stage traversed.
    pub carry4_stage: f64,
    /// Entering a CARRY4 from general routing (S, DI, or a non-dedicated carry-in).
    pub carry4_entry: f64,
    pub net_general: f64,
    pub net_dedicated: f64,
}

impl DelayModel {
    /// Every primitive costs 1, nets are free.
    pub fn unit() -> Self {
        DelayModel {
            lut6: 1.0,
            lut6_2: 1.0,
            carry4_stage: 1.0,
            carry4_entry: 1.0,
            net_general: 0.0,
            net_dedicated: 0.0,
        }
    }

    /// LUTs and general routing dominate; carry stages are cheap and the
    /// hard-wired carry link is free.
    pub fn carry_cheap() -> Self {
        DelayModel {
            lut6: 1.0,
            lut6_2: 1.0,
            carry4_stage: 0.1,
            carry4_entry: 0.5,
            net_general: 1.0,
            net_dedicated: 0.0,
        }
    }

    pub fn zero() -> Self {
        DelayModel {
            lut6: 0.0,
            lut6_2: 0.0,
            carry4_stage: 0.0,
            carry4_entry: 0.0,
            net_general: 0.0,
            net_dedicated: 0.0,
        }
    }

    /// LUTs count one level each; carry logic and nets are free.
    pub fn lut_levels() -> Self {
        DelayModel { lut6: 1.0, lut6_2: 1.0, ..Self::zero() }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "unit" => Some(Self::unit()),
            "carry-cheap" => Some(Self::carry_cheap()),
            "zero" => Some(Self::zero()),
            _ => None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, TimingError> {
        let model: DelayModel = serde_json::from_str(text).map_err(|e| TimingError::BadModel(e.to_string()))?;
        model.check()?;
        Ok(model)
    }

    pub fn check(&self) -> Result<(), TimingError> {
        let weights = [
            ("lut6", self.lut6),
            ("lut6_2", self.lut6_2),
            ("carry4_stage", self.carry4_stage),
            ("carry4_entry", self.carry4_entry),
            ("net_general", self.net_general),
            ("net_dedicated", self.net_dedicated),
        ];
        for (name, w) in weights {
            if !w.is_finite() || w < 0.0 {
                return Err(TimingError::BadModel(format!("{name} = {w} must be finite and non-negative")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimingError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("bad delay model: {0}")]
    BadModel(String),
}

/// One input-pin to output-pin arc through a cell.
struct Arc {
    from: &'static str,
    to: &'static str,
    lut: bool,
    weight: f64,
}

const CARRY_IN: [&str; 9] = ["CI", "S0", "S1", "S2", "S3", "DI0", "DI1", "DI2", "DI3"];
const CARRY_OUT: [&str; 8] = ["O0", "O1", "O2", "O3", "CO0", "CO1", "CO2", "CO3"];

fn arcs(netlist: &Netlist, kind: CellKind, ci_net: Option<&str>, model: &DelayModel) -> Vec<Arc> {
    let mut out = Vec::new();
    match kind {
        CellKind::Lut6(_) => {
            for from in &crate::netlist::LUT_INPUT_PINS {
                out.push(Arc { from, to: "O", lut: true, weight: model.lut6 });
            }
        }
        CellKind::Lut6_2(_) => {
            for (i, from) in crate::netlist::LUT_INPUT_PINS.iter().enumerate() {
                out.push(Arc { from, to: "O6", lut: true, weight: model.lut6_2 });
                if i < 5 {
                    out.push(Arc { from, to: "O5", lut: true, weight: model.lut6_2 });
                }
            }
        }
        CellKind::Carry4 => {
            let ci_dedicated = ci_net.is_some_and(|n| netlist.is_dedicated(n));
            for stage_out in 0..4usize {
                let (o, co) = (CARRY_OUT[stage_out], CARRY_OUT[4 + stage_out]);
                let stages = |first: usize| (stage_out - first + 1) as f64 * model.carry4_stage;
                let ci_weight = if ci_dedicated { 0.0 } else { model.carry4_entry } + stages(0);
                out.push(Arc { from: "CI", to: o, lut: false, weight: ci_weight });
                out.push(Arc { from: "CI", to: co, lut: false, weight: ci_weight });
                for stage_in in 0..=stage_out {
                    let w = model.carry4_entry + stages(stage_in);
                    let (s, di) = (CARRY_IN[1 + stage_in], CARRY_IN[5 + stage_in]);
                    out.push(Arc { from: s, to: o, lut: false, weight: w });
                    out.push(Arc { from: s, to: co, lut: false, weight: w });
                    // DI only feeds the carry leaving its own stage
                    if stage_in < stage_out {
                        out.push(Arc { from: di, to: o, lut: false, weight: w });
                    }
                    out.push(Arc { from: di, to: co, lut: false, weight: w });
                }
            }
        }
        CellKind::Const0 | CellKind::Const1 => {}
    }
    out
}

fn ordered_cells(netlist: &Netlist) -> Result<Vec<usize>, TimingError> {
    let report = netlist.validate();
    if !report.is_ok() {
        return Err(NetlistError::Invalid(report).into());
    }
    Ok(crate::netlist::topological_order(netlist).expect("validated netlist is acyclic"))
}

/// Most LUT cells on any primary-input to output path, per output.
/// Outputs no input reaches report 0.
pub fn logic_depth(netlist: &Netlist) -> Result<BTreeMap<String, usize>, TimingError> {
    let order = ordered_cells(netlist)?;
    let mut depth: HashMap<&str, usize> = netlist.inputs().iter().map(|i| (i.as_str(), 0)).collect();
    let model = DelayModel::zero();
    for &i in &order {
        let cell = &netlist.cells()[i];
        for arc in arcs(netlist, cell.kind, cell.pin("CI"), &model) {
            let (Some(from), Some(to)) = (cell.pin(arc.from), cell.pin(arc.to)) else {
                continue;
            };
            if let Some(&d) = depth.get(from) {
                let d = d + usize::from(arc.lut);
                let entry = depth.entry(to).or_insert(d);
                *entry = (*entry).max(d);
            }
        }
    }
    Ok(netlist.outputs().iter().map(|o| (o.clone(), depth.get(o.as_str()).copied().unwrap_or(0))).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathStep {
    /// `input:<name>` for the start, otherwise the cell id.
    pub node: String,
    /// Primitive name, empty for the start.
    pub kind: String,
    /// Output pin of the cell, empty for the start.
    pub pin: String,
    pub net: String,
    pub arrival: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPath {
    pub output: String,
    pub total: f64,
    pub steps: Vec<PathStep>,
}

impl CriticalPath {
    pub fn cell_ids(&self) -> Vec<&str> {
        self.steps.iter().skip(1).map(|s| s.node.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputTiming {
    pub output: String,
    pub depth: usize,
    pub arrival: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub model: DelayModel,
    pub outputs: Vec<OutputTiming>,
    pub critical_path: Option<CriticalPath>,
}

#[derive(Debug, Clone)]
struct Arrival {
    time: f64,
    /// Cell ids from the start of the path up to this net's driver.
    cells: Vec<String>,
    /// Driving cell index, output pin, and the net the path came in on.
    from: Option<(usize, &'static str, String)>,
}

/// Longer wins; equal lengths go to the lexicographically smaller cell sequence.
fn better(time: f64, cells: &[String], than: &Arrival) -> bool {
    if time > than.time + TIE_EPSILON {
        return true;
    }
    (time - than.time).abs() <= TIE_EPSILON && cells.cmp(&than.cells) == Ordering::Less
}

pub fn critical_path(netlist: &Netlist, model: &DelayModel) -> Result<TimingReport, TimingError> {
    model.check()?;
    let order = ordered_cells(netlist)?;
    let depths = logic_depth(netlist)?;
    let mut arrival: HashMap<String, Arrival> =
        netlist.inputs().iter().map(|i| (i.clone(), Arrival { time: 0.0, cells: Vec::new(), from: None })).collect();

    for &i in &order {
        let cell = &netlist.cells()[i];
        for arc in arcs(netlist, cell.kind, cell.pin("CI"), model) {
            let (Some(from), Some(to)) = (cell.pin(arc.from), cell.pin(arc.to)) else {
                continue;
            };
            let Some(src) = arrival.get(from) else { continue };
            let net_weight = if netlist.is_dedicated(from) { model.net_dedicated } else { model.net_general };
            let time = src.time + net_weight + arc.weight;
            let mut cells = src.cells.clone();
            cells.push(cell.id.clone());
            let candidate = Arrival { time, cells, from: Some((i, arc.to, from.to_string())) };
            match arrival.get(to) {
                Some(current) if !better(time, &candidate.cells, current) => {}
                _ => {
                    arrival.insert(to.to_string(), candidate);
                }
            }
        }
    }

    let outputs: Vec<OutputTiming> = netlist
        .outputs()
        .iter()
        .map(|o| OutputTiming { output: o.clone(), depth: depths[o], arrival: arrival.get(o).map(|a| a.time) })
        .collect();

    let mut worst: Option<(&String, &Arrival)> = None;
    for o in netlist.outputs() {
        if let Some(a) = arrival.get(o) {
            if worst.is_none_or(|(_, w)| better(a.time, &a.cells, w)) {
                worst = Some((o, a));
            }
        }
    }

    let critical_path = worst.map(|(output, end)| {
        let mut steps = Vec::new();
        let mut net = output.clone();
        loop {
            let a = &arrival[&net];
            match &a.from {
                Some((cell, pin, prev)) => {
                    let c = &netlist.cells()[*cell];
                    steps.push(PathStep {
                        node: c.id.clone(),
                        kind: c.kind.name().to_string(),
                        pin: pin.to_string(),
                        net: net.clone(),
                        arrival: a.time,
                    });
                    net = prev.clone();
                }
                None => {
                    steps.push(PathStep {
                        node: format!("input:{net}"),
                        kind: String::new(),
                        pin: String::new(),
                        net: net.clone(),
                        arrival: a.time,
                    });
                    break;
                }
            }
        }
        steps.reverse();
        CriticalPath { output: output.clone(), total: end.time, steps }
    });

    Ok(TimingReport { model: *model, outputs, critical_path })
}

impl fmt::Display for TimingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<8} {:>5} {:>9}", "output", "depth", "arrival")?;
        for o in &self.outputs {
            let arrival = o.arrival.map_or("-".to_string(), |a| format!("{a:.3}"));
            writeln!(f, "{:<8} {:>5} {:>9}", o.output, o.depth, arrival)?;
        }
        match &self.critical_path {
            None => write!(f, "critical path: none (no output is reachable from an input)"),
            Some(path) => {
                writeln!(f, "critical path to {} (total {:.3}):", path.output, path.total)?;
                for (i, step) in path.steps.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    if step.kind.is_empty() {
                        write!(f, "  {:>9.3}  {}", step.arrival, step.node)?;
                    } else {
                        write!(
                            f,
                            "  {:>9.3}  {} ({}.{}) -> {}",
                            step.arrival, step.node, step.kind, step.pin, step.net
                        )?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::NetlistBuilder;
    use crate::truthtable::Init64;

    fn single_lut() -> Netlist {
        let mut b = NetlistBuilder::new();
        b.input("a").output("y").constant("vcc", true, "VCC");
        b.lut6("buf", Init64(0xAAAAAAAAAAAAAAAA), ["a", "VCC", "VCC", "VCC", "VCC", "VCC"], "y");
        b.build()
    }

    #[test]
    fn single_lut_depth_is_one() {
        assert_eq!(logic_depth(&single_lut()).unwrap()["y"], 1);
    }

    #[test]
    fn zero_model_still_names_a_path() {
        let r = critical_path(&single_lut(), &DelayModel::zero()).unwrap();
        let path = r.critical_path.unwrap();
        assert_eq!(path.total, 0.0);
        assert_eq!(path.cell_ids(), ["buf"]);
        assert_eq!(path.steps[0].node, "input:a");
    }

    #[test]
    fn model_json_and_checks() {
        let m = DelayModel::from_json(&serde_json::to_string(&DelayModel::carry_cheap()).unwrap()).unwrap();
        assert_eq!(m, DelayModel::carry_cheap());
        let bad = r#"{"lut6":-1,"lut6_2":1,"carry4_stage":1,"carry4_entry":1,"net_general":0,"net_dedicated":0}"#;
        assert!(matches!(DelayModel::from_json(bad), Err(TimingError::BadModel(_))));
        assert!(DelayModel::from_json(r#"{"lut6":1}"#).is_err());
        assert_eq!(DelayModel::preset("unit"), Some(DelayModel::unit()));
        assert_eq!(DelayModel::preset("fast"), None);
    }

    #[test]
    fn constant_only_outputs_have_no_arrival() {
        let mut b = NetlistBuilder::new();
        b.output("y").constant("one", true, "y");
        let r = critical_path(&b.build(), &DelayModel::unit()).unwrap();
        assert_eq!(r.outputs[0].arrival, None);
        assert_eq!(r.outputs[0].depth, 0);
        assert!(r.critical_path.is_none());
    }

    #[test]
    fn equal_paths_break_ties_by_cell_ids() {
        let mut b = NetlistBuilder::new();
        b.input("a").output("y").constant("vcc", true, "VCC");
        let t = Init64(0xAAAAAAAAAAAAAAAA);
        b.lut6("zz", t, ["a", "VCC", "VCC", "VCC", "VCC", "VCC"], "n1");
        b.lut6("mm", t, ["a", "VCC", "VCC", "VCC", "VCC", "VCC"], "n2");
        b.lut6("out", Init64(0x8888888888888888), ["n1", "n2", "VCC", "VCC", "VCC", "VCC"], "y");
        let r = critical_path(&b.build(), &DelayModel::unit()).unwrap();
        assert_eq!(r.critical_path.unwrap().cell_ids(), ["mm", "out"]);
    }
}
