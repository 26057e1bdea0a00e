//! Topological evaluation.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use super::{
    CellKind, Netlist, NetlistError, CARRY4_CO_PINS, CARRY4_DI_PINS, CARRY4_O_PINS, CARRY4_S_PINS, LUT_INPUT_PINS,
};
use crate::primitives::{carry4_eval, lut6_2_eval, lut6_eval};
use crate::truthtable::Init64;

#[derive(Debug, Clone)]
enum Op {
    Lut6 { init: Init64, ins: [usize; 6], o: Option<usize> },
    Lut6_2 { init: Init64, ins: [usize; 6], o6: Option<usize>, o5: Option<usize> },
    Carry4 { ci: usize, s: [usize; 4], di: [usize; 4], o: [Option<usize>; 4], co: [Option<usize>; 4] },
    Const { value: bool, o: Option<usize> },
}

/// A validated netlist flattened into net slots and an ordered op list.
#[derive(Debug, Clone)]
pub struct Simulator {
    net_count: usize,
    inputs: Vec<(String, usize)>,
    outputs: Vec<(String, usize)>,
    ops: Vec<Op>,
}

/// Cell indices in dependency order; ties go to the lowest cell index.
pub(crate) fn topological_order(netlist: &Netlist) -> Option<Vec<usize>> {
    let n = netlist.cells().len();
    let mut fanout = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for (from, to) in netlist.cell_edges() {
        fanout[from].push(to);
        indegree[to] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &j in &fanout[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(Reverse(j));
            }
        }
    }
    (order.len() == n).then_some(order)
}

impl Simulator {
    pub fn new(netlist: &Netlist) -> Result<Self, NetlistError> {
        let report = netlist.validate();
        if !report.is_ok() {
            return Err(NetlistError::Invalid(report));
        }
        let order = topological_order(netlist).expect("validated netlist is acyclic");
        Self::compile(netlist, &order)
    }

    /// Compile with an explicit cell order, which must respect every dependency.
    pub fn with_order(netlist: &Netlist, order: &[usize]) -> Result<Self, NetlistError> {
        let report = netlist.validate();
        if !report.is_ok() {
            return Err(NetlistError::Invalid(report));
        }
        let mut position = vec![usize::MAX; netlist.cells().len()];
        for (pos, &cell) in order.iter().enumerate() {
            if cell >= position.len() || position[cell] != usize::MAX {
                return Err(NetlistError::NotTopological(format!("index {cell}")));
            }
            position[cell] = pos;
        }
        if let Some(missing) = position.iter().position(|&p| p == usize::MAX) {
            return Err(NetlistError::NotTopological(netlist.cells()[missing].id.clone()));
        }
        for (from, to) in netlist.cell_edges() {
            if position[from] >= position[to] {
                return Err(NetlistError::NotTopological(netlist.cells()[to].id.clone()));
            }
        }
        Self::compile(netlist, order)
    }

    fn compile(netlist: &Netlist, order: &[usize]) -> Result<Self, NetlistError> {
        let slot: HashMap<&str, usize> = netlist.nets().iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let ops = order
            .iter()
            .map(|&i| {
                let cell = &netlist.cells()[i];
                let input = |pin: &str| slot[cell.pin(pin).expect("validated: inputs connected")];
                let output = |pin: &str| cell.pin(pin).map(|net| slot[net]);
                match cell.kind {
                    CellKind::Lut6(init) => Op::Lut6 { init, ins: LUT_INPUT_PINS.map(input), o: output("O") },
                    CellKind::Lut6_2(init) => {
                        Op::Lut6_2 { init, ins: LUT_INPUT_PINS.map(input), o6: output("O6"), o5: output("O5") }
                    }
                    CellKind::Carry4 => Op::Carry4 {
                        ci: input("CI"),
                        s: CARRY4_S_PINS.map(input),
                        di: CARRY4_DI_PINS.map(input),
                        o: CARRY4_O_PINS.map(output),
                        co: CARRY4_CO_PINS.map(output),
                    },
                    CellKind::Const0 => Op::Const { value: false, o: output("O") },
                    CellKind::Const1 => Op::Const { value: true, o: output("O") },
                }
            })
            .collect();
        let ports = |names: &[String]| names.iter().map(|n| (n.clone(), slot[n.as_str()])).collect();
        Ok(Simulator {
            net_count: netlist.nets().len(),
            inputs: ports(netlist.inputs()),
            outputs: ports(netlist.outputs()),
            ops,
        })
    }

    pub fn input_names(&self) -> impl Iterator<Item = &str> {
        self.inputs.iter().map(|(n, _)| n.as_str())
    }

    pub fn output_names(&self) -> impl Iterator<Item = &str> {
        self.outputs.iter().map(|(n, _)| n.as_str())
    }

    /// Evaluate with inputs and outputs in port declaration order.
    pub fn run(&self, inputs: &[bool]) -> Result<Vec<bool>, NetlistError> {
        if inputs.len() != self.inputs.len() {
            return Err(NetlistError::InputWidth { expected: self.inputs.len(), found: inputs.len() });
        }
        let mut nets = vec![false; self.net_count];
        for ((_, slot), &value) in self.inputs.iter().zip(inputs) {
            nets[*slot] = value;
        }
        let set = |nets: &mut Vec<bool>, slot: Option<usize>, value: bool| {
            if let Some(slot) = slot {
                nets[slot] = value;
            }
        };
        for op in &self.ops {
            match op {
                Op::Lut6 { init, ins, o } => {
                    let v = lut6_eval(*init, ins.map(|s| nets[s]));
                    set(&mut nets, *o, v);
                }
                Op::Lut6_2 { init, ins, o6, o5 } => {
                    let v = lut6_2_eval(*init, ins.map(|s| nets[s]));
                    set(&mut nets, *o6, v.o6);
                    set(&mut nets, *o5, v.o5);
                }
                Op::Carry4 { ci, s, di, o, co } => {
                    let v = carry4_eval(nets[*ci], s.map(|x| nets[x]), di.map(|x| nets[x]));
                    for i in 0..4 {
                        set(&mut nets, o[i], v.o[i]);
                        set(&mut nets, co[i], v.co[i]);
                    }
                }
                Op::Const { value, o } => set(&mut nets, *o, *value),
            }
        }
        Ok(self.outputs.iter().map(|(_, slot)| nets[*slot]).collect())
    }

    pub fn run_named(&self, inputs: &BTreeMap<String, bool>) -> Result<BTreeMap<String, bool>, NetlistError> {
        if let Some(extra) = inputs.keys().find(|k| !self.inputs.iter().any(|(n, _)| n == *k)) {
            return Err(NetlistError::UnknownInput(extra.clone()));
        }
        let values = self
            .inputs
            .iter()
            .map(|(name, _)| inputs.get(name).copied().ok_or_else(|| NetlistError::MissingInput(name.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let out = self.run(&values)?;
        Ok(self.outputs.iter().map(|(n, _)| n.clone()).zip(out).collect())
    }
}

/// Validate, order and evaluate in one call.
pub fn evaluate(netlist: &Netlist, inputs: &BTreeMap<String, bool>) -> Result<BTreeMap<String, bool>, NetlistError> {
    Simulator::new(netlist)?.run_named(inputs)
}
