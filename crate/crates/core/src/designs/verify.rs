use std::fmt;

use serde::Serialize;

use super::{oracle_mult_width, DesignError};
use crate::netlist::{Netlist, Simulator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub a: u32,
    pub b: u32,
    pub expected: u32,
    pub actual: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub width: usize,
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.passed == self.total
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.all_pass() { "PASS" } else { "FAIL" };
        write!(f, "{}/{} {verdict}", self.passed, self.total)?;
        for fail in &self.failures {
            write!(f, "\n  a={} b={} expected={} actual={}", fail.a, fail.b, fail.expected, fail.actual)?;
        }
        Ok(())
    }
}

/// Positions of `A0..`, `B0..` in the input list and `P0..` in the output list.
struct PortMap {
    a: Vec<usize>,
    b: Vec<usize>,
    p: Vec<usize>,
}

fn port_map(netlist: &Netlist, width: usize) -> Result<PortMap, DesignError> {
    let find = |ports: &[String], name: String| {
        ports
            .iter()
            .position(|p| *p == name)
            .ok_or_else(|| DesignError::PortConvention(format!("missing port `{name}`")))
    };
    if netlist.inputs().len() != 2 * width || netlist.outputs().len() != 2 * width {
        return Err(DesignError::PortConvention(format!(
            "expected {} inputs and {} outputs, found {} and {}",
            2 * width,
            2 * width,
            netlist.inputs().len(),
            netlist.outputs().len()
        )));
    }
    let a = (0..width).map(|i| find(netlist.inputs(), format!("A{i}"))).collect::<Result<_, _>>()?;
    let b = (0..width).map(|i| find(netlist.inputs(), format!("B{i}"))).collect::<Result<_, _>>()?;
    let p = (0..2 * width).map(|i| find(netlist.outputs(), format!("P{i}"))).collect::<Result<_, _>>()?;
    Ok(PortMap { a, b, p })
}

/// Check the `A*`/`B*` inputs and `P*` outputs a `width`-bit multiplier needs.
pub fn port_convention(netlist: &Netlist, width: usize) -> Result<(), DesignError> {
    if !(1..=8).contains(&width) {
        return Err(DesignError::Width(width));
    }
    port_map(netlist, width).map(|_| ())
}

/// Compare the netlist against integer multiplication on every operand pair.
pub fn verify_exhaustive(netlist: &Netlist, width: usize) -> Result<VerificationReport, DesignError> {
    if !(1..=8).contains(&width) {
        return Err(DesignError::Width(width));
    }
    let PortMap { a: a_pos, b: b_pos, p: p_pos } = port_map(netlist, width)?;
    let sim = Simulator::new(netlist)?;
    let limit = 1u32 << width;
    let mut inputs = vec![false; 2 * width];
    let mut report = VerificationReport { width, total: 0, passed: 0, failures: Vec::new() };
    for a in 0..limit {
        for b in 0..limit {
            for i in 0..width {
                inputs[a_pos[i]] = (a >> i) & 1 == 1;
                inputs[b_pos[i]] = (b >> i) & 1 == 1;
            }
            let out = sim.run(&inputs)?;
            let actual = p_pos.iter().enumerate().fold(0u32, |acc, (bit, &pos)| acc | (u32::from(out[pos]) << bit));
            let expected = oracle_mult_width(a, b, width as u32)?;
            report.total += 1;
            if actual == expected {
                report.passed += 1;
            } else {
                report.failures.push(Failure { a, b, expected, actual });
            }
        }
    }
    Ok(report)
}
