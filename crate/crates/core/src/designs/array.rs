//! LUT-only array multiplier used as a baseline.
//!
//! Partial products are one AND per LUT. Rows are accumulated with ripple
//! adders whose sum and carry each take their own LUT; no CARRY4 is used.
//! For width `n` that is `n²` AND LUTs plus `2n(n-1)` adder LUTs.

use std::collections::HashMap;

use super::proposed::CONST1_NET;
use super::DesignError;
use crate::netlist::{Netlist, NetlistBuilder};
use crate::truthtable::{derive_init, BoolExpr, Pin, PinBinding, Tap};

pub const MAX_ARRAY_WIDTH: usize = 8;

struct PendingLut {
    id: String,
    function: BoolExpr,
    inputs: Vec<String>,
    output: String,
}

#[derive(Default)]
struct Pending {
    luts: Vec<PendingLut>,
}

impl Pending {
    fn lut(&mut self, id: String, function: BoolExpr, inputs: &[&String], output: String) -> String {
        self.luts.push(PendingLut {
            id,
            function,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            output: output.clone(),
        });
        output
    }

    /// Sum and carry of two or three bits; returns (sum net, carry net).
    fn adder(&mut self, tag: &str, operands: &[&String]) -> (String, String) {
        let vars: Vec<BoolExpr> = operands.iter().map(|o| BoolExpr::var(o.as_str())).collect();
        let (sum, carry) = match vars.as_slice() {
            [a, b] => (a.clone() ^ b.clone(), a.clone() & b.clone()),
            [a, b, c] => (BoolExpr::Xor(vars.clone()), BoolExpr::majority(a.clone(), b.clone(), c.clone())),
            _ => unreachable!("adders take two or three operands"),
        };
        let s = self.lut(format!("{tag}_sum"), sum, operands, format!("{tag}_s"));
        let c = self.lut(format!("{tag}_carry"), carry, operands, format!("{tag}_c"));
        (s, c)
    }
}

pub fn build_array_mult(width: usize) -> Result<Netlist, DesignError> {
    if !(2..=MAX_ARRAY_WIDTH).contains(&width) {
        return Err(DesignError::Width(width));
    }
    let n = width;
    let mut pending = Pending::default();
    let a = |i: usize| format!("A{i}");
    let b = |j: usize| format!("B{j}");

    let pp: Vec<Vec<String>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let (ai, bj) = (a(i), b(j));
                    let f = BoolExpr::var(ai.as_str()) & BoolExpr::var(bj.as_str());
                    pending.lut(format!("pp_a{i}_b{j}"), f, &[&ai, &bj], format!("pp{i}_{j}"))
                })
                .collect()
        })
        .collect();

    // `acc[k]` has weight j + k while processing row j; `top` has weight j + n.
    let mut product = vec![pp[0][0].clone()];
    let mut acc = pp[0].clone();
    let mut top: Option<String> = None;
    for (j, row) in pp.iter().enumerate().skip(1) {
        let mut sums = Vec::with_capacity(n);
        let mut carry: Option<String> = None;
        for (k, x) in row.iter().enumerate() {
            let y = if k + 1 < n { Some(&acc[k + 1]) } else { top.as_ref() };
            let operands: Vec<&String> = [Some(x), y, carry.as_ref()].into_iter().flatten().collect();
            let (s, c) = pending.adder(&format!("add_r{j}_k{k}"), &operands);
            sums.push(s);
            carry = Some(c);
        }
        product.push(sums[0].clone());
        acc = sums;
        top = carry;
    }
    product.extend(acc.into_iter().skip(1));
    product.extend(top);
    debug_assert_eq!(product.len(), 2 * n);

    let rename: HashMap<String, String> =
        product.iter().enumerate().map(|(k, net)| (net.clone(), format!("P{k}"))).collect();
    let net = |id: &str| rename.get(id).cloned().unwrap_or_else(|| id.to_string());

    let mut builder = NetlistBuilder::new();
    for i in 0..n {
        builder.input(&a(i));
    }
    for j in 0..n {
        builder.input(&b(j));
    }
    for k in 0..2 * n {
        builder.output(&format!("P{k}"));
    }
    for lut in &pending.luts {
        let mut pins: Vec<Pin> = lut.inputs.iter().map(|s| Pin::signal(s.as_str())).collect();
        pins.resize(6, Pin::Tie1);
        let binding = PinBinding::new(pins.try_into().expect("six pins"), Tap::O6)?;
        let init = derive_init(&lut.function, &binding)?;
        let nets: Vec<String> =
            lut.inputs.iter().map(|s| net(s)).chain(std::iter::repeat(CONST1_NET.to_string())).take(6).collect();
        let inputs: [&str; 6] = std::array::from_fn(|i| nets[i].as_str());
        builder.lut6(&lut.id, init, inputs, &net(&lut.output));
    }
    builder.constant("vcc", true, CONST1_NET);
    Ok(builder.build())
}
