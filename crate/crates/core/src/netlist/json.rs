//! Versioned JSON persistence.
//!
//! ```json
//! {
//!   "fabricmul_netlist": 1,
//!   "inputs": ["A0", ...],
//!   "outputs": ["P0", ...],
//!   "cells": [{"id": "lut1", "kind": "LUT6_2", "init": "0x78887888A0A0A0A0", "pins": {"I0": "A0", ...}}],
//!   "nets": [{"id": "A0", "driver": "input:A0", "loads": ["lut1.I0"]}, ...]
//! }
//! ```
//!
//! `driver` and `loads` are derived from the cell pin maps and are checked
//! against them on load.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Cell, CellKind, Net, Netlist, NetlistError};
use crate::truthtable::Init64;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum KindName {
    #[serde(rename = "LUT6")]
    Lut6,
    #[serde(rename = "LUT6_2")]
    Lut6_2,
    #[serde(rename = "CARRY4")]
    Carry4,
    #[serde(rename = "CONST0")]
    Const0,
    #[serde(rename = "CONST1")]
    Const1,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetlistFile {
    fabricmul_netlist: u64,
    inputs: Vec<String>,
    outputs: Vec<String>,
    cells: Vec<CellRecord>,
    nets: Vec<NetRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellRecord {
    id: String,
    kind: KindName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    init: Option<Init64>,
    pins: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetRecord {
    id: String,
    driver: Option<String>,
    #[serde(default)]
    loads: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dedicated: bool,
}

#[derive(Deserialize)]
struct Header {
    fabricmul_netlist: u64,
}

pub fn save(netlist: &Netlist) -> String {
    let conn = netlist.connectivity();
    let file = NetlistFile {
        fabricmul_netlist: FORMAT_VERSION,
        inputs: netlist.inputs.clone(),
        outputs: netlist.outputs.clone(),
        cells: netlist
            .cells
            .iter()
            .map(|c| CellRecord {
                id: c.id.clone(),
                kind: match c.kind {
                    CellKind::Lut6(_) => KindName::Lut6,
                    CellKind::Lut6_2(_) => KindName::Lut6_2,
                    CellKind::Carry4 => KindName::Carry4,
                    CellKind::Const0 => KindName::Const0,
                    CellKind::Const1 => KindName::Const1,
                },
                init: c.kind.init(),
                pins: c.pins.clone(),
            })
            .collect(),
        nets: netlist
            .nets
            .iter()
            .map(|n| NetRecord {
                id: n.id.clone(),
                driver: conn.drivers(&n.id).first().map(ToString::to_string),
                loads: conn.loads(&n.id).iter().map(ToString::to_string).collect(),
                dedicated: n.dedicated,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("netlist serialises");
    text.push('\n');
    text
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> NetlistError {
    NetlistError::Schema { path: path.into(), message: message.into() }
}

pub fn load(text: &str) -> Result<Netlist, NetlistError> {
    let header: Header = serde_json::from_str(text).map_err(|e| schema("fabricmul_netlist", e.to_string()))?;
    if header.fabricmul_netlist != FORMAT_VERSION {
        return Err(NetlistError::VersionMismatch { found: header.fabricmul_netlist, expected: FORMAT_VERSION });
    }
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: NetlistFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(path, e.into_inner().to_string())
    })?;

    let mut cells = Vec::with_capacity(file.cells.len());
    for (i, record) in file.cells.into_iter().enumerate() {
        let kind = match (record.kind, record.init) {
            (KindName::Lut6, Some(init)) => CellKind::Lut6(init),
            (KindName::Lut6_2, Some(init)) => CellKind::Lut6_2(init),
            (KindName::Lut6 | KindName::Lut6_2, None) => {
                return Err(schema(format!("cells[{i}].init"), "LUT cells require an init"))
            }
            (_, Some(_)) => return Err(schema(format!("cells[{i}].init"), "only LUT cells take an init")),
            (KindName::Carry4, None) => CellKind::Carry4,
            (KindName::Const0, None) => CellKind::Const0,
            (KindName::Const1, None) => CellKind::Const1,
        };
        cells.push(Cell { id: record.id, kind, pins: record.pins });
    }

    let netlist = Netlist {
        inputs: file.inputs,
        outputs: file.outputs,
        cells,
        nets: file.nets.iter().map(|n| Net { id: n.id.clone(), dedicated: n.dedicated }).collect(),
    };

    let conn = netlist.connectivity();
    for (i, record) in file.nets.iter().enumerate() {
        let driver = conn.drivers(&record.id).first().map(ToString::to_string);
        if record.driver != driver {
            return Err(schema(
                format!("nets[{i}].driver"),
                format!("recorded {:?} but cell pins give {:?}", record.driver, driver),
            ));
        }
        let mut recorded = record.loads.clone();
        let mut derived: Vec<String> = conn.loads(&record.id).iter().map(ToString::to_string).collect();
        recorded.sort();
        derived.sort();
        if recorded != derived {
            return Err(schema(
                format!("nets[{i}].loads"),
                format!("recorded {recorded:?} but cell pins give {derived:?}"),
            ));
        }
    }
    Ok(netlist)
}
