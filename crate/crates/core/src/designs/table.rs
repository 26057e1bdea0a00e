//! LUT-by-LUT description of the 11-LUT exact 4-bit multiplier.
//!
//! Each row carries its function(s), the input list exactly as it was
//! published, the binding actually used, and the published INIT constant
//! verbatim. Intermediate symbols (S2, C1..C4, S4) exist only inside a row's
//! function and are expanded inline; S1 and S3 are real nets.

use std::sync::OnceLock;

use serde::Serialize;

use crate::truthtable::{derive_dual_init, derive_init, BoolExpr, Init64, Pin, PinBinding, Tap, TruthTableError};

/// Intermediate definitions, in dependency order.
const INTERMEDIATES: [(&str, &str); 6] = [
    ("S2", "A3&B1 ^ A2&B2 ^ A1&B3"),
    ("C1", "A1&B2 & A2&B1"),
    ("C2", "A3&B1 & A2&B2 | A1&B3 & A2&B2 | A3&B1 & A1&B3"),
    ("C3", "S2 & C1"),
    ("S4", "A3&B2 ^ A2&B3 ^ C2"),
    ("C4", "A3&B2 & A2&B3 | A3&B2 & C2 | A2&B3 & C2"),
];

/// Carry out of the S1 column before the dominance simplification.
pub const C1_UNSIMPLIFIED: &str =
    "(A1&B2 & A2&B1) | (A1&B2 & (A1&B1 & A0&B2 & A2&B0)) | (A2&B1 & (A1&B1 & A0&B2 & A2&B0))";

struct RowEntry {
    lut: usize,
    outputs: &'static [(&'static str, Tap, &'static str)],
    printed_inputs: &'static str,
    inputs: &'static str,
    binding_note: Option<&'static str>,
    published: u64,
}

const ROWS: [RowEntry; 11] = [
    RowEntry {
        lut: 1,
        outputs: &[("P0", Tap::O5, "A0&B0"), ("P1", Tap::O6, "A1&B0 ^ A0&B1")],
        printed_inputs: "A0, B1, B0, A1, 1, 1",
        inputs: "A0, B1, B0, A1, 1, 1",
        binding_note: None,
        published: 0x78887888A0A0A0A0,
    },
    RowEntry {
        lut: 2,
        outputs: &[("P2", Tap::O6, "A2&B0 ^ A1&B1 ^ A0&B2 ^ (A0&B1 & A1&B0)")],
        printed_inputs: "A2, B0, A0, B1, A1, B2",
        inputs: "A2, B0, A0, B1, A1, B2",
        binding_note: None,
        published: 0xF8808080C8000000,
    },
    RowEntry {
        lut: 3,
        outputs: &[("C0", Tap::O6, "A1&B1 & A0&B2 | A2&B0 & A1&B1 | A2&B0 & A0&B2 | (A0&B1 & A1&B0)")],
        printed_inputs: "B2, A2, B0, A0, B1, A1",
        inputs: "B2, A2, B0, A0, B1, A1",
        binding_note: None,
        published: 0x653F6AC06AC06AC0,
    },
    RowEntry {
        lut: 4,
        outputs: &[("S1", Tap::O6, "A1&B2 ^ A2&B1 ^ (A1&B1 & A0&B2 & A2&B0)")],
        printed_inputs: "A1, B2, A2, A0, B1, B0",
        inputs: "A1, B2, A2, A0, B1, B0",
        binding_note: None,
        published: 0xF878888878788888,
    },
    RowEntry {
        lut: 5,
        outputs: &[("Prop0", Tap::O6, "(S1 ^ A3&B0) ^ A0&B3"), ("Gen0", Tap::O5, "(S1 ^ A3&B0) & A0&B3")],
        printed_inputs: "B3, A0, S1, A3, B0, 1",
        inputs: "B3, A0, S1, A3, B0, 1",
        binding_note: None,
        published: 0x8778787808808080,
    },
    RowEntry {
        lut: 6,
        outputs: &[("S3", Tap::O6, "S2 ^ C1")],
        printed_inputs: "B3, A1, B1, A3, B2, A2",
        inputs: "B3, A1, B1, A3, B2, A2",
        binding_note: None,
        published: 0x47B7788878887888,
    },
    RowEntry {
        lut: 7,
        outputs: &[("Prop1", Tap::O6, "S3 ^ (S1 & A3&B0)"), ("Gen1", Tap::O5, "S3 & (S1 & A3&B0)")],
        printed_inputs: "B0, S1, A3, B3, 1, 1",
        inputs: "B0, S1, A3, S3, 1, 1",
        binding_note: Some(
            "printed I3 is `B3`, but both functions read S3 and never B3; I3 is bound to S3 (the output of LUT 6)",
        ),
        published: 0x7F807F8080008000,
    },
    RowEntry {
        lut: 8,
        outputs: &[("Prop2", Tap::O6, "S4 ^ C3")],
        printed_inputs: "A2, B1, B3, A1, B2, A3",
        inputs: "A2, B1, B3, A1, B2, A3",
        binding_note: None,
        published: 0x8000000000000000,
    },
    RowEntry {
        lut: 9,
        outputs: &[("Gen2", Tap::O6, "S4 & C3")],
        printed_inputs: "A2, B1, B3, A1, B2, A3",
        inputs: "A2, B1, B3, A1, B2, A3",
        binding_note: None,
        published: 0x37D760A008A0A0A0,
    },
    RowEntry {
        lut: 10,
        outputs: &[("Prop3", Tap::O6, "A3&B3 ^ C4")],
        printed_inputs: "B2, B1, A3, A1, A2, B3",
        inputs: "B2, B1, A3, A1, A2, B3",
        binding_note: None,
        published: 0xE0A0800000000000,
    },
    RowEntry {
        lut: 11,
        outputs: &[("Gen3", Tap::O6, "A3&B3 & C4")],
        printed_inputs: "A2, B1, B2, A1, B3 A",
        inputs: "A2, B1, B2, A1, B3, A3",
        binding_note: Some(
            "printed input list ends in the garbled entry `B3 A`; the function needs A3 besides the five \
             legible signals, so I5 is bound to A3 (a recovery, not the printed text)",
        ),
        published: 0x175F8080A0000000,
    },
];

fn parse(text: &str) -> BoolExpr {
    text.parse().unwrap_or_else(|e| panic!("built-in expression {text:?}: {e}"))
}

/// Substitute intermediate symbols until only nets remain.
pub fn expand_intermediates(expr: &BoolExpr) -> BoolExpr {
    let mut out = expr.clone();
    for (name, def) in INTERMEDIATES.iter().rev() {
        out = out.substitute(name, &parse(def));
    }
    out
}

pub fn c1_unsimplified() -> BoolExpr {
    parse(C1_UNSIMPLIFIED)
}

pub fn c1_simplified() -> BoolExpr {
    parse(INTERMEDIATES[1].1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LutOutput {
    pub signal: String,
    pub tap: Tap,
    /// Function as written, possibly naming intermediates.
    pub written: String,
    /// Function over nets only.
    pub function: BoolExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LutRow {
    pub lut: usize,
    pub outputs: Vec<LutOutput>,
    pub printed_inputs: String,
    pub pins: [Pin; 6],
    pub binding_note: Option<String>,
    pub published_init: Init64,
}

impl LutRow {
    pub fn is_dual(&self) -> bool {
        self.outputs.len() == 2
    }

    pub fn output(&self, tap: Tap) -> Option<&LutOutput> {
        self.outputs.iter().find(|o| o.tap == tap)
    }

    pub fn cell_id(&self) -> String {
        format!("lut{}", self.lut)
    }

    /// INIT derived from the function column under the resolved binding.
    pub fn derived_init(&self) -> Result<Init64, TruthTableError> {
        match (self.output(Tap::O6), self.output(Tap::O5)) {
            (Some(o6), Some(o5)) => derive_dual_init(&o6.function, &o5.function, &self.pins),
            (Some(only), None) | (None, Some(only)) => {
                derive_init(&only.function, &PinBinding::new(self.pins.clone(), only.tap)?)
            }
            (None, None) => unreachable!("every row has an output"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignTable {
    pub rows: Vec<LutRow>,
}

impl DesignTable {
    pub fn proposed_mult4() -> &'static DesignTable {
        static TABLE: OnceLock<DesignTable> = OnceLock::new();
        TABLE.get_or_init(|| DesignTable {
            rows: ROWS
                .iter()
                .map(|entry| LutRow {
                    lut: entry.lut,
                    outputs: entry
                        .outputs
                        .iter()
                        .map(|&(signal, tap, text)| LutOutput {
                            signal: signal.to_string(),
                            tap,
                            written: parse(text).to_string(),
                            function: expand_intermediates(&parse(text)),
                        })
                        .collect(),
                    printed_inputs: entry.printed_inputs.to_string(),
                    pins: PinBinding::parse(entry.inputs, Tap::O6).expect("built-in binding").pins().clone(),
                    binding_note: entry.binding_note.map(str::to_string),
                    published_init: Init64(entry.published),
                })
                .collect(),
        })
    }

    pub fn row(&self, lut: usize) -> Option<&LutRow> {
        self.rows.iter().find(|r| r.lut == lut)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct OutputJson<'a> {
            signal: &'a str,
            tap: Tap,
            written: &'a str,
            expanded: String,
        }
        #[derive(Serialize)]
        struct RowJson<'a> {
            lut: usize,
            outputs: Vec<OutputJson<'a>>,
            printed_inputs: &'a str,
            binding: Vec<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            binding_note: Option<&'a str>,
            published_init: Init64,
        }
        let rows: Vec<RowJson> = self
            .rows
            .iter()
            .map(|r| RowJson {
                lut: r.lut,
                outputs: r
                    .outputs
                    .iter()
                    .map(|o| OutputJson {
                        signal: &o.signal,
                        tap: o.tap,
                        written: &o.written,
                        expanded: o.function.to_string(),
                    })
                    .collect(),
                printed_inputs: &r.printed_inputs,
                binding: r.pins.iter().map(ToString::to_string).collect(),
                binding_note: r.binding_note.as_deref(),
                published_init: r.published_init,
            })
            .collect();
        let intermediates: serde_json::Map<String, serde_json::Value> =
            INTERMEDIATES.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
        serde_json::json!({
            "fabricmul_design_table": 1,
            "design": "mult4_11lut_2carry4",
            "intermediates": intermediates,
            "rows": rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truthtable::equivalent;

    #[test]
    fn dual_rows_are_one_five_seven() {
        let table = DesignTable::proposed_mult4();
        let dual: Vec<usize> = table.rows.iter().filter(|r| r.is_dual()).map(|r| r.lut).collect();
        assert_eq!(dual, [1, 5, 7]);
        assert_eq!(table.rows.len(), 11);
    }

    #[test]
    fn functions_only_reference_inputs_or_lut_outputs() {
        let table = DesignTable::proposed_mult4();
        let allowed = ["A0", "A1", "A2", "A3", "B0", "B1", "B2", "B3", "S1", "S3"];
        for row in &table.rows {
            for out in &row.outputs {
                for v in out.function.variables() {
                    assert!(allowed.contains(&v.as_str()), "row {} uses {v}", row.lut);
                }
            }
        }
        assert_eq!(table.row(4).unwrap().outputs[0].signal, "S1");
        assert_eq!(table.row(6).unwrap().outputs[0].signal, "S3");
    }

    #[test]
    fn every_function_is_bound() {
        for row in &DesignTable::proposed_mult4().rows {
            row.derived_init().unwrap_or_else(|e| panic!("row {}: {e}", row.lut));
        }
    }

    #[test]
    fn expansion_preserves_meaning() {
        let s3 = expand_intermediates(&parse("S2 ^ C1"));
        let direct = parse("(A3&B1 ^ A2&B2 ^ A1&B3) ^ (A1&B2 & A2&B1)");
        assert!(equivalent(&s3, &direct).unwrap());
        let c3 = expand_intermediates(&parse("C3"));
        assert!(c3.variables().iter().all(|v| v.len() == 2));
    }

    #[test]
    fn json_export_lists_rows() {
        let json = DesignTable::proposed_mult4().to_json();
        assert_eq!(json["rows"].as_array().unwrap().len(), 11);
        assert_eq!(json["rows"][0]["published_init"], "0x78887888A0A0A0A0");
        assert_eq!(json["rows"][6]["binding"][3], "S3");
        assert_eq!(json["rows"][10]["printed_inputs"], "A2, B1, B2, A1, B3 A");
    }
}
